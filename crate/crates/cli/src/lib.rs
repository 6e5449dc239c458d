//! Commands behind the `purefull` binary, returning structured reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use purefull::catalog;
use purefull::expr::{parse_rational, rational_text};
use purefull::families::{self, Sample};
use purefull::manifest::{Expected, Loaded, Manifest, Provenance};
use purefull::purefull::{classify, TypeKind};
use purefull::symplectic::{self, SymplecticStar};
use purefull::KForm;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "purefull", version, about = "Exact Chevalley-Eilenberg cohomology and almost complex structure classification")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Jacobi identity (d² = 0 on 1-forms).
    CheckJacobi { manifest: String },
    /// Betti numbers and class representatives.
    Cohomology {
        manifest: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Integrability, taming, calibration and the pure/full certificate.
    Classify {
        manifest: String,
        #[arg(long)]
        acs: String,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Hard Lefschetz at every degree, with witnesses for failures.
    HardLefschetz {
        manifest: String,
        #[arg(long)]
        omega: String,
    },
    /// Closedness, type and harmonicity of one 2-form.
    Harmonic {
        manifest: String,
        #[arg(long)]
        omega: String,
        #[arg(long)]
        acs: String,
        #[arg(long)]
        form: String,
    },
    /// Evaluate every sample of a deformation family.
    Sweep {
        manifest: String,
        #[arg(long)]
        family: String,
    },
    /// Browse the built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    /// Every stored expectation next to the computed value.
    Show { name: String },
    /// The manifest source, suitable as a command argument.
    Dump { name: String },
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    /// The published value when it differs from the computed one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published: Option<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Witness {
    pub name: String,
    pub form: String,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub entry: String,
    pub command: String,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

/// What a command produced: a report, or verbatim text (`catalog dump`).
#[derive(Debug)]
pub enum Output {
    Report(Report),
    Raw(String),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Raw(s) => s.clone(),
            Output::Report(r) => match format {
                Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
                Format::Text => r.to_text(),
            },
        }
    }
}

impl Report {
    fn new(entry: &str, command: &str) -> Self {
        Report { entry: entry.into(), command: command.into(), verdicts: Vec::new(), witnesses: Vec::new(), notes: Vec::new() }
    }

    fn verdict(&mut self, name: impl Into<String>, value: impl ToString) {
        self.verdicts.push(Verdict { name: name.into(), value: value.to_string(), provenance: None, published: None });
    }

    fn witness(&mut self, name: impl Into<String>, form: &KForm, letter: char) {
        self.witnesses.push(Witness { name: name.into(), form: form.to_text(letter) });
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("entry: {}\ncommand: {}\n", self.entry, self.command);
        if !self.verdicts.is_empty() {
            let width = self.verdicts.iter().map(|v| v.name.len()).max().unwrap_or(0);
            s.push_str("verdicts:\n");
            for v in &self.verdicts {
                let _ = write!(s, "  {:width$}  {}", v.name, v.value);
                match (&v.provenance, &v.published) {
                    (Some(p), Some(publ)) => {
                        let _ = write!(s, "  [{p}; published: {publ}]");
                    }
                    (Some(p), None) => {
                        let _ = write!(s, "  [{p}]");
                    }
                    _ => {}
                }
                s.push('\n');
            }
        }
        if !self.witnesses.is_empty() {
            s.push_str("witnesses:\n");
            for w in &self.witnesses {
                let _ = writeln!(s, "  {}: {}", w.name, w.form);
            }
        }
        if !self.notes.is_empty() {
            s.push_str("notes:\n");
            for n in &self.notes {
                let _ = writeln!(s, "  {n}");
            }
        }
        s
    }

    /// Attaches provenance from the manifest's stored expectations.
    fn cite(&mut self, m: &Manifest, key: &Key) {
        for v in &mut self.verdicts {
            let check = v.name.split('[').next().unwrap_or(&v.name);
            if let Some(e) = m.expected.iter().find(|e| key.matches(e, check)) {
                v.provenance = Some(provenance_name(e.provenance).into());
                if e.published.is_some() && v.value != e.published.as_deref().unwrap_or_default() {
                    v.published = e.published.clone();
                }
                if let Some(note) = &e.note {
                    self.notes.push(format!("{}: {note}", v.name));
                }
            }
        }
    }
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::Published => "published",
        Provenance::Derived => "derived",
        Provenance::Elementary => "elementary",
    }
}

/// The context an expectation must match to cite it.
#[derive(Default)]
struct Key<'a> {
    acs: Option<&'a str>,
    omega: Option<&'a str>,
    form: Option<&'a str>,
    family: Option<&'a str>,
    at: Option<&'a [(String, purefull::Rational)]>,
}

impl Key<'_> {
    fn matches(&self, e: &Expected, check: &str) -> bool {
        let same = |a: &Option<String>, b: Option<&str>| a.as_deref().is_none_or(|a| Some(a) == b);
        let at_matches = match self.at {
            None => e.at.is_empty(),
            Some(params) => {
                e.at.len() == params.len() && e.at.iter().zip(params).all(|(s, (_, v))| parse_rational(s).is_ok_and(|q| &q == v))
            }
        };
        e.check == check
            && same(&e.acs, self.acs)
            && same(&e.omega, self.omega)
            && same(&e.form, self.form)
            && e.family.as_deref() == self.family
            && at_matches
    }
}

#[derive(Debug)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

fn fail(op: &str, what: impl std::fmt::Display, err: impl std::fmt::Display) -> CliError {
    CliError(format!("{op}: {what}: {err}"))
}

/// A manifest and how diagnostics refer to it.
pub struct Source {
    pub manifest: Manifest,
    label: String,
}

impl Source {
    fn load(&self, op: &str) -> Result<Loaded, CliError> {
        self.manifest.load().map_err(|e| fail(op, &self.label, e))
    }

    fn letter(&self, op: &str) -> Result<char, CliError> {
        self.manifest.letter().map_err(|e| fail(op, &self.label, e))
    }
}

/// A file path if one exists, otherwise a catalog entry name.
pub fn read_manifest(op: &str, arg: &str) -> Result<Source, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let label = format!("file {arg}");
        let text = std::fs::read_to_string(path).map_err(|e| fail(op, &label, e))?;
        let manifest = Manifest::from_toml(&text).map_err(|e| fail(op, &label, e))?;
        Ok(Source { label: format!("manifest {} ({arg})", manifest.name), manifest })
    } else {
        let manifest = catalog::load(arg).map_err(|e| fail(op, format!("manifest {arg}"), e))?;
        Ok(Source { label: format!("manifest {arg}"), manifest })
    }
}

fn named<'a, T>(op: &str, kind: &str, map: &'a std::collections::BTreeMap<String, T>, name: &str) -> Result<&'a T, CliError> {
    map.get(name).ok_or_else(|| fail(op, format!("{kind} {name}"), "not defined in the manifest"))
}

fn resolve(op: &str, l: &Loaded, text: &str) -> Result<KForm, CliError> {
    catalog::resolve_form(l, text).map_err(|e| fail(op, format!("form {text}"), e))
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::CheckJacobi { manifest } => check_jacobi(manifest),
        Command::Cohomology { manifest, degree } => cohomology(manifest, *degree),
        Command::Classify { manifest, acs, omega } => classify_cmd(manifest, acs, omega.as_deref()),
        Command::HardLefschetz { manifest, omega } => hard_lefschetz(manifest, omega),
        Command::Harmonic { manifest, omega, acs, form } => harmonic(manifest, omega, acs, form),
        Command::Sweep { manifest, family } => sweep(manifest, family),
        Command::Catalog { action } => catalog_cmd(action),
    }
}

fn check_jacobi(arg: &str) -> Result<Output, CliError> {
    const OP: &str = "check-jacobi";
    let src = read_manifest(OP, arg)?;
    let m = &src.manifest;
    let lie = m.lie().map_err(|e| fail(OP, &src.label, e))?;
    let mut r = Report::new(&m.name, OP);
    r.verdict("jacobi", "ok");
    r.cite(m, &Key::default());
    for eq in lie.equations() {
        r.notes.push(eq);
    }
    Ok(Output::Report(r))
}

fn cohomology(arg: &str, degree: Option<usize>) -> Result<Output, CliError> {
    const OP: &str = "cohomology";
    let src = read_manifest(OP, arg)?;
    let m = &src.manifest;
    let l = src.load(OP)?;
    let letter = src.letter(OP)?;
    let n = l.lie.dim();
    let degrees: Vec<usize> = match degree {
        Some(k) if k > n => return Err(fail(OP, format!("degree {k}"), format!("exceeds the dimension {n}"))),
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let mut r = Report::new(&m.name, OP);
    if degree.is_none() {
        r.verdict("betti", l.lie.betti_numbers().iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
    }
    for k in degrees {
        r.verdict(format!("b{k}"), l.lie.betti(k));
        for (i, f) in l.lie.cohomology(k).representatives().iter().enumerate() {
            r.witness(format!("H{k}[{i}]"), f, letter);
        }
    }
    r.cite(m, &Key::default());
    Ok(Output::Report(r))
}

fn classify_cmd(arg: &str, acs: &str, omega: Option<&str>) -> Result<Output, CliError> {
    const OP: &str = "classify";
    let src = read_manifest(OP, arg)?;
    let m = &src.manifest;
    let l = src.load(OP)?;
    let letter = src.letter(OP)?;
    let j = named(OP, "acs", &l.acs, acs)?;
    let w = omega.map(|o| named(OP, "form", &l.forms, o)).transpose()?;
    let c = classify(&l.lie, j, w).map_err(|e| fail(OP, format!("acs {acs}"), e))?;
    let mut r = Report::new(&m.name, OP);
    r.verdict("integrable", c.integrable);
    if let Some(t) = c.tamed {
        r.verdict("tamed", t);
    }
    if let Some(t) = c.calibrated {
        r.verdict("calibrated", t);
    }
    let pf = &c.pure_full;
    r.verdict("pure", pf.pure);
    r.verdict("full", pf.full);
    r.verdict("h2_dim", pf.h2_dim);
    r.verdict("h11_dim", pf.h11.dim());
    r.verdict("h2002_dim", pf.h2002.dim());
    r.verdict("h2_is_h11", pf.h11.dim() == pf.h2_dim && pf.h2002.dim() == 0);
    if let Some(h) = c.hard_lefschetz {
        r.verdict("hard_lefschetz", if h { "holds" } else { "fails" });
    }
    if let Some(p) = &c.parallelizable {
        r.verdict("parallelizable", p.holds);
    }
    r.verdict("unimodular", c.unimodular);
    r.verdict("currents", c.currents.label());
    if let Some(f) = &pf.intersection_witness {
        r.witness("intersection", f, letter);
    }
    if let Some(f) = &pf.missing_witness {
        r.witness("missing", f, letter);
    }
    for (i, f) in pf.h11_representatives().iter().enumerate() {
        r.witness(format!("h11[{i}]"), f, letter);
    }
    for (i, f) in pf.h2002_representatives().iter().enumerate() {
        r.witness(format!("h2002[{i}]"), f, letter);
    }
    for h in c.harmonic.iter().flatten() {
        let kind = match h.kind {
            TypeKind::Invariant => "h11",
            TypeKind::AntiInvariant => "h2002",
        };
        match &h.representative {
            Some(f) => r.witness(format!("harmonic {kind} [{}]", h.class.to_text(letter)), f, letter),
            None => r.notes.push(format!("no harmonic {kind} representative for [{}]", h.class.to_text(letter))),
        }
    }
    r.notes.push(format!("currents: {}", c.currents));
    r.notes.push(pf.identification.note().to_string());
    r.cite(m, &Key { acs: Some(acs), omega, ..Key::default() });
    Ok(Output::Report(r))
}

fn hard_lefschetz(arg: &str, omega: &str) -> Result<Output, CliError> {
    const OP: &str = "hard-lefschetz";
    let src = read_manifest(OP, arg)?;
    let m = &src.manifest;
    let l = src.load(OP)?;
    let letter = src.letter(OP)?;
    let w = named(OP, "form", &l.forms, omega)?;
    let verdicts = symplectic::hard_lefschetz(&l.lie, w).map_err(|e| fail(OP, format!("form {omega}"), e))?;
    let mut r = Report::new(&m.name, OP);
    r.verdict("hard_lefschetz", catalog::lefschetz_summary(&verdicts));
    for v in &verdicts {
        r.verdict(format!("k={}", v.k), format!("{} (rank {} of {} -> {})", if v.holds { "iso" } else { "not iso" }, v.rank, v.source_dim, v.target_dim));
        if let Some(text) = v.witness_text(letter) {
            r.witnesses.push(Witness { name: format!("kernel k={}", v.k), form: text });
        }
        if let Some(f) = &v.cokernel_witness {
            r.witness(format!("cokernel k={}", v.k), f, letter);
        }
    }
    r.cite(m, &Key { omega: Some(omega), ..Key::default() });
    Ok(Output::Report(r))
}

fn harmonic(arg: &str, omega: &str, acs: &str, form: &str) -> Result<Output, CliError> {
    const OP: &str = "harmonic";
    let src = read_manifest(OP, arg)?;
    let m = &src.manifest;
    let l = src.load(OP)?;
    let letter = src.letter(OP)?;
    let w = named(OP, "form", &l.forms, omega)?;
    let j = named(OP, "acs", &l.acs, acs)?;
    let f = resolve(OP, &l, form)?;
    let g = symplectic::metric_from(w, j).map_err(|e| fail(OP, format!("acs {acs}"), e))?;
    let star = SymplecticStar::new(w).map_err(|e| fail(OP, format!("form {omega}"), e))?;
    let closed = l.lie.d(&f).is_zero();
    let mut r = Report::new(&m.name, OP);
    r.verdict("closed", closed);
    r.verdict("type", catalog::type_label(j, &f));
    let g_harmonic = g.is_harmonic(&l.lie, &f);
    r.verdict("harmonic", if g_harmonic { catalog::type_label(j, &f) } else { "not harmonic" });
    r.verdict("symplectic_harmonic", star.is_harmonic(&l.lie, &f));
    r.witness("form", &f, letter);
    r.witness("star", &g.star(&f), letter);
    r.cite(m, &Key { acs: Some(acs), omega: Some(omega), form: Some(form), ..Key::default() });
    Ok(Output::Report(r))
}

fn sample_name(s: &Sample) -> String {
    s.params.iter().map(|(k, v)| format!("{k}={}", rational_text(v))).collect::<Vec<_>>().join(", ")
}

fn opt(v: Option<bool>) -> Option<String> {
    v.map(|b| b.to_string())
}

fn sweep(arg: &str, family: &str) -> Result<Output, CliError> {
    const OP: &str = "sweep";
    let src = read_manifest(OP, arg)?;
    let m = &src.manifest;
    let l = src.load(OP)?;
    let letter = src.letter(OP)?;
    let spec = named(OP, "family", &l.families, family)?;
    let samples = families::sweep(Some(&l.lie), spec).map_err(|e| fail(OP, format!("family {family}"), e))?;
    let mut r = Report::new(&m.name, OP);
    for s in &samples {
        let at = sample_name(s);
        let mut local = Report::new(&m.name, OP);
        match &s.result {
            Err(e) => local.verdict("constructed", e),
            Ok(v) => {
                let pf = v.pure_full.as_ref();
                let rows = [
                    ("tamed", opt(v.tamed)),
                    ("calibrated", opt(v.calibrated)),
                    ("integrable", opt(v.integrable)),
                    ("pure", pf.map(|c| c.pure.to_string())),
                    ("full", pf.map(|c| c.full.to_string())),
                    ("h2_is_h11", opt(v.h2_is_h11())),
                    ("matches_printed", v.matches_printed.clone().map(|x| x.map_or_else(|e| e, |b| b.to_string()))),
                    ("coframe_matches", v.coframe_matches.clone().map(|x| x.map_or_else(|e| e, |b| b.to_string()))),
                    ("alpha_norm_sq", v.alpha_norm_sq.as_ref().map(rational_text)),
                ];
                for (name, value) in rows {
                    if let Some(value) = value {
                        local.verdict(name, value);
                    }
                }
                for (i, f) in v.acs.coframe().iter().enumerate() {
                    r.witness(format!("coframe[{at}][{i}]"), f, letter);
                }
            }
        }
        local.cite(m, &Key { family: Some(family), at: Some(&s.params), ..Key::default() });
        for mut v in local.verdicts {
            v.name = format!("{}[{at}]", v.name);
            r.verdicts.push(v);
        }
        r.notes.extend(local.notes.into_iter().map(|n| format!("[{at}] {n}")));
        for c in &s.violated {
            r.notes.push(format!("[{at}] constraint {c} violated"));
        }
        if s.constraint_agrees() == Some(false) {
            r.notes.push(format!("[{at}] taming verdict disagrees with the constraint"));
        }
    }
    Ok(Output::Report(r))
}

fn catalog_cmd(action: &CatalogAction) -> Result<Output, CliError> {
    const OP: &str = "catalog";
    match action {
        CatalogAction::List => {
            let mut r = Report::new("catalog", "catalog list");
            for name in catalog::list() {
                let m = catalog::load(name).map_err(|e| fail(OP, format!("entry {name}"), e))?;
                r.verdict(name, format!("dim {}: {}", m.dimension, m.description));
            }
            Ok(Output::Report(r))
        }
        CatalogAction::Show { name } => {
            let m = catalog::load(name).map_err(|e| fail(OP, format!("entry {name}"), e))?;
            let mut r = Report::new(&m.name, "catalog show");
            for v in catalog::verify(&m) {
                let holds = v.holds();
                r.verdicts.push(Verdict {
                    name: v.label(),
                    value: v.actual_text(),
                    provenance: Some(provenance_name(v.expected.provenance).into()),
                    published: v.expected.published.clone(),
                });
                if !holds {
                    r.notes.push(format!("{}: stored value {} differs", v.label(), v.expected.value));
                }
                if let Some(n) = &v.expected.note {
                    r.notes.push(format!("{}: {n}", v.label()));
                }
            }
            r.notes.insert(0, m.description.clone());
            Ok(Output::Report(r))
        }
        CatalogAction::Dump { name } => catalog::source(name).map(|s| Output::Raw(s.to_string())).map_err(|e| fail(OP, format!("entry {name}"), e)),
    }
}
