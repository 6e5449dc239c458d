//! Built-in examples with expected verdicts.
//!
//! Each entry is an embedded manifest. [`verify`] recomputes every expected verdict;
//! the recomputed values are what golden files record.

use crate::error::{Error, Result};
use crate::expr::{self, parse};
use crate::form::KForm;
use crate::linalg::{sparse_from_dense, Span};
use crate::manifest::{Expected, Loaded, Manifest};
use crate::purefull::{self, PureFullCertificate};
use crate::symplectic;

const ENTRIES: [(&str, &str); 11] = [
    ("iwasawa", include_str!("../manifests/iwasawa.toml")),
    ("kodaira_thurston", include_str!("../manifests/kodaira_thurston.toml")),
    ("nakamura", include_str!("../manifests/nakamura.toml")),
    ("nakamura_as_printed", include_str!("../manifests/nakamura_as_printed.toml")),
    ("nil3_A", include_str!("../manifests/nil3_A.toml")),
    ("nil3_B", include_str!("../manifests/nil3_B.toml")),
    ("nil6_np", include_str!("../manifests/nil6_np.toml")),
    ("sol3xR", include_str!("../manifests/sol3xR.toml")),
    ("solsol6", include_str!("../manifests/solsol6.toml")),
    ("torus4", include_str!("../manifests/torus4.toml")),
    ("torus6", include_str!("../manifests/torus6.toml")),
];

pub fn list() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// The manifest text exactly as embedded.
pub fn source(name: &str) -> Result<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).ok_or_else(|| Error::UnknownEntry(name.into()))
}

pub fn load(name: &str) -> Result<Manifest> {
    Manifest::from_toml(source(name)?)
}

/// One expectation with the value the engine computes for it.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub expected: Expected,
    pub actual: std::result::Result<String, String>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.actual.as_deref() == Ok(self.expected.value.as_str())
    }

    /// `check[acs=J, omega=omega, at=(1/4, 1/2)]`.
    pub fn label(&self) -> String {
        let e = &self.expected;
        let mut parts = Vec::new();
        for (k, v) in [("acs", &e.acs), ("omega", &e.omega), ("form", &e.form), ("family", &e.family)] {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        if !e.at.is_empty() {
            parts.push(format!("at=({})", e.at.join(", ")));
        }
        if parts.is_empty() {
            e.check.clone()
        } else {
            format!("{}[{}]", e.check, parts.join(", "))
        }
    }

    pub fn actual_text(&self) -> String {
        match &self.actual {
            Ok(v) => v.clone(),
            Err(e) => format!("error: {e}"),
        }
    }
}

/// Recomputes every expectation of a manifest.
pub fn verify(m: &Manifest) -> Vec<Verdict> {
    let loaded = m.load();
    m.expected
        .iter()
        .map(|e| {
            let actual = if e.check == "jacobi" {
                Ok(match m.lie() {
                    Ok(_) => "ok".to_string(),
                    Err(Error::JacobiViolation { .. }) => "violation".to_string(),
                    Err(other) => return Verdict { expected: e.clone(), actual: Err(other.to_string()) },
                })
            } else {
                match &loaded {
                    Ok(l) => evaluate(l, e).map_err(|err| err.to_string()),
                    Err(err) => Err(err.to_string()),
                }
            };
            Verdict { expected: e.clone(), actual }
        })
        .collect()
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn need<'a>(field: &'a Option<String>, what: &str) -> Result<&'a str> {
    field.as_deref().ok_or_else(|| Error::Manifest(format!("expectation needs `{what}`")))
}

fn form_list(l: &Loaded, text: &str, degree: usize) -> Result<Vec<KForm>> {
    let letter = l.manifest.letter()?;
    text.split(';').map(|t| expr::parse_form(t.trim(), l.lie.dim(), letter, degree)).collect()
}

/// Span of cohomology-class coordinates, or `None` if some form is not closed.
fn class_span(l: &Loaded, forms: &[KForm], degree: usize) -> Result<Option<(Span<usize>, usize)>> {
    let h = l.lie.cohomology(degree);
    let mut coords = Vec::new();
    for f in forms {
        match h.coordinates(f) {
            Ok(c) => coords.push(sparse_from_dense(&c)),
            Err(Error::NotClosed(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    let span = Span::new(coords.iter());
    Ok(Some((span, h.dim())))
}

fn spans_equal(a: &Span<usize>, b: &Span<usize>) -> bool {
    a.is_within(b) && b.is_within(a)
}

/// Echoes `text` when the listed forms are closed and their classes form a basis of `target`.
fn basis_check(l: &Loaded, text: &str, degree: usize, target: Option<&Span<usize>>) -> Result<String> {
    let forms = form_list(l, text, degree)?;
    let Some((span, hdim)) = class_span(l, &forms, degree)? else {
        return Ok("not closed".into());
    };
    if span.dim() != forms.len() {
        return Ok("classes are dependent".into());
    }
    let ok = match target {
        Some(t) => spans_equal(&span, t),
        None => span.dim() == hdim,
    };
    Ok(if ok { text.to_string() } else { format!("classes span {} of {}", span.dim(), target.map_or(hdim, Span::dim)) })
}

fn certificate(l: &Loaded, e: &Expected) -> Result<PureFullCertificate> {
    let j = acs(l, e)?;
    Ok(purefull::check_pure_full(&l.lie, j))
}

fn acs<'a>(l: &'a Loaded, e: &Expected) -> Result<&'a crate::acs::Acs> {
    let name = need(&e.acs, "acs")?;
    l.acs.get(name).ok_or_else(|| Error::UnknownName { kind: "acs".into(), name: name.into() })
}

fn omega<'a>(l: &'a Loaded, e: &Expected) -> Result<&'a KForm> {
    let name = need(&e.omega, "omega")?;
    l.forms.get(name).ok_or_else(|| Error::UnknownName { kind: "form".into(), name: name.into() })
}

/// The text form of a Hard Lefschetz verdict: `holds` or `fails at k=1,2`.
pub fn lefschetz_summary(verdicts: &[symplectic::LefschetzVerdict]) -> String {
    let failing: Vec<String> = verdicts.iter().filter(|v| !v.holds).map(|v| v.k.to_string()).collect();
    if failing.is_empty() {
        "holds".into()
    } else {
        format!("fails at k={}", failing.join(","))
    }
}

/// `(1,1)`, `(2,0)+(0,2)` or `mixed` for a real 2-form.
pub fn type_label(j: &crate::acs::Acs, f: &KForm) -> &'static str {
    if j.is_invariant(f) {
        "(1,1)"
    } else if j.is_anti_invariant(f) {
        "(2,0)+(0,2)"
    } else {
        "mixed"
    }
}

/// The engine's value for one expectation.
pub fn evaluate(l: &Loaded, e: &Expected) -> Result<String> {
    let lie = &l.lie;
    let letter = l.manifest.letter()?;
    if let Some(fam) = &e.family {
        return family_value(l, fam, e);
    }
    Ok(match e.check.as_str() {
        "jacobi" => "ok".into(),
        "betti" => lie.betti_numbers().iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
        "nilpotent" => flag(lie.is_nilpotent()),
        "completely_solvable" => flag(lie.is_completely_solvable_heuristic()),
        "unimodular" => flag(lie.is_unimodular()),
        "identification" => lie.identification().note().into(),
        "h11_basis" => basis_check(l, &e.value, 2, Some(&certificate(l, e)?.h11))?,
        "h2002_basis" => basis_check(l, &e.value, 2, Some(&certificate(l, e)?.h2002))?,
        c if c.starts_with('h') && c.ends_with("_basis") && c[1..c.len() - 6].parse::<usize>().is_ok() => {
            basis_check(l, &e.value, c[1..c.len() - 6].parse().expect("checked"), None)?
        }
        "classes_equal" | "classes_proportional" => {
            let forms = form_list(l, &e.value, 2)?;
            let Some((span, _)) = class_span(l, &forms, 2)? else {
                return Ok("not closed".into());
            };
            let h = lie.cohomology(2);
            let mut ok = span.dim() == 1 && forms.iter().all(|f| !h.is_exact(f));
            if e.check == "classes_equal" {
                for w in forms.windows(2) {
                    ok = ok && h.same_class(&w[0], &w[1])?;
                }
            }
            if ok {
                e.value.clone()
            } else {
                "classes differ or vanish".into()
            }
        }
        "integrable" => flag(acs(l, e)?.is_integrable(lie)),
        "tamed" => flag(symplectic::is_tamed(omega(l, e)?, acs(l, e)?)),
        "calibrated" => flag(symplectic::is_calibrated(omega(l, e)?, acs(l, e)?)),
        "pure" => flag(certificate(l, e)?.pure),
        "full" => flag(certificate(l, e)?.full),
        "h2_is_h11" => {
            let c = certificate(l, e)?;
            flag(c.h11.dim() == c.h2_dim)
        }
        "intersection_witness" => certificate(l, e)?.intersection_witness.map_or_else(|| "none".into(), |w| w.to_text(letter)),
        "parallelizable" => flag(purefull::complex_parallelizable_certificate(lie, acs(l, e)?)?.holds),
        "hard_lefschetz" => lefschetz_summary(&symplectic::hard_lefschetz(lie, omega(l, e)?)?),
        "lefschetz_witness" => symplectic::hard_lefschetz(lie, omega(l, e)?)?
            .iter()
            .find_map(|v| v.witness_text(letter))
            .unwrap_or_else(|| "none".into()),
        "harmonic" => {
            let j = acs(l, e)?;
            let metric = symplectic::metric_from(omega(l, e)?, j)?;
            let name = need(&e.form, "form")?;
            let f = l.forms.get(name).ok_or_else(|| Error::UnknownName { kind: "form".into(), name: name.into() })?;
            if metric.is_harmonic(lie, f) {
                type_label(j, f).into()
            } else {
                "not harmonic".into()
            }
        }
        "currents" => purefull::classify(lie, acs(l, e)?, Some(omega(l, e)?))?.currents.label().into(),
        other => return Err(Error::UnknownName { kind: "check".into(), name: other.into() }),
    })
}

fn family_value(l: &Loaded, fam: &str, e: &Expected) -> Result<String> {
    let spec = l.families.get(fam).ok_or_else(|| Error::UnknownName { kind: "family".into(), name: fam.into() })?;
    let values = e.at.iter().map(|s| expr::parse_rational(s)).collect::<Result<Vec<_>>>()?;
    if values.len() != spec.params.len() {
        return Err(Error::Manifest(format!("`at` has {} values for {} parameters", values.len(), spec.params.len())));
    }
    let sample = spec.evaluate(Some(&l.lie), &values);
    if e.check == "constraint" {
        return Ok(if sample.satisfies_constraints() { "satisfied" } else { "violated" }.into());
    }
    let v = match (&sample.result, e.check.as_str()) {
        (Err(msg), "constructed") => return Ok(msg.clone()),
        (Ok(_), "constructed") => return Ok("ok".into()),
        (Err(msg), _) => return Err(Error::Manifest(format!("sample not constructed: {msg}"))),
        (Ok(v), _) => v,
    };
    let missing = || Error::Manifest(format!("check `{}` not enabled for family {fam}", e.check));
    let pf = || v.pure_full.as_ref().ok_or_else(missing);
    let cmp = |r: &Option<std::result::Result<bool, String>>| match r {
        None => Err(missing()),
        Some(Ok(b)) => Ok(flag(*b)),
        Some(Err(msg)) => Ok(format!("not evaluable: {msg}")),
    };
    Ok(match e.check.as_str() {
        "tamed" => flag(v.tamed.ok_or_else(missing)?),
        "calibrated" => flag(v.calibrated.ok_or_else(missing)?),
        "integrable" => flag(v.integrable.ok_or_else(missing)?),
        "pure" => flag(pf()?.pure),
        "full" => flag(pf()?.full),
        "h2_is_h11" => flag(v.h2_is_h11().ok_or_else(missing)?),
        "matches_printed" => cmp(&v.matches_printed)?,
        "coframe_matches" => cmp(&v.coframe_matches)?,
        "alpha_norm_sq" => v.alpha_norm_sq.as_ref().map_or_else(|| "undefined".into(), expr::rational_text),
        other => return Err(Error::UnknownName { kind: "family check".into(), name: other.into() }),
    })
}

/// Parses a single named form of a loaded manifest, or an inline expression.
pub fn resolve_form(l: &Loaded, name_or_expr: &str) -> Result<KForm> {
    if let Some(f) = l.forms.get(name_or_expr) {
        return Ok(f.clone());
    }
    let env = expr::Env::new(l.lie.dim(), l.manifest.letter()?);
    parse(name_or_expr)?.eval_any_form(&env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for name in list() {
            let m = load(name).unwrap();
            assert_eq!(m.name, name);
        }
        assert!(matches!(load("klein"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn torus_expectations() {
        let m = load("torus4").unwrap();
        for v in verify(&m) {
            assert!(v.holds(), "{}: {}", v.label(), v.actual_text());
        }
    }

    #[test]
    fn printed_nakamura_fails_jacobi() {
        let m = load("nakamura_as_printed").unwrap();
        assert!(matches!(m.lie(), Err(Error::JacobiViolation { .. })));
        assert!(verify(&m).iter().all(Verdict::holds));
    }
}
