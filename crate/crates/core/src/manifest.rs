//! TOML manifests: a Lie algebra with named forms, almost complex structures, families
//! and expected verdicts.
//!
//! ```toml
//! name = "nil3_A"
//! dimension = 4
//!
//! [structure]
//! e3 = "e14"
//! e4 = "e12"
//!
//! [forms]
//! omega = "e13 + e24"
//!
//! [acs.J0]
//! coframe = ["e1 + i*e3", "e2 + i*e4"]
//! ```
//!
//! Structure keys name the basis 1-form whose differential is given; missing keys are closed.
//! ACS matrices act on coframe coefficients unless `action = "vector"`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::acs::Acs;
use crate::error::{Error, Result};
use crate::expr::{self, parse, parse_row, Constraint, Env};
use crate::families::{Check, Deformation, FamilyKind, FamilySpec, MatrixSpace};
use crate::form::KForm;
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Rational;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub dimension: usize,
    #[serde(default = "default_basis")]
    pub basis: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default)]
    pub structure: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub acs: BTreeMap<String, AcsSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub family: BTreeMap<String, FamilyManifest>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<Expected>,
}

fn default_basis() -> String {
    "e".into()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcsSpec {
    /// (1,0)-coframe expressions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coframe: Vec<String>,
    /// Matrix rows, comma separated.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrix: Vec<String>,
    /// `"coframe"` (default) or `"vector"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyManifest {
    pub kind: String,
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    /// Rows of the metric for `j_alpha`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub metric: Vec<String>,
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub printed_coframe: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the literature this catalog reproduces.
    Published,
    /// Obtained by an independent hand derivation.
    Derived,
    /// Immediate from the definitions.
    Elementary,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
            Provenance::Elementary => "elementary",
        })
    }
}

/// One expected verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub at: Vec<String>,
    pub value: String,
    /// A differing published claim, kept for reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<String>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A manifest with every expression evaluated.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub manifest: Manifest,
    pub lie: LieAlgebra,
    pub forms: BTreeMap<String, KForm>,
    pub acs: BTreeMap<String, Acs>,
    pub families: BTreeMap<String, FamilySpec>,
}

fn in_section(section: &str, e: Error) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Manifest(format!("{section}: at column {pos}: {msg}")),
        other => other,
    }
}

fn space(action: &Option<String>) -> Result<MatrixSpace> {
    match action.as_deref() {
        None | Some("coframe") => Ok(MatrixSpace::Coframe),
        Some("vector") => Ok(MatrixSpace::Vector),
        Some(other) => Err(Error::UnknownName { kind: "action".into(), name: other.into() }),
    }
}

impl Manifest {
    pub fn from_toml(text: &str) -> Result<Self> {
        let m: Manifest = toml::from_str(text).map_err(|e| Error::Manifest(e.message().to_string()))?;
        m.letter()?;
        Ok(m)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    pub fn letter(&self) -> Result<char> {
        match self.basis.as_str() {
            "e" => Ok('e'),
            "f" => Ok('f'),
            other => Err(Error::Manifest(format!("basis must be \"e\" or \"f\", found {other:?}"))),
        }
    }

    fn env(&self) -> Result<Env> {
        Ok(Env::new(self.dimension, self.letter()?))
    }

    /// Structure equations `de^i`, indexed from 0.
    pub fn structure_forms(&self) -> Result<Vec<KForm>> {
        let n = self.dimension;
        let letter = self.letter()?;
        let mut de = vec![KForm::zero(n, 2); n];
        let env = self.env()?;
        for (key, text) in &self.structure {
            let idx = key
                .strip_prefix(letter)
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|i| (1..=n).contains(i))
                .ok_or_else(|| Error::Manifest(format!("structure: key {key:?} is not a basis 1-form {letter}1..{letter}{n}")))?;
            de[idx - 1] = parse(text).and_then(|a| a.eval_form(&env, 2)).map_err(|e| in_section(&format!("structure.{key}"), e))?;
        }
        Ok(de)
    }

    /// The Lie algebra, with the Jacobi identity checked.
    pub fn lie(&self) -> Result<LieAlgebra> {
        LieAlgebra::with_letter(self.structure_forms()?, self.letter()?)
    }

    pub fn form(&self, name: &str) -> Result<KForm> {
        let text = self.forms.get(name).ok_or_else(|| Error::UnknownName { kind: "form".into(), name: name.into() })?;
        parse(text).and_then(|a| a.eval_any_form(&self.env()?)).map_err(|e| in_section(&format!("forms.{name}"), e))
    }

    pub fn acs_named(&self, name: &str) -> Result<Acs> {
        let spec = self.acs.get(name).ok_or_else(|| Error::UnknownName { kind: "acs".into(), name: name.into() })?;
        let section = format!("acs.{name}");
        let env = self.env()?;
        match (spec.coframe.is_empty(), spec.matrix.is_empty()) {
            (false, true) => {
                let forms = spec
                    .coframe
                    .iter()
                    .map(|t| parse(t).and_then(|a| a.eval_form(&env, 1)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| in_section(&section, e))?;
                Acs::from_coframe(&forms)
            }
            (true, false) => {
                let m = matrix_rows(&spec.matrix, &env, self.dimension).map_err(|e| in_section(&section, e))?;
                match space(&spec.action)? {
                    MatrixSpace::Vector => Acs::new(m),
                    MatrixSpace::Coframe => Acs::from_coframe_matrix(&m),
                }
            }
            _ => Err(Error::Manifest(format!("{section}: give exactly one of coframe or matrix"))),
        }
    }

    pub fn family_named(&self, name: &str) -> Result<FamilySpec> {
        let f = self.family.get(name).ok_or_else(|| Error::UnknownName { kind: "family".into(), name: name.into() })?;
        let section = format!("family.{name}");
        let ctx = |e| in_section(&section, e);
        let kind = FamilyKind::parse(&f.kind)?;
        let rows = |r: &[String]| r.iter().map(|s| parse_row(s)).collect::<Result<Vec<_>>>();
        let rationals = |v: &[String]| v.iter().map(|s| expr::parse_rational(s)).collect::<Result<Vec<_>>>();
        let deformation = match (kind, &f.alpha, f.l.is_empty()) {
            (FamilyKind::JAlpha, Some(a), true) => Deformation::Alpha(parse(a).map_err(ctx)?),
            (FamilyKind::AudinConjugation | FamilyKind::AudinTamed, None, false) => Deformation::L(rows(&f.l).map_err(ctx)?),
            _ => return Err(Error::Manifest(format!("{section}: j_alpha needs alpha, audin kinds need l"))),
        };
        let metric = if f.metric.is_empty() { None } else { Some(matrix_rows(&f.metric, &self.env()?, self.dimension).map_err(ctx)?) };
        let checks = if f.checks.is_empty() { Check::ALL.to_vec() } else { f.checks.iter().map(|c| Check::parse(c)).collect::<Result<_>>()? };
        Ok(FamilySpec {
            name: name.into(),
            kind,
            space: space(&f.action)?,
            dim: self.dimension,
            letter: self.letter()?,
            base: self.acs_named(&f.base)?,
            omega: f.omega.as_deref().map(|w| self.form(w)).transpose()?,
            metric,
            params: f.params.clone(),
            grid: f.grid.iter().map(|a| rationals(a)).collect::<Result<_>>().map_err(ctx)?,
            points: f.points.iter().map(|a| rationals(a)).collect::<Result<_>>().map_err(ctx)?,
            deformation,
            constraints: f.constraints.iter().map(|c| Constraint::parse(c)).collect::<Result<_>>().map_err(ctx)?,
            printed: if f.printed.is_empty() { None } else { Some(rows(&f.printed).map_err(ctx)?) },
            printed_coframe: if f.printed_coframe.is_empty() {
                None
            } else {
                Some(f.printed_coframe.iter().map(|s| parse(s)).collect::<Result<_>>().map_err(ctx)?)
            },
            checks,
        })
    }

    /// Evaluates everything; fails on the first error (including a Jacobi violation).
    pub fn load(&self) -> Result<Loaded> {
        let lie = self.lie()?;
        let forms = self.forms.keys().map(|k| Ok((k.clone(), self.form(k)?))).collect::<Result<_>>()?;
        let acs = self.acs.keys().map(|k| Ok((k.clone(), self.acs_named(k)?))).collect::<Result<_>>()?;
        let families = self.family.keys().map(|k| Ok((k.clone(), self.family_named(k)?))).collect::<Result<_>>()?;
        Ok(Loaded { manifest: self.clone(), lie, forms, acs, families })
    }
}

fn matrix_rows(rows: &[String], env: &Env, n: usize) -> Result<Matrix<Rational>> {
    if rows.len() != n {
        return Err(Error::Manifest(format!("matrix has {} rows, expected {n}", rows.len())));
    }
    let mut out = Vec::with_capacity(n);
    for r in rows {
        let cells = parse_row(r)?;
        if cells.len() != n {
            return Err(Error::Manifest(format!("row {r:?} has {} entries, expected {n}", cells.len())));
        }
        out.push(cells.iter().map(|c| c.eval_rational(env)).collect::<Result<Vec<_>>>()?);
    }
    Ok(Matrix::from_rows(out))
}

/// Rows of a rational matrix in manifest syntax.
pub fn matrix_to_rows(m: &Matrix<Rational>) -> Vec<String> {
    m.to_rows().iter().map(|r| r.iter().map(expr::rational_text).collect::<Vec<_>>().join(", ")).collect()
}
