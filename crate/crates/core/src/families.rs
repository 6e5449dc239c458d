//! Deformation families: the Audin chart around `J₀` and the `J_α` deformations.
//!
//! The matrix constructors are space-agnostic algebra. A [`FamilySpec`] records whether its
//! matrices act on vectors or on coframe coefficients (the default, matching most displays).

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::acs::Acs;
use crate::error::{Error, Result};
use crate::expr::{Ast, Constraint, Env};
use crate::form::KForm;
use crate::lie::LieAlgebra;
use crate::linalg::{Matrix, Subspace};
use crate::purefull::{self, PureFullCertificate};
use crate::scalar::Rational;
use crate::symplectic;

fn require_anticommuting(j0: &Matrix<Rational>, l: &Matrix<Rational>) -> Result<()> {
    if l.mul(j0) != j0.mul(l).neg() {
        return Err(Error::NonAnticommuting);
    }
    Ok(())
}

/// `(I+L) J₀ (I+L)⁻¹` for symmetric `L` anticommuting with `J₀`.
pub fn audin_conjugation(j0: &Matrix<Rational>, l: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    if !l.is_symmetric() {
        return Err(Error::NonSymmetric("L".into()));
    }
    require_anticommuting(j0, l)?;
    let p = Matrix::identity(l.rows()).add(l);
    let pinv = p.inverse().ok_or_else(|| Error::Singular("I+L".into()))?;
    Ok(p.mul(j0).mul(&pinv))
}

/// `J₀ (I+L) (I−L)⁻¹` for `L` anticommuting with `J₀`.
pub fn audin_tamed(j0: &Matrix<Rational>, l: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    require_anticommuting(j0, l)?;
    let id = Matrix::identity(l.rows());
    let minv = id.sub(l).inverse().ok_or_else(|| Error::Singular("I-L".into()))?;
    Ok(j0.mul(&id.add(l)).mul(&minv))
}

/// `(J + J₀)⁻¹ (J − J₀)`, the inverse of [`audin_tamed`].
pub fn audin_chart(j: &Matrix<Rational>, j0: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    let inv = j.add(j0).inverse().ok_or_else(|| Error::Singular("J+J0".into()))?;
    Ok(inv.mul(&j.sub(j0)))
}

/// `K_α = G⁻¹A`, i.e. `g(X, K_α Y) = α(X, Y)`, for `α` anti-invariant under `J`.
pub fn k_alpha(g: &Matrix<Rational>, alpha: &KForm, j: &Acs) -> Result<Matrix<Rational>> {
    if alpha.degree() != 2 || !alpha.is_real() || !j.is_anti_invariant(alpha) {
        return Err(Error::NotAntiInvariant);
    }
    let ginv = g.inverse().ok_or(Error::Degenerate)?;
    let k = ginv.mul(&alpha.to_skew_matrix());
    debug_assert!(j.matrix().mul(&k) == k.mul(j.matrix()).neg());
    Ok(k)
}

/// `(I + J K_α)⁻¹ J (I + J K_α)`, acting on vectors.
pub fn j_alpha(j: &Acs, g: &Matrix<Rational>, alpha: &KForm) -> Result<Acs> {
    let k = k_alpha(g, alpha, j)?;
    let p = Matrix::identity(j.dim()).add(&j.matrix().mul(&k));
    let pinv = p.inverse().ok_or_else(|| Error::Singular("I+JK".into()))?;
    Acs::new(pinv.mul(j.matrix()).mul(&p))
}

/// `s` with `K² = −s·I`, when `K²` is scalar (always the case in dimension 4).
pub fn alpha_norm_sq(k: &Matrix<Rational>) -> Option<Rational> {
    let k2 = k.mul(k);
    let s = -k2[(0, 0)].clone();
    (k2 == Matrix::identity(k.rows()).scale(&-s.clone())).then_some(s)
}

/// `((1−s) J − 2K) / (1+s)`.
pub fn j_alpha_closed_form(j: &Matrix<Rational>, k: &Matrix<Rational>, s: &Rational) -> Matrix<Rational> {
    let one = Rational::one();
    let den = &one + s;
    j.scale(&((&one - s) / &den)).sub(&k.scale(&(Rational::from_integer(2.into()) / den)))
}

/// `g`-adjoint `G⁻¹ Mᵀ G`.
pub fn adjoint(g: &Matrix<Rational>, m: &Matrix<Rational>) -> Matrix<Rational> {
    g.inverse().expect("metric is invertible").mul(&m.transpose()).mul(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKind {
    AudinConjugation,
    AudinTamed,
    JAlpha,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::AudinConjugation => "audin_conjugation",
            FamilyKind::AudinTamed => "audin_tamed",
            FamilyKind::JAlpha => "j_alpha",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "audin_conjugation" => Ok(FamilyKind::AudinConjugation),
            "audin_tamed" => Ok(FamilyKind::AudinTamed),
            "j_alpha" => Ok(FamilyKind::JAlpha),
            _ => Err(Error::UnknownName { kind: "family kind".into(), name: s.into() }),
        }
    }
}

/// Which way the family's matrices act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MatrixSpace {
    Vector,
    #[default]
    Coframe,
}

impl MatrixSpace {
    fn to_acs(self, m: Matrix<Rational>) -> Result<Acs> {
        match self {
            MatrixSpace::Vector => Acs::new(m),
            MatrixSpace::Coframe => Acs::from_coframe_matrix(&m),
        }
    }

    fn of(self, j: &Acs) -> Matrix<Rational> {
        match self {
            MatrixSpace::Vector => j.matrix().clone(),
            MatrixSpace::Coframe => j.coframe_matrix(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Tamed,
    Calibrated,
    Integrable,
    PureFull,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Tamed, Check::Calibrated, Check::Integrable, Check::PureFull];

    pub fn name(self) -> &'static str {
        match self {
            Check::Tamed => "tamed",
            Check::Calibrated => "calibrated",
            Check::Integrable => "integrable",
            Check::PureFull => "pure_full",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownName { kind: "check".into(), name: s.into() })
    }
}

/// The parametrised object deformed by the family.
#[derive(Clone, Debug)]
pub enum Deformation {
    /// Rows of `L`.
    L(Vec<Vec<Ast>>),
    /// The 2-form `α`.
    Alpha(Ast),
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub name: String,
    pub kind: FamilyKind,
    pub space: MatrixSpace,
    pub dim: usize,
    pub letter: char,
    pub base: Acs,
    pub omega: Option<KForm>,
    /// Gram matrix for `J_α`; defaults to `ω(·, J₀·)`.
    pub metric: Option<Matrix<Rational>>,
    pub params: Vec<String>,
    /// Values per parameter, combined as a Cartesian product.
    pub grid: Vec<Vec<Rational>>,
    /// Extra explicit parameter tuples.
    pub points: Vec<Vec<Rational>>,
    pub deformation: Deformation,
    pub constraints: Vec<Constraint>,
    /// Displayed matrix to compare entry by entry, in `space`.
    pub printed: Option<Vec<Vec<Ast>>>,
    /// Displayed (1,0)-coframe to compare as a span.
    pub printed_coframe: Option<Vec<Ast>>,
    pub checks: Vec<Check>,
}

/// Outcome of one parameter tuple.
#[derive(Clone, Debug)]
pub struct Sample {
    pub params: Vec<(String, Rational)>,
    /// Constraints that fail at this tuple.
    pub violated: Vec<String>,
    pub result: std::result::Result<SampleVerdicts, String>,
}

impl Sample {
    pub fn satisfies_constraints(&self) -> bool {
        self.violated.is_empty()
    }

    /// Constraint holds exactly when the construction succeeds and is tamed.
    pub fn constraint_agrees(&self) -> Option<bool> {
        let ok = match &self.result {
            Err(_) => false,
            Ok(v) => v.tamed?,
        };
        Some(ok == self.satisfies_constraints())
    }
}

#[derive(Clone, Debug)]
pub struct SampleVerdicts {
    /// The constructed structure, in the family's matrix space.
    pub matrix: Matrix<Rational>,
    pub acs: Acs,
    pub tamed: Option<bool>,
    pub calibrated: Option<bool>,
    pub integrable: Option<bool>,
    pub pure_full: Option<PureFullCertificate>,
    pub matches_printed: Option<std::result::Result<bool, String>>,
    pub coframe_matches: Option<std::result::Result<bool, String>>,
    /// `‖α‖²` for `J_α` families in dimension 4.
    pub alpha_norm_sq: Option<Rational>,
}

impl SampleVerdicts {
    /// `H² = h11`.
    pub fn h2_is_h11(&self) -> Option<bool> {
        self.pure_full.as_ref().map(|c| c.h11.dim() == c.h2_dim)
    }
}

impl FamilySpec {
    pub fn env(&self, values: &[Rational]) -> Env {
        let mut env = Env::new(self.dim, self.letter);
        env.params = self.params.iter().cloned().zip(values.iter().cloned()).collect::<BTreeMap<_, _>>();
        env
    }

    /// Grid tuples in lexicographic order followed by the explicit points.
    pub fn samples(&self) -> Result<Vec<Vec<Rational>>> {
        let k = self.params.len();
        if !self.grid.is_empty() && self.grid.len() != k {
            return Err(Error::Manifest(format!("family {}: grid has {} axes for {} parameters", self.name, self.grid.len(), k)));
        }
        let mut out: Vec<Vec<Rational>> = Vec::new();
        if !self.grid.is_empty() {
            out.push(Vec::new());
            for axis in &self.grid {
                if axis.is_empty() {
                    return Err(Error::Manifest(format!("family {}: empty grid axis", self.name)));
                }
                out = out.into_iter().flat_map(|p| axis.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
            }
        }
        for p in &self.points {
            if p.len() != k {
                return Err(Error::Manifest(format!("family {}: point has {} values for {} parameters", self.name, p.len(), k)));
            }
            out.push(p.clone());
        }
        Ok(out)
    }

    fn eval_matrix(&self, rows: &[Vec<Ast>], env: &Env) -> Result<Matrix<Rational>> {
        if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Manifest(format!("family {}: matrix must be {}x{}", self.name, self.dim, self.dim)));
        }
        let rows = rows.iter().map(|r| r.iter().map(|a| a.eval_rational(env)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows))
    }

    fn metric(&self) -> Result<Matrix<Rational>> {
        if let Some(g) = &self.metric {
            return Ok(g.clone());
        }
        let w = self.omega.as_ref().ok_or_else(|| Error::Manifest(format!("family {}: j_alpha needs a metric or omega", self.name)))?;
        Ok(symplectic::omega_j(w, &self.base))
    }

    /// The structure at one parameter tuple, and `‖α‖²` where defined.
    pub fn construct(&self, values: &[Rational]) -> Result<(Acs, Option<Rational>)> {
        let env = self.env(values);
        match (&self.kind, &self.deformation) {
            (FamilyKind::JAlpha, Deformation::Alpha(ast)) => {
                let alpha = ast.eval_form(&env, 2)?;
                let g = self.metric()?;
                let k = k_alpha(&g, &alpha, &self.base)?;
                let s = if self.dim == 4 { alpha_norm_sq(&k) } else { None };
                Ok((j_alpha(&self.base, &g, &alpha)?, s))
            }
            (FamilyKind::AudinConjugation | FamilyKind::AudinTamed, Deformation::L(rows)) => {
                let l = self.eval_matrix(rows, &env)?;
                let j0 = self.space.of(&self.base);
                let m = if self.kind == FamilyKind::AudinConjugation { audin_conjugation(&j0, &l)? } else { audin_tamed(&j0, &l)? };
                Ok((self.space.to_acs(m)?, None))
            }
            _ => Err(Error::Manifest(format!("family {}: {} needs {}", self.name, self.kind.name(), if self.kind == FamilyKind::JAlpha { "alpha" } else { "l" }))),
        }
    }

    /// Evaluates a single parameter tuple.
    pub fn evaluate(&self, lie: Option<&LieAlgebra>, values: &[Rational]) -> Sample {
        let env = self.env(values);
        let violated = self
            .constraints
            .iter()
            .filter(|c| !c.holds(&env).unwrap_or(false))
            .map(|c| c.text.clone())
            .collect();
        let result = self.verdicts(lie, values, &env).map_err(|e| e.to_string());
        Sample { params: self.params.iter().cloned().zip(values.iter().cloned()).collect(), violated, result }
    }

    fn verdicts(&self, lie: Option<&LieAlgebra>, values: &[Rational], env: &Env) -> Result<SampleVerdicts> {
        let (acs, s) = self.construct(values)?;
        let matrix = self.space.of(&acs);
        let wants = |c: Check| self.checks.contains(&c);
        let omega = self.omega.as_ref();
        let matches_printed = self.printed.as_ref().map(|rows| self.eval_matrix(rows, env).map(|p| p == matrix).map_err(|e| e.to_string()));
        let coframe_matches = self.printed_coframe.as_ref().map(|forms| {
            let forms = forms.iter().map(|a| a.eval_form(env, 1)).collect::<Result<Vec<_>>>().map_err(|e| e.to_string())?;
            Ok(same_span(&forms, acs.coframe()))
        });
        Ok(SampleVerdicts {
            tamed: omega.filter(|_| wants(Check::Tamed)).map(|w| symplectic::is_tamed(w, &acs)),
            calibrated: omega.filter(|_| wants(Check::Calibrated)).map(|w| symplectic::is_calibrated(w, &acs)),
            integrable: lie.filter(|_| wants(Check::Integrable)).map(|l| acs.is_integrable(l)),
            pure_full: lie.filter(|_| wants(Check::PureFull)).map(|l| purefull::check_pure_full(l, &acs)),
            matches_printed,
            coframe_matches,
            alpha_norm_sq: s,
            matrix,
            acs,
        })
    }
}

/// Complex span equality of two lists of 1-forms.
pub fn same_span(a: &[KForm], b: &[KForm]) -> bool {
    let n = a.first().or(b.first()).map_or(0, KForm::dim);
    let (Ok(sa), Ok(sb)) = (Subspace::span(n, 1, a), Subspace::span(n, 1, b)) else {
        return false;
    };
    sa.is_within(&sb) && sb.is_within(&sa)
}

/// Evaluates every sample (concurrently), returned in the order of [`FamilySpec::samples`].
pub fn sweep(lie: Option<&LieAlgebra>, spec: &FamilySpec) -> Result<Vec<Sample>> {
    let samples = spec.samples()?;
    for name in spec.constraints.iter().flat_map(Constraint::params).chain(match &spec.deformation {
        Deformation::Alpha(a) => a.params(),
        Deformation::L(rows) => rows.iter().flatten().flat_map(Ast::params).collect(),
    }) {
        if !spec.params.contains(&name) {
            return Err(Error::UnknownName { kind: "parameter".into(), name });
        }
    }
    Ok(samples.par_iter().map(|v| spec.evaluate(lie, v)).collect())
}

/// True when no sample flags a disagreement between its constraints and its taming verdict.
pub fn constraints_consistent(samples: &[Sample]) -> bool {
    samples.iter().all(|s| s.constraint_agrees() != Some(false))
}
