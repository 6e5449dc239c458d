//! C∞-pure and C∞-full almost complex structures at the invariant level.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::acs::Acs;
use crate::error::{Error, Result};
use crate::form::{KForm, MultiIndex};
use crate::lie::{Identification, LieAlgebra};
use crate::linalg::{sparse_from_dense, LinearImage, Span, SparseVec, Subspace};
use crate::scalar::CScalar;
use crate::symplectic::{self, metric_from};

/// Closed real `J`-invariant and `J`-anti-invariant 2-forms.
pub fn closed_type_spaces(lie: &LieAlgebra, j: &Acs) -> (Subspace, Subspace) {
    let n = lie.dim();
    let monos: Vec<KForm> = MultiIndex::all(n, 2).into_iter().map(|m| KForm::from_terms(n, 2, [(m, CScalar::from_int(1))])).collect();
    let inv: Vec<KForm> = monos.iter().map(|m| j.pi11_real(m)).collect();
    let anti: Vec<KForm> = monos.iter().map(|m| j.pi2002_real(m)).collect();
    let closed_in = |forms: &[KForm]| {
        let s = Subspace::span(n, 2, forms).expect("2-forms");
        let images: Vec<KForm> = s.basis().iter().map(|f| lie.d(f)).collect();
        s.kernel_of(&images)
    };
    (closed_in(&inv), closed_in(&anti))
}

fn class_span(lie: &LieAlgebra, forms: &[KForm]) -> Span<usize> {
    let h2 = lie.cohomology(2);
    let coords: Vec<SparseVec<usize>> = forms.iter().map(|f| sparse_from_dense(&h2.coordinates(f).expect("closed"))).collect();
    Span::new(coords.iter())
}

/// Images in `H²` of closed invariant and closed anti-invariant forms, as
/// coordinate subspaces in the representative basis of `H²`.
pub fn h_type_subspaces(lie: &LieAlgebra, j: &Acs) -> (Span<usize>, Span<usize>) {
    let (z11, z2002) = closed_type_spaces(lie, j);
    (class_span(lie, &z11.basis()), class_span(lie, &z2002.basis()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureFullCertificate {
    pub h2_dim: usize,
    pub h2_representatives: Vec<KForm>,
    pub h11: Span<usize>,
    pub h2002: Span<usize>,
    pub pure: bool,
    pub full: bool,
    /// A nonzero class in `h11 ∩ h2002`.
    pub intersection_witness: Option<KForm>,
    /// A representative class outside `h11 + h2002`.
    pub missing_witness: Option<KForm>,
    pub identification: Identification,
}

impl PureFullCertificate {
    fn forms(&self, s: &Span<usize>) -> Vec<KForm> {
        let n = self.h2_representatives.first().map_or(0, KForm::dim);
        s.basis()
            .iter()
            .map(|v| {
                let mut f = KForm::zero(n, 2);
                for (i, c) in v {
                    f.axpy(c, &self.h2_representatives[*i]);
                }
                f
            })
            .collect()
    }

    /// Representatives of a basis of `h11`.
    pub fn h11_representatives(&self) -> Vec<KForm> {
        self.forms(&self.h11)
    }

    pub fn h2002_representatives(&self) -> Vec<KForm> {
        self.forms(&self.h2002)
    }
}

pub fn check_pure_full(lie: &LieAlgebra, j: &Acs) -> PureFullCertificate {
    let h2 = lie.cohomology(2);
    let (h11, h2002) = h_type_subspaces(lie, j);
    let inter = h11.intersect(&h2002);
    let sum = h11.sum(&h2002);
    let reps = h2.representatives();
    let intersection_witness = inter.basis().first().map(|v| h2.from_coordinates(&crate::linalg::dense_from_sparse(v, reps.len())));
    let missing_witness = (0..reps.len())
        .find(|&i| !sum.contains(&SparseVec::from([(i, CScalar::from_int(1))])))
        .map(|i| reps[i].clone());
    PureFullCertificate {
        h2_dim: h2.dim(),
        h2_representatives: reps,
        pure: inter.dim() == 0,
        full: sum.dim() == h2.dim(),
        h11,
        h2002,
        intersection_witness,
        missing_witness,
        identification: lie.identification(),
    }
}

/// Harmonic representative search for one class.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicClass {
    /// `(1,1)` or `(2,0)+(0,2)`.
    pub kind: TypeKind,
    pub class: KForm,
    pub representative: Option<KForm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeKind {
    Invariant,
    AntiInvariant,
}

impl fmt::Display for TypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeKind::Invariant => "(1,1)",
            TypeKind::AntiInvariant => "(2,0)+(0,2)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Class(usize),
    Form(MultiIndex),
}

/// For each basis class of `h11` and `h2002`, a closed and `g_J`-co-closed
/// representative of the same type, if one exists.
pub fn harmonic_criterion(lie: &LieAlgebra, j: &Acs, omega: &KForm) -> Result<Vec<HarmonicClass>> {
    let g = metric_from(omega, j)?;
    let h2 = lie.cohomology(2);
    let cert = check_pure_full(lie, j);
    let (z11, z2002) = closed_type_spaces(lie, j);
    let n = lie.dim();
    let mut jobs = Vec::new();
    for (kind, span, z) in [(TypeKind::Invariant, &cert.h11, &z11), (TypeKind::AntiInvariant, &cert.h2002, &z2002)] {
        for v in span.basis() {
            jobs.push((kind, v, z));
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(kind, v, z)| {
            let basis = z.basis();
            let cols: Vec<SparseVec<Key>> = basis
                .iter()
                .map(|f| {
                    let mut col: SparseVec<Key> = SparseVec::new();
                    for (i, c) in h2.coordinates(f).expect("closed").into_iter().enumerate() {
                        if !c.is_zero() {
                            col.insert(Key::Class(i), c);
                        }
                    }
                    for (m, c) in lie.d(&g.star(f)).into_terms() {
                        col.insert(Key::Form(m), c);
                    }
                    col
                })
                .collect();
            let target: SparseVec<Key> = v.iter().map(|(i, c)| (Key::Class(*i), c.clone())).collect();
            let img = LinearImage::new(cols.iter());
            let representative = img.preimage(&target).map(|combo| crate::linalg::combine(&basis, &combo, n, 2));
            let class = h2.from_coordinates(&crate::linalg::dense_from_sparse(&v, h2.dim()));
            HarmonicClass { kind, class, representative }
        })
        .collect())
}

/// Dimensions of `π_{1,1}𝒵²/π_{1,1}ℬ²` and `π_{(2,0),(0,2)}𝒵²/π_{(2,0),(0,2)}ℬ²`
/// with invariant `𝒵²`, `ℬ²`.
pub fn quotient_projection_spaces(lie: &LieAlgebra, j: &Acs) -> (usize, usize) {
    let n = lie.dim();
    let z = lie.closed(2).basis();
    let b = lie.exact(2).basis();
    let dim = |f: &dyn Fn(&KForm) -> KForm, forms: &[KForm]| {
        let img: Vec<KForm> = forms.iter().map(f).collect();
        Subspace::span(n, 2, &img).expect("2-forms").dim()
    };
    let p11 = |a: &KForm| j.pi11_real(a);
    let p2002 = |a: &KForm| j.pi2002_real(a);
    (dim(&p11, &z) - dim(&p11, &b), dim(&p2002, &z) - dim(&p2002, &b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelizableReport {
    pub holds: bool,
    /// Indices of coframe elements whose differential has a non-(2,0) part.
    pub failing: Vec<usize>,
    pub z11: usize,
    pub z2002: usize,
    pub b2002: usize,
    pub b2: usize,
}

impl ParallelizableReport {
    /// `H² ≅ 𝒵^{1,1} ⊕ 𝒵^{(2,0),(0,2)}/ℬ^{(2,0),(0,2)}`, as a dimension count.
    pub fn decomposition_matches(&self) -> bool {
        self.z11 + self.z2002 - self.b2002 == self.b2
    }
}

/// `d θ^r` of pure type (2,0) for the whole (1,0)-coframe.
pub fn complex_parallelizable_certificate(lie: &LieAlgebra, j: &Acs) -> Result<ParallelizableReport> {
    if !j.is_integrable(lie) {
        return Err(Error::NotIntegrable);
    }
    let failing: Vec<usize> = j
        .coframe()
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            let dt = lie.d(t);
            !dt.is_zero() && j.pure_type(&dt) != Some((2, 0))
        })
        .map(|(i, _)| i)
        .collect();
    let (z11, z2002) = closed_type_spaces(lie, j);
    let n = lie.dim();
    let anti: Vec<KForm> = MultiIndex::all(n, 2)
        .into_iter()
        .map(|m| j.pi2002_real(&KForm::from_terms(n, 2, [(m, CScalar::from_int(1))])))
        .collect();
    let b2002 = lie.exact(2).intersect(&Subspace::span(n, 2, &anti).expect("2-forms")).dim();
    Ok(ParallelizableReport { holds: failing.is_empty(), failing, z11: z11.dim(), z2002: z2002.dim(), b2002, b2: lie.betti(2) })
}

/// Which result certifies the currents-level verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Harmonic representatives of pure type exist for every class (automatic in dimension 4).
    Harmonic,
    HardLefschetz,
    ComplexParallelizable,
    /// Calibrated implies pure.
    Calibrated,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Harmonic => "harmonic-representative theorem",
            Theorem::HardLefschetz => "Hard Lefschetz theorem",
            Theorem::ComplexParallelizable => "complex-parallelizable theorem",
            Theorem::Calibrated => "calibrated-implies-pure theorem",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurrentsVerdict {
    CertifiedPureFull(Theorem),
    CertifiedPure(Theorem),
    Unknown,
}

impl fmt::Display for CurrentsVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurrentsVerdict::CertifiedPureFull(t) => write!(f, "certified-pure-full ({t})"),
            CurrentsVerdict::CertifiedPure(t) => write!(f, "certified-pure ({t})"),
            CurrentsVerdict::Unknown => f.write_str("unknown"),
        }
    }
}

impl CurrentsVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CurrentsVerdict::CertifiedPureFull(_) => "certified-pure-full",
            CurrentsVerdict::CertifiedPure(_) => "certified-pure",
            CurrentsVerdict::Unknown => "unknown",
        }
    }
}

/// Every verdict about one `(L, J, ω)` triple.
#[derive(Clone, Debug)]
pub struct Classification {
    pub integrable: bool,
    pub tamed: Option<bool>,
    pub calibrated: Option<bool>,
    pub pure_full: PureFullCertificate,
    pub harmonic: Option<Vec<HarmonicClass>>,
    pub hard_lefschetz: Option<bool>,
    pub parallelizable: Option<ParallelizableReport>,
    pub currents: CurrentsVerdict,
    pub unimodular: bool,
}

pub fn classify(lie: &LieAlgebra, j: &Acs, omega: Option<&KForm>) -> Result<Classification> {
    let integrable = j.is_integrable(lie);
    let pure_full = check_pure_full(lie, j);
    let parallelizable = if integrable { Some(complex_parallelizable_certificate(lie, j)?) } else { None };
    let mut tamed = None;
    let mut calibrated = None;
    let mut harmonic = None;
    let mut hard_lefschetz = None;
    if let Some(w) = omega {
        tamed = Some(symplectic::is_tamed(w, j));
        let cal = symplectic::is_calibrated(w, j);
        calibrated = Some(cal);
        if cal {
            harmonic = Some(harmonic_criterion(lie, j, w)?);
        }
        if lie.d(w).is_zero() && symplectic::is_nondegenerate(w)? {
            hard_lefschetz = Some(symplectic::hard_lefschetz(lie, w)?.iter().all(|v| v.holds));
        }
    }
    let smooth_pf = pure_full.pure && pure_full.full;
    let harmonic_ok = harmonic.as_ref().is_some_and(|h| h.iter().all(|c| c.representative.is_some()));
    let currents = if calibrated == Some(true) && smooth_pf && (lie.dim() == 4 || harmonic_ok) {
        CurrentsVerdict::CertifiedPureFull(Theorem::Harmonic)
    } else if calibrated == Some(true) && smooth_pf && hard_lefschetz == Some(true) {
        CurrentsVerdict::CertifiedPureFull(Theorem::HardLefschetz)
    } else if parallelizable.as_ref().is_some_and(|p| p.holds) {
        CurrentsVerdict::CertifiedPure(Theorem::ComplexParallelizable)
    } else if calibrated == Some(true) && smooth_pf {
        CurrentsVerdict::CertifiedPure(Theorem::Calibrated)
    } else {
        CurrentsVerdict::Unknown
    };
    Ok(Classification {
        integrable,
        tamed,
        calibrated,
        pure_full,
        harmonic,
        hard_lefschetz,
        parallelizable,
        currents,
        unimodular: lie.is_unimodular(),
    })
}
