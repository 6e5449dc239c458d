//! Lie algebras given by structure equations, and their Chevalley–Eilenberg complex.
//!
//! Convention: `dξ(X, Y) = −ξ([X, Y])`, so `de^k = −Σ_{i<j} c_ij^k e^{ij}` and
//! `[e_i, e_j] = Σ_k c_ij^k e_k`.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::{KForm, MultiIndex};
use crate::linalg::{quotient_basis, LinearImage, Matrix, Span, SparseVec, Subspace};
use crate::scalar::{int, CScalar, Rational};

/// Largest supported dimension: the differential is cached per monomial.
pub const MAX_LIE_DIM: usize = 16;

/// Seed for the sampled complete-solvability test.
const SOLVABILITY_SEED: u64 = 0x5eed_c0de;
const SOLVABILITY_SAMPLES: usize = 8;

#[derive(Clone)]
pub struct LieAlgebra {
    dim: usize,
    letter: char,
    de: Vec<KForm>,
    /// `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
    consts: Vec<Vec<Vec<Rational>>>,
    dmono: Vec<OnceLock<KForm>>,
    cohom: Vec<OnceLock<Cohomology>>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra").field("dim", &self.dim).field("equations", &self.equations()).finish()
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.de == o.de
    }
}

impl LieAlgebra {
    /// Builds the algebra from `de^1, …, de^n` and checks `d² = 0`.
    pub fn new(de: Vec<KForm>) -> Result<Self> {
        Self::with_letter(de, 'e')
    }

    pub fn with_letter(de: Vec<KForm>, letter: char) -> Result<Self> {
        let alg = Self::unchecked(de, letter)?;
        let violations = alg.jacobi_violations();
        if violations.is_empty() {
            Ok(alg)
        } else {
            Err(Error::JacobiViolation {
                violations: violations
                    .iter()
                    .map(|(k, v)| format!("d(d{letter}{}) = {}", k + 1, v.to_text(letter)))
                    .collect(),
            })
        }
    }

    /// Builds without the Jacobi check; only [`LieAlgebra::jacobi_violations`] is meaningful then.
    pub fn unchecked(de: Vec<KForm>, letter: char) -> Result<Self> {
        let n = de.len();
        if n > MAX_LIE_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        for f in &de {
            if f.dim() != n {
                return Err(Error::DimensionMismatch { left: n, right: f.dim() });
            }
            if f.degree() != 2 {
                return Err(Error::DegreeMismatch { expected: 2, found: f.degree() });
            }
            if !f.is_real() {
                return Err(Error::Manifest("structure equations must have real coefficients".into()));
            }
        }
        let mut consts = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (k, f) in de.iter().enumerate() {
            for (m, c) in f.terms() {
                let ij: Vec<usize> = m.indices().collect();
                let (i, j) = (ij[0], ij[1]);
                consts[i][j][k] = -c.re.clone();
                consts[j][i][k] = c.re.clone();
            }
        }
        Ok(LieAlgebra {
            dim: n,
            letter,
            de,
            consts,
            dmono: (0..1usize << n).map(|_| OnceLock::new()).collect(),
            cohom: (0..=n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn abelian(n: usize) -> Self {
        Self::new(vec![KForm::zero(n, 2); n]).expect("abelian")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn letter(&self) -> char {
        self.letter
    }

    pub fn structure(&self) -> &[KForm] {
        &self.de
    }

    /// Human-readable equations, one per nonzero `de^k`.
    pub fn equations(&self) -> Vec<String> {
        let l = self.letter;
        self.de
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, f)| format!("d{l}{} = {}", k + 1, f.to_text(l)))
            .collect()
    }

    /// `c_ij^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.consts[i][j][k]
    }

    /// `d(de^k)` for every `k` where it is nonzero.
    pub fn jacobi_violations(&self) -> Vec<(usize, KForm)> {
        (0..self.dim)
            .filter_map(|k| {
                let dd = self.d(&self.de[k]);
                (!dd.is_zero()).then_some((k, dd))
            })
            .collect()
    }

    fn d_monomial(&self, m: MultiIndex) -> &KForm {
        self.dmono[m.mask() as usize].get_or_init(|| {
            let n = self.dim;
            let mut out = KForm::zero(n, m.degree() + 1);
            for (pos, i) in m.indices().enumerate() {
                let before = MultiIndex::from_mask(m.mask() & ((1u32 << i) - 1));
                let after = MultiIndex::from_mask(m.mask() & !((1u32 << (i + 1)) - 1));
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                for (m2, c) in self.de[i].terms() {
                    let Some((p, s1)) = before.wedge(*m2) else { continue };
                    let Some((p, s2)) = p.wedge(after) else { continue };
                    let s = sign * s1 as i64 * s2 as i64;
                    out.add_term(p, c * &CScalar::from_int(s));
                }
            }
            out
        })
    }

    /// Chevalley–Eilenberg differential, extended as an antiderivation.
    pub fn d(&self, f: &KForm) -> KForm {
        assert_eq!(f.dim(), self.dim, "form dimension differs from the algebra");
        let mut out = KForm::zero(self.dim, f.degree() + 1);
        if f.degree() >= self.dim {
            return out;
        }
        for (m, c) in f.terms() {
            out.axpy(c, self.d_monomial(*m));
        }
        out
    }

    /// Matrix of `d: Λ^k → Λ^{k+1}` in the lexicographic monomial bases.
    pub fn differential_matrix(&self, k: usize) -> Matrix<Rational> {
        let src = MultiIndex::all(self.dim, k);
        let dst = MultiIndex::all(self.dim, k + 1);
        let mut mat = Matrix::zeros(dst.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            for (mm, c) in self.d_monomial(*m).terms() {
                let i = dst.binary_search(mm).expect("monomial of degree k+1");
                mat[(i, j)] = c.re.clone();
            }
        }
        mat
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, c) in self.consts[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// `ad_x` as a matrix acting on column vectors.
    pub fn ad(&self, x: &[Rational]) -> Matrix<Rational> {
        let cols: Vec<Vec<Rational>> = (0..self.dim).map(|j| self.bracket(x, &self.basis_vector(j))).collect();
        Matrix::from_rows(cols).transpose()
    }

    /// Closed `k`-forms.
    pub fn closed(&self, k: usize) -> Subspace {
        self.cohomology(k).closed.clone()
    }

    /// Exact `k`-forms.
    pub fn exact(&self, k: usize) -> Subspace {
        self.cohomology(k).exact.clone()
    }

    pub fn cohomology(&self, k: usize) -> &Cohomology {
        assert!(k <= self.dim, "degree beyond the dimension");
        self.cohom[k].get_or_init(|| self.compute_cohomology(k))
    }

    fn compute_cohomology(&self, k: usize) -> Cohomology {
        let n = self.dim;
        let monos = MultiIndex::all(n, k);
        let images: Vec<SparseVec<MultiIndex>> = monos.iter().map(|m| self.d(&KForm::from_terms(n, k, [(*m, CScalar::one())])).into_terms()).collect();
        let img = LinearImage::new(images.iter());
        let closed_forms: Vec<KForm> = img
            .kernel
            .iter()
            .map(|c| KForm::from_terms(n, k, c.iter().map(|(j, v)| (monos[*j], v.clone()))))
            .collect();
        let closed = Subspace::span(n, k, &closed_forms).expect("homogeneous");
        let exact = if k == 0 {
            Subspace::zero(n, 0)
        } else {
            let prev = MultiIndex::all(n, k - 1);
            let ex: Vec<KForm> = prev.iter().map(|m| self.d(&KForm::from_terms(n, k - 1, [(*m, CScalar::one())]))).collect();
            Subspace::span(n, k, &ex).expect("homogeneous")
        };
        let reps = quotient_basis(&closed, &exact).expect("d² = 0 puts exact inside closed");
        Cohomology { degree: k, closed, exact, reps }
    }

    pub fn betti(&self, k: usize) -> usize {
        self.cohomology(k).dim()
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.betti(k)).collect()
    }

    /// Span of all brackets `[u, v]`, `u ∈ a`, `v ∈ b`.
    fn bracket_span(&self, a: &Span<usize>, b: &Span<usize>) -> Span<usize> {
        let av: Vec<Vec<Rational>> = a.basis().iter().map(|v| self.dense(v)).collect();
        let bv: Vec<Vec<Rational>> = b.basis().iter().map(|v| self.dense(v)).collect();
        let mut out = Vec::new();
        for u in &av {
            for v in &bv {
                out.push(sparse_real(&self.bracket(u, v)));
            }
        }
        Span::new(out.iter())
    }

    fn dense(&self, v: &SparseVec<usize>) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, c) in v {
            out[*i] = c.re.clone();
        }
        out
    }

    fn whole(&self) -> Span<usize> {
        let basis: Vec<SparseVec<usize>> = (0..self.dim).map(|i| sparse_real(&self.basis_vector(i))).collect();
        Span::new(basis.iter())
    }

    pub fn is_abelian(&self) -> bool {
        self.de.iter().all(KForm::is_zero)
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).map(|k| &self.consts[i][k][k]).fold(Rational::zero(), |a, b| a + b).is_zero())
    }

    /// Lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let g = self.whole();
        let mut cur = g.clone();
        loop {
            let next = self.bracket_span(&g, &cur);
            if next.dim() == 0 {
                return true;
            }
            if next.dim() == cur.dim() {
                return false;
            }
            cur = next;
        }
    }

    /// Derived series reaches zero.
    pub fn is_solvable(&self) -> bool {
        let mut cur = self.whole();
        loop {
            let next = self.bracket_span(&cur, &cur);
            if next.dim() == 0 {
                return true;
            }
            if next.dim() == cur.dim() {
                return false;
            }
            cur = next;
        }
    }

    /// Sampled test that `ad_X` has only real eigenvalues.
    ///
    /// Exact on each sample (Sturm counting on the characteristic polynomial);
    /// the sample set is the basis plus a fixed pseudo-random batch.
    pub fn is_completely_solvable_heuristic(&self) -> bool {
        if self.is_nilpotent() {
            return true;
        }
        if !self.is_solvable() {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SOLVABILITY_SEED);
        let mut samples: Vec<Vec<Rational>> = (0..self.dim).map(|i| self.basis_vector(i)).collect();
        for _ in 0..SOLVABILITY_SAMPLES {
            samples.push((0..self.dim).map(|_| int(rng.gen_range(-3..=3))).collect());
        }
        samples.iter().all(|x| poly::all_roots_real(&poly::char_poly(&self.ad(x))))
    }

    pub fn flags(&self) -> LieFlags {
        LieFlags {
            abelian: self.is_abelian(),
            unimodular: self.is_unimodular(),
            nilpotent: self.is_nilpotent(),
            solvable: self.is_solvable(),
            completely_solvable: self.is_completely_solvable_heuristic(),
        }
    }

    /// Applicability of the invariant-to-de Rham identification.
    pub fn identification(&self) -> Identification {
        let f = self.flags();
        if f.nilpotent {
            Identification::Nilpotent
        } else if f.completely_solvable {
            Identification::CompletelySolvable
        } else {
            Identification::NotGuaranteed
        }
    }

    /// Transports the equations to the coframe `f^i = Σ_j P_ij e^j`.
    pub fn change_basis(&self, p: &Matrix<Rational>, letter: char) -> Result<LieAlgebra> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { left: n, right: p.rows() });
        }
        let inv = p.inverse().ok_or_else(|| Error::Singular("change of basis".into()))?;
        let back: Vec<KForm> = (0..n)
            .map(|j| KForm::one_form(&(0..n).map(|r| CScalar::real(inv[(j, r)].clone())).collect::<Vec<_>>()))
            .collect();
        let mut de = Vec::with_capacity(n);
        for i in 0..n {
            let mut df = KForm::zero(n, 2);
            for j in 0..n {
                if !p[(i, j)].is_zero() {
                    df.axpy(&CScalar::real(p[(i, j)].clone()), &self.de[j]);
                }
            }
            de.push(df.substitute(&back));
        }
        LieAlgebra::with_letter(de, letter)
    }
}

fn sparse_real(v: &[Rational]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, CScalar::real(c.clone()))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LieFlags {
    pub abelian: bool,
    pub unimodular: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    /// Sampled, see [`LieAlgebra::is_completely_solvable_heuristic`].
    pub completely_solvable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identification {
    /// Nomizu.
    Nilpotent,
    /// Hattori; complete solvability is only sampled.
    CompletelySolvable,
    NotGuaranteed,
}

impl Identification {
    pub fn note(self) -> &'static str {
        match self {
            Identification::Nilpotent => "invariant cohomology equals de Rham cohomology (nilpotent, Nomizu)",
            Identification::CompletelySolvable => {
                "invariant cohomology equals de Rham cohomology (completely solvable, Hattori; complete solvability is heuristic)"
            }
            Identification::NotGuaranteed => "identification with de Rham cohomology not guaranteed; invariant cohomology only",
        }
    }
}

/// `H^k` of the invariant complex.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degree: usize,
    closed: Subspace,
    exact: Subspace,
    reps: Subspace,
}

impl Cohomology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn closed(&self) -> &Subspace {
        &self.closed
    }

    pub fn exact(&self) -> &Subspace {
        &self.exact
    }

    /// Representatives of a basis of classes.
    pub fn representatives(&self) -> Vec<KForm> {
        self.reps.basis()
    }

    pub fn representative_space(&self) -> &Subspace {
        &self.reps
    }

    /// Class coordinates of a closed form in the representative basis.
    pub fn coordinates(&self, f: &KForm) -> Result<Vec<CScalar>> {
        if f.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: f.degree() });
        }
        if !self.closed.contains(f) {
            return Err(Error::NotClosed(f.to_string()));
        }
        let nf = self.exact.reduce(f);
        Ok(self.reps.solve_membership(&nf)?.expect("normal form of a closed form lies in the representative span"))
    }

    pub fn from_coordinates(&self, c: &[CScalar]) -> KForm {
        let reps = self.representatives();
        let mut out = KForm::zero(self.closed.ambient_dim(), self.degree);
        for (r, x) in reps.iter().zip(c) {
            out.axpy(x, r);
        }
        out
    }

    pub fn is_exact(&self, f: &KForm) -> bool {
        self.exact.contains(f)
    }

    pub fn same_class(&self, a: &KForm, b: &KForm) -> Result<bool> {
        Ok(self.coordinates(a)? == self.coordinates(b)?)
    }
}

/// Rational polynomials, coefficients in increasing degree.
mod poly {
    use super::*;

    pub type Poly = Vec<Rational>;

    fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    /// Faddeev–LeVerrier: `det(λI − A)`.
    pub fn char_poly(a: &Matrix<Rational>) -> Poly {
        let n = a.rows();
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        let mut m = Matrix::<Rational>::zeros(n, n);
        let id = Matrix::<Rational>::identity(n);
        for k in 1..=n {
            m = a.mul(&m).add(&id.scale(&c[n - k + 1]));
            let am = a.mul(&m);
            let tr = (0..n).fold(Rational::zero(), |acc, i| acc + &am[(i, i)]);
            c[n - k] = -tr / int(k as i64);
        }
        c
    }

    fn derivative(p: &Poly) -> Poly {
        trim(p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    fn rem(a: &Poly, b: &Poly) -> Poly {
        let mut r = trim(a.clone());
        let db = b.len() - 1;
        let lead = b[db].clone();
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let f = r[r.len() - 1].clone() / &lead;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r = trim(r);
        }
        r
    }

    fn div_exact(a: &Poly, b: &Poly) -> Poly {
        let mut r = trim(a.clone());
        let db = b.len() - 1;
        let mut q = vec![Rational::zero(); r.len().saturating_sub(db)];
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let f = r[r.len() - 1].clone() / &b[db];
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r = trim(r);
        }
        trim(q)
    }

    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
        let s: Vec<i8> = signs.filter(|&x| x != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Every complex root of `p` is real.
    pub fn all_roots_real(p: &Poly) -> bool {
        let p = trim(p.clone());
        if p.len() <= 2 {
            return true;
        }
        let g = gcd(&p, &derivative(&p));
        let s = div_exact(&p, &g);
        let deg = s.len() - 1;
        if deg == 0 {
            return true;
        }
        let mut seq = vec![s.clone(), derivative(&s)];
        loop {
            let r = rem(&seq[seq.len() - 2], &seq[seq.len() - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        let lead_sign = |q: &Poly| if q.last().unwrap().is_positive() { 1i8 } else { -1 };
        let at_pos = sign_changes(seq.iter().map(lead_sign));
        let at_neg = sign_changes(seq.iter().map(|q| if (q.len() - 1) % 2 == 0 { lead_sign(q) } else { -lead_sign(q) }));
        at_neg - at_pos == deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::e;

    fn sol3xr() -> LieAlgebra {
        let mut de = vec![KForm::zero(4, 2); 4];
        de[2] = -&e(4, &[1, 3]);
        de[3] = e(4, &[1, 4]);
        LieAlgebra::new(de).unwrap()
    }

    fn nil3_a() -> LieAlgebra {
        let mut de = vec![KForm::zero(4, 2); 4];
        de[2] = e(4, &[1, 4]);
        de[3] = e(4, &[1, 2]);
        LieAlgebra::new(de).unwrap()
    }

    #[test]
    fn differential_examples() {
        let m4 = sol3xr();
        assert!(m4.d(&e(4, &[3, 4])).is_zero());
        let n4 = nil3_a();
        assert_eq!(n4.d(&e(4, &[3, 4])), -&e(4, &[1, 2, 3]));
        assert!(n4.d(&KForm::constant(4, CScalar::one())).is_zero());
    }

    #[test]
    fn brackets_follow_sign_convention() {
        // de3 = -e13 gives [e1, e3] = e3
        let m4 = sol3xr();
        assert_eq!(m4.bracket(&m4.basis_vector(0), &m4.basis_vector(2)), m4.basis_vector(2));
        assert_eq!(*m4.structure_constant(0, 3, 3), int(-1));
    }

    #[test]
    fn flags_of_examples() {
        let a = LieAlgebra::abelian(4).flags();
        assert!(a.abelian && a.unimodular && a.nilpotent && a.solvable && a.completely_solvable);
        let m4 = sol3xr().flags();
        assert!(m4.unimodular && m4.solvable && !m4.nilpotent && m4.completely_solvable);
        let n4 = nil3_a().flags();
        assert!(n4.nilpotent && !n4.abelian);
    }

    #[test]
    fn rotation_algebra_is_not_completely_solvable() {
        // e(2) x R: [e1, e2] = e3, [e1, e3] = -e2
        let mut de = vec![KForm::zero(4, 2); 4];
        de[2] = -&e(4, &[1, 2]);
        de[1] = e(4, &[1, 3]);
        let alg = LieAlgebra::new(de).unwrap();
        assert!(alg.is_solvable() && alg.is_unimodular());
        assert!(!alg.is_completely_solvable_heuristic());
    }

    #[test]
    fn sl2_is_not_solvable() {
        // [e1,e2] = e3, [e3,e1] = 2e1, [e3,e2] = -2e2
        let de = vec![-&e(3, &[1, 3]).scale_q(&int(2)), e(3, &[2, 3]).scale_q(&int(2)), -&e(3, &[1, 2])];
        let alg = LieAlgebra::new(de).unwrap();
        assert!(!alg.is_solvable());
        assert!(alg.is_unimodular());
        assert_eq!(alg.betti_numbers(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn jacobi_failure_is_reported() {
        let de = vec![KForm::zero(3, 2), e(3, &[1, 3]), e(3, &[1, 2])];
        // d(de2) = d(e13) = -e1^de3 = -e1^e12 = 0, fine; use a genuinely broken one
        assert!(LieAlgebra::new(de).is_ok());
        let bad = vec![KForm::zero(3, 2), e(3, &[1, 3]), e(3, &[2, 3])];
        match LieAlgebra::new(bad) {
            Err(Error::JacobiViolation { violations }) => assert!(!violations.is_empty()),
            other => panic!("expected a Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn cohomology_of_examples() {
        let m4 = sol3xr();
        assert_eq!(m4.cohomology(2).representatives(), vec![e(4, &[1, 2]), e(4, &[3, 4])]);
        assert_eq!(m4.betti_numbers(), vec![1, 2, 2, 2, 1]);
        let n4 = nil3_a();
        assert_eq!(n4.betti(1), 2);
        assert_eq!(n4.cohomology(2).representatives(), vec![e(4, &[1, 3]), e(4, &[2, 4])]);
        assert!(n4.cohomology(3).is_exact(&e(4, &[1, 2, 4])));
        assert!(matches!(n4.cohomology(2).coordinates(&e(4, &[3, 4])), Err(Error::NotClosed(_))));
    }

    #[test]
    fn change_basis_transports_equations() {
        let n4 = nil3_a();
        let perm = Matrix::from_fn(4, 4, |i, j| if [0, 2, 1, 3][i] == j { int(1) } else { int(0) });
        let f = n4.change_basis(&perm, 'f').unwrap();
        assert_eq!(f.structure()[1], e(4, &[1, 4]));
        assert_eq!(f.structure()[3], e(4, &[1, 3]));
        assert_eq!(f.betti_numbers(), n4.betti_numbers());
        assert_eq!(n4.change_basis(&Matrix::identity(4), 'e').unwrap(), n4);
        assert!(matches!(n4.change_basis(&Matrix::zeros(4, 4), 'f'), Err(Error::Singular(_))));
    }

    #[test]
    fn char_poly_and_reality() {
        let a = Matrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]);
        let p = poly::char_poly(&a);
        assert_eq!(p, vec![int(1), int(0), int(1)]);
        assert!(!poly::all_roots_real(&p));
        // (x-1)^2 (x+2)
        assert!(poly::all_roots_real(&vec![int(2), int(-3), int(0), int(1)]));
        // x^2 - 2 has irrational but real roots
        assert!(poly::all_roots_real(&vec![int(-2), int(0), int(1)]));
    }
}
