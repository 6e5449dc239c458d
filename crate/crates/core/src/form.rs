//! Sparse alternating forms on a fixed basis `e^1, ..., e^n`.
//!
//! Indices are 0-based internally and 1-based in every printed form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, CScalar, Rational};

/// Largest ambient dimension a [`MultiIndex`] can address.
pub const MAX_DIM: usize = 32;

/// Strictly increasing set of basis indices, stored as a bitmask.
///
/// Ordering is lexicographic on the increasing index sequence, so within a
/// fixed degree `e^{12} < e^{13} < e^{23}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_mask(mask: u32) -> Self {
        MultiIndex(mask)
    }

    pub fn single(i: usize) -> Self {
        assert!(i < MAX_DIM);
        MultiIndex(1 << i)
    }

    /// Builds the index set of a strictly increasing sequence.
    pub fn from_sorted(indices: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        let mut last: Option<usize> = None;
        for &i in indices {
            if i >= MAX_DIM || last.is_some_and(|l| i <= l) {
                return None;
            }
            mask |= 1 << i;
            last = Some(i);
        }
        Some(MultiIndex(mask))
    }

    /// Sorts an arbitrary index sequence, returning the permutation sign,
    /// or `None` when an index repeats.
    pub fn canonicalize(indices: &[usize]) -> Option<(Self, i8)> {
        let mut mask = 0u32;
        let mut sign = 1i8;
        for &i in indices {
            assert!(i < MAX_DIM);
            if mask & (1 << i) != 0 {
                return None;
            }
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << i;
        }
        Some((MultiIndex(mask), sign))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// Product `e^self ∧ e^other`: the union and its sign, or `None` on overlap.
    pub fn wedge(self, other: MultiIndex) -> Option<(MultiIndex, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for j in other.indices() {
            inversions += (self.0 as u64 >> (j + 1)).count_ones();
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(self.0 | other.0), sign))
    }

    /// Complement within `0..n`.
    pub fn complement(self, n: usize) -> MultiIndex {
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        MultiIndex(full & !self.0)
    }

    /// All index sets of size `k` in `0..n`, in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex::from_sorted(cur).expect("increasing"));
                return;
            }
            for i in start..n {
                if n - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(0, n, k, &mut cur, &mut out);
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let x = (self.0 ^ other.0) as u64;
        let p = x.trailing_zeros();
        let above = !((1u64 << (p + 1)) - 1);
        if (self.0 as u64) & (1 << p) != 0 {
            if (other.0 as u64) & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if (self.0 as u64) & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        for i in self.indices() {
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

/// Homogeneous `k`-form in dimension `n` with Gaussian-rational coefficients.
///
/// Real forms simply carry zero imaginary parts. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, CScalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        KForm { dim, degree, terms: BTreeMap::new() }
    }

    /// The constant 0-form `c`.
    pub fn constant(dim: usize, c: CScalar) -> Self {
        let mut f = KForm::zero(dim, 0);
        f.add_term(MultiIndex::EMPTY, c);
        f
    }

    /// `e^{i_1} ∧ ... ∧ e^{i_k}` for 0-based indices in any order.
    pub fn monomial(dim: usize, indices: &[usize]) -> Self {
        let mut f = KForm::zero(dim, indices.len());
        assert!(indices.iter().all(|&i| i < dim), "index out of range");
        if let Some((mi, sign)) = MultiIndex::canonicalize(indices) {
            f.add_term(mi, CScalar::from_int(sign as i64));
        }
        f
    }

    /// `e^i` (0-based).
    pub fn basis1(dim: usize, i: usize) -> Self {
        KForm::monomial(dim, &[i])
    }

    /// Real 1-form with the given coefficients on `e^1..e^n`.
    pub fn one_form(coeffs: &[CScalar]) -> Self {
        let dim = coeffs.len();
        let mut f = KForm::zero(dim, 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(MultiIndex::single(i), c.clone());
        }
        f
    }

    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (MultiIndex, CScalar)>) -> Self {
        let mut f = KForm::zero(dim, degree);
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "monomial degree mismatch");
            f.add_term(m, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, CScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndex, CScalar> {
        self.terms
    }

    pub fn coeff(&self, m: MultiIndex) -> CScalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(CScalar::is_real)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (lexicographically first) monomial.
    pub fn leading(&self) -> Option<(MultiIndex, &CScalar)> {
        self.terms.iter().next().map(|(m, c)| (*m, c))
    }

    pub fn add_term(&mut self, m: MultiIndex, c: CScalar) {
        debug_assert_eq!(m.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_space(&self, other: &KForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &KForm) -> Result<KForm> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// `self + c * other`, in place.
    pub fn axpy(&mut self, c: &CScalar, other: &KForm) {
        self.check_same_space(other).expect("axpy on incompatible forms");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(*m, c * v);
        }
    }

    pub fn scale(&self, c: &CScalar) -> KForm {
        if c.is_zero() {
            return KForm::zero(self.dim, self.degree);
        }
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn scale_q(&self, q: &Rational) -> KForm {
        self.scale(&CScalar::real(q.clone()))
    }

    pub fn conj(&self) -> KForm {
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v.conj())).collect(),
        }
    }

    /// Real part `(φ + φ̄)/2`.
    pub fn re(&self) -> KForm {
        KForm::from_terms(
            self.dim,
            self.degree,
            self.terms.iter().map(|(m, v)| (*m, CScalar::real(v.re.clone()))),
        )
    }

    /// Imaginary part `(φ − φ̄)/(2i)`.
    pub fn im(&self) -> KForm {
        KForm::from_terms(
            self.dim,
            self.degree,
            self.terms.iter().map(|(m, v)| (*m, CScalar::real(v.im.clone()))),
        )
    }

    /// Exterior product; fails when the ambient dimensions differ.
    pub fn try_wedge(&self, other: &KForm) -> Result<KForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let mut out = KForm::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((m, sign)) = a.wedge(*b) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior product of forms known to share a dimension.
    pub fn wedge(&self, other: &KForm) -> KForm {
        self.try_wedge(other).expect("wedge of forms in different dimensions")
    }

    /// `self^p` (wedge power); `self^0` is the constant 1.
    pub fn wedge_pow(&self, p: usize) -> KForm {
        let mut acc = KForm::constant(self.dim, CScalar::one());
        for _ in 0..p {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Pulls the form back along `e^i ↦ images[i]`, where each image is a 1-form.
    pub fn substitute(&self, images: &[KForm]) -> KForm {
        assert_eq!(images.len(), self.dim, "need one image per basis 1-form");
        let target = images.first().map_or(self.dim, |f| f.dim);
        let mut out = KForm::zero(target, self.degree);
        for (m, c) in &self.terms {
            let mut prod = KForm::constant(target, c.clone());
            for i in m.indices() {
                prod = prod.wedge(&images[i]);
                if prod.is_zero() {
                    break;
                }
            }
            for (mm, cc) in prod.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Value on `k` vectors, with `e^{I}(e_{i_1}, ..., e_{i_k}) = 1`.
    pub fn eval(&self, vectors: &[Vec<CScalar>]) -> CScalar {
        assert_eq!(vectors.len(), self.degree);
        let mut total = CScalar::zero();
        for (m, c) in &self.terms {
            let idx: Vec<usize> = m.indices().collect();
            let mat: Vec<Vec<CScalar>> = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
                .collect();
            let det = crate::linalg::Matrix::from_rows(mat).det();
            total += &(c * &det);
        }
        total
    }

    /// Skew matrix `A[i][j] = α(e_i, e_j)` of a real 2-form.
    pub fn to_skew_matrix(&self) -> crate::linalg::Matrix<Rational> {
        assert_eq!(self.degree, 2);
        let n = self.dim;
        let mut a = crate::linalg::Matrix::<Rational>::zeros(n, n);
        for (m, c) in &self.terms {
            assert!(c.is_real(), "skew matrix of a complex 2-form");
            let ij: Vec<usize> = m.indices().collect();
            a[(ij[0], ij[1])] = c.re.clone();
            a[(ij[1], ij[0])] = -c.re.clone();
        }
        a
    }

    /// Inverse of [`KForm::to_skew_matrix`] (reads the upper triangle).
    pub fn from_skew_matrix(a: &crate::linalg::Matrix<Rational>) -> KForm {
        let n = a.rows();
        let mut f = KForm::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                f.add_term(MultiIndex::from_sorted(&[i, j]).unwrap(), CScalar::real(a[(i, j)].clone()));
            }
        }
        f
    }

    /// Canonical text form using `letter` for the basis, e.g. `e1^e2 - 3/2*e3^e4`.
    pub fn to_text(&self, letter: char) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            for (part, imag) in [(&c.re, false), (&c.im, true)] {
                if part.is_zero() {
                    continue;
                }
                let negative = part < &Rational::zero();
                if out.is_empty() {
                    if negative {
                        out.push('-');
                    }
                } else {
                    out.push_str(if negative { " - " } else { " + " });
                }
                let mag = if negative { -part.clone() } else { part.clone() };
                let mut factors: Vec<String> = Vec::new();
                if imag {
                    factors.push("i".into());
                }
                if !mag.is_one() || (m.degree() == 0 && !imag) {
                    factors.push(fmt_rational(&mag));
                }
                if m.degree() > 0 {
                    factors.push(m.indices().map(|i| format!("{letter}{}", i + 1)).collect::<Vec<_>>().join("^"));
                }
                out.push_str(&factors.join("*"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text('e'))
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[n={}, k={}]({})", self.dim, self.degree, self)
    }
}

impl std::ops::Add for &KForm {
    type Output = KForm;
    fn add(self, o: &KForm) -> KForm {
        self.try_add(o).expect("adding forms of different type")
    }
}

impl std::ops::Sub for &KForm {
    type Output = KForm;
    fn sub(self, o: &KForm) -> KForm {
        let mut out = self.clone();
        out.axpy(&-CScalar::one(), o);
        out
    }
}

impl std::ops::Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(&-CScalar::one())
    }
}

/// `e^{I}` from 1-based indices, e.g. `e(4, &[1, 3])` is `e^{13}`.
pub fn e(dim: usize, one_based: &[usize]) -> KForm {
    let idx: Vec<usize> = one_based.iter().map(|&i| i - 1).collect();
    KForm::monomial(dim, &idx)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn basis_products() {
        assert_eq!(e(4, &[1]).wedge(&e(4, &[2])), e(4, &[1, 2]));
        assert!(e(4, &[1, 2]).wedge(&e(4, &[1, 2])).is_zero());
        assert_eq!(e(4, &[1, 3]).wedge(&e(4, &[2, 4])), -&e(4, &[1, 2, 3, 4]));
    }

    #[test]
    fn wedge_dimension_mismatch_is_an_error() {
        assert!(matches!(e(4, &[1]).try_wedge(&e(5, &[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lexicographic_order() {
        let all = MultiIndex::all(4, 2);
        let names: Vec<String> = all.iter().map(|m| format!("{m:?}")).collect();
        assert_eq!(names, ["e12", "e13", "e14", "e23", "e24", "e34"]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
        let mixed = [MultiIndex::from_sorted(&[0]).unwrap(), MultiIndex::from_sorted(&[0, 1]).unwrap()];
        assert!(mixed[0] < mixed[1]);
    }

    #[test]
    fn monomial_canonicalizes_sign() {
        assert_eq!(KForm::monomial(3, &[1, 0]), -&e(3, &[1, 2]));
        assert!(KForm::monomial(3, &[1, 1]).is_zero());
    }

    #[test]
    fn text_form() {
        let mut f = e(4, &[1, 3]).scale_q(&frac(3, 2));
        f.axpy(&CScalar::new(int(-1), int(2)), &e(4, &[2, 4]));
        assert_eq!(f.to_string(), "3/2*e1^e3 - e2^e4 + i*2*e2^e4");
        assert_eq!(KForm::zero(4, 2).to_string(), "0");
        assert_eq!(KForm::constant(4, CScalar::from_int(-2)).to_string(), "-2");
    }

    #[test]
    fn evaluation_uses_determinant_convention() {
        let f = e(3, &[1, 2]);
        let u = vec![CScalar::from_int(1), CScalar::from_int(2), CScalar::from_int(0)];
        let v = vec![CScalar::from_int(3), CScalar::from_int(4), CScalar::from_int(5)];
        assert_eq!(f.eval(&[u, v]), CScalar::from_int(4 - 6));
    }

    #[test]
    fn substitution_is_pullback() {
        // e1 -> e1 + e2, e2 -> e2: e12 -> e12
        let images = vec![&e(2, &[1]) + &e(2, &[2]), e(2, &[2])];
        assert_eq!(e(2, &[1, 2]).substitute(&images), e(2, &[1, 2]));
    }

    pub(crate) fn arb_form(dim: usize, degree: usize) -> impl Strategy<Value = KForm> {
        let monos = MultiIndex::all(dim, degree);
        let len = monos.len();
        proptest::collection::vec((-3i64..=3, -2i64..=2), len).prop_map(move |cs| {
            KForm::from_terms(
                dim,
                degree,
                monos.iter().zip(cs).filter(|(_, (r, _))| *r != 0).map(|(m, (r, i))| (*m, CScalar::new(int(r), int(i)))),
            )
        })
    }

    proptest! {
        #[test]
        fn wedge_is_associative((a, b, c) in (arb_form(5, 1), arb_form(5, 2), arb_form(5, 1))) {
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        }

        #[test]
        fn wedge_is_graded_commutative((a, b) in (arb_form(5, 2), arb_form(5, 1)), (c, d) in (arb_form(5, 1), arb_form(5, 3))) {
            prop_assert_eq!(a.wedge(&b), b.wedge(&a));
            prop_assert_eq!(c.wedge(&d), -&d.wedge(&c));
            prop_assert!(c.wedge(&c).is_zero());
        }
    }

}
