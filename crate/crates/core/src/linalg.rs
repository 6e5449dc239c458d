//! Exact linear algebra.
//!
//! Two independent layers live here: a small dense [`Matrix`] over any exact
//! [`Field`] (endomorphisms of the Lie algebra, Gram matrices), and a sparse
//! reduced-echelon engine ([`Echelon`], [`Span`], [`Subspace`]) that carries
//! all kernel/image/quotient computations on forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::{KForm, MultiIndex};
use crate::scalar::{CScalar, Field, Rational};

// ---------------------------------------------------------------------------
// Dense matrices

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].fadd(&a.fmul(b));
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(F::zero(), |acc, (a, b)| acc.fadd(&a.fmul(b))))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.fadd(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.fsub(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.fmul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(F::fneg)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.add(&self.transpose()).is_zero()
    }

    /// Row-reduces a copy and returns `(rank, determinant-if-square)`.
    fn eliminate(&self) -> (usize, F) {
        let mut a = self.clone();
        let mut det = F::one();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(p) = (rank..a.rows).find(|&r| !a[(r, c)].is_zero()) else {
                det = F::zero();
                continue;
            };
            if p != rank {
                a.swap_rows(p, rank);
                det = det.fneg();
            }
            let piv = a[(rank, c)].clone();
            det = det.fmul(&piv);
            for r in rank + 1..a.rows {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].fdiv(&piv);
                for cc in c..a.cols {
                    let v = a[(r, cc)].fsub(&f.fmul(&a[(rank, cc)]));
                    a[(r, cc)] = v;
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        if rank < a.cols {
            det = F::zero();
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return F::one();
        }
        self.eliminate().1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = a[(c, j)].fdiv(&piv);
                inv[(c, j)] = inv[(c, j)].fdiv(&piv);
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let v = a[(r, j)].fsub(&f.fmul(&a[(c, j)]));
                    a[(r, j)] = v;
                    let w = inv[(r, j)].fsub(&f.fmul(&inv[(c, j)]));
                    inv[(r, j)] = w;
                }
            }
        }
        Some(inv)
    }

    /// Leading principal minors `det A[0..k, 0..k]` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<F> {
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |i, j| self[(i, j)].clone()).det())
            .collect()
    }
}

impl Matrix<Rational> {
    /// Symmetric positive definite, certified by Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(|m| m > &Rational::zero())
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn symmetric_part(&self) -> Self {
        let half = Rational::new(1.into(), 2.into());
        self.add(&self.transpose()).scale(&half)
    }

    pub fn to_complex(&self) -> Matrix<CScalar> {
        self.map(|q| CScalar::real(q.clone()))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Sparse reduced echelon form

/// Sparse vector keyed by an ordered coordinate label.
pub type SparseVec<K> = BTreeMap<K, CScalar>;

/// `dst += c * src`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, c: &CScalar, src: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        let add = c * v;
        match dst.get_mut(k) {
            Some(x) => {
                *x += &add;
                if x.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                dst.insert(k.clone(), add);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Row<K> {
    pivot: K,
    vec: SparseVec<K>,
    /// Combination of inserted generators producing `vec`.
    combo: SparseVec<usize>,
}

/// Fully reduced row-echelon basis: every row has coefficient 1 at its pivot
/// (its first nonzero key) and 0 at every other row's pivot.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<K> {
    rows: Vec<Row<K>>,
    generators: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), generators: 0 }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.iter().map(|r| &r.vec)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.iter().map(|r| &r.pivot)
    }

    /// Reduces `v` against all rows. Returns the residual, the coefficients
    /// used per row, and the accumulated generator combination.
    fn reduce_tracked(&self, v: &SparseVec<K>) -> (SparseVec<K>, Vec<CScalar>, SparseVec<usize>) {
        let mut res = v.clone();
        let mut coords = Vec::with_capacity(self.rows.len());
        let mut combo = SparseVec::new();
        for row in &self.rows {
            let c = res.get(&row.pivot).cloned().unwrap_or_default();
            if !c.is_zero() {
                axpy(&mut res, &-&c, &row.vec);
                axpy(&mut combo, &c, &row.combo);
            }
            coords.push(c);
        }
        (res, coords, combo)
    }

    /// Normal form of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        self.reduce_tracked(v).0
    }

    /// Adds the next generator. Returns `None` when the rank grew, otherwise
    /// the generator combination that vanishes (a kernel vector).
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let g = self.generators;
        self.generators += 1;
        let (res, _, reduced_by) = self.reduce_tracked(v);
        let mut combo: SparseVec<usize> = SparseVec::new();
        combo.insert(g, CScalar::one());
        axpy(&mut combo, &-CScalar::one(), &reduced_by);
        let Some((pivot, lead)) = res.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return Some(combo);
        };
        let inv = lead.inv();
        let vec: SparseVec<K> = res.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        let combo: SparseVec<usize> = combo.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        for row in &mut self.rows {
            let c = row.vec.get(&pivot).cloned().unwrap_or_default();
            if !c.is_zero() {
                axpy(&mut row.vec, &-&c, &vec);
                axpy(&mut row.combo, &-&c, &combo);
            }
        }
        let pos = self.rows.partition_point(|r| r.pivot < pivot);
        self.rows.insert(pos, Row { pivot, vec, combo });
        None
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` is in the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<CScalar>> {
        let (res, coords, _) = self.reduce_tracked(v);
        res.is_empty().then_some(coords)
    }

    /// A combination of the inserted generators equal to `v`, if any.
    pub fn solve(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (res, _, combo) = self.reduce_tracked(v);
        res.is_empty().then_some(combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Image and kernel of the linear map sending generator `j` to `columns[j]`.
pub struct LinearImage<K> {
    pub image: Echelon<K>,
    pub kernel: Vec<SparseVec<usize>>,
}

impl<K: Ord + Clone> LinearImage<K> {
    pub fn new<'a>(columns: impl IntoIterator<Item = &'a SparseVec<K>>) -> Self
    where
        K: 'a,
    {
        let mut image = Echelon::new();
        let mut kernel = Vec::new();
        for c in columns {
            if let Some(k) = image.insert(c) {
                kernel.push(k);
            }
        }
        LinearImage { image, kernel }
    }

    pub fn rank(&self) -> usize {
        self.image.rank()
    }

    /// A preimage of `target` as a generator combination.
    pub fn preimage(&self, target: &SparseVec<K>) -> Option<SparseVec<usize>> {
        self.image.solve(target)
    }
}

/// Span of sparse vectors over an ordered index set, kept in reduced echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct Span<K> {
    ech: Echelon<K>,
}

impl<K: Ord + Clone> Default for Span<K> {
    fn default() -> Self {
        Span { ech: Echelon::new() }
    }
}

impl<K: Ord + Clone> Span<K> {
    pub fn new<'a>(vectors: impl IntoIterator<Item = &'a SparseVec<K>>) -> Self
    where
        K: 'a,
    {
        let mut ech = Echelon::new();
        for v in vectors {
            ech.insert(v);
        }
        Span { ech }
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> Vec<SparseVec<K>> {
        self.ech.basis().cloned().collect()
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.ech.contains(v)
    }

    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<CScalar>> {
        self.ech.coordinates(v)
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        self.ech.reduce(v)
    }

    pub fn is_within(&self, other: &Span<K>) -> bool {
        self.ech.basis().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Span<K>) -> Span<K> {
        Span::new(self.ech.basis().chain(other.ech.basis()))
    }

    /// Intersection, computed from the kernel of `(u, w) ↦ u − w`.
    pub fn intersect(&self, other: &Span<K>) -> Span<K> {
        let own = self.basis();
        let img = LinearImage::new(own.iter().chain(other.ech.basis()));
        let mut out = Vec::new();
        for combo in &img.kernel {
            let mut v = SparseVec::new();
            for (j, c) in combo {
                if *j < own.len() {
                    axpy(&mut v, c, &own[*j]);
                }
            }
            out.push(v);
        }
        Span::new(out.iter())
    }

    /// Canonical complement of `sub` inside `self`: the subspace of `self`
    /// with zero coefficients at every pivot of `sub`.
    pub fn complement_of(&self, sub: &Span<K>) -> Span<K> {
        let reduced: Vec<SparseVec<K>> = self.ech.basis().map(|v| sub.reduce(v)).collect();
        Span::new(reduced.iter())
    }
}

/// Linear subspace of `k`-forms in dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    dim: usize,
    degree: usize,
    span: Span<MultiIndex>,
}

impl Subspace {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Subspace { dim, degree, span: Span::default() }
    }

    pub fn span<'a>(dim: usize, degree: usize, forms: impl IntoIterator<Item = &'a KForm>) -> Result<Self> {
        let mut vecs = Vec::new();
        for f in forms {
            check_form(dim, degree, f)?;
            vecs.push(f.terms().clone());
        }
        Ok(Subspace { dim, degree, span: Span::new(vecs.iter()) })
    }

    /// All of `Λ^k`.
    pub fn full(dim: usize, degree: usize) -> Self {
        let forms: Vec<KForm> = MultiIndex::all(dim, degree)
            .into_iter()
            .map(|m| KForm::from_terms(dim, degree, [(m, CScalar::one())]))
            .collect();
        Subspace::span(dim, degree, &forms).expect("homogeneous")
    }

    fn from_span(dim: usize, degree: usize, span: Span<MultiIndex>) -> Self {
        Subspace { dim, degree, span }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> Vec<KForm> {
        self.span
            .basis()
            .into_iter()
            .map(|v| KForm::from_terms(self.dim, self.degree, v))
            .collect()
    }

    pub fn contains(&self, v: &KForm) -> bool {
        v.dim() == self.dim && v.degree() == self.degree && self.span.contains(v.terms())
    }

    /// Coordinates of `v` in [`Subspace::basis`], or `None` if `v` is outside the span.
    pub fn solve_membership(&self, v: &KForm) -> Result<Option<Vec<CScalar>>> {
        check_form(self.dim, self.degree, v)?;
        Ok(self.span.coordinates(v.terms()))
    }

    /// Normal form of `v` modulo the subspace.
    pub fn reduce(&self, v: &KForm) -> KForm {
        KForm::from_terms(self.dim, self.degree, self.span.reduce(v.terms()))
    }

    pub fn is_within(&self, other: &Subspace) -> bool {
        self.span.is_within(&other.span)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_span(self.dim, self.degree, self.span.sum(&other.span))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        Subspace::from_span(self.dim, self.degree, self.span.intersect(&other.span))
    }

    /// Subspace of real forms spanned by real and imaginary parts of the basis.
    pub fn realify(&self) -> Subspace {
        let mut forms = Vec::new();
        for b in self.basis() {
            forms.push(b.re());
            forms.push(b.im());
        }
        Subspace::span(self.dim, self.degree, &forms).expect("same space")
    }

    /// Kernel of a linear map restricted to this subspace, given images of the basis.
    pub fn kernel_of(&self, images: &[KForm]) -> Subspace {
        let basis = self.basis();
        assert_eq!(basis.len(), images.len());
        let cols: Vec<SparseVec<MultiIndex>> = images.iter().map(|f| f.terms().clone()).collect();
        let img = LinearImage::new(cols.iter());
        let forms: Vec<KForm> = img.kernel.iter().map(|c| combine(&basis, c, self.dim, self.degree)).collect();
        Subspace::span(self.dim, self.degree, &forms).expect("homogeneous")
    }
}

/// Representatives for a complement of `b` inside `z`.
///
/// The result is the canonical complement: the unique reduced-echelon subspace
/// of `z` whose forms have no component on the pivot monomials of `b`.
pub fn quotient_basis(z: &Subspace, b: &Subspace) -> Result<Subspace> {
    if z.dim != b.dim || z.degree != b.degree {
        return Err(Error::DegreeMismatch { expected: z.degree, found: b.degree });
    }
    if !b.is_within(z) {
        return Err(Error::NotASubspace);
    }
    Ok(Subspace::from_span(z.dim, z.degree, z.span.complement_of(&b.span)))
}

/// `Σ c_j basis[j]`.
pub fn combine(basis: &[KForm], combo: &SparseVec<usize>, dim: usize, degree: usize) -> KForm {
    let mut out = KForm::zero(dim, degree);
    for (j, c) in combo {
        out.axpy(c, &basis[*j]);
    }
    out
}

fn check_form(dim: usize, degree: usize, f: &KForm) -> Result<()> {
    if f.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: f.dim() });
    }
    if f.degree() != degree {
        return Err(Error::DegreeMismatch { expected: degree, found: f.degree() });
    }
    Ok(())
}

/// Coordinates of a vector in the standard basis as a sparse vector.
pub fn sparse_from_dense(v: &[CScalar]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn dense_from_sparse(v: &SparseVec<usize>, len: usize) -> Vec<CScalar> {
    let mut out = vec![CScalar::zero(); len];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::e;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        int(v)
    }

    #[test]
    fn dense_inverse_and_det() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(5), q(3)]]);
        assert_eq!(m.det(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let s = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.rank(), 1);
        assert_eq!(s.det(), q(0));
    }

    #[test]
    fn sylvester_criterion() {
        let pd = Matrix::from_rows(vec![vec![q(2), q(-1)], vec![q(-1), q(2)]]);
        assert!(pd.is_positive_definite());
        let indefinite = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(1)]]);
        assert!(!indefinite.is_positive_definite());
    }

    #[test]
    fn membership_examples() {
        let s = Subspace::span(4, 2, &[e(4, &[1, 2]), e(4, &[3, 4])]).unwrap();
        let c = s.solve_membership(&e(4, &[1, 2]).scale_q(&q(2))).unwrap().unwrap();
        assert_eq!(c, vec![CScalar::from_int(2), CScalar::from_int(0)]);
        let s1 = Subspace::span(4, 2, &[e(4, &[1, 2])]).unwrap();
        assert_eq!(s1.solve_membership(&e(4, &[1, 3])).unwrap(), None);
        assert!(matches!(s1.solve_membership(&e(4, &[1])), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn quotient_examples() {
        let z = Subspace::span(4, 2, &[e(4, &[1, 2]), e(4, &[1, 3])]).unwrap();
        let b = Subspace::span(4, 2, &[e(4, &[1, 3])]).unwrap();
        assert_eq!(quotient_basis(&z, &b).unwrap().basis(), vec![e(4, &[1, 2])]);
        assert_eq!(quotient_basis(&z, &z).unwrap().dim(), 0);
        let outside = Subspace::span(4, 2, &[e(4, &[2, 4])]).unwrap();
        assert!(matches!(quotient_basis(&z, &outside), Err(Error::NotASubspace)));
    }

    #[test]
    fn kernel_and_preimage_tracking() {
        // columns: e12, e13, e12 + e13  → kernel spanned by (1, 1, -1)
        let cols: Vec<SparseVec<MultiIndex>> =
            vec![e(3, &[1, 2]).terms().clone(), e(3, &[1, 3]).terms().clone(), (&e(3, &[1, 2]) + &e(3, &[1, 3])).terms().clone()];
        let img = LinearImage::new(cols.iter());
        assert_eq!(img.rank(), 2);
        assert_eq!(img.kernel.len(), 1);
        let k = &img.kernel[0];
        assert_eq!(k.get(&2), Some(&CScalar::one()));
        assert_eq!(k.get(&0), Some(&-CScalar::one()));
        let target = e(3, &[1, 3]).scale_q(&frac(1, 2));
        let pre = img.preimage(target.terms()).unwrap();
        let mut back = KForm::zero(3, 2);
        for (j, c) in &pre {
            back.axpy(c, &KForm::from_terms(3, 2, cols[*j].clone()));
        }
        assert_eq!(back, target);
    }

    fn arb_forms(n: usize) -> impl Strategy<Value = Vec<KForm>> {
        proptest::collection::vec(crate::form::tests::arb_form(4, 2), n)
    }

    proptest! {
        #[test]
        fn membership_of_basis_is_unit((gens, extra) in (arb_forms(4), arb_forms(2))) {
            let s = Subspace::span(4, 2, &gens).unwrap();
            for (i, b) in s.basis().iter().enumerate() {
                let c = s.solve_membership(b).unwrap().unwrap();
                for (j, x) in c.iter().enumerate() {
                    prop_assert_eq!(x.clone(), if i == j { CScalar::one() } else { CScalar::zero() });
                }
            }
            // reconstruction reproduces the vector
            for g in &gens {
                let c = s.solve_membership(g).unwrap().unwrap();
                let back = combine(&s.basis(), &sparse_from_dense(&c), 4, 2);
                prop_assert_eq!(&back, g);
            }
            let _ = extra;
        }

        #[test]
        fn quotient_dimension_is_difference((gb, gz) in (arb_forms(3), arb_forms(3))) {
            let b = Subspace::span(4, 2, &gb).unwrap();
            let z = Subspace::span(4, 2, gb.iter().chain(&gz)).unwrap();
            let h = quotient_basis(&z, &b).unwrap();
            prop_assert_eq!(h.dim(), z.dim() - b.dim());
            prop_assert_eq!(h.sum(&b).dim(), z.dim());
            prop_assert_eq!(h.intersect(&b).dim(), 0);
        }
    }
}
