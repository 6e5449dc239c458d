//! Almost complex structures on a Lie algebra.
//!
//! Conventions, used everywhere in the crate:
//! - `J` is stored as the matrix acting on vectors: column `j` is `J e_j`.
//! - On 1-forms `(Jα)(X) = −α(JX)`; as a matrix on coframe coefficients this is `−Jᵀ`,
//!   the "coframe-action" matrix accepted by [`Acs::from_coframe_matrix`].
//! - `α` is of type (1,0) iff `α(JX) = iα(X)`, i.e. `Jα = −iα`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::{KForm, MultiIndex};
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{frac, CScalar, Rational};

/// Bidegree `(p, q)`.
pub type Bidegree = (usize, usize);

type TypeParts = Vec<(Bidegree, KForm)>;

#[derive(Clone, Debug)]
pub struct Acs {
    j: Matrix<Rational>,
    /// (1,0)-coframe `θ^1, …, θ^m`.
    coframe: Vec<KForm>,
    /// `e^j = Σ_r sub[j][r] ϑ^r` with `ϑ = (θ, θ̄)`.
    sub: Vec<KForm>,
    /// `ϑ^r` expressed in the `e` basis.
    theta: Vec<KForm>,
    parts: Vec<OnceLock<TypeParts>>,
}

impl PartialEq for Acs {
    fn eq(&self, o: &Self) -> bool {
        self.j == o.j
    }
}

impl Acs {
    /// From the matrix acting on vectors.
    pub fn new(j: Matrix<Rational>) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::DimensionMismatch { left: j.rows(), right: j.cols() });
        }
        let n = j.rows();
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        if j.mul(&j) != Matrix::identity(n).neg() {
            return Err(Error::NotAnAcs);
        }
        let coframe = coframe_of(&j);
        Ok(Self::assemble(j, coframe))
    }

    /// From the matrix acting on coframe coefficients (`α ↦ Jα`), the form most displays use.
    pub fn from_coframe_matrix(m: &Matrix<Rational>) -> Result<Self> {
        Self::new(m.transpose().neg())
    }

    /// The unique `J` making the given forms (and only their span) of type (1,0).
    pub fn from_coframe(forms: &[KForm]) -> Result<Self> {
        let m = forms.len();
        let n = forms.first().map_or(0, KForm::dim);
        if n != 2 * m {
            return Err(Error::DimensionMismatch { left: n, right: 2 * m });
        }
        for f in forms {
            if f.degree() != 1 || f.dim() != n {
                return Err(Error::DegreeMismatch { expected: 1, found: f.degree() });
            }
        }
        let coeffs = |f: &KForm, im: bool| -> Vec<Rational> {
            (0..n)
                .map(|i| {
                    let c = f.coeff(MultiIndex::single(i));
                    if im {
                        c.im
                    } else {
                        c.re
                    }
                })
                .collect()
        };
        let mut r = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        for f in forms {
            r.push(coeffs(f, false));
            s.push(coeffs(f, true).into_iter().map(|x| -x).collect());
        }
        for f in forms {
            r.push(coeffs(f, true));
            s.push(coeffs(f, false));
        }
        let r = Matrix::from_rows(r);
        let rinv = r.inverse().ok_or(Error::DegenerateCoframe)?;
        let v = rinv.mul(&Matrix::from_rows(s));
        let acs = Self::assemble(v, forms.to_vec());
        debug_assert!(acs.j.mul(&acs.j) == Matrix::identity(n).neg());
        Ok(acs)
    }

    fn assemble(j: Matrix<Rational>, coframe: Vec<KForm>) -> Self {
        let n = j.rows();
        let mut theta = coframe.clone();
        theta.extend(coframe.iter().map(KForm::conj));
        let c = Matrix::from_fn(n, n, |r, i| theta[r].coeff(MultiIndex::single(i)));
        let cinv = c.inverse().expect("a (1,0)-coframe and its conjugate form a basis");
        let sub = (0..n).map(|jj| KForm::one_form(&(0..n).map(|r| cinv[(jj, r)].clone()).collect::<Vec<_>>())).collect();
        Acs { j, coframe, sub, theta, parts: (0..1usize << n).map(|_| OnceLock::new()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    /// Matrix acting on vectors.
    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.j
    }

    /// Matrix acting on coframe coefficients.
    pub fn coframe_matrix(&self) -> Matrix<Rational> {
        self.j.transpose().neg()
    }

    pub fn coframe(&self) -> &[KForm] {
        &self.coframe
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.j.mul_vec(x)
    }

    /// `(Jα)(X) = −α(JX)` on 1-forms.
    pub fn act_on_1form(&self, a: &KForm) -> KForm {
        assert_eq!(a.degree(), 1);
        let n = self.dim();
        let coeffs: Vec<CScalar> = (0..n)
            .map(|jj| {
                let mut s = CScalar::zero();
                for i in 0..n {
                    let ai = a.coeff(MultiIndex::single(i));
                    if !ai.is_zero() && !self.j[(i, jj)].is_zero() {
                        s -= &ai.scale(&self.j[(i, jj)]);
                    }
                }
                s
            })
            .collect();
        KForm::one_form(&coeffs)
    }

    /// `(J^*φ)(X_1, …) = φ(JX_1, …)`.
    pub fn pullback(&self, f: &KForm) -> KForm {
        let n = self.dim();
        let images: Vec<KForm> = (0..n)
            .map(|i| KForm::one_form(&(0..n).map(|jj| CScalar::real(self.j[(i, jj)].clone())).collect::<Vec<_>>()))
            .collect();
        f.substitute(&images)
    }

    pub fn is_invariant(&self, f: &KForm) -> bool {
        &self.pullback(f) == f
    }

    pub fn is_anti_invariant(&self, f: &KForm) -> bool {
        self.pullback(f) == -f
    }

    /// `½(α + J^*α)` for a real 2-form.
    pub fn pi11_real(&self, a: &KForm) -> KForm {
        (a + &self.pullback(a)).scale_q(&frac(1, 2))
    }

    /// `α − π_{1,1}α` for a real 2-form.
    pub fn pi2002_real(&self, a: &KForm) -> KForm {
        a - &self.pi11_real(a)
    }

    fn monomial_parts(&self, m: MultiIndex) -> &TypeParts {
        self.parts[m.mask() as usize].get_or_init(|| {
            let n = self.dim();
            let half = n / 2;
            let k = m.degree();
            // expand in ϑ-coordinates, then group by the number of θ̄ factors
            let in_theta = KForm::from_terms(n, k, [(m, CScalar::one())]).substitute(&self.sub);
            let mut groups: BTreeMap<Bidegree, KForm> = BTreeMap::new();
            for (mm, c) in in_theta.terms() {
                let q = mm.indices().filter(|&r| r >= half).count();
                groups.entry((k - q, q)).or_insert_with(|| KForm::zero(n, k)).add_term(*mm, c.clone());
            }
            groups.into_iter().map(|(t, f)| (t, f.substitute(&self.theta))).filter(|(_, f)| !f.is_zero()).collect()
        })
    }

    /// All nonzero `(p, q)` components; they sum to `f`.
    pub fn decompose(&self, f: &KForm) -> BTreeMap<Bidegree, KForm> {
        let mut out: BTreeMap<Bidegree, KForm> = BTreeMap::new();
        for (m, c) in f.terms() {
            for (t, part) in self.monomial_parts(*m) {
                out.entry(*t).or_insert_with(|| KForm::zero(f.dim(), f.degree())).axpy(c, part);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn project(&self, f: &KForm, p: usize, q: usize) -> Result<KForm> {
        if p + q != f.degree() {
            return Err(Error::DegreeMismatch { expected: f.degree(), found: p + q });
        }
        Ok(self.decompose(f).remove(&(p, q)).unwrap_or_else(|| KForm::zero(f.dim(), f.degree())))
    }

    /// The bidegree of a nonzero form of pure type.
    pub fn pure_type(&self, f: &KForm) -> Option<Bidegree> {
        let d = self.decompose(f);
        (d.len() == 1).then(|| *d.keys().next().unwrap())
    }

    /// Basis `θ^I ∧ θ̄^J` of `(p, q)`-forms, in the `e` basis.
    pub fn pq_basis(&self, p: usize, q: usize) -> Vec<KForm> {
        let n = self.dim();
        let half = n / 2;
        let mut out = Vec::new();
        for i in MultiIndex::all(half, p) {
            for jj in MultiIndex::all(half, q) {
                let mut f = KForm::constant(n, CScalar::one());
                for r in i.indices() {
                    f = f.wedge(&self.theta[r]);
                }
                for r in jj.indices() {
                    f = f.wedge(&self.theta[half + r]);
                }
                out.push(f);
            }
        }
        out
    }

    /// `N(e_i, e_j)` for `i < j`.
    pub fn nijenhuis(&self, lie: &LieAlgebra) -> Vec<((usize, usize), Vec<Rational>)> {
        let n = self.dim();
        assert_eq!(lie.dim(), n);
        let jv: Vec<Vec<Rational>> = (0..n).map(|i| self.apply(&lie.basis_vector(i))).collect();
        let mut out = Vec::new();
        for i in 0..n {
            for jj in i + 1..n {
                let x = lie.basis_vector(i);
                let y = lie.basis_vector(jj);
                let t1 = lie.bracket(&jv[i], &jv[jj]);
                let t2 = self.apply(&lie.bracket(&jv[i], &y));
                let t3 = self.apply(&lie.bracket(&x, &jv[jj]));
                let t4 = lie.bracket(&x, &y);
                let v: Vec<Rational> = (0..n).map(|k| &t1[k] - &t2[k] - &t3[k] - &t4[k]).collect();
                out.push(((i, jj), v));
            }
        }
        out
    }

    pub fn is_integrable(&self, lie: &LieAlgebra) -> bool {
        self.nijenhuis(lie).iter().all(|(_, v)| v.iter().all(Zero::is_zero))
    }

    /// The four components of `dφ` for `φ` of pure type.
    pub fn split_d(&self, lie: &LieAlgebra, f: &KForm) -> Result<SplitD> {
        if f.is_zero() {
            let z = KForm::zero(f.dim(), f.degree() + 1);
            return Ok(SplitD { a: z.clone(), del: z.clone(), delbar: z.clone(), abar: z });
        }
        let (p, q) = self.pure_type(f).ok_or_else(|| {
            let types: Vec<String> = self.decompose(f).keys().map(|(p, q)| format!("({p},{q})")).collect();
            Error::NotPureType(types.join("+"))
        })?;
        let mut parts = self.decompose(&lie.d(f));
        let mut take = |t: Option<Bidegree>| {
            t.and_then(|t| parts.remove(&t)).unwrap_or_else(|| KForm::zero(f.dim(), f.degree() + 1))
        };
        let a = take(q.checked_sub(1).map(|q1| (p + 2, q1)));
        let del = take(Some((p + 1, q)));
        let delbar = take(Some((p, q + 1)));
        let abar = take(p.checked_sub(1).map(|p1| (p1, q + 2)));
        debug_assert!(parts.is_empty(), "d shifts bidegree by at most (2,-1)/(-1,2)");
        Ok(SplitD { a, del, delbar, abar })
    }

    /// The four operators applied to an arbitrary form, summed over its components.
    pub fn split_d_any(&self, lie: &LieAlgebra, f: &KForm) -> SplitD {
        let z = KForm::zero(f.dim(), f.degree() + 1);
        let mut acc = SplitD { a: z.clone(), del: z.clone(), delbar: z.clone(), abar: z };
        for part in self.decompose(f).values() {
            let s = self.split_d(lie, part).expect("component of pure type");
            acc.a = &acc.a + &s.a;
            acc.del = &acc.del + &s.del;
            acc.delbar = &acc.delbar + &s.delbar;
            acc.abar = &acc.abar + &s.abar;
        }
        acc
    }

    /// Residuals of the seven identities obtained by splitting `d² = 0` by bidegree:
    /// `A²`, `A∂+∂A`, `A∂̄+∂²+∂̄A`, `AĀ+∂∂̄+∂̄∂+ĀA`, `∂Ā+∂̄²+Ā∂`, `∂̄Ā+Ā∂̄`, `Ā²`.
    /// All vanish for every input.
    pub fn splitting_identities(&self, lie: &LieAlgebra, f: &KForm) -> [KForm; 7] {
        let s = self.split_d_any(lie, f);
        let a = self.split_d_any(lie, &s.a);
        let d = self.split_d_any(lie, &s.del);
        let db = self.split_d_any(lie, &s.delbar);
        let ab = self.split_d_any(lie, &s.abar);
        let sum = |xs: &[&KForm]| xs.iter().skip(1).fold(xs[0].clone(), |acc, x| &acc + x);
        [
            a.a.clone(),
            sum(&[&d.a, &a.del]),
            sum(&[&db.a, &d.del, &a.delbar]),
            sum(&[&ab.a, &db.del, &d.delbar, &a.abar]),
            sum(&[&ab.del, &db.delbar, &d.abar]),
            sum(&[&ab.delbar, &db.abar]),
            ab.abar.clone(),
        ]
    }

    /// Symmetric endomorphisms anticommuting with `J` are the tangent directions of the Audin chart.
    pub fn anticommutes(&self, l: &Matrix<Rational>) -> bool {
        self.j.mul(l) == l.mul(&self.j).neg()
    }
}

/// `dφ = A φ + ∂ φ + ∂̄ φ + Ā φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitD {
    pub a: KForm,
    pub del: KForm,
    pub delbar: KForm,
    pub abar: KForm,
}

impl SplitD {
    pub fn total(&self) -> KForm {
        &(&(&self.a + &self.del) + &self.delbar) + &self.abar
    }
}

/// A (1,0)-coframe: greedily `u − i·uJ` over basis covectors `u = e^j`.
fn coframe_of(j: &Matrix<Rational>) -> Vec<KForm> {
    let n = j.rows();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::new();
    for s in 0..n {
        if out.len() == n / 2 {
            break;
        }
        let u: Vec<Rational> = (0..n).map(|i| if i == s { Rational::one() } else { Rational::zero() }).collect();
        let uj: Vec<Rational> = (0..n).map(|c| j[(s, c)].clone()).collect();
        let mut trial = rows.clone();
        trial.push(u.clone());
        trial.push(uj.clone());
        if Matrix::from_rows(trial.clone()).rank() == trial.len() {
            rows = trial;
            let coeffs: Vec<CScalar> = u.iter().zip(&uj).map(|(a, b)| CScalar::new(a.clone(), -b.clone())).collect();
            out.push(KForm::one_form(&coeffs));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::e;
    use crate::scalar::int;

    fn c(re: i64, im: i64) -> CScalar {
        CScalar::new(int(re), int(im))
    }

    fn one(n: usize, re: usize, im: usize) -> KForm {
        &e(n, &[re]) + &e(n, &[im]).scale(&CScalar::i())
    }

    pub(crate) fn j0(n: usize) -> Acs {
        Acs::from_coframe(&(0..n / 2).map(|k| one(n, 2 * k + 1, 2 * k + 2)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn coframe_gives_standard_j() {
        let j = j0(4);
        // J e1 = e2
        assert_eq!(j.apply(&[int(1), int(0), int(0), int(0)]), vec![int(0), int(1), int(0), int(0)]);
        let m = Matrix::from_rows(vec![
            vec![int(0), int(-1), int(0), int(0)],
            vec![int(1), int(0), int(0), int(0)],
            vec![int(0), int(0), int(0), int(-1)],
            vec![int(0), int(0), int(1), int(0)],
        ]);
        assert_eq!(j.coframe_matrix(), m);
        assert_eq!(Acs::from_coframe_matrix(&m).unwrap(), j);
    }

    #[test]
    fn one_zero_forms_satisfy_convention() {
        let j = j0(4);
        for t in j.coframe() {
            assert_eq!(j.act_on_1form(t), t.scale(&-CScalar::i()));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Acs::new(Matrix::identity(4)), Err(Error::NotAnAcs)));
        assert!(matches!(Acs::new(Matrix::identity(3)), Err(Error::OddDimension(3))));
        let collapsed = vec![one(4, 1, 2), &e(4, &[1]) - &e(4, &[2]).scale(&CScalar::i())];
        assert!(matches!(Acs::from_coframe(&collapsed), Err(Error::DegenerateCoframe)));
    }

    #[test]
    fn round_trip_through_coframe() {
        let j = Acs::from_coframe(&[one(4, 1, 3), &e(4, &[2]) + &(&e(4, &[4]) + &e(4, &[1])).scale(&c(0, 2))]).unwrap();
        let back = Acs::from_coframe(j.coframe()).unwrap();
        assert_eq!(back.matrix(), j.matrix());
    }

    #[test]
    fn real_projection_matches_coframe_projection() {
        let j = Acs::from_coframe(&[one(4, 1, 2), one(4, 3, 4)]).unwrap();
        for m in MultiIndex::all(4, 2) {
            let a = KForm::from_terms(4, 2, [(m, CScalar::one())]);
            let parts = j.decompose(&a);
            let p11 = parts.get(&(1, 1)).cloned().unwrap_or_else(|| KForm::zero(4, 2));
            assert_eq!(p11, j.pi11_real(&a));
        }
        let omega = &e(4, &[1, 2]) + &e(4, &[3, 4]);
        assert_eq!(j.pi11_real(&omega), omega);
    }

    #[test]
    fn types_of_nilmanifold_forms() {
        // J with η1 = e1 + i e2, η2 = e3 + i e4
        let j = j0(4);
        let a = &e(4, &[1, 3]) + &e(4, &[2, 4]);
        assert_eq!(j.pure_type(&a), Some((1, 1)));
        let b = &e(4, &[1, 3]) - &e(4, &[2, 4]);
        assert_eq!(j.pi2002_real(&b), b);
        let parts = j.decompose(&b);
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![(0, 2), (2, 0)]);
        assert!(j.project(&b, 1, 0).is_err());
    }

    #[test]
    fn abelian_structures_are_integrable() {
        let lie = LieAlgebra::abelian(4);
        assert!(j0(4).is_integrable(&lie));
    }

    #[test]
    fn split_d_rejects_mixed_type() {
        let lie = LieAlgebra::abelian(4);
        let j = j0(4);
        let mixed = &e(4, &[1, 3]) - &e(4, &[2, 4]);
        assert!(matches!(j.split_d(&lie, &mixed), Err(Error::NotPureType(_))));
    }

    fn nil3_a() -> LieAlgebra {
        let mut de = vec![KForm::zero(4, 2); 4];
        de[2] = e(4, &[1, 4]);
        de[3] = e(4, &[1, 2]);
        LieAlgebra::new(de).unwrap()
    }

    #[test]
    fn nijenhuis_quarter_relation() {
        let lie = nil3_a();
        let j = j0(4);
        assert!(!j.is_integrable(&lie));
        let alpha = KForm::one_form(&[c(1, 0), c(-2, 0), c(3, 0), c(1, 0)]);
        let s = j.split_d_any(&lie, &alpha);
        let lhs = &s.a + &s.abar;
        for ((i, jj), v) in j.nijenhuis(&lie) {
            let x = |k: usize| (0..4).map(|r| if r == k { CScalar::one() } else { CScalar::zero() }).collect::<Vec<_>>();
            let nv: Vec<CScalar> = v.iter().map(|q| CScalar::real(q.clone())).collect();
            assert_eq!(lhs.eval(&[x(i), x(jj)]), alpha.eval(&[nv]).scale(&frac(1, 4)));
        }
        for id in j.splitting_identities(&lie, &alpha) {
            assert!(id.is_zero());
        }
    }
}
