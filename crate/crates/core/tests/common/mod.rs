#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use purefull::acs::Acs;
use purefull::catalog;
use purefull::families;
use purefull::form::{KForm, MultiIndex};
use purefull::lie::LieAlgebra;
use purefull::linalg::Matrix;
use purefull::manifest::Loaded;
use purefull::scalar::{frac, int};
use purefull::symplectic::{self, Metric, SymplecticStar};
use purefull::{CScalar, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every catalog entry that satisfies the Jacobi identity, evaluated.
pub fn entries() -> Vec<Loaded> {
    catalog::list()
        .into_iter()
        .filter_map(|n| catalog::load(n).unwrap().load().ok())
        .collect()
}

/// An almost complex structure on a catalog algebra, with a calibrating form when one is named.
pub struct Pair {
    pub label: String,
    pub lie: LieAlgebra,
    pub acs: Acs,
    pub omega: Option<KForm>,
}

/// Named structures plus every constructible family member.
pub fn pairs() -> Vec<Pair> {
    let mut out = Vec::new();
    for l in entries() {
        let omegas: Vec<KForm> = l.forms.values().filter(|f| f.degree() == 2 && symplectic::is_nondegenerate(f).unwrap_or(false)).cloned().collect();
        let calibrating = |j: &Acs| omegas.iter().find(|w| symplectic::is_calibrated(w, j)).cloned();
        for (name, j) in &l.acs {
            out.push(Pair { label: format!("{}/{name}", l.manifest.name), lie: l.lie.clone(), acs: j.clone(), omega: calibrating(j) });
        }
        for (fname, spec) in &l.families {
            for values in spec.samples().unwrap() {
                if let Ok((j, _)) = spec.construct(&values) {
                    let at: Vec<String> = values.iter().map(purefull::expr::rational_text).collect();
                    out.push(Pair { label: format!("{}/{fname}({})", l.manifest.name, at.join(",")), lie: l.lie.clone(), omega: calibrating(&j), acs: j });
                }
            }
        }
    }
    out
}

/// Betti numbers by dense Gaussian elimination on matrices built straight from the
/// structure constants; shares nothing with the sparse cohomology path.
pub fn dense_betti(de: &[KForm]) -> Vec<usize> {
    let n = de.len();
    // c[k] = list of (i, j, coefficient) with de^k = Σ c e^i ∧ e^j, i < j
    let c: Vec<Vec<(usize, usize, Rational)>> = de
        .iter()
        .map(|f| {
            let mut v = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let x = f.coeff(MultiIndex::from_mask((1 << i) | (1 << j)));
                    assert!(x.is_real());
                    if !x.re.is_zero() {
                        v.push((i, j, x.re));
                    }
                }
            }
            v
        })
        .collect();
    let subsets = |k: usize| -> Vec<u32> { (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).collect() };
    let rank_of = |k: usize| -> usize {
        if k >= n {
            return 0;
        }
        let src = subsets(k);
        let dst = subsets(k + 1);
        let mut mat = vec![vec![Rational::zero(); src.len()]; dst.len()];
        for (col, &m) in src.iter().enumerate() {
            // d(e^{i1}∧…∧e^{ik}) = Σ_r (−1)^r e^{i1}∧…∧de^{ir}∧…∧e^{ik}
            let idx: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
            for (r, &ir) in idx.iter().enumerate() {
                for (a, b, coef) in &c[ir] {
                    let mut seq: Vec<usize> = idx[..r].to_vec();
                    seq.extend([*a, *b]);
                    seq.extend(&idx[r + 1..]);
                    let Some(perm) = permutation_sign(&seq) else { continue };
                    let s = if r % 2 == 0 { perm } else { -perm };
                    let target: u32 = seq.iter().map(|i| 1u32 << i).sum();
                    let row = dst.iter().position(|&x| x == target).unwrap();
                    mat[row][col] += Rational::from_integer(BigInt::from(s)) * coef;
                }
            }
        }
        dense_rank(mat)
    };
    let ranks: Vec<usize> = (0..=n).map(rank_of).collect();
    (0..=n)
        .map(|k| {
            let dim = subsets(k).len();
            dim - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }
        })
        .collect()
}

/// Sign of the sorting permutation, `None` on a repeated index.
fn permutation_sign(seq: &[usize]) -> Option<i64> {
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return None;
            }
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                let pivot_row = m[r].clone();
                for (x, p) in m[i][c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    frac(rng.gen_range(-span..=span), rng.gen_range(1..=3))
}

pub fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> KForm {
    let mut f = KForm::zero(n, k);
    for m in MultiIndex::all(n, k) {
        if rng.gen_bool(0.6) {
            f.add_term(m, CScalar::real(small_rational(rng, 3)));
        }
    }
    f
}

pub fn random_nondegenerate(rng: &mut ChaCha8Rng, n: usize) -> KForm {
    loop {
        let w = random_form(rng, n, 2);
        if symplectic::is_nondegenerate(&w).unwrap() {
            return w;
        }
    }
}

/// `PᵀP` for a random invertible `P`, so that `det` is a rational square.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    loop {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { int(rng.gen_range(1..=3)) } else { small_rational(rng, 2) }).collect()).collect();
        let p = Matrix::from_rows(rows);
        if !p.det().is_zero() {
            return p.transpose().mul(&p);
        }
    }
}

/// `X + J X J`, which anticommutes with `J`; entries scaled down to stay in the chart.
pub fn random_anticommuting(rng: &mut ChaCha8Rng, j: &Matrix<Rational>, scale: Rational) -> Matrix<Rational> {
    let n = j.rows();
    let x = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| small_rational(rng, 2)).collect()).collect());
    x.add(&j.mul(&x).mul(j)).scale(&scale)
}

pub fn random_anti_invariant(rng: &mut ChaCha8Rng, j: &Acs) -> KForm {
    j.pi2002_real(&random_form(rng, j.dim(), 2))
}

pub fn d_squared_vanishes(lie: &LieAlgebra) -> bool {
    let n = lie.dim();
    (0..=n).all(|k| MultiIndex::all(n, k).into_iter().all(|m| lie.d(&lie.d(&KForm::from_terms(n, k, [(m, CScalar::one())]))).is_zero()))
}

/// Every basis `(p,q)`-form of every degree.
pub fn pq_forms(j: &Acs) -> Vec<KForm> {
    let m = j.dim() / 2;
    let mut out = Vec::new();
    for p in 0..=m {
        for q in 0..=m {
            out.extend(j.pq_basis(p, q));
        }
    }
    out
}

pub fn seven_identities_hold(pair: &Pair) -> bool {
    pq_forms(&pair.acs).iter().all(|f| pair.acs.splitting_identities(&pair.lie, f).iter().all(KForm::is_zero))
}

/// `(A + Ā)α (X, Y) = ¼ α(N(X, Y))` on basis vectors.
pub fn quarter_relation(lie: &LieAlgebra, j: &Acs, alpha: &KForm) -> bool {
    let n = lie.dim();
    let s = j.split_d_any(lie, alpha);
    let lhs = &s.a + &s.abar;
    let unit = |k: usize| (0..n).map(|r| if r == k { CScalar::one() } else { CScalar::zero() }).collect::<Vec<_>>();
    j.nijenhuis(lie).into_iter().all(|((x, y), v)| {
        let nv: Vec<CScalar> = v.into_iter().map(CScalar::real).collect();
        lhs.eval(&[unit(x), unit(y)]) == alpha.eval(&[nv]).scale(&frac(1, 4))
    })
}

pub fn lefschetz_all_degrees(omega: &KForm) -> bool {
    (0..=omega.dim() / 2).all(|k| symplectic::is_lefschetz_iso(omega, k).unwrap())
}

/// `**β = (−1)^{k(n−k)} β`.
pub fn double_star_sign(g: &Metric, beta: &KForm) -> bool {
    let (n, k) = (beta.dim(), beta.degree());
    let sign = if (k * (n - k)) % 2 == 0 { int(1) } else { int(-1) };
    g.star(&g.star(beta)) == beta.scale_q(&sign)
}

/// `α ∧ *β = ⟨α, β⟩ vol` and `⟨*α, *β⟩ = ⟨α, β⟩`.
pub fn star_isometry(g: &Metric, a: &KForm, b: &KForm) -> bool {
    let ip = g.inner(a, b);
    a.wedge(&g.star(b)) == g.volume().scale(&ip) && g.inner(&g.star(a), &g.star(b)) == ip
}

/// `*_ω = i^{p−q} *_g` on basis `(p,q)`-forms and `d(*_ω ω) = 0`.
pub fn brylinski(lie: &LieAlgebra, j: &Acs, omega: &KForm) -> bool {
    let g = symplectic::metric_from(omega, j).unwrap();
    let star = SymplecticStar::new(omega).unwrap();
    let m = j.dim() / 2;
    let twisted = (0..=m).all(|p| {
        (0..=m).all(|q| j.pq_basis(p, q).iter().all(|a| star.apply(a) == g.star(a).scale(&CScalar::i_pow(p as i64 - q as i64))))
    });
    twisted && lie.d(&star.apply(omega)).is_zero()
}

/// Checks of `J_α` against `(J, g)`: involution, isometry, skewness, anticommutation,
/// and in dimension 4 the corrected adjoint identity and the `g`-symmetric part of `J_α^* J`.
pub fn j_alpha_properties(j: &Acs, g: &Matrix<Rational>, alpha: &KForm) -> Result<(), String> {
    let n = j.dim();
    let k = families::k_alpha(g, alpha, j).map_err(|e| e.to_string())?;
    let ja = families::j_alpha(j, g, alpha).map_err(|e| e.to_string())?;
    let jm = ja.matrix();
    let id = Matrix::identity(n);
    if jm.mul(jm) != id.neg() {
        return Err("J_alpha^2 != -1".into());
    }
    if jm.transpose().mul(g).mul(jm) != *g {
        return Err("not an isometry".into());
    }
    if !g.mul(&k).is_antisymmetric() {
        return Err("K_alpha not skew-adjoint".into());
    }
    if j.matrix().mul(&k) != k.mul(j.matrix()).neg() {
        return Err("J K != -K J".into());
    }
    for x in 0..n {
        let ex: Vec<Rational> = (0..n).map(|r| if r == x { int(1) } else { int(0) }).collect();
        let jx = j.apply(&ex);
        let kx = k.mul_vec(&ex);
        let gv = g.mul_vec(&kx);
        let dot: Rational = jx.iter().zip(&gv).map(|(a, b)| a * b).sum();
        if !dot.is_zero() {
            return Err("g(JX, KX) != 0".into());
        }
    }
    if n == 4 {
        let s = families::alpha_norm_sq(&k).ok_or("K^2 not scalar in dimension 4")?;
        let one = Rational::one();
        let den = (&one + &s) * (&one + &s);
        let star = families::adjoint(g, jm);
        let lhs = star.mul(j.matrix()).mul(jm);
        let c = (&one - int(6) * &s + &s * &s) / &den;
        let rhs = j.matrix().scale(&c).add(&k.scale(&(int(4) * (&s - &one) / &den)));
        if lhs != rhs {
            return Err("adjoint identity".into());
        }
        let m = star.mul(j.matrix());
        let sym = m.add(&families::adjoint(g, &m)).scale(&frac(1, 2));
        if sym != id.scale(&((&one - &s) / (&one + &s))) {
            return Err("symmetric part of J_alpha^* J".into());
        }
        if jm != &families::j_alpha_closed_form(j.matrix(), &k, &s) {
            return Err("closed form".into());
        }
    }
    Ok(())
}

/// The identity `J_α^* J J_α = J + 4(s−1)/(1+s)² K_α` exactly as usually stated.
pub fn stated_adjoint_identity(j: &Acs, g: &Matrix<Rational>, alpha: &KForm) -> bool {
    let k = families::k_alpha(g, alpha, j).unwrap();
    let ja = families::j_alpha(j, g, alpha).unwrap();
    let s = families::alpha_norm_sq(&k).unwrap();
    let one = Rational::one();
    let den = (&one + &s) * (&one + &s);
    let lhs = families::adjoint(g, ja.matrix()).mul(j.matrix()).mul(ja.matrix());
    lhs == j.matrix().add(&k.scale(&(int(4) * (&s - &one) / den)))
}

pub fn audin_round_trip(j0: &Matrix<Rational>, l: &Matrix<Rational>) -> Option<bool> {
    let j = families::audin_tamed(j0, l).ok()?;
    Some(families::audin_chart(&j, j0).ok()? == *l)
}

pub fn abs_small(q: &Rational) -> bool {
    q.abs() < int(1)
}
