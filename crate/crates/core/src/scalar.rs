//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact square root of a non-negative rational, when it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Renders a rational the way the expression grammar reads it back (`-3/2`, `5`).
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Gaussian rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CScalar {
    pub re: Rational,
    pub im: Rational,
}

impl CScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        CScalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CScalar { re, im: Rational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(int(v))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        CScalar { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CScalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero");
        CScalar { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CScalar { re: &self.re * q, im: &self.im * q }
    }
}

impl Zero for CScalar {
    fn zero() -> Self {
        CScalar::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CScalar {
    fn one() -> Self {
        CScalar::real(Rational::one())
    }
}

impl From<Rational> for CScalar {
    fn from(q: Rational) -> Self {
        CScalar::real(q)
    }
}

impl From<i64> for CScalar {
    fn from(v: i64) -> Self {
        CScalar::from_int(v)
    }
}

impl<'a> Add<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn add(self, o: &CScalar) -> CScalar {
        CScalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn sub(self, o: &CScalar) -> CScalar {
        CScalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn mul(self, o: &CScalar) -> CScalar {
        if self.im.is_zero() && o.im.is_zero() {
            return CScalar::real(&self.re * &o.re);
        }
        CScalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn div(self, o: &CScalar) -> CScalar {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero");
            return CScalar { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CScalar> for CScalar {
            type Output = CScalar;
            fn $m(self, o: CScalar) -> CScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CScalar> for CScalar {
            type Output = CScalar;
            fn $m(self, o: &CScalar) -> CScalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&CScalar> for CScalar {
    fn add_assign(&mut self, o: &CScalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&CScalar> for CScalar {
    fn sub_assign(&mut self, o: &CScalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&CScalar> for CScalar {
    fn mul_assign(&mut self, o: &CScalar) {
        *self = &*self * o;
    }
}

impl Neg for CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
            }
        }
    }
}

impl fmt::Debug for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact field operations needed by the dense matrix routines.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One {
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fdiv(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
}

impl Field for Rational {
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fdiv(&self, o: &Self) -> Self {
        self / o
    }
    fn fneg(&self) -> Self {
        -self
    }
}

impl Field for CScalar {
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fdiv(&self, o: &Self) -> Self {
        self / o
    }
    fn fneg(&self) -> Self {
        -self
    }
}
