//! Exact-or-approximate scalars for pointwise evaluation.
//!
//! Values stay exact rationals as long as possible; only `sqrt` of a
//! non-square and `atan` push a computation into arbitrary-precision floats.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{Signed, Zero};

use super::rational::{fmt_q, rational_sqrt, Q};
use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 50;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Q),
    Approx(BigFloat),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Q::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Q> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Approx(_) => None,
        }
    }

    /// Nearest `f64`, for reporting only.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => {
                use num_traits::ToPrimitive;
                q.to_f64().unwrap_or(f64::NAN)
            }
            Scalar::Approx(f) => {
                if f.is_zero() {
                    0.0
                } else {
                    f.to_string().parse().unwrap_or(f64::NAN)
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", fmt_q(q)),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Precision context for approximate arithmetic.
pub struct Numeric {
    digits: u32,
    bits: usize,
    consts: RefCell<Consts>,
}

impl Numeric {
    pub fn new(digits: u32) -> Self {
        // ~3.33 bits per digit plus two words of guard bits.
        let bits = ((digits as usize * 3322).div_ceil(1000)).div_ceil(64) * 64 + 128;
        Numeric {
            digits,
            bits,
            consts: RefCell::new(Consts::new().expect("astro-float constant cache")),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn int_to_float(&self, n: &BigInt) -> BigFloat {
        let (sign, words) = n.to_u64_digits();
        if words.is_empty() {
            return BigFloat::from_u64(0, self.bits);
        }
        let sign = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (words.len() * 64) as i32;
        let mut x = BigFloat::from_words(&words, sign, e);
        x.set_precision(self.bits.max(words.len() * 64), RM)
            .expect("precision change");
        x
    }

    pub fn rational_to_float(&self, q: &Q) -> BigFloat {
        let n = self.int_to_float(q.numer());
        let d = self.int_to_float(q.denom());
        n.div(&d, self.bits, RM)
    }

    pub fn to_float(&self, s: &Scalar) -> BigFloat {
        match s {
            Scalar::Exact(q) => self.rational_to_float(q),
            Scalar::Approx(f) => f.clone(),
        }
    }

    pub fn parse(&self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x + y),
            _ => Scalar::Approx(self.to_float(a).add(&self.to_float(b), self.bits, RM)),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x - y),
            _ => Scalar::Approx(self.to_float(a).sub(&self.to_float(b), self.bits, RM)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x * y),
            (Scalar::Exact(x), _) | (_, Scalar::Exact(x)) if x.is_zero() => Scalar::zero(),
            _ => Scalar::Approx(self.to_float(a).mul(&self.to_float(b), self.bits, RM)),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if self.is_negligible(b) {
            return Err(Error::Pole("denominator vanishes at the point".into()));
        }
        Ok(match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x / y),
            _ => Scalar::Approx(self.to_float(a).div(&self.to_float(b), self.bits, RM)),
        })
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Exact(x) => Scalar::Exact(-x),
            Scalar::Approx(f) => Scalar::Approx(-f),
        }
    }

    /// Exact when `q` is the square of a rational.
    pub fn sqrt(&self, q: &Q) -> Result<Scalar> {
        if q.is_negative() {
            return Err(Error::Numeric("square root of a negative number".into()));
        }
        Ok(match rational_sqrt(q) {
            Some(r) => Scalar::Exact(r),
            None => Scalar::Approx(self.rational_to_float(q).sqrt(self.bits, RM)),
        })
    }

    pub fn atan(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Exact(q) if q.is_zero() => Scalar::zero(),
            _ => Scalar::Approx(
                self.to_float(a)
                    .atan(self.bits, RM, &mut self.consts.borrow_mut()),
            ),
        }
    }

    pub fn abs(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Exact(x) => Scalar::Exact(x.abs()),
            Scalar::Approx(f) => Scalar::Approx(f.abs()),
        }
    }

    /// `|a| < 10^-(digits - 5)`, i.e. indistinguishable from zero at this
    /// precision. Exact values are negligible only when they are zero.
    pub fn is_negligible(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Exact(x) => x.is_zero(),
            Scalar::Approx(f) => {
                let eps = self.parse(&format!("1e-{}", self.digits.saturating_sub(5)));
                f.is_zero() || f.abs().cmp(&eps).is_some_and(|c| c < 0)
            }
        }
    }

    /// `|a| < tol`.
    pub fn below(&self, a: &Scalar, tol: &BigFloat) -> bool {
        match a {
            Scalar::Exact(x) if x.is_zero() => true,
            _ => self
                .to_float(a)
                .abs()
                .cmp(tol)
                .is_some_and(|c| c < 0),
        }
    }

    /// Larger magnitude of the two.
    pub fn max_abs(&self, a: Scalar, b: Scalar) -> Scalar {
        match (&a, &b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => {
                if x.abs() >= y.abs() {
                    Scalar::Exact(x.abs())
                } else {
                    Scalar::Exact(y.abs())
                }
            }
            _ => {
                let fa = self.to_float(&a).abs();
                let fb = self.to_float(&b).abs();
                if fa.cmp(&fb).is_some_and(|c| c >= 0) {
                    Scalar::Approx(fa)
                } else {
                    Scalar::Approx(fb)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    #[test]
    fn big_integers_convert_exactly() {
        let ctx = Numeric::new(50);
        let n: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let f = ctx.int_to_float(&n);
        let back = ctx.parse("123456789012345678901234567890123");
        assert_eq!(f.cmp(&back), Some(0));
        let neg = ctx.int_to_float(&(-n));
        assert!(neg.is_negative());
    }

    #[test]
    fn atan_one_is_quarter_pi() {
        let ctx = Numeric::new(50);
        let v = ctx.atan(&Scalar::Exact(q(1, 1)));
        let pi4 = ctx.parse("0.78539816339744830961566084581987572104929234984377645524");
        let diff = Scalar::Approx(ctx.to_float(&v).sub(&pi4, ctx.bits(), RM));
        assert!(ctx.below(&diff, &ctx.parse("1e-50")));
    }

    #[test]
    fn exact_sqrt_stays_exact() {
        let ctx = Numeric::new(30);
        assert!(ctx.sqrt(&q(9, 4)).unwrap().is_exact());
        assert!(!ctx.sqrt(&q(2, 1)).unwrap().is_exact());
        assert!(ctx.div(&Scalar::Exact(q(1, 1)), &Scalar::zero()).is_err());
    }
}
