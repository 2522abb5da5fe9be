//! The coefficient ring for differential forms on `R^m`.
//!
//! Elements are fractions `N / D` where `N` is a polynomial in the
//! coordinates `x^0..x^{m-1}` and three extra generators:
//!
//! * `r = sqrt((x^1)^2 + ... + (x^{m-1})^2)`
//! * `R = sqrt((x^0)^2 + r^2)`
//! * `tau = atan(x^0 / r)`
//!
//! `r` and `R` appear with exponent 0 or 1 in numerators (squares are
//! rewritten through their defining relations); `tau` is kept as an
//! independent transcendental. Denominators have the shape `r^a R^b P`
//! with `P` a `tau`-free polynomial, so derivatives of the radicals only
//! ever bump the exponents `a`, `b`.
//!
//! Zero testing is exact: a fraction vanishes iff its canonical numerator
//! has no terms. This is faithful for arity >= 3, where `r^2` and `R^2` are
//! not squares in `Q(x)` and `tau` is transcendental over `Q(x, r, R)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::numeric::{Numeric, Scalar};
use super::rational::{fmt_q, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub r: bool,
    pub big_r: bool,
    pub tau: u32,
}

impl Monomial {
    pub fn unit(arity: usize) -> Self {
        Monomial {
            x: vec![0; arity],
            r: false,
            big_r: false,
            tau: 0,
        }
    }

    fn is_unit(&self) -> bool {
        !self.r && !self.big_r && self.tau == 0 && self.x.iter().all(|&e| e == 0)
    }

    fn total_x_degree(&self) -> u32 {
        self.x.iter().sum()
    }
}

/// Canonical polynomial in `Q[x, r, R, tau]` modulo the radical relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        let mut p = Poly::zero(arity);
        p.add_term(Monomial::unit(arity), c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Poly::constant(arity, Q::one())
    }

    pub fn coordinate(arity: usize, i: usize) -> Self {
        let mut m = Monomial::unit(arity);
        m.x[i] = 1;
        Poly::monomial(arity, m, Q::one())
    }

    pub fn monomial(arity: usize, m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero(arity);
        p.add_term(m, c);
        p
    }

    /// `sum_{i >= 1} (x^i)^2`, the square of `r`.
    pub fn r_squared(arity: usize) -> Self {
        let mut p = Poly::zero(arity);
        for i in 1..arity {
            let mut m = Monomial::unit(arity);
            m.x[i] = 2;
            p.add_term(m, Q::one());
        }
        p
    }

    /// `sum_i (x^i)^2`, the square of `R`.
    pub fn big_r_squared(arity: usize) -> Self {
        let mut p = Poly::r_squared(arity);
        if arity > 0 {
            let mut m = Monomial::unit(arity);
            m.x[0] = 2;
            p.add_term(m, Q::one());
        }
        p
    }

    /// Canonical form of `r^e`.
    pub fn r_power(arity: usize, e: u32) -> Self {
        let mut p = Poly::r_squared(arity).pow(e / 2);
        if e % 2 == 1 {
            let mut m = Monomial::unit(arity);
            m.r = true;
            p = p.mul(&Poly::monomial(arity, m, Q::one()));
        }
        p
    }

    /// Canonical form of `R^e`.
    pub fn big_r_power(arity: usize, e: u32) -> Self {
        let mut p = Poly::big_r_squared(arity).pow(e / 2);
        if e % 2 == 1 {
            let mut m = Monomial::unit(arity);
            m.big_r = true;
            p = p.mul(&Poly::monomial(arity, m, Q::one()));
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn tau_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.tau).max().unwrap_or(0)
    }

    pub fn is_tau_free(&self) -> bool {
        self.tau_degree() == 0
    }

    pub fn uses_r(&self) -> bool {
        self.terms.keys().any(|m| m.r)
    }

    pub fn uses_big_r(&self) -> bool {
        self.terms.keys().any(|m| m.big_r)
    }

    pub fn max_x_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_x_degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        debug_assert_eq!(m.x.len(), self.arity);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.arity);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let s = Poly::r_squared(self.arity);
        let big_s = Poly::big_r_squared(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let base = Monomial {
                    x: ma.x.iter().zip(&mb.x).map(|(a, b)| a + b).collect(),
                    r: ma.r ^ mb.r,
                    big_r: ma.big_r ^ mb.big_r,
                    tau: ma.tau + mb.tau,
                };
                let c = ca * cb;
                let mut partial = vec![(base, c)];
                if ma.r && mb.r {
                    partial = expand_by(&partial, &s);
                }
                if ma.big_r && mb.big_r {
                    partial = expand_by(&partial, &big_s);
                }
                for (m, c) in partial {
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.arity);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative as a fraction.
    fn partial(&self, i: usize) -> ExprCoeff {
        let m_ar = self.arity;
        let mut poly_part = Poly::zero(m_ar);
        let mut over_r = Poly::zero(m_ar);
        let mut over_big_r = Poly::zero(m_ar);
        let mut over_big_r2 = Poly::zero(m_ar);
        let mut over_r_big_r2 = Poly::zero(m_ar);
        let r_mono = {
            let mut m = Monomial::unit(m_ar);
            m.r = true;
            Poly::monomial(m_ar, m, Q::one())
        };
        for (m, c) in &self.terms {
            let e = m.x[i];
            if e > 0 {
                let mut d = m.clone();
                d.x[i] -= 1;
                poly_part.add_term(d, c * Q::from_integer(e.into()));
            }
            // d r / d x^i = x^i / r for i >= 1
            if m.r && i >= 1 {
                let mut d = m.clone();
                d.r = false;
                d.x[i] += 1;
                over_r.add_term(d, c.clone());
            }
            // d R / d x^i = x^i / R
            if m.big_r {
                let mut d = m.clone();
                d.big_r = false;
                d.x[i] += 1;
                over_big_r.add_term(d, c.clone());
            }
            if m.tau > 0 {
                let t = Q::from_integer(m.tau.into());
                let mut d = m.clone();
                d.tau -= 1;
                if i == 0 {
                    // d tau / d x^0 = r / R^2
                    let term = Poly::monomial(m_ar, d, c * t).mul(&r_mono);
                    over_big_r2 = over_big_r2.add(&term);
                } else {
                    // d tau / d x^i = -x^0 x^i / (r R^2)
                    d.x[0] += 1;
                    d.x[i] += 1;
                    over_r_big_r2.add_term(d, -(c * t));
                }
            }
        }
        let mut out = ExprCoeff::from_poly(poly_part);
        for (num, r, big_r) in [
            (over_r, 1, 0),
            (over_big_r, 0, 1),
            (over_big_r2, 0, 2),
            (over_r_big_r2, 1, 2),
        ] {
            if !num.is_zero() {
                out = out.add(&ExprCoeff::with_radical_den(num, r, big_r));
            }
        }
        out
    }
}

impl Poly {
    /// Exact quotient by `sum_{i >= from} (x^i)^2`, if it divides.
    fn div_exact_sum_of_squares(&self, from: usize) -> Option<Poly> {
        let arity = self.arity;
        if from + 1 > arity {
            return None;
        }
        let j = arity - 1;
        let mut rem = self.clone();
        let mut quot = Poly::zero(arity);
        // s is monic of degree 2 in x^j; reduce the x^j-degree below 2
        loop {
            let next = rem.terms.keys().rev().find(|m| m.x[j] >= 2).cloned();
            let Some(m) = next else { break };
            let c = rem.terms[&m].clone();
            let mut t = m.clone();
            t.x[j] -= 2;
            for i in from..arity {
                let mut u = t.clone();
                u.x[i] += 2;
                rem.add_term(u, -c.clone());
            }
            quot.add_term(t, c);
        }
        rem.is_zero().then_some(quot)
    }
}

fn expand_by(terms: &[(Monomial, Q)], factor: &Poly) -> Vec<(Monomial, Q)> {
    let mut out = Vec::with_capacity(terms.len() * factor.len());
    for (m, c) in terms {
        for (fm, fc) in &factor.terms {
            let mut n = m.clone();
            for (a, b) in n.x.iter_mut().zip(&fm.x) {
                *a += b;
            }
            out.push((n, c * fc));
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Den {
    r: u32,
    big_r: u32,
    poly: Poly,
}

impl Den {
    fn one(arity: usize) -> Self {
        Den {
            r: 0,
            big_r: 0,
            poly: Poly::one(arity),
        }
    }

    fn expand(&self) -> Poly {
        let a = self.poly.arity;
        Poly::r_power(a, self.r)
            .mul(&Poly::big_r_power(a, self.big_r))
            .mul(&self.poly)
    }

    fn is_one(&self) -> bool {
        self.r == 0 && self.big_r == 0 && self.poly.is_one()
    }
}

/// Element of the coefficient ring: `N / (r^a R^b P)`.
#[derive(Clone, Debug)]
pub struct ExprCoeff {
    num: Poly,
    den: Den,
}

impl ExprCoeff {
    pub fn zero(arity: usize) -> Self {
        ExprCoeff::from_poly(Poly::zero(arity))
    }

    pub fn one(arity: usize) -> Self {
        ExprCoeff::from_poly(Poly::one(arity))
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        ExprCoeff::from_poly(Poly::constant(arity, c))
    }

    pub fn from_poly(p: Poly) -> Self {
        let arity = p.arity;
        ExprCoeff {
            num: p,
            den: Den::one(arity),
        }
    }

    fn with_radical_den(num: Poly, r: u32, big_r: u32) -> Self {
        let arity = num.arity;
        let mut e = ExprCoeff {
            num,
            den: Den {
                r,
                big_r,
                poly: Poly::one(arity),
            },
        };
        e.normalize();
        e
    }

    /// The coordinate function `x^i`.
    pub fn x(arity: usize, i: usize) -> Self {
        ExprCoeff::from_poly(Poly::coordinate(arity, i))
    }

    /// `r^e` for any integer exponent.
    pub fn r_pow(arity: usize, e: i32) -> Self {
        if e >= 0 {
            ExprCoeff::from_poly(Poly::r_power(arity, e as u32))
        } else {
            ExprCoeff::with_radical_den(Poly::one(arity), e.unsigned_abs(), 0)
        }
    }

    /// `R^e` for any integer exponent.
    pub fn big_r_pow(arity: usize, e: i32) -> Self {
        if e >= 0 {
            ExprCoeff::from_poly(Poly::big_r_power(arity, e as u32))
        } else {
            ExprCoeff::with_radical_den(Poly::one(arity), 0, e.unsigned_abs())
        }
    }

    pub fn r(arity: usize) -> Self {
        ExprCoeff::r_pow(arity, 1)
    }

    pub fn big_r(arity: usize) -> Self {
        ExprCoeff::big_r_pow(arity, 1)
    }

    pub fn tau(arity: usize) -> Self {
        let mut m = Monomial::unit(arity);
        m.tau = 1;
        ExprCoeff::from_poly(Poly::monomial(arity, m, Q::one()))
    }

    pub fn arity(&self) -> usize {
        self.num.arity
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator as `(a, b, P)` for `r^a R^b P`.
    pub fn denominator(&self) -> (u32, u32, &Poly) {
        (self.den.r, self.den.big_r, &self.den.poly)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_tau_free(&self) -> bool {
        self.num.is_tau_free()
    }

    /// `Some(c)` when the expression is the constant `c`.
    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else if self.num.is_zero() {
            Some(Q::zero())
        } else {
            None
        }
    }

    /// Polynomial in the coordinates only (no radicals, no tau, trivial
    /// denominator).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one() && self.num.is_tau_free() && !self.num.uses_r() && !self.num.uses_big_r()
    }

    fn normalize(&mut self) {
        let arity = self.arity();
        if self.num.is_zero() {
            self.den = Den::one(arity);
            return;
        }
        if let Some(c) = self.den.poly.constant_value() {
            if !c.is_one() {
                self.num = self.num.scale(&c.recip());
                self.den.poly = Poly::one(arity);
            }
        }
        macro_rules! cancel {
            ($flag:ident) => {
                while self.den.$flag > 0 && self.num.terms.keys().all(|m| m.$flag) {
                    self.num = Poly {
                        arity,
                        terms: std::mem::take(&mut self.num.terms)
                            .into_iter()
                            .map(|(mut m, c)| {
                                m.$flag = false;
                                (m, c)
                            })
                            .collect(),
                    };
                    self.den.$flag -= 1;
                }
            };
        }
        cancel!(r);
        cancel!(big_r);
        while self.den.r >= 2 {
            match self.num.div_exact_sum_of_squares(1) {
                Some(q) => {
                    self.num = q;
                    self.den.r -= 2;
                }
                None => break,
            }
        }
        while self.den.big_r >= 2 {
            match self.num.div_exact_sum_of_squares(0) {
                Some(q) => {
                    self.num = q;
                    self.den.big_r -= 2;
                }
                None => break,
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity() != other.arity() {
            Err(Error::ArityMismatch(self.arity(), other.arity()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        Ok(self.mul(other))
    }

    /// Panics on arity mismatch; see [`ExprCoeff::checked_add`].
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut out = if self.den == other.den {
            ExprCoeff {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
        } else {
            let arity = self.arity();
            let r = self.den.r.max(other.den.r);
            let big_r = self.den.big_r.max(other.den.big_r);
            let (fa, fb, poly) = if self.den.poly == other.den.poly {
                (Poly::one(arity), Poly::one(arity), self.den.poly.clone())
            } else {
                (
                    other.den.poly.clone(),
                    self.den.poly.clone(),
                    self.den.poly.mul(&other.den.poly),
                )
            };
            let lift = |e: &ExprCoeff, f: &Poly| {
                e.num
                    .mul(&Poly::r_power(arity, r - e.den.r))
                    .mul(&Poly::big_r_power(arity, big_r - e.den.big_r))
                    .mul(f)
            };
            ExprCoeff {
                num: lift(self, &fa).add(&lift(other, &fb)),
                den: Den { r, big_r, poly },
            }
        };
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        ExprCoeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = ExprCoeff {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        if self.is_zero() || other.is_zero() {
            return ExprCoeff::zero(self.arity());
        }
        let poly = if self.den.poly.is_one() {
            other.den.poly.clone()
        } else if other.den.poly.is_one() {
            self.den.poly.clone()
        } else {
            self.den.poly.mul(&other.den.poly)
        };
        let mut out = ExprCoeff {
            num: self.num.mul(&other.num),
            den: Den {
                r: self.den.r + other.den.r,
                big_r: self.den.big_r + other.den.big_r,
                poly,
            },
        };
        out.normalize();
        out
    }

    /// Division by a `tau`-free, nonzero expression.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !other.num.is_tau_free() {
            return Err(Error::TranscendentalDivisor);
        }
        let arity = self.arity();
        let num = self.num.mul(&other.den.expand());
        let mut den = self.den.clone();
        // a lone c * r^e R^f in the divisor goes straight into the exponents
        let lone = (other.num.len() == 1)
            .then(|| other.num.terms.iter().next().unwrap())
            .filter(|(m, _)| m.x.iter().all(|&e| e == 0));
        let num = match lone {
            Some((m, c)) => {
                den.r += m.r as u32;
                den.big_r += m.big_r as u32;
                num.scale(&c.recip())
            }
            None => {
                den.poly = den.poly.mul(&other.num);
                num
            }
        };
        let mut out = ExprCoeff { num, den };
        let _ = arity;
        out.normalize();
        Ok(out)
    }

    pub fn differentiate(&self, i: usize) -> Result<Self> {
        let arity = self.arity();
        if i >= arity {
            return Err(Error::IndexOutOfRange { index: i, arity });
        }
        Ok(self.partial(i))
    }

    pub(crate) fn partial(&self, i: usize) -> Self {
        let arity = self.arity();
        if self.is_zero() {
            return ExprCoeff::zero(arity);
        }
        let inv_den = ExprCoeff {
            num: Poly::one(arity),
            den: self.den.clone(),
        };
        let mut out = self.num.partial(i).mul(&inv_den);
        let xi = Poly::coordinate(arity, i);
        let this = ExprCoeff {
            num: self.num.clone(),
            den: self.den.clone(),
        };
        if self.den.r > 0 && i >= 1 {
            let t = ExprCoeff::with_radical_den(xi.scale(&Q::from_integer(self.den.r.into())), 2, 0);
            out = out.sub(&this.mul(&t));
        }
        if self.den.big_r > 0 {
            let t = ExprCoeff::with_radical_den(
                xi.scale(&Q::from_integer(self.den.big_r.into())),
                0,
                2,
            );
            out = out.sub(&this.mul(&t));
        }
        if !self.den.poly.is_one() {
            let dp = self.den.poly.partial(i);
            if !dp.is_zero() {
                let p = ExprCoeff::from_poly(self.den.poly.clone());
                let ratio = dp.checked_div(&p).expect("denominator polynomial is nonzero");
                out = out.sub(&this.mul(&ratio));
            }
        }
        out
    }

    /// Value at a rational point. Exact whenever no `tau` is involved and the
    /// radicals that do occur are rational there.
    pub fn eval(&self, point: &[Q], ctx: &Numeric) -> Result<Scalar> {
        let values = PointValues::new(point, self.arity())?;
        self.eval_with(&values, ctx)
    }

    pub(crate) fn eval_with(&self, pv: &PointValues, ctx: &Numeric) -> Result<Scalar> {
        if pv.point.len() != self.arity() {
            return Err(Error::ArityMismatch(pv.point.len(), self.arity()));
        }
        let num = pv.eval_poly(&self.num, ctx)?;
        if self.den.is_one() {
            return Ok(num);
        }
        if self.den.r > 0 && pv.s.is_zero() {
            return Err(Error::Pole("r = 0 in the denominator".into()));
        }
        let mut den = pv.eval_poly(&self.den.poly, ctx)?;
        if self.den.r > 0 {
            den = ctx.mul(&den, &pv.radical_power(true, self.den.r, ctx)?);
        }
        if self.den.big_r > 0 {
            den = ctx.mul(&den, &pv.radical_power(false, self.den.big_r, ctx)?);
        }
        ctx.div(&num, &den)
    }
}

/// Cached radicals at a fixed point.
pub(crate) struct PointValues<'a> {
    point: &'a [Q],
    s: Q,
    big_s: Q,
    r: std::cell::OnceCell<Scalar>,
    big_r: std::cell::OnceCell<Scalar>,
    tau: std::cell::OnceCell<Scalar>,
}

impl<'a> PointValues<'a> {
    pub(crate) fn new(point: &'a [Q], arity: usize) -> Result<Self> {
        if point.len() != arity {
            return Err(Error::ArityMismatch(point.len(), arity));
        }
        let s: Q = point.iter().skip(1).map(|x| x * x).sum();
        let big_s = &s + point.first().map(|x| x * x).unwrap_or_else(Q::zero);
        Ok(PointValues {
            point,
            s,
            big_s,
            r: Default::default(),
            big_r: Default::default(),
            tau: Default::default(),
        })
    }

    fn r(&self, ctx: &Numeric) -> Result<&Scalar> {
        if self.r.get().is_none() {
            let _ = self.r.set(ctx.sqrt(&self.s)?);
        }
        Ok(self.r.get().unwrap())
    }

    fn big_r(&self, ctx: &Numeric) -> Result<&Scalar> {
        if self.big_r.get().is_none() {
            let _ = self.big_r.set(ctx.sqrt(&self.big_s)?);
        }
        Ok(self.big_r.get().unwrap())
    }

    fn tau(&self, ctx: &Numeric) -> Result<&Scalar> {
        if self.tau.get().is_none() {
            if self.s.is_zero() {
                return Err(Error::SingularLocus("tau = atan(x0/r) is undefined at r = 0".into()));
            }
            let r = self.r(ctx)?.clone();
            let ratio = ctx.div(&Scalar::Exact(self.point[0].clone()), &r)?;
            let _ = self.tau.set(ctx.atan(&ratio));
        }
        Ok(self.tau.get().unwrap())
    }

    /// `r^e` (or `R^e`) using the exact square for the even part.
    fn radical_power(&self, small: bool, e: u32, ctx: &Numeric) -> Result<Scalar> {
        let sq = if small { &self.s } else { &self.big_s };
        let mut out = Scalar::Exact(num_traits::pow(sq.clone(), (e / 2) as usize));
        if e % 2 == 1 {
            let root = if small { self.r(ctx)? } else { self.big_r(ctx)? };
            out = ctx.mul(&out, root);
        }
        Ok(out)
    }

    fn eval_poly(&self, p: &Poly, ctx: &Numeric) -> Result<Scalar> {
        // Sum exactly inside each (r, R, tau^t) class, then combine.
        let mut classes: BTreeMap<(bool, bool, u32), Q> = BTreeMap::new();
        for (m, c) in &p.terms {
            let mut v = c.clone();
            for (xi, &e) in self.point.iter().zip(&m.x) {
                if e > 0 {
                    v *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            *classes.entry((m.r, m.big_r, m.tau)).or_insert_with(Q::zero) += v;
        }
        let mut total = Scalar::zero();
        for ((r, big_r, t), v) in classes {
            if v.is_zero() {
                continue;
            }
            let mut term = Scalar::Exact(v);
            if r {
                term = ctx.mul(&term, self.r(ctx)?);
            }
            if big_r {
                term = ctx.mul(&term, self.big_r(ctx)?);
            }
            if t > 0 {
                let tau = self.tau(ctx)?.clone();
                for _ in 0..t {
                    term = ctx.mul(&term, &tau);
                }
            }
            total = ctx.add(&total, &term);
        }
        Ok(total)
    }
}

impl PartialEq for ExprCoeff {
    fn eq(&self, other: &Self) -> bool {
        self.arity() == other.arity() && self.sub(other).is_zero()
    }
}

impl Add for &ExprCoeff {
    type Output = ExprCoeff;
    fn add(self, rhs: &ExprCoeff) -> ExprCoeff {
        ExprCoeff::add(self, rhs)
    }
}

impl Sub for &ExprCoeff {
    type Output = ExprCoeff;
    fn sub(self, rhs: &ExprCoeff) -> ExprCoeff {
        ExprCoeff::sub(self, rhs)
    }
}

impl Mul for &ExprCoeff {
    type Output = ExprCoeff;
    fn mul(self, rhs: &ExprCoeff) -> ExprCoeff {
        ExprCoeff::mul(self, rhs)
    }
}

impl Neg for &ExprCoeff {
    type Output = ExprCoeff;
    fn neg(self) -> ExprCoeff {
        ExprCoeff::neg(self)
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.x.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{i}")),
            _ => parts.push(format!("x{i}^{e}")),
        }
    }
    if m.r {
        parts.push("r".into());
    }
    if m.big_r {
        parts.push("R".into());
    }
    match m.tau {
        0 => {}
        1 => parts.push("tau".into()),
        t => parts.push(format!("tau^{t}")),
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono = fmt_monomial(m);
            let (sign, mag) = if c < &Q::zero() { ("-", -c) } else { ("+", c.clone()) };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{}", fmt_q(&mag))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", fmt_q(&mag))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExprCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        let mut den = Vec::new();
        match self.den.r {
            0 => {}
            1 => den.push("r".to_string()),
            a => den.push(format!("r^{a}")),
        }
        match self.den.big_r {
            0 => {}
            1 => den.push("R".to_string()),
            b => den.push(format!("R^{b}")),
        }
        if !self.den.poly.is_one() {
            den.push(format!("({})", self.den.poly));
        }
        if den.len() == 1 {
            write!(f, "/{}", den[0])
        } else {
            write!(f, "/({})", den.join("*"))
        }
    }
}

impl Serialize for ExprCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
