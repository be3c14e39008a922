use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;
use crate::error::{Error, Result};

/// Ball `[mid · 2^exp ± rad]`.
///
/// The midpoint is kept to at most `prec` bits; every rounding step adds its
/// error to `rad`, so the ball always contains the exact result of the
/// operations that produced it.
#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    mid: BigInt,
    exp: i64,
    rad: Mag,
    prec: u32,
}

impl Real {
    pub fn zero(prec: u32) -> Real {
        Real {
            mid: BigInt::zero(),
            exp: 0,
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn one(prec: u32) -> Real {
        Real::from_int(1, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Real {
        Real::from_bigint(BigInt::from(v), prec)
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Real {
        Real {
            mid: v,
            exp: 0,
            rad: Mag::ZERO,
            prec,
        }
        .rounded()
    }

    /// Exact dyadic `m · 2^e` (rounded to `prec` bits if longer).
    pub fn from_dyadic(m: BigInt, e: i64, prec: u32) -> Real {
        Real {
            mid: m,
            exp: e,
            rad: Mag::ZERO,
            prec,
        }
        .rounded()
    }

    /// Ball with the given midpoint and radius.
    pub fn with_radius(m: BigInt, e: i64, rad: Mag, prec: u32) -> Real {
        Real {
            mid: m,
            exp: e,
            rad,
            prec,
        }
        .rounded()
    }

    pub fn from_rat(r: &BigRational, prec: u32) -> Real {
        let d = r.denom();
        if (d & (d - BigInt::one())).is_zero() {
            let k = d.bits() as i64 - 1;
            return Real::from_dyadic(r.numer().clone(), -k, prec);
        }
        let n = r.numer();
        let s = prec as i64 + 4 - (n.bits() as i64 - d.bits() as i64);
        let scaled = if s >= 0 {
            n << s as usize
        } else {
            n >> (-s) as usize
        };
        let q = scaled.div_floor(d);
        // floor(n 2^s / d) ≤ n 2^s / d < q + 1, and the right shift above
        // only happens when the quotient is still huge.
        let err = if s >= 0 {
            Mag::pow2(-s)
        } else {
            Mag::pow2(-s + 1)
        };
        Real::with_radius(q, -s, err, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same value, different working precision for subsequent operations.
    pub fn with_prec(mut self, prec: u32) -> Real {
        self.prec = prec;
        self.rounded()
    }

    pub fn radius(&self) -> Mag {
        self.rad
    }

    pub fn mid_rat(&self) -> BigRational {
        dyadic_to_rat(&self.mid, self.exp)
    }

    pub fn rad_rat(&self) -> Option<BigRational> {
        self.rad.to_rational()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite()
    }

    /// Adds `e` to the radius.
    pub fn add_error(mut self, e: Mag) -> Real {
        self.rad = self.rad.add(e);
        self
    }

    fn mid_mag(&self, up: bool) -> Mag {
        Mag::from_bigint(&self.mid, self.exp, up)
    }

    /// Upper bound for `|x|` over the ball.
    pub fn abs_upper(&self) -> Mag {
        self.mid_mag(true).add(self.rad)
    }

    /// Lower bound for `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lower(&self) -> Mag {
        self.mid_mag(false).sub_down(self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mid.sign() == Sign::Plus && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.sign() == Sign::Minus && !self.contains_zero()
    }

    /// Whether the exact rational `r` lies in the ball.
    pub fn contains_rat(&self, r: &BigRational) -> bool {
        match self.rad.to_rational() {
            None => true,
            Some(rad) => (self.mid_rat() - r).abs() <= rad,
        }
    }

    /// Whether two balls intersect.
    pub fn overlaps(&self, other: &Real) -> bool {
        match (self.rad.to_rational(), other.rad.to_rational()) {
            (Some(r1), Some(r2)) => (self.mid_rat() - other.mid_rat()).abs() <= r1 + r2,
            _ => true,
        }
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Real) -> bool {
        match (self.rad.to_rational(), other.rad.to_rational()) {
            (Some(r1), Some(r2)) => (self.mid_rat() - other.mid_rat()).abs() + r2 <= r1,
            (None, _) => true,
            _ => false,
        }
    }

    /// Midpoint as an `f64` (for heuristics and display only).
    pub fn to_f64(&self) -> f64 {
        let bits = self.mid.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mid >> shift as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        m * (2f64).powi(e.clamp(-1100, 1100) as i32)
    }

    /// Upper bound on `log2 |x|` (∞-safe, used for precision heuristics).
    pub fn log2_upper(&self) -> i64 {
        let m = self.abs_upper();
        if m.is_zero() {
            i64::MIN / 4
        } else if m.is_inf() {
            i64::MAX / 4
        } else {
            m.log2_ceil()
        }
    }

    /// Rounds the midpoint to `prec` bits, and drops midpoint bits that lie
    /// far below the radius.
    fn rounded(mut self) -> Real {
        if self.mid.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mid.bits() as i64;
        let mut shift = bits - self.prec as i64;
        if self.rad.is_finite() && !self.rad.is_zero() {
            let keep_from = self.rad.log2_ceil() - 32;
            shift = shift.max(keep_from - self.exp);
        }
        if shift > 0 {
            let lost_bits = &self.mid & ((BigInt::one() << shift as usize) - 1u32);
            self.mid >>= shift as usize;
            self.exp += shift;
            if !lost_bits.is_zero() {
                self.rad = self.rad.add(Mag::pow2(self.exp));
            }
        }
        if self.rad.is_inf() {
            self.mid = BigInt::zero();
            self.exp = 0;
        }
        self
    }

    fn prec_with(&self, other: &Real) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add_ref(&self, other: &Real) -> Real {
        let prec = self.prec_with(other);
        if self.mid.is_zero() {
            return Real {
                mid: other.mid.clone(),
                exp: other.exp,
                rad: other.rad.add(self.rad),
                prec,
            }
            .rounded();
        }
        if other.mid.is_zero() {
            return Real {
                mid: self.mid.clone(),
                exp: self.exp,
                rad: self.rad.add(other.rad),
                prec,
            }
            .rounded();
        }
        let top = (self.exp + self.mid.bits() as i64).max(other.exp + other.mid.bits() as i64);
        let floor = top - prec as i64 - 64;
        let mut rad = self.rad.add(other.rad);
        let (m1, e1) = truncate_below(&self.mid, self.exp, floor, &mut rad);
        let (m2, e2) = truncate_below(&other.mid, other.exp, floor, &mut rad);
        let e = e1.min(e2);
        let mid = (m1 << (e1 - e) as usize) + (m2 << (e2 - e) as usize);
        Real {
            mid,
            exp: e,
            rad,
            prec,
        }
        .rounded()
    }

    pub fn sub_ref(&self, other: &Real) -> Real {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Real {
        Real {
            mid: -&self.mid,
            exp: self.exp,
            rad: self.rad,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Real {
        if self.mid.sign() == Sign::Minus {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    pub fn mul_ref(&self, other: &Real) -> Real {
        let prec = self.prec_with(other);
        let a = self.mid_mag(true);
        let b = other.mid_mag(true);
        let rad = a
            .mul(other.rad)
            .add(b.mul(self.rad))
            .add(self.rad.mul(other.rad));
        Real {
            mid: &self.mid * &other.mid,
            exp: self.exp + other.exp,
            rad,
            prec,
        }
        .rounded()
    }

    pub fn sqr(&self) -> Real {
        self.mul_ref(self)
    }

    /// Exact multiplication by an integer.
    pub fn mul_bigint(&self, k: &BigInt) -> Real {
        Real {
            mid: &self.mid * k,
            exp: self.exp,
            rad: self.rad.mul(Mag::from_bigint(k, 0, true)),
            prec: self.prec,
        }
        .rounded()
    }

    pub fn mul_int(&self, k: i64) -> Real {
        self.mul_bigint(&BigInt::from(k))
    }

    /// Exact multiplication by `2^e`.
    pub fn mul_2exp(&self, e: i64) -> Real {
        Real {
            mid: self.mid.clone(),
            exp: self.exp + e,
            rad: self.rad.mul_2exp(e),
            prec: self.prec,
        }
    }

    /// Division by a nonzero integer.
    pub fn div_bigint(&self, k: &BigInt) -> Real {
        assert!(!k.is_zero(), "division of a ball by the integer zero");
        let shift = (self.prec as i64 + k.bits() as i64 + 2 - self.mid.bits() as i64).max(0);
        let num = &self.mid << shift as usize;
        let (q, r) = num.div_rem(k);
        let e = self.exp - shift;
        let mut rad = self.rad.div(Mag::from_bigint(k, 0, false));
        if !r.is_zero() {
            rad = rad.add(Mag::pow2(e));
        }
        Real {
            mid: q,
            exp: e,
            rad,
            prec: self.prec,
        }
        .rounded()
    }

    pub fn div_int(&self, k: i64) -> Real {
        self.div_bigint(&BigInt::from(k))
    }

    pub fn mul_rat(&self, r: &BigRational) -> Real {
        self.mul_bigint(r.numer()).div_bigint(r.denom())
    }

    pub fn div_rat(&self, r: &BigRational) -> Result<Real> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_bigint(r.denom()).div_bigint(r.numer()))
    }

    /// Ball division; fails if the divisor's ball contains zero.
    pub fn div_ref(&self, other: &Real) -> Result<Real> {
        let prec = self.prec_with(other);
        let lo = other.abs_lower();
        if lo.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if other.is_exact() && other.mid.bits() <= 64 && other.exp == 0 {
            return Ok(self.div_bigint(&other.mid).with_prec(prec));
        }
        let shift = (prec as i64 + other.mid.bits() as i64 + 2 - self.mid.bits() as i64).max(0);
        let num = &self.mid << shift as usize;
        let (q, r) = num.div_rem(&other.mid);
        let e = self.exp - shift - other.exp;
        let mut round_err = Mag::ZERO;
        if !r.is_zero() {
            round_err = Mag::pow2(e);
        }
        // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
        let qmag = Mag::from_bigint(&q, e, true).add(round_err);
        let prop = self.rad.add(qmag.mul(other.rad)).div(lo);
        Ok(Real {
            mid: q,
            exp: e,
            rad: prop.add(round_err),
            prec,
        }
        .rounded())
    }

    pub fn inv(&self) -> Result<Real> {
        Real::one(self.prec).div_ref(self)
    }

    pub fn pow_u64(&self, mut e: u64) -> Real {
        let mut base = self.clone();
        let mut acc = Real::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn pow_i64(&self, e: i64) -> Result<Real> {
        let p = self.pow_u64(e.unsigned_abs());
        if e < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Union hull of two balls.
    pub fn union(&self, other: &Real) -> Real {
        let prec = self.prec_with(other);
        let (r1, r2) = match (self.rad.to_rational(), other.rad.to_rational()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Real {
                    mid: BigInt::zero(),
                    exp: 0,
                    rad: Mag::INF,
                    prec,
                }
            }
        };
        let lo = (self.mid_rat() - &r1).min(other.mid_rat() - &r2);
        let hi = (self.mid_rat() + &r1).max(other.mid_rat() + &r2);
        let two = BigRational::from_integer(2.into());
        let c = (&lo + &hi) / &two;
        let h = (&hi - &lo) / &two;
        let mut b = Real::from_rat(&c, prec + 16);
        b.rad = b.rad.add(Mag::from_rat(&h, true));
        b.with_prec(prec)
    }

    /// Sign when certain.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_exact() && self.mid.is_zero() {
            Some(Ordering::Equal)
        } else if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Relative radius `rad / |mid|` as an upper bound (∞ when the ball
    /// contains zero).
    pub fn rel_radius(&self) -> Mag {
        let lo = self.abs_lower();
        if lo.is_zero() {
            if self.rad.is_zero() {
                return Mag::ZERO;
            }
            return Mag::INF;
        }
        self.rad.div(lo)
    }

    /// Decimal rendering with `digits` significant digits of the midpoint.
    pub fn to_decimal(&self, digits: u32) -> String {
        let digits = digits.max(1);
        let m = if self.mid.is_zero() {
            "0".to_string()
        } else {
            decimal_string(&self.mid_rat(), digits)
        };
        format!("{m} ± {}", self.rad)
    }

    /// Number of significant digits the ball actually certifies.
    pub fn accurate_digits(&self) -> u32 {
        let rel = self.rel_radius();
        if rel.is_zero() {
            return (self.prec as f64 * std::f64::consts::LOG10_2) as u32;
        }
        if rel.is_inf() {
            return 0;
        }
        let d = -(rel.to_f64().log10());
        if d <= 0.0 {
            0
        } else {
            d.floor() as u32
        }
    }
}

fn truncate_below(m: &BigInt, e: i64, floor: i64, rad: &mut Mag) -> (BigInt, i64) {
    if e >= floor {
        return (m.clone(), e);
    }
    let s = (floor - e) as usize;
    let lost = m & ((BigInt::one() << s) - 1u32);
    if !lost.is_zero() {
        *rad = rad.add(Mag::pow2(floor));
    }
    (m >> s, floor)
}

pub(crate) fn dyadic_to_rat(m: &BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << e as usize)
    } else {
        BigRational::new(m.clone(), BigInt::one() << (-e) as usize)
    }
}

fn pow10(k: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `floor(log10 r)` for `r > 0`.
fn floor_log10(r: &BigRational) -> i64 {
    let bits = r.numer().bits() as i64 - r.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while pow10(e) > *r {
        e -= 1;
    }
    while pow10(e + 1) <= *r {
        e += 1;
    }
    e
}

/// Smallest `d · 10^e ≥ r` with a single digit `d ∈ 1..=9`.
pub(crate) fn leading_decimal_up(r: &BigRational) -> (u32, i64) {
    let e = floor_log10(r);
    let q = r / pow10(e);
    let d = q.ceil().to_integer().to_u32().unwrap_or(10);
    if d >= 10 {
        (1, e + 1)
    } else {
        (d, e)
    }
}

/// `d.ddd…e±E` rounded to nearest with `digits` significant digits.
pub(crate) fn decimal_string(r: &BigRational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let v = r.abs();
    let mut e = floor_log10(&v);
    let scaled = &v * pow10(digits as i64 - 1 - e);
    let mut d = scaled.round().to_integer();
    if d == BigInt::from(10u32).pow(digits) {
        d /= 10u32;
        e += 1;
    }
    let s = d.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec_digits = (self.prec as f64 * std::f64::consts::LOG10_2) as u32;
        let digits = match f.precision() {
            Some(p) => p as u32,
            None => (self.accurate_digits() + 2).min(prec_digits).max(1),
        };
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({self})")
    }
}

macro_rules! ball_op {
    ($tr:ident, $f:ident, $imp:ident) => {
        impl $tr for &Real {
            type Output = Real;
            fn $f(self, rhs: &Real) -> Real {
                self.$imp(rhs)
            }
        }
        impl $tr for Real {
            type Output = Real;
            fn $f(self, rhs: Real) -> Real {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $f(self, rhs: &Real) -> Real {
                (&self).$imp(rhs)
            }
        }
    };
}
ball_op!(Add, add, add_ref);
ball_op!(Sub, sub, sub_ref);
ball_op!(Mul, mul, mul_ref);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_ref()
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_conversion_contains_value() {
        let third = rat(1, 3);
        let x = Real::from_rat(&third, 100);
        assert!(x.contains_rat(&third));
        assert!(!x.is_exact());
        assert!(x.radius() < Mag::pow2(-99));
        assert!(Real::from_rat(&rat(3, 8), 10).is_exact());
    }

    #[test]
    fn arithmetic_keeps_enclosures() {
        let p = 128;
        let a = Real::from_rat(&rat(1, 3), p);
        let b = Real::from_rat(&rat(2, 7), p);
        assert!((&a + &b).contains_rat(&(rat(1, 3) + rat(2, 7))));
        assert!((&a - &b).contains_rat(&(rat(1, 3) - rat(2, 7))));
        assert!((&a * &b).contains_rat(&rat(2, 21)));
        assert!(a.div_ref(&b).unwrap().contains_rat(&rat(7, 6)));
        assert!(a.div_int(5).contains_rat(&rat(1, 15)));
        assert!(a.mul_rat(&rat(-9, 4)).contains_rat(&rat(-3, 4)));
        assert!(a.pow_i64(-3).unwrap().contains_rat(&rat(27, 1)));
    }

    #[test]
    fn division_by_ball_around_zero_fails() {
        let z = Real::with_radius(BigInt::from(1), -10, Mag::pow2(-9), 64);
        assert!(z.contains_zero());
        assert_eq!(Real::one(64).div_ref(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn large_exponent_gap_in_addition() {
        let big = Real::from_int(1, 64);
        let tiny = Real::from_dyadic(BigInt::from(3), -500, 64);
        let s = &big + &tiny;
        assert!(s.contains(&Real::from_int(1, 64)));
        assert!(s.radius() < Mag::pow2(-100));
    }

    #[test]
    fn decimal_rendering() {
        let x = Real::from_rat(&rat(9, 5), 200);
        let s = x.to_decimal(21);
        assert!(s.starts_with("1.80000000000000000000e0 ± "), "{s}");
        assert_eq!(decimal_string(&rat(-1, 8), 3), "-1.25e-1");
        assert_eq!(decimal_string(&rat(9999, 1), 2), "1.0e4");
        assert_eq!(leading_decimal_up(&rat(29, 10000)), (3, -3));
        assert_eq!(leading_decimal_up(&rat(95, 10)), (1, 1));
    }

    #[test]
    fn union_covers_both() {
        let a = Real::from_rat(&rat(1, 3), 64);
        let b = Real::from_rat(&rat(1, 2), 64);
        let u = a.union(&b);
        assert!(u.contains(&a) && u.contains(&b));
    }
}
