use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Mantissa width of a [`Mag`].
const MB: u32 = 30;
const INF_EXP: i64 = i64::MAX;

/// Nonnegative magnitude `man · 2^exp` used for error radii.
///
/// Every operation comes in a rounded-up flavour (the default) and, where a
/// lower bound is needed, a rounded-down one. Infinity is representable and
/// absorbs everything.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };
    pub const INF: Mag = Mag {
        man: 1 << (MB - 1),
        exp: INF_EXP,
    };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn is_inf(&self) -> bool {
        self.exp == INF_EXP
    }

    pub fn is_finite(&self) -> bool {
        !self.is_inf()
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag {
            man: 1 << (MB - 1),
            exp: e - (MB as i64 - 1),
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::from_u128(v as u128, 0, true)
    }

    fn from_u128(v: u128, exp: i64, up: bool) -> Mag {
        if v == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - v.leading_zeros();
        if bits > MB {
            let shift = bits - MB;
            let mut m = (v >> shift) as u64;
            let lost = v & ((1u128 << shift) - 1);
            let mut e = exp + shift as i64;
            if up && lost != 0 {
                m += 1;
                if m == 1 << MB {
                    m >>= 1;
                    e += 1;
                }
            }
            Mag::checked(m, e)
        } else {
            let shift = MB - bits;
            Mag::checked((v as u64) << shift, exp - shift as i64)
        }
    }

    fn checked(man: u64, exp: i64) -> Mag {
        if exp >= INF_EXP / 2 {
            Mag::INF
        } else if exp <= i64::MIN / 2 {
            Mag::ZERO
        } else {
            Mag { man, exp }
        }
    }

    /// Upper (`up = true`) or lower bound for `|m| · 2^e`.
    pub fn from_bigint(m: &BigInt, e: i64, up: bool) -> Mag {
        if m.is_zero() {
            return Mag::ZERO;
        }
        let bits = m.bits();
        if bits <= 100 {
            let (_, digits) = m.to_u64_digits();
            let mut v: u128 = 0;
            for (i, d) in digits.iter().enumerate() {
                v |= (*d as u128) << (64 * i);
            }
            Mag::from_u128(v, e, up)
        } else {
            let shift = bits - 64;
            let top: BigInt = m.abs() >> shift;
            let (_, digits) = top.to_u64_digits();
            let mut v = digits[0] as u128;
            if up {
                v += 1;
            }
            Mag::from_u128(v, e + shift as i64, up)
        }
    }

    /// Upper or lower bound for a rational magnitude.
    pub fn from_rat(r: &BigRational, up: bool) -> Mag {
        if r.is_zero() {
            return Mag::ZERO;
        }
        let n = r.numer().abs();
        let d = r.denom();
        let shift = 80i64 + d.bits() as i64 - n.bits() as i64;
        let scaled = if shift >= 0 {
            n << shift as usize
        } else {
            n >> (-shift) as usize
        };
        let q = &scaled / d;
        let inexact = shift < 0 || !(&scaled % d).is_zero();
        let q = if up && inexact { q + 1 } else { q };
        Mag::from_bigint(&q, -shift, up)
    }

    /// Upper bound for a finite nonnegative `f64` (used for heuristic inputs only).
    pub fn from_f64_up(x: f64) -> Mag {
        if x.is_nan() || x.is_infinite() {
            return Mag::INF;
        }
        if x <= 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = frexp(x);
        Mag::from_u128(((m * (1u64 << 53) as f64) as u128) + 1, e as i64 - 53, true)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_inf() {
            return f64::INFINITY;
        }
        (self.man as f64) * (2f64).powi(self.exp.clamp(-2000, 2000) as i32)
    }

    /// Exponent `e` with `self < 2^e` (for nonzero finite values).
    pub fn log2_ceil(&self) -> i64 {
        if self.man == 0 {
            return i64::MIN / 4;
        }
        self.exp + MB as i64
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_inf() {
            return None;
        }
        let m = BigInt::from(self.man);
        Some(if self.exp >= 0 {
            BigRational::from_integer(m << self.exp as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exp) as usize)
        })
    }

    fn combine_add(self, other: Mag, up: bool) -> Mag {
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let d = (hi.exp - lo.exp) as u64;
        if d >= 64 {
            let v = ((hi.man as u128) << 32) + if up { 1 } else { 0 };
            return Mag::from_u128(v, hi.exp - 32, up);
        }
        let v = ((hi.man as u128) << d) + lo.man as u128;
        Mag::from_u128(v, lo.exp, up)
    }

    pub fn add(self, other: Mag) -> Mag {
        self.combine_add(other, true)
    }

    pub fn add_down(self, other: Mag) -> Mag {
        self.combine_add(other, false)
    }

    /// `max(self - other, 0)` rounded down.
    pub fn sub_down(self, other: Mag) -> Mag {
        if other.is_zero() {
            return self;
        }
        if self.is_inf() {
            return Mag::INF;
        }
        if other.is_inf() || self <= other {
            return Mag::ZERO;
        }
        let d = (self.exp - other.exp) as u64;
        if d >= 64 {
            let v = ((self.man as u128) << 32) - 1;
            return Mag::from_u128(v, self.exp - 32, false);
        }
        let v = ((self.man as u128) << d) - other.man as u128;
        Mag::from_u128(v, other.exp, false)
    }

    fn mul_dir(self, other: Mag, up: bool) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        Mag::from_u128(
            self.man as u128 * other.man as u128,
            self.exp + other.exp,
            up,
        )
    }

    pub fn mul(self, other: Mag) -> Mag {
        self.mul_dir(other, true)
    }

    pub fn mul_down(self, other: Mag) -> Mag {
        self.mul_dir(other, false)
    }

    fn div_dir(self, other: Mag, up: bool) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if other.is_zero() || self.is_inf() {
            return if up { Mag::INF } else { Mag::ZERO };
        }
        if other.is_inf() {
            return Mag::ZERO;
        }
        let n = (self.man as u128) << 64;
        let q = n / other.man as u128;
        let r = n % other.man as u128;
        let q = if up && r != 0 { q + 1 } else { q };
        Mag::from_u128(q, self.exp - 64 - other.exp, up)
    }

    pub fn div(self, other: Mag) -> Mag {
        self.div_dir(other, true)
    }

    pub fn div_down(self, other: Mag) -> Mag {
        self.div_dir(other, false)
    }

    pub fn mul_u64(self, k: u64) -> Mag {
        self.mul(Mag::from_u64(k))
    }

    pub fn mul_2exp(self, e: i64) -> Mag {
        if self.is_zero() || self.is_inf() {
            return self;
        }
        Mag::checked(self.man, self.exp + e)
    }

    /// Lower bound of the square root.
    pub fn sqrt_down(self) -> Mag {
        self.sqrt_dir(false)
    }

    pub fn sqrt_up(self) -> Mag {
        self.sqrt_dir(true)
    }

    fn sqrt_dir(self, up: bool) -> Mag {
        if self.is_zero() || self.is_inf() {
            return self;
        }
        // Make the exponent even, then take an integer square root of a
        // 60+ bit mantissa.
        let mut m = (self.man as u128) << 64;
        let mut e = self.exp - 64;
        if e % 2 != 0 {
            m <<= 1;
            e -= 1;
        }
        let mut r = (m as f64).sqrt() as u128;
        while r * r > m {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= m {
            r += 1;
        }
        if up && r * r != m {
            r += 1;
        }
        Mag::from_u128(r, e / 2, up)
    }

    pub fn max(self, other: Mag) -> Mag {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        let (m, e) = frexp(x * (2f64).powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, exp - 1022)
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // Normalized mantissas: the exponent decides unless equal.
        self.exp
            .cmp(&other.exp)
            .then_with(|| self.man.cmp(&other.man))
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            write!(f, "Mag(inf)")
        } else {
            write!(f, "Mag({}*2^{})", self.man, self.exp)
        }
    }
}

impl fmt::Display for Mag {
    /// One significant decimal digit, rounded up: `3e-51`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            None => f.write_str("inf"),
            Some(r) if r.is_zero() => f.write_str("0"),
            Some(r) => {
                let (d, e) = super::real::leading_decimal_up(&r);
                write!(f, "{d}e{e}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_directions_bracket_the_truth() {
        let a = Mag::from_u64(3);
        let b = Mag::from_u64(7);
        let q_up = a.div(b);
        let q_dn = a.div_down(b);
        assert!(q_dn < q_up);
        assert!(q_dn.to_f64() <= 3.0 / 7.0 && 3.0 / 7.0 <= q_up.to_f64());
        let s = Mag::from_u64(2).sqrt_down();
        assert!(s.to_f64() <= std::f64::consts::SQRT_2);
        assert!(Mag::from_u64(2).sqrt_up().to_f64() >= std::f64::consts::SQRT_2);
    }

    #[test]
    fn add_and_sub() {
        let a = Mag::pow2(0);
        let tiny = Mag::pow2(-200);
        assert!(a.add(tiny) > a);
        assert_eq!(a.add_down(tiny), a);
        assert!(a.sub_down(tiny) < a);
        assert_eq!(tiny.sub_down(a), Mag::ZERO);
        assert_eq!(
            Mag::from_u64(10).sub_down(Mag::from_u64(4)),
            Mag::from_u64(6)
        );
    }

    #[test]
    fn display_rounds_up() {
        assert_eq!(Mag::from_u64(3).to_string(), "3e0");
        let r = Mag::from_rat(&BigRational::new(29.into(), 10000.into()), true);
        assert_eq!(r.to_string(), "3e-3");
    }
}
