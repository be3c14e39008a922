use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::mag::Mag;
use super::real::Real;
use crate::error::{Error, Result};

/// Guard bits on top of the decimal target.
pub const GUARD_BITS: u32 = 64;

/// Precision context passed explicitly to every numeric routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecCtx {
    pub working_bits: u32,
    pub target_digits: u32,
}

impl PrecCtx {
    pub fn new(target_digits: u32) -> PrecCtx {
        PrecCtx {
            working_bits: digits_to_bits(target_digits) + GUARD_BITS,
            target_digits,
        }
    }

    /// Context with explicit working bits; raised to the guard minimum if too low.
    pub fn with_bits(target_digits: u32, working_bits: u32) -> PrecCtx {
        let min = digits_to_bits(target_digits) + 32;
        PrecCtx {
            working_bits: working_bits.max(min),
            target_digits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.working_bits
    }

    /// Same target, twice the working bits.
    pub fn doubled(&self) -> PrecCtx {
        PrecCtx {
            working_bits: self.working_bits * 2,
            target_digits: self.target_digits,
        }
    }

    /// Target digits and working bits both raised by `extra` digits.
    pub fn raised(&self, extra: u32) -> PrecCtx {
        PrecCtx::new(self.target_digits + extra)
    }

    /// Upper bound for `10^(-digits)`.
    pub fn tolerance(digits: u32) -> Mag {
        let r = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
        Mag::from_rat(&r, true)
    }

    /// `10^(-target_digits)`.
    pub fn eps(&self) -> Mag {
        PrecCtx::tolerance(self.target_digits)
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.working_bits)
    }

    pub fn one(&self) -> Real {
        Real::one(self.working_bits)
    }

    pub fn rat(&self, r: &BigRational) -> Real {
        Real::from_rat(r, self.working_bits)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_int(v, self.working_bits)
    }
}

pub fn digits_to_bits(d: u32) -> u32 {
    (d as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

/// Runs `f` with increasing working precision until the result's relative
/// radius is at most `10^(-target_digits)`. Gives up after `max_doublings`.
pub fn refine<F>(ctx: &PrecCtx, max_doublings: u32, f: F) -> Result<Real>
where
    F: Fn(&PrecCtx) -> Result<Real>,
{
    let goal = ctx.eps();
    let mut c = *ctx;
    let mut last = None;
    for _ in 0..=max_doublings {
        let v = f(&c)?;
        if v.rad_within(goal) {
            return Ok(v);
        }
        last = Some(v);
        c = c.doubled();
    }
    Err(Error::PrecisionExhausted(format!(
        "radius still too large at {} bits: {}",
        c.working_bits / 2,
        last.map(|v| v.to_string()).unwrap_or_default()
    )))
}

impl Real {
    /// `rad ≤ goal · max(|x|, 1)`: relative for large values, absolute near zero.
    pub fn rad_within(&self, goal: Mag) -> bool {
        let scale = self.abs_lower().max(Mag::pow2(0));
        self.radius() <= goal.mul_down(scale)
    }
}
