use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ctx::PrecCtx;
use super::elementary::{exp, log, pi};
use super::mag::Mag;
use super::real::Real;
use crate::error::{Error, Result};
use crate::exact::{is_nonpositive_integer, Rat};

fn bernoulli_cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> BigRational {
    let mut b = bernoulli_cache().lock().unwrap();
    while b.len() <= n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let m = b.len();
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * &binom;
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let next = -acc / BigRational::from_integer(BigInt::from(m + 1));
        b.push(next);
    }
    b[n].clone()
}

/// `B_{2k} / (2k (2k-1))`.
fn stirling_coeff(k: usize) -> BigRational {
    bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)))
}

/// Stirling series for `log Γ(w)`; `w` must be certified ≥ the threshold.
fn log_gamma_stirling(w: &Real) -> Result<Real> {
    let prec = w.prec();
    let wl = w.abs_lower();
    let inv = w.inv()?;
    let inv2 = inv.sqr();
    let half = BigRational::new(1.into(), 2.into());
    let two_pi = pi(prec).mul_int(2);
    let mut sum = (w - &Real::from_rat(&half, prec)).mul_ref(&log(w)?) - w.clone()
        + log(&two_pi)?.mul_rat(&half);
    let eps = Mag::pow2(-(prec as i64) - 4);
    let mut power = inv.clone();
    let mut k = 1;
    loop {
        let c = stirling_coeff(k);
        sum = &sum + &power.mul_rat(&c);
        power = power.mul_ref(&inv2);
        k += 1;
        // First omitted term bounds the remainder for real w > 0.
        let next = Mag::from_rat(&stirling_coeff(k), true).div(pow_mag(wl, 2 * k as u64 - 1));
        if next < eps {
            return Ok(sum.add_error(next));
        }
        if k > 4 * prec as usize {
            return Err(Error::PrecisionExhausted(
                "Stirling series did not settle".into(),
            ));
        }
    }
}

fn pow_mag(m: Mag, e: u64) -> Mag {
    let mut acc = Mag::pow2(0);
    let mut b = m;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_down(b);
        }
        b = b.mul_down(b);
        e >>= 1;
    }
    acc
}

/// Γ of a ball by upward recurrence into the Stirling region.
pub fn gamma(z: &Real) -> Result<Real> {
    let prec = z.prec();
    if z.is_exact() {
        let r = z.mid_rat();
        if is_nonpositive_integer(&r) {
            return Err(Error::GammaPole(r.to_string()));
        }
        if r.is_integer() && r <= BigRational::from_integer(2000.into()) {
            let n = r.to_integer().to_u64().unwrap();
            let mut f = BigInt::one();
            for i in 2..n {
                f *= i;
            }
            return Ok(Real::from_bigint(f, prec));
        }
    }
    let threshold = (prec / 7 + 8) as i64;
    let zf = z.to_f64();
    let m = if zf < threshold as f64 {
        (threshold as f64 - zf).ceil() as i64
    } else {
        0
    };
    let bits_of_log = 2 + (threshold.max(zf.abs() as i64 + 1) as f64).log2().ceil() as u32 * 2;
    let w_prec = prec + 24 + bits_of_log;
    let zw = z.clone().with_prec(w_prec);
    let mut prod = Real::one(w_prec);
    for i in 0..m {
        prod = prod.mul_ref(&(&zw + &Real::from_int(i, w_prec)));
    }
    if prod.contains_zero() {
        return Err(Error::GammaPole(format!("{z}")));
    }
    let shifted = &zw + &Real::from_int(m, w_prec);
    if !shifted.is_positive() {
        return Err(Error::PrecisionExhausted(format!("argument {z} too wide")));
    }
    let lg = log_gamma_stirling(&shifted)?;
    let g = exp(&lg)?.div_ref(&prod)?;
    Ok(g.with_prec(prec))
}

/// Digamma `ψ(r)` at a positive rational: recurrence upward, then the
/// asymptotic series, whose remainder is below the first omitted term.
pub fn digamma_rat(r: &Rat, prec: u32) -> Result<Real> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("digamma needs a positive argument, got {r}")));
    }
    let threshold = BigRational::from_integer(BigInt::from(prec / 7 + 8));
    let mut shift = BigRational::zero();
    let mut w = r.clone();
    while w < threshold {
        shift += w.recip();
        w += BigRational::one();
    }
    let wp = prec + 24;
    let wr = Real::from_rat(&w, wp);
    let inv2 = Real::from_rat(&(&w * &w).recip(), wp);
    let mut sum = log(&wr)? - Real::from_rat(&(w.clone() * BigRational::from_integer(2.into())).recip(), wp);
    let eps = Mag::pow2(-(wp as i64) - 4);
    let wl = Mag::from_rat(&w, false);
    let mut power = inv2.clone();
    let mut k = 1usize;
    loop {
        let c = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k));
        sum = &sum - &power.mul_rat(&c);
        power = power.mul_ref(&inv2);
        k += 1;
        let c_next = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k));
        let next = Mag::from_rat(&c_next.abs(), true).div(pow_mag(wl, 2 * k as u64));
        if next < eps {
            sum = sum.add_error(next);
            break;
        }
        if k > 4 * prec as usize {
            return Err(Error::PrecisionExhausted("digamma series did not settle".into()));
        }
    }
    Ok((sum - Real::from_rat(&shift, wp)).with_prec(prec))
}

fn gamma_cache() -> &'static Mutex<HashMap<(Rat, u32), Real>> {
    static CACHE: OnceLock<Mutex<HashMap<(Rat, u32), Real>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Γ at an exact rational, memoized per working precision.
pub fn gamma_rat(r: &Rat, prec: u32) -> Result<Real> {
    let key = (r.clone(), prec);
    if let Some(v) = gamma_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = gamma(&Real::from_rat(r, prec))?;
    let mut cache = gamma_cache().lock().unwrap();
    if cache.len() > 50_000 {
        cache.clear();
    }
    cache.insert(key, v.clone());
    Ok(v)
}

/// Γ with the target-relative accuracy guarantee, raising precision as needed.
pub fn gamma_real(z: &Real, ctx: &PrecCtx) -> Result<Real> {
    gamma(&z.clone().with_prec(ctx.working_bits))
}

/// Rising factorial `(x)_n` of a ball.
pub fn pochhammer_num(x: &Real, n: u64) -> Real {
    let mut acc = Real::one(x.prec());
    for i in 0..n {
        acc = acc.mul_ref(&(x + &Real::from_int(i as i64, x.prec())));
    }
    acc
}

/// Exact rising factorial of a rational.
pub fn pochhammer_rat(x: &Rat, n: u64) -> Rat {
    let mut acc = Rat::one();
    for i in 0..n {
        acc *= x + Rat::from_integer(BigInt::from(i));
    }
    acc
}

/// `(x)_n` for any integer `n`: `Γ(x+n)/Γ(x)` continued to negative `n`.
pub fn pochhammer_signed_rat(x: &Rat, n: i64) -> Result<Rat> {
    if n >= 0 {
        return Ok(pochhammer_rat(x, n as u64));
    }
    // (x)_{-k} = 1 / ((x-k)(x-k+1)…(x-1))
    let k = (-n) as u64;
    let d = pochhammer_rat(&(x - Rat::from_integer(BigInt::from(k))), k);
    if d.is_zero() {
        return Err(Error::Pole);
    }
    Ok(d.recip())
}

/// Whether a ball certifies a value with relative accuracy `10^(-digits)`.
pub fn relatively_accurate(x: &Real, digits: u32) -> bool {
    let rel = x.rel_radius();
    rel <= PrecCtx::tolerance(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::elementary::{sin_pi_rat, sqrt};
    use crate::exact::{parse_rat, rat};

    #[test]
    fn digamma_values() {
        // ψ(1) = -γ, ψ(1/2) = -γ - 2 ln 2, ψ(x+1) = ψ(x) + 1/x.
        let euler = Real::from_rat(
            &parse_rat("5772156649015328606065120900824/10000000000000000000000000000000").unwrap(),
            200,
        );
        let p1 = digamma_rat(&rat(1, 1), 200).unwrap();
        assert!((&p1 + &euler).abs_upper() < Mag::pow2(-100));
        let ph = digamma_rat(&rat(1, 2), 200).unwrap();
        let ln4 = log(&Real::from_int(4, 200)).unwrap();
        assert!((&(&ph + &euler) + &ln4).abs_upper() < Mag::pow2(-100));
        let a = digamma_rat(&rat(7, 3), 150).unwrap();
        let b = digamma_rat(&rat(4, 3), 150).unwrap();
        assert!((&a - &b).contains_rat(&rat(3, 4)));
        assert!(digamma_rat(&rat(-1, 2), 64).is_err());
    }

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn gamma_small_values() {
        let p = 200;
        let g = gamma(&Real::from_rat(&rat(1, 2), p)).unwrap();
        let sp = sqrt(&pi(p)).unwrap();
        assert!(g.overlaps(&sp));
        assert!(g.radius() < Mag::pow2(-180));
        let five = gamma(&Real::from_rat(&rat(5, 1), p)).unwrap();
        assert!(five.contains_rat(&rat(24, 1)));
        assert!(gamma(&Real::from_int(0, p)).is_err());
        assert!(gamma(&Real::from_int(-3, p)).is_err());
        let neg = gamma(&Real::from_rat(&rat(-1, 2), p)).unwrap();
        assert!(neg.overlaps(&sp.mul_int(-2)));
    }

    #[test]
    fn gamma_quarter_functional_equations() {
        let p = 220;
        let g14 = gamma_rat(&rat(1, 4), p).unwrap();
        let g34 = gamma_rat(&rat(3, 4), p).unwrap();
        // Γ(1/4)Γ(3/4) = π / sin(π/4)
        let rhs = pi(p).div_ref(&sin_pi_rat(&rat(1, 4), p)).unwrap();
        assert!((&g14 * &g34).overlaps(&rhs));
        assert!(g14.radius() < Mag::pow2(-200));
    }

    #[test]
    fn pochhammer_matches_gamma_ratio() {
        let p = 160;
        let x = Real::from_rat(&rat(2, 7), p);
        let lhs = pochhammer_num(&x, 9);
        let rhs = gamma_rat(&rat(65, 7), p)
            .unwrap()
            .div_ref(&gamma_rat(&rat(2, 7), p).unwrap())
            .unwrap();
        assert!(lhs.overlaps(&rhs));
        assert!(pochhammer_num(&x, 0).contains_rat(&rat(1, 1)));
        assert_eq!(pochhammer_rat(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(pochhammer_signed_rat(&rat(5, 2), -2).unwrap(), rat(4, 3));
        assert!(pochhammer_signed_rat(&rat(1, 1), -1).is_err());
    }
}
