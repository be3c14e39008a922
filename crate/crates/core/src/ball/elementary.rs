use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mag::Mag;
use super::real::Real;
use crate::error::{Error, Result};
use crate::exact::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Pi,
    Ln2,
}

fn constant_cache() -> &'static Mutex<HashMap<(Constant, u32), Real>> {
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), Real>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(c: Constant, prec: u32, build: fn(u32) -> Real) -> Real {
    // Round the requested precision up so nearby requests share entries.
    let p = prec.div_ceil(64) * 64;
    if let Some(v) = constant_cache().lock().unwrap().get(&(c, p)) {
        return v.clone().with_prec(prec);
    }
    let v = build(p);
    constant_cache().lock().unwrap().insert((c, p), v.clone());
    v.with_prec(prec)
}

/// Fixed-point `Σ s^j floor(2^P / ((2j+1) n^(2j+1)))` with `s = -1` for
/// arctan and `s = +1` for artanh. Returns the sum and the number of terms.
fn inverse_series(n: u64, p: u32, alternating: bool) -> (BigInt, u64) {
    let n2 = BigInt::from(n * n);
    let mut power = (BigInt::one() << p as usize) / n;
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if alternating && j % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power /= &n2;
        j += 1;
    }
    (sum, j)
}

fn build_pi(prec: u32) -> Real {
    let p = prec + 32;
    let (a, ja) = inverse_series(5, p, true);
    let (b, jb) = inverse_series(239, p, true);
    let mid = a * 16 - b * 4;
    // Each term is floored (error < 1 ulp) and the alternating tail is below
    // one ulp, so each series is off by at most `terms + 1` ulps.
    let err = 16 * (ja + 1) + 4 * (jb + 1);
    Real::with_radius(
        mid,
        -(p as i64),
        Mag::from_u64(err).mul_2exp(-(p as i64)),
        prec,
    )
}

fn build_ln2(prec: u32) -> Real {
    let p = prec + 32;
    let (s, j) = inverse_series(3, p, false);
    // Positive tail after the last nonzero power is below 9/8 ulp.
    let err = 2 * (j + 2);
    Real::with_radius(
        s * 2,
        -(p as i64),
        Mag::from_u64(err).mul_2exp(-(p as i64)),
        prec,
    )
}

/// π to `prec` bits.
pub fn pi(prec: u32) -> Real {
    cached(Constant::Pi, prec, build_pi)
}

/// log 2 to `prec` bits.
pub fn ln2(prec: u32) -> Real {
    cached(Constant::Ln2, prec, build_ln2)
}

/// Square root of a nonnegative ball.
pub fn sqrt(x: &Real) -> Result<Real> {
    let prec = x.prec();
    if x.is_exact() && x.mid_rat().is_zero() {
        return Ok(Real::zero(prec));
    }
    if x.is_negative() {
        return Err(Error::Domain(format!("sqrt of negative value {x}")));
    }
    let lo = x.abs_lower();
    let (m, e) = dyadic_parts(x);
    if m.sign() != Sign::Plus {
        return Err(Error::Domain(format!("sqrt of ball around zero {x}")));
    }
    let mut shift = (2 * prec as i64 + 8 - m.bits() as i64).max(0);
    if (e - shift) % 2 != 0 {
        shift += 1;
    }
    let scaled = &m << shift as usize;
    let s = scaled.sqrt();
    let es = (e - shift) / 2;
    let exact = &s * &s == scaled;
    let round = if exact { Mag::ZERO } else { Mag::pow2(es) };
    if lo.is_zero() {
        // Ball touches zero: enclose [0, sqrt(upper)].
        let up = x.abs_upper().sqrt_up();
        let half = up.mul_2exp(-1);
        let r = Real::from_rat(&half.to_rational().unwrap(), prec).add_error(half);
        return Ok(r);
    }
    let denom = lo.sqrt_down().add_down(Mag::from_bigint(&s, es, false));
    let prop = x.radius().div(denom);
    Ok(Real::with_radius(s, es, round.add(prop), prec))
}

fn dyadic_parts(x: &Real) -> (BigInt, i64) {
    let r = x.mid_rat();
    let d = r.denom();
    let k = d.bits() as i64 - 1;
    (r.numer().clone(), -k)
}

/// Exponential of a ball.
pub fn exp(x: &Real) -> Result<Real> {
    let prec = x.prec();
    if x.is_exact() && x.mid_rat().is_zero() {
        return Ok(Real::one(prec));
    }
    let xf = x.to_f64();
    if !x.is_finite() || xf.abs() > 1e15 {
        return Err(Error::Domain(format!("exp argument out of range: {x}")));
    }
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let extra = 64 - (k.unsigned_abs().leading_zeros() as u32);
    let s: u32 = ((prec as f64).sqrt() / 2.0).ceil() as u32;
    let w = prec + 24 + extra + s;
    let xw = x.clone().with_prec(w);
    let r = &xw - &ln2(w).mul_int(k);
    let r = r.mul_2exp(-(s as i64));
    let rmag = r.abs_upper();
    if rmag > Mag::pow2(0) {
        return Err(Error::PrecisionExhausted(format!(
            "exp reduction failed for {x}"
        )));
    }
    let mut sum = Real::one(w);
    let mut term = Real::one(w);
    let mut j: i64 = 1;
    let eps = Mag::pow2(-(w as i64) - 4);
    loop {
        term = term.mul_ref(&r).div_int(j);
        let t = term.abs_upper();
        if t < eps {
            // Remaining terms form a series dominated by 2·|term_j|.
            sum = sum.add_error(t.mul_u64(2));
            break;
        }
        sum = &sum + &term;
        j += 1;
    }
    for _ in 0..s {
        sum = sum.sqr();
    }
    Ok(sum.mul_2exp(k).with_prec(prec))
}

/// Natural logarithm of a positive ball.
pub fn log(x: &Real) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("log of non-positive value {x}")));
    }
    let prec = x.prec();
    let w = prec + 32;
    let (m, e) = dyadic_parts(x);
    let mut k = m.bits() as i64 - 1 + e;
    // m 2^e / 2^k lies in [1, 2); shift down to [1/√2, √2).
    let top = (&m >> (m.bits() as usize).saturating_sub(8))
        .to_u64()
        .unwrap_or(128);
    if top as f64 > 128.0 * std::f64::consts::SQRT_2 {
        k += 1;
    }
    let y = x.clone().with_prec(w).mul_2exp(-k);
    if y.is_exact() && y.mid_rat().is_one() {
        return Ok(ln2(w).mul_int(k).with_prec(prec));
    }
    let one = Real::one(w);
    let z = (&y - &one).div_ref(&(&y + &one))?;
    let at = atanh_small(&z)?;
    let res = ln2(w).mul_int(k) + at.mul_int(2);
    Ok(res.with_prec(prec))
}

/// `atanh z` for `|z| ≤ 1/2`.
fn atanh_small(z: &Real) -> Result<Real> {
    let w = z.prec();
    let zm = z.abs_upper();
    if zm > Mag::pow2(-1) {
        return Err(Error::PrecisionExhausted("atanh argument too large".into()));
    }
    let z2 = z.sqr();
    let z2m = zm.mul(zm);
    let eps = Mag::pow2(-(w as i64) - 4);
    let mut power = z.clone();
    let mut pm = zm;
    let mut sum = Real::zero(w);
    let mut j: i64 = 0;
    loop {
        sum = &sum + &power.div_int(2 * j + 1);
        power = power.mul_ref(&z2);
        pm = pm.mul(z2m);
        j += 1;
        if pm < eps {
            // Σ_{i≥j} |z|^(2i+1)/(2i+1) ≤ |z|^(2j+1) / (1 - z²) ≤ 2|z|^(2j+1).
            return Ok(sum.add_error(pm.mul_u64(2)));
        }
    }
}

/// `base^e` for exact rationals; `base > 0` unless `e` is an integer.
pub fn pow_rat(base: &Rat, e: &Rat, prec: u32) -> Result<Real> {
    if e.is_integer() {
        let k = e
            .to_integer()
            .to_i32()
            .ok_or_else(|| Error::Domain("integer exponent too large".into()))?;
        if base.is_zero() {
            return match k.cmp(&0) {
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
                std::cmp::Ordering::Equal => Ok(Real::one(prec)),
                std::cmp::Ordering::Greater => Ok(Real::zero(prec)),
            };
        }
        return Ok(Real::from_rat(&num_traits::pow::Pow::pow(base, k), prec));
    }
    if !base.is_positive() {
        return Err(Error::Domain(format!(
            "non-positive base {base} with fractional exponent {e}"
        )));
    }
    let p = e
        .numer()
        .to_i32()
        .ok_or_else(|| Error::Domain("exponent too large".into()))?;
    let q = e
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Domain("root too deep".into()))?;
    let b = num_traits::pow::Pow::pow(base, p);
    nth_root_rat(&b, q, prec)
}

/// Positive real `q`-th root of a positive rational.
pub fn nth_root_rat(b: &Rat, q: u32, prec: u32) -> Result<Real> {
    if !b.is_positive() {
        return Err(Error::Domain("root of non-positive rational".into()));
    }
    let lg = b.numer().bits() as i64 - b.denom().bits() as i64;
    let s = prec as i64 + 8 - Integer::div_floor(&lg, &(q as i64));
    // M = floor(b · 2^(q s)), r = floor(M^(1/q)); then b^(1/q) 2^s ∈ [r, r + 1].
    let qs = q as i64 * s;
    let scaled = if qs >= 0 {
        (b.numer() << qs as usize).div_floor(b.denom())
    } else {
        (b.numer().clone()).div_floor(&(b.denom() << (-qs) as usize))
    };
    let r = scaled.nth_root(q);
    let exact = qs >= 0 && &scaled * b.denom() == b.numer() << qs as usize && r.pow(q) == scaled;
    if exact {
        return Ok(Real::from_dyadic(r, -s, prec));
    }
    let mid = (&r << 1usize) + 1u32;
    Ok(Real::with_radius(mid, -s - 1, Mag::pow2(-s - 1), prec))
}

/// `b^e` for a ball base and exact rational exponent.
pub fn pow_real_rat(b: &Real, e: &Rat) -> Result<Real> {
    if e.is_integer() {
        let k = e
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Domain("integer exponent too large".into()))?;
        return b.pow_i64(k);
    }
    if b.is_exact() {
        return pow_rat(&b.mid_rat(), e, b.prec());
    }
    if !b.is_positive() {
        return Err(Error::Domain(format!(
            "base {b} not certified positive for fractional exponent {e}"
        )));
    }
    let w = b.prec() + 16;
    let l = log(&b.clone().with_prec(w))?;
    Ok(exp(&l.mul_rat(e))?.with_prec(b.prec()))
}

/// General power `b^e` with `b > 0`.
pub fn pow(b: &Real, e: &Real) -> Result<Real> {
    if e.is_exact() {
        return pow_real_rat(b, &e.mid_rat());
    }
    let l = log(b)?;
    exp(&l.mul_ref(e))
}

/// `cos(π r)` for exact rational `r`.
pub fn cos_pi_rat(r: &Rat, prec: u32) -> Real {
    let two = BigRational::from_integer(2.into());
    let half = BigRational::new(1.into(), 2.into());
    let mut t = r - (r / &two).floor() * &two;
    if t > BigRational::one() {
        t = &two - t;
    }
    let mut negate = false;
    if t > half {
        t = BigRational::one() - t;
        negate = true;
    }
    // t ∈ [0, 1/2]
    let v = special_cos(&t, prec).unwrap_or_else(|| {
        let quarter = BigRational::new(1.into(), 4.into());
        let w = prec + 16;
        if t <= quarter {
            cos_taylor(&pi(w).mul_rat(&t))
        } else {
            sin_taylor(&pi(w).mul_rat(&(half - &t)))
        }
        .with_prec(prec)
    });
    if negate {
        -v
    } else {
        v
    }
}

/// `sin(π r)` for exact rational `r`.
pub fn sin_pi_rat(r: &Rat, prec: u32) -> Real {
    cos_pi_rat(&(r - BigRational::new(1.into(), 2.into())), prec)
}

fn special_cos(t: &Rat, prec: u32) -> Option<Real> {
    let d = t.denom().to_u32()?;
    let n = t.numer().to_u32()?;
    let exact = |p: i64, q: i64| Real::from_rat(&BigRational::new(p.into(), q.into()), prec);
    match (n, d) {
        (0, _) => Some(Real::one(prec)),
        (1, 2) => Some(Real::zero(prec)),
        (1, 3) => Some(exact(1, 2)),
        (1, 4) => sqrt(&exact(1, 2)).ok(),
        (1, 6) => sqrt(&exact(3, 4)).ok(),
        _ => None,
    }
}

fn taylor_trig(y: &Real, start_odd: bool) -> Real {
    let w = y.prec();
    let y2 = y.sqr();
    let eps = Mag::pow2(-(w as i64) - 4);
    let (mut term, mut j) = if start_odd {
        (y.clone(), 1i64)
    } else {
        (Real::one(w), 0i64)
    };
    let mut sum = Real::zero(w);
    loop {
        sum = &sum + &term;
        term = -term.mul_ref(&y2).div_int((j + 1) * (j + 2));
        j += 2;
        let t = term.abs_upper();
        if t < eps {
            // |y| < 1 makes the series alternating with decreasing terms.
            return sum.add_error(t);
        }
    }
}

fn cos_taylor(y: &Real) -> Real {
    taylor_trig(y, false)
}

fn sin_taylor(y: &Real) -> Real {
    taylor_trig(y, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rat, rat};

    fn approx(x: &Real, s: &str) -> bool {
        let r = parse_decimal(s);
        let tol = BigRational::new(1.into(), BigInt::from(10u32).pow(s.len() as u32 - 3));
        (x.mid_rat() - r).abs() < tol
    }

    fn parse_decimal(s: &str) -> BigRational {
        let (i, f) = s.split_once('.').unwrap();
        let den = BigInt::from(10u32).pow(f.len() as u32);
        let num: BigInt = format!("{i}{f}").parse().unwrap();
        BigRational::new(num, den)
    }

    #[test]
    fn pi_and_ln2_digits() {
        let p = pi(200);
        assert!(approx(
            &p,
            "3.14159265358979323846264338327950288419716939937510"
        ));
        assert!(p.radius() < Mag::pow2(-190));
        let l = ln2(200);
        assert!(approx(
            &l,
            "0.69314718055994530941723212145817656807550013436025"
        ));
    }

    #[test]
    fn sqrt_two() {
        let s = sqrt(&Real::from_int(2, 128)).unwrap();
        assert!(approx(&s, "1.41421356237309504880168872420969807"));
        let sq = s.sqr();
        assert!(sq.contains_rat(&rat(2, 1)));
        assert!(sqrt(&Real::from_int(-1, 64)).is_err());
        assert!(sqrt(&Real::from_int(9, 64))
            .unwrap()
            .contains_rat(&rat(3, 1)));
    }

    #[test]
    fn exp_log_round_trip() {
        let p = 160;
        let x = Real::from_rat(&rat(7, 3), p);
        let y = exp(&log(&x).unwrap()).unwrap();
        assert!(y.contains_rat(&rat(7, 3)));
        assert!(y.radius() < Mag::pow2(-140));
        let e = exp(&Real::one(200)).unwrap();
        assert!(approx(
            &e,
            "2.71828182845904523536028747135266249775724709369995"
        ));
        let big = exp(&Real::from_int(-300, p)).unwrap();
        assert!(big.is_positive());
        assert!(log(&Real::from_rat(&rat(1, 1000), p))
            .unwrap()
            .overlaps(&log(&Real::from_int(10, p)).unwrap().mul_int(-3)));
    }

    #[test]
    fn pow_rat_fourth_root_of_161() {
        let r = pow_rat(&rat(161, 1), &rat(1, 4), 200).unwrap();
        assert!(approx(&r, "3.5621029660089165339688"), "{r}");
        assert!(r.pow_u64(4).contains_rat(&rat(161, 1)));
        let exact = pow_rat(&rat(27, 8), &rat(-2, 3), 64).unwrap();
        assert!(exact.contains_rat(&rat(4, 9)));
        assert!(pow_rat(&rat(-2, 1), &rat(1, 2), 64).is_err());
        assert!(pow_rat(&rat(-2, 1), &rat(3, 1), 64)
            .unwrap()
            .contains_rat(&rat(-8, 1)));
    }

    #[test]
    fn cosines() {
        let c = cos_pi_rat(&rat(-1, 3), 100);
        assert!(c.contains_rat(&rat(1, 2)));
        assert!(cos_pi_rat(&rat(1, 1), 100).contains_rat(&rat(-1, 1)));
        assert!(cos_pi_rat(&rat(5, 2), 100).contains_rat(&rat(0, 1)));
        let c5 = cos_pi_rat(&parse_rat("1/5").unwrap(), 160);
        // cos(π/5) = (1 + √5)/4
        let golden = (sqrt(&Real::from_int(5, 160)).unwrap() + Real::one(160)).div_int(4);
        assert!(c5.overlaps(&golden));
        assert!(c5.radius() < Mag::pow2(-150));
        let s = sin_pi_rat(&rat(1, 7), 160);
        let c = cos_pi_rat(&rat(1, 7), 160);
        assert!((s.sqr() + c.sqr()).contains_rat(&rat(1, 1)));
    }
}
