//! Validated quadrature for products of powers of linear forms.
//!
//! The integrand `Π (a_i + b_i t)^(p_i)` on `[0, 1]` is split into an
//! endpoint piece at each end, where factors vanishing at the endpoint are
//! kept as an exact weight `t^λ`, and a chain of centered pieces in between.
//! On each piece the remaining factors are expanded in Taylor series; the
//! truncation error is bounded by a coefficientwise majorant whose value at
//! the piece radius is known in closed form.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{pow_rat, Mag, Real};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};

/// The factor `(a + b t)^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub a: Rat,
    pub b: Rat,
    pub p: Rat,
}

impl Factor {
    pub fn new(a: Rat, b: Rat, p: Rat) -> Factor {
        Factor { a, b, p }
    }

    fn is_poly(&self) -> bool {
        self.p.is_integer() && !self.p.is_negative()
    }

    fn value_at(&self, t: &Rat) -> Rat {
        &self.a + &self.b * t
    }

    fn zero(&self) -> Option<Rat> {
        if self.b.is_zero() {
            None
        } else {
            Some(-&self.a / &self.b)
        }
    }

    /// Same factor written in `u = 1 - t`.
    fn reflected(&self) -> Factor {
        Factor::new(&self.a + &self.b, -&self.b, self.p.clone())
    }
}

/// Taylor data of a product of factors around a center.
struct Expansion {
    /// Coefficients of the normalized product in powers of `s`.
    coeffs: Vec<Real>,
    /// Value of the non-polynomial factors at the center.
    scale: Real,
    /// Upper bound for `Σ_{k≥K} |coeff_k| r^k` at the piece radius `r`.
    tail: Mag,
}

fn binomial_poly(v: &Rat, b: &Rat, p: u64) -> Vec<Rat> {
    // (v + b s)^p
    let mut out = Vec::with_capacity(p as usize + 1);
    let mut c = BigInt::one();
    for k in 0..=p {
        let vk = num_traits::pow::Pow::pow(v, (p - k) as u32);
        let bk = num_traits::pow::Pow::pow(b, k as u32);
        out.push(Rat::from_integer(c.clone()) * vk * bk);
        c = c * BigInt::from(p - k) / BigInt::from(k + 1);
    }
    out
}

fn poly_mul(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Coefficients of `Π (1 + w_i s)^(p_i)` up to order `k_max` via the
/// logarithmic derivative.
fn log_derivative_series(ws: &[(Real, Rat)], k_max: usize, prec: u32) -> Vec<Real> {
    // d_j = Σ p_i w_i (-w_i)^j
    let mut d = Vec::with_capacity(k_max);
    let mut pw: Vec<Real> = ws.iter().map(|(w, p)| w.mul_rat(p)).collect();
    for _ in 0..k_max {
        let mut s = Real::zero(prec);
        for v in &pw {
            s = &s + v;
        }
        d.push(s);
        for (v, (w, _)) in pw.iter_mut().zip(ws) {
            *v = -v.mul_ref(w);
        }
    }
    let mut g = vec![Real::one(prec)];
    for k in 0..k_max {
        let mut s = Real::zero(prec);
        for j in 0..=k {
            s = &s + &d[j].mul_ref(&g[k - j]);
        }
        g.push(s.div_int(k as i64 + 1));
    }
    g
}

/// Expands the factors around `center` for `|s| ≤ r`, choosing the order so
/// that the majorant tail is below `2^-prec` relative to the majorant.
fn expand(factors: &[Factor], center: &Rat, r: &Rat, prec: u32) -> Result<Expansion> {
    let wp = prec + 32;
    let mut nonpoly: Vec<(Real, Rat)> = Vec::new();
    let mut major: Vec<(Real, Rat)> = Vec::new();
    let mut major_at_r = Real::one(wp);
    let mut scale = Real::one(wp);
    let mut poly = vec![Rat::one()];
    let mut poly_major = vec![Rat::one()];
    for f in factors {
        if f.p.is_zero() {
            continue;
        }
        let v = f.value_at(center);
        if f.is_poly() {
            let e = f.p.to_integer().to_u64().unwrap();
            poly = poly_mul(&poly, &binomial_poly(&v, &f.b, e));
            poly_major = poly_mul(&poly_major, &binomial_poly(&v.abs(), &f.b.abs(), e));
            continue;
        }
        if v.is_zero() {
            return Err(Error::Domain(
                "factor vanishes at an expansion center".into(),
            ));
        }
        let w = &f.b / &v;
        let wr = w.abs() * r;
        if wr >= Rat::one() {
            return Err(Error::Domain(
                "expansion radius reaches a singularity".into(),
            ));
        }
        scale = scale.mul_ref(&pow_rat(&v, &f.p, wp)?);
        nonpoly.push((Real::from_rat(&w, wp), f.p.clone()));
        major.push((Real::from_rat(&-w.abs(), wp), -f.p.abs()));
        major_at_r = major_at_r.mul_ref(&pow_rat(&(Rat::one() - wr), &-f.p.abs(), wp)?);
    }
    let poly_at_r: Rat = poly_major
        .iter()
        .rev()
        .fold(Rat::zero(), |acc, c| acc * r + c);
    let total = major_at_r.mul_ref(&Real::from_rat(&poly_at_r, wp));
    let goal = total.abs_upper().mul_2exp(-(prec as i64) - 8);
    let rr = Real::from_rat(r, wp);

    // Grow the order until the majorant tail is small.
    let deg = poly.len();
    let mut k_max = (prec as usize) / 2 + deg + 16;
    let cap = 6 * prec as usize + deg + 64;
    loop {
        let gm = log_derivative_series(&major, k_max, wp);
        let pm: Vec<Real> = poly_major.iter().map(|c| Real::from_rat(c, wp)).collect();
        let mut partial = Real::zero(wp);
        let mut rk = Real::one(wp);
        for k in 0..k_max {
            let mut ck = Real::zero(wp);
            for (j, pj) in pm.iter().enumerate().take(k + 1) {
                ck = &ck + &gm[k - j].mul_ref(pj);
            }
            partial = &partial + &ck.mul_ref(&rk);
            rk = rk.mul_ref(&rr);
        }
        let tail = (&total - &partial).abs_upper();
        if tail <= goal || k_max >= cap {
            let g = log_derivative_series(&nonpoly, k_max, wp);
            let pr: Vec<Real> = poly.iter().map(|c| Real::from_rat(c, wp)).collect();
            let mut coeffs = Vec::with_capacity(k_max);
            for k in 0..k_max {
                let mut ck = Real::zero(wp);
                for (j, pj) in pr.iter().enumerate().take(k + 1) {
                    ck = &ck + &g[k - j].mul_ref(pj);
                }
                coeffs.push(ck);
            }
            return Ok(Expansion {
                coeffs,
                scale,
                tail,
            });
        }
        k_max = (k_max * 3) / 2;
    }
}

/// `∫_0^h t^λ Π f_i(t) dt` with every `f_i` regular on `[0, h]`.
fn endpoint_piece(factors: &[Factor], lambda: &Rat, h: &Rat, prec: u32) -> Result<Real> {
    let e = expand(factors, &Rat::zero(), h, prec)?;
    let wp = prec + 32;
    let l1 = lambda + Rat::one();
    let hl = pow_rat(h, &l1, wp)?;
    let hr = Real::from_rat(h, wp);
    let mut sum = Real::zero(wp);
    let mut hk = Real::one(wp);
    for (k, c) in e.coeffs.iter().enumerate() {
        let denom = Rat::from_integer(BigInt::from(k)) + &l1;
        sum = &sum + &c.mul_ref(&hk).div_rat(&denom)?;
        hk = hk.mul_ref(&hr);
    }
    let kk = Rat::from_integer(BigInt::from(e.coeffs.len())) + &l1;
    let tail = e.tail.div(Mag::from_rat(&kk, false));
    let piece = sum.add_error(tail).mul_ref(&hl);
    Ok(piece.mul_ref(&e.scale))
}

/// `∫_{c-h}^{c+h} Π f_i(t) dt`.
fn centered_piece(factors: &[Factor], c: &Rat, h: &Rat, prec: u32) -> Result<Real> {
    let e = expand(factors, c, h, prec)?;
    let wp = prec + 32;
    let hr = Real::from_rat(h, wp);
    let h2 = hr.sqr();
    let mut sum = Real::zero(wp);
    let mut hk = hr.mul_int(2);
    for (k, coef) in e.coeffs.iter().enumerate().step_by(2) {
        sum = &sum + &coef.mul_ref(&hk).div_int(k as i64 + 1);
        hk = hk.mul_ref(&h2);
    }
    let tail = e.tail.mul(Mag::from_rat(&(h * rat(2, 1)), true));
    Ok(sum.add_error(tail).mul_ref(&e.scale))
}

/// Largest power of two not exceeding `x > 0`.
fn pow2_floor(x: &Rat) -> Rat {
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64 + 1;
    loop {
        let p = if k >= 0 {
            Rat::from_integer(BigInt::one() << k as usize)
        } else {
            Rat::new(BigInt::one(), BigInt::one() << (-k) as usize)
        };
        if p <= *x {
            return p;
        }
        k -= 1;
    }
}

/// Splits factors vanishing at `t = 0` into an exact weight `κ t^λ`.
fn split_weight(factors: &[Factor], prec: u32) -> Result<(Rat, Real, Vec<Factor>)> {
    let mut lambda = Rat::zero();
    let mut konst = Real::one(prec);
    let mut rest = Vec::new();
    for f in factors {
        if f.a.is_zero() && !f.b.is_zero() && !f.p.is_zero() {
            lambda += &f.p;
            konst = konst.mul_ref(&pow_rat(&f.b, &f.p, prec)?);
        } else {
            rest.push(f.clone());
        }
    }
    if lambda <= -Rat::one() {
        return Err(Error::Divergent(format!(
            "endpoint exponent {lambda} is not integrable"
        )));
    }
    Ok((lambda, konst, rest))
}

/// Rigorous enclosure of `∫_0^1 Π (a_i + b_i t)^(p_i) dt`.
///
/// Non-polynomial factors must not vanish inside `(0, 1)`, and those with
/// fractional exponents must be positive there; factors with nonnegative
/// integer exponents may change sign. Factors vanishing at an endpoint give
/// the endpoint weight, whose exponent must exceed `-1`.
pub fn integrate_product(factors: &[Factor], prec: u32) -> Result<Real> {
    let half = rat(1, 2);
    let mut singular: Vec<Rat> = Vec::new();
    for f in factors {
        if f.p.is_zero() {
            continue;
        }
        if f.b.is_zero() {
            if f.a.is_zero() || (!f.p.is_integer() && f.a.is_negative()) {
                return Err(Error::Domain(
                    "constant factor outside the real domain".into(),
                ));
            }
            continue;
        }
        if f.is_poly() {
            continue;
        }
        let z = f.zero().unwrap();
        if z > Rat::zero() && z < Rat::one() {
            return Err(Error::Domain(format!(
                "integrand singular at interior point t = {z}"
            )));
        }
        if !f.p.is_integer() && !f.value_at(&half).is_positive() {
            return Err(Error::Domain(
                "fractional power of a negative factor".into(),
            ));
        }
        singular.push(z);
    }
    let wp = prec + 32;

    let dist = |t: &Rat, skip: &Rat| -> Rat {
        singular
            .iter()
            .filter(|z| *z != skip)
            .map(|z| (z - t).abs())
            .min()
            .unwrap_or_else(|| rat(4, 1))
            .min(rat(2, 1))
    };

    // Left piece [0, h0].
    let (lambda0, k0, rest0) = split_weight(factors, wp)?;
    let h0 = pow2_floor(&(dist(&Rat::zero(), &Rat::zero()) / rat(4, 1))).min(rat(1, 4));
    let left = endpoint_piece(&rest0, &lambda0, &h0, prec)?.mul_ref(&k0);

    // Right piece [1-h1, 1] in u = 1 - t.
    let refl: Vec<Factor> = factors.iter().map(Factor::reflected).collect();
    let (lambda1, k1, rest1) = split_weight(&refl, wp)?;
    let h1 = pow2_floor(&(dist(&Rat::one(), &Rat::one()) / rat(4, 1))).min(rat(1, 4));
    let right = endpoint_piece(&rest1, &lambda1, &h1, prec)?.mul_ref(&k1);

    // Centered pieces covering [h0, 1-h1].
    let mut total = &left + &right;
    let end = Rat::one() - &h1;
    let mut l = h0;
    let mut pieces = 0usize;
    while l < end {
        let d = singular
            .iter()
            .map(|z| (z - &l).abs())
            .min()
            .unwrap_or_else(|| rat(4, 1));
        let mut h = pow2_floor(&(d / rat(5, 1))).min(rat(1, 8));
        if &l + &h * rat(2, 1) > end {
            h = (&end - &l) / rat(2, 1);
        }
        let c = &l + &h;
        total = &total + &centered_piece(factors, &c, &h, prec)?;
        l = &c + &h;
        pieces += 1;
        if pieces > 10_000 {
            return Err(Error::PrecisionExhausted(
                "too many quadrature pieces".into(),
            ));
        }
    }
    Ok(total.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{gamma_rat, log};
    use crate::exact::parse_rat;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    #[test]
    fn polynomial_integrand_is_exact_enough() {
        // ∫ (1 - 2t)^3 dt = 0
        let v = integrate_product(&[Factor::new(r("1"), r("-2"), r("3"))], 128).unwrap();
        assert!(v.contains_rat(&r("0")));
        assert!(v.radius() < Mag::pow2(-100));
    }

    #[test]
    fn beta_integral() {
        // ∫ t^(-1/2) (1-t)^(1/3) dt = B(1/2, 4/3)
        let p = 160;
        let v = integrate_product(
            &[
                Factor::new(r("0"), r("1"), r("-1/2")),
                Factor::new(r("1"), r("-1"), r("1/3")),
            ],
            p,
        )
        .unwrap();
        let b = gamma_rat(&r("1/2"), p)
            .unwrap()
            .mul_ref(&gamma_rat(&r("4/3"), p).unwrap())
            .div_ref(&gamma_rat(&r("11/6"), p).unwrap())
            .unwrap();
        assert!(v.overlaps(&b), "{v} vs {b}");
        assert!(v.radius() < Mag::pow2(-120), "{v}");
    }

    #[test]
    fn logarithmic_integral() {
        // ∫ 1/(1+t) dt = log 2
        let v = integrate_product(&[Factor::new(r("1"), r("1"), r("-1"))], 128).unwrap();
        let l = log(&Real::from_int(2, 128)).unwrap();
        assert!(v.overlaps(&l));
        assert!(v.radius() < Mag::pow2(-100));
    }

    #[test]
    fn interior_singularity_rejected() {
        assert!(integrate_product(&[Factor::new(r("1"), r("-2"), r("-1/2"))], 64).is_err());
    }
}
