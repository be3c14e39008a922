use num_traits::{One, Signed, Zero};

use super::series::{eval_2f1, eval_2f1_series};
use super::{EvalResult, Method, Params2F1};
use crate::ball::{digamma_rat, gamma_rat, log, pow_rat, Mag, PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::{is_nonpositive_integer, rat, Rat};

/// `Π Γ(num_i) / Π Γ(den_j)`; a pole among the denominators gives exactly 0.
pub(crate) fn gamma_ratio(num: &[Rat], den: &[Rat], prec: u32) -> Result<Real> {
    if let Some(p) = num.iter().find(|r| is_nonpositive_integer(r)) {
        return Err(Error::GammaPole(p.to_string()));
    }
    if den.iter().any(is_nonpositive_integer) {
        return Ok(Real::zero(prec));
    }
    let mut acc = Real::one(prec);
    for r in num {
        acc = acc.mul_ref(&gamma_rat(r, prec)?);
    }
    for r in den {
        acc = acc.div_ref(&gamma_rat(r, prec)?)?;
    }
    Ok(acc)
}

/// Gauss's summation `Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`, valid for `c-a-b > 0`.
pub fn gauss_sum(p: &Params2F1, ctx: &PrecCtx) -> Result<Real> {
    let s = &p.c - &p.a - &p.b;
    if !s.is_positive() {
        return Err(Error::Domain(format!(
            "Gauss summation needs c-a-b > 0, got {s}"
        )));
    }
    let w = ctx.working_bits + 16;
    let v = gamma_ratio(&[p.c.clone(), s], &[&p.c - &p.a, &p.c - &p.b], w)?;
    Ok(v.with_prec(ctx.working_bits))
}

/// Connection formula from `x` to `1-x`:
///
/// `F(a,b;c;x) = A·F(a,b;a+b-c+1;1-x) + B·(1-x)^(c-a-b)·F(c-a,c-b;c-a-b+1;1-x)`
/// with `A = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))` and `B = Γ(c)Γ(a+b-c)/(Γ(a)Γ(b))`.
pub fn eval_2f1_connection(p: &Params2F1, x: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    let s = &p.c - &p.a - &p.b;
    if s.is_integer() {
        return Err(Error::Domain(format!(
            "connection formula degenerates for integer c-a-b = {s}"
        )));
    }
    let u = Rat::one() - x;
    if u.abs() >= Rat::one() || u.is_negative() {
        return Err(Error::Domain(format!("need 0 ≤ 1-x < 1, got 1-x = {u}")));
    }
    let w = ctx.working_bits + 24;
    let wctx = PrecCtx::with_bits(ctx.target_digits, w);
    let a_coef = gamma_ratio(&[p.c.clone(), s.clone()], &[&p.c - &p.a, &p.c - &p.b], w)?;
    let f2 = eval_2f1_series(
        &Params2F1::new(p.a.clone(), p.b.clone(), &p.a + &p.b - &p.c + Rat::one()),
        &u,
        &wctx,
    )?;
    let mut value = a_coef.mul_ref(&f2.value);
    let mut terms = f2.terms_used;
    if u.is_zero() {
        if s.is_negative() {
            return Err(Error::Divergent("c-a-b < 0 at x = 1".into()));
        }
    } else {
        let b_coef = gamma_ratio(&[p.c.clone(), -&s], &[p.a.clone(), p.b.clone()], w)?;
        let f6 = eval_2f1_series(
            &Params2F1::new(&p.c - &p.a, &p.c - &p.b, &s + Rat::one()),
            &u,
            &wctx,
        )?;
        terms += f6.terms_used;
        let pw = pow_rat(&u, &s, w)?;
        value = value + b_coef.mul_ref(&pw).mul_ref(&f6.value);
    }
    Ok(EvalResult {
        value: value.with_prec(ctx.working_bits),
        terms_used: terms,
        method: Method::Connection,
    })
}

/// Logarithmic case `c = a + b` of the connection formula, for `0 < 1-x < 1`:
///
/// `F = Γ(a+b)/(Γ(a)Γ(b)) Σ (a)_k(b)_k/k!² (1-x)^k [2ψ(k+1) - ψ(a+k) - ψ(b+k) - ln(1-x)]`.
pub fn eval_2f1_log_connection(p: &Params2F1, x: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    let (a, b) = (&p.a, &p.b);
    if p.c != a + b {
        return Err(Error::Domain("logarithmic connection needs c = a + b".into()));
    }
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain("logarithmic connection needs a, b > 0".into()));
    }
    let u = Rat::one() - x;
    if !u.is_positive() || u >= Rat::one() {
        return Err(Error::Domain(format!("need 0 < 1-x < 1, got 1-x = {u}")));
    }
    let w = ctx.working_bits + 24;
    let one = Rat::one();
    let pre = gamma_ratio(&[p.c.clone()], &[a.clone(), b.clone()], w)?;
    let d0 = digamma_rat(&one, w)?.mul_int(2) - digamma_rat(a, w)? - digamma_rat(b, w)?;
    let base = d0 - log(&Real::from_rat(&u, w))?;
    let lip = (a - &one).abs() + (b - &one).abs();
    let s = a.clone().min(b.clone()).min(one.clone());
    let eps = Mag::pow2(-(w as i64) - 8);
    let mut t = Real::one(w);
    let mut d = Rat::zero();
    let mut sum = Real::zero(w);
    let mut k: u64 = 0;
    loop {
        let kr = Rat::from_integer(k.into());
        let h = &base + &Real::from_rat(&d, w);
        sum = &sum + &t.mul_ref(&h);
        d += rat(2, 1) / (&kr + &one) - (a + &kr).recip() - (b + &kr).recip();
        t = t.mul_rat(&((a + &kr) * (b + &kr) * &u / ((&kr + &one) * (&kr + &one))));
        k += 1;
        let kk = Rat::from_integer(k.into());
        let grow = |c: &Rat| one.clone() + (c - &one).max(Rat::zero()) / (&kk + &one);
        let rho = &u * grow(a) * grow(b);
        let gap = &kk - &one + &s;
        if k >= 4 && rho < one && gap.is_positive() {
            let h_bound = (&base + &Real::from_rat(&d, w))
                .abs_upper()
                .add(Mag::from_rat(&(&lip / &gap), true));
            let tail = t
                .abs_upper()
                .mul(h_bound)
                .div(Mag::from_rat(&(&one - &rho), false));
            if tail < eps {
                sum = sum.add_error(tail);
                break;
            }
        }
        if k > 50_000_000 {
            return Err(Error::PrecisionExhausted("logarithmic connection series".into()));
        }
    }
    Ok(EvalResult {
        value: pre.mul_ref(&sum).with_prec(ctx.working_bits),
        terms_used: k,
        method: Method::Connection,
    })
}

/// Pfaff: `F(a,b;c;x) = (1-x)^(-a) F(a, c-b; c; x/(x-1))`.
pub(crate) fn pfaff(p: &Params2F1, x: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    let z = x / (x - Rat::one());
    let w = ctx.working_bits + 16;
    let wctx = PrecCtx::with_bits(ctx.target_digits, w);
    let inner = eval_2f1(
        &Params2F1::new(p.a.clone(), &p.c - &p.b, p.c.clone()),
        &z,
        &wctx,
    )?;
    let pre = pow_rat(&(Rat::one() - x), &-&p.a, w)?;
    Ok(EvalResult {
        value: pre.mul_ref(&inner.value).with_prec(ctx.working_bits),
        terms_used: inner.terms_used,
        method: inner.method,
    })
}

/// Quadratic transformation
/// `F(a,b;2b;x) = (1-x)^(b-a) (1-x/2)^(a-2b) F(b-a/2, b+1/2-a/2; b+1/2; (x/(2-x))^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goursat45 {
    /// Exponent of `(1-x)`.
    pub exp_one_minus_x: Rat,
    /// Exponent of `(1-x/2)`.
    pub exp_one_minus_half_x: Rat,
    pub params: Params2F1,
    pub x: Rat,
    /// Original argument, kept for evaluating the prefactor.
    pub x_orig: Rat,
}

impl Goursat45 {
    /// Prefactor `(1-x)^(b-a) (1-x/2)^(a-2b)` as a ball.
    pub fn prefactor(&self, ctx: &PrecCtx) -> Result<Real> {
        let w = ctx.working_bits + 16;
        let one = Rat::one();
        let f1 = pow_rat(&(&one - &self.x_orig), &self.exp_one_minus_x, w)?;
        let f2 = pow_rat(
            &(&one - &self.x_orig / rat(2, 1)),
            &self.exp_one_minus_half_x,
            w,
        )?;
        Ok(f1.mul_ref(&f2).with_prec(ctx.working_bits))
    }

    /// Right-hand side evaluated numerically.
    pub fn evaluate(&self, ctx: &PrecCtx) -> Result<EvalResult> {
        let inner = eval_2f1(&self.params, &self.x, ctx)?;
        Ok(EvalResult {
            value: self.prefactor(ctx)?.mul_ref(&inner.value),
            terms_used: inner.terms_used,
            method: inner.method,
        })
    }
}

/// Applies the quadratic transformation to `F(a, b; c; x)` with `c = 2b`.
pub fn goursat45_transform(p: &Params2F1, x: &Rat) -> Result<Goursat45> {
    if p.c != &p.b * rat(2, 1) {
        return Err(Error::Domain(format!(
            "transformation needs c = 2b, got b = {}, c = {}",
            p.b, p.c
        )));
    }
    let two = rat(2, 1);
    if *x == two {
        return Err(Error::Domain("x = 2 is excluded".into()));
    }
    let half = rat(1, 2);
    let a = &p.a;
    let b = &p.b;
    let z = x / (&two - x);
    Ok(Goursat45 {
        exp_one_minus_x: b - a,
        exp_one_minus_half_x: a - b * &two,
        params: Params2F1::new(b - a * &half, b + &half - a * &half, b + &half),
        x: &z * &z,
        x_orig: x.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    #[test]
    fn log_connection_matches_series() {
        let ctx = PrecCtx::new(50);
        let p = Params2F1::new(r("1/4"), r("1/2"), r("3/4"));
        let c = eval_2f1_log_connection(&p, &r("80/81"), &ctx).unwrap();
        let s = eval_2f1_series(&p, &r("80/81"), &ctx).unwrap();
        assert!(c.value.overlaps(&s.value));
        assert!(c.value.contains_rat(&r("9/5")));
        assert!(c.value.radius() < PrecCtx::tolerance(50));
        assert!(c.terms_used < s.terms_used);
        let q = Params2F1::new(r("7/2"), r("1/3"), r("23/6"));
        let c = eval_2f1_log_connection(&q, &r("1/3"), &ctx).unwrap();
        let s = eval_2f1_series(&q, &r("1/3"), &ctx).unwrap();
        assert!(c.value.overlaps(&s.value));
        assert!(eval_2f1_log_connection(&q, &r("3/2"), &ctx).is_err());
        assert!(eval_2f1_log_connection(&p.clone(), &r("1"), &ctx).is_err());
    }

    #[test]
    fn gauss_examples() {
        let ctx = PrecCtx::new(40);
        let two = gauss_sum(&Params2F1::new(r("1"), r("1"), r("3")), &ctx).unwrap();
        assert!(two.contains_rat(&r("2")));
        assert!(gauss_sum(&Params2F1::new(r("1/2"), r("1/2"), r("1")), &ctx).is_err());
    }

    #[test]
    fn goursat_parameters() {
        let g =
            goursat45_transform(&Params2F1::new(r("3/4"), r("1/2"), r("1")), &r("1/81")).unwrap();
        assert_eq!(g.params, Params2F1::new(r("1/8"), r("5/8"), r("1")));
        assert_eq!(g.x, r("1/25921"));
        assert!(
            goursat45_transform(&Params2F1::new(r("3/4"), r("1/2"), r("2")), &r("1/81")).is_err()
        );
        let z =
            goursat45_transform(&Params2F1::new(r("1/3"), r("1/4"), r("1/2")), &r("0")).unwrap();
        assert_eq!(z.x, r("0"));
        assert!(z
            .prefactor(&PrecCtx::new(20))
            .unwrap()
            .contains_rat(&r("1")));
    }
}
