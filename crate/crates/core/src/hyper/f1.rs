use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::gamma_ratio;
use super::quad::{integrate_product, Factor};
use super::series::{eval_2f1, hyper_sum, series_bits};
use super::{EvalResult, Method, Params2F1, ParamsF1};
use crate::ball::{pow_rat, Mag, PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::{is_nonpositive_integer, Rat};

/// Evaluation route requested for F1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F1Method {
    Auto,
    Series,
    Terminating,
    Integral,
}

fn nonpos_int(r: &Rat) -> Option<u64> {
    if is_nonpositive_integer(r) {
        (-r).to_integer().to_u64()
    } else {
        None
    }
}

/// Rough count of terms needed for a geometric rate `|z|` at `bits` bits.
fn est_terms(z: &Rat, beta: &Rat, bits: u32) -> f64 {
    if let Some(n) = nonpos_int(beta) {
        return n as f64 + 1.0;
    }
    let zf = z.abs().to_f64().unwrap_or(1.0);
    if zf == 0.0 {
        return 1.0;
    }
    if zf >= 1.0 {
        return f64::INFINITY;
    }
    bits as f64 / -zf.log2() + 10.0
}

/// Bound on `Σ_n |(α+m)_n (β)_n / ((γ+m)_n n!)| |v|^n` for all `m ≥ M`,
/// with `κ = max(1, (α+M)/(γ+M))`.
fn row_bound(kappa: &Rat, beta: &Rat, v: &Rat, prec: u32) -> Option<Mag> {
    let kv = kappa * v.abs();
    if let Some(n) = nonpos_int(beta) {
        let base = Rat::one() + kv;
        let b = pow_rat(&base, &Rat::from_integer(BigInt::from(n)), prec).ok()?;
        return Some(b.abs_upper());
    }
    if kv >= Rat::one() {
        return None;
    }
    let b = pow_rat(&(Rat::one() - kv), &-beta.abs(), prec).ok()?;
    Some(b.abs_upper())
}

/// Σ_m u_m · 2F1(α+m, βv; γ+m; v) with outer argument `u`.
fn double_sum(
    p: &ParamsF1,
    beta_u: &Rat,
    beta_v: &Rat,
    u: &Rat,
    v: &Rat,
    bits: u32,
) -> Result<(Real, u64)> {
    let outer_stop = nonpos_int(beta_u);
    if outer_stop.is_none() && u.abs() >= Rat::one() {
        return Err(Error::Divergent(format!("outer argument {u}")));
    }
    if nonpos_int(beta_v).is_none() && v.abs() >= Rat::one() {
        return Err(Error::Divergent(format!("inner argument {v}")));
    }
    let one = Rat::one();
    let mut total = Real::zero(bits);
    let mut coef = Real::one(bits);
    let mut terms = 0u64;
    let mut m: u64 = 0;
    let mut next_check = 0u64;
    let mut row_cache: Option<(u64, Mag)> = None;
    loop {
        let mr = Rat::from_integer(BigInt::from(m));
        let a_m = &p.alpha + &mr;
        let g_m = &p.gamma + &mr;
        if outer_stop.is_none() && m >= next_check && a_m.is_positive() && g_m.is_positive() {
            let b_m = beta_u + &mr;
            if b_m.is_positive() {
                let ratio = &a_m / &g_m;
                let kappa = if ratio > one { ratio } else { one.clone() };
                let bu = &b_m / (&mr + &one);
                let bu = if bu > one { bu } else { one.clone() };
                let rho = u.abs() * &kappa * bu;
                let target = total.abs_upper().max(Mag::pow2(0)).mul_2exp(-(bits as i64));
                let cm = coef.abs_upper();
                if rho < one && cm.log2_ceil() < target.log2_ceil() + 64 {
                    // Row bound changes slowly; reuse it for nearby m.
                    let rb = match &row_cache {
                        Some((m0, b)) if *m0 + 64 > m => Some(*b),
                        _ => {
                            let b = row_bound(&kappa, beta_v, v, 64);
                            if let Some(b) = b {
                                row_cache = Some((m, b));
                            }
                            b
                        }
                    };
                    if let Some(rb) = rb {
                        let inv = Mag::from_rat(&(&one / (&one - &rho)), true);
                        let tail = cm.mul(rb).mul(inv);
                        if tail <= target {
                            return Ok((total.add_error(tail), terms));
                        }
                    }
                }
                next_check = m + 1;
            } else {
                next_check = m + 1;
            }
        }
        let eps = total
            .abs_upper()
            .max(coef.abs_upper())
            .mul_2exp(-(bits as i64) - 8);
        let (row, n) = hyper_sum(
            &[a_m.clone(), beta_v.clone()],
            &[g_m.clone(), one.clone()],
            v,
            coef.clone(),
            Some(eps),
        )?;
        total = &total + &row;
        terms += n;
        if outer_stop == Some(m) {
            return Ok((total, terms));
        }
        let b_m = beta_u + &mr;
        let num = &a_m * &b_m * u;
        let den = &g_m * (&mr + &one);
        if den.is_zero() {
            return Err(Error::Pole);
        }
        coef = coef.mul_rat(&(num / den));
        if coef.is_exact() && coef.mid_rat().is_zero() {
            return Ok((total, terms));
        }
        m += 1;
        if terms > super::series::MAX_TERMS {
            return Err(Error::PrecisionExhausted("double series too long".into()));
        }
    }
}

/// Double series for F1 with a certified two-dimensional tail bound.
pub fn eval_f1_double_series(p: &ParamsF1, x: &Rat, y: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    if is_nonpositive_integer(&p.gamma) {
        return Err(Error::Pole);
    }
    let bits = series_bits(ctx);
    // Outer variable is the one with fewer rows; either order is valid.
    let ex = est_terms(x, &p.beta1, bits);
    let ey = est_terms(y, &p.beta2, bits);
    let first = if ex <= ey {
        double_sum(p, &p.beta1, &p.beta2, x, y, bits)
    } else {
        double_sum(p, &p.beta2, &p.beta1, y, x, bits)
    };
    let (v, n) = match first {
        Ok(r) => r,
        Err(Error::Divergent(_)) if ex > ey => double_sum(p, &p.beta1, &p.beta2, x, y, bits)?,
        Err(Error::Divergent(_)) => double_sum(p, &p.beta2, &p.beta1, y, x, bits)?,
        Err(e) => return Err(e),
    };
    Ok(EvalResult {
        value: v.with_prec(ctx.working_bits),
        terms_used: n,
        method: Method::DoubleSeries,
    })
}

/// Finite sum over the terminating direction:
/// `Σ_n (α)_n(β2)_n/((γ)_n n!) yⁿ 2F1(α+n, β1; γ+n; x)` for `β2 = -N`.
pub fn eval_f1_terminating(p: &ParamsF1, x: &Rat, y: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    let (p, x, y) = match (nonpos_int(&p.beta2), nonpos_int(&p.beta1)) {
        (Some(_), _) => (p.clone(), x.clone(), y.clone()),
        (None, Some(_)) => (p.swapped(), y.clone(), x.clone()),
        _ => {
            return Err(Error::Domain(
                "no terminating direction: neither beta is a nonpositive integer".into(),
            ))
        }
    };
    let n_max = nonpos_int(&p.beta2).unwrap();
    let goal = ctx.eps().mul_2exp(-8);
    let mut bits = ctx.working_bits + 32;
    let mut last = None;
    for _ in 0..5 {
        let c = PrecCtx::with_bits(ctx.target_digits, bits);
        let (v, terms) = terminating_sum(&p, &x, &y, n_max, &c)?;
        if v.rel_radius() <= goal {
            return Ok(EvalResult {
                value: v.with_prec(ctx.working_bits),
                terms_used: terms,
                method: Method::Terminating,
            });
        }
        // Raise precision by the observed loss.
        let lost = v.rel_radius().log2_ceil() - goal.log2_ceil();
        bits += (lost.clamp(32, 4096) as u32) + 32;
        last = Some((v, terms));
    }
    let (v, terms) = last.unwrap();
    Ok(EvalResult {
        value: v.with_prec(ctx.working_bits),
        terms_used: terms,
        method: Method::Terminating,
    })
}

fn terminating_sum(
    p: &ParamsF1,
    x: &Rat,
    y: &Rat,
    n_max: u64,
    ctx: &PrecCtx,
) -> Result<(Real, u64)> {
    let mut total = ctx.zero();
    let mut c = Rat::one();
    let mut terms = 0;
    for n in 0..=n_max {
        let nr = Rat::from_integer(BigInt::from(n));
        if !c.is_zero() {
            let inner = eval_2f1(
                &Params2F1::new(&p.alpha + &nr, p.beta1.clone(), &p.gamma + &nr),
                x,
                ctx,
            )?;
            terms += inner.terms_used;
            total = &total + &inner.value.mul_rat(&c);
        }
        let den = (&p.gamma + &nr) * (&nr + Rat::one());
        if den.is_zero() {
            return Err(Error::Pole);
        }
        c = c * (&p.alpha + &nr) * (&p.beta2 + &nr) * y / den;
    }
    Ok((total, terms))
}

/// Euler integral with the `Γ(γ)/(Γ(α)Γ(γ-α))` prefactor; needs `γ > α > 0`.
pub fn eval_f1_integral(p: &ParamsF1, x: &Rat, y: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    if !(p.alpha.is_positive() && p.gamma > p.alpha) {
        return Err(Error::Domain(format!(
            "Euler integral needs γ > α > 0, got α = {}, γ = {}",
            p.alpha, p.gamma
        )));
    }
    let one = Rat::one();
    let factors = [
        Factor::new(Rat::zero(), one.clone(), &p.alpha - &one),
        Factor::new(one.clone(), -&one, &p.gamma - &p.alpha - &one),
        Factor::new(one.clone(), -x, -&p.beta1),
        Factor::new(one.clone(), -y, -&p.beta2),
    ];
    let bits = ctx.working_bits + 16;
    let integral = integrate_product(&factors, bits)?;
    let pre = gamma_ratio(
        &[p.gamma.clone()],
        &[p.alpha.clone(), &p.gamma - &p.alpha],
        bits,
    )?;
    Ok(EvalResult {
        value: pre.mul_ref(&integral).with_prec(ctx.working_bits),
        terms_used: 0,
        method: Method::Integral,
    })
}

/// Drops a zero `β` and returns the remaining Gauss parameters and argument.
pub fn f1_reduce_beta_zero(p: &ParamsF1, x: &Rat, y: &Rat) -> Result<(Params2F1, Rat)> {
    if p.beta2.is_zero() {
        Ok((
            Params2F1::new(p.alpha.clone(), p.beta1.clone(), p.gamma.clone()),
            x.clone(),
        ))
    } else if p.beta1.is_zero() {
        Ok((
            Params2F1::new(p.alpha.clone(), p.beta2.clone(), p.gamma.clone()),
            y.clone(),
        ))
    } else {
        Err(Error::Domain(format!(
            "reduction needs a zero beta, got {} and {}",
            p.beta1, p.beta2
        )))
    }
}

/// Budget (in inner terms) above which the integral is preferred to the
/// double series in automatic mode.
const SERIES_BUDGET: f64 = 3.0e6;

/// Evaluates F1, trying terminating → double series → integral in
/// automatic mode.
pub fn eval_f1(
    p: &ParamsF1,
    x: &Rat,
    y: &Rat,
    method: F1Method,
    ctx: &PrecCtx,
) -> Result<EvalResult> {
    if is_nonpositive_integer(&p.gamma) {
        return Err(Error::Pole);
    }
    match method {
        F1Method::Series => return eval_f1_double_series(p, x, y, ctx),
        F1Method::Terminating => return eval_f1_terminating(p, x, y, ctx),
        F1Method::Integral => return eval_f1_integral(p, x, y, ctx),
        F1Method::Auto => {}
    }
    if p.alpha.is_zero() || (x.is_zero() && y.is_zero()) {
        return Ok(EvalResult {
            value: ctx.one(),
            terms_used: 1,
            method: Method::Series,
        });
    }
    let mut errors = Vec::new();
    if nonpos_int(&p.beta1).is_some() || nonpos_int(&p.beta2).is_some() {
        match eval_f1_terminating(p, x, y, ctx) {
            Ok(r) => return Ok(r),
            Err(e) => errors.push(format!("terminating: {e}")),
        }
    }
    let bits = series_bits(ctx);
    let cost = est_terms(x, &p.beta1, bits) * est_terms(y, &p.beta2, bits);
    let integral_ok = p.alpha.is_positive() && p.gamma > p.alpha;
    if x.abs() < Rat::one() && y.abs() < Rat::one() && (cost <= SERIES_BUDGET || !integral_ok) {
        match eval_f1_double_series(p, x, y, ctx) {
            Ok(r) => return Ok(r),
            Err(e) => errors.push(format!("double series: {e}")),
        }
    }
    if integral_ok {
        match eval_f1_integral(p, x, y, ctx) {
            Ok(r) => return Ok(r),
            Err(e) => errors.push(format!("integral: {e}")),
        }
    }
    if errors.is_empty() {
        errors.push("outside every implemented domain".into());
    }
    Err(Error::Domain(errors.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    fn f1(a: &str, b1: &str, b2: &str, c: &str) -> ParamsF1 {
        ParamsF1::new(r(a), r(b1), r(b2), r(c))
    }

    #[test]
    fn alpha_zero_is_one() {
        let ctx = PrecCtx::new(30);
        let v = eval_f1_double_series(&f1("0", "1/3", "2/5", "7/4"), &r("1/2"), &r("1/3"), &ctx)
            .unwrap();
        assert!(v.value.contains_rat(&r("1")));
    }

    #[test]
    fn terminating_examples() {
        let ctx = PrecCtx::new(40);
        let v = eval_f1_terminating(
            &f1("1/4", "1/2", "0", "3/4"),
            &r("80/81"),
            &r("16/15"),
            &ctx,
        )
        .unwrap();
        assert!(v.value.contains_rat(&r("9/5")), "{}", v.value);
        let w = eval_f1_terminating(
            &f1("5/4", "5/2", "-4", "7/4"),
            &r("80/81"),
            &r("16/15"),
            &ctx,
        )
        .unwrap();
        assert!(w.value.contains_rat(&r("729/3125")), "{}", w.value);
        let z =
            eval_f1_terminating(&f1("1/3", "1/5", "-1", "2"), &r("1/7"), &r("0"), &ctx).unwrap();
        let g = eval_2f1(&Params2F1::new(r("1/3"), r("1/5"), r("2")), &r("1/7"), &ctx).unwrap();
        assert!(z.value.overlaps(&g.value));
    }

    #[test]
    fn integral_matches_series() {
        let ctx = PrecCtx::new(30);
        let p = f1("2/3", "5/6", "1/3", "7/6");
        let s = eval_f1_double_series(&p, &r("1/81"), &r("1/6"), &ctx).unwrap();
        let i = eval_f1_integral(&p, &r("1/81"), &r("1/6"), &ctx).unwrap();
        assert!(s.value.overlaps(&i.value), "{} vs {}", s.value, i.value);
        assert!(i.value.radius() <= PrecCtx::tolerance(28));
        let one = eval_f1_integral(&p, &r("0"), &r("0"), &ctx).unwrap();
        assert!(one.value.contains_rat(&r("1")));
    }

    #[test]
    fn reduction_and_swap() {
        let (q, x) = f1_reduce_beta_zero(&f1("1/2", "3/4", "0", "1"), &r("1/3"), &r("5")).unwrap();
        assert_eq!(q, Params2F1::new(r("1/2"), r("3/4"), r("1")));
        assert_eq!(x, r("1/3"));
        let (q2, y) =
            f1_reduce_beta_zero(&f1("1/2", "0", "3/4", "1"), &r("1/3"), &r("1/5")).unwrap();
        assert_eq!(q2, Params2F1::new(r("1/2"), r("3/4"), r("1")));
        assert_eq!(y, r("1/5"));
        assert!(
            f1_reduce_beta_zero(&f1("1/2", "1/1000000000", "1/3", "1"), &r("0"), &r("0")).is_err()
        );
    }
}
