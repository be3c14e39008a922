use num_traits::{Signed, Zero};

use super::ClosedExpr;
use crate::ball::{cos_pi_rat, gamma_rat, pi, pow_rat, pow_real_rat, sqrt, PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::Rat;

/// Subresults stay exact while only rational arithmetic is involved.
enum Val {
    Exact(Rat),
    Ball(Real),
}

impl Val {
    fn ball(self, prec: u32) -> Real {
        match self {
            Val::Exact(r) => Real::from_rat(&r, prec),
            Val::Ball(b) => b,
        }
    }
}

fn go(e: &ClosedExpr, a: &Rat, prec: u32) -> Result<Val> {
    use ClosedExpr::*;
    Ok(match e {
        Rat(r) => Val::Exact(r.clone()),
        A => Val::Exact(a.clone()),
        Pi => Val::Ball(pi(prec)),
        Gamma(f) => Val::Ball(gamma_rat(&f.eval(a), prec)?),
        CosPi(f) => Val::Ball(cos_pi_rat(&f.eval(a), prec)),
        Sqrt(x) => match go(x, a, prec)? {
            Val::Exact(r) if r.is_negative() => {
                return Err(Error::Domain(format!("square root of negative {r}")))
            }
            Val::Exact(r) => Val::Ball(pow_rat(&r, &crate::exact::rat(1, 2), prec)?),
            Val::Ball(b) => {
                if !b.is_positive() && !b.is_exact() {
                    return Err(Error::Domain(format!(
                        "square root argument {b} not certified positive"
                    )));
                }
                Val::Ball(sqrt(&b)?)
            }
        },
        Pow(base, f) => {
            let ex = f.eval(a);
            match go(base, a, prec)? {
                Val::Exact(r) if ex.is_integer() => {
                    if r.is_zero() && ex.is_negative() {
                        return Err(Error::DivisionByZero);
                    }
                    let k: i32 = ex
                        .to_integer()
                        .try_into()
                        .map_err(|_| Error::Domain("integer exponent too large".into()))?;
                    Val::Exact(num_traits::Pow::pow(&r, k))
                }
                Val::Exact(r) => {
                    if !r.is_positive() {
                        return Err(Error::Domain(format!(
                            "base {r} with non-integer exponent {ex}"
                        )));
                    }
                    Val::Ball(pow_rat(&r, &ex, prec)?)
                }
                Val::Ball(b) => Val::Ball(pow_real_rat(&b, &ex)?),
            }
        }
        Neg(x) => match go(x, a, prec)? {
            Val::Exact(r) => Val::Exact(-r),
            Val::Ball(b) => Val::Ball(b.neg_ref()),
        },
        Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) => {
            let (lv, rv) = (go(l, a, prec)?, go(r, a, prec)?);
            if let (Val::Exact(x), Val::Exact(y)) = (&lv, &rv) {
                return Ok(Val::Exact(match e {
                    Add(..) => x + y,
                    Sub(..) => x - y,
                    Mul(..) => x * y,
                    _ => {
                        if y.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        x / y
                    }
                }));
            }
            let (x, y) = (lv.ball(prec), rv.ball(prec));
            Val::Ball(match e {
                Add(..) => x.add_ref(&y),
                Sub(..) => x.sub_ref(&y),
                Mul(..) => x.mul_ref(&y),
                _ => x.div_ref(&y)?,
            })
        }
    })
}

/// Encloses the value of `e` at `a = a_val`.
pub fn eval_expr(e: &ClosedExpr, a_val: &Rat, ctx: &PrecCtx) -> Result<Real> {
    let prec = ctx.working_bits + 32;
    Ok(go(e, a_val, prec)?.ball(prec).with_prec(ctx.working_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use crate::exact::rat;
    use crate::hyper::{eval_2f1_series, Params2F1};

    const A1: &str = "3^(8*a)/(2^(2*a)*5^(5*a))*sqrt(pi)*Gamma(2*a+1/2)/Gamma(a+1/2)^2";

    #[test]
    fn trivial_values() {
        let ctx = PrecCtx::new(40);
        let v = eval_expr(&parse_expr("9/5").unwrap(), &rat(0, 1), &ctx).unwrap();
        assert!(v.contains_rat(&rat(9, 5)));
        let one = eval_expr(&parse_expr(A1).unwrap(), &rat(0, 1), &ctx).unwrap();
        assert!(one.contains_rat(&rat(1, 1)));
        assert!(one.radius() < PrecCtx::tolerance(40));
        let n = eval_expr(&parse_expr("-2^6/5^3").unwrap(), &rat(0, 1), &ctx).unwrap();
        assert!(n.contains_rat(&rat(-64, 125)));
    }

    #[test]
    fn special_value_against_series() {
        let ctx = PrecCtx::new(50);
        let rhs = parse_expr("9/100*sqrt(2)*5^(3/4)*Gamma(1/4)^2/pi^(3/2)").unwrap();
        let v = eval_expr(&rhs, &rat(0, 1), &ctx).unwrap();
        let s = eval_2f1_series(
            &Params2F1::new(rat(1, 2), rat(3, 4), rat(1, 1)),
            &rat(1, 81),
            &ctx,
        )
        .unwrap();
        assert!(v.overlaps(&s.value));
        assert!(v.radius() < PrecCtx::tolerance(48));
        assert!((v.to_f64() - 1.004_667_495_556_73).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let ctx = PrecCtx::new(20);
        let z = rat(0, 1);
        let e = |s: &str| eval_expr(&parse_expr(s).unwrap(), &z, &ctx);
        assert!(matches!(e("(0-2)^(1/2)"), Err(Error::Domain(_))));
        assert!(matches!(e("sqrt(1-2)"), Err(Error::Domain(_))));
        assert!(e("Gamma(a)").is_err());
        assert!(e("(0-2)^3").unwrap().contains_rat(&rat(-8, 1)));
        assert!(e("cos(pi*a)").unwrap().contains_rat(&rat(1, 1)));
    }
}
