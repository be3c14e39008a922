//! The classical summation theorems of Gauss, Kummer and Gosper, each
//! checked through a route independent of its closed form.

use num_traits::{One, Signed};

use crate::ball::{gamma_rat, pi, pow_rat, sqrt, PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::hyper::{eval_2f1, gauss_sum, integrate_product, Factor, Params2F1};

use super::report::{ReportRow, Verdict};
use super::{diff_bound, enclosures_agree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalCase {
    /// `2F1(a,b;c;1)` by Gauss's product against the Euler integral;
    /// needs `c > b > 0` and `c - a - b > 0`.
    Gauss { a: Rat, b: Rat, c: Rat },
    /// `2F1(2a,2b;a+b+1/2;1/2)`.
    Kummer { a: Rat, b: Rat },
    /// `2F1(1/2,-a;2a+5/2;1/4)`.
    Gosper { a: Rat },
}

impl ClassicalCase {
    pub fn id(&self) -> String {
        match self {
            ClassicalCase::Gauss { a, b, c } => format!("gauss({a},{b};{c})"),
            ClassicalCase::Kummer { a, b } => format!("kummer({a},{b})"),
            ClassicalCase::Gosper { a } => format!("gosper({a})"),
        }
    }
}

fn gammas(num: &[Rat], den: &[Rat], prec: u32) -> Result<Real> {
    let mut v = Real::one(prec);
    for z in num {
        v = v.mul_ref(&gamma_rat(z, prec)?);
    }
    for z in den {
        v = v.div_ref(&gamma_rat(z, prec)?)?;
    }
    Ok(v)
}

fn sides(case: &ClassicalCase, ctx: &PrecCtx) -> Result<(Real, Real, &'static str)> {
    let w = ctx.working_bits + 32;
    let half = rat(1, 2);
    Ok(match case {
        ClassicalCase::Gauss { a, b, c } => {
            let d = c - b;
            if !b.is_positive() || !d.is_positive() || !(&d - a).is_positive() {
                return Err(Error::Domain(format!("{} is not admissible", case.id())));
            }
            let lhs = gauss_sum(&Params2F1::new(a.clone(), b.clone(), c.clone()), ctx)?;
            let one = Rat::one();
            let integral = integrate_product(
                &[
                    Factor::new(Rat::default(), one.clone(), b - &one),
                    Factor::new(one.clone(), -one.clone(), &d - a - &one),
                ],
                w,
            )?;
            let rhs = integral.mul_ref(&gammas(&[c.clone()], &[b.clone(), d], w)?);
            (lhs, rhs, "gauss+quadrature")
        }
        ClassicalCase::Kummer { a, b } => {
            let p = Params2F1::new(a * rat(2, 1), b * rat(2, 1), a + b + &half);
            let lhs = eval_2f1(&p, &half, ctx)?;
            let rhs = sqrt(&pi(w))?.mul_ref(&gammas(
                &[a + b + &half],
                &[a + &half, b + &half],
                w,
            )?);
            (lhs.value, rhs, lhs.method.name())
        }
        ClassicalCase::Gosper { a } => {
            let p = Params2F1::new(half.clone(), -a.clone(), a * rat(2, 1) + rat(5, 2));
            let lhs = eval_2f1(&p, &rat(1, 4), ctx)?;
            let g = gammas(&[a * rat(2, 1) + rat(5, 2)], &[a + rat(3, 2), a + rat(3, 2)], w)?;
            let rhs = sqrt(&pi(w))?
                .mul_ref(&g)
                .div_ref(&pow_rat(&rat(4, 1), a, w)?.mul_int(3))?;
            (lhs.value, rhs, lhs.method.name())
        }
    })
}

/// Checks one instance of a classical summation theorem.
pub fn verify_classical(case: &ClassicalCase, ctx: &PrecCtx) -> ReportRow {
    let mut row = ReportRow::new(&case.id(), "classical", "proved");
    match sides(case, ctx) {
        Ok((lhs, rhs, method)) => {
            let rhs = rhs.with_prec(ctx.working_bits);
            row.method = method.to_string();
            row.diff_bound = Some(diff_bound(&lhs, &rhs).to_string());
            row.lhs = Some(lhs.to_string());
            row.rhs = Some(rhs.to_string());
            let v = if enclosures_agree(&lhs, &rhs, ctx.target_digits) {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            row.finish(v, None)
        }
        Err(e @ Error::Domain(_)) => row.finish(Verdict::DomainSkipped, Some(e.to_string())),
        Err(e) => row.finish(Verdict::Fail, Some(e.to_string())),
    }
}
