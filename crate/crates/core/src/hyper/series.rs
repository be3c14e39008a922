use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::{eval_2f1_connection, eval_2f1_log_connection, gauss_sum, pfaff};
use super::{EvalResult, Method, Params2F1};
use crate::ball::{Mag, PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::{is_nonpositive_integer, rat, Rat};

/// Hard cap on series length.
pub const MAX_TERMS: u64 = 40_000_000;

/// Extra bits carried through long recurrences.
pub(crate) fn series_bits(ctx: &PrecCtx) -> u32 {
    ctx.working_bits + 40
}

/// Index of the first terminating numerator parameter, if any: `-N`.
fn termination(nums: &[Rat]) -> Option<u64> {
    nums.iter()
        .filter(|p| is_nonpositive_integer(p))
        .map(|p| (-p).to_integer().to_u64().unwrap_or(u64::MAX))
        .min()
}

/// Rigorous bound `ρ(N) ≥ |t_{n+1}/t_n|` for all `n ≥ N`, pairing numerator
/// `i` with denominator `perm[i]`. Requires every parameter plus `N` to be
/// positive.
fn ratio_bound(nums: &[Rat], dens: &[Rat], perm: &[usize], x: &Rat, n: u64) -> Option<Rat> {
    let nn = Rat::from_integer(BigInt::from(n));
    let mut rho = x.abs();
    for (i, a) in nums.iter().enumerate() {
        let b = &dens[perm[i]];
        let an = a + &nn;
        let bn = b + &nn;
        if !an.is_positive() || !bn.is_positive() {
            return None;
        }
        let excess = a - b;
        if excess.is_positive() {
            rho *= Rat::one() + excess / bn;
        }
    }
    Some(rho)
}

fn best_ratio_bound(nums: &[Rat], dens: &[Rat], x: &Rat, n: u64) -> Option<Rat> {
    let perms: Vec<Vec<usize>> = if nums.len() == 2 {
        vec![vec![0, 1], vec![1, 0]]
    } else {
        vec![(0..nums.len()).collect()]
    };
    perms
        .iter()
        .filter_map(|p| ratio_bound(nums, dens, p, x, n))
        .min()
}

/// Sums `Σ_{n≥0} t_n` with `t_0 = first` and
/// `t_{n+1}/t_n = x · Π(nums_i + n) / Π(dens_j + n)` (include `1` among the
/// denominators for the factorial). `nums` and `dens` have equal length.
///
/// The truncation error is bounded by a geometric majorant certified from
/// parameter monotonicity. Stops once the tail is below `abs_eps`, or below
/// `2^-prec · |partial sum|` when no absolute target is given.
pub fn hyper_sum(
    nums: &[Rat],
    dens: &[Rat],
    x: &Rat,
    first: Real,
    abs_eps: Option<Mag>,
) -> Result<(Real, u64)> {
    assert_eq!(nums.len(), dens.len());
    let prec = first.prec();
    let stop = termination(nums);
    if let Some(d) = dens.iter().find(|d| is_nonpositive_integer(d)) {
        let m = (-d).to_integer().to_u64().unwrap_or(u64::MAX);
        // t_{n+1} divides by (d + n); fine only if the series stopped before.
        if stop.map_or(true, |s| m < s) {
            return Err(Error::Pole);
        }
    }
    if stop.is_none() && x.abs() >= Rat::one() {
        return Err(Error::Divergent(format!("|x| = {} ≥ 1", x.abs())));
    }
    if x.is_zero() {
        return Ok((first, 1));
    }
    let split = |r: &Rat| (r.numer().clone(), r.denom().clone());
    let np: Vec<(BigInt, BigInt)> = nums.iter().map(split).collect();
    let dp: Vec<(BigInt, BigInt)> = dens.iter().map(split).collect();
    let q_nums: BigInt = np.iter().map(|(_, q)| q.clone()).product();
    let q_dens: BigInt = dp.iter().map(|(_, q)| q.clone()).product();
    let num_const = x.numer() * &q_dens;
    let den_const = x.denom() * &q_nums;

    let n0: u64 = nums
        .iter()
        .chain(dens.iter())
        .map(|p| {
            if p.is_positive() {
                0
            } else {
                (-p).floor().to_integer().to_u64().unwrap_or(u64::MAX - 1) + 1
            }
        })
        .max()
        .unwrap_or(0);

    let mut sum = Real::zero(prec);
    let mut t = first;
    let mut n: u64 = 0;
    let mut next_check = n0;
    loop {
        sum = &sum + &t;
        if let Some(s) = stop {
            if n == s {
                return Ok((sum, n + 1));
            }
        }
        let nb = BigInt::from(n);
        let mut num = num_const.clone();
        for (p, q) in &np {
            num *= p + q * &nb;
        }
        let mut den = den_const.clone();
        for (p, q) in &dp {
            den *= p + q * &nb;
        }
        t = t.mul_bigint(&num).div_bigint(&den);
        n += 1;
        if stop.is_some() {
            continue;
        }
        if n >= MAX_TERMS {
            return Err(Error::PrecisionExhausted(format!(
                "series not settled after {n} terms"
            )));
        }
        if n < next_check {
            continue;
        }
        let target = match abs_eps {
            Some(e) => e,
            None => sum.abs_upper().mul_2exp(-(prec as i64)),
        };
        let tmag = t.abs_upper();
        if tmag.is_zero() {
            return Ok((sum, n));
        }
        if tmag.log2_ceil() > target.log2_ceil() + 2 {
            continue;
        }
        match best_ratio_bound(nums, dens, x, n) {
            Some(rho) if rho < Rat::one() => {
                let inv = Rat::one() / (Rat::one() - rho);
                let tail = tmag.mul(Mag::from_rat(&inv, true));
                if tail <= target {
                    return Ok((sum.add_error(tail), n));
                }
                next_check = n + 1;
            }
            _ => next_check = n + 16 + n / 8,
        }
    }
}

/// Exact value of a terminating Gauss series, or `None` if it does not
/// terminate.
pub fn terminating_2f1_exact(p: &Params2F1, x: &Rat) -> Option<Result<Rat>> {
    let stop = termination(&[p.a.clone(), p.b.clone()])?;
    let mut sum = Rat::zero();
    let mut t = Rat::one();
    for n in 0..=stop {
        sum += &t;
        if n == stop {
            break;
        }
        let nr = Rat::from_integer(BigInt::from(n));
        let den = (&p.c + &nr) * (&nr + Rat::one());
        if den.is_zero() {
            return Some(Err(Error::Pole));
        }
        t = t * (&p.a + &nr) * (&p.b + &nr) * x / den;
    }
    Some(Ok(sum))
}

/// Direct summation of the Gauss series; `|x| < 1` unless it terminates.
pub fn eval_2f1_series(p: &Params2F1, x: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    if is_nonpositive_integer(&p.c) && terminating_2f1_exact(p, x).is_none() {
        return Err(Error::Pole);
    }
    if let Some(v) = terminating_2f1_exact(p, x) {
        let n = termination(&[p.a.clone(), p.b.clone()]).unwrap() + 1;
        return Ok(EvalResult {
            value: ctx.rat(&v?),
            terms_used: n,
            method: Method::Series,
        });
    }
    let w = series_bits(ctx);
    let (v, n) = hyper_sum(
        &[p.a.clone(), p.b.clone()],
        &[p.c.clone(), Rat::one()],
        x,
        Real::one(w),
        None,
    )?;
    Ok(EvalResult {
        value: v.with_prec(ctx.working_bits),
        terms_used: n,
        method: Method::Series,
    })
}

/// Chooses an evaluation route for the Gauss function at a rational point:
/// terminating sum, Gauss summation at `x = 1`, the connection formula near
/// `x = 1`, a Pfaff transformation for negative `x`, or the plain series.
pub fn eval_2f1(p: &Params2F1, x: &Rat, ctx: &PrecCtx) -> Result<EvalResult> {
    if x.is_zero() {
        return Ok(EvalResult {
            value: ctx.one(),
            terms_used: 1,
            method: Method::Series,
        });
    }
    if let Some(v) = terminating_2f1_exact(p, x) {
        let n = termination(&[p.a.clone(), p.b.clone()]).unwrap() + 1;
        return Ok(EvalResult {
            value: ctx.rat(&v?),
            terms_used: n,
            method: Method::Terminating,
        });
    }
    if *x == Rat::one() {
        return Ok(EvalResult {
            value: gauss_sum(p, ctx)?,
            terms_used: 0,
            method: Method::Gauss,
        });
    }
    if *x > Rat::one() {
        return Err(Error::Domain(format!(
            "x = {x} beyond the branch point; no continuation implemented"
        )));
    }
    let s = &p.c - &p.a - &p.b;
    if *x > rat(9, 10) && !s.is_integer() {
        return eval_2f1_connection(p, x, ctx);
    }
    if *x > rat(9, 10) && s.is_zero() && p.a.is_positive() && p.b.is_positive() {
        return eval_2f1_log_connection(p, x, ctx);
    }
    if *x < rat(-1, 2) {
        return pfaff(p, x, ctx);
    }
    eval_2f1_series(p, x, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;

    fn r(s: &str) -> Rat {
        parse_rat(s).unwrap()
    }

    fn p(a: &str, b: &str, c: &str) -> Params2F1 {
        Params2F1::new(r(a), r(b), r(c))
    }

    #[test]
    fn value_at_zero_and_terminating() {
        let ctx = PrecCtx::new(30);
        let v = eval_2f1_series(&p("1/3", "2/7", "5/4"), &r("0"), &ctx).unwrap();
        assert!(v.value.contains_rat(&r("1")));
        let g = eval_2f1_series(&p("1/2", "-1", "9/2"), &r("1/4"), &ctx).unwrap();
        assert!(g.value.radius() <= PrecCtx::tolerance(30));
        assert!(g.value.contains_rat(&r("35/36")));
        assert_eq!(g.terms_used, 2);
    }

    #[test]
    fn near_one_series_matches_nine_fifths() {
        let ctx = PrecCtx::new(60);
        let v = eval_2f1_series(&p("1/4", "1/2", "3/4"), &r("80/81"), &ctx).unwrap();
        assert!(v.value.contains_rat(&r("9/5")), "{}", v.value);
        assert!(v.value.radius() <= PrecCtx::tolerance(50));
    }

    #[test]
    fn divergent_and_pole() {
        let ctx = PrecCtx::new(20);
        assert!(matches!(
            eval_2f1_series(&p("1/3", "1/2", "1/5"), &r("3/2"), &ctx),
            Err(Error::Divergent(_))
        ));
        assert_eq!(
            eval_2f1_series(&p("1/3", "1/2", "-2"), &r("1/2"), &ctx).unwrap_err(),
            Error::Pole
        );
    }

    #[test]
    fn truncation_at_n_contains_truncation_at_2n() {
        // Tail-bound soundness: a loose stop encloses a tight one.
        let nums = [r("7/3"), r("-5/2")];
        let dens = [r("1/6"), r("1")];
        let x = r("-9/10");
        let loose = hyper_sum(&nums, &dens, &x, Real::one(300), Some(Mag::pow2(-20))).unwrap();
        let tight = hyper_sum(&nums, &dens, &x, Real::one(300), Some(Mag::pow2(-200))).unwrap();
        assert!(tight.1 > loose.1);
        assert!(loose.0.contains(&tight.0) || loose.0.overlaps(&tight.0));
    }
}
