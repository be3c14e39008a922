use std::path::Path;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::PhaseFn;
use crate::ball::{gamma_rat, pi, pow_rat, sqrt, Mag, PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::hyper::{eval_f1_integral, eval_f1_terminating, integrate_product, Factor, ParamsF1};

/// Largest `n` accepted by the sequence routines.
pub const N_MAX_DEFAULT: u64 = 200;

/// Which evaluation of `F1(1/4+n; 1/2+2n, -4n; 3/4+n; 80/81, 16/15)` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermRoute {
    /// Euler integral by validated quadrature.
    Integral,
    /// Finite sum over the terminating `β2 = -4n` direction.
    Terminating,
}

fn nrat(n: u64) -> Rat {
    Rat::from_integer(n.into())
}

fn params(n: u64) -> ParamsF1 {
    let n = nrat(n);
    ParamsF1::new(
        rat(1, 4) + &n,
        rat(1, 2) + &n * rat(2, 1),
        -&n * rat(4, 1),
        rat(3, 4) + &n,
    )
}

/// Bits lost to the factor `(81/625)^n` in the integral.
fn extra_bits(n: u64) -> u32 {
    (n as f64 * (625.0f64 / 81.0).log2()).ceil() as u32 + 16
}

fn check_n(n: u64) -> Result<()> {
    if n > N_MAX_DEFAULT {
        return Err(Error::Domain(format!("n = {n} exceeds the maximum {N_MAX_DEFAULT}")));
    }
    Ok(())
}

/// `(5^(4n)/3^(4n)) · F1(1/4+n; 1/2+2n, -4n; 3/4+n; 80/81, 16/15)`.
pub fn term(n: u64, route: TermRoute, ctx: &PrecCtx) -> Result<Real> {
    check_n(n)?;
    let wctx = PrecCtx::with_bits(ctx.target_digits, ctx.working_bits + extra_bits(n));
    let (x, y) = (rat(80, 81), rat(16, 15));
    let f = match route {
        TermRoute::Integral => eval_f1_integral(&params(n), &x, &y, &wctx)?,
        TermRoute::Terminating => eval_f1_terminating(&params(n), &x, &y, &wctx)?,
    };
    let scale = pow_rat(&rat(625, 81), &nrat(n), wctx.working_bits)?;
    Ok(f.value.mul_ref(&scale).with_prec(ctx.working_bits))
}

/// `A = (5^(4n)/3^(4n)) Γ(3/4+n) / (Γ(1/4+n) Γ(1/2))`.
pub fn a_factor(n: u64, prec: u32) -> Result<Real> {
    let w = prec + 16;
    let g = gamma_rat(&(rat(3, 4) + nrat(n)), w)?
        .div_ref(&gamma_rat(&(rat(1, 4) + nrat(n)), w)?)?
        .div_ref(&sqrt(&pi(w))?)?;
    Ok(g.mul_ref(&pow_rat(&rat(625, 81), &nrat(n), w)?).with_prec(prec))
}

/// `B = ∫ g(t) e^(n h(t)) dt` by quadrature, with
/// `g = t^(-3/4) (1-t)^(-1/2) (1-80t/81)^(-1/2)`.
pub fn b_quadrature(n: u64, prec: u32) -> Result<Real> {
    check_n(n)?;
    let ph = PhaseFn::example2();
    let nn = nrat(n);
    let one = Rat::one();
    let mut factors = vec![
        Factor::new(Rat::zero(), one.clone(), &ph.p0 * &nn - rat(3, 4)),
        Factor::new(one.clone(), -&one, rat(-1, 2)),
    ];
    for (i, (u, p)) in ph.factors.iter().enumerate() {
        let g = if i == 0 { rat(-1, 2) } else { Rat::zero() };
        factors.push(Factor::new(one.clone(), -u, p * &nn + g));
    }
    let w = prec + extra_bits(n);
    Ok(integrate_product(&factors, w)?.with_prec(prec))
}

/// Terms `A·B` at the requested `n`, in the order given.
#[derive(Clone, Debug)]
pub struct LimitSequence {
    pub ns: Vec<u64>,
    pub terms: Vec<Real>,
}

/// Computes the terms concurrently; results keep the order of `ns`.
pub fn laplace_sequence(ns: &[u64], ctx: &PrecCtx) -> Result<LimitSequence> {
    let terms = ns
        .par_iter()
        .map(|&n| term(n, TermRoute::Integral, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSequence {
        ns: ns.to_vec(),
        terms,
    })
}

impl LimitSequence {
    /// Whether every pair of enclosures overlaps.
    pub fn is_constant(&self) -> bool {
        self.terms
            .iter()
            .all(|t| self.terms.iter().all(|u| t.overlaps(u)))
    }
}

/// Ratios of `A` and `B` to their leading asymptotic forms.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticRow {
    pub n: u64,
    #[serde(serialize_with = "ser_real")]
    pub term: Real,
    /// `A / ((625/81)^n √(n/π))`.
    #[serde(serialize_with = "ser_real")]
    pub a_ratio: Real,
    /// `B / ((9/5)(81/625)^n √(π/n))` with `B = term / A`.
    #[serde(serialize_with = "ser_real")]
    pub b_ratio: Real,
}

fn ser_real<S: serde::Serializer>(r: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn asymptotic_forms_check(ns: &[u64], ctx: &PrecCtx) -> Result<Vec<AsymptoticRow>> {
    if let Some(n) = ns.iter().find(|&&n| n < 4) {
        return Err(Error::Domain(format!("asymptotic check needs n ≥ 4, got {n}")));
    }
    let seq = laplace_sequence(ns, ctx)?;
    let w = ctx.working_bits;
    ns.iter()
        .zip(seq.terms)
        .map(|(&n, term)| {
            let a = a_factor(n, w)?;
            let root = sqrt(&Real::from_rat(&nrat(n), w).div_ref(&pi(w))?)?;
            let a_lead = pow_rat(&rat(625, 81), &nrat(n), w)?.mul_ref(&root);
            let a_ratio = a.div_ref(&a_lead)?;
            let b = term.div_ref(&a)?;
            let b_lead = pow_rat(&rat(81, 625), &nrat(n), w)?
                .mul_rat(&rat(9, 5))
                .div_ref(&root)?;
            let b_ratio = b.div_ref(&b_lead)?;
            Ok(AsymptoticRow {
                n,
                term,
                a_ratio,
                b_ratio,
            })
        })
        .collect()
}

/// Limit estimate from polynomial extrapolation in `1/n`.
#[derive(Clone, Debug)]
pub struct Extrapolation {
    pub value: Real,
    /// Difference between the two highest extrapolation orders; heuristic.
    pub error_estimate: f64,
    pub rigorous: bool,
}

/// Richardson extrapolation to `n → ∞` under the model
/// `s_n = L + c1/n + c2/n² + …`, using the last (at most six) terms with `n > 0`.
pub fn richardson_extrapolate(seq: &LimitSequence) -> Result<Extrapolation> {
    let pts: Vec<(Rat, Rat)> = seq
        .ns
        .iter()
        .zip(&seq.terms)
        .filter(|(n, _)| **n > 0)
        .map(|(n, t)| (nrat(*n).recip(), t.mid_rat()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Domain(format!(
            "extrapolation needs at least 3 terms with n > 0, got {}",
            pts.len()
        )));
    }
    let pts = &pts[pts.len().saturating_sub(6)..];
    // Neville's scheme evaluated at h = 0; `row[i]` interpolates pts[i..=i+k].
    let mut row: Vec<Rat> = pts.iter().map(|p| p.1.clone()).collect();
    let mut prev_best = row[row.len() - 1].clone();
    let mut best = prev_best.clone();
    for k in 1..pts.len() {
        let next: Vec<Rat> = (0..row.len() - 1)
            .map(|i| {
                let (hi, hk) = (&pts[i].0, &pts[i + k].0);
                (hi * &row[i + 1] - hk * &row[i]) / (hi - hk)
            })
            .collect();
        prev_best = best;
        best = next[next.len() - 1].clone();
        row = next;
    }
    let prec = seq.terms.first().map_or(128, |t| t.prec());
    let est = (&best - &prev_best).abs();
    let err = Mag::from_rat(&est, true);
    Ok(Extrapolation {
        value: Real::from_rat(&best, prec),
        error_estimate: err.to_f64(),
        rigorous: false,
    })
}

/// Samples of `h` on `(0, 1)` as `t,h` rows; `-inf` where `h` is undefined.
pub fn write_h_csv(ph: &PhaseFn, samples: usize, path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["t", "h"]).map_err(io)?;
    for i in 1..=samples {
        let t = Rat::new((i as i64).into(), ((samples + 1) as i64).into());
        let h = ph
            .eval(&Real::from_rat(&t, 96))
            .map(|v| format!("{:.12}", v.to_f64()))
            .unwrap_or_else(|_| "-inf".into());
        w.write_record([format!("{:.12}", rat_f64(&t)), h])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn rat_f64(r: &Rat) -> f64 {
    Real::from_rat(r, 64).to_f64()
}

/// The `(n, term, a_ratio, b_ratio)` table, enclosures printed as `m ± r`.
pub fn write_table_csv(rows: &[AsymptoticRow], path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms_equal_nine_fifths() {
        let ctx = PrecCtx::new(30);
        let nine_fifths = rat(9, 5);
        for n in 0..3 {
            let t = term(n, TermRoute::Integral, &ctx).unwrap();
            assert!(t.contains_rat(&nine_fifths), "n = {n}: {t}");
            assert!(t.radius() < PrecCtx::tolerance(28));
        }
        let exact = term(1, TermRoute::Terminating, &ctx).unwrap();
        assert!(exact.contains_rat(&nine_fifths));
        assert!(term(N_MAX_DEFAULT + 1, TermRoute::Integral, &ctx).is_err());
    }

    #[test]
    fn b_by_two_routes() {
        let ctx = PrecCtx::new(30);
        let n = 4;
        let a = a_factor(n, ctx.working_bits).unwrap();
        let via_sum = term(n, TermRoute::Terminating, &ctx)
            .unwrap()
            .div_ref(&a)
            .unwrap();
        let direct = b_quadrature(n, ctx.working_bits).unwrap();
        assert!(via_sum.overlaps(&direct));
        assert!(direct.rel_radius() < PrecCtx::tolerance(25));
    }

    #[test]
    fn extrapolation_models() {
        let seq = |f: &dyn Fn(u64) -> Rat| LimitSequence {
            ns: (1..=5).collect(),
            terms: (1..=5).map(|n| Real::from_rat(&f(n), 128)).collect(),
        };
        let e = richardson_extrapolate(&seq(&|n| rat(2, 1) + rat(3, n as i64))).unwrap();
        assert!((e.value.to_f64() - 2.0).abs() < 1e-20);
        assert!(!e.rigorous);
        let c = richardson_extrapolate(&seq(&|_| rat(5, 1))).unwrap();
        assert!(c.value.contains_rat(&rat(5, 1)));
        assert_eq!(c.error_estimate, 0.0);
        let short = LimitSequence {
            ns: vec![0, 1, 2],
            terms: vec![Real::one(64); 3],
        };
        assert!(richardson_extrapolate(&short).is_err());
    }

    #[test]
    fn a_ratio_tends_to_one() {
        let w = 128;
        let ratio = |n: u64| {
            let root = sqrt(&Real::from_int(n as i64, w).div_ref(&pi(w)).unwrap()).unwrap();
            let lead = pow_rat(&rat(625, 81), &nrat(n), w).unwrap().mul_ref(&root);
            a_factor(n, w).unwrap().div_ref(&lead).unwrap().to_f64()
        };
        let devs: Vec<f64> = [8, 16, 32, 64].iter().map(|&n| (ratio(n) - 1.0).abs()).collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
        assert!((0.99..=1.01).contains(&ratio(50)));
    }
}
