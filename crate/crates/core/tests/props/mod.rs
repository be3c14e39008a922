//! Randomized invariants with fixed seeds, shared by the `properties`
//! and `acceptance` targets.

use appell_f1::ball::{exp, gamma_rat, log, pi, sin_pi_rat, sqrt, Mag, PrecCtx, Real};
use appell_f1::exact::{rat, Poly, Rat, RatF, Var};
use appell_f1::hyper::{
    eval_2f1_series, eval_f1_double_series, f1_reduce_beta_zero, hyper_sum, ParamsF1,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

/// Sparse polynomials in `a`, `x`, `y` of low degree.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((small_rat(), 0u32..3, 0u32..2, 0u32..2), 1..4).prop_map(|ts| {
        ts.into_iter().fold(Poly::zero(), |acc, (c, i, j, k)| {
            let m = &(&Poly::var(Var::A).pow(i) * &Poly::var(Var::X).pow(j)) * &Poly::var(Var::Y).pow(k);
            &acc + &m.scale(&c)
        })
    })
}

fn ratf() -> impl Strategy<Value = RatF> {
    (poly(), poly()).prop_filter_map("zero denominator", |(n, d)| RatF::new(n, d).ok())
}

fn run<S: Strategy>(cases: u32, seed: u64, strat: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    let mut runner = TestRunner::new(config(cases, seed));
    if let Err(e) = runner.run(&strat, test) {
        panic!("{e}");
    }
}

#[test]
pub fn poly_ring_laws() {
    run(64, 0x5eed_0001, (poly(), poly(), poly()), |(p, q, r)| {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        if !q.is_zero() {
            prop_assert_eq!((&p * &q).div_exact(&q), Some(p.clone()));
        }
        Ok(())
    });
}

#[test]
pub fn ratf_field_laws() {
    run(64, 0x5eed_0001, (ratf(), ratf(), ratf()), |(f, g, h)| {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        if !g.is_zero() {
            prop_assert_eq!(&f.checked_div(&g).unwrap() * &g, f.clone());
        }
        if !f.is_zero() {
            prop_assert!((&f * &f.inv().unwrap()).is_one());
        }
        Ok(())
    });
}

/// A ball around `c` of radius `e`, and a point `c + t·e` inside it.
fn ball_and_point(c: &Rat, e: &Rat, t: &Rat, prec: u32) -> (Real, Rat) {
    let b = Real::from_rat(c, prec).add_error(Mag::from_rat(e, true));
    (b, c + e * t)
}

#[test]
pub fn ball_arithmetic_contains_exact_results() {
    let radius = || (0i64..5, 1i64..1000).prop_map(|(p, q)| rat(p, q));
    let offset = || (-8i64..=8).prop_map(|p| rat(p, 8));
    let strat = (
        (small_rat(), radius(), offset()),
        (small_rat(), radius(), offset()),
        24u32..200,
    );
    run(200, 0x5eed_0002, strat, |((c1, e1, t1), (c2, e2, t2), prec)| {
        let (x, x0) = ball_and_point(&c1, &e1, &t1, prec);
        let (y, y0) = ball_and_point(&c2, &e2, &t2, prec);
        prop_assert!(x.contains_rat(&x0));
        prop_assert!(x.add_ref(&y).contains_rat(&(&x0 + &y0)));
        prop_assert!(x.sub_ref(&y).contains_rat(&(&x0 - &y0)));
        prop_assert!(x.mul_ref(&y).contains_rat(&(&x0 * &y0)));
        if let Ok(q) = x.div_ref(&y) {
            prop_assert!(!y0.is_zero());
            prop_assert!(q.contains_rat(&(&x0 / &y0)));
        }
        prop_assert!(x.sqr().contains_rat(&(&x0 * &x0)));
        Ok(())
    });
}

#[test]
pub fn elementary_functions_refine() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..40 {
        let x = rat(rng.gen_range(1..400), rng.gen_range(1..60));
        let lo = Real::from_rat(&x, 80);
        let hi = Real::from_rat(&x, 400);
        for (f, name) in [
            (exp as fn(&Real) -> appell_f1::Result<Real>, "exp"),
            (log, "log"),
            (sqrt, "sqrt"),
        ] {
            let (a, b) = (f(&lo).unwrap(), f(&hi).unwrap());
            assert!(a.overlaps(&b), "{name}({x})");
            assert!(b.radius() <= a.radius(), "{name}({x})");
        }
        let l = log(&exp(&hi).unwrap()).unwrap();
        assert!(l.contains_rat(&x), "log(exp({x}))");
    }
    assert!(pi(64).overlaps(&pi(512)));
}

#[test]
pub fn gamma_functional_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let prec = 256;
    let tol = PrecCtx::tolerance(60);
    for _ in 0..30 {
        let mut z = rat(rng.gen_range(-90..90), rng.gen_range(2..13));
        if z.is_integer() {
            z += rat(1, 2);
        }
        let g = gamma_rat(&z, prec).unwrap();
        let g1 = gamma_rat(&(&z + Rat::one()), prec).unwrap();
        let d = g1.sub_ref(&g.mul_rat(&z));
        assert!(d.contains_zero(), "recurrence at {z}");
        assert!(d.abs_upper() <= tol.mul(g1.abs_upper().max(Mag::from_u64(1))));

        // Γ(z)Γ(1-z) sin(πz) = π
        let refl = g
            .mul_ref(&gamma_rat(&(Rat::one() - &z), prec).unwrap())
            .mul_ref(&sin_pi_rat(&z, prec));
        assert!(refl.overlaps(&pi(prec)), "reflection at {z}");

        if z.is_positive() {
            // Γ(z)Γ(z+1/2) = 2^(1-2z) √π Γ(2z)
            let lhs = g.mul_ref(&gamma_rat(&(&z + rat(1, 2)), prec).unwrap());
            let two_z = &z * rat(2, 1);
            let rhs = appell_f1::ball::pow_rat(&rat(2, 1), &(Rat::one() - &two_z), prec)
                .unwrap()
                .mul_ref(&sqrt(&pi(prec)).unwrap())
                .mul_ref(&gamma_rat(&two_z, prec).unwrap());
            assert!(lhs.overlaps(&rhs), "duplication at {z}");
        }
    }
}

fn rand_param(rng: &mut ChaCha8Rng) -> Rat {
    let r = rat(rng.gen_range(-20..40), rng.gen_range(2..9));
    if r.is_integer() {
        r + rat(1, 3)
    } else {
        r
    }
}

fn rand_point(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-45..=45), 100)
}

#[test]
pub fn f1_symmetry_and_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let ctx = PrecCtx::new(30);
    for _ in 0..12 {
        let p = ParamsF1::new(
            rand_param(&mut rng),
            rand_param(&mut rng),
            rand_param(&mut rng),
            rand_param(&mut rng).abs() + rat(1, 2),
        );
        let (x, y) = (rand_point(&mut rng), rand_point(&mut rng));
        let f = eval_f1_double_series(&p, &x, &y, &ctx).unwrap().value;
        let g = eval_f1_double_series(&p.swapped(), &y, &x, &ctx).unwrap().value;
        assert!(f.overlaps(&g), "swap symmetry for {p:?} at ({x}, {y})");

        // β2 = 0 collapses F1 to a single 2F1.
        let q = ParamsF1 {
            beta2: Rat::zero(),
            ..p.clone()
        };
        let (p2, x2) = f1_reduce_beta_zero(&q, &x, &y).unwrap();
        let lhs = eval_f1_double_series(&q, &x, &y, &ctx).unwrap().value;
        let rhs = eval_2f1_series(&p2, &x2, &ctx).unwrap().value;
        assert!(lhs.overlaps(&rhs), "reduction for {q:?} at ({x}, {y})");
        assert!(lhs.radius().add(rhs.radius()) <= PrecCtx::tolerance(25));
    }
}

#[test]
pub fn truncation_bounds_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..40 {
        let nums = [rand_param(&mut rng), rand_param(&mut rng)];
        let dens = [rand_param(&mut rng).abs() + rat(1, 2), Rat::one()];
        let x = rat(rng.gen_range(-95..=95), 100);
        let loose = hyper_sum(&nums, &dens, &x, Real::one(300), Some(PrecCtx::tolerance(6)));
        let tight = hyper_sum(&nums, &dens, &x, Real::one(300), Some(PrecCtx::tolerance(70)));
        let ((lo, n_lo), (hi, n_hi)) = (loose.unwrap(), tight.unwrap());
        assert!(n_lo <= n_hi);
        assert!(lo.overlaps(&hi), "{nums:?} {dens:?} {x}");
        assert!(hi.radius() <= PrecCtx::tolerance(60));
    }
}
