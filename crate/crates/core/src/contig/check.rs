use num_traits::{One, Signed};

use crate::ball::{PrecCtx, Real};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rat, RatF, Var, NVARS};
use crate::hyper::{eval_f1, F1Method, Method, ParamsF1};

use super::{derive_contiguity_at, ContigRel, SextupleSpec, ShiftVec};

/// Outcome of the exact vanishing check for one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseCertificate {
    pub id: String,
    /// `q10` and `q01` vanish identically in `(a, n)` after `α → α + n·k`.
    pub certified: bool,
    /// `F(a+1)/F(a)`, i.e. `q00` at `n = 0`.
    pub ratio: RatF,
    pub q10n: RatF,
    pub q01n: RatF,
    pub q00n: RatF,
}

/// Coefficients with `α → α + n·k`, as rational functions of `(a, n)`.
pub fn specialize_shift_n(rel: &ContigRel, s: &SextupleSpec) -> Result<(RatF, RatF, RatF)> {
    let mut subs: [Option<Poly>; NVARS] = Default::default();
    let a_plus_n = &Poly::var(Var::A) + &Poly::var(Var::N);
    if rel.frame == s.frame() {
        subs[Var::A.index()] = Some(a_plus_n);
    } else if rel.frame.is_generic() {
        let shifted = |f: &crate::exact::Affine| &f.to_poly() + &Poly::var(Var::N).scale(&f.coef);
        subs[Var::A.index()] = Some(shifted(&s.alpha));
        subs[Var::B1.index()] = Some(shifted(&s.beta1));
        subs[Var::B2.index()] = Some(shifted(&s.beta2));
        subs[Var::C.index()] = Some(shifted(&s.gamma));
        subs[Var::X.index()] = Some(Poly::constant(s.x.clone()));
        subs[Var::Y.index()] = Some(Poly::constant(s.y.clone()));
    } else {
        return Err(Error::Domain(format!(
            "relation was not derived for family {}",
            s.id
        )));
    }
    if rel.shift != s.shift {
        return Err(Error::Domain(format!(
            "relation shift {} differs from the family shift {}",
            rel.shift, s.shift
        )));
    }
    let sub = |f: &RatF| {
        f.substitute(&subs).map_err(|_| {
            Error::Degenerate(format!("coefficient of {} has a pole identically", s.id))
        })
    };
    Ok((sub(&rel.q10)?, sub(&rel.q01)?, sub(&rel.q00)?))
}

/// Derives the relation for the family shift and certifies that `q10` and
/// `q01` vanish for every `n`. A certified ratio that differs from the
/// expected one is an error carrying both forms.
pub fn check_case_vanishing(s: &SextupleSpec) -> Result<CaseCertificate> {
    let rel = derive_contiguity_at(&s.frame(), &s.shift)?;
    let (q10n, q01n, q00n) = specialize_shift_n(&rel, s)?;
    let certified = q10n.is_zero() && q01n.is_zero();
    if certified && rel.q00 != s.ratio_expected {
        return Err(Error::Certification {
            id: s.id.clone(),
            expected: s.ratio_expected.to_string(),
            derived: rel.q00.to_string(),
        });
    }
    Ok(CaseCertificate {
        id: s.id.clone(),
        certified,
        ratio: rel.q00,
        q10n,
        q01n,
        q00n,
    })
}

fn shifted(p: &ParamsF1, k: &ShiftVec) -> ParamsF1 {
    let i = |v: i64| Rat::from_integer(v.into());
    ParamsF1::new(
        &p.alpha + i(k.k),
        &p.beta1 + i(k.l1),
        &p.beta2 + i(k.l2),
        &p.gamma + i(k.m),
    )
}

/// Residual `F1(α+k) - q10·F1(α+e10) - q01·F1(α+e01) - q00·F1(α)` at a point
/// assigning the variables of the relation's frame.
pub fn numeric_four_term_check(
    rel: &ContigRel,
    point: &[Option<Rat>; NVARS],
    ctx: &PrecCtx,
) -> Result<Real> {
    let (p, x, y) = rel.frame.eval(point)?;
    let f = |k: &ShiftVec| -> Result<Real> {
        Ok(eval_f1(&shifted(&p, k), &x, &y, F1Method::Auto, ctx)?.value)
    };
    let mut res = f(&rel.shift)?;
    let terms = [
        (&rel.q10, ShiftVec::e10()),
        (&rel.q01, ShiftVec::e01()),
        (&rel.q00, ShiftVec::zero()),
    ];
    for (q, k) in terms {
        let c = q.eval_point(point)?;
        if c != Rat::from_integer(0.into()) {
            res = &res - &f(&k)?.mul_rat(&c);
        }
    }
    Ok(res)
}

/// Numeric comparison of `F(a0+1)/F(a0)` with the family's ratio.
#[derive(Clone, Debug)]
pub struct RatioCheck {
    pub a0: Rat,
    pub lhs: Real,
    pub expected: Rat,
    pub methods: [Method; 2],
    pub pass: bool,
}

/// Evaluates both sides of `F(a0+1) = ratio(a0)·F(a0)`; a family point with
/// no evaluation route gives a domain error.
pub fn closed_ratio_numeric_check(s: &SextupleSpec, a0: &Rat, ctx: &PrecCtx) -> Result<RatioCheck> {
    let mut pt: [Option<Rat>; NVARS] = Default::default();
    pt[Var::A.index()] = Some(a0.clone());
    let expected = s.ratio_expected.eval_point(&pt)?;
    let f0 = eval_f1(&s.params_at(a0), &s.x, &s.y, F1Method::Auto, ctx)?;
    let a1 = a0 + Rat::one();
    let f1 = eval_f1(&s.params_at(&a1), &s.x, &s.y, F1Method::Auto, ctx)?;
    let lhs = f1.value.div_ref(&f0.value)?;
    let scale = expected.abs().max(Rat::one());
    let tol = PrecCtx::tolerance(ctx.target_digits.saturating_sub(5));
    let pass = lhs.contains_rat(&expected)
        && lhs
            .rad_rat()
            .is_some_and(|r| r <= tol.to_rational().unwrap() * scale);
    Ok(RatioCheck {
        a0: a0.clone(),
        lhs,
        expected,
        methods: [f0.method, f1.method],
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contig::{derive_contiguity, table1, table1_row};
    use crate::exact::{parse_ratf, rat};

    #[test]
    fn worked_example_shift_n() {
        let s = table1_row("A.1").unwrap();
        let c = check_case_vanishing(&s).unwrap();
        assert!(c.certified);
        let expected =
            parse_ratf("(3^8/(2^2*5^5))*(2*a+2*n+1/2)*(2*a+2*n+3/2)/(a+n+1/2)^2").unwrap();
        assert_eq!(c.q00n, expected);
    }

    #[test]
    fn constant_ratio_rows() {
        let a3 = check_case_vanishing(&table1_row("A.3").unwrap()).unwrap();
        assert_eq!(a3.q00n, RatF::constant(rat(81, 625)));
        let c4 = check_case_vanishing(&table1_row("C.4").unwrap()).unwrap();
        assert_eq!(c4.ratio, RatF::constant(rat(2, 27)));
    }

    #[test]
    fn every_family_certifies() {
        for s in table1() {
            let c = check_case_vanishing(&s).unwrap();
            assert!(c.certified, "{}", s.id);
        }
    }

    #[test]
    fn perturbed_point_is_not_certified() {
        let s = table1_row("A.1").unwrap().with_point(rat(1, 80), rat(1, 6));
        let c = check_case_vanishing(&s).unwrap();
        assert!(!c.certified);
        assert!(!c.q10n.is_zero());
    }

    #[test]
    fn mismatched_expectation_is_reported() {
        let mut s = table1_row("C.4").unwrap();
        s.ratio_expected = RatF::constant(rat(1, 27));
        match check_case_vanishing(&s) {
            Err(Error::Certification { id, .. }) => assert_eq!(id, "C.4"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generic_relation_residual() {
        let rel = derive_contiguity(&ShiftVec::new(1, 1, 1, 1)).unwrap();
        let mut pt: [Option<Rat>; NVARS] = Default::default();
        for (v, r) in [
            (Var::A, rat(1, 3)),
            (Var::B1, rat(1, 5)),
            (Var::B2, rat(1, 7)),
            (Var::C, rat(3, 2)),
            (Var::X, rat(1, 10)),
            (Var::Y, rat(1, 11)),
        ] {
            pt[v.index()] = Some(r);
        }
        let ctx = PrecCtx::new(60);
        let res = numeric_four_term_check(&rel, &pt, &ctx).unwrap();
        assert!(res.contains_zero());
        assert!(res.radius() < PrecCtx::tolerance(40));
    }

    #[test]
    fn family_residual_and_ratio() {
        let s = table1_row("A.1").unwrap();
        let rel = derive_contiguity_at(&s.frame(), &s.shift).unwrap();
        let mut pt: [Option<Rat>; NVARS] = Default::default();
        pt[Var::A.index()] = Some(rat(1, 3));
        let ctx = PrecCtx::new(30);
        assert!(numeric_four_term_check(&rel, &pt, &ctx)
            .unwrap()
            .contains_zero());
        assert!(
            closed_ratio_numeric_check(&s, &rat(1, 3), &ctx)
                .unwrap()
                .pass
        );
        let e1 = table1_row("E.1").unwrap();
        assert!(
            closed_ratio_numeric_check(&e1, &rat(1, 2), &ctx)
                .unwrap()
                .pass
        );
        assert_eq!(table1().len(), 15);
    }
}
