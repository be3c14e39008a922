use num_traits::{One, Signed, Zero};

use crate::ball::{log, pow_real_rat, Real};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};

/// Dense univariate polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    fn trim(mut self) -> UPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.0
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * t + c)
    }

    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Rat::zero();
        UPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .trim()
    }

    fn scale(&self, c: &Rat) -> UPoly {
        UPoly(self.0.iter().map(|x| x * c).collect()).trim()
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly(Vec::new());
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly(out).trim()
    }

    fn derivative(&self) -> UPoly {
        UPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(i.into()))
                .collect(),
        )
        .trim()
    }

    /// `(quotient, remainder)`; `d` must be nonzero.
    fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().unwrap();
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (UPoly(q).trim(), UPoly(r).trim())
    }

    fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    fn square_free(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    fn sturm(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                return seq;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(r.scale(&-Rat::one()));
        }
    }
}

fn sign_changes(seq: &[UPoly], t: &Rat) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(t))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `h(t) = log(t^p0 · Π (1 - u_i t)^p_i)` on `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseFn {
    pub p0: Rat,
    pub factors: Vec<(Rat, Rat)>,
}

/// An interior zero of `h'` with the value of `h` there.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub t: Real,
    pub h: Real,
}

impl PhaseFn {
    pub fn new(p0: Rat, factors: Vec<(Rat, Rat)>) -> PhaseFn {
        PhaseFn { p0, factors }
    }

    /// `t (1 - 80t/81)^(-2) (1 - 16t/15)^4`.
    pub fn example2() -> PhaseFn {
        PhaseFn::new(
            Rat::one(),
            vec![(rat(80, 81), rat(-2, 1)), (rat(16, 15), rat(4, 1))],
        )
    }

    fn linear(u: &Rat) -> UPoly {
        UPoly(vec![Rat::one(), -u]).trim()
    }

    /// Numerator of `h'` over the denominator `t·Π(1 - u_i t)`.
    pub fn derivative_numerator(&self) -> UPoly {
        let all = self
            .factors
            .iter()
            .fold(UPoly(vec![Rat::one()]), |acc, (u, _)| acc.mul(&Self::linear(u)));
        let mut num = all.scale(&self.p0);
        let t = UPoly(vec![Rat::zero(), Rat::one()]);
        for (i, (u, p)) in self.factors.iter().enumerate() {
            let others = self
                .factors
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(UPoly(vec![Rat::one()]), |acc, (_, (v, _))| {
                    acc.mul(&Self::linear(v))
                });
            num = num.add(&t.mul(&others).scale(&(-(p * u))));
        }
        num
    }

    pub fn eval(&self, t: &Real) -> Result<Real> {
        let mut prod = pow_real_rat(t, &self.p0)?;
        let one = Real::one(t.prec());
        for (u, p) in &self.factors {
            let f = one.sub_ref(&t.mul_rat(u));
            prod = prod.mul_ref(&pow_real_rat(&f, p)?);
        }
        if !prod.is_positive() {
            return Err(Error::Domain(format!(
                "phase argument {prod} is not certified positive"
            )));
        }
        log(&prod)
    }

    /// `h'(t) = p0/t - Σ p_i u_i / (1 - u_i t)`.
    pub fn derivative(&self, t: &Real) -> Result<Real> {
        let mut d = Real::from_rat(&self.p0, t.prec()).div_ref(t)?;
        let one = Real::one(t.prec());
        for (u, p) in &self.factors {
            let f = one.sub_ref(&t.mul_rat(u));
            d = d.sub_ref(&Real::from_rat(&(p * u), t.prec()).div_ref(&f)?);
        }
        Ok(d)
    }
}

fn ball_of(lo: &Rat, hi: &Rat, prec: u32) -> Real {
    let mid = (lo + hi) / rat(2, 1);
    let rad = (hi - lo) / rat(2, 1);
    Real::from_rat(&mid, prec + 8)
        .add_error(crate::ball::Mag::from_rat(&rad, true))
        .with_prec(prec)
}

/// Interior critical points of `h` on `(0, 1)`: Sturm isolation of the roots
/// of the numerator of `h'`, then bisection to width `2^-prec`.
pub fn critical_points(ph: &PhaseFn, prec: u32) -> Result<Vec<CriticalPoint>> {
    let num = ph.derivative_numerator();
    if num.is_zero() {
        return Err(Error::Degenerate("h' vanishes identically".into()));
    }
    for (u, _) in &ph.factors {
        if u > &Rat::one() && num.eval(&u.recip()).is_zero() {
            return Err(Error::Domain(format!(
                "h' has a root at the factor zero t = {}",
                u.recip()
            )));
        }
    }
    if num.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let sf = num.square_free();
    let seq = sf.sturm();
    let count = |a: &Rat, b: &Rat| sign_changes(&seq, a) - sign_changes(&seq, b);
    // Intervals (lo, hi] holding exactly one root; exact roots are recorded directly.
    let mut todo = vec![(Rat::zero(), Rat::one())];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = todo.pop() {
        let mut n = count(&lo, &hi);
        if hi == Rat::one() && sf.eval(&hi).is_zero() {
            n -= 1;
        }
        match n {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / rat(2, 1);
                todo.push((mid.clone(), hi));
                todo.push((lo, mid));
            }
        }
    }
    let width = Rat::new(1.into(), num_bigint::BigInt::one() << prec as usize);
    let mut out = Vec::new();
    for (mut lo, mut hi) in isolated {
        if sf.eval(&hi).is_zero() {
            lo = hi.clone();
        }
        let v_lo = sf.eval(&lo);
        let s_lo = if v_lo.is_zero() {
            sf.derivative().eval(&lo).is_positive()
        } else {
            v_lo.is_positive()
        };
        while &hi - &lo > width {
            let mid = (&lo + &hi) / rat(2, 1);
            let v = sf.eval(&mid);
            if v.is_zero() {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if v.is_positive() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = ball_of(&lo, &hi, prec);
        let h = ph.eval(&t)?;
        out.push(CriticalPoint { t, h });
    }
    out.sort_by(|a, b| a.t.mid_rat().cmp(&b.t.mid_rat()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::sqrt;

    #[test]
    fn example2_numerator() {
        let n = PhaseFn::example2().derivative_numerator();
        // Proportional to 256t² - 352t + 81.
        let c = &n.0[0] / rat(81, 1);
        assert_eq!(n, UPoly(vec![rat(81, 1), rat(-352, 1), rat(256, 1)]).scale(&c));
    }

    #[test]
    fn example2_critical_point() {
        let ph = PhaseFn::example2();
        let cps = critical_points(&ph, 200).unwrap();
        assert_eq!(cps.len(), 1);
        let w = 300;
        let exact = Real::from_rat(&rat(11, 16), w)
            .sub_ref(&sqrt(&Real::from_int(10, w)).unwrap().div_int(8));
        assert!(cps[0].t.contains(&exact));
        let target = log(&Real::from_rat(&rat(81, 625), w)).unwrap();
        assert!(cps[0].h.overlaps(&target));
        assert!(cps[0].h.radius() < crate::ball::Mag::pow2(-150));
        let h1 = ph.eval(&Real::one(w)).unwrap();
        assert!(h1.overlaps(&target) && h1.overlaps(&cps[0].h));
        assert!(ph.derivative(&cps[0].t).unwrap().contains_zero());
    }

    #[test]
    fn no_interior_critical_point() {
        let ph = PhaseFn::new(Rat::one(), vec![]);
        assert!(critical_points(&ph, 64).unwrap().is_empty());
        let ph = PhaseFn::new(Rat::one(), vec![(rat(1, 2), rat(1, 1))]);
        // h' numerator 1 - t: root only at the endpoint.
        assert!(critical_points(&ph, 64).unwrap().is_empty());
    }

    #[test]
    fn sturm_counts_and_exact_roots() {
        // (t - 1/4)(t - 1/2)(t - 3/4)
        let p = UPoly(vec![rat(-3, 32), rat(11, 16), rat(-3, 2), rat(1, 1)]);
        let seq = p.square_free().sturm();
        assert_eq!(sign_changes(&seq, &rat(0, 1)) - sign_changes(&seq, &rat(1, 1)), 3);
        let q = p.mul(&p);
        assert_eq!(q.square_free().degree(), Some(3));
        // h = log(t (1 - t)) has its critical point exactly at 1/2.
        let ph = PhaseFn::new(rat(1, 1), vec![(rat(1, 1), rat(1, 1))]);
        let cps = critical_points(&ph, 64).unwrap();
        assert_eq!(cps.len(), 1);
        assert!(cps[0].t.contains_rat(&rat(1, 2)));
    }
}
