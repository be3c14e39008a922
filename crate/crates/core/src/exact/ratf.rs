use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use super::poly::Poly;
use super::rat::Rat;
use super::var::{Var, NVARS};
use crate::error::{Error, Result};

/// Normalized rational function `num / den`.
///
/// Invariants: `den` is nonzero, `gcd(num, den) = 1`, and `den` has coprime
/// integer coefficients with a positive leading coefficient. Two equal
/// rational functions therefore have identical fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatF {
    num: Poly,
    den: Poly,
}

impl RatF {
    pub fn zero() -> Self {
        RatF {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatF::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatF::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RatF::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatF {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` and normalizes.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatF::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatF::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        RatF::rescale(num, den)
    }

    /// Applies the integer-content convention to an already reduced pair.
    fn rescale(num: Poly, den: Poly) -> Self {
        let (den, k) = den.primitive_normalized();
        RatF {
            num: num.scale(&k.recip()),
            den,
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn constant_value(&self) -> Option<Rat> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn inv(&self) -> Result<RatF> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatF::rescale(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatF) -> Result<RatF> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Rat) -> RatF {
        if c.is_zero() {
            return RatF::zero();
        }
        RatF {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<RatF> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RatF {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Exact value at a point; every variable of `self` must be assigned.
    pub fn eval(&self, assignment: &HashMap<Var, Rat>) -> Result<Rat> {
        let mut pt: [Option<Rat>; NVARS] = Default::default();
        for (v, r) in assignment {
            pt[v.index()] = Some(r.clone());
        }
        self.eval_point(&pt)
    }

    pub fn eval_point(&self, pt: &[Option<Rat>; NVARS]) -> Result<Rat> {
        let d = self.den.eval(pt).map_err(|v| Error::Unassigned(v.name()))?;
        let n = self.num.eval(pt).map_err(|v| Error::Unassigned(v.name()))?;
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(n / d)
    }

    /// Replaces `var` by the polynomial `offset` and renormalizes.
    pub fn shift(&self, var: Var, offset: &Poly) -> RatF {
        let mut subs: [Option<Poly>; NVARS] = Default::default();
        subs[var.index()] = Some(offset.clone());
        self.substitute(&subs)
            .expect("polynomial substitution keeps a nonzero denominator")
    }

    /// Simultaneous polynomial substitution. Fails if the denominator becomes
    /// identically zero.
    pub fn substitute(&self, subs: &[Option<Poly>; NVARS]) -> Result<RatF> {
        let num = self.num.substitute(subs);
        let den = self.den.substitute(subs);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatF::normalize(num, den))
    }
}

impl Add for &RatF {
    type Output = RatF;
    fn add(self, rhs: &RatF) -> RatF {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatF::normalize(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let k1 = self.den.constant_value().unwrap();
            let k2 = rhs.den.constant_value().unwrap();
            return RatF::from_poly(&self.num.scale(&k1.recip()) + &rhs.num.scale(&k2.recip()));
        }
        let g = self.den.gcd(&rhs.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return RatF::zero();
        }
        // Both operands are reduced and d1, d2 are coprime, so a common
        // factor of the new numerator and denominator divides g.
        let h = num.gcd(&g);
        let den = &self.den * &d2;
        if h.is_constant() {
            return RatF::rescale(num, den);
        }
        RatF::rescale(
            num.div_exact(&h).expect("gcd divides numerator"),
            den.div_exact(&h).expect("gcd divides denominator"),
        )
    }
}

impl Sub for &RatF {
    type Output = RatF;
    fn sub(self, rhs: &RatF) -> RatF {
        self + &(-rhs)
    }
}

impl Mul for &RatF {
    type Output = RatF;
    fn mul(self, rhs: &RatF) -> RatF {
        if self.is_zero() || rhs.is_zero() {
            return RatF::zero();
        }
        // Cross-cancel so the product of reduced fractions stays reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatF::rescale(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RatF {
    type Output = RatF;
    /// Panics on division by zero; use [`RatF::checked_div`] to recover.
    fn div(self, rhs: &RatF) -> RatF {
        self.checked_div(rhs)
            .expect("division by the zero rational function")
    }
}

impl Neg for &RatF {
    type Output = RatF;
    fn neg(self) -> RatF {
        RatF {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatF {
            type Output = RatF;
            fn $f(self, rhs: RatF) -> RatF {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<Poly> for RatF {
    fn from(p: Poly) -> Self {
        RatF::from_poly(p)
    }
}

impl From<Rat> for RatF {
    fn from(r: Rat) -> Self {
        RatF::constant(r)
    }
}

impl Default for RatF {
    fn default() -> Self {
        RatF::zero()
    }
}

impl fmt::Display for RatF {
    /// Canonical form `(numerator)/(denominator)`, both fully expanded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_ratf, rat};

    fn f(s: &str) -> RatF {
        parse_ratf(s).unwrap()
    }

    #[test]
    fn add_prints_canonically() {
        assert_eq!((&f("x") + &f("y")).to_string(), "(x+y)/(1)");
    }

    #[test]
    fn multiplicative_inverse() {
        let g = f("(a+1/2)/(2*a+3)");
        assert!((&g * &g.inv().unwrap()).is_one());
    }

    #[test]
    fn normalization_convention() {
        let g = f("(a^2-1)/(-1/2*a-1/2)");
        assert_eq!(g.to_string(), "(-2*a+2)/(1)");
        let h = f("(x)/(1/3*x*y + 2/3)");
        assert_eq!(h.to_string(), "(3*x)/(x*y+2)");
    }

    #[test]
    fn a_minus_a_is_zero() {
        assert!((&f("a") - &f("a")).is_zero());
        assert!(f("0").is_zero());
    }

    #[test]
    fn eval_and_pole() {
        let g = f("1/(a+1/2)");
        let mut m = HashMap::new();
        m.insert(Var::A, rat(-1, 2));
        assert_eq!(g.eval(&m), Err(Error::Pole));
        assert_eq!(f("1").eval(&HashMap::new()).unwrap(), rat(1, 1));
        assert_eq!(f("a+x").eval(&m), Err(Error::Unassigned("x")));
    }

    #[test]
    fn shift_substitutes() {
        let shifted = f("a").shift(Var::A, &(&Poly::var(Var::A) + &Poly::one()));
        assert_eq!(shifted, f("a+1"));
        let untouched = f("x").shift(Var::A, &(&Poly::var(Var::A) + &Poly::var(Var::N)));
        assert_eq!(untouched, f("x"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            f("a").checked_div(&RatF::zero()),
            Err(Error::DivisionByZero)
        );
    }
}
