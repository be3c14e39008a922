use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{rat_to_string, Rat};
use super::var::{Var, NVARS};

/// Exponent vector over `(a, b1, b2, c, x, y, n)`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `a`, then `b1`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut e = other.0;
        for (a, b) in e.iter_mut().zip(self.0.iter()) {
            *a -= b;
        }
        Monomial(e)
    }

    fn without(&self, v: Var) -> Monomial {
        let mut e = self.0;
        e[v.index()] = 0;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v), Rat::one())
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `p·v + q` for a single variable `v`.
    pub fn affine(v: Var, p: Rat, q: Rat) -> Self {
        let mut out = Poly::constant(q);
        out.add_term(Monomial::var(v), p);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> [bool; NVARS] {
        let mut out = [false; NVARS];
        for m in self.terms.keys() {
            for (o, e) in out.iter_mut().zip(m.0.iter()) {
                *o |= *e > 0;
            }
        }
        out
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, k)| (mm.mul(m), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates at a point; `None` entries must not occur in the polynomial.
    pub fn eval(&self, point: &[Option<Rat>; NVARS]) -> Result<Rat, Var> {
        let mut powers: Vec<Vec<Rat>> = vec![Vec::new(); NVARS];
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v) as usize;
                if e == 0 {
                    continue;
                }
                let x = point[v.index()].as_ref().ok_or(v)?;
                let pw = &mut powers[v.index()];
                if pw.is_empty() {
                    pw.push(Rat::one());
                }
                while pw.len() <= e {
                    let next = pw.last().unwrap() * x;
                    pw.push(next);
                }
                t *= &pw[e];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Simultaneous substitution `v -> subs[v]` for every `Some` entry.
    pub fn substitute(&self, subs: &[Option<Poly>; NVARS]) -> Poly {
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); NVARS];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = m.0;
            let mut t = Poly::constant(c.clone());
            for v in Var::ALL {
                let i = v.index();
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                if let Some(s) = &subs[i] {
                    kept[i] = 0;
                    let pw = &mut powers[i];
                    if pw.is_empty() {
                        pw.push(Poly::one());
                    }
                    while pw.len() <= e {
                        let next = pw.last().unwrap() * s;
                        pw.push(next);
                    }
                    t = &t * &pw[e];
                }
            }
            let t = t.mul_term(&Monomial(kept), &Rat::one());
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Coefficients with respect to `v`, indexed by the power of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].terms.insert(m.without(v), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let mut shift = Monomial::one();
            shift.0[v.index()] = k as u32;
            for (m, cc) in &c.terms {
                out.add_term(m.mul(&shift), cc.clone());
            }
        }
        out
    }

    /// Positive rational `r` such that `self / r` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn rational_content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::zero();
        }
        Rat::new(num, den)
    }

    /// Scales to coprime integer coefficients with a positive leading
    /// coefficient. Returns the polynomial and the factor divided out.
    pub fn primitive_normalized(&self) -> (Poly, Rat) {
        if self.is_zero() {
            return (Poly::zero(), Rat::one());
        }
        let mut k = self.rational_content();
        if self.leading().unwrap().1.is_negative() {
            k = -k;
        }
        (self.scale(&k.recip()), k)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        if d.is_constant() {
            return Some(self.scale(&lc.recip()));
        }
        let (lm, lc) = (*lm, lc.clone());
        // Every term of an exact quotient lies in this box of exponents.
        let mut bound = [0u32; NVARS];
        for v in Var::ALL {
            let (da, dd) = (self.degree_in(v), d.degree_in(v));
            if dd > da {
                return None;
            }
            bound[v.index()] = da - dd;
        }
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            if qm.0.iter().zip(bound.iter()).any(|(e, b)| e > b) {
                return None;
            }
            let qc = c / &lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Greatest common divisor, normalized to coprime integer coefficients and
    /// a positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_normalized().0;
        }
        if other.is_zero() {
            return self.primitive_normalized().0;
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        if self == other {
            return self.primitive_normalized().0;
        }
        if self.len() == 1 || other.len() == 1 {
            return monomial_gcd(self, other);
        }
        let vf = self.vars();
        let vg = other.vars();
        // A variable occurring on one side only is removed through content.
        for v in Var::ALL {
            let i = v.index();
            if vf[i] && !vg[i] {
                return self.content_in(v).gcd(other);
            }
            if vg[i] && !vf[i] {
                return self.gcd(&other.content_in(v));
            }
        }
        let v = Var::ALL
            .into_iter()
            .filter(|v| vf[v.index()])
            .min_by_key(|&v| self.degree_in(v).max(other.degree_in(v)))
            .expect("non-constant polynomial has a variable");
        let cf = self.content_in(v);
        let cg = other.content_in(v);
        let c = cf.gcd(&cg);
        let pf = self.div_exact(&cf).expect("content divides");
        let pg = other.div_exact(&cg).expect("content divides");
        let h = primitive_prs_gcd(pf, pg, v);
        (&c * &h).primitive_normalized().0
    }

    /// GCD of the coefficients of `self` viewed as a polynomial in `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let coeffs = self.coeffs_in(v);
        let mut g = Poly::zero();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            if c.is_constant() {
                return Poly::one();
            }
        }
        let mut nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
        nonzero.sort_by_key(|c| c.len());
        for c in nonzero {
            g = g.gcd(c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }
}

/// GCD when one side is a single term: the common power product.
fn monomial_gcd(f: &Poly, g: &Poly) -> Poly {
    let mut e = [u32::MAX; NVARS];
    for m in f.terms.keys().chain(g.terms.keys()) {
        for (x, y) in e.iter_mut().zip(m.0.iter()) {
            *x = (*x).min(*y);
        }
    }
    Poly::monomial(Monomial(e), Rat::one())
}

fn trim(v: &mut Vec<Poly>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn degree(v: &[Poly]) -> Option<usize> {
    if v.len() == 1 && v[0].is_zero() {
        None
    } else {
        Some(v.len() - 1)
    }
}

/// Pseudo-remainder of `a` by `b`, both given as coefficient vectors in the
/// main variable.
fn pseudo_remainder(mut a: Vec<Poly>, b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lcb = &b[db];
    trim(&mut a);
    while let Some(da) = degree(&a) {
        if da < db {
            break;
        }
        // Scaling by lc(b) is skipped when it divides lc(a); the result then
        // differs from the classical pseudo-remainder by a power of lc(b),
        // which the primitive-part step removes anyway.
        let q = match a[da].div_exact(lcb) {
            Some(q) => q,
            None => {
                let lca = a[da].clone();
                for c in a.iter_mut() {
                    *c = &*c * lcb;
                }
                lca
            }
        };
        for (j, bj) in b.iter().enumerate() {
            let idx = j + da - db;
            a[idx] = &a[idx] - &(&q * bj);
        }
        debug_assert!(a[da].is_zero());
        a.pop();
        if a.is_empty() {
            a.push(Poly::zero());
        }
        trim(&mut a);
    }
    a
}

/// GCD of two polynomials that are primitive with respect to `v`.
fn primitive_prs_gcd(f: Poly, g: Poly, v: Var) -> Poly {
    let (mut a, mut b) = if f.degree_in(v) >= g.degree_in(v) {
        (f, g)
    } else {
        (g, f)
    };
    loop {
        if b.degree_in(v) == 0 {
            // b is primitive and free of v, hence a unit.
            return Poly::one();
        }
        if a.div_exact(&b).is_some() {
            return b.primitive_normalized().0;
        }
        let r = pseudo_remainder(a.coeffs_in(v), &b.coeffs_in(v));
        let r = Poly::from_coeffs_in(v, &r);
        if r.is_zero() {
            return b.primitive_normalized().0;
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        let cr = r.content_in(v);
        let r = r.div_exact(&cr).expect("content divides");
        a = b;
        b = r.primitive_normalized().0;
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    /// Fully expanded, leading term first, e.g. `2*a^2+a-1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            if m.is_one() {
                f.write_str(&rat_to_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rat_to_string(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(s: &str) -> Poly {
        let f = crate::exact::parse_ratf(s).unwrap();
        assert!(f.den().is_constant());
        f.num().scale(&f.den().constant_value().unwrap().recip())
    }

    #[test]
    fn grlex_order_prints_leading_first() {
        let q = p("x + a^2 + 1/2 - b1*a");
        assert_eq!(q.to_string(), "a^2-a*b1+x+1/2");
    }

    #[test]
    fn exact_division() {
        let f = p("(a+b1)*(a-2*x+1)");
        let g = p("a-2*x+1");
        assert_eq!(f.div_exact(&g).unwrap(), p("a+b1"));
        assert!(p("a^2+1").div_exact(&p("a+1")).is_none());
    }

    #[test]
    fn multivariate_gcd() {
        let g = p("(a*x - y + 2)*(b1 + c)");
        let f1 = &g * &p("a^2 + y");
        let f2 = &g * &p("a - x*b2");
        assert_eq!(f1.gcd(&f2), g.primitive_normalized().0);
        assert_eq!(p("a+1").gcd(&p("a+2")), Poly::one());
    }

    #[test]
    fn gcd_of_rational_coefficients_is_integer_primitive() {
        let f = p("(1/2*a + 1/4)*(a - 1)");
        let g = p("(2*a + 1)*(a + 7)");
        assert_eq!(f.gcd(&g).to_string(), "2*a+1");
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = p("a + b1");
        let mut subs: [Option<Poly>; NVARS] = Default::default();
        subs[Var::A.index()] = Some(p("b1"));
        subs[Var::B1.index()] = Some(p("a"));
        assert_eq!(f.substitute(&subs), p("a+b1"));
        subs[Var::B1.index()] = Some(p("2*a"));
        assert_eq!(f.substitute(&subs), p("2*a+b1"));
    }

    #[test]
    fn evaluation() {
        let f = p("a^2*x - 3");
        let mut pt: [Option<Rat>; NVARS] = Default::default();
        pt[0] = Some(rat(1, 2));
        assert_eq!(f.eval(&pt), Err(Var::X));
        pt[Var::X.index()] = Some(rat(4, 1));
        assert_eq!(f.eval(&pt), Ok(rat(-2, 1)));
    }
}
