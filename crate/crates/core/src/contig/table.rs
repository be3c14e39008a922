use num_traits::Signed;

use crate::exact::{parse_rat, parse_ratf, Affine, Rat, RatF};
use crate::hyper::ParamsF1;

use super::{Frame, ShiftVec};

/// A one-parameter F1 family `F(a) = F1(α(a); β1(a), β2(a); γ(a); x, y)`
/// whose ratio `F(a+1)/F(a)` is rational in `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SextupleSpec {
    pub id: String,
    pub alpha: Affine,
    pub beta1: Affine,
    pub beta2: Affine,
    pub gamma: Affine,
    pub x: Rat,
    pub y: Rat,
    pub shift: ShiftVec,
    pub ratio_expected: RatF,
    /// `|x| < 1` and `|y| < 1`, so the double series converges for generic `a`.
    pub convergent_generic: bool,
    /// Values `a0` at which `F(a0+1)/F(a0)` is checked numerically.
    pub samples: Vec<Rat>,
}

impl SextupleSpec {
    #[allow(clippy::too_many_arguments)]
    fn build(
        id: &str,
        k: ShiftVec,
        params: [&str; 4],
        x: &str,
        y: &str,
        ratio: &str,
        samples: &[&str],
    ) -> SextupleSpec {
        let p: Vec<Affine> = params.iter().map(|s| Affine::parse(s).unwrap()).collect();
        let x = parse_rat(x).unwrap();
        let y = parse_rat(y).unwrap();
        let one = Rat::from_integer(1.into());
        let convergent_generic = x.abs() < one && y.abs() < one;
        SextupleSpec {
            id: id.to_string(),
            alpha: p[0].clone(),
            beta1: p[1].clone(),
            beta2: p[2].clone(),
            gamma: p[3].clone(),
            x,
            y,
            shift: k,
            ratio_expected: parse_ratf(ratio).unwrap(),
            convergent_generic,
            samples: samples.iter().map(|s| parse_rat(s).unwrap()).collect(),
        }
    }

    /// Frame with every component expressed in `a`.
    pub fn frame(&self) -> Frame {
        Frame::new(
            self.alpha.to_ratf(),
            self.beta1.to_ratf(),
            self.beta2.to_ratf(),
            self.gamma.to_ratf(),
            RatF::constant(self.x.clone()),
            RatF::constant(self.y.clone()),
        )
    }

    pub fn params_at(&self, a: &Rat) -> ParamsF1 {
        ParamsF1::new(
            self.alpha.eval(a),
            self.beta1.eval(a),
            self.beta2.eval(a),
            self.gamma.eval(a),
        )
    }

    /// Whether the shift equals the vector of `a`-coefficients, so that
    /// `F(a+n)` is the family shifted by `n·k`.
    pub fn shift_matches_coefficients(&self) -> bool {
        let c = |f: &Affine| f.coef.is_integer().then(|| f.coef.to_integer());
        let k = &self.shift;
        c(&self.alpha) == Some(k.k.into())
            && c(&self.beta1) == Some(k.l1.into())
            && c(&self.beta2) == Some(k.l2.into())
            && c(&self.gamma) == Some(k.m.into())
    }

    pub fn with_point(&self, x: Rat, y: Rat) -> SextupleSpec {
        let one = Rat::from_integer(1.into());
        SextupleSpec {
            convergent_generic: x.abs() < one && y.abs() < one,
            x,
            y,
            ..self.clone()
        }
    }
}

/// The fifteen closed-form families, rows A.1 to E.1.
pub fn table1() -> Vec<SextupleSpec> {
    let s = SextupleSpec::build;
    let k = ShiftVec::new;
    vec![
        s(
            "A.1",
            k(2, 1, 4, 2),
            ["2*a", "a+1/2", "4*a-1", "2*a+1/2"],
            "1/81",
            "1/6",
            "(3^8/(2^2*5^5))*(2*a+1/2)*(2*a+3/2)/(a+1/2)^2",
            &["1/3", "2/5"],
        ),
        s(
            "A.2",
            k(2, 1, 4, 5),
            ["2*a", "a+1/2", "4*a-1", "5*a"],
            "80/81",
            "5/6",
            "(3^8/(2^2*5^5))*(5*a)*(5*a+1)*(5*a+2)*(5*a+3)*(5*a+4)/((a+1/2)^2*(3*a)*(3*a+1)*(3*a+2))",
            &["1/3", "2/5"],
        ),
        s(
            "A.3",
            k(1, 2, -4, 1),
            ["a", "2*a", "1-4*a", "a+1/2"],
            "80/81",
            "16/15",
            "3^4/5^4",
            &["1/4", "5/4"],
        ),
        s(
            "B.1",
            k(2, -3, 4, 2),
            ["2*a", "1-3*a", "4*a-1", "2*a+1/2"],
            "-1/80",
            "5/32",
            "(2^6/5^3)*(2*a+1/2)*(2*a+3/2)/(a+1/2)^2",
            &["1/3", "2/5"],
        ),
        s(
            "B.2",
            k(1, 3, 0, 5),
            ["a", "3*a-1/2", "1/2", "5*a"],
            "-25/2",
            "5/32",
            "(2^3/5^5)*a*(5*a)*(5*a+1)*(5*a+2)*(5*a+3)*(5*a+4)/(((2*a)*(2*a+1))^2*(2*a+1/2)*(2*a+3/2))",
            &["1/2", "3/2"],
        ),
        s(
            "B.3",
            k(2, -3, 4, 1),
            ["2*a", "1-3*a", "4*a-1", "a+1/2"],
            "81/80",
            "27/32",
            "-2^6/5^3",
            &["1/3", "4/3"],
        ),
        s(
            "B.4",
            k(0, -1, 3, 4),
            ["1/2", "-a", "3*a+5/2", "4*a+9/2"],
            "27/32",
            "5/6",
            "(4*a+9/2)*(4*a+11/2)*(4*a+13/2)*(4*a+15/2)/(2^6*(a+3/2)^2*(2*a+5/2)*(2*a+7/2))",
            &["1/3", "2/5"],
        ),
        s(
            "C.1",
            k(2, 1, 5, 3),
            ["2*a", "a+1/2", "5*a-3/2", "3*a"],
            "3/128",
            "3/8",
            "(2^16/(3^3*5^5))*(3*a)*(3*a+1)*(3*a+2)/((a+1/2)*(2*a)*(2*a+1))",
            &["1/3", "2/5"],
        ),
        s(
            "C.2",
            k(3, -1, 5, 2),
            ["3*a", "1-a", "5*a-3/2", "2*a+1/2"],
            "3/128",
            "1/16",
            "(2^15/5^5)*a*(2*a+1/2)*(2*a+3/2)/((3*a)*(3*a+1)*(3*a+2))",
            &["1/3", "2/5"],
        ),
        s(
            "C.3",
            k(2, 1, 5, 5),
            ["2*a", "a+1/2", "5*a-3/2", "5*a"],
            "125/128",
            "5/8",
            "(2^18/(3^3*5^5))*a^2*(5*a)*(5*a+1)*(5*a+2)*(5*a+3)*(5*a+4)/(((2*a)*(2*a+1))^2*(3*a)*(3*a+1)*(3*a+2))",
            &["1/3", "2/5"],
        ),
        s(
            "C.4",
            k(1, -3, 5, 0),
            ["a", "1-3*a", "5*a-3/2", "1/2"],
            "125/128",
            "25/16",
            "2/3^3",
            &["-7/10", "-17/10"],
        ),
        s(
            "D.1",
            k(2, -3, 5, 3),
            ["2*a", "1-3*a", "5*a-3/2", "3*a"],
            "-3/125",
            "9/25",
            "(2^2*5/3^3)*(3*a)*(3*a+1)*(3*a+2)/((a+1/2)*(2*a)*(2*a+1))",
            &["1/3", "2/5"],
        ),
        s(
            "D.2",
            k(1, 1, 3, -1),
            ["a", "a+1/2", "3*a-1/2", "1-a"],
            "16/25",
            "16",
            "5^2/3^6",
            &["-5/6", "-11/6"],
        ),
        s(
            "D.3",
            k(5, 3, 2, 4),
            ["5*a", "3*a-1/2", "2*a", "4*a+1/2"],
            "1/25",
            "16/25",
            "(5^10/(2^6*3^6))*a*(4*a+1/2)*(4*a+3/2)*(4*a+5/2)*(4*a+7/2)/((5*a)*(5*a+1)*(5*a+2)*(5*a+3)*(5*a+4))",
            &["1/3", "2/5"],
        ),
        s(
            "E.1",
            k(0, 2, 3, 3),
            ["1/2", "2*a", "3*a-1/2", "3*a+1/2"],
            "1/5",
            "-4/5",
            "(a+1/6)*(a+5/6)/((a+1/3)*(a+2/3))",
            &["1/2", "1/3"],
        ),
    ]
}

pub fn table1_row(id: &str) -> Option<SextupleSpec> {
    table1().into_iter().find(|s| s.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_well_formed() {
        let t = table1();
        assert_eq!(t.len(), 15);
        for s in &t {
            assert!(s.shift_matches_coefficients(), "{}", s.id);
            assert!(s.samples.len() >= 2, "{}", s.id);
        }
        let conv: Vec<&str> = t
            .iter()
            .filter(|s| !s.convergent_generic)
            .map(|s| s.id.as_str())
            .collect();
        assert_eq!(conv, ["A.3", "B.2", "B.3", "C.4", "D.2"]);
        assert!(table1_row("E.1").is_some());
        assert!(table1_row("F.1").is_none());
    }
}
