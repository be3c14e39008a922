//! Closed-form right-hand sides in the symbol `a`, and the identity database
//! that pairs them with hypergeometric left-hand sides.

mod db;
mod eval;
mod parse;

use std::fmt;

use num_traits::{One, Signed};

use crate::exact::{rat_to_string, Affine, Rat};

pub use db::{
    bundled_identities, load_identity_table, parse_identity_table, IdentityRecord, SeriesKind,
    Status, BUNDLED_JSON,
};
pub use eval::eval_expr;
pub use parse::parse_expr;

/// Expression tree of a closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedExpr {
    /// Non-negative rational literal.
    Rat(Rat),
    Pi,
    A,
    Gamma(Affine),
    /// `cos(π·arg)`.
    CosPi(Affine),
    Sqrt(Box<ClosedExpr>),
    Pow(Box<ClosedExpr>, Affine),
    Neg(Box<ClosedExpr>),
    Add(Box<ClosedExpr>, Box<ClosedExpr>),
    Sub(Box<ClosedExpr>, Box<ClosedExpr>),
    Mul(Box<ClosedExpr>, Box<ClosedExpr>),
    Div(Box<ClosedExpr>, Box<ClosedExpr>),
}

const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

impl ClosedExpr {
    fn prec(&self) -> u8 {
        match self {
            ClosedExpr::Rat(r) if !r.denom().is_one() => P_MUL,
            ClosedExpr::Add(..) | ClosedExpr::Sub(..) => P_ADD,
            ClosedExpr::Mul(..) | ClosedExpr::Div(..) => P_MUL,
            ClosedExpr::Neg(_) => P_NEG,
            ClosedExpr::Pow(..) => P_POW,
            _ => P_ATOM,
        }
    }

    /// Whether the tree mentions `a` anywhere.
    pub fn depends_on_a(&self) -> bool {
        use ClosedExpr::*;
        match self {
            Rat(_) | Pi => false,
            A => true,
            Gamma(f) | CosPi(f) => !f.is_constant(),
            Sqrt(e) | Neg(e) => e.depends_on_a(),
            Pow(b, f) => b.depends_on_a() || !f.is_constant(),
            Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) => l.depends_on_a() || r.depends_on_a(),
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        use ClosedExpr::*;
        match self {
            Rat(r) => f.write_str(&rat_to_string(r)),
            Pi => f.write_str("pi"),
            A => f.write_str("a"),
            Gamma(g) => write!(f, "Gamma({g})"),
            CosPi(g) => write!(f, "cos(pi*{g})"),
            Sqrt(e) => {
                f.write_str("sqrt(")?;
                e.write_at(f, 0)?;
                f.write_str(")")
            }
            Pow(b, e) => {
                b.write_at(f, P_ATOM)?;
                if e.is_constant() && e.offset.is_integer() && !e.offset.is_negative() {
                    write!(f, "^{}", e.offset)
                } else {
                    write!(f, "^({e})")
                }
            }
            Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, P_NEG)
            }
            Add(l, r) => {
                l.write_at(f, P_ADD)?;
                f.write_str("+")?;
                r.write_at(f, P_ADD)
            }
            Sub(l, r) => {
                l.write_at(f, P_ADD)?;
                f.write_str("-")?;
                r.write_at(f, P_MUL)
            }
            Mul(l, r) => {
                l.write_at(f, P_MUL)?;
                f.write_str("*")?;
                r.write_at(f, P_MUL)
            }
            Div(l, r) => {
                l.write_at(f, P_MUL)?;
                f.write_str("/")?;
                r.write_at(f, P_NEG)
            }
        }
    }
}

impl fmt::Display for ClosedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_parenthesizes_minimally() {
        for s in [
            "9/5",
            "-2^6/5^3",
            "2/3*(5/27)^(a)*cos(pi*a)*Gamma(a+1/2)",
            "(sqrt(5)-sqrt(15-6*sqrt(5)))/(sqrt(5)+sqrt(15-6*sqrt(5)))",
        ] {
            assert_eq!(parse_expr(s).unwrap().to_string(), *s);
        }
        assert_eq!(parse_expr("1/(2*3)").unwrap().to_string(), "1/(2*3)");
        assert_eq!(parse_expr("a-(1-a)").unwrap().to_string(), "a-(1-a)");
        assert_eq!(parse_expr("(2/3)^3").unwrap().to_string(), "(2/3)^3");
    }
}
