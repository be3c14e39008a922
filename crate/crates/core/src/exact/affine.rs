use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rat::{parse_rat_prefix, rat_to_string, Rat};
use super::ratf::RatF;
use super::var::Var;
use crate::error::{Error, Result};

/// `coef·a + offset` in the single family parameter `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Affine {
    pub coef: Rat,
    pub offset: Rat,
}

impl Affine {
    pub fn new(coef: Rat, offset: Rat) -> Affine {
        Affine { coef, offset }
    }

    pub fn constant(offset: Rat) -> Affine {
        Affine {
            coef: Rat::zero(),
            offset,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn eval(&self, a: &Rat) -> Rat {
        &self.coef * a + &self.offset
    }

    pub fn to_poly(&self) -> Poly {
        Poly::affine(Var::A, self.coef.clone(), self.offset.clone())
    }

    pub fn to_ratf(&self) -> RatF {
        RatF::from_poly(self.to_poly())
    }

    /// Parses sums such as `2*a+1/2`, `1-3*a`, `-a`, `a/2` or `3/2`.
    pub fn parse(src: &str) -> Result<Affine> {
        let s: Vec<u8> = src.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty affine form".into(),
            });
        }
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let mut out = Affine::default();
        let mut pos = 0;
        while pos < s.len() {
            let mut sign = Rat::one();
            if s[pos] == b'+' || s[pos] == b'-' {
                if s[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(err(pos, "expected '+' or '-'"));
            }
            let (c, used) = parse_rat_prefix(&s[pos..]);
            let has_num = used > 0;
            pos += used;
            let coeff = if has_num { c } else { Rat::one() };
            let mut is_a = false;
            if pos < s.len() && s[pos] == b'*' {
                if !has_num {
                    return Err(err(pos, "dangling '*'"));
                }
                pos += 1;
                if pos >= s.len() || s[pos] != b'a' {
                    return Err(err(pos, "only the symbol a may follow '*'"));
                }
            }
            if pos < s.len() && s[pos] == b'a' {
                is_a = true;
                pos += 1;
            } else if !has_num {
                return Err(err(pos, "expected a rational or a"));
            }
            let mut coeff = coeff;
            if is_a && pos < s.len() && s[pos] == b'/' {
                pos += 1;
                let (d, used) = parse_rat_prefix(&s[pos..]);
                if used == 0 || d.is_zero() {
                    return Err(err(pos, "bad divisor"));
                }
                pos += used;
                coeff /= d;
            }
            if pos < s.len() && s[pos] == b'^' {
                return Err(err(pos, "form is not affine in a"));
            }
            if pos < s.len() && !(s[pos] == b'+' || s[pos] == b'-') {
                return Err(err(pos, "unexpected character"));
            }
            if is_a {
                out.coef += sign * coeff;
            } else {
                out.offset += sign * coeff;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef.is_zero() {
            return f.write_str(&rat_to_string(&self.offset));
        }
        if self.coef == Rat::one() {
            f.write_str("a")?;
        } else if self.coef == -Rat::one() {
            f.write_str("-a")?;
        } else {
            write!(f, "{}*a", rat_to_string(&self.coef))?;
        }
        if self.offset.is_positive() {
            write!(f, "+{}", rat_to_string(&self.offset))?;
        } else if self.offset.is_negative() {
            write!(f, "{}", rat_to_string(&self.offset))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn parse_forms() {
        assert_eq!(
            Affine::parse("2*a+1/2").unwrap(),
            Affine::new(rat(2, 1), rat(1, 2))
        );
        assert_eq!(
            Affine::parse("1-3*a").unwrap(),
            Affine::new(rat(-3, 1), rat(1, 1))
        );
        assert_eq!(
            Affine::parse("-a").unwrap(),
            Affine::new(rat(-1, 1), rat(0, 1))
        );
        assert_eq!(Affine::parse(" 3/2 ").unwrap(), Affine::constant(rat(3, 2)));
        assert_eq!(
            Affine::parse("a/2-1").unwrap(),
            Affine::new(rat(1, 2), rat(-1, 1))
        );
        assert_eq!(
            Affine::parse("3a").unwrap(),
            Affine::new(rat(3, 1), rat(0, 1))
        );
        assert!(Affine::parse("a^2").is_err());
        assert!(Affine::parse("a*a").is_err());
        assert!(Affine::parse("").is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["2*a+1/2", "-3*a+1", "-a", "a", "5*a-3/2", "7/4", "0"] {
            let f = Affine::parse(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(Affine::parse(&f.to_string()).unwrap(), f);
        }
    }
}
