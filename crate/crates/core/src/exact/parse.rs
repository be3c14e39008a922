use num_bigint::BigInt;

use super::poly::Poly;
use super::rat::Rat;
use super::ratf::RatF;
use super::var::Var;
use crate::error::{Error, Result};

/// Reads a rational-function expression such as
/// `(3^8/(2^2*5^5))*(2*a+1/2)*(2*a+3/2)/(a+1/2)^2`.
///
/// Accepts integers, the variables `a b1 b2 c x y n`, `+ - * /`, parentheses
/// and `^` with an integer (possibly negative) exponent.
pub fn parse_ratf(src: &str) -> Result<RatF> {
    let mut p = Reader {
        s: src.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Reader<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatF> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatF> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.checked_div(&d).map_err(|_| Error::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatF> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatF> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            let e: i32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            let e = if neg { -e } else { e };
            return base
                .pow(e)
                .map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn atom(&mut self) -> Result<RatF> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatF::constant(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let v = Var::from_name(name).ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: format!("unknown variable `{name}`"),
                })?;
                Ok(RatF::from_poly(Poly::var(v)))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}
