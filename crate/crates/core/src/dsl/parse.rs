use num_bigint::BigInt;
use num_traits::Zero;

use super::ClosedExpr;
use crate::error::{Error, Result};
use crate::exact::{Affine, Rat};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn keyword(&mut self, w: &str) -> bool {
        self.skip_ws();
        let end = self.pos + w.len();
        if self.s.len() >= end && &self.s[self.pos..end] == w.as_bytes() {
            let next = self.s.get(end).copied();
            if !next.is_some_and(|c| c.is_ascii_alphanumeric()) {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    /// Text up to the matching close parenthesis; the opening one is consumed.
    fn balanced(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        let mut depth = 1;
        while self.pos < self.s.len() {
            match self.s[self.pos] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                        self.pos += 1;
                        return Ok((start, t));
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        err(start, "unclosed '('")
    }

    fn affine_arg(&mut self) -> Result<Affine> {
        let (start, text) = self.balanced()?;
        Affine::parse(text).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: start + pos,
                msg: format!("argument `{text}` is not affine in a: {msg}"),
            },
            e => e,
        })
    }

    fn expr(&mut self) -> Result<ClosedExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = ClosedExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = ClosedExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ClosedExpr> {
        let mut lhs = self.unary(true)?;
        loop {
            if self.eat(b'*') {
                lhs = ClosedExpr::Mul(Box::new(lhs), Box::new(self.unary(true)?));
            } else if self.eat(b'/') {
                // `x/3/5` is `(x/3)/5`, so no fraction literal right after '/'.
                lhs = ClosedExpr::Div(Box::new(lhs), Box::new(self.unary(false)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self, frac: bool) -> Result<ClosedExpr> {
        if self.eat(b'-') {
            return Ok(ClosedExpr::Neg(Box::new(self.unary(frac)?)));
        }
        self.factor(frac)
    }

    fn factor(&mut self, frac: bool) -> Result<ClosedExpr> {
        let base = self.base(frac)?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp = if self.eat(b'(') {
            self.affine_arg()?
        } else {
            let p = self.pos;
            match self.integer() {
                Some(n) => Affine::constant(Rat::from_integer(n)),
                None => return err(p, "exponent must be an integer or a parenthesized affine form"),
            }
        };
        Ok(ClosedExpr::Pow(Box::new(base), exp))
    }

    fn base(&mut self, frac: bool) -> Result<ClosedExpr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        if let Some(n) = self.integer() {
            // `p/q` is one literal unless it is the base of a power.
            let save = self.pos;
            if frac && self.eat(b'/') {
                if let Some(d) = self.integer() {
                    if self.peek() != Some(b'^') {
                        if d.is_zero() {
                            return err(save, "zero denominator");
                        }
                        return Ok(ClosedExpr::Rat(Rat::new(n, d)));
                    }
                }
            }
            self.pos = save;
            return Ok(ClosedExpr::Rat(Rat::from_integer(n)));
        }
        if self.eat(b'(') {
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if self.keyword("pi") {
            return Ok(ClosedExpr::Pi);
        }
        if self.keyword("a") {
            return Ok(ClosedExpr::A);
        }
        if self.keyword("sqrt") {
            self.expect(b'(')?;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(ClosedExpr::Sqrt(Box::new(e)));
        }
        if self.keyword("Gamma") {
            self.expect(b'(')?;
            return Ok(ClosedExpr::Gamma(self.affine_arg()?));
        }
        if self.keyword("cos") {
            self.expect(b'(')?;
            if !self.keyword("pi") {
                return err(self.pos, "cos takes an argument of the form pi*affine");
            }
            self.expect(b'*')?;
            return Ok(ClosedExpr::CosPi(self.affine_arg()?));
        }
        match self.s.get(start) {
            None => err(start, "unexpected end of input"),
            Some(&c) => err(start, format!("unexpected '{}'", c as char)),
        }
    }
}

/// Parses a closed form in the symbol `a`.
pub fn parse_expr(text: &str) -> Result<ClosedExpr> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn literals_and_structure() {
        assert_eq!(parse_expr("9/5").unwrap(), ClosedExpr::Rat(rat(9, 5)));
        assert_eq!(
            parse_expr("2/3^3").unwrap(),
            ClosedExpr::Div(
                Box::new(ClosedExpr::Rat(rat(2, 1))),
                Box::new(ClosedExpr::Pow(
                    Box::new(ClosedExpr::Rat(rat(3, 1))),
                    Affine::constant(rat(3, 1))
                ))
            )
        );
        let e = parse_expr("a/3/5").unwrap();
        assert_eq!(e.to_string(), "a/3/5");
        assert!(matches!(
            parse_expr("-2^6/5^3").unwrap(),
            ClosedExpr::Div(l, _) if matches!(*l, ClosedExpr::Neg(_))
        ));
    }

    #[test]
    fn table_entry_parses() {
        let e = parse_expr(
            "3^(8*a)/(2^(2*a)*5^(5*a)) * sqrt(pi) * Gamma(2*a+1/2)/Gamma(a+1/2)^2",
        )
        .unwrap();
        assert!(e.depends_on_a());
        assert_eq!(
            e.to_string(),
            "3^(8*a)/(2^(2*a)*5^(5*a))*sqrt(pi)*Gamma(2*a+1/2)/Gamma(a+1/2)^2"
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("Gamma(a^2)") {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("not affine"), "{msg}"),
            other => panic!("{other:?}"),
        }
        match parse_expr("1+*2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("cos(a)").is_err());
        assert!(parse_expr("2^a").is_err());
        assert!(parse_expr("sqrt(2").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("3/0*2").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("pie").is_err());
    }
}
