use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number; numerator and denominator are kept coprime with a
/// positive denominator.
pub type Rat = BigRational;

/// Shorthand for `p/q` with machine-sized parts.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: `{s}`"),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("invalid rational numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("invalid rational denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// Prints `p/q`, or `p` when the denominator is one.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_nonpositive_integer(r: &Rat) -> bool {
    r.is_integer() && !r.is_positive()
}

/// Longest prefix of the form `digits` or `digits/digits`; returns the value
/// and the number of bytes consumed (0 if none).
pub(crate) fn parse_rat_prefix(s: &[u8]) -> (Rat, usize) {
    let digits = |from: usize| s[from..].iter().take_while(|b| b.is_ascii_digit()).count();
    let n = digits(0);
    if n == 0 {
        return (Rat::zero(), 0);
    }
    let num: BigInt = std::str::from_utf8(&s[..n]).unwrap().parse().unwrap();
    if n < s.len() && s[n] == b'/' {
        let d = digits(n + 1);
        if d > 0 {
            let den: BigInt = std::str::from_utf8(&s[n + 1..n + 1 + d])
                .unwrap()
                .parse()
                .unwrap();
            if !den.is_zero() {
                return (Rat::new(num, den), n + 1 + d);
            }
        }
    }
    (Rat::from_integer(num), n)
}
