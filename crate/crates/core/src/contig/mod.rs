//! Four-term contiguity relations of Appell's F1 and the closed-form
//! sextuples built from them.

mod check;
mod derive;
mod table;

use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::RatF;

pub use check::{
    check_case_vanishing, closed_ratio_numeric_check, numeric_four_term_check, specialize_shift_n,
    CaseCertificate, RatioCheck,
};
pub use derive::{
    compose_transfer, derive_contiguity, derive_contiguity_at, derive_contiguity_ordered,
    transfer_matrix, AxisOrder, Frame, TransferMatrix,
};
pub use table::{table1, table1_row, SextupleSpec};

/// Integer shift `(k; l1, l2; m)` applied to `(α; β1, β2; γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct ShiftVec {
    pub k: i64,
    pub l1: i64,
    pub l2: i64,
    pub m: i64,
}

impl ShiftVec {
    pub const fn new(k: i64, l1: i64, l2: i64, m: i64) -> ShiftVec {
        ShiftVec { k, l1, l2, m }
    }

    pub const fn zero() -> ShiftVec {
        ShiftVec::new(0, 0, 0, 0)
    }

    /// `(1; 1, 0; 1)`.
    pub const fn e10() -> ShiftVec {
        ShiftVec::new(1, 1, 0, 1)
    }

    /// `(1; 0, 1; 1)`.
    pub const fn e01() -> ShiftVec {
        ShiftVec::new(1, 0, 1, 1)
    }

    pub fn scaled(&self, n: i64) -> ShiftVec {
        ShiftVec::new(self.k * n, self.l1 * n, self.l2 * n, self.m * n)
    }

    pub fn max_abs(&self) -> i64 {
        [self.k, self.l1, self.l2, self.m]
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap()
    }

    /// Parses `K,L1,L2,M`, optionally wrapped in parentheses.
    pub fn parse(s: &str) -> Result<ShiftVec> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("shift needs four integers K,L1,L2,M, got `{s}`"),
            });
        }
        let mut v = [0i64; 4];
        for (i, p) in parts.iter().enumerate() {
            v[i] = p.parse().map_err(|_| Error::Parse {
                pos: i,
                msg: format!("not an integer: `{p}`"),
            })?;
        }
        Ok(ShiftVec::new(v[0], v[1], v[2], v[3]))
    }
}

impl Add for ShiftVec {
    type Output = ShiftVec;

    fn add(self, o: ShiftVec) -> ShiftVec {
        ShiftVec::new(self.k + o.k, self.l1 + o.l1, self.l2 + o.l2, self.m + o.m)
    }
}

impl fmt::Display for ShiftVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.l1, self.l2, self.m)
    }
}

/// `F1(α+k) = q10·F1(α+e10) + q01·F1(α+e01) + q00·F1(α)`, with coefficients
/// in the variables of `frame`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContigRel {
    pub shift: ShiftVec,
    pub frame: Frame,
    pub q10: RatF,
    pub q01: RatF,
    pub q00: RatF,
}

impl fmt::Display for ContigRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}", self.shift)?;
        writeln!(f, "q10 = {}", self.q10)?;
        writeln!(f, "q01 = {}", self.q01)?;
        write!(f, "q00 = {}", self.q00)
    }
}
