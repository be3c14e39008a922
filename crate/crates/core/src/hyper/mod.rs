//! Rigorous evaluation of Gauss 2F1 and Appell F1.

mod f1;
mod gauss;
mod quad;
mod series;

use std::fmt;

use serde::Serialize;

use crate::ball::Real;
use crate::exact::{rat_to_string, Rat};

pub use f1::{
    eval_f1, eval_f1_double_series, eval_f1_integral, eval_f1_terminating, f1_reduce_beta_zero,
    F1Method,
};
pub use gauss::{
    eval_2f1_connection, eval_2f1_log_connection, gauss_sum, goursat45_transform, Goursat45};
pub use quad::{integrate_product, Factor};
pub use series::{eval_2f1, eval_2f1_series, hyper_sum, terminating_2f1_exact};

/// Parameters `(a, b; c)` of a Gauss series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params2F1 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Params2F1 {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Params2F1 {
        Params2F1 { a, b, c }
    }
}

impl fmt::Display for Params2F1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}; {})",
            rat_to_string(&self.a),
            rat_to_string(&self.b),
            rat_to_string(&self.c)
        )
    }
}

/// Parameters `(α; β1, β2; γ)` of Appell's F1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamsF1 {
    pub alpha: Rat,
    pub beta1: Rat,
    pub beta2: Rat,
    pub gamma: Rat,
}

impl ParamsF1 {
    pub fn new(alpha: Rat, beta1: Rat, beta2: Rat, gamma: Rat) -> ParamsF1 {
        ParamsF1 {
            alpha,
            beta1,
            beta2,
            gamma,
        }
    }

    /// `(α; β2, β1; γ)`, to be paired with swapped arguments.
    pub fn swapped(&self) -> ParamsF1 {
        ParamsF1::new(
            self.alpha.clone(),
            self.beta2.clone(),
            self.beta1.clone(),
            self.gamma.clone(),
        )
    }
}

impl fmt::Display for ParamsF1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {}, {}; {})",
            rat_to_string(&self.alpha),
            rat_to_string(&self.beta1),
            rat_to_string(&self.beta2),
            rat_to_string(&self.gamma)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    DoubleSeries,
    Terminating,
    Integral,
    Gauss,
    Connection,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::DoubleSeries => "double_series",
            Method::Terminating => "terminating",
            Method::Integral => "integral",
            Method::Gauss => "gauss",
            Method::Connection => "connection",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A certified value with the evaluation route that produced it.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Real,
    pub terms_used: u64,
    pub method: Method,
}
