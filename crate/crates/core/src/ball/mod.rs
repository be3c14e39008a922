//! Midpoint-radius real arithmetic with directed error bounds.

pub mod ctx;
pub mod elementary;
pub mod gamma;
pub mod mag;
pub mod real;

pub use ctx::{refine, PrecCtx};
pub use elementary::{cos_pi_rat, exp, ln2, log, pi, pow, pow_rat, pow_real_rat, sin_pi_rat, sqrt};
pub use gamma::{
    digamma_rat, gamma, gamma_rat, gamma_real, pochhammer_num, pochhammer_rat, pochhammer_signed_rat,
};
pub use mag::Mag;
pub use real::Real;
