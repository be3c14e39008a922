//! Laplace-method study of the integral behind the value `2F1(1/4,1/2;3/4;80/81) = 9/5`.

mod example2;
mod phase;

pub use example2::{
    a_factor, asymptotic_forms_check, b_quadrature, laplace_sequence, richardson_extrapolate,
    term, write_h_csv, write_table_csv, AsymptoticRow, Extrapolation, LimitSequence, TermRoute,
    N_MAX_DEFAULT,
};
pub use phase::{critical_points, CriticalPoint, PhaseFn, UPoly};
