//! Exact rational expansions in the squared modulus `κ²`: the amplitude
//! series `φ_j`, the composed perturbation series `P_j`, the mode
//! coefficients `ξ_{j,l}(k)`, and the Fourier conditions they induce.

mod condition;
mod diagonal;
mod expand;
mod trig;

pub use condition::{fourier_condition_row, fourier_condition_row_with, ConditionRow, ConditionTerm};
pub use diagonal::xi_diagonal;
pub use expand::{
    compose_mu_expansion, compose_with, expand_action_angle, xi_from, xi_lookup, xi_polynomials,
    ExpansionSeries, XiPolynomial, MAX_ORDER,
};
pub use trig::{rat, rational_string, rational_to, Basis, RationalTrigPoly};
