//! The pair `(a, b)` and the space `H(b)`.

pub mod clark;
pub mod norm;
pub mod pair;
pub mod symbol;
pub mod taylor;

pub use clark::{clark_density, rational_falpha_decompose, ClarkDensity, FAlphaSplit};
pub use norm::{
    hb_inner, hb_norm, kernel_eval, kernel_norm_closed_form, CauchyKernel, Combination, HardyVector, HbKernel, HbNorm,
    KernelPoint, NormConfig, Polynomial, SeriesFn,
};
pub use pair::{classify_extremeness, pythagorean_mate, Extremeness, ExtremenessReport, MateConfig, PythagoreanPair};
pub use symbol::{ClosedForm, SymbolB, SymbolForm, SymbolSpec};
pub use taylor::{inverse_gap_integrals, monomial_norm, monomial_norm_from, taylor_b_over_a, BOverA, H2Verdict};
