pub mod analytic;
pub mod blaschke;
pub mod fejer_riesz;
pub mod functions;
pub mod grid;
pub mod modulus;
pub mod outer;
pub mod rational;
pub mod toeplitz;

pub use analytic::AnalyticFn;
pub use blaschke::BlaschkeProduct;
pub use fejer_riesz::{fejer_riesz, SpectralFactor, TrigPoly};
pub use functions::{BoundaryFunction, Constant, GridDensity, Masked, PowerWeight, Product, Reciprocal, Singularity};
pub use grid::{fourier_analyze, riesz_project, CircleGrid, FourierSeries};
pub use modulus::{BoundaryModulus, ModulusFn, ModulusKind};
pub use outer::OuterFunction;
pub use rational::{RationalFn, RationalModulus};
pub use toeplitz::toeplitz_apply;
