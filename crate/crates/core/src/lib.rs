//! Fractional Groebner basis reductions from Max Not-2 and Max OXR.

pub mod algebra;
pub mod assign;
pub mod encode;
pub mod error;
pub mod groebner;
pub mod instance;
pub mod oracle;
pub mod pipeline;
pub mod solver;
pub mod tailor;

pub use error::{Error, Result};

/// GF(32003), the default coefficient field.
pub type Gf32003 = algebra::Fp<algebra::Const<32003>>;
/// Prime field whose modulus is chosen at run time.
pub type GfRun = algebra::Fp<algebra::RunPrime>;
pub type Poly = algebra::Polynomial<Gf32003>;

/// Exact rationals for probabilities, budgets and bounds.
pub type Rational = num_rational::Ratio<i64>;
