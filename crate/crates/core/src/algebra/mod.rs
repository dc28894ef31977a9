//! Exact coefficient arithmetic and sparse polynomials under lex orders.

pub mod division;
pub mod field;
pub mod monomial;
pub mod order;
pub mod polynomial;
pub mod text;

pub use division::normal_form;
pub use field::{Const, Field, Fp, Modulus, RunPrime, DEFAULT_PRIME};
pub use monomial::Monomial;
pub use order::LexOrder;
pub use polynomial::Polynomial;
