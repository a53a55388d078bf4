//! Exact scalar arithmetic in `v = q^{1/2}`.

pub mod cyclo;
pub mod expr;
pub mod intpoly;
pub mod laurent;
pub mod modp;
pub mod numeric;
pub mod pit;
pub mod radical;
pub mod ratfun;
pub mod squarefree;
pub mod text;

pub use cyclo::CycloScalar;
pub use laurent::{qbracket, LaurentPoly};
pub use numeric::{EvalNumeric, NumericError, NumericValue};
pub use radical::RadicalScalar;
pub use ratfun::{RatFun, RatFunError, RatOp};
pub use squarefree::squarefree_split;
