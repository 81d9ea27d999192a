//! Stratified spaces, cellular sheaves and intersection cohomology with
//! exact rational and integral arithmetic.

pub mod duality;
pub mod error;
pub mod harness;
pub mod ic;
pub mod linalg;
pub mod sheaf;
pub mod space;

pub use error::{Error, Result};
pub use ic::{deligne_construction, refined_ic, stratified_de_rham, witt_check, ICResult, Mezzoperversity, Perversity};
pub use linalg::{CochainComplex, ExactMatrix, FGAbelianGroup, Rat, Subspace};
pub use sheaf::SheafComplex;
pub use space::{FacePoset, SimplicialComplex, StratifiedComplex};
