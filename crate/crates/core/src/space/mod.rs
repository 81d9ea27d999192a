//! Simplicial complexes with closed filtrations and their constructors.

pub mod construct;
pub mod cup;
pub mod examples;
pub mod io;
pub mod simplicial;
pub mod stratified;

pub use construct::{collapse, cone, disjoint_union, interval, product, suspension, Collapse};
pub use examples::{example, factors, EXAMPLE_NAMES};
pub use io::{from_input, parse_space, to_output, SpaceInput, SpaceOutput};
pub use simplicial::SimplicialComplex;
pub use stratified::{build_stratified, from_levels, FacePoset, FrontierPair, StratifiedComplex};
