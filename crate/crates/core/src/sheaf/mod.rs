//! Complexes of cellular sheaves on face posets.

pub mod complex;
pub mod ops;
pub mod pushforward;
pub mod tensor;

pub use complex::SheafComplex;
pub use ops::{
    constant_on_open, constant_sheaf, default_kept, dump, global_sections, sheaf_cohomology, sheaf_cohomology_dims, skyscraper, truncate,
    truncate_on, Hypercohomology, SectionSpace, SheafDump,
};
pub use pushforward::{bar_stalk, derived_pushforward, BarStalk};
pub use tensor::{external_tensor, graded_sections_functor, product_projections, total_sections, IntegralConstantSheaf};
