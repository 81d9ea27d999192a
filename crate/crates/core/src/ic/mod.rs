//! Truncation ladders: Deligne sheaves, the stratified de Rham complex and
//! mezzoperversity refinements.

pub mod deligne;
pub mod derham;
pub mod mezzo;
pub mod perversity;
pub mod witt;

pub use deligne::{
    deligne_construction, perversity_cutoffs, stratum_dimension_cutoffs, support_certificate, verify_candidate, verify_support_conditions,
    ICResult, SupportCertificate, SupportRow, SupportViolation,
};
pub use derham::{
    mirrored_row, skeleton_space, stratified_de_rham, stratum_closure, stratum_cohomology, stratumwise_table, DeRhamResult, StratumRow,
    StratumwiseTable,
};
pub use mezzo::{
    certify, dual_mezzoperversity, lagrangian_subspaces, link_form, local_contribution, orthogonal_complement, parse_mezzo, radical,
    refined_ic, LagrangianCertificate, MezzoInput, MezzoSite, Mezzoperversity, SiteLocation,
};
pub use perversity::{Perversity, PerversityKind};
pub use witt::{stratum_components, stratum_links, transverse_link, witt_check, StratumLink, WittReport, WittRow};
