//! Duality pairings, Künneth comparisons, fibration additivity and
//! intersection numbers.

pub mod fibration;
pub mod intersection;
pub mod kunneth;
pub mod pairing;

pub use fibration::{cylinder, fibration_decomposition, FibrationReport, FibrationRow};
pub use intersection::{intersection_number, pullback, IntersectionReport, IntersectionTerm};
pub use kunneth::{kunneth, resolution, Contribution, KunnethMode, KunnethReport, KunnethRow};
pub use pairing::{duality_pairing, duality_report, stratumwise_duality, CochainModel, DualityReport, PairingMatrix, StratumDuality};
