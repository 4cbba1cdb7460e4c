//! Product theorems, the Comfort preorder and covering compactness, decided
//! over finite catalogues.

mod comfort;
mod cor54;
mod covering;
mod thm21;

pub use comfort::{comfort_leq, comfort_report, ComfortLeq, ComfortReport};
pub use cor54::{cor54_check, Cor54Report};
pub use covering::{covering_compact, CoveringVerdict};
pub use thm21::{
    cor22_check, cor23_check, thm21_check, thm21_check_with, Bounds, ConditionCheck, Cor22Report,
    Cor23Report, FilterChoice, ProductRefutation, Thm21Report, UltrafilterNecessity,
};

use serde::{Deserialize, Serialize};

/// How a condition was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMethod {
    /// Every case the condition quantifies over was examined.
    Exact,
    /// Examined up to the configured bounds only.
    Bounded,
    /// Follows from another condition already decided.
    ViaImplication,
}
