use serde::{Deserialize, Serialize};

use super::{FiniteFilter, IndexSet, OmegaFilter};
use crate::error::{input, Result};

/// A nonempty family of filters over one common index set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FilterFamily {
    Finite {
        index: IndexSet,
        filters: Vec<FiniteFilter>,
    },
    Omega {
        filters: Vec<OmegaFilter>,
    },
}

impl FilterFamily {
    pub fn finite(filters: Vec<FiniteFilter>) -> Result<Self> {
        let first = filters
            .first()
            .ok_or_else(|| input("filter families must be nonempty"))?;
        let index = first.index().clone();
        if filters.iter().any(|f| f.index() != &index) {
            return Err(input("all filters in a family must share one index set"));
        }
        Ok(FilterFamily::Finite { index, filters })
    }

    pub fn omega(filters: Vec<OmegaFilter>) -> Result<Self> {
        if filters.is_empty() {
            return Err(input("filter families must be nonempty"));
        }
        Ok(FilterFamily::Omega { filters })
    }

    pub fn len(&self) -> usize {
        match self {
            FilterFamily::Finite { filters, .. } => filters.len(),
            FilterFamily::Omega { filters } => filters.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index set and filters of a finite-index family.
    pub fn as_finite(&self) -> Result<(&IndexSet, &[FiniteFilter])> {
        match self {
            FilterFamily::Finite { index, filters } => Ok((index, filters)),
            FilterFamily::Omega { .. } => Err(input("expected a finite-index filter family")),
        }
    }

    /// Re-checks the invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        match self {
            FilterFamily::Finite { index, filters } => {
                if filters.is_empty() {
                    return Err(input("filter families must be nonempty"));
                }
                if filters.iter().any(|f| f.index() != index) {
                    return Err(input("all filters in a family must share one index set"));
                }
                Ok(())
            }
            FilterFamily::Omega { filters } if filters.is_empty() => {
                Err(input("filter families must be nonempty"))
            }
            FilterFamily::Omega { .. } => Ok(()),
        }
    }
}
