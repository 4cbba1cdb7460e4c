//! Limits of sequences of nonempty open sets.

use serde::{Deserialize, Serialize};

use super::{all_sequences, sequence_count, Method, Verdict, Witness};
use crate::error::{input, internal, Result};
use crate::filter::{FilterFamily, FiniteFilter, IndexMask, IndexSet};
use crate::pointset::PointSet;
use crate::space::{FiniteSpace, Topology};

/// An `I`-indexed sequence of nonempty open sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSequence {
    pub index: IndexSet,
    pub values: Vec<Vec<usize>>,
}

impl SetSequence {
    fn sets(&self, space: &FiniteSpace) -> Result<Vec<PointSet>> {
        if self.values.len() != self.index.len() {
            return Err(input("set sequence is not total on its index set"));
        }
        self.values
            .iter()
            .map(|v| {
                let s = PointSet::from_points(space.len(), v)?;
                if s.is_empty() {
                    return Err(input("set sequences take nonempty values"));
                }
                if !space.is_open(&s) {
                    return Err(input(format!("{v:?} is not open")));
                }
                Ok(s)
            })
            .collect()
    }
}

fn meets(sets: &[PointSet], u: &PointSet) -> IndexMask {
    sets.iter()
        .enumerate()
        .filter(|(_, y)| y.intersects(u))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn set_limit_checked(space: &FiniteSpace, sets: &[PointSet], filter: &FiniteFilter) -> Result<PointSet> {
    let n = space.len();
    let mut def = PointSet::empty(n);
    let mut short = PointSet::empty(n);
    for x in 0..n {
        if space.nbhd_base(x).all(|u| filter.contains(meets(sets, u))) {
            def.insert(x);
        }
        let core = filter.core();
        if meets(sets, space.minimal_open(x)) & core == core {
            short.insert(x);
        }
    }
    if def != short {
        return Err(internal(format!(
            "set-limit mismatch: definitional {def:?}, smallest-neighbourhood {short:?}"
        )));
    }
    Ok(def)
}

/// Points `x` such that `{ i : Y_i ∩ U ≠ ∅ } ∈ F` for every open `U ∋ x`.
pub fn set_limit_set(space: &FiniteSpace, seq: &SetSequence, filter: &FiniteFilter) -> Result<PointSet> {
    if &seq.index != filter.index() {
        return Err(input("sequence and filter use different index sets"));
    }
    let sets = seq.sets(space)?;
    set_limit_checked(space, &sets, filter)
}

/// Every sequence of nonempty open sets has an `F`-limit point for some
/// `F ∈ P`.
pub fn is_p_pseudocompact(space: &FiniteSpace, family: &FilterFamily) -> Result<Verdict> {
    let (index, filters) = family.as_finite()?;
    let opens: Vec<&PointSet> = space.opens().iter().filter(|o| !o.is_empty()).collect();
    sequence_count(opens.len(), index.len())?;
    let mut checked = 0;
    for choice in all_sequences(opens.len(), index.len()) {
        checked += 1;
        let sets: Vec<PointSet> = choice.iter().map(|&c| opens[c].clone()).collect();
        let mut converges = false;
        for f in filters {
            if !set_limit_checked(space, &sets, f)?.is_empty() {
                converges = true;
                break;
            }
        }
        if !converges {
            return Ok(Verdict {
                value: false,
                witness: Some(Witness::SetSequence {
                    values: sets.iter().map(PointSet::to_vec).collect(),
                }),
                method: Method::Definitional,
                checked,
            });
        }
    }
    Ok(Verdict {
        value: true,
        witness: None,
        method: Method::Definitional,
        checked,
    })
}
