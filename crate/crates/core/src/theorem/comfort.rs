//! The Comfort preorder relative to a catalogue: `F ≤ G` when every
//! `G`-compact member is `F`-compact.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::is_f_compact;
use crate::error::{input, Result};
use crate::filter::FiniteFilter;
use crate::space::SpaceCatalogue;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComfortLeq {
    pub holds: bool,
    /// Catalogue index of a member that is `G`-compact but not `F`-compact.
    pub witness: Option<usize>,
}

fn compactness_row(filter: &FiniteFilter, k: &SpaceCatalogue) -> Result<Vec<bool>> {
    k.spaces
        .par_iter()
        .map(|x| Ok(is_f_compact(x, filter)?.value))
        .collect()
}

pub fn comfort_leq(f: &FiniteFilter, g: &FiniteFilter, k: &SpaceCatalogue) -> Result<ComfortLeq> {
    let fr = compactness_row(f, k)?;
    let gr = compactness_row(g, k)?;
    let witness = (0..fr.len()).find(|&i| gr[i] && !fr[i]);
    Ok(ComfortLeq {
        holds: witness.is_none(),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComfortReport {
    pub filters: Vec<FiniteFilter>,
    pub catalogue: SpaceCatalogue,
    /// `relation[f][g]` is `filters[f] ≤ filters[g]`.
    pub relation: Vec<Vec<bool>>,
    /// Equivalence classes as filter positions, ordered by first member.
    pub classes: Vec<Vec<usize>>,
    /// Position in `classes` of the least class, if there is one.
    pub minimum: Option<usize>,
    /// Pairs `(f, g)` where `relation[f][g]` differs from
    /// `|core f| <= |core g|`.
    pub core_size_mismatches: Vec<(usize, usize)>,
}

impl ComfortReport {
    pub fn matches_core_size(&self) -> bool {
        self.core_size_mismatches.is_empty()
    }
}

pub fn comfort_report(filters: &[FiniteFilter], k: &SpaceCatalogue) -> Result<ComfortReport> {
    if filters.is_empty() {
        return Err(input("comfort report needs at least one filter"));
    }
    let rows = filters
        .iter()
        .map(|f| compactness_row(f, k))
        .collect::<Result<Vec<_>>>()?;
    let m = filters.len();
    let relation: Vec<Vec<bool>> = (0..m)
        .map(|f| {
            (0..m)
                .map(|g| rows[g].iter().zip(&rows[f]).all(|(&gc, &fc)| !gc || fc))
                .collect()
        })
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for f in 0..m {
        match classes.iter_mut().find(|c| relation[c[0]][f] && relation[f][c[0]]) {
            Some(c) => c.push(f),
            None => classes.push(vec![f]),
        }
    }
    let minimum = classes
        .iter()
        .position(|c| (0..m).all(|g| relation[c[0]][g]));
    let core_size_mismatches = (0..m)
        .flat_map(|f| (0..m).map(move |g| (f, g)))
        .filter(|&(f, g)| relation[f][g] != (filters[f].core_size() <= filters[g].core_size()))
        .collect();
    Ok(ComfortReport {
        filters: filters.to_vec(),
        catalogue: k.clone(),
        relation,
        classes,
        minimum,
        core_size_mismatches,
    })
}
