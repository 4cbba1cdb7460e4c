//! Limit points of indexed sequences and the compactness predicates built
//! on them.
//!
//! Every limit set is computed twice: once from the definition (scan a
//! neighbourhood base at each point and test the index set for filter
//! membership) and once through the principal core, as the intersection of
//! the closures of the core-indexed values. A mismatch is reported as an
//! internal error rather than silently resolved.

mod omega;
mod pseudo;

pub use omega::{
    every_sequence_converges, is_sequentially_compact, omega_limit_set, sequential_witness,
    OmegaSequence,
};
pub use pseudo::{is_p_pseudocompact, set_limit_set, SetSequence};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{input, internal, resource, Result};
use crate::filter::{EventuallyPeriodicSet, FilterFamily, FiniteFilter, IndexMask, IndexSet};
use crate::pointset::PointSet;
use crate::space::Topology;

/// Upper bound on the number of sequences a brute-force scan may visit.
pub const MAX_SEQUENCES: u64 = 1 << 22;

/// An `I`-indexed sequence of points; `values[p]` is the value at the index
/// in position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexedSequence {
    pub index: IndexSet,
    pub values: Vec<usize>,
}

impl IndexedSequence {
    pub fn new(index: IndexSet, values: Vec<usize>) -> Result<Self> {
        if values.len() != index.len() {
            return Err(input(format!(
                "sequence has {} values for {} indices",
                values.len(),
                index.len()
            )));
        }
        Ok(IndexedSequence { index, values })
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "definitional")]
    Definitional,
    #[serde(rename = "shortcut")]
    Shortcut,
    /// Quantification over ω-sequences restricted to eventually periodic
    /// index sets.
    #[serde(rename = "EP-restricted")]
    EpRestricted,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Sequence { values: Vec<usize> },
    SetSequence { values: Vec<Vec<usize>> },
    OmegaSequence { prefix: Vec<usize>, cycle: Vec<usize> },
    Point { point: usize },
    Subsequence { z: EventuallyPeriodicSet, limit: usize },
}

/// Decision plus witness. For a failed compactness predicate the witness is
/// a sequence with empty limit set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: bool,
    pub witness: Option<Witness>,
    pub method: Method,
    pub checked: u64,
}

pub(crate) fn values_in_range<T: Topology + ?Sized>(space: &T, values: &[usize]) -> Result<()> {
    match values.iter().find(|&&v| v >= space.point_count()) {
        Some(v) => Err(input(format!(
            "sequence value {v} outside a {}-point space",
            space.point_count()
        ))),
        None => Ok(()),
    }
}

/// `{ i : x_i ∈ U }` as an index mask.
pub(crate) fn hits(values: &[usize], u: &PointSet) -> IndexMask {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| u.contains(v))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Points `x` with `{ i : x_i ∈ U } ∈ F` for every basic open `U ∋ x`.
pub fn limit_set_definitional<T: Topology + ?Sized>(
    space: &T,
    values: &[usize],
    filter: &FiniteFilter,
) -> PointSet {
    let n = space.point_count();
    let mut out = PointSet::empty(n);
    for x in 0..n {
        if space.nbhd_base(x).all(|u| filter.contains(hits(values, u))) {
            out.insert(x);
        }
    }
    out
}

/// Intersection of the closures of the values indexed by `core`.
pub fn limit_set_shortcut<T: Topology + ?Sized>(
    space: &T,
    values: &[usize],
    core: IndexMask,
) -> PointSet {
    let mut acc = space.full();
    for (i, &v) in values.iter().enumerate() {
        if core >> i & 1 == 1 {
            acc.intersect_with(space.point_closure(v));
        }
    }
    acc
}

fn limit_set_checked<T: Topology + ?Sized>(
    space: &T,
    values: &[usize],
    filter: &FiniteFilter,
) -> Result<PointSet> {
    let def = limit_set_definitional(space, values, filter);
    let short = limit_set_shortcut(space, values, filter.core());
    if def != short {
        return Err(internal(format!(
            "limit set mismatch for {values:?}: definitional {def:?}, shortcut {short:?}"
        )));
    }
    Ok(def)
}

/// The `F`-limit points of `seq`.
pub fn limit_set<T: Topology + ?Sized>(
    space: &T,
    seq: &IndexedSequence,
    filter: &FiniteFilter,
) -> Result<PointSet> {
    if &seq.index != filter.index() {
        return Err(input("sequence and filter use different index sets"));
    }
    if seq.values.len() != seq.index.len() {
        return Err(input("sequence is not total on its index set"));
    }
    values_in_range(space, &seq.values)?;
    limit_set_checked(space, &seq.values, filter)
}

/// Number of `indices`-sequences over `points` points, or a resource error
/// above [`MAX_SEQUENCES`].
pub fn sequence_count(points: usize, indices: usize) -> Result<u64> {
    (points as u64)
        .checked_pow(indices as u32)
        .filter(|&c| c <= MAX_SEQUENCES)
        .ok_or_else(|| {
            resource(format!(
                "{points}^{indices} sequences exceed the brute-force limit {MAX_SEQUENCES}"
            ))
        })
}

/// All sequences `0..k -> 0..n`, last position varying fastest.
pub fn all_sequences(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..k).map(move |_| 0..n).multi_cartesian_product()
}

/// Every sequence over `filter`'s index has an `F`-limit point.
pub fn is_f_compact<T: Topology + ?Sized>(space: &T, filter: &FiniteFilter) -> Result<Verdict> {
    is_p_compact_over(space, std::slice::from_ref(filter))
}

/// Sequencewise `P`-compactness: every sequence has an `F`-limit point for
/// some `F ∈ P`.
pub fn is_p_compact<T: Topology + ?Sized>(space: &T, family: &FilterFamily) -> Result<Verdict> {
    let (_, filters) = family.as_finite()?;
    is_p_compact_over(space, filters)
}

fn is_p_compact_over<T: Topology + ?Sized>(space: &T, filters: &[FiniteFilter]) -> Result<Verdict> {
    let k = filters[0].index().len();
    sequence_count(space.point_count(), k)?;
    let mut checked = 0;
    for values in all_sequences(space.point_count(), k) {
        checked += 1;
        let mut converges = false;
        for f in filters {
            if !limit_set_checked(space, &values, f)?.is_empty() {
                converges = true;
                break;
            }
        }
        if !converges {
            return Ok(Verdict {
                value: false,
                witness: Some(Witness::Sequence { values }),
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
