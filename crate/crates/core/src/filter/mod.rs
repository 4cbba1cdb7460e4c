//! Filters over finite index sets, symbolic Fréchet-type filters over ω, and
//! families of filters sharing an index.
//!
//! Subsets of an index set of size `k` are `u64` masks (`k <= MAX_INDEX`).
//! A [`FiniteFilter`] keeps its member family explicitly; the principal core
//! is derived from it and checked against it at construction.

mod family;
pub(crate) mod omega;

pub use family::FilterFamily;
pub use omega::{EventuallyPeriodicSet, OmegaFilter};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{input, internal, precondition, resource, LabError, Result};

/// Subset of an index set, one bit per index position.
pub type IndexMask = u64;

/// Largest index set whose filters may be materialized.
pub const MAX_INDEX: usize = 12;

/// Ordered, distinct, nonempty list of index labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    labels: Vec<String>,
}

impl IndexSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(input("index sets must be nonempty"));
        }
        if !labels.iter().all_unique() {
            return Err(input("index labels must be distinct"));
        }
        if labels.len() > MAX_INDEX {
            return Err(resource(format!(
                "index set of size {} exceeds {MAX_INDEX}",
                labels.len()
            )));
        }
        Ok(IndexSet { labels })
    }

    /// Labels `a, b, c, ...` (then `i26, i27, ...`).
    pub fn standard(k: usize) -> Result<Self> {
        Self::new(
            (0..k)
                .map(|i| {
                    if i < 26 {
                        char::from(b'a' + i as u8).to_string()
                    } else {
                        format!("i{i}")
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full_mask(&self) -> IndexMask {
        (1u64 << self.labels.len()) - 1
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Mask of the given labels.
    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<IndexMask> {
        labels.iter().try_fold(0u64, |acc, l| {
            self.position(l.as_ref())
                .map(|p| acc | 1 << p)
                .ok_or_else(|| input(format!("unknown index label {:?}", l.as_ref())))
        })
    }

    pub fn labels_of(&self, mask: IndexMask) -> Vec<String> {
        self.positions(mask).map(|p| self.labels[p].clone()).collect()
    }

    pub fn positions(&self, mask: IndexMask) -> impl Iterator<Item = usize> {
        (0..self.labels.len()).filter(move |p| mask >> p & 1 == 1)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        IndexSet::new(Vec::<String>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A proper filter over a finite index set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFilter {
    index: IndexSet,
    members: Vec<IndexMask>,
    core: IndexMask,
}

fn supersets(full: IndexMask, core: IndexMask) -> Vec<IndexMask> {
    (0..=full).filter(|s| s & core == core).collect()
}

impl FiniteFilter {
    /// The filter of all supersets of a nonempty `core`.
    pub fn principal(index: IndexSet, core: IndexMask) -> Result<Self> {
        if core == 0 {
            return Err(LabError::ImproperFilter("empty core".into()));
        }
        if core & !index.full_mask() != 0 {
            return Err(input("core mentions indices outside the index set"));
        }
        let members = supersets(index.full_mask(), core);
        Ok(FiniteFilter {
            index,
            members,
            core,
        })
    }

    /// Principal filter from core labels.
    pub fn up<S: AsRef<str>>(index: &IndexSet, core: &[S]) -> Result<Self> {
        Self::principal(index.clone(), index.mask_of(core)?)
    }

    /// Closes `base` under finite intersections and supersets.
    pub fn from_base(index: IndexSet, base: &[IndexMask]) -> Result<Self> {
        if base.is_empty() {
            return Err(input("filter base must be nonempty"));
        }
        let full = index.full_mask();
        if base.iter().any(|b| b & !full != 0) {
            return Err(input("base set mentions indices outside the index set"));
        }
        // Intersection closure first, then upward closure.
        let mut closed: Vec<IndexMask> = base.to_vec();
        closed.sort_unstable();
        closed.dedup();
        loop {
            let mut grew = false;
            for (a, b) in closed.clone().into_iter().tuple_combinations() {
                let c = a & b;
                if !closed.contains(&c) {
                    closed.push(c);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if closed.contains(&0) {
            return Err(LabError::ImproperFilter(
                "some finite intersection of base sets is empty".into(),
            ));
        }
        let members: Vec<IndexMask> = (0..=full)
            .filter(|s| closed.iter().any(|b| b & !s == 0))
            .collect();
        let core = members.iter().fold(full, |acc, m| acc & m);
        if members != supersets(full, core) {
            return Err(internal("filter is not the up-closure of its core"));
        }
        Ok(FiniteFilter {
            index,
            members,
            core,
        })
    }

    /// Validates an explicit member family.
    pub fn from_members(index: IndexSet, members: &[IndexMask]) -> Result<Self> {
        let full = index.full_mask();
        let mut ms: Vec<IndexMask> = members.to_vec();
        ms.sort_unstable();
        ms.dedup();
        if ms.iter().any(|m| m & !full != 0) {
            return Err(input("member mentions indices outside the index set"));
        }
        if !ms.contains(&full) {
            return Err(input("filters must contain the full index set"));
        }
        if ms.contains(&0) {
            return Err(LabError::ImproperFilter("contains the empty set".into()));
        }
        for &m in &ms {
            if (0..=full).any(|s| s & m == m && ms.binary_search(&s).is_err()) {
                return Err(input("member family is not upward closed"));
            }
        }
        for (a, b) in ms.iter().tuple_combinations() {
            if ms.binary_search(&(a & b)).is_err() {
                return Err(input("member family is not closed under intersection"));
            }
        }
        let core = ms.iter().fold(full, |acc, m| acc & m);
        Ok(FiniteFilter {
            index,
            members: ms,
            core,
        })
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn core(&self) -> IndexMask {
        self.core
    }

    pub fn core_size(&self) -> usize {
        self.core.count_ones() as usize
    }

    pub fn members(&self) -> &[IndexMask] {
        &self.members
    }

    /// Membership by lookup in the explicit family.
    pub fn contains(&self, set: IndexMask) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    pub fn is_ultrafilter(&self) -> bool {
        let full = self.index.full_mask();
        let by_complement = (0..=full).all(|a| self.contains(a) || self.contains(full & !a));
        let by_core = self.core.count_ones() == 1;
        assert_eq!(
            by_complement, by_core,
            "ultrafilter characterizations disagree for {self:?}"
        );
        by_core
    }

    /// Splits the index set into two complementary non-members: the least
    /// core element versus everything else.
    pub fn non_ultra_partition(&self) -> Result<(IndexMask, IndexMask)> {
        if self.is_ultrafilter() {
            return Err(precondition("filter is an ultrafilter"));
        }
        let j1 = self.core & self.core.wrapping_neg();
        let j2 = self.index.full_mask() & !j1;
        debug_assert!(!self.contains(j1) && !self.contains(j2));
        Ok((j1, j2))
    }

    /// Whether some `n` distinct members have every `m` of them meeting in
    /// the empty set.
    pub fn is_mn_regular(&self, m: usize, n: usize) -> Result<bool> {
        if m == 0 {
            return Err(input("regularity needs m >= 1"));
        }
        let mut chosen = Vec::with_capacity(n);
        Ok(self.regular_search(m, n, 0, &mut chosen))
    }

    fn regular_search(&self, m: usize, n: usize, start: usize, chosen: &mut Vec<IndexMask>) -> bool {
        if chosen.len() == n {
            return true;
        }
        for i in start..self.members.len() {
            let cand = self.members[i];
            // Only m-subfamilies containing the new member are unchecked.
            let ok = m > chosen.len() + 1
                || chosen
                    .iter()
                    .combinations(m - 1)
                    .all(|sub| sub.into_iter().fold(cand, |acc, s| acc & s) == 0);
            if ok {
                chosen.push(cand);
                if self.regular_search(m, n, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterWire {
    index: IndexSet,
    core: Vec<String>,
}

impl Serialize for FiniteFilter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FilterWire {
            index: self.index.clone(),
            core: self.index.labels_of(self.core),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteFilter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = FilterWire::deserialize(d)?;
        let core = w.index.mask_of(&w.core).map_err(serde::de::Error::custom)?;
        FiniteFilter::principal(w.index, core).map_err(serde::de::Error::custom)
    }
}

/// Every proper filter on `index`, ordered by core mask.
pub fn enumerate_filters(index: &IndexSet, limit: usize) -> Result<Vec<FiniteFilter>> {
    if index.len() > limit {
        return Err(resource(format!(
            "filter enumeration over {} indices exceeds limit {limit}",
            index.len()
        )));
    }
    (1..=index.full_mask())
        .map(|core| FiniteFilter::principal(index.clone(), core))
        .collect()
}

/// The ultrafilters among [`enumerate_filters`].
pub fn enumerate_ultrafilters(index: &IndexSet, limit: usize) -> Result<Vec<FiniteFilter>> {
    Ok(enumerate_filters(index, limit)?
        .into_iter()
        .filter(FiniteFilter::is_ultrafilter)
        .collect())
}
