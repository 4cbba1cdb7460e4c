//! Deciding sequencewise compactness of products without listing their
//! sequences.
//!
//! The profile of a sequence `(x_i)` is the set of nonempty `S ⊆ I` with
//! `⋂_{i∈S} cl{x_i} ≠ ∅`, stored as a bitmask indexed by `S`. With principal
//! filters, `x` has an `F`-limit point exactly when `core F` is in its
//! profile. Closures in a product are products of closures, so the profile
//! of a product sequence is the AND of the profiles of its projections, and
//! the profiles realised in a product are exactly the ANDs of profiles
//! realised in the factors. Only the ⊆-minimal profiles matter for
//! compactness and they are closed under this product, so a [`ProfileSet`]
//! keeps just those.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::{ProductMode, ProductSpace, MAX_PRODUCT_POINTS};
use crate::convergence::{all_sequences, sequence_count};
use crate::error::{input, internal, Result};
use crate::filter::FiniteFilter;
use crate::space::{canonical_encoding, FiniteSpace, Topology};

/// Profiles are `u64` masks over subsets of `I`, so `|I| <= 6`.
pub const MAX_PROFILE_INDEX: usize = 6;

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_PROFILE_INDEX {
        return Err(input(format!(
            "profiles need 1 <= |I| <= {MAX_PROFILE_INDEX}, got {k}"
        )));
    }
    Ok(())
}

pub fn sequence_profile<T: Topology + ?Sized>(space: &T, values: &[usize]) -> u64 {
    let k = values.len();
    let mut meets = vec![space.full(); 1 << k];
    let mut out = 0u64;
    for s in 1usize..1 << k {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        meets[s] = meets[rest].intersection(space.point_closure(values[low]));
        if !meets[s].is_empty() {
            out |= 1 << s;
        }
    }
    out
}

/// Bit `S` set iff some filter in the list has core `S`.
pub fn cores_mask(filters: &[FiniteFilter]) -> u64 {
    filters.iter().fold(0, |acc, f| acc | 1 << f.core())
}

/// The ⊆-minimal profiles realised by sequences of some space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProfileSet {
    pub k: usize,
    pub minimal: Vec<u64>,
}

fn minimize(mut all: Vec<u64>) -> Vec<u64> {
    all.sort_by_key(|p| (p.count_ones(), *p));
    all.dedup();
    let mut keep: Vec<u64> = Vec::new();
    for p in all {
        if !keep.iter().any(|&q| q & p == q) {
            keep.push(p);
        }
    }
    keep.sort_unstable();
    keep
}

impl ProfileSet {
    /// Profiles of the product of two spaces.
    pub fn meet(&self, other: &Self) -> Self {
        let all = self
            .minimal
            .iter()
            .flat_map(|&a| other.minimal.iter().map(move |&b| a & b))
            .collect();
        ProfileSet {
            k: self.k,
            minimal: minimize(all),
        }
    }

    /// A profile containing no core, if one exists; `None` means every
    /// sequence converges under some filter whose core is in `cores`.
    pub fn refuting(&self, cores: u64) -> Option<u64> {
        self.minimal.iter().copied().find(|&p| p & cores == 0)
    }
}

/// Profiles of `space` by scanning all of its `|I|`-sequences.
pub fn space_profiles<T: Topology + ?Sized>(space: &T, k: usize) -> Result<ProfileSet> {
    check_k(k)?;
    sequence_count(space.point_count(), k)?;
    let all = all_sequences(space.point_count(), k)
        .map(|v| sequence_profile(space, &v))
        .collect();
    Ok(ProfileSet {
        k,
        minimal: minimize(all),
    })
}

/// First sequence realising each minimal profile.
fn representatives(space: &FiniteSpace, k: usize) -> Result<BTreeMap<u64, Vec<usize>>> {
    sequence_count(space.len(), k)?;
    let mut first: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for v in all_sequences(space.len(), k) {
        first.entry(sequence_profile(space, &v)).or_insert(v);
    }
    let minimal = minimize(first.keys().copied().collect());
    Ok(minimal.into_iter().map(|p| (p, first[&p].clone())).collect())
}

/// A product sequence in `∏ factors` that converges under no filter with
/// core in `cores`, as one `|I|`-sequence per factor. `None` if there is
/// none.
pub fn refuting_sequence(
    factors: &[FiniteSpace],
    k: usize,
    cores: u64,
) -> Result<Option<Vec<Vec<usize>>>> {
    check_k(k)?;
    let reps = factors
        .iter()
        .map(|f| representatives(f, k))
        .collect::<Result<Vec<_>>>()?;
    let full = (1u64 << (1 << k)) - 2;
    let mut chosen = Vec::with_capacity(factors.len());
    if search(&reps, 0, full, cores, &mut chosen) {
        Ok(Some(chosen.into_iter().cloned().collect()))
    } else {
        Ok(None)
    }
}

fn search<'a>(
    reps: &'a [BTreeMap<u64, Vec<usize>>],
    j: usize,
    acc: u64,
    cores: u64,
    chosen: &mut Vec<&'a Vec<usize>>,
) -> bool {
    if j == reps.len() {
        return acc & cores == 0;
    }
    for (p, v) in &reps[j] {
        chosen.push(v);
        if search(reps, j + 1, acc & p, cores, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Memoized profile sets of products of a fixed index size, keyed by the
/// multiset of homeomorphism classes of the factors.
///
/// Whenever a product is small enough, its profile set is also computed by
/// scanning its sequences, and a disagreement is an internal error.
pub struct ProfileOracle {
    k: usize,
    cross_check_limit: u64,
    ids: RwLock<HashMap<FiniteSpace, usize>>,
    spaces: RwLock<Vec<FiniteSpace>>,
    cache: RwLock<HashMap<Vec<usize>, Arc<ProfileSet>>>,
}

impl ProfileOracle {
    /// `cross_check_limit` bounds the number of sequences scanned per
    /// product for the brute-force comparison.
    pub fn new(k: usize, cross_check_limit: u64) -> Result<Self> {
        check_k(k)?;
        Ok(ProfileOracle {
            k,
            cross_check_limit,
            ids: RwLock::default(),
            spaces: RwLock::default(),
            cache: RwLock::default(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn representative(space: &FiniteSpace) -> Result<FiniteSpace> {
        if space.len() <= 6 {
            FiniteSpace::from_encoding(space.len(), canonical_encoding(space)?)
        } else {
            Ok(space.clone())
        }
    }

    /// Identifier of the homeomorphism class of `space`.
    pub fn intern(&self, space: &FiniteSpace) -> Result<usize> {
        let rep = Self::representative(space)?;
        if let Some(&id) = self.ids.read().unwrap().get(&rep) {
            return Ok(id);
        }
        let mut ids = self.ids.write().unwrap();
        let mut spaces = self.spaces.write().unwrap();
        let id = *ids.entry(rep.clone()).or_insert_with(|| {
            spaces.push(rep);
            spaces.len() - 1
        });
        Ok(id)
    }

    /// Profile set of the product of the interned factors `ids`.
    pub fn profiles(&self, ids: &[usize]) -> Result<Arc<ProfileSet>> {
        if ids.is_empty() {
            return Err(input("a product needs at least one factor"));
        }
        let mut key = ids.to_vec();
        key.sort_unstable();
        if let Some(p) = self.cache.read().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let factors: Vec<FiniteSpace> = {
            let spaces = self.spaces.read().unwrap();
            key.iter().map(|&i| spaces[i].clone()).collect()
        };
        let set = if key.len() == 1 {
            space_profiles(&factors[0], self.k)?
        } else {
            let head = self.profiles(&key[..key.len() - 1])?;
            let last = self.profiles(&key[key.len() - 1..])?;
            head.meet(&last)
        };
        self.cross_check(&factors, &set)?;
        let set = Arc::new(set);
        self.cache.write().unwrap().insert(key, set.clone());
        Ok(set)
    }

    fn cross_check(&self, factors: &[FiniteSpace], set: &ProfileSet) -> Result<()> {
        if factors.len() < 2 {
            return Ok(());
        }
        let points = factors.iter().try_fold(1u64, |acc, f| acc.checked_mul(f.len() as u64));
        let within = points
            .filter(|&p| p <= MAX_PRODUCT_POINTS as u64)
            .and_then(|p| p.checked_pow(self.k as u32))
            .is_some_and(|c| c <= self.cross_check_limit);
        if !within {
            return Ok(());
        }
        let product = ProductSpace::new(factors.to_vec(), ProductMode::Product)?;
        let direct = space_profiles(&product, self.k)?;
        if &direct != set {
            return Err(internal(format!(
                "profile algebra disagrees with direct scan on {factors:?}"
            )));
        }
        Ok(())
    }
}
