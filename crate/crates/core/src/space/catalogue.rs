//! Exhaustive catalogues of small topologies.
//!
//! Topologies on `0..n` correspond to preorders (via smallest open
//! neighbourhoods), so the enumerator grows neighbourhood systems one point
//! at a time instead of scanning all `2^(2^n)` subset families. Families are
//! then encoded as 64-bit masks over subsets and sorted numerically, which is
//! the deterministic catalogue order.

use std::collections::HashSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FiniteSpace;
use crate::error::{input, resource, Result};

/// How a catalogue treats relabelled copies of the same topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupMode {
    Labeled,
    UpToHomeomorphism,
}

/// Configured point limits for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub labeled: usize,
    pub up_to_homeomorphism: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            labeled: 5,
            up_to_homeomorphism: 6,
        }
    }
}

impl EnumerationLimits {
    fn limit(&self, mode: DedupMode) -> usize {
        match mode {
            DedupMode::Labeled => self.labeled,
            DedupMode::UpToHomeomorphism => self.up_to_homeomorphism,
        }
        .min(6)
    }
}

/// An ordered list of spaces. In up-to-homeomorphism mode no two entries are
/// homeomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceCatalogue {
    pub dedup: DedupMode,
    pub spaces: Vec<FiniteSpace>,
}

impl SpaceCatalogue {
    pub fn labeled(spaces: Vec<FiniteSpace>) -> Self {
        SpaceCatalogue {
            dedup: DedupMode::Labeled,
            spaces,
        }
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FiniteSpace> {
        self.spaces.iter()
    }
}

/// Smallest-neighbourhood systems (as point masks) of every preorder on
/// `0..n`.
fn neighbourhood_systems(n: usize) -> Vec<Vec<u64>> {
    let mut level: Vec<Vec<u64>> = vec![vec![]];
    for p in 0..n {
        let bit = 1u64 << p;
        level = level
            .par_iter()
            .flat_map_iter(|nb| {
                let old = (1u64 << p) - 1;
                // `up`: old points inside the new point's neighbourhood.
                // `down`: old points whose neighbourhood gains the new point.
                let ups: Vec<u64> = (0..=old)
                    .filter(|&up| (0..p).filter(|&y| up >> y & 1 == 1).all(|y| nb[y] & !up == 0))
                    .collect();
                let downs: Vec<u64> = (0..=old)
                    .filter(|&down| {
                        (0..p).all(|z| {
                            // z must join `down` when its neighbourhood meets it
                            nb[z] & down == 0 || down >> z & 1 == 1
                        })
                    })
                    .collect();
                let mut out = Vec::new();
                for &up in &ups {
                    for &down in &downs {
                        if (0..p).filter(|&x| down >> x & 1 == 1).all(|x| up & !nb[x] == 0) {
                            let mut next: Vec<u64> = nb
                                .iter()
                                .enumerate()
                                .map(|(x, &u)| if down >> x & 1 == 1 { u | bit } else { u })
                                .collect();
                            next.push(up | bit);
                            out.push(next);
                        }
                    }
                }
                out.into_iter()
            })
            .collect();
    }
    level
}

fn encode_neighbourhoods(n: usize, nb: &[u64]) -> u64 {
    (0..1u64 << n)
        .filter(|&s| (0..n).filter(|&x| s >> x & 1 == 1).all(|x| nb[x] & !s == 0))
        .fold(0u64, |acc, s| acc | 1 << s)
}

fn permute_family(n: usize, family: u64, subset_image: &[u64]) -> u64 {
    let mut out = 0u64;
    let mut f = family;
    while f != 0 {
        let s = f.trailing_zeros() as usize;
        f &= f - 1;
        out |= 1 << subset_image[s];
    }
    debug_assert!(n <= 6);
    out
}

fn subset_images(n: usize, perm: &[usize]) -> Vec<u64> {
    (0..1u64 << n)
        .map(|s| {
            (0..n)
                .filter(|&x| s >> x & 1 == 1)
                .fold(0u64, |acc, x| acc | 1 << perm[x])
        })
        .collect()
}

/// Minimum family encoding over all relabellings of the points.
pub fn canonical_encoding(space: &FiniteSpace) -> Result<u64> {
    let n = space.len();
    let family = space
        .encoding()
        .ok_or_else(|| resource("canonical encodings need at most 6 points"))?;
    Ok((0..n)
        .permutations(n)
        .map(|perm| permute_family(n, family, &subset_images(n, &perm)))
        .min()
        .unwrap_or(family))
}

/// Sorted family encodings of all labeled topologies on `n` points.
fn labeled_encodings(n: usize) -> Vec<u64> {
    let mut fams: Vec<u64> = neighbourhood_systems(n)
        .par_iter()
        .map(|nb| encode_neighbourhoods(n, nb))
        .collect();
    fams.par_sort_unstable();
    fams
}

/// Every topology on `0..n`, in ascending family-encoding order; in
/// up-to-homeomorphism mode, the least encoding of each class.
pub fn enumerate_topologies(
    n: usize,
    dedup: DedupMode,
    limits: &EnumerationLimits,
) -> Result<SpaceCatalogue> {
    if n == 0 {
        return Err(input("spaces must have at least one point"));
    }
    if n > limits.limit(dedup) {
        return Err(resource(format!(
            "enumeration of {n}-point topologies exceeds the {:?} limit of {}",
            dedup,
            limits.limit(dedup)
        )));
    }
    let labeled = labeled_encodings(n);
    let chosen: Vec<u64> = match dedup {
        DedupMode::Labeled => labeled,
        DedupMode::UpToHomeomorphism => {
            // Ascending scan: the first member of each orbit is its minimum.
            let images: Vec<Vec<u64>> = (0..n)
                .permutations(n)
                .map(|p| subset_images(n, &p))
                .collect();
            let mut seen = HashSet::new();
            let mut reps = Vec::new();
            for fam in labeled {
                if seen.contains(&fam) {
                    continue;
                }
                reps.push(fam);
                for img in &images {
                    seen.insert(permute_family(n, fam, img));
                }
            }
            reps
        }
    };
    let spaces = chosen
        .par_iter()
        .map(|&f| FiniteSpace::from_encoding(n, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpaceCatalogue { dedup, spaces })
}

/// Concatenated catalogues for `1..=max_n` points.
pub fn topologies_up_to(
    max_n: usize,
    dedup: DedupMode,
    limits: &EnumerationLimits,
) -> Result<SpaceCatalogue> {
    let mut spaces = Vec::new();
    for n in 1..=max_n {
        spaces.extend(enumerate_topologies(n, dedup, limits)?.spaces);
    }
    Ok(SpaceCatalogue { dedup, spaces })
}
