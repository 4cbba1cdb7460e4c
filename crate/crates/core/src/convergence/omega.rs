//! ω-sequences under the filters `F_Z`.
//!
//! For an eventually periodic sequence and an eventually periodic `Z`, the
//! values that occur infinitely often along `Z` are exactly the values seen
//! at `Z`-positions of one joint period past the joint prefix. A point `y`
//! is an `F_Z`-limit iff that value set lies inside the smallest open
//! neighbourhood of `y`. The implementation cross-checks this against the
//! definition, evaluated exactly on eventually periodic hit sets.

use serde::{Deserialize, Serialize};

use super::{Method, Verdict, Witness};
use crate::error::{input, internal, Result};
use crate::filter::omega::lcm;
use crate::filter::{EventuallyPeriodicSet, OmegaFilter};
use crate::pointset::PointSet;
use crate::space::Topology;

/// Brute-force scans over value sets are limited to this many points.
const MAX_VALUE_SET_POINTS: usize = 12;

/// An eventually periodic sequence of points: `prefix` followed by `cycle`
/// repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaSequence {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl OmegaSequence {
    pub fn new<T: Topology + ?Sized>(space: &T, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        let s = OmegaSequence { prefix, cycle };
        s.validate(space)?;
        Ok(s)
    }

    pub fn constant(v: usize) -> Self {
        OmegaSequence {
            prefix: vec![],
            cycle: vec![v],
        }
    }

    pub fn validate<T: Topology + ?Sized>(&self, space: &T) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(input("ω-sequences need a nonempty cycle"));
        }
        super::values_in_range(space, &self.prefix)?;
        super::values_in_range(space, &self.cycle)
    }

    pub fn value(&self, m: usize) -> usize {
        if m < self.prefix.len() {
            self.prefix[m]
        } else {
            self.cycle[(m - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// `{ m : x_m ∈ U }`.
    pub fn hits(&self, u: &PointSet) -> EventuallyPeriodicSet {
        EventuallyPeriodicSet::from_fn(self.prefix.len(), self.cycle.len(), |m| {
            u.contains(self.value(m))
        })
        .expect("cycle is nonempty")
    }

    /// Values taken infinitely often at positions in `z`.
    pub fn recurrent_values(&self, z: &EventuallyPeriodicSet, n: usize) -> PointSet {
        let t = self.prefix.len().max(z.prefix().len());
        let p = lcm(self.cycle.len(), z.cycle().len());
        let mut v = PointSet::empty(n);
        for m in (t..t + p).filter(|&m| z.contains(m)) {
            v.insert(self.value(m));
        }
        v
    }
}

/// `F_Z`-limit points of an ω-sequence.
pub fn omega_limit_set<T: Topology + ?Sized>(
    space: &T,
    seq: &OmegaSequence,
    filter: &OmegaFilter,
) -> Result<PointSet> {
    seq.validate(space)?;
    let n = space.point_count();
    let recurrent = seq.recurrent_values(filter.z(), n);
    let mut by_values = PointSet::empty(n);
    let mut by_definition = PointSet::empty(n);
    for y in 0..n {
        if recurrent.is_subset(space.minimal_open(y)) {
            by_values.insert(y);
        }
        if space.nbhd_base(y).all(|u| filter.contains(&seq.hits(u))) {
            by_definition.insert(y);
        }
    }
    if by_values != by_definition {
        return Err(internal(format!(
            "ω-limit mismatch for {seq:?}: recurrent-value rule {by_values:?}, definition {by_definition:?}"
        )));
    }
    Ok(by_values)
}

/// An infinite eventually periodic `Z` and a point the sequence converges to
/// along `Z`: the positions of the first cycle value, converging to it.
pub fn sequential_witness<T: Topology + ?Sized>(
    space: &T,
    seq: &OmegaSequence,
) -> Result<(EventuallyPeriodicSet, usize)> {
    seq.validate(space)?;
    let v = seq.cycle[0];
    let t = seq.prefix.len();
    let z = EventuallyPeriodicSet::from_fn(t, seq.cycle.len(), |m| m >= t && seq.value(m) == v)?;
    let limits = omega_limit_set(space, seq, &OmegaFilter::frechet_on(z.clone())?)?;
    if !limits.contains(v) {
        return Err(internal("constant subsequence failed to converge to its value"));
    }
    Ok((z, v))
}

/// Representative cycles: one per nonempty value set (ascending), or just
/// the singletons and the full set above the brute-force size.
fn representative_cycles(n: usize) -> Vec<Vec<usize>> {
    if n <= MAX_VALUE_SET_POINTS {
        (1u64..1 << n)
            .map(|mask| (0..n).filter(|&p| mask >> p & 1 == 1).collect())
            .collect()
    } else {
        let mut v: Vec<Vec<usize>> = (0..n).map(|p| vec![p]).collect();
        v.push((0..n).collect());
        v
    }
}

/// Sequential compactness with `Z` ranging over eventually periodic sets.
///
/// The limiting behaviour of an eventually periodic sequence along `Z`
/// depends only on its recurrent values, so each representative cycle stands
/// for every sequence with that value set.
pub fn is_sequentially_compact<T: Topology + ?Sized>(space: &T) -> Result<Verdict> {
    let mut checked = 0;
    for cycle in representative_cycles(space.point_count()) {
        let seq = OmegaSequence {
            prefix: vec![],
            cycle,
        };
        let (z, y) = sequential_witness(space, &seq)?;
        if !z.is_infinite() || !omega_limit_set(space, &seq, &OmegaFilter::frechet_on(z)?)?.contains(y)
        {
            return Ok(Verdict {
                value: false,
                witness: Some(Witness::OmegaSequence {
                    prefix: seq.prefix,
                    cycle: seq.cycle,
                }),
                method: Method::EpRestricted,
                checked: checked + 1,
            });
        }
        checked += 1;
    }
    Ok(Verdict {
        value: true,
        witness: None,
        method: Method::EpRestricted,
        checked,
    })
}

/// Every ω-sequence has an `F_ω`-limit point.
///
/// Decided by the existence of a point whose smallest open neighbourhood is
/// the whole space; on small spaces this is cross-checked against every
/// representative cycle.
pub fn every_sequence_converges<T: Topology + ?Sized>(space: &T) -> Result<Verdict> {
    let n = space.point_count();
    let centre = (0..n).find(|&y| space.minimal_open(y).is_full());
    if n > MAX_VALUE_SET_POINTS {
        return Ok(match centre {
            Some(y) => Verdict {
                value: true,
                witness: Some(Witness::Point { point: y }),
                method: Method::Shortcut,
                checked: 0,
            },
            None => Verdict {
                value: false,
                witness: Some(Witness::OmegaSequence {
                    prefix: vec![],
                    cycle: (0..n).collect(),
                }),
                method: Method::Shortcut,
                checked: 0,
            },
        });
    }
    let frechet = OmegaFilter::frechet();
    let mut checked = 0;
    let mut failing = None;
    for cycle in representative_cycles(n) {
        checked += 1;
        let seq = OmegaSequence {
            prefix: vec![],
            cycle,
        };
        if omega_limit_set(space, &seq, &frechet)?.is_empty() {
            failing = Some(seq);
            break;
        }
    }
    match (centre, failing) {
        (Some(y), None) => Ok(Verdict {
            value: true,
            witness: Some(Witness::Point { point: y }),
            method: Method::Definitional,
            checked,
        }),
        (None, Some(seq)) => Ok(Verdict {
            value: false,
            witness: Some(Witness::OmegaSequence {
                prefix: seq.prefix,
                cycle: seq.cycle,
            }),
            method: Method::Definitional,
            checked,
        }),
        (c, f) => Err(internal(format!(
            "convergence criterion ({c:?}) disagrees with brute force ({f:?})"
        ))),
    }
}
