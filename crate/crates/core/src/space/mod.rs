//! Finite topological spaces.
//!
//! A [`FiniteSpace`] keeps its open family explicitly, sorted in the
//! interchange order (each open ascending, opens lexicographic). Every point
//! of a finite space has a smallest open neighbourhood, and most predicates
//! in the crate are phrased in terms of those and of point closures, both of
//! which are cached at construction.

mod catalogue;

pub use catalogue::{
    canonical_encoding, enumerate_topologies, topologies_up_to, DedupMode, EnumerationLimits,
    SpaceCatalogue,
};

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, resource, Result};
use crate::pointset::PointSet;

/// Largest open family a [`FiniteSpace`] may materialize.
pub const MAX_OPENS: usize = 1 << 12;

/// Point-level access to a finite topology.
///
/// Implemented by [`FiniteSpace`] and by [`crate::product::ProductSpace`],
/// whose open family is usually far too large to list.
pub trait Topology {
    fn point_count(&self) -> usize;

    /// Smallest open set containing `y`.
    fn minimal_open(&self, y: usize) -> &PointSet;

    /// Closure of the singleton `{y}`.
    fn point_closure(&self, y: usize) -> &PointSet;

    /// A neighbourhood base at `x` made of open sets.
    fn nbhd_base(&self, x: usize) -> Box<dyn Iterator<Item = &PointSet> + '_>;

    fn is_open(&self, set: &PointSet) -> bool;

    fn full(&self) -> PointSet {
        PointSet::full(self.point_count())
    }
}

/// A topology on the points `0..n`, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    n: usize,
    opens: Vec<PointSet>,
    nbhd: Vec<PointSet>,
    closures: Vec<PointSet>,
}

impl std::fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("n", &self.n)
            .field("opens", &self.opens)
            .finish()
    }
}

impl FiniteSpace {
    /// Validates an explicit open family.
    pub fn new(n: usize, opens: Vec<PointSet>) -> Result<Self> {
        if n == 0 {
            return Err(input("spaces must have at least one point"));
        }
        if let Some(bad) = opens.iter().find(|o| o.ambient() != n) {
            return Err(input(format!(
                "open set {bad:?} has ambient size {}, expected {n}",
                bad.ambient()
            )));
        }
        let mut opens = opens;
        opens.sort();
        opens.dedup();
        if opens.len() > MAX_OPENS {
            return Err(resource(format!("{} opens exceeds limit {MAX_OPENS}", opens.len())));
        }
        let members: HashSet<&PointSet> = opens.iter().collect();
        if !members.contains(&PointSet::empty(n)) {
            return Err(input("open family must contain the empty set"));
        }
        if !members.contains(&PointSet::full(n)) {
            return Err(input("open family must contain the full set"));
        }
        for (a, b) in opens.iter().tuple_combinations() {
            if !members.contains(&a.union(b)) {
                return Err(input(format!("open family not closed under union: {a:?} ∪ {b:?}")));
            }
            if !members.contains(&a.intersection(b)) {
                return Err(input(format!(
                    "open family not closed under intersection: {a:?} ∩ {b:?}"
                )));
            }
        }
        Ok(Self::assemble(n, opens))
    }

    /// Builds from ascending point lists, as in the JSON encoding.
    pub fn from_open_lists(n: usize, opens: &[Vec<usize>]) -> Result<Self> {
        let sets = opens
            .iter()
            .map(|o| PointSet::from_points(n, o))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, sets)
    }

    /// Smallest topology containing `base`: closes under finite unions and
    /// intersections and adds the empty and full sets.
    pub fn from_base(n: usize, base: &[PointSet]) -> Result<Self> {
        if n == 0 {
            return Err(input("spaces must have at least one point"));
        }
        if base.iter().any(|b| b.ambient() != n) {
            return Err(input("base set has the wrong ambient size"));
        }
        // Intersection closure first; unions of an ∩-closed family are
        // again ∩-closed, so a single union pass finishes the job.
        let mut meets: Vec<PointSet> = vec![PointSet::full(n)];
        let mut seen: HashSet<PointSet> = meets.iter().cloned().collect();
        for b in base {
            let upto = meets.len();
            for i in 0..upto {
                let c = meets[i].intersection(b);
                if seen.insert(c.clone()) {
                    meets.push(c);
                    if meets.len() > MAX_OPENS {
                        return Err(resource(format!(
                            "generated topology exceeds {MAX_OPENS} opens"
                        )));
                    }
                }
            }
        }
        let mut family: Vec<PointSet> = vec![PointSet::empty(n)];
        let mut seen: HashSet<PointSet> = family.iter().cloned().collect();
        for m in &meets {
            let upto = family.len();
            for i in 0..upto {
                let c = family[i].union(m);
                if seen.insert(c.clone()) {
                    family.push(c);
                    if family.len() > MAX_OPENS {
                        return Err(resource(format!(
                            "generated topology exceeds {MAX_OPENS} opens"
                        )));
                    }
                }
            }
        }
        family.sort();
        Ok(Self::assemble(n, family))
    }

    /// Builds from the smallest open neighbourhood of each point.
    ///
    /// `nbhd[x]` must contain `x`, and `y ∈ nbhd[x]` must imply
    /// `nbhd[y] ⊆ nbhd[x]`.
    pub fn from_minimal_nbhds(nbhd: Vec<PointSet>) -> Result<Self> {
        let n = nbhd.len();
        if n == 0 {
            return Err(input("spaces must have at least one point"));
        }
        for (x, u) in nbhd.iter().enumerate() {
            if u.ambient() != n || !u.contains(x) {
                return Err(input(format!("neighbourhood of {x} must contain {x}")));
            }
            if u.iter().any(|y| !nbhd[y].is_subset(u)) {
                return Err(input(format!("neighbourhood system not transitive at {x}")));
            }
        }
        let mut family: Vec<PointSet> = vec![PointSet::empty(n)];
        let mut seen: HashSet<PointSet> = family.iter().cloned().collect();
        for u in &nbhd {
            let upto = family.len();
            for i in 0..upto {
                let c = family[i].union(u);
                if seen.insert(c.clone()) {
                    family.push(c);
                    if family.len() > MAX_OPENS {
                        return Err(resource(format!(
                            "topology has more than {MAX_OPENS} opens"
                        )));
                    }
                }
            }
        }
        family.sort();
        Ok(Self::assemble(n, family))
    }

    /// Decodes a family bitmask: bit `S` set iff the subset with mask `S`
    /// is open. Requires `n <= 6`.
    pub fn from_encoding(n: usize, family: u64) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(input(format!("encoded families need 1 <= n <= 6, got {n}")));
        }
        let opens = (0..1u64 << n)
            .filter(|s| family >> s & 1 == 1)
            .map(|s| PointSet::from_mask(n, s))
            .collect();
        Self::new(n, opens)
    }

    fn assemble(n: usize, opens: Vec<PointSet>) -> Self {
        let nbhd: Vec<PointSet> = (0..n)
            .map(|y| {
                opens
                    .iter()
                    .filter(|o| o.contains(y))
                    .fold(PointSet::full(n), |acc, o| acc.intersection(o))
            })
            .collect();
        let closures = (0..n)
            .map(|y| {
                let mut c = PointSet::empty(n);
                for (x, u) in nbhd.iter().enumerate() {
                    if u.contains(y) {
                        c.insert(x);
                    }
                }
                c
            })
            .collect();
        FiniteSpace {
            n,
            opens,
            nbhd,
            closures,
        }
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_minimal_nbhds((0..n).map(|x| PointSet::singleton(n, x)).collect())
    }

    pub fn indiscrete(n: usize) -> Result<Self> {
        Self::from_minimal_nbhds(vec![PointSet::full(n); n])
    }

    /// Two points, opens `∅, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        Self::from_open_lists(2, &[vec![], vec![1], vec![0, 1]]).expect("valid topology")
    }

    /// Initial interval topology on `0..n`: the opens are exactly the
    /// intervals `[0, a)` for `0 <= a <= n`.
    pub fn initial_interval(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(input("initial interval topology needs n >= 1"));
        }
        let opens = (0..=n)
            .map(|a| PointSet::from_points(n, &(0..a).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, opens)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Opens in interchange order.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    /// Closed sets, sorted in the same order as opens.
    pub fn closed_sets(&self) -> Vec<PointSet> {
        let mut c: Vec<PointSet> = self.opens.iter().map(PointSet::complement).collect();
        c.sort();
        c
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.is_open(&set.complement())
    }

    fn check_set(&self, a: &PointSet) -> Result<()> {
        if a.ambient() != self.n {
            return Err(input(format!(
                "set has ambient size {}, space has {} points",
                a.ambient(),
                self.n
            )));
        }
        Ok(())
    }

    fn check_point(&self, y: usize) -> Result<()> {
        if y >= self.n {
            return Err(input(format!("point {y} out of range for {} points", self.n)));
        }
        Ok(())
    }

    /// Smallest closed superset of `a`: the complement of the union of all
    /// opens disjoint from `a`.
    pub fn closure(&self, a: &PointSet) -> Result<PointSet> {
        self.check_set(a)?;
        let mut outside = PointSet::empty(self.n);
        for o in self.opens.iter().filter(|o| o.is_disjoint(a)) {
            outside.union_with(o);
        }
        Ok(outside.complement())
    }

    /// Intersection of all opens containing `y`.
    pub fn minimal_open_nbhd(&self, y: usize) -> Result<&PointSet> {
        self.check_point(y)?;
        Ok(&self.nbhd[y])
    }

    /// Ultraconnectedness, with the first disjoint nonempty closed pair (in
    /// closed-set order) as witness when it fails.
    pub fn ultraconnected(&self) -> Ultraconnectedness {
        let closed: Vec<PointSet> = self
            .closed_sets()
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();
        let pair = closed
            .iter()
            .tuple_combinations()
            .find(|(a, b)| a.is_disjoint(b))
            .map(|(a, b)| (a.clone(), b.clone()));
        Ultraconnectedness { pair }
    }

    pub fn is_ultraconnected(&self) -> bool {
        self.ultraconnected().holds()
    }

    /// Every `m` points (repetition allowed) have intersecting closures.
    pub fn is_m_ultraconnected(&self, m: usize) -> Result<bool> {
        if m == 0 {
            return Err(input("m-ultraconnectedness needs m >= 1"));
        }
        // Repeated points add nothing, and the property is monotone in the
        // tuple, so subsets of size min(m, n) decide it.
        let k = m.min(self.n);
        Ok((0..self.n).combinations(k).all(|pts| {
            let mut acc = PointSet::full(self.n);
            for p in pts {
                acc.intersect_with(&self.closures[p]);
            }
            !acc.is_empty()
        }))
    }

    /// All disjoint pairs of nonempty closed sets, in closed-set order.
    pub fn disjoint_closed_pairs(&self) -> Vec<(PointSet, PointSet)> {
        let closed: Vec<PointSet> = self
            .closed_sets()
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();
        closed
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| a.is_disjoint(b))
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect()
    }

    /// Subspace on `points`, relabelled `0..|points|` in ascending order.
    /// Returns the space and the embedding into `self`.
    pub fn subspace(&self, points: &PointSet) -> Result<(FiniteSpace, Vec<usize>)> {
        self.check_set(points)?;
        let embed = points.to_vec();
        if embed.is_empty() {
            return Err(input("subspace must be nonempty"));
        }
        let m = embed.len();
        let opens = self
            .opens
            .iter()
            .map(|o| {
                let mut s = PointSet::empty(m);
                for (i, &p) in embed.iter().enumerate() {
                    if o.contains(p) {
                        s.insert(i);
                    }
                }
                s
            })
            .collect();
        Ok((FiniteSpace::new(m, opens)?, embed))
    }

    /// Quotient by a surjection onto `0..m`: `V` is open iff its preimage is.
    pub fn quotient(&self, map: &[usize], m: usize) -> Result<FiniteSpace> {
        if map.len() != self.n {
            return Err(input("quotient map must be total"));
        }
        if map.iter().any(|&v| v >= m) {
            return Err(input("quotient map value out of range"));
        }
        if (0..m).any(|v| !map.contains(&v)) {
            return Err(precondition("quotient map must be surjective"));
        }
        if m > 12 {
            return Err(resource("quotient targets are limited to 12 points"));
        }
        let opens = (0..1u64 << m)
            .map(|mask| PointSet::from_mask(m, mask))
            .filter(|v| {
                let mut pre = PointSet::empty(self.n);
                for (x, &fx) in map.iter().enumerate() {
                    if v.contains(fx) {
                        pre.insert(x);
                    }
                }
                self.is_open(&pre)
            })
            .collect();
        FiniteSpace::new(m, opens)
    }

    /// Relabels points: point `x` of `self` becomes `perm[x]`.
    pub fn permute(&self, perm: &[usize]) -> Result<FiniteSpace> {
        if perm.len() != self.n || !perm.iter().all_unique() || perm.iter().any(|&p| p >= self.n) {
            return Err(input("not a permutation of the points"));
        }
        let opens = self
            .opens
            .iter()
            .map(|o| {
                let mut s = PointSet::empty(self.n);
                for x in o.iter() {
                    s.insert(perm[x]);
                }
                s
            })
            .collect();
        FiniteSpace::new(self.n, opens)
    }

    /// Family bitmask (bit `S` set iff subset `S` is open); `None` above six
    /// points.
    pub fn encoding(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.opens.iter().fold(0u64, |acc, o| acc | 1 << o.to_mask()))
    }
}

impl Topology for FiniteSpace {
    fn point_count(&self) -> usize {
        self.n
    }

    fn minimal_open(&self, y: usize) -> &PointSet {
        &self.nbhd[y]
    }

    fn point_closure(&self, y: usize) -> &PointSet {
        &self.closures[y]
    }

    fn nbhd_base(&self, x: usize) -> Box<dyn Iterator<Item = &PointSet> + '_> {
        // The full neighbourhood system: every open containing x.
        Box::new(self.opens.iter().filter(move |o| o.contains(x)))
    }

    fn is_open(&self, set: &PointSet) -> bool {
        set.ambient() == self.n && self.opens.binary_search(set).is_ok()
    }
}

/// Outcome of the ultraconnectedness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultraconnectedness {
    /// A disjoint pair of nonempty closed sets, when one exists.
    pub pair: Option<(PointSet, PointSet)>,
}

impl Ultraconnectedness {
    pub fn holds(&self) -> bool {
        self.pair.is_none()
    }
}

/// Whether `map` (total on `domain`, valued in `codomain`) is continuous:
/// the preimage of every open of `codomain` is open in `domain`.
pub fn is_continuous(map: &[usize], domain: &FiniteSpace, codomain: &FiniteSpace) -> Result<bool> {
    if map.len() != domain.len() {
        return Err(input(format!(
            "map has {} values for a {}-point domain",
            map.len(),
            domain.len()
        )));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= codomain.len()) {
        return Err(input(format!("map value {v} outside the codomain")));
    }
    Ok(codomain.opens().iter().all(|v| {
        let mut pre = PointSet::empty(domain.len());
        for (x, &fx) in map.iter().enumerate() {
            if v.contains(fx) {
                pre.insert(x);
            }
        }
        domain.is_open(&pre)
    }))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceWire {
    n: usize,
    opens: Vec<Vec<usize>>,
}

impl Serialize for FiniteSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpaceWire {
            n: self.n,
            opens: self.opens.iter().map(PointSet::to_vec).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = SpaceWire::deserialize(d)?;
        FiniteSpace::from_open_lists(w.n, &w.opens).map_err(serde::de::Error::custom)
    }
}
