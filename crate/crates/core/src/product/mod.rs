//! Finite products and finite box products.
//!
//! Points of a product are tuples of factor points, numbered in mixed-radix
//! order with the first factor most significant. The smallest open
//! neighbourhood of a tuple is the product of the factors' smallest
//! neighbourhoods, so a [`ProductSpace`] never needs its open family listed.
//! [`ProductSpace::rectangle_closure`] builds that family the slow way, from
//! the rectangular base, for comparison.

mod profile;
mod witness;

pub use profile::{
    cores_mask, refuting_sequence, sequence_profile, space_profiles, ProfileOracle, ProfileSet,
    MAX_PROFILE_INDEX,
};
pub use witness::{
    chain_function, diagonal_counterexample, non_ultra_witness_sequence, split_to_discrete,
    ChainMap, DiagonalWitness, FactorWitness, SplitMap,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::{limit_set, IndexedSequence};
use crate::error::{input, resource, LabError, Result};
use crate::filter::FiniteFilter;
use crate::pointset::PointSet;
use crate::space::{FiniteSpace, Topology};

/// Largest product a [`ProductSpace`] will build.
pub const MAX_PRODUCT_POINTS: usize = 4096;

/// Cap on the number of base rectangles in [`ProductSpace::rectangle_closure`].
pub const MAX_RECTANGLES: usize = 1 << 16;

/// Bound on the number of proper coordinates a basic box may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kappa {
    Finite(usize),
    Omega,
}

impl Kappa {
    fn admits(self, proper: usize) -> bool {
        match self {
            Kappa::Finite(k) => proper < k,
            Kappa::Omega => true,
        }
    }
}

impl Serialize for Kappa {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Kappa::Finite(k) => s.serialize_u64(*k as u64),
            Kappa::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(usize),
            Name(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(k) => Ok(Kappa::Finite(k)),
            Wire::Name(s) if s == "omega" => Ok(Kappa::Omega),
            Wire::Name(s) => Err(serde::de::Error::custom(format!("unknown box bound {s:?}"))),
        }
    }
}

/// Which rectangles form the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductMode {
    /// Rectangles proper in finitely many coordinates.
    Product,
    /// Rectangles proper in fewer than κ coordinates.
    Box(Kappa),
}

impl ProductMode {
    fn kappa(self) -> Kappa {
        match self {
            ProductMode::Product => Kappa::Omega,
            ProductMode::Box(k) => k,
        }
    }
}

#[derive(Clone)]
pub struct ProductSpace {
    factors: Vec<FiniteSpace>,
    mode: ProductMode,
    n: usize,
    nbhd: Vec<PointSet>,
    closures: Vec<PointSet>,
}

impl std::fmt::Debug for ProductSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProductSpace")
            .field("factors", &self.factors)
            .field("mode", &self.mode)
            .finish()
    }
}

impl PartialEq for ProductSpace {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors && self.mode == other.mode
    }
}

impl Eq for ProductSpace {}

/// `∏ sets[j]` as a set of mixed-radix indices.
fn box_points(factors: &[FiniteSpace], sets: &[&PointSet], n: usize) -> PointSet {
    let mut idx = vec![0usize];
    for (f, s) in factors.iter().zip(sets) {
        let r = f.len();
        idx = idx.iter().flat_map(|&i| s.iter().map(move |y| i * r + y)).collect();
    }
    let mut out = PointSet::empty(n);
    for i in idx {
        out.insert(i);
    }
    out
}

impl ProductSpace {
    pub fn new(factors: Vec<FiniteSpace>, mode: ProductMode) -> Result<Self> {
        if factors.is_empty() {
            return Err(input("a product needs at least one factor"));
        }
        if mode == ProductMode::Box(Kappa::Finite(0)) {
            return Err(input("box bound must be at least 1"));
        }
        let n = factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.len()).filter(|&m| m <= MAX_PRODUCT_POINTS))
            .ok_or_else(|| {
                resource(format!("product exceeds {MAX_PRODUCT_POINTS} points"))
            })?;
        // With at most one proper coordinate allowed the cylinders still
        // generate the product topology; with none, only the full set is
        // basic.
        let proper_allowed = mode.kappa().admits(1);
        let mut nbhd = Vec::with_capacity(n);
        let mut tuple = vec![0usize; factors.len()];
        for p in 0..n {
            decode_into(&factors, p, &mut tuple);
            if proper_allowed {
                let sets: Vec<&PointSet> =
                    factors.iter().zip(&tuple).map(|(f, &y)| f.minimal_open(y)).collect();
                nbhd.push(box_points(&factors, &sets, n));
            } else {
                nbhd.push(PointSet::full(n));
            }
        }
        let mut closures = vec![PointSet::empty(n); n];
        for (q, u) in nbhd.iter().enumerate() {
            for p in u.iter() {
                closures[p].insert(q);
            }
        }
        Ok(ProductSpace {
            factors,
            mode,
            n,
            nbhd,
            closures,
        })
    }

    pub fn factors(&self) -> &[FiniteSpace] {
        &self.factors
    }

    pub fn mode(&self) -> ProductMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Tuple of factor points for `point`.
    pub fn decode(&self, point: usize) -> Vec<usize> {
        let mut t = vec![0; self.factors.len()];
        decode_into(&self.factors, point, &mut t);
        t
    }

    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.factors.len() {
            return Err(input(format!(
                "tuple has {} coordinates for {} factors",
                tuple.len(),
                self.factors.len()
            )));
        }
        let mut p = 0;
        for (f, &y) in self.factors.iter().zip(tuple) {
            if y >= f.len() {
                return Err(input(format!("coordinate {y} outside a {}-point factor", f.len())));
            }
            p = p * f.len() + y;
        }
        Ok(p)
    }

    /// Coordinate `j` of `point`.
    pub fn project(&self, point: usize, j: usize) -> usize {
        let below: usize = self.factors[j + 1..].iter().map(FiniteSpace::len).product();
        point / below % self.factors[j].len()
    }

    /// The projection onto factor `j` as a point map.
    pub fn projection(&self, j: usize) -> Vec<usize> {
        (0..self.n).map(|p| self.project(p, j)).collect()
    }

    /// Coordinate `j` of a product sequence.
    pub fn project_sequence(&self, seq: &IndexedSequence, j: usize) -> IndexedSequence {
        IndexedSequence {
            index: seq.index.clone(),
            values: seq.values.iter().map(|&p| self.project(p, j)).collect(),
        }
    }

    /// Open family generated by the smallest neighbourhoods.
    pub fn materialize(&self) -> Result<FiniteSpace> {
        FiniteSpace::from_minimal_nbhds(self.nbhd.clone())
    }

    /// Open family generated by the base rectangles of `self.mode()`,
    /// closed under unions and intersections.
    pub fn rectangle_closure(&self) -> Result<FiniteSpace> {
        let count = self
            .factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.opens().len()).filter(|&c| c <= MAX_RECTANGLES))
            .ok_or_else(|| resource(format!("more than {MAX_RECTANGLES} base rectangles")))?;
        let kappa = self.mode.kappa();
        let rects: Vec<PointSet> = (0..count)
            .into_par_iter()
            .filter_map(|mut r| {
                let mut choice = vec![0usize; self.factors.len()];
                for (j, f) in self.factors.iter().enumerate().rev() {
                    choice[j] = r % f.opens().len();
                    r /= f.opens().len();
                }
                let sets: Vec<&PointSet> =
                    self.factors.iter().zip(&choice).map(|(f, &c)| &f.opens()[c]).collect();
                let proper = sets.iter().filter(|s| !s.is_full()).count();
                if !kappa.admits(proper) || sets.iter().any(|s| s.is_empty()) {
                    return None;
                }
                Some(box_points(&self.factors, &sets, self.n))
            })
            .collect();
        FiniteSpace::from_base(self.n, &rects)
    }
}

fn decode_into(factors: &[FiniteSpace], mut p: usize, out: &mut [usize]) {
    for (j, f) in factors.iter().enumerate().rev() {
        out[j] = p % f.len();
        p /= f.len();
    }
}

impl Topology for ProductSpace {
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
        Box::new(std::iter::once(&self.nbhd[x]))
    }

    fn is_open(&self, set: &PointSet) -> bool {
        set.ambient() == self.n && set.iter().all(|x| self.nbhd[x].is_subset(set))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductWire {
    factors: Vec<FiniteSpace>,
    mode: ProductMode,
}

impl Serialize for ProductSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProductWire {
            factors: self.factors.clone(),
            mode: self.mode,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ProductWire::deserialize(d)?;
        ProductSpace::new(w.factors, w.mode).map_err(serde::de::Error::custom)
    }
}

/// Builds `∏ factors` under `mode`.
pub fn product(factors: Vec<FiniteSpace>, mode: ProductMode) -> Result<ProductSpace> {
    ProductSpace::new(factors, mode)
}

/// Both sides of the projection law for one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionLaw {
    /// Product limit points as tuples.
    pub product_limit: Vec<Vec<usize>>,
    /// Limit set of each projected sequence.
    pub factor_limits: Vec<Vec<usize>>,
    /// Whether the product limit set came from the rectangle-generated
    /// open family rather than from smallest neighbourhoods.
    pub materialized: bool,
}

impl ProjectionLaw {
    /// Product limit set nonempty iff every projected limit set is.
    pub fn holds(&self) -> bool {
        !self.product_limit.is_empty() == self.factor_limits.iter().all(|l| !l.is_empty())
    }

    /// The product limit set is exactly the product of the factor limit sets.
    pub fn holds_exactly(&self) -> bool {
        let mut expect: Vec<Vec<usize>> = vec![vec![]];
        for l in &self.factor_limits {
            expect = expect
                .iter()
                .flat_map(|t| {
                    l.iter().map(move |&y| {
                        let mut t = t.clone();
                        t.push(y);
                        t
                    })
                })
                .collect();
        }
        expect == self.product_limit
    }
}

/// Computes the limit set of `seq` in `space` and of each of its projections.
///
/// `materialized`, when given, must be `space.rectangle_closure()`; passing
/// it lets a caller reuse one closure across many sequences.
pub fn projection_law_check(
    space: &ProductSpace,
    materialized: Option<&FiniteSpace>,
    seq: &IndexedSequence,
    filter: &FiniteFilter,
) -> Result<ProjectionLaw> {
    let built;
    let open_family = match materialized {
        Some(m) => Some(m),
        None => match space.rectangle_closure() {
            Ok(m) => {
                built = m;
                Some(&built)
            }
            Err(LabError::Resource(_)) => None,
            Err(e) => return Err(e),
        },
    };
    let limit = match open_family {
        Some(m) => limit_set(m, seq, filter)?,
        None => limit_set(space, seq, filter)?,
    };
    let factor_limits = (0..space.factors.len())
        .map(|j| Ok(limit_set(&space.factors[j], &space.project_sequence(seq, j), filter)?.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectionLaw {
        product_limit: limit.iter().map(|p| space.decode(p)).collect(),
        factor_limits,
        materialized: open_family.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::is_p_compact;
    use crate::filter::{enumerate_filters, FilterFamily, IndexSet};
    use crate::space::{is_continuous, topologies_up_to, DedupMode, EnumerationLimits};

    fn small_spaces(max: usize) -> Vec<FiniteSpace> {
        topologies_up_to(max, DedupMode::Labeled, &EnumerationLimits::default())
            .unwrap()
            .spaces
    }

    #[test]
    fn discrete_square_is_discrete() {
        let d2 = FiniteSpace::discrete(2).unwrap();
        let p = product(vec![d2.clone(), d2], ProductMode::Product).unwrap();
        assert_eq!(p.materialize().unwrap(), FiniteSpace::discrete(4).unwrap());
    }

    #[test]
    fn sierpinski_square() {
        let s = FiniteSpace::sierpinski();
        let p = product(vec![s.clone(), s], ProductMode::Product).unwrap();
        let m = p.rectangle_closure().unwrap();
        assert_eq!(m, p.materialize().unwrap());
        assert!(p.minimal_open(p.encode(&[0, 0]).unwrap()).is_full());
        // ∅, {(1,1)}, {1}×S, S×{1}, their union, and everything.
        assert_eq!(m.opens().len(), 6);
    }

    #[test]
    fn single_factor_is_a_copy() {
        for x in small_spaces(3) {
            let p = product(vec![x.clone()], ProductMode::Product).unwrap();
            assert_eq!(p.materialize().unwrap(), x);
        }
    }

    #[test]
    fn modes_agree_on_small_pairs() {
        let spaces = small_spaces(3);
        for a in &spaces {
            for b in &spaces {
                let structural = product(vec![a.clone(), b.clone()], ProductMode::Product).unwrap();
                let expect = structural.materialize().unwrap();
                for mode in [
                    ProductMode::Product,
                    ProductMode::Box(Kappa::Omega),
                    ProductMode::Box(Kappa::Finite(2)),
                    ProductMode::Box(Kappa::Finite(3)),
                ] {
                    let p = product(vec![a.clone(), b.clone()], mode).unwrap();
                    assert_eq!(p.rectangle_closure().unwrap(), expect, "{a:?} {b:?} {mode:?}");
                    assert_eq!(p.materialize().unwrap(), expect);
                }
                let one = product(vec![a.clone(), b.clone()], ProductMode::Box(Kappa::Finite(1))).unwrap();
                let ind = FiniteSpace::indiscrete(a.len() * b.len()).unwrap();
                assert_eq!(one.rectangle_closure().unwrap(), ind);
                assert_eq!(one.materialize().unwrap(), ind);
            }
        }
    }

    #[test]
    fn modes_agree_on_triples() {
        let s = FiniteSpace::sierpinski();
        let i3 = FiniteSpace::initial_interval(3).unwrap();
        let d2 = FiniteSpace::discrete(2).unwrap();
        let fs = vec![s, i3, d2];
        let expect = product(fs.clone(), ProductMode::Product).unwrap().rectangle_closure().unwrap();
        for k in [2, 3, 4] {
            let p = product(fs.clone(), ProductMode::Box(Kappa::Finite(k))).unwrap();
            assert_eq!(p.rectangle_closure().unwrap(), expect);
            assert_eq!(p.materialize().unwrap(), expect);
        }
    }

    #[test]
    fn projections_are_continuous_surjections() {
        let spaces = small_spaces(2);
        for a in &spaces {
            for b in &spaces {
                let p = product(vec![a.clone(), b.clone()], ProductMode::Product).unwrap();
                let m = p.materialize().unwrap();
                for (j, f) in [a, b].into_iter().enumerate() {
                    let map = p.projection(j);
                    assert!(is_continuous(&map, &m, f).unwrap());
                    assert!((0..f.len()).all(|y| map.contains(&y)));
                }
            }
        }
    }

    #[test]
    fn encoding_round_trips() {
        let fs = vec![
            FiniteSpace::discrete(3).unwrap(),
            FiniteSpace::sierpinski(),
            FiniteSpace::indiscrete(2).unwrap(),
        ];
        let p = product(fs, ProductMode::Product).unwrap();
        assert_eq!(p.len(), 12);
        for q in 0..12 {
            assert_eq!(p.encode(&p.decode(q)).unwrap(), q);
        }
        assert_eq!(p.decode(5), vec![1, 0, 1]);
        assert!(p.encode(&[3, 0, 0]).is_err());
    }

    #[test]
    fn size_limit() {
        let d = FiniteSpace::discrete(8).unwrap();
        let err = product(vec![d.clone(), d.clone(), d.clone(), d.clone(), d], ProductMode::Product);
        assert!(matches!(err, Err(LabError::Resource(_))));
        assert!(product(vec![], ProductMode::Product).is_err());
    }

    #[test]
    fn json_form() {
        let s = FiniteSpace::sierpinski();
        let p = product(vec![s.clone(), s], ProductMode::Box(Kappa::Omega)).unwrap();
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(
            js,
            r#"{"factors":[{"n":2,"opens":[[],[0,1],[1]]},{"n":2,"opens":[[],[0,1],[1]]}],"mode":{"box":"omega"}}"#
        );
        assert_eq!(serde_json::from_str::<ProductSpace>(&js).unwrap(), p);
        let m: ProductMode = serde_json::from_str(r#""product""#).unwrap();
        assert_eq!(m, ProductMode::Product);
        let m: ProductMode = serde_json::from_str(r#"{"box":2}"#).unwrap();
        assert_eq!(m, ProductMode::Box(Kappa::Finite(2)));
    }

    #[test]
    fn projection_law_examples() {
        let i2 = IndexSet::standard(2).unwrap();
        let ab = FiniteFilter::up(&i2, &["a", "b"]).unwrap();
        let s = FiniteSpace::sierpinski();
        let ss = product(vec![s.clone(), s], ProductMode::Product).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let seq = IndexedSequence::new(i2.clone(), vec![a, b]).unwrap();
                let law = projection_law_check(&ss, None, &seq, &ab).unwrap();
                assert!(law.holds() && law.holds_exactly());
                assert!(law.materialized);
            }
        }
        let d2 = FiniteSpace::discrete(2).unwrap();
        let dd = product(vec![d2.clone(), d2], ProductMode::Product).unwrap();
        let y = IndexedSequence::new(i2.clone(), vec![dd.encode(&[0, 0]).unwrap(), dd.encode(&[1, 0]).unwrap()]).unwrap();
        let law = projection_law_check(&dd, None, &y, &ab).unwrap();
        assert!(law.holds());
        assert!(law.product_limit.is_empty());
        assert_eq!(law.factor_limits, vec![vec![], vec![0]]);
    }

    #[test]
    fn product_compactness_descends_to_factors() {
        let spaces = small_spaces(2);
        let i2 = IndexSet::standard(2).unwrap();
        let fs = enumerate_filters(&i2, 6).unwrap();
        for mask in 1u32..1 << fs.len() {
            let fam = FilterFamily::finite(
                (0..fs.len()).filter(|i| mask >> i & 1 == 1).map(|i| fs[i].clone()).collect(),
            )
            .unwrap();
            for a in &spaces {
                for b in &spaces {
                    let p = product(vec![a.clone(), b.clone()], ProductMode::Product).unwrap();
                    if is_p_compact(&p, &fam).unwrap().value {
                        assert!(is_p_compact(a, &fam).unwrap().value);
                        assert!(is_p_compact(b, &fam).unwrap().value);
                    }
                }
            }
        }
    }
}
