//! Explicit counterexample objects: diagonal sequences in products, the
//! split sequence for a non-ultrafilter, maps onto two-point discrete spaces
//! and chain-counting maps.

use serde::{Deserialize, Serialize};

use super::{ProductMode, ProductSpace};
use crate::convergence::{limit_set, IndexedSequence};
use crate::error::{input, internal, precondition, Result};
use crate::filter::{FilterFamily, FiniteFilter};
use crate::pointset::PointSet;
use crate::space::{is_continuous, FiniteSpace};

/// A space together with a sequence in it that has no `F`-limit point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorWitness {
    pub space: FiniteSpace,
    pub sequence: IndexedSequence,
}

/// Product of the per-filter witness spaces with the diagonal sequence,
/// whose projection to factor `j` is the `j`-th witness sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalWitness {
    pub family: FilterFamily,
    pub witnesses: Vec<FactorWitness>,
    pub product: ProductSpace,
    pub diagonal: IndexedSequence,
    /// The diagonal written as factor tuples.
    pub diagonal_tuples: Vec<Vec<usize>>,
}

impl DiagonalWitness {
    /// Recomputes every limit set the witness relies on.
    pub fn verify(&self) -> Result<bool> {
        let (_, filters) = self.family.as_finite()?;
        if filters.len() != self.witnesses.len() || self.product.factors().len() != filters.len() {
            return Ok(false);
        }
        for (j, (f, w)) in filters.iter().zip(&self.witnesses).enumerate() {
            if self.product.factors()[j] != w.space
                || self.product.project_sequence(&self.diagonal, j) != w.sequence
                || !limit_set(&w.space, &w.sequence, f)?.is_empty()
            {
                return Ok(false);
            }
        }
        for f in filters {
            if !limit_set(&self.product, &self.diagonal, f)?.is_empty() {
                return Ok(false);
            }
        }
        let tuples: Vec<Vec<usize>> =
            self.diagonal.values.iter().map(|&p| self.product.decode(p)).collect();
        Ok(tuples == self.diagonal_tuples)
    }
}

/// Builds `∏_F X_F` and the diagonal of the witness sequences, and checks
/// that the diagonal has no `F`-limit point for any `F ∈ P`.
pub fn diagonal_counterexample(
    family: &FilterFamily,
    witnesses: Vec<FactorWitness>,
) -> Result<DiagonalWitness> {
    let (index, filters) = family.as_finite()?;
    if witnesses.len() != filters.len() {
        return Err(input(format!(
            "{} witnesses for {} filters",
            witnesses.len(),
            filters.len()
        )));
    }
    for (f, w) in filters.iter().zip(&witnesses) {
        let l = limit_set(&w.space, &w.sequence, f)?;
        if !l.is_empty() {
            return Err(precondition(format!(
                "witness sequence {:?} has limit points {l:?}",
                w.sequence.values
            )));
        }
    }
    let product = ProductSpace::new(
        witnesses.iter().map(|w| w.space.clone()).collect(),
        ProductMode::Product,
    )?;
    let diagonal_tuples: Vec<Vec<usize>> = (0..index.len())
        .map(|i| witnesses.iter().map(|w| w.sequence.values[i]).collect())
        .collect();
    let values = diagonal_tuples
        .iter()
        .map(|t| product.encode(t))
        .collect::<Result<Vec<_>>>()?;
    let diagonal = IndexedSequence::new(index.clone(), values)?;
    for f in filters {
        let l = limit_set(&product, &diagonal, f)?;
        if !l.is_empty() {
            return Err(internal(format!(
                "diagonal converges under {f:?} to {:?}",
                l.iter().map(|p| product.decode(p)).collect::<Vec<_>>()
            )));
        }
    }
    Ok(DiagonalWitness {
        family: family.clone(),
        witnesses,
        product,
        diagonal,
        diagonal_tuples,
    })
}

fn disjoint_closed_pair(space: &FiniteSpace, c1: &PointSet, c2: &PointSet) -> Result<()> {
    for c in [c1, c2] {
        if c.ambient() != space.len() {
            return Err(input("closed set has the wrong ambient size"));
        }
        if c.is_empty() || !space.is_closed(c) {
            return Err(precondition(format!("{c:?} is not a nonempty closed set")));
        }
    }
    if !c1.is_disjoint(c2) {
        return Err(precondition("closed sets must be disjoint"));
    }
    Ok(())
}

/// A sequence with no `F`-limit point: it sits in `C₁` on one half of a
/// splitting of the index set and in `C₂` on the other.
pub fn non_ultra_witness_sequence(
    space: &FiniteSpace,
    filter: &FiniteFilter,
    c1: &PointSet,
    c2: &PointSet,
) -> Result<IndexedSequence> {
    if filter.is_ultrafilter() {
        return Err(precondition("filter is an ultrafilter"));
    }
    disjoint_closed_pair(space, c1, c2)?;
    let (j1, _) = filter.non_ultra_partition()?;
    let (a, b) = (c1.first().unwrap_or(0), c2.first().unwrap_or(0));
    let values = (0..filter.index().len())
        .map(|i| if j1 >> i & 1 == 1 { a } else { b })
        .collect();
    let seq = IndexedSequence::new(filter.index().clone(), values)?;
    let l = limit_set(space, &seq, filter)?;
    if !l.is_empty() {
        return Err(internal(format!("split sequence converges to {l:?}")));
    }
    Ok(seq)
}

/// The subspace `C ∪ C′` and its map onto the two-point discrete space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitMap {
    pub subspace: FiniteSpace,
    /// Subspace point `i` is `embedding[i]` in the original space.
    pub embedding: Vec<usize>,
    /// `0` on `C`, `1` on `C′`.
    pub map: Vec<usize>,
}

pub fn split_to_discrete(space: &FiniteSpace, c: &PointSet, c_prime: &PointSet) -> Result<SplitMap> {
    disjoint_closed_pair(space, c, c_prime)?;
    let (subspace, embedding) = space.subspace(&c.union(c_prime))?;
    let map: Vec<usize> = embedding.iter().map(|&p| usize::from(!c.contains(p))).collect();
    let two = FiniteSpace::discrete(2)?;
    if !is_continuous(&map, &subspace, &two)? || !map.contains(&0) || !map.contains(&1) {
        return Err(internal("split map is not a continuous surjection"));
    }
    Ok(SplitMap {
        subspace,
        embedding,
        map,
    })
}

/// `f(x)` = number of chain members containing `x`, continuous into the
/// initial-interval space on `k + 1` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMap {
    pub target: FiniteSpace,
    pub map: Vec<usize>,
}

pub fn chain_function(space: &FiniteSpace, chain: &[PointSet]) -> Result<ChainMap> {
    for (i, c) in chain.iter().enumerate() {
        if c.ambient() != space.len() || c.is_empty() || !space.is_closed(c) {
            return Err(input(format!("chain member {i} is not a nonempty closed set")));
        }
        if i > 0 && !c.is_subset(&chain[i - 1]) {
            return Err(input(format!("chain is not decreasing at member {i}")));
        }
    }
    let map: Vec<usize> = (0..space.len())
        .map(|x| chain.iter().filter(|c| c.contains(x)).count())
        .collect();
    let target = FiniteSpace::initial_interval(chain.len() + 1)?;
    if !is_continuous(&map, space, &target)? {
        return Err(internal("chain map is not continuous"));
    }
    Ok(ChainMap { target, map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::is_p_compact;
    use crate::filter::IndexSet;
    use crate::LabError;

    fn idx(k: usize) -> IndexSet {
        IndexSet::standard(k).unwrap()
    }

    fn pts(n: usize, p: &[usize]) -> PointSet {
        PointSet::from_points(n, p).unwrap()
    }

    fn wit(space: FiniteSpace, k: usize, v: &[usize]) -> FactorWitness {
        FactorWitness {
            space,
            sequence: IndexedSequence::new(idx(k), v.to_vec()).unwrap(),
        }
    }

    #[test]
    fn diagonal_single_filter() {
        let d2 = FiniteSpace::discrete(2).unwrap();
        let fam = FilterFamily::finite(vec![FiniteFilter::up(&idx(2), &["a", "b"]).unwrap()]).unwrap();
        let w = diagonal_counterexample(&fam, vec![wit(d2.clone(), 2, &[0, 1])]).unwrap();
        assert_eq!(w.product.materialize().unwrap(), d2);
        assert_eq!(w.diagonal.values, vec![0, 1]);
        assert!(w.verify().unwrap());
    }

    #[test]
    fn diagonal_two_filters() {
        let d2 = FiniteSpace::discrete(2).unwrap();
        let i3 = idx(3);
        let fam = FilterFamily::finite(vec![
            FiniteFilter::up(&i3, &["a", "b"]).unwrap(),
            FiniteFilter::up(&i3, &["b", "c"]).unwrap(),
        ])
        .unwrap();
        let w = diagonal_counterexample(
            &fam,
            vec![wit(d2.clone(), 3, &[0, 1, 0]), wit(d2, 3, &[0, 0, 1])],
        )
        .unwrap();
        assert_eq!(w.product.materialize().unwrap(), FiniteSpace::discrete(4).unwrap());
        assert_eq!(w.diagonal_tuples, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        for j in 0..2 {
            assert_eq!(w.product.project_sequence(&w.diagonal, j), w.witnesses[j].sequence);
        }
        assert!(!is_p_compact(&w.product, &fam).unwrap().value);
        assert!(w.verify().unwrap());
        let js = serde_json::to_string(&w).unwrap();
        let back: DiagonalWitness = serde_json::from_str(&js).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn diagonal_rejects_convergent_witness() {
        let fam = FilterFamily::finite(vec![FiniteFilter::up(&idx(2), &["a"]).unwrap()]).unwrap();
        let d2 = FiniteSpace::discrete(2).unwrap();
        for v in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let r = diagonal_counterexample(&fam, vec![wit(d2.clone(), 2, &v)]);
            assert!(matches!(r, Err(LabError::Precondition(_))));
        }
    }

    #[test]
    fn split_sequences() {
        let d2 = FiniteSpace::discrete(2).unwrap();
        let ab = FiniteFilter::up(&idx(2), &["a", "b"]).unwrap();
        let s = non_ultra_witness_sequence(&d2, &ab, &pts(2, &[0]), &pts(2, &[1])).unwrap();
        assert_eq!(s.values, vec![0, 1]);
        let d3 = FiniteSpace::discrete(3).unwrap();
        let abc = FiniteFilter::up(&idx(3), &["a", "b", "c"]).unwrap();
        let s = non_ultra_witness_sequence(&d3, &abc, &pts(3, &[0]), &pts(3, &[1])).unwrap();
        assert_eq!(s.values, vec![0, 1, 1]);
        let iit = FiniteSpace::initial_interval(2).unwrap();
        for c1 in [pts(2, &[0]), pts(2, &[1]), pts(2, &[0, 1])] {
            for c2 in [pts(2, &[0]), pts(2, &[1]), pts(2, &[0, 1])] {
                assert!(matches!(
                    non_ultra_witness_sequence(&iit, &ab, &c1, &c2),
                    Err(LabError::Precondition(_))
                ));
            }
        }
        let a = FiniteFilter::up(&idx(2), &["a"]).unwrap();
        assert!(non_ultra_witness_sequence(&d2, &a, &pts(2, &[0]), &pts(2, &[1])).is_err());
    }

    #[test]
    fn split_maps() {
        let d2 = FiniteSpace::discrete(2).unwrap();
        let m = split_to_discrete(&d2, &pts(2, &[0]), &pts(2, &[1])).unwrap();
        assert_eq!(m.map, vec![0, 1]);
        let d3 = FiniteSpace::discrete(3).unwrap();
        let m = split_to_discrete(&d3, &pts(3, &[0]), &pts(3, &[1, 2])).unwrap();
        assert_eq!(m.map, vec![0, 1, 1]);
        let s = FiniteSpace::sierpinski();
        for c in s.closed_sets() {
            for d in s.closed_sets() {
                assert!(split_to_discrete(&s, &c, &d).is_err());
            }
        }
    }

    #[test]
    fn chain_maps() {
        let i3 = FiniteSpace::initial_interval(3).unwrap();
        let m = chain_function(&i3, &[pts(3, &[1, 2]), pts(3, &[2])]).unwrap();
        assert_eq!(m.map, vec![0, 1, 2]);
        let m = chain_function(&i3, &[]).unwrap();
        assert_eq!(m.map, vec![0, 0, 0]);
        let d3 = FiniteSpace::discrete(3).unwrap();
        let m = chain_function(&d3, &[pts(3, &[0, 1, 2]), pts(3, &[2])]).unwrap();
        assert_eq!(m.map, vec![1, 1, 2]);
        assert_eq!(m.target, FiniteSpace::initial_interval(3).unwrap());
        assert!(chain_function(&d3, &[pts(3, &[2]), pts(3, &[0, 2])]).is_err());
        assert!(chain_function(&i3, &[pts(3, &[0])]).is_err());
    }
}
