//! Conditions of the product theorem for sequencewise `P`-compactness and
//! its two corollaries, over a finite catalogue `K`.
//!
//! Compactness of products is decided with the profile algebra of
//! [`crate::product::ProfileOracle`], which cross-checks itself against a
//! direct scan of product sequences wherever that is affordable. Refuting
//! sequences are always rebuilt on the actual product and re-verified.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::CheckMethod;
use crate::convergence::{is_p_compact, limit_set, IndexedSequence};
use crate::error::{input, internal, LabError, Result};
use crate::filter::{FilterFamily, FiniteFilter, IndexSet};
use crate::pointset::PointSet;
use crate::product::{
    cores_mask, diagonal_counterexample, refuting_sequence, DiagonalWitness, FactorWitness,
    ProductMode, ProductSpace, ProfileOracle, MAX_PRODUCT_POINTS,
};
use crate::space::{FiniteSpace, SpaceCatalogue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Bounds {
    /// Largest number of factors examined for the unrestricted product
    /// conditions.
    pub product_bound: usize,
    /// Products with more points are skipped and the check marked bounded.
    pub max_points: usize,
    /// Cap on the number of factor multisets examined per condition.
    pub max_products: u64,
    /// Products with at most this many `|I|`-sequences are also decided by
    /// scanning them directly.
    pub cross_check_limit: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            product_bound: 3,
            max_points: MAX_PRODUCT_POINTS,
            max_products: 1 << 20,
            cross_check_limit: 1 << 14,
        }
    }
}

/// A product of catalogue members and a sequence in it without limit
/// points for any filter of the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRefutation {
    /// Catalogue indices of the factors.
    pub factors: Vec<usize>,
    /// The sequence as factor tuples, one per index.
    pub sequence: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub method: CheckMethod,
    pub products_checked: u64,
    pub products_skipped: u64,
    pub refutation: Option<ProductRefutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterChoice {
    /// Position of the filter in the family.
    pub position: usize,
    pub filter: FiniteFilter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UltrafilterNecessity {
    /// A `P`-compact member with a disjoint pair of nonempty closed sets.
    pub space: usize,
    pub pair: (Vec<usize>, Vec<usize>),
    pub filter_is_ultrafilter: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm21Report {
    pub family: FilterFamily,
    pub catalogue_size: usize,
    /// Per catalogue member.
    pub p_compact: Vec<bool>,
    /// A filter whose compactness agrees with `P`-compactness on all of `K`.
    pub cond3: Option<FilterChoice>,
    /// Products of exactly `|P|` `P`-compact members.
    pub cond2: ConditionCheck,
    /// Products of any number of `P`-compact members.
    pub cond1: ConditionCheck,
    pub ultrafilter_necessity: Option<UltrafilterNecessity>,
    pub counterexample: Option<DiagonalWitness>,
    /// Whether the counterexample product was also found non-compact by a
    /// direct scan; `None` when too large to scan.
    pub counterexample_rechecked: Option<bool>,
    pub bounded: bool,
    pub consistent: bool,
}

struct Context<'a> {
    oracle: &'a ProfileOracle,
    catalogue: &'a SpaceCatalogue,
    ids: Vec<usize>,
    index: &'a IndexSet,
    filters: &'a [FiniteFilter],
    cores: u64,
    bounds: &'a Bounds,
}

impl<'a> Context<'a> {
    fn new(
        oracle: &'a ProfileOracle,
        catalogue: &'a SpaceCatalogue,
        family: &'a FilterFamily,
        bounds: &'a Bounds,
    ) -> Result<Self> {
        let (index, filters) = family.as_finite()?;
        if index.len() != oracle.k() {
            return Err(input(format!(
                "oracle works over {} indices, family over {}",
                oracle.k(),
                index.len()
            )));
        }
        let ids = catalogue
            .spaces
            .iter()
            .map(|x| oracle.intern(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Context {
            oracle,
            catalogue,
            ids,
            index,
            filters,
            cores: cores_mask(filters),
            bounds,
        })
    }

    fn compact_for(&self, member: usize, cores: u64) -> Result<bool> {
        Ok(self.oracle.profiles(&[self.ids[member]])?.refuting(cores).is_none())
    }

    fn f_compact(&self, member: usize, f: &FiniteFilter) -> Result<bool> {
        self.compact_for(member, 1 << f.core())
    }

    fn p_compact(&self, member: usize) -> Result<bool> {
        self.compact_for(member, self.cores)
    }

    fn refutation(&self, factors: &[usize]) -> Result<ProductRefutation> {
        let spaces: Vec<FiniteSpace> =
            factors.iter().map(|&i| self.catalogue.spaces[i].clone()).collect();
        let per_factor = refuting_sequence(&spaces, self.index.len(), self.cores)?
            .ok_or_else(|| internal("profile algebra reported a refutation that does not exist"))?;
        let sequence: Vec<Vec<usize>> = (0..self.index.len())
            .map(|i| per_factor.iter().map(|s| s[i]).collect())
            .collect();
        if let Ok(product) = ProductSpace::new(spaces, ProductMode::Product) {
            let values =
                sequence.iter().map(|t| product.encode(t)).collect::<Result<Vec<_>>>()?;
            let seq = IndexedSequence::new(self.index.clone(), values)?;
            for f in self.filters {
                if !limit_set(&product, &seq, f)?.is_empty() {
                    return Err(internal("refuting product sequence converges"));
                }
            }
        }
        Ok(ProductRefutation {
            factors: factors.to_vec(),
            sequence,
        })
    }

    fn points(&self, factors: &[usize]) -> Option<usize> {
        factors.iter().try_fold(1usize, |acc, &i| {
            acc.checked_mul(self.catalogue.spaces[i].len())
                .filter(|&p| p <= self.bounds.max_points)
        })
    }

    /// Checks every product of `sizes` factors drawn with repetition from
    /// `members`, in ascending size and lexicographic order.
    fn scan(&self, members: &[usize], sizes: impl IntoIterator<Item = usize>) -> Result<ConditionCheck> {
        let mut checked = 0u64;
        let mut skipped = 0u64;
        let mut capped = false;
        for s in sizes {
            for factors in members.iter().copied().combinations_with_replacement(s) {
                if checked + skipped >= self.bounds.max_products {
                    capped = true;
                    break;
                }
                if self.points(&factors).is_none() {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let ids: Vec<usize> = factors.iter().map(|&i| self.ids[i]).collect();
                if self.oracle.profiles(&ids)?.refuting(self.cores).is_some() {
                    return Ok(ConditionCheck {
                        holds: false,
                        method: CheckMethod::Exact,
                        products_checked: checked,
                        products_skipped: skipped,
                        refutation: Some(self.refutation(&factors)?),
                    });
                }
            }
        }
        Ok(ConditionCheck {
            holds: true,
            method: if skipped == 0 && !capped {
                CheckMethod::Exact
            } else {
                CheckMethod::Bounded
            },
            products_checked: checked,
            products_skipped: skipped,
            refutation: None,
        })
    }

    fn first_filter(&self, agrees: impl Fn(&FiniteFilter) -> Result<bool>) -> Result<Option<FilterChoice>> {
        for (position, f) in self.filters.iter().enumerate() {
            if agrees(f)? {
                return Ok(Some(FilterChoice {
                    position,
                    filter: f.clone(),
                }));
            }
        }
        Ok(None)
    }
}

fn disjoint_pair(x: &FiniteSpace) -> Option<(PointSet, PointSet)> {
    x.ultraconnected().pair
}

pub fn thm21_check(catalogue: &SpaceCatalogue, family: &FilterFamily, bounds: &Bounds) -> Result<Thm21Report> {
    let (index, _) = family.as_finite()?;
    let oracle = ProfileOracle::new(index.len(), bounds.cross_check_limit)?;
    thm21_check_with(&oracle, catalogue, family, bounds)
}

/// As [`thm21_check`], sharing the product cache in `oracle` across calls.
pub fn thm21_check_with(
    oracle: &ProfileOracle,
    catalogue: &SpaceCatalogue,
    family: &FilterFamily,
    bounds: &Bounds,
) -> Result<Thm21Report> {
    let cx = Context::new(oracle, catalogue, family, bounds)?;
    let n = catalogue.len();
    let p_compact = (0..n).map(|i| cx.p_compact(i)).collect::<Result<Vec<_>>>()?;
    let members: Vec<usize> = (0..n).filter(|&i| p_compact[i]).collect();

    let cond3 = cx.first_filter(|f| {
        for i in 0..n {
            if cx.f_compact(i, f)? != p_compact[i] {
                return Ok(false);
            }
        }
        Ok(true)
    })?;

    let cond2 = cx.scan(&members, [cx.filters.len()])?;
    let mut cond1 = cx.scan(&members, 1..=bounds.product_bound)?;
    let mut bounded = cond1.method == CheckMethod::Bounded || cond2.method == CheckMethod::Bounded;

    let mut counterexample = None;
    let mut counterexample_rechecked = None;
    if cond3.is_none() {
        // Some X_F per filter: P-compact but not F-compact.
        let mut witnesses = Vec::new();
        let mut chosen = Vec::new();
        for f in cx.filters {
            let pick = members
                .iter()
                .copied()
                .map(|i| cx.f_compact(i, f).map(|c| (!c).then_some(i)))
                .find_map(|r| r.transpose())
                .transpose()?
                .ok_or_else(|| internal("condition (3) fails but no member separates a filter"))?;
            let space = catalogue.spaces[pick].clone();
            let seq = refuting_sequence(std::slice::from_ref(&space), cx.index.len(), 1 << f.core())?
                .and_then(|mut v| v.pop())
                .ok_or_else(|| internal("no sequence refutes F-compactness"))?;
            witnesses.push(FactorWitness {
                space,
                sequence: IndexedSequence::new(cx.index.clone(), seq)?,
            });
            chosen.push(pick);
        }
        match diagonal_counterexample(family, witnesses) {
            Ok(w) => {
                counterexample_rechecked = match is_p_compact(&w.product, family) {
                    Ok(v) => Some(!v.value),
                    Err(LabError::Resource(_)) => None,
                    Err(e) => return Err(e),
                };
                if cond1.holds {
                    cond1 = ConditionCheck {
                        holds: false,
                        method: CheckMethod::Exact,
                        refutation: Some(ProductRefutation {
                            factors: chosen,
                            sequence: w.diagonal_tuples.clone(),
                        }),
                        ..cond1
                    };
                }
                counterexample = Some(w);
            }
            Err(LabError::Resource(_)) => bounded = true,
            Err(e) => return Err(e),
        }
    } else if cond1.holds {
        cond1.method = CheckMethod::ViaImplication;
    }

    let ultrafilter_necessity = match &cond3 {
        Some(choice) => members.iter().find_map(|&i| {
            disjoint_pair(&catalogue.spaces[i]).map(|(a, b)| UltrafilterNecessity {
                space: i,
                pair: (a.to_vec(), b.to_vec()),
                filter_is_ultrafilter: choice.filter.is_ultrafilter(),
            })
        }),
        None => None,
    };

    let consistent = match &cond3 {
        Some(_) => {
            cond1.holds
                && cond2.holds
                && ultrafilter_necessity.as_ref().is_none_or(|u| u.filter_is_ultrafilter)
        }
        None => {
            !cond2.holds
                && !cond1.holds
                && (counterexample.is_some() || bounded)
                && counterexample_rechecked != Some(false)
        }
    };

    Ok(Thm21Report {
        family: family.clone(),
        catalogue_size: n,
        p_compact,
        cond3,
        cond2,
        cond1,
        ultrafilter_necessity,
        counterexample,
        counterexample_rechecked,
        bounded,
        consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cor22Report {
    pub family: FilterFamily,
    pub catalogue_size: usize,
    /// Products of any number of members, up to the bound.
    pub cond1: ConditionCheck,
    /// Products of exactly `|P|` members.
    pub cond2: ConditionCheck,
    /// A filter for which every member is compact.
    pub cond3: Option<FilterChoice>,
    pub consistent: bool,
}

pub fn cor22_check(catalogue: &SpaceCatalogue, family: &FilterFamily, bounds: &Bounds) -> Result<Cor22Report> {
    let (index, filters) = family.as_finite()?;
    let oracle = ProfileOracle::new(index.len(), bounds.cross_check_limit)?;
    let cx = Context::new(&oracle, catalogue, family, bounds)?;
    let all: Vec<usize> = (0..catalogue.len()).collect();
    let cond3 = cx.first_filter(|f| {
        for &i in &all {
            if !cx.f_compact(i, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let cond2 = cx.scan(&all, [filters.len()])?;
    let cond1 = cx.scan(&all, 1..=bounds.product_bound)?;
    let consistent = cond3.is_some() == cond2.holds
        && (cond3.is_none() || cond1.holds)
        && (bounds.product_bound < filters.len() || !cond1.holds || cond2.holds);
    Ok(Cor22Report {
        family: family.clone(),
        catalogue_size: catalogue.len(),
        cond1,
        cond2,
        cond3,
        consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cor23Report {
    pub family: FilterFamily,
    pub space: FiniteSpace,
    /// `X^{|P|}` is `P`-compact.
    pub power_compact: bool,
    /// The same, by scanning the power's sequences; `None` when too large.
    pub power_compact_direct: Option<bool>,
    /// First `F ∈ P` with `X` `F`-compact.
    pub filter: Option<FilterChoice>,
    /// Every power up to the bound is `P`-compact.
    pub powers: ConditionCheck,
    pub ultrafilter_necessity: Option<UltrafilterNecessity>,
    pub consistent: bool,
}

pub fn cor23_check(space: &FiniteSpace, family: &FilterFamily, power_bound: usize) -> Result<Cor23Report> {
    let (index, filters) = family.as_finite()?;
    let bounds = Bounds {
        product_bound: power_bound,
        ..Bounds::default()
    };
    let oracle = ProfileOracle::new(index.len(), bounds.cross_check_limit)?;
    let catalogue = SpaceCatalogue::labeled(vec![space.clone()]);
    let cx = Context::new(&oracle, &catalogue, family, &bounds)?;
    let power_ids = vec![cx.ids[0]; filters.len()];
    let power_compact = oracle.profiles(&power_ids)?.refuting(cx.cores).is_none();
    let power_compact_direct = match ProductSpace::new(vec![space.clone(); filters.len()], ProductMode::Product) {
        Ok(p) => match is_p_compact(&p, family) {
            Ok(v) => Some(v.value),
            Err(LabError::Resource(_)) => None,
            Err(e) => return Err(e),
        },
        Err(LabError::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    let filter = cx.first_filter(|f| cx.f_compact(0, f))?;
    let powers = cx.scan(&[0], 1..=power_bound)?;
    let ultrafilter_necessity = filter.as_ref().and_then(|choice| {
        disjoint_pair(space).map(|(a, b)| UltrafilterNecessity {
            space: 0,
            pair: (a.to_vec(), b.to_vec()),
            filter_is_ultrafilter: choice.filter.is_ultrafilter(),
        })
    });
    let consistent = power_compact == filter.is_some()
        && power_compact_direct.is_none_or(|d| d == power_compact)
        && (filter.is_none() || powers.holds)
        && (power_bound < filters.len() || !powers.holds || power_compact)
        && ultrafilter_necessity.as_ref().is_none_or(|u| u.filter_is_ultrafilter);
    Ok(Cor23Report {
        family: family.clone(),
        space: space.clone(),
        power_compact,
        power_compact_direct,
        filter,
        powers,
        ultrafilter_necessity,
        consistent,
    })
}
