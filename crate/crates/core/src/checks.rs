//! Named exhaustive checks over bounded grids, each emitting one
//! [`Certificate`] per instance.
//!
//! Instances are enumerated in a fixed order and results are collected in
//! that order whatever the worker count, so a check's certificate stream is
//! a pure function of its name and bounds.

use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::convergence::{
    all_sequences, every_sequence_converges, is_f_compact, is_p_compact, is_p_pseudocompact,
    is_sequentially_compact, limit_set_definitional, limit_set_shortcut, sequence_count,
    IndexedSequence,
};
use crate::error::{input, resource, LabError, Result};
use crate::filter::{enumerate_filters, FilterFamily, FiniteFilter, IndexSet};
use crate::product::{
    non_ultra_witness_sequence, projection_law_check, ProductMode, ProductSpace, ProfileOracle,
    MAX_PROFILE_INDEX,
};
use crate::space::{topologies_up_to, DedupMode, EnumerationLimits, FiniteSpace, SpaceCatalogue};
use crate::theorem::{comfort_report, thm21_check_with, Bounds};

/// Largest number of instances a single check may enumerate.
pub const MAX_INSTANCES: usize = 1 << 20;

/// The outcome of one check on one instance, with everything needed to
/// reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub claim: String,
    pub inputs: Value,
    /// Whether the claimed property held on this instance.
    pub value: bool,
    pub witness: Option<Value>,
    pub method: String,
    /// Number of objects examined (sequences, pairs, products, ...).
    pub checked: u64,
}

/// Re-runs the check named in `cert` on its recorded inputs and compares
/// the result field by field.
pub fn reverify(cert: &Certificate) -> Result<bool> {
    Ok(&run_instance(&cert.claim, &cert.inputs)? == cert)
}

/// Grid bounds shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CheckBounds {
    /// Spaces have between `min_points` and `max_points` points.
    pub min_points: usize,
    pub max_points: usize,
    /// Filters live on index sets of size at most this.
    pub max_index: usize,
    /// Factor bound for unrestricted product conditions.
    pub product_bound: usize,
    /// Catalogues drawn for product theorems have at most this many members.
    pub max_catalogue: usize,
    pub dedup: DedupMode,
}

impl Default for CheckBounds {
    fn default() -> Self {
        CheckBounds {
            min_points: 1,
            max_points: 3,
            max_index: 2,
            product_bound: 3,
            max_catalogue: 3,
            dedup: DedupMode::Labeled,
        }
    }
}

pub struct CheckSpec {
    pub name: &'static str,
    pub summary: &'static str,
}

pub const CHECKS: &[CheckSpec] = &[
    CheckSpec {
        name: "limit-set-oracle",
        summary: "definitional and core-closure limit sets agree on every sequence",
    },
    CheckSpec {
        name: "f-compact-structure",
        summary: "F-compact iff |core F|-ultraconnected",
    },
    CheckSpec {
        name: "f-compact-not-core-ultraconnected",
        summary: "no space is F-compact without being |core F|-ultraconnected",
    },
    CheckSpec {
        name: "lemma51",
        summary: "every sequence converges iff ultraconnected and sequentially compact",
    },
    CheckSpec {
        name: "projection-law",
        summary: "a product sequence has an F-limit iff each projection does",
    },
    CheckSpec {
        name: "ultrafilter-necessity",
        summary: "a disjoint closed pair defeats every non-ultrafilter",
    },
    CheckSpec {
        name: "pseudocompact",
        summary: "sequencewise P-compact implies sequencewise P-pseudocompact",
    },
    CheckSpec {
        name: "comfort-collapse",
        summary: "the Comfort preorder over the catalogue is core-size comparison",
    },
    CheckSpec {
        name: "thm21",
        summary: "product theorem conditions agree on every small catalogue and family",
    },
];

pub fn is_registered(name: &str) -> bool {
    CHECKS.iter().any(|c| c.name == name)
}

fn unknown(name: &str) -> LabError {
    input(format!(
        "unknown check {name:?}; known: {}",
        CHECKS.iter().map(|c| c.name).join(", ")
    ))
}

fn parse<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| input(format!("bad check inputs: {e}")))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("lab types serialize")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFilter {
    space: FiniteSpace,
    filter: FiniteFilter,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceOnly {
    space: FiniteSpace,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorsFilter {
    factors: Vec<FiniteSpace>,
    filter: FiniteFilter,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFamily {
    space: FiniteSpace,
    family: FilterFamily,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogueFilters {
    catalogue: SpaceCatalogue,
    filters: Vec<FiniteFilter>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogueFamily {
    catalogue: SpaceCatalogue,
    family: FilterFamily,
    bounds: Bounds,
}

fn cert(claim: &str, inputs: &Value, value: bool, witness: Option<Value>, method: &str, checked: u64) -> Certificate {
    Certificate {
        claim: claim.to_string(),
        inputs: inputs.clone(),
        value,
        witness,
        method: method.to_string(),
        checked,
    }
}

/// Runs one named check on one instance.
pub fn run_instance(name: &str, inputs: &Value) -> Result<Certificate> {
    match name {
        "limit-set-oracle" => {
            let SpaceFilter { space, filter } = parse(inputs)?;
            let k = filter.index().len();
            let count = sequence_count(space.len(), k)?;
            let bad = all_sequences(space.len(), k).find_map(|v| {
                let def = limit_set_definitional(&space, &v, &filter);
                let short = limit_set_shortcut(&space, &v, filter.core());
                (def != short).then(|| {
                    json!({"sequence": v, "definitional": def.to_vec(), "shortcut": short.to_vec()})
                })
            });
            Ok(cert(name, inputs, bad.is_none(), bad, "exhaustive", count))
        }
        "f-compact-structure" | "f-compact-not-core-ultraconnected" => {
            let SpaceFilter { space, filter } = parse(inputs)?;
            let fc = is_f_compact(&space, &filter)?;
            let mu = space.is_m_ultraconnected(filter.core_size())?;
            let value = if name == "f-compact-structure" {
                fc.value == mu
            } else {
                !fc.value || mu
            };
            let witness = json!({
                "f-compact": fc.value,
                "core-ultraconnected": mu,
                "sequence": fc.witness,
            });
            Ok(cert(name, inputs, value, Some(witness), "exhaustive", fc.checked))
        }
        "lemma51" => {
            let SpaceOnly { space } = parse(inputs)?;
            let all = every_sequence_converges(&space)?;
            let seq = is_sequentially_compact(&space)?;
            let ultra = space.is_ultraconnected();
            let witness = json!({
                "every-sequence-converges": all.value,
                "ultraconnected": ultra,
                "sequentially-compact": seq.value,
                "evidence": all.witness,
            });
            Ok(cert(
                name,
                inputs,
                all.value == (ultra && seq.value),
                Some(witness),
                "EP-restricted",
                all.checked + seq.checked,
            ))
        }
        "projection-law" => {
            let FactorsFilter { factors, filter } = parse(inputs)?;
            let product = ProductSpace::new(factors, ProductMode::Product)?;
            let materialized = product.rectangle_closure()?;
            let k = filter.index().len();
            let count = sequence_count(product.len(), k)?;
            let mut bad = None;
            for v in all_sequences(product.len(), k) {
                let seq = IndexedSequence::new(filter.index().clone(), v)?;
                let law = projection_law_check(&product, Some(&materialized), &seq, &filter)?;
                if !law.holds() || !law.holds_exactly() {
                    let tuples: Vec<Vec<usize>> = seq.values.iter().map(|&p| product.decode(p)).collect();
                    bad = Some(json!({"sequence": tuples, "law": law}));
                    break;
                }
            }
            Ok(cert(name, inputs, bad.is_none(), bad, "exhaustive", count))
        }
        "ultrafilter-necessity" => {
            let SpaceFilter { space, filter } = parse(inputs)?;
            let pairs = space.disjoint_closed_pairs();
            let mut bad = None;
            for (c1, c2) in &pairs {
                match non_ultra_witness_sequence(&space, &filter, c1, c2) {
                    Ok(_) => {}
                    Err(LabError::Internal(msg)) => {
                        bad = Some(json!({"pair": [c1.to_vec(), c2.to_vec()], "error": msg}));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(cert(name, inputs, bad.is_none(), bad, "exhaustive", pairs.len() as u64))
        }
        "pseudocompact" => {
            let SpaceFamily { space, family } = parse(inputs)?;
            let pc = is_p_compact(&space, &family)?;
            let pp = is_p_pseudocompact(&space, &family)?;
            let witness = json!({"p-compact": pc.value, "p-pseudocompact": pp.value, "set-sequence": pp.witness});
            Ok(cert(name, inputs, !pc.value || pp.value, Some(witness), "exhaustive", pc.checked + pp.checked))
        }
        "comfort-collapse" => {
            let CatalogueFilters { catalogue, filters } = parse(inputs)?;
            let r = comfort_report(&filters, &catalogue)?;
            let witness = json!({
                "classes": r.classes,
                "minimum": r.minimum,
                "core-size-mismatches": r.core_size_mismatches,
            });
            let pairs = (filters.len() * filters.len()) as u64;
            Ok(cert(name, inputs, r.matches_core_size(), Some(witness), "exhaustive", pairs))
        }
        "thm21" => {
            let CatalogueFamily { catalogue, family, bounds } = parse(inputs)?;
            let (index, _) = family.as_finite()?;
            let r = thm21_check_with(shared_oracle(index.len())?, &catalogue, &family, &bounds)?;
            let witness = json!({
                "p-compact": r.p_compact,
                "cond3": r.cond3.as_ref().map(|c| c.position),
                "cond2": r.cond2.holds,
                "cond1": r.cond1.holds,
                "cond1-method": r.cond1.method,
                "ultrafilter-necessity": r.ultrafilter_necessity,
                "diagonal": r.counterexample.as_ref().map(|w| &w.diagonal_tuples),
                "bounded": r.bounded,
            });
            let method = if r.bounded { "bounded" } else { "exact" };
            let checked = r.cond1.products_checked + r.cond2.products_checked;
            Ok(cert(name, inputs, r.consistent, Some(witness), method, checked))
        }
        _ => Err(unknown(name)),
    }
}

/// Product caches shared by every `thm21` instance, one per index size.
fn shared_oracle(k: usize) -> Result<&'static ProfileOracle> {
    static ORACLES: OnceLock<Vec<ProfileOracle>> = OnceLock::new();
    if k == 0 || k > MAX_PROFILE_INDEX {
        return Err(input(format!("index size {k} outside 1..={MAX_PROFILE_INDEX}")));
    }
    let all = ORACLES.get_or_init(|| {
        (1..=MAX_PROFILE_INDEX)
            .map(|k| ProfileOracle::new(k, Bounds::default().cross_check_limit).expect("k in range"))
            .collect()
    });
    Ok(&all[k - 1])
}

fn catalogue(b: &CheckBounds, dedup: DedupMode) -> Result<SpaceCatalogue> {
    let all = topologies_up_to(b.max_points, dedup, &EnumerationLimits::default())?;
    Ok(SpaceCatalogue {
        dedup,
        spaces: all.spaces.into_iter().filter(|x| x.len() >= b.min_points).collect(),
    })
}

fn spaces(b: &CheckBounds, dedup: DedupMode) -> Result<Vec<FiniteSpace>> {
    Ok(catalogue(b, dedup)?.spaces)
}

fn filters(b: &CheckBounds) -> Result<Vec<FiniteFilter>> {
    let mut out = Vec::new();
    for k in 1..=b.max_index {
        out.extend(enumerate_filters(&IndexSet::standard(k)?, b.max_index)?);
    }
    Ok(out)
}

fn families(b: &CheckBounds) -> Result<Vec<FilterFamily>> {
    let mut out = Vec::new();
    for k in 1..=b.max_index {
        let fs = enumerate_filters(&IndexSet::standard(k)?, b.max_index)?;
        if fs.len() >= 20 {
            return Err(resource(format!("{} filters on {k} indices give too many families", fs.len())));
        }
        for mask in 1u32..1 << fs.len() {
            let chosen = (0..fs.len()).filter(|i| mask >> i & 1 == 1).map(|i| fs[i].clone()).collect();
            out.push(FilterFamily::finite(chosen)?);
        }
    }
    Ok(out)
}

fn guard(v: Vec<Value>) -> Result<Vec<Value>> {
    if v.len() > MAX_INSTANCES {
        return Err(resource(format!("{} instances exceed the limit {MAX_INSTANCES}", v.len())));
    }
    Ok(v)
}

/// The instances of check `name` within `b`, in scan order.
pub fn instances(name: &str, b: &CheckBounds) -> Result<Vec<Value>> {
    if b.min_points == 0 || b.min_points > b.max_points || b.max_index == 0 {
        return Err(input("bounds must be positive and min-points at most max-points"));
    }
    let pairs = |xs: &[FiniteSpace], fs: &[FiniteFilter]| -> Vec<Value> {
        xs.iter()
            .cartesian_product(fs)
            .map(|(x, f)| to_value(&SpaceFilter { space: x.clone(), filter: f.clone() }))
            .collect()
    };
    let v = match name {
        "limit-set-oracle" | "f-compact-structure" | "f-compact-not-core-ultraconnected" => {
            pairs(&spaces(b, b.dedup)?, &filters(b)?)
        }
        "lemma51" => spaces(b, b.dedup)?
            .into_iter()
            .map(|space| to_value(&SpaceOnly { space }))
            .collect(),
        "projection-law" => {
            let xs = spaces(b, b.dedup)?;
            let fs = filters(b)?;
            let mut out = Vec::new();
            for (x, y) in xs.iter().cartesian_product(&xs) {
                for f in &fs {
                    out.push(to_value(&FactorsFilter {
                        factors: vec![x.clone(), y.clone()],
                        filter: f.clone(),
                    }));
                }
            }
            out
        }
        "ultrafilter-necessity" => {
            let xs: Vec<FiniteSpace> =
                spaces(b, b.dedup)?.into_iter().filter(|x| !x.is_ultraconnected()).collect();
            let fs: Vec<FiniteFilter> = filters(b)?.into_iter().filter(|f| !f.is_ultrafilter()).collect();
            pairs(&xs, &fs)
        }
        "pseudocompact" => {
            let xs = spaces(b, b.dedup)?;
            let ps = families(b)?;
            xs.iter()
                .cartesian_product(&ps)
                .map(|(x, p)| to_value(&SpaceFamily { space: x.clone(), family: p.clone() }))
                .collect()
        }
        "comfort-collapse" => {
            vec![to_value(&CatalogueFilters {
                catalogue: catalogue(b, b.dedup)?,
                filters: filters(b)?,
            })]
        }
        "thm21" => {
            // Compactness is a homeomorphism invariant, so catalogues are
            // drawn from homeomorphism classes.
            let xs = spaces(b, DedupMode::UpToHomeomorphism)?;
            let ps = families(b)?;
            let bounds = Bounds {
                product_bound: b.product_bound,
                ..Bounds::default()
            };
            let mut out = Vec::new();
            for s in 1..=b.max_catalogue.min(xs.len()) {
                for members in xs.iter().cloned().combinations(s) {
                    let catalogue = SpaceCatalogue::labeled(members);
                    for p in &ps {
                        out.push(to_value(&CatalogueFamily {
                            catalogue: catalogue.clone(),
                            family: p.clone(),
                            bounds,
                        }));
                        if out.len() > MAX_INSTANCES {
                            return guard(out);
                        }
                    }
                }
            }
            out
        }
        _ => return Err(unknown(name)),
    };
    guard(v)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| resource(format!("cannot start workers: {e}")))
}

/// Every certificate of check `name`, in instance order.
pub fn run_check(name: &str, b: &CheckBounds, jobs: usize) -> Result<Vec<Certificate>> {
    let inst = instances(name, b)?;
    let results: Vec<Result<Certificate>> =
        pool(jobs)?.install(|| inst.par_iter().map(|v| run_instance(name, v)).collect());
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub check: String,
    pub checked: u64,
    pub violations: u64,
}

/// Certificates of the instances where the property failed, and a summary.
pub fn search(name: &str, b: &CheckBounds, jobs: usize) -> Result<(Vec<Certificate>, SearchSummary)> {
    let all = run_check(name, b, jobs)?;
    let checked = all.len() as u64;
    let bad: Vec<Certificate> = all.into_iter().filter(|c| !c.value).collect();
    let summary = SearchSummary {
        check: name.to_string(),
        checked,
        violations: bad.len() as u64,
    };
    Ok((bad, summary))
}
