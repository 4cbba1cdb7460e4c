use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{input, resource, Result};
use crate::pointset::PointSet;
use crate::space::FiniteSpace;

/// Cap on the number of subfamilies a covering scan may visit.
pub const MAX_COVERS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringVerdict {
    pub value: bool,
    /// An open cover with no subcover of fewer than `m` members.
    pub witness: Option<Vec<Vec<usize>>>,
    pub covers_checked: u64,
}

fn covers(n: usize, family: &[&PointSet]) -> bool {
    let mut u = PointSet::empty(n);
    for s in family {
        u.union_with(s);
    }
    u.is_full()
}

fn binomial_sum(total: usize, upto: usize) -> Option<u64> {
    let mut sum = 0u64;
    let mut c = 1u64;
    for s in 0..=upto.min(total) {
        sum = sum.checked_add(c)?;
        c = c.checked_mul((total - s) as u64)? / (s as u64 + 1);
    }
    Some(sum)
}

/// Every open cover with at most `n` members has a subcover with fewer than
/// `m` members. Covers are sets of distinct nonempty opens; the empty set
/// never helps cover anything.
pub fn covering_compact(space: &FiniteSpace, m: usize, n: usize) -> Result<CoveringVerdict> {
    if m == 0 {
        return Err(input("subcover bound m must be at least 1"));
    }
    let opens: Vec<&PointSet> = space.opens().iter().filter(|o| !o.is_empty()).collect();
    let size = n.min(opens.len());
    if binomial_sum(opens.len(), size).is_none_or(|c| c > MAX_COVERS) {
        return Err(resource(format!(
            "covers of up to {size} of {} opens exceed the scan limit",
            opens.len()
        )));
    }
    let mut checked = 0;
    for s in 1..=size {
        for family in opens.iter().copied().combinations(s) {
            if !covers(space.len(), &family) {
                continue;
            }
            checked += 1;
            let small = (1..m.min(s + 1))
                .any(|t| family.iter().copied().combinations(t).any(|sub| covers(space.len(), &sub)));
            if !small {
                return Ok(CoveringVerdict {
                    value: false,
                    witness: Some(family.iter().map(|o| o.to_vec()).collect()),
                    covers_checked: checked,
                });
            }
        }
    }
    Ok(CoveringVerdict {
        value: true,
        witness: None,
        covers_checked: checked,
    })
}
