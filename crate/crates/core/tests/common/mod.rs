//! Brute-force oracles that share no code with the library. Spaces are
//! lists of open sets as bitmasks over `0..n`.
#![allow(dead_code)]

use filterlab::space::FiniteSpace;

/// Every topology on `0..n` found by deciding each proper nonempty subset
/// in increasing mask order and pruning on closure violations.
pub fn labeled_topologies(n: usize) -> Vec<Vec<u32>> {
    let full: u32 = (1u32 << n) - 1;
    let mut out = Vec::new();
    let mut chosen = vec![0u32];
    decide(1, full, 0u64, &mut chosen, &mut out);
    out
}

fn decide(m: u32, full: u32, forced: u64, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if m == full {
        let mut fam = chosen.clone();
        fam.push(full);
        out.push(fam);
        return;
    }
    // Leave `m` out.
    if forced >> m & 1 == 0 {
        decide(m + 1, full, forced, chosen, out);
    }
    // Put `m` in: smaller intersections must already be present, larger
    // unions become forced.
    let mut f = forced;
    for &a in chosen.iter() {
        let i = a & m;
        if i != m && !chosen.contains(&i) {
            return;
        }
        let u = a | m;
        if u != m && u != full {
            f |= 1 << u;
        }
    }
    chosen.push(m);
    decide(m + 1, full, f, chosen, out);
    chosen.pop();
}

/// Least sorted image of `opens` under all relabelings of `0..n`.
pub fn canonical(n: usize, opens: &[u32]) -> Vec<u32> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u32>> = None;
    loop {
        let mut img: Vec<u32> = opens
            .iter()
            .map(|&o| (0..n).filter(|&p| o >> p & 1 == 1).fold(0, |acc, p| acc | 1 << perm[p]))
            .collect();
        img.sort_unstable();
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn masks(x: &FiniteSpace) -> Vec<u32> {
    x.opens().iter().map(|o| o.to_mask() as u32).collect()
}

pub fn space(n: usize, opens: &[u32]) -> FiniteSpace {
    let lists: Vec<Vec<usize>> = opens
        .iter()
        .map(|&o| (0..n).filter(|&p| o >> p & 1 == 1).collect())
        .collect();
    FiniteSpace::from_open_lists(n, &lists).unwrap()
}

/// Points `x` such that every open `U ∋ x` is hit on all of `core`.
pub fn limit(n: usize, opens: &[u32], values: &[usize], core: u64) -> u32 {
    let mut out = 0;
    for x in 0..n {
        let ok = opens.iter().filter(|&&u| u >> x & 1 == 1).all(|&u| {
            let hit = values
                .iter()
                .enumerate()
                .filter(|(_, &v)| u >> v & 1 == 1)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            hit & core == core
        });
        if ok {
            out |= 1 << x;
        }
    }
    out
}

/// Same test with "meets `U`" in place of "lies in `U`".
pub fn set_limit(n: usize, opens: &[u32], sets: &[u32], core: u64) -> u32 {
    let mut out = 0;
    for x in 0..n {
        let ok = opens.iter().filter(|&&u| u >> x & 1 == 1).all(|&u| {
            let hit = sets
                .iter()
                .enumerate()
                .filter(|(_, &s)| s & u != 0)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            hit & core == core
        });
        if ok {
            out |= 1 << x;
        }
    }
    out
}

/// All `k`-tuples over `0..n`.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every `k`-sequence has a limit under some core in `cores`.
pub fn p_compact(n: usize, opens: &[u32], k: usize, cores: &[u64]) -> bool {
    tuples(n, k)
        .iter()
        .all(|s| cores.iter().any(|&c| limit(n, opens, s, c) != 0))
}

/// Every `k`-sequence of nonempty opens has a set-limit under some core.
pub fn p_pseudocompact(n: usize, opens: &[u32], k: usize, cores: &[u64]) -> bool {
    let nonempty: Vec<u32> = opens.iter().copied().filter(|&o| o != 0).collect();
    tuples(nonempty.len(), k).iter().all(|t| {
        let sets: Vec<u32> = t.iter().map(|&i| nonempty[i]).collect();
        cores.iter().any(|&c| set_limit(n, opens, &sets, c) != 0)
    })
}

/// Closed sets of the space, as complements of the opens.
pub fn closed(n: usize, opens: &[u32]) -> Vec<u32> {
    let full = (1u32 << n) - 1;
    opens.iter().map(|&o| full & !o).collect()
}
