use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A subset of ω given by a finite prefix and a repeating cycle: for
/// `m >= prefix.len()`, membership is `cycle[(m - prefix.len()) % cycle.len()]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicSet {
    prefix: Vec<bool>,
    cycle: Vec<bool>,
}

impl EventuallyPeriodicSet {
    pub fn new(prefix: Vec<bool>, cycle: Vec<bool>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(input("eventually periodic sets need a nonempty cycle"));
        }
        Ok(EventuallyPeriodicSet { prefix, cycle })
    }

    /// All of ω.
    pub fn omega() -> Self {
        EventuallyPeriodicSet {
            prefix: vec![],
            cycle: vec![true],
        }
    }

    pub fn evens() -> Self {
        EventuallyPeriodicSet {
            prefix: vec![],
            cycle: vec![true, false],
        }
    }

    /// Samples `f` over a prefix of `prefix_len` and one following period.
    pub fn from_fn(prefix_len: usize, period: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if period == 0 {
            return Err(input("period must be positive"));
        }
        Ok(EventuallyPeriodicSet {
            prefix: (0..prefix_len).map(&f).collect(),
            cycle: (prefix_len..prefix_len + period).map(f).collect(),
        })
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[bool] {
        &self.cycle
    }

    pub fn contains(&self, m: usize) -> bool {
        if m < self.prefix.len() {
            self.prefix[m]
        } else {
            self.cycle[(m - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.cycle.iter().any(|&b| b)
    }

    pub fn complement(&self) -> Self {
        EventuallyPeriodicSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            cycle: self.cycle.iter().map(|b| !b).collect(),
        }
    }

    /// Prefix length and period over which both sets are periodic.
    pub(crate) fn alignment(&self, other: &Self) -> (usize, usize) {
        (
            self.prefix.len().max(other.prefix.len()),
            lcm(self.cycle.len(), other.cycle.len()),
        )
    }

    pub fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let (t, p) = self.alignment(other);
        EventuallyPeriodicSet {
            prefix: (0..t).map(|m| op(self.contains(m), other.contains(m))).collect(),
            cycle: (t..t + p).map(|m| op(self.contains(m), other.contains(m))).collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EpWire {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| u8::from(b)).collect()
}

fn flags(v: &[u8]) -> Result<Vec<bool>> {
    v.iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(input(format!("bit flag must be 0 or 1, got {b}"))),
        })
        .collect()
}

impl Serialize for EventuallyPeriodicSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EpWire {
            prefix: bits(&self.prefix),
            cycle: bits(&self.cycle),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EventuallyPeriodicSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = EpWire::deserialize(d)?;
        let prefix = flags(&w.prefix).map_err(serde::de::Error::custom)?;
        let cycle = flags(&w.cycle).map_err(serde::de::Error::custom)?;
        EventuallyPeriodicSet::new(prefix, cycle).map_err(serde::de::Error::custom)
    }
}

/// The filter `F_Z` of all `W ⊆ ω` with `Z ∖ W` finite, for infinite `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaFilter {
    z: EventuallyPeriodicSet,
}

impl OmegaFilter {
    pub fn frechet_on(z: EventuallyPeriodicSet) -> Result<Self> {
        if !z.is_infinite() {
            return Err(input("F_Z needs an infinite Z"));
        }
        Ok(OmegaFilter { z })
    }

    /// The plain Fréchet filter, `Z = ω`.
    pub fn frechet() -> Self {
        OmegaFilter {
            z: EventuallyPeriodicSet::omega(),
        }
    }

    pub fn z(&self) -> &EventuallyPeriodicSet {
        &self.z
    }

    /// `W ∈ F_Z`, i.e. `Z ∖ W` is finite: no element of `Z ∖ W` falls in the
    /// jointly periodic region.
    pub fn contains(&self, w: &EventuallyPeriodicSet) -> bool {
        !self.z.difference(w).is_infinite()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OmegaWire {
    kind: String,
    #[serde(rename = "Z")]
    z: EventuallyPeriodicSet,
}

impl Serialize for OmegaFilter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OmegaWire {
            kind: "frechet".into(),
            z: self.z.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OmegaFilter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = OmegaWire::deserialize(d)?;
        if w.kind != "frechet" {
            return Err(serde::de::Error::custom(format!("unknown filter kind {:?}", w.kind)));
        }
        OmegaFilter::frechet_on(w.z).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(prefix: &[u8], cycle: &[u8]) -> EventuallyPeriodicSet {
        EventuallyPeriodicSet::new(flags(prefix).unwrap(), flags(cycle).unwrap()).unwrap()
    }

    /// Decides `Z ∖ W` finite by unrolling: past the joint prefix, the set is
    /// periodic, so a full trailing period decides it.
    fn member_by_unrolling(z: &EventuallyPeriodicSet, w: &EventuallyPeriodicSet) -> bool {
        let t = z.prefix().len().max(w.prefix().len());
        let p = z.cycle().len() * w.cycle().len();
        let horizon = t + 3 * p;
        (horizon - p..horizon).all(|m| !z.contains(m) || w.contains(m))
    }

    #[test]
    fn membership_examples() {
        let evens = OmegaFilter::frechet_on(EventuallyPeriodicSet::evens()).unwrap();
        assert!(evens.contains(&EventuallyPeriodicSet::evens()));
        assert!(!OmegaFilter::frechet().contains(&EventuallyPeriodicSet::evens()));
        assert!(evens.contains(&ep(&[0], &[1])));
    }

    #[test]
    fn cofinite_sets_belong_to_every_f_z() {
        let zs = [
            EventuallyPeriodicSet::omega(),
            EventuallyPeriodicSet::evens(),
            ep(&[1, 1], &[0, 0, 1]),
            ep(&[], &[0, 1, 1]),
        ];
        for z in &zs {
            let f = OmegaFilter::frechet_on(z.clone()).unwrap();
            for prefix_len in 0..5 {
                for holes in 0u32..1 << prefix_len {
                    let prefix: Vec<u8> = (0..prefix_len).map(|i| (holes >> i & 1) as u8).collect();
                    assert!(f.contains(&ep(&prefix, &[1])));
                }
            }
        }
        let e = OmegaFilter::frechet_on(EventuallyPeriodicSet::evens()).unwrap();
        let o = OmegaFilter::frechet_on(ep(&[], &[0, 1])).unwrap();
        assert_ne!(e, o);
        assert!(e.contains(e.z()) && !o.contains(e.z()));
    }

    #[test]
    fn membership_agrees_with_unrolling() {
        let mut sets = Vec::new();
        for plen in 0..3usize {
            for clen in 1..4usize {
                for pb in 0u32..1 << plen {
                    for cb in 0u32..1 << clen {
                        let p: Vec<u8> = (0..plen).map(|i| (pb >> i & 1) as u8).collect();
                        let c: Vec<u8> = (0..clen).map(|i| (cb >> i & 1) as u8).collect();
                        sets.push(ep(&p, &c));
                    }
                }
            }
        }
        for z in sets.iter().filter(|z| z.is_infinite()) {
            let f = OmegaFilter::frechet_on(z.clone()).unwrap();
            for w in &sets {
                assert_eq!(f.contains(w), member_by_unrolling(z, w), "Z={z:?} W={w:?}");
            }
        }
    }

    #[test]
    fn finite_z_is_rejected() {
        assert!(OmegaFilter::frechet_on(ep(&[1, 1], &[0])).is_err());
        assert!(EventuallyPeriodicSet::new(vec![], vec![]).is_err());
    }

    #[test]
    fn json_form() {
        let f = OmegaFilter::frechet_on(EventuallyPeriodicSet::evens()).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, r#"{"kind":"frechet","Z":{"prefix":[],"cycle":[1,0]}}"#);
        assert_eq!(serde_json::from_str::<OmegaFilter>(&js).unwrap(), f);
        assert!(serde_json::from_str::<OmegaFilter>(
            r#"{"kind":"frechet","Z":{"prefix":[1],"cycle":[0]}}"#
        )
        .is_err());
    }
}
