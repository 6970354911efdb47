//! Finite sets of sites, the common carrier of flip configurations,
//! group elements of ℤ₂^(S) and flip patterns of points.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A site of the qubit system, after fixing the enumeration of S onto the
/// non-negative integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteId(pub u32);

impl SiteId {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl From<u32> for SiteId {
    fn from(index: u32) -> Self {
        SiteId(index)
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sorted, duplicate-free finite set of sites.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlipSet(Vec<SiteId>);

impl FlipSet {
    pub fn empty() -> Self {
        FlipSet(Vec::new())
    }

    pub fn singleton(site: impl Into<SiteId>) -> Self {
        FlipSet(vec![site.into()])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, site: SiteId) -> bool {
        self.0.binary_search(&site).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[SiteId] {
        &self.0
    }

    pub fn max_site(&self) -> Option<SiteId> {
        self.0.last().copied()
    }

    /// Adds the site if absent, removes it otherwise.
    pub fn toggle(&mut self, site: SiteId) {
        match self.0.binary_search(&site) {
            Ok(pos) => {
                self.0.remove(pos);
            }
            Err(pos) => self.0.insert(pos, site),
        }
    }

    pub fn with_toggled(&self, site: SiteId) -> Self {
        let mut out = self.clone();
        out.toggle(site);
        out
    }

    /// Symmetric difference, i.e. the pointwise product in ℤ₂^S.
    pub fn symmetric_difference(&self, other: &FlipSet) -> FlipSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FlipSet(out)
    }

    pub fn union(&self, other: &FlipSet) -> FlipSet {
        let mut out: Vec<SiteId> = self.0.iter().chain(other.0.iter()).copied().collect();
        out.sort_unstable();
        out.dedup();
        FlipSet(out)
    }

    /// Every subset of `sites`, ordered by the binary counter over `sites`.
    pub fn subsets_of(sites: &[SiteId]) -> Vec<FlipSet> {
        let sites: FlipSet = sites.iter().copied().collect();
        let n = sites.len();
        (0u64..1 << n)
            .map(|mask| {
                FlipSet(
                    (0..n)
                        .filter(|bit| mask >> bit & 1 == 1)
                        .map(|bit| sites.0[bit])
                        .collect(),
                )
            })
            .collect()
    }
}

impl FromIterator<SiteId> for FlipSet {
    fn from_iter<I: IntoIterator<Item = SiteId>>(iter: I) -> Self {
        let mut sites: Vec<SiteId> = iter.into_iter().collect();
        sites.sort_unstable();
        sites.dedup();
        FlipSet(sites)
    }
}

impl FromIterator<u32> for FlipSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        iter.into_iter().map(SiteId).collect()
    }
}

impl<const N: usize> From<[u32; N]> for FlipSet {
    fn from(sites: [u32; N]) -> Self {
        sites.into_iter().collect()
    }
}

impl Serialize for FlipSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FlipSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let sites = Vec::<SiteId>::deserialize(deserializer)?;
        Ok(sites.into_iter().collect())
    }
}

impl fmt::Display for FlipSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_sorts_and_dedups() {
        let s: FlipSet = [5, 1, 3, 1].into();
        assert_eq!(s.as_slice(), &[SiteId(1), SiteId(3), SiteId(5)]);
    }

    #[test]
    fn symmetric_difference_cancels_shared_sites() {
        let a: FlipSet = [1, 2, 7].into();
        let b: FlipSet = [2, 3].into();
        assert_eq!(a.symmetric_difference(&b), FlipSet::from([1, 3, 7]));
        assert!(a.symmetric_difference(&a).is_empty());
    }

    #[test]
    fn toggle_round_trips() {
        let mut s = FlipSet::from([4]);
        s.toggle(SiteId(2));
        assert_eq!(s, FlipSet::from([2, 4]));
        s.toggle(SiteId(2));
        assert_eq!(s, FlipSet::from([4]));
    }

    #[test]
    fn subsets_enumerate_power_set() {
        let subsets = FlipSet::subsets_of(&[SiteId(2), SiteId(9)]);
        assert_eq!(
            subsets,
            vec![
                FlipSet::empty(),
                FlipSet::from([2]),
                FlipSet::from([9]),
                FlipSet::from([2, 9])
            ]
        );
    }
}
