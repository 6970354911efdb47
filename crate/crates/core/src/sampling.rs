//! Seeded random instances for the property checks, the CLI and the demo.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::bundle::Section;
use crate::convolution::{ConvFunction, GroupAlgebraElement};
use crate::flips::{FlipSet, SiteId};
use crate::groupoid::{GroupElement, GroupoidElement, Point};
use crate::site::{LocalOperator, QubitVector};
use crate::strings::AlgebraElement;
use crate::theta::{SparseState, ThetaFamily};
use crate::Complex;

pub fn random_complex(rng: &mut impl Rng) -> Complex {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Uniform on the Bloch sphere, with a random global phase.
pub fn random_qubit(rng: &mut impl Rng) -> QubitVector {
    let polar = rng.random_range(-1.0f64..1.0).acos();
    let azimuth = rng.random_range(0.0..std::f64::consts::TAU);
    let phase = Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    QubitVector::bloch(polar, azimuth).scale(phase)
}

pub fn random_local_operator(rng: &mut impl Rng) -> LocalOperator {
    LocalOperator([
        [random_complex(rng), random_complex(rng)],
        [random_complex(rng), random_complex(rng)],
    ])
}

fn random_subset(rng: &mut impl Rng, sites: &[SiteId], max: usize) -> FlipSet {
    let k = rng.random_range(0..=max.min(sites.len()));
    sites.choose_multiple(rng, k).copied().collect()
}

/// Random tail plus overrides on a random subset of `sites`.
pub fn random_family(rng: &mut impl Rng, sites: &[SiteId]) -> ThetaFamily {
    let tail = random_qubit(rng);
    let overrides: Vec<(SiteId, QubitVector)> = random_subset(rng, sites, sites.len())
        .iter()
        .map(|s| (s, random_qubit(rng)))
        .collect();
    ThetaFamily::new(tail, overrides).expect("random qubits are normalized")
}

/// Up to `max_terms` strings, each with up to `max_factors` random factors on `1..=m`.
pub fn random_algebra_element(rng: &mut impl Rng, m: usize, max_terms: usize, max_factors: usize) -> AlgebraElement {
    let sites: Vec<SiteId> = (1..=m as u32).map(SiteId).collect();
    let n = rng.random_range(1..=max_terms);
    (0..n)
        .map(|_| {
            let support = random_subset(rng, &sites, max_factors);
            let factors: Vec<(SiteId, LocalOperator)> =
                support.iter().map(|s| (s, random_local_operator(rng))).collect();
            AlgebraElement::elementary(random_complex(rng), factors)
        })
        .fold(AlgebraElement::zero(), |acc, t| &acc + &t)
}

pub fn random_state(rng: &mut impl Rng, family: &Arc<ThetaFamily>, sites: &[SiteId], max_terms: usize) -> SparseState {
    let n = rng.random_range(1..=max_terms);
    let terms: Vec<(FlipSet, Complex)> = (0..n)
        .map(|_| (random_subset(rng, sites, sites.len()), random_complex(rng)))
        .collect();
    SparseState::from_terms(family.clone(), terms)
}

/// A section with a random state (up to four terms) at a random nonempty
/// subset of `points`.
pub fn random_section(rng: &mut impl Rng, family: &Arc<ThetaFamily>, points: &[Point], sites: &[SiteId]) -> Section {
    let k = rng.random_range(1..=points.len().max(1));
    let chosen: Vec<Point> = points.choose_multiple(rng, k).cloned().collect();
    let values: Vec<(Point, SparseState)> = chosen
        .into_iter()
        .map(|p| (p, random_state(rng, family, sites, 4)))
        .collect();
    Section::from_values(family.clone(), values).expect("states share the family")
}

pub fn random_group_element(rng: &mut impl Rng, sites: &[SiteId]) -> GroupElement {
    GroupElement(random_subset(rng, sites, sites.len()))
}

/// Up to `max_points` distinct points of the orbit of `baseline`, all
/// differing from it only on `sites`.
pub fn random_orbit(rng: &mut impl Rng, baseline: &str, sites: &[SiteId], max_points: usize) -> Vec<Point> {
    let all = FlipSet::subsets_of(sites);
    let k = rng.random_range(1..=max_points.min(all.len()));
    let mut pts: Vec<Point> = all
        .choose_multiple(rng, k)
        .map(|f| Point::new(baseline, f.clone()))
        .collect();
    pts.sort();
    pts
}

/// A function with up to `max_entries` entries on arrows starting in `points`
/// with group parts supported in `sites`.
pub fn random_conv_function(rng: &mut impl Rng, points: &[Point], sites: &[SiteId], max_entries: usize) -> ConvFunction {
    let n = rng.random_range(1..=max_entries);
    ConvFunction::from_entries((0..n).map(|_| {
        let p = points.choose(rng).expect("non-empty point set").clone();
        let g = random_group_element(rng, sites);
        (GroupoidElement::new(p, g), random_complex(rng))
    }))
}

pub fn random_group_algebra_element(rng: &mut impl Rng, sites: &[SiteId], max_entries: usize) -> GroupAlgebraElement {
    let n = rng.random_range(1..=max_entries);
    GroupAlgebraElement::from_entries((0..n).map(|_| (random_group_element(rng, sites), random_complex(rng))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_qubits_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!((random_qubit(&mut rng).norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn seeds_reproduce() {
        let sites: Vec<SiteId> = (1..=4).map(SiteId).collect();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(random_family(&mut a, &sites), random_family(&mut b, &sites));
        assert_eq!(
            random_algebra_element(&mut a, 4, 3, 3),
            random_algebra_element(&mut b, 4, 3, 3)
        );
    }

    #[test]
    fn orbit_points_share_the_baseline() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sites: Vec<SiteId> = (1..=3).map(SiteId).collect();
        let orbit = random_orbit(&mut rng, "b", &sites, 8);
        assert!(!orbit.is_empty() && orbit.len() <= 8);
        assert!(orbit.iter().all(|p| &*p.baseline == "b"));
    }
}
