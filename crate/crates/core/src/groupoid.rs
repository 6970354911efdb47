//! The action groupoid 𝔊 = X × G of finitely supported ℤ₂ flips acting on
//! flip patterns, its pair-groupoid form, and the counting-measure Haar
//! system.
//!
//! X = ℤ₂^S is uncountable, so a point is stored as a named baseline pattern
//! plus a finite set of sites where it differs from that baseline. Points
//! with the same baseline lie in the same G-orbit; distinct baselines are
//! taken to lie in distinct orbits.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::convolution::ConvFunction;
use crate::flips::{FlipSet, SiteId};
use crate::{Complex, Error, Result};

/// Residual tolerance for [`haar_invariance_check`].
pub const HAAR_TOL: f64 = 1e-12;

/// A finitely supported function S → ℤ₂, stored as the set of sites where
/// it takes the value p. The product is symmetric difference.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub FlipSet);

impl GroupElement {
    pub fn unit() -> Self {
        GroupElement(FlipSet::empty())
    }

    pub fn support(&self) -> &FlipSet {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement(self.0.symmetric_difference(&other.0))
    }

    /// Every element is an involution.
    pub fn inverse(&self) -> GroupElement {
        self.clone()
    }
}

impl<const N: usize> From<[u32; N]> for GroupElement {
    fn from(sites: [u32; N]) -> Self {
        GroupElement(sites.into())
    }
}

impl FromIterator<SiteId> for GroupElement {
    fn from_iter<I: IntoIterator<Item = SiteId>>(iter: I) -> Self {
        GroupElement(iter.into_iter().collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A point of X: baseline pattern plus finitely many deviations from it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub baseline: Arc<str>,
    pub flips: FlipSet,
}

impl Point {
    pub fn new(baseline: &str, flips: impl Into<FlipSet>) -> Self {
        Point {
            baseline: Arc::from(baseline),
            flips: flips.into(),
        }
    }

    pub fn base(baseline: &str) -> Self {
        Point::new(baseline, FlipSet::empty())
    }

    /// Right action `x·g`.
    pub fn act(&self, g: &GroupElement) -> Point {
        Point {
            baseline: self.baseline.clone(),
            flips: self.flips.symmetric_difference(&g.0),
        }
    }

    /// `x ∼ y`: the two points differ at finitely many sites.
    pub fn equivalent(&self, other: &Point) -> bool {
        self.baseline == other.baseline
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.baseline, self.flips)
    }
}

pub fn act(x: &Point, g: &GroupElement) -> Point {
    x.act(g)
}

/// An arrow `(x, g)` of the action groupoid, from `x·g` to `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupoidElement {
    pub point: Point,
    pub group: GroupElement,
}

impl GroupoidElement {
    pub fn new(point: Point, group: impl Into<GroupElement>) -> Self {
        GroupoidElement {
            point,
            group: group.into(),
        }
    }

    pub fn unit_at(point: Point) -> Self {
        GroupoidElement::new(point, GroupElement::unit())
    }

    pub fn target_point(&self) -> Point {
        self.point.act(&self.group)
    }

    pub fn is_unit(&self) -> bool {
        self.group.is_unit()
    }

    pub fn composable(&self, next: &GroupoidElement) -> bool {
        next.point == self.target_point()
    }

    /// `(x, g)(xg, g') = (x, gg')`.
    pub fn compose(&self, next: &GroupoidElement) -> Result<GroupoidElement> {
        if !self.composable(next) {
            return Err(Error::NotComposable);
        }
        Ok(GroupoidElement::new(self.point.clone(), self.group.mul(&next.group)))
    }

    /// `(x, g)⁻¹ = (xg, g⁻¹)`.
    pub fn inverse(&self) -> GroupoidElement {
        GroupoidElement::new(self.target_point(), self.group.inverse())
    }

    /// `r(x, g) = (x, 𝟙)`.
    pub fn range(&self) -> GroupoidElement {
        GroupoidElement::unit_at(self.point.clone())
    }

    /// `l(x, g) = (xg, 𝟙)`.
    pub fn domain(&self) -> GroupoidElement {
        GroupoidElement::unit_at(self.target_point())
    }

    /// `(x, g) ↦ (x, xg)`.
    pub fn to_pair(&self) -> PairElement {
        PairElement {
            src: self.point.clone(),
            dst: self.target_point(),
        }
    }

    pub fn from_pair(p: &PairElement) -> Result<GroupoidElement> {
        if !p.src.equivalent(&p.dst) {
            return Err(Error::NotEquivalent(p.src.to_string(), p.dst.to_string()));
        }
        let g = GroupElement(p.src.flips.symmetric_difference(&p.dst.flips));
        Ok(GroupoidElement::new(p.src.clone(), g))
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.point, self.group)
    }
}

/// An arrow of the graph of `∼`, with `(x, y)(y, z) = (x, z)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairElement {
    pub src: Point,
    pub dst: Point,
}

impl PairElement {
    pub fn new(src: Point, dst: Point) -> Result<Self> {
        if !src.equivalent(&dst) {
            return Err(Error::NotEquivalent(src.to_string(), dst.to_string()));
        }
        Ok(PairElement { src, dst })
    }

    pub fn compose(&self, next: &PairElement) -> Result<PairElement> {
        if self.dst != next.src {
            return Err(Error::NotComposable);
        }
        Ok(PairElement {
            src: self.src.clone(),
            dst: next.dst.clone(),
        })
    }

    pub fn inverse(&self) -> PairElement {
        PairElement {
            src: self.dst.clone(),
            dst: self.src.clone(),
        }
    }

    pub fn range(&self) -> PairElement {
        PairElement {
            src: self.src.clone(),
            dst: self.src.clone(),
        }
    }

    pub fn domain(&self) -> PairElement {
        PairElement {
            src: self.dst.clone(),
            dst: self.dst.clone(),
        }
    }
}

/// `∫ f dμ_x = Σ_g f((x, g))`.
pub fn haar_integrate(f: &ConvFunction, x: &Point) -> Complex {
    f.entries()
        .filter(|(e, _)| &e.point == x)
        .map(|(_, v)| v)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HaarCheck {
    pub passed: bool,
    pub residual: f64,
}

/// Compares `∫ f(e·(y, g')) dμ_{xg}(y, g')` with `∫ f dμ_x` for `e = (x, g)`.
///
/// Only `g'` with `(x, g g') ∈ supp f` contribute to the left side, so both
/// sums run over finitely many terms.
pub fn haar_invariance_check(f: &ConvFunction, e: &GroupoidElement) -> HaarCheck {
    let fibre = e.target_point();
    let mut lhs = Complex::new(0.0, 0.0);
    for (key, _) in f.entries().filter(|(k, _)| k.point == e.point) {
        let g_prime = e.group.mul(&key.group);
        let arrow = GroupoidElement::new(fibre.clone(), g_prime);
        let product = e.compose(&arrow).expect("arrow starts at the target of e");
        lhs += f.get(&product);
    }
    let rhs = haar_integrate(f, &e.point);
    let residual = (lhs - rhs).norm();
    HaarCheck {
        passed: residual < HAAR_TOL,
        residual,
    }
}
