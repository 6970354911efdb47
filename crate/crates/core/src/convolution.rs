//! The output algebra 𝒦(𝔊, ℂ): finitely supported functions on the action
//! groupoid with convolution, involution and the I-norm, plus the group
//! algebra of G and its embedding into the string algebra.

use std::collections::{BTreeMap, BTreeSet};

use crate::groupoid::{GroupElement, GroupoidElement, Point};
use crate::site::LocalOperator;
use crate::strings::AlgebraElement;
use crate::{Complex, PRUNE_TOL};

/// A finitely supported complex function on 𝔊.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvFunction {
    entries: BTreeMap<GroupoidElement, Complex>,
}

impl ConvFunction {
    pub fn zero() -> Self {
        ConvFunction::default()
    }

    pub fn delta(e: GroupoidElement) -> Self {
        ConvFunction::from_entries([(e, Complex::new(1.0, 0.0))])
    }

    /// Sums repeated keys and drops coefficients below [`PRUNE_TOL`].
    pub fn from_entries(entries: impl IntoIterator<Item = (GroupoidElement, Complex)>) -> Self {
        let mut map: BTreeMap<GroupoidElement, Complex> = BTreeMap::new();
        for (e, v) in entries {
            *map.entry(e).or_default() += v;
        }
        map.retain(|_, v| v.norm() >= PRUNE_TOL);
        ConvFunction { entries: map }
    }

    /// `Σ_{y ∈ points} δ_{(y, 𝟙)}`; a unit for every function whose arrows
    /// start and end in `points`.
    pub fn local_unit<'a>(points: impl IntoIterator<Item = &'a Point>) -> Self {
        ConvFunction::from_entries(
            points
                .into_iter()
                .map(|p| (GroupoidElement::unit_at(p.clone()), Complex::new(1.0, 0.0))),
        )
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupoidElement, Complex)> + '_ {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn get(&self, e: &GroupoidElement) -> Complex {
        self.entries.get(e).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Range and domain points of every arrow in the support.
    pub fn base_points(&self) -> BTreeSet<Point> {
        self.entries
            .keys()
            .flat_map(|e| [e.point.clone(), e.target_point()])
            .collect()
    }

    pub fn scale(&self, c: Complex) -> ConvFunction {
        ConvFunction::from_entries(self.entries.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn add(&self, other: &ConvFunction) -> ConvFunction {
        ConvFunction::from_entries(
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|(k, v)| (k.clone(), *v)),
        )
    }

    pub fn sub(&self, other: &ConvFunction) -> ConvFunction {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    /// Largest entry of `self − other`.
    pub fn distance(&self, other: &ConvFunction) -> f64 {
        self.sub(other).entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(f*h)((x,g)) = Σ_{g'} f((x, gg')) h((x·g·g'⁻¹, g'⁻¹))`.
    ///
    /// The output support is contained in the composites of composable
    /// support pairs; the formula is evaluated at each of those arrows with
    /// `g'⁻¹` ranging over the group parts of `h`'s support.
    pub fn convolve(&self, h: &ConvFunction) -> ConvFunction {
        let mut targets = BTreeSet::new();
        for a in self.entries.keys() {
            for b in h.entries.keys() {
                if let Ok(ab) = a.compose(b) {
                    targets.insert(ab);
                }
            }
        }
        let h_groups: BTreeSet<GroupElement> = h.entries.keys().map(|e| e.group.inverse()).collect();
        let mut out = BTreeMap::new();
        for target in targets {
            let (x, g) = (&target.point, &target.group);
            let mut acc = Complex::new(0.0, 0.0);
            for g_prime in &h_groups {
                let gg = g.mul(g_prime);
                let f_val = self.get(&GroupoidElement::new(x.clone(), gg.clone()));
                if f_val == Complex::new(0.0, 0.0) {
                    continue;
                }
                let inv = g_prime.inverse();
                let h_val = h.get(&GroupoidElement::new(x.act(g).act(&inv), inv));
                acc += f_val * h_val;
            }
            out.insert(target, acc);
        }
        ConvFunction::from_entries(out)
    }

    /// `f*((x, g)) = conj f((x, g)⁻¹)`.
    pub fn involution(&self) -> ConvFunction {
        ConvFunction::from_entries(self.entries.iter().map(|(e, v)| (e.inverse(), v.conj())))
    }

    /// `max(sup_x Σ_g |f(x, g)|, sup_x Σ_g |f(xg, g⁻¹)|)`.
    pub fn i_norm(&self) -> f64 {
        let mut by_range: BTreeMap<&Point, f64> = BTreeMap::new();
        let mut by_domain: BTreeMap<Point, f64> = BTreeMap::new();
        for (e, v) in &self.entries {
            *by_range.entry(&e.point).or_default() += v.norm();
            // f(xg, g⁻¹) with (y, g) = (xg, g⁻¹) means x = y·g
            *by_domain.entry(e.target_point()).or_default() += v.norm();
        }
        let range_sup = by_range.values().copied().fold(0.0, f64::max);
        let domain_sup = by_domain.values().copied().fold(0.0, f64::max);
        range_sup.max(domain_sup)
    }
}

/// A finitely supported function on G.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupAlgebraElement {
    entries: BTreeMap<GroupElement, Complex>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        GroupAlgebraElement::default()
    }

    pub fn delta(g: GroupElement) -> Self {
        GroupAlgebraElement::from_entries([(g, Complex::new(1.0, 0.0))])
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (GroupElement, Complex)>) -> Self {
        let mut map: BTreeMap<GroupElement, Complex> = BTreeMap::new();
        for (g, v) in entries {
            *map.entry(g).or_default() += v;
        }
        map.retain(|_, v| v.norm() >= PRUNE_TOL);
        GroupAlgebraElement { entries: map }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, Complex)> + '_ {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn get(&self, g: &GroupElement) -> Complex {
        self.entries.get(g).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: Complex) -> Self {
        GroupAlgebraElement::from_entries(self.entries.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn add(&self, other: &GroupAlgebraElement) -> Self {
        GroupAlgebraElement::from_entries(
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|(k, v)| (k.clone(), *v)),
        )
    }

    pub fn distance(&self, other: &GroupAlgebraElement) -> f64 {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
            .entries
            .values()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// `(f*f')(g) = Σ_{g'} f(gg') f'(g'⁻¹)`.
    pub fn group_convolve(&self, v: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut targets = BTreeSet::new();
        for a in self.entries.keys() {
            for b in v.entries.keys() {
                targets.insert(a.mul(b));
            }
        }
        GroupAlgebraElement::from_entries(targets.into_iter().map(|g| {
            let acc: Complex = v
                .entries
                .keys()
                .map(|g_prime| self.get(&g.mul(g_prime)) * v.get(&g_prime.inverse()))
                .sum();
            (g, acc)
        }))
    }

    /// `f*(g) = conj f(g⁻¹) = conj f(g)`.
    pub fn group_involution(&self) -> GroupAlgebraElement {
        GroupAlgebraElement::from_entries(self.entries.iter().map(|(g, v)| (g.inverse(), v.conj())))
    }

    /// ℓ¹ norm.
    pub fn group_norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).sum()
    }

    /// `Σ_g f(g) ĝ` where ĝ carries σ¹ on the support of g.
    pub fn embed(&self) -> AlgebraElement {
        self.entries
            .iter()
            .map(|(g, v)| hat(g).scale(*v))
            .fold(AlgebraElement::zero(), |acc, t| &acc + &t)
    }

    /// The x-independent function `(x, g) ↦ f(g)` restricted to `points`.
    pub fn expand_over<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> ConvFunction {
        let points: Vec<&Point> = points.into_iter().collect();
        ConvFunction::from_entries(self.entries.iter().flat_map(|(g, v)| {
            points
                .iter()
                .map(move |p| (GroupoidElement::new((*p).clone(), g.clone()), *v))
        }))
    }
}

/// The string ĝ = ⊗a_s with a_s = σ¹ where g(s) = p and 𝟙 elsewhere.
pub fn hat(g: &GroupElement) -> AlgebraElement {
    AlgebraElement::elementary(
        Complex::new(1.0, 0.0),
        g.support().iter().map(|s| (s, LocalOperator::sigma_x())),
    )
}
