//! Sparse vectors of the θ-tensor product ⊗^θ Q_s.
//!
//! A reference family θ assigns a unit vector θ_s to every site. Each site
//! carries the orthonormal frame `(θ_s, θ_s^⊥)`, and a basis vector of the
//! θ-tensor product is a finite set of sites at which θ_s is replaced by
//! θ_s^⊥. The product inner product collapses to the Kronecker pairing of
//! these flip sets, so a state is a finite map flip set → coefficient.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use crate::flips::{FlipSet, SiteId};
use crate::site::QubitVector;
use crate::{Complex, Error, Result, FAMILY_NORM_TOL, PRUNE_TOL};

/// A basis vector of ⊗^θ Q_s, named by the sites where it deviates from θ.
pub type Configuration = FlipSet;

/// Orthonormal frame `(θ_s, θ_s^⊥)` at one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthoFrame {
    pub theta: QubitVector,
    pub theta_perp: QubitVector,
}

impl OrthoFrame {
    pub fn new(theta: QubitVector) -> Result<Self> {
        let theta_perp = theta.theta_perp()?;
        Ok(OrthoFrame { theta, theta_perp })
    }

    pub fn vectors(&self) -> [QubitVector; 2] {
        [self.theta, self.theta_perp]
    }
}

/// Reference family: finitely many overrides on top of a constant tail.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaFamily {
    tail: OrthoFrame,
    overrides: BTreeMap<SiteId, OrthoFrame>,
}

impl ThetaFamily {
    pub fn new(tail: QubitVector, overrides: impl IntoIterator<Item = (SiteId, QubitVector)>) -> Result<Self> {
        check_family_vector(&tail)?;
        let tail = OrthoFrame::new(tail)?;
        let mut map = BTreeMap::new();
        for (site, v) in overrides {
            check_family_vector(&v)?;
            // an override equal to the tail carries no information
            if v != tail.theta {
                map.insert(site, OrthoFrame::new(v)?);
            }
        }
        Ok(ThetaFamily { tail, overrides: map })
    }

    pub fn constant(tail: QubitVector) -> Result<Self> {
        ThetaFamily::new(tail, [])
    }

    /// The family with θ_s = e₁ everywhere.
    pub fn standard() -> Self {
        ThetaFamily::constant(QubitVector::e1()).expect("e1 is normalized")
    }

    pub fn tail(&self) -> QubitVector {
        self.tail.theta
    }

    pub fn overrides(&self) -> impl Iterator<Item = (SiteId, QubitVector)> + '_ {
        self.overrides.iter().map(|(s, f)| (*s, f.theta))
    }

    pub fn override_sites(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.overrides.keys().copied()
    }

    pub fn theta(&self, site: SiteId) -> QubitVector {
        self.frame(site).theta
    }

    pub fn frame(&self, site: SiteId) -> OrthoFrame {
        self.overrides.get(&site).copied().unwrap_or(self.tail)
    }
}

fn check_family_vector(v: &QubitVector) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFinite("reference family"));
    }
    v.check_normalized(FAMILY_NORM_TOL)
}

/// A finite linear combination of configurations relative to a shared
/// reference family.
#[derive(Clone, Debug)]
pub struct SparseState {
    family: Arc<ThetaFamily>,
    terms: BTreeMap<Configuration, Complex>,
}

impl SparseState {
    pub fn zero(family: Arc<ThetaFamily>) -> Self {
        SparseState {
            family,
            terms: BTreeMap::new(),
        }
    }

    /// The reference vector θ itself: the empty configuration with weight 1.
    pub fn vacuum(family: Arc<ThetaFamily>) -> Self {
        SparseState::basis(family, FlipSet::empty())
    }

    pub fn basis(family: Arc<ThetaFamily>, config: Configuration) -> Self {
        SparseState::from_terms(family, [(config, Complex::new(1.0, 0.0))])
    }

    /// Builds a state from raw terms, merging duplicates and pruning dust.
    pub fn from_terms(family: Arc<ThetaFamily>, terms: impl IntoIterator<Item = (Configuration, Complex)>) -> Self {
        let mut state = SparseState::zero(family);
        for (config, coeff) in terms {
            state.accumulate(config, coeff);
        }
        state.prune();
        state
    }

    pub fn family(&self) -> &Arc<ThetaFamily> {
        &self.family
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Configuration, Complex)> + '_ {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn coeff(&self, config: &Configuration) -> Complex {
        self.terms.get(config).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest flipped site, if any.
    pub fn max_site(&self) -> Option<SiteId> {
        self.terms.keys().filter_map(FlipSet::max_site).max()
    }

    pub(crate) fn accumulate(&mut self, config: Configuration, coeff: Complex) {
        *self.terms.entry(config).or_default() += coeff;
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    /// Normal form: merged keys, no coefficient below [`PRUNE_TOL`].
    pub fn canonicalize(&self) -> SparseState {
        let mut out = self.clone();
        out.prune();
        out
    }

    pub fn same_family(&self, other: &SparseState) -> bool {
        same_family(&self.family, &other.family)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &SparseState) -> Result<Complex> {
        if !self.same_family(other) {
            return Err(Error::FamilyMismatch);
        }
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms, false)
        } else {
            (&other.terms, &self.terms, true)
        };
        let mut acc = Complex::new(0.0, 0.0);
        for (config, a) in small {
            if let Some(b) = large.get(config) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex) -> SparseState {
        SparseState::from_terms(self.family.clone(), self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn try_add(&self, other: &SparseState) -> Result<SparseState> {
        if !self.same_family(other) {
            return Err(Error::FamilyMismatch);
        }
        Ok(SparseState::from_terms(
            self.family.clone(),
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(k, v)| (k.clone(), *v)),
        ))
    }
}

pub(crate) fn same_family(a: &Arc<ThetaFamily>, b: &Arc<ThetaFamily>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl PartialEq for SparseState {
    fn eq(&self, other: &Self) -> bool {
        self.same_family(other) && self.terms == other.terms
    }
}

impl Add for &SparseState {
    type Output = SparseState;

    /// Panics on mismatched families; use [`SparseState::try_add`] otherwise.
    fn add(self, rhs: &SparseState) -> SparseState {
        self.try_add(rhs).expect("states share a reference family")
    }
}

impl Sub for &SparseState {
    type Output = SparseState;

    fn sub(self, rhs: &SparseState) -> SparseState {
        self + &rhs.scale(Complex::new(-1.0, 0.0))
    }
}

impl Mul<&SparseState> for Complex {
    type Output = SparseState;

    fn mul(self, rhs: &SparseState) -> SparseState {
        rhs.scale(self)
    }
}
