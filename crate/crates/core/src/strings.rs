//! The input algebra: finite linear combinations of operator strings.
//!
//! An operator string is an elementary tensor ⊗a_s with finitely many
//! factors different from 𝟙. Strings are kept in a normal form so they can
//! key a map: scalar multiples of 𝟙 are folded into the coefficient, and
//! every remaining factor is rescaled so that its leading entry is exactly 1.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::flips::{FlipSet, SiteId};
use crate::oracle;
use crate::site::{LocalOperator, PauliLetter};
use crate::theta::SparseState;
use crate::{Complex, Error, Result, PRUNE_TOL};

/// Keys round matrix entries to this many decimal digits.
const KEY_DIGITS: f64 = 1e12;

/// Entries below this fraction of the largest entry never serve as pivot.
const PIVOT_REL_TOL: f64 = 1e-6;

/// Largest truncation accepted by [`full_algebra_rank`].
pub const MAX_RANK_SITES: usize = 6;

type FactorKey = [i64; 8];

/// An elementary tensor ⊗a_s in normal form.
#[derive(Clone, Debug)]
pub struct LocalString {
    factors: BTreeMap<SiteId, LocalOperator>,
    key: Vec<(SiteId, FactorKey)>,
}

impl LocalString {
    pub fn identity() -> Self {
        LocalString {
            factors: BTreeMap::new(),
            key: Vec::new(),
        }
    }

    /// Normalizes `factors` (repeated sites multiply in iteration order) and
    /// returns the scalar pulled out of them alongside the string.
    pub fn canonical(factors: impl IntoIterator<Item = (SiteId, LocalOperator)>) -> (Complex, LocalString) {
        let mut merged: BTreeMap<SiteId, LocalOperator> = BTreeMap::new();
        for (site, op) in factors {
            merged
                .entry(site)
                .and_modify(|prev| *prev = prev.mul2(&op))
                .or_insert(op);
        }
        let mut scale = Complex::new(1.0, 0.0);
        let mut out = BTreeMap::new();
        for (site, op) in merged {
            if let Some(c) = op.as_scalar() {
                scale *= c;
                continue;
            }
            let (pivot, normalized) = normalize_factor(&op);
            scale *= pivot;
            out.insert(site, normalized);
        }
        if scale.norm() < PRUNE_TOL {
            return (Complex::new(0.0, 0.0), LocalString::identity());
        }
        let key = out.iter().map(|(s, op)| (*s, factor_key(op))).collect();
        (scale, LocalString { factors: out, key })
    }

    pub fn factors(&self) -> impl Iterator<Item = (SiteId, &LocalOperator)> + '_ {
        self.factors.iter().map(|(s, op)| (*s, op))
    }

    pub fn factor(&self, site: SiteId) -> LocalOperator {
        self.factors.get(&site).copied().unwrap_or_else(LocalOperator::identity)
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn support(&self) -> FlipSet {
        self.factors.keys().copied().collect()
    }

    pub fn max_site(&self) -> Option<SiteId> {
        self.factors.keys().next_back().copied()
    }

    /// `∏_s ‖a_s‖` with the coefficient-sum norm on each factor.
    pub fn paper_norm(&self) -> f64 {
        self.factors.values().map(LocalOperator::site_norm_paper).product()
    }
}

fn normalize_factor(op: &LocalOperator) -> (Complex, LocalOperator) {
    let max = op.entries().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = op
        .entries()
        .find(|z| z.norm() > PIVOT_REL_TOL * max)
        .expect("non-scalar factor has a nonzero entry");
    let mut normalized = op.scale(pivot.inv());
    for row in normalized.0.iter_mut() {
        for z in row.iter_mut() {
            if (*z - Complex::new(1.0, 0.0)).norm() < 1e-15 {
                *z = Complex::new(1.0, 0.0);
            }
        }
    }
    (pivot, normalized)
}

fn factor_key(op: &LocalOperator) -> FactorKey {
    let mut key = [0i64; 8];
    for (k, z) in op.entries().enumerate() {
        key[2 * k] = (z.re * KEY_DIGITS).round() as i64;
        key[2 * k + 1] = (z.im * KEY_DIGITS).round() as i64;
    }
    key
}

impl PartialEq for LocalString {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for LocalString {}

impl PartialOrd for LocalString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LocalString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl Hash for LocalString {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Display for LocalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "𝟙");
        }
        for (k, (site, op)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "{op}@{site}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of operator strings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<LocalString, Complex>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn identity() -> Self {
        AlgebraElement::scalar(Complex::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex) -> Self {
        AlgebraElement::from_terms([(c, LocalString::identity())])
    }

    /// `coeff · ⊗ factors`, normalized.
    pub fn elementary(coeff: Complex, factors: impl IntoIterator<Item = (SiteId, LocalOperator)>) -> Self {
        let (scale, string) = LocalString::canonical(factors);
        AlgebraElement::from_terms([(coeff * scale, string)])
    }

    /// The single-site element `op` at `site`.
    pub fn site(site: impl Into<SiteId>, op: LocalOperator) -> Self {
        AlgebraElement::elementary(Complex::new(1.0, 0.0), [(site.into(), op)])
    }

    pub fn pauli_string(coeff: Complex, letters: &[(u32, PauliLetter)]) -> Self {
        AlgebraElement::elementary(coeff, letters.iter().map(|(s, l)| (SiteId(*s), l.matrix())))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Complex, LocalString)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (c, s) in terms {
            *out.terms.entry(s).or_default() += c;
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LocalString, Complex)> + '_ {
        self.terms.iter().map(|(s, c)| (s, *c))
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

    pub fn max_site(&self) -> Option<SiteId> {
        self.terms.keys().filter_map(LocalString::max_site).max()
    }

    pub fn scale(&self, c: Complex) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(s, v)| (v * c, s.clone())))
    }

    /// Bilinear extension of `(⊗a_s)(⊗a'_s) = ⊗(a_s a'_s)`.
    pub fn string_mul(&self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (sa, ca) in &self.terms {
            for (sb, cb) in &rhs.terms {
                let (scale, string) = LocalString::canonical(sa.factors().chain(sb.factors()).map(|(s, op)| (s, *op)));
                *out.terms.entry(string).or_default() += ca * cb * scale;
            }
        }
        out.prune();
        out
    }

    /// `(Σ c ⊗a_s)* = Σ c̄ ⊗a_s†`.
    pub fn string_adjoint(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (s, c) in &self.terms {
            let (scale, string) = LocalString::canonical(s.factors().map(|(site, op)| (site, op.adjoint2())));
            *out.terms.entry(string).or_default() += c.conj() * scale;
        }
        out.prune();
        out
    }

    /// Product of the per-factor coefficient norms, defined on single terms only.
    pub fn tensor_norm_paper(&self) -> Result<f64> {
        match self.terms.len() {
            0 => Ok(0.0),
            1 => {
                let (s, c) = self.terms.iter().next().expect("one term");
                Ok(c.norm() * s.paper_norm())
            }
            n => Err(Error::NotElementary { terms: n }),
        }
    }

    /// Coordinates in the basis of Pauli strings. Unlike the string map
    /// itself this is unique: `e₁₁ + e₂₂` and `𝟙` expand identically.
    pub fn pauli_expansion(&self) -> BTreeMap<Vec<(SiteId, PauliLetter)>, Complex> {
        let mut out: BTreeMap<Vec<(SiteId, PauliLetter)>, Complex> = BTreeMap::new();
        for (string, c) in &self.terms {
            let mut partial = vec![(Vec::new(), *c)];
            for (site, op) in string.factors() {
                let mut next = Vec::with_capacity(partial.len() * 4);
                for (word, amp) in &partial {
                    for letter in PauliLetter::ALL {
                        // σ is unitary and Hermitian, so the coordinate is tr(σ a) / 2
                        let mu = letter.matrix().mul2(op).trace() * 0.5;
                        if mu == Complex::new(0.0, 0.0) {
                            continue;
                        }
                        let mut w: Vec<(SiteId, PauliLetter)> = word.clone();
                        if letter != PauliLetter::I {
                            w.push((site, letter));
                        }
                        next.push((w, amp * mu));
                    }
                }
                partial = next;
            }
            for (word, amp) in partial {
                *out.entry(word).or_default() += amp;
            }
        }
        out.retain(|_, c| c.norm() >= PRUNE_TOL);
        out
    }

    /// Largest Pauli coordinate of `self − other`; zero iff the two are the
    /// same operator.
    pub fn distance(&self, other: &AlgebraElement) -> f64 {
        (self - other)
            .pauli_expansion()
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Action on ⊗^θ Q_s: each factor acts on its site through its matrix in
    /// the frame `(θ_s, θ_s^⊥)` of the state's family.
    pub fn apply(&self, u: &SparseState) -> SparseState {
        let family = u.family().clone();
        let mut out = SparseState::zero(family.clone());
        for (string, c) in &self.terms {
            let local: Vec<(SiteId, LocalOperator)> = string
                .factors()
                .map(|(s, op)| (s, op.in_frame(&family.frame(s).vectors())))
                .collect();
            for (config, d) in u.terms() {
                let mut branches = vec![(config.clone(), c * d)];
                for (site, m) in &local {
                    let mut next = Vec::with_capacity(branches.len() * 2);
                    for (flips, amp) in branches {
                        let j = flips.contains(*site) as usize;
                        for i in 0..2 {
                            let entry = m.entry(i, j);
                            if entry == Complex::new(0.0, 0.0) {
                                continue;
                            }
                            let target = if i == j { flips.clone() } else { flips.with_toggled(*site) };
                            next.push((target, amp * entry));
                        }
                    }
                    branches = next;
                }
                for (flips, amp) in branches {
                    out.accumulate(flips, amp);
                }
            }
        }
        out.prune();
        out
    }
}

impl From<LocalString> for AlgebraElement {
    fn from(s: LocalString) -> Self {
        AlgebraElement::from_terms([(Complex::new(1.0, 0.0), s)])
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.string_mul(rhs)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(s, c)| (*c, s.clone())),
        )
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{s}")?;
        }
        Ok(())
    }
}

/// Dimension of the span of all `4^m` Pauli strings on sites `1..=m`, taken
/// as dense `2^m × 2^m` matrices. Equal to `4^m` exactly when the strings
/// exhaust the full matrix algebra of the truncation.
pub fn full_algebra_rank(m: usize) -> Result<usize> {
    if m > MAX_RANK_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            requested: m,
            limit: MAX_RANK_SITES,
        });
    }
    let vectors = pauli_strings(m)
        .iter()
        .map(|a| oracle::kron_string(m, a).map(|d| d.into_entries()))
        .collect::<Result<Vec<_>>>()?;
    Ok(oracle::rank(&vectors))
}

/// All `4^m` Pauli strings on sites `1..=m`.
pub fn pauli_strings(m: usize) -> Vec<AlgebraElement> {
    let mut out = vec![Vec::<(u32, PauliLetter)>::new()];
    for site in 1..=m as u32 {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                PauliLetter::ALL.into_iter().map(move |l| {
                    let mut word = prefix.clone();
                    word.push((site, l));
                    word
                })
            })
            .collect();
    }
    out.iter()
        .map(|word| AlgebraElement::pauli_string(Complex::new(1.0, 0.0), word))
        .collect()
}
