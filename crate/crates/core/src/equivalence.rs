//! Equivalence of the representations on Q_S^θ and Q_S^θ'.
//!
//! The representations are equivalent iff `Σ_s | |⟨θ_s|θ'_s⟩| − 1 |` is
//! finite. For families given by finitely many overrides on a constant tail
//! the series has only finitely many terms that differ from the tail term
//! `t`, so it converges exactly when `t = 0`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::flips::SiteId;
use crate::site::QubitVector;
use crate::theta::ThetaFamily;
use crate::{Result, VECTOR_NORM_TOL};

/// A tail term at or below this counts as zero.
pub const TAIL_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquivalenceStatus {
    Equivalent,
    Inequivalent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceVerdict {
    pub status: EquivalenceStatus,
    /// Sum of the terms at the sites where either family has an override.
    pub partial_sum: f64,
    pub terms_evaluated: usize,
    /// The term repeated at every other site.
    pub tail_term: Option<f64>,
}

/// `| |⟨u|v⟩| − 1 |`.
pub fn overlap_term(u: &QubitVector, v: &QubitVector) -> Result<f64> {
    u.check_normalized(VECTOR_NORM_TOL)?;
    v.check_normalized(VECTOR_NORM_TOL)?;
    Ok((u.inner(v).norm() - 1.0).abs())
}

pub fn decide_equivalence(f: &ThetaFamily, g: &ThetaFamily) -> Result<EquivalenceVerdict> {
    let tail_term = overlap_term(&f.tail(), &g.tail())?;
    let sites: BTreeSet<SiteId> = f.override_sites().chain(g.override_sites()).collect();
    let mut partial_sum = 0.0;
    for &s in &sites {
        partial_sum += overlap_term(&f.theta(s), &g.theta(s))?;
    }
    let status = if tail_term <= TAIL_ZERO_TOL {
        EquivalenceStatus::Equivalent
    } else {
        EquivalenceStatus::Inequivalent
    };
    Ok(EquivalenceVerdict {
        status,
        partial_sum,
        terms_evaluated: sites.len(),
        tail_term: Some(tail_term),
    })
}

/// Families given by an arbitrary rule admit no exact verdict; this sums
/// the first `terms` terms over sites `1..=terms` and reports
/// [`EquivalenceStatus::Inconclusive`].
pub fn partial_series(
    f: impl Fn(SiteId) -> QubitVector,
    g: impl Fn(SiteId) -> QubitVector,
    terms: usize,
) -> Result<EquivalenceVerdict> {
    let mut partial_sum = 0.0;
    for s in 1..=terms as u32 {
        partial_sum += overlap_term(&f(SiteId(s)), &g(SiteId(s)))?;
    }
    Ok(EquivalenceVerdict {
        status: EquivalenceStatus::Inconclusive,
        partial_sum,
        terms_evaluated: terms,
        tail_term: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Complex, Error};

    fn plus() -> QubitVector {
        QubitVector::from_real(1.0, 1.0).normalized().unwrap()
    }

    #[test]
    fn overlap_examples() {
        let (e1, e2) = (QubitVector::e1(), QubitVector::e2());
        assert_eq!(overlap_term(&e1, &e1).unwrap(), 0.0);
        assert_eq!(overlap_term(&e1, &e2).unwrap(), 1.0);
        let t = overlap_term(&e1, &plus()).unwrap();
        assert!((t - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);
        assert!((t - 0.29289).abs() < 1e-5);
        assert!(matches!(
            overlap_term(&e1, &QubitVector::from_real(1.0, 1.0)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn finite_overrides_are_equivalent() {
        let tail = QubitVector::bloch(0.4, 1.0);
        let overrides_f: Vec<_> = (1..=5).map(|s| (SiteId(s), QubitVector::bloch(0.3 * s as f64, 0.0))).collect();
        let f = ThetaFamily::new(tail, overrides_f.clone()).unwrap();
        let g = ThetaFamily::constant(tail).unwrap();
        let v = decide_equivalence(&f, &g).unwrap();
        assert_eq!(v.status, EquivalenceStatus::Equivalent);
        assert_eq!(v.terms_evaluated, 5);
        let expected: f64 = overrides_f.iter().map(|(_, u)| overlap_term(u, &tail).unwrap()).sum();
        assert!((v.partial_sum - expected).abs() < 1e-15);
    }

    #[test]
    fn tilted_tail_is_inequivalent() {
        let f = ThetaFamily::constant(QubitVector::e1()).unwrap();
        let g = ThetaFamily::constant(plus()).unwrap();
        let v = decide_equivalence(&f, &g).unwrap();
        assert_eq!(v.status, EquivalenceStatus::Inequivalent);
        assert!((v.tail_term.unwrap() - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);
        assert_eq!(v.partial_sum, 0.0);
    }

    #[test]
    fn phase_rotated_tail_is_equivalent() {
        let tail = QubitVector::bloch(1.3, 0.2);
        let f = ThetaFamily::constant(tail).unwrap();
        let g = ThetaFamily::constant(tail.scale(Complex::from_polar(1.0, std::f64::consts::FRAC_PI_3))).unwrap();
        assert_eq!(decide_equivalence(&f, &g).unwrap().status, EquivalenceStatus::Equivalent);
    }

    #[test]
    fn reflexive_and_symmetric() {
        let f = ThetaFamily::new(QubitVector::e1(), [(SiteId(2), plus())]).unwrap();
        let g = ThetaFamily::new(QubitVector::bloch(0.2, 0.0), [(SiteId(7), QubitVector::e2())]).unwrap();
        let ff = decide_equivalence(&f, &f).unwrap();
        assert_eq!(ff.status, EquivalenceStatus::Equivalent);
        assert!(ff.partial_sum < 1e-15);
        let (fg, gf) = (decide_equivalence(&f, &g).unwrap(), decide_equivalence(&g, &f).unwrap());
        assert_eq!(fg.status, gf.status);
        assert!((fg.partial_sum - gf.partial_sum).abs() < 1e-12);
    }

    #[test]
    fn rule_families_are_inconclusive() {
        // θ_s tilted by 1/s²: summable, but only a partial sum is reported
        let v = partial_series(|_| QubitVector::e1(), |s| QubitVector::bloch(1.0 / (s.0 as f64).powi(2), 0.0), 50).unwrap();
        assert_eq!(v.status, EquivalenceStatus::Inconclusive);
        assert_eq!(v.terms_evaluated, 50);
        assert!(v.partial_sum > 0.0 && v.partial_sum < 1.0);
    }
}
