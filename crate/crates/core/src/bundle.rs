//! The trivial bundle 𝔈 = X × Q_S^θ, its finitely supported sections, and
//! the representation
//!
//! `(π(f)φ)(x) = Σ_g f((x, g)) ĝ φ(xg)`
//!
//! of 𝒦(𝔊, ℂ) on them. The fibre map attached to an arrow `(x, g)` is the
//! σ¹-string ĝ; base points only select source and target fibres.
//!
//! An arrow `(x, g)` has range `x` and domain `xg`, so π moves vectors from
//! the domain fibre to the range fibre. Moving them the other way, as in
//! `Σ_g f((xg⁻¹, g)) ĝ φ(xg⁻¹)`, gives [`pi_apply_opposite`], which reverses
//! products: π°(f*h) = π°(h)π°(f).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convolution::{hat, ConvFunction};
use crate::flips::{FlipSet, SiteId};
use crate::groupoid::{GroupoidElement, Point};
use crate::oracle::DenseMatrix;
use crate::sampling;
use crate::theta::{same_family, Configuration, SparseState, ThetaFamily};
use crate::{Complex, Error, Result};

/// Residual tolerance for [`star_rep_check`].
pub const REP_TOL: f64 = 1e-10;

/// A finitely supported section `x ↦ φ(x) ∈ Q_S^θ`.
#[derive(Clone, Debug)]
pub struct Section {
    family: Arc<ThetaFamily>,
    values: BTreeMap<Point, SparseState>,
}

impl Section {
    pub fn zero(family: Arc<ThetaFamily>) -> Self {
        Section {
            family,
            values: BTreeMap::new(),
        }
    }

    pub fn from_values(family: Arc<ThetaFamily>, values: impl IntoIterator<Item = (Point, SparseState)>) -> Result<Self> {
        let mut out = Section::zero(family);
        for (p, v) in values {
            out.accumulate(p, v)?;
        }
        Ok(out)
    }

    /// The section equal to `state` at `point` and zero elsewhere.
    pub fn single(point: Point, state: SparseState) -> Self {
        let family = state.family().clone();
        Section::from_values(family, [(point, state)]).expect("state carries the section family")
    }

    fn accumulate(&mut self, point: Point, state: SparseState) -> Result<()> {
        if !same_family(&self.family, state.family()) {
            return Err(Error::FamilyMismatch);
        }
        let merged = match self.values.remove(&point) {
            Some(prev) => prev.try_add(&state)?,
            None => state,
        };
        if !merged.is_zero() {
            self.values.insert(point, merged);
        }
        Ok(())
    }

    pub fn family(&self) -> &Arc<ThetaFamily> {
        &self.family
    }

    pub fn values(&self) -> impl Iterator<Item = (&Point, &SparseState)> + '_ {
        self.values.iter()
    }

    pub fn get(&self, p: &Point) -> Option<&SparseState> {
        self.values.get(p)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.values().map(SparseState::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex) -> Section {
        let mut out = Section::zero(self.family.clone());
        for (p, v) in &self.values {
            out.accumulate(p.clone(), v.scale(c)).expect("same family");
        }
        out
    }

    pub fn try_add(&self, other: &Section) -> Result<Section> {
        let mut out = self.clone();
        for (p, v) in &other.values {
            out.accumulate(p.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Section) -> Result<Section> {
        self.try_add(&other.scale(Complex::new(-1.0, 0.0)))
    }
}

/// Image of `v` under the fibre isomorphism of `e`, i.e. `ĝ v` for `e = (x, g)`.
pub fn groupoid_act(e: &GroupoidElement, v: &SparseState) -> SparseState {
    hat(&e.group).apply(v)
}

/// `Σ_x ⟨φ(x)|ψ(x)⟩`.
pub fn l2_inner(phi: &Section, psi: &Section) -> Result<Complex> {
    if !same_family(&phi.family, &psi.family) {
        return Err(Error::FamilyMismatch);
    }
    let mut acc = Complex::new(0.0, 0.0);
    for (p, u) in &phi.values {
        if let Some(v) = psi.values.get(p) {
            acc += u.inner(v)?;
        }
    }
    Ok(acc)
}

/// `(π(f)φ)(x) = Σ_g f((x, g)) ĝ φ(xg)`: each support arrow `(y, g)` carries
/// `f((y, g)) ĝ φ(y·g)` to the fibre over `y`.
pub fn pi_apply(f: &ConvFunction, phi: &Section) -> Section {
    let mut out = Section::zero(phi.family.clone());
    for (arrow, coeff) in f.entries() {
        let Some(state) = phi.values.get(&arrow.target_point()) else {
            continue;
        };
        let image = groupoid_act(arrow, state).scale(coeff);
        out.accumulate(arrow.point.clone(), image)
            .expect("images keep the section family");
    }
    out
}

/// `(π°(f)φ)(x) = Σ_g f((xg⁻¹, g)) ĝ φ(xg⁻¹)`: each support arrow `(y, g)`
/// carries `f((y, g)) ĝ φ(y)` to the fibre over `y·g`.
pub fn pi_apply_opposite(f: &ConvFunction, phi: &Section) -> Section {
    let mut out = Section::zero(phi.family.clone());
    for (arrow, coeff) in f.entries() {
        let Some(state) = phi.values.get(&arrow.point) else {
            continue;
        };
        let image = groupoid_act(arrow, state).scale(coeff);
        out.accumulate(arrow.target_point(), image)
            .expect("images keep the section family");
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct StarRepReport {
    pub trials: usize,
    pub passed: bool,
    /// max ‖π(f*h)φ − π(f)π(h)φ‖
    pub product_residual: f64,
    /// max |⟨π(f*)φ, ψ⟩ − ⟨φ, π(f)ψ⟩|
    pub adjoint_residual: f64,
    /// max ‖π(f)φ‖ / ‖φ‖ over the trials
    pub max_norm_ratio: f64,
    pub i_norm: f64,
    /// ‖π(f)φ‖ ≤ i_norm(f)‖φ‖ held (with `REP_TOL` slack) in every trial.
    pub i_norm_dominates: bool,
}

/// Random-section test that π is a *-representation on `f` and `h`.
pub fn star_rep_check(f: &ConvFunction, h: &ConvFunction, trials: usize, seed: u64) -> Result<StarRepReport> {
    star_rep_check_with(f, h, trials, seed, ConvFunction::convolve)
}

/// As [`star_rep_check`], with the product on 𝒦(𝔊, ℂ) supplied by the caller.
pub fn star_rep_check_with(
    f: &ConvFunction,
    h: &ConvFunction,
    trials: usize,
    seed: u64,
    product: impl Fn(&ConvFunction, &ConvFunction) -> ConvFunction,
) -> Result<StarRepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: BTreeSet<Point> = f.base_points();
    points.extend(h.base_points());
    let mut sites: BTreeSet<SiteId> = f
        .entries()
        .chain(h.entries())
        .flat_map(|(e, _)| e.group.support().iter().collect::<Vec<_>>())
        .collect();
    if sites.is_empty() {
        sites.extend([SiteId(1), SiteId(2)]);
    }
    let sites: Vec<SiteId> = sites.into_iter().collect();
    let points: Vec<Point> = points.into_iter().collect();

    let fh = product(f, h);
    let f_star = f.involution();
    let i_norm = f.i_norm();
    let mut report = StarRepReport {
        trials,
        passed: true,
        product_residual: 0.0,
        adjoint_residual: 0.0,
        max_norm_ratio: 0.0,
        i_norm,
        i_norm_dominates: true,
    };
    for _ in 0..trials {
        let family = Arc::new(sampling::random_family(&mut rng, &sites));
        let phi = sampling::random_section(&mut rng, &family, &points, &sites);
        let psi = sampling::random_section(&mut rng, &family, &points, &sites);

        let lhs = pi_apply(&fh, &phi);
        let rhs = pi_apply(f, &pi_apply(h, &phi));
        report.product_residual = report.product_residual.max(lhs.try_sub(&rhs)?.norm());

        let a = l2_inner(&pi_apply(&f_star, &phi), &psi)?;
        let b = l2_inner(&phi, &pi_apply(f, &psi))?;
        report.adjoint_residual = report.adjoint_residual.max((a - b).norm());

        let phi_norm = phi.norm();
        if phi_norm > 0.0 {
            let image = pi_apply(f, &phi).norm();
            report.max_norm_ratio = report.max_norm_ratio.max(image / phi_norm);
            if image > i_norm * phi_norm + REP_TOL {
                report.i_norm_dominates = false;
            }
        }
    }
    report.passed = report.product_residual < REP_TOL && report.adjoint_residual < REP_TOL;
    Ok(report)
}

/// Basis vectors `(point, configuration)` of a finite truncation of L²(𝔈).
pub type TruncationBasis = Vec<(Point, Configuration)>;

/// Closes `seeds` under the arrows of `f`, followed in both directions, and
/// pairs every resulting point with every configuration over `sites`.
pub fn truncation_basis<'a>(
    f: &ConvFunction,
    seeds: impl IntoIterator<Item = &'a Point>,
    sites: &[SiteId],
) -> TruncationBasis {
    let mut points: BTreeSet<Point> = seeds.into_iter().cloned().collect();
    loop {
        let new: Vec<Point> = f
            .entries()
            .flat_map(|(e, _)| {
                let (r, d) = (e.point.clone(), e.target_point());
                match (points.contains(&r), points.contains(&d)) {
                    (true, false) => Some(d),
                    (false, true) => Some(r),
                    _ => None,
                }
            })
            .collect();
        if new.is_empty() {
            break;
        }
        points.extend(new);
    }
    let configs = FlipSet::subsets_of(sites);
    points
        .into_iter()
        .flat_map(|p| configs.iter().map(move |c| (p.clone(), c.clone())))
        .collect()
}

/// Matrix of π(f) on the span of `basis` under the reference family `family`:
/// entry `(i, j)` is `⟨bᵢ | π(f) bⱼ⟩`. Its largest singular value bounds the
/// represented norm of `f` from below.
pub fn matrix_on_truncation(
    f: &ConvFunction,
    family: &Arc<ThetaFamily>,
    basis: &[(Point, Configuration)],
) -> Result<DenseMatrix> {
    let index: HashMap<(&Point, &Configuration), usize> =
        basis.iter().enumerate().map(|(i, (p, c))| ((p, c), i)).collect();
    let column = |j: usize| -> Result<Vec<(usize, Complex)>> {
        let (p, c) = &basis[j];
        let phi = Section::single(p.clone(), SparseState::basis(family.clone(), c.clone()));
        let image = pi_apply(f, &phi);
        let mut col = Vec::new();
        for (q, state) in image.values() {
            for (config, coeff) in state.terms() {
                let i = *index.get(&(q, config)).ok_or(Error::BasisNotClosed)?;
                col.push((i, coeff));
            }
        }
        Ok(col)
    };
    #[cfg(feature = "parallel")]
    let columns: Vec<Result<Vec<(usize, Complex)>>> = {
        use rayon::prelude::*;
        (0..basis.len()).into_par_iter().map(column).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let columns: Vec<Result<Vec<(usize, Complex)>>> = (0..basis.len()).map(column).collect();

    let n = basis.len();
    let mut out = DenseMatrix::zeros(n, n);
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col? {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupElement;
    use crate::site::QubitVector;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn std_family() -> Arc<ThetaFamily> {
        Arc::new(ThetaFamily::standard())
    }

    fn x0() -> Point {
        Point::base("x")
    }

    #[test]
    fn groupoid_act_examples() {
        let fam = std_family();
        let vac = SparseState::vacuum(fam.clone());
        assert_eq!(groupoid_act(&GroupoidElement::unit_at(x0()), &vac), vac);
        let e = GroupoidElement::new(x0(), [3]);
        assert_eq!(groupoid_act(&e, &vac), SparseState::basis(fam, FlipSet::from([3])));
        assert_eq!(groupoid_act(&e, &groupoid_act(&e, &vac)), vac);
    }

    #[test]
    fn groupoid_act_respects_composition() {
        let fam = Arc::new(ThetaFamily::constant(QubitVector::bloch(0.9, 0.3)).unwrap());
        let v = SparseState::from_terms(
            fam,
            [(FlipSet::from([1]), c(0.5, 0.5)), (FlipSet::from([2, 4]), c(-1.0, 0.2))],
        );
        let e = GroupoidElement::new(x0(), [1, 2]);
        let e2 = GroupoidElement::new(e.target_point(), [2, 4]);
        let composite = groupoid_act(&e.compose(&e2).unwrap(), &v);
        let stepwise = groupoid_act(&e, &groupoid_act(&e2, &v));
        assert!((&composite - &stepwise).norm() < 1e-12);
    }

    #[test]
    fn l2_inner_examples() {
        let fam = std_family();
        let vac = SparseState::vacuum(fam.clone());
        let a = Section::single(x0(), vac.clone());
        let b = Section::single(Point::new("x", [1]), vac.clone());
        assert_eq!(l2_inner(&a, &b).unwrap(), c(0.0, 0.0));
        assert_eq!(l2_inner(&a, &a).unwrap(), c(1.0, 0.0));
        let ab = a.try_add(&b.scale(c(0.0, 2.0))).unwrap();
        // ⟨a + 2i b, a + 2i b⟩ = 1 + 4
        assert!((l2_inner(&ab, &ab).unwrap() - c(5.0, 0.0)).norm() < 1e-15);
        assert!((l2_inner(&a, &ab).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((l2_inner(&b, &ab).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn l2_inner_rejects_foreign_family() {
        let a = Section::single(x0(), SparseState::vacuum(std_family()));
        let other = Arc::new(ThetaFamily::constant(QubitVector::e2()).unwrap());
        let b = Section::single(x0(), SparseState::vacuum(other));
        assert!(matches!(l2_inner(&a, &b), Err(Error::FamilyMismatch)));
    }

    #[test]
    fn pi_apply_examples() {
        let fam = std_family();
        let vac = SparseState::vacuum(fam.clone());
        let g0 = GroupElement::from([2, 3]);
        let f = ConvFunction::delta(GroupoidElement::new(x0(), g0.clone()));
        let phi = Section::single(x0().act(&g0), vac.clone());
        let out = pi_apply(&f, &phi);
        let expected = Section::single(x0(), SparseState::basis(fam.clone(), FlipSet::from([2, 3])));
        assert!(out.try_sub(&expected).unwrap().is_zero());
        assert!(pi_apply(&f, &Section::single(x0(), vac.clone())).is_zero());

        let phi = Section::single(x0(), vac.clone());
        let out = pi_apply_opposite(&f, &phi);
        let expected = Section::single(x0().act(&g0), SparseState::basis(fam.clone(), FlipSet::from([2, 3])));
        assert!(out.try_sub(&expected).unwrap().is_zero());

        let psi = phi
            .try_add(&Section::single(Point::new("x", [5]), vac.scale(c(0.0, 1.0))))
            .unwrap();
        let points: Vec<Point> = psi.values().map(|(p, _)| p.clone()).collect();
        let unit = ConvFunction::local_unit(&points);
        assert!(pi_apply(&unit, &psi).try_sub(&psi).unwrap().is_zero());

        assert!(pi_apply(&f, &Section::zero(fam)).is_zero());
    }

    fn sample_pair() -> (ConvFunction, ConvFunction) {
        let p1 = Point::new("x", [1]);
        let f = ConvFunction::from_entries([
            (GroupoidElement::new(x0(), [1]), c(1.0, -0.5)),
            (GroupoidElement::new(p1.clone(), [1, 2]), c(0.3, 0.0)),
            (GroupoidElement::unit_at(x0()), c(-2.0, 1.0)),
        ]);
        let h = ConvFunction::from_entries([
            (GroupoidElement::new(p1, [1]), c(0.0, 1.0)),
            (GroupoidElement::new(Point::new("x", [2]), [1, 2]), c(1.5, 0.0)),
            (GroupoidElement::new(x0(), [2]), c(0.7, 0.7)),
        ]);
        (f, h)
    }

    #[test]
    fn star_rep_check_passes() {
        let (f, h) = sample_pair();
        let report = star_rep_check(&f, &h, 20, 7).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.i_norm_dominates);
    }

    #[test]
    fn opposite_orientation_reverses_products() {
        let (f, h) = sample_pair();
        let fam = Arc::new(ThetaFamily::constant(QubitVector::bloch(0.7, 0.2)).unwrap());
        let phi = Section::from_values(
            fam.clone(),
            [x0(), Point::new("x", [1]), Point::new("x", [2]), Point::new("x", [1, 2])]
                .into_iter()
                .enumerate()
                .map(|(k, p)| (p, SparseState::basis(fam.clone(), FlipSet::from([k as u32 + 1])))),
        )
        .unwrap();
        let fh = f.convolve(&h);
        let reversed = pi_apply_opposite(&h, &pi_apply_opposite(&f, &phi));
        assert!(pi_apply_opposite(&fh, &phi).try_sub(&reversed).unwrap().norm() < 1e-12);
        let forward = pi_apply_opposite(&f, &pi_apply_opposite(&h, &phi));
        assert!(pi_apply_opposite(&fh, &phi).try_sub(&forward).unwrap().norm() > 1e-3);
        let homomorphic = pi_apply(&f, &pi_apply(&h, &phi));
        assert!(pi_apply(&fh, &phi).try_sub(&homomorphic).unwrap().norm() < 1e-12);
    }

    #[test]
    fn star_rep_check_is_deterministic() {
        let (f, h) = sample_pair();
        let a = star_rep_check(&f, &h, 5, 99).unwrap();
        let b = star_rep_check(&f, &h, 5, 99).unwrap();
        assert_eq!(a.product_residual.to_bits(), b.product_residual.to_bits());
        assert_eq!(a.max_norm_ratio.to_bits(), b.max_norm_ratio.to_bits());
    }

    #[test]
    fn star_rep_check_with_local_units() {
        let (f, _) = sample_pair();
        let unit = ConvFunction::local_unit(&f.base_points());
        let report = star_rep_check(&unit, &unit, 5, 1).unwrap();
        assert!(report.passed);
        assert_eq!(report.product_residual, 0.0);
    }

    #[test]
    fn star_rep_check_catches_sign_flip() {
        let (f, h) = sample_pair();
        let report = star_rep_check_with(&f, &h, 5, 3, |a, b| a.convolve(b).scale(c(-1.0, 0.0))).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn truncation_matrix_of_local_unit_is_identity() {
        let fam = std_family();
        let unit = ConvFunction::local_unit(&[x0(), Point::new("x", [1])]);
        let basis = truncation_basis(&unit, &[x0(), Point::new("x", [1])], &[SiteId(1)]);
        let m = matrix_on_truncation(&unit, &fam, &basis).unwrap();
        assert_eq!(m, DenseMatrix::identity(4));
    }

    #[test]
    fn truncation_matrix_of_flip_is_a_permutation() {
        let fam = std_family();
        let f = ConvFunction::from_entries([
            (GroupoidElement::new(x0(), [1]), c(1.0, 0.0)),
            (GroupoidElement::new(Point::new("x", [1]), [1]), c(1.0, 0.0)),
        ]);
        let basis = truncation_basis(&f, &[x0()], &[SiteId(1)]);
        assert_eq!(basis.len(), 4);
        let m = matrix_on_truncation(&f, &fam, &basis).unwrap();
        for j in 0..4 {
            let col: Vec<Complex> = (0..4).map(|i| m.get(i, j)).collect();
            assert_eq!(col.iter().filter(|z| **z == c(1.0, 0.0)).count(), 1);
            assert_eq!(col.iter().filter(|z| **z == c(0.0, 0.0)).count(), 3);
        }
        assert!((m.spectral_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_matrix_reports_open_basis() {
        let fam = std_family();
        let f = ConvFunction::delta(GroupoidElement::new(x0(), [1]));
        let basis = vec![(Point::new("x", [1]), FlipSet::empty())];
        assert!(matches!(matrix_on_truncation(&f, &fam, &basis), Err(Error::BasisNotClosed)));
    }
}
