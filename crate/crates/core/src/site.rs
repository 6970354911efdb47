//! Single-site algebra M₂: 2×2 complex matrices, their Pauli decomposition,
//! and vectors of ℂ².

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Complex, Error, Result, PRUNE_TOL, VECTOR_NORM_TOL};

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

/// An element of M₂, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalOperator(pub [[Complex; 2]; 2]);

/// The four Pauli letters accepted in input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "I" => Some(PauliLetter::I),
            "X" => Some(PauliLetter::X),
            "Y" => Some(PauliLetter::Y),
            "Z" => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PauliLetter::I => "I",
            PauliLetter::X => "X",
            PauliLetter::Y => "Y",
            PauliLetter::Z => "Z",
        }
    }

    pub fn matrix(self) -> LocalOperator {
        match self {
            PauliLetter::I => LocalOperator::identity(),
            PauliLetter::X => LocalOperator::sigma_x(),
            PauliLetter::Y => LocalOperator::sigma_y(),
            PauliLetter::Z => LocalOperator::sigma_z(),
        }
    }
}

/// Coefficients `(λ₀, λ₁, λ₂, λ₃)` of `a = iλ₀·𝟙 + λ₁σ¹ + λ₂σ² + λ₃σ³`.
///
/// The factor `i` on the identity component is part of the parametrization,
/// so the identity itself has `λ₀ = −i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliCoefficients(pub [Complex; 4]);

impl PauliCoefficients {
    pub fn reconstruct(&self) -> LocalOperator {
        let [l0, l1, l2, l3] = self.0;
        LocalOperator::identity().scale(I * l0)
            + LocalOperator::sigma_x().scale(l1)
            + LocalOperator::sigma_y().scale(l2)
            + LocalOperator::sigma_z().scale(l3)
    }
}

impl LocalOperator {
    pub const fn new(entries: [[Complex; 2]; 2]) -> Self {
        LocalOperator(entries)
    }

    pub fn from_real(entries: [[f64; 2]; 2]) -> Self {
        LocalOperator(entries.map(|row| row.map(|x| Complex::new(x, 0.0))))
    }

    pub const fn zero() -> Self {
        LocalOperator([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        LocalOperator([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma_x() -> Self {
        LocalOperator([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma_y() -> Self {
        LocalOperator([[ZERO, Complex::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn sigma_z() -> Self {
        LocalOperator([[ONE, ZERO], [ZERO, Complex::new(-1.0, 0.0)]])
    }

    /// Matrix unit e₁₂ = ½(σ¹ + iσ²), mapping e₂ to e₁.
    pub const fn raising() -> Self {
        LocalOperator([[ZERO, ONE], [ZERO, ZERO]])
    }

    /// Matrix unit e₂₁ = ½(σ¹ − iσ²), mapping e₁ to e₂.
    pub const fn lowering() -> Self {
        LocalOperator([[ZERO, ZERO], [ONE, ZERO]])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.0[row][col]
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex> + '_ {
        self.0.iter().flat_map(|row| row.iter().copied())
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, c: Complex) -> Self {
        LocalOperator(self.0.map(|row| row.map(|z| z * c)))
    }

    /// Matrix product `self · rhs`.
    pub fn mul2(&self, rhs: &LocalOperator) -> LocalOperator {
        let (a, b) = (&self.0, &rhs.0);
        LocalOperator([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Conjugate transpose.
    pub fn adjoint2(&self) -> LocalOperator {
        let a = &self.0;
        LocalOperator([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn pauli_coeffs(&self) -> PauliCoefficients {
        let a = &self.0;
        let half = Complex::new(0.5, 0.0);
        // trace part is iλ₀
        let l0 = -I * (a[0][0] + a[1][1]) * half;
        let l1 = (a[0][1] + a[1][0]) * half;
        let l2 = I * (a[0][1] - a[1][0]) * half;
        let l3 = (a[0][0] - a[1][1]) * half;
        PauliCoefficients([l0, l1, l2, l3])
    }

    /// `(Σ|λᵢ|²)^{1/2}` over the Pauli coefficients. This is not the
    /// operator norm: for `𝟙 + σ¹` it is √2 while the spectral norm is 2.
    pub fn site_norm_paper(&self) -> f64 {
        self.pauli_coeffs()
            .0
            .iter()
            .map(|l| l.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest singular value, in closed form.
    pub fn site_norm_operator(&self) -> f64 {
        let frob = self.entries().map(|z| z.norm_sqr()).sum::<f64>();
        let det = self.det().norm_sqr();
        let disc = (frob * frob - 4.0 * det).max(0.0).sqrt();
        ((frob + disc) / 2.0).sqrt()
    }

    pub fn det(&self) -> Complex {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs_diff(&self, other: &LocalOperator) -> f64 {
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `Some(c)` when `self` equals `c·𝟙` to within [`PRUNE_TOL`].
    pub fn as_scalar(&self) -> Option<Complex> {
        let a = &self.0;
        let c = (a[0][0] + a[1][1]) * 0.5;
        let off = a[0][1].norm().max(a[1][0].norm());
        let diag = (a[0][0] - c).norm().max((a[1][1] - c).norm());
        (off < PRUNE_TOL && diag < PRUNE_TOL).then_some(c)
    }

    /// Matrix of the operator in the orthonormal basis `(b₀, b₁)`:
    /// entry `(i, j)` is `⟨bᵢ| a |bⱼ⟩`.
    pub fn in_frame(&self, frame: &[QubitVector; 2]) -> LocalOperator {
        let images = [self.apply(&frame[0]), self.apply(&frame[1])];
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = frame[i].inner(&images[j]);
            }
        }
        LocalOperator(out)
    }

    pub fn apply(&self, v: &QubitVector) -> QubitVector {
        let a = &self.0;
        QubitVector {
            c1: a[0][0] * v.c1 + a[0][1] * v.c2,
            c2: a[1][0] * v.c1 + a[1][1] * v.c2,
        }
    }
}

impl Default for LocalOperator {
    fn default() -> Self {
        LocalOperator::zero()
    }
}

impl Mul for LocalOperator {
    type Output = LocalOperator;

    fn mul(self, rhs: LocalOperator) -> LocalOperator {
        self.mul2(&rhs)
    }
}

impl Add for LocalOperator {
    type Output = LocalOperator;

    fn add(self, rhs: LocalOperator) -> LocalOperator {
        let mut out = self.0;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z += rhs.0[i][j];
            }
        }
        LocalOperator(out)
    }
}

impl Sub for LocalOperator {
    type Output = LocalOperator;

    fn sub(self, rhs: LocalOperator) -> LocalOperator {
        self + (-rhs)
    }
}

impl Neg for LocalOperator {
    type Output = LocalOperator;

    fn neg(self) -> LocalOperator {
        LocalOperator(self.0.map(|row| row.map(|z| -z)))
    }
}

impl fmt::Display for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", a[0][0], a[0][1], a[1][0], a[1][1])
    }
}

/// A vector of ℂ² in the standard basis `e₁, e₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitVector {
    pub c1: Complex,
    pub c2: Complex,
}

impl QubitVector {
    pub const fn new(c1: Complex, c2: Complex) -> Self {
        QubitVector { c1, c2 }
    }

    pub const fn e1() -> Self {
        QubitVector { c1: ONE, c2: ZERO }
    }

    pub const fn e2() -> Self {
        QubitVector { c1: ZERO, c2: ONE }
    }

    pub fn from_real(c1: f64, c2: f64) -> Self {
        QubitVector::new(Complex::new(c1, 0.0), Complex::new(c2, 0.0))
    }

    /// Point on the Bloch sphere, `cos(θ/2) e₁ + e^{iφ} sin(θ/2) e₂`.
    pub fn bloch(polar: f64, azimuth: f64) -> Self {
        QubitVector::new(
            Complex::new((polar / 2.0).cos(), 0.0),
            Complex::from_polar((polar / 2.0).sin(), azimuth),
        )
    }

    /// Conjugate-linear in `self`.
    pub fn inner(&self, other: &QubitVector) -> Complex {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    pub fn norm(&self) -> f64 {
        (self.c1.norm_sqr() + self.c2.norm_sqr()).sqrt()
    }

    pub fn scale(&self, c: Complex) -> Self {
        QubitVector::new(self.c1 * c, self.c2 * c)
    }

    pub fn is_finite(&self) -> bool {
        [self.c1, self.c2]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(self.scale(Complex::new(1.0 / n, 0.0)))
    }

    pub(crate) fn check_normalized(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }

    /// Orthogonal complement `(α, β) ↦ (−β̄, ᾱ)`.
    pub fn theta_perp(&self) -> Result<QubitVector> {
        self.check_normalized(VECTOR_NORM_TOL)?;
        Ok(QubitVector::new(-self.c2.conj(), self.c1.conj()))
    }

    pub fn max_abs_diff(&self, other: &QubitVector) -> f64 {
        (self.c1 - other.c1).norm().max((self.c2 - other.c2).norm())
    }
}
