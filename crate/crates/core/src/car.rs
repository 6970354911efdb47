//! Jordan–Wigner generators of the CAR algebra inside the string algebra.
//!
//! `a_s = ½ σ³₁ ⋯ σ³_{s−1} (σ¹_s + iσ²_s)` and `a_s⁺ = (a_s)*`. Since
//! `½(σ¹ + iσ²)` is the matrix unit e₁₂, the annihilator is the elementary
//! string `{1: σ³, …, s−1: σ³, s: e₁₂}`.

use std::sync::Arc;

use serde::Serialize;

use crate::flips::SiteId;
use crate::oracle::{self, DenseMatrix};
use crate::site::LocalOperator;
use crate::strings::AlgebraElement;
use crate::theta::{SparseState, ThetaFamily};
use crate::{Complex, Error, Result};

/// Largest `n` accepted by [`car_relations_check`].
pub const MAX_CAR_SITES: usize = 8;

/// Largest truncation accepted by [`cyclicity_rank`].
pub const MAX_CYCLIC_SITES: usize = 6;

/// Tolerance for every anticommutator residual.
pub const CAR_TOL: f64 = 1e-12;

/// Fermion mode index, `s ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FermionIndex(SiteId);

impl FermionIndex {
    pub fn new(site: u32) -> Result<Self> {
        if site == 0 {
            return Err(Error::InvalidFermionIndex);
        }
        Ok(FermionIndex(SiteId(site)))
    }

    pub fn site(self) -> SiteId {
        self.0
    }
}

pub fn annihilator(s: FermionIndex) -> AlgebraElement {
    let half = Complex::new(0.5, 0.0);
    let i = Complex::new(0.0, 1.0);
    let mode = (LocalOperator::sigma_x() + LocalOperator::sigma_y().scale(i)).scale(half);
    let chain = (1..s.0 .0).map(|r| (SiteId(r), LocalOperator::sigma_z()));
    AlgebraElement::elementary(Complex::new(1.0, 0.0), chain.chain([(s.0, mode)]))
}

pub fn creator(s: FermionIndex) -> AlgebraElement {
    annihilator(s).string_adjoint()
}

/// `AB + BA`.
pub fn anticommutator(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    &(a * b) + &(b * a)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CarReport {
    pub sites: usize,
    pub passed: bool,
    pub max_residual: f64,
    pub checks: Vec<RelationCheck>,
}

/// Checks `{a_r, a_s} = 0`, `{a_r⁺, a_s⁺} = 0` and `{a_r, a_s⁺} = δ_rs 𝟙` for
/// all `1 ≤ r, s ≤ n` on the `2^n`-dimensional truncation.
pub fn car_relations_check(n: usize) -> Result<CarReport> {
    car_relations_check_with(n, annihilator)
}

/// As [`car_relations_check`] with a caller-supplied annihilator; creators
/// are its adjoints. Used for negative controls.
///
/// Each anticommutator is evaluated twice: once by dense products of the
/// Kronecker matrices of the generators, once by the sparse string product
/// followed by a Kronecker expansion. The residual is the larger deviation
/// of the two from the expected matrix.
pub fn car_relations_check_with(n: usize, generator: impl Fn(FermionIndex) -> AlgebraElement) -> Result<CarReport> {
    if n > MAX_CAR_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            requested: n,
            limit: MAX_CAR_SITES,
        });
    }
    let dim = 1usize << n;
    let modes = (1..=n as u32).map(FermionIndex::new).collect::<Result<Vec<_>>>()?;
    let lower: Vec<AlgebraElement> = modes.iter().map(|&s| generator(s)).collect();
    let upper: Vec<AlgebraElement> = lower.iter().map(AlgebraElement::string_adjoint).collect();
    let dense_lower = lower.iter().map(|a| oracle::kron_string(n, a)).collect::<Result<Vec<_>>>()?;
    let dense_upper: Vec<DenseMatrix> = dense_lower.iter().map(DenseMatrix::adjoint).collect();

    let zero = DenseMatrix::zeros(dim, dim);
    let identity = DenseMatrix::identity(dim);
    let mut groups = [
        ("{a_r, a_s}", 0.0f64),
        ("{a_r+, a_s+}", 0.0f64),
        ("{a_r, a_s+}", 0.0f64),
    ];
    for r in 0..n {
        for s in 0..n {
            let cases = [
                (0, &lower[r], &lower[s], &dense_lower[r], &dense_lower[s], &zero),
                (1, &upper[r], &upper[s], &dense_upper[r], &dense_upper[s], &zero),
                (
                    2,
                    &lower[r],
                    &upper[s],
                    &dense_lower[r],
                    &dense_upper[s],
                    if r == s { &identity } else { &zero },
                ),
            ];
            for (group, a, b, da, db, expected) in cases {
                let dense = da.matmul(db).add(&db.matmul(da));
                let sparse = oracle::kron_string(n, &anticommutator(a, b))?;
                let residual = dense.max_abs_diff(expected).max(sparse.max_abs_diff(expected));
                groups[group].1 = groups[group].1.max(residual);
            }
        }
    }
    let checks: Vec<RelationCheck> = groups
        .iter()
        .map(|(name, residual)| RelationCheck {
            name: (*name).to_string(),
            residual: *residual,
            passed: *residual < CAR_TOL,
        })
        .collect();
    let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(CarReport {
        sites: n,
        passed: checks.iter().all(|c| c.passed),
        max_residual,
        checks,
    })
}

/// Annihilator with the σ³ chain left out; violates `{a_r, a_s} = 0` for `r ≠ s`.
pub fn chainless_annihilator(s: FermionIndex) -> AlgebraElement {
    AlgebraElement::site(s.site(), LocalOperator::raising())
}

/// Rank of `{M·Ω}` inside the truncation `1..=m`, where `Ω` is the reference
/// vector of the family θ_s = e₁ and `M` runs over the ordered monomials
/// `∏_s b_s` with `b_s ∈ {𝟙, a_s, a_s⁺, a_s⁺a_s}`. The CAR generators act
/// cyclically on the truncation exactly when this equals `2^m`.
pub fn cyclicity_rank(m: usize) -> Result<usize> {
    if m > MAX_CYCLIC_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            requested: m,
            limit: MAX_CYCLIC_SITES,
        });
    }
    let family = Arc::new(ThetaFamily::standard());
    let vacuum = SparseState::vacuum(family);
    let mut monomials = vec![AlgebraElement::identity()];
    for s in 1..=m as u32 {
        let a = annihilator(FermionIndex::new(s)?);
        let ad = a.string_adjoint();
        let number = &ad * &a;
        let letters = [AlgebraElement::identity(), a, ad, number];
        monomials = monomials
            .iter()
            .flat_map(|prefix| letters.iter().map(move |b| prefix * b))
            .collect();
    }
    let vectors = monomials
        .iter()
        .map(|mono| oracle::embed_state(m, &mono.apply(&vacuum)).map(|v| v.entries))
        .collect::<Result<Vec<_>>>()?;
    Ok(oracle::rank(&vectors))
}
