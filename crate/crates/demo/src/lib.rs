//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as `{"error": ...}`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use qubit_algebras::bundle::{matrix_on_truncation, truncation_basis};
use qubit_algebras::car::{self, FermionIndex};
use qubit_algebras::equivalence::decide_equivalence;
use qubit_algebras::flips::SiteId;
use qubit_algebras::oracle::{self, DenseMatrix};
use qubit_algebras::sampling;
use qubit_algebras::site::QubitVector;
use qubit_algebras::strings::AlgebraElement;
use qubit_algebras::theta::ThetaFamily;
use qubit_algebras::{Complex, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest chain shown in the CAR heatmap.
pub const MAX_HEATMAP_SITES: u32 = 6;
/// Largest flip-site count for the truncation spectrum.
pub const MAX_SPECTRUM_SITES: u32 = 3;

fn respond(result: Result<Value>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Family A has tail `bloch(polar_a, azimuth_a)` and family B tail
/// `bloch(polar_b, azimuth_b)`; both carry the same two overrides. Returns
/// the verdict for that pair and the tail term for every B tail on a
/// `resolution × resolution` grid of (polar, azimuth).
#[wasm_bindgen]
pub fn equivalence_explorer(polar_a: f64, azimuth_a: f64, polar_b: f64, azimuth_b: f64, resolution: u32) -> String {
    respond(explore(polar_a, azimuth_a, polar_b, azimuth_b, resolution.clamp(2, 64) as usize))
}

fn with_overrides(tail: QubitVector) -> Result<ThetaFamily> {
    ThetaFamily::new(tail, [(SiteId(1), QubitVector::e2()), (SiteId(4), QubitVector::bloch(1.0, 2.0))])
}

fn explore(pa: f64, aa: f64, pb: f64, ab: f64, n: usize) -> Result<Value> {
    let fa = with_overrides(QubitVector::bloch(pa, aa))?;
    let verdict = decide_equivalence(&fa, &with_overrides(QubitVector::bloch(pb, ab))?)?;
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let polar = PI * i as f64 / (n - 1) as f64;
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let azimuth = TAU * j as f64 / n as f64;
            let v = decide_equivalence(&fa, &with_overrides(QubitVector::bloch(polar, azimuth))?)?;
            row.push(v.tail_term.unwrap_or(f64::NAN));
        }
        grid.push(row);
    }
    Ok(json!({ "verdict": verdict, "resolution": n, "tail_terms": grid }))
}

/// Residual of the relations between modes `r` and `s`, for every pair on a
/// chain of `sites` modes, against the dense truncation.
#[wasm_bindgen]
pub fn car_heatmap(sites: u32, corrupt: bool) -> String {
    respond(heatmap(sites, corrupt))
}

fn heatmap(sites: u32, corrupt: bool) -> Result<Value> {
    if sites == 0 || sites > MAX_HEATMAP_SITES {
        return Err(qubit_algebras::Error::TooLarge {
            what: "heatmap sites",
            requested: sites as usize,
            limit: MAX_HEATMAP_SITES as usize,
        });
    }
    let m = sites as usize;
    let generator = |s: u32| -> Result<AlgebraElement> {
        let idx = FermionIndex::new(s)?;
        Ok(if corrupt { car::chainless_annihilator(idx) } else { car::annihilator(idx) })
    };
    let mut a = Vec::with_capacity(m);
    for s in 1..=sites {
        a.push(oracle::kron_string(m, &generator(s)?)?);
    }
    let a_dag: Vec<DenseMatrix> = a.iter().map(DenseMatrix::adjoint).collect();
    let dim = 1usize << m;
    let zero = DenseMatrix::zeros(dim, dim);
    let one = DenseMatrix::identity(dim);
    let anti = |x: &DenseMatrix, y: &DenseMatrix| x.matmul(y).add(&y.matmul(x));
    let mut grid = vec![vec![0.0f64; m]; m];
    let mut max = 0.0f64;
    for r in 0..m {
        for s in 0..m {
            let delta = if r == s { &one } else { &zero };
            let residual = anti(&a[r], &a[s])
                .max_abs_diff(&zero)
                .max(anti(&a_dag[r], &a_dag[s]).max_abs_diff(&zero))
                .max(anti(&a[r], &a_dag[s]).max_abs_diff(delta));
            grid[r][s] = residual;
            max = max.max(residual);
        }
    }
    Ok(json!({ "sites": m, "corrupt": corrupt, "max_residual": max, "residuals": grid }))
}

/// Singular values of π(f) on a finite truncation, for a random function f
/// drawn from `seed` on an orbit of up to eight points over `sites` flip
/// sites, together with its I-norm. The largest singular value is a lower
/// bound for the represented norm and never exceeds the I-norm.
#[wasm_bindgen]
pub fn truncation_spectrum(seed: u32, sites: u32, max_entries: u32) -> String {
    respond(spectrum(seed, sites, max_entries.clamp(1, 12) as usize))
}

fn spectrum(seed: u32, sites: u32, max_entries: usize) -> Result<Value> {
    if sites == 0 || sites > MAX_SPECTRUM_SITES {
        return Err(qubit_algebras::Error::TooLarge {
            what: "spectrum sites",
            requested: sites as usize,
            limit: MAX_SPECTRUM_SITES as usize,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let pool: Vec<SiteId> = (1..=sites).map(SiteId).collect();
    let points = sampling::random_orbit(&mut rng, "x", &pool, 8);
    let f = sampling::random_conv_function(&mut rng, &points, &pool, max_entries);
    let family = Arc::new(sampling::random_family(&mut rng, &pool));
    let basis = truncation_basis(&f, &points, &pool);
    let matrix = matrix_on_truncation(&f, &family, &basis)?;
    let singular = matrix.singular_values();
    let entries: Vec<Value> = f
        .entries()
        .map(|(e, v): (_, Complex)| json!({ "arrow": e.to_string(), "value": [v.re, v.im] }))
        .collect();
    Ok(json!({
        "basis_size": basis.len(),
        "entries": entries,
        "i_norm": f.i_norm(),
        "lower_bound": singular.first().copied().unwrap_or(0.0),
        "singular_values": singular,
    }))
}
