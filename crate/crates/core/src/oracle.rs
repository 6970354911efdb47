//! Dense ground truth on the truncation to sites `1..=m`.
//!
//! Strings become Kronecker products of their `m` site factors and states
//! become vectors in ℂ^(2^m). Site 1 is the most significant tensor slot.
//! Nothing here goes through the sparse expansion code in
//! [`crate::strings`] or [`crate::theta`]; only the stored data (terms,
//! factor matrices, reference vectors) is read.

use nalgebra::DMatrix;

use crate::flips::SiteId;
use crate::site::{LocalOperator, QubitVector};
use crate::strings::AlgebraElement;
use crate::theta::SparseState;
use crate::{Complex, Error, Result};

/// Largest truncation the Kronecker routines accept (256-dimensional).
pub const MAX_ORACLE_SITES: usize = 8;

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_local(op: &LocalOperator) -> Self {
        DenseMatrix {
            rows: 2,
            cols: 2,
            entries: op.entries().collect(),
        }
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Complex>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        DenseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex> {
        self.entries
    }

    pub fn kron(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = DenseMatrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.entries[(i * rhs.rows + k) * c + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// Matrix product; zero entries of `self` are skipped, which keeps the
    /// products of monomial matrices cheap.
    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let row = &rhs.entries[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.entries[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &DenseVector) -> DenseVector {
        assert_eq!(self.cols, v.entries.len(), "dimension mismatch");
        let entries = (0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(&v.entries)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        DenseVector { entries }
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.entries.is_empty() {
            return Vec::new();
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.entries);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseVector {
    pub entries: Vec<Complex>,
}

impl DenseVector {
    pub fn zeros(dim: usize) -> Self {
        DenseVector { entries: vec![ZERO; dim] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Conjugate-linear in `self`.
    pub fn inner(&self, other: &DenseVector) -> Complex {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &DenseVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn kron(&self, rhs: &[Complex; 2]) -> DenseVector {
        DenseVector {
            entries: self.entries.iter().flat_map(|a| [a * rhs[0], a * rhs[1]]).collect(),
        }
    }
}

fn check_sites(m: usize) -> Result<()> {
    if m > MAX_ORACLE_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            requested: m,
            limit: MAX_ORACLE_SITES,
        });
    }
    Ok(())
}

fn check_site(site: SiteId, m: usize) -> Result<()> {
    if site.0 == 0 || site.0 as usize > m {
        return Err(Error::SiteOutOfRange { site, sites: m });
    }
    Ok(())
}

/// `Σ c · a₁ ⊗ a₂ ⊗ … ⊗ a_m` over the terms of `a`.
pub fn kron_string(m: usize, a: &AlgebraElement) -> Result<DenseMatrix> {
    check_sites(m)?;
    let dim = 1usize << m;
    let mut out = DenseMatrix::zeros(dim, dim);
    for (string, coeff) in a.terms() {
        for (site, _) in string.factors() {
            check_site(site, m)?;
        }
        let mut acc = DenseMatrix::from_rows(1, 1, vec![coeff]);
        for s in 1..=m as u32 {
            acc = acc.kron(&DenseMatrix::from_local(&string.factor(SiteId(s))));
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// `Σ c · ⊗_{s ≤ m} v_s` with `v_s = θ_s` off the flip set and `θ_s^⊥` on it.
pub fn embed_state(m: usize, u: &SparseState) -> Result<DenseVector> {
    check_sites(m)?;
    let family = u.family();
    let mut out = DenseVector::zeros(1 << m);
    for (config, coeff) in u.terms() {
        for site in config.iter() {
            check_site(site, m)?;
        }
        let mut acc = DenseVector { entries: vec![coeff] };
        for s in 1..=m as u32 {
            let theta = family.theta(SiteId(s));
            let v = if config.contains(SiteId(s)) { perp(&theta) } else { theta };
            acc = acc.kron(&[v.c1, v.c2]);
        }
        for (o, a) in out.entries.iter_mut().zip(acc.entries) {
            *o += a;
        }
    }
    Ok(out)
}

fn perp(v: &QubitVector) -> QubitVector {
    QubitVector::new(-v.c2.conj(), v.c1.conj())
}

/// `‖kron(a)·embed(u) − embed(apply(a, u))‖_∞`.
pub fn compare_apply(m: usize, a: &AlgebraElement, u: &SparseState) -> Result<f64> {
    let dense = kron_string(m, a)?.mul_vec(&embed_state(m, u)?);
    let sparse = embed_state(m, &a.apply(u))?;
    Ok(dense.max_abs_diff(&sparse))
}

/// Spectral norm of `a` restricted to the truncation `1..=m`.
pub fn operator_norm(m: usize, a: &AlgebraElement) -> Result<f64> {
    Ok(kron_string(m, a)?.spectral_norm())
}

/// Numerical rank of a family of vectors by Gaussian elimination with
/// partial pivoting. Pivots below `1e-10` times the largest entry count as zero.
pub fn rank(vectors: &[Vec<Complex>]) -> usize {
    let mut rows: Vec<Vec<Complex>> = vectors.to_vec();
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(cols, ZERO);
    }
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let tol = 1e-10 * scale;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let (pivot, size) = (rank..rows.len())
            .map(|r| (r, rows[r][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty range");
        if size <= tol {
            continue;
        }
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        let inv = prow[col].inv();
        for row in tail.iter_mut() {
            let f = row[col] * inv;
            if f == ZERO {
                continue;
            }
            for (x, p) in row[col..].iter_mut().zip(&prow[col..]) {
                *x -= f * p;
            }
        }
        rank += 1;
    }
    rank
}
