//! Graph Laplacians and their full symmetric eigendecomposition.
//!
//! The eigensolver is a cyclic Jacobi method using the round-robin
//! (tournament) ordering: each sweep is split into `m - 1` rounds of `m / 2`
//! disjoint rotations (`m` is `n` rounded up to even). Disjoint rotations
//! commute, so a whole round is applied as one row pass followed by one
//! column pass over contiguous memory. The sequence of rotations depends
//! only on the input matrix, which makes results bit-reproducible.

use std::ops::Range;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_SWEEPS: usize = 100;
/// Convergence: off-diagonal Frobenius norm below this fraction of ‖A‖_F.
pub const OFFDIAG_REL_TOL: f64 = 1e-12;
/// Default degeneracy tolerance, relative to `max(1, E_max)`.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;

/// Dense Laplacian `A = D - Adj`; with unit coupling this is also the
/// Hamiltonian of the quantum walk.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    matrix: Array2<f64>,
}

impl LaplacianMatrix {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.matrix
    }

    /// Max absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        inf_norm(&self.matrix)
    }
}

pub fn laplacian(g: &Graph) -> LaplacianMatrix {
    let n = g.node_count();
    let mut a = Array2::<f64>::zeros((n, n));
    for (u, v) in g.edges() {
        a[[u, v]] = -1.0;
        a[[v, u]] = -1.0;
        a[[u, u]] += 1.0;
        a[[v, v]] += 1.0;
    }
    LaplacianMatrix { matrix: a }
}

/// Eigenvalues in ascending order, matching orthonormal eigenvectors (as
/// columns) and the partition of indices into degenerate clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Array2<f64>,
    degeneracy_classes: Vec<Range<usize>>,
    degeneracy_tol: f64,
}

impl Spectrum {
    /// Assembles a spectrum from precomputed parts, clustering with `tol`.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Array2<f64>, tol: f64) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.dim() != (n, n) {
            return Err(Error::param(format!(
                "eigenvector matrix is {:?}, expected ({n}, {n})",
                eigenvectors.dim()
            )));
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("eigenvalues must be ascending"));
        }
        let degeneracy_classes = cluster_degeneracies(&eigenvalues, tol);
        Ok(Spectrum {
            eigenvalues,
            eigenvectors,
            degeneracy_classes,
            degeneracy_tol: tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `n` is the eigenvector for `eigenvalues()[n]`.
    pub fn eigenvectors(&self) -> &Array2<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, index: usize) -> ArrayView1<'_, f64> {
        self.eigenvectors.column(index)
    }

    pub fn degeneracy_classes(&self) -> &[Range<usize>] {
        &self.degeneracy_classes
    }

    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    /// Re-clusters the eigenvalues with a different tolerance.
    pub fn with_degeneracy_tol(mut self, tol: f64) -> Self {
        self.degeneracy_classes = cluster_degeneracies(&self.eigenvalues, tol);
        self.degeneracy_tol = tol;
        self
    }

    /// Number of eigenvalues with |E| below `tol`.
    pub fn zero_count(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|e| e.abs() < tol).count()
    }
}

/// Default clustering tolerance for a spectrum: `1e-8 * max(1, E_max)`.
pub fn default_degeneracy_tol(eigenvalues: &[f64]) -> f64 {
    let top = eigenvalues.last().copied().unwrap_or(0.0);
    DEGENERACY_REL_TOL * top.max(1.0)
}

/// Greedy chaining: adjacent eigenvalues closer than `tol` share a class.
pub fn cluster_degeneracies(eigenvalues: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut classes = Vec::new();
    let mut start = 0;
    for i in 1..=eigenvalues.len() {
        if i == eigenvalues.len() || eigenvalues[i] - eigenvalues[i - 1] >= tol {
            classes.push(start..i);
            start = i;
        }
    }
    classes
}

pub fn eigendecompose(a: &LaplacianMatrix) -> Result<Spectrum> {
    let (values, vectors) = symmetric_eigen(a.matrix.clone())?;
    let tol = default_degeneracy_tol(&values);
    Spectrum::from_parts(values, vectors, tol)
}

/// Eigenvalues only, ascending.
///
/// Uses Householder tridiagonalization followed by implicit QL with
/// Wilkinson shifts, an O(n³) route with a far smaller constant than
/// Jacobi. Used for large spectra where no eigenvectors are needed.
pub fn eigenvalues(a: &LaplacianMatrix) -> Result<Vec<f64>> {
    symmetric_eigenvalues(a.matrix.clone())
}

pub fn symmetric_eigenvalues(mut a: Array2<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::param(format!("matrix is {:?}, not square", a.dim())));
    }
    if !a.is_standard_layout() {
        a = a.as_standard_layout().into_owned();
    }
    let (mut d, mut e) = tridiagonalize(a.as_slice_mut().expect("standard layout"), n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction of the lower triangle of `a` to tridiagonal form.
/// Returns the diagonal and the subdiagonal (`e[i]` couples `i - 1` and `i`,
/// `e[0] = 0`).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let row = i * n;
        let scale: f64 = a[row..=row + l].iter().map(|x| x.abs()).sum();
        if l == 0 || scale == 0.0 {
            e[i] = a[row + l];
            continue;
        }
        let mut h = 0.0;
        for x in &mut a[row..=row + l] {
            *x /= scale;
            h += *x * *x;
        }
        let f = a[row + l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[row + l] = f - g;
        // p = A u / h using the lower triangle, walked row by row.
        p[..=l].iter_mut().for_each(|x| *x = 0.0);
        for j in 0..=l {
            let uj = a[row + j];
            let rj = j * n;
            let mut acc = a[rj + j] * a[row + j];
            for k in 0..j {
                let ajk = a[rj + k];
                acc += ajk * a[row + k];
                p[k] += ajk * uj;
            }
            p[j] += acc;
        }
        let mut f_acc = 0.0;
        for j in 0..=l {
            p[j] /= h;
            f_acc += p[j] * a[row + j];
        }
        let hh = f_acc / (h + h);
        for j in 0..=l {
            p[j] -= hh * a[row + j];
        }
        for j in 0..=l {
            let (uj, qj) = (a[row + j], p[j]);
            let rj = j * n;
            for k in 0..=j {
                a[rj + k] -= uj * p[k] + qj * a[row + k];
            }
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues left in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::NoConvergence {
                    sweeps: iterations,
                    off_norm: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full eigendecomposition of a dense real symmetric matrix.
///
/// Returns ascending eigenvalues and a matrix whose columns are the
/// matching orthonormal eigenvectors, each signed so that its first
/// component of magnitude above `1e-12` is positive.
pub fn symmetric_eigen(mut a: Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::param(format!("matrix is {:?}, not square", a.dim())));
    }
    if !a.is_standard_layout() {
        a = a.as_standard_layout().into_owned();
    }
    let mut v = Array2::<f64>::eye(n);
    let diag = jacobi_in_place(
        a.as_slice_mut().expect("standard layout"),
        n,
        Some(v.as_slice_mut().expect("standard layout")),
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let flip = col
            .iter()
            .find(|x| x.abs() > 1e-12)
            .is_some_and(|&x| x < 0.0);
        let sign = if flip { -1.0 } else { 1.0 };
        vectors
            .column_mut(dst)
            .zip_mut_with(&col, |d, &s| *d = sign * s);
    }
    Ok((values, vectors))
}

#[derive(Clone, Copy)]
struct Rotation {
    p: usize,
    q: usize,
    c: f64,
    s: f64,
}

/// Diagonalizes the row-major symmetric matrix `a` in place and returns its
/// diagonal (unsorted). When `v` is given it must hold the identity on
/// entry and receives the accumulated rotations (eigenvectors as columns).
fn jacobi_in_place(a: &mut [f64], n: usize, mut v: Option<&mut [f64]>) -> Result<Vec<f64>> {
    if n <= 1 {
        return Ok(a.to_vec());
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = OFFDIAG_REL_TOL * frob;
    let players = n + n % 2;
    let mut seats: Vec<usize> = (0..players).collect();
    let mut rotations: Vec<Rotation> = Vec::with_capacity(players / 2);

    let mut off = offdiag_norm(a, n);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for _round in 0..players - 1 {
            rotations.clear();
            for k in 0..players / 2 {
                let (i, j) = (seats[k], seats[players - 1 - k]);
                if i >= n || j >= n {
                    continue;
                }
                let (p, q) = if i < j { (i, j) } else { (j, i) };
                if let Some(rot) = rotation_for(a, n, p, q) {
                    rotations.push(rot);
                }
            }
            if !rotations.is_empty() {
                apply_round(a, n, &rotations);
                if let Some(v) = v.as_deref_mut() {
                    rotate_columns(v, n, &rotations);
                }
            }
            seats[1..].rotate_right(1);
        }
        off = offdiag_norm(a, n);
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

fn rotation_for(a: &[f64], n: usize, p: usize, q: usize) -> Option<Rotation> {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return None;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    // Skip entries already negligible against both diagonal entries.
    let g = 100.0 * apq.abs();
    if app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        return Some(Rotation {
            p,
            q,
            c: 1.0,
            s: 0.0,
        });
    }
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    Some(Rotation { p, q, c, s: t * c })
}

/// A <- Jᵀ A J for a set of disjoint rotations.
fn apply_round(a: &mut [f64], n: usize, rotations: &[Rotation]) {
    for rot in rotations {
        if rot.s == 0.0 {
            a[rot.p * n + rot.q] = 0.0;
            a[rot.q * n + rot.p] = 0.0;
            continue;
        }
        let (lo, hi) = a.split_at_mut(rot.q * n);
        let row_p = &mut lo[rot.p * n..rot.p * n + n];
        let row_q = &mut hi[..n];
        for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let (ap, aq) = (*x, *y);
            *x = rot.c * ap - rot.s * aq;
            *y = rot.s * ap + rot.c * aq;
        }
    }
    rotate_columns(a, n, rotations);
    for rot in rotations {
        a[rot.p * n + rot.q] = 0.0;
        a[rot.q * n + rot.p] = 0.0;
    }
}

/// M <- M J, walking M row by row.
fn rotate_columns(m: &mut [f64], n: usize, rotations: &[Rotation]) {
    for row in m.chunks_exact_mut(n) {
        for rot in rotations {
            if rot.s == 0.0 {
                continue;
            }
            let (x, y) = (row[rot.p], row[rot.q]);
            row[rot.p] = rot.c * x - rot.s * y;
            row[rot.q] = rot.s * x + rot.c * y;
        }
    }
}

fn offdiag_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for (i, row) in a.chunks_exact(n).enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                sum += x * x;
            }
        }
    }
    sum.sqrt()
}

pub(crate) fn inf_norm(m: &Array2<f64>) -> f64 {
    m.rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
