//! Independent reference implementations used only by the tests. None of
//! them go through the eigendecomposition.

#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64;

use qwalk_core::Graph;

pub fn laplacian_dense(g: &Graph) -> Array2<f64> {
    let n = g.node_count();
    let mut a = Array2::zeros((n, n));
    for (u, v) in g.edges() {
        a[[u, v]] -= 1.0;
        a[[v, u]] -= 1.0;
        a[[u, u]] += 1.0;
        a[[v, v]] += 1.0;
    }
    a
}

fn matmul_c(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let mut c = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for k in 0..n {
            let aik = a[[i, k]];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[[i, j]] += aik * b[[k, j]];
            }
        }
    }
    c
}

fn norm1_c(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(M)` by scaling and squaring with a Taylor series.
pub fn expm(m: &Array2<Complex64>) -> Array2<Complex64> {
    let n = m.nrows();
    let norm = norm1_c(m);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scaled = m.mapv(|z| z / 2f64.powi(s));
    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for k in 1..=30 {
        term = matmul_c(&term, &scaled).mapv(|z| z / k as f64);
        result += &term;
        if norm1_c(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = matmul_c(&result, &result);
    }
    result
}

/// `e^{-tA}` for the graph Laplacian `A`.
pub fn classical_oracle(g: &Graph, t: f64) -> Array2<f64> {
    let a = laplacian_dense(g).mapv(|x| Complex64::new(-t * x, 0.0));
    expm(&a).mapv(|z| z.re)
}

/// `e^{-itA}`.
pub fn unitary_oracle(g: &Graph, t: f64) -> Array2<Complex64> {
    let a = laplacian_dense(g).mapv(|x| Complex64::new(0.0, -t * x));
    expm(&a)
}

/// `|e^{-itA}|²` element-wise.
pub fn quantum_oracle(g: &Graph, t: f64) -> Array2<f64> {
    unitary_oracle(g, t).mapv(|z| z.norm_sqr())
}

/// Trapezoid average of `|U_kj(t)|²` over `[0, t_end]` with step `dt`,
/// propagating `U(t + dt) = U(dt) U(t)`.
pub fn time_averaged_transition(g: &Graph, t_end: f64, dt: f64) -> Array2<f64> {
    let n = g.node_count();
    let step = unitary_oracle(g, dt);
    let steps = (t_end / dt).round() as usize;
    let mut u = Array2::<Complex64>::eye(n);
    let mut acc = Array2::<f64>::zeros((n, n));
    let mut next = Array2::<Complex64>::zeros((n, n));
    for i in 0..=steps {
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        acc.zip_mut_with(&u, |a, z| *a += w * z.norm_sqr());
        if i < steps {
            next.fill(Complex64::new(0.0, 0.0));
            for r in 0..n {
                for k in 0..n {
                    let s = step[[r, k]];
                    for c in 0..n {
                        next[[r, c]] += s * u[[k, c]];
                    }
                }
            }
            std::mem::swap(&mut u, &mut next);
        }
    }
    acc / steps as f64
}

/// `ln k!` for `k = 0..len`.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for k in 1..len {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// `e^{-x} I₁(x)` by the power series `Σ (x/2)^{2k+1} / (k!(k+1)!)`,
/// each term formed in log space so large `x` does not overflow.
pub fn scaled_bessel_i1(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let terms = (x as usize) * 2 + 200;
    let lf = ln_factorials(terms + 2);
    let lh = (x / 2.0).ln();
    let mut sum = 0.0;
    for k in 0..terms {
        let ln_term = (2 * k + 1) as f64 * lh - lf[k] - lf[k + 1] - x;
        sum += ln_term.exp();
    }
    sum
}

/// `J₁(x)`: power series for small `x`, Miller's backward recurrence
/// normalized by `J₀ + 2ΣJ_{2k} = 1` otherwise.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x < 1e-3 {
        return x / 2.0 - x.powi(3) / 16.0 + x.powi(5) / 384.0;
    }
    let start = 2 * ((x as usize + 60 + (10.0 * x.sqrt()) as usize) / 2);
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for n in (1..=start).rev() {
        let jm1 = 2.0 * n as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        // `j` now holds J_{n-1}.
        if n - 1 == 1 {
            j1 = j;
        }
        if (n - 1) % 2 == 0 && n > 1 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            jp1 *= 1e-250;
            j *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    // The loop ends with `j = J₀`.
    norm += j;
    j1 / norm
}

/// `p̄(t) = e^{-tk̄} I₁(2σt)/(σt)` for a semicircle of width `σ`.
pub fn classical_continuum_oracle(kbar: f64, sigma: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = 2.0 * sigma * t;
    (-t * (kbar - 2.0 * sigma)).exp() * scaled_bessel_i1(x) / (sigma * t)
}

/// `|ᾱ(t)|² = (J₁(2σt)/(σt))²`.
pub fn amplitude_continuum_oracle(sigma: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let a = bessel_j1(2.0 * sigma * t) / (sigma * t);
    a * a
}

/// One representative of every isomorphism class of connected graphs on
/// `n` nodes, by brute-force canonical labeling.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let index = |u: usize, v: usize| {
        pairs
            .iter()
            .position(|&p| p == (u.min(v), u.max(v)))
            .unwrap()
    };
    let perms = permutations(n);
    // For every permutation, where each pair bit moves to.
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let canonical = maps
            .iter()
            .map(|m| {
                let mut image = 0u32;
                for (bit, &target) in m.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        image |= 1 << target;
                    }
                }
                image
            })
            .min()
            .unwrap();
        if canonical != mask || !seen.insert(mask) {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
