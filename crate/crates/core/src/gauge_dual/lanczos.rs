//! Restarted Lanczos with full reorthogonalization for the lowest
//! eigenpairs of a real symmetric operator available only through
//! matrix-vector products.
//!
//! Eigenpairs are found one at a time. Converged vectors are locked and every
//! new Krylov vector is orthogonalized against them, so the k-th solve sees
//! the operator deflated by the first k - 1 eigenvectors.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A real symmetric operator applied matrix-free.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;

    /// y <- A x
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Upper bound on the spectral radius, used to scale tolerances.
    fn norm_bound(&self) -> f64;
}

#[derive(Clone, Copy, Debug)]
pub struct LanczosConfig {
    /// Residual tolerance relative to `norm_bound`.
    pub tol: f64,
    /// Cap on matrix-vector products per eigenpair.
    pub max_iter: usize,
    /// Krylov subspace size between restarts.
    pub krylov_dim: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            krylov_dim: 96,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Fixed-order blocked sum keeps the result independent of scheduling.
    a.chunks(4096)
        .zip(b.chunks(4096))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .fold(0.0, |acc, v| acc + v)
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // Two passes of classical Gram-Schmidt.
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            axpy(-c, b, v);
        }
    }
}

fn residual_norm<A: SymmetricOperator + ?Sized>(op: &A, v: &[f64], value: f64) -> f64 {
    let mut w = vec![0.0; v.len()];
    op.apply(v, &mut w);
    axpy(-value, v, &mut w);
    dot(&w, &w).sqrt()
}

/// Lowest `count` eigenpairs, in increasing order.
pub fn lowest_eigenpairs<A: SymmetricOperator + ?Sized>(
    op: &A,
    count: usize,
    cfg: &LanczosConfig,
) -> Result<Vec<EigenPair>> {
    let n = op.dim();
    if count > n {
        return Err(Error::InvalidInput(format!(
            "requested {count} eigenpairs of a {n}-dimensional operator"
        )));
    }
    let scale = op.norm_bound().max(1.0);
    let tol = cfg.tol * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut pairs = Vec::with_capacity(count);

    for _ in 0..count {
        let mut start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        orthogonalize(&mut start, &locked);
        normalize(&mut start);
        let mut matvecs = 0usize;
        let mut last_residual = f64::INFINITY;
        let found = loop {
            if matvecs >= cfg.max_iter {
                return Err(Error::Convergence {
                    iterations: matvecs,
                    residual: last_residual,
                });
            }
            let m = cfg.krylov_dim.min(n - locked.len()).max(1);
            let mut basis: Vec<Vec<f64>> = vec![start.clone()];
            let mut alphas = Vec::with_capacity(m);
            let mut betas: Vec<f64> = Vec::with_capacity(m);
            let mut w = vec![0.0; n];
            for j in 0..m {
                op.apply(&basis[j], &mut w);
                matvecs += 1;
                let a = dot(&basis[j], &w);
                alphas.push(a);
                orthogonalize(&mut w, &locked);
                orthogonalize(&mut w, &basis);
                let b = normalize(&mut w);
                if j + 1 == m || b <= 1e-13 * scale || matvecs >= cfg.max_iter {
                    break;
                }
                betas.push(b);
                basis.push(w.clone());
            }
            let k = alphas.len();
            let mut t = DMatrix::<f64>::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = alphas[i];
                if i + 1 < k {
                    t[(i, i + 1)] = betas[i];
                    t[(i + 1, i)] = betas[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (imin, theta) = eig
                .eigenvalues
                .iter()
                .copied()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty tridiagonal");
            let mut ritz = vec![0.0; n];
            for (i, v) in basis.iter().enumerate().take(k) {
                axpy(eig.eigenvectors[(i, imin)], v, &mut ritz);
            }
            orthogonalize(&mut ritz, &locked);
            normalize(&mut ritz);
            let res = residual_norm(op, &ritz, theta);
            matvecs += 1;
            last_residual = res;
            if res <= tol {
                break EigenPair {
                    value: theta,
                    vector: ritz,
                    residual: res,
                };
            }
            start = ritz;
        };
        locked.push(found.vector.clone());
        pairs.push(found);
    }
    Ok(pairs)
}

/// Full spectrum and eigenvectors by dense diagonalization; for small
/// operators and as a cross-check.
pub fn dense_eigen<A: SymmetricOperator + ?Sized>(op: &A) -> (Vec<f64>, DMatrix<f64>) {
    let n = op.dim();
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[j] = 1.0;
        op.apply(&e, &mut col);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path-graph Laplacian: eigenvalues 2 - 2 cos(k pi / n), k = 0..n-1.
    struct Path(usize);

    impl SymmetricOperator for Path {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            let n = self.0;
            for i in 0..n {
                let mut v = 0.0;
                let mut deg = 0.0;
                if i > 0 {
                    v -= x[i - 1];
                    deg += 1.0;
                }
                if i + 1 < n {
                    v -= x[i + 1];
                    deg += 1.0;
                }
                y[i] = v + deg * x[i];
            }
        }
        fn norm_bound(&self) -> f64 {
            4.0
        }
    }

    #[test]
    fn path_laplacian_lowest_two() {
        let n = 300;
        let cfg = LanczosConfig {
            max_iter: 50_000,
            ..Default::default()
        };
        let pairs = lowest_eigenpairs(&Path(n), 2, &cfg).unwrap();
        assert!(pairs[0].value.abs() < 1e-9);
        let e1 = 2.0 - 2.0 * (std::f64::consts::PI / n as f64).cos();
        assert!((pairs[1].value - e1).abs() < 1e-9);
    }

    #[test]
    fn dense_matches_closed_form() {
        let n = 12;
        let (vals, _) = dense_eigen(&Path(n));
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos();
            assert!((v - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let cfg = LanczosConfig {
            max_iter: 3,
            krylov_dim: 2,
            ..Default::default()
        };
        match lowest_eigenpairs(&Path(400), 1, &cfg) {
            Err(Error::Convergence { residual, .. }) => assert!(residual > 0.0),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
