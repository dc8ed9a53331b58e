//! Dense reference constructions shared by the integration tests and the
//! acceptance run. Nothing here calls the crate's kernels: operators are
//! built from explicit 2x2 matrices and Kronecker products, and spectra
//! and exponentials come from nalgebra.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use z2sim::lattice::LatticeGeometry;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn id2() -> CMat {
    CMat::identity(2, 2)
}

pub fn sx() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn sy() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

/// Bit 0 is spin up, so sigma_z = diag(1, -1).
pub fn sz() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// |up><up|
pub fn proj_up() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)])
}

/// |down><down|
pub fn proj_down() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)])
}

/// Operator on `n` qubits acting as `ops[k].1` on qubit `ops[k].0`; qubit q
/// is bit q of the basis index, so the Kronecker chain runs from the top
/// qubit down.
pub fn embed(n: usize, ops: &[(usize, CMat)]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for q in (0..n).rev() {
        let m = ops
            .iter()
            .find(|(k, _)| *k == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(id2);
        out = out.kronecker(&m);
    }
    out
}

/// Product of the same single-qubit matrix on several qubits.
pub fn string(n: usize, qubits: &[usize], m: &CMat) -> CMat {
    let ops: Vec<(usize, CMat)> = qubits.iter().map(|&q| (q, m.clone())).collect();
    embed(n, &ops)
}

/// exp(-i t H) for Hermitian H.
pub fn expm_herm(h: &CMat, t: f64) -> CMat {
    let eig = SymmetricEigen::new(h.clone());
    let phases = CVec::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    );
    &eig.eigenvectors * CMat::from_diagonal(&phases) * eig.eigenvectors.adjoint()
}

/// max |a_ij - e^{i phi} b_ij| after aligning the global phase on the
/// largest entry of b.
pub fn phase_distance(a: &CMat, b: &CMat) -> f64 {
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .unwrap();
    let phase = a.as_slice()[idx] / b.as_slice()[idx];
    let phase = phase / phase.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

pub fn vec_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn to_cvec(a: &[C64]) -> CVec {
    CVec::from_column_slice(a)
}

/// Controlled flip on a (control, link) pair: identity when the
/// control is down, sigma_x on the link when it is up.
pub fn controlled_flip(n: usize, control: usize, link: usize) -> CMat {
    embed(n, &[(control, proj_down())]) + embed(n, &[(control, proj_up()), (link, sx())])
}

/// Link Hamiltonian -lE sum sz - lB sum B on the full link space.
pub fn link_hamiltonian(geom: &LatticeGeometry, le: f64, lb: f64) -> CMat {
    let n = geom.num_links();
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for l in 0..n {
        h -= embed(n, &[(l, sz())]) * c(le, 0.0);
    }
    for p in 0..geom.num_plaquettes() {
        let links = geom.plaquette_links(p).unwrap();
        h -= string(n, &links, &sx()) * c(lb, 0.0);
    }
    h
}

/// Link basis states with every star parity even: the A(x) = +1 sector.
pub fn gauge_sector_basis(geom: &LatticeGeometry) -> Vec<usize> {
    let stars: Vec<Vec<usize>> = (0..geom.num_sites())
        .map(|s| geom.star_links(s).unwrap())
        .collect();
    (0..1usize << geom.num_links())
        .filter(|&b| {
            stars
                .iter()
                .all(|st| st.iter().filter(|&&l| b >> l & 1 == 1).count() % 2 == 0)
        })
        .collect()
}

/// H restricted to the gauge sector, built by brute force on link basis
/// states (sz is diagonal, each B flips four bits).
pub fn sector_hamiltonian(geom: &LatticeGeometry, le: f64, lb: f64) -> (Vec<usize>, DMatrix<f64>) {
    let basis = gauge_sector_basis(geom);
    let pos = |b: usize| basis.binary_search(&b).ok();
    let n = geom.num_links();
    let mut h = DMatrix::<f64>::zeros(basis.len(), basis.len());
    for (i, &b) in basis.iter().enumerate() {
        let down = b.count_ones() as f64;
        h[(i, i)] -= le * (n as f64 - 2.0 * down);
        for p in 0..geom.num_plaquettes() {
            let mask: usize = geom.plaquette_links(p).unwrap().iter().map(|&l| 1 << l).sum();
            let j = pos(b ^ mask).expect("B keeps the sector");
            h[(j, i)] -= lb;
        }
    }
    (basis, h)
}

pub fn sorted_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Ground state of the sector Hamiltonian, expanded to the full link space.
pub fn sector_ground_state(geom: &LatticeGeometry, le: f64, lb: f64) -> (f64, Vec<C64>) {
    let (basis, h) = sector_hamiltonian(geom, le, lb);
    let eig = SymmetricEigen::new(h);
    let (k, e) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let mut psi = vec![c(0.0, 0.0); 1 << geom.num_links()];
    for (i, &b) in basis.iter().enumerate() {
        psi[b] = c(eig.eigenvectors[(i, k)], 0.0);
    }
    (e, psi)
}

/// <psi| prod sx(links) |psi> by explicit bit flips.
pub fn x_string_expectation(psi: &[C64], links: &[usize]) -> f64 {
    let mask: usize = links.iter().map(|&l| 1 << l).sum();
    psi.iter()
        .enumerate()
        .map(|(b, a)| (a.conj() * psi[b ^ mask]).re)
        .sum()
}

/// <psi| prod sz(links) |psi> by explicit parities.
pub fn z_string_expectation(psi: &[C64], links: &[usize]) -> f64 {
    let mask: usize = links.iter().map(|&l| 1 << l).sum();
    psi.iter()
        .enumerate()
        .map(|(b, a)| {
            let s = if (b & mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            s * a.norm_sqr()
        })
        .sum()
}
