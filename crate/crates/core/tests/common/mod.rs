#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use telecloning::linalg::{herm_eig, Complex64, ComplexMatrix, DensityMatrix, SubsystemLayout};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

/// Full-rank random density matrix.
pub fn random_rho(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let m = &g * &g.dagger();
    let t = m.trace().re;
    m.scale_real(1.0 / t).symmetrized()
}

pub fn random_density(rng: &mut impl Rng, names: &[&str]) -> DensityMatrix {
    let layout = SubsystemLayout::qubits(names.iter().copied()).unwrap();
    let dim = layout.dim();
    DensityMatrix::new(layout, random_rho(rng, dim)).unwrap()
}

/// Eigenbasis of a random Hermitian matrix with random phases.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let h = (&g + &g.dagger()).symmetrized();
    let v = herm_eig(&h).unwrap().vectors;
    let phases: Vec<Complex64> =
        (0..dim).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect();
    let mut d = ComplexMatrix::zeros(dim, dim);
    for (i, p) in phases.into_iter().enumerate() {
        d[(i, i)] = p;
    }
    &v * &d
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tolerance {tol})");
}
