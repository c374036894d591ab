mod common;

use common::*;
use proptest::prelude::*;
use telecloning::linalg::{
    herm_eig, herm_eigenvalues, herm_sqrt, kron, partial_transpose, trace_norm, ComplexMatrix, DensityMatrix,
    SubsystemLayout,
};

fn density_on(names: &[&str], m: ComplexMatrix) -> DensityMatrix {
    DensityMatrix::new(SubsystemLayout::qubits(names.iter().copied()).unwrap(), m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn partial_trace_of_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_rho(&mut r, 4);
        let b = random_rho(&mut r, 4);
        let joint = density_on(&["a1", "a2", "b1", "b2"], kron(&a, &b));
        let back = joint.partial_trace(["b1", "b2"]).unwrap();
        prop_assert!(back.matrix().max_abs_diff(&a) <= 1e-12);
        let other = joint.partial_trace(["a1", "a2"]).unwrap();
        prop_assert!(other.matrix().max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn generated_states_satisfy_invariants(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let rho = random_density(&mut r, &refs);
        prop_assert!(rho.matrix().hermitian_defect() <= 1e-10);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-9);
    }

    #[test]
    fn trace_norm_is_absolute_spectrum(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let g = ginibre(&mut r, dim, dim);
        let h = (&g + &g.dagger()).symmetrized();
        let abs_sum: f64 = herm_eigenvalues(&h).unwrap().iter().map(|x| x.abs()).sum();
        prop_assert!((trace_norm(&h).unwrap() - abs_sum).abs() <= 1e-10);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), mask in 1u8..7) {
        let mut r = rng(seed);
        let rho = random_density(&mut r, &["a", "b", "c"]);
        let part: Vec<&str> = ["a", "b", "c"].iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, n)| *n).collect();
        let once = rho.partial_transpose(&part).unwrap();
        let twice = partial_transpose(&once, rho.layout(), &part).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) == 0.0);
    }
}

#[test]
fn herm_sqrt_squares_back() {
    let mut r = rng(7);
    for i in 0..100 {
        let dim = 1 + i % 16;
        // rank-deficient half the time
        let g = ginibre(&mut r, dim, 1 + (i / 2) % dim);
        let m = (&g * &g.dagger()).symmetrized();
        let s = herm_sqrt(&m).unwrap();
        let sq = &s * &s;
        assert!(sq.max_abs_diff(&m) <= 1e-9, "dim {dim}: {}", sq.max_abs_diff(&m));
    }
}

#[test]
fn eigenvectors_diagonalize() {
    let mut r = rng(11);
    let g = ginibre(&mut r, 6, 6);
    let h = (&g + &g.dagger()).symmetrized();
    let e = herm_eig(&h).unwrap();
    let d = &(&e.vectors.dagger() * &h) * &e.vectors;
    for i in 0..6 {
        for j in 0..6 {
            let want = if i == j { e.values[i] } else { 0.0 };
            assert!((d[(i, j)].re - want).abs() < 1e-10 && d[(i, j)].im.abs() < 1e-10);
        }
    }
    assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
}
