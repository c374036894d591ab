//! Re-derives the receiver correction table by exhaustive search over Pauli
//! assignments, using only kron products and partial traces.

mod common;

use common::assert_close;
use telecloning::linalg::{kron, re, Complex64, ComplexMatrix, DensityMatrix, SubsystemLayout};
use telecloning::measurement::{correction_unitary, weak_bell_povm};
use telecloning::states::{receiver_name, telecloning_state, two_design_states, PORT};

fn paulis() -> [ComplexMatrix; 4] {
    let (o, z, i) = (re(1.0), re(0.0), Complex64::new(0.0, 1.0));
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_vec(2, 2, vec![z, o, o, z]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![z, -i, i, z]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![o, z, z, -o]).unwrap(),
    ]
}

/// Average fidelity at C1 with `fix[k]` applied after outcome k+1.
fn fidelity(pair: &DensityMatrix, lambda: f64, fix: &[&ComplexMatrix; 4]) -> f64 {
    let povm = weak_bell_povm(lambda).unwrap();
    let layout = SubsystemLayout::qubits(["X", "P", "C"]).unwrap();
    let kraus: Vec<ComplexMatrix> = (0..4).map(|k| kron(&povm.sqrt_element(k + 1).unwrap(), fix[k])).collect();
    let design = two_design_states();
    let mut total = 0.0;
    for q in &design {
        let joint = kron(&q.density(), pair.matrix());
        let mut out = ComplexMatrix::zeros(8, 8);
        for k in &kraus {
            out = &out + &(&(k * &joint) * &k.dagger());
        }
        let rho = DensityMatrix::new(layout.clone(), out.symmetrized()).unwrap();
        total += rho.partial_trace(["X", "P"]).unwrap().expectation(&q.ket());
    }
    total / design.len() as f64
}

fn port_receiver_pair(receivers: usize) -> DensityMatrix {
    telecloning_state(receivers).unwrap().density().reduced([PORT, &receiver_name(1)]).unwrap()
}

#[test]
fn search_recovers_the_correction_table() {
    let p = paulis();
    let bell = port_receiver_pair(1);
    let mut perfect = Vec::new();
    for code in 0..256usize {
        let pick = [code & 3, code >> 2 & 3, code >> 4 & 3, code >> 6 & 3];
        let fix = pick.map(|i| &p[i]);
        if (fidelity(&bell, 1.0, &fix) - 1.0).abs() < 1e-10 {
            perfect.push(pick);
        }
    }
    assert_eq!(perfect.len(), 1, "expected a unique perfect assignment, got {perfect:?}");
    let found = perfect[0].map(|i| &p[i]);
    for (k, u) in found.iter().enumerate() {
        assert!(u.max_abs_diff(&correction_unitary(k + 1).unwrap()) < 1e-15, "outcome {}", k + 1);
    }

    assert_close(fidelity(&port_receiver_pair(2), 1.0, &found), 5.0 / 6.0, 1e-10, "two receivers");
    assert_close(fidelity(&port_receiver_pair(3), 1.0, &found), 7.0 / 9.0, 1e-10, "three receivers");
    for lambda in [0.2, 0.5, 0.9] {
        assert_close(fidelity(&port_receiver_pair(2), lambda, &found), 0.5 + lambda / 3.0, 1e-10, "unsharp");
    }
}
