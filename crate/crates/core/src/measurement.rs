//! Unsharp Bell measurement on the input/port pair and the Kraus operators
//! of one protocol round.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::{self, re, ComplexMatrix, SubsystemLayout};
use crate::states::{bell_amplitudes, INPUT, PORT};

/// `M_i = λ|B_i⟩⟨B_i| + (1-λ)/4 · I₄` for `i = 1..4`.
#[derive(Clone, Debug)]
pub struct WeakBellPovm {
    lambda: f64,
    elements: [ComplexMatrix; 4],
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(domain(format!("sharpness λ = {lambda} is outside (0, 1]")));
    }
    Ok(())
}

fn bell_projector(outcome: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = bell_amplitudes(outcome).expect("outcome in 1..=4").into_iter().map(re).collect();
    ComplexMatrix::projector(&v)
}

pub fn weak_bell_povm(lambda: f64) -> Result<WeakBellPovm> {
    check_lambda(lambda)?;
    let noise = ComplexMatrix::identity(4).scale_real((1.0 - lambda) / 4.0);
    let elements = [1, 2, 3, 4].map(|i| &bell_projector(i).scale_real(lambda) + &noise);
    Ok(WeakBellPovm { lambda, elements })
}

impl WeakBellPovm {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Element for outcome `1..=4`.
    pub fn element(&self, outcome: usize) -> Result<&ComplexMatrix> {
        check_outcome(outcome)?;
        Ok(&self.elements[outcome - 1])
    }

    pub fn elements(&self) -> &[ComplexMatrix; 4] {
        &self.elements
    }

    /// `√M_i`, built in the Bell eigenbasis: the projector direction has
    /// eigenvalue `(1+3λ)/4`, its complement `(1-λ)/4`.
    pub fn sqrt_element(&self, outcome: usize) -> Result<ComplexMatrix> {
        check_outcome(outcome)?;
        let on = ((1.0 + 3.0 * self.lambda) / 4.0).sqrt();
        let off = ((1.0 - self.lambda) / 4.0).sqrt();
        let proj = bell_projector(outcome);
        Ok(&proj.scale_real(on - off) + &ComplexMatrix::identity(4).scale_real(off))
    }
}

fn check_outcome(outcome: usize) -> Result<()> {
    if !(1..=4).contains(&outcome) {
        return Err(domain(format!("measurement outcome {outcome} is outside 1..=4")));
    }
    Ok(())
}

/// Pauli applied by an accepting receiver after outcome `1..=4`:
/// I, σ_z, σ_x, σ_y for |B₁⟩..|B₄⟩.
///
/// The assignment is the one that makes sharp measurement on the
/// two-receiver resource reach the optimal cloning fidelity 5/6; the
/// calibration test in `tests/calibration.rs` re-derives it by search.
pub fn correction_unitary(outcome: usize) -> Result<ComplexMatrix> {
    check_outcome(outcome)?;
    let i = Complex64::new(0.0, 1.0);
    let z = re(0.0);
    let o = re(1.0);
    let data = match outcome {
        1 => vec![o, z, z, o],
        2 => vec![o, z, z, -o],
        3 => vec![z, o, o, z],
        _ => vec![z, -i, i, z],
    };
    ComplexMatrix::from_vec(2, 2, data)
}

/// Which receivers apply their correction this round and leave.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AcceptanceMask(Vec<bool>);

impl AcceptanceMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn all_refuse(receivers: usize) -> Self {
        Self(vec![false; receivers])
    }

    pub fn all_accept(receivers: usize) -> Self {
        Self(vec![true; receivers])
    }

    /// Only receiver `index` (0-based) accepts.
    pub fn only(receivers: usize, index: usize) -> Self {
        Self((0..receivers).map(|i| i == index).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn accepts(&self, index: usize) -> bool {
        self.0.get(index).copied().unwrap_or(false)
    }

    pub fn any(&self) -> bool {
        self.0.iter().any(|&b| b)
    }
}

/// Receiver slots of a layout, in layout order.
pub fn receiver_slots(layout: &SubsystemLayout) -> Vec<String> {
    layout.names().filter(|n| n.starts_with('C')).map(String::from).collect()
}

/// Kraus operators `√M_k ⊗ I_A ⊗ ⨂_j U_k^{c_j}` of one round.
///
/// Operators are kept factored; [`KrausSet::ops`] materialises them.
#[derive(Clone, Debug)]
pub struct KrausSet {
    lambda: f64,
    mask: AcceptanceMask,
    layout: SubsystemLayout,
    sqrt_povm: [ComplexMatrix; 4],
    corrections: [ComplexMatrix; 4],
    accepting: Vec<String>,
}

pub fn kraus_set(lambda: f64, mask: &AcceptanceMask, layout: &SubsystemLayout) -> Result<KrausSet> {
    let povm = weak_bell_povm(lambda)?;
    for slot in [INPUT, PORT] {
        layout.position(slot)?;
    }
    let receivers = receiver_slots(layout);
    if receivers.len() != mask.len() {
        return Err(Error::Shape(format!(
            "acceptance mask has {} entries for {} receivers",
            mask.len(),
            receivers.len()
        )));
    }
    let accepting = receivers.into_iter().zip(mask.bits()).filter(|(_, &c)| c).map(|(n, _)| n).collect();
    Ok(KrausSet {
        lambda,
        mask: mask.clone(),
        layout: layout.clone(),
        sqrt_povm: [1, 2, 3, 4].map(|k| povm.sqrt_element(k).expect("valid outcome")),
        corrections: [1, 2, 3, 4].map(|k| correction_unitary(k).expect("valid outcome")),
        accepting,
    })
}

impl KrausSet {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mask(&self) -> &AcceptanceMask {
        &self.mask
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    /// Receivers applying corrections this round.
    pub fn accepting(&self) -> &[String] {
        &self.accepting
    }

    /// Dense operators on the full layout, outcome order 1..4.
    pub fn ops(&self) -> Result<Vec<ComplexMatrix>> {
        (0..4)
            .map(|k| {
                let mut op = linalg::density::embed(&self.layout, &self.sqrt_povm[k], &[INPUT, PORT])?;
                for c in &self.accepting {
                    let u = linalg::density::embed(&self.layout, &self.corrections[k], &[c.as_str()])?;
                    op = &u * &op;
                }
                Ok(op)
            })
            .collect()
    }

    /// `K_k ρ K_k†` for outcome `1..=4`, computed without forming `K_k`.
    pub fn apply_outcome(&self, outcome: usize, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_outcome(outcome)?;
        let k = outcome - 1;
        let mut out = linalg::density::conjugate_local(rho, &self.layout, &self.sqrt_povm[k], &[INPUT, PORT])?;
        for c in &self.accepting {
            out = linalg::density::conjugate_local(&out, &self.layout, &self.corrections[k], &[c.as_str()])?;
        }
        Ok(out)
    }

    /// `Σ_k K_k ρ K_k†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut acc = self.apply_outcome(1, rho)?;
        for k in 2..=4 {
            acc = &acc + &self.apply_outcome(k, rho)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{herm_eigenvalues, herm_sqrt};

    #[test]
    fn sharp_limit_gives_bell_projectors() {
        let povm = weak_bell_povm(1.0).unwrap();
        for k in 1..=4 {
            assert!(povm.element(k).unwrap().max_abs_diff(&bell_projector(k)) < 1e-15);
        }
    }

    #[test]
    fn unsharp_limit_tends_to_identity_over_four() {
        let povm = weak_bell_povm(1e-12).unwrap();
        let quarter = ComplexMatrix::identity(4).scale_real(0.25);
        for e in povm.elements() {
            assert!(e.max_abs_diff(&quarter) < 1e-11);
        }
    }

    #[test]
    fn half_sharp_spectrum() {
        let povm = weak_bell_povm(0.5).unwrap();
        let ev = herm_eigenvalues(povm.element(1).unwrap()).unwrap();
        let want = [0.125, 0.125, 0.125, 0.625];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let root = herm_eigenvalues(&povm.sqrt_element(1).unwrap()).unwrap();
        let want = [0.125f64.sqrt(), 0.125f64.sqrt(), 0.125f64.sqrt(), 0.625f64.sqrt()];
        for (a, b) in root.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_root_matches_generic_root() {
        for lambda in [0.1, 0.37, 0.5, 0.9, 1.0] {
            let povm = weak_bell_povm(lambda).unwrap();
            for k in 1..=4 {
                let generic = herm_sqrt(povm.element(k).unwrap()).unwrap();
                let analytic = povm.sqrt_element(k).unwrap();
                assert!(generic.max_abs_diff(&analytic) < 1e-10);
                let sq = &analytic * &analytic;
                assert!(sq.max_abs_diff(povm.element(k).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn povm_completeness_on_grid() {
        for step in 1..=10 {
            let povm = weak_bell_povm(step as f64 / 10.0).unwrap();
            let total = povm.elements().iter().fold(ComplexMatrix::zeros(4, 4), |acc, e| &acc + e);
            assert!(total.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        }
    }

    #[test]
    fn lambda_domain() {
        for bad in [0.0, -0.1, 1.0 + 1e-12, f64::NAN] {
            assert!(matches!(weak_bell_povm(bad), Err(Error::Domain(_))), "{bad}");
        }
    }

    #[test]
    fn corrections_are_unitary() {
        assert_eq!(correction_unitary(1).unwrap(), ComplexMatrix::identity(2));
        for k in 1..=4 {
            let u = correction_unitary(k).unwrap();
            assert!((&u.dagger() * &u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        }
        assert!(correction_unitary(0).is_err());
        assert!(correction_unitary(5).is_err());
    }

    #[test]
    fn mask_length_must_match_receivers() {
        let layout = SubsystemLayout::qubits(["X", "P", "A1", "C1", "C2"]).unwrap();
        let err = kraus_set(0.5, &AcceptanceMask::all_refuse(3), &layout).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
        assert!(matches!(kraus_set(1.5, &AcceptanceMask::all_refuse(2), &layout), Err(Error::Domain(_))));
    }

    #[test]
    fn refusing_sharp_ops_are_bell_projectors() {
        let layout = SubsystemLayout::qubits(["X", "P", "C1"]).unwrap();
        let ks = kraus_set(1.0, &AcceptanceMask::all_refuse(1), &layout).unwrap();
        for (k, op) in ks.ops().unwrap().iter().enumerate() {
            let want = linalg::kron(&bell_projector(k + 1), &ComplexMatrix::identity(2));
            assert!(op.max_abs_diff(&want) < 1e-15);
        }
    }
}
