//! Pure resource states: symmetric Dicke-type states, the Bell basis, the
//! optimal M-receiver telecloning state, its disentangled variants, and the
//! six-state design used for input averaging.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::linalg::{re, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::tolerances;

/// Slot holding the qubit to be teleported.
pub const INPUT: &str = "X";
/// Sender's half of the resource.
pub const PORT: &str = "P";

pub fn ancilla_name(i: usize) -> String {
    format!("A{i}")
}

pub fn receiver_name(i: usize) -> String {
    format!("C{i}")
}

/// Layout `(P, A1..A_{M-1}, C1..C_M)`.
pub fn resource_layout(receivers: usize) -> Result<SubsystemLayout> {
    if receivers == 0 {
        return Err(domain("at least one receiver is required"));
    }
    let mut names = vec![PORT.to_string()];
    names.extend((1..receivers).map(ancilla_name));
    names.extend((1..=receivers).map(receiver_name));
    SubsystemLayout::qubits(names)
}

/// A normalised ket on a labelled layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::Shape(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.dim()
            )));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > tolerances::NORM {
            return Err(Error::Validation(format!("state norm {norm} is not 1")));
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of a computational basis ket given as a bit string in slot order.
    pub fn amplitude(&self, bits: &str) -> Result<Complex64> {
        if bits.len() != self.layout.len() {
            return Err(Error::Shape(format!("expected {} bits, got `{bits}`", self.layout.len())));
        }
        let mut idx = 0usize;
        for ch in bits.chars() {
            idx = idx * 2
                + match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Validation(format!("`{bits}` is not a bit string"))),
                };
        }
        Ok(self.amplitudes[idx])
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.layout.dims() != other.layout.dims() {
            return Err(Error::Shape("inner product of states on different spaces".into()));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_ket(self.layout.clone(), &self.amplitudes)
            .expect("a validated pure state has a valid projector")
    }

    /// Exchange two slots of the same dimension.
    pub fn swap_slots(&self, a: &str, b: &str) -> Result<Self> {
        let pa = self.layout.position(a)?;
        let pb = self.layout.position(b)?;
        let n = self.layout.len();
        let mut out = vec![re(0.0); self.amplitudes.len()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let bit = |p: usize| (idx >> (n - 1 - p)) & 1;
            let (ba, bb) = (bit(pa), bit(pb));
            let mut j = idx & !(1 << (n - 1 - pa)) & !(1 << (n - 1 - pb));
            j |= bb << (n - 1 - pa);
            j |= ba << (n - 1 - pb);
            out[j] = *amp;
        }
        Self::new(self.layout.clone(), out)
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Real amplitudes of the symmetric state with `zeros` qubits in |0⟩ and
/// `ones` in |1⟩. An empty register is the scalar 1.
fn symmetric_amplitudes(zeros: usize, ones: usize) -> Vec<f64> {
    let n = zeros + ones;
    let mut v = vec![0.0; 1 << n];
    let mut count = 0usize;
    for (idx, slot) in v.iter_mut().enumerate() {
        if (idx as u32).count_ones() as usize == ones {
            *slot = 1.0;
            count += 1;
        }
    }
    let s = 1.0 / (count as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= s);
    v
}

fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Equal superposition of all `(a+b)`-bit strings of Hamming weight `b`,
/// on qubits named `q1..q_{a+b}`.
pub fn symmetric_state(zeros: usize, ones: usize) -> Result<PureState> {
    let n = zeros + ones;
    if n == 0 {
        return Err(domain("a symmetric state needs at least one qubit"));
    }
    let layout = SubsystemLayout::qubits((1..=n).map(|i| format!("q{i}")))?;
    PureState::new(layout, symmetric_amplitudes(zeros, ones).into_iter().map(re).collect())
}

/// Coefficient `α_j = sqrt(2(M-j) / (M(M+1)))` of the telecloning state.
pub fn telecloning_coefficient(receivers: usize, j: usize) -> f64 {
    let m = receivers as f64;
    (2.0 * (m - j as f64) / (m * (m + 1.0))).sqrt()
}

/// The optimal 1→M telecloning resource on `(P, A1..A_{M-1}, C1..C_M)`.
///
/// For `M = 1` the ancilla register is empty and the state reduces to the
/// Bell pair `(|00⟩ + |11⟩)/√2` on `(P, C1)`.
pub fn telecloning_state(receivers: usize) -> Result<PureState> {
    let layout = resource_layout(receivers)?;
    let m = receivers;
    let ancilla = |j: usize| symmetric_amplitudes(m - j - 1, j);
    let mut phi0 = vec![0.0; 1 << (2 * m - 1)];
    let mut phi1 = vec![0.0; 1 << (2 * m - 1)];
    for j in 0..m {
        let a = telecloning_coefficient(m, j);
        let t0 = kron_vec(&ancilla(j), &symmetric_amplitudes(m - j, j));
        let t1 = kron_vec(&ancilla(m - j - 1), &symmetric_amplitudes(j, m - j));
        phi0.iter_mut().zip(&t0).for_each(|(x, y)| *x += a * y);
        phi1.iter_mut().zip(&t1).for_each(|(x, y)| *x += a * y);
    }
    let mut amps = Vec::with_capacity(1 << (2 * m));
    amps.extend(phi0.iter().map(|x| re(x * FRAC_1_SQRT_2)));
    amps.extend(phi1.iter().map(|x| re(x * FRAC_1_SQRT_2)));
    PureState::new(layout, amps)
}

/// Bell vector `i ∈ 1..=4`: `(|00⟩±|11⟩)/√2` for 1, 2 and `(|01⟩±|10⟩)/√2`
/// for 3, 4. Slots are named `q1`, `q2`.
pub fn bell_state(i: usize) -> Result<PureState> {
    let amps = bell_amplitudes(i)?;
    PureState::new(SubsystemLayout::qubits(["q1", "q2"])?, amps.into_iter().map(re).collect())
}

pub(crate) fn bell_amplitudes(i: usize) -> Result<[f64; 4]> {
    let s = FRAC_1_SQRT_2;
    Ok(match i {
        1 => [s, 0.0, 0.0, s],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, s, 0.0],
        4 => [0.0, s, -s, 0.0],
        _ => return Err(domain(format!("Bell index {i} is outside 1..=4"))),
    })
}

fn check_eta(name: &str, eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(domain(format!("disentangling parameter for `{name}` is {eta}, outside [0, 1]")));
    }
    Ok(())
}

/// Apply the local map `|0⟩ ↦ |0⟩, |1⟩ ↦ η|1⟩` to each listed qubit and renormalise.
pub fn disentangle<S: AsRef<str>>(state: &PureState, etas: &[(S, f64)]) -> Result<PureState> {
    let layout = state.layout();
    let n = layout.len();
    let mut factors = vec![1.0; n];
    for (name, eta) in etas {
        let name = name.as_ref();
        check_eta(name, *eta)?;
        let p = layout.position(name)?;
        if layout.slots()[p].dim != 2 {
            return Err(Error::Shape(format!("slot `{name}` is not a qubit")));
        }
        factors[p] *= eta;
    }
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            let scale: f64 = (0..n).filter(|&p| (idx >> (n - 1 - p)) & 1 == 1).map(|p| factors[p]).product();
            a * scale
        })
        .collect();
    let nrm = norm(&amps);
    if nrm < 1e-300 {
        return Err(Error::Degenerate("disentangling annihilated the state".into()));
    }
    PureState::new(layout.clone(), amps.into_iter().map(|a| a / nrm).collect())
}

/// Normalisation `B` of the disentangled two-receiver telecloning state.
pub fn two_receiver_normalization(eta_p: f64, eta_a: f64, eta_c1: f64, eta_c2: f64) -> f64 {
    let sq = |x: f64| x * x;
    let s = 1.0
        + sq(eta_p * eta_c1) / 4.0
        + sq(eta_a * eta_c1) / 4.0
        + sq(eta_p * eta_c2) / 4.0
        + sq(eta_a * eta_c2) / 4.0
        + sq(eta_p * eta_a * eta_c1 * eta_c2);
    1.0 / s.sqrt()
}

/// Disentangling strengths for the port, every ancilla qubit, and each receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct DisentangleParams {
    pub eta_p: f64,
    pub eta_a: f64,
    pub eta_c: Vec<f64>,
}

impl DisentangleParams {
    pub fn new(eta_p: f64, eta_a: f64, eta_c: Vec<f64>) -> Result<Self> {
        check_eta(PORT, eta_p)?;
        check_eta("A", eta_a)?;
        for (i, &e) in eta_c.iter().enumerate() {
            check_eta(&receiver_name(i + 1), e)?;
        }
        if eta_c.is_empty() {
            return Err(domain("at least one receiver is required"));
        }
        Ok(Self { eta_p, eta_a, eta_c })
    }

    /// All parameters 1: the optimal state.
    pub fn optimal(receivers: usize) -> Self {
        Self { eta_p: 1.0, eta_a: 1.0, eta_c: vec![1.0; receivers] }
    }

    pub fn port(receivers: usize, eta: f64) -> Result<Self> {
        Self::new(eta, 1.0, vec![1.0; receivers])
    }

    pub fn receivers_equal(receivers: usize, eta: f64) -> Result<Self> {
        Self::new(1.0, 1.0, vec![eta; receivers])
    }

    pub fn receivers(&self) -> usize {
        self.eta_c.len()
    }

    pub fn is_optimal(&self) -> bool {
        self.eta_p == 1.0 && self.eta_a == 1.0 && self.eta_c.iter().all(|&e| e == 1.0)
    }

    /// Per-slot strengths for the resource layout of `self.receivers()` receivers.
    pub fn slot_etas(&self) -> Vec<(String, f64)> {
        let m = self.receivers();
        let mut out = vec![(PORT.to_string(), self.eta_p)];
        out.extend((1..m).map(|i| (ancilla_name(i), self.eta_a)));
        out.extend(self.eta_c.iter().enumerate().map(|(i, &e)| (receiver_name(i + 1), e)));
        out
    }

    /// The optimal telecloning state with these parameters applied.
    pub fn resource_state(&self) -> Result<PureState> {
        let base = telecloning_state(self.receivers())?;
        if self.is_optimal() {
            return Ok(base);
        }
        disentangle(&base, &self.slot_etas())
    }
}

/// An input qubit `α|0⟩ + β|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl InputQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > tolerances::NORM {
            return Err(Error::Validation(format!("|α|²+|β|² = {n}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn ket(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.ket())
    }
}

/// Eigenstates of σ_z, σ_x and σ_y. Averaging a qubit channel's fidelity
/// over these six states gives exactly the Haar average.
pub fn two_design_states() -> [InputQubit; 6] {
    let s = FRAC_1_SQRT_2;
    let q = |a: Complex64, b: Complex64| InputQubit { alpha: a, beta: b };
    [
        q(re(1.0), re(0.0)),
        q(re(0.0), re(1.0)),
        q(re(s), re(s)),
        q(re(s), re(-s)),
        q(re(s), Complex64::new(0.0, s)),
        q(re(s), Complex64::new(0.0, -s)),
    ]
}

/// Concurrence `2η / (1 + η²)` of `(|01⟩ + η|10⟩)/√(1+η²)`.
pub fn concurrence_eta(eta: f64) -> f64 {
    2.0 * eta / (1.0 + eta * eta)
}
