//! The sequential protocol: attach an input, run one unsharp round, hand
//! the recycled channel to the next round.

use crate::analysis;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::measurement::{check_lambda, kraus_set, receiver_slots, AcceptanceMask};
use crate::states::{two_design_states, DisentangleParams, InputQubit, PureState, INPUT, PORT};

/// One round of the protocol history.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub lambda: f64,
    pub mask: AcceptanceMask,
}

/// A nonempty sequence of rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundSchedule {
    rounds: Vec<RoundRecord>,
}

impl RoundSchedule {
    pub fn new(rounds: Vec<RoundRecord>) -> Result<Self> {
        if rounds.is_empty() {
            return Err(Error::Validation("a schedule needs at least one round".into()));
        }
        Ok(Self { rounds })
    }

    /// Every round refuses, one round per sharpness value.
    pub fn all_refuse(receivers: usize, lambdas: &[f64]) -> Result<Self> {
        Self::new(
            lambdas.iter().map(|&lambda| RoundRecord { lambda, mask: AcceptanceMask::all_refuse(receivers) }).collect(),
        )
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.lambda).collect()
    }
}

/// Largest channel simulated: nine qubits once the input is attached.
pub const MAX_RECEIVERS: usize = 4;

/// The shared resource between rounds, on `(P, A…, C…)`.
#[derive(Clone, Debug)]
pub struct ChannelState {
    rho: DensityMatrix,
    history: Vec<RoundRecord>,
}

impl ChannelState {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        rho.layout().position(PORT)?;
        if rho.layout().contains(INPUT) {
            return Err(Error::Validation(format!("channel must not contain the input slot `{INPUT}`")));
        }
        let receivers = receiver_slots(rho.layout()).len();
        if receivers > MAX_RECEIVERS {
            return Err(Error::Domain(format!(
                "{receivers} receivers exceed the simulated maximum of {MAX_RECEIVERS}"
            )));
        }
        rho.check_invariants()?;
        Ok(Self { rho, history: Vec::new() })
    }

    pub fn from_pure(state: &PureState) -> Result<Self> {
        Self::new(state.density())
    }

    /// Fresh optimal telecloning channel for `receivers` receivers.
    pub fn fresh(receivers: usize) -> Result<Self> {
        Self::from_params(&DisentangleParams::optimal(receivers))
    }

    pub fn from_params(params: &DisentangleParams) -> Result<Self> {
        Self::from_pure(&params.resource_state()?)
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn round_index(&self) -> usize {
        self.history.len()
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    /// Receivers still holding their share, in layout order.
    pub fn receivers(&self) -> Vec<String> {
        receiver_slots(self.rho.layout())
    }

    /// Run one round with the input averaged to `I/2`, let the receivers in
    /// `mask` correct and leave, and return what remains.
    pub fn recycle(&self, lambda: f64, mask: &AcceptanceMask) -> Result<Self> {
        check_lambda(lambda)?;
        let receivers = self.receivers();
        if receivers.is_empty() {
            return Err(Error::ProtocolExhausted);
        }
        let input = DensityMatrix::maximally_mixed(SubsystemLayout::qubits([INPUT])?);
        let joint = input.tensor(&self.rho)?;
        let kraus = kraus_set(lambda, mask, joint.layout())?;
        let evolved = DensityMatrix::from_parts(joint.layout().clone(), kraus.apply(joint.matrix())?)?;

        let mut discard = vec![INPUT.to_string()];
        discard.extend(kraus.accepting().iter().cloned());
        let rho = evolved.partial_trace(&discard)?;

        let mut history = self.history.clone();
        history.push(RoundRecord { lambda, mask: mask.clone() });
        Ok(Self { rho, history })
    }

    fn check_receiver(&self, receiver: &str) -> Result<()> {
        if !self.receivers().iter().any(|r| r == receiver) {
            return Err(Error::UnknownSlot(receiver.to_string()));
        }
        Ok(())
    }

    /// State held by `receiver` after it applies its correction, averaged
    /// over measurement outcomes.
    ///
    /// Only the port and the receiver's own qubit enter: every other slot is
    /// untouched or acted on by a unitary that the final trace removes.
    pub fn teleported_state(&self, lambda: f64, receiver: &str, input: &InputQubit) -> Result<DensityMatrix> {
        check_lambda(lambda)?;
        self.check_receiver(receiver)?;
        let pair = self.rho.reduced([PORT, receiver])?;
        let x = DensityMatrix::from_parts(SubsystemLayout::qubits([INPUT])?, input.density())?;
        let joint = x.tensor(&pair)?;
        let kraus = kraus_set(lambda, &AcceptanceMask::all_accept(1), joint.layout())?;
        let out = DensityMatrix::from_parts(joint.layout().clone(), kraus.apply(joint.matrix())?)?;
        out.partial_trace([INPUT, PORT])
    }

    /// Haar-averaged teleportation fidelity at `receiver`, evaluated
    /// exactly on the six-state design.
    pub fn avg_fidelity(&self, lambda: f64, receiver: &str) -> Result<f64> {
        let mut total = 0.0;
        let design = two_design_states();
        for q in &design {
            total += self.teleported_state(lambda, receiver, q)?.expectation(&q.ket());
        }
        Ok(total / design.len() as f64)
    }
}

pub fn recycle(ch: &ChannelState, lambda: f64, mask: &AcceptanceMask) -> Result<ChannelState> {
    ch.recycle(lambda, mask)
}

pub fn teleported_state(ch: &ChannelState, lambda: f64, receiver: &str, input: &InputQubit) -> Result<DensityMatrix> {
    ch.teleported_state(lambda, receiver, input)
}

pub fn avg_fidelity(ch: &ChannelState, lambda: f64, receiver: &str) -> Result<f64> {
    ch.avg_fidelity(lambda, receiver)
}

/// Simulated against closed-form fidelity for one receiver in one round.
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub receiver: String,
    pub round: usize,
    pub lambda: f64,
    pub f_sim: f64,
    /// Absent when no closed form covers the disentangling parameters.
    pub f_closed: Option<f64>,
    pub abs_diff: Option<f64>,
}

/// Thread a channel through `schedule`, reporting every present receiver's
/// fidelity in every round.
pub fn run_schedule(params: &DisentangleParams, schedule: &RoundSchedule) -> Result<Vec<FidelityReport>> {
    let mut ch = ChannelState::from_params(params)?;
    let mut reports = Vec::new();
    let lambdas = schedule.lambdas();
    for (n, round) in schedule.rounds().iter().enumerate() {
        let receivers = ch.receivers();
        if receivers.is_empty() {
            return Err(Error::ProtocolExhausted);
        }
        if round.mask.len() != receivers.len() {
            return Err(Error::Shape(format!(
                "round {}: acceptance mask has {} entries for {} receivers",
                n + 1,
                round.mask.len(),
                receivers.len()
            )));
        }
        for r in &receivers {
            let index = receiver_index(r)?;
            let f_sim = ch.avg_fidelity(round.lambda, r)?;
            let f_closed = analysis::closed_fidelity_for(params, index, &lambdas[..=n])?;
            reports.push(FidelityReport {
                receiver: r.clone(),
                round: n + 1,
                lambda: round.lambda,
                f_sim,
                f_closed,
                abs_diff: f_closed.map(|f| (f - f_sim).abs()),
            });
        }
        if n + 1 < schedule.rounds().len() {
            ch = ch.recycle(round.lambda, &round.mask)?;
        }
    }
    Ok(reports)
}

/// 0-based index of a receiver slot `C{i}`.
pub(crate) fn receiver_index(name: &str) -> Result<usize> {
    name.strip_prefix('C')
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .map(|i| i - 1)
        .ok_or_else(|| Error::UnknownSlot(name.to_string()))
}

/// The recycled state of an all-refusing schedule as a bare matrix, for
/// analyses that only need the final resource.
pub fn recycled_matrix(params: &DisentangleParams, lambdas: &[f64]) -> Result<ComplexMatrix> {
    let mut ch = ChannelState::from_params(params)?;
    let m = params.receivers();
    for &l in lambdas {
        ch = ch.recycle(l, &AcceptanceMask::all_refuse(m))?;
    }
    Ok(ch.rho.into_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    #[test]
    fn perfect_teleportation_through_bell_pair() {
        let ch = ChannelState::fresh(1).unwrap();
        let q = InputQubit::new(re(0.6), num_complex::Complex64::new(0.0, 0.8)).unwrap();
        let out = ch.teleported_state(1.0, "C1", &q).unwrap();
        assert!(out.matrix().max_abs_diff(&q.density()) < 1e-12);
    }

    #[test]
    fn single_receiver_fidelity_is_linear_in_sharpness() {
        let ch = ChannelState::fresh(1).unwrap();
        for l in [0.2, 0.5, 1.0] {
            assert!((ch.avg_fidelity(l, "C1").unwrap() - (0.5 + l / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn recycle_tracks_history_and_departures() {
        let ch = ChannelState::fresh(2).unwrap();
        let next = ch.recycle(0.5, &AcceptanceMask::only(2, 0)).unwrap();
        assert_eq!(next.round_index(), 1);
        assert_eq!(next.history()[0].lambda, 0.5);
        assert_eq!(next.receivers(), vec!["C2".to_string()]);
        assert_eq!(next.rho().layout().names().collect::<Vec<_>>(), vec!["P", "A1", "C2"]);
        next.rho().check_invariants().unwrap();
    }

    #[test]
    fn exhausted_channel() {
        let ch = ChannelState::fresh(1).unwrap();
        let gone = ch.recycle(0.5, &AcceptanceMask::all_accept(1)).unwrap();
        assert!(gone.receivers().is_empty());
        assert_eq!(gone.recycle(0.5, &AcceptanceMask::all_refuse(0)).unwrap_err(), Error::ProtocolExhausted);
    }

    #[test]
    fn errors() {
        let ch = ChannelState::fresh(2).unwrap();
        assert!(matches!(ch.recycle(0.0, &AcceptanceMask::all_refuse(2)), Err(Error::Domain(_))));
        assert!(matches!(ch.recycle(0.5, &AcceptanceMask::all_refuse(3)), Err(Error::Shape(_))));
        assert!(matches!(ch.avg_fidelity(0.5, "C3"), Err(Error::UnknownSlot(_))));
        assert!(matches!(ch.avg_fidelity(0.5, "A1"), Err(Error::UnknownSlot(_))));
        assert!(RoundSchedule::new(vec![]).is_err());
    }

    #[test]
    fn receiver_names() {
        assert_eq!(receiver_index("C1").unwrap(), 0);
        assert_eq!(receiver_index("C12").unwrap(), 11);
        assert!(receiver_index("C0").is_err());
        assert!(receiver_index("P").is_err());
    }
}
