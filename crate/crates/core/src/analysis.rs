//! Closed-form round fidelities, the attenuation kernel, minimal sharpness
//! per round, and the maximal attempting number (MAN).
//!
//! Every round fidelity has the shape `1/2 + K · P(λ_1)⋯P(λ_{n-1}) · λ_n`,
//! where `K` depends only on the resource state and the receiver. The
//! helpers here compute `K` for the optimal state and for the disentangled
//! two-receiver families; the simulator in [`crate::protocol`] is the
//! oracle they are tested against.

use crate::error::{domain, Error, Result};
use crate::states::DisentangleParams;
use crate::tolerances;

/// Per-round attenuation `P(λ) = ½[1 - λ + √((1-λ)(1+3λ))]` of the usable
/// fidelity prefactor.
pub fn p_kernel(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain(format!("P(λ) needs λ in [0, 1], got {lambda}")));
    }
    Ok(p_kernel_unchecked(lambda))
}

fn p_kernel_unchecked(lambda: f64) -> f64 {
    0.5 * (1.0 - lambda + ((1.0 - lambda) * (1.0 + 3.0 * lambda)).max(0.0).sqrt())
}

/// `K = (M+2) / (6M)` for the optimal M-receiver state.
pub fn optimal_prefactor(receivers: usize) -> f64 {
    let m = receivers as f64;
    (m + 2.0) / (6.0 * m)
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(domain("at least one round is required"));
    }
    for (i, &l) in lambdas.iter().enumerate() {
        if !(l > 0.0 && l <= 1.0) {
            return Err(domain(format!("round {}: λ = {l} is outside (0, 1]", i + 1)));
        }
    }
    Ok(())
}

/// `1/2 + K · ∏_{i<n} P(λ_i) · λ_n`, with `n = lambdas.len()`.
pub fn fidelity_with_prefactor(prefactor: f64, lambdas: &[f64]) -> Result<f64> {
    check_lambdas(lambdas)?;
    let (last, earlier) = lambdas.split_last().expect("nonempty");
    let attenuation: f64 = earlier.iter().map(|&l| p_kernel_unchecked(l)).product();
    Ok(0.5 + prefactor * attenuation * last)
}

/// Round-`n` fidelity of the optimal `receivers`-receiver channel when every
/// earlier round was refused.
pub fn closed_fidelity(receivers: usize, lambdas: &[f64]) -> Result<f64> {
    if receivers == 0 {
        return Err(domain("at least one receiver is required"));
    }
    fidelity_with_prefactor(optimal_prefactor(receivers), lambdas)
}

/// Disentangled two-receiver families with a closed-form prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EtaCase {
    /// Only the port is disentangled.
    Port,
    /// Both receivers disentangled by the same amount.
    ReceiversEqual,
    /// Receivers disentangled independently.
    ReceiversUnequal,
    /// Port and both receivers (receivers equal).
    PortAndReceivers,
}

impl EtaCase {
    pub const ALL: [EtaCase; 4] = [Self::Port, Self::ReceiversEqual, Self::ReceiversUnequal, Self::PortAndReceivers];

    /// Narrowest case covering `params`, if any.
    pub fn classify(params: &DisentangleParams) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.check(params).is_ok())
    }

    fn check(self, p: &DisentangleParams) -> Result<()> {
        let fail = |why: &str| Err(Error::Validation(format!("{self:?}: {why}")));
        if p.receivers() != 2 {
            return fail("closed forms exist for two receivers only");
        }
        if p.eta_a != 1.0 {
            return fail("the ancilla must not be disentangled");
        }
        let (c1, c2) = (p.eta_c[0], p.eta_c[1]);
        match self {
            Self::Port if c1 != 1.0 || c2 != 1.0 => fail("receivers must not be disentangled"),
            Self::ReceiversEqual if p.eta_p != 1.0 || c1 != c2 => fail("needs η_P = 1 and η_C1 = η_C2"),
            Self::ReceiversUnequal if p.eta_p != 1.0 => fail("needs η_P = 1"),
            Self::PortAndReceivers if c1 != c2 => fail("needs η_C1 = η_C2"),
            _ => Ok(()),
        }
    }

    /// `K` for receiver `receiver` (0 or 1).
    pub fn prefactor(self, p: &DisentangleParams, receiver: usize) -> Result<f64> {
        self.check(p)?;
        if receiver > 1 {
            return Err(domain(format!("receiver index {receiver} out of range for two receivers")));
        }
        Ok(match self {
            Self::Port => {
                let e = p.eta_p;
                (1.0 + 4.0 * e + e * e) / (9.0 * (1.0 + e * e))
            }
            Self::ReceiversEqual => {
                let e = p.eta_c[0];
                let (e2, e3, e4) = (e * e, e * e * e, e * e * e * e);
                (1.0 + 2.0 * e + 2.0 * e3 + e4) / (6.0 * (1.0 + e2 + e4))
            }
            Self::ReceiversUnequal => {
                let (a, b) = if receiver == 0 { (p.eta_c[0], p.eta_c[1]) } else { (p.eta_c[1], p.eta_c[0]) };
                let (a2, b2) = (a * a, b * b);
                (1.0 + 2.0 * a + 2.0 * a * b2 + a2 * b2) / (3.0 * (2.0 + a2 + b2 + 2.0 * a2 * b2))
            }
            Self::PortAndReceivers => {
                let (c, q) = (p.eta_c[0], p.eta_p);
                let c2 = c * c;
                (1.0 + c * q * (2.0 + 2.0 * c2 + c2 * c * q)) / (6.0 + 3.0 * c2 * (2.0 * c2 * q * q + q * q + 1.0))
            }
        })
    }
}

/// Round-`n` fidelity of receiver C1 for a disentangled family.
pub fn closed_fidelity_eta(case: EtaCase, params: &DisentangleParams, lambdas: &[f64]) -> Result<f64> {
    closed_fidelity_eta_receiver(case, params, 0, lambdas)
}

pub fn closed_fidelity_eta_receiver(
    case: EtaCase,
    params: &DisentangleParams,
    receiver: usize,
    lambdas: &[f64],
) -> Result<f64> {
    fidelity_with_prefactor(case.prefactor(params, receiver)?, lambdas)
}

/// `K` for any supported resource: the optimal state of any size, or a
/// two-receiver disentangled family.
pub fn scenario_prefactor(params: &DisentangleParams, receiver: usize) -> Option<f64> {
    if params.is_optimal() {
        return Some(optimal_prefactor(params.receivers()));
    }
    EtaCase::classify(params).and_then(|c| c.prefactor(params, receiver).ok())
}

/// Closed-form fidelity where one exists. Earlier acceptances by other
/// receivers do not change it.
pub fn closed_fidelity_for(params: &DisentangleParams, receiver: usize, lambdas: &[f64]) -> Result<Option<f64>> {
    check_lambdas(lambdas)?;
    scenario_prefactor(params, receiver).map(|k| fidelity_with_prefactor(k, lambdas)).transpose()
}

/// Smallest λ reaching `target` given the accumulated prefactor. May exceed 1;
/// callers decide validity.
pub fn min_lambda(target: f64, prefactor: f64) -> Result<f64> {
    if prefactor.is_nan() || prefactor <= 0.0 {
        return Err(domain(format!("prefactor must be positive, got {prefactor}")));
    }
    if target.is_nan() || target <= 0.5 {
        return Err(domain(format!("target fidelity {target} must exceed 1/2")));
    }
    Ok((target - 0.5) / prefactor)
}

/// A MAN query.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub etas: DisentangleParams,
    pub f_min: f64,
}

impl ScenarioConfig {
    pub fn optimal(receivers: usize, f_min: f64) -> Self {
        Self { etas: DisentangleParams::optimal(receivers), f_min }
    }

    pub fn receivers(&self) -> usize {
        self.etas.receivers()
    }

    /// Weakest receiver's prefactor; every receiver must clear `f_min`.
    pub fn prefactor(&self) -> Result<f64> {
        (0..self.receivers())
            .map(|r| scenario_prefactor(&self.etas, r))
            .try_fold(f64::INFINITY, |acc, k| k.map(|k| acc.min(k)))
            .ok_or_else(|| Error::Validation("no closed form covers these disentangling parameters".into()))
    }
}

/// Result of the greedy MAN search.
#[derive(Clone, Debug, PartialEq)]
pub struct ManResult {
    pub man: usize,
    /// Minimal λ per completed round.
    pub lambda_schedule: Vec<f64>,
    /// The λ the next round would need (> 1), or `None` if the search was capped.
    pub first_invalid_lambda: Option<f64>,
}

const MAX_ROUNDS: usize = 10_000;

/// Greedy MAN: each round uses the smallest λ that reaches `f_min`, and the
/// search stops at the first round needing λ > 1.
pub fn man(cfg: &ScenarioConfig) -> Result<ManResult> {
    if cfg.f_min.is_nan() || cfg.f_min <= 0.5 {
        return Err(domain(format!("fidelity floor {} must exceed 1/2", cfg.f_min)));
    }
    let mut prefactor = cfg.prefactor()?;
    let mut schedule = Vec::new();
    while schedule.len() < MAX_ROUNDS {
        if prefactor <= 0.0 {
            return Ok(ManResult {
                man: schedule.len(),
                lambda_schedule: schedule,
                first_invalid_lambda: Some(f64::INFINITY),
            });
        }
        let mut lambda = min_lambda(cfg.f_min, prefactor)?;
        if lambda > 1.0 && lambda <= 1.0 + tolerances::LAMBDA_SLACK {
            lambda = 1.0;
        }
        if lambda > 1.0 {
            return Ok(ManResult {
                man: schedule.len(),
                lambda_schedule: schedule,
                first_invalid_lambda: Some(lambda),
            });
        }
        schedule.push(lambda);
        prefactor *= p_kernel_unchecked(lambda);
    }
    Ok(ManResult { man: schedule.len(), lambda_schedule: schedule, first_invalid_lambda: None })
}

/// Parameter swept when locating MAN steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryFamily {
    /// `f_min` over `(2/3, 5/6]` for the optimal two-receiver state.
    FidelityFloor,
    /// `η_P` over `[0, 1]` at `f_min = 0.67`.
    PortEta,
    /// `η_C1 = η_C2` over `[0, 1]` at `f_min = 0.67`.
    ReceiverEta,
}

/// Fidelity floor used for the disentangling sweeps.
pub const ETA_SWEEP_FLOOR: f64 = 0.67;

impl BoundaryFamily {
    pub fn range(self) -> (f64, f64) {
        match self {
            Self::FidelityFloor => (tolerances::CLASSICAL_FIDELITY + tolerances::CLASSICAL_EPSILON, 5.0 / 6.0),
            Self::PortEta | Self::ReceiverEta => (0.0, 1.0),
        }
    }

    pub fn config(self, x: f64) -> Result<ScenarioConfig> {
        Ok(match self {
            Self::FidelityFloor => ScenarioConfig::optimal(2, x),
            Self::PortEta => ScenarioConfig { etas: DisentangleParams::port(2, x)?, f_min: ETA_SWEEP_FLOOR },
            Self::ReceiverEta => {
                ScenarioConfig { etas: DisentangleParams::receivers_equal(2, x)?, f_min: ETA_SWEEP_FLOOR }
            }
        })
    }

    pub fn man_at(self, x: f64) -> Result<usize> {
        Ok(man(&self.config(x)?)?.man)
    }
}

/// A point where MAN changes value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManStep {
    pub boundary: f64,
    /// MAN just below the boundary.
    pub man_below: usize,
    /// MAN just above the boundary.
    pub man_above: usize,
}

const SCAN_POINTS: usize = 2000;

/// All MAN steps inside the family's range, ascending.
pub fn man_boundary(family: BoundaryFamily) -> Result<Vec<ManStep>> {
    let (lo, hi) = family.range();
    let xs: Vec<f64> = (0..=SCAN_POINTS).map(|i| lo + (hi - lo) * i as f64 / SCAN_POINTS as f64).collect();
    let mans = xs.iter().map(|&x| family.man_at(x)).collect::<Result<Vec<_>>>()?;

    let mut steps = Vec::new();
    for i in 0..SCAN_POINTS {
        if mans[i] == mans[i + 1] {
            continue;
        }
        let (mut a, mut b) = (xs[i], xs[i + 1]);
        while b - a > tolerances::BISECTION {
            let mid = 0.5 * (a + b);
            if family.man_at(mid)? == mans[i] {
                a = mid;
            } else {
                b = mid;
            }
        }
        steps.push(ManStep { boundary: 0.5 * (a + b), man_below: mans[i], man_above: mans[i + 1] });
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(p_kernel(0.0).unwrap(), 1.0);
        assert_eq!(p_kernel(1.0).unwrap(), 0.0);
        assert!((p_kernel(2.0 / 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(p_kernel(-0.01).is_err());
        assert!(p_kernel(1.01).is_err());
    }

    #[test]
    fn closed_fidelity_examples() {
        for l in [0.1, 0.5, 1.0] {
            assert!((closed_fidelity(2, &[l]).unwrap() - (0.5 + l / 3.0)).abs() < 1e-15);
            assert!((closed_fidelity(3, &[l]).unwrap() - (0.5 + 5.0 * l / 18.0)).abs() < 1e-15);
        }
        let f2 = closed_fidelity(2, &[0.525, 0.664158]).unwrap();
        assert!((f2 - 0.675).abs() < 1e-4);
        assert!(closed_fidelity(2, &[]).is_err());
        assert!(closed_fidelity(2, &[0.0]).is_err());
    }

    #[test]
    fn min_lambda_examples() {
        assert!((min_lambda(0.675, 1.0 / 3.0).unwrap() - 0.525).abs() < 1e-12);
        let l2 = min_lambda(0.675, p_kernel(0.525).unwrap() / 3.0).unwrap();
        assert!((l2 - 0.664158).abs() < 1e-5);
        let m4 = optimal_prefactor(4);
        let target = 2.0 / 3.0 + 1e-6;
        let l1 = min_lambda(target, m4).unwrap();
        assert!(l1 <= 1.0);
        assert!(min_lambda(target, m4 * p_kernel(l1).unwrap()).unwrap() > 1.0);
        assert!(min_lambda(0.7, 0.0).is_err());
    }

    #[test]
    fn man_examples() {
        let r = man(&ScenarioConfig::optimal(2, 0.675)).unwrap();
        assert_eq!(r.man, 3);
        for (got, want) in r.lambda_schedule.iter().zip([0.525, 0.664158, 0.992511]) {
            assert!((got - want).abs() < 1e-4);
        }
        assert!(r.first_invalid_lambda.unwrap() > 1.0);
        assert_eq!(man(&ScenarioConfig::optimal(2, 0.73)).unwrap().man, 1);
        assert_eq!(man(&ScenarioConfig::optimal(4, 0.667)).unwrap().man, 1);
        assert!(man(&ScenarioConfig::optimal(2, 0.5)).is_err());
    }

    #[test]
    fn eta_cases_reduce_to_optimal() {
        let opt = DisentangleParams::optimal(2);
        for case in EtaCase::ALL {
            let k = case.prefactor(&opt, 0).unwrap();
            assert!((k - 1.0 / 3.0).abs() < 1e-15, "{case:?}");
        }
    }

    #[test]
    fn receivers_fully_disentangled() {
        let p = DisentangleParams::receivers_equal(2, 0.0).unwrap();
        let f = closed_fidelity_eta(EtaCase::ReceiversEqual, &p, &[0.8]).unwrap();
        assert!((f - (0.5 + 0.8 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn unequal_receivers_reduce_to_equal() {
        for e in [0.1, 0.4, 0.9] {
            let p = DisentangleParams::receivers_equal(2, e).unwrap();
            let a = EtaCase::ReceiversUnequal.prefactor(&p, 0).unwrap();
            let b = EtaCase::ReceiversEqual.prefactor(&p, 0).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn case_mismatch_is_a_validation_error() {
        let p = DisentangleParams::port(2, 0.5).unwrap();
        assert!(matches!(EtaCase::ReceiversEqual.prefactor(&p, 0), Err(Error::Validation(_))));
        let three = DisentangleParams::port(3, 0.5).unwrap();
        assert!(EtaCase::classify(&three).is_none());
        assert_eq!(EtaCase::classify(&p), Some(EtaCase::Port));
    }
}
