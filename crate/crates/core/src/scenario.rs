//! JSON scenario files for `simulate`.
//!
//! ```json
//! {
//!   "receivers": 2,
//!   "eta": { "P": 1.0, "A": 1.0, "C": [1.0, 1.0] },
//!   "f_min": 0.675,
//!   "rounds": [
//!     { "accept": [false, false] },
//!     { "lambda": 1.0, "accept": [true, true] }
//!   ]
//! }
//! ```
//!
//! `eta` defaults to the optimal state. A round without `lambda` uses the
//! smallest sharpness reaching `f_min` for every receiver. `accept` always
//! has one entry per original receiver; receivers that already left must be
//! `false`.

use std::path::Path;

use serde::Deserialize;

use crate::analysis::{min_lambda, p_kernel, scenario_prefactor};
use crate::error::{domain, Error, Result};
use crate::measurement::AcceptanceMask;
use crate::protocol::{RoundRecord, RoundSchedule};
use crate::states::DisentangleParams;
use crate::tolerances;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EtaSpec {
    #[serde(rename = "P", default = "one")]
    pub p: f64,
    #[serde(rename = "A", default = "one")]
    pub a: f64,
    #[serde(rename = "C", default)]
    pub c: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RoundSpec {
    #[serde(default)]
    pub lambda: Option<f64>,
    pub accept: Vec<bool>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub receivers: usize,
    #[serde(default)]
    pub eta: Option<EtaSpec>,
    pub rounds: Vec<RoundSpec>,
    #[serde(default)]
    pub f_min: Option<f64>,
}

/// A scenario ready to run.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub params: DisentangleParams,
    pub schedule: RoundSchedule,
}

impl ScenarioFile {
    /// Parse JSON; errors carry the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Validation(format!("scenario field `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn params(&self) -> Result<DisentangleParams> {
        if self.receivers == 0 {
            return Err(Error::Validation("scenario field `receivers`: must be at least 1".into()));
        }
        match &self.eta {
            None => Ok(DisentangleParams::optimal(self.receivers)),
            Some(eta) => {
                let c = eta.c.clone().unwrap_or_else(|| vec![1.0; self.receivers]);
                if c.len() != self.receivers {
                    return Err(Error::Validation(format!(
                        "scenario field `eta.C`: {} entries for {} receivers",
                        c.len(),
                        self.receivers
                    )));
                }
                DisentangleParams::new(eta.p, eta.a, c)
            }
        }
    }

    /// Resolve λs and acceptance masks.
    pub fn resolve(&self) -> Result<Scenario> {
        let params = self.params()?;
        let m = self.receivers;
        let mut present = vec![true; m];
        let mut attenuation = 1.0;
        let mut rounds = Vec::with_capacity(self.rounds.len());
        for (n, spec) in self.rounds.iter().enumerate() {
            let round = n + 1;
            if spec.accept.len() != m {
                return Err(Error::Validation(format!(
                    "scenario field `rounds[{n}].accept`: {} entries for {m} receivers",
                    spec.accept.len()
                )));
            }
            if !present.iter().any(|&p| p) {
                return Err(Error::ProtocolExhausted);
            }
            let lambda = match spec.lambda {
                Some(l) => l,
                None => self.derived_lambda(&params, &present, attenuation, round)?,
            };
            if !(lambda > 0.0 && lambda <= 1.0) {
                return Err(domain(format!("round {round}: λ = {lambda} is outside (0, 1]")));
            }
            let mut bits = Vec::new();
            for (i, &accept) in spec.accept.iter().enumerate() {
                if present[i] {
                    bits.push(accept);
                } else if accept {
                    return Err(Error::Validation(format!(
                        "scenario field `rounds[{n}].accept[{i}]`: receiver C{} already left",
                        i + 1
                    )));
                }
            }
            for (i, &accept) in spec.accept.iter().enumerate() {
                present[i] &= !accept;
            }
            attenuation *= p_kernel(lambda)?;
            rounds.push(RoundRecord { lambda, mask: AcceptanceMask::new(bits) });
        }
        Ok(Scenario { params, schedule: RoundSchedule::new(rounds)? })
    }

    fn derived_lambda(
        &self,
        params: &DisentangleParams,
        present: &[bool],
        attenuation: f64,
        round: usize,
    ) -> Result<f64> {
        let f_min = self.f_min.ok_or_else(|| {
            Error::Validation(format!("round {round}: no lambda given and no f_min to derive it from"))
        })?;
        let mut k = f64::INFINITY;
        for (i, _) in present.iter().enumerate().filter(|(_, &p)| p) {
            let ki = scenario_prefactor(params, i).ok_or_else(|| {
                Error::Validation(format!("round {round}: λ cannot be derived for these η values; give it explicitly"))
            })?;
            k = k.min(ki);
        }
        let prefactor = k * attenuation;
        if prefactor <= 0.0 {
            return Err(domain(format!("round {round}: no fidelity is left to reach f_min = {f_min}")));
        }
        let lambda = min_lambda(f_min, prefactor)?;
        if lambda > 1.0 + tolerances::LAMBDA_SLACK {
            return Err(domain(format!("round {round}: reaching f_min = {f_min} needs λ = {lambda} > 1")));
        }
        Ok(lambda.min(1.0))
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    ScenarioFile::load(path)?.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_schedule() {
        let s = ScenarioFile::from_json(
            r#"{"receivers": 2, "f_min": 0.675,
                "rounds": [{"accept": [false, false]}, {"accept": [false, false]}, {"accept": [false, false]}]}"#,
        )
        .unwrap()
        .resolve()
        .unwrap();
        let l = s.schedule.lambdas();
        for (got, want) in l.iter().zip([0.525, 0.664158, 0.992511]) {
            assert!((got - want).abs() < 1e-5);
        }
    }

    #[test]
    fn unknown_field_reports_path() {
        let err = ScenarioFile::from_json(r#"{"receivers": 2, "rounds": [{"lambda": 1, "accept": [], "x": 1}]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("rounds[0]"), "{err}");
    }

    #[test]
    fn too_many_receivers_for_recycling() {
        let err = ScenarioFile::from_json(
            r#"{"receivers": 4, "f_min": 0.667,
                "rounds": [{"accept": [false,false,false,false]}, {"accept": [false,false,false,false]}]}"#,
        )
        .unwrap()
        .resolve()
        .unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("round 2")), "{err}");
    }

    #[test]
    fn explicit_lambda_out_of_range() {
        let err = ScenarioFile::from_json(r#"{"receivers": 1, "rounds": [{"lambda": 1.5, "accept": [true]}]}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("round 1")));
    }

    #[test]
    fn departed_receivers() {
        let text = r#"{"receivers": 2, "rounds": [
            {"lambda": 0.5, "accept": [true, false]},
            {"lambda": 1.0, "accept": [false, true]}]}"#;
        let s = ScenarioFile::from_json(text).unwrap().resolve().unwrap();
        assert_eq!(s.schedule.rounds()[1].mask.bits(), &[true]);
        let bad = text.replace("[false, true]}]", "[true, true]}]");
        assert!(ScenarioFile::from_json(&bad).unwrap().resolve().is_err());
    }
}
