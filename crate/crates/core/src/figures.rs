//! Sampled data behind the MAN, recycled-fidelity and LN plots.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{closed_fidelity, man, p_kernel, BoundaryFamily, ScenarioConfig, ETA_SWEEP_FLOOR};
use crate::entanglement::{ln_recycled_closed, log_negativity, Bipartition, LnPair, RecycledRound};
use crate::error::{domain, Error, Result};
use crate::linalg::DensityMatrix;
use crate::measurement::AcceptanceMask;
use crate::protocol::ChannelState;
use crate::report::{Cell, OutputTable};
use crate::states::{ancilla_name, receiver_name, PORT};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// MAN against the fidelity floor.
    Fig2,
    /// Second-round fidelity at λ₂ = 1, LN and δ_LN of the first recycled state.
    Fig3,
    /// Third-round fidelity at λ₃ = 1 over (f₁, f₂).
    Fig4a,
    /// LN of the second recycled state over (f₁, f₂).
    Fig4b,
    /// MAN against η_P and η_C.
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [Self::Fig2, Self::Fig3, Self::Fig4a, Self::Fig4b, Self::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig2 => "2",
            Self::Fig3 => "3",
            Self::Fig4a => "4a",
            Self::Fig4b => "4b",
            Self::Fig5 => "5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s.trim_start_matches("fig"))
            .ok_or_else(|| Error::Validation(format!("unknown figure id {s:?}; expected one of 2, 3, 4a, 4b, 5")))
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// λ of the optimal two-receiver channel giving fidelity `f` in a fresh round.
fn lambda_for(f: f64) -> f64 {
    3.0 * f - 1.5
}

/// Fidelity floor where LN of the first recycled state vanishes: `P(λ) = ½`
/// at `λ = (1+√5)/4`.
pub fn vanishing_f1() -> f64 {
    0.5 + (1.0 + 5f64.sqrt()) / 12.0
}

pub fn figure_data(id: FigureId, grid: usize) -> Result<OutputTable> {
    if grid < 2 {
        return Err(domain(format!("grid must be at least 2, got {grid}")));
    }
    let table = match id {
        FigureId::Fig2 => fig2(grid),
        FigureId::Fig3 => fig3(grid),
        FigureId::Fig4a => fig4a(grid),
        FigureId::Fig4b => fig4b(grid),
        FigureId::Fig5 => fig5(grid),
    }?;
    Ok(table.with_provenance(format!("fig --id {id} --grid {grid}")))
}

fn fig2(grid: usize) -> Result<OutputTable> {
    let mut t = OutputTable::new(["f_l", "MAN"]);
    let (lo, hi) = BoundaryFamily::FidelityFloor.range();
    for f in linspace(lo, hi, grid) {
        t.push_row(vec![f.into(), man(&ScenarioConfig::optimal(2, f))?.man.into()])?;
    }
    Ok(t)
}

/// LN of `P` against each slot group of a two-receiver channel.
struct PortLn {
    receiver: f64,
    rest: f64,
    ancilla: f64,
}

fn port_ln(rho: &DensityMatrix) -> Result<PortLn> {
    let (a, c1, c2) = (ancilla_name(1), receiver_name(1), receiver_name(2));
    let ln = |side_b: &[&str]| log_negativity(rho, &Bipartition::explicit(rho, &[PORT], side_b)?);
    Ok(PortLn { receiver: ln(&[&c1])?, rest: ln(&[&a, &c1, &c2])?, ancilla: ln(&[&a])? })
}

fn fig3(grid: usize) -> Result<OutputTable> {
    let mut t =
        OutputTable::new(["f1", "f2_max", "LN_P_C1", "LN_P_C1_closed", "LN_P_AC1C2", "LN_P_AC1C2_closed", "delta_LN"]);
    let fresh = ChannelState::fresh(2)?;
    let refuse = AcceptanceMask::all_refuse(2);
    for f1 in linspace(tolerances::CLASSICAL_FIDELITY, 5.0 / 6.0, grid) {
        let l1 = lambda_for(f1).min(1.0);
        let ln = port_ln(fresh.recycle(l1, &refuse)?.rho())?;
        t.push_row(vec![
            f1.into(),
            closed_fidelity(2, &[l1, 1.0])?.into(),
            ln.receiver.into(),
            ln_recycled_closed(RecycledRound::First, LnPair::PortReceiver, f1, None)?.into(),
            ln.rest.into(),
            ln_recycled_closed(RecycledRound::First, LnPair::PortRest, f1, None)?.into(),
            (ln.rest - ln.ancilla - 2.0 * ln.receiver).into(),
        ])?;
    }
    Ok(t)
}

/// Rectangle of (f₁, f₂) sampled by the second-recycled-state plots: f₁ up
/// to the point where no quantum second round remains, f₂ up to the best
/// second round after f₁ = 2/3. Points needing λ₂ > 1 are skipped.
pub fn fig4_range() -> ((f64, f64), (f64, f64)) {
    let lo = tolerances::CLASSICAL_FIDELITY;
    let f2_hi = 0.5 + p_kernel(lambda_for(lo)).expect("λ in range") / 3.0;
    ((lo, vanishing_f1()), (lo, f2_hi))
}

fn fig4_points(grid: usize) -> Result<Vec<(f64, f64, f64, f64)>> {
    let ((a0, a1), (b0, b1)) = fig4_range();
    let mut out = Vec::new();
    for f1 in linspace(a0, a1, grid) {
        let l1 = lambda_for(f1);
        let p1 = p_kernel(l1)?;
        for f2 in linspace(b0, b1, grid) {
            let l2 = (f2 - 0.5) * 3.0 / p1;
            if l2 > 1.0 {
                continue;
            }
            out.push((f1, f2, l1, l2));
        }
    }
    Ok(out)
}

fn fig4a(grid: usize) -> Result<OutputTable> {
    let mut t = OutputTable::new(["f1", "f2", "f3"]);
    for (f1, f2, l1, l2) in fig4_points(grid)? {
        t.push_row(vec![f1.into(), f2.into(), closed_fidelity(2, &[l1, l2, 1.0])?.into()])?;
    }
    Ok(t)
}

fn fig4b(grid: usize) -> Result<OutputTable> {
    let mut t = OutputTable::new(["f1", "f2", "LN_P_C1", "LN_P_C1_closed", "LN_P_AC1C2", "LN_P_AC1C2_closed"]);
    let fresh = ChannelState::fresh(2)?;
    let refuse = AcceptanceMask::all_refuse(2);
    for (f1, f2, l1, l2) in fig4_points(grid)? {
        let ln = port_ln(fresh.recycle(l1, &refuse)?.recycle(l2, &refuse)?.rho())?;
        let closed = |pair| ln_recycled_closed(RecycledRound::Second, pair, f1, Some(f2)).map(Cell::from);
        t.push_row(vec![
            f1.into(),
            f2.into(),
            ln.receiver.into(),
            closed(LnPair::PortReceiver)?,
            ln.rest.into(),
            closed(LnPair::PortRest)?,
        ])?;
    }
    Ok(t)
}

fn fig5(grid: usize) -> Result<OutputTable> {
    let mut t = OutputTable::new(["eta", "MAN_port", "MAN_receivers"]);
    for eta in linspace(0.0, 1.0, grid) {
        t.push_row(vec![
            eta.into(),
            BoundaryFamily::PortEta.man_at(eta)?.into(),
            BoundaryFamily::ReceiverEta.man_at(eta)?.into(),
        ])?;
    }
    Ok(t.with_provenance(format!("f_l = {ETA_SWEEP_FLOOR}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("6".parse::<FigureId>().is_err());
    }

    #[test]
    fn grid_too_small() {
        assert!(figure_data(FigureId::Fig2, 1).is_err());
    }

    #[test]
    fn fig2_steps_down() {
        let t = figure_data(FigureId::Fig2, 50).unwrap();
        let mans: Vec<i64> = t.rows().iter().map(|r| if let Cell::Int(m) = r[1] { m } else { panic!() }).collect();
        assert_eq!(mans[0], 3);
        assert_eq!(*mans.last().unwrap(), 1);
        assert!(mans.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn vanishing_point() {
        assert!((vanishing_f1() - 0.7697).abs() < 1e-4);
        let l = lambda_for(vanishing_f1());
        assert!((p_kernel(l).unwrap() - 0.5).abs() < 1e-12);
    }
}
