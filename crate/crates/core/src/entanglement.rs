//! Negativity, logarithmic negativity and the LN monogamy score, plus the
//! closed-form LN of the first and second recycled two-receiver channels.

use crate::error::{domain, Error, Result};
use crate::linalg::{herm_eigenvalues, DensityMatrix};
use crate::tolerances;

/// An `A:B` split over (a subset of) a layout's slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<String>,
    side_b: Vec<String>,
}

impl Bipartition {
    /// `side_a` against every other slot of `rho`.
    pub fn new<S: AsRef<str>>(rho: &DensityMatrix, side_a: &[S]) -> Result<Self> {
        let a: Vec<String> = side_a.iter().map(|s| s.as_ref().to_owned()).collect();
        let b: Vec<String> = rho.layout().names().filter(|n| !a.iter().any(|x| x == n)).map(str::to_owned).collect();
        Self::explicit(rho, &a, &b)
    }

    /// Explicit sides. Slots on neither side are traced out first.
    pub fn explicit<S: AsRef<str>, T: AsRef<str>>(rho: &DensityMatrix, side_a: &[S], side_b: &[T]) -> Result<Self> {
        let a: Vec<String> = side_a.iter().map(|s| s.as_ref().to_owned()).collect();
        let b: Vec<String> = side_b.iter().map(|s| s.as_ref().to_owned()).collect();
        if a.is_empty() || b.is_empty() {
            return Err(Error::Validation("both sides of a bipartition must be nonempty".into()));
        }
        // positions() rejects unknown names and duplicates, including overlap
        rho.layout().positions(a.iter().chain(&b))?;
        Ok(Self { side_a: a, side_b: b })
    }

    pub fn side_a(&self) -> &[String] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[String] {
        &self.side_b
    }
}

fn partial_transpose_spectrum(rho: &DensityMatrix, bip: &Bipartition) -> Result<Vec<f64>> {
    // re-check against this rho in case the bipartition was built for another one
    rho.layout().positions(bip.side_a.iter().chain(&bip.side_b))?;
    let kept = rho.reduced(bip.side_a.iter().chain(&bip.side_b))?;
    herm_eigenvalues(&kept.partial_transpose(&bip.side_a)?)
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{Γ_A}`.
pub fn negativity(rho: &DensityMatrix, bip: &Bipartition) -> Result<f64> {
    let spectrum = partial_transpose_spectrum(rho, bip)?;
    Ok(spectrum.iter().filter(|&&x| x < 0.0).map(|x| -x).sum())
}

/// `log₂(2N + 1)`.
pub fn log_negativity(rho: &DensityMatrix, bip: &Bipartition) -> Result<f64> {
    Ok((2.0 * negativity(rho, bip)? + 1.0).log2().max(0.0))
}

/// Nodal party against a list of parties or groups of parties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonogamyQuery {
    pub nodal: String,
    pub others: Vec<Vec<String>>,
}

impl MonogamyQuery {
    /// One group per listed slot.
    pub fn singles<S: AsRef<str>>(nodal: &str, others: &[S]) -> Self {
        Self { nodal: nodal.to_owned(), others: others.iter().map(|s| vec![s.as_ref().to_owned()]).collect() }
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        if self.others.is_empty() || self.others.iter().any(Vec::is_empty) {
            return Err(Error::Validation("monogamy query needs nonempty groups".into()));
        }
        rho.layout().positions(std::iter::once(&self.nodal).chain(self.others.iter().flatten()))?;
        Ok(())
    }
}

/// `LN(nodal : all others) − Σ_i LN(nodal : others_i)`.
pub fn monogamy_score(rho: &DensityMatrix, q: &MonogamyQuery) -> Result<f64> {
    q.check(rho)?;
    let nodal = [q.nodal.as_str()];
    let rest: Vec<&str> = q.others.iter().flatten().map(String::as_str).collect();
    let whole = log_negativity(rho, &Bipartition::explicit(rho, &nodal, &rest)?)?;
    let mut pairwise = 0.0;
    for group in &q.others {
        pairwise += log_negativity(rho, &Bipartition::explicit(rho, &nodal, group)?)?;
    }
    Ok(whole - pairwise)
}

/// Which recycled channel a closed form describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecycledRound {
    /// After one refused round at fidelity `f₁`.
    First,
    /// After two refused rounds at fidelities `f₁`, `f₂`.
    Second,
}

/// Bipartition a closed form describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LnPair {
    /// `P : C₁` (equivalently `P : C₂`).
    PortReceiver,
    /// `P : A C₁ C₂`.
    PortRest,
}

fn checked_sqrt(x: f64, what: &str) -> Result<f64> {
    if x < -tolerances::RADICAND {
        return Err(domain(format!("{what} = {x} is negative: fidelities are not reachable")));
    }
    Ok(x.max(0.0).sqrt())
}

/// `P(f₁)`: attenuation of the first round expressed through its fidelity.
pub fn attenuation_from_fidelity(f1: f64) -> Result<f64> {
    let r = checked_sqrt((5.0 - 6.0 * f1) * (18.0 * f1 - 7.0), "(5-6f1)(18f1-7)")?;
    Ok(0.25 * (5.0 - 6.0 * f1 + r))
}

fn x1(f1: f64) -> Result<f64> {
    Ok(checked_sqrt(2.5 - 3.0 * f1, "2.5-3f1")? * checked_sqrt(9.0 * f1 - 3.5, "9f1-3.5")?)
}

// The printed expressions take |s|; the numerical LN is zero whenever the
// bracket s is positive, so only its negative part contributes.
fn ln_from_bracket(s: f64, d: f64) -> f64 {
    (1.0 + (-s).max(0.0) / d).log2()
}

/// Closed-form LN of the recycled optimal two-receiver channel when every
/// round so far was refused. `f2` is required for [`RecycledRound::Second`].
pub fn ln_recycled_closed(round: RecycledRound, pair: LnPair, f1: f64, f2: Option<f64>) -> Result<f64> {
    let lo = tolerances::CLASSICAL_FIDELITY - tolerances::RADICAND;
    if !(lo..=5.0 / 6.0 + tolerances::RADICAND).contains(&f1) {
        return Err(domain(format!("f1 = {f1} is outside [2/3, 5/6]")));
    }
    let x1 = x1(f1)?;
    match round {
        RecycledRound::First => {
            if f2.is_some() {
                return Err(domain("the first recycled channel takes no f2"));
            }
            let (c, d) = match pair {
                LnPair::PortReceiver => (0.5, 6.0),
                LnPair::PortRest => (-0.5, 4.0),
            };
            let root = checked_sqrt((2.5 - 3.0 * f1) * (3.0 * f1 - 0.5 + x1), "(2.5-3f1)(3f1-0.5+X1)")?;
            let s = c + 3.0 * f1 - x1 - 2.0 * std::f64::consts::SQRT_2 * root;
            Ok(ln_from_bracket(s, d))
        }
        RecycledRound::Second => {
            let f2 = f2.ok_or_else(|| domain("the second recycled channel needs f2"))?;
            let p = attenuation_from_fidelity(f1)?;
            if p <= 0.0 {
                return Err(domain(format!("no fidelity is left after f1 = {f1}")));
            }
            let x3 = (3.0 * f2 - 1.5) / p;
            if !(0.0..=1.0 + tolerances::RADICAND).contains(&x3) {
                return Err(domain(format!("f2 = {f2} is not reachable after f1 = {f1}")));
            }
            let x2 = checked_sqrt(1.0 - x3, "1-X3")? * (1.0 + 3.0 * x3).sqrt();
            let (c, d) = match pair {
                LnPair::PortReceiver => (3.5, 12.0),
                LnPair::PortRest => (1.5, 8.0),
            };
            let root = checked_sqrt(
                (3.0 * f1 - 2.5) * (3.0 * f1 - 0.5 + x1) * (x3 - 1.0) * (1.0 + x2 + x3),
                "(3f1-2.5)(3f1-0.5+X1)(X3-1)(1+X2+X3)",
            )?;
            let s = c + 3.0 * f1 - x1 + (3.0 * f1 - 2.5 - x1) * (x2 - x3) - 4.0 * root;
            Ok(ln_from_bracket(s, d))
        }
    }
}
