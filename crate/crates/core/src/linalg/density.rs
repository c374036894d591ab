use num_complex::Complex64;

use super::layout::{Split, SubsystemLayout};
use super::matrix::{herm_eigenvalues, kron, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tolerances;

/// A quantum state on a labelled tensor product of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    layout: SubsystemLayout,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace and positive semidefinite
    /// within the shared tolerances.
    pub fn new(layout: SubsystemLayout, mat: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_parts(layout, mat)?;
        rho.check_invariants()?;
        Ok(rho)
    }

    /// Shape-checked constructor that skips the spectral checks. Used for
    /// states produced by trace-preserving maps of valid states.
    pub(crate) fn from_parts(layout: SubsystemLayout, mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() != layout.dim() {
            return Err(Error::Shape(format!(
                "a {}x{} matrix does not match layout dimension {}",
                mat.rows(),
                mat.cols(),
                layout.dim()
            )));
        }
        Ok(Self { layout, mat })
    }

    /// `|ψ⟩⟨ψ|` for a normalised ket.
    pub fn from_ket(layout: SubsystemLayout, ket: &[Complex64]) -> Result<Self> {
        if ket.len() != layout.dim() {
            return Err(Error::Shape(format!(
                "ket of length {} does not match layout dimension {}",
                ket.len(),
                layout.dim()
            )));
        }
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tolerances::NORM {
            return Err(Error::Validation(format!("ket norm {norm} is not 1")));
        }
        Self::from_parts(layout, ComplexMatrix::projector(ket))
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.dim();
        Self { mat: ComplexMatrix::identity(d).scale_real(1.0 / d as f64), layout }
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self { layout: self.layout.concat(&other.layout)?, mat: kron(&self.mat, &other.mat) })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eigenvalues(&self.mat)?[0])
    }

    pub fn check_invariants(&self) -> Result<()> {
        let defect = self.mat.hermitian_defect();
        if defect > tolerances::HERMITIAN {
            return Err(Error::Validation(format!("density matrix is not Hermitian (defect {defect:e})")));
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > tolerances::TRACE || tr.im.abs() > tolerances::TRACE {
            return Err(Error::Validation(format!("density matrix trace is {tr}, expected 1")));
        }
        let min = self.min_eigenvalue()?;
        if min < -tolerances::PSD_CLAMP {
            return Err(Error::NotPsd(min));
        }
        Ok(())
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, ket: &[Complex64]) -> f64 {
        let rk = self.mat.apply(ket);
        ket.iter().zip(&rk).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    }

    /// Trace out the named slots. The remaining slots keep their relative order.
    pub fn partial_trace<I, S>(&self, discard: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let names: Vec<String> = discard.into_iter().map(|s| s.as_ref().to_string()).collect();
        let targets = self.layout.positions(&names)?;
        if targets.is_empty() {
            return Ok(self.clone());
        }
        if targets.len() == self.layout.len() {
            return Err(Error::Shape("cannot trace out every slot".into()));
        }
        let layout = self.layout.without(&names)?;
        let split = Split::new(&self.layout.dims(), &targets);
        let mut out = ComplexMatrix::zeros(split.rest_dim, split.rest_dim);
        for r in 0..split.rest_dim {
            for c in 0..split.rest_dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..split.local_dim {
                    acc += self.mat[(split.full(r, t), split.full(c, t))];
                }
                out[(r, c)] = acc;
            }
        }
        Self::from_parts(layout, out)
    }

    /// Reduced state on `keep` (listed slots must exist; order follows the layout).
    pub fn reduced<I, S>(&self, keep: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let keep: Vec<String> = keep.into_iter().map(|s| s.as_ref().to_string()).collect();
        self.layout.positions(&keep)?;
        let discard: Vec<String> =
            self.layout.names().filter(|n| !keep.iter().any(|k| k == n)).map(String::from).collect();
        self.partial_trace(discard)
    }

    /// Transpose the tensor factors named in `part`.
    pub fn partial_transpose<I, S>(&self, part: I) -> Result<ComplexMatrix>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        partial_transpose(&self.mat, &self.layout, part)
    }

    /// `O ρ O†` with `op` acting on `slots` (in the order given) and identity elsewhere.
    pub fn conjugate_local<S: AsRef<str>>(&self, op: &ComplexMatrix, slots: &[S]) -> Result<Self> {
        let out = conjugate_local(&self.mat, &self.layout, op, slots)?;
        Self::from_parts(self.layout.clone(), out)
    }
}

/// Partial transpose of any square matrix laid out as `layout`.
pub fn partial_transpose<I, S>(m: &ComplexMatrix, layout: &SubsystemLayout, part: I) -> Result<ComplexMatrix>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if m.rows() != layout.dim() || m.cols() != layout.dim() {
        return Err(Error::Shape(format!(
            "{}x{} matrix on a layout of dimension {}",
            m.rows(),
            m.cols(),
            layout.dim()
        )));
    }
    let names: Vec<String> = part.into_iter().map(|s| s.as_ref().to_string()).collect();
    let targets = layout.positions(&names)?;
    if targets.is_empty() || targets.len() == layout.len() {
        return Err(Error::Shape("partial transpose needs a proper nonempty subset of slots".into()));
    }
    Ok(partial_transpose_matrix(m, layout, &targets))
}

pub(crate) fn partial_transpose_matrix(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    targets: &[usize],
) -> ComplexMatrix {
    let split = Split::new(&layout.dims(), targets);
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for r in 0..split.rest_dim {
        for c in 0..split.rest_dim {
            for a in 0..split.local_dim {
                for b in 0..split.local_dim {
                    out[(split.full(r, a), split.full(c, b))] = m[(split.full(r, b), split.full(c, a))];
                }
            }
        }
    }
    out
}

fn local_split<S: AsRef<str>>(layout: &SubsystemLayout, op: &ComplexMatrix, slots: &[S]) -> Result<Split> {
    let targets = layout.positions(slots.iter().map(|s| s.as_ref()))?;
    let split = Split::new(&layout.dims(), &targets);
    if op.rows() != split.local_dim || op.cols() != split.local_dim {
        return Err(Error::Shape(format!(
            "a {}x{} operator cannot act on slots of total dimension {}",
            op.rows(),
            op.cols(),
            split.local_dim
        )));
    }
    Ok(split)
}

/// `(O ⊗ I) m`.
pub(crate) fn left_local<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    op: &ComplexMatrix,
    slots: &[S],
) -> Result<ComplexMatrix> {
    let split = local_split(layout, op, slots)?;
    let ld = split.local_dim;
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    let mut buf = vec![Complex64::new(0.0, 0.0); ld];
    for col in 0..m.cols() {
        for r in 0..split.rest_dim {
            for (b, slot) in buf.iter_mut().enumerate() {
                *slot = m[(split.full(r, b), col)];
            }
            for a in 0..ld {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, v) in buf.iter().enumerate() {
                    acc += op[(a, b)] * v;
                }
                out[(split.full(r, a), col)] = acc;
            }
        }
    }
    Ok(out)
}

/// `m (O ⊗ I)†`.
pub(crate) fn right_local_dagger<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    op: &ComplexMatrix,
    slots: &[S],
) -> Result<ComplexMatrix> {
    let split = local_split(layout, op, slots)?;
    let ld = split.local_dim;
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    let mut buf = vec![Complex64::new(0.0, 0.0); ld];
    for row in 0..m.rows() {
        for c in 0..split.rest_dim {
            for (b, slot) in buf.iter_mut().enumerate() {
                *slot = m[(row, split.full(c, b))];
            }
            for a in 0..ld {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, v) in buf.iter().enumerate() {
                    acc += v * op[(a, b)].conj();
                }
                out[(row, split.full(c, a))] = acc;
            }
        }
    }
    Ok(out)
}

/// `(O ⊗ I) m (O ⊗ I)†`.
pub(crate) fn conjugate_local<S: AsRef<str>>(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    op: &ComplexMatrix,
    slots: &[S],
) -> Result<ComplexMatrix> {
    let left = left_local(m, layout, op, slots)?;
    right_local_dagger(&left, layout, op, slots)
}

/// Dense `O ⊗ I` on the whole layout, with `op` placed on `slots`.
pub(crate) fn embed<S: AsRef<str>>(layout: &SubsystemLayout, op: &ComplexMatrix, slots: &[S]) -> Result<ComplexMatrix> {
    let split = local_split(layout, op, slots)?;
    let mut out = ComplexMatrix::zeros(layout.dim(), layout.dim());
    for r in 0..split.rest_dim {
        for a in 0..split.local_dim {
            for b in 0..split.local_dim {
                out[(split.full(r, a), split.full(r, b))] = op[(a, b)];
            }
        }
    }
    Ok(out)
}
