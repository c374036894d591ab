use std::collections::HashSet;

use crate::error::{Error, Result};

/// One named tensor factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub name: String,
    pub dim: usize,
}

/// Ordered, named tensor factors. The first slot is the most significant
/// digit of a basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    slots: Vec<Slot>,
}

impl SubsystemLayout {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        let mut seen = HashSet::new();
        for slot in &slots {
            if slot.dim == 0 {
                return Err(Error::Shape(format!("slot `{}` has dimension 0", slot.name)));
            }
            if !seen.insert(slot.name.as_str()) {
                return Err(Error::Validation(format!("duplicate slot name `{}`", slot.name)));
            }
        }
        Ok(Self { slots })
    }

    /// A layout of qubits with the given names.
    pub fn qubits<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(names.into_iter().map(|n| Slot { name: n.into(), dim: 2 }).collect())
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.slots.iter().map(|s| s.name.as_str())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.dim).collect()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.slots.iter().map(|s| s.dim).product()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.slots.iter().any(|s| s.name == name)
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.slots.iter().position(|s| s.name == name).ok_or_else(|| Error::UnknownSlot(name.to_string()))
    }

    /// Positions of `names`, in the order given.
    pub fn positions<I, S>(&self, names: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = Vec::new();
        for n in names {
            let p = self.position(n.as_ref())?;
            if out.contains(&p) {
                return Err(Error::Validation(format!("slot `{}` listed twice", n.as_ref())));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// The layout with `names` removed; remaining slots keep their order.
    pub fn without<I, S>(&self, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let drop = self.positions(names)?;
        Ok(Self {
            slots: self.slots.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, s)| s.clone()).collect(),
        })
    }

    /// `self ⊗ other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().cloned());
        Self::new(slots)
    }
}

/// Index bookkeeping for a set of target slots inside a layout.
///
/// `table[rest * local_dim + local]` is the full basis index whose digits on
/// the target slots compose to `local` (in the order the targets were given)
/// and whose remaining digits compose to `rest` (in layout order).
pub(crate) struct Split {
    pub local_dim: usize,
    pub rest_dim: usize,
    pub table: Vec<usize>,
}

impl Split {
    pub fn new(dims: &[usize], targets: &[usize]) -> Self {
        let total: usize = dims.iter().product();
        let local_dim: usize = targets.iter().map(|&t| dims[t]).product();
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        let rest_dim = total / local_dim;

        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let digit = |idx: usize, pos: usize| (idx / strides[pos]) % dims[pos];

        let mut table = vec![0usize; total];
        for full in 0..total {
            let local = targets.iter().fold(0, |acc, &t| acc * dims[t] + digit(full, t));
            let r = rest.iter().fold(0, |acc, &p| acc * dims[p] + digit(full, p));
            table[r * local_dim + local] = full;
        }
        Self { local_dim, rest_dim, table }
    }

    #[inline]
    pub fn full(&self, rest: usize, local: usize) -> usize {
        self.table[rest * self.local_dim + local]
    }
}
