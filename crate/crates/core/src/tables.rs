//! MAN range tables: computed step boundaries next to reference values.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{man_boundary, BoundaryFamily};
use crate::error::{Error, Result};
use crate::report::OutputTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    /// MAN against the fidelity floor.
    I,
    /// MAN against η_P at `f_l = 0.67`.
    II,
    /// MAN against η_C at `f_l = 0.67`.
    III,
}

impl TableId {
    pub const ALL: [TableId; 3] = [Self::I, Self::II, Self::III];

    pub fn family(self) -> BoundaryFamily {
        match self {
            Self::I => BoundaryFamily::FidelityFloor,
            Self::II => BoundaryFamily::PortEta,
            Self::III => BoundaryFamily::ReceiverEta,
        }
    }

    /// Reference ranges `(from, to, MAN)` as printed, four decimals.
    pub fn reference_rows(self) -> &'static [(f64, f64, usize)] {
        match self {
            Self::I => &[(0.6667, 0.6754, 3), (0.6755, 0.7222, 2), (0.7223, 0.8333, 1)],
            Self::II => &[(1.0, 0.7327, 3), (0.7326, 0.3675, 2), (0.3674, 0.1349, 1)],
            Self::III => &[(1.0, 0.7290, 3), (0.7289, 0.3115, 2), (0.3114, 0.0101, 1)],
        }
    }

    /// η tables list ranges from η = 1 downwards.
    fn descending(self) -> bool {
        self != Self::I
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
        })
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Validation(format!("unknown table {s:?}; expected I, II or III")))
    }
}

/// A computed MAN range with its reference counterpart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub from: f64,
    pub to: f64,
    pub man: usize,
    pub reference: Option<(f64, f64)>,
}

impl TableRow {
    pub fn diffs(&self) -> Option<(f64, f64)> {
        self.reference.map(|(a, b)| ((self.from - a).abs(), (self.to - b).abs()))
    }
}

/// Computed ranges with positive MAN, in the reference orientation.
pub fn table_rows(id: TableId) -> Result<Vec<TableRow>> {
    let family = id.family();
    let (lo, hi) = family.range();
    let steps = man_boundary(family)?;
    let mut edges = vec![lo];
    edges.extend(steps.iter().map(|s| s.boundary));
    edges.push(hi);
    let mut mans: Vec<usize> = steps.iter().map(|s| s.man_below).collect();
    mans.push(family.man_at(hi)?);

    let mut rows: Vec<TableRow> = edges
        .windows(2)
        .zip(mans)
        .filter(|(_, man)| *man > 0)
        .map(|(w, man)| {
            let (from, to) = if id.descending() { (w[1], w[0]) } else { (w[0], w[1]) };
            TableRow { from, to, man, reference: None }
        })
        .collect();
    if id.descending() {
        rows.reverse();
    }
    for row in &mut rows {
        row.reference = id.reference_rows().iter().find(|r| r.2 == row.man).map(|r| (r.0, r.1));
    }
    Ok(rows)
}

pub fn table_data(id: TableId) -> Result<OutputTable> {
    let mut t = OutputTable::new(["from", "to", "MAN", "reference_from", "reference_to", "diff_from", "diff_to"])
        .with_provenance(format!("tables --which {id}"));
    for row in table_rows(id)? {
        let (rf, rt) = row.reference.unzip();
        let (df, dt) = row.diffs().unzip();
        t.push_row(vec![row.from.into(), row.to.into(), row.man.into(), rf.into(), rt.into(), df.into(), dt.into()])?;
    }
    Ok(t.with_provenance("boundaries located by bisection to 1e-12"))
}
