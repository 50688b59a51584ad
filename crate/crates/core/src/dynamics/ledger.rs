use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One ledger sample. `mean` is the box average of `ω` (proportional to
/// `∫ω dx`), `energy` is `‖u‖_{L²}` and `holder` is the grid seminorm `[ω]_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub mean: f64,
    pub energy: f64,
    pub holder: f64,
}

impl LedgerRow {
    fn values(&self) -> [f64; 7] {
        [self.t, self.l1, self.l2, self.linf, self.mean, self.energy, self.holder]
    }
}

/// Time series of conserved and propagated quantities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConservationLedger {
    rows: Vec<LedgerRow>,
}

pub const LEDGER_HEADER: &str = "t,l1,l2,linf,mean,energy,holder";

impl ConservationLedger {
    /// Appends a row; times must increase strictly and all entries be finite.
    pub fn push(&mut self, row: LedgerRow) -> Result<()> {
        if row.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowup { t: row.t });
        }
        if let Some(last) = self.rows.last() {
            if row.t <= last.t {
                return Err(Error::InvalidParameter(format!(
                    "ledger time {} not after {}",
                    row.t, last.t
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[LedgerRow] {
        &self.rows
    }

    /// `max_t |q(t) − q(0)| / max(|q(0)|, floor)` for a selected column.
    pub fn max_relative_drift(&self, column: impl Fn(&LedgerRow) -> f64, floor: f64) -> f64 {
        let Some(first) = self.rows.first() else {
            return 0.0;
        };
        let q0 = column(first);
        let scale = q0.abs().max(floor);
        self.rows
            .iter()
            .map(|r| (column(r) - q0).abs() / scale)
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{LEDGER_HEADER}")?;
        for r in &self.rows {
            let line: Vec<String> = r.values().iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}
