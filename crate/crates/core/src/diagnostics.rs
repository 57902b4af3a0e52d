use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Conserved quantity and constraint defects at one time. Residuals are RMS
/// over the box so they compare directly with the pointwise mean defect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// Charge `Q` for Dirac matter, energy `E` for Higgs matter.
    pub conserved: f64,
    pub gauge_res: f64,
    pub f01_res: f64,
    pub f02_res: f64,
    pub f12_res: f64,
    pub mean_defect: f64,
}

/// Writes the diagnostics table; `conserved_label` is `Q` or `E`.
pub fn write_csv<W: Write>(
    mut w: W,
    conserved_label: &str,
    rows: &[DiagnosticsRecord],
) -> Result<()> {
    writeln!(
        w,
        "t,{conserved_label},gauge_res,F01_res,F02_res,F12_res,mean_defect"
    )?;
    for r in rows {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            r.t, r.conserved, r.gauge_res, r.f01_res, r.f02_res, r.f12_res, r.mean_defect
        )?;
    }
    Ok(())
}

/// Largest relative deviation of the conserved quantity from its first value.
pub fn conservation_drift(rows: &[DiagnosticsRecord]) -> f64 {
    let Some(first) = rows.first() else {
        return 0.0;
    };
    rows.iter()
        .map(|r| ((r.conserved - first.conserved) / first.conserved).abs())
        .fold(0.0, f64::max)
}
