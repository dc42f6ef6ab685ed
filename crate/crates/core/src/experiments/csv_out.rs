use super::constants::{ConstantsReport, WindowDecayReport};
use super::convergence::ConvergenceReport;
use super::rigidity::ScalingReport;
use crate::error::{Error, Result};

/// Flat CSV rendering, one row per level.
pub trait ToCsv {
    fn to_csv(&self) -> Result<String>;
}

fn render<R: serde::Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.serialize(row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("csv: {e}")))
}

fn at(v: &[super::Indexed], n: usize) -> Option<f64> {
    v.iter().find(|e| e.n == n).map(|e| e.value)
}

impl ToCsv for ConvergenceReport {
    /// Columns `n, d_n, rate, r2`; rate and fit quality repeat on every row.
    fn to_csv(&self) -> Result<String> {
        render(
            &["n", "d_n", "rate", "r2"],
            self.distances.iter().enumerate().map(|(n, d)| (n, d, self.fitted_rate, self.fit_r2)),
        )
    }
}

impl ToCsv for ConstantsReport {
    /// Columns `n, gap_ratio, a_ratio, nl`.
    fn to_csv(&self) -> Result<String> {
        render(
            &["n", "gap_ratio", "a_ratio", "nl"],
            (0..=self.depth)
                .map(|n| (n, at(&self.delta_estimates, n), at(&self.alpha_estimates, n), at(&self.nl_track, n))),
        )
    }
}

impl ToCsv for WindowDecayReport {
    /// Columns `n, lo, hi, len, ratio`, with `ratio = |window(n)| / |window(n-1)|`.
    fn to_csv(&self) -> Result<String> {
        render(
            &["n", "lo", "hi", "len", "ratio"],
            self.windows.iter().enumerate().map(|(i, w)| {
                let ratio = if i == 0 { None } else { self.ratios.get(i - 1).copied() };
                (i + 1, w.lo, w.hi, w.len(), ratio)
            }),
        )
    }
}

impl ToCsv for ScalingReport {
    /// Columns `n, spread`.
    fn to_csv(&self) -> Result<String> {
        render(&["n", "spread"], self.per_depth.iter().map(|l| (l.depth, l.max_log_ratio_spread)))
    }
}
