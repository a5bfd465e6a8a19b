use std::path::Path;

use amhd_core::diagnostics::{fit_decay_rate, DecayFit};

use crate::Failure;

/// Parses `t0:t1`.
pub fn parse_window(text: &str) -> Result<(f64, f64), Failure> {
    let usage = || Failure::Usage(format!("window `{text}` must look like t0:t1"));
    let (a, b) = text.split_once(':').ok_or_else(usage)?;
    let t0: f64 = a.trim().parse().map_err(|_| usage())?;
    let t1: f64 = b.trim().parse().map_err(|_| usage())?;
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(Failure::Usage(format!("window [{t0}, {t1}] is empty")));
    }
    Ok((t0, t1))
}

/// Reads `(t, column)` pairs from a diagnostics CSV.
pub fn read_series(path: &Path, column: &str) -> Result<Vec<(f64, f64)>, Failure> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Failure::Usage(format!("column `{name}` not found in {}", path.display())))
    };
    let (ti, ci) = (find("t")?, find(column)?);
    let mut out = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let parse = |i: usize| -> Result<f64, Failure> {
            row.get(i)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Failure::Usage(format!("row {}: column {i} is not a number", line + 2)))
        };
        out.push((parse(ti)?, parse(ci)?));
    }
    Ok(out)
}

pub fn execute(path: &Path, column: &str, window: &str) -> Result<DecayFit, Failure> {
    let window = parse_window(window)?;
    let series = read_series(path, column)?;
    if let (Some(first), Some(last)) = (series.first(), series.last()) {
        if window.1 < first.0 || window.0 > last.0 {
            return Err(Failure::Usage(format!(
                "window [{}, {}] lies outside the data range [{}, {}]",
                window.0, window.1, first.0, last.0
            )));
        }
    }
    fit_decay_rate(&series, window).map_err(|e| Failure::Usage(e.to_string()))
}
