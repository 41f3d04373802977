use std::io::Write;

use super::curve::Curve;
use crate::error::{Error, Result};
use crate::numfmt::format_sig;

/// Writes `samples` evenly spaced points of `curve` as CSV.
///
/// Header: `t,re_0_0,re_0_1,…,im_0_0,…` (row-major real parts, then
/// imaginary parts); one row per sample.
pub fn write_curve_csv<C: Curve + ?Sized, W: Write>(out: &mut W, curve: &C, samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
    }
    let ts: Vec<f64> = (0..samples).map(|k| k as f64 / (samples - 1) as f64).collect();
    write_curve_csv_at(out, curve, &ts)
}

/// Same layout as [`write_curve_csv`] at explicit parameters in `[0, 1]`.
pub fn write_curve_csv_at<C: Curve + ?Sized, W: Write>(out: &mut W, curve: &C, ts: &[f64]) -> Result<()> {
    if let Some(t) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
    }
    let n = curve.dim();
    let io = |e: std::io::Error| Error::Format(format!("write failed: {e}"));
    let mut header = vec!["t".to_string()];
    for part in ["re", "im"] {
        for i in 0..n {
            for j in 0..n {
                header.push(format!("{part}_{i}_{j}"));
            }
        }
    }
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for &t in ts {
        let p = curve.point(t)?;
        let m = p.as_matrix();
        let mut row = vec![format_sig(t)];
        row.extend((0..n * n).map(|idx| format_sig(m[(idx / n, idx % n)].re)));
        row.extend((0..n * n).map(|idx| format_sig(m[(idx / n, idx % n)].im)));
        writeln!(out, "{}", row.join(",")).map_err(io)?;
    }
    Ok(())
}
