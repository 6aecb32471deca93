use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{OrderStudyResult, PowerLawFit, TimeErrorSeries};
use crate::error::{invalid, Error, Result};

/// What [`emit_report`] writes.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Order(&'a OrderStudyResult),
    TimeSeries(&'a TimeErrorSeries, &'a PowerLawFit),
}

/// Twelve significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    format!("{v:.11e}")
}

/// Order-study CSV: header plus one row.
pub fn write_order_csv<W: Write>(out: &mut W, r: &OrderStudyResult) -> Result<()> {
    writeln!(out, "problem,alpha,h,dt,T,norm_h_h2,norm_h2_h4,p_estimate")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        r.problem,
        format_number(r.alpha),
        format_number(r.h),
        format_number(r.dt),
        format_number(r.horizon),
        format_number(r.norm_coarse_mid),
        format_number(r.norm_mid_fine),
        format_number(r.p_estimate),
    )?;
    Ok(())
}

/// Time-series CSV: header, one row per point and a footer with the fit.
pub fn write_time_series_csv<W: Write>(out: &mut W, s: &TimeErrorSeries, fit: &PowerLawFit) -> Result<()> {
    if s.points.is_empty() {
        return Err(invalid("series", "no points to write".to_string()));
    }
    writeln!(out, "t,error,scaled_error")?;
    for p in &s.points {
        writeln!(
            out,
            "{},{},{}",
            format_number(p.t),
            format_number(p.err),
            format_number(p.scaled)
        )?;
    }
    writeln!(
        out,
        "# fit a={} s={} n={} rms={}",
        format_number(fit.a),
        format_number(fit.s),
        fit.n_points,
        format_number(fit.residual_rms)
    )?;
    Ok(())
}

/// Builds the file in memory, writes it next to `path` and renames it into
/// place, so a failure never leaves a partial file at `path`.
pub fn write_atomically(path: &Path, body: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    let tmp = temp_path(path);
    let written = fs::write(&tmp, &buf).and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = written {
        let _ = fs::remove_file(&tmp);
        return Err(Error::Io(format!("{}: {e}", path.display())));
    }
    Ok(())
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

/// Writes the report as CSV to `path`; nothing is left at `path` on failure.
pub fn emit_report(report: Report<'_>, path: impl AsRef<Path>) -> Result<()> {
    write_atomically(path.as_ref(), |buf| match report {
        Report::Order(r) => write_order_csv(buf, r),
        Report::TimeSeries(s, fit) => write_time_series_csv(buf, s, fit),
    })
}

#[cfg(test)]
mod tests {
    use super::super::TimeErrorPoint;
    use super::*;

    fn series(n: usize) -> TimeErrorSeries {
        TimeErrorSeries {
            problem: "p".into(),
            alpha: 0.5,
            p_nominal: 1.0,
            h: 0.1,
            dt: 0.01,
            points: (1..=n)
                .map(|k| TimeErrorPoint {
                    t: k as f64 * 0.01,
                    err: 1.0 / k as f64,
                    scaled: 0.5,
                })
                .collect(),
        }
    }

    fn fit() -> PowerLawFit {
        PowerLawFit {
            a: 0.01,
            s: 1.0,
            n_points: 3,
            residual_rms: 0.0,
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_number(2.0), "2.00000000000e0");
    }

    #[test]
    fn order_csv_has_header_and_one_row() {
        let r = OrderStudyResult {
            problem: "order1".into(),
            alpha: 0.5,
            h: 0.01,
            dt: 2e-3,
            horizon: 1.0,
            norm_coarse_mid: 4e-5,
            norm_mid_fine: 1e-5,
            p_estimate: 2.0,
            reliable: true,
        };
        let mut buf = Vec::new();
        write_order_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "problem,alpha,h,dt,T,norm_h_h2,norm_h2_h4,p_estimate");
        assert!(lines[1].starts_with("order1,5.00000000000e-1,"));
    }

    #[test]
    fn series_csv_rows_and_footer() {
        let mut buf = Vec::new();
        write_time_series_csv(&mut buf, &series(3), &fit()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "t,error,scaled_error");
        assert!(lines[4].starts_with("# fit a=1.00000000000e-2 s=1.00000000000e0 n=3 rms="));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn empty_series_rejected_and_nothing_written() {
        let dir = std::env::temp_dir().join(format!("subdiff-report-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        let s = series(0);
        let f = fit();
        assert!(emit_report(Report::TimeSeries(&s, &f), &path).is_err());
        assert!(!path.exists());
        let s = series(4);
        emit_report(Report::TimeSeries(&s, &f), &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 6);
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unwritable_target_surfaces_io_error() {
        let s = series(2);
        let f = fit();
        let err = emit_report(Report::TimeSeries(&s, &f), "/nonexistent-dir/x.csv").unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
