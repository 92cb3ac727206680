//! Relative efficiency of kriging to cokriging on the interleaved design:
//! exact finite-n ratios, the asymptotic limit 1 - r²/2, and the parameter
//! sweep behind the efficiency figure.

use std::io::{BufRead, BufReader, Read, Write};

use rayon::prelude::*;

use crate::covariance::BivariateModel;
use crate::design::interleaved_design;
use crate::error::{Error, Result};
use crate::predictor::{cokrige, krige};

/// One grid point of the efficiency study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyRecord {
    /// Half-count of the dense grid (Y2 has 2n sites, Y1 has n).
    pub n: usize,
    pub alpha: f64,
    pub r: f64,
    /// Exact kriging prediction variance.
    pub krig_var: f64,
    /// Exact cokriging prediction variance.
    pub cokrig_var: f64,
    /// cokrig_var / krig_var, in (0, 1].
    pub rel_eff: f64,
    /// The limit 1 - r²/2.
    pub asymptote: f64,
}

/// The asymptotic relative efficiency `1 - r²/2` for `|r| <= 1`.
///
/// Unlike the finite-n solves this is defined at r = ±1 as well: that extreme
/// case is handled analytically (the ratio is exactly 1/2), while the joint
/// covariance would be singular.
pub fn asymptotic_efficiency(r: f64) -> f64 {
    debug_assert!(r.abs() <= 1.0, "correlation must satisfy |r| <= 1");
    1.0 - r * r / 2.0
}

/// Exact relative efficiency at one grid point, from dense kriging and
/// cokriging solves on the interleaved design. The ratio is invariant to
/// rescaling of either marginal variance.
pub fn relative_efficiency(
    n: usize,
    alpha: f64,
    r: f64,
    sigma11: f64,
    sigma22: f64,
) -> Result<EfficiencyRecord> {
    let design = interleaved_design(n)?;
    let model = BivariateModel::exponential(sigma11, sigma22, r, alpha)?;
    let krig_var = krige(&design, &model)?.variance();
    let cokrig_var = cokrige(&design, &model)?.variance();
    Ok(EfficiencyRecord {
        n,
        alpha,
        r,
        krig_var,
        cokrig_var,
        rel_eff: cokrig_var / krig_var,
        asymptote: asymptotic_efficiency(r),
    })
}

/// Evaluates the Cartesian grid `ns x alphas x rs` and returns the records
/// sorted by (r, alpha, n). Grid points are independent and evaluated in
/// parallel; the output order does not depend on the schedule. Any failing
/// point aborts the sweep with its coordinates.
pub fn sweep(
    ns: &[usize],
    alphas: &[f64],
    rs: &[f64],
    sigma11: f64,
    sigma22: f64,
) -> Result<Vec<EfficiencyRecord>> {
    for &r in rs {
        if !(r.is_finite() && r.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sweep requires |r| < 1 (the joint covariance is singular at r = ±1), got {r}"
            )));
        }
    }
    for &alpha in alphas {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sweep requires alpha > 0, got {alpha}"
            )));
        }
    }
    for &n in ns {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "sweep requires even n >= 2, got {n}"
            )));
        }
    }

    let mut grid: Vec<(f64, f64, usize)> = Vec::new();
    let mut rs_sorted = rs.to_vec();
    let mut alphas_sorted = alphas.to_vec();
    let mut ns_sorted = ns.to_vec();
    rs_sorted.sort_by(|a, b| a.total_cmp(b));
    rs_sorted.dedup();
    alphas_sorted.sort_by(|a, b| a.total_cmp(b));
    alphas_sorted.dedup();
    ns_sorted.sort_unstable();
    ns_sorted.dedup();
    for &r in &rs_sorted {
        for &alpha in &alphas_sorted {
            for &n in &ns_sorted {
                grid.push((r, alpha, n));
            }
        }
    }

    grid.par_iter()
        .map(|&(r, alpha, n)| {
            relative_efficiency(n, alpha, r, sigma11, sigma22).map_err(|e| Error::SweepPoint {
                n,
                alpha,
                r,
                source: Box::new(e),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "n,alpha,r,krig_var,cokrig_var,rel_eff,asymptote";

/// Writes the sweep CSV: the fixed header, one row per record, floating
/// values with 17 significant digits, LF line endings.
pub fn write_csv<W: Write>(records: &[EfficiencyRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for rec in records {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            rec.n, rec.alpha, rec.r, rec.krig_var, rec.cokrig_var, rec.rel_eff, rec.asymptote
        )?;
    }
    Ok(())
}

/// Parses a sweep CSV, reporting the 1-based line number of any malformed
/// content.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<EfficiencyRecord>> {
    let reader = BufReader::new(input);
    let mut records = Vec::new();
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::CsvFormat {
        line: 1,
        message: "empty file".into(),
    })?;
    let header = header.map_err(|e| Error::CsvFormat {
        line: 1,
        message: e.to_string(),
    })?;
    if header.trim_end() != CSV_HEADER {
        return Err(Error::CsvFormat {
            line: 1,
            message: format!("expected header `{CSV_HEADER}`, got `{header}`"),
        });
    }

    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::CsvFormat {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 7 {
            return Err(Error::CsvFormat {
                line: line_no,
                message: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let n: usize = fields[0].parse().map_err(|e| Error::CsvFormat {
            line: line_no,
            message: format!("bad n `{}`: {e}", fields[0]),
        })?;
        let mut values = [0.0f64; 6];
        for (slot, field) in values.iter_mut().zip(&fields[1..]) {
            *slot = field.parse().map_err(|e| Error::CsvFormat {
                line: line_no,
                message: format!("bad float `{field}`: {e}"),
            })?;
        }
        records.push(EfficiencyRecord {
            n,
            alpha: values[0],
            r: values[1],
            krig_var: values[2],
            cokrig_var: values[3],
            rel_eff: values[4],
            asymptote: values[5],
        });
    }
    Ok(records)
}
