//! CSV and manifest writers. Floats carry 17 significant digits, `.` decimal
//! separator and `\n` line ends, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::experiments::{ConditionalOutcome, ExperimentReport, UnnormalizedRow};
use crate::statistics::{bin_center, ExpFitResult, BINS};

pub const HIST_HEADER: &str = "bin_center,percent";
pub const SUMMARY_HEADER: &str = "dim,field,family,gamma,target,n,m,mean,std,skewness,seed";
pub const FIT_HEADER: &str = "quantity,alpha,beta,gamma,sse,converged";
pub const UNNORMALIZED_HEADER: &str = "dim,mean,std";
pub const CONDITIONAL_HEADER: &str = "m_in,m_f,selected,std,skewness";
pub const ANALYTIC_HEADER: &str = "dim,field,analytic,quadrature";

/// Scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn histogram_csv(frequencies: &[f64; BINS]) -> String {
    let mut s = String::from(HIST_HEADER);
    s.push('\n');
    for (k, p) in frequencies.iter().enumerate() {
        let _ = writeln!(s, "{},{}", num(bin_center(k)), num(*p));
    }
    s
}

pub fn summary_row(r: &ExperimentReport) -> String {
    let c = &r.config;
    let (family, gamma, target, m) = match &c.disorder {
        Some(d) => (
            d.family.name(),
            num(d.siqr),
            d.target.name(),
            d.configs_per_state,
        ),
        None => ("none", num(0.0), "none", 0),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        c.dim,
        c.field,
        family,
        gamma,
        target,
        c.n_states,
        m,
        num(r.stats.mean),
        num(r.stats.std),
        num(r.stats.skewness),
        c.seed
    )
}

pub fn summary_csv<'a>(reports: impl IntoIterator<Item = &'a ExperimentReport>) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&summary_row(r));
        s.push('\n');
    }
    s
}

pub fn fit_csv(rows: &[(&str, Option<&ExpFitResult<f64>>)]) -> String {
    let mut s = String::from(FIT_HEADER);
    s.push('\n');
    for (name, fit) in rows {
        if let Some(f) = fit {
            let _ = writeln!(
                s,
                "{name},{},{},{},{},{}",
                num(f.alpha),
                num(f.beta),
                num(f.gamma),
                num(f.sse),
                f.converged
            );
        }
    }
    s
}

pub fn unnormalized_csv(rows: &[UnnormalizedRow]) -> String {
    let mut s = String::from(UNNORMALIZED_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.dim, num(r.mean), num(r.std));
    }
    s
}

pub fn conditional_csv(rows: &[ConditionalOutcome]) -> String {
    let mut s = String::from(CONDITIONAL_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(r.m_in),
            num(r.m_f),
            r.selected,
            num(r.stats.std),
            num(r.stats.skewness)
        );
    }
    s
}

/// Short, filesystem-safe token for a float in file names (`0.5` → `0.5`).
pub fn tag(x: f64) -> String {
    format!("{x}").replace('-', "m")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)
}

/// Parses `d,y` points from a two-column CSV; a non-numeric first line is a header.
pub fn read_points(text: &str) -> Result<Vec<(usize, f64)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = (cols.next().unwrap_or(""), cols.next().unwrap_or(""));
        match (a.parse::<usize>(), b.parse::<f64>()) {
            (Ok(d), Ok(y)) => out.push((d, y)),
            _ if i == 0 => continue,
            _ => return Err(format!("line {}: expected `d,y`, got `{line}`", i + 1)),
        }
    }
    Ok(out)
}
