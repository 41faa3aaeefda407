//! Scenario runs: spectrum, potential and wavefunction tables as CSV plus a
//! JSON manifest describing every file written.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::error::Result;
use crate::hamiltonian;
use crate::meixner::PrecisionGuard;
use crate::reconstruct::{self, SampledFunction};
use crate::scenario::Scenario;
use crate::states;
use crate::verify;

pub const MANIFEST: &str = "manifest.json";
/// Curve styles for successive levels.
pub const STYLES: [&str; 4] = ["solid", "dashed", "dashdot", "dotted"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Spectrum,
    Potential,
    States,
}

impl Output {
    pub const ALL: [Output; 3] = [Output::Spectrum, Output::Potential, Output::States];

    pub fn file_name(&self) -> &'static str {
        match self {
            Output::Spectrum => "spectrum.csv",
            Output::Potential => "potential.csv",
            Output::States => "states.csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub file: String,
    pub kind: Output,
    pub columns: Vec<&'static str>,
    pub rows: usize,
    pub terms: usize,
    pub grid: Option<crate::scenario::Grid>,
    pub flagged_points: usize,
    pub parameters: serde_json::Value,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: Scenario,
    pub energy_scale: f64,
    pub energy_levels: Vec<serde_json::Value>,
    pub files: Vec<FileEntry>,
}

/// Decimal text with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn parameters(sc: &Scenario, c: f64) -> serde_json::Value {
    json!({
        "basis": sc.basis,
        "mu": sc.mu,
        "theta": sc.theta,
        "c": c,
        "column": sc.column.to_string(),
    })
}

/// Displayed potential: reconstruction plus the basis' analytic part
/// (split-off term, or the orbital term for the radial basis).
pub fn displayed_potential(sc: &Scenario) -> Result<SampledFunction> {
    let v = verify::scenario_potential(&sc.basis, &sc.params()?, sc.scale()?, sc.terms)?;
    let mut sf = reconstruct::reconstruct_potential(&v, &sc.grid.points()?, sc.column)?;
    reconstruct::add_fixed_part(&mut sf, &sc.basis)?;
    Ok(sf)
}

/// Writes the requested tables and `manifest.json` into `out_dir`.
pub fn run_scenario(
    sc: &Scenario,
    outputs: &[Output],
    out_dir: &Path,
    guard: PrecisionGuard,
) -> Result<Manifest> {
    sc.validate()?;
    let p = sc.params()?;
    let s = sc.scale()?;
    let c = s.value();
    let top = sc.levels.iter().copied().max().unwrap_or(0);
    let levels: Vec<_> = (0..=top)
        .map(|k| json!({"k": k, "energy": hamiltonian::energy(k, &p, s)}))
        .collect();

    let mut outputs = outputs.to_vec();
    outputs.sort();
    outputs.dedup();

    // compute everything before touching the file system
    let mut tables = Vec::new();
    for out in &outputs {
        let mut csv = String::new();
        let entry = match out {
            Output::Spectrum => {
                csv.push_str("x,value\n");
                for k in 0..=top {
                    writeln!(csv, "{k},{}", fmt_num(hamiltonian::energy(k, &p, s))).unwrap();
                }
                FileEntry {
                    file: out.file_name().into(),
                    kind: *out,
                    columns: vec!["x", "value"],
                    rows: top + 1,
                    terms: sc.terms,
                    grid: None,
                    flagged_points: 0,
                    parameters: parameters(sc, c),
                    note: "x is the level k, value is E_k = c sinh(theta) (k + mu)".into(),
                }
            }
            Output::Potential => {
                let sf = displayed_potential(sc)?;
                csv.push_str("x,value\n");
                for (x, v) in sf.valid_points() {
                    writeln!(csv, "{},{}", fmt_num(x), fmt_num(v)).unwrap();
                }
                FileEntry {
                    file: out.file_name().into(),
                    kind: *out,
                    columns: vec!["x", "value"],
                    rows: sc.grid.points - sf.invalid_count(),
                    terms: sc.terms,
                    grid: Some(sc.grid),
                    flagged_points: sf.invalid_count(),
                    parameters: parameters(sc, c),
                    note: format!(
                        "reconstructed potential plus the analytic {} part; points with |phi_n| < {:e} omitted",
                        sc.basis.name(),
                        reconstruct::DENOMINATOR_THRESHOLD
                    ),
                }
            }
            Output::States => {
                let grid = sc.grid.points()?;
                csv.push_str("x,value,style\n");
                let mut styles = Vec::new();
                for (i, &k) in sc.levels.iter().enumerate() {
                    let style = STYLES[i % STYLES.len()];
                    styles.push(format!("k={k}:{style}"));
                    let st = states::build_state(k, &p, s, &sc.basis, sc.terms, guard)?;
                    let sf = states::eval_state(&st, &grid)?;
                    for (x, v) in sf.valid_points() {
                        writeln!(csv, "{},{},{style}", fmt_num(x), fmt_num(v)).unwrap();
                    }
                }
                FileEntry {
                    file: out.file_name().into(),
                    kind: *out,
                    columns: vec!["x", "value", "style"],
                    rows: grid.len() * sc.levels.len(),
                    terms: sc.terms,
                    grid: Some(sc.grid),
                    flagged_points: 0,
                    parameters: parameters(sc, c),
                    note: format!("rows grouped by level in order {}", styles.join(", ")),
                }
            }
        };
        tables.push((csv, entry));
    }

    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    for (csv, entry) in tables {
        fs::write(out_dir.join(&entry.file), csv)?;
        files.push(entry);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        scenario: sc.clone(),
        energy_scale: c,
        energy_levels: levels,
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    text.push('\n');
    fs::write(out_dir.join(MANIFEST), text)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        let x = 0.1f64 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn fig2_ground_energy_in_spectrum() {
        let sc = Scenario::preset("fig2").unwrap();
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        let m = run_scenario(&sc, &[Output::Spectrum], dir, PrecisionGuard::Strict).unwrap();
        assert_eq!(m.files.len(), 1);
        let text = fs::read_to_string(dir.join("spectrum.csv")).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        let e0: f64 = row[1].parse().unwrap();
        let expect = std::f64::consts::PI.powi(2) * 1f64.sinh() * 2.5;
        assert!(((e0 - expect) / expect).abs() < 1e-14);
    }
}
