//! Scenario records: basis, Meixner parameters, energy-scale rule, series
//! length, grid and levels. Built-in presets `fig1`..`fig4` plus a small
//! TOML file format with one section per basis.

use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::bases::BasisFamily;
use crate::error::{Error, Result};
use crate::hamiltonian::EnergyScale;
use crate::meixner::{self, MeixnerParams};
use crate::reconstruct::{self, Column};
use crate::states::MAX_LEVEL;

pub const PRESETS: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];
pub const DEFAULT_GRID_POINTS: usize = 1000;

/// How `c` in `H = c Sigma` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum CRule {
    /// `c = (pi/a)^2`, box bases.
    PiOverASquared,
    /// `c = V0`, Hermite line.
    V0,
    /// `c = lambda^2`, Hermite line or radial basis.
    LambdaSquared,
    Explicit { c: f64 },
}

impl CRule {
    fn parse(name: &str, c: Option<f64>) -> Result<Self> {
        match (name, c) {
            ("pi-over-a-squared", None) => Ok(CRule::PiOverASquared),
            ("v0" | "V0", None) => Ok(CRule::V0),
            ("lambda-squared", None) => Ok(CRule::LambdaSquared),
            ("explicit", Some(c)) => Ok(CRule::Explicit { c }),
            ("explicit", None) => Err(Error::Scenario("c_rule = \"explicit\" needs a value for c".into())),
            (_, Some(_)) => Err(Error::Scenario("c is only allowed with c_rule = \"explicit\"".into())),
            (other, None) => Err(Error::Scenario(format!("unknown c_rule {other:?}"))),
        }
    }

    /// The scale `c` for `basis`, or an error if the rule does not apply to it.
    pub fn resolve(&self, basis: &BasisFamily) -> Result<EnergyScale> {
        let c = match (*self, *basis) {
            (CRule::Explicit { c }, _) => c,
            (CRule::PiOverASquared, BasisFamily::SineBox { a })
            | (CRule::PiOverASquared, BasisFamily::GegenbauerBox { a, .. }) => (PI / a).powi(2),
            (CRule::V0, BasisFamily::HermiteLine { v0, .. }) => v0,
            (CRule::LambdaSquared, BasisFamily::HermiteLine { lambda, .. })
            | (CRule::LambdaSquared, BasisFamily::LaguerreRadial { lambda, .. }) => lambda * lambda,
            (rule, b) => {
                return Err(Error::Scenario(format!(
                    "energy-scale rule {rule:?} does not apply to the {} basis",
                    b.name()
                )))
            }
        };
        EnergyScale::new(c)
    }
}

/// `lo:hi:points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        reconstruct::linspace(self.lo, self.hi, self.points)
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("grid must be lo:hi:points, got {s:?}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let points: usize = parts[2].parse().map_err(|_| bad())?;
        reconstruct::linspace(lo, hi, points)?;
        Ok(Grid { lo, hi, points })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub basis: BasisFamily,
    pub mu: f64,
    pub theta: f64,
    pub c_rule: CRule,
    pub terms: usize,
    pub grid: Grid,
    pub levels: Vec<usize>,
    pub column: Column,
}

impl Scenario {
    pub fn preset(name: &str) -> Result<Self> {
        let levels = vec![0, 1, 2, 3];
        let grid = |lo, hi| Grid {
            lo,
            hi,
            points: DEFAULT_GRID_POINTS,
        };
        let sc = match name {
            "fig1" => Scenario {
                name: name.into(),
                basis: BasisFamily::sine_box(1.0)?,
                mu: 1.2,
                theta: 0.7,
                c_rule: CRule::PiOverASquared,
                terms: 20,
                grid: grid(0.05, 0.95),
                levels,
                column: Column::Index(0),
            },
            "fig2" => Scenario {
                name: name.into(),
                basis: BasisFamily::gegenbauer_box(1.0, 5.0)?,
                mu: 2.5,
                theta: 1.0,
                c_rule: CRule::PiOverASquared,
                terms: 20,
                grid: grid(-0.45, 0.45),
                levels,
                column: Column::Index(0),
            },
            "fig3" => Scenario {
                name: name.into(),
                basis: BasisFamily::hermite_line(1.0)?,
                mu: 1.5,
                theta: 0.5,
                c_rule: CRule::V0,
                terms: 30,
                grid: grid(-4.0, 10.0),
                levels,
                column: Column::Index(0),
            },
            "fig4" => Scenario {
                name: name.into(),
                basis: BasisFamily::laguerre_radial(1.0, 1)?,
                mu: 0.7,
                theta: 0.5,
                c_rule: CRule::LambdaSquared,
                terms: 40,
                grid: grid(0.05, 20.0),
                levels,
                column: Column::Index(0),
            },
            other => {
                return Err(Error::Scenario(format!(
                    "unknown preset {other:?}; expected one of {}",
                    PRESETS.join(", ")
                )))
            }
        };
        sc.validate()?;
        Ok(sc)
    }

    /// A preset name or a path to a scenario file.
    pub fn load(spec: &str) -> Result<Self> {
        if PRESETS.contains(&spec) {
            return Self::preset(spec);
        }
        let path = Path::new(spec);
        if !path.exists() {
            return Err(Error::Scenario(format!(
                "{spec:?} is neither a preset ({}) nor an existing file",
                PRESETS.join(", ")
            )));
        }
        let text = std::fs::read_to_string(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::from_toml_str(&text, stem)
    }

    /// Parses the scenario file format; `default_name` is used when the file
    /// has no `name` key.
    pub fn from_toml_str(text: &str, default_name: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Scenario(format!("scenario file: {}", e.message())))?;
        let mut basis = None;
        for (key, value) in &table {
            let Some(section) = value.as_table() else {
                continue;
            };
            if basis.is_some() {
                return Err(Error::Scenario("scenario file must contain exactly one basis section".into()));
            }
            let get = |k: &str| -> Result<f64> {
                section
                    .get(k)
                    .and_then(number)
                    .ok_or_else(|| Error::Scenario(format!("[{key}] needs a numeric `{k}`")))
            };
            basis = Some(match key.as_str() {
                "sine-box" => BasisFamily::sine_box(get("a")?)?,
                "gegenbauer-box" => BasisFamily::gegenbauer_box(get("a")?, get("v0")?)?,
                "hermite-line" => BasisFamily::hermite_line(get("v0")?)?,
                "laguerre-radial" => {
                    let ell = section
                        .get("ell")
                        .and_then(|v| v.as_integer())
                        .filter(|l| *l >= 0)
                        .ok_or_else(|| Error::Scenario("[laguerre-radial] needs an integer `ell` >= 0".into()))?;
                    let ell = u32::try_from(ell)
                        .map_err(|_| Error::Scenario(format!("ell = {ell} is too large")))?;
                    BasisFamily::laguerre_radial(get("lambda")?, ell)?
                }
                other => return Err(Error::Scenario(format!("unknown basis section [{other}]"))),
            });
        }
        let basis = basis.ok_or_else(|| Error::Scenario("scenario file has no basis section".into()))?;

        let known = ["name", "mu", "theta", "c_rule", "c", "terms", "grid", "levels", "column"];
        if let Some(k) = table
            .iter()
            .find(|(k, v)| !v.is_table() && !known.contains(&k.as_str()))
            .map(|(k, _)| k)
        {
            return Err(Error::Scenario(format!("unknown key `{k}`")));
        }
        let num = |k: &str| -> Result<f64> {
            table
                .get(k)
                .and_then(number)
                .ok_or_else(|| Error::Scenario(format!("scenario needs a numeric `{k}`")))
        };
        let c_rule = match table.get("c_rule") {
            Some(v) => {
                let name = v
                    .as_str()
                    .ok_or_else(|| Error::Scenario("`c_rule` must be a string".into()))?;
                let c = match table.get("c") {
                    Some(c) => Some(number(c).ok_or_else(|| Error::Scenario("`c` must be a number".into()))?),
                    None => None,
                };
                CRule::parse(name, c)?
            }
            None => default_rule(&basis),
        };
        let terms = match table.get("terms") {
            Some(v) => v
                .as_integer()
                .and_then(|t| usize::try_from(t).ok())
                .ok_or_else(|| Error::Scenario("`terms` must be a positive integer".into()))?,
            None => return Err(Error::Scenario("scenario needs `terms`".into())),
        };
        let grid = match table.get("grid") {
            Some(v) => v
                .as_str()
                .ok_or_else(|| Error::Scenario("`grid` must be a \"lo:hi:points\" string".into()))?
                .parse()?,
            None => {
                let (lo, hi) = reconstruct::interior_range(&basis, terms);
                Grid {
                    lo,
                    hi,
                    points: DEFAULT_GRID_POINTS,
                }
            }
        };
        let levels = match table.get("levels") {
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::Scenario("`levels` must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_integer()
                        .and_then(|k| usize::try_from(k).ok())
                        .ok_or_else(|| Error::Scenario("`levels` must hold nonnegative integers".into()))
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![0, 1, 2, 3],
        };
        let column = match table.get("column") {
            None => Column::Index(0),
            Some(toml::Value::String(s)) => s.parse()?,
            Some(toml::Value::Integer(i)) => Column::Index(
                usize::try_from(*i).map_err(|_| Error::Scenario("`column` must be >= 0".into()))?,
            ),
            Some(_) => return Err(Error::Scenario("`column` must be an index or \"auto\"".into())),
        };
        let name = match table.get("name") {
            Some(v) => v
                .as_str()
                .ok_or_else(|| Error::Scenario("`name` must be a string".into()))?
                .to_string(),
            None => default_name.to_string(),
        };
        let sc = Scenario {
            name,
            basis,
            mu: num("mu")?,
            theta: num("theta")?,
            c_rule,
            terms,
            grid,
            levels,
            column,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn params(&self) -> Result<MeixnerParams> {
        MeixnerParams::new(self.mu, self.theta)
    }

    pub fn scale(&self) -> Result<EnergyScale> {
        self.c_rule.resolve(&self.basis)
    }

    pub fn validate(&self) -> Result<()> {
        self.basis.validate()?;
        self.params()?;
        self.scale()?;
        if self.terms < 2 || self.terms > meixner::MAX_INDEX + 1 {
            return Err(Error::InvalidParameter(format!(
                "terms must lie in 2..={}, got {}",
                meixner::MAX_INDEX + 1,
                self.terms
            )));
        }
        let d = self.basis.domain();
        if !(self.grid.lo > d.lo && self.grid.hi < d.hi) {
            return Err(Error::InvalidParameter(format!(
                "grid {}:{} must lie inside the open {} domain ({}, {})",
                self.grid.lo,
                self.grid.hi,
                self.basis.name(),
                d.lo,
                d.hi
            )));
        }
        self.grid.points()?;
        if self.levels.is_empty() {
            return Err(Error::InvalidParameter("levels must not be empty".into()));
        }
        if let Some(k) = self.levels.iter().find(|&&k| k > MAX_LEVEL) {
            return Err(Error::InvalidParameter(format!("level {k} exceeds {MAX_LEVEL}")));
        }
        if let Column::Index(i) = self.column {
            if i >= self.terms {
                return Err(Error::InvalidParameter(format!(
                    "column {i} out of range for {} terms",
                    self.terms
                )));
            }
        }
        Ok(())
    }
}

fn number(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

fn default_rule(basis: &BasisFamily) -> CRule {
    match basis {
        BasisFamily::SineBox { .. } | BasisFamily::GegenbauerBox { .. } => CRule::PiOverASquared,
        BasisFamily::HermiteLine { .. } => CRule::V0,
        BasisFamily::LaguerreRadial { .. } => CRule::LambdaSquared,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            let sc = Scenario::preset(name).unwrap();
            assert_eq!(sc.name, name);
        }
        assert!(Scenario::preset("fig5").is_err());
    }

    #[test]
    fn preset_scales() {
        let c = |n| Scenario::preset(n).unwrap().scale().unwrap().value();
        assert_eq!(c("fig1"), PI * PI);
        assert_eq!(c("fig2"), PI * PI);
        assert_eq!(c("fig3"), 1.0);
        assert_eq!(c("fig4"), 1.0);
    }

    #[test]
    fn rule_must_match_basis() {
        let f = BasisFamily::sine_box(1.0).unwrap();
        assert!(CRule::V0.resolve(&f).is_err());
        assert!(CRule::LambdaSquared.resolve(&f).is_err());
        assert_eq!(CRule::Explicit { c: 2.0 }.resolve(&f).unwrap().value(), 2.0);
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.1:0.9:5".parse().unwrap();
        assert_eq!(g.points().unwrap().len(), 5);
        assert!("0.1:0.9".parse::<Grid>().is_err());
        assert!("0.9:0.1:5".parse::<Grid>().is_err());
    }

    #[test]
    fn toml_file() {
        let text = r#"
            name = "deep-box"
            mu = 2.5
            theta = 1.0
            terms = 24
            grid = "-0.4:0.4:500"
            levels = [0, 1]
            column = "auto"

            [gegenbauer-box]
            a = 1.0
            v0 = 5
        "#;
        let sc = Scenario::from_toml_str(text, "x").unwrap();
        assert_eq!(sc.name, "deep-box");
        assert_eq!(sc.c_rule, CRule::PiOverASquared);
        assert_eq!(sc.column, Column::Auto);
        assert_eq!(sc.levels, vec![0, 1]);
        assert!(matches!(sc.basis, BasisFamily::GegenbauerBox { .. }));
    }

    #[test]
    fn toml_errors() {
        let base = "mu = 1.0\ntheta = 0.5\nterms = 10\n";
        assert!(Scenario::from_toml_str(base, "x").is_err());
        let two = format!("{base}[sine-box]\na = 1\n[hermite-line]\nv0 = 1\n");
        assert!(Scenario::from_toml_str(&two, "x").is_err());
        let bad_rule = format!("{base}c_rule = \"v0\"\n[sine-box]\na = 1\n");
        assert!(Scenario::from_toml_str(&bad_rule, "x").is_err());
        let unknown = format!("{base}colour = 1\n[sine-box]\na = 1\n");
        assert!(Scenario::from_toml_str(&unknown, "x").is_err());
        let neg_theta = "mu = 1.0\ntheta = -1\nterms = 10\n[sine-box]\na = 1\n";
        assert!(Scenario::from_toml_str(neg_theta, "x").is_err());
        let ok = format!("{base}c_rule = \"explicit\"\nc = 3.5\n[laguerre-radial]\nlambda = 2\nell = 0\n");
        let sc = Scenario::from_toml_str(&ok, "x").unwrap();
        assert_eq!(sc.scale().unwrap().value(), 3.5);
        assert_eq!(sc.grid.lo, 0.025);
    }
}
