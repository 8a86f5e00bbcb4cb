//! Scenario configuration: a flat `key = value` document, optionally overlaid by
//! command-line flags, resolved into a fully defaulted [`ScenarioConfig`].
//!
//! ```text
//! scenario = "evolve"
//! j = 4
//! point = "P1"
//! kicks = 100
//! p = "pi/2"
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spintangle::spin_algebra::{BlochAngles, Spin};

use crate::error::{CliError, CliResult};

/// Largest `j` a scan preset accepts without `allow_large_j`.
pub const SCAN_J_LIMIT: f64 = 200.0;

const DEFAULT_KAPPA: f64 = 3.0;
const DEFAULT_P: f64 = PI / 2.0;
const DEFAULT_GRID: (usize, usize) = (32, 32);
const DEFAULT_OVERLAP_THRESHOLD: f64 = 1e-10;
const DEFAULT_MAX_PERIOD: usize = 64;
const SCAN_PHI_THETA: f64 = 2.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Evolve,
    PhasePortrait,
    ScanKappa,
    ScanPhi,
    OverlapCriterion,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Evolve => "evolve",
            Scenario::PhasePortrait => "phase-portrait",
            Scenario::ScanKappa => "scan-kappa",
            Scenario::ScanPhi => "scan-phi",
            Scenario::OverlapCriterion => "overlap-criterion",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Named initial conditions, as `(θ, φ)` in radians.
pub fn named_point(name: &str) -> Option<(f64, f64)> {
    match name.to_ascii_uppercase().as_str() {
        "P1" => Some((2.1, 0.9)),
        "P2" => Some((1.5, 1.5)),
        "P3" => Some((2.25, 0.75)),
        "FP1" => Some((PI / 2.0, PI / 2.0)),
        "P4" => Some((PI / 2.0, 0.0)),
        _ => None,
    }
}

/// A number written either literally or as text such as `pi/2`, `-3pi/4` or `5/2`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn angle(&self, key: &str) -> CliResult<f64> {
        let value = match self {
            Scalar::Number(x) => *x,
            Scalar::Text(s) => parse_angle(s).ok_or_else(|| {
                CliError::config(format!("{key}: cannot parse `{s}` as a number"))
            })?,
        };
        if !value.is_finite() {
            return Err(CliError::config(format!("{key}: value must be finite")));
        }
        Ok(value)
    }

    fn spin(&self, key: &str) -> CliResult<Spin> {
        let parsed = match self {
            Scalar::Number(x) => Spin::new(*x),
            Scalar::Text(s) => s.parse::<Spin>(),
        };
        parsed.map_err(|e| CliError::config(format!("{key}: {e}")))
    }
}

/// Parses decimal radians or multiples of pi: `pi`, `-pi`, `pi/2`, `3pi/4`, `0.5*pi`.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t: String = text
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().ok();
    };
    let (head, tail) = (&t[..at], &t[at + 2..]);
    let coeff = match head.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    let divisor = match tail {
        "" => 1.0,
        d => d.strip_prefix('/')?.parse::<f64>().ok()?,
    };
    if divisor == 0.0 {
        return None;
    }
    Some(coeff * PI / divisor)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Partitions {
    List(Vec<i64>),
    Text(String),
}

impl Partitions {
    fn values(&self) -> CliResult<Vec<i64>> {
        match self {
            Partitions::List(v) => Ok(v.clone()),
            Partitions::Text(s) => s
                .split(',')
                .map(|part| {
                    part.trim().parse::<i64>().map_err(|_| {
                        CliError::config(format!("partitions: `{}` is not an integer", part.trim()))
                    })
                })
                .collect(),
        }
    }
}

/// Unresolved configuration as written in a file or given on the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub scenario: Option<Scenario>,
    pub j: Option<Scalar>,
    pub kappa: Option<Scalar>,
    pub p: Option<Scalar>,
    pub theta: Option<Scalar>,
    pub phi: Option<Scalar>,
    pub point: Option<String>,
    pub kicks: Option<i64>,
    pub partitions: Option<Partitions>,
    pub scan_min: Option<Scalar>,
    pub scan_max: Option<Scalar>,
    pub scan_step: Option<Scalar>,
    pub grid: Option<String>,
    pub threshold: Option<f64>,
    pub max_period: Option<i64>,
    pub allow_large_j: Option<bool>,
    pub plot: Option<bool>,
    pub out: Option<PathBuf>,
    pub workers: Option<i64>,
}

impl RawConfig {
    pub fn from_text(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message();
            match e.span() {
                Some(span) => {
                    let line = text[..span.start].matches('\n').count() + 1;
                    let at = text[span].lines().next().unwrap_or("").trim();
                    CliError::config(format!("{msg} at line {line} (`{at}`)"))
                }
                None => CliError::config(msg),
            }
        })
    }

    /// Values set in `top` win. Setting a named point on top hides angles below it and vice versa.
    pub fn overlay(self, top: RawConfig) -> RawConfig {
        let angles_on_top = top.theta.is_some() || top.phi.is_some();
        let (point, theta, phi) = if top.point.is_some() {
            (top.point, None, None)
        } else if angles_on_top {
            (None, top.theta.or(self.theta), top.phi.or(self.phi))
        } else {
            (self.point, self.theta, self.phi)
        };
        RawConfig {
            scenario: top.scenario.or(self.scenario),
            j: top.j.or(self.j),
            kappa: top.kappa.or(self.kappa),
            p: top.p.or(self.p),
            theta,
            phi,
            point,
            kicks: top.kicks.or(self.kicks),
            partitions: top.partitions.or(self.partitions),
            scan_min: top.scan_min.or(self.scan_min),
            scan_max: top.scan_max.or(self.scan_max),
            scan_step: top.scan_step.or(self.scan_step),
            grid: top.grid.or(self.grid),
            threshold: top.threshold.or(self.threshold),
            max_period: top.max_period.or(self.max_period),
            allow_large_j: top.allow_large_j.or(self.allow_large_j),
            plot: top.plot.or(self.plot),
            out: top.out.or(self.out),
            workers: top.workers.or(self.workers),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialCondition {
    /// Name of the preset point, if one was used.
    pub label: Option<String>,
    pub theta: f64,
    pub phi: f64,
}

impl InitialCondition {
    pub fn angles(&self) -> BlochAngles {
        BlochAngles::new(self.theta, self.phi).expect("validated at resolution")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    Kappa,
    Phi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRange {
    pub axis: ScanAxis,
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ScanRange {
    /// Grid values. `kappa` ranges include `max`; `phi` ranges are half-open so that
    /// a full turn does not sample the same angle twice.
    pub fn values(&self) -> Vec<f64> {
        let span = (self.max - self.min) / self.step;
        let count = match self.axis {
            ScanAxis::Kappa => (span + 1e-9).floor() as usize + 1,
            ScanAxis::Phi => (span - 1e-9).ceil().max(1.0) as usize,
        };
        (0..count)
            .map(|i| self.min + i as f64 * self.step)
            .collect()
    }
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Spin quantum number; for `overlap-criterion` the top of the `j` sweep.
    pub j: Option<f64>,
    pub kappa: f64,
    pub p: f64,
    pub start: Option<InitialCondition>,
    pub kicks: usize,
    pub partitions: Vec<usize>,
    pub scan: Option<ScanRange>,
    pub grid: Option<(usize, usize)>,
    pub threshold: f64,
    pub max_period: usize,
    pub allow_large_j: bool,
    pub plot: bool,
    pub out: PathBuf,
    pub workers: usize,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn spin(&self) -> Option<Spin> {
        self.j
            .map(|j| Spin::new(j).expect("validated at resolution"))
    }
}

/// Parses a config document and resolves it with the defaults for its scenario.
pub fn parse_config(text: &str) -> CliResult<ScenarioConfig> {
    resolve(RawConfig::from_text(text)?)
}

fn positive_count(value: i64, key: &str) -> CliResult<usize> {
    if value < 1 {
        return Err(CliError::config(format!(
            "{key}: must be at least 1, got {value}"
        )));
    }
    Ok(value as usize)
}

fn parse_grid(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::config(format!("grid: expected `<n_theta>x<n_phi>`, got `{text}`"));
    let (a, b) = text.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let n_theta = a.trim().parse::<usize>().map_err(|_| bad())?;
    let n_phi = b.trim().parse::<usize>().map_err(|_| bad())?;
    if n_theta == 0 || n_phi == 0 {
        return Err(bad());
    }
    Ok((n_theta, n_phi))
}

fn resolve_start(
    raw: &RawConfig,
    default_point: Option<&str>,
) -> CliResult<Option<InitialCondition>> {
    if let Some(name) = &raw.point {
        if raw.theta.is_some() || raw.phi.is_some() {
            return Err(CliError::config("point: cannot be combined with theta/phi"));
        }
        let (theta, phi) = named_point(name)
            .ok_or_else(|| CliError::config(format!("point: unknown point `{name}`")))?;
        return Ok(Some(InitialCondition {
            label: Some(name.to_ascii_uppercase()),
            theta,
            phi,
        }));
    }
    match (&raw.theta, &raw.phi) {
        (Some(t), Some(f)) => {
            let theta = t.angle("theta")?;
            let phi = f.angle("phi")?;
            let angles = BlochAngles::new(theta, phi)
                .map_err(|e| CliError::config(format!("theta: {e}")))?;
            Ok(Some(InitialCondition {
                label: None,
                theta: angles.theta(),
                phi: angles.phi(),
            }))
        }
        (Some(_), None) => Err(CliError::config("phi: required when theta is given")),
        (None, Some(_)) => Err(CliError::config("theta: required when phi is given")),
        (None, None) => match default_point {
            Some(name) => {
                let (theta, phi) = named_point(name).expect("built-in point");
                Ok(Some(InitialCondition {
                    label: Some(name.to_string()),
                    theta,
                    phi,
                }))
            }
            None => Ok(None),
        },
    }
}

fn resolve_scan(
    raw: &RawConfig,
    axis: ScanAxis,
    defaults: (f64, f64, f64),
) -> CliResult<ScanRange> {
    let min = raw
        .scan_min
        .as_ref()
        .map(|s| s.angle("scan_min"))
        .transpose()?
        .unwrap_or(defaults.0);
    let max = raw
        .scan_max
        .as_ref()
        .map(|s| s.angle("scan_max"))
        .transpose()?
        .unwrap_or(defaults.1);
    let step = raw
        .scan_step
        .as_ref()
        .map(|s| s.angle("scan_step"))
        .transpose()?
        .unwrap_or(defaults.2);
    if step <= 0.0 {
        return Err(CliError::config(format!(
            "scan_step: must be positive, got {step}"
        )));
    }
    if max < min || (axis == ScanAxis::Phi && max == min) {
        return Err(CliError::config(format!(
            "scan_max: range [{min}, {max}] is empty"
        )));
    }
    Ok(ScanRange {
        axis,
        min,
        max,
        step,
    })
}

/// Applies scenario defaults and validates every field.
pub fn resolve(raw: RawConfig) -> CliResult<ScenarioConfig> {
    let scenario = raw
        .scenario
        .ok_or_else(|| CliError::config("scenario: missing required field"))?;
    let mut warnings = Vec::new();

    let spin = match (&raw.j, scenario) {
        (Some(j), _) => Some(j.spin("j")?),
        (None, Scenario::OverlapCriterion) => Some(Spin::from_twice(100).expect("valid")),
        (None, Scenario::PhasePortrait) => None,
        (None, _) => return Err(CliError::config("j: missing required field")),
    };
    let kappa = raw
        .kappa
        .as_ref()
        .map(|s| s.angle("kappa"))
        .transpose()?
        .unwrap_or(DEFAULT_KAPPA);
    let p = raw
        .p
        .as_ref()
        .map(|s| s.angle("p"))
        .transpose()?
        .unwrap_or(DEFAULT_P);

    let default_point = match scenario {
        Scenario::ScanKappa => Some("FP1"),
        Scenario::OverlapCriterion => Some("P4"),
        _ => None,
    };
    let start = match scenario {
        Scenario::ScanPhi => {
            if raw.phi.is_some() {
                return Err(CliError::config(
                    "phi: is the scan axis for scan-phi; use scan_min/scan_max",
                ));
            }
            let theta = match (&raw.point, &raw.theta) {
                (Some(_), Some(_)) => {
                    return Err(CliError::config("point: cannot be combined with theta/phi"))
                }
                (Some(name), None) => {
                    named_point(name)
                        .ok_or_else(|| CliError::config(format!("point: unknown point `{name}`")))?
                        .0
                }
                (None, Some(t)) => t.angle("theta")?,
                (None, None) => SCAN_PHI_THETA,
            };
            BlochAngles::new(theta, 0.0).map_err(|e| CliError::config(format!("theta: {e}")))?;
            Some(InitialCondition {
                label: None,
                theta,
                phi: 0.0,
            })
        }
        _ => resolve_start(&raw, default_point)?,
    };
    if scenario == Scenario::Evolve && start.is_none() {
        return Err(CliError::config(
            "point: missing required field (or give theta and phi)",
        ));
    }
    if scenario == Scenario::PhasePortrait && raw.grid.is_some() && start.is_some() {
        return Err(CliError::config(
            "grid: cannot be combined with a single initial condition",
        ));
    }

    let default_kicks = match scenario {
        Scenario::Evolve => 500,
        Scenario::PhasePortrait => 200,
        Scenario::ScanKappa | Scenario::ScanPhi => 5000,
        Scenario::OverlapCriterion => 1,
    };
    let kicks = raw
        .kicks
        .map(|k| positive_count(k, "kicks"))
        .transpose()?
        .unwrap_or(default_kicks);

    let partitions = match &raw.partitions {
        Some(parts) => parts.values()?,
        None if scenario == Scenario::Evolve => vec![1, 2],
        None => vec![2],
    };
    let partitions = match (scenario, spin) {
        (Scenario::Evolve | Scenario::ScanKappa | Scenario::ScanPhi, Some(spin)) => {
            if partitions.is_empty() {
                return Err(CliError::config("partitions: list is empty"));
            }
            let n = spin.qubits() as i64;
            let mut out = Vec::with_capacity(partitions.len());
            for q in partitions {
                if q < 1 || q > n - 1 {
                    return Err(CliError::config(format!(
                        "partitions: q = {q} is outside 1..={} for j = {spin}",
                        n - 1
                    )));
                }
                out.push(q as usize);
            }
            if scenario != Scenario::Evolve && out.len() != 1 {
                return Err(CliError::config(
                    "partitions: scans take exactly one partition",
                ));
            }
            out
        }
        _ => Vec::new(),
    };

    let scan = match scenario {
        Scenario::ScanKappa => Some(resolve_scan(&raw, ScanAxis::Kappa, (0.5, 4.0, 0.05))?),
        Scenario::ScanPhi => Some(resolve_scan(&raw, ScanAxis::Phi, (-PI, PI, 0.01))?),
        _ => None,
    };

    let allow_large_j = raw.allow_large_j.unwrap_or(false);
    if let (Scenario::ScanKappa | Scenario::ScanPhi, Some(spin)) = (scenario, spin) {
        if spin.j() > SCAN_J_LIMIT {
            if !allow_large_j {
                return Err(CliError::config(format!(
                    "j: {spin} exceeds {SCAN_J_LIMIT} for a scan; set allow_large_j to run it anyway"
                )));
            }
            warnings.push(format!(
                "j = {spin} scan: each point evolves a {}-dimensional state",
                spin.dim()
            ));
        }
    }

    let grid = match scenario {
        Scenario::PhasePortrait if start.is_none() => Some(
            raw.grid
                .as_deref()
                .map(parse_grid)
                .transpose()?
                .unwrap_or(DEFAULT_GRID),
        ),
        _ => None,
    };

    let threshold = raw.threshold.unwrap_or(DEFAULT_OVERLAP_THRESHOLD);
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(CliError::config(format!(
            "threshold: must be positive, got {threshold}"
        )));
    }
    let max_period = raw
        .max_period
        .map(|m| positive_count(m, "max_period"))
        .transpose()?
        .unwrap_or(DEFAULT_MAX_PERIOD);
    let workers = match raw.workers {
        Some(w) => positive_count(w, "workers")?,
        None => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    };
    let out = raw
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{scenario}.csv")));

    Ok(ScenarioConfig {
        scenario,
        j: spin.map(Spin::j),
        kappa,
        p,
        start,
        kicks,
        partitions,
        scan,
        grid,
        threshold,
        max_period,
        allow_large_j,
        plot: raw.plot.unwrap_or(false),
        out,
        workers,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        parse_config(text).unwrap_err().to_string()
    }

    #[test]
    fn minimal_evolve_gets_defaults() {
        let cfg =
            parse_config("scenario = \"evolve\"\nj = 4\npoint = \"P1\"\nkicks = 100\n").unwrap();
        assert_eq!(cfg.scenario, Scenario::Evolve);
        assert_eq!(cfg.j, Some(4.0));
        assert_eq!(cfg.kappa, 3.0);
        assert_eq!(cfg.p, PI / 2.0);
        assert_eq!(cfg.kicks, 100);
        assert_eq!(cfg.partitions, vec![1, 2]);
        let start = cfg.start.unwrap();
        assert_eq!((start.theta, start.phi), (2.1, 0.9));
        assert_eq!(start.label.as_deref(), Some("P1"));
    }

    #[test]
    fn named_points() {
        assert_eq!(named_point("P2"), Some((1.5, 1.5)));
        assert_eq!(named_point("p3"), Some((2.25, 0.75)));
        assert_eq!(named_point("FP1"), Some((PI / 2.0, PI / 2.0)));
        assert_eq!(named_point("P9"), None);
    }

    #[test]
    fn rejects_bad_values_naming_the_key() {
        assert!(err("scenario = \"evolve\"\nj = 4\npoint = \"P9\"").contains("point"));
        assert!(err("scenario = \"evolve\"\nj = 4\npoint = \"P1\"\nkicks = 0").contains("kicks"));
        assert!(err("scenario = \"evolve\"\nj = 4\npoint = \"P1\"\nspeed = 3").contains("speed"));
        assert!(err("scenario = \"evolve\"\npoint = \"P1\"").contains("j"));
        assert!(err("scenario = \"evolve\"\nj = 4").contains("point"));
        assert!(err("scenario = \"evolve\"\nj = 4.3\npoint = \"P1\"").contains("j"));
        assert!(
            err("scenario = \"evolve\"\nj = 2\npoint = \"P1\"\npartitions = [4]")
                .contains("partitions")
        );
        assert!(err("scenario = \"evolve\"\nj = 2\ntheta = 4\nphi = 0").contains("theta"));
        assert!(err("scenario = \"evolve\"\nj = 2\npoint = \"P1\"\nj = 3")
            .contains("duplicate key at line 4 (`j`)"));
        assert!(
            err("scenario = \"scan-kappa\"\nj = 4\nscan_min = 2\nscan_max = 1")
                .contains("scan_max")
        );
        assert!(err("scenario = \"scan-kappa\"\nj = 4\nscan_step = 0").contains("scan_step"));
        assert!(err("scenario = \"scan-kappa\"\nj = 4\npartitions = [1, 2]").contains("partitions"));
        assert!(err("j = 4").contains("scenario"));
    }

    #[test]
    fn angle_tokens() {
        assert_eq!(parse_angle("pi/2"), Some(PI / 2.0));
        assert_eq!(parse_angle("-pi"), Some(-PI));
        assert_eq!(parse_angle("3pi/4"), Some(0.75 * PI));
        assert_eq!(parse_angle("0.5*pi"), Some(0.5 * PI));
        assert_eq!(parse_angle("1.25"), Some(1.25));
        assert_eq!(parse_angle("pi/0"), None);
        assert_eq!(parse_angle("tau"), None);
        let cfg = parse_config(
            "scenario = \"evolve\"\nj = \"5/2\"\ntheta = \"pi/2\"\nphi = -1\np = \"pi/4\"",
        )
        .unwrap();
        assert_eq!(cfg.j, Some(2.5));
        assert_eq!(cfg.p, PI / 4.0);
        assert_eq!(cfg.start.unwrap().theta, PI / 2.0);
    }

    #[test]
    fn scan_presets() {
        let cfg = parse_config("scenario = \"scan-kappa\"\nj = 10").unwrap();
        let scan = cfg.scan.clone().unwrap();
        assert_eq!((scan.min, scan.max, scan.step), (0.5, 4.0, 0.05));
        assert_eq!(scan.values().len(), 71);
        assert_eq!(cfg.kicks, 5000);
        assert_eq!(cfg.partitions, vec![2]);
        assert_eq!(cfg.start.unwrap().label.as_deref(), Some("FP1"));

        let cfg = parse_config("scenario = \"scan-phi\"\nj = 10").unwrap();
        let values = cfg.scan.unwrap().values();
        assert_eq!(values.len(), 629);
        assert_eq!(values[0], -PI);
        assert!(*values.last().unwrap() < PI);
        assert_eq!(cfg.start.unwrap().theta, 2.25);
    }

    #[test]
    fn large_j_scan_needs_opt_in() {
        assert!(err("scenario = \"scan-phi\"\nj = 500").contains("allow_large_j"));
        let cfg = parse_config("scenario = \"scan-phi\"\nj = 500\nallow_large_j = true").unwrap();
        assert_eq!(cfg.warnings.len(), 1);
        assert!(
            parse_config("scenario = \"evolve\"\nj = 500\npoint = \"P1\"")
                .unwrap()
                .warnings
                .is_empty()
        );
    }

    #[test]
    fn overlay_prefers_top_and_swaps_start() {
        let base = RawConfig::from_text("scenario = \"evolve\"\nj = 4\npoint = \"P1\"\nkicks = 10")
            .unwrap();
        let top = RawConfig {
            theta: Some(Scalar::Text("pi/2".into())),
            phi: Some(Scalar::Number(0.0)),
            kicks: Some(20),
            ..RawConfig::default()
        };
        let cfg = resolve(base.overlay(top)).unwrap();
        assert_eq!(cfg.kicks, 20);
        let start = cfg.start.unwrap();
        assert_eq!((start.label, start.theta, start.phi), (None, PI / 2.0, 0.0));
    }

    #[test]
    fn portrait_grid_and_overlap_defaults() {
        let cfg = parse_config("scenario = \"phase-portrait\"").unwrap();
        assert_eq!(cfg.grid, Some((32, 32)));
        assert_eq!(cfg.kicks, 200);
        let cfg = parse_config("scenario = \"phase-portrait\"\ngrid = \"4x8\"\nkicks = 3").unwrap();
        assert_eq!(cfg.grid, Some((4, 8)));
        assert!(err("scenario = \"phase-portrait\"\ngrid = \"4by8\"").contains("grid"));

        let cfg = parse_config("scenario = \"overlap-criterion\"").unwrap();
        assert_eq!(cfg.j, Some(50.0));
        assert_eq!(cfg.threshold, 1e-10);
        assert_eq!(cfg.start.unwrap().label.as_deref(), Some("P4"));
    }
}
