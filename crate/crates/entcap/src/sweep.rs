//! Phase-diagram sweeps: grid specs, parallel evaluation, CSV/JSON output,
//! and the run manifest written next to every output file.

use crate::noisechan::AveragingMethod;
use crate::predicates::Classification;
use crate::scenarios::{run_scenario, ScenarioConfig, ScenarioId};
use crate::smallmat::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Hard cap on total grid points.
pub const MAX_GRID_POINTS: usize = 10_000_000;

pub const CSV_HEADER: &str = "scenario,lambda,omega_or_capital_lambda,zbar,phi,\
predicate_margin,predicate_class,min_pt_eigenvalue,negativity,initial_entropy_bits,method";

/// Parameter a sweep axis can range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisName {
    Lambda,
    Omega,
    CapitalLambda,
    Zbar,
    Phi,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::Lambda => "lambda",
            AxisName::Omega => "omega",
            AxisName::CapitalLambda => "capital-lambda",
            AxisName::Zbar => "zbar",
            AxisName::Phi => "phi",
        }
    }
}

impl std::str::FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(AxisName::Lambda),
            "omega" => Ok(AxisName::Omega),
            "capital-lambda" => Ok(AxisName::CapitalLambda),
            "zbar" => Ok(AxisName::Zbar),
            "phi" => Ok(AxisName::Phi),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

/// One inclusive sweep axis `start:stop:step`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisSpec {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisSpec {
    pub fn new(name: AxisName, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidArgument("axis bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidArgument("axis step must be > 0".into()));
        }
        if start > stop {
            return Err(Error::InvalidArgument("axis start must be <= stop".into()));
        }
        Ok(AxisSpec { name, start, stop, step })
    }

    /// Parse `name=start:stop:step`; `name=value` is a one-point axis.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected name=spec in '{s}'")))?;
        let name: AxisName = name.parse()?;
        let nums: Vec<&str> = range.split(':').collect();
        let parse = |v: &str| -> Result<f64> {
            v.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad number '{v}' in '{s}'")))
        };
        match nums.as_slice() {
            [v] => {
                let v = parse(v)?;
                AxisSpec::new(name, v, v, 1.0)
            }
            [a, b, st] => AxisSpec::new(name, parse(a)?, parse(b)?, parse(st)?),
            _ => Err(Error::InvalidArgument(format!(
                "expected name=value or name=start:stop:step in '{s}'"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        // small slack so stop lands on the grid despite rounding
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fixed (non-swept) parameter values.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FixedParams {
    pub lambda: f64,
    pub interaction_width: f64,
    /// z = cos(2 mean_theta_minus); XYZ only.
    pub zbar: f64,
    pub phi: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        FixedParams { lambda: 0.0, interaction_width: 0.0, zbar: 1.0, phi: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub scenario: ScenarioId,
    pub axes: Vec<AxisSpec>,
    pub fixed: FixedParams,
    pub method: AveragingMethod,
    pub output: PathBuf,
    pub format: OutputFormat,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(Error::InvalidArgument("need 1 to 3 sweep axes".into()));
        }
        self.method.validate()?;
        let mut points: usize = 1;
        for axis in &self.axes {
            if !self.scenario.is_xyz()
                && matches!(axis.name, AxisName::Zbar | AxisName::Phi)
            {
                return Err(Error::InvalidArgument(format!(
                    "axis '{}' only applies to xyz-tunable",
                    axis.name.as_str()
                )));
            }
            points = points.saturating_mul(axis.len());
        }
        if points > MAX_GRID_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid has {points} points, cap is {MAX_GRID_POINTS}"
            )));
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.axes.iter().map(|a| a.len()).product()
    }

    /// Axis index tuple for the k-th point, last axis fastest.
    fn indices(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (slot, axis) in idx.iter_mut().zip(&self.axes).rev() {
            *slot = k % axis.len();
            k /= axis.len();
        }
        idx
    }

    /// Resolved configuration and parameter values of the k-th grid point.
    pub fn point_config(&self, k: usize) -> Result<(ScenarioConfig, FixedParams)> {
        let mut p = self.fixed;
        for (axis, i) in self.axes.iter().zip(self.indices(k)) {
            let v = axis.value(i);
            match axis.name {
                AxisName::Lambda => p.lambda = v,
                AxisName::Omega | AxisName::CapitalLambda => p.interaction_width = v,
                AxisName::Zbar => p.zbar = v,
                AxisName::Phi => p.phi = v,
            }
        }
        let mut cfg = ScenarioConfig::new(self.scenario, p.lambda, p.interaction_width)?
            .with_method(self.method);
        if self.scenario.is_xyz() {
            if !(-1.0..=1.0).contains(&p.zbar) {
                return Err(Error::InvalidArgument(format!("zbar {} outside [-1,1]", p.zbar)));
            }
            cfg = cfg.with_theta_minus(0.5 * p.zbar.acos())?.with_phi(p.phi)?;
        }
        Ok((cfg, p))
    }
}

/// One evaluated grid point, in CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub scenario: String,
    pub lambda: f64,
    pub omega_or_capital_lambda: f64,
    pub zbar: f64,
    pub phi: f64,
    pub predicate_margin: f64,
    pub predicate_class: Classification,
    pub min_pt_eigenvalue: f64,
    pub negativity: f64,
    pub initial_entropy_bits: f64,
    pub method: String,
}

/// 12 significant digits; NaN renders as the empty field.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.11e}")
    }
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            format_float(self.lambda),
            format_float(self.omega_or_capital_lambda),
            format_float(self.zbar),
            format_float(self.phi),
            format_float(self.predicate_margin),
            self.predicate_class,
            format_float(self.min_pt_eigenvalue),
            format_float(self.negativity),
            format_float(self.initial_entropy_bits),
            self.method,
        )
    }
}

/// Evaluate every grid point; rows come back in grid order.
pub fn evaluate_grid(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    (0..grid.total_points())
        .into_par_iter()
        .map(|k| {
            let (cfg, p) = grid.point_config(k)?;
            let r = run_scenario(&cfg)?;
            let xyz = grid.scenario.is_xyz();
            Ok(SweepRow {
                scenario: grid.scenario.to_string(),
                lambda: p.lambda,
                omega_or_capital_lambda: p.interaction_width,
                zbar: if xyz { p.zbar } else { f64::NAN },
                phi: if xyz { p.phi } else { f64::NAN },
                predicate_margin: r.predicate.margin,
                predicate_class: r.predicate.class,
                min_pt_eigenvalue: r.verdict.min_pt_eigenvalue,
                negativity: r.verdict.negativity,
                initial_entropy_bits: r.initial_entropy_bits,
                method: grid.method.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTimings {
    pub evaluate_ms: f64,
    pub write_ms: f64,
}

/// Provenance record emitted alongside every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub method: String,
    pub axes: Vec<AxisSpec>,
    pub fixed: FixedParams,
    pub format: OutputFormat,
    pub output: String,
    pub points: usize,
    pub workers: usize,
    pub wall_clock_ms: f64,
    pub stages: StageTimings,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    name.push_str(".manifest.json");
    output.with_file_name(name)
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub points: usize,
    pub output: PathBuf,
    pub manifest: PathBuf,
}

/// Evaluate the grid and write output plus manifest.
pub fn run_sweep(grid: &SweepGrid) -> Result<SweepSummary> {
    let start = std::time::Instant::now();
    let rows = evaluate_grid(grid)?;
    let evaluate_ms = start.elapsed().as_secs_f64() * 1e3;

    let write_start = std::time::Instant::now();
    let io_err = |e: std::io::Error| {
        Error::InvalidArgument(format!("cannot write {}: {e}", grid.output.display()))
    };
    let mut file = std::io::BufWriter::new(std::fs::File::create(&grid.output).map_err(io_err)?);
    match grid.format {
        OutputFormat::Csv => {
            writeln!(file, "{CSV_HEADER}").map_err(io_err)?;
            for row in &rows {
                writeln!(file, "{}", row.csv_line()).map_err(io_err)?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut file, &rows)
                .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
            writeln!(file).map_err(io_err)?;
        }
    }
    file.flush().map_err(io_err)?;
    let write_ms = write_start.elapsed().as_secs_f64() * 1e3;

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        scenario: grid.scenario.to_string(),
        method: grid.method.to_string(),
        axes: grid.axes.clone(),
        fixed: grid.fixed,
        format: grid.format,
        output: grid.output.display().to_string(),
        points: rows.len(),
        workers: rayon::current_num_threads(),
        wall_clock_ms: start.elapsed().as_secs_f64() * 1e3,
        stages: StageTimings { evaluate_ms, write_ms },
    };
    let mpath = manifest_path(&grid.output);
    let mfile = std::fs::File::create(&mpath).map_err(io_err)?;
    serde_json::to_writer_pretty(mfile, &manifest)
        .map_err(|e| Error::InvalidArgument(format!("manifest serialization failed: {e}")))?;

    Ok(SweepSummary { points: rows.len(), output: grid.output.clone(), manifest: mpath })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(name: AxisName, start: f64, stop: f64, step: f64) -> AxisSpec {
        AxisSpec::new(name, start, stop, step).unwrap()
    }

    fn ising_grid(axes: Vec<AxisSpec>, out: PathBuf) -> SweepGrid {
        SweepGrid {
            scenario: ScenarioId::IsingTunable,
            axes,
            fixed: FixedParams::default(),
            method: AveragingMethod::ClosedForm,
            output: out,
            format: OutputFormat::Csv,
        }
    }

    #[test]
    fn axis_parse_and_len() {
        let a = AxisSpec::parse("lambda=0:3:0.02").unwrap();
        assert_eq!(a.name, AxisName::Lambda);
        assert_eq!(a.len(), 151);
        assert!((a.value(150) - 3.0).abs() < 1e-12);

        let single = AxisSpec::parse("omega=1.5").unwrap();
        assert_eq!(single.len(), 1);
        assert!((single.value(0) - 1.5).abs() < 1e-15);

        assert!(AxisSpec::parse("lambda=3:0:0.1").is_err());
        assert!(AxisSpec::parse("lambda=0:3:0").is_err());
        assert!(AxisSpec::parse("widgets=0:1:0.5").is_err());
        assert!(AxisSpec::parse("lambda").is_err());
        assert!(AxisSpec::parse("lambda=a:b:c").is_err());
    }

    #[test]
    fn grid_guard() {
        let g = ising_grid(
            vec![
                axis(AxisName::Lambda, 0.0, 10.0, 1e-5),
                axis(AxisName::Omega, 0.0, 10.0, 1e-3),
            ],
            PathBuf::from("unused.csv"),
        );
        assert!(g.validate().is_err());
    }

    #[test]
    fn xyz_axes_rejected_for_ising() {
        let g = ising_grid(
            vec![axis(AxisName::Zbar, 0.0, 1.0, 0.5)],
            PathBuf::from("unused.csv"),
        );
        assert!(g.validate().is_err());
    }

    #[test]
    fn float_rendering() {
        assert_eq!(format_float(f64::NAN), "");
        let s = format_float(1.0 / 3.0);
        assert_eq!(s, "3.33333333333e-1");
        assert_eq!(format_float(0.0), "0.00000000000e0");
    }

    #[test]
    fn rows_in_grid_order() {
        let g = ising_grid(
            vec![
                axis(AxisName::Lambda, 0.0, 1.0, 0.5),
                axis(AxisName::Omega, 0.0, 1.0, 1.0),
            ],
            PathBuf::from("unused.csv"),
        );
        let rows = evaluate_grid(&g).unwrap();
        assert_eq!(rows.len(), 6);
        let expect = [
            (0.0, 0.0),
            (0.0, 1.0),
            (0.5, 0.0),
            (0.5, 1.0),
            (1.0, 0.0),
            (1.0, 1.0),
        ];
        for (row, (l, w)) in rows.iter().zip(expect) {
            assert!((row.lambda - l).abs() < 1e-12);
            assert!((row.omega_or_capital_lambda - w).abs() < 1e-12);
            assert!(row.zbar.is_nan());
            assert!(row.phi.is_nan());
        }
    }

    #[test]
    fn csv_and_manifest_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sweep.csv");
        let g = ising_grid(vec![axis(AxisName::Lambda, 0.0, 0.2, 0.1)], out.clone());
        let summary = run_sweep(&g).unwrap();
        assert_eq!(summary.points, 3);

        let text = std::fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 11);
        assert_eq!(first[0], "ising-tunable");
        assert_eq!(first[3], "");
        assert_eq!(first[6], "entangled");
        assert_eq!(first[10], "closed-form");

        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&summary.manifest).unwrap()).unwrap();
        assert_eq!(manifest["points"], 3);
        assert_eq!(manifest["scenario"], "ising-tunable");
        assert!(manifest["workers"].as_u64().unwrap() >= 1);
    }

    #[test]
    fn xyz_grid_carries_zbar_phi() {
        let dir = tempfile::tempdir().unwrap();
        let g = SweepGrid {
            scenario: ScenarioId::XyzTunable,
            axes: vec![axis(AxisName::Zbar, -1.0, 1.0, 1.0)],
            fixed: FixedParams { lambda: 0.5, interaction_width: 0.3, zbar: 1.0, phi: 0.7 },
            method: AveragingMethod::ClosedForm,
            output: dir.path().join("xyz.csv"),
            format: OutputFormat::Csv,
        };
        let rows = evaluate_grid(&g).unwrap();
        assert_eq!(rows.len(), 3);
        for (row, z) in rows.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((row.zbar - z).abs() < 1e-12);
            assert!((row.phi - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn determinism_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut outs = Vec::new();
        for name in ["a.csv", "b.csv"] {
            let g = ising_grid(
                vec![
                    axis(AxisName::Lambda, 0.0, 2.0, 0.25),
                    axis(AxisName::Omega, 0.0, 2.0, 0.25),
                ],
                dir.path().join(name),
            );
            run_sweep(&g).unwrap();
            outs.push(std::fs::read_to_string(dir.path().join(name)).unwrap());
        }
        assert_eq!(outs[0], outs[1]);
    }

    #[test]
    fn single_point_grid() {
        let g = ising_grid(
            vec![axis(AxisName::Lambda, 0.7, 0.7, 1.0)],
            PathBuf::from("unused.csv"),
        );
        let rows = evaluate_grid(&g).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].lambda - 0.7).abs() < 1e-12);
    }
}
