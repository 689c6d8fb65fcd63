//! Studies built on the predictor and the integrator: the analytic/numeric
//! rupture-time table, parameter sweeps, the validity region, tube sections
//! and time series.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::{self, Polyline, Window};
use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig, Stats, Termination};
use crate::invariant::{drift, eval_sampled, eval_sampled_continuous, eval_secular, k_constant};
use crate::model::SystemParams;
use crate::rupture::{n_crit_closed, predict, tau_rupt_closed, validity_check};

pub const TABLE1_EPS: [f64; 5] = [0.025, 0.05, 0.10, 0.15, 0.20];
pub const TABLE1_Y0: f64 = 1.0;
pub const TABLE1_Z0: f64 = 0.2;
/// Numeric runs stop at this multiple of the analytic rupture time.
pub const CENSOR_FACTOR: f64 = 1.5;
pub const SECTION_RESOLUTION: usize = 800;
pub const SECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        Range { lo, hi, count }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count < 2 || !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidParams(format!(
                "{name} range needs lo < hi and count >= 2, got {}:{}:{}",
                self.lo, self.hi, self.count
            )));
        }
        Ok(())
    }

    /// Evenly spaced points including both ends.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub y0: f64,
    pub eps_range: Range,
    pub z0_range: Range,
    #[serde(default)]
    pub with_numeric: bool,
    #[serde(default)]
    pub tau_cap: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.y0.is_finite() && self.y0 > 0.0) {
            return Err(Error::InvalidParams(format!("y0 must be > 0, got {}", self.y0)));
        }
        self.eps_range.validate("eps")?;
        self.z0_range.validate("z0")?;
        if self.with_numeric && !(self.tau_cap.is_finite() && self.tau_cap > 0.0) {
            return Err(Error::InvalidParams("tau_cap must be > 0 with numeric runs".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub eps: f64,
    pub tau_analytic: f64,
    pub tau_numeric: Option<f64>,
    pub rel_dev: Option<f64>,
    pub censored: bool,
    pub termination: Termination,
}

/// Analytic and numeric rupture times for each `ε`, in input order. Runs that
/// do not blow up before `1.5·τ_analytic` are censored.
pub fn table1(y0: f64, z0: f64, eps_list: &[f64], config: &IntegratorConfig) -> Result<Vec<Table1Row>> {
    config.validate()?;
    let v = validity_check(y0, z0);
    if !v.inside {
        return Err(Error::InvalidParams(format!(
            "(y0, z0) = ({y0}, {z0}) is outside the validity region (y0 (y0 - C^(1/3)) = {})",
            v.value
        )));
    }
    eps_list
        .par_iter()
        .map(|&eps| {
            let params = SystemParams::new(y0, eps, z0)?;
            let tau_analytic = tau_rupt_closed(&params)?;
            let traj = integrate(&params, config, CENSOR_FACTOR * tau_analytic)?;
            let (tau_numeric, censored) = match traj.termination {
                Termination::BlowUp(t) => (Some(t), false),
                Termination::ReachedEnd => (None, true),
                _ => (None, false),
            };
            Ok(Table1Row {
                eps,
                tau_analytic,
                tau_numeric,
                rel_dev: tau_numeric.map(|t| (t - tau_analytic) / tau_analytic),
                censored,
                termination: traj.termination,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub eps: f64,
    pub z0: f64,
    pub n_crit: Option<f64>,
    pub valid: bool,
    pub error: Option<String>,
    pub tau_numeric: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDiagnostics {
    /// Largest relative spread of `n_crit·ε²` along any `z0` column.
    pub eps_scaling_spread: f64,
    /// Adjacent pairs along an `ε` row where `n_crit` fails to decrease in `z0`.
    pub z0_monotonicity_violations: usize,
    pub failed_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuptureSurface {
    pub spec: SweepSpec,
    /// Row-major: `ε` outer, `z0` inner.
    pub cells: Vec<SurfaceCell>,
    pub diagnostics: SurfaceDiagnostics,
}

pub fn rupture_surface(spec: &SweepSpec, config: &IntegratorConfig) -> Result<RuptureSurface> {
    spec.validate()?;
    if spec.with_numeric {
        config.validate()?;
    }
    let eps_pts = spec.eps_range.points();
    let z0_pts = spec.z0_range.points();
    let nz = z0_pts.len();
    let cells: Vec<SurfaceCell> = (0..eps_pts.len() * nz)
        .into_par_iter()
        .map(|k| {
            let (eps, z0) = (eps_pts[k / nz], z0_pts[k % nz]);
            let valid = validity_check(spec.y0, z0).inside;
            let params = SystemParams::new(spec.y0, eps, z0);
            let n_crit = params.as_ref().map_err(|e| e.kind()).and_then(|p| n_crit_closed(p).map_err(|e| e.kind()));
            let tau_numeric = match (&params, spec.with_numeric) {
                (Ok(p), true) => integrate(p, config, spec.tau_cap).ok().and_then(|t| match t.termination {
                    Termination::BlowUp(tau) => Some(tau),
                    _ => None,
                }),
                _ => None,
            };
            SurfaceCell {
                eps,
                z0,
                n_crit: n_crit.ok(),
                valid,
                error: n_crit.err().map(str::to_owned),
                tau_numeric,
            }
        })
        .collect();

    let mut spread = 0.0f64;
    for j in 0..nz {
        let scaled: Vec<f64> = (0..eps_pts.len())
            .filter_map(|i| cells[i * nz + j].n_crit.map(|n| n * eps_pts[i] * eps_pts[i]))
            .collect();
        if let Some(&first) = scaled.first() {
            for s in &scaled {
                spread = spread.max(((s - first) / first).abs());
            }
        }
    }
    let mut violations = 0;
    for i in 0..eps_pts.len() {
        for j in 1..nz {
            if let (Some(a), Some(b)) = (cells[i * nz + j - 1].n_crit, cells[i * nz + j].n_crit) {
                if !(b < a) {
                    violations += 1;
                }
            }
        }
    }
    let failed_cells = cells.iter().filter(|c| c.n_crit.is_none()).count();
    Ok(RuptureSurface {
        spec: *spec,
        cells,
        diagnostics: SurfaceDiagnostics {
            eps_scaling_spread: spread,
            z0_monotonicity_violations: violations,
            failed_cells,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityCell {
    pub y0: f64,
    pub z0: f64,
    pub inside: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityRaster {
    /// Row-major: `y0` outer, `z0` inner.
    pub cells: Vec<ValidityCell>,
    /// Polylines in `(y0, z0)` along `y0 (y0 − C^{1/3}) = 1`.
    pub boundary: Vec<Polyline>,
    pub reference: ValidityCell,
}

pub const VALIDITY_REFERENCE: (f64, f64) = (1.0, 0.25);

/// Rasterize the validity region on `resolution × resolution` points and trace
/// its boundary over the same window.
pub fn validity_raster(y0_range: (f64, f64), z0_range: (f64, f64), resolution: usize) -> Result<ValidityRaster> {
    let yr = Range::new(y0_range.0, y0_range.1, resolution);
    let zr = Range::new(z0_range.0, z0_range.1, resolution);
    yr.validate("y0")?;
    zr.validate("z0")?;
    if !(y0_range.0 > 0.0 && z0_range.0 > 0.0) {
        return Err(Error::InvalidParams("validity ranges must be positive".into()));
    }
    let cell = |y0: f64, z0: f64| {
        let v = validity_check(y0, z0);
        ValidityCell { y0, z0, inside: v.inside, value: v.value }
    };
    let zs = zr.points();
    let cells = yr
        .points()
        .into_iter()
        .flat_map(|y0| zs.iter().map(move |&z0| cell(y0, z0)))
        .collect();
    let win = Window { x_min: y0_range.0, x_max: y0_range.1, y_min: z0_range.0, y_max: z0_range.1 };
    let boundary = contour::trace(|y0, z0| validity_check(y0, z0).value - 1.0, win, resolution - 1, 1e-12);
    let (ry, rz) = VALIDITY_REFERENCE;
    Ok(ValidityRaster { cells, boundary, reference: cell(ry, rz) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionCurve {
    pub n: i64,
    pub k_ref: f64,
    pub polylines: Vec<Polyline>,
}

impl SectionCurve {
    pub fn is_open(&self) -> bool {
        self.polylines.iter().any(|p| !p.closed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionOptions {
    pub resolution: usize,
    /// Half-width `L` of the window `[−L, L]²`; sized from `r*` and `|z0|` when absent.
    pub half_width: Option<f64>,
    pub tol: f64,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions { resolution: SECTION_RESOLUTION, half_width: None, tol: SECTION_TOL }
    }
}

/// `3·max(r*, |z0|)`, or `3|z0|` when no rupture is predicted.
pub fn section_half_width(params: &SystemParams) -> f64 {
    let r = predict(params).map_or(0.0, |r| r.r_star);
    3.0 * r.max(params.z0.abs())
}

/// Level set `I_s(z, p, n) = K` for each `n`, keeping the component through
/// the initial point `(z0, 0)`, which lies on every section.
pub fn tube_sections(params: &SystemParams, n_list: &[i64], opts: &SectionOptions) -> Result<Vec<SectionCurve>> {
    params.validate()?;
    let k_ref = k_constant(params)?;
    let half = opts.half_width.unwrap_or_else(|| section_half_width(params));
    if !(half.is_finite() && half > 0.0) || opts.resolution < 2 {
        return Err(Error::InvalidParams(format!(
            "section window half-width {half} and resolution {} are not usable",
            opts.resolution
        )));
    }
    let SystemParams { y0, eps, z0, .. } = *params;
    n_list
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let f = |z: f64, p: f64| eval_sampled_continuous(z, p, nf, y0, eps) - k_ref;
            let lines = contour::trace(f, Window::square(half), opts.resolution, 0.01 * opts.tol);
            let best = lines
                .into_iter()
                .map(|l| (l.min_distance_to(z0, 0.0), l))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .ok_or(Error::EmptySection(n))?;
            Ok(SectionCurve { n, k_ref, polylines: vec![best.1] })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionTransition {
    pub last_closed: i64,
    pub first_open: i64,
    pub n_crit_closed: f64,
}

/// Smallest sample index whose section through `(z0, 0)` is open, by integer
/// bisection between `0` and `2·n_crit`.
pub fn section_transition(params: &SystemParams, opts: &SectionOptions) -> Result<SectionTransition> {
    let n_crit = n_crit_closed(params)?;
    let opts = SectionOptions { half_width: Some(opts.half_width.unwrap_or_else(|| section_half_width(params))), ..*opts };
    let open = |n: i64| -> Result<bool> { Ok(tube_sections(params, &[n], &opts)?[0].is_open()) };
    let (mut lo, mut hi) = (0i64, (2.0 * n_crit).ceil() as i64);
    if open(lo)? || !open(hi)? {
        return Err(Error::InvalidParams(format!("no closed-to-open transition within n in [{lo}, {hi}]")));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if open(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SectionTransition { last_closed: lo, first_open: hi, n_crit_closed: n_crit })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Grid,
    Dense,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Grid => "grid",
            RecordKind::Dense => "dense",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub tau: f64,
    pub z: f64,
    pub p: f64,
    pub y: f64,
    /// Sampled invariant drift on grid rows, secular invariant drift on dense rows.
    pub drift: f64,
    pub kind: RecordKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub records: Vec<SeriesRecord>,
    pub termination: Termination,
    pub tau_numeric: Option<f64>,
    pub k_ref: f64,
    pub stats: Stats,
    pub max_abs_grid_drift: f64,
}

/// Integrate to `tau_end` and emit every grid sample plus every `stride`-th
/// accepted step, ordered by `τ` (grid row first on ties).
pub fn simulate(params: &SystemParams, config: &IntegratorConfig, tau_end: f64, stride: usize) -> Result<SimulationRun> {
    if stride == 0 {
        return Err(Error::InvalidConfig("stride must be >= 1".into()));
    }
    let k_ref = k_constant(params)?;
    let cfg = IntegratorConfig { record_dense: true, ..*config };
    let traj = integrate(params, &cfg, tau_end)?;
    let SystemParams { y0, eps, .. } = *params;

    let grid: Vec<SeriesRecord> = traj
        .samples
        .iter()
        .map(|s| {
            let st = s.state;
            let i = eval_sampled(st.z, st.p, s.n, y0, eps);
            SeriesRecord { tau: st.tau, z: st.z, p: st.p, y: st.y, drift: drift(i, k_ref), kind: RecordKind::Grid }
        })
        .collect();
    let dense: Vec<SeriesRecord> = traj
        .dense
        .as_deref()
        .unwrap_or_default()
        .iter()
        .step_by(stride)
        .map(|st| {
            let i = eval_secular(st.z, st.p, st.tau, y0, eps);
            SeriesRecord { tau: st.tau, z: st.z, p: st.p, y: st.y, drift: drift(i, k_ref), kind: RecordKind::Dense }
        })
        .collect();

    let max_abs_grid_drift = grid.iter().map(|r| r.drift.abs()).fold(0.0, f64::max);
    let mut records = Vec::with_capacity(grid.len() + dense.len());
    let (mut gi, mut di) = (0, 0);
    while gi < grid.len() || di < dense.len() {
        let take_grid = di >= dense.len() || (gi < grid.len() && grid[gi].tau <= dense[di].tau);
        if take_grid {
            records.push(grid[gi]);
            gi += 1;
        } else {
            records.push(dense[di]);
            di += 1;
        }
    }
    Ok(SimulationRun {
        records,
        termination: traj.termination,
        tau_numeric: match traj.termination {
            Termination::BlowUp(t) => Some(t),
            _ => None,
        },
        k_ref,
        stats: traj.stats,
        max_abs_grid_drift,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub records: Vec<SeriesRecord>,
    pub termination: Termination,
    pub accepted_steps: u64,
}

/// Every `stride`-th accepted step up to `tau_cap` or divergence.
pub fn timeseries_export(
    params: &SystemParams,
    config: &IntegratorConfig,
    tau_cap: f64,
    stride: usize,
) -> Result<TimeSeries> {
    let run = simulate(params, config, tau_cap, stride)?;
    Ok(TimeSeries {
        records: run.records.into_iter().filter(|r| r.kind == RecordKind::Dense).collect(),
        termination: run.termination,
        accepted_steps: run.stats.accepted,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub parameters: serde_json::Value,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_owned(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            parameters,
            config,
            outputs: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn finish(mut self, started: Instant, outputs: Vec<String>) -> Self {
        self.wall_time_s = started.elapsed().as_secs_f64();
        self.outputs = outputs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::eval_sampled_continuous;

    fn base() -> SystemParams {
        SystemParams::new(1.0, 0.05, 0.2).unwrap()
    }

    #[test]
    fn range_points() {
        let r = Range::new(0.025, 0.1, 4).points();
        assert_eq!(r.len(), 4);
        assert_eq!(r[0], 0.025);
        assert_eq!(r[3], 0.1);
        assert!(Range::new(1.0, 0.0, 3).validate("x").is_err());
        assert!(Range::new(0.0, 1.0, 1).validate("x").is_err());
    }

    #[test]
    fn surface_matches_scalar_calls() {
        let spec = SweepSpec {
            y0: 1.0,
            eps_range: Range::new(0.025, 0.1, 5),
            z0_range: Range::new(0.1, 0.4, 6),
            with_numeric: false,
            tau_cap: 0.0,
        };
        let s = rupture_surface(&spec, &IntegratorConfig::default()).unwrap();
        assert_eq!(s.cells.len(), 30);
        let corner = &s.cells[0];
        assert_eq!((corner.eps, corner.z0), (0.025, 0.1));
        let scalar = n_crit_closed(&SystemParams::new(1.0, 0.025, 0.1).unwrap()).unwrap();
        assert_eq!(corner.n_crit.unwrap().to_bits(), scalar.to_bits());
        for c in &s.cells {
            let p = SystemParams::new(1.0, c.eps, c.z0).unwrap();
            assert_eq!(c.n_crit.unwrap().to_bits(), n_crit_closed(&p).unwrap().to_bits());
        }
        assert!(s.diagnostics.eps_scaling_spread < 1e-12);
        assert_eq!(s.diagnostics.z0_monotonicity_violations, 0);
        assert_eq!(s.diagnostics.failed_cells, 0);
    }

    #[test]
    fn surface_cells_fail_soft() {
        let spec = SweepSpec {
            y0: 1.0,
            eps_range: Range::new(0.0, 0.1, 2),
            z0_range: Range::new(0.2, 0.9, 2),
            with_numeric: false,
            tau_cap: 0.0,
        };
        let s = rupture_surface(&spec, &IntegratorConfig::default()).unwrap();
        assert_eq!(s.cells[0].error.as_deref(), Some("ZeroForcing"));
        assert_eq!(s.cells[3].error.as_deref(), Some("NoRealExtremum"));
        assert!(s.cells[2].n_crit.is_some());
        assert_eq!(s.diagnostics.failed_cells, 3);
    }

    #[test]
    fn sweep_spec_validation() {
        let spec = SweepSpec {
            y0: 1.0,
            eps_range: Range::new(0.025, 0.1, 3),
            z0_range: Range::new(0.1, 0.4, 3),
            with_numeric: true,
            tau_cap: 0.0,
        };
        assert!(spec.validate().is_err());
        assert!(SweepSpec { tau_cap: 10.0, ..spec }.validate().is_ok());
    }

    #[test]
    fn validity_raster_reference_and_boundary() {
        let r = validity_raster((0.5, 2.0), (0.01, 0.5), 61).unwrap();
        assert_eq!(r.cells.len(), 61 * 61);
        assert!(r.reference.inside);
        assert!((1.0 - r.reference.value - 0.6025).abs() < 1e-3);
        assert!(!r.boundary.is_empty());
        for line in &r.boundary {
            for &(y0, z0) in &line.points {
                assert!((validity_check(y0, z0).value - 1.0).abs() < 1e-10);
            }
        }
        let far = r.cells.iter().find(|c| c.y0 == 2.0 && c.z0 == 0.01).unwrap();
        assert!(!far.inside);
    }

    #[test]
    fn unforced_section_is_closed_and_symmetric() {
        let p = base();
        let sec = &tube_sections(&p, &[0], &SectionOptions { resolution: 400, ..Default::default() }).unwrap()[0];
        assert_eq!(sec.polylines.len(), 1);
        let line = &sec.polylines[0];
        assert!(line.closed);
        for &(z, q) in &line.points {
            assert!((eval_sampled_continuous(z, q, 0.0, 1.0, 0.05) - sec.k_ref).abs() <= 1e-8);
            assert_eq!(eval_sampled_continuous(z, -q, 0.0, 1.0, 0.05), eval_sampled_continuous(z, q, 0.0, 1.0, 0.05));
            // mirrored vertex is on the traced curve up to grid spacing
            assert!(line.min_distance_to(z, -q) < 1e-2);
        }
        assert!(line.min_distance_to(0.2, 0.0) < 1e-2);
    }

    #[test]
    fn section_opens_after_rupture() {
        let p = base();
        let n_crit = n_crit_closed(&p).unwrap();
        let opts = SectionOptions { resolution: 400, ..Default::default() };
        let secs = tube_sections(&p, &[(0.8 * n_crit) as i64, (1.2 * n_crit) as i64], &opts).unwrap();
        assert!(!secs[0].is_open());
        assert!(secs[1].is_open());
        // the opening reaches the window edge on the z < 0 side
        let open = &secs[1].polylines[0];
        let half = section_half_width(&p);
        let ends = [open.points[0], *open.points.last().unwrap()];
        assert!(ends.iter().all(|&(z, q)| z < 0.0 || (q.abs() - half).abs() < 1e-9));
    }

    #[test]
    fn empty_section_error() {
        let p = base();
        let opts = SectionOptions { half_width: Some(1e-3), resolution: 10, ..Default::default() };
        assert!(matches!(tube_sections(&p, &[0], &opts), Err(Error::EmptySection(0))));
    }

    #[test]
    fn simulate_orders_records_and_counts_stride() {
        let p = base();
        let run = simulate(&p, &IntegratorConfig::default(), 50.0, 3).unwrap();
        assert!(run.records.windows(2).all(|w| w[0].tau <= w[1].tau));
        let grid = run.records.iter().filter(|r| r.kind == RecordKind::Grid).count();
        assert_eq!(grid, 16);
        let dense = run.records.len() - grid;
        assert_eq!(dense as u64, run.stats.accepted.div_ceil(3));
        assert_eq!(run.records[0].kind, RecordKind::Grid);
        assert_eq!(run.records[0].drift, 0.0);
    }

    #[test]
    fn unforced_timeseries_is_bounded() {
        let p = SystemParams::new(1.0, 0.0, 0.2).unwrap();
        let ts = timeseries_export(&p, &IntegratorConfig::default(), 1000.0, 1).unwrap();
        assert_eq!(ts.termination, Termination::ReachedEnd);
        assert_eq!(ts.records.len() as u64, ts.accepted_steps);
        let (first, second) = ts.records.split_at(ts.records.len() / 2);
        let max = |r: &[SeriesRecord]| r.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
        assert!((max(first) - max(second)).abs() < 1e-6);
        assert!(matches!(timeseries_export(&p, &IntegratorConfig::default(), 10.0, 0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn table1_rejects_outside_validity() {
        assert!(table1(2.0, 0.01, &[0.05], &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn table1_single_row() {
        let rows = table1(1.0, 0.2, &[0.2], &IntegratorConfig::default()).unwrap();
        let r = &rows[0];
        assert!((r.tau_analytic - 334.5).abs() < 0.1);
        assert!(!r.censored);
        let dev = r.rel_dev.unwrap();
        assert!(dev > 0.05 && dev < 0.2, "{dev}");
    }

    #[test]
    fn manifest_records_outputs() {
        let m = RunManifest::new("predict", serde_json::json!({"y0": 1.0}), serde_json::Value::Null)
            .finish(Instant::now(), vec!["out.json".into()]);
        assert_eq!(m.outputs, ["out.json"]);
        assert!(m.wall_time_s >= 0.0);
    }
}
