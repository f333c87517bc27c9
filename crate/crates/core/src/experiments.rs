//! Experiment drivers behind the command-line subcommands: spectra, parameter
//! sweeps, mode rasters, counting functions, bracketing ladders and geometry
//! tables. Every driver returns plain data; CSV and JSON rendering is separate.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{assemble, nodal_values, AssembledSystem};
use crate::asymptotics::{essential_threshold, fermat_weyl_count, EssentialThreshold};
use crate::config::{format_float, RunConfig};
use crate::domain::{Cutoff, StripDomain};
use crate::eigensolver::{bracket, solve, EigenResult, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{Family, Spiral, SpiralSpec};
use crate::mesh::{MeshParams, StripMesh};

/// Rows of floats under a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    /// Writes the table with floats at `precision` significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W, precision: usize) -> Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_float(x, precision)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Threshold value when the essential spectrum has a finite positive bottom.
pub fn threshold_of(spec: &SpiralSpec) -> Option<f64> {
    let spiral = Spiral::new(spec.clone()).ok()?;
    match essential_threshold(&spiral).ok()? {
        EssentialThreshold::Energy { value } => Some(value),
        _ => None,
    }
}

/// Mesh, assembled pencil and eigenpairs for one configuration.
pub struct Solved {
    pub domain: StripDomain,
    pub mesh: StripMesh,
    pub system: AssembledSystem,
    pub result: EigenResult,
}

pub fn solve_config(cfg: &RunConfig, opts: &SolverOptions) -> Result<Solved> {
    cfg.validate()?;
    let domain = cfg.domain()?;
    let mesh = cfg.build_mesh(&domain)?;
    let system = assemble(&mesh)?;
    let result = solve(&system, cfg.request()?, opts)?;
    Ok(Solved { domain, mesh, system, result })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub spec: SpiralSpec,
    pub mesh: MeshParams,
    pub theta_max: f64,
    pub cutoff: Cutoff,
    pub full_region: bool,
    pub n_dof: usize,
    pub threshold: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Eigenvalues strictly below the threshold.
    pub bound_states: Option<usize>,
    pub sigma: f64,
    pub lanczos_steps: usize,
    pub factorizations: usize,
}

impl SpectrumReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["index", "E", "residual"]);
        for (i, (e, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            t.rows.push(vec![(i + 1) as f64, *e, *r]);
        }
        t
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<SpectrumReport> {
    let s = solve_config(cfg, &SolverOptions::default())?;
    let threshold = threshold_of(&cfg.spec);
    Ok(SpectrumReport {
        spec: cfg.spec.clone(),
        mesh: cfg.mesh,
        theta_max: cfg.theta_max(),
        cutoff: cfg.cutoff,
        full_region: cfg.full_region,
        n_dof: s.system.n,
        threshold,
        bound_states: threshold.map(|t| s.result.eigenvalues.iter().filter(|&&e| e < t).count()),
        eigenvalues: s.result.eigenvalues,
        residuals: s.result.residuals,
        sigma: s.result.sigma,
        lanczos_steps: s.result.stats.lanczos_steps,
        factorizations: s.result.stats.factorizations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Beta,
    B,
}

impl SweepParam {
    pub fn apply(self, spec: &mut SpiralSpec, value: f64) {
        match self {
            SweepParam::Beta => spec.beta = value,
            SweepParam::B => spec.b = Some(value),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Beta => "beta",
            SweepParam::B => "b",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub param: f64,
    pub eigenvalues: Vec<f64>,
    pub threshold: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub param: SweepParam,
    pub points: Vec<SweepPoint>,
    /// Parameter values where E₁ crosses the threshold.
    pub crossings: Vec<f64>,
}

impl Sweep {
    /// CSV `param,E_1..E_k`; failed points and missing levels are NaN.
    pub fn table(&self) -> Table {
        let k = self.points.iter().map(|p| p.eigenvalues.len()).max().unwrap_or(0);
        let mut header = vec!["param".to_string()];
        header.extend((1..=k).map(|i| format!("E_{i}")));
        let rows = self
            .points
            .iter()
            .map(|p| {
                let mut row = vec![p.param];
                row.extend((0..k).map(|i| p.eigenvalues.get(i).copied().unwrap_or(f64::NAN)));
                row
            })
            .collect();
        Table { header, rows }
    }
}

/// Parameter values where f changes sign, by inverse linear interpolation.
pub fn sign_crossings(params: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..params.len().saturating_sub(1) {
        let (f0, f1) = (f[i], f[i + 1]);
        if !(f0.is_finite() && f1.is_finite()) {
            continue;
        }
        if f0 == 0.0 {
            out.push(params[i]);
        } else if f0 * f1 < 0.0 {
            out.push(params[i] + f0 * (params[i + 1] - params[i]) / (f0 - f1));
        }
    }
    if let (Some(&p), Some(&v)) = (params.last(), f.last()) {
        if v == 0.0 {
            out.push(p);
        }
    }
    out
}

/// Solves on every grid point (in parallel); rows stay in grid order and a
/// failing point is recorded without stopping the sweep.
pub fn sweep(cfg: &RunConfig, param: SweepParam, grid: &[f64]) -> Result<Sweep> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("sweep grid must be non-empty and strictly ascending".into()));
    }
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|&v| {
            let mut c = cfg.clone();
            param.apply(&mut c.spec, v);
            let threshold = threshold_of(&c.spec);
            match solve_config(&c, &SolverOptions::default()) {
                Ok(s) => SweepPoint { param: v, eigenvalues: s.result.eigenvalues, threshold, error: None },
                Err(e) => SweepPoint { param: v, eigenvalues: Vec::new(), threshold, error: Some(e.to_string()) },
            }
        })
        .collect();
    let excess: Vec<f64> = points
        .iter()
        .map(|p| match (p.eigenvalues.first(), p.threshold) {
            (Some(e), Some(t)) => e - t,
            _ => f64::NAN,
        })
        .collect();
    let crossings = sign_crossings(grid, &excess);
    Ok(Sweep { param, points, crossings })
}

/// Uniform Cartesian samples of a mode on [−R, R]², row-major in y then x;
/// NaN marks points outside the region.
#[derive(Clone, Debug)]
pub struct Raster {
    pub n: usize,
    pub radius: f64,
    pub psi: Vec<f64>,
}

impl Raster {
    pub fn coord(&self, i: usize) -> f64 {
        -self.radius + 2.0 * self.radius * i as f64 / (self.n - 1) as f64
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "y", "psi"]);
        for iy in 0..self.n {
            for ix in 0..self.n {
                t.rows.push(vec![self.coord(ix), self.coord(iy), self.psi[iy * self.n + ix]]);
            }
        }
        t
    }
}

/// Copy index, strip angle and transverse coordinate of a plane point.
fn locate(domain: &StripDomain, mesh: &StripMesh, x: f64, y: f64) -> Option<(usize, f64, f64)> {
    let r = x.hypot(y);
    let phi = y.atan2(x);
    let (t0, t1) = (mesh.theta[0], *mesh.theta.last()?);
    let p = domain.period();
    for c in 0..domain.m {
        let copy = if mesh.copies == domain.m { c } else { 0 };
        let mut theta = t0 + (phi - c as f64 * p - t0).rem_euclid(2.0 * PI);
        while theta <= t1 {
            let (rin, rout) = (domain.r_in(theta), domain.r_out(theta));
            if rout > rin && r >= rin && r <= rout {
                return Some((copy, theta, (r - rin) / (rout - rin)));
            }
            theta += 2.0 * PI;
        }
    }
    None
}

/// Bilinear interpolation of nodal values in the (θ, ρ) reference cell.
fn interpolate(mesh: &StripMesh, nodal: &[f64], copy: usize, theta: f64, rho: f64) -> f64 {
    let cell = |grid: &[f64], v: f64| grid.partition_point(|&g| g <= v).clamp(1, grid.len() - 1) - 1;
    let i = cell(&mesh.theta, theta);
    let j = cell(&mesh.rho, rho);
    let s = ((theta - mesh.theta[i]) / (mesh.theta[i + 1] - mesh.theta[i])).clamp(0.0, 1.0);
    let t = ((rho - mesh.rho[j]) / (mesh.rho[j + 1] - mesh.rho[j])).clamp(0.0, 1.0);
    let v = |a: usize, b: usize| nodal[mesh.node_in_copy(copy, a, b)];
    (1.0 - s) * (1.0 - t) * v(i, j) + s * (1.0 - t) * v(i + 1, j) + (1.0 - s) * t * v(i, j + 1) + s * t * v(i + 1, j + 1)
}

/// Samples an eigenvector on an n × n grid covering the disc of radius
/// r(θ_max); the sign is fixed so the first nonzero sample is positive.
pub fn sample_mode(domain: &StripDomain, mesh: &StripMesh, v: &[f64], n: usize) -> Raster {
    let nodal = nodal_values(mesh, v);
    let radius = domain.r_out(domain.theta_max);
    let mut raster = Raster { n, radius, psi: Vec::new() };
    raster.psi = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (raster.coord(k % n), raster.coord(k / n));
            locate(domain, mesh, x, y).map_or(f64::NAN, |(c, th, rho)| interpolate(mesh, &nodal, c, th, rho))
        })
        .collect();
    if let Some(first) = raster.psi.iter().find(|x| x.is_finite() && **x != 0.0) {
        if *first < 0.0 {
            raster.psi.iter_mut().for_each(|x| *x = -*x);
        }
    }
    raster
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeSummary {
    pub index: usize,
    pub energy: f64,
    /// Polar position (r, strip angle θ) of the largest nodal |ψ|.
    pub peak_r: f64,
    pub peak_theta: f64,
}

pub fn mode_summary(mesh: &StripMesh, v: &[f64], index: usize, energy: f64) -> ModeSummary {
    let nodal = nodal_values(mesh, v);
    let (id, _) = nodal
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, x)| if x.abs() > best.1 { (i, x.abs()) } else { best });
    let nr = mesh.rho.len();
    let (r, _) = mesh.node_polar(id);
    ModeSummary { index, energy, peak_r: r, peak_theta: mesh.theta[(id % mesh.nodes_per_copy()) / nr] }
}

/// Rasters of the requested modes (1-based indices).
pub fn modes(cfg: &RunConfig, indices: &[usize], resolution: usize) -> Result<Vec<(ModeSummary, Raster)>> {
    if resolution < 2 {
        return Err(Error::Config("raster resolution must be at least 2".into()));
    }
    let top = indices.iter().copied().max().ok_or_else(|| Error::Config("no mode index given".into()))?;
    if indices.contains(&0) {
        return Err(Error::IndexOutOfRange { index: 0, available: 0 });
    }
    let mut c = cfg.clone();
    if c.k.is_some_and(|k| k < top) || c.k.is_none() && c.window_top.is_none() {
        c.k = Some(top);
    }
    let s = solve_config(&c, &SolverOptions::default())?;
    indices
        .iter()
        .map(|&idx| {
            let energy = s.result.eigenvalue(idx)?;
            let v = &s.result.eigenvectors[idx - 1 - s.result.index_offset];
            Ok((mode_summary(&s.mesh, v, idx, energy), sample_mode(&s.domain, &s.mesh, v, resolution)))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountRow {
    pub energy: f64,
    pub measured: usize,
    /// Fermat counting law; NaN for other families.
    pub weyl: f64,
}

pub fn count_table(rows: &[CountRow]) -> Table {
    let mut t = Table::new(&["E", "N_measured", "N_weyl"]);
    t.rows = rows.iter().map(|r| vec![r.energy, r.measured as f64, r.weyl]).collect();
    t
}

/// Eigenvalue staircase on an energy grid, next to the Fermat counting law.
pub fn count(cfg: &RunConfig, energies: &[f64]) -> Result<Vec<CountRow>> {
    let top = cfg.window_top.ok_or_else(|| Error::Config("count needs window_top".into()))?;
    if let Some(&e) = energies.iter().find(|&&e| !(e < top)) {
        return Err(Error::InsufficientWindow { energy: e, window_top: top });
    }
    let mut c = cfg.clone();
    c.k = None;
    let s = solve_config(&c, &SolverOptions::default())?;
    let b = match (cfg.spec.family, cfg.spec.b) {
        (Family::Fermat, Some(b)) => Some(b),
        _ => None,
    };
    energies
        .iter()
        .map(|&e| {
            Ok(CountRow {
                energy: e,
                measured: s.result.count_below(e)?,
                weyl: b.map_or(f64::NAN, |b| fermat_weyl_count(e, b)),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    pub theta_max: f64,
    pub index: usize,
    pub neumann: f64,
    pub dirichlet: f64,
    pub gap: f64,
}

pub fn ladder_table(rows: &[LadderRow]) -> Table {
    let mut t = Table::new(&["theta_max", "index", "E_N", "E_D", "gap"]);
    t.rows = rows.iter().map(|r| vec![r.theta_max, r.index as f64, r.neumann, r.dirichlet, r.gap]).collect();
    t
}

/// Neumann/Dirichlet brackets of the k lowest eigenvalues for each truncation angle.
pub fn bracket_ladder(cfg: &RunConfig, ladder: &[f64]) -> Result<Vec<LadderRow>> {
    cfg.validate()?;
    let k = cfg.k.ok_or_else(|| Error::Config("bracket needs k".into()))?;
    let top = cfg.window_top.unwrap_or(10.0);
    let mut rows = Vec::new();
    for &t in ladder {
        let b = bracket(&cfg.spec, cfg.spec.m, cfg.spec.beta, cfg.mesh, t, k, top, &SolverOptions::default())?;
        for (i, ((n, d), g)) in b.neumann.eigenvalues.iter().zip(&b.dirichlet.eigenvalues).zip(&b.gaps).enumerate() {
            rows.push(LadderRow { theta_max: t, index: i + 1, neumann: *n, dirichlet: *d, gap: *g });
        }
    }
    Ok(rows)
}

/// CSV `theta,r,s,kappa,width,d_ortho` on `n + 1` equally spaced angles from
/// θ_min to θ_max. Width columns are NaN where they are undefined.
pub fn geometry_table(spec: &SpiralSpec, theta_max: f64, n: usize) -> Result<Table> {
    let spiral = Spiral::new(spec.clone())?;
    let t0 = spiral.theta_min();
    if !(theta_max > t0) || n == 0 {
        return Err(Error::Config(format!("geometry table needs theta_max > {t0} and at least one step")));
    }
    let rows: Vec<Vec<f64>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let th = t0 + (theta_max - t0) * i as f64 / n as f64;
            Ok(vec![
                th,
                spiral.radius(th)?,
                spiral.arc_length(th)?,
                spiral.curvature(th)?.kappa,
                spiral.width_function(th).unwrap_or(f64::NAN),
                spiral.orthogonal_width(th).map_or(f64::NAN, |w| w.u),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["theta", "r", "s", "kappa", "width", "d_ortho"]);
    t.rows = rows;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cavity(beta: f64) -> RunConfig {
        let mut c = RunConfig::new(SpiralSpec::archimedean(0.5).with_beta(beta));
        c.mesh = MeshParams::new(24, 8);
        c.theta_max = Some(beta + 6.0 * PI);
        c.k = Some(3);
        c.window_top = Some(1.0);
        c
    }

    #[test]
    fn crossings_by_inverse_interpolation() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let f = [1.0, 0.5, -0.5, -1.0];
        assert_eq!(sign_crossings(&x, &f), vec![1.5]);
        assert!(sign_crossings(&x, &[1.0, f64::NAN, -1.0, -2.0]).is_empty());
    }

    #[test]
    fn sweep_rejects_unsorted_grid() {
        assert!(matches!(sweep(&cavity(5.0), SweepParam::Beta, &[2.0, 1.0]), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_keeps_grid_order_and_records_failures() {
        let mut c = cavity(5.0);
        c.theta_max = Some(20.0);
        // β = 30 lies beyond θ_max: that point fails, the others solve.
        let s = sweep(&c, SweepParam::Beta, &[4.0, 5.0, 30.0]).unwrap();
        assert_eq!(s.points.iter().map(|p| p.param).collect::<Vec<_>>(), vec![4.0, 5.0, 30.0]);
        assert!(s.points[0].error.is_none() && s.points[1].error.is_none());
        assert!(s.points[2].error.is_some());
        assert!(s.points[1].eigenvalues[0] <= s.points[0].eigenvalues[0]);
        let t = s.table();
        assert_eq!(t.header, vec!["param", "E_1", "E_2", "E_3"]);
        assert!(t.rows[2][1].is_nan());
    }

    #[test]
    fn cavity_ground_state_peaks_inside_the_cavity() {
        let c = cavity(10.5);
        let out = modes(&c, &[1], 41).unwrap();
        let (summary, raster) = &out[0];
        assert!(summary.peak_theta < 10.5, "{summary:?}");
        let first = raster.psi.iter().find(|x| x.is_finite() && x.abs() > 0.0).unwrap();
        assert!(*first > 0.0);
        // Corners of the bounding square lie outside the disc.
        assert!(raster.psi[0].is_nan());
    }

    #[test]
    fn raster_outside_points_are_near_walls_or_beyond() {
        let c = cavity(10.5);
        let domain = c.domain().unwrap();
        let mesh = c.build_mesh(&domain).unwrap();
        let rmax = domain.r_out(domain.theta_max);
        let n = 61;
        for iy in 0..n {
            for ix in 0..n {
                let x = -rmax + 2.0 * rmax * ix as f64 / (n - 1) as f64;
                let y = -rmax + 2.0 * rmax * iy as f64 / (n - 1) as f64;
                let r = x.hypot(y);
                if locate(&domain, &mesh, x, y).is_some() || r >= 0.98 * rmax {
                    continue;
                }
                // Not located: on a wall r(θ + 2πj), or in the coil cut off at θ_max.
                let phi = y.atan2(x).rem_euclid(2.0 * PI);
                let on_wall = (0..40).any(|j| {
                    let th = phi + 2.0 * PI * j as f64;
                    th >= 10.5 - 1e-9 && (0.5 * th - r).abs() < 1e-9 * rmax
                });
                let beyond = phi + 2.0 * PI * ((domain.theta_max - phi) / (2.0 * PI)).ceil();
                let cut_off = r >= 0.5 * (beyond - 2.0 * PI) - 1e-9 * rmax;
                assert!(on_wall || cut_off, "({x}, {y}) unexpectedly outside");
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        let mut c = cavity(10.5);
        c.k = None;
        c.window_top = Some(0.2);
        assert!(matches!(modes(&c, &[50], 11), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn count_requires_window_above_energies() {
        let mut c = RunConfig::new(SpiralSpec::fermat(1.0));
        c.window_top = Some(30.0);
        assert!(matches!(count(&c, &[20.0, 30.0]), Err(Error::InsufficientWindow { .. })));
    }

    #[test]
    fn geometry_table_header_and_shape() {
        let t = geometry_table(&SpiralSpec::archimedean(0.5), 4.0 * PI, 8).unwrap();
        assert_eq!(t.header.join(","), "theta,r,s,kappa,width,d_ortho");
        assert_eq!(t.rows.len(), 9);
        assert!(t.rows[0][4].is_nan());
        let last = &t.rows[8];
        assert!((last[4] - 0.5).abs() < 1e-12);
        let mut buf = Vec::new();
        t.write_csv(&mut buf, 6).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("theta,r,s,kappa,width,d_ortho\n0,0,0,"));
    }
}
