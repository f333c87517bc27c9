//! Acceptance suite. Each criterion is a list of measured-versus-expected
//! checks, plus diagnosis checks that explain a known failure when there is one.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assembly::{assemble, AssembledSystem};
use crate::asymptotics::{
    combination_order, essential_threshold, inflation_order_with, multi_arm_tail_coefficient, osculating_critical,
    osculating_criterion, transen_order,
};
use crate::bessel::bessel_zero;
use crate::config::format_float;
use crate::domain::{build_domain, Cutoff};
use crate::eigensolver::{solve, EigenResult, Pencil, Request, SolverOptions};
use crate::error::{Error, Result};
use crate::experiments::sign_crossings;
use crate::fit::loglog_fit;
use crate::geometry::{Spiral, SpiralSpec};
use crate::mesh::{MeshParams, StripMesh};
use crate::oracle::{brute_force_orthogonal_width, dense_eigenvalues};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Supporting evidence for an expected failure; not part of the verdict.
    pub diagnosis: Vec<Check>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub const CRITERIA: [(usize, &str); 9] = [
    (1, "cavity spectrum"),
    (2, "critical cavity angle"),
    (3, "multi-arm region"),
    (4, "Fermat region"),
    (5, "interpolating region"),
    (6, "full Archimedean region"),
    (7, "geometry oracles"),
    (8, "solver oracle"),
    (9, "monotonicity suite"),
];

fn f(x: f64) -> String {
    format_float(x, 7)
}

fn cond(label: impl Into<String>, measured: String, expected: impl Into<String>, pass: bool) -> Check {
    Check { label: label.into(), measured, expected: expected.into(), pass }
}

fn rel(label: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Check {
    let pass = (measured - expected).abs() <= tol * expected.abs();
    cond(label, f(measured), format!("{} ± {}%", f(expected), format_float(100.0 * tol, 3)), pass)
}

fn uniform(n_theta: usize, n_rho: usize) -> MeshParams {
    MeshParams { grading: 1.0, ..MeshParams::new(n_theta, n_rho) }
}

fn system(spec: &SpiralSpec, theta_max: f64, cutoff: Cutoff, params: MeshParams, full: bool) -> Result<AssembledSystem> {
    let domain = build_domain(spec, spec.m, spec.beta, theta_max, cutoff)?;
    let mesh = if full { StripMesh::build_full(&domain, params)? } else { StripMesh::build(&domain, params)? };
    assemble(&mesh)
}

fn lowest(sys: &AssembledSystem, k: usize, window_top: f64) -> Result<EigenResult> {
    solve(sys, Request::Lowest { k, window_top }, &SolverOptions::default())
}

/// Lowest eigenvalue to within `tol` by inertia bisection on [0, hi].
fn ground_energy(sys: &AssembledSystem, hi: f64, tol: f64) -> Result<f64> {
    Pencil::new(sys).shift_below_spectrum(hi, tol)
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

pub fn run(id: usize) -> Outcome {
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let start = Instant::now();
    let mut out = Outcome { id, title, checks: Vec::new(), diagnosis: Vec::new(), notes: Vec::new(), seconds: 0.0 };
    let result = match id {
        1 => cavity_spectrum(&mut out),
        2 => critical_angle(&mut out),
        3 => multi_arm(&mut out),
        4 => fermat(&mut out),
        5 => interpolating(&mut out),
        6 => full_archimedean(&mut out),
        7 => geometry_oracles(&mut out),
        8 => solver_oracle(&mut out),
        9 => monotonicity(&mut out),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    if let Err(e) = result {
        out.checks.push(cond("completed", e.to_string(), "no error", false));
    }
    out.seconds = start.elapsed().as_secs_f64();
    out
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.0)).collect()
}

const FIG3: [f64; 9] = [0.1280, 0.2969, 0.3456, 0.5312, 0.5811, 0.6825, 0.8266, 0.8852, 0.9768];

fn cavity_spectrum(out: &mut Outcome) -> Result<()> {
    let start = Instant::now();
    let beta = 10.5;
    let spec = SpiralSpec::archimedean(0.5).with_beta(beta);
    let theta_max = beta + 16.0 * PI;
    let params = MeshParams::new(128, 32);
    let solve_with = |c| system(&spec, theta_max, c, params, false).and_then(|s| lowest(&s, 9, 1.0));
    let (n, d) = rayon::join(|| solve_with(Cutoff::Neumann), || solve_with(Cutoff::Dirichlet));
    let (n, d) = (n?, d?);
    for (i, &target) in FIG3.iter().enumerate() {
        out.checks.push(rel(format!("E{}", i + 1), d.eigenvalues[i], target, 0.01));
    }
    for i in 0..9 {
        let gap = (d.eigenvalues[i] - n.eigenvalues[i]) / d.eigenvalues[i];
        // E_D ≥ E_N up to rounding.
        out.checks.push(cond(format!("bracket gap {}", i + 1), format!("{gap:.2e}"), "in [0, 0.005)", gap > -1e-12 && gap < 0.005));
    }
    let secs = start.elapsed().as_secs_f64();
    out.checks.push(cond("runtime [s]", f(secs), "< 300", secs < 300.0));
    Ok(())
}

fn critical_angle(out: &mut Outcome) -> Result<()> {
    let a = 0.5;
    // Ground state E₁(β) near the crossing, Richardson-extrapolated over two
    // uniform meshes, for both truncations.
    let grid: Vec<f64> = (0..7).map(|i| 1.30 + 0.05 * i as f64).collect();
    let e1 = |beta: f64, cutoff: Cutoff| -> Result<f64> {
        let spec = SpiralSpec::archimedean(a).with_beta(beta);
        let theta_max = beta + 8.0 * PI;
        let coarse = ground_energy(&system(&spec, theta_max, cutoff, uniform(64, 16), false)?, 2.0, 1e-9)?;
        let fine = ground_energy(&system(&spec, theta_max, cutoff, uniform(128, 32), false)?, 2.0, 1e-9)?;
        Ok(richardson(coarse, fine))
    };
    let mut dir = Vec::new();
    let mut neu = Vec::new();
    for &b in &grid {
        let (n, d) = rayon::join(|| e1(b, Cutoff::Neumann), || e1(b, Cutoff::Dirichlet));
        neu.push(n? - 1.0);
        dir.push(d? - 1.0);
    }
    out.notes.push(format!(
        "E1 - 1 by beta: {}",
        grid.iter()
            .zip(neu.iter().zip(&dir))
            .map(|(b, (n, d))| format!("{}: N {:.3e} D {:.3e}", format_float(*b, 3), n, d))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    let beta_d = sign_crossings(&grid, &dir);
    let beta_n = sign_crossings(&grid, &neu);
    out.notes.push(format!("Neumann crossing {:?}, Dirichlet crossing {:?}", beta_n, beta_d));
    match beta_d.first() {
        Some(&b1) => out.checks.push(cond("beta_1 (Dirichlet crossing)", f(b1), "1.43 ± 0.05", (b1 - 1.43).abs() <= 0.05)),
        None => out.checks.push(cond("beta_1 (Dirichlet crossing)", "none in grid".into(), "1.43 ± 0.05", false)),
    }

    for beta in [4.81, 4.90] {
        let spec = SpiralSpec::archimedean(a).with_beta(beta);
        let sys = system(&spec, beta + 16.0 * PI, Cutoff::Dirichlet, MeshParams::new(64, 16), false)?;
        let bound = Pencil::new(&sys).count_below(1.0)?;
        out.checks.push(cond(
            format!("bound states at beta = {beta}"),
            bound.to_string(),
            ">= 1",
            bound >= 1,
        ));
    }
    let osc = osculating_criterion(a, 4.90)?;
    out.checks.push(cond("osculating criterion at beta = 4.90", osc.to_string(), "true", osc));
    let root = osculating_critical(a)?;
    out.diagnosis.push(cond("osculating critical angle", f(root), "in (4.90, 4.91)", root > 4.90 && root < 4.91));
    out.diagnosis.push(cond(
        "osculating criterion at beta = 4.91",
        osculating_criterion(a, 4.91)?.to_string(),
        "true",
        osculating_criterion(a, 4.91)?,
    ));
    Ok(())
}

const FIG4: [(usize, f64); 4] = [(1, 0.1296), (2, 0.3282), (4, 0.5871), (6, 0.6783)];

fn multi_arm(out: &mut Outcome) -> Result<()> {
    let (a, m, beta) = (3.0, 6, 2.0 * PI);
    let spec = SpiralSpec::multi_arm(a, m).with_beta(beta);
    let theta_max = beta + 16.0 * PI / m as f64;
    let sys = system(&spec, theta_max, Cutoff::Dirichlet, MeshParams::new(64, 16), true)?;
    let r = lowest(&sys, 6, 1.0)?;
    for (i, target) in FIG4 {
        out.checks.push(rel(format!("E{i}"), r.eigenvalues[i - 1], target, 0.01));
    }
    let thr = essential_threshold(&Spiral::new(spec)?)?.value();
    out.checks.push(cond("threshold (m/2a)^2", f(thr), "1", (thr - 1.0).abs() < 1e-9));
    // Energies scale as a⁻²: the same region at a = 1.
    for (i, target) in FIG4 {
        out.diagnosis.push(rel(format!("a^2 E{i}"), a * a * r.eigenvalues[i - 1], target, 0.01));
    }
    out.notes.push(format!("lowest six: {:?}", r.eigenvalues.iter().map(|&e| f(e)).collect::<Vec<_>>()));
    Ok(())
}

const FIG5: [(usize, f64); 4] = [(7, 19.5462), (15, 28.3118), (27, 38.8062), (42, 48.8367)];

fn fermat(out: &mut Outcome) -> Result<()> {
    let b = 1.0;
    let spec = SpiralSpec::fermat(b).with_m(2);
    let sys = system(&spec, 14.0, Cutoff::Dirichlet, MeshParams::new(256, 48), false)?;
    let r = solve(&sys, Request::Below(51.0), &SolverOptions::default())?;
    for (i, target) in FIG5 {
        let e = r.eigenvalue(i)?;
        out.checks.push(rel(format!("E{i}"), e, target, 0.01));
        if e < target * 0.99 {
            out.diagnosis.push(cond(
                format!("E{i} upper bound below printed - 1%"),
                f(e),
                format!("< {}", f(0.99 * target)),
                true,
            ));
        }
    }
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for i in 0..=60 {
        let e = 20.0 + 0.5 * i as f64;
        let n = r.count_below(e)? as f64;
        let w = b.powi(4) * e * e / 64.0;
        worst = worst.min(n - w);
        ok &= n >= w;
    }
    out.checks.push(cond("min N(E) - E^2/64 on [20, 50]", f(worst), ">= 0", ok));
    Ok(())
}

/// The k lowest pairs, shifted from just below the spectrum; near-threshold
/// clusters converge far faster from there.
fn lowest_from_below(sys: &AssembledSystem, k: usize, window_top: f64) -> Result<EigenResult> {
    let sigma = Pencil::new(sys).shift_below_spectrum(window_top, 1e-9)?;
    solve(sys, Request::Lowest { k, window_top }, &SolverOptions { sigma: Some(sigma), ..Default::default() })
}

fn interpolating(out: &mut Outcome) -> Result<()> {
    let (a, m) = (1.0, 2);
    let b = (2.0 * PI).powf(-0.25);
    let spec = SpiralSpec::fermat_archimedean(a, b).with_m(m);
    let theta_max = 50.0;
    // The lowest 14 Dirichlet levels, Richardson-extrapolated over two uniform meshes.
    let levels = |nt, nr| -> Result<Vec<f64>> {
        let sys = system(&spec, theta_max, Cutoff::Dirichlet, uniform(nt, nr), false)?;
        Ok(lowest_from_below(&sys, 14, 2.0)?.eigenvalues)
    };
    let (coarse, fine) = (levels(32, 16)?, levels(64, 32)?);
    let e: Vec<f64> = coarse.iter().zip(&fine).map(|(&c, &f)| richardson(c, f)).collect();
    let below: Vec<f64> = e.iter().copied().filter(|&x| x < 1.0).collect();
    out.checks.push(cond("eigenvalues below 1", below.len().to_string(), ">= 14", below.len() >= 14));
    out.checks.push(cond("E14", f(e[13]), "in [0.999, 1)", (0.999..1.0).contains(&e[13])));
    if below.len() >= 4 {
        // N(1 − E) at the gaps of the computed levels.
        let gaps: Vec<f64> = below.iter().map(|e| 1.0 - e).collect();
        let counts: Vec<f64> = (0..gaps.len()).map(|i| (gaps.len() - i) as f64).collect();
        let fit = loglog_fit(&gaps, &counts);
        out.checks.push(cond("log-log slope of N(1 - E)", f(fit.slope), "-0.5 ± 0.15", (fit.slope + 0.5).abs() <= 0.15));
    } else {
        out.checks.push(cond(
            "log-log slope of N(1 - E)",
            format!("{} levels below 1", below.len()),
            "-0.5 ± 0.15",
            false,
        ));
    }
    out.notes.push(format!("E1 - 1 = {:.3e}, E14 - 1 = {:.3e} at theta_max = {theta_max}", e[0] - 1.0, e[13] - 1.0));

    // The θ⁻² tail that one arm cancels stays repulsive for two.
    let tail = multi_arm_tail_coefficient(m, a);
    let attraction = 2.0 * b.powi(4) / (8.0 * a.powi(3)) / a.powi(3);
    out.diagnosis.push(cond(
        "repulsive tail (m^2-1)/4a^2 vs inflation attraction 2c/a^3",
        format!("{} vs {}", f(tail), f(attraction)),
        "tail > attraction",
        tail > attraction,
    ));
    // The one-arm analogue does bind, so the solver resolves such states.
    let a1 = 0.5;
    let single = SpiralSpec::fermat_archimedean(a1, a1 * b);
    let e1 = |nt, nr| system(&single, 80.0, Cutoff::Dirichlet, uniform(nt, nr), false).and_then(|s| ground_energy(&s, 2.0, 1e-10));
    let e1 = richardson(e1(32, 16)?, e1(64, 32)?);
    out.diagnosis.push(cond("one-arm analogue E1", f(e1), "< 1", e1 < 1.0));
    Ok(())
}

fn full_archimedean(out: &mut Outcome) -> Result<()> {
    let spec = SpiralSpec::archimedean(0.5);
    let mut prev = f64::NEG_INFINITY;
    let mut excess = Vec::new();
    for t in [8.0 * PI, 16.0 * PI, 32.0 * PI] {
        let e1 = |nt, nr| system(&spec, t, Cutoff::Neumann, uniform(nt, nr), false).and_then(|s| ground_energy(&s, 2.0, 1e-10));
        let e = richardson(e1(64, 16)?, e1(128, 32)?);
        let label = format!("Neumann E1 at theta_max = {}pi", (t / PI).round());
        out.checks.push(cond(label.clone(), f(e), "> 0.98", e > 0.98));
        if prev.is_finite() {
            out.checks.push(cond(format!("{label} increases"), format!("{:.3e}", e - prev), "> 0", e > prev));
        }
        excess.push((e - 1.0).abs());
        prev = e;
    }
    // A repulsive θ⁻⁴ tail of W: the Neumann ground state sits at the cut and
    // approaches the threshold from above.
    out.diagnosis.push(cond(
        "|E1 - 1| shrinks with theta_max",
        excess.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", "),
        "decreasing",
        excess.windows(2).all(|w| w[1] < w[0]),
    ));
    Ok(())
}

fn random_spec(rng: &mut ChaCha8Rng) -> SpiralSpec {
    match rng.gen_range(0..4) {
        0 => SpiralSpec::archimedean(rng.gen_range(0.2..2.0)),
        1 => SpiralSpec::multi_arm(rng.gen_range(0.5..3.0), rng.gen_range(2..=6)),
        2 => SpiralSpec::fermat(rng.gen_range(0.5..2.0)).with_m(rng.gen_range(1..=2)),
        _ => SpiralSpec::fermat_archimedean(rng.gen_range(0.3..1.5), rng.gen_range(0.3..1.5)),
    }
}

fn geometry_oracles(out: &mut Outcome) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for _ in 0..50 {
        let spec = random_spec(&mut rng);
        let s = Spiral::new(spec.clone())?;
        let theta = rng.gen_range(4.0 * PI..40.0 * PI);
        match (s.orthogonal_width(theta), brute_force_orthogonal_width(&s, theta)) {
            (Ok(w), Ok(b)) => worst = worst.max(((w.u - b) / b).abs()),
            (w, b) => failures.push(format!("{:?} at {theta}: {:?} / {:?}", spec.family, w.err(), b.err())),
        }
    }
    out.notes.extend(failures.iter().cloned());
    out.checks.push(cond(
        "orthogonal width vs brute force (50 samples)",
        format!("{:.2e}", worst),
        "<= 1e-8",
        worst <= 1e-8 && failures.is_empty(),
    ));

    let a = 0.5;
    let s = Spiral::new(SpiralSpec::archimedean(a))?;
    let mut worst: f64 = 0.0;
    for t in [0.5, 3.0, 10.0, 8.0 * PI, 100.0, 128.0 * PI] {
        let exact = 0.5 * a * (t * (1.0 + t * t).sqrt() + t.asinh());
        worst = worst.max(((s.arc_length(t)? - exact) / exact).abs());
    }
    out.checks.push(cond("Archimedean arc length", format!("{:.2e}", worst), "<= 1e-10", worst <= 1e-10));

    let o = transen_order(a)?;
    out.checks.push(cond("transverse-threshold residual slope", f(o.fit.slope), "-6 ± 0.5", o.within(0.5)));
    let o = combination_order(a)?;
    out.checks.push(cond("combined-potential residual slope", f(o.fit.slope), "-5 ± 0.5", o.within(0.5)));

    let (a, b) = (1.0, (2.0 * PI).powf(-0.25));
    let s = Spiral::new(SpiralSpec::fermat_archimedean(a, b))?;
    let fit = s
        .classify()?
        .asymptotically_archimedean
        .ok_or_else(|| Error::ClassificationUnavailable("interpolating spiral".into()))?;
    out.checks.push(rel("inflation c vs b^4/(8a^3)", fit.c, b.powi(4) / (8.0 * a.powi(3)), 0.02));
    out.checks.push(cond("inflation exponent gamma", f(fit.gamma), "2 ± 0.05", (fit.gamma - 2.0).abs() <= 0.05));
    let exact_c = b.powi(4) / (8.0 * a.powi(3));
    let o = inflation_order_with(&s, a, exact_c, 2.0)?;
    out.checks.push(cond("inflated-width residual slope (c = b^4/8a^3, gamma = 2)", f(o.fit.slope), "-3 ± 0.5", o.within(0.5)));
    Ok(())
}

fn solver_oracle(out: &mut Outcome) -> Result<()> {
    let b = (2.0 * PI).powf(-0.25);
    let cases: [(&str, SpiralSpec, f64, MeshParams, bool); 4] = [
        ("cavity", SpiralSpec::archimedean(0.5).with_beta(10.5), 10.5 + 4.0 * PI, MeshParams::new(24, 10), false),
        ("multi-arm", SpiralSpec::multi_arm(3.0, 6).with_beta(2.0 * PI), 4.0 * PI, MeshParams::new(6, 4), true),
        ("fermat", SpiralSpec::fermat(1.0).with_m(2), 14.0, MeshParams::new(32, 10), false),
        ("interpolating", SpiralSpec::fermat_archimedean(1.0, b).with_m(2), 12.0, MeshParams::new(32, 10), false),
    ];
    for (name, spec, theta_max, params, full) in cases {
        let sys = system(&spec, theta_max, Cutoff::Dirichlet, params, full)?;
        let dense = dense_eigenvalues(&sys.k, &sys.m)?;
        let r = lowest(&sys, 8, dense[7] * 1.5)?;
        let worst = r.eigenvalues.iter().zip(&dense).map(|(e, d)| ((e - d) / d).abs()).fold(0.0, f64::max);
        out.checks.push(cond(
            format!("{name}: shift-invert vs dense ({} DOF)", sys.n),
            format!("{:.2e}", worst),
            "<= 1e-9, DOF <= 2000",
            worst <= 1e-9 && sys.n <= 2000,
        ));
    }

    // Second-order convergence of E₁ on the Fermat region, which has no
    // cavity tip: its two arms leave the origin along one straight line.
    let spec = SpiralSpec::fermat(1.0).with_m(2);
    let e: Vec<f64> = [(8, 4), (16, 8), (32, 16)]
        .iter()
        .map(|&(nt, nr)| system(&spec, 14.0, Cutoff::Dirichlet, uniform(nt, nr), false).and_then(|s| lowest(&s, 1, 20.0)))
        .map(|r| r.map(|r| r.eigenvalues[0]))
        .collect::<Result<_>>()?;
    let rate = ((e[0] - e[1]) / (e[1] - e[2])).log2();
    out.notes.push(format!("E1 on refined meshes: {:?}", e.iter().map(|&x| f(x)).collect::<Vec<_>>()));
    out.checks.push(cond("E1 convergence rate", f(rate), ">= 1.7", rate >= 1.7));
    Ok(())
}

fn monotonicity(out: &mut Outcome) -> Result<()> {
    let a = 0.5;
    // Around the cavity of criterion 1, where the lowest levels are bound.
    let grid: Vec<f64> = (0..21).map(|i| 6.0 + 0.5 * i as f64).collect();
    let theta_max = 16.0 + 16.0 * PI;
    let params = MeshParams::new(32, 8);
    let k = 3;
    let mut rows = Vec::new();
    for &beta in &grid {
        let spec = SpiralSpec::archimedean(a).with_beta(beta);
        let solve_with = |c| system(&spec, theta_max, c, params, false).and_then(|s| lowest_from_below(&s, k, 2.0));
        let (n, d) = rayon::join(|| solve_with(Cutoff::Neumann), || solve_with(Cutoff::Dirichlet));
        rows.push((n?.eigenvalues, d?.eigenvalues));
    }
    let mut worst_rise: f64 = f64::NEG_INFINITY;
    let mut worst_order: f64 = f64::NEG_INFINITY;
    for (j, (n, d)) in rows.iter().enumerate() {
        for i in 0..k {
            worst_order = worst_order.max((n[i] - d[i]) / d[i]);
            if j > 0 {
                worst_rise = worst_rise.max(d[i] - rows[j - 1].1[i]).max(n[i] - rows[j - 1].0[i]);
            }
        }
    }
    out.checks.push(cond(
        format!("largest rise of E_i along {} beta points", grid.len()),
        format!("{:.3e}", worst_rise),
        "<= 0",
        worst_rise <= 0.0 && grid.len() >= 20,
    ));
    // Bound levels agree to rounding under both cutoffs.
    out.checks.push(cond(
        "largest (E_N,i - E_D,i)/E_D,i",
        format!("{:.3e}", worst_order),
        "<= 1e-12",
        worst_order <= 1e-12,
    ));

    let j01 = bessel_zero(0, 1)?;
    for beta in [3.0 * PI, 4.0 * PI] {
        let spec = SpiralSpec::archimedean(a).with_beta(beta);
        let sys = system(&spec, beta + 16.0 * PI, Cutoff::Dirichlet, MeshParams::new(64, 16), false)?;
        let e = lowest(&sys, 1, 1.0)?.eigenvalues[0];
        let bound = (j01 / (a * beta)).powi(2);
        out.checks.push(cond(
            format!("E1 at beta = {}pi", (beta / PI).round()),
            f(e),
            format!("<= {}", f(bound)),
            e <= bound,
        ));
    }
    Ok(())
}

/// One line per check, grouped by criterion.
pub fn render(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s += &format!(
            "[{}] criterion {} ({}), {:.1} s\n",
            if o.passed() { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.seconds
        );
        for c in &o.checks {
            s += &format!("    {:4} {}: {} (expected {})\n", if c.pass { "ok" } else { "FAIL" }, c.label, c.measured, c.expected);
        }
        for c in &o.diagnosis {
            s += &format!("    diag {:4} {}: {} (expected {})\n", if c.pass { "ok" } else { "FAIL" }, c.label, c.measured, c.expected);
        }
        for n in &o.notes {
            s += &format!("    note {n}\n");
        }
    }
    s
}
