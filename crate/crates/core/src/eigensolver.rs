//! Lowest eigenpairs of K u = E M u by shift-invert Lanczos.
//!
//! The pencil is shifted and factored, K − σM = LDLᵀ, and Lanczos runs
//! on the operator (K − σM)⁻¹M, which is self-adjoint in the M inner product.
//! Its eigenvalues ν map back through E = σ + 1/ν. Every Lanczos vector is
//! reorthogonalized twice against the whole basis and against all locked
//! eigenvectors, and runs restart with deflation until the inertia of the
//! pencil confirms that nothing was missed. A run that stalls inside a dense
//! cluster moves the shift up to just below the lowest missing eigenvalue.

use serde::Serialize;

use crate::assembly::AssembledSystem;
use crate::domain::{build_domain, Cutoff};
use crate::error::{Error, Result};
use crate::geometry::SpiralSpec;
use crate::mesh::{MeshParams, StripMesh};
use crate::skyline::{Envelope, Skyline};
use crate::sparse::{dot, norm, CsrMatrix};
use crate::tridiag::tridiagonal_eigen;

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Accept a pair when ‖Ku − EMu‖₂ / ‖Mu‖₂ ≤ tol · max(1, |E|).
    pub tol: f64,
    /// Shift; defaults to −0.1 · window_top for lowest/below requests and to
    /// the window midpoint for interval requests.
    pub sigma: Option<f64>,
    /// Lanczos basis size per run; defaults to max(3k, k + 60).
    pub max_basis: Option<usize>,
    pub max_restarts: usize,
    pub shift_retries: usize,
    pub check_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-9,
            sigma: None,
            max_basis: None,
            max_restarts: 40,
            shift_retries: 3,
            check_every: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Request {
    /// The k smallest eigenvalues; the energy sets the default shift.
    Lowest { k: usize, window_top: f64 },
    /// Every eigenvalue below the energy.
    Below(f64),
    /// Every eigenvalue in [lo, hi), found around an interior shift.
    Interval(f64, f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub lanczos_steps: usize,
    pub runs: usize,
    pub factorizations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// M-orthonormal, one per eigenvalue.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub sigma: f64,
    pub stats: SolveStats,
    pub cutoff: Option<Cutoff>,
    /// Number of eigenvalues below the first reported one.
    pub index_offset: usize,
    /// Every eigenvalue of the pencil in [window_bottom, window_top) is reported.
    pub window_bottom: Option<f64>,
    pub window_top: f64,
}

const MULTIPLET_TOL: f64 = 1e-10;
const MAX_RESHIFTS: usize = 8;

impl EigenResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalue with 1-based global index.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        index
            .checked_sub(self.index_offset + 1)
            .and_then(|i| self.eigenvalues.get(i).copied())
            .ok_or(Error::IndexOutOfRange { index, available: self.index_offset + self.len() })
    }

    /// Groups of indices (into `eigenvalues`) within 1e-10 relative of each other.
    pub fn multiplets(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &e) in self.eigenvalues.iter().enumerate() {
            match groups.last_mut() {
                Some(g) if (e - self.eigenvalues[*g.last().unwrap()]).abs() <= MULTIPLET_TOL * e.abs().max(1.0) => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        groups
    }

    /// Staircase N(E): the number of eigenvalues ≤ E.
    pub fn count_below(&self, energy: f64) -> Result<usize> {
        if energy >= self.window_top || self.window_bottom.is_some_and(|b| energy < b) {
            return Err(Error::InsufficientWindow { energy, window_top: self.window_top });
        }
        Ok(self.index_offset + self.eigenvalues.iter().filter(|&&e| e <= energy).count())
    }

    /// Largest eigenvector M-Gram deviation from the identity.
    pub fn gram_error(&self, m: &CsrMatrix) -> f64 {
        let mv: Vec<Vec<f64>> = self.eigenvectors.iter().map(|v| m.mul(v)).collect();
        let mut worst: f64 = 0.0;
        for (i, a) in mv.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate() {
                let g = dot(a, b) - if i == j { 1.0 } else { 0.0 };
                worst = worst.max(g.abs());
            }
        }
        worst
    }
}

/// The pencil (K, M) with an envelope ordering shared by all shifts.
pub struct Pencil<'a> {
    pub k: &'a CsrMatrix,
    pub m: &'a CsrMatrix,
    envelope: Envelope,
    factorizations: std::cell::Cell<usize>,
}

impl<'a> Pencil<'a> {
    pub fn new(system: &'a AssembledSystem) -> Self {
        Self::from_matrices(&system.k, &system.m)
    }

    pub fn from_matrices(k: &'a CsrMatrix, m: &'a CsrMatrix) -> Self {
        let pattern = k.shifted(1.0, m);
        Pencil { k, m, envelope: Envelope::new(&pattern), factorizations: 0.into() }
    }

    pub fn factor(&self, sigma: f64) -> Result<Skyline> {
        self.factorizations.set(self.factorizations.get() + 1);
        self.envelope.factor(&self.k.shifted(sigma, self.m))
    }

    /// Number of eigenvalues strictly below `energy` (Sylvester inertia of
    /// K − E M). An exactly singular shift is nudged upward by 1e-12 relative.
    pub fn count_below(&self, energy: f64) -> Result<usize> {
        let mut e = energy;
        for _ in 0..4 {
            match self.factor(e) {
                Ok(f) => return Ok(f.negative_pivots()),
                Err(Error::Factorization { .. }) => e += 1e-12 * e.abs().max(1.0),
                Err(other) => return Err(other),
            }
        }
        self.factor(e).map(|f| f.negative_pivots())
    }

    /// A shift just below the lowest eigenvalue above the longest prefix of
    /// `found` (ascending) that is exactly the bottom of the spectrum; `None`
    /// when no such prefix exists.
    fn shift_above_found(&self, found: &[f64]) -> Result<Option<f64>> {
        let eps = |e: f64| 1e-9 * e.abs().max(1.0);
        let mut lo = None;
        for j in (0..found.len()).rev() {
            let probe = found[j] + eps(found[j]);
            if self.count_below(probe)? == j + 1 {
                lo = Some((probe, j + 1));
                break;
            }
        }
        let Some((mut lo, count)) = lo else { return Ok(None) };
        let mut width = 1e-6 * lo.abs().max(1.0);
        let mut hi = lo + width;
        while self.count_below(hi)? == count {
            width *= 4.0;
            hi = lo + width;
            if width > 1e6 * lo.abs().max(1.0) {
                return Ok(None);
            }
        }
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid)? == count {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(lo))
    }

    /// A shift below the whole spectrum and within `tol` of the lowest
    /// eigenvalue, by inertia bisection on [0, hi]. Clusters just above a
    /// threshold converge far faster from such a shift.
    pub fn shift_below_spectrum(&self, hi: f64, tol: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, hi);
        if self.count_below(hi)? == 0 {
            return Ok(hi);
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid)? == 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Number of eigenvalues of the assembled pencil strictly below `energy`.
pub fn count_below_system(system: &AssembledSystem, energy: f64) -> Result<usize> {
    Pencil::new(system).count_below(energy)
}

/// All-ones with a small deterministic perturbation. The perturbation keeps
/// the start from being M-orthogonal to modes of symmetric domains.
fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    let phase = 0.754_877_666_246_692_7 + seed as f64 * 0.569_840_290_998_053_3;
    (0..n).map(|i| 1.0 + 0.25 * ((i as f64 + 1.0) * phase).sin()).collect()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

struct Ritz {
    nu: f64,
    vector: Vec<f64>,
}

struct Run {
    ritz: Vec<Ritz>,
    steps: usize,
    /// True when the Krylov space became invariant.
    exhausted: bool,
}

/// Two passes of classical Gram–Schmidt in the M inner product against
/// `locked` and `basis`. Returns the coefficients on `basis`.
fn reorthogonalize(m: &CsrMatrix, locked: &[Vec<f64>], basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut acc = vec![0.0; basis.len()];
    for _ in 0..2 {
        let mw = m.mul(w);
        let cl: Vec<f64> = locked.iter().map(|b| dot(b, &mw)).collect();
        let cb: Vec<f64> = basis.iter().map(|b| dot(b, &mw)).collect();
        for (b, c) in locked.iter().zip(&cl) {
            axpy(-c, b, w);
        }
        for ((b, c), a) in basis.iter().zip(&cb).zip(acc.iter_mut()) {
            axpy(-c, b, w);
            *a += c;
        }
    }
    acc
}

#[allow(clippy::too_many_arguments)]
fn lanczos_run(
    m: &CsrMatrix,
    op: &Skyline,
    locked: &[Vec<f64>],
    start: Vec<f64>,
    max_basis: usize,
    need: usize,
    select: &dyn Fn(&[f64]) -> Vec<usize>,
    accept: &dyn Fn(f64, &[f64]) -> bool,
    opts: &SolverOptions,
) -> Result<Run> {
    let n = m.n;
    let mut q = start;
    reorthogonalize(m, locked, &[], &mut q);
    let qn = m.inner(&q, &q).sqrt();
    if !(qn > 0.0) {
        return Ok(Run { ritz: Vec::new(), steps: 0, exhausted: true });
    }
    q.iter_mut().for_each(|x| *x /= qn);
    let max_basis = max_basis.min(n - locked.len()).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for j in 0..max_basis {
        let mq = m.mul(&q);
        let mut w = op.solve(&mq);
        let a = dot(&mq, &w);
        axpy(-a, &q, &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        basis.push(q);
        let corr = reorthogonalize(m, locked, &basis, &mut w);
        alpha.push(a + corr[j]);
        let b = m.inner(&w, &w).max(0.0).sqrt();
        let scale = alpha.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        let exhausted = b <= 1e-12 * scale;
        let last = j + 1 == max_basis || exhausted;
        if last || ((j + 1) >= need && (j + 1) % opts.check_every == 0) {
            let (vals, vecs) = tridiagonal_eigen(&alpha, &beta)?;
            let sel = select(&vals);
            let estimated = sel.len() >= need.min(vals.len())
                && sel.iter().all(|&i| (b * vecs[i][j]).abs() <= opts.tol * vals[i].abs());
            if estimated || last {
                let ritz: Vec<Ritz> = sel
                    .into_iter()
                    .map(|i| {
                        let mut y = vec![0.0; n];
                        for (c, v) in vecs[i].iter().zip(&basis) {
                            axpy(*c, v, &mut y);
                        }
                        Ritz { nu: vals[i], vector: y }
                    })
                    .collect();
                // The Ritz estimate bounds the residual of the inverted
                // operator only; confirm on the pencil itself.
                if last || ritz.iter().all(|r| accept(r.nu, &r.vector)) {
                    return Ok(Run { ritz, steps: j + 1, exhausted });
                }
            }
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
    unreachable!("the last step always returns")
}

fn residual(k: &CsrMatrix, m: &CsrMatrix, e: f64, v: &[f64]) -> f64 {
    let kv = k.mul(v);
    let mv = m.mul(v);
    let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - e * b).collect();
    norm(&r) / norm(&mv)
}

/// Shift-invert Lanczos with deflation; see [`Request`].
pub fn solve(system: &AssembledSystem, request: Request, opts: &SolverOptions) -> Result<EigenResult> {
    let n = system.n;
    let pencil = Pencil::new(system);
    let (k_mat, m_mat) = (&system.k, &system.m);
    let (window_scale, interior) = match request {
        Request::Lowest { k, window_top } => {
            if k == 0 {
                return Err(Error::Config("at least one eigenvalue must be requested".into()));
            }
            (window_top, false)
        }
        Request::Below(top) => (top, false),
        Request::Interval(lo, hi) => {
            if !(hi > lo) {
                return Err(Error::Config(format!("empty interval [{lo}, {hi})")));
            }
            (hi - lo, true)
        }
    };
    let step = 1e-3 * window_scale.abs().max(f64::MIN_POSITIVE);
    let mut sigma = opts.sigma.unwrap_or(match request {
        Request::Lowest { window_top, .. } => -0.1 * window_top,
        Request::Below(top) => -0.1 * top,
        Request::Interval(lo, hi) => 0.5 * (lo + hi),
    });
    let mut attempt = 0;
    let mut op = loop {
        match pencil.factor(sigma) {
            Ok(f) => break f,
            Err(Error::Factorization { .. }) if attempt < opts.shift_retries => {
                attempt += 1;
                sigma += if interior { step } else { -step };
            }
            Err(e) => return Err(e),
        }
    };
    let below_sigma = op.negative_pivots();

    // Window bounds and the number of eigenvalues inside.
    let (bottom, mut top, mut need) = match request {
        Request::Lowest { k, .. } => (None, f64::INFINITY, k.min(n)),
        Request::Below(top) => {
            let c = pencil.count_below(top)?;
            (None, top, c)
        }
        Request::Interval(lo, hi) => {
            let lo_count = pencil.count_below(lo)?;
            let hi_count = pencil.count_below(hi)?;
            (Some((lo, lo_count)), hi, hi_count - lo_count)
        }
    };
    if !interior && below_sigma > 0 {
        return Err(Error::Config(format!(
            "shift {sigma} lies above {below_sigma} eigenvalues; choose a lower shift"
        )));
    }
    let in_window = |e: f64, top: f64| bottom.is_none_or(|(lo, _)| e >= lo) && e < top;

    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut found: Vec<(f64, f64, usize)> = Vec::new(); // (E, residual, locked index)
    let mut stats = SolveStats::default();
    let mut start = start_vector(n, 0);
    let mut seed = 0;
    let mut reshifts = 0;
    loop {
        let have = found.iter().filter(|f| in_window(f.0, top)).count();
        if have >= need {
            match request {
                Request::Lowest { k, .. } if k.min(n) > 0 => {
                    // Verify with the inertia just above the k-th value.
                    let mut es: Vec<f64> = found.iter().map(|f| f.0).collect();
                    es.sort_by(f64::total_cmp);
                    let ek = es[k.min(n) - 1];
                    let probe = ek + 1e-8 * ek.abs().max(1.0);
                    let inertia = pencil.count_below(probe)?;
                    let counted = es.iter().filter(|&&e| e < probe).count();
                    if inertia <= counted {
                        top = probe;
                        break;
                    }
                    need = found.len() + (inertia - counted);
                }
                _ => break,
            }
        }
        if stats.runs > opts.max_restarts || locked.len() >= n {
            return Err(Error::IterationLimit {
                iterations: stats.lanczos_steps,
                converged: found.iter().filter(|f| in_window(f.0, top)).count(),
                wanted: need,
            });
        }
        let missing = need - found.iter().filter(|f| in_window(f.0, top)).count();
        let select = |vals: &[f64]| -> Vec<usize> {
            let mut idx: Vec<usize> = (0..vals.len()).collect();
            if interior {
                idx.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()));
            } else {
                idx.retain(|&i| vals[i] > 0.0);
                idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
            }
            idx.truncate(missing);
            idx
        };
        let max_basis = opts.max_basis.unwrap_or((3 * need).max(need + 60));
        let accept = |nu: f64, v: &[f64]| {
            let e = sigma + 1.0 / nu;
            residual(k_mat, m_mat, e, v) <= opts.tol * e.abs().max(1.0)
        };
        let run = lanczos_run(m_mat, &op, &locked, start, max_basis, missing, &select, &accept, opts)?;
        let before = found.len();
        stats.runs += 1;
        stats.lanczos_steps += run.steps;
        let mut pending = vec![0.0; n];
        let mut any_pending = false;
        for r in run.ritz {
            let e = sigma + 1.0 / r.nu;
            let res = residual(k_mat, m_mat, e, &r.vector);
            if res <= opts.tol * e.abs().max(1.0) {
                found.push((e, res, locked.len()));
                locked.push(r.vector);
            } else {
                axpy(1.0, &r.vector, &mut pending);
                any_pending = true;
            }
        }
        start = if any_pending && !run.exhausted {
            pending
        } else {
            seed += 1;
            start_vector(n, seed)
        };
        // A stalled run inside a dense cluster: move the shift up to just
        // below the lowest eigenvalue not yet found.
        if found.len() == before && !interior && !found.is_empty() && reshifts < MAX_RESHIFTS {
            let mut es: Vec<f64> = found.iter().map(|f| f.0).collect();
            es.sort_by(f64::total_cmp);
            if let Some(s) = pencil.shift_above_found(&es)? {
                if let Ok(f) = pencil.factor(s) {
                    sigma = s;
                    op = f;
                    reshifts += 1;
                }
            }
        }
    }

    found.retain(|f| in_window(f.0, top));
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Request::Lowest { k, .. } = request {
        found.truncate(k);
    }
    let eigenvalues = found.iter().map(|f| f.0).collect();
    let residuals = found.iter().map(|f| f.1).collect();
    let eigenvectors = found.iter().map(|f| std::mem::take(&mut locked[f.2])).collect();
    stats.factorizations = pencil.factorizations.get();
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        residuals,
        sigma,
        stats,
        cutoff: system.cutoff,
        index_offset: bottom.map_or(0, |b| b.1),
        window_bottom: bottom.map(|b| b.0),
        window_top: top,
    })
}

/// The k smallest eigenpairs with default options.
pub fn solve_lowest(system: &AssembledSystem, k: usize, window_top: f64) -> Result<EigenResult> {
    solve(system, Request::Lowest { k, window_top }, &SolverOptions::default())
}

/// Every eigenpair below `energy` with default options.
pub fn solve_below(system: &AssembledSystem, energy: f64) -> Result<EigenResult> {
    solve(system, Request::Below(energy), &SolverOptions::default())
}

/// Neumann and Dirichlet cutoff spectra on one mesh.
#[derive(Clone, Debug, Serialize)]
pub struct Bracket {
    pub neumann: EigenResult,
    pub dirichlet: EigenResult,
    /// E_D,i − E_N,i.
    pub gaps: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn bracket(
    spec: &SpiralSpec,
    m: usize,
    beta: f64,
    params: MeshParams,
    theta_max: f64,
    k: usize,
    window_top: f64,
    opts: &SolverOptions,
) -> Result<Bracket> {
    let solve_with = |cutoff| -> Result<EigenResult> {
        let domain = build_domain(spec, m, beta, theta_max, cutoff)?;
        let mesh = StripMesh::build(&domain, params)?;
        let system = crate::assembly::assemble(&mesh)?;
        solve(&system, Request::Lowest { k, window_top }, opts)
    };
    let (neumann, dirichlet) = rayon::join(|| solve_with(Cutoff::Neumann), || solve_with(Cutoff::Dirichlet));
    let (neumann, dirichlet) = (neumann?, dirichlet?);
    let gaps = neumann.eigenvalues.iter().zip(&dirichlet.eigenvalues).map(|(n, d)| d - n).collect();
    Ok(Bracket { neumann, dirichlet, gaps })
}

impl Bracket {
    /// CSV rows `index,E_N,E_D,gap`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,E_N,E_D,gap")?;
        for (i, ((n, d), g)) in self
            .neumann
            .eigenvalues
            .iter()
            .zip(&self.dirichlet.eigenvalues)
            .zip(&self.gaps)
            .enumerate()
        {
            writeln!(w, "{},{n:.12e},{d:.12e},{g:.6e}", i + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble;
    use crate::mesh::StripMesh;

    /// 1D Dirichlet Laplacian on (0, 1) with linear elements: the discrete
    /// eigenvalues are known in closed form.
    fn fem_1d(n: usize) -> AssembledSystem {
        let h = 1.0 / (n + 1) as f64;
        let mut kt = Vec::new();
        let mut mt = Vec::new();
        for i in 0..n {
            kt.push((i, i, 2.0 / h));
            mt.push((i, i, 4.0 * h / 6.0));
            if i + 1 < n {
                for (a, b) in [(i, i + 1), (i + 1, i)] {
                    kt.push((a, b, -1.0 / h));
                    mt.push((a, b, h / 6.0));
                }
            }
        }
        let k = CsrMatrix::from_triplets(n, &kt);
        let m = CsrMatrix::from_triplets(n, &mt);
        AssembledSystem { k, m, n, bandwidth: 1, quad_order: 3, cutoff: None }
    }

    fn fem_1d_exact(n: usize, j: usize) -> f64 {
        let h = 1.0 / (n + 1) as f64;
        let c = (j as f64 * std::f64::consts::PI * h).cos();
        6.0 / (h * h) * (1.0 - c) / (2.0 + c)
    }

    #[test]
    fn lowest_modes_of_1d_problem() {
        let n = 300;
        let sys = fem_1d(n);
        let r = solve_lowest(&sys, 6, 400.0).unwrap();
        for (j, e) in r.eigenvalues.iter().enumerate() {
            let exact = fem_1d_exact(n, j + 1);
            assert!(((e - exact) / exact).abs() < 1e-10, "{e} vs {exact}");
        }
        assert!(r.residuals.iter().zip(&r.eigenvalues).all(|(res, e)| *res <= 1e-9 * e.max(1.0)));
        assert!(r.gram_error(&sys.m) < 1e-10);
    }

    #[test]
    fn below_and_interval_windows() {
        let n = 200;
        let sys = fem_1d(n);
        let below = solve(&sys, Request::Below(1000.0), &SolverOptions::default()).unwrap();
        let expect = (1..=n).filter(|&j| fem_1d_exact(n, j) < 1000.0).count();
        assert_eq!(below.len(), expect);
        assert_eq!(below.count_below(500.0).unwrap(), (1..=n).filter(|&j| fem_1d_exact(n, j) <= 500.0).count());
        assert!(matches!(below.count_below(1000.0), Err(Error::InsufficientWindow { .. })));

        let window = solve(&sys, Request::Interval(1000.0, 3000.0), &SolverOptions::default()).unwrap();
        assert_eq!(window.index_offset, expect);
        for (i, e) in window.eigenvalues.iter().enumerate() {
            let exact = fem_1d_exact(n, expect + i + 1);
            assert!(((e - exact) / exact).abs() < 1e-10);
        }
        assert!(window.eigenvalue(expect + 1).is_ok());
        assert!(window.eigenvalue(expect).is_err());
    }

    #[test]
    fn degenerate_annulus_modes_are_all_found() {
        // Angular modes come in cos/sin pairs.
        let mesh = StripMesh::annulus(1.0, 2.0, 48, MeshParams::new(48, 6)).unwrap();
        let sys = assemble(&mesh).unwrap();
        let r = solve_lowest(&sys, 7, 12.0).unwrap();
        let groups = r.multiplets();
        assert_eq!(groups[0].len(), 1);
        let pencil = Pencil::new(&sys);
        let last = *r.eigenvalues.last().unwrap();
        assert!(pencil.count_below(last * (1.0 + 1e-9)).unwrap() >= 7);
        assert_eq!(pencil.count_below(r.eigenvalues[0] * 0.999).unwrap(), 0);
    }

    #[test]
    fn shift_on_an_eigenvalue_is_retried() {
        let t: Vec<(usize, usize, f64)> = (0..5).map(|i| (i, i, 1.0 + i as f64)).collect();
        let id: Vec<(usize, usize, f64)> = (0..5).map(|i| (i, i, 1.0)).collect();
        let sys = AssembledSystem {
            k: CsrMatrix::from_triplets(5, &t),
            m: CsrMatrix::from_triplets(5, &id),
            n: 5,
            bandwidth: 0,
            quad_order: 3,
            cutoff: None,
        };
        let opts = SolverOptions { sigma: Some(1.0), ..Default::default() };
        let r = solve(&sys, Request::Lowest { k: 2, window_top: 10.0 }, &opts).unwrap();
        assert!((r.sigma - 0.99).abs() < 1e-12);
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-12 && (r.eigenvalues[1] - 2.0).abs() < 1e-12);
    }
}
