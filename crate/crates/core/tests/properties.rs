//! Property tests against independent oracles (nalgebra dense algebra,
//! closed-form polynomial integrals, direct quadrature).

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

use spiralguide::assembly::assemble;
use spiralguide::domain::{build_domain, Cutoff};
use spiralguide::eigensolver::{solve, Pencil, Request, SolverOptions};
use spiralguide::experiments::sign_crossings;
use spiralguide::mesh::{MeshParams, StripMesh};
use spiralguide::oracle::dense_eigenvalues;
use spiralguide::ordering::reverse_cuthill_mckee;
use spiralguide::quadrature::{gauss_legendre, integrate};
use spiralguide::skyline::Skyline;
use spiralguide::sparse::CsrMatrix;
use spiralguide::tridiag::tridiagonal_eigen;
use spiralguide::{Spiral, SpiralSpec};

fn sorted_eigen(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Sparse symmetric matrix with a random pattern plus its dense twin.
fn random_symmetric(n: usize, entries: &[(usize, usize, f64)], diag: &[f64]) -> (CsrMatrix, DMatrix<f64>) {
    let mut dense = DMatrix::zeros(n, n);
    let mut trips = Vec::new();
    for (i, d) in diag.iter().enumerate().take(n) {
        dense[(i, i)] += d;
        trips.push((i, i, *d));
    }
    for &(i, j, v) in entries {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        dense[(i, j)] += v;
        dense[(j, i)] += v;
        trips.push((i, j, v));
        trips.push((j, i, v));
    }
    (CsrMatrix::from_triplets(n, &trips), dense)
}

fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>, Vec<f64>)> {
    (3usize..24).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, -1.0f64..1.0), 0..3 * n),
            prop::collection::vec(-3.0f64..3.0, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rcm_is_a_permutation((n, e, d) in matrix_strategy()) {
        let (a, _) = random_symmetric(n, &e, &d);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort_unstable();
        prop_assert_eq!(p, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn ldlt_solves_and_counts_inertia((n, e, d) in matrix_strategy(), shift in -2.0f64..2.0) {
        let (a, dense) = random_symmetric(n, &e, &d);
        let eig = sorted_eigen(dense.clone());
        // Skip shifts too close to an eigenvalue for a stable count.
        prop_assume!(eig.iter().all(|&l| (l - shift).abs() > 1e-6));
        let id = CsrMatrix::from_triplets(n, &(0..n).map(|i| (i, i, 1.0)).collect::<Vec<_>>());
        let shifted = a.shifted(shift, &id);
        let f = Skyline::factor(&shifted).unwrap();
        prop_assert_eq!(f.negative_pivots(), eig.iter().filter(|&&l| l < shift).count());

        let b: Vec<f64> = (0..n).map(|i| (i as f64 + 1.0).sin()).collect();
        let x = f.solve(&b);
        let r = shifted.mul(&x);
        let gap = eig.iter().map(|l| (l - shift).abs()).fold(f64::INFINITY, f64::min);
        let bound = 1e-9 * (1.0 + 1.0 / gap);
        for (ri, bi) in r.iter().zip(&b) {
            prop_assert!((ri - bi).abs() < bound, "residual {} vs {}", (ri - bi).abs(), bound);
        }
    }

    #[test]
    fn pencil_count_matches_dense(
        (n, e, d) in matrix_strategy(),
        mass in prop::collection::vec(0.5f64..2.0, 24),
        energy in -1.0f64..4.0,
    ) {
        let d: Vec<f64> = d.iter().map(|x| x.abs() + 4.0).collect();
        let (k, kd) = random_symmetric(n, &e, &d);
        let m = CsrMatrix::from_triplets(n, &(0..n).map(|i| (i, i, mass[i])).collect::<Vec<_>>());
        // Generalized problem with diagonal M reduces to M^{-1/2} K M^{-1/2}.
        let s = DMatrix::from_fn(n, n, |i, j| kd[(i, j)] / (mass[i] * mass[j]).sqrt());
        let eig = sorted_eigen(s);
        prop_assume!(eig.iter().all(|&l| (l - energy).abs() > 1e-6));
        let count = Pencil::from_matrices(&k, &m).count_below(energy).unwrap();
        prop_assert_eq!(count, eig.iter().filter(|&&l| l < energy).count());
    }

    #[test]
    fn tridiagonal_matches_dense(
        alpha in prop::collection::vec(-5.0f64..5.0, 1..30),
        beta_raw in prop::collection::vec(-2.0f64..2.0, 30),
    ) {
        let n = alpha.len();
        let beta = &beta_raw[..n - 1];
        let (vals, vecs) = tridiagonal_eigen(&alpha, beta).unwrap();
        let dense = DMatrix::from_fn(n, n, |i, j| {
            if i == j { alpha[i] } else if i + 1 == j { beta[i] } else if j + 1 == i { beta[j] } else { 0.0 }
        });
        let mut got = vals.clone();
        got.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(sorted_eigen(dense.clone())) {
            prop_assert!((g - w).abs() < 1e-10 * (1.0 + w.abs()), "{} vs {}", g, w);
        }
        for (l, v) in vals.iter().zip(&vecs) {
            let x = nalgebra::DVector::from_column_slice(v);
            let r = &dense * &x - &x * *l;
            prop_assert!(r.norm() < 1e-9 * (1.0 + l.abs()) * x.norm());
        }
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1(
        n in 1usize..12,
        coeffs in prop::collection::vec(-1.0f64..1.0, 24),
    ) {
        let deg = 2 * n - 1;
        let (x, w) = gauss_legendre(n);
        let p = |t: f64| coeffs[..=deg].iter().rev().fold(0.0, |acc, c| acc * t + c);
        let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * p(*xi)).sum();
        // ∫_{-1}^{1} t^k dt = 2/(k+1) for even k, 0 for odd k.
        let exact: f64 = coeffs[..=deg].iter().enumerate().filter(|(k, _)| k % 2 == 0).map(|(k, c)| 2.0 * c / (k as f64 + 1.0)).sum();
        prop_assert!((q - exact).abs() < 1e-12, "{} vs {}", q, exact);
    }

    #[test]
    fn adaptive_quadrature_of_exponentials(lambda in -3.0f64..3.0, a in -2.0f64..0.0, b in 0.1f64..3.0) {
        prop_assume!(lambda.abs() > 1e-3);
        let q = integrate(|t| (lambda * t).exp(), a, b, 1e-13, 1e-12).unwrap();
        let exact = ((lambda * b).exp() - (lambda * a).exp()) / lambda;
        prop_assert!((q - exact).abs() < 1e-10 * (1.0 + exact.abs()));
    }

    #[test]
    fn crossings_of_a_line_hit_its_root(slope in 0.1f64..5.0, root in 0.05f64..0.95, n in 3usize..40) {
        let params: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let f: Vec<f64> = params.iter().map(|p| slope * (p - root)).collect();
        let c = sign_crossings(&params, &f);
        prop_assert_eq!(c.len(), 1);
        prop_assert!((c[0] - root).abs() < 1e-12);
        let g: Vec<f64> = f.iter().map(|x| -x).collect();
        prop_assert_eq!(sign_crossings(&params, &g), c);
    }

    #[test]
    fn crossings_count_sign_changes(f in prop::collection::vec(prop_oneof![-1.0f64..-0.01, 0.01f64..1.0], 2..30)) {
        let params: Vec<f64> = (0..f.len()).map(|i| i as f64).collect();
        let changes = f.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        let c = sign_crossings(&params, &f);
        prop_assert_eq!(c.len(), changes);
        prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn archimedean_geometry(a in 0.1f64..2.0, t0 in 0.5f64..20.0, dt in 0.1f64..10.0) {
        let s = Spiral::new(SpiralSpec::archimedean(a)).unwrap();
        let t1 = t0 + dt;
        prop_assert!((s.radius(t0).unwrap() - a * t0).abs() < 1e-12 * (1.0 + a * t0));
        // Closed-form arc length of r = aθ.
        let arc = |t: f64| 0.5 * a * (t * (1.0 + t * t).sqrt() + t.asinh());
        let len = s.arc_length_between(t0, t1).unwrap();
        prop_assert!((len - (arc(t1) - arc(t0))).abs() < 1e-9 * len);
        let back = s.theta_at_arc_length(s.arc_length(t1).unwrap()).unwrap();
        prop_assert!((back - t1).abs() < 1e-8 * (1.0 + t1));
        let w = s.width_function(t0 + 2.0 * PI).unwrap();
        prop_assert!((w - a).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_width_is_below_radial_width(a in 0.2f64..1.5, t in 8.0f64..60.0) {
        let s = Spiral::new(SpiralSpec::archimedean(a)).unwrap();
        let d = s.orthogonal_width(t).unwrap().u;
        prop_assert!(d > 0.0 && d <= 2.0 * PI * a * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Rotation-invariant eigenfunctions of the m-arm region are exactly the
    /// eigenfunctions of the single glued component.
    #[test]
    fn invariant_component_spectrum_is_contained_in_full(a in 0.6f64..1.2, m in 2usize..4, beta in 0.0f64..2.0) {
        let spec = SpiralSpec::multi_arm(a, m).with_beta(beta);
        let p = 2.0 * PI / m as f64;
        let domain = build_domain(&spec, m, beta, beta.max(p) + 3.0 * p, Cutoff::Dirichlet).unwrap();
        let params = MeshParams { grading: 1.0, ..MeshParams::new(8, 4) };
        let part = assemble(&StripMesh::build(&domain, params).unwrap()).unwrap();
        let full = assemble(&StripMesh::build_full(&domain, params).unwrap()).unwrap();
        let whole = dense_eigenvalues(&full.k, &full.m).unwrap();
        let sub = solve(&part, Request::Lowest { k: 4, window_top: 50.0 }, &SolverOptions::default()).unwrap();
        for e in &sub.eigenvalues {
            let nearest = whole.iter().map(|w| (w - e).abs()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 1e-9 * e, "{} missing from full spectrum (nearest gap {})", e, nearest);
        }
        prop_assert!(whole[0] <= sub.eigenvalues[0] * (1.0 + 1e-12));
    }
}
