//! Bilinear finite-element assembly of the weighted form
//! q[ψ] = ∫∫ (r |∂_r ψ|² + r⁻¹ |∂_θ ψ|²) dr dθ and the mass ∫∫ ψ² r dr dθ.
//!
//! Shape functions are tensor-linear in (ρ, θ). With r = r_in(θ) + ρ w(θ),
//! the physical derivatives are ∂_r = w⁻¹ ∂_ρ and
//! ∂_θ|_r = ∂_θ|_ρ − w⁻¹ (r_in' + ρ w') ∂_ρ, and dr dθ = w dρ dθ.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Cutoff;
use crate::error::{Error, Result};
use crate::mesh::{Radii, StripMesh};
use crate::quadrature::gauss_legendre;
use crate::sparse::CsrMatrix;

#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub k: CsrMatrix,
    pub m: CsrMatrix,
    pub n: usize,
    /// max |i − j| over nonzeros in the mesh's natural DOF order.
    pub bandwidth: usize,
    pub quad_order: usize,
    pub cutoff: Option<Cutoff>,
}

#[derive(Clone, Copy, Debug)]
pub struct AssemblyOptions {
    pub quad_order: usize,
    pub parallel: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { quad_order: 3, parallel: true }
    }
}

pub fn assemble(mesh: &StripMesh) -> Result<AssembledSystem> {
    assemble_with(mesh, AssemblyOptions::default())
}

/// Quadrature data of one θ-cell: points, weights and boundary radii.
struct ColumnQuad {
    theta: Vec<f64>,
    weight: Vec<f64>,
    radii: Vec<Radii>,
}

fn column_quad(mesh: &StripMesh, i: usize, gx: &[f64], gw: &[f64]) -> ColumnQuad {
    let (t0, t1) = (mesh.theta[i], mesh.theta[i + 1]);
    let h = t1 - t0;
    let theta: Vec<f64> = gx.iter().map(|x| t0 + 0.5 * h * (1.0 + x)).collect();
    let radii = theta.iter().map(|&t| mesh.geometry.radii(t)).collect();
    ColumnQuad { theta, weight: gw.iter().map(|w| 0.5 * h * w).collect(), radii }
}

type Element = ([usize; 4], [[f64; 4]; 4], [[f64; 4]; 4]);

/// Element matrices of cell (i, j); local node order
/// (i, j), (i, j+1), (i+1, j), (i+1, j+1).
fn element(mesh: &StripMesh, i: usize, j: usize, col: &ColumnQuad, gx: &[f64], gw: &[f64]) -> Result<Element> {
    let (t0, t1) = (mesh.theta[i], mesh.theta[i + 1]);
    let (p0, p1) = (mesh.rho[j], mesh.rho[j + 1]);
    let (ht, hr) = (t1 - t0, p1 - p0);
    let nodes = [mesh.node(i, j), mesh.node(i, j + 1), mesh.node(i + 1, j), mesh.node(i + 1, j + 1)];
    let mut ke = [[0.0; 4]; 4];
    let mut me = [[0.0; 4]; 4];
    for (qt, &t) in col.theta.iter().enumerate() {
        let g = col.radii[qt];
        let w = g.r_out - g.r_in;
        let dw = g.dr_out - g.dr_in;
        let lt = [(t1 - t) / ht, (t - t0) / ht];
        let dlt = [-1.0 / ht, 1.0 / ht];
        for (x, wx) in gx.iter().zip(gw) {
            let rho = p0 + 0.5 * hr * (1.0 + x);
            let wq = col.weight[qt] * 0.5 * hr * wx;
            let r = g.r_in + rho * w;
            if !(r > 0.0) || !(w > 0.0) {
                return Err(Error::Assembly(format!(
                    "non-positive radius {r} or width {w} at quadrature point (rho = {rho}, theta = {t})"
                )));
            }
            let r_theta = g.dr_in + rho * dw;
            let lr = [(p1 - rho) / hr, (rho - p0) / hr];
            let dlr = [-1.0 / hr, 1.0 / hr];
            let mut n = [0.0; 4];
            let mut dr = [0.0; 4];
            let mut dth = [0.0; 4];
            for a in 0..4 {
                let (at, ar) = (a / 2, a % 2);
                n[a] = lt[at] * lr[ar];
                let n_rho = lt[at] * dlr[ar];
                let n_theta = dlt[at] * lr[ar];
                dr[a] = n_rho / w;
                dth[a] = n_theta - n_rho * r_theta / w;
            }
            let jac = wq * w;
            for a in 0..4 {
                for b in 0..4 {
                    ke[a][b] += jac * (r * dr[a] * dr[b] + dth[a] * dth[b] / r);
                    me[a][b] += jac * r * n[a] * n[b];
                }
            }
        }
    }
    Ok((nodes, ke, me))
}

type Triplets = (Vec<(usize, usize, f64)>, Vec<(usize, usize, f64)>);

fn column_triplets(mesh: &StripMesh, i: usize, gx: &[f64], gw: &[f64]) -> Result<Triplets> {
    let col = column_quad(mesh, i, gx, gw);
    let mut kt = Vec::new();
    let mut mt = Vec::new();
    for j in 0..mesh.rho.len() - 1 {
        let (nodes, ke, me) = element(mesh, i, j, &col, gx, gw)?;
        // Copies are rotations of each other and share element matrices.
        for c in 0..mesh.copies {
            let shift = c * mesh.nodes_per_copy();
            for a in 0..4 {
                let Some(da) = mesh.dof[nodes[a] + shift] else { continue };
                for b in 0..4 {
                    let Some(db) = mesh.dof[nodes[b] + shift] else { continue };
                    kt.push((da, db, ke[a][b]));
                    mt.push((da, db, me[a][b]));
                }
            }
        }
    }
    Ok((kt, mt))
}

pub fn assemble_with(mesh: &StripMesh, opts: AssemblyOptions) -> Result<AssembledSystem> {
    let (gx, gw) = gauss_legendre(opts.quad_order);
    let cols = mesh.theta.len() - 1;
    let parts: Vec<Triplets> = if opts.parallel {
        (0..cols).into_par_iter().map(|i| column_triplets(mesh, i, &gx, &gw)).collect::<Result<_>>()?
    } else {
        (0..cols).map(|i| column_triplets(mesh, i, &gx, &gw)).collect::<Result<_>>()?
    };
    let total: usize = parts.iter().map(|p| p.0.len()).sum();
    let mut kt = Vec::with_capacity(total);
    let mut mt = Vec::with_capacity(total);
    for (k, m) in parts {
        kt.extend(k);
        mt.extend(m);
    }
    let n = mesh.n_dof;
    let k = CsrMatrix::from_triplets(n, &kt);
    let m = CsrMatrix::from_triplets(n, &mt);
    let bandwidth = (0..n)
        .flat_map(|i| k.row(i).map(move |(j, _)| i.abs_diff(j)))
        .max()
        .unwrap_or(0);
    Ok(AssembledSystem { k, m, n, bandwidth, quad_order: opts.quad_order, cutoff: mesh.cutoff() })
}

/// Mass of the constant function over the whole mesh, constraints ignored:
/// the area of the strip in the r dr dθ measure.
pub fn total_mass(mesh: &StripMesh, quad_order: usize) -> Result<f64> {
    let (gx, gw) = gauss_legendre(quad_order);
    let mut total = 0.0;
    for i in 0..mesh.theta.len() - 1 {
        let col = column_quad(mesh, i, &gx, &gw);
        for j in 0..mesh.rho.len() - 1 {
            let (_, _, me) = element(mesh, i, j, &col, &gx, &gw)?;
            total += me.iter().flatten().sum::<f64>();
        }
    }
    Ok(total * mesh.copies as f64)
}

/// Expand a DOF vector to nodal values (zero on Dirichlet nodes).
pub fn nodal_values(mesh: &StripMesh, v: &[f64]) -> Vec<f64> {
    mesh.dof.iter().map(|d| d.map_or(0.0, |k| v[k])).collect()
}

/// Per-column envelope max |ψ| and the start θ* of its final strictly decreasing run.
#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenZone {
    pub theta: Vec<f64>,
    pub envelope: Vec<f64>,
    pub theta_star: f64,
    /// Exponential decay rate of the envelope over the decreasing tail
    /// (least squares on log envelope, Dirichlet end column excluded).
    pub decay_rate: f64,
}

pub fn forbidden_zone_diagnostic(mesh: &StripMesh, v: &[f64]) -> ForbiddenZone {
    let nodal = nodal_values(mesh, v);
    let nr = mesh.rho.len();
    let npc = mesh.nodes_per_copy();
    let envelope: Vec<f64> = (0..mesh.theta.len())
        .map(|i| {
            (0..mesh.copies)
                .flat_map(|c| &nodal[c * npc + i * nr..c * npc + (i + 1) * nr])
                .fold(0.0f64, |m, x| m.max(x.abs()))
        })
        .collect();
    let last = envelope.len() - 1;
    let mut start = last;
    while start > 0 && envelope[start] < envelope[start - 1] {
        start -= 1;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = (start..last)
        .filter(|&i| envelope[i] > 0.0)
        .map(|i| (mesh.theta[i], envelope[i].ln()))
        .unzip();
    let decay_rate = if xs.len() >= 2 {
        -crate::fit::linear_fit(&xs, &ys).slope
    } else {
        0.0
    };
    ForbiddenZone { theta: mesh.theta.clone(), envelope, theta_star: mesh.theta[start], decay_rate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_domain, Cutoff};
    use crate::geometry::SpiralSpec;
    use crate::mesh::MeshParams;
    use std::f64::consts::PI;

    fn small_mesh() -> StripMesh {
        let d = build_domain(&SpiralSpec::archimedean(0.5), 1, 4.0, 4.0 + 4.0 * PI, Cutoff::Neumann).unwrap();
        StripMesh::build(&d, MeshParams::new(12, 5)).unwrap()
    }

    #[test]
    fn matrices_are_symmetric_and_definite() {
        let mesh = small_mesh();
        let sys = assemble(&mesh).unwrap();
        assert!(sys.k.asymmetry() < 1e-13);
        assert!(sys.m.asymmetry() < 1e-13);
        let x: Vec<f64> = (0..sys.n).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        assert!(sys.k.inner(&x, &x) > 0.0);
        assert!(sys.m.inner(&x, &x) > 0.0);
        for i in (0..sys.n).filter(|&i| Some(i) != mesh.origin_dof) {
            assert!(sys.k.row(i).count() <= 9 + 6);
        }
    }

    #[test]
    fn constants_are_in_the_kernel_away_from_walls() {
        let mesh = small_mesh();
        let sys = assemble(&mesh).unwrap();
        let ones = vec![1.0; sys.n];
        let k1 = sys.k.mul(&ones);
        let nr = mesh.rho.len();
        // A free node whose neighbours are all free.
        let (i, j) = (mesh.theta.len() / 2, nr / 2);
        let d = mesh.dof[mesh.node(i, j)].unwrap();
        let scale = sys.k.get(d, d);
        assert!(k1[d].abs() < 1e-12 * scale);
    }

    #[test]
    fn serial_and_parallel_are_bitwise_identical() {
        let mesh = small_mesh();
        let a = assemble_with(&mesh, AssemblyOptions { quad_order: 3, parallel: true }).unwrap();
        let b = assemble_with(&mesh, AssemblyOptions { quad_order: 3, parallel: false }).unwrap();
        assert_eq!(a.k, b.k);
        assert_eq!(a.m, b.m);
    }

    #[test]
    fn total_mass_matches_area() {
        let d = build_domain(&SpiralSpec::archimedean(0.5), 1, 3.0, 3.0 + 4.0 * PI, Cutoff::Neumann).unwrap();
        let mesh = StripMesh::build(&d, MeshParams::new(16, 6)).unwrap();
        let mass = total_mass(&mesh, 3).unwrap();
        let area = crate::quadrature::integrate(
            |t| 0.5 * (d.r_out(t).powi(2) - d.r_in(t).powi(2)),
            0.0,
            d.theta_max,
            1e-12,
            1e-13,
        )
        .unwrap();
        assert!((mass - area).abs() < 1e-10 * area, "{mass} vs {area}");
    }

    #[test]
    fn constant_vector_has_no_forbidden_zone() {
        let mesh = small_mesh();
        let z = forbidden_zone_diagnostic(&mesh, &vec![1.0; mesh.n_dof]);
        assert_eq!(z.theta_star, *mesh.theta.last().unwrap());
    }
}
