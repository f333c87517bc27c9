//! Structured, graded quadrilateral meshes of the strip in (ρ, θ)
//! coordinates, with r = r_in(θ) + ρ (r_out(θ) − r_in(θ)).

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::domain::{Cutoff, StripDomain};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshParams {
    /// θ-cells per angular period 2π/m.
    pub n_theta_per_coil: usize,
    pub n_rho: usize,
    /// Geometric grading factor toward boundaries and the spiral tip.
    #[serde(default = "default_grading")]
    pub grading: f64,
    #[serde(default = "default_layers")]
    pub layers: usize,
}

fn default_grading() -> f64 {
    1.15
}

fn default_layers() -> usize {
    3
}

impl Default for MeshParams {
    fn default() -> Self {
        MeshParams { n_theta_per_coil: 64, n_rho: 16, grading: default_grading(), layers: default_layers() }
    }
}

impl MeshParams {
    pub fn new(n_theta_per_coil: usize, n_rho: usize) -> Self {
        MeshParams { n_theta_per_coil, n_rho, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Free,
    Dirichlet,
    GluedPrimary,
    GluedDuplicate,
    Origin,
}

impl NodeKind {
    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Free => "free",
            NodeKind::Dirichlet => "dirichlet",
            NodeKind::GluedPrimary => "glued-primary",
            NodeKind::GluedDuplicate => "glued-duplicate",
            NodeKind::Origin => "origin",
        }
    }
}

/// How r_in and r_out depend on θ.
#[derive(Clone, Debug)]
pub enum StripGeometry {
    Spiral(Box<StripDomain>),
    /// Ring r1 < r < r2 over a full turn, periodic in θ.
    Annulus { r1: f64, r2: f64 },
}

/// Boundary radii and their θ-derivatives at one angle.
#[derive(Clone, Copy, Debug)]
pub struct Radii {
    pub r_in: f64,
    pub dr_in: f64,
    pub r_out: f64,
    pub dr_out: f64,
}

impl StripGeometry {
    pub fn radii(&self, theta: f64) -> Radii {
        match self {
            StripGeometry::Annulus { r1, r2 } => Radii { r_in: *r1, dr_in: 0.0, r_out: *r2, dr_out: 0.0 },
            StripGeometry::Spiral(d) => {
                let s = &d.spiral;
                let jo = s.radius_jet(theta).expect("quadrature point inside the strip");
                let t = theta - d.period();
                let (r_in, dr_in) = if t > s.theta_min() {
                    let ji = s.radius_jet(t).expect("quadrature point inside the strip");
                    (ji.value(), ji.deriv(1))
                } else {
                    (0.0, 0.0)
                };
                Radii { r_in, dr_in, r_out: jo.value(), dr_out: jo.deriv(1) }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct StripMesh {
    pub geometry: StripGeometry,
    pub params: MeshParams,
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    /// r_out and r_in at each θ column.
    pub r_out: Vec<f64>,
    pub r_in: Vec<f64>,
    pub kind: Vec<NodeKind>,
    /// Free DOF index per node (`None` for Dirichlet nodes).
    pub dof: Vec<Option<usize>>,
    pub n_dof: usize,
    /// (primary, duplicate) node pairs.
    pub glue_pairs: Vec<(usize, usize)>,
    pub origin_dof: Option<usize>,
    /// θ-columns per period (the glue offset in column index).
    pub period_cols: usize,
    /// Rotated copies of the strip: 1 for the rotation-invariant component,
    /// m for the whole m-arm region.
    pub copies: usize,
}

/// Partition of [0, 1] into `n` cells graded geometrically toward both ends:
/// the cell at distance d < layers from an end is scaled by g^{-(layers − d)}.
pub fn graded_partition(n: usize, grading: f64, layers: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|j| {
            let d = j.min(n - 1 - j);
            if d < layers { grading.powi(-((layers - d) as i32)) } else { 1.0 }
        })
        .collect();
    let total: f64 = w.iter().sum();
    let mut x = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    x.push(0.0);
    for wj in &w[..n - 1] {
        acc += wj;
        x.push(acc / total);
    }
    x.push(1.0);
    x
}

impl StripMesh {
    pub fn nodes_per_column(&self) -> usize {
        self.rho.len()
    }

    pub fn nodes_per_copy(&self) -> usize {
        self.theta.len() * self.rho.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.copies * self.nodes_per_copy()
    }

    pub fn n_cells(&self) -> usize {
        (self.theta.len() - 1) * (self.rho.len() - 1)
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        i * self.rho.len() + j
    }

    /// Node (i, j) of copy c.
    pub fn node_in_copy(&self, c: usize, i: usize, j: usize) -> usize {
        c * self.nodes_per_copy() + self.node(i, j)
    }

    fn copy_rotation(&self) -> f64 {
        match &self.geometry {
            StripGeometry::Spiral(d) => d.period(),
            StripGeometry::Annulus { .. } => 0.0,
        }
    }

    /// (r, polar angle) of a node; copy c is rotated by 2πc/m.
    pub fn node_polar(&self, id: usize) -> (f64, f64) {
        let nr = self.rho.len();
        let (c, local) = (id / self.nodes_per_copy(), id % self.nodes_per_copy());
        let (i, j) = (local / nr, local % nr);
        let r = self.r_in[i] + self.rho[j] * (self.r_out[i] - self.r_in[i]);
        (r, self.theta[i] + c as f64 * self.copy_rotation())
    }

    pub fn node_cartesian(&self, id: usize) -> [f64; 2] {
        let (r, t) = self.node_polar(id);
        [r * t.cos(), r * t.sin()]
    }

    pub fn cutoff(&self) -> Option<Cutoff> {
        match &self.geometry {
            StripGeometry::Spiral(d) => Some(d.cutoff),
            StripGeometry::Annulus { .. } => None,
        }
    }

    pub fn domain(&self) -> Option<&StripDomain> {
        match &self.geometry {
            StripGeometry::Spiral(d) => Some(d),
            StripGeometry::Annulus { .. } => None,
        }
    }

    /// Strip mesh of a spiral domain; for m arms, the rotation-invariant component.
    pub fn build(domain: &StripDomain, params: MeshParams) -> Result<Self> {
        Self::build_copies(domain, params, 1)
    }

    /// Mesh of the whole m-arm region as m glued copies of the strip.
    pub fn build_full(domain: &StripDomain, params: MeshParams) -> Result<Self> {
        Self::build_copies(domain, params, domain.m)
    }

    fn build_copies(domain: &StripDomain, params: MeshParams, copies: usize) -> Result<Self> {
        let n = params.n_theta_per_coil;
        if n < 4 {
            return Err(Error::Config(format!("n_theta_per_coil must be at least 4 (got {n})")));
        }
        if params.n_rho < 4 {
            return Err(Error::Config(format!("n_rho must be at least 4 (got {})", params.n_rho)));
        }
        if !(params.grading >= 1.0) {
            return Err(Error::Config(format!("grading must be >= 1 (got {})", params.grading)));
        }
        let p = domain.period();
        let t0 = domain.theta_min();
        let beta = domain.beta;
        let (g, layers) = (params.grading, params.layers);

        // One period of θ offsets, with a breakpoint at the tip angle reduced mod P.
        let mut tip = if beta > t0 { (beta - t0).rem_euclid(p) } else { 0.0 };
        if tip < 1e-9 * p || p - tip < 1e-9 * p {
            tip = 0.0;
        }
        let mut pattern = Vec::with_capacity(n);
        if tip == 0.0 {
            pattern.extend(graded_partition(n, g, layers)[..n].iter().map(|x| x * p));
        } else {
            let n1 = ((n as f64 * tip / p).round() as usize).clamp(2, n - 2);
            let n2 = n - n1;
            pattern.extend(graded_partition(n1, g, layers)[..n1].iter().map(|x| x * tip));
            pattern.extend(graded_partition(n2, g, layers)[..n2].iter().map(|x| tip + x * (p - tip)));
        }
        let h_min = pattern.windows(2).map(|w| w[1] - w[0]).fold(p - pattern[n - 1], f64::min);

        let tmax = domain.theta_max;
        let mut theta = Vec::new();
        'outer: for k in 0.. {
            for &off in &pattern {
                let t = t0 + k as f64 * p + off;
                if t >= tmax - 0.3 * h_min {
                    break 'outer;
                }
                theta.push(t);
            }
        }
        theta.push(tmax);

        let rho = graded_partition(params.n_rho, g, layers);
        let spiral = &domain.spiral;
        let r_out: Vec<f64> = theta.iter().map(|&t| spiral.radius(t)).collect::<Result<_>>()?;
        let r_in: Vec<f64> = (0..theta.len()).map(|i| if i >= n { r_out[i - n] } else { 0.0 }).collect();

        let nt = theta.len();
        let nr = rho.len();
        let last_j = nr - 1;
        let btol = 1e-12 * (1.0 + beta.abs());
        let npc = nt * nr;
        let mut kind = vec![NodeKind::Free; copies * npc];
        let mut primary_of = vec![usize::MAX; copies * npc];
        for c in 0..copies {
            // The outer edge of copy c + 1 continues past the inner edge of copy c.
            let next = (c + 1) % copies;
            for i in 0..nt {
                for j in 0..nr {
                    let id = c * npc + i * nr + j;
                    kind[id] = if i == 0 || (j == 0 && i <= n) {
                        NodeKind::Origin
                    } else if i == nt - 1 && domain.cutoff == Cutoff::Dirichlet {
                        NodeKind::Dirichlet
                    } else if j == last_j {
                        if theta[i] < beta - btol { NodeKind::GluedPrimary } else { NodeKind::Dirichlet }
                    } else if j == 0 {
                        if theta[i - n] < beta - btol {
                            primary_of[id] = next * npc + (i - n) * nr + last_j;
                            NodeKind::GluedDuplicate
                        } else {
                            NodeKind::Dirichlet
                        }
                    } else {
                        NodeKind::Free
                    };
                }
            }
        }
        let mut mesh = StripMesh {
            geometry: StripGeometry::Spiral(Box::new(domain.clone())),
            params,
            theta,
            rho,
            r_out,
            r_in,
            kind,
            dof: Vec::new(),
            n_dof: 0,
            glue_pairs: Vec::new(),
            origin_dof: None,
            period_cols: n,
            copies,
        };
        mesh.number_dofs(&primary_of, domain.origin_is_free());
        Ok(mesh)
    }

    /// Ring r1 < r < r2 with Dirichlet walls, periodic in θ over a full turn.
    pub fn annulus(r1: f64, r2: f64, n_theta: usize, params: MeshParams) -> Result<Self> {
        if !(r1 > 0.0 && r2 > r1) {
            return Err(Error::Geometry(format!("annulus needs 0 < r1 < r2 (got {r1}, {r2})")));
        }
        if n_theta < 4 || params.n_rho < 4 {
            return Err(Error::Config("annulus mesh needs at least 4 cells per direction".into()));
        }
        let theta: Vec<f64> = (0..=n_theta).map(|i| 2.0 * PI * i as f64 / n_theta as f64).collect();
        let rho = graded_partition(params.n_rho, params.grading, params.layers);
        let nt = theta.len();
        let nr = rho.len();
        let mut kind = vec![NodeKind::Free; nt * nr];
        let mut primary_of = vec![usize::MAX; nt * nr];
        for i in 0..nt {
            for j in 0..nr {
                let id = i * nr + j;
                kind[id] = if j == 0 || j == nr - 1 {
                    NodeKind::Dirichlet
                } else if i == nt - 1 {
                    primary_of[id] = j;
                    NodeKind::GluedDuplicate
                } else if i == 0 {
                    NodeKind::GluedPrimary
                } else {
                    NodeKind::Free
                };
            }
        }
        let mut mesh = StripMesh {
            geometry: StripGeometry::Annulus { r1, r2 },
            params,
            theta,
            rho,
            r_out: vec![r2; nt],
            r_in: vec![r1; nt],
            kind,
            dof: Vec::new(),
            n_dof: 0,
            glue_pairs: Vec::new(),
            origin_dof: None,
            period_cols: n_theta,
            copies: 1,
        };
        mesh.number_dofs(&primary_of, false);
        Ok(mesh)
    }

    fn number_dofs(&mut self, primary_of: &[usize], origin_free: bool) {
        let mut dof = vec![None; self.kind.len()];
        let mut next = 0;
        let mut origin = None;
        let mut glue = Vec::new();
        // Duplicates may refer to primaries of a later copy: number them last.
        for id in 0..self.kind.len() {
            if self.kind[id] == NodeKind::GluedDuplicate {
                continue;
            }
            dof[id] = match self.kind[id] {
                NodeKind::Dirichlet | NodeKind::GluedDuplicate => None,
                NodeKind::Origin => {
                    if origin_free && origin.is_none() {
                        origin = Some(next);
                        next += 1;
                    }
                    origin
                }
                NodeKind::Free | NodeKind::GluedPrimary => {
                    next += 1;
                    Some(next - 1)
                }
            };
        }
        for id in 0..self.kind.len() {
            if self.kind[id] == NodeKind::GluedDuplicate {
                let p = primary_of[id];
                glue.push((p, id));
                dof[id] = dof[p];
            }
        }
        self.dof = dof;
        self.n_dof = next;
        self.glue_pairs = glue;
        self.origin_dof = origin;
    }

    /// Area of the strip in the r dr dθ measure with r interpolated
    /// bilinearly from the nodes (second-order accurate in the mesh size).
    pub fn nodal_area(&self) -> f64 {
        let nr = self.rho.len();
        let mut area = 0.0;
        let (gx, gw) = crate::quadrature::gauss_legendre(3);
        for i in 0..self.theta.len() - 1 {
            let ht = self.theta[i + 1] - self.theta[i];
            for j in 0..nr - 1 {
                let r = |ii: usize, jj: usize| self.r_in[ii] + self.rho[jj] * (self.r_out[ii] - self.r_in[ii]);
                let (r00, r01, r10, r11) = (r(i, j), r(i, j + 1), r(i + 1, j), r(i + 1, j + 1));
                for (a, wa) in gx.iter().zip(&gw) {
                    let t = 0.5 * (1.0 + a);
                    let r_lo = r00 + t * (r10 - r00);
                    let r_hi = r01 + t * (r11 - r01);
                    // ∫ r dr across the cell at fixed θ.
                    area += wa * 0.5 * ht * 0.5 * (r_hi * r_hi - r_lo * r_lo);
                }
            }
        }
        area * self.copies as f64
    }

    /// Debug dump `node_id,theta,rho,r,dof,kind` (dof = -1 when constrained).
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "node_id,theta,rho,r,dof,kind")?;
        let nr = self.rho.len();
        for id in 0..self.n_nodes() {
            let (r, t) = self.node_polar(id);
            let dof = self.dof[id].map_or(-1, |d| d as i64);
            writeln!(w, "{id},{t},{},{r},{dof},{}", self.rho[id % nr], self.kind[id].label())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::build_domain;
    use crate::geometry::SpiralSpec;

    fn cavity(beta: f64, cutoff: Cutoff) -> StripDomain {
        build_domain(&SpiralSpec::archimedean(0.5), 1, beta, beta + 6.0 * PI, cutoff).unwrap()
    }

    #[test]
    fn graded_partition_is_monotone_and_symmetric() {
        let x = graded_partition(10, 1.15, 3);
        assert_eq!(x.len(), 11);
        assert!(x.windows(2).all(|w| w[1] > w[0]));
        for j in 0..=10 {
            assert!((x[j] + x[10 - j] - 1.0).abs() < 1e-15);
        }
        assert!((x[1] - x[0]) < (x[5] - x[4]));
    }

    #[test]
    fn two_by_two_patch_count() {
        let mesh = StripMesh::annulus(1.0, 2.0, 4, MeshParams { grading: 1.0, ..MeshParams::new(4, 4) }).unwrap();
        // 4 periodic columns × 3 interior rows.
        assert_eq!(mesh.n_dof, 12);
        let small = StripMesh::annulus(1.0, 2.0, 4, MeshParams { n_rho: 4, ..MeshParams::new(4, 4) }).unwrap();
        assert_eq!(small.glue_pairs.len(), 3);
    }

    #[test]
    fn glue_pairs_match_grid_points_below_tip() {
        let d = cavity(10.5, Cutoff::Dirichlet);
        let mesh = StripMesh::build(&d, MeshParams::new(32, 6)).unwrap();
        let below = mesh.theta.iter().filter(|&&t| t > 0.0 && t < 10.5 - 1e-12).count();
        assert_eq!(mesh.glue_pairs.len(), below);
        assert!(mesh.theta.iter().any(|&t| (t - 10.5).abs() < 1e-12));
        for &(a, b) in &mesh.glue_pairs {
            let (pa, pb) = (mesh.node_cartesian(a), mesh.node_cartesian(b));
            assert!((pa[0] - pb[0]).abs() < 1e-12 && (pa[1] - pb[1]).abs() < 1e-12);
            assert_eq!(mesh.node_polar(a).0, mesh.node_polar(b).0);
            assert_eq!(mesh.dof[a], mesh.dof[b]);
        }
    }

    #[test]
    fn dof_count_identity() {
        for cutoff in [Cutoff::Dirichlet, Cutoff::Neumann] {
            let mesh = StripMesh::build(&cavity(4.0, cutoff), MeshParams::new(16, 5)).unwrap();
            let dirichlet = mesh.kind.iter().filter(|k| **k == NodeKind::Dirichlet).count();
            let origin = mesh.kind.iter().filter(|k| **k == NodeKind::Origin).count();
            let expect = mesh.n_nodes() - dirichlet - mesh.glue_pairs.len() - (origin - 1);
            assert_eq!(mesh.n_dof, expect);
        }
    }

    #[test]
    fn boundary_walls_are_dirichlet() {
        let d = cavity(3.0, Cutoff::Neumann);
        let mesh = StripMesh::build(&d, MeshParams::new(16, 5)).unwrap();
        let nr = mesh.rho.len();
        for (i, &t) in mesh.theta.iter().enumerate() {
            if t >= 3.0 {
                assert_eq!(mesh.kind[i * nr + nr - 1], NodeKind::Dirichlet);
            }
            if t - 2.0 * PI >= 3.0 {
                assert_eq!(mesh.kind[i * nr], NodeKind::Dirichlet);
            }
        }
    }

    #[test]
    fn refinement_keeps_shared_node_classification() {
        let d = cavity(2.0 * PI, Cutoff::Dirichlet);
        let coarse = StripMesh::build(&d, MeshParams { grading: 1.0, ..MeshParams::new(8, 4) }).unwrap();
        let fine = StripMesh::build(&d, MeshParams { grading: 1.0, ..MeshParams::new(16, 8) }).unwrap();
        for i in 0..coarse.theta.len() {
            for j in 0..coarse.rho.len() {
                let fi = fine.theta.iter().position(|&t| (t - coarse.theta[i]).abs() < 1e-12).unwrap();
                let fj = fine.rho.iter().position(|&r| (r - coarse.rho[j]).abs() < 1e-12).unwrap();
                assert_eq!(coarse.kind[coarse.node(i, j)], fine.kind[fine.node(fi, fj)]);
            }
        }
    }

    #[test]
    fn nodal_area_is_exact_for_quadratic_radius() {
        // r² is quadratic in θ, which the per-cell rule integrates exactly.
        let d = cavity(0.0, Cutoff::Dirichlet);
        let spiral = &d.spiral;
        let exact = crate::quadrature::integrate(
            |t| 0.5 * (spiral.radius(t).unwrap().powi(2) - spiral.inner_radius(t).powi(2)),
            0.0,
            d.theta_max,
            1e-13,
            1e-14,
        )
        .unwrap();
        for n in [8, 16, 32] {
            let m = StripMesh::build(&d, MeshParams { grading: 1.0, ..MeshParams::new(n, 4) }).unwrap();
            assert!((m.nodal_area() - exact).abs() < 1e-12 * exact);
        }
    }
}
