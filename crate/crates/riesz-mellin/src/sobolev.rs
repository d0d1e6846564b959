//! Fractional Sobolev machinery on meshed curves: the Slobodeckii
//! double-integral seminorm, the tilde norm on R₊ with its Hardy weight,
//! the Mellin-side H^{1/2} characterisation, P1 Gram matrices, and the
//! discrete continuity-modulus estimator
//! σ_h = sqrt(λ_max(Aᵀ M⁻¹ S M⁻¹ A, M)).

use crate::error::{Error, Result};
use crate::geometry::{CornerFrame, Point2, PolygonBoundary};
use crate::mellin::{auto_line, mellin_forward, GridFunction};
use crate::quad::{pairwise_sum, trapezoid_weights, GaussRule};
use nalgebra::DMatrix;
use std::io::Write as IoWrite;

/// Whether the ambient curve continues past the mesh ends. The Slobodeckii
/// seminorm integrates the far side against the zero extension, adding
/// ∫ v(x)² / dist(x, end) along the mesh (arc distance; exact on the ray
/// containing the end, a mild underestimate across a corner).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarField {
    /// Closed curve or a curve that IS the whole domain.
    None,
    /// Domain continues beyond the last node only (half-line meshes on R₊).
    BeyondLastNode,
    /// Domain continues beyond both ends (truncated cones).
    BeyondBothEnds,
}

/// Polyline mesh with P1 nodal basis.
#[derive(Debug, Clone)]
pub struct CurveMesh {
    pub nodes: Vec<Point2>,
    pub closed: bool,
    pub far_field: FarField,
    /// Cumulative arc length per node.
    arc: Vec<f64>,
}

impl CurveMesh {
    pub fn open(nodes: Vec<Point2>, far_field: FarField) -> Result<Self> {
        Self::build(nodes, false, far_field)
    }

    fn build(nodes: Vec<Point2>, closed: bool, far_field: FarField) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Geometry("mesh needs at least 2 nodes".into()));
        }
        let mut arc = vec![0.0];
        for i in 1..nodes.len() {
            let h = nodes[i].dist(nodes[i - 1]);
            if h <= 0.0 {
                return Err(Error::Assembly(format!("zero-length element {}", i - 1)));
            }
            arc.push(arc[i - 1] + h);
        }
        Ok(Self {
            nodes,
            closed,
            far_field,
            arc,
        })
    }

    /// Mesh of a closed polygon with roughly `target_elements` elements;
    /// every polygon vertex is a mesh node.
    pub fn polygon(boundary: &PolygonBoundary, target_elements: usize) -> Result<Self> {
        let total = boundary.total_length();
        let mut nodes = Vec::new();
        for i in 0..boundary.n_vertices() {
            let len = boundary.edge_length(i);
            let pieces = ((target_elements as f64 * len / total).round() as usize).max(1);
            let s0 = boundary.vertex_position(i);
            for k in 0..pieces {
                nodes.push(boundary.point_at(s0 + len * k as f64 / pieces as f64));
            }
        }
        let mut mesh = Self::build(nodes, true, FarField::None)?;
        mesh.arc.push(mesh.arc.last().unwrap() + mesh.nodes[mesh.nodes.len() - 1].dist(mesh.nodes[0]));
        Ok(mesh)
    }

    /// Uniform interval mesh [a, b] on the x-axis.
    pub fn interval(a: f64, b: f64, elements: usize, far_field: FarField) -> Result<Self> {
        let nodes = (0..=elements)
            .map(|k| Point2::new(a + (b - a) * k as f64 / elements as f64, 0.0))
            .collect();
        Self::build(nodes, false, far_field)
    }

    /// Interval mesh graded toward `a` with node positions
    /// a + (b-a)(k/n)^exponent.
    pub fn interval_graded(
        a: f64,
        b: f64,
        elements: usize,
        exponent: f64,
        far_field: FarField,
    ) -> Result<Self> {
        let nodes = (0..=elements)
            .map(|k| {
                let t = (k as f64 / elements as f64).powf(exponent);
                Point2::new(a + (b - a) * t, 0.0)
            })
            .collect();
        Self::build(nodes, false, far_field)
    }

    /// Interval mesh with nodes at prescribed x positions.
    pub fn from_x_nodes(xs: &[f64], far_field: FarField) -> Result<Self> {
        Self::build(xs.iter().map(|&x| Point2::new(x, 0.0)).collect(), false, far_field)
    }

    /// Truncated cone: both rays of a corner frame up to `length`, meshed
    /// with `per_ray` elements each; node ordering runs from the far end of
    /// the minus ray through the corner to the far end of the plus ray.
    pub fn cone(frame: &CornerFrame, length: f64, per_ray: usize) -> Result<Self> {
        let mut nodes = Vec::with_capacity(2 * per_ray + 1);
        for k in (1..=per_ray).rev() {
            nodes.push(frame.on_minus_ray(length * k as f64 / per_ray as f64));
        }
        nodes.push(frame.vertex);
        for k in 1..=per_ray {
            nodes.push(frame.on_plus_ray(length * k as f64 / per_ray as f64));
        }
        Self::build(nodes, false, FarField::BeyondBothEnds)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        if self.closed {
            self.nodes.len()
        } else {
            self.nodes.len() - 1
        }
    }

    /// Element endpoints (node indices).
    pub fn element(&self, e: usize) -> (usize, usize) {
        let n = self.nodes.len();
        (e, (e + 1) % n)
    }

    pub fn element_length(&self, e: usize) -> f64 {
        let (i, j) = self.element(e);
        self.nodes[i].dist(self.nodes[j])
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        *self.arc.last().unwrap()
    }

    /// Arc coordinate of node i.
    pub fn node_arc(&self, i: usize) -> f64 {
        self.arc[i]
    }

    fn elements_share_node(&self, e: usize, f: usize) -> Option<(usize, usize, usize)> {
        // Returns (shared, other_e, other_f) as node indices.
        let (a, b) = self.element(e);
        let (c, d) = self.element(f);
        for &(s, oe) in &[(a, b), (b, a)] {
            for &(t, of) in &[(c, d), (d, c)] {
                if s == t {
                    return Some((s, oe, of));
                }
            }
        }
        None
    }
}

/// P1 space: one hat per node, minus the constrained ones.
#[derive(Debug, Clone)]
pub struct BoundaryFESpace {
    pub mesh: CurveMesh,
    /// node index -> dof index (None if constrained).
    node_to_dof: Vec<Option<usize>>,
    dof_to_node: Vec<usize>,
}

impl BoundaryFESpace {
    pub fn all_nodes(mesh: CurveMesh) -> Self {
        let n = mesh.n_nodes();
        Self {
            mesh,
            node_to_dof: (0..n).map(Some).collect(),
            dof_to_node: (0..n).collect(),
        }
    }

    /// Constrain the given nodes to zero (they carry no dof).
    pub fn with_constraints(mesh: CurveMesh, constrained: &[usize]) -> Self {
        let n = mesh.n_nodes();
        let mut node_to_dof = vec![None; n];
        let mut dof_to_node = Vec::new();
        for i in 0..n {
            if !constrained.contains(&i) {
                node_to_dof[i] = Some(dof_to_node.len());
                dof_to_node.push(i);
            }
        }
        Self {
            mesh,
            node_to_dof,
            dof_to_node,
        }
    }

    /// Open mesh with both endpoint nodes constrained (zero trace).
    pub fn zero_ends(mesh: CurveMesh) -> Self {
        let n = mesh.n_nodes();
        Self::with_constraints(mesh, &[0, n - 1])
    }

    pub fn n_dofs(&self) -> usize {
        self.dof_to_node.len()
    }

    pub fn dof_node(&self, dof: usize) -> usize {
        self.dof_to_node[dof]
    }

    pub fn node_dof(&self, node: usize) -> Option<usize> {
        self.node_to_dof[node]
    }

    /// Dof vector sampling a function of arc position... nodes are points;
    /// for interval meshes this samples f at the node x-coordinates.
    pub fn interpolate_x(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.dof_to_node
            .iter()
            .map(|&i| f(self.mesh.nodes[i].x))
            .collect()
    }
}

/// Gram matrices of one space: mass M, H^{1/2} Gram S = M + Slobodeckii,
/// and optionally the tilde Gram with the doubled Hardy term.
#[derive(Debug, Clone)]
pub struct NormMatrices {
    pub mass: DMatrix<f64>,
    pub sobolev_half: DMatrix<f64>,
    pub sobolev_half_tilde: Option<DMatrix<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramFlavor {
    Standard,
    Tilde,
}

/// Mass matrix (exact per element).
pub fn mass_matrix(space: &BoundaryFESpace) -> DMatrix<f64> {
    let nd = space.n_dofs();
    let mut m = DMatrix::zeros(nd, nd);
    for e in 0..space.mesh.n_elements() {
        let (i, j) = space.mesh.element(e);
        let h = space.mesh.element_length(e);
        let di = space.node_dof(i);
        let dj = space.node_dof(j);
        if let Some(a) = di {
            m[(a, a)] += h / 3.0;
        }
        if let Some(b) = dj {
            m[(b, b)] += h / 3.0;
        }
        if let (Some(a), Some(b)) = (di, dj) {
            m[(a, b)] += h / 6.0;
            m[(b, a)] += h / 6.0;
        }
    }
    m
}

/// H¹ stiffness matrix ∫ φ'ψ' along the curve (used as a contrast target
/// norm that the boundary operator does NOT map into).
pub fn stiffness_matrix(space: &BoundaryFESpace) -> DMatrix<f64> {
    let nd = space.n_dofs();
    let mut k = DMatrix::zeros(nd, nd);
    for e in 0..space.mesh.n_elements() {
        let (i, j) = space.mesh.element(e);
        let h = space.mesh.element_length(e);
        let di = space.node_dof(i);
        let dj = space.node_dof(j);
        if let Some(a) = di {
            k[(a, a)] += 1.0 / h;
        }
        if let Some(b) = dj {
            k[(b, b)] += 1.0 / h;
        }
        if let (Some(a), Some(b)) = (di, dj) {
            k[(a, b)] -= 1.0 / h;
            k[(b, a)] -= 1.0 / h;
        }
    }
    k
}

// Local hat evaluation: value of the hat of `node` at the point of element
// `e` with barycentric coordinate ξ ∈ [0,1] (0 at the first node of e).
fn hat_on_element(mesh: &CurveMesh, node: usize, e: usize, xi: f64) -> f64 {
    let (i, j) = mesh.element(e);
    if node == i {
        1.0 - xi
    } else if node == j {
        xi
    } else {
        0.0
    }
}

fn element_point(mesh: &CurveMesh, e: usize, xi: f64) -> Point2 {
    let (i, j) = mesh.element(e);
    mesh.nodes[i] + (mesh.nodes[j] - mesh.nodes[i]) * xi
}

/// Quadrature for a non-touching element pair restricted to parameter
/// sub-ranges. Splits the longer sub-element until the gap is at least the
/// larger sub-length, then applies tensor Gauss (order 10 when the gap is
/// under twice that length, 6 otherwise).
#[allow(clippy::too_many_arguments)]
fn separated_pair_recursive(
    mesh: &CurveMesh,
    e: usize,
    e_range: (f64, f64),
    f: usize,
    f_range: (f64, f64),
    local_nodes: &[usize],
    rule6: &GaussRule,
    rule10: &GaussRule,
    depth: usize,
    emit: &mut impl FnMut(usize, usize, f64),
) {
    let he = mesh.element_length(e) * (e_range.1 - e_range.0);
    let hf = mesh.element_length(f) * (f_range.1 - f_range.0);
    let ec = element_point(mesh, e, 0.5 * (e_range.0 + e_range.1));
    let fc = element_point(mesh, f, 0.5 * (f_range.0 + f_range.1));
    let gap = ec.dist(fc) - 0.5 * (he + hf);
    let h_max = he.max(hf);
    if depth > 0 && gap < h_max {
        if he >= hf {
            let mid = 0.5 * (e_range.0 + e_range.1);
            for sub in [(e_range.0, mid), (mid, e_range.1)] {
                separated_pair_recursive(
                    mesh, e, sub, f, f_range, local_nodes, rule6, rule10, depth - 1, emit,
                );
            }
        } else {
            let mid = 0.5 * (f_range.0 + f_range.1);
            for sub in [(f_range.0, mid), (mid, f_range.1)] {
                separated_pair_recursive(
                    mesh, e, e_range, f, sub, local_nodes, rule6, rule10, depth - 1, emit,
                );
            }
        }
        return;
    }
    let rule = if gap < 2.0 * h_max { rule10 } else { rule6 };
    let jac_scale = mesh.element_length(e) * mesh.element_length(f);
    for (xe, we) in rule.mapped(e_range.0, e_range.1) {
        for (xf, wf) in rule.mapped(f_range.0, f_range.1) {
            let x = element_point(mesh, e, xe);
            let y = element_point(mesh, f, xf);
            let d2 = x.dist(y).powi(2);
            let jac = jac_scale * we * wf;
            for &a in local_nodes {
                let fa = hat_on_element(mesh, a, e, xe) - hat_on_element(mesh, a, f, xf);
                if fa == 0.0 {
                    continue;
                }
                for &b in local_nodes {
                    let fb = hat_on_element(mesh, b, e, xe) - hat_on_element(mesh, b, f, xf);
                    if fb != 0.0 {
                        emit(a, b, jac * fa * fb / d2);
                    }
                }
            }
        }
    }
}

/// Slobodeckii bilinear-form matrix over the mesh (node pairs constrained
/// away), by the element-pair loop:
/// Σ_{E,F} ∫_E∫_F (φ_a(x)-φ_a(y))(φ_b(x)-φ_b(y)) / |x-y|² dx dy.
///
/// Identical pairs are exact (the P1 integrand is the constant
/// slope_a·slope_b); touching pairs use the two Duffy maps that cancel the
/// |x-y|² vanishing; separated pairs use tensor Gauss with order raised for
/// near pairs. Far-field corrections per [`FarField`] account for the zero
/// extension beyond open mesh ends.
pub fn slobodeckii_matrix(space: &BoundaryFESpace) -> DMatrix<f64> {
    let mesh = &space.mesh;
    let nd = space.n_dofs();
    let ne = mesh.n_elements();
    let mut s = DMatrix::zeros(nd, nd);
    let rule6 = GaussRule::new(6);
    let rule10 = GaussRule::new(10);
    let rule_duffy = GaussRule::new(12);

    let scatter = |s: &mut DMatrix<f64>, a: usize, b: usize, v: f64| {
        if let (Some(da), Some(db)) = (space.node_dof(a), space.node_dof(b)) {
            s[(da, db)] += v;
        }
    };

    for e in 0..ne {
        let (ei, ej) = mesh.element(e);
        let he = mesh.element_length(e);
        for f in 0..ne {
            let (fi, fj) = mesh.element(f);
            let hf = mesh.element_length(f);
            if e == f {
                // (φ_a(x)-φ_a(y))/(x-y) is the constant hat slope on E.
                for &a in &[ei, ej] {
                    let sa = if a == ei { -1.0 / he } else { 1.0 / he };
                    for &b in &[ei, ej] {
                        let sb = if b == ei { -1.0 / he } else { 1.0 / he };
                        scatter(&mut s, a, b, sa * sb * he * he);
                    }
                }
                continue;
            }
            let local_nodes: Vec<usize> = {
                let mut v = vec![ei, ej, fi, fj];
                v.sort_unstable();
                v.dedup();
                v
            };
            if let Some((shared, _, _)) = mesh.elements_share_node(e, f) {
                // Duffy pair: parameterise both elements by the distance
                // from the shared node; {v<=u} and {u<v} each map to a
                // smooth integrand on [0,1]² after (u, v) = (w, wz).
                let pe = mesh.nodes[shared];
                let (eo, fo) = {
                    let other = |el: usize| {
                        let (i, j) = mesh.element(el);
                        if i == shared {
                            j
                        } else {
                            i
                        }
                    };
                    (other(e), other(f))
                };
                let dir_e = (mesh.nodes[eo] - pe).normalized();
                let dir_f = (mesh.nodes[fo] - pe).normalized();
                // xi on element measured from its own first node.
                let xi_of = |el: usize, dist: f64, h: f64| {
                    let (i, _) = mesh.element(el);
                    if i == shared {
                        dist / h
                    } else {
                        1.0 - dist / h
                    }
                };
                for half in 0..2 {
                    for (w01, wu) in rule_duffy.mapped(0.0, 1.0) {
                        for (z01, wz) in rule_duffy.mapped(0.0, 1.0) {
                            // half 0: u = he·w, v = hf·w·z; half 1 swapped.
                            let (du, dv) = if half == 0 {
                                (he * w01, hf * w01 * z01)
                            } else {
                                (he * w01 * z01, hf * w01)
                            };
                            let x = pe + dir_e * du;
                            let y = pe + dir_f * dv;
                            let d2 = x.dist(y).powi(2);
                            if d2 == 0.0 {
                                continue;
                            }
                            // Jacobians: du dv = he·hf·w dw dz.
                            let jac = he * hf * w01 * wu * wz;
                            let xie = xi_of(e, du, he);
                            let xif = xi_of(f, dv, hf);
                            for &a in &local_nodes {
                                let fa = hat_on_element(mesh, a, e, xie)
                                    - hat_on_element(mesh, a, f, xif);
                                if fa == 0.0 {
                                    continue;
                                }
                                for &b in &local_nodes {
                                    let fb = hat_on_element(mesh, b, e, xie)
                                        - hat_on_element(mesh, b, f, xif);
                                    if fb != 0.0 {
                                        scatter(&mut s, a, b, jac * fa * fb / d2);
                                    }
                                }
                            }
                        }
                    }
                }
                continue;
            }
            // Separated pair: recursive subdivision until the sub-pair gap
            // dominates the sub-element sizes, then tensor Gauss. Near
            // pairs drive these seminorms, so the plain rule on them is not
            // enough.
            separated_pair_recursive(
                mesh,
                e,
                (0.0, 1.0),
                f,
                (0.0, 1.0),
                &local_nodes,
                &rule6,
                &rule10,
                12,
                &mut |a, b, v| scatter(&mut s, a, b, v),
            );
        }
    }

    // Far-field: the domain continues past open ends with the zero
    // extension, contributing 2 ∫ φ_a φ_b / dist(x, end) dx per end.
    if !mesh.closed && mesh.far_field != FarField::None {
        let total = mesh.length();
        let rule = GaussRule::new(12);
        let add_end = |s: &mut DMatrix<f64>, at_last: bool| {
            for e in 0..ne {
                let (i, j) = mesh.element(e);
                let a0 = mesh.node_arc(i);
                let h = mesh.element_length(e);
                for (xi, w) in rule.mapped(0.0, 1.0) {
                    let arc_x = a0 + h * xi;
                    let dist = if at_last { total - arc_x } else { arc_x };
                    if dist <= 0.0 {
                        continue;
                    }
                    for &a in &[i, j] {
                        let fa = hat_on_element(mesh, a, e, xi);
                        if fa == 0.0 {
                            continue;
                        }
                        for &b in &[i, j] {
                            let fb = hat_on_element(mesh, b, e, xi);
                            if fb != 0.0 {
                                scatter(s, a, b, 2.0 * w * h * fa * fb / dist);
                            }
                        }
                    }
                }
            }
        };
        add_end(&mut s, true);
        if mesh.far_field == FarField::BeyondBothEnds {
            add_end(&mut s, false);
        }
    }

    // Enforce exact symmetry (quadrature is symmetric up to roundoff).
    let st = s.transpose();
    0.5 * (s + st)
}

/// Hardy-weight matrix ∫ φ_a(x) φ_b(x) dx / x on an x-axis mesh. The mesh
/// may start at 0 only if the node there is constrained; a free dof at 0
/// carries a divergent weight.
pub fn hardy_weight_matrix(space: &BoundaryFESpace) -> Result<DMatrix<f64>> {
    let mesh = &space.mesh;
    if mesh.closed {
        return Err(Error::HardyWeight("hardy weight needs an x-axis mesh".into()));
    }
    if mesh.nodes[0].x <= 1e-300 && space.node_dof(0).is_some() {
        return Err(Error::HardyWeight(
            "free dof at x = 0: ∫|v|²dx/x diverges unless v(0) = 0".into(),
        ));
    }
    if mesh.nodes[0].x < 0.0 {
        return Err(Error::HardyWeight("mesh extends to negative x".into()));
    }
    let nd = space.n_dofs();
    let mut hmat = DMatrix::zeros(nd, nd);
    let rule = GaussRule::new(12);
    for e in 0..mesh.n_elements() {
        let (i, j) = mesh.element(e);
        let x0 = mesh.nodes[i].x;
        let x1 = mesh.nodes[j].x;
        let h = x1 - x0;
        for (xi, w) in rule.mapped(0.0, 1.0) {
            let x = x0 + h * xi;
            for &a in &[i, j] {
                if let Some(da) = space.node_dof(a) {
                    let fa = hat_on_element(mesh, a, e, xi);
                    for &b in &[i, j] {
                        if let Some(db) = space.node_dof(b) {
                            let fb = hat_on_element(mesh, b, e, xi);
                            hmat[(da, db)] += w * h * fa * fb / x;
                        }
                    }
                }
            }
        }
    }
    Ok(hmat)
}

/// Assembled Gram matrices: S = M + Slobodeckii, and for the tilde flavor
/// S̃ = S + 2·Hardy.
pub fn gram_matrices(space: &BoundaryFESpace, flavor: GramFlavor) -> Result<NormMatrices> {
    let mass = mass_matrix(space);
    let slob = slobodeckii_matrix(space);
    let sobolev_half = &mass + &slob;
    let sobolev_half_tilde = match flavor {
        GramFlavor::Standard => None,
        GramFlavor::Tilde => {
            let hardy = hardy_weight_matrix(space)?;
            Some(&sobolev_half + 2.0 * hardy)
        }
    };
    Ok(NormMatrices {
        mass,
        sobolev_half,
        sobolev_half_tilde,
    })
}

/// Scalar Slobodeckii seminorm of the P1 interpolant with the given nodal
/// values.
pub fn slobodeckii_seminorm(node_values: &[f64], mesh: &CurveMesh) -> Result<f64> {
    if node_values.len() != mesh.n_nodes() {
        return Err(Error::Grid(format!(
            "{} values for {} nodes",
            node_values.len(),
            mesh.n_nodes()
        )));
    }
    let space = BoundaryFESpace::all_nodes(mesh.clone());
    let s = slobodeckii_matrix(&space);
    let v = nalgebra::DVector::from_column_slice(node_values);
    Ok((v.transpose() * &s * &v)[(0, 0)].max(0.0).sqrt())
}

/// Squared tilde norm on R₊:
/// ‖v‖² = |v|²_{H^{1/2}(R₊)} + 2∫|v|²dx/x + ‖v‖²_{L²}.
pub fn tilde_half_norm(node_values: &[f64], mesh: &CurveMesh) -> Result<f64> {
    if node_values.len() != mesh.n_nodes() {
        return Err(Error::Grid("value/node count mismatch".into()));
    }
    if mesh.nodes[0].x <= 1e-300 && node_values[0] != 0.0 {
        return Err(Error::HardyWeight(
            "nonzero value at the origin: Hardy integral diverges".into(),
        ));
    }
    let constrained: Vec<usize> = if mesh.nodes[0].x <= 1e-300 { vec![0] } else { vec![] };
    let space = BoundaryFESpace::with_constraints(mesh.clone(), &constrained);
    let slob = slobodeckii_matrix(&space);
    let hardy = hardy_weight_matrix(&space)?;
    let mass = mass_matrix(&space);
    let dofs: Vec<f64> = (0..space.n_dofs())
        .map(|d| node_values[space.dof_node(d)])
        .collect();
    let v = nalgebra::DVector::from_column_slice(&dofs);
    let quad = |m: &DMatrix<f64>| (v.transpose() * m * &v)[(0, 0)];
    Ok((quad(&slob) + 2.0 * quad(&hardy) + quad(&mass)).sqrt())
}

/// Mellin-side H^{1/2}(R₊) seminorm characterisation:
/// (1/2π) ∫ |λ|²/(1+|λ|) |φ̂(λ)|² dξ on Re λ = 0. Returns the squared
/// quantity (the integral itself).
pub fn mellin_half_seminorm(phi: &GridFunction) -> Result<f64> {
    if phi.values.iter().all(|v| v.norm() == 0.0) {
        return Ok(0.0);
    }
    let line = auto_line(phi, 0.0)?;
    let samples = mellin_forward(phi, &line)?;
    let w = trapezoid_weights(line.m);
    let terms: Vec<f64> = (0..line.m)
        .map(|j| {
            let xi = line.xi(j);
            samples.values[j].norm_sqr() * xi * xi / (1.0 + xi.abs()) * w[j]
        })
        .collect();
    Ok(pairwise_sum(&terms) * line.spacing() / (2.0 * std::f64::consts::PI))
}

/// Discrete continuity modulus of an operator matrix A measured from
/// L²(source Gram M) into the norm with Gram S on the test space, through
/// the discrete dual pairing: σ_h = sqrt(λ_max(Aᵀ M⁻¹ S M⁻¹ A, M)).
/// Test and trial spaces coincide (square A).
pub fn continuity_modulus_estimate(
    a: &DMatrix<f64>,
    mass: &DMatrix<f64>,
    target: &DMatrix<f64>,
) -> Result<f64> {
    let n = mass.nrows();
    if a.nrows() != n || a.ncols() != n || target.nrows() != n {
        return Err(Error::LinAlg("dimension mismatch".into()));
    }
    let chol_m = mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::LinAlg("source Gram is not SPD".into()))?;
    if target.clone().cholesky().is_none() {
        return Err(Error::LinAlg("target Gram is not SPD".into()));
    }
    // X = M⁻¹ A, B = Xᵀ S X = Aᵀ M⁻¹ S M⁻¹ A.
    let x = chol_m.solve(a);
    let b = x.transpose() * target * &x;
    // Generalized eigenproblem B u = λ M u via the Cholesky congruence.
    let l_inv = {
        let l = chol_m.l();
        l.solve_lower_triangular(&DMatrix::identity(n, n))
            .ok_or_else(|| Error::LinAlg("singular Cholesky factor".into()))?
    };
    let g = &l_inv * b * l_inv.transpose();
    let sym = 0.5 * (&g + g.transpose());
    let eig = sym.symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(lam_max.max(0.0).sqrt())
}

/// Matrix Market export (coordinate, real, general).
pub fn to_matrix_market<W: IoWrite>(m: &DMatrix<f64>, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    let nnz = m.iter().filter(|v| **v != 0.0).count();
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), nnz)?;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != 0.0 {
                writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
            }
        }
    }
    Ok(())
}
