//! Polygonal boundaries: arc-length parameterisation, corner frames with
//! half-aperture angles, disk covers and smooth partitions of unity with
//! radially symmetric corner bumps.

use crate::bump::smoothstep;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Plain 2D point/vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Euclidean distance between boundary points (the kernel metric; not
/// geodesic along the boundary).
pub fn boundary_distance(x: Point2, y: Point2) -> f64 {
    x.dist(y)
}

/// Closed simple polygon, counterclockwise, with arc-length access.
#[derive(Debug, Clone)]
pub struct PolygonBoundary {
    vertices: Vec<Point2>,
    /// cumulative[i] = arc length from vertex 0 to vertex i; last entry is
    /// the total length.
    cumulative: Vec<f64>,
}

fn segments_properly_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let orient = |p: Point2, q: Point2, r: Point2| (q - p).cross(r - p);
    let on_segment = |p: Point2, q: Point2, r: Point2| {
        r.x >= p.x.min(q.x) - 1e-14
            && r.x <= p.x.max(q.x) + 1e-14
            && r.y >= p.y.min(q.y) - 1e-14
            && r.y <= p.y.max(q.y) + 1e-14
    };
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(a, b, c))
        || (d2 == 0.0 && on_segment(a, b, d))
        || (d3 == 0.0 && on_segment(c, d, a))
        || (d4 == 0.0 && on_segment(c, d, b))
}

/// Validated constructor: at least three pairwise-distinct consecutive
/// vertices, no self-intersection, orientation normalised to CCW. Collinear
/// triples are allowed and produce dummy corners with θ = π/2.
pub fn build_boundary(vertices: &[Point2]) -> Result<PolygonBoundary> {
    if vertices.len() < 3 {
        return Err(Error::Geometry(format!(
            "need at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let n = vertices.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if vertices[i].dist(vertices[j]) == 0.0 {
            return Err(Error::Geometry(format!("repeated vertex at index {i}")));
        }
    }
    // Spikes: a zero interior angle makes adjacent edges overlap.
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let next = vertices[(i + 1) % n];
        let d_in = (vertices[i] - prev).normalized();
        let d_out = (next - vertices[i]).normalized();
        if d_in.cross(d_out).abs() < 1e-14 && d_in.dot(d_out) < 0.0 {
            return Err(Error::Geometry(format!("zero-angle spike at vertex {i}")));
        }
    }
    // Non-adjacent edge pairs must not touch at all.
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_properly_intersect(a, b, c, d) {
                return Err(Error::Geometry(format!(
                    "edges {i} and {j} intersect: polygon is not simple"
                )));
            }
        }
    }
    let area2: f64 = (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum();
    if area2.abs() < 1e-14 {
        return Err(Error::Geometry("polygon has zero area".into()));
    }
    let mut verts = vertices.to_vec();
    if area2 < 0.0 {
        verts.reverse();
    }
    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0.0);
    for i in 0..n {
        let len = verts[i].dist(verts[(i + 1) % n]);
        cumulative.push(cumulative[i] + len);
    }
    Ok(PolygonBoundary {
        vertices: verts,
        cumulative,
    })
}

impl PolygonBoundary {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.cumulative[i + 1] - self.cumulative[i]
    }

    /// Arc-length coordinate of vertex i.
    pub fn vertex_position(&self, i: usize) -> f64 {
        self.cumulative[i]
    }

    /// Boundary point at arc-length s (taken mod total length).
    pub fn point_at(&self, s: f64) -> Point2 {
        let total = self.total_length();
        let mut s = s % total;
        if s < 0.0 {
            s += total;
        }
        // cumulative is sorted; find the containing edge.
        let mut i = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        if i >= self.vertices.len() {
            i = self.vertices.len() - 1;
        }
        let (a, b) = self.edge(i);
        let local = s - self.cumulative[i];
        let dir = (b - a).normalized();
        a + dir * local
    }

    /// One frame per vertex.
    pub fn corner_frames(&self) -> Vec<CornerFrame> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let prev = self.vertices[(i + n - 1) % n];
                let next = self.vertices[(i + 1) % n];
                CornerFrame::from_neighbors(self.vertices[i], prev, next)
            })
            .collect()
    }
}

/// Local frame at a corner: both unit tangents point outward from the
/// vertex, and the interior angle of the polygon equals 2θ with θ ∈ (0, π).
/// A dummy (flat) corner has θ = π/2.
#[derive(Debug, Clone, Copy)]
pub struct CornerFrame {
    pub vertex: Point2,
    pub e_plus: Point2,
    pub e_minus: Point2,
    pub half_aperture: f64,
}

impl CornerFrame {
    /// Frame from the two neighbouring vertices of a CCW polygon.
    pub fn from_neighbors(vertex: Point2, prev: Point2, next: Point2) -> Self {
        let e_minus = (prev - vertex).normalized();
        let e_plus = (next - vertex).normalized();
        let d_in = (vertex - prev).normalized();
        let d_out = e_plus;
        // Interior angle = π - (signed turn); turn ∈ (-π, π).
        let turn = d_in.cross(d_out).atan2(d_in.dot(d_out));
        let interior = std::f64::consts::PI - turn;
        Self {
            vertex,
            e_plus,
            e_minus,
            half_aperture: 0.5 * interior,
        }
    }

    /// Synthetic frame with prescribed half-aperture θ, rays symmetric about
    /// the x-axis; handy for half-line experiments.
    pub fn with_aperture(theta: f64) -> Self {
        assert!(theta > 0.0 && theta < std::f64::consts::PI);
        Self {
            vertex: Point2::new(0.0, 0.0),
            e_plus: Point2::new(theta.cos(), theta.sin()),
            e_minus: Point2::new(theta.cos(), -theta.sin()),
            half_aperture: theta,
        }
    }

    /// Point on the plus ray at parameter t > 0.
    pub fn on_plus_ray(&self, t: f64) -> Point2 {
        self.vertex + self.e_plus * t
    }

    pub fn on_minus_ray(&self, t: f64) -> Point2 {
        self.vertex + self.e_minus * t
    }

    pub fn is_dummy(&self) -> bool {
        (self.half_aperture - 0.5 * std::f64::consts::PI).abs() < 1e-12
    }
}

/// One disk of the boundary cover. Bumps plateau at |x-c| <= ρ/4 and vanish
/// from |x-c| >= ρ/2, so supports sit well inside the disks.
#[derive(Debug, Clone, Serialize)]
pub struct CoverDisk {
    pub center: Point2,
    pub radius: f64,
    pub is_corner_disk: bool,
    /// Vertex index for corner disks.
    pub corner_index: Option<usize>,
    /// Arc-length coordinate of the center.
    pub arc_position: f64,
}

impl CoverDisk {
    /// Raw (unnormalised) bump profile: radial, 1 inside ρ/4, 0 outside ρ/2.
    pub fn raw_bump(&self, x: Point2) -> f64 {
        let r = self.center.dist(x);
        smoothstep((0.5 * self.radius - r) / (0.25 * self.radius))
    }
}

/// Disk cover plus smooth bumps summing to one on the boundary.
///
/// Corner bumps are kept exactly radial: they are the raw radial profiles,
/// pairwise disjoint by construction. The edge bumps absorb the rest of the
/// unit: χ_e = raw_e · (1 - Σ corner bumps) / Σ raw edge bumps. Edge-bump
/// plateaus cover everything outside the corner plateaus, so the
/// denominator stays >= 1 wherever the numerator is nonzero.
#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    pub disks: Vec<CoverDisk>,
    corner_count: usize,
}

/// Cover construction: one disk per corner with radius scale·(shortest
/// adjacent edge), then edge disks placed uniformly with >= 55% spacing
/// overlap so their plateaus tile the uncovered arcs.
pub fn build_cover(boundary: &PolygonBoundary, scale: f64) -> Result<PartitionOfUnity> {
    if !(scale > 0.0 && scale < 1.0) {
        return Err(Error::Cover(format!("scale must be in (0,1), got {scale}")));
    }
    let n = boundary.n_vertices();
    let mut corner_radius = Vec::with_capacity(n);
    for i in 0..n {
        let prev_len = boundary.edge_length((i + n - 1) % n);
        let next_len = boundary.edge_length(i);
        corner_radius.push(scale * prev_len.min(next_len));
    }
    let mut disks = Vec::new();
    for i in 0..n {
        let center = boundary.vertices()[i];
        for j in 0..n {
            if j != i && center.dist(boundary.vertices()[j]) <= corner_radius[i] {
                return Err(Error::Cover(format!(
                    "corner {j} lies in the closure of corner disk {i}; reduce scale"
                )));
            }
        }
        disks.push(CoverDisk {
            center,
            radius: corner_radius[i],
            is_corner_disk: true,
            corner_index: Some(i),
            arc_position: boundary.vertex_position(i),
        });
    }
    let corner_count = disks.len();
    for i in 0..n {
        let j = (i + 1) % n;
        let edge_len = boundary.edge_length(i);
        let r_a = corner_radius[i];
        let r_b = corner_radius[j];
        // Edge disks stay clear of both corners: radius under a quarter of
        // the smaller corner radius, centers outside the corner plateaus.
        let r_e = 0.24 * r_a.min(r_b);
        let s_lo = boundary.vertex_position(i) + 0.25 * r_a;
        let s_hi = boundary.vertex_position(i) + edge_len - 0.25 * r_b;
        if s_hi - s_lo <= 0.0 {
            return Err(Error::Cover(format!(
                "edge {i} too short for the requested scale"
            )));
        }
        let count = ((s_hi - s_lo) / (0.45 * r_e)).ceil() as usize + 1;
        for k in 0..count {
            let s = s_lo + (s_hi - s_lo) * k as f64 / (count - 1).max(1) as f64;
            let center = boundary.point_at(s);
            for (v, vert) in boundary.vertices().iter().enumerate() {
                if center.dist(*vert) <= r_e {
                    return Err(Error::Cover(format!(
                        "edge disk on edge {i} reaches corner {v}; reduce scale"
                    )));
                }
            }
            disks.push(CoverDisk {
                center,
                radius: r_e,
                is_corner_disk: false,
                corner_index: None,
                arc_position: s,
            });
        }
    }
    Ok(PartitionOfUnity {
        disks,
        corner_count,
    })
}

impl PartitionOfUnity {
    pub fn n_corner_disks(&self) -> usize {
        self.corner_count
    }

    pub fn n_edge_disks(&self) -> usize {
        self.disks.len() - self.corner_count
    }

    fn corner_sum(&self, x: Point2) -> f64 {
        self.disks[..self.corner_count]
            .iter()
            .map(|d| d.raw_bump(x))
            .sum()
    }

    fn edge_raw_sum(&self, x: Point2) -> f64 {
        self.disks[self.corner_count..]
            .iter()
            .map(|d| d.raw_bump(x))
            .sum()
    }

    /// Normalised bump of one disk at a boundary point.
    pub fn eval(&self, disk_index: usize, x: Point2) -> f64 {
        let d = &self.disks[disk_index];
        if d.is_corner_disk {
            return d.raw_bump(x);
        }
        let raw = d.raw_bump(x);
        if raw == 0.0 {
            return 0.0;
        }
        let deficit = 1.0 - self.corner_sum(x);
        if deficit <= 0.0 {
            return 0.0;
        }
        raw * deficit / self.edge_raw_sum(x)
    }

    /// Σ over disks of the normalised bumps; 1 on the boundary.
    pub fn sum_at(&self, x: Point2) -> f64 {
        (0..self.disks.len()).map(|i| self.eval(i, x)).sum()
    }

    /// Machine-check the cover conditions: disks cover the boundary, each
    /// corner is a disk center, and each corner lies in the closure of
    /// exactly one disk. Sampled at `samples` boundary points.
    pub fn validate(&self, boundary: &PolygonBoundary, samples: usize) -> Result<()> {
        for k in 0..samples {
            let x = boundary.point_at(boundary.total_length() * k as f64 / samples as f64);
            if !self.disks.iter().any(|d| d.center.dist(x) < d.radius) {
                return Err(Error::Cover(format!("point {x:?} not covered by any disk")));
            }
        }
        for (i, v) in boundary.vertices().iter().enumerate() {
            let mut closures = 0;
            for d in &self.disks {
                if d.center.dist(*v) <= d.radius {
                    closures += 1;
                }
            }
            if closures != 1 {
                return Err(Error::Cover(format!(
                    "corner {i} lies in {closures} disk closures (want exactly 1)"
                )));
            }
            if !self
                .disks
                .iter()
                .any(|d| d.is_corner_disk && d.center.dist(*v) == 0.0)
            {
                return Err(Error::Cover(format!("corner {i} is not a disk center")));
            }
        }
        Ok(())
    }

    /// JSON description for reproducibility manifests.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.disks).map_err(|e| Error::Io(e.to_string()))
    }
}

/// JSON polygon input: {"vertices": [[x,y], ...], "cover_scale": r}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub vertices: Vec<[f64; 2]>,
    pub cover_scale: f64,
}

impl PolygonSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("bad polygon json: {e}")))
    }

    pub fn build(&self) -> Result<(PolygonBoundary, PartitionOfUnity)> {
        let pts: Vec<Point2> = self
            .vertices
            .iter()
            .map(|v| Point2::new(v[0], v[1]))
            .collect();
        let boundary = build_boundary(&pts)?;
        let cover = build_cover(&boundary, self.cover_scale)?;
        Ok((boundary, cover))
    }
}

/// Unit square (0,0)-(1,0)-(1,1)-(0,1).
pub fn unit_square() -> PolygonBoundary {
    build_boundary(&[
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap()
}

/// L-shaped hexagon with one reflex corner at (1,1).
pub fn l_shaped_hexagon() -> PolygonBoundary {
    build_boundary(&[
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0, 1.0),
        Point2::new(1.0, 1.0),
        Point2::new(1.0, 2.0),
        Point2::new(0.0, 2.0),
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_perimeter() {
        assert!((unit_square().total_length() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_perimeter() {
        let b = build_boundary(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!((b.total_length() - (2.0 + 2.0f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn collinear_vertex_is_a_dummy_corner() {
        let b = build_boundary(&[
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        let frames = b.corner_frames();
        assert!((frames[1].half_aperture - PI / 2.0).abs() < 1e-12);
        assert!(frames[1].is_dummy());
    }

    #[test]
    fn invalid_polygons_rejected() {
        // Bowtie.
        assert!(matches!(
            build_boundary(&[
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ]),
            Err(Error::Geometry(_))
        ));
        // Repeated vertex.
        assert!(matches!(
            build_boundary(&[
                Point2::new(0.0, 0.0),
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ]),
            Err(Error::Geometry(_))
        ));
        // Too few vertices.
        assert!(build_boundary(&[Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let b = build_boundary(&[
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
        ])
        .unwrap();
        let area2: f64 = (0..4)
            .map(|i| b.vertices()[i].cross(b.vertices()[(i + 1) % 4]))
            .sum();
        assert!(area2 > 0.0);
    }

    #[test]
    fn corner_angles_square_and_reflex() {
        let frames = unit_square().corner_frames();
        for f in &frames {
            assert!((f.half_aperture - PI / 4.0).abs() < 1e-12);
        }
        let l = l_shaped_hexagon();
        let frames = l.corner_frames();
        // Reflex corner at (1,1): interior 3π/2, θ = 3π/4.
        let reflex = frames
            .iter()
            .find(|f| f.vertex.dist(Point2::new(1.0, 1.0)) < 1e-12)
            .unwrap();
        assert!((reflex.half_aperture - 3.0 * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn frame_dot_product_matches_aperture() {
        for b in [unit_square(), l_shaped_hexagon()] {
            for f in b.corner_frames() {
                assert!((f.e_plus.norm() - 1.0).abs() < 1e-14);
                assert!((f.e_minus.norm() - 1.0).abs() < 1e-14);
                let lhs = f.e_minus.dot(f.e_plus);
                let rhs = (2.0 * f.half_aperture).cos();
                assert!((lhs - rhs).abs() < 1e-12, "vertex {:?}", f.vertex);
            }
        }
    }

    #[test]
    fn corner_distance_examples() {
        let f = CornerFrame::with_aperture(PI / 3.0);
        let d = boundary_distance(f.on_plus_ray(1.0), f.on_minus_ray(1.0));
        assert!((d - 2.0 * (PI / 3.0).sin()).abs() < 1e-14);
        let x = Point2::new(0.3, 0.4);
        assert_eq!(boundary_distance(x, x), 0.0);
        // Opposite edge midpoints of the unit square.
        let b = unit_square();
        let d = boundary_distance(b.point_at(0.5), b.point_at(2.5));
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn point_at_walks_the_square() {
        let b = unit_square();
        let p = b.point_at(1.5);
        assert!(p.dist(Point2::new(1.0, 0.5)) < 1e-14);
        let p = b.point_at(-0.5); // wraps backwards
        assert!(p.dist(Point2::new(0.0, 0.5)) < 1e-14);
    }

    #[test]
    fn square_cover_counts_and_unit_sum() {
        let b = unit_square();
        let pou = build_cover(&b, 0.3).unwrap();
        assert_eq!(pou.n_corner_disks(), 4);
        assert!(pou.n_edge_disks() >= 4);
        pou.validate(&b, 500).unwrap();
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let x = b.point_at(4.0 * k as f64 / 1000.0);
            worst = worst.max((pou.sum_at(x) - 1.0).abs());
        }
        assert!(worst < 1e-12, "partition sum deviates by {worst:.3e}");
    }

    #[test]
    fn bump_support_and_radial_symmetry() {
        let b = unit_square();
        let pou = build_cover(&b, 0.3).unwrap();
        let corner = &pou.disks[0];
        assert!(corner.is_corner_disk);
        // Outside the disk radius the bump vanishes.
        let far = corner.center + Point2::new(corner.radius * 1.01, 0.0);
        assert_eq!(pou.eval(0, far), 0.0);
        // Equal values at the same distance along both adjacent edges.
        for &r in &[0.05, 0.1, 0.14] {
            let on_x = b.point_at(r); // along +x from (0,0)
            let on_y = b.point_at(4.0 - r); // along +y from (0,0)
            let bx = pou.eval(0, on_x);
            let by = pou.eval(0, on_y);
            assert!((bx - by).abs() < 1e-14, "r={r}: {bx} vs {by}");
        }
    }

    #[test]
    fn infeasible_scale_is_rejected() {
        // C-shape whose arms pass within distance 1 of each other while the
        // adjacent edges are long: at scale 0.9 the corner disk at (4,1)
        // swallows the non-adjacent corner (4,2).
        let b = build_boundary(&[
            Point2::new(0.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(4.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(4.0, 2.0),
            Point2::new(4.0, 3.0),
            Point2::new(0.0, 3.0),
        ])
        .unwrap();
        assert!(matches!(build_cover(&b, 0.9), Err(Error::Cover(_))));
        // The same polygon is coverable at a smaller scale.
        let pou = build_cover(&b, 0.2).unwrap();
        pou.validate(&b, 400).unwrap();
    }

    #[test]
    fn polygon_spec_json_round_trip() {
        let spec = PolygonSpec::from_json(
            r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]], "cover_scale": 0.3}"#,
        )
        .unwrap();
        let (b, pou) = spec.build().unwrap();
        assert_eq!(b.n_vertices(), 4);
        assert!(pou.to_json().unwrap().contains("is_corner_disk"));
    }
}
