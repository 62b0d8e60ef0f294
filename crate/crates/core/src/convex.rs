//! Geodesically convex polygons on `X_κ`.
//!
//! A polygon is stored as its counter-clockwise vertex cycle (seen from
//! outside the sphere, or from above the plane/hyperboloid). One and two
//! vertices are allowed: the point body and the segment body.
//!
//! Every orientation decision goes through [`GeodesicLine::side`], i.e. the
//! sign of a 3×3 determinant in the embedding, compared against
//! [`GEOM_TOL`](crate::GEOM_TOL).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::radii::enclosing_disc;
use crate::surface::{check_same, Curvature, GeodesicLine, Isometry, Regime, SurfacePoint, Vec3};
use crate::GEOM_TOL;

/// Euler characteristic of a convex set: 1 if nonempty, 0 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EulerNumber(pub i32);

impl EulerNumber {
    pub const EMPTY: EulerNumber = EulerNumber(0);
    pub const NONEMPTY: EulerNumber = EulerNumber(1);

    pub fn value(self) -> i32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPolygon {
    vertices: Vec<SurfacePoint>,
    lines: Vec<GeodesicLine>,
    curvature: Curvature,
}

fn lex_key(p: &SurfacePoint) -> [f64; 3] {
    let c = p.coords();
    [c.x, c.y, c.z]
}

fn lex_cmp(a: &SurfacePoint, b: &SurfacePoint) -> std::cmp::Ordering {
    let (a, b) = (lex_key(a), lex_key(b));
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

/// Interior test for a point on a segment.
fn on_segment(a: &SurfacePoint, b: &SurfacePoint, p: &SurfacePoint, tol: f64) -> bool {
    let Some(line) = GeodesicLine::through(a, b) else {
        return a.distance(p) <= tol;
    };
    line.side(p).abs() <= tol && a.distance(p) + p.distance(b) <= a.distance(b) + 2.0 * tol
}

impl GeodesicPolygon {
    /// Assembles a polygon from an already counter-clockwise, convex cycle.
    fn from_cycle(mut vertices: Vec<SurfacePoint>, curvature: Curvature) -> Self {
        if let Some(start) = (0..vertices.len()).min_by(|&i, &j| lex_cmp(&vertices[i], &vertices[j])) {
            vertices.rotate_left(start);
        }
        let lines = if vertices.len() >= 3 {
            (0..vertices.len())
                .map(|i| {
                    let (a, b) = (&vertices[i], &vertices[(i + 1) % vertices.len()]);
                    GeodesicLine::through(a, b).expect("distinct adjacent vertices")
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            vertices,
            lines,
            curvature,
        }
    }

    /// Validating constructor: the cycle must be convex, counter-clockwise,
    /// free of repeated or collinear consecutive vertices, and (κ > 0) inside
    /// an open hemisphere.
    pub fn new(vertices: Vec<SurfacePoint>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyInput)?;
        let k = first.curvature();
        for p in &vertices {
            check_same(k, p.curvature())?;
        }
        if k.is_spherical() {
            hemisphere_center(&vertices)?;
        }
        let n = vertices.len();
        if n >= 2 {
            for i in 0..n {
                if vertices[i].distance(&vertices[(i + 1) % n]) <= GEOM_TOL {
                    return Err(Error::InvalidPolygon(format!(
                        "vertices {i} and {} coincide",
                        (i + 1) % n
                    )));
                }
            }
        }
        if n >= 3 {
            for i in 0..n {
                let line = GeodesicLine::through(&vertices[i], &vertices[(i + 1) % n])
                    .ok_or_else(|| Error::InvalidPolygon(format!("edge {i} is degenerate")))?;
                if line.side(&vertices[(i + 2) % n]) <= GEOM_TOL {
                    return Err(Error::InvalidPolygon(format!(
                        "vertex {} is not a strict left turn after edge {i}",
                        (i + 2) % n
                    )));
                }
                for (j, v) in vertices.iter().enumerate() {
                    if line.side(v) < -GEOM_TOL {
                        return Err(Error::InvalidPolygon(format!(
                            "vertex {j} lies outside edge {i}"
                        )));
                    }
                }
            }
        }
        Ok(Self::from_cycle(vertices, k))
    }

    pub fn point(p: SurfacePoint) -> Self {
        Self::from_cycle(vec![p], p.curvature())
    }

    pub fn vertices(&self) -> &[SurfacePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn has_interior(&self) -> bool {
        self.vertices.len() >= 3
    }

    /// Oriented edge lines, interior on the left. Empty for points and segments.
    pub fn edge_lines(&self) -> &[GeodesicLine] {
        &self.lines
    }

    /// Boundary edges as vertex pairs; a segment body has a single edge.
    pub fn edges(&self) -> Vec<(SurfacePoint, SurfacePoint)> {
        let n = self.vertices.len();
        match n {
            1 => Vec::new(),
            2 => vec![(self.vertices[0], self.vertices[1])],
            _ => (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect(),
        }
    }

    /// Half-planes whose intersection is the body (four for a segment).
    fn half_planes(&self) -> Vec<GeodesicLine> {
        match self.vertices.len() {
            1 => Vec::new(),
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                let ab = GeodesicLine::through(a, b).expect("distinct segment ends");
                let ba = ab.reversed();
                let mut out = vec![ab, ba];
                out.extend(ab.perpendicular_through(a));
                out.extend(ba.perpendicular_through(b));
                out
            }
            _ => self.lines.clone(),
        }
    }

    pub fn transformed(&self, g: &Isometry) -> Self {
        debug_assert_eq!(g.curvature(), self.curvature);
        Self::from_cycle(self.vertices.iter().map(|v| g.apply(v)).collect(), self.curvature)
    }

    /// Same body up to cyclic relabelling, vertices within `tol`.
    pub fn approx_eq(&self, other: &GeodesicPolygon, tol: f64) -> bool {
        let n = self.vertices.len();
        if self.curvature != other.curvature || n != other.vertices.len() {
            return false;
        }
        (0..n).any(|shift| {
            (0..n).all(|i| self.vertices[i].distance(&other.vertices[(i + shift) % n]) <= tol)
        })
    }

    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        match self.curvature.regime() {
            Regime::Euclidean => {
                let o = v[0].coords();
                let mut twice = 0.0;
                for i in 1..v.len() - 1 {
                    let (a, b) = (v[i].coords() - o, v[i + 1].coords() - o);
                    twice += a.x * b.y - a.y * b.x;
                }
                0.5 * twice
            }
            regime => {
                let hyperbolic = regime == Regime::Hyperbolic;
                let u: Vec<Vec3> = v.iter().map(|p| p.unit()).collect();
                let excess: f64 = (1..u.len() - 1)
                    .map(|i| triangle_excess(&u[0], &u[i], &u[i + 1], hyperbolic))
                    .sum();
                excess / self.curvature.value().abs()
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        (0..n).map(|i| v[i].distance(&v[(i + 1) % n])).sum()
    }

    /// Interior angle at each vertex (only meaningful for `len() ≥ 3`).
    pub fn interior_angles(&self) -> Vec<f64> {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return Vec::new();
        }
        (0..n)
            .map(|i| angle_at(&v[i], &v[(i + n - 1) % n], &v[(i + 1) % n]))
            .collect()
    }

    pub fn contains_point(&self, p: &SurfacePoint) -> bool {
        debug_assert_eq!(p.curvature(), self.curvature);
        match self.vertices.len() {
            1 => self.vertices[0].distance(p) <= GEOM_TOL,
            2 => on_segment(&self.vertices[0], &self.vertices[1], p, GEOM_TOL),
            _ => self.lines.iter().all(|l| l.side(p) >= -GEOM_TOL),
        }
    }

    /// Every vertex of `other` lies in `self` (so `other ⊆ self` by convexity).
    pub fn contains_polygon(&self, other: &GeodesicPolygon) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v))
    }
}

/// Unit-model tangent direction at `at` towards `to`.
fn tangent_towards(at: &Vec3, to: &Vec3, hyperbolic: bool) -> Vec3 {
    if hyperbolic {
        to + at * minkowski(to, at)
    } else {
        to - at * to.dot(at)
    }
}

fn minkowski(a: &Vec3, b: &Vec3) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// Angle at `b` of the geodesic triangle with neighbours `a`, `c`.
pub(crate) fn angle_at(b: &SurfacePoint, a: &SurfacePoint, c: &SurfacePoint) -> f64 {
    match b.curvature().regime() {
        Regime::Euclidean => {
            let (t1, t2) = (a.coords() - b.coords(), c.coords() - b.coords());
            (t1.x * t2.y - t1.y * t2.x).abs().atan2(t1.x * t2.x + t1.y * t2.y)
        }
        regime => {
            let hyp = regime == Regime::Hyperbolic;
            let (ub, ua, uc) = (b.unit(), a.unit(), c.unit());
            let (t1, t2) = (tangent_towards(&ub, &ua, hyp), tangent_towards(&ub, &uc, hyp));
            let dot = if hyp { minkowski(&t1, &t2) } else { t1.dot(&t2) };
            t1.cross(&t2).dot(&ub).abs().atan2(dot)
        }
    }
}

/// Signed angle at `p` swept from `a` to `c` (counter-clockwise positive).
pub(crate) fn signed_angle_at(p: &SurfacePoint, a: &SurfacePoint, c: &SurfacePoint) -> f64 {
    match p.curvature().regime() {
        Regime::Euclidean => {
            let (t1, t2) = (a.coords() - p.coords(), c.coords() - p.coords());
            (t1.x * t2.y - t1.y * t2.x).atan2(t1.x * t2.x + t1.y * t2.y)
        }
        regime => {
            let hyp = regime == Regime::Hyperbolic;
            let (up, ua, uc) = (p.unit(), a.unit(), c.unit());
            let (t1, t2) = (tangent_towards(&up, &ua, hyp), tangent_towards(&up, &uc, hyp));
            let dot = if hyp { minkowski(&t1, &t2) } else { t1.dot(&t2) };
            t1.cross(&t2).dot(&up).atan2(dot)
        }
    }
}

/// Angle excess (κ > 0) or defect (κ < 0) of a unit-model triangle.
fn triangle_excess(a: &Vec3, b: &Vec3, c: &Vec3, hyperbolic: bool) -> f64 {
    let det = a.dot(&(b - a).cross(&(c - a)));
    let den = if hyperbolic {
        1.0 - minkowski(a, b) - minkowski(b, c) - minkowski(c, a)
    } else {
        1.0 + a.dot(b) + b.dot(c) + c.dot(a)
    };
    2.0 * det.atan2(den)
}

/// A direction `u` (unit model) with `⟨u, p⟩ > 0` for every point, i.e. the
/// centre of an open hemisphere holding the set.
fn hemisphere_center(points: &[SurfacePoint]) -> Result<Vec3> {
    let k = points[0].curvature();
    let margin = (GEOM_TOL * k.root()).sin();
    let holds = |u: &Vec3| points.iter().all(|p| p.unit().dot(u) > margin);

    let sum: Vec3 = points.iter().map(|p| p.unit()).sum();
    if sum.norm() > 1e-12 {
        let u = sum.normalize();
        if holds(&u) {
            return Ok(u);
        }
    }
    let disc = enclosing_disc(points).ok_or(Error::HemisphereViolation)?;
    let u = disc.center.unit();
    if holds(&u) {
        Ok(u)
    } else {
        Err(Error::HemisphereViolation)
    }
}

/// Orientation-preserving central projection to a plane chart in which
/// geodesics are straight lines.
enum Chart {
    Affine,
    Klein,
    Gnomonic { e1: Vec3, e2: Vec3, u: Vec3 },
}

impl Chart {
    fn new(points: &[SurfacePoint]) -> Result<Self> {
        let k = points[0].curvature();
        Ok(match k.regime() {
            Regime::Euclidean => Chart::Affine,
            Regime::Hyperbolic => Chart::Klein,
            Regime::Spherical => {
                let u = hemisphere_center(points)?;
                let axis = if u.x.abs() <= u.y.abs() && u.x.abs() <= u.z.abs() {
                    Vec3::x()
                } else if u.y.abs() <= u.z.abs() {
                    Vec3::y()
                } else {
                    Vec3::z()
                };
                let e1 = (axis - u * axis.dot(&u)).normalize();
                let e2 = u.cross(&e1);
                Chart::Gnomonic { e1, e2, u }
            }
        })
    }

    fn project(&self, p: &SurfacePoint) -> [f64; 2] {
        let c = p.coords();
        match self {
            Chart::Affine => [c.x, c.y],
            Chart::Klein => [c.x / c.z, c.y / c.z],
            Chart::Gnomonic { e1, e2, u } => {
                let h = c.dot(u);
                [c.dot(e1) / h, c.dot(e2) / h]
            }
        }
    }
}

fn left_turn(o: &SurfacePoint, a: &SurfacePoint, b: &SurfacePoint) -> bool {
    GeodesicLine::through(o, a).is_some_and(|l| l.side(b) > GEOM_TOL)
}

/// Smallest convex polygon containing the points; its vertices are a subset
/// of the input (near-duplicates within tolerance are merged).
pub fn convex_hull(points: &[SurfacePoint]) -> Result<GeodesicPolygon> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let k = first.curvature();
    for p in points {
        check_same(k, p.curvature())?;
    }
    let mut pts: Vec<SurfacePoint> = Vec::with_capacity(points.len());
    for p in points {
        if !pts.iter().any(|q| q.distance(p) <= GEOM_TOL) {
            pts.push(*p);
        }
    }
    let chart = Chart::new(&pts)?;
    if pts.len() == 1 {
        return Ok(GeodesicPolygon::point(pts[0]));
    }

    let mut keyed: Vec<([f64; 2], SurfacePoint)> = pts.iter().map(|p| (chart.project(p), *p)).collect();
    keyed.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.0[1].total_cmp(&b.0[1])));
    let sorted: Vec<SurfacePoint> = keyed.into_iter().map(|(_, p)| p).collect();

    // Andrew's monotone chain in the chart, turns decided on the surface
    let mut hull: Vec<SurfacePoint> = Vec::with_capacity(2 * sorted.len());
    for p in &sorted {
        while hull.len() >= 2 && !left_turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in sorted.iter().rev().skip(1) {
        while hull.len() >= lower_len && !left_turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    Ok(GeodesicPolygon::from_cycle(hull, k))
}

/// Clips a closed vertex cycle against the half-plane `line ≥ 0`.
fn clip(subject: &[Vec3], line: &GeodesicLine, k: Curvature) -> Vec<Vec3> {
    let n = subject.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let prev = &subject[(i + n - 1) % n];
        let cur = &subject[i];
        let (dp, dc) = (line.side_coords(prev), line.side_coords(cur));
        let cur_in = dc >= -GEOM_TOL;
        let prev_in = dp >= -GEOM_TOL;
        if cur_in != prev_in && ((dp > 0.0 && dc < 0.0) || (dp < 0.0 && dc > 0.0)) {
            let x = (prev * dc - cur * dp) / (dc - dp);
            if let Some(p) = SurfacePoint::project(x, k) {
                out.push(*p.coords());
            }
        }
        if cur_in {
            out.push(*cur);
        }
    }
    out
}

/// The convex set `K ∩ L`, or `None` when empty.
pub fn intersect_convex(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<Option<GeodesicPolygon>> {
    check_same(k_body.curvature, l_body.curvature)?;
    if l_body.is_point() {
        let p = l_body.vertices[0];
        return Ok(k_body.contains_point(&p).then_some(l_body.clone()));
    }
    if k_body.is_point() {
        let p = k_body.vertices[0];
        return Ok(l_body.contains_point(&p).then_some(k_body.clone()));
    }
    let kappa = k_body.curvature;
    let mut subject: Vec<Vec3> = k_body.vertices.iter().map(|v| *v.coords()).collect();
    for line in l_body.half_planes() {
        subject = clip(&subject, &line, kappa);
        if subject.is_empty() {
            return Ok(None);
        }
    }
    let pts: Vec<SurfacePoint> = subject
        .into_iter()
        .map(|c| SurfacePoint::project(c, kappa).unwrap_or(SurfacePoint::from_raw(c, kappa)))
        .collect();
    convex_hull(&pts).map(Some)
}

/// χ of `K ∩ L`.
pub fn euler_intersection(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<EulerNumber> {
    Ok(if intersect_convex(k_body, l_body)?.is_some() {
        EulerNumber::NONEMPTY
    } else {
        EulerNumber::EMPTY
    })
}

enum Crossing {
    None,
    Transversal,
    Degenerate,
}

fn segment_crossing(a: &SurfacePoint, b: &SurfacePoint, c: &SurfacePoint, d: &SurfacePoint) -> Crossing {
    let (Some(ab), Some(cd)) = (GeodesicLine::through(a, b), GeodesicLine::through(c, d)) else {
        return Crossing::Degenerate;
    };
    let (sc, sd) = (ab.side(c), ab.side(d));
    let (sa, sb) = (cd.side(a), cd.side(b));
    let touches = (sc.abs() <= GEOM_TOL && on_segment(a, b, c, GEOM_TOL))
        || (sd.abs() <= GEOM_TOL && on_segment(a, b, d, GEOM_TOL))
        || (sa.abs() <= GEOM_TOL && on_segment(c, d, a, GEOM_TOL))
        || (sb.abs() <= GEOM_TOL && on_segment(c, d, b, GEOM_TOL));
    if touches {
        return Crossing::Degenerate;
    }
    if sc * sd < 0.0 && sa * sb < 0.0 && (sd > 0.0) == (sa > 0.0) {
        Crossing::Transversal
    } else {
        Crossing::None
    }
}

/// Number of transversal crossings of `∂K` and `∂L`. Fails with
/// [`Error::Degenerate`] when a vertex of one boundary lies on the other.
pub fn boundary_crossings(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<usize> {
    check_same(k_body.curvature, l_body.curvature)?;
    let mut count = 0;
    for (a, b) in k_body.edges() {
        for (c, d) in l_body.edges() {
            match segment_crossing(&a, &b, &c, &d) {
                Crossing::Transversal => count += 1,
                Crossing::None => {}
                Crossing::Degenerate => {
                    return Err(Error::Degenerate("boundaries touch or overlap".into()));
                }
            }
        }
    }
    Ok(count)
}

/// Raw-coordinate copy of a polygon for the Monte Carlo inner loop: vertex
/// coordinates and edge-line normals that can be moved by an isometry without
/// allocation.
#[derive(Clone, Debug)]
pub struct PreparedPolygon {
    vertices: Vec<Vec3>,
    /// One normal per edge (a single one for a segment).
    normals: Vec<Vec3>,
    /// End caps of a segment body, oriented inwards.
    caps: Vec<Vec3>,
}

impl PreparedPolygon {
    pub fn new(body: &GeodesicPolygon) -> Self {
        let vertices = body.vertices.iter().map(|v| *v.coords()).collect();
        let (normals, caps) = match body.len() {
            1 => (Vec::new(), Vec::new()),
            2 => {
                let hp = body.half_planes();
                (vec![*hp[0].normal()], hp[2..].iter().map(|l| *l.normal()).collect())
            }
            _ => (body.lines.iter().map(|l| *l.normal()).collect(), Vec::new()),
        };
        Self {
            vertices,
            normals,
            caps,
        }
    }

    /// Overwrites `out` with the image of `self` under `g`.
    pub fn transform_into(&self, g: &Isometry, out: &mut PreparedPolygon) {
        let m = g.matrix();
        let nm = g.normal_matrix();
        out.vertices.clear();
        out.vertices.extend(self.vertices.iter().map(|v| m * v));
        out.normals.clear();
        out.normals.extend(self.normals.iter().map(|n| nm * n));
        out.caps.clear();
        out.caps.extend(self.caps.iter().map(|n| nm * n));
    }

    fn contains(&self, p: &Vec3) -> bool {
        match self.vertices.len() {
            1 => (self.vertices[0] - p).norm() <= GEOM_TOL,
            2 => {
                self.normals[0].dot(p).abs() <= GEOM_TOL
                    && self.caps.iter().all(|c| c.dot(p) >= -GEOM_TOL)
            }
            _ => self.normals.iter().all(|n| n.dot(p) >= -GEOM_TOL),
        }
    }

    fn edge(&self, i: usize) -> (&Vec3, &Vec3, &Vec3) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n], &self.normals[i])
    }

    /// Whether the two bodies meet: a vertex of one lies in the other or two
    /// edges cross.
    pub fn intersects(&self, other: &PreparedPolygon) -> bool {
        if self.vertices.iter().any(|v| other.contains(v)) || other.vertices.iter().any(|v| self.contains(v)) {
            return true;
        }
        for i in 0..self.normals.len() {
            let (a, b, nab) = self.edge(i);
            for j in 0..other.normals.len() {
                let (c, d, ncd) = other.edge(j);
                let (sc, sd) = (nab.dot(c), nab.dot(d));
                if sc * sd >= 0.0 {
                    continue;
                }
                let (sa, sb) = (ncd.dot(a), ncd.dot(b));
                if sa * sb < 0.0 && (sd > 0.0) == (sa > 0.0) {
                    return true;
                }
            }
        }
        false
    }
}

/// Sum of signed angles subtended at `p` by the boundary: ±2π around interior
/// points, 0 outside. Test oracle for [`GeodesicPolygon::contains_point`].
pub fn winding_angle(body: &GeodesicPolygon, p: &SurfacePoint) -> f64 {
    let v = body.vertices();
    let n = v.len();
    (0..n).map(|i| signed_angle_at(p, &v[i], &v[(i + 1) % n])).sum()
}

/// Gauss–Bonnet area `(Σ angles − (n − 2)π)/κ`; a cross-check for κ ≠ 0.
pub fn gauss_bonnet_area(body: &GeodesicPolygon) -> Option<f64> {
    let kv = body.curvature().value();
    if body.len() < 3 || kv == 0.0 {
        return None;
    }
    let sum: f64 = body.interior_angles().iter().sum();
    Some((sum - (body.len() as f64 - 2.0) * PI) / kv)
}
