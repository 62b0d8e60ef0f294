//! Circumradius and inradius of convex polygons.
//!
//! The circumdisc is the smallest enclosing geodesic disc of the vertex set,
//! found by randomized-incremental minidisc with a fixed shuffle. The indisc
//! maximizes `F(u) = min_i σ_i(u)` where `σ_i` is the (sine / identity /
//! hyperbolic sine of the) distance from `u` to the i-th edge line; each σ_i
//! is linear in the embedding coordinates, so every local maximum is pinned
//! by three equal constraints (or, on the sphere only, by two).

use rand::seq::SliceRandom;

use crate::convex::GeodesicPolygon;
use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::surface::{gen_sin, Curvature, Regime, SurfacePoint, Vec3};

/// A closed geodesic disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicDisc {
    pub center: SurfacePoint,
    pub radius: f64,
}

impl GeodesicDisc {
    fn covers(&self, p: &SurfacePoint) -> bool {
        self.center.distance(p) <= self.radius + 1e-12 * (1.0 + self.radius)
    }

    fn with_radius_of(center: SurfacePoint, pts: &[&SurfacePoint]) -> Self {
        let radius = pts.iter().map(|p| center.distance(p)).fold(0.0, f64::max);
        Self { center, radius }
    }
}

/// Geodesic midpoint disc of two points.
fn disc2(a: &SurfacePoint, b: &SurfacePoint) -> Option<GeodesicDisc> {
    let k = a.curvature();
    let center = match k.regime() {
        Regime::Euclidean => {
            let m = 0.5 * (a.coords() + b.coords());
            SurfacePoint::planar(m.x, m.y)
        }
        _ => SurfacePoint::project(a.coords() + b.coords(), k)?,
    };
    Some(GeodesicDisc::with_radius_of(center, &[a, b]))
}

/// Circumdisc of three points; `None` if they are collinear or (κ < 0) not concyclic.
fn disc3(a: &SurfacePoint, b: &SurfacePoint, c: &SurfacePoint) -> Option<GeodesicDisc> {
    let k = a.curvature();
    let center = match k.regime() {
        Regime::Euclidean => {
            let (ax, ay) = (a.coords().x, a.coords().y);
            let (bx, by) = (b.coords().x - ax, b.coords().y - ay);
            let (cx, cy) = (c.coords().x - ax, c.coords().y - ay);
            let d = 2.0 * (bx * cy - by * cx);
            let scale = (bx * bx + by * by) * (cx * cx + cy * cy);
            if d.abs() <= 1e-14 * scale.sqrt() || d == 0.0 {
                return None;
            }
            let b2 = bx * bx + by * by;
            let c2 = cx * cx + cy * cy;
            let ux = (cy * b2 - by * c2) / d;
            let uy = (bx * c2 - cx * b2) / d;
            SurfacePoint::planar(ax + ux, ay + uy)
        }
        Regime::Spherical => {
            let (ua, ub, uc) = (a.unit(), b.unit(), c.unit());
            let n = (ub - ua).cross(&(uc - ua));
            if n.norm() <= 1e-15 {
                return None;
            }
            let n = if n.dot(&ua) < 0.0 { -n } else { n };
            SurfacePoint::project(n, k)?
        }
        Regime::Hyperbolic => {
            let (ua, ub, uc) = (a.unit(), b.unit(), c.unit());
            let n = (ub - ua).cross(&(uc - ua));
            // centre u satisfies ⟨u, a⟩ = ⟨u, b⟩ = ⟨u, c⟩ in the Minkowski form
            SurfacePoint::project(Vec3::new(n.x, n.y, -n.z), k)?
        }
    };
    Some(GeodesicDisc::with_radius_of(center, &[a, b, c]))
}

/// Smallest disc through `q1`, `q2` and covering `r`: the circumdisc, or the
/// best two-point disc when the three points admit no usable circumdisc.
fn disc_on_two(q1: &SurfacePoint, q2: &SurfacePoint, r: &SurfacePoint) -> Option<GeodesicDisc> {
    if let Some(d) = disc3(q1, q2, r) {
        return Some(d);
    }
    [disc2(q1, r), disc2(q2, r), disc2(q1, q2)]
        .into_iter()
        .flatten()
        .filter(|d| d.covers(q1) && d.covers(q2) && d.covers(r))
        .min_by(|x, y| x.radius.total_cmp(&y.radius))
}

/// Smallest enclosing geodesic disc of a nonempty point set. On the sphere
/// this is meaningful only for sets inside an open hemisphere; callers verify.
pub fn enclosing_disc(points: &[SurfacePoint]) -> Option<GeodesicDisc> {
    let first = points.first()?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut RandomStream::new(0x6d69_6e69_6469_7363));
    let pts: Vec<&SurfacePoint> = order.iter().map(|&i| &points[i]).collect();

    let mut disc = GeodesicDisc {
        center: *first,
        radius: 0.0,
    };
    disc.center = *pts[0];
    for i in 1..pts.len() {
        if disc.covers(pts[i]) {
            continue;
        }
        disc = disc2(pts[0], pts[i])?;
        for j in 0..i {
            if disc.covers(pts[j]) {
                continue;
            }
            disc = disc2(pts[j], pts[i])?;
            for l in 0..j {
                if !disc.covers(pts[l]) {
                    disc = disc_on_two(pts[j], pts[i], pts[l])?;
                }
            }
        }
    }
    let all: Vec<&SurfacePoint> = points.iter().collect();
    Some(GeodesicDisc::with_radius_of(disc.center, &all))
}

/// Smallest enclosing disc `(R, centre)`.
pub fn circumradius(body: &GeodesicPolygon) -> Result<(f64, SurfacePoint)> {
    let v = body.vertices();
    if v.len() == 1 {
        return Ok((0.0, v[0]));
    }
    let disc = enclosing_disc(v).ok_or(Error::HemisphereViolation)?;
    if let Some(h) = body.curvature().hemisphere_radius() {
        if disc.radius >= h {
            return Err(Error::HemisphereViolation);
        }
    }
    Ok((disc.radius, disc.center))
}

fn unit_to_point(u: Vec3, k: Curvature) -> Option<SurfacePoint> {
    match k.regime() {
        Regime::Euclidean => {
            (u.z.abs() > 1e-300).then(|| SurfacePoint::planar(u.x / u.z, u.y / u.z))
        }
        _ => SurfacePoint::project(u, k),
    }
}

/// Value of `min_i σ_i` at a candidate, or `None` if it does not beat `best`.
fn score(normals: &[Vec3], u: &Vec3, best: f64) -> Option<f64> {
    let mut m = f64::INFINITY;
    for n in normals {
        m = m.min(n.dot(u));
        if m <= best {
            return None;
        }
    }
    Some(m)
}

/// Largest inscribed disc `(r, centre)`. Bodies without interior give 0.
///
/// Enumerates all edge triples, so the cost is cubic in the vertex count.
pub fn inradius(body: &GeodesicPolygon) -> (f64, SurfacePoint) {
    let v = body.vertices();
    let k = body.curvature();
    if v.len() < 3 {
        let c = if v.len() == 2 {
            disc2(&v[0], &v[1]).map(|d| d.center).unwrap_or(v[0])
        } else {
            v[0]
        };
        return (0.0, c);
    }
    // unit-model normals: σ = n·û is sin, distance, or sinh of the distance
    let normals: Vec<Vec3> = body.edge_lines().iter().map(|l| *l.normal()).collect();
    let to_unit = |p: &SurfacePoint| p.unit();

    let mut best = 0.0;
    let mut best_u = to_unit(&v[0]);
    let consider = |u: Vec3, best: &mut f64, best_u: &mut Vec3| {
        if let Some(p) = unit_to_point(u, k) {
            let pu = to_unit(&p);
            if let Some(s) = score(&normals, &pu, *best) {
                *best = s;
                *best_u = pu;
            }
        }
    };

    let n = normals.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = normals[i] - normals[j];
            if k.is_spherical() {
                consider(normals[i] + normals[j], &mut best, &mut best_u);
            }
            for l in (j + 1)..n {
                let c = dij.cross(&(normals[i] - normals[l]));
                if c.norm() <= 1e-300 {
                    continue;
                }
                // both orientations on the sphere; the projection fixes the sign otherwise
                consider(c, &mut best, &mut best_u);
                if k.is_spherical() {
                    consider(-c, &mut best, &mut best_u);
                }
            }
        }
    }

    let r = match k.regime() {
        Regime::Euclidean => best,
        Regime::Spherical => best.clamp(-1.0, 1.0).asin() / k.root(),
        Regime::Hyperbolic => best.asinh() / k.root(),
    };
    let center = unit_to_point(best_u, k).unwrap_or(v[0]);
    (r.max(0.0), center)
}

/// Area, perimeter and both radii of one body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BodyMetrics {
    pub curvature: Curvature,
    pub area: f64,
    pub perimeter: f64,
    pub inradius: f64,
    pub circumradius: f64,
    pub incenter: SurfacePoint,
    pub circumcenter: SurfacePoint,
}

impl BodyMetrics {
    /// Metrics given directly by value (centres are placed at x₀).
    pub fn from_values(
        curvature: Curvature,
        area: f64,
        perimeter: f64,
        inradius: f64,
        circumradius: f64,
    ) -> Self {
        let x0 = SurfacePoint::base(curvature);
        Self {
            curvature,
            area,
            perimeter,
            inradius,
            circumradius,
            incenter: x0,
            circumcenter: x0,
        }
    }

    /// `(gen_sin r_in, gen_sin R_circ)`.
    pub fn sine_radii(&self) -> (f64, f64) {
        (
            gen_sin(self.curvature, self.inradius),
            gen_sin(self.curvature, self.circumradius),
        )
    }
}

pub fn metrics(body: &GeodesicPolygon) -> Result<BodyMetrics> {
    let (circumradius, circumcenter) = circumradius(body)?;
    let (inradius, incenter) = inradius(body);
    Ok(BodyMetrics {
        curvature: body.curvature(),
        area: body.area(),
        perimeter: body.perimeter(),
        inradius: inradius.min(circumradius),
        circumradius,
        incenter,
        circumcenter,
    })
}
