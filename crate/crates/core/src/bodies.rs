//! Body generators: random convex polygons, regular n-gons approximating
//! discs, nested pairs, and fixed polar-coordinate data.

use std::f64::consts::{PI, TAU};

use crate::convex::{convex_hull, GeodesicPolygon};
use crate::error::Result;
use crate::rng::RandomStream;
use crate::surface::{exp_at_base, exp_at_base_unchecked, gen_asin, gen_sin, Curvature, SurfacePoint};

/// Upper limit for generator disc radii: the hemisphere radius `π/(2√|κ|)`
/// for κ ≠ 0 and `π/2` for the plane.
pub fn size_limit(kappa: Curvature) -> f64 {
    if kappa.value() == 0.0 {
        PI / 2.0
    } else {
        PI / (2.0 * kappa.root())
    }
}

/// `m` points area-uniform in the disc of radius `rho` about x₀.
pub fn random_points_in_disc(kappa: Curvature, rho: f64, m: usize, rng: &mut RandomStream) -> Vec<SurfacePoint> {
    let h = gen_sin(kappa, 0.5 * rho);
    (0..m)
        .map(|_| {
            let r = 2.0 * gen_asin(kappa, rng.uniform().sqrt() * h);
            exp_at_base_unchecked(kappa, r, rng.angle())
        })
        .collect()
}

/// Hull of `m ∈ [3, max_vertices]` points in `D_ρ`, ρ uniform in
/// `[0.1, 0.9·size_limit]`; redrawn until the hull has an interior.
pub fn random_body(kappa: Curvature, max_vertices: usize, rng: &mut RandomStream) -> GeodesicPolygon {
    let hi = 0.9 * size_limit(kappa);
    let rho = rng.uniform_in(0.1, hi);
    random_body_in(kappa, rho, max_vertices, rng)
}

/// Like [`random_body`] with a fixed disc radius `rho`.
pub fn random_body_in(kappa: Curvature, rho: f64, max_vertices: usize, rng: &mut RandomStream) -> GeodesicPolygon {
    loop {
        let m = rng.int_inclusive(3, max_vertices.max(3));
        let pts = random_points_in_disc(kappa, rho, m, rng);
        if let Ok(body) = convex_hull(&pts) {
            if body.has_interior() {
                return body;
            }
        }
    }
}

/// Regular n-gon with vertices at distance `rho` from x₀.
pub fn regular_polygon(kappa: Curvature, rho: f64, n: usize, phase: f64) -> Result<GeodesicPolygon> {
    let pts = (0..n)
        .map(|i| exp_at_base(kappa, rho, phase + TAU * i as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    convex_hull(&pts)
}

/// A random body and a convex body inside it: the hull of some of its
/// vertices together with interior points formed as positive combinations.
pub fn nested_pair(kappa: Curvature, max_vertices: usize, rng: &mut RandomStream) -> (GeodesicPolygon, GeodesicPolygon) {
    let outer = random_body(kappa, max_vertices, rng);
    loop {
        let mut pts = Vec::new();
        for v in outer.vertices() {
            if rng.uniform() < 0.4 {
                pts.push(*v);
            }
        }
        let extra = rng.int_inclusive(1, 6);
        for _ in 0..extra {
            let c = outer
                .vertices()
                .iter()
                .map(|v| v.coords() * rng.uniform())
                .fold(nalgebra::Vector3::zeros(), |a, b| a + b);
            if let Some(p) = SurfacePoint::project(c, kappa) {
                pts.push(p);
            }
        }
        if let Ok(inner) = convex_hull(&pts) {
            if outer.contains_polygon(&inner) {
                return (inner, outer);
            }
        }
    }
}

/// Polar vertex data `(r, θ)` of the unit square centred at x₀.
pub fn unit_square_polar() -> Vec<(f64, f64)> {
    let r = 0.5f64.sqrt();
    (0..4).map(|i| (r, PI / 4.0 + PI / 2.0 * i as f64)).collect()
}

/// Hull of polar vertex data placed with [`exp_at_base`].
pub fn from_polar(kappa: Curvature, data: &[(f64, f64)]) -> Result<GeodesicPolygon> {
    let pts = data
        .iter()
        .map(|&(r, t)| exp_at_base(kappa, r, t))
        .collect::<Result<Vec<_>>>()?;
    convex_hull(&pts)
}
