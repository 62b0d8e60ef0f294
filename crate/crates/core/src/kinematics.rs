//! Kinematic integrals over the motion group, containment and perimeter
//! monotonicity.
//!
//! The integral `∫ χ(K ∩ gL) dg` is estimated by drawing `g = t_x ∘ γ` with
//! γ a uniform spin about x₀ and x area-uniform over a disc that covers every
//! position where the bodies can meet (both bodies are first moved so their
//! circumcentres sit at x₀). The estimate is `W · (hit fraction)` with `W`
//! the area of that disc, or of the whole sphere.

use std::f64::consts::TAU;

use crate::convex::{GeodesicPolygon, PreparedPolygon};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::radii::{metrics, BodyMetrics};
use crate::rng::RandomStream;
use crate::surface::{
    check_same, gen_cos, Curvature, Isometry, IsometrySampler, Regime, SurfacePoint, Vec3,
};

/// Samples per independent stream; fixed so results do not depend on the
/// number of workers.
const BATCH: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
    /// Area W of the sampled translation region.
    pub support_area: f64,
}

impl KinematicEstimate {
    fn from_counts(hits: u64, samples: u64, support_area: f64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            mean: support_area * p,
            std_error: support_area * (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            hits,
            support_area,
        }
    }
}

/// Cheap test for `d(p, q) < t` on unit-model coordinates.
#[derive(Clone, Copy, Debug)]
struct DistanceBelow {
    regime: Regime,
    threshold: f64,
}

impl DistanceBelow {
    fn new(kappa: Curvature, t: f64) -> Self {
        let threshold = match kappa.regime() {
            Regime::Euclidean => t * t,
            _ => gen_cos(kappa, t),
        };
        Self {
            regime: kappa.regime(),
            threshold,
        }
    }

    #[inline]
    fn holds(&self, u: &Vec3, v: &Vec3) -> bool {
        match self.regime {
            Regime::Euclidean => (u.x - v.x).powi(2) + (u.y - v.y).powi(2) < self.threshold,
            Regime::Spherical => u.dot(v) > self.threshold,
            Regime::Hyperbolic => u.z * v.z - u.x * v.x - u.y * v.y < self.threshold,
        }
    }
}

/// `t_c⁻¹` for the circumcentre `c`, moving it to x₀.
fn recentre(body: &GeodesicPolygon, m: &BodyMetrics) -> (GeodesicPolygon, SurfacePoint) {
    let to_base = Isometry::translation_to(&m.circumcenter).inverse();
    (body.transformed(&to_base), to_base.apply(&m.incenter))
}

/// Monte Carlo estimate of `∫ χ(K ∩ gL) dg`, in parallel where available.
pub fn kinematic_lhs(
    k_body: &GeodesicPolygon,
    l_body: &GeodesicPolygon,
    n: u64,
    rng: &RandomStream,
) -> Result<KinematicEstimate> {
    kinematic_lhs_with(k_body, l_body, n, rng, Execution::default())
}

pub fn kinematic_lhs_with(
    k_body: &GeodesicPolygon,
    l_body: &GeodesicPolygon,
    n: u64,
    rng: &RandomStream,
    exec: Execution,
) -> Result<KinematicEstimate> {
    check_same(k_body.curvature(), l_body.curvature())?;
    if n < 1000 {
        return Err(Error::Precondition(format!("need at least 1000 samples, got {n}")));
    }
    let kappa = k_body.curvature();
    let (mk, ml) = (metrics(k_body)?, metrics(l_body)?);
    let (k0, k_in) = recentre(k_body, &mk);
    let (l0, l_in) = recentre(l_body, &ml);

    let reach = mk.circumradius + ml.circumradius;
    let sampler = IsometrySampler::new(kappa, reach + 1e-6 * (1.0 + reach))?;
    let pk = PreparedPolygon::new(&k0);
    let pl = PreparedPolygon::new(&l0);
    let incircles = DistanceBelow::new(kappa, mk.inradius + ml.inradius);
    let check_incircles = mk.inradius + ml.inradius > 0.0;
    let (k_in, l_in) = (k_in.unit(), l_in.unit());

    let batches = (n as usize).div_ceil(BATCH);
    let counts = map_indexed(batches, exec, |b| {
        let mut stream = rng.split(b as u64);
        let size = BATCH.min(n as usize - b * BATCH);
        let mut moved = pl.clone();
        let mut hits = 0u64;
        for _ in 0..size {
            let (rho, theta, phi) = sampler.draw(&mut stream);
            if rho > reach {
                continue;
            }
            let g = Isometry::translation_polar(kappa, rho, theta).then_after(&Isometry::rotation(kappa, phi));
            if check_incircles {
                if incircles.holds(&k_in, &(g.matrix() * l_in)) {
                    hits += 1;
                    continue;
                }
            }
            pl.transform_into(&g, &mut moved);
            if pk.intersects(&moved) {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = counts.iter().sum();
    Ok(KinematicEstimate::from_counts(hits, n, sampler.support_area()))
}

/// `χ_K A_L + P_K P_L / 2π + A_K χ_L − κ A_K A_L / 2π` with χ = 1.
pub fn kinematic_rhs(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<f64> {
    check_same(k_body.curvature(), l_body.curvature())?;
    let kappa = k_body.curvature().value();
    let (ak, pk) = (k_body.area(), k_body.perimeter());
    let (al, pl) = (l_body.area(), l_body.perimeter());
    Ok(al + pk * pl / TAU + ak - kappa * ak * al / TAU)
}

/// `2π(A_K + A_L) − κ A_K A_L − P_K P_L`; nonnegative iff the containment
/// criterion holds.
pub fn containment_slack(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<f64> {
    check_same(k_body.curvature(), l_body.curvature())?;
    if !k_body.has_interior() || !l_body.has_interior() {
        return Err(Error::Degenerate(
            "containment criterion needs bodies with nonempty interior".into(),
        ));
    }
    let kappa = k_body.curvature().value();
    let (ak, pk) = (k_body.area(), k_body.perimeter());
    let (al, pl) = (l_body.area(), l_body.perimeter());
    Ok(TAU * (ak + al) - kappa * ak * al - pk * pl)
}

/// `P_K P_L ≤ 2π(A_K + A_L) − κ A_K A_L` (with `1e-12` slack).
pub fn containment_criterion(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<bool> {
    Ok(containment_slack(k_body, l_body)? >= -1e-12)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContainmentDirection {
    /// `gK ⊆ L`
    KInL,
    /// `gL ⊆ K`
    LInK,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainmentWitness {
    pub isometry: Isometry,
    pub direction: ContainmentDirection,
    /// Score evaluations spent.
    pub evaluations: u64,
}

/// One `(inner, outer)` arrangement being searched.
struct Placement<'a> {
    inner: &'a GeodesicPolygon,
    outer: &'a GeodesicPolygon,
    direction: ContainmentDirection,
    kappa: Curvature,
    /// Moves the inner circumcentre to x₀.
    inner_to_base: Isometry,
    /// Moves x₀ to the outer incentre.
    base_to_outer: Isometry,
    inner_vertices: Vec<Vec3>,
    outer_normals: Vec<Vec3>,
    max_offset: f64,
}

impl<'a> Placement<'a> {
    fn new(
        inner: &'a GeodesicPolygon,
        mi: &BodyMetrics,
        outer: &'a GeodesicPolygon,
        mo: &BodyMetrics,
        direction: ContainmentDirection,
    ) -> Self {
        let kappa = inner.curvature();
        let inner_to_base = Isometry::translation_to(&mi.circumcenter).inverse();
        let base_to_outer = Isometry::translation_to(&mo.incenter);
        let inner_vertices = inner.vertices().iter().map(|v| *inner_to_base.apply(v).coords()).collect();
        let outer_normals = outer.edge_lines().iter().map(|l| *l.normal()).collect();
        Self {
            inner,
            outer,
            direction,
            kappa,
            inner_to_base,
            base_to_outer,
            inner_vertices,
            outer_normals,
            max_offset: mo.circumradius + mi.circumradius,
        }
    }

    /// `t_outer ∘ t_(x, y) ∘ R(φ)` applied after the recentring of the inner body.
    fn motion(&self, x: f64, y: f64, phi: f64) -> Isometry {
        let r = x.hypot(y).min(self.max_offset);
        let theta = if r == 0.0 { 0.0 } else { y.atan2(x) };
        self.base_to_outer
            .then_after(&Isometry::translation_polar(self.kappa, r, theta))
            .then_after(&Isometry::rotation(self.kappa, phi))
    }

    /// Largest violation `−side` over inner vertices and outer edges; ≤ 0 means contained.
    fn score(&self, g: &Isometry) -> f64 {
        let m = g.matrix();
        let mut worst = f64::NEG_INFINITY;
        for v in &self.inner_vertices {
            let p = m * v;
            for n in &self.outer_normals {
                worst = worst.max(-n.dot(&p));
            }
        }
        worst
    }

    fn witness(&self, g: &Isometry, evaluations: u64) -> Option<ContainmentWitness> {
        let full = g.then_after(&self.inner_to_base);
        self.outer
            .contains_polygon(&self.inner.transformed(&full))
            .then_some(ContainmentWitness {
                isometry: full,
                direction: self.direction,
                evaluations,
            })
    }
}

fn may_fit(mi: &BodyMetrics, mo: &BodyMetrics) -> bool {
    let tol = 1e-9;
    mi.area <= mo.area + tol
        && mi.perimeter <= mo.perimeter + tol
        && mi.inradius <= mo.inradius + tol
        && mi.circumradius <= mo.circumradius + tol
}

/// Randomized search for `g` with `gK ⊆ L` or `gL ⊆ K`. Every returned
/// witness has been checked by vertex containment. `budget` bounds the number
/// of score evaluations.
pub fn find_containment(
    k_body: &GeodesicPolygon,
    l_body: &GeodesicPolygon,
    budget: u64,
    rng: &mut RandomStream,
) -> Result<Option<ContainmentWitness>> {
    check_same(k_body.curvature(), l_body.curvature())?;

    for (inner, outer, direction) in [
        (k_body, l_body, ContainmentDirection::KInL),
        (l_body, k_body, ContainmentDirection::LInK),
    ] {
        if inner.is_point() {
            let target = outer.vertices()[0];
            let g = Isometry::translation_to(&target)
                .then_after(&Isometry::translation_to(&inner.vertices()[0]).inverse());
            if outer.contains_polygon(&inner.transformed(&g)) {
                return Ok(Some(ContainmentWitness {
                    isometry: g,
                    direction,
                    evaluations: 0,
                }));
            }
        }
    }
    if !k_body.has_interior() && !l_body.has_interior() {
        return Ok(None);
    }

    let (mk, ml) = (metrics(k_body)?, metrics(l_body)?);
    let mut placements = Vec::new();
    if l_body.has_interior() && may_fit(&mk, &ml) {
        placements.push(Placement::new(k_body, &mk, l_body, &ml, ContainmentDirection::KInL));
    }
    if k_body.has_interior() && may_fit(&ml, &mk) {
        placements.push(Placement::new(l_body, &ml, k_body, &mk, ContainmentDirection::LInK));
    }
    if placements.is_empty() {
        return Ok(None);
    }

    let mut used = 0u64;
    // concentric placement first
    for pl in &placements {
        let (mi, mo) = match pl.direction {
            ContainmentDirection::KInL => (&mk, &ml),
            ContainmentDirection::LInK => (&ml, &mk),
        };
        if mi.circumradius <= mo.inradius {
            used += 1;
            let g = pl.motion(0.0, 0.0, 0.0);
            if let Some(w) = pl.witness(&g, used) {
                return Ok(Some(w));
            }
        }
    }

    let mut restart = 0usize;
    while used < budget {
        let pl = &placements[restart % placements.len()];
        let scale = pl.outer_scale();
        let (mut x, mut y) = if restart < placements.len() {
            (0.0, 0.0)
        } else {
            let r = 0.5 * scale * rng.uniform().sqrt();
            let t = rng.angle();
            (r * t.cos(), r * t.sin())
        };
        let mut phi = rng.angle();
        let mut best = pl.score(&pl.motion(x, y, phi));
        used += 1;
        let mut step = 0.25 * scale.max(1e-6);
        let lever = pl.inner_scale().max(1e-9);
        let mut stall = 0;
        while used < budget && step > 1e-12 * (1.0 + scale) && stall < 200 {
            if best <= 0.0 {
                if let Some(w) = pl.witness(&pl.motion(x, y, phi), used) {
                    return Ok(Some(w));
                }
            }
            let (dx, dy, dphi) = (rng.normal() * step, rng.normal() * step, rng.normal() * step / lever);
            let cand = pl.score(&pl.motion(x + dx, y + dy, phi + dphi));
            used += 1;
            if cand < best {
                x += dx;
                y += dy;
                phi += dphi;
                best = cand;
                step *= 1.5;
                stall = 0;
            } else {
                step *= 0.88;
                stall += 1;
            }
        }
        if best <= 0.0 {
            if let Some(w) = pl.witness(&pl.motion(x, y, phi), used) {
                return Ok(Some(w));
            }
        }
        restart += 1;
    }
    Ok(None)
}

impl Placement<'_> {
    fn outer_scale(&self) -> f64 {
        self.max_offset
    }

    fn inner_scale(&self) -> f64 {
        self.inner_vertices
            .iter()
            .map(|v| SurfacePoint::base(self.kappa).distance(&SurfacePoint::from_raw(*v, self.kappa)))
            .fold(0.0, f64::max)
    }
}

/// For `K ⊆ L`: whether `P_K ≤ P_L + 1e-9`.
pub fn monotonicity_probe(k_body: &GeodesicPolygon, l_body: &GeodesicPolygon) -> Result<bool> {
    check_same(k_body.curvature(), l_body.curvature())?;
    if !l_body.contains_polygon(k_body) {
        return Err(Error::Precondition("first body is not contained in the second".into()));
    }
    Ok(k_body.perimeter() <= l_body.perimeter() + 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies;
    use crate::convex::convex_hull;
    use crate::surface::{disc_area, exp_at_base};
    use std::f64::consts::PI;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn rect(w: f64, h: f64) -> GeodesicPolygon {
        convex_hull(&[(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)].map(|(x, y)| SurfacePoint::planar(x, y))).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let sq = rect(1.0, 1.0);
        assert!((kinematic_rhs(&sq, &sq).unwrap() - (2.0 + 8.0 / PI)).abs() < 1e-12);

        let octant = convex_hull(&[Vec3::x(), Vec3::y(), Vec3::z()].map(|c| SurfacePoint::new(c, k(1.0)).unwrap()))
            .unwrap();
        assert!((kinematic_rhs(&octant, &octant).unwrap() - TAU).abs() < 1e-12);

        let mut rng = RandomStream::new(1);
        for &kv in &[-1.0, 0.0, 1.0] {
            let body = bodies::random_body(k(kv), 12, &mut rng);
            let pt = GeodesicPolygon::point(exp_at_base(k(kv), 0.1, 0.0).unwrap());
            assert!((kinematic_rhs(&body, &pt).unwrap() - body.area()).abs() < 1e-15);
        }
    }

    #[test]
    fn point_body_recovers_area() {
        let mut rng = RandomStream::new(2);
        for &kv in &[-1.0, 0.0, 1.0] {
            let body = bodies::random_body(k(kv), 12, &mut rng);
            let pt = GeodesicPolygon::point(SurfacePoint::base(k(kv)));
            let est = kinematic_lhs(&body, &pt, 100_000, &rng.split(kv as u64)).unwrap();
            assert!(
                (est.mean - body.area()).abs() <= 3.0 * est.std_error,
                "κ={kv}: {} ± {} vs {}",
                est.mean,
                est.std_error,
                body.area()
            );
        }
    }

    #[test]
    fn polygon_pairs_match_closed_form() {
        let root = RandomStream::new(3);
        let mut rng = root.split(0);
        for &kv in &[-1.0, 0.0, 1.0] {
            for i in 0..3 {
                let a = bodies::random_body(k(kv), 12, &mut rng);
                let b = bodies::random_body(k(kv), 12, &mut rng);
                let est = kinematic_lhs(&a, &b, 100_000, &root.split(10 + i)).unwrap();
                let rhs = kinematic_rhs(&a, &b).unwrap();
                assert!(
                    (est.mean - rhs).abs() <= (3.0 * est.std_error).max(1e-3 * rhs),
                    "κ={kv}: {} ± {} vs {rhs}",
                    est.mean,
                    est.std_error
                );
            }
        }
    }

    #[test]
    fn fine_disc_polygons_match_disc_of_summed_radius() {
        let rng = RandomStream::new(4);
        for &kv in &[-1.0, 0.0, 1.0] {
            let d = bodies::regular_polygon(k(kv), 0.5, 256, 0.0).unwrap();
            let est = kinematic_lhs(&d, &d, 100_000, &rng).unwrap();
            let target = disc_area(k(kv), 1.0).unwrap();
            let se = est.std_error.max(1e-3 * target);
            assert!((est.mean - target).abs() <= 3.0 * se, "κ={kv}: {} vs {target}", est.mean);
        }
    }

    #[test]
    fn estimates_are_independent_of_execution() {
        let mut rng = RandomStream::new(5);
        let a = bodies::random_body(k(-1.0), 12, &mut rng);
        let b = bodies::random_body(k(-1.0), 12, &mut rng);
        let seq = kinematic_lhs_with(&a, &b, 20_000, &rng, Execution::Sequential).unwrap();
        let par = kinematic_lhs_with(&a, &b, 20_000, &rng, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert!(kinematic_lhs(&a, &b, 10, &rng).is_err());
    }

    #[test]
    fn criterion_examples() {
        // K = L: the slack is minus the isoperimetric deficit, zero only for a true disc
        let disc = bodies::regular_polygon(Curvature::EUCLIDEAN, 1.0, 64, 0.0).unwrap();
        let (a, p) = (disc.area(), disc.perimeter());
        assert!((containment_slack(&disc, &disc).unwrap() + (p * p - 4.0 * PI * a)).abs() < 1e-12);
        assert!(!containment_criterion(&disc, &disc).unwrap());
        let (a, p) = (disc_area(Curvature::EUCLIDEAN, 1.0).unwrap(), TAU);
        assert!((TAU * 2.0 * a - p * p).abs() < 1e-12);
        let thin = rect(10.0, 0.1);
        assert!((thin.perimeter().powi(2) - 408.04).abs() < 1e-9);
        assert!(!containment_criterion(&thin, &thin).unwrap());
        let small = bodies::regular_polygon(Curvature::EUCLIDEAN, 0.2, 6, 0.0).unwrap();
        let big = bodies::regular_polygon(Curvature::EUCLIDEAN, 5.0, 64, 0.0).unwrap();
        assert!(containment_criterion(&small, &big).unwrap());
        let seg = convex_hull(&[SurfacePoint::planar(0.0, 0.0), SurfacePoint::planar(1.0, 0.0)]).unwrap();
        assert!(containment_criterion(&seg, &big).is_err());
    }

    #[test]
    fn containment_witnesses() {
        let mut rng = RandomStream::new(6);
        for &kv in &[-1.0, 0.0, 1.0] {
            let kk = k(kv);
            let big = bodies::regular_polygon(kk, 0.8, 32, 0.0).unwrap();
            let small = bodies::regular_polygon(kk, 0.3, 32, 0.1)
                .unwrap()
                .transformed(&Isometry::translation_polar(kk, 0.5, 2.0));
            let w = find_containment(&small, &big, 10_000, &mut rng).unwrap().unwrap();
            assert_eq!(w.direction, ContainmentDirection::KInL);
            assert!(big.contains_polygon(&small.transformed(&w.isometry)));
            let w = find_containment(&big, &small, 10_000, &mut rng).unwrap().unwrap();
            assert_eq!(w.direction, ContainmentDirection::LInK);

            let pt = GeodesicPolygon::point(exp_at_base(kk, 1.0, 1.0).unwrap());
            assert!(find_containment(&pt, &big, 10, &mut rng).unwrap().is_some());
        }
    }

    #[test]
    fn random_criterion_pairs_find_witnesses() {
        let mut rng = RandomStream::new(7);
        for &kv in &[-1.0, 0.0, 1.0] {
            let kk = k(kv);
            let mut tried = 0;
            while tried < 20 {
                let a = bodies::random_body(kk, 12, &mut rng);
                let b = bodies::random_body(kk, 12, &mut rng);
                if containment_slack(&a, &b).unwrap() < 1e-3 {
                    continue;
                }
                tried += 1;
                let w = find_containment(&a, &b, 10_000, &mut rng).unwrap();
                assert!(w.is_some(), "κ={kv}: no witness");
            }
        }
    }

    #[test]
    fn monotonicity() {
        let mut rng = RandomStream::new(8);
        for &kv in &[-1.0, 0.0, 1.0] {
            let kk = k(kv);
            for _ in 0..200 {
                let (inner, outer) = bodies::nested_pair(kk, 12, &mut rng);
                assert!(monotonicity_probe(&inner, &outer).unwrap());
                assert!(monotonicity_probe(&outer, &outer).unwrap());
            }
            let small = bodies::regular_polygon(kk, 0.3, 32, 0.0).unwrap();
            let big = bodies::regular_polygon(kk, 0.6, 32, 0.0).unwrap();
            assert!(monotonicity_probe(&small, &big).unwrap());
            assert!(monotonicity_probe(&big, &small).is_err());
        }
    }
}
