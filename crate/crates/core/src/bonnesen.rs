//! Isoperimetric deficits, Bonnesen-type lower bounds for them, and the
//! quadratic polynomials whose root separation produces those bounds.
//!
//! Everything here works from [`BodyMetrics`] alone, so oracle radii can be
//! substituted for solver output.
//!
//! Radii enter the curved bounds through `gen_sin`, i.e. `sin(√κ r)/√κ` and
//! `sinh(√λ r)/√λ`. With that scaling every bound tends to `π²(R − r)²` as
//! `κ → 0`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::convex::GeodesicPolygon;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::radii::{metrics, BodyMetrics};
use crate::surface::{Curvature, Regime};

/// Relative tolerance used when deciding whether a bound is satisfied.
pub const SLACK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundName {
    #[serde(rename = "EUCLID_B")]
    EuclidB,
    S1,
    S2,
    S3,
    S4,
    H1,
    #[serde(rename = "H_MIN")]
    HMin,
    #[serde(rename = "H_ISO")]
    HIso,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::EuclidB => "EUCLID_B",
            BoundName::S1 => "S1",
            BoundName::S2 => "S2",
            BoundName::S3 => "S3",
            BoundName::S4 => "S4",
            BoundName::H1 => "H1",
            BoundName::HMin => "H_MIN",
            BoundName::HIso => "H_ISO",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One inequality `lhs ≥ value`.
///
/// `lhs` is the isoperimetric deficit for every bound except S4, whose left
/// side is written as `P² − κ·A·A′` with the complement area `A′`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub name: BoundName,
    pub value: f64,
    pub lhs: f64,
    pub applicable: bool,
}

impl Bound {
    fn new(name: BoundName, value: f64, lhs: f64, applicable: bool) -> Self {
        Self {
            name,
            value,
            lhs,
            applicable,
        }
    }

    pub fn slack(&self) -> f64 {
        self.lhs - self.value
    }

    /// `None` when the bound's hypothesis fails.
    pub fn satisfied(&self) -> Option<bool> {
        self.applicable
            .then(|| self.lhs >= self.value - SLACK_TOL * (1.0 + self.value.abs()))
    }
}

/// `P² − A(4π − κA)`.
pub fn deficit(kappa: Curvature, area: f64, perimeter: f64) -> f64 {
    perimeter * perimeter - area * (2.0 * TAU - kappa.value() * area)
}

/// `π²(R − r)²`.
pub fn euclid_bonnesen_rhs(m: &BodyMetrics) -> Result<f64> {
    if m.curvature.regime() != Regime::Euclidean {
        return Err(Error::RegimeMismatch {
            expected: "Euclidean",
            kappa: m.curvature.value(),
        });
    }
    let d = m.circumradius - m.inradius;
    Ok(PI * PI * d * d)
}

fn sine_gap(m: &BodyMetrics) -> f64 {
    let (s_in, s_out) = m.sine_radii();
    s_out - s_in
}

/// S1, S2, S3 and S4 for a body on the sphere of curvature κ.
pub fn sphere_bounds(m: &BodyMetrics) -> Result<Vec<Bound>> {
    let kv = m.curvature.value();
    if kv <= 0.0 {
        return Err(Error::RegimeMismatch {
            expected: "spherical",
            kappa: kv,
        });
    }
    let (a, p) = (m.area, m.perimeter);
    let complement = 2.0 * TAU / kv - a;
    if complement <= 0.0 {
        return Err(Error::Precondition(format!(
            "area {a} is not below the sphere area {}",
            2.0 * TAU / kv
        )));
    }
    let d = deficit(m.curvature, a, p);
    let x = TAU - kv * a;
    let ok = x > 1e-12;
    let ds2 = sine_gap(m).powi(2);
    let s1 = if ok {
        let w = x * x + kv * p * p;
        ds2 * w * w / (4.0 * x * x)
    } else {
        0.0
    };
    let s2 = ds2 * x * x / 4.0;
    let s4_lhs = p * p - kv * a * complement;
    let s4 = kv / 16.0 * ds2 * kv * (a - complement).powi(2);
    Ok(vec![
        Bound::new(BoundName::S1, s1, d, ok),
        Bound::new(BoundName::S2, s2, d, ok),
        Bound::new(BoundName::S3, 0.0, d, true),
        Bound::new(BoundName::S4, s4, s4_lhs, ok),
    ])
}

/// `(2π + λA)² − λP²`, the hypothesis of the H1 bound.
pub fn hyperbolic_condition(m: &BodyMetrics) -> f64 {
    let lambda = -m.curvature.value();
    (TAU + lambda * m.area).powi(2) - lambda * m.perimeter.powi(2)
}

/// The H1 right side evaluated without checking its hypothesis. For long
/// thin bodies this grows like `sinh²` of the circumradius.
pub fn h1_expression(m: &BodyMetrics) -> f64 {
    let lambda = -m.curvature.value();
    let y = TAU + lambda * m.area;
    let c = hyperbolic_condition(m);
    sine_gap(m).powi(2) * c * c / (4.0 * y * y)
}

/// H1, H_MIN and H_ISO for a body in the hyperbolic plane of curvature −λ.
pub fn hyperbolic_bounds(m: &BodyMetrics) -> Result<Vec<Bound>> {
    let kv = m.curvature.value();
    if kv >= 0.0 {
        return Err(Error::RegimeMismatch {
            expected: "hyperbolic",
            kappa: kv,
        });
    }
    let lambda = -kv;
    let d = deficit(m.curvature, m.area, m.perimeter);
    let h1 = h1_expression(m);
    let applicable = hyperbolic_condition(m) >= 0.0;
    let h_min = (4.0 * PI * PI / lambda).min(h1);
    Ok(vec![
        Bound::new(BoundName::H1, h1, d, applicable),
        Bound::new(BoundName::HMin, h_min, d, true),
        Bound::new(BoundName::HIso, 0.0, d, true),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeficitReport {
    pub kappa: Curvature,
    pub metrics: BodyMetrics,
    pub deficit: f64,
    pub bounds: Vec<Bound>,
}

impl DeficitReport {
    pub fn bound(&self, name: BoundName) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// True when every applicable bound holds and is nonnegative.
    pub fn all_satisfied(&self) -> bool {
        self.bounds.iter().all(|b| {
            b.satisfied() != Some(false) && (!b.applicable || b.value >= -SLACK_TOL)
        })
    }
}

/// Every bound for the regime of `m`.
pub fn deficit_report(m: &BodyMetrics) -> Result<DeficitReport> {
    let bounds = match m.curvature.regime() {
        Regime::Euclidean => {
            let d = deficit(m.curvature, m.area, m.perimeter);
            vec![Bound::new(BoundName::EuclidB, euclid_bonnesen_rhs(m)?, d, true)]
        }
        Regime::Spherical => sphere_bounds(m)?,
        Regime::Hyperbolic => hyperbolic_bounds(m)?,
    };
    Ok(DeficitReport {
        kappa: m.curvature,
        metrics: *m,
        deficit: deficit(m.curvature, m.area, m.perimeter),
        bounds,
    })
}

/// Double-double arithmetic, enough to evaluate discriminants that cancel
/// almost completely.
mod dd {
    #[derive(Clone, Copy, Debug)]
    pub struct Dd(pub f64, pub f64);

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    fn quick(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd(s, b - (s - a))
    }

    impl Dd {
        pub fn from(x: f64) -> Self {
            Dd(x, 0.0)
        }

        pub fn hi(self) -> f64 {
            self.0 + self.1
        }

        pub fn add(self, o: Dd) -> Dd {
            let s = two_sum(self.0, o.0);
            let t = two_sum(self.1, o.1);
            let u = quick(s.0, s.1 + t.0);
            quick(u.0, u.1 + t.1)
        }

        pub fn neg(self) -> Dd {
            Dd(-self.0, -self.1)
        }

        pub fn sub(self, o: Dd) -> Dd {
            self.add(o.neg())
        }

        pub fn mul(self, o: Dd) -> Dd {
            let p = self.0 * o.0;
            let e = self.0.mul_add(o.0, -p);
            quick(p, e + (self.0 * o.1 + self.1 * o.0))
        }
    }
}

use dd::Dd;

/// Sphere-form coefficients `((2π − κA)² + κP², −4πP, A(4π − κA))` and their
/// discriminant, all carried in double-double.
fn curved_coefficients(kv: f64, area: f64, perimeter: f64) -> (Dd, Dd, Dd, Dd) {
    let k = Dd::from(kv);
    let a = Dd::from(area);
    let p = Dd::from(perimeter);
    let tau = Dd::from(TAU);
    let x = tau.sub(k.mul(a));
    let a2 = x.mul(x).add(k.mul(p).mul(p));
    let a1 = Dd::from(-2.0 * TAU).mul(p);
    let a0 = a.mul(tau.add(tau).sub(k.mul(a)));
    let disc = a1.mul(a1).sub(Dd::from(4.0).mul(a2).mul(a0));
    (a2, a1, a0, disc)
}

/// Discriminant of the spherical (`κ > 0`) or hyperbolic (`κ < 0`)
/// quadratic in `x = gen_sin ε`.
pub fn curved_discriminant(kappa: Curvature, area: f64, perimeter: f64) -> f64 {
    curved_coefficients(kappa.value(), area, perimeter).3.hi()
}

/// The quadratic from the kinematic proof of the bound in each regime.
///
/// In the variable `x = ε` (plane) or `x = gen_sin ε` (curved), the
/// containment criterion fails for every `ε` strictly between the radii, so
/// `f` keeps one sign on `(lo, hi)` and its roots lie outside that interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticWitness {
    pub kappa: Curvature,
    pub coeffs: (f64, f64, f64),
    pub discriminant: f64,
    pub roots: Option<(f64, f64)>,
    pub bracket: (f64, f64),
}

impl QuadraticWitness {
    pub fn eval(&self, x: f64) -> f64 {
        let (a2, a1, a0) = self.coeffs;
        (a2 * x + a1) * x + a0
    }

    /// Sign `f` must have strictly inside the bracket: negative on the
    /// sphere, positive in the plane and the hyperbolic plane.
    pub fn inside_sign(&self) -> f64 {
        if self.kappa.value() > 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn brackets(&self) -> bool {
        match self.roots {
            Some((lo, hi)) => lo <= self.bracket.0 && self.bracket.1 <= hi,
            None => false,
        }
    }

    /// `f` has the expected strict sign at `probes` evenly spaced interior
    /// points of the bracket.
    pub fn sign_holds(&self, probes: usize) -> bool {
        let (lo, hi) = self.bracket;
        let s = self.inside_sign();
        (1..=probes).all(|i| {
            let x = lo + (hi - lo) * i as f64 / (probes + 1) as f64;
            s * self.eval(x) > 0.0
        })
    }

    /// Real roots that bracket `(lo, hi)` with `f` of the right sign inside.
    pub fn holds(&self) -> bool {
        self.brackets() && self.sign_holds(33)
    }
}

fn stable_roots(a2: f64, a1: f64, a0: f64, disc: f64) -> Option<(f64, f64)> {
    if disc < 0.0 || a2 == 0.0 {
        return None;
    }
    let q = -0.5 * (a1 + a1.signum() * disc.sqrt());
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    let (x1, x2) = (q / a2, a0 / q);
    Some((x1.min(x2), x1.max(x2)))
}

pub fn quadratic_witness(m: &BodyMetrics) -> Result<QuadraticWitness> {
    let (r, big_r) = (m.inradius, m.circumradius);
    if big_r - r <= 1e-6 * (1.0 + big_r) {
        return Err(Error::Precondition(format!(
            "radii too close for a witness: r = {r}, R = {big_r}"
        )));
    }
    let kv = m.curvature.value();
    let (a, p) = (m.area, m.perimeter);
    if kv == 0.0 {
        let a1 = Dd::from(p);
        let disc = a1.mul(a1).sub(Dd::from(4.0 * PI).mul(Dd::from(a))).hi();
        let (a2, a1, a0) = (-PI, p, -a);
        return Ok(QuadraticWitness {
            kappa: m.curvature,
            coeffs: (a2, a1, a0),
            discriminant: disc,
            roots: stable_roots(a2, a1, a0, disc),
            bracket: (r, big_r),
        });
    }
    if kv > 0.0 && p <= 0.0 {
        return Err(Error::Precondition("zero perimeter".into()));
    }
    if kv < 0.0 && hyperbolic_condition(m) <= 0.0 {
        return Err(Error::Precondition(format!(
            "(2π + λA)² − λP² = {} is not positive",
            hyperbolic_condition(m)
        )));
    }
    let (a2, a1, a0, disc) = curved_coefficients(kv, a, p);
    let s = if kv < 0.0 { -1.0 } else { 1.0 };
    let (a2, a1, a0) = (s * a2.hi(), s * a1.hi(), s * a0.hi());
    let disc = disc.hi();
    Ok(QuadraticWitness {
        kappa: m.curvature,
        coeffs: (a2, a1, a0),
        discriminant: disc,
        roots: stable_roots(a2, a1, a0, disc),
        bracket: m.sine_radii(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub kappa: f64,
    pub deficit: f64,
    pub bound_name: BoundName,
    pub bound: f64,
    /// `π²(R − r)²` of the same data placed in the plane.
    pub euclid: f64,
    pub gap: f64,
}

fn active_bound(report: &DeficitReport) -> Bound {
    let pick = match report.kappa.regime() {
        Regime::Euclidean => BoundName::EuclidB,
        Regime::Spherical => BoundName::S1,
        Regime::Hyperbolic => {
            if report.bound(BoundName::H1).is_some_and(|b| b.applicable) {
                BoundName::H1
            } else {
                BoundName::HMin
            }
        }
    };
    *report.bound(pick).expect("regime bound present")
}

/// Builds the body at every κ and compares its active bound with the
/// Euclidean Bonnesen term of the κ = 0 member of the family.
pub fn kappa_limit_sweep<F>(family: F, kappas: &[f64]) -> Result<Vec<SweepRow>>
where
    F: Fn(Curvature) -> Result<GeodesicPolygon> + Send + Sync,
{
    let flat = metrics(&family(Curvature::EUCLIDEAN)?)?;
    let euclid = euclid_bonnesen_rhs(&flat)?;
    map_indexed(kappas.len(), Execution::Parallel, |i| {
        let kappa = Curvature::new(kappas[i])?;
        let report = deficit_report(&metrics(&family(kappa)?)?)?;
        let b = active_bound(&report);
        Ok(SweepRow {
            kappa: kappa.value(),
            deficit: report.deficit,
            bound_name: b.name,
            bound: b.value,
            euclid,
            gap: (b.value - euclid).abs(),
        })
    })
    .into_iter()
    .collect()
}

/// On each side of zero, gaps shrink as |κ| shrinks and the smallest |κ|
/// ends below `final_tol`.
pub fn sweep_converges(rows: &[SweepRow], final_tol: f64) -> bool {
    [1.0, -1.0].iter().all(|&sign| {
        let mut side: Vec<_> = rows.iter().filter(|r| r.kappa * sign > 0.0).collect();
        side.sort_by(|a, b| b.kappa.abs().total_cmp(&a.kappa.abs()));
        side.windows(2).all(|w| w[1].gap <= w[0].gap) && side.last().is_none_or(|r| r.gap < final_tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{from_polar, random_body, regular_polygon, unit_square_polar};
    use crate::rng::RandomStream;
    use crate::surface::{disc_area, disc_perimeter, exp_at_base};
    use crate::convex::convex_hull;
    use num::{BigRational, ToPrimitive};

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn segment(kappa: Curvature, c: f64) -> GeodesicPolygon {
        let a = exp_at_base(kappa, c / 2.0, 0.0).unwrap();
        let b = exp_at_base(kappa, c / 2.0, PI).unwrap();
        convex_hull(&[a, b]).unwrap()
    }

    #[test]
    fn deficit_examples() {
        let rho = 0.7;
        assert!(deficit(Curvature::EUCLIDEAN, PI * rho * rho, TAU * rho).abs() < 1e-14);
        assert!(deficit(k(1.0), TAU, TAU).abs() < 1e-12);
        for &kv in &[-1.0, -0.3, 0.4, 1.0] {
            let kk = k(kv);
            let d = deficit(kk, disc_area(kk, 0.8).unwrap(), disc_perimeter(kk, 0.8).unwrap());
            assert!(d.abs() < 1e-12, "κ={kv}: {d}");
        }
    }

    #[test]
    fn unit_square_euclid() {
        let m = metrics(&from_polar(Curvature::EUCLIDEAN, &unit_square_polar()).unwrap()).unwrap();
        let rhs = euclid_bonnesen_rhs(&m).unwrap();
        let expect = PI * PI * (0.5f64.sqrt() - 0.5).powi(2);
        assert!((rhs - expect).abs() < 1e-9);
        assert!((rhs - 0.4233).abs() < 1e-4);
        let d = deficit(m.curvature, m.area, m.perimeter);
        assert!((d - (16.0 - 4.0 * PI)).abs() < 1e-12);
        assert!(deficit_report(&m).unwrap().all_satisfied());
    }

    #[test]
    fn euclid_segment_and_mismatch() {
        let c = 3.0;
        let m = BodyMetrics::from_values(Curvature::EUCLIDEAN, 0.0, 2.0 * c, 0.0, c / 2.0);
        assert!((deficit(m.curvature, 0.0, 2.0 * c) - 4.0 * c * c).abs() < 1e-12);
        assert!((euclid_bonnesen_rhs(&m).unwrap() - PI * PI * c * c / 4.0).abs() < 1e-12);
        let s = BodyMetrics::from_values(k(1.0), 1.0, 4.0, 0.5, 0.7);
        assert!(matches!(euclid_bonnesen_rhs(&s), Err(Error::RegimeMismatch { .. })));
        assert!(matches!(sphere_bounds(&m), Err(Error::RegimeMismatch { .. })));
        assert!(matches!(hyperbolic_bounds(&s), Err(Error::RegimeMismatch { .. })));
    }

    #[test]
    fn octant_ordering() {
        let kk = k(1.0);
        let pts = [
            exp_at_base(kk, PI / 2.0, 0.0).unwrap(),
            exp_at_base(kk, PI / 2.0, PI / 2.0).unwrap(),
            crate::surface::SurfacePoint::base(kk),
        ];
        let m = metrics(&convex_hull(&pts).unwrap()).unwrap();
        assert!((m.area - PI / 2.0).abs() < 1e-12);
        assert!((m.perimeter - 1.5 * PI).abs() < 1e-12);
        let r = deficit_report(&m).unwrap();
        let s1 = r.bound(BoundName::S1).unwrap().value;
        let s2 = r.bound(BoundName::S2).unwrap().value;
        assert!(r.deficit >= s1 && s1 >= s2 && s2 >= 0.0);
        assert!(r.all_satisfied());
    }

    #[test]
    fn s4_matches_s2() {
        let mut rng = RandomStream::new(3);
        for &kv in &[0.25, 1.0, 2.0] {
            for _ in 0..100 {
                let m = metrics(&random_body(k(kv), 12, &mut rng)).unwrap();
                let r = deficit_report(&m).unwrap();
                let s2 = r.bound(BoundName::S2).unwrap();
                let s4 = r.bound(BoundName::S4).unwrap();
                assert!((s4.lhs - r.deficit).abs() <= 1e-9 * (1.0 + r.deficit.abs()));
                assert!((s4.value - s2.value).abs() <= 1e-12 * (1.0 + s2.value));
            }
        }
    }

    #[test]
    fn complement_identity() {
        let mut rng = RandomStream::new(4);
        for _ in 0..1000 {
            let a = rng.uniform_in(0.0, 4.0 * PI);
            let a_c = 4.0 * PI - a;
            let lhs = (a - a_c).powi(2);
            let rhs = 4.0 * (TAU - a).powi(2);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }
    }

    #[test]
    fn segment_min_form() {
        let m = BodyMetrics::from_values(k(-1.0), 0.0, 20.0, 0.0, 5.0);
        let r = deficit_report(&m).unwrap();
        assert!(hyperbolic_condition(&m) < 0.0);
        assert!(!r.bound(BoundName::H1).unwrap().applicable);
        let h_min = r.bound(BoundName::HMin).unwrap();
        assert!((h_min.value - 4.0 * PI * PI).abs() < 1e-12);
        assert_eq!(h_min.satisfied(), Some(true));
        assert!((r.deficit - 400.0).abs() < 1e-12);
        assert!(h1_expression(&m) > r.deficit);
        assert!(r.all_satisfied());
    }

    #[test]
    fn segment_bodies_through_pipeline() {
        let kk = k(-1.0);
        for &c in &[1.0, 10.0] {
            let m = metrics(&segment(kk, c)).unwrap();
            assert!((m.perimeter - 2.0 * c).abs() < 1e-9 * c);
            assert!((m.circumradius - c / 2.0).abs() < 1e-9 * c);
            assert!(m.area.abs() < 1e-12 && m.inradius == 0.0);
            let r = deficit_report(&m).unwrap();
            assert_eq!(r.bound(BoundName::H1).unwrap().applicable, c < PI);
            assert!(r.all_satisfied());
        }
    }

    #[test]
    fn small_hyperbolic_bodies_meet_condition() {
        let kk = k(-1.0);
        let eta = 1.0f64.asinh();
        let mut rng = RandomStream::new(5);
        for _ in 0..200 {
            let b = crate::bodies::random_body_in(kk, eta, 12, &mut rng);
            let m = metrics(&b).unwrap();
            assert!(m.perimeter <= TAU + 1e-9);
            let c = hyperbolic_condition(&m);
            assert!(c >= 4.0 * PI * m.area + m.area * m.area - 1e-9);
        }
    }

    #[test]
    fn random_bodies_satisfy_all_bounds() {
        let mut rng = RandomStream::new(6);
        for &kv in &[-2.0, -0.25, 0.0, 0.25, 2.0] {
            for _ in 0..150 {
                let m = metrics(&random_body(k(kv), 12, &mut rng)).unwrap();
                let r = deficit_report(&m).unwrap();
                assert!(r.all_satisfied(), "{r:?}");
                if let (Some(s1), Some(s2)) = (r.bound(BoundName::S1), r.bound(BoundName::S2)) {
                    assert!(s1.value >= s2.value);
                }
                if kv < 0.0 && hyperbolic_condition(&m) < 0.0 {
                    assert!(r.deficit > 4.0 * PI * PI / -kv);
                }
                if kv == 1.0 {
                    for i in 1..20 {
                        let e = m.inradius + (m.circumradius - m.inradius) * i as f64 / 20.0;
                        assert!(m.perimeter * e.sin() - TAU <= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn disc_ngons_approach_equality() {
        for &kv in &[-1.0, 0.0, 1.0] {
            let m = metrics(&regular_polygon(k(kv), 0.5, 128, 0.0).unwrap()).unwrap();
            let r = deficit_report(&m).unwrap();
            assert!(r.deficit < 3e-3, "κ={kv}: {}", r.deficit);
            for b in &r.bounds {
                assert!(b.value < 1e-6, "κ={kv}: {b:?}");
            }
        }
    }

    #[test]
    fn unit_square_witness() {
        let m = metrics(&from_polar(Curvature::EUCLIDEAN, &unit_square_polar()).unwrap()).unwrap();
        let w = quadratic_witness(&m).unwrap();
        let (lo, hi) = w.roots.unwrap();
        let s = (16.0 - 4.0 * PI).sqrt();
        assert!((lo - (4.0 - s) / TAU).abs() < 1e-12);
        assert!((hi - (4.0 + s) / TAU).abs() < 1e-12);
        assert!((lo - 0.3417).abs() < 1e-4 && (hi - 0.9316).abs() < 1e-4);
        assert!(w.holds());
    }

    #[test]
    fn disc_has_no_witness() {
        for &kv in &[-1.0, 0.0, 1.0] {
            let kk = k(kv);
            let m = BodyMetrics::from_values(kk, disc_area(kk, 0.5).unwrap(), disc_perimeter(kk, 0.5).unwrap(), 0.5, 0.5);
            assert!(matches!(quadratic_witness(&m), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn witnesses_on_random_bodies() {
        let mut rng = RandomStream::new(7);
        for &kv in &[-1.0, 0.0, 1.0] {
            for _ in 0..200 {
                let m = metrics(&random_body(k(kv), 12, &mut rng)).unwrap();
                let Ok(w) = quadratic_witness(&m) else { continue };
                assert!(w.holds(), "{w:?}");
                let (a2, a1, a0) = w.coeffs;
                let naive = a1 * a1 - 4.0 * a2 * a0;
                assert!((naive - w.discriminant).abs() <= 1e-12 * w.discriminant.abs().max(a1 * a1));
                let (x1, x2) = w.roots.unwrap();
                assert!(w.eval(x1).abs() < 1e-9 && w.eval(x2).abs() < 1e-9);
            }
        }
    }

    fn exact(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap()
    }

    /// `4(2π − κA)²(P² − A(4π − κA))` in exact rational arithmetic.
    fn factored(kv: f64, a: f64, p: f64) -> f64 {
        let (k, a, p, tau) = (exact(kv), exact(a), exact(p), exact(TAU));
        let x = &tau - &k * &a;
        let two_tau = &tau + &tau;
        let v = BigRational::from_integer(4.into()) * &x * &x * (&p * &p - &a * (two_tau - &k * &a));
        v.to_f64().unwrap()
    }

    #[test]
    fn discriminant_factorization() {
        let mut rng = RandomStream::new(8);
        for _ in 0..2000 {
            let a = rng.uniform_in(0.0, TAU);
            let p = rng.uniform_in((a * (2.0 * TAU - a)).sqrt(), TAU);
            let d = curved_discriminant(k(1.0), a, p);
            let f = factored(1.0, a, p);
            assert!((d - f).abs() < 1e-9 * d.abs(), "A={a} P={p}: {d} vs {f}");

            let a = rng.uniform_in(0.0, 20.0);
            let p = rng.uniform_in((a * (2.0 * TAU + a)).sqrt(), TAU + a);
            let d = curved_discriminant(k(-1.0), a, p);
            let f = factored(-1.0, a, p);
            assert!((d - f).abs() < 1e-9 * d.abs(), "A={a} P={p}: {d} vs {f}");
        }
    }

    #[test]
    fn sweep_square_converges() {
        let data = unit_square_polar();
        let kappas = [0.1, 0.01, 1e-3, 1e-4, -0.1, -0.01, -1e-3, -1e-4];
        let rows = kappa_limit_sweep(|kk| from_polar(kk, &data), &kappas).unwrap();
        assert!(sweep_converges(&rows, 1e-3), "{rows:?}");
        let flat = deficit(Curvature::EUCLIDEAN, 1.0, 4.0);
        for w in rows.windows(2).filter(|w| w[0].kappa * w[1].kappa > 0.0) {
            let step = (w[0].kappa - w[1].kappa).abs();
            assert!((w[0].deficit - w[1].deficit).abs() < 2.0 * step);
        }
        assert!(rows.iter().all(|r| (r.deficit - flat).abs() < 2.0 * r.kappa.abs()));
    }

    #[test]
    fn sweep_disc_rows_vanish() {
        let data: Vec<_> = (0..256).map(|i| (0.5, TAU * i as f64 / 256.0)).collect();
        let rows = kappa_limit_sweep(|kk| from_polar(kk, &data), &[0.1, -0.1, 1e-3]).unwrap();
        for r in &rows {
            assert!(r.deficit.abs() < 1e-3 && r.bound < 1e-6 && r.euclid < 1e-6, "{r:?}");
        }
    }
}
