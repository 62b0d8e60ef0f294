//! The surface `X_κ` of constant curvature κ in a single embedding.
//!
//! | κ     | model                                   | base point x₀       |
//! |-------|-----------------------------------------|---------------------|
//! | κ > 0 | sphere `x² + y² + z² = 1/κ`             | `(0, 0, 1/√κ)`      |
//! | κ = 0 | affine slice `z = 1`                    | `(0, 0, 1)`         |
//! | κ < 0 | upper sheet `x² + y² − z² = 1/κ, z > 0` | `(0, 0, 1/√|κ|)`    |
//!
//! In every model a geodesic is the intersection of the surface with a plane
//! through the origin, so a geodesic line is represented by that plane's
//! normal ([`GeodesicLine`]) and orientation tests are 3×3 determinants.

use nalgebra::{Matrix3, Vector3};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

const TAYLOR_CUTOFF: f64 = 1e-8;
const POINT_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// Gauss curvature κ (units 1/length²). `κ = 0` is an exact value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvature(f64);

impl Curvature {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa.is_finite() {
            Ok(Self(kappa))
        } else {
            Err(Error::NonFiniteCurvature(kappa))
        }
    }

    pub const EUCLIDEAN: Curvature = Curvature(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        if self.0 > 0.0 {
            Regime::Spherical
        } else if self.0 < 0.0 {
            Regime::Hyperbolic
        } else {
            Regime::Euclidean
        }
    }

    /// `√|κ|`, or 1 for the plane (the factor between embedding and unit-model coordinates).
    pub fn root(self) -> f64 {
        if self.0 == 0.0 {
            1.0
        } else {
            self.0.abs().sqrt()
        }
    }

    /// Sign of κ as used by the dual (line) form `diag(1, 1, sign κ)`.
    pub(crate) fn sign(self) -> f64 {
        if self.0 > 0.0 {
            1.0
        } else if self.0 < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Radius of a hemisphere, `π/(2√κ)`; `None` unless κ > 0.
    pub fn hemisphere_radius(self) -> Option<f64> {
        (self.0 > 0.0).then(|| PI / (2.0 * self.0.sqrt()))
    }

    pub fn is_spherical(self) -> bool {
        self.0 > 0.0
    }

    pub fn is_hyperbolic(self) -> bool {
        self.0 < 0.0
    }
}

impl From<Curvature> for f64 {
    fn from(k: Curvature) -> f64 {
        k.0
    }
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `cos(√κ t)`, `1`, or `cosh(√|κ| t)`.
pub fn gen_cos(kappa: Curvature, t: f64) -> f64 {
    let k = kappa.value();
    let x = k * t * t;
    if x.abs() < TAYLOR_CUTOFF {
        return 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
    }
    let s = kappa.root();
    if k > 0.0 {
        (s * t).cos()
    } else {
        (s * t).cosh()
    }
}

/// `sin(√κ t)/√κ`, `t`, or `sinh(√|κ| t)/√|κ|`.
pub fn gen_sin(kappa: Curvature, t: f64) -> f64 {
    let k = kappa.value();
    let x = k * t * t;
    if x.abs() < TAYLOR_CUTOFF {
        return t * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
    }
    let s = kappa.root();
    if k > 0.0 {
        (s * t).sin() / s
    } else {
        (s * t).sinh() / s
    }
}

/// Inverse of [`gen_sin`] on its monotone branch (`|√κ t| ≤ π/2` for κ > 0).
pub fn gen_asin(kappa: Curvature, y: f64) -> f64 {
    let k = kappa.value();
    if k == 0.0 {
        return y;
    }
    let s = kappa.root();
    if k > 0.0 {
        (y * s).clamp(-1.0, 1.0).asin() / s
    } else {
        (y * s).asinh() / s
    }
}

fn check_disc_radius(kappa: Curvature, r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("disc radius must be finite and ≥ 0, got {r}")));
    }
    if let Some(h) = kappa.hemisphere_radius() {
        if r >= h {
            return Err(Error::Domain(format!(
                "disc radius {r} reaches the hemisphere radius {h} for κ = {kappa}"
            )));
        }
    }
    Ok(())
}

/// Perimeter `2π·gen_sin(κ, r)` of the geodesic disc of radius `r`.
pub fn disc_perimeter(kappa: Curvature, r: f64) -> Result<f64> {
    check_disc_radius(kappa, r)?;
    Ok(TAU * gen_sin(kappa, r))
}

/// Area `2π(1 − gen_cos(κ, r))/κ` of the geodesic disc of radius `r` (`πr²` for κ = 0).
pub fn disc_area(kappa: Curvature, r: f64) -> Result<f64> {
    check_disc_radius(kappa, r)?;
    Ok(disc_area_unchecked(kappa, r))
}

/// Same as [`disc_area`] without the hemisphere restriction; `r` up to `π/√κ`
/// covers the whole sphere. Evaluated as `4π·gen_sin(κ, r/2)²`, which is the
/// half-angle form of `2π(1 − gen_cos)/κ` and does not cancel as κ → 0.
pub(crate) fn disc_area_unchecked(kappa: Curvature, r: f64) -> f64 {
    let h = gen_sin(kappa, 0.5 * r);
    2.0 * TAU * h * h
}

/// A point of `X_κ` in embedding coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    coords: Vec3,
    curvature: Curvature,
}

impl SurfacePoint {
    /// Validates the model equation within `1e-9` relative tolerance.
    pub fn new(coords: Vec3, curvature: Curvature) -> Result<Self> {
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::Domain("non-finite coordinates".into()));
        }
        let k = curvature.value();
        let ok = match curvature.regime() {
            Regime::Spherical => {
                let target = 1.0 / k;
                (coords.norm_squared() - target).abs() <= POINT_REL_TOL * target
            }
            Regime::Hyperbolic => {
                let q = coords.x * coords.x + coords.y * coords.y - coords.z * coords.z;
                let scale = coords.norm_squared().max(1.0 / k.abs());
                coords.z > 0.0 && (q - 1.0 / k).abs() <= POINT_REL_TOL * scale
            }
            Regime::Euclidean => coords.z == 1.0,
        };
        if ok {
            Ok(Self { coords, curvature })
        } else {
            Err(Error::Domain(format!(
                "coordinates {:?} are not on X_κ for κ = {curvature}",
                coords.as_slice()
            )))
        }
    }

    /// Planar point `(x, y)`; only for κ = 0.
    pub fn planar(x: f64, y: f64) -> Self {
        Self {
            coords: Vec3::new(x, y, 1.0),
            curvature: Curvature::EUCLIDEAN,
        }
    }

    /// The base point x₀.
    pub fn base(curvature: Curvature) -> Self {
        let z = match curvature.regime() {
            Regime::Euclidean => 1.0,
            _ => 1.0 / curvature.root(),
        };
        Self {
            coords: Vec3::new(0.0, 0.0, z),
            curvature,
        }
    }

    /// Central projection of an arbitrary vector back onto the surface.
    /// Returns `None` when the vector has no image (zero, or not timelike
    /// future-pointing for κ < 0, or `z ≤ 0` for κ = 0).
    pub(crate) fn project(v: Vec3, curvature: Curvature) -> Option<Self> {
        let coords = match curvature.regime() {
            Regime::Spherical => {
                let n = v.norm();
                if n < 1e-300 {
                    return None;
                }
                v * (1.0 / (curvature.root() * n))
            }
            Regime::Hyperbolic => {
                let q = v.z * v.z - v.x * v.x - v.y * v.y;
                if !(q > 0.0) {
                    return None;
                }
                let f = 1.0 / (curvature.root() * q.sqrt());
                if v.z > 0.0 {
                    v * f
                } else {
                    -v * f
                }
            }
            Regime::Euclidean => {
                if v.z.abs() < 1e-300 {
                    return None;
                }
                Vec3::new(v.x / v.z, v.y / v.z, 1.0)
            }
        };
        Some(Self { coords, curvature })
    }

    pub(crate) fn from_raw(coords: Vec3, curvature: Curvature) -> Self {
        Self { coords, curvature }
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// Coordinates in the unit-curvature model (`coords·√|κ|`).
    pub fn unit(&self) -> Vec3 {
        if self.curvature.value() == 0.0 {
            self.coords
        } else {
            self.coords * self.curvature.root()
        }
    }

    /// Geodesic distance. Panics in debug builds on curvature mismatch; use
    /// [`geodesic_distance`] for a checked version.
    pub fn distance(&self, other: &SurfacePoint) -> f64 {
        debug_assert_eq!(self.curvature, other.curvature);
        let k = self.curvature;
        match k.regime() {
            Regime::Euclidean => {
                let dx = self.coords.x - other.coords.x;
                let dy = self.coords.y - other.coords.y;
                dx.hypot(dy)
            }
            Regime::Spherical => {
                let (u, v) = (self.unit(), other.unit());
                u.cross(&v).norm().atan2(u.dot(&v)) / k.root()
            }
            Regime::Hyperbolic => {
                let (u, v) = (self.unit(), other.unit());
                // the chord form cancels for far-apart points
                let b = u.z * v.z - u.x * v.x - u.y * v.y;
                if b >= 2.0 {
                    return b.acosh() / k.root();
                }
                let w = u - v;
                let q = (w.x * w.x + w.y * w.y - w.z * w.z).max(0.0);
                2.0 * (0.5 * q.sqrt()).asinh() / k.root()
            }
        }
    }

    /// Polar coordinates `(r, θ)` about x₀; inverse of [`exp_at_base`].
    pub fn polar(&self) -> (f64, f64) {
        let r = SurfacePoint::base(self.curvature).distance(self);
        let theta = if self.coords.x == 0.0 && self.coords.y == 0.0 {
            0.0
        } else {
            self.coords.y.atan2(self.coords.x)
        };
        (r, theta)
    }

    /// Same point, compared with tolerance in geodesic distance.
    pub fn approx_eq(&self, other: &SurfacePoint, tol: f64) -> bool {
        self.curvature == other.curvature && self.distance(other) <= tol
    }
}

fn same_curvature(a: Curvature, b: Curvature) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::CurvatureMismatch {
            left: a.value(),
            right: b.value(),
        })
    }
}

pub(crate) fn check_same(a: Curvature, b: Curvature) -> Result<()> {
    same_curvature(a, b)
}

pub fn geodesic_distance(p: &SurfacePoint, q: &SurfacePoint) -> Result<f64> {
    same_curvature(p.curvature, q.curvature)?;
    Ok(p.distance(q))
}

/// The point at distance `r` from x₀ in direction θ.
pub fn exp_at_base(kappa: Curvature, r: f64, theta: f64) -> Result<SurfacePoint> {
    if !(r >= 0.0 && r.is_finite() && theta.is_finite()) {
        return Err(Error::Domain(format!("invalid polar coordinates ({r}, {theta})")));
    }
    if kappa.is_spherical() && r >= PI / kappa.root() {
        return Err(Error::Domain(format!(
            "radius {r} reaches the antipode of x₀ (π/√κ = {})",
            PI / kappa.root()
        )));
    }
    Ok(exp_at_base_unchecked(kappa, r, theta))
}

pub(crate) fn exp_at_base_unchecked(kappa: Curvature, r: f64, theta: f64) -> SurfacePoint {
    let gs = gen_sin(kappa, r);
    let z = match kappa.regime() {
        Regime::Euclidean => 1.0,
        _ => gen_cos(kappa, r) / kappa.root(),
    };
    SurfacePoint {
        coords: Vec3::new(gs * theta.cos(), gs * theta.sin(), z),
        curvature: kappa,
    }
}

/// An oriented geodesic line: the plane through the origin with normal `n`,
/// scaled so that `n · p` equals `gen_sin` of the signed distance from the
/// line to `p` (positive on the left of the orienting direction).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicLine {
    normal: Vec3,
    curvature: Curvature,
}

/// `√(nx² + ny² + sign(κ)·nz²)`, the length of a line normal under the dual form.
fn dual_norm(kappa: Curvature, n: &Vec3) -> f64 {
    (n.x * n.x + n.y * n.y + kappa.sign() * n.z * n.z).max(0.0).sqrt()
}

impl GeodesicLine {
    /// Line through `a` then `b`; `None` if the points coincide (or are
    /// antipodal on the sphere).
    pub fn through(a: &SurfacePoint, b: &SurfacePoint) -> Option<Self> {
        let k = a.curvature;
        let (ua, ub) = (a.unit(), b.unit());
        // (b − a) × ... keeps the cross product well conditioned for close points
        let n = ua.cross(&(ub - ua));
        let len = dual_norm(k, &n);
        let scale = ua.norm() * (ub - ua).norm();
        if !(len > 1e-15 * scale.max(1e-300)) || len == 0.0 {
            return None;
        }
        Some(Self {
            normal: n / len,
            curvature: k,
        })
    }

    pub(crate) fn from_normal(normal: Vec3, curvature: Curvature) -> Option<Self> {
        let len = dual_norm(curvature, &normal);
        (len > 0.0).then(|| Self {
            normal: normal / len,
            curvature,
        })
    }

    /// `gen_sin(κ, signed distance)`; cheap, monotone in the distance.
    #[inline]
    pub fn side(&self, p: &SurfacePoint) -> f64 {
        self.normal.dot(&p.coords)
    }

    #[inline]
    pub(crate) fn side_coords(&self, coords: &Vec3) -> f64 {
        self.normal.dot(coords)
    }

    pub fn signed_distance(&self, p: &SurfacePoint) -> f64 {
        gen_asin(self.curvature, self.side(p))
    }

    pub fn normal(&self) -> &Vec3 {
        &self.normal
    }

    pub fn reversed(&self) -> Self {
        Self {
            normal: -self.normal,
            curvature: self.curvature,
        }
    }

    /// Image of the line under an isometry.
    pub fn transformed(&self, g: &Isometry) -> Self {
        Self {
            normal: g.normal_matrix() * self.normal,
            curvature: self.curvature,
        }
    }

    /// Line through `p` perpendicular to `self`, oriented so that the
    /// direction of `self` points into its positive side.
    pub fn perpendicular_through(&self, p: &SurfacePoint) -> Option<Self> {
        let k = self.curvature;
        let s = k.sign();
        // tangent direction normal to `self` (dual vector pushed to the primal side)
        let dir = Vec3::new(self.normal.x, self.normal.y, s * self.normal.z);
        let n = dir.cross(&p.unit());
        GeodesicLine::from_normal(n, k)
    }
}

/// Orientation-preserving isometry of `X_κ` acting linearly on embedding coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    matrix: Mat3,
    curvature: Curvature,
}

impl Isometry {
    pub fn identity(curvature: Curvature) -> Self {
        Self {
            matrix: Mat3::identity(),
            curvature,
        }
    }

    /// Validated constructor.
    pub fn from_matrix(matrix: Mat3, curvature: Curvature) -> Result<Self> {
        let g = Self { matrix, curvature };
        if g.is_valid(1e-9) {
            Ok(g)
        } else {
            Err(Error::Domain("matrix is not an orientation-preserving isometry".into()))
        }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// Rotation by `phi` about x₀ (the stabilizer G₀).
    pub fn rotation(curvature: Curvature, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self {
            matrix: Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            curvature,
        }
    }

    /// Transvection along the x-axis through x₀ by distance `rho`.
    fn along_x(curvature: Curvature, rho: f64) -> Self {
        let matrix = match curvature.regime() {
            Regime::Euclidean => Mat3::new(1.0, 0.0, rho, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            Regime::Spherical => {
                let (s, c) = (curvature.root() * rho).sin_cos();
                Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
            }
            Regime::Hyperbolic => {
                let a = curvature.root() * rho;
                let (s, c) = (a.sinh(), a.cosh());
                Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c)
            }
        };
        Self { matrix, curvature }
    }

    /// The translation `t_x` (minimal rotation on the sphere) taking x₀ to the
    /// point with polar coordinates `(rho, theta)`.
    pub fn translation_polar(curvature: Curvature, rho: f64, theta: f64) -> Self {
        Isometry::rotation(curvature, theta)
            .then_after(&Isometry::along_x(curvature, rho))
            .then_after(&Isometry::rotation(curvature, -theta))
    }

    /// `t_x` for the given point.
    pub fn translation_to(p: &SurfacePoint) -> Self {
        let (rho, theta) = p.polar();
        Isometry::translation_polar(p.curvature, rho, theta)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &Isometry) -> Self {
        debug_assert_eq!(self.curvature, other.curvature);
        Self {
            matrix: self.matrix * other.matrix,
            curvature: self.curvature,
        }
    }

    pub fn compose(&self, other: &Isometry) -> Result<Self> {
        same_curvature(self.curvature, other.curvature)?;
        Ok(self.then_after(other))
    }

    pub fn inverse(&self) -> Self {
        let m = &self.matrix;
        let matrix = match self.curvature.regime() {
            Regime::Spherical => m.transpose(),
            Regime::Hyperbolic => {
                let j = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
                j * m.transpose() * j
            }
            Regime::Euclidean => {
                let r = m.fixed_view::<2, 2>(0, 0).transpose();
                let t = nalgebra::Vector2::new(m[(0, 2)], m[(1, 2)]);
                let ti = -(r * t);
                Mat3::new(r[(0, 0)], r[(0, 1)], ti.x, r[(1, 0)], r[(1, 1)], ti.y, 0.0, 0.0, 1.0)
            }
        };
        Self {
            matrix,
            curvature: self.curvature,
        }
    }

    /// Inverse transpose, the action on line normals.
    pub(crate) fn normal_matrix(&self) -> Mat3 {
        let m = &self.matrix;
        match self.curvature.regime() {
            Regime::Spherical => *m,
            Regime::Hyperbolic => {
                let j = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
                j * m * j
            }
            Regime::Euclidean => self.inverse().matrix.transpose(),
        }
    }

    pub fn apply(&self, p: &SurfacePoint) -> SurfacePoint {
        debug_assert_eq!(self.curvature, p.curvature);
        let v = self.matrix * p.coords;
        SurfacePoint::project(v, self.curvature).unwrap_or(SurfacePoint {
            coords: v,
            curvature: self.curvature,
        })
    }

    /// Checks the form-preservation invariant of the regime.
    pub fn is_valid(&self, tol: f64) -> bool {
        let m = &self.matrix;
        if !m.iter().all(|x| x.is_finite()) {
            return false;
        }
        let scale = m.norm().max(1.0);
        match self.curvature.regime() {
            Regime::Spherical => {
                (m.transpose() * m - Mat3::identity()).norm() <= tol * scale
                    && (m.determinant() - 1.0).abs() <= tol * scale
            }
            Regime::Hyperbolic => {
                let j = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
                (m.transpose() * j * m - j).norm() <= tol * scale * scale
                    && (m.determinant() - 1.0).abs() <= tol * scale * scale * scale
                    && m[(2, 2)] > 0.0
            }
            Regime::Euclidean => {
                let r = m.fixed_view::<2, 2>(0, 0).into_owned();
                m[(2, 0)] == 0.0
                    && m[(2, 1)] == 0.0
                    && m[(2, 2)] == 1.0
                    && (r.transpose() * r - nalgebra::Matrix2::identity()).norm() <= tol
                    && (r.determinant() - 1.0).abs() <= tol
            }
        }
    }
}

/// Draws `t_x ∘ γ` with γ uniform in the stabilizer of x₀ and x area-uniform
/// over the disc of radius `support_radius` about x₀ (over the whole sphere
/// for κ > 0).
#[derive(Clone, Copy, Debug)]
pub struct IsometrySampler {
    curvature: Curvature,
    half_gsin: f64,
    support_area: f64,
}

impl IsometrySampler {
    pub fn new(curvature: Curvature, support_radius: f64) -> Result<Self> {
        let radius = if curvature.is_spherical() {
            PI / curvature.root()
        } else {
            if !(support_radius > 0.0 && support_radius.is_finite()) {
                return Err(Error::Domain(format!(
                    "support radius must be positive and finite, got {support_radius}"
                )));
            }
            support_radius
        };
        let half_gsin = gen_sin(curvature, 0.5 * radius);
        Ok(Self {
            curvature,
            half_gsin,
            support_area: disc_area_unchecked(curvature, radius),
        })
    }

    /// Total area W of the region the translation part is drawn from.
    pub fn support_area(&self) -> f64 {
        self.support_area
    }

    /// Polar coordinates `(rho, theta)` of an area-uniform point plus a spin `phi`.
    #[inline]
    pub(crate) fn draw(&self, rng: &mut RandomStream) -> (f64, f64, f64) {
        let phi = rng.angle();
        let u = rng.uniform();
        let theta = rng.angle();
        // area of D_ρ is 4π·gen_sin(ρ/2)², so invert at a uniform fraction of W
        let rho = 2.0 * gen_asin(self.curvature, u.sqrt() * self.half_gsin);
        (rho, theta, phi)
    }

    pub fn sample(&self, rng: &mut RandomStream) -> Isometry {
        let (rho, theta, phi) = self.draw(rng);
        Isometry::translation_polar(self.curvature, rho, theta)
            .then_after(&Isometry::rotation(self.curvature, phi))
    }
}

/// One Haar-style isometry draw; returns the isometry and the support area W.
pub fn sample_isometry(
    kappa: Curvature,
    support_radius: f64,
    rng: &mut RandomStream,
) -> Result<(Isometry, f64)> {
    let sampler = IsometrySampler::new(kappa, support_radius)?;
    Ok((sampler.sample(rng), sampler.support_area()))
}
