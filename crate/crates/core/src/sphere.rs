//! Stereographic projection between the unit sphere and the extended
//! parameter plane, from the north pole `(0, 0, 1)` onto `ξ = 0`.

use std::fmt;

use thiserror::Error;

/// Tolerance on `|p|² - 1` for a validated sphere point.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Angle slack used to decide that a sphere chord passes over the pole.
const POLE_CROSSING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SphereError {
    #[error("point ({0}, {1}, {2}) is not on the unit sphere")]
    OffSphere(f64, f64, f64),
    #[error("plane point ({0}, {1}) is not finite")]
    NotFinite(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub n: f64,
    pub chi: f64,
    pub xi: f64,
}

impl SpherePoint {
    /// Validated point: the norm must be 1 within [`UNIT_NORM_TOL`].
    pub fn new(n: f64, chi: f64, xi: f64) -> Result<Self, SphereError> {
        let p = SpherePoint { n, chi, xi };
        if (p.norm_sq() - 1.0).abs() <= UNIT_NORM_TOL {
            Ok(p)
        } else {
            Err(SphereError::OffSphere(n, chi, xi))
        }
    }

    /// Unvalidated point, e.g. rounded published coordinates.
    pub const fn raw(n: f64, chi: f64, xi: f64) -> Self {
        SpherePoint { n, chi, xi }
    }

    pub const NORTH_POLE: SpherePoint = SpherePoint::raw(0.0, 0.0, 1.0);
    pub const SOUTH_POLE: SpherePoint = SpherePoint::raw(0.0, 0.0, -1.0);

    pub fn norm_sq(&self) -> f64 {
        self.n * self.n + self.chi * self.chi + self.xi * self.xi
    }

    fn dot(&self, other: &SpherePoint) -> f64 {
        self.n * other.n + self.chi * other.chi + self.xi * other.xi
    }

    fn angle_to(&self, other: &SpherePoint) -> f64 {
        let c = self.dot(other) / (self.norm_sq() * other.norm_sq()).sqrt();
        c.clamp(-1.0, 1.0).acos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub n: f64,
    pub chi: f64,
}

impl PlanePoint {
    pub fn new(n: f64, chi: f64) -> Result<Self, SphereError> {
        if n.is_finite() && chi.is_finite() {
            Ok(PlanePoint { n, chi })
        } else {
            Err(SphereError::NotFinite(n, chi))
        }
    }
}

/// A point of the extended plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedPoint {
    Finite(PlanePoint),
    Infinity,
}

impl ExtendedPoint {
    pub fn finite(self) -> Option<PlanePoint> {
        match self {
            ExtendedPoint::Finite(p) => Some(p),
            ExtendedPoint::Infinity => None,
        }
    }
}

impl fmt::Display for ExtendedPoint {
    /// CSV row body: `n,chi`, or `inf,inf` at infinity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedPoint::Finite(p) => write!(f, "{},{}", p.n, p.chi),
            ExtendedPoint::Infinity => f.write_str("inf,inf"),
        }
    }
}

/// `(ñ/(1-ξ̃), χ̃/(1-ξ̃))`; the north pole maps to [`ExtendedPoint::Infinity`].
pub fn project(p: SpherePoint) -> ExtendedPoint {
    let denom = 1.0 - p.xi;
    if denom <= f64::EPSILON {
        return ExtendedPoint::Infinity;
    }
    ExtendedPoint::Finite(PlanePoint {
        n: p.n / denom,
        chi: p.chi / denom,
    })
}

/// Inverse projection with `ζ = 1 + n² + χ²`.
pub fn unproject(q: PlanePoint) -> SpherePoint {
    let r2 = q.n * q.n + q.chi * q.chi;
    let zeta = 1.0 + r2;
    SpherePoint {
        n: 2.0 * q.n / zeta,
        chi: 2.0 * q.chi / zeta,
        xi: (r2 - 1.0) / zeta,
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProjectedCurve {
    /// Pointwise image with `Infinity` markers where the curve meets or
    /// passes over the north pole.
    pub points: Vec<ExtendedPoint>,
    /// Finite polylines between infinity crossings.
    pub branches: Vec<Vec<PlanePoint>>,
}

impl ProjectedCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,chi\n");
        for p in &self.points {
            out.push_str(&format!("{p}\n"));
        }
        out
    }
}

/// Projects a sampled curve. A sample at the pole, or a chord whose short
/// great-circle arc runs over the pole, splits the polyline.
pub fn project_curve(curve: &[SpherePoint]) -> ProjectedCurve {
    let mut out = ProjectedCurve::default();
    let mut branch: Vec<PlanePoint> = Vec::new();
    let mut prev: Option<SpherePoint> = None;

    let close_branch = |branch: &mut Vec<PlanePoint>, out: &mut ProjectedCurve| {
        if !branch.is_empty() {
            out.branches.push(std::mem::take(branch));
        }
    };

    for &p in curve {
        if let Some(q) = prev {
            if crosses_pole(&q, &p) {
                out.points.push(ExtendedPoint::Infinity);
                close_branch(&mut branch, &mut out);
            }
        }
        let img = project(p);
        out.points.push(img);
        match img {
            ExtendedPoint::Finite(x) => branch.push(x),
            ExtendedPoint::Infinity => close_branch(&mut branch, &mut out),
        }
        prev = Some(p);
    }
    close_branch(&mut branch, &mut out);
    out
}

fn crosses_pole(u: &SpherePoint, v: &SpherePoint) -> bool {
    let north = SpherePoint::NORTH_POLE;
    let (du, dv) = (u.angle_to(&north), v.angle_to(&north));
    // endpoints at the pole are handled pointwise
    if du <= POLE_CROSSING_TOL || dv <= POLE_CROSSING_TOL {
        return false;
    }
    du + dv - u.angle_to(v) <= POLE_CROSSING_TOL
}
