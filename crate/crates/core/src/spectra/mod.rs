//! Two-band spectra, EP location and branch tracing along loops.
//!
//! Orientation convention: clockwise loops count positively. A clockwise
//! crossing of a cut ray emits the positive generator, and the numerical
//! vorticity is `-Δarg D / 4π` so that a clockwise loop around both EPs of
//! `SquareRoot` has vorticity `+1`, matching the word `ab`.

mod cuts;
mod eps;
mod model;
mod path;
mod trace;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cuts::{charged_vorticity, default_cuts, loop_word, CutRay};
pub use eps::{find_eps, refine_ep, EpLocation, Region};
pub use model::{
    discriminant, eigenvalues, BlochVectors, GenericTwoLevel, ModelSpec, NhDirac, SquareRoot,
    TwoBandModel,
};
pub use path::{word_loop, Loop, LoopSpec, Orientation, Segment, SegmentSpec};
pub use trace::{
    numerical_vorticity, trace_loop, BranchTrace, Monodromy, TraceOptions, Vorticity,
    DEFAULT_CLEARANCE_FRACTION, MAX_SAMPLES, MIN_SAMPLES, VORTICITY_RESIDUAL_BOUND,
};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamPoint {
    pub x: f64,
    pub y: f64,
}

impl ParamPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        ParamPoint { x, y }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Self {
        ParamPoint { x: z.re, y: z.im }
    }

    pub fn dist(self, other: ParamPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("region is degenerate or not finite")]
    EmptyRegion,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Newton iteration from {start} did not reach tolerance (residual {residual:e})")]
    NoConvergence { start: ParamPoint, residual: f64 },
    #[error("loop passes within {distance:e} of EP at {ep}; clearance {required:e} required, enlarge the loop's distance to the EP")]
    ClearanceViolation {
        ep: ParamPoint,
        distance: f64,
        required: f64,
    },
    #[error("branch continuation unresolved at {samples} samples")]
    UnresolvedBranching { samples: usize },
    #[error("vorticity {raw} is {residual:e} away from a half-integer")]
    NonQuantized { raw: f64, residual: f64 },
    #[error("sample {sample} touches cut {cut} without a transversal crossing; resample the loop")]
    TangentCrossing { sample: usize, cut: usize },
    #[error("loop basepoint lies on cut {cut}")]
    AmbiguousBasepoint { cut: usize },
    #[error("segment after sample {sample} passes through branch point {cut}")]
    ThroughBranchPoint { sample: usize, cut: usize },
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
}
