//! Branch continuation of the eigenvalue pair along a loop.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{eigenvalues, Loop, ParamPoint, SpectraError, TwoBandModel};
use crate::words::HalfInteger;

pub const MIN_SAMPLES: usize = 64;
pub const MAX_SAMPLES: usize = 1 << 20;
pub const DEFAULT_CLEARANCE_FRACTION: f64 = 1e-3;
/// Largest admissible distance of `-Δarg D / 4π` from a half-integer.
pub const VORTICITY_RESIDUAL_BOUND: f64 = 1e-3;

/// Largest per-step change of `arg D` accepted without refinement.
const MAX_STEP_ARG: f64 = FRAC_PI_2;
/// The chosen branch assignment must cost at most this fraction of the
/// alternative.
const MATCH_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions {
    pub initial_samples: usize,
    pub max_samples: usize,
    /// Minimum EP distance as a fraction of the loop diameter.
    pub clearance_fraction: f64,
    /// Known EPs checked for clearance.
    pub eps: Vec<ParamPoint>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            initial_samples: 1024,
            max_samples: MAX_SAMPLES,
            clearance_fraction: DEFAULT_CLEARANCE_FRACTION,
            eps: Vec::new(),
        }
    }
}

impl TraceOptions {
    pub fn with_eps(eps: &[ParamPoint]) -> Self {
        TraceOptions {
            eps: eps.to_vec(),
            ..Default::default()
        }
    }
}

/// Element of S₂ acting on the branch pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monodromy {
    Identity,
    Swap,
}

impl Monodromy {
    pub fn as_str(self) -> &'static str {
        match self {
            Monodromy::Identity => "identity",
            Monodromy::Swap => "swap",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BranchTrace {
    pub t: Vec<f64>,
    pub points: Vec<ParamPoint>,
    pub branch_plus: Vec<Complex64>,
    pub branch_minus: Vec<Complex64>,
    pub discriminant: Vec<Complex64>,
    pub permutation: Monodromy,
    /// Total increment of `arg D` along the loop, radians.
    pub d_arg: f64,
}

impl BranchTrace {
    pub fn samples(&self) -> usize {
        self.t.len() - 1
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re_Eplus,im_Eplus,re_Eminus,im_Eminus,re_D,im_D\n");
        for k in 0..self.t.len() {
            let (p, m, d) = (self.branch_plus[k], self.branch_minus[k], self.discriminant[k]);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.t[k], p.re, p.im, m.re, m.im, d.re, d.im
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vorticity {
    pub value: HalfInteger,
    pub raw: f64,
    pub residual: f64,
}

enum Attempt {
    Done(BranchTrace),
    Refine,
}

fn attempt(model: &dyn TwoBandModel, lp: &Loop, n: usize) -> Attempt {
    let points = lp.sample(n);
    let t: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let discriminant: Vec<Complex64> = points.iter().map(|&p| model.discriminant(p)).collect();
    let pairs: Vec<(Complex64, Complex64)> = points.iter().map(|&p| eigenvalues(model, p)).collect();

    let mut plus = Vec::with_capacity(n + 1);
    let mut minus = Vec::with_capacity(n + 1);
    plus.push(pairs[0].0);
    minus.push(pairs[0].1);
    let mut d_arg = 0.0;
    for k in 1..=n {
        let step = (discriminant[k] / discriminant[k - 1]).arg();
        if !step.is_finite() || step.abs() > MAX_STEP_ARG {
            return Attempt::Refine;
        }
        d_arg += step;

        let (p, m) = (plus[k - 1], minus[k - 1]);
        let (e1, e2) = pairs[k];
        let same = (e1 - p).norm() + (e2 - m).norm();
        let swap = (e2 - p).norm() + (e1 - m).norm();
        if same.min(swap) > MATCH_MARGIN * same.max(swap) {
            return Attempt::Refine;
        }
        if same <= swap {
            plus.push(e1);
            minus.push(e2);
        } else {
            plus.push(e2);
            minus.push(e1);
        }
    }
    let end = plus[n];
    let permutation = if (end - plus[0]).norm() <= (end - minus[0]).norm() {
        Monodromy::Identity
    } else {
        Monodromy::Swap
    };
    Attempt::Done(BranchTrace {
        t,
        points,
        branch_plus: plus,
        branch_minus: minus,
        discriminant,
        permutation,
        d_arg,
    })
}

/// Samples the eigenvalue pair along `lp`, matching branches step to step by
/// minimal total displacement. The sample count doubles until every step
/// moves `arg D` by at most π/2 and each matching is unambiguous.
pub fn trace_loop(
    model: &dyn TwoBandModel,
    lp: &Loop,
    opts: &TraceOptions,
) -> Result<BranchTrace, SpectraError> {
    if opts.initial_samples < MIN_SAMPLES {
        return Err(SpectraError::InvalidArgument(format!(
            "at least {MIN_SAMPLES} samples required, got {}",
            opts.initial_samples
        )));
    }
    let required = opts.clearance_fraction * lp.diameter();
    for &ep in &opts.eps {
        let distance = lp.clearance(ep);
        if distance <= required {
            return Err(SpectraError::ClearanceViolation {
                ep,
                distance,
                required,
            });
        }
    }
    let mut n = opts.initial_samples;
    loop {
        match attempt(model, lp, n) {
            Attempt::Done(trace) => return Ok(trace),
            Attempt::Refine if n < opts.max_samples => n = (2 * n).min(opts.max_samples),
            Attempt::Refine => return Err(SpectraError::UnresolvedBranching { samples: n }),
        }
    }
}

/// `-Δarg D / 4π`, positive for clockwise loops around positively charged
/// EPs, snapped to the nearest half-integer.
pub fn numerical_vorticity(trace: &BranchTrace) -> Result<Vorticity, SpectraError> {
    let raw = -trace.d_arg / (4.0 * PI);
    let value = HalfInteger::nearest(raw);
    let residual = (raw - value.as_f64()).abs();
    if residual >= VORTICITY_RESIDUAL_BOUND {
        return Err(SpectraError::NonQuantized { raw, residual });
    }
    Ok(Vorticity {
        value,
        raw,
        residual,
    })
}
