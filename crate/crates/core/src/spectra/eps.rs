//! EP search: grid scan for cells where both real EP conditions change
//! sign, then damped Newton on the 2×2 real system.

use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ParamPoint, SpectraError, TwoBandModel};

const MAX_NEWTON_STEPS: usize = 50;
const POLISH_STEPS: usize = 3;
const FD_RELATIVE_STEP: f64 = 1e-6;
const CHARGE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, SpectraError> {
        let r = Region {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        r.validate()?;
        Ok(r)
    }

    /// Square `[-half, half]²` centered at the origin.
    pub fn square(half: f64) -> Result<Self, SpectraError> {
        Region::new(-half, half, -half, half)
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        let vals = [self.x_min, self.x_max, self.y_min, self.y_max];
        if vals.iter().any(|v| !v.is_finite()) || self.x_max <= self.x_min || self.y_max <= self.y_min
        {
            return Err(SpectraError::EmptyRegion);
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn scale(&self) -> f64 {
        self.width().max(self.height())
    }

    fn contains(&self, p: ParamPoint, margin: f64) -> bool {
        p.x >= self.x_min - margin
            && p.x <= self.x_max + margin
            && p.y >= self.y_min - margin
            && p.y <= self.y_max + margin
    }

    /// Grid vertex `(i, j)` of an `n × n` cell grid.
    pub fn vertex(&self, i: usize, j: usize, n: usize) -> ParamPoint {
        ParamPoint::new(
            self.x_min + self.width() * i as f64 / n as f64,
            self.y_min + self.height() * j as f64 / n as f64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpLocation {
    pub point: ParamPoint,
    /// `max(| |d_R|² - |d_I|² |, |d_R·d_I|)` at `point`.
    pub residual: f64,
    /// Winding of the discriminant on a small counter-clockwise circle.
    pub charge: i32,
}

/// The two real EP conditions `(|d_R|² - |d_I|², d_R·d_I)`.
fn conditions(model: &dyn TwoBandModel, p: ParamPoint) -> [f64; 2] {
    let d = model.discriminant(p);
    [d.re, 0.5 * d.im]
}

fn residual(f: [f64; 2]) -> f64 {
    f[0].abs().max(f[1].abs())
}

fn newton(
    model: &dyn TwoBandModel,
    start: ParamPoint,
    h: f64,
    tol: f64,
) -> Result<(ParamPoint, f64), SpectraError> {
    let mut p = start;
    let mut f = conditions(model, p);
    let mut res = residual(f);
    let mut polish = 0;
    for _ in 0..MAX_NEWTON_STEPS + POLISH_STEPS {
        if res <= tol {
            if polish == POLISH_STEPS {
                break;
            }
            polish += 1;
        }
        let fx1 = conditions(model, ParamPoint::new(p.x + h, p.y));
        let fx0 = conditions(model, ParamPoint::new(p.x - h, p.y));
        let fy1 = conditions(model, ParamPoint::new(p.x, p.y + h));
        let fy0 = conditions(model, ParamPoint::new(p.x, p.y - h));
        let j = [
            [(fx1[0] - fx0[0]) / (2.0 * h), (fy1[0] - fy0[0]) / (2.0 * h)],
            [(fx1[1] - fx0[1]) / (2.0 * h), (fy1[1] - fy0[1]) / (2.0 * h)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (j[1][1] * f[0] - j[0][1] * f[1]) / det;
        let dy = (j[0][0] * f[1] - j[1][0] * f[0]) / det;

        // backtracking on the max-norm residual
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let q = ParamPoint::new(p.x - lambda * dx, p.y - lambda * dy);
            let fq = conditions(model, q);
            let rq = residual(fq);
            if rq < res || (rq == 0.0 && res == 0.0) {
                p = q;
                f = fq;
                res = rq;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res <= tol {
        Ok((p, res))
    } else {
        Err(SpectraError::NoConvergence {
            start,
            residual: res,
        })
    }
}

/// Newton-polishes a single EP guess; `scale` sets the finite-difference
/// step. Returns the point and its residual.
pub fn refine_ep(
    model: &dyn TwoBandModel,
    start: ParamPoint,
    scale: f64,
    tol: f64,
) -> Result<(ParamPoint, f64), SpectraError> {
    if !(scale > 0.0 && tol > 0.0) {
        return Err(SpectraError::InvalidArgument(format!(
            "scale {scale} and tolerance {tol} must be positive"
        )));
    }
    newton(model, start, FD_RELATIVE_STEP * scale, tol)
}

/// Winding number of the discriminant on a counter-clockwise circle.
fn discriminant_winding(model: &dyn TwoBandModel, center: ParamPoint, radius: f64) -> i32 {
    let at = |k: usize| {
        let th = 2.0 * PI * k as f64 / CHARGE_SAMPLES as f64;
        model.discriminant(ParamPoint::new(
            center.x + radius * th.cos(),
            center.y + radius * th.sin(),
        ))
    };
    let mut total = 0.0;
    let mut prev = at(0);
    for k in 1..=CHARGE_SAMPLES {
        let cur = at(k);
        total += (cur / prev).arg();
        prev = cur;
    }
    (total / (2.0 * PI)).round() as i32
}

/// Locates EPs inside `region`, sorted by `(y, x)`.
///
/// Candidates that fail to converge within 50 Newton steps are dropped with
/// a warning.
pub fn find_eps(
    model: &dyn TwoBandModel,
    region: &Region,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<EpLocation>, SpectraError> {
    region.validate()?;
    if grid_n < 16 {
        return Err(SpectraError::InvalidArgument(format!(
            "grid_n must be at least 16, got {grid_n}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectraError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let values: Vec<Vec<[f64; 2]>> = (0..=grid_n)
        .into_par_iter()
        .map(|j| {
            (0..=grid_n)
                .map(|i| conditions(model, region.vertex(i, j, grid_n)))
                .collect()
        })
        .collect();

    let straddles = |vals: [f64; 4]| {
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lo <= 0.0 && hi >= 0.0
    };

    let mut candidates = Vec::new();
    for j in 0..grid_n {
        for i in 0..grid_n {
            let corners = [
                values[j][i],
                values[j][i + 1],
                values[j + 1][i],
                values[j + 1][i + 1],
            ];
            if straddles(corners.map(|c| c[0])) && straddles(corners.map(|c| c[1])) {
                let a = region.vertex(i, j, grid_n);
                let b = region.vertex(i + 1, j + 1, grid_n);
                candidates.push(ParamPoint::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y)));
            }
        }
    }

    let h = FD_RELATIVE_STEP * region.scale();
    let converged: Vec<Result<(ParamPoint, f64), SpectraError>> = candidates
        .par_iter()
        .map(|&c| newton(model, c, h, tol))
        .collect();

    let merge_radius = 10.0 * tol;
    let mut found: Vec<(ParamPoint, f64)> = Vec::new();
    for r in converged {
        match r {
            Ok((p, res)) => {
                if !region.contains(p, merge_radius) {
                    continue;
                }
                match found.iter_mut().find(|(q, _)| q.dist(p) <= merge_radius) {
                    Some(existing) => {
                        if res < existing.1 {
                            *existing = (p, res);
                        }
                    }
                    None => found.push((p, res)),
                }
            }
            Err(e) => warn!("dropping EP candidate: {e}"),
        }
    }
    found.sort_by(|a, b| a.0.y.total_cmp(&b.0.y).then(a.0.x.total_cmp(&b.0.x)));

    let eps = found
        .iter()
        .enumerate()
        .map(|(k, &(p, res))| {
            let nearest = found
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != k)
                .map(|(_, (q, _))| q.dist(p))
                .fold(f64::INFINITY, f64::min);
            let radius = (1e-3 * region.scale()).min(0.25 * nearest);
            EpLocation {
                point: p,
                residual: res,
                charge: discriminant_winding(model, p, radius),
            }
        })
        .collect();
    Ok(eps)
}
