//! Closed loops in the parameter plane, built from line segments and
//! circular arcs and parametrized by arc length on `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ParamPoint, SpectraError};
use crate::words::Word;

const JOIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line {
        from: ParamPoint,
        to: ParamPoint,
    },
    /// Counter-clockwise for positive `sweep` (radians).
    Arc {
        center: ParamPoint,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => from.dist(to),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point at fraction `s ∈ [0, 1]` of the segment.
    pub fn point(&self, s: f64) -> ParamPoint {
        match *self {
            Segment::Line { from, to } => {
                ParamPoint::new(from.x + s * (to.x - from.x), from.y + s * (to.y - from.y))
            }
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let th = start + s * sweep;
                ParamPoint::new(center.x + radius * th.cos(), center.y + radius * th.sin())
            }
        }
    }

    pub fn start_point(&self) -> ParamPoint {
        self.point(0.0)
    }

    pub fn end_point(&self) -> ParamPoint {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => Segment::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Euclidean distance from `p` to the segment.
    pub fn distance_to(&self, p: ParamPoint) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let (dx, dy) = (to.x - from.x, to.y - from.y);
                let len2 = dx * dx + dy * dy;
                if len2 == 0.0 {
                    return from.dist(p);
                }
                let s = (((p.x - from.x) * dx + (p.y - from.y) * dy) / len2).clamp(0.0, 1.0);
                self.point(s).dist(p)
            }
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let rho = center.dist(p);
                let ends = self.start_point().dist(p).min(self.end_point().dist(p));
                if sweep.abs() >= 2.0 * PI || rho == 0.0 {
                    return (rho - radius).abs().min(ends);
                }
                let phi = (p.y - center.y).atan2(p.x - center.x);
                // angular offset along the sweep direction
                let rel = if sweep >= 0.0 {
                    (phi - start).rem_euclid(2.0 * PI)
                } else {
                    (start - phi).rem_euclid(2.0 * PI)
                };
                if rel <= sweep.abs() {
                    (rho - radius).abs()
                } else {
                    ends
                }
            }
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            Segment::Line { from, to } => from.is_finite() && to.is_finite(),
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => center.is_finite() && radius.is_finite() && start.is_finite() && sweep.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cw,
    #[default]
    Ccw,
}

/// A closed piecewise loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    segments: Vec<Segment>,
    /// Cumulative arc length at the end of each segment.
    cumulative: Vec<f64>,
}

impl Loop {
    pub fn new(segments: Vec<Segment>) -> Result<Self, SpectraError> {
        if segments.is_empty() {
            return Err(SpectraError::InvalidLoop("no segments".into()));
        }
        if segments.iter().any(|s| !s.is_finite()) {
            return Err(SpectraError::InvalidLoop("non-finite segment".into()));
        }
        if segments.iter().any(|s| matches!(s, Segment::Arc { radius, .. } if *radius <= 0.0)) {
            return Err(SpectraError::InvalidLoop("arc radius must be positive".into()));
        }
        let scale = segments
            .iter()
            .flat_map(|s| [s.start_point(), s.end_point()])
            .map(|p| p.x.abs().max(p.y.abs()))
            .fold(1.0, f64::max);
        let tol = JOIN_TOL * scale;
        for (k, pair) in segments.windows(2).enumerate() {
            if pair[0].end_point().dist(pair[1].start_point()) > tol {
                return Err(SpectraError::InvalidLoop(format!(
                    "segment {} does not start where segment {k} ends",
                    k + 1
                )));
            }
        }
        let first = segments[0].start_point();
        let last = segments[segments.len() - 1].end_point();
        if first.dist(last) > tol {
            return Err(SpectraError::InvalidLoop("loop is not closed".into()));
        }
        let mut acc = 0.0;
        let cumulative: Vec<f64> = segments
            .iter()
            .map(|s| {
                acc += s.length();
                acc
            })
            .collect();
        if acc <= 0.0 {
            return Err(SpectraError::InvalidLoop("loop has zero length".into()));
        }
        Ok(Loop {
            segments,
            cumulative,
        })
    }

    pub fn circle(
        center: ParamPoint,
        radius: f64,
        orientation: Orientation,
        start_angle: f64,
    ) -> Result<Self, SpectraError> {
        let sweep = match orientation {
            Orientation::Cw => -2.0 * PI,
            Orientation::Ccw => 2.0 * PI,
        };
        Loop::new(vec![Segment::Arc {
            center,
            radius,
            start: start_angle,
            sweep,
        }])
    }

    /// Closed polyline through `points`; the closing edge is added when the
    /// last point differs from the first.
    pub fn polyline(points: &[ParamPoint]) -> Result<Self, SpectraError> {
        if points.len() < 3 {
            return Err(SpectraError::InvalidLoop("polyline needs 3 or more points".into()));
        }
        let mut segs: Vec<Segment> = points
            .windows(2)
            .filter(|w| w[0] != w[1])
            .map(|w| Segment::Line {
                from: w[0],
                to: w[1],
            })
            .collect();
        let (first, last) = (points[0], points[points.len() - 1]);
        if first != last {
            segs.push(Segment::Line {
                from: last,
                to: first,
            });
        }
        Loop::new(segs)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("nonempty")
    }

    pub fn basepoint(&self) -> ParamPoint {
        self.segments[0].start_point()
    }

    /// Point at arc-length fraction `t ∈ [0, 1]`.
    pub fn point(&self, t: f64) -> ParamPoint {
        let target = t.clamp(0.0, 1.0) * self.length();
        let k = self
            .cumulative
            .partition_point(|&c| c < target)
            .min(self.segments.len() - 1);
        let begin = if k == 0 { 0.0 } else { self.cumulative[k - 1] };
        let len = self.segments[k].length();
        let s = if len > 0.0 { (target - begin) / len } else { 0.0 };
        self.segments[k].point(s.clamp(0.0, 1.0))
    }

    /// `n + 1` samples at `t = j / n`; the last sample repeats the first.
    pub fn sample(&self, n: usize) -> Vec<ParamPoint> {
        let mut pts: Vec<ParamPoint> = (0..n).map(|j| self.point(j as f64 / n as f64)).collect();
        pts.push(pts[0]);
        pts
    }

    pub fn reversed(&self) -> Loop {
        let segs = self.segments.iter().rev().map(Segment::reversed).collect();
        Loop::new(segs).expect("reversal of a valid loop")
    }

    /// Distance from `p` to the loop.
    pub fn clearance(&self, p: ParamPoint) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Diameter estimated from 256 arc-length samples.
    pub fn diameter(&self) -> f64 {
        let pts = self.sample(256);
        let mut d: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                d = d.max(p.dist(*q));
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentSpec {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl From<SegmentSpec> for Segment {
    fn from(s: SegmentSpec) -> Self {
        let p = |a: [f64; 2]| ParamPoint::new(a[0], a[1]);
        match s {
            SegmentSpec::Line { from, to } => Segment::Line {
                from: p(from),
                to: p(to),
            },
            SegmentSpec::Arc {
                center,
                radius,
                start,
                sweep,
            } => Segment::Arc {
                center: p(center),
                radius,
                start,
                sweep,
            },
        }
    }
}

/// Loop file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoopSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default)]
        orientation: Orientation,
        #[serde(default)]
        start_angle: f64,
        #[serde(default)]
        samples: Option<usize>,
    },
    Polyline {
        points: Vec<[f64; 2]>,
        #[serde(default)]
        samples: Option<usize>,
    },
    Arcs {
        segments: Vec<SegmentSpec>,
        #[serde(default)]
        samples: Option<usize>,
    },
}

impl LoopSpec {
    pub fn build(&self) -> Result<Loop, SpectraError> {
        match self {
            LoopSpec::Circle {
                center,
                radius,
                orientation,
                start_angle,
                ..
            } => Loop::circle(
                ParamPoint::new(center[0], center[1]),
                *radius,
                *orientation,
                *start_angle,
            ),
            LoopSpec::Polyline { points, .. } => Loop::polyline(
                &points
                    .iter()
                    .map(|p| ParamPoint::new(p[0], p[1]))
                    .collect::<Vec<_>>(),
            ),
            LoopSpec::Arcs { segments, .. } => {
                Loop::new(segments.iter().map(|&s| s.into()).collect())
            }
        }
    }

    pub fn samples(&self) -> Option<usize> {
        match self {
            LoopSpec::Circle { samples, .. }
            | LoopSpec::Polyline { samples, .. }
            | LoopSpec::Arcs { samples, .. } => *samples,
        }
    }
}

/// Piecewise-arc loop realizing `word` as a product of lollipops based at
/// `basepoint`: for each letter, a line to the circle of radius `radii[i]`
/// around the letter's EP, one full turn (clockwise for a positive
/// exponent), and the line back.
///
/// The caller picks `basepoint` and radii so that the lines avoid every cut
/// and each circle crosses only its own EP's cut.
pub fn word_loop(
    word: &Word,
    eps: &[ParamPoint],
    basepoint: ParamPoint,
    radii: &[f64],
) -> Result<Loop, SpectraError> {
    if word.is_empty() {
        return Err(SpectraError::InvalidLoop("identity word has no lollipop loop".into()));
    }
    if radii.len() != word.len() {
        return Err(SpectraError::InvalidArgument(format!(
            "{} radii for a word of length {}",
            radii.len(),
            word.len()
        )));
    }
    let mut segs = Vec::with_capacity(3 * word.len());
    for (l, &rho) in word.letters().iter().zip(radii) {
        let ep = *eps.get(l.generator()).ok_or_else(|| {
            SpectraError::InvalidArgument(format!("no EP for generator {}", l.generator()))
        })?;
        let d = ep.dist(basepoint);
        if !(rho > 0.0 && rho < d) {
            return Err(SpectraError::InvalidArgument(format!(
                "radius {rho} must lie in (0, {d})"
            )));
        }
        let angle = (basepoint.y - ep.y).atan2(basepoint.x - ep.x);
        let touch = ParamPoint::new(ep.x + rho * angle.cos(), ep.y + rho * angle.sin());
        segs.push(Segment::Line {
            from: basepoint,
            to: touch,
        });
        segs.push(Segment::Arc {
            center: ep,
            radius: rho,
            start: angle,
            sweep: -2.0 * PI * l.exponent() as f64,
        });
        segs.push(Segment::Line {
            from: touch,
            to: basepoint,
        });
    }
    Loop::new(segs)
}
