//! Loop words from signed crossings of branch-cut rays.

use super::{ParamPoint, SpectraError};
use crate::words::{reduce_free, HalfInteger, Letter, Word};

/// Relative tolerance for "on the ray" decisions.
const ON_CUT_TOL: f64 = 1e-12;

/// A cut ray `origin + s·direction`, `s ≥ 0`, attached to one EP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutRay {
    pub origin: ParamPoint,
    pub direction: [f64; 2],
}

impl CutRay {
    /// Normalizes `direction`; returns `None` for a zero or non-finite one.
    pub fn new(origin: ParamPoint, direction: [f64; 2]) -> Option<Self> {
        let norm = direction[0].hypot(direction[1]);
        (norm > 0.0 && norm.is_finite()).then(|| CutRay {
            origin,
            direction: [direction[0] / norm, direction[1] / norm],
        })
    }

    /// Signed distance of `p` from the ray's line, positive on the
    /// counter-clockwise side.
    fn side(&self, p: ParamPoint) -> f64 {
        let (dx, dy) = (p.x - self.origin.x, p.y - self.origin.y);
        self.direction[0] * dy - self.direction[1] * dx
    }

    fn along(&self, p: ParamPoint) -> f64 {
        self.direction[0] * (p.x - self.origin.x) + self.direction[1] * (p.y - self.origin.y)
    }

    /// Whether two rays meet.
    pub fn intersects(&self, other: &CutRay) -> bool {
        let (u, v) = (self.direction, other.direction);
        let w = [other.origin.x - self.origin.x, other.origin.y - self.origin.y];
        let denom = u[0] * v[1] - u[1] * v[0];
        if denom.abs() < 1e-15 {
            // parallel: only collinear overlapping rays meet
            let off = u[0] * w[1] - u[1] * w[0];
            if off.abs() > 1e-12 {
                return false;
            }
            let s = u[0] * w[0] + u[1] * w[1];
            let same_dir = u[0] * v[0] + u[1] * v[1] > 0.0;
            return same_dir || s >= 0.0;
        }
        let s = (w[0] * v[1] - w[1] * v[0]) / denom;
        let r = (w[0] * u[1] - w[1] * u[0]) / denom;
        s >= 0.0 && r >= 0.0
    }
}

/// Cuts pointing radially away from the centroid of the EP set. An EP at
/// the centroid gets the direction `+y`.
pub fn default_cuts(eps: &[ParamPoint]) -> Vec<CutRay> {
    if eps.is_empty() {
        return Vec::new();
    }
    let n = eps.len() as f64;
    let cx = eps.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = eps.iter().map(|p| p.y).sum::<f64>() / n;
    eps.iter()
        .map(|&p| {
            CutRay::new(p, [p.x - cx, p.y - cy])
                .unwrap_or(CutRay {
                    origin: p,
                    direction: [0.0, 1.0],
                })
        })
        .collect()
}

/// Word of a closed sampled path relative to `cuts`; generator `i` is the
/// clockwise loop around the origin of `cuts[i]`.
///
/// Each transversal crossing of cut `i` appends `g_i` when the path crosses
/// clockwise about the cut's EP and `g_i⁻¹` otherwise. A sample lying on a
/// cut counts as a crossing when its neighbours are on opposite sides; a
/// path that touches or runs along a cut is rejected. The result is freely
/// reduced.
pub fn loop_word(path: &[ParamPoint], cuts: &[CutRay]) -> Result<Word, SpectraError> {
    if path.len() < 2 {
        return Err(SpectraError::InvalidLoop("path needs two or more samples".into()));
    }
    let scale = path
        .iter()
        .chain(cuts.iter().map(|c| &c.origin))
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1.0, f64::max);
    let tol = ON_CUT_TOL * scale;

    // per cut and sample: +1 / -1 for the side, 0 when the sample lies on the ray
    let mut sides = vec![vec![0i8; path.len()]; cuts.len()];
    for (ci, cut) in cuts.iter().enumerate() {
        for (k, &p) in path.iter().enumerate() {
            let sd = cut.side(p);
            if sd.abs() <= tol && cut.along(p) >= -tol {
                if k == 0 || k == path.len() - 1 {
                    return Err(SpectraError::AmbiguousBasepoint { cut: ci });
                }
                if cut.along(p) <= tol {
                    return Err(SpectraError::ThroughBranchPoint { sample: k, cut: ci });
                }
            } else {
                sides[ci][k] = if sd >= 0.0 { 1 } else { -1 };
            }
        }
    }

    let letter = |ci: usize, from_positive: bool| {
        if from_positive {
            Letter::pos(ci)
        } else {
            Letter::neg(ci)
        }
    };
    let mut word = Word::identity();
    for k in 0..path.len() - 1 {
        let mut hits: Vec<(f64, Letter)> = Vec::new();
        for (ci, cut) in cuts.iter().enumerate() {
            let side = &sides[ci];
            // a sample sitting on the ray counts only if the path goes through
            if k > 0 && side[k] == 0 {
                if side[k - 1] == 0 || side[k + 1] == 0 || side[k - 1] == side[k + 1] {
                    return Err(SpectraError::TangentCrossing { sample: k, cut: ci });
                }
                hits.push((-1.0, letter(ci, side[k - 1] > 0)));
            }
            let (p, q) = (path[k], path[k + 1]);
            if side[k] == 0 || side[k + 1] == 0 || side[k] == side[k + 1] {
                continue;
            }
            let (sp, sq) = (cut.side(p), cut.side(q));
            let lambda = sp / (sp - sq);
            let x = ParamPoint::new(p.x + lambda * (q.x - p.x), p.y + lambda * (q.y - p.y));
            let a = cut.along(x);
            if a.abs() <= tol {
                return Err(SpectraError::ThroughBranchPoint { sample: k, cut: ci });
            }
            if a > 0.0 {
                hits.push((lambda, letter(ci, side[k] > 0)));
            }
        }
        // crossings ordered along the segment, vertex hits first
        hits.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, l) in hits {
            word.push(l);
        }
    }
    Ok(reduce_free(&word))
}

/// Vorticity predicted for a word when EP `i` has discriminant charge
/// `charges[i]`: `Σ charge_i · (exponent sum of g_i) / 2`. Equals the table
/// vorticity when every charge is `+1`.
pub fn charged_vorticity(word: &Word, charges: &[i32]) -> Option<HalfInteger> {
    let mut twice = 0i64;
    for l in word.letters() {
        twice += *charges.get(l.generator())? as i64 * l.exponent() as i64;
    }
    Some(HalfInteger::from_twice(twice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{Loop, Orientation};

    fn eps() -> Vec<ParamPoint> {
        vec![ParamPoint::new(0.0, -1.0), ParamPoint::new(0.0, 1.0)]
    }

    fn circle_word(cx: f64, cy: f64, r: f64, o: Orientation, start: f64) -> Word {
        let l = Loop::circle(ParamPoint::new(cx, cy), r, o, start).unwrap();
        loop_word(&l.sample(4096), &default_cuts(&eps())).unwrap()
    }

    #[test]
    fn default_cut_directions() {
        let cuts = default_cuts(&eps());
        assert_eq!(cuts[0].direction, [0.0, -1.0]);
        assert_eq!(cuts[1].direction, [0.0, 1.0]);
        assert!(!cuts[0].intersects(&cuts[1]));
        let single = default_cuts(&[ParamPoint::new(2.0, 3.0)]);
        assert_eq!(single[0].direction, [0.0, 1.0]);
    }

    #[test]
    fn ray_intersections() {
        let a = CutRay::new(ParamPoint::new(0.0, 0.0), [1.0, 0.0]).unwrap();
        let b = CutRay::new(ParamPoint::new(1.0, -1.0), [0.0, 1.0]).unwrap();
        let c = CutRay::new(ParamPoint::new(1.0, -1.0), [0.0, -1.0]).unwrap();
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
        let d = CutRay::new(ParamPoint::new(2.0, 0.0), [-1.0, 0.0]).unwrap();
        assert!(a.intersects(&d));
        let e = CutRay::new(ParamPoint::new(-2.0, 0.0), [-1.0, 0.0]).unwrap();
        assert!(!a.intersects(&e));
        assert!(CutRay::new(ParamPoint::new(0.0, 0.0), [0.0, 0.0]).is_none());
    }

    #[test]
    fn single_ep_words() {
        let a = circle_word(0.0, -1.0, 0.5, Orientation::Cw, 0.3);
        assert!(a.same_letters(&"a".parse().unwrap()));
        let ainv = circle_word(0.0, -1.0, 0.5, Orientation::Ccw, 0.3);
        assert!(ainv.same_letters(&"A".parse().unwrap()));
        let b = circle_word(0.0, 1.0, 0.5, Orientation::Cw, 0.3);
        assert!(b.same_letters(&"b".parse().unwrap()));
    }

    #[test]
    fn both_eps_basepoint_dependence() {
        let right = circle_word(0.0, 0.0, 3.0, Orientation::Cw, 0.0);
        assert_eq!(right.to_string(), "ab");
        let left = circle_word(0.0, 0.0, 3.0, Orientation::Cw, std::f64::consts::PI);
        assert_eq!(left.to_string(), "ba");
        let ccw = circle_word(0.0, 0.0, 3.0, Orientation::Ccw, 0.0);
        assert_eq!(ccw.to_string(), "BA");
    }

    #[test]
    fn contractible_is_identity() {
        assert!(circle_word(2.0, 2.0, 0.5, Orientation::Cw, 0.0).is_empty());
        // encloses the cut segment near EP 2 but not the EP itself
        assert!(circle_word(0.0, 2.0, 0.5, Orientation::Cw, 0.0).is_empty());
    }

    #[test]
    fn degenerate_paths() {
        let cuts = default_cuts(&eps());
        // basepoint on the lower cut
        let l = Loop::circle(ParamPoint::new(0.0, -1.5), 0.5, Orientation::Cw, -std::f64::consts::FRAC_PI_2)
            .unwrap();
        assert_eq!(
            loop_word(&l.sample(64), &cuts),
            Err(SpectraError::AmbiguousBasepoint { cut: 0 })
        );
        let tangent = [
            ParamPoint::new(1.0, -3.0),
            ParamPoint::new(0.0, -3.0),
            ParamPoint::new(1.0, -4.0),
            ParamPoint::new(1.0, -3.0),
        ];
        assert_eq!(
            loop_word(&tangent, &cuts),
            Err(SpectraError::TangentCrossing { sample: 1, cut: 0 })
        );
        let through = [
            ParamPoint::new(1.0, -1.0),
            ParamPoint::new(-1.0, -1.0),
            ParamPoint::new(-1.0, 0.5),
            ParamPoint::new(1.0, -1.0),
        ];
        assert!(matches!(
            loop_word(&through, &cuts),
            Err(SpectraError::ThroughBranchPoint { .. })
        ));
    }

    #[test]
    fn charged_vorticity_values() {
        let w: Word = "aB".parse().unwrap();
        assert_eq!(charged_vorticity(&w, &[1, 1]), Some(HalfInteger::from_integer(0)));
        assert_eq!(charged_vorticity(&w, &[1, -1]), Some(HalfInteger::from_integer(1)));
        assert_eq!(charged_vorticity(&w, &[1]), None);
    }
}
