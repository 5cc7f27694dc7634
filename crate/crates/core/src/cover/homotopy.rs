//! The explicit homotopy between the composite loop `[a][b]` and the single
//! circuit `[c]` in the plane punctured at `±1`, with a grid certificate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::CoverError;

pub const MIN_GRID: usize = 128;
pub const ENDPOINT_TOL: f64 = 1e-12;
pub const CONTINUITY_TOL: f64 = 1e-9;

/// Bound on `|∂H/∂t|` over the unit square.
const LIP_T: f64 = 8.0 * PI;
/// Bound on `|∂H/∂s| = |β − α|`.
const LIP_S: f64 = 6.0;

const BREAKS: [f64; 3] = [0.25, 0.5, 0.75];

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

fn check_domain(t: f64) -> Result<(), CoverError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(CoverError::Domain(t))
    }
}

fn alpha_piece(first: bool, t: f64) -> Complex64 {
    if first {
        -1.0 + cis(-4.0 * PI * t)
    } else {
        1.0 - cis(-4.0 * PI * (t - 0.5))
    }
}

fn beta_piece(idx: usize, t: f64) -> Complex64 {
    match idx {
        0 => -2.0 + 2.0 * cis(-4.0 * PI * t),
        1 => -4.0 * cis(-2.0 * PI * (t - 0.25)),
        _ => 2.0 + 2.0 * cis(-4.0 * PI * (t - 0.75)),
    }
}

/// Clockwise around `-1`, then clockwise around `+1`, based at `0`.
pub fn supplement_alpha(t: f64) -> Result<Complex64, CoverError> {
    check_domain(t)?;
    Ok(alpha_piece(t <= 0.5, t))
}

/// One clockwise circuit around both punctures, based at `0`.
pub fn supplement_beta(t: f64) -> Result<Complex64, CoverError> {
    check_domain(t)?;
    Ok(beta_piece(beta_index(t), t))
}

fn beta_index(t: f64) -> usize {
    if t <= 0.25 {
        0
    } else if t <= 0.75 {
        1
    } else {
        2
    }
}

/// Piece `k` (0..4) of the homotopy, evaluated without domain selection.
fn piece(k: usize, t: f64, s: f64) -> Complex64 {
    let (a, b) = match k {
        0 => (alpha_piece(true, t), beta_piece(0, t)),
        1 => (alpha_piece(true, t), beta_piece(1, t)),
        2 => (alpha_piece(false, t), beta_piece(1, t)),
        _ => (alpha_piece(false, t), beta_piece(2, t)),
    };
    (1.0 - s) * a + s * b
}

fn piece_index(t: f64) -> usize {
    BREAKS.iter().take_while(|&&b| t > b).count()
}

/// The four-piece straight-line homotopy `H(t, s)` with `H(·,0) = α` and
/// `H(·,1) = β`.
pub fn homotopy(t: f64, s: f64) -> Result<Complex64, CoverError> {
    check_domain(t)?;
    check_domain(s)?;
    Ok(piece(piece_index(t), t, s))
}

fn puncture_distance(z: Complex64) -> f64 {
    (z - 1.0).norm().min((z + 1.0).norm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomotopyGrid {
    pub nt: usize,
    pub ns: usize,
    pub min_puncture_distance: f64,
    /// `(t, s)` where the minimum is attained.
    pub argmin: [f64; 2],
    /// Max deviation from `α` along `s = 0` and from `β` along `s = 1`.
    pub endpoint_residuals: [f64; 2],
    /// Max jump between adjacent pieces at `t = 1/4, 1/2, 3/4`.
    pub continuity_jumps: [f64; 3],
    /// Grid minimum minus the Lipschitz slack of the grid spacing; positive
    /// means no point of the continuous square reaches a puncture.
    pub certified_lower_bound: f64,
}

impl HomotopyGrid {
    pub fn max_endpoint_residual(&self) -> f64 {
        self.endpoint_residuals[0].max(self.endpoint_residuals[1])
    }

    pub fn max_continuity_jump(&self) -> f64 {
        self.continuity_jumps.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_valid(&self) -> bool {
        self.max_endpoint_residual() < ENDPOINT_TOL
            && self.max_continuity_jump() < CONTINUITY_TOL
            && self.min_puncture_distance > 0.0
    }
}

/// Samples `H` on the `(nt + 1) × (ns + 1)` grid of the unit square.
pub fn verify_homotopy(nt: usize, ns: usize) -> Result<HomotopyGrid, CoverError> {
    if nt < MIN_GRID || ns < MIN_GRID {
        return Err(CoverError::InvalidArgument(format!(
            "grid {nt}×{ns} below the minimum {MIN_GRID}"
        )));
    }
    let t_at = |i: usize| i as f64 / nt as f64;
    let s_at = |j: usize| j as f64 / ns as f64;

    // (distance, i, j) per row, reduced deterministically
    let (min_d, mi, mj) = (0..=nt)
        .into_par_iter()
        .map(|i| {
            let t = t_at(i);
            let k = piece_index(t);
            (0..=ns)
                .map(|j| (puncture_distance(piece(k, t, s_at(j))), i, j))
                .fold((f64::INFINITY, i, 0), |best, c| if c.0 < best.0 { c } else { best })
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |x, y| {
                if y.0 < x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    y
                } else {
                    x
                }
            },
        );

    let mut endpoint_residuals = [0.0f64; 2];
    for i in 0..=nt {
        let t = t_at(i);
        let h0 = homotopy(t, 0.0)?;
        let h1 = homotopy(t, 1.0)?;
        endpoint_residuals[0] = endpoint_residuals[0].max((h0 - supplement_alpha(t)?).norm());
        endpoint_residuals[1] = endpoint_residuals[1].max((h1 - supplement_beta(t)?).norm());
    }

    let mut continuity_jumps = [0.0f64; 3];
    for (b, &tb) in BREAKS.iter().enumerate() {
        for j in 0..=ns {
            let s = s_at(j);
            let jump = (piece(b, tb, s) - piece(b + 1, tb, s)).norm();
            continuity_jumps[b] = continuity_jumps[b].max(jump);
        }
    }

    let argmin = [t_at(mi), s_at(mj)];
    if min_d <= 0.0 {
        return Err(CoverError::PunctureHit {
            t: argmin[0],
            s: argmin[1],
        });
    }
    let slack = LIP_T / (2.0 * nt as f64) + LIP_S / (2.0 * ns as f64);
    Ok(HomotopyGrid {
        nt,
        ns,
        min_puncture_distance: min_d,
        argmin,
        endpoint_residuals,
        continuity_jumps,
        certified_lower_bound: min_d - slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn loop_values() {
        assert!(close(supplement_alpha(0.0).unwrap(), Complex64::new(0.0, 0.0)));
        assert!(close(supplement_alpha(1.0).unwrap(), Complex64::new(0.0, 0.0)));
        assert!(close(supplement_beta(0.5).unwrap(), Complex64::new(0.0, 4.0)));
        assert!(close(supplement_beta(0.25).unwrap(), Complex64::new(-4.0, 0.0)));
        assert!(close(supplement_beta(1.0).unwrap(), Complex64::new(0.0, 0.0)));
        // α first circles -1 clockwise: a quarter in it sits below the axis
        assert!(close(supplement_alpha(0.125).unwrap(), Complex64::new(-1.0, -1.0)));
        assert_eq!(supplement_alpha(1.5), Err(CoverError::Domain(1.5)));
        assert!(supplement_beta(f64::NAN).is_err());
        assert!(homotopy(0.5, -0.1).is_err());
    }

    #[test]
    fn pieces_agree_at_breaks() {
        for &tb in &BREAKS {
            let k = piece_index(tb);
            for s in [0.0, 0.3, 1.0] {
                assert!(close(piece(k, tb, s), piece(k + 1, tb, s)));
            }
        }
    }

    #[test]
    fn certificate_256() {
        let g = verify_homotopy(256, 256).unwrap();
        assert!(g.is_valid());
        assert!(g.max_endpoint_residual() < ENDPOINT_TOL);
        assert!(g.max_continuity_jump() < CONTINUITY_TOL);
        assert!(g.min_puncture_distance > 0.0);
        assert!(g.certified_lower_bound > 0.0);
    }

    #[test]
    fn refinement_monotone() {
        let coarse = verify_homotopy(128, 128).unwrap();
        let fine = verify_homotopy(256, 256).unwrap();
        let finest = verify_homotopy(1024, 1024).unwrap();
        for g in [&coarse, &fine, &finest] {
            assert!(g.is_valid());
        }
        // nested grids: the minimum can only drop, and only by the slack
        assert!(fine.min_puncture_distance <= coarse.min_puncture_distance);
        assert!(finest.min_puncture_distance <= fine.min_puncture_distance);
        assert!(finest.min_puncture_distance >= coarse.certified_lower_bound);
        assert!(finest.min_puncture_distance >= fine.certified_lower_bound);
    }

    #[test]
    fn grid_deterministic() {
        assert_eq!(verify_homotopy(200, 150).unwrap(), verify_homotopy(200, 150).unwrap());
    }

    #[test]
    fn small_grid_rejected() {
        assert!(matches!(verify_homotopy(64, 256), Err(CoverError::InvalidArgument(_))));
    }
}
