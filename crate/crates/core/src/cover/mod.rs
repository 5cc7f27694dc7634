//! Covering spaces over the EP-punctured plane.
//!
//! A cover is described operationally: `n` sheets, and for every branch
//! point a cut ray together with the sheet permutation applied when a loop
//! crosses that cut in the positive (clockwise) sense. This cut-crossing
//! automaton is the hopping picture of gluing `n` copies of the plane along
//! the cuts.
//!
//! Permutations compose left to right along a word: the first letter acts
//! first.

mod homotopy;
mod rewrite;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::{default_cuts, CutRay, ParamPoint};
use crate::words::{reduce_free, Word};

pub use homotopy::{
    homotopy, supplement_alpha, supplement_beta, verify_homotopy, HomotopyGrid,
    CONTINUITY_TOL, ENDPOINT_TOL, MIN_GRID,
};
pub use rewrite::{rewrite_over_cover_generators, CoverWord, GEN_A2, GEN_AB, GEN_B2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("a cover needs at least 2 sheets, got {0}")]
    TooFewSheets(usize),
    #[error("branch point {index}: {reason}")]
    BadBranchPoint { index: usize, reason: String },
    #[error("cuts {0} and {1} intersect")]
    CutsIntersect(usize, usize),
    #[error("branch points coincide")]
    CoincidentBranchPoints,
    #[error("generator {generator} has no branch point (cover has {available})")]
    IndexOutOfRange { generator: usize, available: usize },
    #[error("start sheet {sheet} outside 0..{sheets}")]
    SheetOutOfRange { sheet: usize, sheets: usize },
    #[error("word `{0}` does not lift to a closed loop on the two-sheet cover")]
    NotInSubgroup(String),
    #[error("word uses generator {0}; only a and b are supported")]
    UnsupportedGenerator(usize),
    #[error("parameter {0} outside [0, 1]")]
    Domain(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("homotopy meets a puncture at t = {t}, s = {s}")]
    PunctureHit { t: f64, s: f64 },
}

/// A permutation of `{0, …, n-1}` in one-line (image) notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, CoverError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(CoverError::InvalidArgument(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The transposition of sheets 0 and 1 on two sheets.
    pub fn swap2() -> Self {
        Permutation(vec![1, 0])
    }

    /// The cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        Permutation((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| next.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// Length of the cycle through `start`.
    pub fn cycle_length(&self, start: usize) -> usize {
        let mut k = 1;
        let mut cur = self.0[start];
        while cur != start {
            cur = self.0[cur];
            k += 1;
        }
        k
    }

    /// Order in the symmetric group.
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        (0..self.0.len()).fold(1, |acc, i| {
            let c = self.cycle_length(i);
            acc / gcd(acc, c) * c
        })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = CoverError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub position: Complex64,
    pub cut: CutRay,
    pub deck_perm: Permutation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringSpec {
    n_sheets: usize,
    branch_points: Vec<BranchPoint>,
}

impl CoveringSpec {
    pub fn new(n_sheets: usize, branch_points: Vec<BranchPoint>) -> Result<Self, CoverError> {
        if n_sheets < 2 {
            return Err(CoverError::TooFewSheets(n_sheets));
        }
        for (index, bp) in branch_points.iter().enumerate() {
            if bp.deck_perm.len() != n_sheets {
                return Err(CoverError::BadBranchPoint {
                    index,
                    reason: format!(
                        "permutation acts on {} sheets, cover has {n_sheets}",
                        bp.deck_perm.len()
                    ),
                });
            }
            if !(bp.position.re.is_finite() && bp.position.im.is_finite()) {
                return Err(CoverError::BadBranchPoint {
                    index,
                    reason: "position is not finite".into(),
                });
            }
        }
        for i in 0..branch_points.len() {
            for j in i + 1..branch_points.len() {
                if branch_points[i].position == branch_points[j].position {
                    return Err(CoverError::CoincidentBranchPoints);
                }
                if branch_points[i].cut.intersects(&branch_points[j].cut) {
                    return Err(CoverError::CutsIntersect(i, j));
                }
            }
        }
        Ok(CoveringSpec {
            n_sheets,
            branch_points,
        })
    }

    pub fn n_sheets(&self) -> usize {
        self.n_sheets
    }

    pub fn branch_points(&self) -> &[BranchPoint] {
        &self.branch_points
    }

    pub fn to_file(&self) -> CoveringFile {
        CoveringFile {
            sheets: self.n_sheets,
            branch_points: self
                .branch_points
                .iter()
                .map(|bp| BranchPointFile {
                    pos: [bp.position.re, bp.position.im],
                    cut_dir: bp.cut.direction,
                    perm: bp.deck_perm.clone(),
                })
                .collect(),
        }
    }
}

/// JSON form: `{"sheets": n, "branch_points": [{"pos": [re, im],
/// "cut_dir": [ux, uy], "perm": [...]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringFile {
    pub sheets: usize,
    pub branch_points: Vec<BranchPointFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPointFile {
    pub pos: [f64; 2],
    pub cut_dir: [f64; 2],
    pub perm: Permutation,
}

impl TryFrom<CoveringFile> for CoveringSpec {
    type Error = CoverError;

    fn try_from(f: CoveringFile) -> Result<Self, Self::Error> {
        let bps = f
            .branch_points
            .into_iter()
            .enumerate()
            .map(|(index, b)| {
                let origin = ParamPoint::new(b.pos[0], b.pos[1]);
                let cut = CutRay::new(origin, b.cut_dir).ok_or(CoverError::BadBranchPoint {
                    index,
                    reason: "cut direction must be nonzero".into(),
                })?;
                Ok(BranchPoint {
                    position: Complex64::new(b.pos[0], b.pos[1]),
                    cut,
                    deck_perm: b.perm,
                })
            })
            .collect::<Result<Vec<_>, CoverError>>()?;
        CoveringSpec::new(f.sheets, bps)
    }
}

/// Two sheets, both deck transformations the transposition, cuts pointing
/// away from the midpoint.
pub fn standard_two_sheet(ep1: Complex64, ep2: Complex64) -> Result<CoveringSpec, CoverError> {
    if ep1 == ep2 {
        return Err(CoverError::CoincidentBranchPoints);
    }
    let pts = [ParamPoint::from_complex(ep1), ParamPoint::from_complex(ep2)];
    let cuts = default_cuts(&pts);
    let bps = [ep1, ep2]
        .into_iter()
        .zip(cuts)
        .map(|(position, cut)| BranchPoint {
            position,
            cut,
            deck_perm: Permutation::swap2(),
        })
        .collect();
    CoveringSpec::new(2, bps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub total_perm: Permutation,
    pub closes: bool,
    /// Smallest power of the loop whose lift from the start sheet closes.
    pub order_to_close: usize,
}

/// Lifts `w` starting on `start_sheet`.
pub fn lift_word(cover: &CoveringSpec, w: &Word, start_sheet: usize) -> Result<LiftResult, CoverError> {
    if start_sheet >= cover.n_sheets {
        return Err(CoverError::SheetOutOfRange {
            sheet: start_sheet,
            sheets: cover.n_sheets,
        });
    }
    let mut total = Permutation::identity(cover.n_sheets);
    for l in w.letters() {
        let bp = cover
            .branch_points
            .get(l.generator())
            .ok_or(CoverError::IndexOutOfRange {
                generator: l.generator(),
                available: cover.branch_points.len(),
            })?;
        total = if l.is_inverted() {
            total.then(&bp.deck_perm.inverse())
        } else {
            total.then(&bp.deck_perm)
        };
    }
    Ok(LiftResult {
        closes: total.apply(start_sheet) == start_sheet,
        order_to_close: total.cycle_length(start_sheet),
        total_perm: total,
    })
}

/// Whether `w` lies in the image of the two-sheet cover's fundamental group:
/// its freely reduced length is even.
pub fn is_in_cover_subgroup(w: &Word) -> bool {
    reduce_free(w).len().is_multiple_of(2)
}
