//! Randomized cross-checks shared by `verify` and the acceptance suite.

use rand::Rng;
use serde_json::{json, Value};

use eptopo::cover::{rewrite_over_cover_generators, verify_homotopy, CoverError, HomotopyGrid};
use eptopo::spectra::{
    default_cuts, loop_word, numerical_vorticity, trace_loop, word_loop, Loop, ModelSpec, Monodromy,
    ParamPoint, TraceOptions, VORTICITY_RESIDUAL_BOUND,
};
use eptopo::sphere::{project, unproject, PlanePoint};
use eptopo::words::{reduce_free, vorticity_of_word, Letter, Word};

/// EPs shared by the reference models: EP₁ below, EP₂ above.
pub const REFERENCE_EPS: [ParamPoint; 2] = [ParamPoint::new(0.0, -1.0), ParamPoint::new(0.0, 1.0)];

pub const SQUARE_ROOT: ModelSpec = ModelSpec::SquareRoot {
    z1: [0.0, -1.0],
    z2: [0.0, 1.0],
};
pub const NH_DIRAC: ModelSpec = ModelSpec::NhDirac { b_x: 1.0 };

/// Published plane and sphere coordinates of the two microcavity EPs.
pub const PUBLISHED_EPS: [([f64; 2], [f64; 3]); 2] = [
    ([2.6257, 0.6001], [0.636, 0.145, 0.758]),
    ([2.9036, 0.5372], [0.598, 0.111, 0.795]),
];
/// Agreement required with the three-decimal published values.
pub const PUBLISHED_TOL: f64 = 1e-3;
pub const ROUND_TRIP_TOL: f64 = 1e-12;
/// Allowed relative change of the homotopy margin under grid doubling.
pub const HOMOTOPY_STABILITY: f64 = 0.05;

fn random_letter<R: Rng>(rng: &mut R) -> Letter {
    let g = rng.gen_range(0..2);
    if rng.gen_bool(0.5) {
        Letter::neg(g)
    } else {
        Letter::pos(g)
    }
}

/// Freely reduced word of length `1..=max_len` over `a, b`.
pub fn random_reduced_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = random_letter(rng);
        if letters.last().is_some_and(|p| *p == l.inverse()) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(letters)
}

/// Word of even (unreduced) length at most `max_len`.
pub fn random_even_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = 2 * rng.gen_range(0..=max_len / 2);
    Word::from_letters((0..len).map(|_| random_letter(rng)).collect())
}

/// Lollipop loop around [`REFERENCE_EPS`] realizing `word`, with a random
/// basepoint to the right of both cuts and random lollipop radii.
pub fn random_word_loop<R: Rng>(rng: &mut R, word: &Word) -> Loop {
    let base = ParamPoint::new(rng.gen_range(1.5..3.0), rng.gen_range(-0.5..0.5));
    let radii: Vec<f64> = (0..word.len()).map(|_| rng.gen_range(0.2..0.8)).collect();
    word_loop(word, &REFERENCE_EPS, base, &radii).expect("reference lollipops are valid")
}

#[derive(Debug, Clone, Default)]
pub struct CrossValidation {
    pub loops: usize,
    pub parity_failures: usize,
    pub vorticity_failures: usize,
    pub word_failures: usize,
    pub errors: Vec<String>,
    /// Largest `|ν_numeric − ν_word|` over the square-root traces.
    pub max_vorticity_error: f64,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.parity_failures == 0
            && self.vorticity_failures == 0
            && self.word_failures == 0
            && self.errors.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.passed(),
            "loops": self.loops,
            "parity_failures": self.parity_failures,
            "vorticity_failures": self.vorticity_failures,
            "word_failures": self.word_failures,
            "errors": self.errors,
            "max_vorticity_error": self.max_vorticity_error,
            "tolerance": VORTICITY_RESIDUAL_BOUND,
        })
    }
}

/// Traces `n` random word loops of length `≤ max_len` on both reference
/// models. Monodromy parity is checked on both; vorticity and the cut word
/// on the square-root model, whose EPs both carry charge `+1`.
pub fn cross_validate<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> CrossValidation {
    let sqrt_model = SQUARE_ROOT.build();
    let dirac_model = NH_DIRAC.build();
    let opts = TraceOptions::with_eps(&REFERENCE_EPS);
    let cuts = default_cuts(&REFERENCE_EPS);
    let mut report = CrossValidation {
        loops: n,
        ..Default::default()
    };
    for _ in 0..n {
        let word = random_reduced_word(rng, max_len);
        let lp = random_word_loop(rng, &word);
        let odd = word.len() % 2 == 1;
        let expected = vorticity_of_word(&word);

        match trace_loop(dirac_model.as_ref(), &lp, &opts) {
            Ok(tr) => {
                if (tr.permutation == Monodromy::Swap) != odd {
                    report.parity_failures += 1;
                }
            }
            Err(e) => report.errors.push(format!("{word} (nh_dirac): {e}")),
        }
        let tr = match trace_loop(sqrt_model.as_ref(), &lp, &opts) {
            Ok(tr) => tr,
            Err(e) => {
                report.errors.push(format!("{word} (square_root): {e}"));
                continue;
            }
        };
        if (tr.permutation == Monodromy::Swap) != odd {
            report.parity_failures += 1;
        }
        match numerical_vorticity(&tr) {
            Ok(v) => {
                let err = (v.raw - expected.as_f64()).abs();
                report.max_vorticity_error = report.max_vorticity_error.max(err);
                if v.value != expected || err >= VORTICITY_RESIDUAL_BOUND {
                    report.vorticity_failures += 1;
                }
            }
            Err(e) => report.errors.push(format!("{word}: {e}")),
        }
        match loop_word(&tr.points, &cuts) {
            Ok(w) => {
                if !w.same_letters(&reduce_free(&word)) {
                    report.word_failures += 1;
                }
            }
            Err(e) => report.errors.push(format!("{word}: {e}")),
        }
    }
    report
}

#[derive(Debug, Clone)]
pub struct HomotopyCertificate {
    pub grid: HomotopyGrid,
    pub doubled: HomotopyGrid,
    pub relative_change: f64,
}

impl HomotopyCertificate {
    pub fn passed(&self) -> bool {
        self.grid.is_valid() && self.doubled.is_valid() && self.relative_change <= HOMOTOPY_STABILITY
    }

    pub fn to_json(&self) -> Value {
        let g = |h: &HomotopyGrid| {
            json!({
                "nt": h.nt,
                "ns": h.ns,
                "min_puncture_distance": h.min_puncture_distance,
                "argmin": h.argmin,
                "endpoint_residuals": h.endpoint_residuals,
                "continuity_jumps": h.continuity_jumps,
                "certified_lower_bound": h.certified_lower_bound,
                "valid": h.is_valid(),
            })
        };
        json!({
            "pass": self.passed(),
            "grid": g(&self.grid),
            "doubled": g(&self.doubled),
            "relative_change": self.relative_change,
            "stability_tolerance": HOMOTOPY_STABILITY,
        })
    }
}

/// The homotopy grid at `nt × ns` and at twice the resolution.
pub fn homotopy_certificate(nt: usize, ns: usize) -> Result<HomotopyCertificate, CoverError> {
    let grid = verify_homotopy(nt, ns)?;
    let doubled = verify_homotopy(2 * nt, 2 * ns)?;
    let relative_change =
        (grid.min_puncture_distance - doubled.min_puncture_distance).abs() / grid.min_puncture_distance;
    Ok(HomotopyCertificate {
        grid,
        doubled,
        relative_change,
    })
}

#[derive(Debug, Clone)]
pub struct SphereCheck {
    pub points: usize,
    pub max_round_trip: f64,
    pub max_norm_residual: f64,
    /// Per published EP, the largest coordinate deviation of `unproject`.
    pub published_deviation: [f64; 2],
}

impl SphereCheck {
    pub fn round_trip_passed(&self) -> bool {
        self.max_round_trip < ROUND_TRIP_TOL && self.max_norm_residual < ROUND_TRIP_TOL
    }

    pub fn published_passed(&self) -> bool {
        self.published_deviation.iter().all(|&d| d < PUBLISHED_TOL)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.round_trip_passed() && self.published_passed(),
            "points": self.points,
            "max_round_trip": self.max_round_trip,
            "max_norm_residual": self.max_norm_residual,
            "round_trip_tolerance": ROUND_TRIP_TOL,
            "published_deviation": self.published_deviation,
            "published_tolerance": PUBLISHED_TOL,
        })
    }
}

/// Round trips on `n` random plane points in `[-10, 10]²`, plus the
/// published EP coordinates.
pub fn sphere_check<R: Rng>(rng: &mut R, n: usize) -> SphereCheck {
    let mut max_round_trip = 0.0f64;
    let mut max_norm_residual = 0.0f64;
    for _ in 0..n {
        let q = PlanePoint {
            n: rng.gen_range(-10.0..10.0),
            chi: rng.gen_range(-10.0..10.0),
        };
        let s = unproject(q);
        max_norm_residual = max_norm_residual.max((s.norm_sq() - 1.0).abs());
        let back = project(s).finite().expect("finite plane point maps off the pole");
        max_round_trip = max_round_trip.max((back.n - q.n).abs().max((back.chi - q.chi).abs()));
    }
    let published_deviation = PUBLISHED_EPS.map(|(plane, sphere)| {
        let s = unproject(PlanePoint {
            n: plane[0],
            chi: plane[1],
        });
        [s.n - sphere[0], s.chi - sphere[1], s.xi - sphere[2]]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
    });
    SphereCheck {
        points: n,
        max_round_trip,
        max_norm_residual,
        published_deviation,
    }
}

#[derive(Debug, Clone)]
pub struct RewriteCheck {
    pub words: usize,
    pub failures: Vec<String>,
}

impl RewriteCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.passed(),
            "words": self.words,
            "failures": self.failures,
        })
    }
}

/// Expand-and-reduce round trips of the cover rewriting on `n` random even
/// words of length `≤ max_len`.
pub fn rewrite_check<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> RewriteCheck {
    let mut failures = Vec::new();
    for _ in 0..n {
        let w = random_even_word(rng, max_len);
        match rewrite_over_cover_generators(&w) {
            Ok(r) if r.expand().same_letters(&reduce_free(&w)) => {}
            Ok(r) => failures.push(format!("{w} -> {r}")),
            Err(e) => failures.push(format!("{w}: {e}")),
        }
    }
    RewriteCheck { words: n, failures }
}
