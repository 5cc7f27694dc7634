//! Loop words around an EP pair.
//!
//! A loop in the twice-punctured plane is recorded as a word in the free
//! group on `a` (once around EP 1) and `b` (once around EP 2). This module
//! holds the exact symbolic side of the crate: free reduction, the infinite
//! dihedral quotient obtained by imposing the cone relations `a² = b² = e`,
//! the winding homomorphism of the capped surface, chirality classes and the
//! reduced-word table of standard `abab…` loops.
//!
//! Text format: `a`, `b`, `A` (= a⁻¹), `B` (= b⁻¹), concatenated. The empty
//! string is the identity.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

/// Generator index of `a`.
pub const GEN_A: usize = 0;
/// Generator index of `b`.
pub const GEN_B: usize = 1;

/// Largest degree accepted by [`enumerate_table`].
pub const MAX_TABLE_DEGREE: u32 = 12;
/// Largest degree for which word listings are materialized.
pub const MAX_LISTING_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("exponent must be +1 or -1, got {0}")]
    BadExponent(i32),
    #[error("invalid character {ch:?} at position {pos} in word text")]
    BadCharacter { ch: char, pos: usize },
    #[error("generator index {0} has no capped winding (only a and b are supported)")]
    UnsupportedGenerator(usize),
    #[error("word `{0}` is not in standard abab... form")]
    NotStandardForm(String),
    #[error("reference word has no nonzero integer winding")]
    NoChirality,
    #[error("degree {k} outside 1..={max}")]
    DegreeOutOfRange { k: u32, max: u32 },
}

/// One signed generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: usize,
    exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i32) -> Result<Self, WordError> {
        match exponent {
            1 | -1 => Ok(Letter {
                generator,
                exponent: exponent as i8,
            }),
            e => Err(WordError::BadExponent(e)),
        }
    }

    pub const fn pos(generator: usize) -> Self {
        Letter {
            generator,
            exponent: 1,
        }
    }

    pub const fn neg(generator: usize) -> Self {
        Letter {
            generator,
            exponent: -1,
        }
    }

    pub fn generator(self) -> usize {
        self.generator
    }

    pub fn exponent(self) -> i32 {
        self.exponent as i32
    }

    pub fn is_inverted(self) -> bool {
        self.exponent < 0
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            exponent: -self.exponent,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.exponent == -other.exponent
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.generator, self.exponent) {
            (GEN_A, 1) => f.write_str("a"),
            (GEN_A, _) => f.write_str("A"),
            (GEN_B, 1) => f.write_str("b"),
            (GEN_B, _) => f.write_str("B"),
            (g, 1) => write!(f, "[g{g}]"),
            (g, _) => write!(f, "[g{g}^-1]"),
        }
    }
}

/// A loop word. The stored letter sequence need not be reduced; equality
/// and hashing compare freely reduced forms.
#[derive(Debug, Clone, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letter(letter: Letter) -> Self {
        Word {
            letters: vec![letter],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Plain concatenation, no reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    /// Sum of all exponents.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent() as i64).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Degree `k` if the word is `a^± b^± a^± b^± …` of length `2k ≥ 2`.
    pub fn standard_degree(&self) -> Option<u32> {
        if self.letters.is_empty() || !self.letters.len().is_multiple_of(2) {
            return None;
        }
        let alternating = self
            .letters
            .iter()
            .enumerate()
            .all(|(i, l)| l.generator == i % 2);
        alternating.then_some((self.letters.len() / 2) as u32)
    }

    /// Number of inverted letters.
    pub fn inverted_count(&self) -> u32 {
        self.letters.iter().filter(|l| l.is_inverted()).count() as u32
    }

    /// Exact letter-by-letter comparison (no reduction).
    pub fn same_letters(&self, other: &Word) -> bool {
        self.letters == other.letters
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        reduce_free(self).letters == reduce_free(other).letters
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        reduce_free(self).letters.hash(state);
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                'a' => Ok(Letter::pos(GEN_A)),
                'A' => Ok(Letter::neg(GEN_A)),
                'b' => Ok(Letter::pos(GEN_B)),
                'B' => Ok(Letter::neg(GEN_B)),
                ch => Err(WordError::BadCharacter { ch, pos }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Element of the infinite dihedral group `⟨a, b | a² = b² = e⟩` in normal
/// form: an alternating sequence of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DihedralElement {
    alternating: Vec<usize>,
}

impl DihedralElement {
    pub fn as_slice(&self) -> &[usize] {
        &self.alternating
    }

    pub fn len(&self) -> usize {
        self.alternating.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternating.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.alternating.is_empty()
    }

    pub fn is_rotation(&self) -> bool {
        self.alternating.len().is_multiple_of(2)
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &g in &self.alternating {
            write!(f, "{}", Letter::pos(g))?;
        }
        Ok(())
    }
}

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub const fn from_integer(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Nearest half-integer to `x`.
    pub fn nearest(x: f64) -> Self {
        HalfInteger {
            twice: (2.0 * x).round() as i64,
        }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Image of a word in the capped fundamental group `ℤ = ⟨ab⟩`, or the
/// marker for odd (reflection) elements of the dihedral quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winding {
    Rotation(i64),
    Reflection,
}

impl Winding {
    pub fn as_integer(self) -> Option<i64> {
        match self {
            Winding::Rotation(n) => Some(n),
            Winding::Reflection => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChiralityClass {
    Trivial,
    Cw(u64),
    Ccw(u64),
    Reflection,
}

impl fmt::Display for ChiralityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiralityClass::Trivial => f.write_str("Trivial"),
            ChiralityClass::Cw(k) => write!(f, "CW({k})"),
            ChiralityClass::Ccw(k) => write!(f, "CCW({k})"),
            ChiralityClass::Reflection => f.write_str("Reflection"),
        }
    }
}

/// Freely reduced form of `w`.
pub fn reduce_free(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word { letters: out }
}

/// Normal form in the dihedral quotient: exponents are dropped and adjacent
/// equal generators cancel.
pub fn project_dihedral(w: &Word) -> DihedralElement {
    let mut out: Vec<usize> = Vec::with_capacity(w.len());
    for l in &w.letters {
        if out.last() == Some(&l.generator) {
            out.pop();
        } else {
            out.push(l.generator);
        }
    }
    DihedralElement { alternating: out }
}

fn check_two_generators(w: &Word) -> Result<(), WordError> {
    match w.letters.iter().find(|l| l.generator > GEN_B) {
        Some(l) => Err(WordError::UnsupportedGenerator(l.generator)),
        None => Ok(()),
    }
}

/// Winding in the capped group: `(ab)^k ↦ k`, `(ba)^k ↦ -k`.
pub fn winding(w: &Word) -> Result<Winding, WordError> {
    check_two_generators(w)?;
    let d = project_dihedral(w);
    Ok(match d.as_slice() {
        [] => Winding::Rotation(0),
        s if s.len() % 2 == 1 => Winding::Reflection,
        s => {
            let k = (s.len() / 2) as i64;
            if s[0] == GEN_A {
                Winding::Rotation(k)
            } else {
                Winding::Rotation(-k)
            }
        }
    })
}

pub fn classify(w: &Word) -> Result<ChiralityClass, WordError> {
    Ok(match winding(w)? {
        Winding::Rotation(0) => ChiralityClass::Trivial,
        Winding::Rotation(k) if k > 0 => ChiralityClass::Cw(k as u64),
        Winding::Rotation(k) => ChiralityClass::Ccw(k.unsigned_abs()),
        Winding::Reflection => ChiralityClass::Reflection,
    })
}

/// Orientation reversal: the group inverse.
pub fn parity(w: &Word) -> Word {
    Word {
        letters: w.letters.iter().rev().map(|l| l.inverse()).collect(),
    }
}

/// True iff both words have integer capped winding and the windings cancel.
pub fn is_mirror_pair(w0: &Word, w1: &Word) -> Result<bool, WordError> {
    Ok(match (winding(w0)?, winding(w1)?) {
        (Winding::Rotation(x), Winding::Rotation(y)) => x + y == 0,
        _ => false,
    })
}

/// Standard-form word of degree `k`; bit `2k-1-i` of `pattern` inverts
/// letter `i`, so increasing patterns run in lexicographic sign order.
pub fn standard_word(k: u32, pattern: u64) -> Word {
    let len = 2 * k as usize;
    let letters = (0..len)
        .map(|i| {
            let inverted = (pattern >> (len - 1 - i)) & 1 == 1;
            Letter {
                generator: i % 2,
                exponent: if inverted { -1 } else { 1 },
            }
        })
        .collect();
    Word { letters }
}

/// Standard-form words of degree `k_form` whose table vorticity is the
/// negative of the capped winding of `w0`.
///
/// Every standard-form word has capped winding `+k_form`, so the mirror
/// family is selected by vorticity, the observable the reduced-word table
/// tracks.
pub fn mirror_set(w0: &Word, k_form: u32) -> Result<Vec<Word>, WordError> {
    let target = match winding(w0)? {
        Winding::Rotation(n) if n != 0 => -n,
        _ => return Err(WordError::NoChirality),
    };
    if k_form == 0 || k_form > MAX_LISTING_DEGREE {
        return Err(WordError::DegreeOutOfRange {
            k: k_form,
            max: MAX_LISTING_DEGREE,
        });
    }
    Ok((0..1u64 << (2 * k_form))
        .map(|p| standard_word(k_form, p))
        .filter(|w| vorticity_of_word(w) == HalfInteger::from_integer(target))
        .collect())
}

/// Table vorticity: half the exponent sum.
pub fn vorticity_of_word(w: &Word) -> HalfInteger {
    HalfInteger::from_twice(w.exponent_sum())
}

/// `k + r` for a standard-form word of degree `k` with `r` inverted letters.
pub fn linking_number(w: &Word) -> Result<i64, WordError> {
    let k = w
        .standard_degree()
        .ok_or_else(|| WordError::NotStandardForm(w.to_string()))?;
    Ok(k as i64 + w.inverted_count() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordTableRow {
    /// EP crossings, the number of inverted letters.
    pub r: u32,
    pub count: u64,
    pub linking_number: i64,
    pub vorticity: i64,
}

#[derive(Debug, Clone)]
pub struct WordTable {
    pub degree: u32,
    pub rows: Vec<WordTableRow>,
    /// Words per row in lexicographic sign order, when requested.
    pub words: Option<Vec<Vec<Word>>>,
}

impl WordTable {
    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,count,linking,vorticity\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.r, row.count, row.linking_number, row.vorticity
            ));
        }
        out
    }
}

/// Histogram of standard-form words of degree `k` by number of inverted
/// letters, built by enumerating every sign pattern.
pub fn enumerate_table(k: u32, list_words: bool) -> Result<WordTable, WordError> {
    if k == 0 || k > MAX_TABLE_DEGREE {
        return Err(WordError::DegreeOutOfRange {
            k,
            max: MAX_TABLE_DEGREE,
        });
    }
    if list_words && k > MAX_LISTING_DEGREE {
        return Err(WordError::DegreeOutOfRange {
            k,
            max: MAX_LISTING_DEGREE,
        });
    }
    let len = 2 * k;
    let patterns = 1u64 << len;
    let chunk = 1u64 << 12;
    let counts = (0..patterns.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; len as usize + 1];
            for p in c * chunk..((c + 1) * chunk).min(patterns) {
                hist[p.count_ones() as usize] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; len as usize + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let rows = counts
        .iter()
        .enumerate()
        .map(|(r, &count)| {
            // representative: the last r letters inverted
            let rep = standard_word(k, (1u64 << r) - 1);
            let vorticity = vorticity_of_word(&rep);
            debug_assert!(vorticity.is_integer());
            WordTableRow {
                r: r as u32,
                count,
                linking_number: linking_number(&rep).expect("standard form"),
                vorticity: vorticity.twice() / 2,
            }
        })
        .collect();

    let words = list_words.then(|| {
        let mut by_r: Vec<Vec<Word>> = vec![Vec::new(); len as usize + 1];
        for p in 0..patterns {
            by_r[p.count_ones() as usize].push(standard_word(k, p));
        }
        by_r
    });

    Ok(WordTable {
        degree: k,
        rows,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["", "a", "AbBa", "abab"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(
            "abc".parse::<Word>().unwrap_err(),
            WordError::BadCharacter { ch: 'c', pos: 2 }
        );
        assert!(" a".parse::<Word>().is_err());
    }

    #[test]
    fn letter_exponent_validated() {
        assert!(Letter::new(0, 2).is_err());
        assert!(Letter::new(0, 0).is_err());
        assert_eq!(Letter::new(1, -1).unwrap(), Letter::neg(1));
    }

    #[test]
    fn free_reduction_examples() {
        assert!(reduce_free(&w("aAb")).same_letters(&w("b")));
        assert!(reduce_free(&w("ab")).same_letters(&w("ab")));
        // b² (ab)⁻¹ a²
        assert!(reduce_free(&w("bbBAaa")).same_letters(&w("ba")));
        assert!(reduce_free(&w("abBA")).is_empty());
    }

    #[test]
    fn dihedral_projection_examples() {
        assert!(project_dihedral(&w("aa")).is_identity());
        assert_eq!(project_dihedral(&w("Ab")).as_slice(), &[GEN_A, GEN_B]);
        assert_eq!(project_dihedral(&w("bbBAaa")).as_slice(), &[GEN_B, GEN_A]);
        assert_eq!(project_dihedral(&w("bbBAaa")).to_string(), "ba");
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding(&w("ab")).unwrap(), Winding::Rotation(1));
        assert_eq!(winding(&w("ba")).unwrap(), Winding::Rotation(-1));
        assert_eq!(winding(&w("a")).unwrap(), Winding::Reflection);
        assert_eq!(winding(&w("")).unwrap(), Winding::Rotation(0));
        for s in ["ab", "Ab", "aB", "AB"] {
            assert_eq!(winding(&w(s)).unwrap(), Winding::Rotation(1), "{s}");
        }
        for s in ["ba", "Ba", "bA", "BA"] {
            assert_eq!(winding(&w(s)).unwrap(), Winding::Rotation(-1), "{s}");
        }
        let c = Word::letter(Letter::pos(2));
        assert_eq!(winding(&c), Err(WordError::UnsupportedGenerator(2)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&w("BA")).unwrap(), ChiralityClass::Ccw(1));
        assert_eq!(classify(&w("AB")).unwrap(), ChiralityClass::Cw(1));
        assert_eq!(classify(&w("")).unwrap(), ChiralityClass::Trivial);
        assert_eq!(classify(&w("abab")).unwrap(), ChiralityClass::Cw(2));
        assert_eq!(classify(&w("b")).unwrap(), ChiralityClass::Reflection);
        assert_eq!(ChiralityClass::Ccw(3).to_string(), "CCW(3)");
    }

    #[test]
    fn parity_examples() {
        assert!(parity(&w("ab")).same_letters(&w("BA")));
        assert!(parity(&w("")).is_empty());
        assert!(parity(&w("Ab")).same_letters(&w("Ba")));
    }

    #[test]
    fn mirror_pairs() {
        assert!(is_mirror_pair(&w("ab"), &w("ba")).unwrap());
        assert!(is_mirror_pair(&w("ab"), &w("Ba")).unwrap());
        assert!(!is_mirror_pair(&w("ab"), &w("ab")).unwrap());
        assert!(!is_mirror_pair(&w("a"), &w("a")).unwrap());
    }

    #[test]
    fn mirror_set_examples() {
        let k1 = mirror_set(&w("ab"), 1).unwrap();
        assert_eq!(k1.len(), 1);
        assert!(k1[0].same_letters(&w("AB")));

        // oracle: filter all 16 degree-2 sign patterns by exponent sum -2
        let k2 = mirror_set(&w("ab"), 2).unwrap();
        let expected: Vec<String> = (0..16u64)
            .filter(|p| p.count_ones() == 3)
            .map(|p| standard_word(2, p).to_string())
            .collect();
        assert_eq!(k2.len(), 4);
        assert_eq!(
            k2.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            expected
        );
        assert_eq!(mirror_set(&w(""), 1), Err(WordError::NoChirality));
        assert_eq!(mirror_set(&w("a"), 1), Err(WordError::NoChirality));
    }

    #[test]
    fn vorticity_and_linking_examples() {
        assert_eq!(vorticity_of_word(&w("ab")), HalfInteger::from_integer(1));
        assert_eq!(vorticity_of_word(&w("Ab")), HalfInteger::from_integer(0));
        assert_eq!(vorticity_of_word(&w("ABAb")), HalfInteger::from_integer(-1));
        assert_eq!(vorticity_of_word(&w("a")), HalfInteger::from_twice(1));
        assert_eq!(HalfInteger::from_twice(1).to_string(), "1/2");
        assert_eq!(HalfInteger::from_twice(-4).to_string(), "-2");

        assert_eq!(linking_number(&w("ab")).unwrap(), 1);
        assert_eq!(linking_number(&w("AB")).unwrap(), 3);
        assert_eq!(linking_number(&w("ABab")).unwrap(), 4);
        assert!(linking_number(&w("ba")).is_err());
        assert!(linking_number(&w("")).is_err());
        assert!(linking_number(&w("aba")).is_err());
    }

    fn binomial(n: u64, r: u64) -> u64 {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn table_small_degrees() {
        let t1 = enumerate_table(1, true).unwrap();
        let rows: Vec<_> = t1
            .rows
            .iter()
            .map(|r| (r.r, r.count, r.linking_number, r.vorticity))
            .collect();
        assert_eq!(rows, vec![(0, 1, 1, 1), (1, 2, 2, 0), (2, 1, 3, -1)]);
        assert_eq!(t1.total(), 4);
        let listing = t1.words.unwrap();
        assert_eq!(
            listing[1].iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            vec!["aB", "Ab"]
        );

        let t2 = enumerate_table(2, false).unwrap();
        assert_eq!(
            t2.rows.iter().map(|r| r.count).collect::<Vec<_>>(),
            vec![1, 4, 6, 4, 1]
        );
        assert_eq!(t2.rows.last().unwrap().vorticity, -2);
        assert_eq!(t2.rows.last().unwrap().linking_number, 6);

        let t3 = enumerate_table(3, false).unwrap();
        assert_eq!(
            t3.rows.iter().map(|r| r.count).collect::<Vec<_>>(),
            (0..=6).map(|r| binomial(6, r)).collect::<Vec<_>>()
        );
        assert_eq!(t3.total(), 64);
    }

    #[test]
    fn table_bounds() {
        assert!(enumerate_table(0, false).is_err());
        assert!(enumerate_table(13, false).is_err());
        assert!(enumerate_table(9, true).is_err());
        assert!(enumerate_table(9, false).is_ok());
    }

    #[test]
    fn table_matches_brute_force_listing() {
        // oracle: classify each materialized word independently
        for k in 1..=6 {
            let t = enumerate_table(k, true).unwrap();
            let words = t.words.as_ref().unwrap();
            for row in &t.rows {
                let ws = &words[row.r as usize];
                assert_eq!(ws.len() as u64, row.count);
                assert_eq!(row.count, binomial(2 * k as u64, row.r as u64));
                for x in ws {
                    assert_eq!(x.inverted_count(), row.r);
                    assert_eq!(linking_number(x).unwrap(), row.linking_number);
                    assert_eq!(
                        vorticity_of_word(x),
                        HalfInteger::from_integer(row.vorticity)
                    );
                    assert_eq!(winding(x).unwrap(), Winding::Rotation(k as i64));
                }
            }
            assert_eq!(t.total(), 1u64 << (2 * k));
        }
    }

    #[test]
    fn csv_format() {
        let csv = enumerate_table(1, false).unwrap().to_csv();
        assert_eq!(csv, "r,count,linking,vorticity\n0,1,1,1\n1,2,2,0\n2,1,3,-1\n");
    }

    #[test]
    fn chirality_obstruction() {
        assert_eq!(classify(&w("ab")).unwrap(), ChiralityClass::Cw(1));
        assert_eq!(classify(&w("ba")).unwrap(), ChiralityClass::Ccw(1));
        assert_ne!(winding(&w("ab")), winding(&w("ba")));
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..2, prop::bool::ANY), 0..max_len).prop_map(|v| {
            Word::from_letters(
                v.into_iter()
                    .map(|(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent_and_shrinks(u in arb_word(24)) {
            let r = reduce_free(&u);
            prop_assert!(r.is_freely_reduced());
            prop_assert!(r.len() <= u.len());
            prop_assert!(reduce_free(&r).same_letters(&r));
        }

        #[test]
        fn reduction_respects_concatenation(u in arb_word(16), v in arb_word(16)) {
            let lhs = reduce_free(&u.concat(&v));
            let rhs = reduce_free(&reduce_free(&u).concat(&reduce_free(&v)));
            prop_assert!(lhs.same_letters(&rhs));
        }

        #[test]
        fn dihedral_ignores_free_reduction(u in arb_word(24)) {
            prop_assert_eq!(project_dihedral(&u), project_dihedral(&reduce_free(&u)));
        }

        #[test]
        fn winding_is_additive_on_rotations(u in arb_word(16), v in arb_word(16)) {
            if let (Winding::Rotation(x), Winding::Rotation(y)) =
                (winding(&u).unwrap(), winding(&v).unwrap())
            {
                prop_assert_eq!(winding(&u.concat(&v)).unwrap(), Winding::Rotation(x + y));
            }
        }

        #[test]
        fn parity_negates_winding(u in arb_word(24)) {
            let p = parity(&u);
            match winding(&u).unwrap() {
                Winding::Rotation(x) => {
                    prop_assert_eq!(winding(&p).unwrap(), Winding::Rotation(-x));
                    if x != 0 {
                        prop_assert!(is_mirror_pair(&u, &p).unwrap());
                    }
                }
                Winding::Reflection => prop_assert_eq!(winding(&p).unwrap(), Winding::Reflection),
            }
            prop_assert!(parity(&p).same_letters(&u));
            prop_assert!(project_dihedral(&u.concat(&p)).is_identity());
        }

        #[test]
        fn standard_words_obey_table_identities(k in 1u32..7, bits in any::<u64>()) {
            let p = bits & ((1u64 << (2 * k)) - 1);
            let x = standard_word(k, p);
            let r = p.count_ones() as i64;
            let nu = vorticity_of_word(&x);
            let lk = linking_number(&x).unwrap();
            prop_assert_eq!(nu, HalfInteger::from_integer(k as i64 - r));
            prop_assert_eq!(lk, k as i64 + r);
            prop_assert_eq!(nu.twice() / 2 + lk, 2 * k as i64);
        }

        #[test]
        fn text_round_trip(u in arb_word(24)) {
            let parsed: Word = u.to_string().parse().unwrap();
            prop_assert!(parsed.same_letters(&u));
        }
    }
}
