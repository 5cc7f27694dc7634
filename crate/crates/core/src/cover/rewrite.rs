//! Reidemeister–Schreier rewriting of even words over the free basis
//! `{A = a², B = b², C = ab}` of the two-sheet cover's loop group.

use std::fmt;

use super::{is_in_cover_subgroup, CoverError};
use crate::words::{reduce_free, Letter, Word, GEN_A, GEN_B};

/// Generator index of `A = a²` in a [`CoverWord`].
pub const GEN_A2: usize = 0;
/// Generator index of `B = b²`.
pub const GEN_B2: usize = 1;
/// Generator index of `C = ab`.
pub const GEN_AB: usize = 2;

/// A freely reduced word over `{A, B, C}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverWord(Word);

impl CoverWord {
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        CoverWord(reduce_free(&Word::from_letters(letters)))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    /// Substitutes `A → aa`, `B → bb`, `C → ab` and freely reduces.
    pub fn expand(&self) -> Word {
        let mut out = Word::identity();
        for l in self.0.letters() {
            let block = match l.generator() {
                GEN_A2 => [Letter::pos(GEN_A), Letter::pos(GEN_A)],
                GEN_B2 => [Letter::pos(GEN_B), Letter::pos(GEN_B)],
                _ => [Letter::pos(GEN_A), Letter::pos(GEN_B)],
            };
            if l.is_inverted() {
                block.iter().rev().for_each(|x| out.push(x.inverse()));
            } else {
                block.iter().for_each(|x| out.push(*x));
            }
        }
        reduce_free(&out)
    }
}

impl fmt::Display for CoverWord {
    /// Space separated tokens, e.g. `B C^-1 A`; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = match l.generator() {
                GEN_A2 => "A",
                GEN_B2 => "B",
                _ => "C",
            };
            f.write_str(name)?;
            if l.is_inverted() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Schreier generator for coset representative `t` (false = e, true = a)
/// and generator `x`, as letters over `{A, B, C}`:
/// `e·a·a⁻¹ = e`, `e·b·a⁻¹ = B C⁻¹`, `a·a = A`, `a·b = C`.
fn schreier(in_a_coset: bool, x: usize) -> &'static [Letter] {
    const BA_INV: [Letter; 2] = [Letter::pos(GEN_B2), Letter::neg(GEN_AB)];
    const A2: [Letter; 1] = [Letter::pos(GEN_A2)];
    const AB: [Letter; 1] = [Letter::pos(GEN_AB)];
    match (in_a_coset, x) {
        (false, GEN_A) => &[],
        (false, _) => &BA_INV,
        (true, GEN_A) => &A2,
        (true, _) => &AB,
    }
}

/// Rewrites an even word over the cover generators using the transversal
/// `{e, a}`.
pub fn rewrite_over_cover_generators(w: &Word) -> Result<CoverWord, CoverError> {
    if let Some(l) = w.letters().iter().find(|l| l.generator() > GEN_B) {
        return Err(CoverError::UnsupportedGenerator(l.generator()));
    }
    if !is_in_cover_subgroup(w) {
        return Err(CoverError::NotInSubgroup(w.to_string()));
    }
    let mut out: Vec<Letter> = Vec::new();
    // every letter toggles the coset
    let mut in_a_coset = false;
    for l in w.letters() {
        if l.is_inverted() {
            let from = !in_a_coset;
            out.extend(schreier(from, l.generator()).iter().rev().map(|x| x.inverse()));
            in_a_coset = from;
        } else {
            out.extend_from_slice(schreier(in_a_coset, l.generator()));
            in_a_coset = !in_a_coset;
        }
    }
    debug_assert!(!in_a_coset);
    Ok(CoverWord::from_letters(out))
}
