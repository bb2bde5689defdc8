//! Reduced words: application to the identity, reducedness, and exact
//! enumeration of `R(π)`.
//!
//! Convention: a word `i₁ i₂ … i_k` acts on `ι_n` by applying `s_{i₁}` first,
//! then `s_{i₂}`, and so on, where `s_i` swaps the entries in positions `i`
//! and `i + 1`. Under this convention `12321` produces `4231`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on `|R(π)|` for enumeration.
pub const DEFAULT_WORD_CAP: usize = 500_000;

/// A word over the generator indices `1..n`, one byte per letter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord(pub Vec<u8>);

impl ReducedWord {
    pub fn new(letters: Vec<u8>) -> Self {
        ReducedWord(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({self})")
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    /// Digit strings (`"12321"`) or comma-separated indices. `"e"` and the
    /// empty string are the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(ReducedWord::default());
        }
        let letters: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad letter '{t}'"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Parse(format!("bad letter '{c}'")))
                })
                .collect::<Result<_>>()?
        };
        if letters.contains(&0) {
            return Err(Error::LetterOutOfRange { letter: 0, max: 0 });
        }
        Ok(ReducedWord(letters))
    }
}

fn check_letters(word: &[u8], n: usize) -> Result<()> {
    let max = n.saturating_sub(1);
    match word.iter().find(|&&l| l == 0 || l as usize > max) {
        Some(&l) => Err(Error::LetterOutOfRange { letter: l as usize, max }),
        None => Ok(()),
    }
}

/// Applies `word` to the identity of size `n`.
pub fn apply_word(word: &[u8], n: usize) -> Result<Permutation> {
    check_letters(word, n)?;
    let mut entries: Vec<u8> = (1..=n as u8).collect();
    for &l in word {
        entries.swap(l as usize - 1, l as usize);
    }
    Ok(Permutation::from_entries_unchecked(entries))
}

/// Whether the word is reduced, i.e. its length equals the length of the
/// permutation it produces.
pub fn is_reduced(word: &[u8], n: usize) -> Result<bool> {
    check_letters(word, n)?;
    // each step must create an inversion; a step undoing one means the word is not reduced
    let mut entries: Vec<u8> = (1..=n as u8).collect();
    for &l in word {
        let i = l as usize - 1;
        if entries[i] > entries[i + 1] {
            return Ok(false);
        }
        entries.swap(i, i + 1);
    }
    Ok(true)
}

/// Counts `|R(π)|` by memoized recursion on descents.
pub fn count_reduced_words(pi: &Permutation) -> u128 {
    fn go(entries: &mut Vec<u8>, memo: &mut HashMap<Vec<u8>, u128>) -> u128 {
        if let Some(&c) = memo.get(entries.as_slice()) {
            return c;
        }
        let mut total = 0u128;
        let mut any = false;
        for i in 0..entries.len().saturating_sub(1) {
            if entries[i] > entries[i + 1] {
                any = true;
                entries.swap(i, i + 1);
                total += go(entries, memo);
                entries.swap(i, i + 1);
            }
        }
        let c = if any { total } else { 1 };
        memo.insert(entries.clone(), c);
        c
    }
    go(&mut pi.entries().to_vec(), &mut HashMap::new())
}

/// `R(π)` in lexicographic order, with the default cap.
pub fn enumerate(pi: &Permutation) -> Result<Vec<ReducedWord>> {
    enumerate_capped(pi, DEFAULT_WORD_CAP)
}

/// `R(π)` in lexicographic order. Fails with `TooLarge` before generating
/// anything if `|R(π)|` exceeds `cap`.
pub fn enumerate_capped(pi: &Permutation, cap: usize) -> Result<Vec<ReducedWord>> {
    let count = count_reduced_words(pi);
    if count > cap as u128 {
        return Err(Error::TooLarge {
            what: "number of reduced words",
            size: usize::try_from(count).unwrap_or(usize::MAX),
            cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut entries = pi.entries().to_vec();
    let mut suffix = Vec::with_capacity(pi.length());
    strip_descents(&mut entries, &mut suffix, &mut out);
    out.sort_unstable();
    Ok(out)
}

// Peels off a last letter `i` for every descent at position `i`: R(π) is the
// union of R(π s_i)·i.
fn strip_descents(entries: &mut Vec<u8>, suffix: &mut Vec<u8>, out: &mut Vec<ReducedWord>) {
    let mut leaf = true;
    for i in 0..entries.len().saturating_sub(1) {
        if entries[i] > entries[i + 1] {
            leaf = false;
            entries.swap(i, i + 1);
            suffix.push(i as u8 + 1);
            strip_descents(entries, suffix, out);
            suffix.pop();
            entries.swap(i, i + 1);
        }
    }
    if leaf {
        out.push(ReducedWord(suffix.iter().rev().copied().collect()));
    }
}
