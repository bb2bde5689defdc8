//! Codimension-two counts `I₂`, `I₃`, `L₂` and sweeps comparing them with
//! diameters.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::formulas::{as_21_iota, as_low_family, brute_force};
use crate::graph::{build_g_capped, DEFAULT_VERTEX_CAP};
use crate::perm::{pattern, Permutation};
use crate::word::{count_reduced_words, DEFAULT_WORD_CAP};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct L2Breakdown {
    /// Unordered pairs of inversions sharing no position.
    pub i2: u64,
    /// Occurrences of the pattern 321.
    pub i3: u64,
    pub l2: u64,
}

pub fn l2(pi: &Permutation) -> L2Breakdown {
    let i2 = pi.count_disjoint_inversion_pairs() as u64;
    let i3 = pi.count_321() as u64;
    L2Breakdown { i2, i3, l2: i2 + i3 }
}

/// Where `diam G_π` falls relative to `½|L₂| ≤ diam ≤ |L₂|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    BelowLower,
    AtLower,
    Interior,
    AtUpper,
    AboveUpper,
}

impl Class {
    pub const ALL: [Class; 5] = [
        Class::BelowLower,
        Class::AtLower,
        Class::Interior,
        Class::AtUpper,
        Class::AboveUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Class::BelowLower => "BelowLower",
            Class::AtLower => "AtLower",
            Class::Interior => "Interior",
            Class::AtUpper => "AtUpper",
            Class::AboveUpper => "AboveUpper",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub perm: Permutation,
    pub diam_g: u64,
    pub l2: L2Breakdown,
    pub class: Class,
}

impl ConjectureReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "perm": self.perm.to_string(),
            "diam_g": self.diam_g,
            "i2": self.l2.i2,
            "i3": self.l2.i3,
            "l2": self.l2.l2,
            "class": self.class.name(),
        })
    }
}

/// Classifies a known diameter. When both bounds coincide (`L₂ = 0`) the
/// permutation is reported as `AtUpper`.
pub fn classify(pi: &Permutation, diam_g: u64) -> ConjectureReport {
    let counts = l2(pi);
    let twice = 2 * diam_g;
    let class = if twice < counts.l2 {
        Class::BelowLower
    } else if diam_g > counts.l2 {
        Class::AboveUpper
    } else if diam_g == counts.l2 {
        Class::AtUpper
    } else if twice == counts.l2 {
        Class::AtLower
    } else {
        Class::Interior
    };
    ConjectureReport {
        perm: pi.clone(),
        diam_g,
        l2: counts,
        class,
    }
}

/// Computes the diameter by brute force and classifies it.
pub fn classify_brute(pi: &Permutation, vertex_cap: usize) -> Result<ConjectureReport> {
    let g = build_g_capped(pi, vertex_cap)?;
    Ok(classify(pi, g.diameter_capped(vertex_cap)? as u64))
}

/// One line of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepEntry {
    Report(ConjectureReport),
    Skipped { perm: Permutation, words: u128, reason: String },
}

impl SweepEntry {
    pub fn perm(&self) -> &Permutation {
        match self {
            SweepEntry::Report(r) => &r.perm,
            SweepEntry::Skipped { perm, .. } => perm,
        }
    }

    pub fn report(&self) -> Option<&ConjectureReport> {
        match self {
            SweepEntry::Report(r) => Some(r),
            SweepEntry::Skipped { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SweepEntry::Report(r) => r.to_json(),
            SweepEntry::Skipped { perm, words, reason } => json!({
                "perm": perm.to_string(),
                "skipped": reason,
                "words": words.to_string(),
            }),
        }
    }
}

/// Classifies every permutation of size `n` whose graph has at most
/// `vertex_cap` vertices; larger ones are returned as `Skipped`. Output is
/// in lexicographic order of the permutations.
pub fn sweep(n: usize, vertex_cap: usize) -> Result<Vec<SweepEntry>> {
    let perms = Permutation::all(n);
    // largest graphs first so the parallel tail is short
    let mut order: Vec<(u128, usize)> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (count_reduced_words(p), i))
        .collect();
    order.sort_unstable_by(|x, y| y.cmp(x));
    let results: Vec<(usize, Result<SweepEntry>)> = order
        .par_iter()
        .map(|&(words, i)| {
            let pi = &perms[i];
            let entry = if words > vertex_cap as u128 {
                Ok(SweepEntry::Skipped {
                    perm: pi.clone(),
                    words,
                    reason: format!("{words} reduced words exceed the vertex cap of {vertex_cap}"),
                })
            } else {
                classify_brute(pi, vertex_cap).map(SweepEntry::Report)
            };
            (i, entry)
        })
        .collect();
    let mut slots: Vec<Option<SweepEntry>> = vec![None; perms.len()];
    for (i, r) in results {
        slots[i] = Some(r?);
    }
    Ok(slots.into_iter().map(|s| s.expect("every slot filled")).collect())
}

/// Aggregate view of a sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub covered: usize,
    pub skipped: Vec<Permutation>,
    pub class_counts: Vec<(Class, usize)>,
    pub at_lower: Vec<Permutation>,
    /// Reports outside `½|L₂| ≤ diam ≤ |L₂|`.
    pub bound_violations: Vec<Permutation>,
    /// Permutations containing 3412 with `diam = |L₂|`.
    pub pattern_3412_violations: Vec<Permutation>,
}

pub fn summarize(entries: &[SweepEntry]) -> SweepSummary {
    let p3412 = pattern("3412");
    let mut s = SweepSummary::default();
    let mut counts = [0usize; 5];
    for e in entries {
        match e {
            SweepEntry::Skipped { perm, .. } => s.skipped.push(perm.clone()),
            SweepEntry::Report(r) => {
                s.covered += 1;
                counts[Class::ALL.iter().position(|&c| c == r.class).unwrap()] += 1;
                match r.class {
                    Class::AtLower => s.at_lower.push(r.perm.clone()),
                    Class::BelowLower | Class::AboveUpper => s.bound_violations.push(r.perm.clone()),
                    _ => {}
                }
                if r.diam_g >= r.l2.l2 && r.perm.contains_pattern(&p3412) {
                    s.pattern_3412_violations.push(r.perm.clone());
                }
            }
        }
    }
    s.class_counts = Class::ALL.iter().copied().zip(counts).collect();
    s
}

/// CSV rows `n,perm,diam_g,i2,i3,l2,expression` for every `AtLower` report,
/// with the low-family inflation expression when one exists.
pub fn at_lower_csv(entries: &[SweepEntry]) -> String {
    let mut out = String::from("n,perm,diam_g,i2,i3,l2,expression\n");
    for r in entries.iter().filter_map(SweepEntry::report) {
        if r.class != Class::AtLower {
            continue;
        }
        let expr = as_low_family(&r.perm)
            .map(|(a, b, c, d)| format!("12[i{c},21[i{a},i{b}],i{d}]"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},\"{}\"",
            r.perm.size(),
            r.perm,
            r.diam_g,
            r.l2.i2,
            r.l2.i3,
            r.l2.l2,
            expr
        );
    }
    out
}

/// Which of the known upper-bound constructions, if any, produces `π`:
/// a 12-inflation of two upper-bound permutations, `21[α, 1]` with `α`
/// at the upper bound, or a 312- or 231-avoider. Block diameters are
/// computed by brute force.
pub fn upper_family_reason(pi: &Permutation) -> Result<Option<String>> {
    let at_upper = |p: &Permutation| -> Result<bool> {
        let d = brute_force(p, DEFAULT_WORD_CAP, DEFAULT_VERTEX_CAP)?;
        Ok(d.g == l2(p).l2)
    };
    for (alpha, beta) in pi.splits_12() {
        if at_upper(&alpha)? && at_upper(&beta)? {
            return Ok(Some(format!("12[{alpha},{beta}] with both blocks at the upper bound")));
        }
    }
    if let Some((alpha, 1)) = as_21_iota(pi) {
        if at_upper(&alpha)? {
            return Ok(Some(format!("21[{alpha},1] with the block at the upper bound")));
        }
    }
    if pi.avoids(&pattern("312")) {
        return Ok(Some("avoids 312".into()));
    }
    if pi.avoids(&pattern("231")) {
        return Ok(Some("avoids 231".into()));
    }
    Ok(None)
}

/// The report for 2413, which reaches the upper bound without coming from
/// any of the known constructions.
pub fn check_2413() -> Result<ConjectureReport> {
    let pi = pattern("2413");
    let report = classify_brute(&pi, DEFAULT_VERTEX_CAP)?;
    if let Some(reason) = upper_family_reason(&pi)? {
        return Err(Error::Precondition(format!("2413 unexpectedly arises as {reason}")));
    }
    Ok(report)
}
