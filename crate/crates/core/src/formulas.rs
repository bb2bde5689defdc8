//! Closed-form and recursive diameter results.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_g_capped, EdgeKind};
use crate::perm::Permutation;

/// Diameters of `G_π`, `C_π` and `B_π`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct DiameterTriple {
    pub g: u64,
    pub c: u64,
    pub b: u64,
}

impl DiameterTriple {
    pub const ZERO: DiameterTriple = DiameterTriple { g: 0, c: 0, b: 0 };

    pub fn new(g: u64, c: u64, b: u64) -> Self {
        DiameterTriple { g, c, b }
    }
}

impl fmt::Display for DiameterTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} c={} b={}", self.g, self.c, self.b)
    }
}

/// Bounds on the diameters of `G` and `B`, and the exact diameter of `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiameterBounds {
    pub g_lower: u64,
    pub g_upper: u64,
    pub c: u64,
    pub b_lower: u64,
    pub b_upper: u64,
}

impl DiameterBounds {
    pub fn contains(&self, t: &DiameterTriple) -> bool {
        (self.g_lower..=self.g_upper).contains(&t.g) && t.c == self.c && (self.b_lower..=self.b_upper).contains(&t.b)
    }
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Diameters of `12[α, β]` from those of the blocks and their lengths.
pub fn diam_12(da: DiameterTriple, db: DiameterTriple, la: u64, lb: u64) -> DiameterTriple {
    DiameterTriple {
        g: da.g + db.g + la * lb,
        c: da.c + db.c,
        b: da.b + db.b + la * lb,
    }
}

/// Bounds for `21[α, ι_b]` where `|α| = a ≥ 1` and `b ≥ 1`.
pub fn bounds_21_iota(da: DiameterTriple, la: u64, a: u64, b: u64) -> DiameterBounds {
    let gap = choose2(a) * choose2(b);
    // ℓ(α) = 0 whenever a < 2, so these never go negative
    let g_base = da.g + la * b * a.saturating_sub(1);
    let b_base = da.b + la * b * a.saturating_sub(2) + gap;
    DiameterBounds {
        g_lower: g_base + gap,
        g_upper: g_base + 2 * gap,
        c: da.c + la * b,
        b_lower: b_base,
        b_upper: b_base + gap,
    }
}

/// Exact diameters of `21[α, 1]` with `|α| = a`.
pub fn diam_21_single(da: DiameterTriple, la: u64, a: u64) -> DiameterTriple {
    DiameterTriple {
        g: da.g + la * a.saturating_sub(1),
        c: da.c + la,
        b: da.b + la * a.saturating_sub(2),
    }
}

/// Diameters for the longest permutation `δ_n`, iterating from
/// `D(1) = C(1) = B(1) = 0`.
pub fn delta_recursion(n: usize) -> DiameterTriple {
    let mut t = DiameterTriple::ZERO;
    for k in 1..n.max(1) as u64 {
        let pairs = choose2(k);
        t.g += (k - 1) * pairs;
        t.c += pairs;
        t.b += k.saturating_sub(2) * pairs;
    }
    t
}

/// Diameters of a 312-avoiding permutation via `π = 12[21[π′, 1], π″]`,
/// recursing on both blocks.
pub fn diam_312_avoiding(pi: &Permutation) -> Result<DiameterTriple> {
    if !pi.avoids(&crate::perm::pattern("312")) {
        return Err(Error::Contains312);
    }
    Ok(avoider_rec(pi, Avoids::P312, &mut HashMap::new()))
}

/// Diameters of a 231-avoiding permutation via `π = 12[π′, 21[1, π″]]`.
pub fn diam_231_avoiding(pi: &Permutation) -> Result<DiameterTriple> {
    if !pi.avoids(&crate::perm::pattern("231")) {
        return Err(Error::Contains231);
    }
    Ok(avoider_rec(pi, Avoids::P231, &mut HashMap::new()))
}

#[derive(Clone, Copy)]
enum Avoids {
    P312,
    P231,
}

fn avoider_rec(pi: &Permutation, kind: Avoids, memo: &mut HashMap<Permutation, DiameterTriple>) -> DiameterTriple {
    if pi.size() <= 1 {
        return DiameterTriple::ZERO;
    }
    if let Some(t) = memo.get(pi) {
        return *t;
    }
    let (left, right, m) = match kind {
        Avoids::P312 => pi.decompose_312(),
        Avoids::P231 => pi.decompose_231(),
    }
    .expect("sub-blocks of an avoider avoid the same pattern");
    let d1 = avoider_rec(&left, kind, memo);
    let d2 = avoider_rec(&right, kind, memo);
    let (l1, l2) = (left.length() as i64, right.length() as i64);
    let (n, m) = (pi.size() as i64, m as i64);
    // the block next to the new extreme entry, and the number of entries it
    // is pushed across
    let (near, far, spread) = match kind {
        Avoids::P312 => (l1, l2, m - 1),
        Avoids::P231 => (l2, l1, n - m),
    };
    let g = d1.g as i64 + d2.g as i64 + spread * (l1 + l2) + near * (far - 1);
    let c = d1.c as i64 + d2.c as i64 + near;
    let b = d1.b as i64 + d2.b as i64 + spread * (l1 + l2) + near * (far - 2);
    debug_assert!(g >= 0 && c >= 0 && b >= 0);
    let t = DiameterTriple::new(g.max(0) as u64, c.max(0) as u64, b.max(0) as u64);
    memo.insert(pi.clone(), t);
    t
}

/// Diameter of `G_π` for `π = 12[ι_c, 21[ι_a, ι_b], ι_d]`, which does not
/// depend on `c` and `d`.
pub fn diam_low_family(a: usize, b: usize, c: usize, d: usize) -> Result<u64> {
    let _ = (c, d);
    if a < 2 || b < 2 {
        return Err(Error::Precondition(format!("low family needs a, b >= 2 (got a={a}, b={b})")));
    }
    Ok(choose2(a as u64) * choose2(b as u64))
}

/// The permutation `12[ι_c, 21[ι_a, ι_b], ι_d]`.
pub fn low_family_member(a: usize, b: usize, c: usize, d: usize) -> Permutation {
    let mut entries: Vec<usize> = (1..=c).collect();
    entries.extend((c + b + 1..=c + b + a).chain(c + 1..=c + b));
    entries.extend(c + a + b + 1..=c + a + b + d);
    Permutation::from_one_line(&entries).expect("valid by construction")
}

/// `(a, b, c, d)` if `π = 12[ι_c, 21[ι_a, ι_b], ι_d]` with `a, b ≥ 2`.
pub fn as_low_family(pi: &Permutation) -> Option<(usize, usize, usize, usize)> {
    let e = pi.entries();
    let n = e.len();
    let c = e.iter().enumerate().take_while(|&(i, &x)| x as usize == i + 1).count();
    let d = e.iter().enumerate().rev().take_while(|&(i, &x)| x as usize == i + 1).count();
    if c + d >= n {
        return None;
    }
    let middle = Permutation::standardize(&e[c..n - d]);
    let (alpha, beta) = middle
        .splits_21()
        .into_iter()
        .find(|(x, y)| x.is_identity() && y.is_identity())?;
    let (a, b) = (alpha.size(), beta.size());
    (a >= 2 && b >= 2).then_some((a, b, c, d))
}

/// `(α, b)` if `π = 21[α, ι_b]` with `α` non-empty and `b ≥ 1`.
pub fn as_21_iota(pi: &Permutation) -> Option<(Permutation, usize)> {
    pi.splits_21()
        .into_iter()
        .find(|(_, beta)| beta.is_identity())
        .map(|(alpha, beta)| (alpha, beta.size()))
}

/// Brute-force diameters of `G_π`, `C_π` and `B_π`.
pub fn brute_force(pi: &Permutation, word_cap: usize, vertex_cap: usize) -> Result<DiameterTriple> {
    let g = build_g_capped(pi, word_cap)?;
    let dg = g.diameter_capped(vertex_cap)?;
    let dc = g.contract(EdgeKind::Commutation).diameter_capped(vertex_cap)?;
    let db = g.contract(EdgeKind::LongBraid).diameter_capped(vertex_cap)?;
    Ok(DiameterTriple::new(dg as u64, dc as u64, db as u64))
}

/// One formula that applies to a permutation, with its prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaValue {
    pub name: String,
    pub exact: Option<DiameterTriple>,
    pub bounds: Option<DiameterBounds>,
    /// Some formulas only determine the diameter of `G`.
    pub g_only: Option<u64>,
}

/// Every formula that applies to `π`. Block diameters needed by the
/// inflation formulas are computed by brute force under the given caps.
pub fn applicable_formulas(pi: &Permutation, word_cap: usize, vertex_cap: usize) -> Result<Vec<FormulaValue>> {
    let mut out = Vec::new();
    let value = |name: String| FormulaValue {
        name,
        exact: None,
        bounds: None,
        g_only: None,
    };
    for (alpha, beta) in pi.splits_12() {
        let (da, db) = (brute_force(&alpha, word_cap, vertex_cap)?, brute_force(&beta, word_cap, vertex_cap)?);
        let mut v = value(format!("12[{alpha},{beta}]"));
        v.exact = Some(diam_12(da, db, alpha.length() as u64, beta.length() as u64));
        out.push(v);
    }
    if let Some((alpha, b)) = as_21_iota(pi) {
        let da = brute_force(&alpha, word_cap, vertex_cap)?;
        let (la, a) = (alpha.length() as u64, alpha.size() as u64);
        if b == 1 {
            let mut v = value(format!("21[{alpha},1]"));
            v.exact = Some(diam_21_single(da, la, a));
            out.push(v);
        } else {
            let mut v = value(format!("21[{alpha},i{b}]"));
            v.bounds = Some(bounds_21_iota(da, la, a, b as u64));
            out.push(v);
        }
    }
    if *pi == Permutation::longest(pi.size()) {
        let mut v = value(format!("delta{}", pi.size()));
        v.exact = Some(delta_recursion(pi.size()));
        out.push(v);
    }
    if let Ok(t) = diam_312_avoiding(pi) {
        let mut v = value("312-avoiding".into());
        v.exact = Some(t);
        out.push(v);
    }
    if let Ok(t) = diam_231_avoiding(pi) {
        let mut v = value("231-avoiding".into());
        v.exact = Some(t);
        out.push(v);
    }
    if let Some((a, b, c, d)) = as_low_family(pi) {
        let mut v = value(format!("12[i{c},21[i{a},i{b}],i{d}]"));
        v.g_only = Some(diam_low_family(a, b, c, d)?);
        out.push(v);
    }
    Ok(out)
}
