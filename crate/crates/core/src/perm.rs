//! Permutations in one-line notation, inversions, pattern containment,
//! inflations, the 312/231 block decompositions and the three dihedral
//! symmetries used on reduced-word graphs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported permutation size. Generator indices are stored as `u8`,
/// so `n - 1` must fit in one byte.
pub const MAX_SIZE: usize = 255;

/// A permutation of `1..=n` in one-line notation. The empty permutation is a
/// legal value of size 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    entries: Vec<u8>,
}

/// An inversion `(i, j)` with `i < j` and `π_i > π_j`, using 1-based positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inversion {
    pub i: usize,
    pub j: usize,
}

impl Inversion {
    pub fn is_disjoint(&self, other: &Inversion) -> bool {
        self.i != other.i && self.i != other.j && self.j != other.i && self.j != other.j
    }
}

/// The three symmetries of the square that act on reduced-word graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    /// Rotation by 180 degrees: `σ_i = n - π_{n+1-i} + 1`.
    R180,
    /// Reflection in the main diagonal: `σ = π⁻¹`.
    R1,
    /// Reflection in the anti-diagonal: `σ = (r180(π))⁻¹`.
    RM1,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::R180, Symmetry::R1, Symmetry::RM1];

    /// Image of a reduced word of a permutation of size `n` under the
    /// matching bijection on reduced words.
    pub fn map_word(self, letters: &[u8], n: usize) -> Vec<u8> {
        let n = n as u8;
        match self {
            Symmetry::R180 => letters.iter().map(|&r| n - r).collect(),
            Symmetry::R1 => letters.iter().rev().copied().collect(),
            Symmetry::RM1 => letters.iter().rev().map(|&r| n - r).collect(),
        }
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r180" => Ok(Symmetry::R180),
            "r1" => Ok(Symmetry::R1),
            "rm1" | "r-1" => Ok(Symmetry::RM1),
            _ => Err(Error::Parse(format!("unknown symmetry '{s}'"))),
        }
    }
}

impl Permutation {
    /// Builds a permutation from one-line notation, checking that the
    /// sequence is a rearrangement of `1..=n`.
    pub fn from_one_line<T>(seq: &[T]) -> Result<Self>
    where
        T: Copy + TryInto<usize>,
    {
        let n = seq.len();
        if n > MAX_SIZE {
            return Err(Error::TooLarge {
                what: "permutation size",
                size: n,
                cap: MAX_SIZE,
            });
        }
        let mut seen = vec![false; n + 1];
        let mut entries = Vec::with_capacity(n);
        for &x in seq {
            let v: usize = x.try_into().map_err(|_| Error::InvalidPermutation {
                reason: "entry is not a natural number".into(),
            })?;
            if v == 0 {
                return Err(Error::InvalidPermutation {
                    reason: "entries start at 1; found 0".into(),
                });
            }
            if v > n {
                return Err(Error::InvalidPermutation {
                    reason: format!("entry {v} exceeds size {n} (gap in values)"),
                });
            }
            if seen[v] {
                return Err(Error::DuplicateEntry(v));
            }
            seen[v] = true;
            entries.push(v as u8);
        }
        Ok(Permutation { entries })
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<u8>) -> Self {
        debug_assert!(Permutation::from_one_line(&entries).is_ok());
        Permutation { entries }
    }

    pub fn empty() -> Self {
        Permutation::default()
    }

    /// The identity `12…n`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            entries: (1..=n as u8).collect(),
        }
    }

    /// The longest element `n…21`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            entries: (1..=n as u8).rev().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// All inversions `(i, j)`, 1-based, in lexicographic order.
    pub fn inversions(&self) -> Vec<Inversion> {
        let e = &self.entries;
        let mut out = Vec::new();
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    out.push(Inversion { i: i + 1, j: j + 1 });
                }
            }
        }
        out
    }

    /// Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let e = &self.entries;
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Whether some subsequence of `self` is order-isomorphic to `pattern`.
    /// Brute-force search over increasing position tuples with pruning.
    pub fn contains_pattern(&self, pattern: &Permutation) -> bool {
        let k = pattern.size();
        if k == 0 {
            return true;
        }
        if k > self.size() {
            return false;
        }
        let mut chosen = Vec::with_capacity(k);
        self.pattern_search(pattern, 0, &mut chosen)
    }

    fn pattern_search(&self, pattern: &Permutation, start: usize, chosen: &mut Vec<u8>) -> bool {
        let k = pattern.size();
        let depth = chosen.len();
        if depth == k {
            return true;
        }
        let p = &pattern.entries;
        for pos in start..=self.size() - (k - depth) {
            let v = self.entries[pos];
            // the new value must sit in the same relative order as the pattern
            let consistent = (0..depth).all(|t| (chosen[t] < v) == (p[t] < p[depth]));
            if consistent {
                chosen.push(v);
                if self.pattern_search(pattern, pos + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains_pattern(pattern)
    }

    /// Number of index triples `i < j < k` with `π_i > π_j > π_k`.
    pub fn count_321(&self) -> usize {
        let e = &self.entries;
        let n = e.len();
        let mut count = 0;
        for j in 0..n {
            let left = e[..j].iter().filter(|&&x| x > e[j]).count();
            let right = e[j + 1..].iter().filter(|&&x| x < e[j]).count();
            count += left * right;
        }
        count
    }

    /// Number of unordered pairs of inversions sharing no position.
    pub fn count_disjoint_inversion_pairs(&self) -> usize {
        let inv = self.inversions();
        let mut count = 0;
        for a in 0..inv.len() {
            for b in a + 1..inv.len() {
                if inv[a].is_disjoint(&inv[b]) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.size()];
        for (i, &v) in self.entries.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation { entries: inv }
    }

    pub fn rotate180(&self) -> Permutation {
        let n = self.size() as u8;
        Permutation {
            entries: self.entries.iter().rev().map(|&v| n - v + 1).collect(),
        }
    }

    pub fn symmetry(&self, op: Symmetry) -> Permutation {
        match op {
            Symmetry::R180 => self.rotate180(),
            Symmetry::R1 => self.inverse(),
            Symmetry::RM1 => self.rotate180().inverse(),
        }
    }

    /// Standardization: the permutation order-isomorphic to `values`.
    pub fn standardize(values: &[u8]) -> Permutation {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut entries = vec![0u8; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            entries[i] = (rank + 1) as u8;
        }
        Permutation { entries }
    }

    /// The inflation `σ[π₁, …, π_k]`: entry `σ_i` is replaced by a block
    /// order-isomorphic to `blocks[i]`.
    pub fn inflate(&self, blocks: &[Permutation]) -> Result<Permutation> {
        if blocks.len() != self.size() {
            return Err(Error::LengthMismatch {
                expected: self.size(),
                found: blocks.len(),
            });
        }
        let total: usize = blocks.iter().map(Permutation::size).sum();
        if total > MAX_SIZE {
            return Err(Error::TooLarge {
                what: "permutation size",
                size: total,
                cap: MAX_SIZE,
            });
        }
        // offset of the block replacing value v = total size of blocks for smaller values
        let mut offset_by_value = vec![0usize; self.size() + 1];
        let mut by_value: Vec<usize> = (0..self.size()).collect();
        by_value.sort_by_key(|&i| self.entries[i]);
        let mut acc = 0;
        for &i in &by_value {
            offset_by_value[self.entries[i] as usize] = acc;
            acc += blocks[i].size();
        }
        let mut entries = Vec::with_capacity(total);
        for (i, block) in blocks.iter().enumerate() {
            let off = offset_by_value[self.entries[i] as usize];
            entries.extend(block.entries.iter().map(|&v| (v as usize + off) as u8));
        }
        Ok(Permutation { entries })
    }

    /// `12[α, β]`.
    pub fn direct_sum(alpha: &Permutation, beta: &Permutation) -> Permutation {
        Permutation::identity(2)
            .inflate(&[alpha.clone(), beta.clone()])
            .expect("two blocks")
    }

    /// `21[α, β]`.
    pub fn skew_sum(alpha: &Permutation, beta: &Permutation) -> Permutation {
        Permutation::longest(2)
            .inflate(&[alpha.clone(), beta.clone()])
            .expect("two blocks")
    }

    /// Writes a 312-avoider as `12[21[π′, 1], π″]` where `π_m = 1`.
    pub fn decompose_312(&self) -> Result<(Permutation, Permutation, usize)> {
        if self.is_empty() {
            return Err(Error::Precondition("decomposition needs a non-empty permutation".into()));
        }
        if self.contains_pattern(&pattern("312")) {
            return Err(Error::Contains312);
        }
        let m = self.entries.iter().position(|&v| v == 1).unwrap() + 1;
        let left = Permutation::standardize(&self.entries[..m - 1]);
        let right = Permutation::standardize(&self.entries[m..]);
        Ok((left, right, m))
    }

    /// Writes a 231-avoider as `12[π′, 21[1, π″]]` where `π_m = n`.
    pub fn decompose_231(&self) -> Result<(Permutation, Permutation, usize)> {
        if self.is_empty() {
            return Err(Error::Precondition("decomposition needs a non-empty permutation".into()));
        }
        if self.contains_pattern(&pattern("231")) {
            return Err(Error::Contains231);
        }
        let n = self.size() as u8;
        let m = self.entries.iter().position(|&v| v == n).unwrap() + 1;
        let left = Permutation::standardize(&self.entries[..m - 1]);
        let right = Permutation::standardize(&self.entries[m..]);
        Ok((left, right, m))
    }

    /// All ways of writing `self = 12[α, β]` with both blocks non-empty.
    pub fn splits_12(&self) -> Vec<(Permutation, Permutation)> {
        let n = self.size();
        let mut out = Vec::new();
        let mut max_prefix = 0;
        for k in 1..n {
            max_prefix = max_prefix.max(self.entries[k - 1] as usize);
            if max_prefix == k {
                out.push((
                    Permutation::standardize(&self.entries[..k]),
                    Permutation::standardize(&self.entries[k..]),
                ));
            }
        }
        out
    }

    /// All ways of writing `self = 21[α, β]` with both blocks non-empty.
    pub fn splits_21(&self) -> Vec<(Permutation, Permutation)> {
        let n = self.size();
        let mut out = Vec::new();
        let mut min_prefix = usize::MAX;
        for k in 1..n {
            min_prefix = min_prefix.min(self.entries[k - 1] as usize);
            if min_prefix == n - k + 1 {
                out.push((
                    Permutation::standardize(&self.entries[..k]),
                    Permutation::standardize(&self.entries[k..]),
                ));
            }
        }
        out
    }

    /// Every permutation of size `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=n as u8).collect();
        loop {
            out.push(Permutation { entries: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// Parses a small literal pattern such as `"312"`. Panics on invalid input;
/// meant for constants.
pub fn pattern(s: &str) -> Permutation {
    s.parse().expect("valid pattern literal")
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() <= 9 {
            for v in &self.entries {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(u8::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts a digit string for sizes up to 9 (`"4231"`) or comma-separated
    /// naturals for any size (`"10,2,3,4,5,6,7,8,9,1"`). `"e"` and the empty
    /// string denote the empty permutation.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Permutation::empty());
        }
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("'{t}' is not a natural number")))
                })
                .collect::<Result<_>>()?
        } else {
            if s.len() > 9 {
                return Err(Error::Parse(format!(
                    "'{s}': permutations of size above 9 must be comma-separated"
                )));
            }
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("'{c}' is not a digit")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::from_one_line(&values)
    }
}

/// An inflation expression such as `12[i1,21[i2,i2]]`.
///
/// Grammar: `expr := perm | perm '[' expr (',' expr)* ']' | 'i' k | 'e'`,
/// where `i k` is the identity of size `k` and `e` the empty permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InflationExpr {
    Leaf(Permutation),
    Inflate(Permutation, Vec<InflationExpr>),
}

impl InflationExpr {
    pub fn eval(&self) -> Result<Permutation> {
        match self {
            InflationExpr::Leaf(p) => Ok(p.clone()),
            InflationExpr::Inflate(sigma, blocks) => {
                let blocks = blocks.iter().map(InflationExpr::eval).collect::<Result<Vec<_>>>()?;
                sigma.inflate(&blocks)
            }
        }
    }
}

impl FromStr for InflationExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let expr = parse_expr(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in inflation expression '{s}'")));
        }
        Ok(expr)
    }
}

fn parse_expr(chars: &[char], pos: &mut usize) -> Result<InflationExpr> {
    let start = *pos;
    match chars.get(*pos) {
        Some('e') | Some('ε') => {
            *pos += 1;
            Ok(InflationExpr::Leaf(Permutation::empty()))
        }
        Some('i') | Some('ι') => {
            *pos += 1;
            let digits_start = *pos;
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let k: usize = chars[digits_start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse("identity needs a size, as in 'i3'".into()))?;
            Ok(InflationExpr::Leaf(Permutation::identity(k)))
        }
        Some(c) if c.is_ascii_digit() => {
            while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                *pos += 1;
            }
            let sigma: Permutation = chars[start..*pos].iter().collect::<String>().parse()?;
            if chars.get(*pos) != Some(&'[') {
                return Ok(InflationExpr::Leaf(sigma));
            }
            *pos += 1;
            let mut blocks = vec![parse_expr(chars, pos)?];
            loop {
                match chars.get(*pos) {
                    Some(',') => {
                        *pos += 1;
                        blocks.push(parse_expr(chars, pos)?);
                    }
                    Some(']') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(Error::Parse("unterminated inflation expression".into())),
                }
            }
            Ok(InflationExpr::Inflate(sigma, blocks))
        }
        _ => Err(Error::Parse(format!("unexpected input at offset {start} in inflation expression"))),
    }
}
