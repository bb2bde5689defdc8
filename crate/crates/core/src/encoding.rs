//! Encodings of reduced words of inflations `12[α, β]` and `21[α, β]` as
//! shuffles of words of `α` (Under letters), words of `β` (Over letters) and,
//! for 21-inflations, a ballot sequence (Plain letters).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, LabeledGraph, VertexLabel};
use crate::perm::Permutation;
use crate::word::{count_reduced_words, enumerate_capped, ReducedWord, DEFAULT_WORD_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EncodedLetter {
    Plain(u8),
    Under(u8),
    Over(u8),
}

use EncodedLetter::{Over, Plain, Under};

impl EncodedLetter {
    pub fn value(self) -> u8 {
        match self {
            Plain(j) | Under(j) | Over(j) => j,
        }
    }

    fn sigil(self) -> &'static str {
        match self {
            Plain(_) => "",
            Under(_) => "_",
            Over(_) => "^",
        }
    }
}

impl fmt::Display for EncodedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sigil(), self.value())
    }
}

/// A word over Plain `j`, Under `_j` and Over `^j` letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EncodedWord(pub Vec<EncodedLetter>);

impl EncodedWord {
    pub fn letters(&self) -> &[EncodedLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letters written without separators, e.g. `12_11122`; falls back to
    /// the spaced form when a value has more than one digit.
    pub fn compact(&self) -> String {
        if self.0.iter().all(|l| l.value() <= 9) {
            self.0.iter().map(ToString::to_string).collect()
        } else {
            self.to_string()
        }
    }

    fn plain_letters(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().filter_map(|l| match l {
            Plain(j) => Some(*j),
            _ => None,
        })
    }
}

impl fmt::Display for EncodedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl VertexLabel for EncodedWord {
    fn label(&self) -> String {
        self.compact()
    }
}

impl FromStr for EncodedWord {
    type Err = Error;

    /// Whitespace-separated letters (`"1 _2 ^1"`) or the compact form
    /// (`"1_2^1"`) with single-digit values. `"e"` is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(EncodedWord::default());
        }
        let parse_value = |t: &str| -> Result<u8> {
            match t.parse::<u8>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(Error::Parse(format!("bad encoded letter value '{t}'"))),
            }
        };
        let mut letters = Vec::new();
        if s.contains(char::is_whitespace) {
            for tok in s.split_whitespace() {
                letters.push(if let Some(rest) = tok.strip_prefix('_') {
                    Under(parse_value(rest)?)
                } else if let Some(rest) = tok.strip_prefix('^') {
                    Over(parse_value(rest)?)
                } else {
                    Plain(parse_value(tok)?)
                });
            }
        } else {
            let mut chars = s.chars();
            while let Some(c) = chars.next() {
                let (make, digit): (fn(u8) -> EncodedLetter, Option<char>) = match c {
                    '_' => (Under, chars.next()),
                    '^' => (Over, chars.next()),
                    _ => (Plain, Some(c)),
                };
                let d = digit.ok_or_else(|| Error::Parse("dangling sigil".into()))?;
                letters.push(make(parse_value(&d.to_string())?));
            }
        }
        Ok(EncodedWord(letters))
    }
}

/// All interleavings of `u` and `v` preserving the order within each.
pub fn shuffles<T: Clone>(u: &[T], v: &[T]) -> Vec<Vec<T>> {
    fn go<T: Clone>(u: &[T], v: &[T], cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if u.is_empty() && v.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((h, rest)) = u.split_first() {
            cur.push(h.clone());
            go(rest, v, cur, out);
            cur.pop();
        }
        if let Some((h, rest)) = v.split_first() {
            cur.push(h.clone());
            go(u, rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(u, v, &mut Vec::with_capacity(u.len() + v.len()), &mut out);
    out
}

/// Whether `x` is a ballot sequence: every prefix has `N_1 ≥ N_2 ≥ …`.
pub fn is_ballot(x: &[u8]) -> bool {
    let mut counts: Vec<usize> = Vec::new();
    for &j in x {
        let j = j as usize;
        if j == 0 {
            return false;
        }
        if counts.len() < j {
            counts.resize(j, 0);
        }
        counts[j - 1] += 1;
        if j > 1 && counts[j - 2] < counts[j - 1] {
            return false;
        }
    }
    true
}

/// `Ballot_{a,b}` in lexicographic order.
pub fn ballot_sequences(a: usize, b: usize) -> Vec<Vec<u8>> {
    fn go(a: usize, b: usize, counts: &mut [usize], cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == a * b {
            out.push(cur.clone());
            return;
        }
        for j in 0..a {
            if counts[j] < b && (j == 0 || counts[j - 1] > counts[j]) {
                counts[j] += 1;
                cur.push(j as u8 + 1);
                go(a, b, counts, cur, out);
                cur.pop();
                counts[j] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(a, b, &mut vec![0; a], &mut Vec::new(), &mut out);
    out
}

/// The bijection `f`: each Plain letter `j` becomes `b − N_j(prefix)`; Under
/// and Over letters are untouched. The Plain letters must form a ballot
/// sequence with at most `b` copies of each value.
pub fn f_map(w: &EncodedWord, b: usize) -> Result<EncodedWord> {
    let mut counts: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(w.len());
    for &l in &w.0 {
        match l {
            Plain(j) => {
                let j = j as usize;
                if counts.len() < j {
                    counts.resize(j, 0);
                }
                if counts[j - 1] >= b || (j > 1 && counts[j - 2] <= counts[j - 1]) {
                    return Err(Error::Precondition(format!("plain letters of {w} are not a ballot sequence")));
                }
                out.push(Plain((b - counts[j - 1]) as u8));
                counts[j - 1] += 1;
            }
            other => out.push(other),
        }
    }
    Ok(EncodedWord(out))
}

/// Inverse of [`f_map`]: Plain value `y_i` becomes `1 + N_{y_i}(prefix)`.
pub fn f_inverse(z: &EncodedWord) -> EncodedWord {
    let mut counts: HashMap<u8, u8> = HashMap::new();
    EncodedWord(
        z.0.iter()
            .map(|&l| match l {
                Plain(y) => {
                    let c = counts.entry(y).or_insert(0);
                    *c += 1;
                    Plain(*c)
                }
                other => other,
            })
            .collect(),
    )
}

/// Which inflation an [`Encoding`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Twelve,
    TwentyOne,
}

impl FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "12" => Ok(Form::Twelve),
            "21" => Ok(Form::TwentyOne),
            _ => Err(Error::Parse(format!("unknown inflation form '{s}', expected 12 or 21"))),
        }
    }
}

/// The encoding set `U_{α,β}` (form 12) or `V_{α,β}` (form 21) together with
/// its decoding map and move rules.
#[derive(Clone, Debug)]
pub struct Encoding {
    form: Form,
    alpha: Permutation,
    beta: Permutation,
}

impl Encoding {
    pub fn new(form: Form, alpha: Permutation, beta: Permutation) -> Result<Self> {
        if alpha.is_empty() || beta.is_empty() {
            return Err(Error::Precondition("inflation blocks must be non-empty".into()));
        }
        Ok(Encoding { form, alpha, beta })
    }

    pub fn twelve(alpha: Permutation, beta: Permutation) -> Result<Self> {
        Self::new(Form::Twelve, alpha, beta)
    }

    pub fn twenty_one(alpha: Permutation, beta: Permutation) -> Result<Self> {
        Self::new(Form::TwentyOne, alpha, beta)
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn alpha(&self) -> &Permutation {
        &self.alpha
    }

    pub fn beta(&self) -> &Permutation {
        &self.beta
    }

    fn a(&self) -> usize {
        self.alpha.size()
    }

    fn b(&self) -> usize {
        self.beta.size()
    }

    /// `12[α, β]` or `21[α, β]`.
    pub fn inflated(&self) -> Permutation {
        match self.form {
            Form::Twelve => Permutation::direct_sum(&self.alpha, &self.beta),
            Form::TwentyOne => Permutation::skew_sum(&self.alpha, &self.beta),
        }
    }

    /// All encoded words, sorted, with the default cap.
    pub fn words(&self) -> Result<Vec<EncodedWord>> {
        self.words_capped(DEFAULT_WORD_CAP)
    }

    /// All encoded words, sorted. Fails with `TooLarge` once more than `cap`
    /// words would be produced.
    pub fn words_capped(&self, cap: usize) -> Result<Vec<EncodedWord>> {
        let us = enumerate_capped(&self.alpha, cap)?;
        let vs = enumerate_capped(&self.beta, cap)?;
        let mut out = match self.form {
            Form::Twelve => {
                let (la, lb) = (self.alpha.length(), self.beta.length());
                let total = count_reduced_words(&self.alpha)
                    * count_reduced_words(&self.beta)
                    * binomial((la + lb) as u128, la as u128);
                if total > cap as u128 {
                    return Err(Error::TooLarge {
                        what: "size of the encoding set",
                        size: usize::try_from(total).unwrap_or(usize::MAX),
                        cap,
                    });
                }
                let mut out = Vec::with_capacity(total as usize);
                for u in &us {
                    let u: Vec<EncodedLetter> = u.letters().iter().map(|&j| Under(j)).collect();
                    for v in &vs {
                        let v: Vec<EncodedLetter> = v.letters().iter().map(|&j| Over(j)).collect();
                        out.extend(shuffles(&u, &v).into_iter().map(EncodedWord));
                    }
                }
                out
            }
            Form::TwentyOne => {
                let mut out = Vec::new();
                for u in &us {
                    for v in &vs {
                        restricted_shuffles(u.letters(), v.letters(), self.a(), self.b(), cap, &mut out)?;
                    }
                }
                out
            }
        };
        out.sort_unstable();
        Ok(out)
    }

    /// Membership test: the letters split into a word of `α`, a word of `β`
    /// and (form 21) a ballot sequence, subject to the prefix conditions.
    pub fn contains(&self, w: &EncodedWord) -> bool {
        let (a, b) = (self.a(), self.b());
        let mut under = Vec::new();
        let mut over = Vec::new();
        let mut n = vec![0usize; a + 1];
        let mut nz = vec![0usize; b + 1];
        for &l in &w.0 {
            match l {
                Under(j) => {
                    let j = j as usize;
                    if j == 0 || j >= a {
                        return false;
                    }
                    if self.form == Form::TwentyOne && n[j - 1] != n[j] {
                        return false;
                    }
                    under.push(j as u8);
                }
                Over(j) => {
                    let j = j as usize;
                    if j == 0 || j >= b {
                        return false;
                    }
                    if self.form == Form::TwentyOne && nz[j - 1] != nz[j] {
                        return false;
                    }
                    over.push(j as u8);
                }
                Plain(j) => {
                    let j = j as usize;
                    if self.form == Form::Twelve || j == 0 || j > a || n[j - 1] >= b {
                        return false;
                    }
                    if j > 1 && n[j - 2] <= n[j - 1] {
                        return false;
                    }
                    nz[b - n[j - 1] - 1] += 1;
                    n[j - 1] += 1;
                }
            }
        }
        if self.form == Form::TwentyOne && n[..a].iter().any(|&c| c != b) {
            return false;
        }
        let is_word_of = |letters: Vec<u8>, p: &Permutation| {
            letters.len() == p.length() && crate::word::apply_word(&letters, p.size()).is_ok_and(|q| q == *p)
        };
        is_word_of(under, &self.alpha) && is_word_of(over, &self.beta)
    }

    /// The reduced word of the inflation encoded by `w` (`η` or `ψ`).
    pub fn decode(&self, w: &EncodedWord) -> Result<ReducedWord> {
        match self.form {
            Form::Twelve => Ok(eta(w, self.a())),
            Form::TwentyOne => psi(w, self.b()),
        }
    }

    /// Kind of the move joining `w` and `w2`, if any. Both words are assumed
    /// to belong to the set.
    pub fn edge(&self, w: &EncodedWord, w2: &EncodedWord) -> Option<EdgeKind> {
        let (x, y) = (&w.0, &w2.0);
        if x.len() != y.len() {
            return None;
        }
        let first = (0..x.len()).find(|&i| x[i] != y[i])?;
        let last = (0..x.len()).rev().find(|&i| x[i] != y[i])?;
        match last - first {
            1 if x[first] == y[last] && x[last] == y[first] => {
                let holds = match self.form {
                    Form::Twelve => twelve_commutes(x[first], x[last]),
                    Form::TwentyOne => {
                        self.twenty_one_commutes(w, first) || self.twenty_one_commutes(w2, first)
                    }
                };
                holds.then_some(EdgeKind::Commutation)
            }
            // every braid-type move changes both ends of its window
            2 => self.braid_between(w, w2, first),
            _ => None,
        }
    }

    fn braid_between(&self, w: &EncodedWord, w2: &EncodedWord, i: usize) -> Option<EdgeKind> {
        let (x, y) = (&w.0[i..i + 3], &w2.0[i..i + 3]);
        if w.0[..i] != w2.0[..i] || w.0[i + 3..] != w2.0[i + 3..] {
            return None;
        }
        if pure_braid(x, y) {
            return Some(EdgeKind::LongBraid);
        }
        if self.form == Form::Twelve {
            return None;
        }
        // _p p (p+1) <-> p (p+1) _p
        let under_rule = |x: &[EncodedLetter], y: &[EncodedLetter]| match x {
            [Under(p), Plain(q), Plain(r)] => *q == *p && *r == *p + 1 && y == [Plain(*p), Plain(*p + 1), Under(*p)],
            _ => false,
        };
        if under_rule(x, y) || under_rule(y, x) {
            return Some(EdgeKind::LongBraid);
        }
        // in z: ^p (p+1) p <-> (p+1) p ^p
        let b = self.b();
        let (z, z2) = (f_map(w, b).ok()?, f_map(w2, b).ok()?);
        let (zx, zy) = (&z.0[i..i + 3], &z2.0[i..i + 3]);
        let over_rule = |x: &[EncodedLetter], y: &[EncodedLetter]| match x {
            [Over(p), Plain(q), Plain(r)] => *q == *p + 1 && *r == *p && y == [Plain(*p + 1), Plain(*p), Over(*p)],
            _ => false,
        };
        (over_rule(zx, zy) || over_rule(zy, zx)).then_some(EdgeKind::LongBraid)
    }

    // Commutation rules of form 21 for the pair at positions i, i+1 of w.
    fn twenty_one_commutes(&self, w: &EncodedWord, i: usize) -> bool {
        let (l, r) = (w.0[i], w.0[i + 1]);
        match (l, r) {
            (Under(p), Under(q)) | (Over(p), Over(q)) => p.abs_diff(q) > 1,
            (Under(_), Over(_)) | (Over(_), Under(_)) => true,
            (Plain(p), Plain(q)) => {
                if p > q {
                    true
                } else if p < q {
                    let prefix = &w.0[..i];
                    let count = |j: u8| prefix.iter().filter(|&&x| x == Plain(j)).count();
                    count(p) > count(q)
                } else {
                    false
                }
            }
            (Under(p), Plain(q)) | (Plain(q), Under(p)) => p.abs_diff(q) > 1 || p > q,
            (Over(p), Plain(_)) | (Plain(_), Over(p)) => {
                let Ok(z) = f_map(w, self.b()) else { return false };
                let q = match (z.0[i], z.0[i + 1]) {
                    (Plain(q), _) | (_, Plain(q)) => q,
                    _ => return false,
                };
                p.abs_diff(q) > 1 || q < p
            }
        }
    }

    /// Words reachable from `w` by one move, paired with the move kind.
    /// Candidates are generated locally and kept only if they belong to the
    /// set (as judged by `member`).
    fn moves_from(&self, w: &EncodedWord, member: impl Fn(&EncodedWord) -> bool) -> Vec<(EncodedWord, EdgeKind)> {
        let n = w.len();
        let mut out = Vec::new();
        for i in 0..n.saturating_sub(1) {
            if w.0[i] == w.0[i + 1] {
                continue;
            }
            let mut c = w.clone();
            c.0.swap(i, i + 1);
            if member(&c) {
                if let Some(k) = self.edge(w, &c) {
                    out.push((c, k));
                }
            }
        }
        for i in 0..n.saturating_sub(2) {
            let window = [w.0[i], w.0[i + 1], w.0[i + 2]];
            let mut candidates: Vec<[EncodedLetter; 3]> = Vec::with_capacity(3);
            if let Some(bab) = braid_image(&window) {
                candidates.push(bab);
            }
            candidates.push([window[1], window[2], window[0]]);
            candidates.push([window[2], window[0], window[1]]);
            for cand in candidates {
                if cand == window {
                    continue;
                }
                let mut c = w.clone();
                c.0[i..i + 3].copy_from_slice(&cand);
                if member(&c) && self.braid_between(w, &c, i).is_some() {
                    out.push((c, EdgeKind::LongBraid));
                }
            }
        }
        out
    }

    /// The graph on the encoding set with edges given by the move rules.
    pub fn graph(&self) -> Result<LabeledGraph<EncodedWord>> {
        self.graph_capped(DEFAULT_WORD_CAP)
    }

    pub fn graph_capped(&self, cap: usize) -> Result<LabeledGraph<EncodedWord>> {
        let words = self.words_capped(cap)?;
        let index: HashMap<EncodedWord, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut edges = Vec::new();
        for (id, w) in words.iter().enumerate() {
            for (c, kind) in self.moves_from(w, |c| index.contains_key(c)) {
                let other = index[&c];
                if (id as u32) < other {
                    edges.push((id as u32, other, kind));
                }
            }
        }
        LabeledGraph::from_edges(words, edges)
    }
}

fn twelve_commutes(l: EncodedLetter, r: EncodedLetter) -> bool {
    match (l, r) {
        (Under(p), Under(q)) | (Over(p), Over(q)) => p.abs_diff(q) > 1,
        (Under(_), Over(_)) | (Over(_), Under(_)) => true,
        _ => false,
    }
}

fn braid_image(x: &[EncodedLetter; 3]) -> Option<[EncodedLetter; 3]> {
    match *x {
        [Under(p), Under(q), Under(r)] if p == r && p.abs_diff(q) == 1 => Some([Under(q), Under(p), Under(q)]),
        [Over(p), Over(q), Over(r)] if p == r && p.abs_diff(q) == 1 => Some([Over(q), Over(p), Over(q)]),
        _ => None,
    }
}

fn pure_braid(x: &[EncodedLetter], y: &[EncodedLetter]) -> bool {
    let x: [EncodedLetter; 3] = [x[0], x[1], x[2]];
    braid_image(&x).is_some_and(|img| img == [y[0], y[1], y[2]])
}

// Depth-first construction of the restricted shuffles of a ballot sequence
// with u (Under) and v (Over).
fn restricted_shuffles(
    u: &[u8],
    v: &[u8],
    a: usize,
    b: usize,
    cap: usize,
    out: &mut Vec<EncodedWord>,
) -> Result<()> {
    struct State<'s> {
        u: &'s [u8],
        v: &'s [u8],
        a: usize,
        b: usize,
        n: Vec<usize>,
        nz: Vec<usize>,
        cur: Vec<EncodedLetter>,
    }
    fn go(s: &mut State<'_>, ui: usize, vi: usize, cap: usize, out: &mut Vec<EncodedWord>) -> Result<()> {
        if s.cur.len() == s.u.len() + s.v.len() + s.a * s.b {
            if out.len() >= cap {
                return Err(Error::TooLarge {
                    what: "size of the encoding set",
                    size: out.len() + 1,
                    cap,
                });
            }
            out.push(EncodedWord(s.cur.clone()));
            return Ok(());
        }
        for j in 0..s.a {
            if s.n[j] < s.b && (j == 0 || s.n[j - 1] > s.n[j]) {
                let zv = s.b - s.n[j] - 1;
                s.n[j] += 1;
                s.nz[zv] += 1;
                s.cur.push(Plain(j as u8 + 1));
                go(s, ui, vi, cap, out)?;
                s.cur.pop();
                s.nz[zv] -= 1;
                s.n[j] -= 1;
            }
        }
        if let Some(&j) = s.u.get(ui) {
            let j = j as usize;
            if s.n[j - 1] == s.n[j] {
                s.cur.push(Under(j as u8));
                go(s, ui + 1, vi, cap, out)?;
                s.cur.pop();
            }
        }
        if let Some(&j) = s.v.get(vi) {
            let j = j as usize;
            if s.nz[j - 1] == s.nz[j] {
                s.cur.push(Over(j as u8));
                go(s, ui, vi + 1, cap, out)?;
                s.cur.pop();
            }
        }
        Ok(())
    }
    let mut s = State {
        u,
        v,
        a,
        b,
        n: vec![0; a + 1],
        nz: vec![0; b + 1],
        cur: Vec::new(),
    };
    go(&mut s, 0, 0, cap, out)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `η`: Under `j` stays `j`, Over `j` becomes `j + a`.
pub fn eta(w: &EncodedWord, a: usize) -> ReducedWord {
    ReducedWord(
        w.0.iter()
            .map(|&l| match l {
                Under(j) | Plain(j) => j,
                Over(j) => j + a as u8,
            })
            .collect(),
    )
}

/// Pairs (Under, later Over).
pub fn shift(w: &EncodedWord) -> usize {
    let mut unders = 0;
    let mut total = 0;
    for l in &w.0 {
        match l {
            Under(_) => unders += 1,
            Over(_) => total += unders,
            Plain(_) => {}
        }
    }
    total
}

/// `ψ` for a 21-inflation whose second block has size `b`.
pub fn psi(w: &EncodedWord, b: usize) -> Result<ReducedWord> {
    let z = f_map(w, b)?;
    let mut n: Vec<usize> = Vec::new();
    let mut nz: Vec<usize> = vec![0; b + 2];
    let mut out = Vec::with_capacity(w.len());
    for (&l, &zl) in w.0.iter().zip(&z.0) {
        let count = |n: &Vec<usize>, j: u8| n.get(j as usize - 1).copied().unwrap_or(0);
        let r = match l {
            Plain(j) => {
                let r = j as usize + b - count(&n, j) - 1;
                if n.len() < j as usize {
                    n.resize(j as usize, 0);
                }
                n[j as usize - 1] += 1;
                if let Plain(y) = zl {
                    nz[y as usize] += 1;
                }
                r
            }
            Under(j) => j as usize + b - count(&n, j),
            Over(j) => {
                let j = j as usize;
                if j > b {
                    return Err(Error::LetterOutOfRange { letter: j, max: b.saturating_sub(1) });
                }
                j + nz[j]
            }
        };
        out.push(r as u8);
    }
    Ok(ReducedWord(out))
}

/// `(Cshift, Bshift, ballot)` of a word with Plain and Under letters.
pub fn stats_21(w: &EncodedWord) -> (usize, usize, usize) {
    let mut plain_counts: Vec<usize> = Vec::new();
    let mut plain_seen = 0usize;
    let (mut cshift, mut bshift, mut ballot) = (0, 0, 0);
    for &l in &w.0 {
        let count = |c: &Vec<usize>, j: usize| c.get(j).copied().unwrap_or(0);
        match l {
            Plain(k) => {
                let k = k as usize;
                ballot += plain_counts.iter().skip(k + 1).sum::<usize>();
                if plain_counts.len() <= k {
                    plain_counts.resize(k + 1, 0);
                }
                plain_counts[k] += 1;
                plain_seen += 1;
            }
            Under(k) => {
                let k = k as usize;
                let same = count(&plain_counts, k);
                let above = count(&plain_counts, k + 1);
                bshift += same;
                cshift += plain_seen - same - above;
            }
            Over(_) => {}
        }
    }
    (cshift, bshift, ballot)
}

/// Endpoint of a path built by [`path_to_normal_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathTarget {
    /// Under letters first, then `(12…a)^b`.
    UXtilde,
    /// `(12…a)^b` first, then the Under letters.
    XtildeU,
}

/// Builds an explicit path from `w ∈ V_{α,ι_b}` to `u x̃` or `x̃ u`, where
/// `x̃ = (12…a)^b`, as the list of words visited after each step together
/// with the kind of the step taken.
///
/// Under letters are moved one at a time (the first one for `UXtilde`, the
/// last one for `XtildeU`). Before each move the Plain letters it must cross
/// are rearranged into the column reading of the corresponding skew shape,
/// bringing letters forward left to right. The Under letter `_j` then crosses
/// every `j (j+1)` pair with one long braid step and every other letter with
/// one commutation step.
pub fn path_to_normal_form(
    w: &EncodedWord,
    a: usize,
    b: usize,
    target: PathTarget,
) -> Result<Vec<(EncodedWord, EdgeKind)>> {
    if w.0.iter().any(|l| matches!(l, Over(_))) {
        return Err(Error::Precondition("path construction needs a word without Over letters".into()));
    }
    let mut counts = vec![0usize; a];
    for j in w.plain_letters() {
        if j as usize > a {
            return Err(Error::LetterOutOfRange { letter: j as usize, max: a });
        }
        counts[j as usize - 1] += 1;
    }
    if counts.iter().any(|&c| c != b) || !is_ballot(&w.plain_letters().collect::<Vec<_>>()) {
        return Err(Error::Precondition(format!("plain letters of {w} are not in Ballot({a},{b})")));
    }
    let mut cur = w.0.clone();
    let mut steps = Vec::new();
    let full = vec![b; a];
    match target {
        PathTarget::UXtilde => {
            let mut placed = 0;
            while let Some(k) = (placed..cur.len()).find(|&k| matches!(cur[k], Under(_))) {
                let after = plain_counts(&cur[placed..k], a);
                let reading = column_reading(&vec![0; a], &after);
                normalize(&mut cur, placed, &reading, &mut steps);
                let Under(j) = cur[k] else { unreachable!() };
                let mut pos = k;
                while pos > placed {
                    if pos >= placed + 2 && cur[pos - 2] == Plain(j) && cur[pos - 1] == Plain(j + 1) {
                        cur[pos - 2..=pos].rotate_right(1);
                        pos -= 2;
                        steps.push((EncodedWord(cur.clone()), EdgeKind::LongBraid));
                    } else {
                        cur.swap(pos - 1, pos);
                        pos -= 1;
                        steps.push((EncodedWord(cur.clone()), EdgeKind::Commutation));
                    }
                }
                placed += 1;
            }
            let reading = column_reading(&vec![0; a], &full);
            normalize(&mut cur, placed, &reading, &mut steps);
        }
        PathTarget::XtildeU => {
            let mut end = cur.len();
            while let Some(k) = (0..end).rev().find(|&k| matches!(cur[k], Under(_))) {
                let before = plain_counts(&cur[..k], a);
                let reading = column_reading(&before, &full);
                normalize(&mut cur, k + 1, &reading, &mut steps);
                let Under(j) = cur[k] else { unreachable!() };
                let mut pos = k;
                while pos + 1 < end {
                    if pos + 2 < end && cur[pos + 1] == Plain(j) && cur[pos + 2] == Plain(j + 1) {
                        cur[pos..=pos + 2].rotate_left(1);
                        pos += 2;
                        steps.push((EncodedWord(cur.clone()), EdgeKind::LongBraid));
                    } else {
                        cur.swap(pos, pos + 1);
                        pos += 1;
                        steps.push((EncodedWord(cur.clone()), EdgeKind::Commutation));
                    }
                }
                end -= 1;
            }
            let reading = column_reading(&vec![0; a], &full);
            normalize(&mut cur, 0, &reading, &mut steps);
        }
    }
    Ok(steps)
}

fn plain_counts(letters: &[EncodedLetter], a: usize) -> Vec<usize> {
    let mut counts = vec![0; a];
    for l in letters {
        if let Plain(j) = l {
            counts[*j as usize - 1] += 1;
        }
    }
    counts
}

// Column by column, the rows r with before[r] < c <= after[r], increasing.
fn column_reading(before: &[usize], after: &[usize]) -> Vec<u8> {
    let width = after.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for c in 1..=width {
        for (r, (&lo, &hi)) in before.iter().zip(after).enumerate() {
            if lo < c && c <= hi {
                out.push(r as u8 + 1);
            }
        }
    }
    out
}

// Rearranges cur[start..start + target.len()] (all Plain) into `target` by
// adjacent swaps, fixing positions left to right.
fn normalize(cur: &mut [EncodedLetter], start: usize, target: &[u8], steps: &mut Vec<(EncodedWord, EdgeKind)>) {
    for (offset, &t) in target.iter().enumerate() {
        let p = start + offset;
        let q = (p..start + target.len())
            .find(|&q| cur[q] == Plain(t))
            .expect("segment is a rearrangement of the target");
        for s in (p..q).rev() {
            cur.swap(s, s + 1);
            steps.push((EncodedWord(cur.to_vec()), EdgeKind::Commutation));
        }
    }
}

/// A random element of `V_{α,ι_b}` containing the Under word `u`: letters
/// are appended one at a time, chosen uniformly among those that keep the
/// prefix valid. Some letter is always available, so the walk never stalls.
pub fn random_v_word<R: Rng + ?Sized>(u: &[u8], a: usize, b: usize, rng: &mut R) -> EncodedWord {
    let mut n = vec![0usize; a + 1];
    let mut ui = 0;
    let mut cur = Vec::with_capacity(u.len() + a * b);
    let mut options = Vec::with_capacity(a + 1);
    while cur.len() < u.len() + a * b {
        options.clear();
        for j in 0..a {
            if n[j] < b && (j == 0 || n[j - 1] > n[j]) {
                options.push(Plain(j as u8 + 1));
            }
        }
        if let Some(&j) = u.get(ui) {
            if n[j as usize - 1] == n[j as usize] {
                options.push(Under(j));
            }
        }
        let pick = options[rng.gen_range(0..options.len())];
        match pick {
            Plain(j) => n[j as usize - 1] += 1,
            _ => ui += 1,
        }
        cur.push(pick);
    }
    EncodedWord(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_g;
    use crate::word::enumerate;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn ew(s: &str) -> EncodedWord {
        s.parse().unwrap()
    }

    #[test]
    fn text_forms() {
        let w = ew("^1 _1 ^2 ^1");
        assert_eq!(w.to_string(), "^1 _1 ^2 ^1");
        assert_eq!(w.compact(), "^1_1^2^1");
        assert_eq!(ew("^1_1^2^1"), w);
        assert!("_".parse::<EncodedWord>().is_err());
        assert!("_0".parse::<EncodedWord>().is_err());
    }

    #[test]
    fn shuffle_examples() {
        let u = [Under(1)];
        let v = [Over(1), Over(2)];
        let s: Vec<String> = shuffles(&u, &v).into_iter().map(|x| EncodedWord(x).compact()).collect();
        assert_eq!(s, vec!["_1^1^2", "^1_1^2", "^1^2_1"]);
        assert_eq!(shuffles::<u8>(&[], &[3]), vec![vec![3]]);
        assert_eq!(shuffles(&[1, 2], &[3, 4]).len(), 6);
    }

    #[test]
    fn eta_and_shift() {
        let w = ew("^1 _1 ^2 ^1");
        assert_eq!(eta(&w, 2).to_string(), "3143");
        assert_eq!(shift(&w), 2);
        let e = Encoding::twelve(p("21"), p("321")).unwrap();
        assert!(e.contains(&w));
        assert_eq!(e.decode(&w).unwrap().to_string(), "3143");
    }

    #[test]
    fn twelve_set_for_figure() {
        let e = Encoding::twelve(p("2143"), p("312")).unwrap();
        let words = e.words().unwrap();
        assert_eq!(words.len(), 12);
        assert_eq!(Encoding::twelve(p("1"), p("1")).unwrap().words().unwrap(), vec![EncodedWord::default()]);
    }

    #[test]
    fn ballots() {
        assert!(is_ballot(&[1, 1, 2, 3, 2, 3]));
        assert!(!is_ballot(&[1, 2, 2]));
        assert_eq!(ballot_sequences(3, 2).len(), 5);
        assert_eq!(ballot_sequences(4, 0), vec![Vec::<u8>::new()]);
        assert!(ballot_sequences(3, 2).contains(&vec![1, 1, 2, 3, 2, 3]));
    }

    #[test]
    fn f_examples() {
        let x = EncodedWord([1, 1, 2, 3, 2, 3].map(Plain).to_vec());
        assert_eq!(f_map(&x, 2).unwrap().compact(), "212211");
        let w = ew("11^123_22_13");
        assert_eq!(f_map(&w, 2).unwrap().compact(), "21^122_21_11");
        assert_eq!(f_inverse(&f_map(&w, 2).unwrap()), w);
        assert_eq!(f_map(&ew("11"), 2).unwrap().compact(), "21");
        assert!(f_map(&ew("21"), 2).is_err());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&ew("_2_1^1112323"), 2).unwrap().to_string(), "431213423");
        assert_eq!(psi(&ew("1_21^1232_13"), 2).unwrap().to_string(), "241234213");
        let e = Encoding::twenty_one(p("312"), p("21")).unwrap();
        assert!(e.contains(&ew("_2_1^1112323")));
        assert!(e.contains(&ew("1_21^1232_13")));
        let words = e.words().unwrap();
        assert!(words.contains(&ew("_2_1^1112323")));
    }

    #[test]
    fn twenty_one_set_matches_reduced_words() {
        let e = Encoding::twenty_one(p("21"), p("123")).unwrap();
        let words = e.words().unwrap();
        assert_eq!(words.len(), 14);
        let mut images: Vec<ReducedWord> = words.iter().map(|w| e.decode(w).unwrap()).collect();
        images.sort();
        assert_eq!(images, enumerate(&p("54123")).unwrap());
        assert_eq!(Encoding::twenty_one(p("1"), p("1")).unwrap().words().unwrap(), vec![ew("1")]);
    }

    #[test]
    fn edge_rules_examples() {
        let e = Encoding::twelve(p("21"), p("321")).unwrap();
        assert_eq!(e.edge(&ew("_1^1^2"), &ew("^1_1^2")), Some(EdgeKind::Commutation));
        assert_eq!(e.edge(&ew("_1^1^2"), &ew("_1^1^2")), None);
        let e = Encoding::twenty_one(p("21"), p("123")).unwrap();
        assert_eq!(e.edge(&ew("12_11212"), &ew("1212_112")), Some(EdgeKind::LongBraid));
        assert_eq!(e.edge(&ew("12_11212"), &ew("_1121212")), Some(EdgeKind::LongBraid));
        assert_eq!(e.edge(&ew("12_11212"), &ew("12_11122")), Some(EdgeKind::Commutation));
    }

    fn assert_same_graph(e: &Encoding) {
        let h = e.graph().unwrap();
        let g = build_g(&e.inflated()).unwrap();
        assert_eq!(h.vertex_count(), g.vertex_count(), "{:?}", e);
        let image: Vec<u32> = h
            .vertices()
            .iter()
            .map(|w| g.id_of(&e.decode(w).unwrap()).expect("image is a reduced word"))
            .collect();
        let mut mapped: Vec<(u32, u32, EdgeKind)> = h
            .edges()
            .iter()
            .map(|x| {
                let (a, b) = (image[x.u as usize], image[x.v as usize]);
                (a.min(b), a.max(b), x.kind)
            })
            .collect();
        mapped.sort_unstable();
        let expected: Vec<(u32, u32, EdgeKind)> = g.edges().iter().map(|x| (x.u, x.v, x.kind)).collect();
        assert_eq!(mapped, expected, "{:?}", e);
    }

    #[test]
    fn encoded_graphs_match_word_graphs() {
        assert_same_graph(&Encoding::twelve(p("2143"), p("312")).unwrap());
        assert_same_graph(&Encoding::twelve(p("321"), p("21")).unwrap());
        assert_same_graph(&Encoding::twenty_one(p("21"), p("123")).unwrap());
        assert_same_graph(&Encoding::twenty_one(p("312"), p("21")).unwrap());
        assert_same_graph(&Encoding::twenty_one(p("21"), p("321")).unwrap());
        assert_same_graph(&Encoding::twenty_one(p("231"), p("12")).unwrap());
    }

    #[test]
    fn stats_examples() {
        assert_eq!(stats_21(&ew("_11123_22_13")), (3, 3, 1));
        // u x~ for α = 321, b = 2
        assert_eq!(stats_21(&ew("_1_2_1123123")), (0, 0, 3));
        // y~ u with y~ = 1^b 2^b 3^b
        assert_eq!(stats_21(&ew("112233_1_2_1")), (3 * 2, 3 * 2, 0));
    }

    fn check_path(w: &EncodedWord, alpha: &Permutation, b: usize, target: PathTarget) {
        let a = alpha.size();
        let e = Encoding::twenty_one(alpha.clone(), Permutation::identity(b)).unwrap();
        let steps = path_to_normal_form(w, a, b, target).unwrap();
        let mut prev = w.clone();
        for (next, kind) in &steps {
            assert!(e.contains(next), "{next} left the set");
            assert_eq!(e.edge(&prev, next), Some(*kind), "{prev} -> {next}");
            prev = next.clone();
        }
        let (cs, bs, bal) = stats_21(w);
        let pairs = (a * (a - 1) / 2) * (b * (b - 1) / 2);
        let l = alpha.length();
        let comm = steps.iter().filter(|s| s.1 == EdgeKind::Commutation).count();
        let braid = steps.len() - comm;
        match target {
            PathTarget::UXtilde => {
                assert_eq!((comm, braid), (cs + pairs - bal, bs), "{w}");
                assert_eq!(stats_21(&prev), (0, 0, pairs));
            }
            PathTarget::XtildeU => {
                assert_eq!((comm, braid), (l * b * (a - 2) + pairs - bal - cs, l * b - bs), "{w}");
            }
        }
    }

    #[test]
    fn path_example() {
        let w = ew("_11123_22_13");
        let steps = path_to_normal_form(&w, 3, 2, PathTarget::UXtilde).unwrap();
        let comm = steps.iter().filter(|s| s.1 == EdgeKind::Commutation).count();
        assert_eq!((comm, steps.len() - comm), (5, 3));
        check_path(&w, &p("321"), 2, PathTarget::UXtilde);
        check_path(&w, &p("321"), 2, PathTarget::XtildeU);
        let done = ew("_1_2_1123123");
        assert!(path_to_normal_form(&done, 3, 2, PathTarget::UXtilde).unwrap().is_empty());
    }

    #[test]
    fn paths_over_whole_sets() {
        for (alpha, b) in [("321", 2), ("21", 3), ("231", 2), ("4321", 1), ("2143", 2)] {
            let alpha = p(alpha);
            let e = Encoding::twenty_one(alpha.clone(), Permutation::identity(b)).unwrap();
            for w in e.words().unwrap() {
                check_path(&w, &alpha, b, PathTarget::UXtilde);
                check_path(&w, &alpha, b, PathTarget::XtildeU);
            }
        }
    }

    #[test]
    fn random_words_are_members() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let alpha = p("4132");
        let e = Encoding::twenty_one(alpha.clone(), Permutation::identity(3)).unwrap();
        for u in enumerate(&alpha).unwrap() {
            let w = random_v_word(u.letters(), 4, 3, &mut rng);
            assert!(e.contains(&w), "{w}");
        }
    }
}
