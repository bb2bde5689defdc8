use std::collections::HashSet;

use proptest::prelude::*;
use rwgraph::encoding::{
    ballot_sequences, f_inverse, f_map, shift, stats_21, EncodedLetter, EncodedWord, Encoding,
};
use rwgraph::formulas::{bounds_21_iota, brute_force, diam_12, diam_21_single, diam_231_avoiding, diam_312_avoiding};
use rwgraph::perm::pattern;
use rwgraph::stats::l2;
use rwgraph::{apply_word, build_g, enumerate, EdgeKind, LabeledGraph, Permutation, Symmetry};

const WORDS: usize = 500_000;
const VERTICES: usize = 200_000;

fn perm_of_size(lo: usize, hi: usize) -> impl Strategy<Value = Permutation> {
    (lo..=hi).prop_flat_map(|n| {
        Just((1..=n as u8).collect::<Vec<u8>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_one_line(&v).unwrap())
    })
}

fn brute(p: &Permutation) -> rwgraph::formulas::DiameterTriple {
    brute_force(p, WORDS, VERTICES).unwrap()
}

fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Edges of the encoded graph relabelled by decoded words, as a sorted listing.
fn decoded_listing(enc: &Encoding) -> String {
    let h = enc.graph().unwrap();
    let labels = h.vertices().iter().map(|w| enc.decode(w).unwrap()).collect();
    LabeledGraph::from_edges(labels, h.edges().iter().map(|e| (e.u, e.v, e.kind)))
        .unwrap()
        .to_listing()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_have_inversion_length(pi in perm_of_size(0, 6)) {
        let n = pi.size();
        for w in enumerate(&pi).unwrap() {
            prop_assert_eq!(w.len(), pi.inversions().len());
            prop_assert_eq!(apply_word(w.letters(), n).unwrap(), pi.clone());
        }
    }

    #[test]
    fn avoider_decompositions_reinflate(pi in perm_of_size(1, 7)) {
        if let Ok((left, right, _)) = pi.decompose_312() {
            let inner = pattern("21").inflate(&[left, Permutation::identity(1)]).unwrap();
            prop_assert_eq!(pattern("12").inflate(&[inner, right]).unwrap(), pi.clone());
        }
        if let Ok((left, right, _)) = pi.decompose_231() {
            let inner = pattern("21").inflate(&[Permutation::identity(1), right]).unwrap();
            prop_assert_eq!(pattern("12").inflate(&[left, inner]).unwrap(), pi);
        }
    }

    #[test]
    fn symmetries_are_involutions(pi in perm_of_size(0, 8)) {
        for op in Symmetry::ALL {
            prop_assert_eq!(pi.symmetry(op).symmetry(op), pi.clone());
        }
        prop_assert_eq!(pi.symmetry(Symmetry::RM1), pi.symmetry(Symmetry::R1).symmetry(Symmetry::R180));
        prop_assert_eq!(pi.count_321(), pi.symmetry(Symmetry::R180).count_321());
        prop_assert_eq!(l2(&pi), l2(&pi.symmetry(Symmetry::R180)));
    }

    #[test]
    fn word_sets_closed_under_moves(pi in perm_of_size(0, 6)) {
        let words = enumerate(&pi).unwrap();
        let set: HashSet<Vec<u8>> = words.iter().map(|w| w.letters().to_vec()).collect();
        for w in &words {
            let l = w.letters();
            for i in 0..l.len().saturating_sub(1) {
                if l[i].abs_diff(l[i + 1]) > 1 {
                    let mut m = l.to_vec();
                    m.swap(i, i + 1);
                    prop_assert!(set.contains(&m));
                }
                if i + 2 < l.len() && l[i] == l[i + 2] && l[i].abs_diff(l[i + 1]) == 1 {
                    let mut m = l.to_vec();
                    m[i] = l[i + 1];
                    m[i + 1] = l[i];
                    m[i + 2] = l[i + 1];
                    prop_assert!(set.contains(&m));
                }
            }
        }
        for op in Symmetry::ALL {
            prop_assert_eq!(enumerate(&pi.symmetry(op)).unwrap().len(), words.len());
        }
    }

    #[test]
    fn graph_structure(pi in perm_of_size(0, 5)) {
        let g = build_g(&pi).unwrap();
        prop_assert!(g.kind_parity_consistent());
        prop_assert_eq!(g.loops_after_contracting(EdgeKind::Commutation), 0);
        prop_assert_eq!(g.loops_after_contracting(EdgeKind::LongBraid), 0);
        let c = g.contract(EdgeKind::Commutation);
        let b = g.contract(EdgeKind::LongBraid);
        prop_assert!(c.is_bipartite());
        let invariants = |g: &rwgraph::WordGraph| {
            let c = g.contract(EdgeKind::Commutation);
            let b = g.contract(EdgeKind::LongBraid);
            (
                [g.vertex_count(), g.edge_count_of(EdgeKind::Commutation), g.edge_count_of(EdgeKind::LongBraid)],
                [c.vertex_count(), c.edge_count()],
                [b.vertex_count(), b.edge_count()],
                [g.diameter().unwrap(), c.diameter().unwrap(), b.diameter().unwrap()],
            )
        };
        let own = invariants(&g);
        prop_assert_eq!(own.1, [c.vertex_count(), c.edge_count()]);
        prop_assert_eq!(own.2, [b.vertex_count(), b.edge_count()]);
        for op in Symmetry::ALL {
            prop_assert_eq!(invariants(&build_g(&pi.symmetry(op)).unwrap()), own);
        }
    }

    #[test]
    fn twelve_encoding_matches_graph(alpha in perm_of_size(1, 3), beta in perm_of_size(1, 3)) {
        let enc = Encoding::twelve(alpha.clone(), beta.clone()).unwrap();
        let pi = enc.inflated();
        prop_assert_eq!(decoded_listing(&enc), build_g(&pi).unwrap().to_listing());
        let h = enc.graph().unwrap();
        for e in h.edges() {
            let (w, v) = (h.vertex(e.u), h.vertex(e.v));
            let mixed = w.letters().iter().zip(v.letters()).any(|(x, y)| {
                matches!((x, y), (EncodedLetter::Under(_), EncodedLetter::Over(_)))
            });
            let delta = shift(w).abs_diff(shift(v));
            prop_assert_eq!(delta, usize::from(mixed), "{} -- {}", w, v);
        }
    }

    #[test]
    fn twenty_one_encoding_matches_graph(alpha in perm_of_size(1, 3), beta in perm_of_size(1, 3)) {
        let enc = Encoding::twenty_one(alpha, beta).unwrap();
        prop_assert_eq!(decoded_listing(&enc), build_g(&enc.inflated()).unwrap().to_listing());
    }

    #[test]
    fn twenty_one_stat_changes(alpha in perm_of_size(2, 4), b in 1usize..=3) {
        prop_assume!(alpha.size() + b <= 6);
        let enc = Encoding::twenty_one(alpha, Permutation::identity(b)).unwrap();
        let h = enc.graph().unwrap();
        for e in h.edges() {
            let (w, v) = (h.vertex(e.u), h.vertex(e.v));
            let diff: Vec<usize> = (0..w.len()).filter(|&i| w.letters()[i] != v.letters()[i]).collect();
            let window = &w.letters()[diff[0]..=diff[diff.len() - 1]];
            let unders = window.iter().filter(|l| matches!(l, EncodedLetter::Under(_))).count();
            let (sw, sv) = (stats_21(w), stats_21(v));
            let d = (sw.0.abs_diff(sv.0), sw.1.abs_diff(sv.1), sw.2.abs_diff(sv.2));
            let expected = match (e.kind, unders, window.len()) {
                (_, n, len) if n == len => (0, 0, 0),
                (EdgeKind::Commutation, 0, _) => (0, 0, 1),
                (EdgeKind::Commutation, _, _) => (1, 0, 0),
                (EdgeKind::LongBraid, _, _) => (0, 1, 0),
            };
            prop_assert_eq!(d, expected, "{} -- {}", w, v);
        }
    }

    #[test]
    fn twelve_formula_matches(alpha in perm_of_size(1, 3), beta in perm_of_size(1, 3)) {
        let pi = Permutation::direct_sum(&alpha, &beta);
        let (da, db) = (brute(&alpha), brute(&beta));
        let d = diam_12(da, db, alpha.length() as u64, beta.length() as u64);
        prop_assert_eq!(d, brute(&pi));
        prop_assert!(d.g >= da.g.max(db.g) && d.b >= da.b.max(db.b) && d.c >= da.c.max(db.c));
    }

    #[test]
    fn twenty_one_formulas_match(alpha in perm_of_size(1, 4), b in 1usize..=3) {
        prop_assume!(alpha.size() + b <= 6);
        let da = brute(&alpha);
        let (la, a) = (alpha.length() as u64, alpha.size() as u64);
        let pi = Permutation::skew_sum(&alpha, &Permutation::identity(b));
        let d = brute(&pi);
        if b == 1 {
            prop_assert_eq!(diam_21_single(da, la, a), d);
        }
        let bounds = bounds_21_iota(da, la, a, b as u64);
        prop_assert!(bounds.contains(&d));
        prop_assert_eq!(bounds.c, d.c);
        prop_assert!(bounds.g_lower >= da.g && bounds.c >= da.c);
    }

    #[test]
    fn avoider_recursions_match(pi in perm_of_size(1, 6)) {
        if let Ok(t) = diam_312_avoiding(&pi) {
            prop_assert_eq!(t, brute(&pi));
            prop_assert_eq!(t.g, l2(&pi).l2);
        }
        if let Ok(t) = diam_231_avoiding(&pi) {
            prop_assert_eq!(t, brute(&pi));
            prop_assert_eq!(t.g, l2(&pi).l2);
        }
    }

    #[test]
    fn l2_inflation_identities(alpha in perm_of_size(0, 4), beta in perm_of_size(0, 4), b in 1usize..=4) {
        let sum = Permutation::direct_sum(&alpha, &beta);
        let (la, lb) = (alpha.length() as u64, beta.length() as u64);
        prop_assert_eq!(l2(&sum).l2, l2(&alpha).l2 + l2(&beta).l2 + la * lb);
        let a = alpha.size() as u64;
        let skew = Permutation::skew_sum(&alpha, &Permutation::identity(b));
        let b = b as u64;
        prop_assert_eq!(
            l2(&skew).l2,
            l2(&alpha).l2 + la * a.saturating_sub(1) * b + 2 * binom2(a) * binom2(b)
        );
    }
}

#[test]
fn ballot_map_is_a_bijection() {
    for a in 1..=4 {
        for b in 1..=3 {
            let xs = ballot_sequences(a, b);
            let mut images = HashSet::new();
            for x in &xs {
                let w = EncodedWord(x.iter().map(|&j| EncodedLetter::Plain(j)).collect());
                let z = f_map(&w, b).unwrap();
                prop_assert_reverse_ballot(&z, b);
                assert_eq!(f_inverse(&z), w);
                assert!(images.insert(z));
            }
        }
    }
}

fn prop_assert_reverse_ballot(z: &EncodedWord, b: usize) {
    let mut counts = vec![0usize; b + 1];
    for l in z.letters() {
        let EncodedLetter::Plain(y) = *l else { panic!("plain letters only") };
        counts[y as usize] += 1;
        assert!((1..b).all(|j| counts[j] <= counts[j + 1]), "{z}");
    }
}
