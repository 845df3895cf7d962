use std::collections::{BTreeSet, VecDeque};

use freetwist::stallings::{build_subgroup_graph, find_z_conjugator, StallingsGraph};
use freetwist::words::{alphabet, random_word, seeded_rng, words_up_to};
use freetwist::Word;
use rand::Rng;

/// Elements of `⟨gens⟩` reachable through products whose every partial
/// product stays within `cap` letters.
fn closure(rank: u32, gens: &[Word], cap: usize) -> BTreeSet<Word> {
    let mut moves: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    moves.retain(|g| !g.is_identity());
    let start = Word::identity(rank);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in &moves {
            let y = x.multiply(g).unwrap();
            if y.len() <= cap && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn agrees_with_closure(rank: u32, gens: &[Word], maxlen: usize) {
    let graph = build_subgroup_graph(rank, gens);
    let longest = gens.iter().map(Word::len).max().unwrap_or(0);
    let members = closure(rank, gens, maxlen + 2 * longest);
    for x in words_up_to(rank, maxlen) {
        assert_eq!(graph.is_member(&x), members.contains(&x), "gens {gens:?} word {x}");
    }
}

fn assert_folded(g: &StallingsGraph) {
    assert!(g.is_folded());
    for v in g.vertices() {
        for x in alphabet(g.rank()) {
            assert!(g.targets(v, x).len() <= 1);
        }
    }
}

#[test]
fn small_examples() {
    let gens = [Word::parse("aa", 2).unwrap(), Word::parse("ab", 2).unwrap()];
    let g = build_subgroup_graph(2, &gens);
    assert_eq!(g.vertex_count(), 2);
    agrees_with_closure(2, &gens, 6);
    let g = build_subgroup_graph(3, &[Word::parse("ab", 3).unwrap(), Word::parse("ac", 3).unwrap()]);
    assert_folded(&g);
    assert_eq!(g.edge_count(), 3);
}

#[test]
fn random_subgroups_agree_with_closure() {
    let mut rng = seeded_rng(31);
    for _ in 0..30 {
        let rank = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Word> = (0..k).map(|_| random_word(rank, 4, &mut rng)).collect();
        agrees_with_closure(rank, &gens, 5);
        assert_folded(&build_subgroup_graph(rank, &gens));
    }
}

#[test]
fn membership_ignores_presentation() {
    let mut rng = seeded_rng(32);
    for _ in 0..50 {
        let h1 = random_word(2, 4, &mut rng);
        let h2 = random_word(2, 4, &mut rng);
        let a = build_subgroup_graph(2, &[h1.clone(), h2.clone()]);
        let b = build_subgroup_graph(2, &[h1.multiply(&h2).unwrap(), h2.clone()]);
        for x in words_up_to(2, 6) {
            assert_eq!(a.is_member(&x), b.is_member(&x));
        }
    }
}

/// Labels of closed reduced paths at the base vertex, up to `maxlen`.
fn loop_labels(g: &StallingsGraph, maxlen: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(g.base(), Vec::<i32>::new())];
    while let Some((v, path)) = stack.pop() {
        if v == g.base() {
            out.insert(Word::reduce(&path, g.rank()).unwrap());
        }
        if path.len() == maxlen {
            continue;
        }
        for x in alphabet(g.rank()) {
            if path.last() == Some(&-x) {
                continue;
            }
            for t in g.targets(v, x) {
                let mut p = path.clone();
                p.push(x);
                stack.push((t, p));
            }
        }
    }
    out
}

#[test]
fn accepted_words_are_reduced_loop_labels() {
    let mut rng = seeded_rng(33);
    for _ in 0..30 {
        let gens: Vec<Word> = (0..2).map(|_| random_word(2, 4, &mut rng)).collect();
        let g = build_subgroup_graph(2, &gens);
        let loops = loop_labels(&g, 6);
        assert!(loops.iter().all(|w| w.len() <= 6));
        let accepted: BTreeSet<Word> = words_up_to(2, 6).into_iter().filter(|x| g.is_member(x)).collect();
        assert_eq!(loops, accepted);
    }
}

#[test]
fn z_conjugator_example() {
    let zw = Word::parse("Aca", 3).unwrap();
    let g = find_z_conjugator(3, std::slice::from_ref(&zw)).unwrap();
    assert_eq!(g, Word::parse("a", 3).unwrap());
    let graph = build_subgroup_graph(3, &[zw]);
    let z = Word::parse("c", 3).unwrap();
    assert!(graph.is_member(&z.conjugate_by(&g).unwrap()));
}
