use freetwist::dtc::double_twist;
use freetwist::fixtures;
use freetwist::remnant::in_equalizer;
use freetwist::words::{initial_cancelling_segment, random_word, seeded_rng, terminal_cancelling_segment, words_up_to};
use freetwist::{FreeHom, Word};

fn w(s: &str) -> Word {
    Word::parse(s, 2).unwrap()
}

/// Longest prefix `p` of `w` with `|u·p| = |u| − |p|`, trying every length.
fn scan_initial(w: &Word, u: &Word) -> Word {
    let mut best = Word::identity(w.rank());
    for i in 0..=w.len() {
        let p = Word::reduce(&w.letters()[..i], w.rank()).unwrap();
        if u.multiply(&p).unwrap().len() + i == u.len() {
            best = p;
        }
    }
    best
}

#[test]
fn cancelling_segments_match_scan() {
    assert_eq!(initial_cancelling_segment(&w("Ab"), &w("ba")), w("A"));
    assert_eq!(scan_initial(&w("Ab"), &w("ba")), w("A"));
    for u in words_up_to(2, 4) {
        for x in words_up_to(2, 4) {
            let ics = initial_cancelling_segment(&x, &u);
            assert_eq!(ics, scan_initial(&x, &u));
            assert_eq!(u.multiply(&x).unwrap().len(), u.len() + x.len() - 2 * ics.len());
            let tcs = terminal_cancelling_segment(&x, &u);
            let mirrored = initial_cancelling_segment(&x.inverse(), &u.inverse()).inverse();
            assert_eq!(tcs, mirrored);
        }
    }
}

#[test]
fn composition_matches_sequential_application() {
    let mut rng = seeded_rng(21);
    for _ in 0..200 {
        let f = FreeHom::random(2, 3, 4, &mut rng);
        let g = FreeHom::random(3, 2, 4, &mut rng);
        let x = random_word(2, 8, &mut rng);
        assert_eq!(g.apply(&f.apply(&x).unwrap()).unwrap(), f.then(&g).unwrap().apply(&x).unwrap());
    }
}

#[test]
fn join_is_a_homomorphism() {
    let mut rng = seeded_rng(22);
    for _ in 0..100 {
        let f = FreeHom::random(2, 2, 4, &mut rng);
        let g = FreeHom::random(2, 2, 4, &mut rng);
        let j = f.join(&g).unwrap();
        assert_eq!(j.domain_rank(), 4);
        let x = random_word(4, 6, &mut rng);
        let y = random_word(4, 6, &mut rng);
        let lhs = j.apply(&x.multiply(&y).unwrap()).unwrap();
        let rhs = j.apply(&x).unwrap().multiply(&j.apply(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn conjugated_rh2_by_b() {
    let c = fixtures::rh2().conjugated(&w("b")).unwrap();
    assert_eq!(c.images(), &[w("B"), w("BaB")]);
}

#[test]
fn equalizer_of_extension_by_a_root() {
    // wf ∈ ⟨v⟩ ⇒ (w ∈ Eq(f, g) ⇔ w ∈ Eq(f̂^v, ĝ)) with f̂ sending z ↦ u z u⁻¹, ĝ fixing z
    let mut rng = seeded_rng(23);
    let mut equal_cases = 0;
    for trial in 0..300 {
        let f = FreeHom::random(2, 2, 3, &mut rng);
        // half the time g agrees with f on a, so a lies in the equalizer
        let g = if trial % 2 == 0 {
            FreeHom::new(2, 2, vec![f.image(1).clone(), random_word(2, 3, &mut rng)]).unwrap()
        } else {
            FreeHom::random(2, 2, 3, &mut rng)
        };
        let u = random_word(2, 3, &mut rng);
        let fh = f.extend_z(&u, false).unwrap();
        let gh = g.extend_z(&u, true).unwrap();
        for x in words_up_to(2, 3) {
            let img = f.apply(&x).unwrap();
            // xf = v or v⁻¹
            for v in [img.clone(), img.inverse()] {
                let v3 = v.with_rank(3).unwrap();
                let lhs = in_equalizer(&f, &g, &x).unwrap();
                let rhs = in_equalizer(&fh.conjugated(&v3).unwrap(), &gh, &x.with_rank(3).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                equal_cases += lhs as usize;
            }
        }
    }
    assert!(equal_cases > 0);
}

#[test]
fn relation_is_an_equivalence_by_certificates() {
    let mut rng = seeded_rng(24);
    for _ in 0..200 {
        let f = FreeHom::random(2, 2, 4, &mut rng);
        let g = FreeHom::random(2, 2, 4, &mut rng);
        let u = random_word(2, 6, &mut rng);
        let x = random_word(2, 4, &mut rng);
        let y = random_word(2, 4, &mut rng);
        assert_eq!(double_twist(&f, &g, &u, &Word::identity(2)).unwrap(), u);
        let v = double_twist(&f, &g, &u, &x).unwrap();
        assert_eq!(double_twist(&f, &g, &v, &x.inverse()).unwrap(), u);
        let t = double_twist(&f, &g, &v, &y).unwrap();
        assert_eq!(double_twist(&f, &g, &u, &x.multiply(&y).unwrap()).unwrap(), t);
    }
}

/// Exact distribution of the reduced length after `steps` uniform letters:
/// the length drops by one with probability `1/2r` when positive.
fn length_distribution(rank: u32, steps: usize) -> Vec<f64> {
    let back = 1.0 / (2.0 * f64::from(rank));
    let mut dist = vec![0.0; steps + 1];
    dist[0] = 1.0;
    for _ in 0..steps {
        let mut next = vec![0.0; steps + 1];
        for (l, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            if l == 0 {
                next[1] += p;
            } else {
                next[l - 1] += p * back;
                next[l + 1] += p * (1.0 - back);
            }
        }
        dist = next;
    }
    dist
}

#[test]
fn random_word_length_distribution() {
    let mut rng = seeded_rng(25);
    for (rank, maxlen) in [(1u32, 5usize), (2, 6), (3, 7)] {
        let draws = 100_000;
        let mut hist = vec![0u32; maxlen + 1];
        for _ in 0..draws {
            hist[random_word(rank, maxlen, &mut rng).len()] += 1;
        }
        for (l, expected) in length_distribution(rank, maxlen).into_iter().enumerate() {
            let got = f64::from(hist[l]) / f64::from(draws);
            assert!((got - expected).abs() < 0.01, "rank {rank} len {l}: {got} vs {expected}");
        }
    }
}

#[test]
fn single_letters_are_balanced() {
    let mut rng = seeded_rng(26);
    let a = (0..10_000).filter(|_| random_word(1, 1, &mut rng) == Word::parse("a", 1).unwrap()).count();
    assert!((a as f64 / 10_000.0 - 0.5).abs() < 0.02);
}
