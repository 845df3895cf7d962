use std::io::BufReader;

use freetwist::protocol::{
    eve_attempt, keygen, prover_commit, read_message, run_protocol, verifier_check, write_message, ProtocolRun,
};
use freetwist::truncpoly::Mat2;
use freetwist::words::seeded_rng;

#[test]
fn honest_runs_always_accept() {
    for n in [4, 7, 12] {
        for seed in 0..100 {
            let mut rng = seeded_rng(seed);
            let keys = keygen(n, &mut rng).unwrap();
            let run = run_protocol(10, &keys, &mut rng).unwrap();
            assert!(run.accepted, "n {n} seed {seed}");
            assert_eq!(run.transcripts.len(), 10);
        }
    }
}

// At small n a random matrix verifies surprisingly often (about 2% at
// n = 7), so these checks use n = 32.
const BIG_N: usize = 32;

#[test]
fn random_responses_are_rejected() {
    let mut rng = seeded_rng(11);
    for _ in 0..100 {
        let keys = keygen(BIG_N, &mut rng).unwrap();
        let (_, u) = prover_commit(&keys.public, &mut rng).unwrap();
        let v = Mat2::random(BIG_N, &mut rng);
        let c = rng_bit(&mut rng) as u8;
        assert!(!verifier_check(&keys.public, &u, c, &v).unwrap());
    }
}

fn rng_bit(rng: &mut impl rand::Rng) -> bool {
    rng.gen()
}

#[test]
fn wrong_branch_fails() {
    let mut rng = seeded_rng(12);
    let mut checked = 0;
    for _ in 0..100 {
        let keys = keygen(BIG_N, &mut rng).unwrap();
        if keys.secret.s == Mat2::identity(BIG_N) {
            continue;
        }
        checked += 1;
        let r = Mat2::random(BIG_N, &mut rng);
        let (_, u) = freetwist::protocol::prover_commit_with(&keys.public, r.clone()).unwrap();
        assert!(verifier_check(&keys.public, &u, 0, &r).unwrap());
        assert!(!verifier_check(&keys.public, &u, 1, &r).unwrap());
    }
    assert_eq!(checked, 100);
}

#[test]
fn eve_succeeds_with_probability_two_to_minus_k() {
    let mut rng = seeded_rng(13);
    let keys = keygen(7, &mut rng).unwrap();
    for (k, expected, tol) in [(1usize, 0.5, 0.02), (4, 0.0625, 0.01)] {
        let trials = 10_000;
        let wins = (0..trials).filter(|_| eve_attempt(&keys.public, k, &mut rng).unwrap()).count();
        let rate = wins as f64 / trials as f64;
        assert!((rate - expected).abs() <= tol, "k {k}: {rate}");
    }
}

#[test]
fn transcripts_round_trip() {
    let mut rng = seeded_rng(14);
    let keys = keygen(5, &mut rng).unwrap();
    let run = run_protocol(4, &keys, &mut rng).unwrap();
    let json = serde_json::to_string(&run).unwrap();
    assert_eq!(serde_json::from_str::<ProtocolRun>(&json).unwrap(), run);
    let mut buf = Vec::new();
    for m in run.messages() {
        write_message(&mut buf, &m).unwrap();
    }
    let mut reader = BufReader::new(&buf[..]);
    let mut back = Vec::new();
    while let Some(m) = read_message(&mut reader).unwrap() {
        back.push(m);
    }
    assert_eq!(back, run.messages());
}
