//! Reference homomorphisms, words, keys and transcripts shipped with the crate.
//!
//! The JSON sources live in `fixtures/` and are embedded at compile time.

use serde::Deserialize;

use crate::protocol::KeyPair;
use crate::truncpoly::{Mat2, TruncPoly};
use crate::words::{FreeHom, Word};

pub const RH1_JSON: &str = include_str!("../fixtures/rh1.json");
pub const RH2_JSON: &str = include_str!("../fixtures/rh2.json");
pub const RH3_JSON: &str = include_str!("../fixtures/rh3.json");
pub const RH4_JSON: &str = include_str!("../fixtures/rh4.json");
pub const REMNANT_EXAMPLE_JSON: &str = include_str!("../fixtures/remnant_example.json");
pub const WORDS_JSON: &str = include_str!("../fixtures/words.json");
pub const EXAMPLE_KEY_JSON: &str = include_str!("../fixtures/example_key.json");
pub const EXAMPLE_ROUND_JSON: &str = include_str!("../fixtures/example_round.json");
pub const REFERENCE_SESSION_JSON: &str = include_str!("../fixtures/reference_session.json");

/// Names accepted by [`hom_by_name`].
pub const HOM_NAMES: [&str; 5] = ["rh1", "rh2", "rh3", "rh4", "remnant_example"];
/// Names accepted by [`word_by_name`].
pub const WORD_NAMES: [&str; 4] = ["u1", "v1", "u2", "v2"];

fn hom(json: &str) -> FreeHom {
    serde_json::from_str(json).expect("shipped homomorphism fixture is valid")
}

/// `a ↦ b²ab²a⁻², b ↦ a⁻¹b⁻¹ab⁻¹a²b⁻¹`.
pub fn rh1() -> FreeHom {
    hom(RH1_JSON)
}

/// `a ↦ b⁻¹, b ↦ ab⁻²`; has no remnant.
pub fn rh2() -> FreeHom {
    hom(RH2_JSON)
}

/// `a ↦ b⁻³ab⁻¹, b ↦ a⁻¹b⁻¹aba⁻¹`.
pub fn rh3() -> FreeHom {
    hom(RH3_JSON)
}

/// Identity of `F2`.
pub fn rh4() -> FreeHom {
    hom(RH4_JSON)
}

/// `a ↦ a²bab⁻², b ↦ ba⁴ba⁻²`, remnant length 3 and ratio 1/2.
pub fn remnant_example() -> FreeHom {
    hom(REMNANT_EXAMPLE_JSON)
}

pub fn hom_by_name(name: &str) -> Option<FreeHom> {
    Some(match name {
        "rh1" => rh1(),
        "rh2" => rh2(),
        "rh3" => rh3(),
        "rh4" => rh4(),
        "remnant_example" => remnant_example(),
        _ => return None,
    })
}

pub fn word_by_name(name: &str) -> Option<Word> {
    let map: std::collections::BTreeMap<String, String> =
        serde_json::from_str(WORDS_JSON).expect("shipped word fixture is valid");
    map.get(name).map(|s| Word::parse(s, 2).expect("shipped word is valid"))
}

pub fn u1() -> Word {
    word_by_name("u1").unwrap()
}

pub fn v1() -> Word {
    word_by_name("v1").unwrap()
}

pub fn u2() -> Word {
    word_by_name("u2").unwrap()
}

pub fn v2() -> Word {
    word_by_name("v2").unwrap()
}

/// `(u, v, w)` with `(w rh1)⁻¹ u (w rh2) = v`, found by random search at
/// word length 6 and 8.
pub const RH1_RH2_PAIRS: [(&str, &str, &str); 5] = [
    ("bbab", "aaBB", "a"),
    ("bb", "aaBBAB", "a"),
    ("AB", "bAAB", "b"),
    ("ABaB", "bABB", "b"),
    ("bbabbb", "aa", "a"),
];

/// `(u, v, w)` with `(w rh3)⁻¹ u w = v`, found by random search at word
/// lengths 8, 10 and 12.
pub const RH3_TWISTED_PAIRS: [(&str, &str, &str); 17] = [
    ("ABabAb", "bb", "b"),
    ("ba", "BBBa", "A"),
    ("AB", "aBAb", "b"),
    ("aBab", "ABaa", "B"),
    ("ABab", "ab", "b"),
    ("bAbaaa", "BBaa", "A"),
    ("aBAbAb", "AA", "B"),
    ("BBBABA", "bAAB", "a"),
    ("aB", "aBAbaa", "b"),
    ("BBBA", "bAbbbb", "aa"),
    ("BaBa", "BBBaBBaB", "A"),
    ("BBaB", "bAbaBa", "a"),
    ("bAbA", "BBAA", "A"),
    ("aBAbAb", "AA", "B"),
    ("ABaB", "aB", "b"),
    ("ABabAb", "bb", "b"),
    ("bAbb", "BA", "A"),
];

/// The N = 7 key pair of the worked protocol example.
pub fn example_key() -> KeyPair {
    serde_json::from_str(EXAMPLE_KEY_JSON).expect("shipped key fixture is valid")
}

/// One round of the worked protocol example: Alice's random `r`, the
/// commitment `u` and the `c = 1` response `sr`.
#[derive(Clone, Debug, Deserialize)]
pub struct ExampleRound {
    pub r: Mat2,
    pub u: Mat2,
    pub sr: Mat2,
}

pub fn example_round() -> ExampleRound {
    serde_json::from_str(EXAMPLE_ROUND_JSON).expect("shipped round fixture is valid")
}

/// A recorded protocol run where only public data and the two responses
/// were printed (the secret itself was not).
#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceSession {
    pub n: usize,
    pub p: TruncPoly,
    pub q: TruncPoly,
    pub w: Mat2,
    pub t: Mat2,
    pub r: Mat2,
    pub sr: Mat2,
    pub u: Mat2,
}

pub fn reference_session() -> ReferenceSession {
    serde_json::from_str(REFERENCE_SESSION_JSON).expect("shipped session fixture is valid")
}
