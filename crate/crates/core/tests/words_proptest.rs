use freetwist::Word;
use proptest::prelude::*;

fn raw_word(rank: u32) -> impl Strategy<Value = Vec<i32>> {
    let r = rank as i32;
    prop::collection::vec((1..=r, any::<bool>()).prop_map(|(x, neg)| if neg { -x } else { x }), 0..12)
}

proptest! {
    #[test]
    fn text_round_trip(raw in raw_word(3)) {
        let w = Word::reduce(&raw, 3).unwrap();
        prop_assert_eq!(Word::parse(&w.to_string(), 3).unwrap(), w);
    }

    #[test]
    fn group_laws(a in raw_word(2), b in raw_word(2), c in raw_word(2)) {
        let [a, b, c] = [a, b, c].map(|x| Word::reduce(&x, 2).unwrap());
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        // reduction is idempotent and never lengthens
        prop_assert_eq!(Word::reduce(a.letters(), 2).unwrap(), a.clone());
    }

    #[test]
    fn reduced_words_have_no_cancelling_neighbours(raw in raw_word(2)) {
        let w = Word::reduce(&raw, 2).unwrap();
        prop_assert!(w.len() <= raw.len());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != -p[1]));
    }
}
