use std::cmp::Ordering;

use freetwist::attack::{
    bits_from_key, coefficient_equations, grevlex_compare, key_from_bits, run_attack, run_attack_traced, symbolic_rhs,
    truncated_groebner_deg2, BoolMonomial, BoolPoly,
};
use freetwist::protocol::{keygen, PublicKey};
use freetwist::truncpoly::{double_twist_mat, Mat2, TruncPoly};
use freetwist::words::seeded_rng;

fn all_assignments(nv: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << nv).map(move |m| (0..nv).map(|i| m >> i & 1 == 1).collect())
}

fn variety(system: &[BoolPoly], nv: usize) -> Vec<Vec<bool>> {
    all_assignments(nv).filter(|b| system.iter().all(|f| !f.eval(b))).collect()
}

#[test]
fn n2_hand_expansion() {
    // With every entry of s and w a unit, the constant parts of s∘p, w and
    // s∘q are the all-ones matrix J, and J·J = 0 over GF(2). Writing
    // A = J + xA1, W = J + xW1, B = J + xB1, the x-coefficient of AWB is
    // A1·J·J + J·W1·J + J·J·B1 = J·W1·J, whose entries all equal the sum of
    // the bits of W1. So every coefficient is a constant.
    let p = TruncPoly::parse_bits("01").unwrap();
    for wbits in 0u8..16 {
        let entries = [0, 1, 2, 3].map(|k| TruncPoly::from_bits(&[true, wbits >> k & 1 == 1]));
        let w = Mat2::new(entries).unwrap();
        let pk = PublicKey { p: p.clone(), q: p.clone(), w, t: Mat2::identity(2) };
        let sym = symbolic_rhs(&pk);
        let expected = BoolPoly::constant(wbits.count_ones() % 2 == 1);
        for e in &sym.entries {
            assert!(e[0].is_zero());
            assert_eq!(e[1], expected);
        }
    }
}

#[test]
fn grevlex_is_a_monomial_order_on_four_variables() {
    let monos: Vec<BoolMonomial> =
        (0u32..16).map(|m| BoolMonomial::from_vars((0..4).filter(|i| m >> i & 1 == 1))).collect();
    for a in &monos {
        for b in &monos {
            let ab = grevlex_compare(a, b);
            assert_eq!(ab, grevlex_compare(b, a).reverse());
            assert_eq!(ab == Ordering::Equal, a == b);
            for c in &monos {
                if ab == Ordering::Less && grevlex_compare(b, c) == Ordering::Less {
                    assert_eq!(grevlex_compare(a, c), Ordering::Less);
                }
                // multiplicative where the product stays squarefree-disjoint
                let disjoint = |x: &BoolMonomial| x.vars().iter().all(|v| !c.vars().contains(v));
                if disjoint(a) && disjoint(b) {
                    assert_eq!(grevlex_compare(&a.mul(c), &b.mul(c)), ab);
                }
            }
        }
    }
}

#[test]
fn degree_bound_and_true_key_at_n3_and_n7() {
    for n in [3, 7] {
        for seed in 0..20 {
            let keys = keygen(n, &mut seeded_rng(seed)).unwrap();
            let sym = symbolic_rhs(&keys.public);
            let bits = bits_from_key(&keys.secret);
            for e in &sym.entries {
                for c in e {
                    assert!(c.degree() <= 2);
                }
            }
            for d in 1..n {
                let eqs = coefficient_equations(&sym, &keys.public.t, d).unwrap();
                assert!(eqs.len() <= 4);
                assert!(eqs.iter().all(|f| !f.eval(&bits)));
            }
        }
    }
}

#[test]
fn n3_variety_oracle() {
    let nv = 8;
    let mut recovered = 0;
    for seed in 0..40 {
        let keys = keygen(3, &mut seeded_rng(1000 + seed)).unwrap();
        let pk = &keys.public;
        let truth = bits_from_key(&keys.secret);
        let report = run_attack_traced(pk, 2).unwrap();
        for round in &report.trace {
            assert_eq!(variety(&round.input, nv), variety(&round.basis, nv), "seed {seed} d {}", round.d);
            assert!(round.residual.iter().all(|f| !f.eval(&truth)));
            assert!(round.basis.iter().all(|f| f.degree() <= 2));
        }
        // all keys, by exhaustive enumeration
        let solutions: Vec<Vec<bool>> = all_assignments(nv)
            .filter(|b| double_twist_mat(&key_from_bits(b, 3).s, &pk.w, &pk.p, &pk.q).unwrap() == pk.t)
            .collect();
        assert!(solutions.contains(&truth));
        match report.key {
            Some(k) => {
                recovered += 1;
                assert!(solutions.contains(&bits_from_key(&k)));
            }
            None => assert!(!solutions.is_empty()),
        }
    }
    println!("n = 3: recovered {recovered}/40");
}

#[test]
fn groebner_preserves_variety_on_random_quadratics() {
    let mut rng = seeded_rng(5);
    use rand::Rng;
    let nv = 6;
    for _ in 0..200 {
        let mut sys = Vec::new();
        for _ in 0..rng.gen_range(1..5) {
            let terms = (0..rng.gen_range(1..6)).map(|_| {
                let deg = rng.gen_range(0..3);
                BoolMonomial::from_vars((0..deg).map(|_| rng.gen_range(0..nv as u32)))
            });
            sys.push(BoolPoly::from_terms(terms));
        }
        let g = truncated_groebner_deg2(&sys);
        assert_eq!(variety(&sys, nv), variety(&g, nv));
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                if i != j {
                    assert!(!a.lead().unwrap().divides(b.lead().unwrap()));
                }
            }
        }
    }
}

#[test]
fn n7_success_count() {
    let mut ok = 0;
    for seed in 0..20 {
        let keys = keygen(7, &mut seeded_rng(seed)).unwrap();
        let r = run_attack(&keys.public, 6).unwrap();
        if let Some(k) = &r.key {
            ok += 1;
            let t = double_twist_mat(&k.s, &keys.public.w, &keys.public.p, &keys.public.q).unwrap();
            assert_eq!(t, keys.public.t);
        }
    }
    println!("n = 7: recovered {ok}/20");
}
