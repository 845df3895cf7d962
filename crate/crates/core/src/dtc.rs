//! Doubly-twisted conjugacy: `u ~ v` when `v = (wf)⁻¹ u (wg)` for some `w`.
//!
//! With `f` having remnant and every remnant longer than the matching image
//! under `g`, any conjugator is short: its length is at most
//! `⌊(|u| + |v|) / l⌋` where `l` is the minimum gap. [`decide_dtc`] uses this
//! to turn a bounded search into a decision.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::remnant::{different_classes_strong, has_bsl, has_bslw, min_bsl};
use crate::words::{alphabet, push_reduced, random_word, FreeHom, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum DecisionKind {
    SameClass,
    DifferentClasses,
    Inapplicable,
    Unknown,
}

/// Which argument settled the question.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `u = v`.
    Equal,
    /// The free-product remnant condition on `f * u * v`.
    FreeProductRemnant,
    /// Remnants of `f^v * g` survive both products with `v⁻¹u` and `u⁻¹v`.
    StrongRemnant,
    /// Exhaustive search up to the solution-length bound.
    Search,
    /// Hypotheses not met.
    NotApplicable,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Decision {
    pub kind: DecisionKind,
    /// Present exactly when `kind` is `SameClass`.
    pub conjugator: Option<Word>,
    pub bound_used: Option<usize>,
    pub route: Route,
}

impl Decision {
    pub fn inapplicable() -> Self {
        Decision { kind: DecisionKind::Inapplicable, conjugator: None, bound_used: None, route: Route::NotApplicable }
    }

    fn same(w: Word, bound: Option<usize>, route: Route) -> Self {
        Decision { kind: DecisionKind::SameClass, conjugator: Some(w), bound_used: bound, route }
    }

    fn different(bound: Option<usize>, route: Route) -> Self {
        Decision { kind: DecisionKind::DifferentClasses, conjugator: None, bound_used: bound, route }
    }
}

fn check_pair(f: &FreeHom, g: &FreeHom) -> Result<()> {
    if f.domain_rank() != g.domain_rank() {
        return Err(Error::RankMismatch { expected: f.domain_rank(), found: g.domain_rank() });
    }
    if f.codomain_rank() != g.codomain_rank() {
        return Err(Error::RankMismatch { expected: f.codomain_rank(), found: g.codomain_rank() });
    }
    Ok(())
}

fn check_word(f: &FreeHom, w: &Word) -> Result<()> {
    if w.rank() != f.codomain_rank() {
        return Err(Error::RankMismatch { expected: f.codomain_rank(), found: w.rank() });
    }
    Ok(())
}

/// `(wf)⁻¹ · u · (wg)`.
pub fn double_twist(f: &FreeHom, g: &FreeHom, u: &Word, w: &Word) -> Result<Word> {
    check_pair(f, g)?;
    check_word(f, u)?;
    let left = f.apply(w)?.inverse();
    let right = g.apply(w)?;
    Word::product(f.codomain_rank(), [&left, u, &right])
}

/// Depth-first enumeration of `w ↦ (wf)⁻¹ u (wg)`, extending `w` one letter
/// at a time: `D(wx) = (xf)⁻¹ D(w) (xg)`.
struct Twister {
    alphabet: Vec<i32>,
    left: Vec<Vec<i32>>,
    right: Vec<Vec<i32>>,
}

impl Twister {
    fn new(f: &FreeHom, g: &FreeHom) -> Self {
        let alphabet = alphabet(f.domain_rank());
        let left = alphabet.iter().map(|&x| f.letter_image(x).inverse().letters().to_vec()).collect();
        let right = alphabet.iter().map(|&x| g.letter_image(x).letters().to_vec()).collect();
        Twister { alphabet, left, right }
    }

    /// Visits every reduced `w` of length exactly `depth` in canonical
    /// order, stopping as soon as `visit` returns true.
    fn walk(&self, depth: usize, d: &[i32], prefix: &mut Vec<i32>, visit: &mut dyn FnMut(&[i32], &[i32]) -> bool) -> bool {
        if depth == 0 {
            return visit(prefix, d);
        }
        let mut next = Vec::with_capacity(d.len() + 16);
        for (k, &x) in self.alphabet.iter().enumerate() {
            if prefix.last() == Some(&-x) {
                continue;
            }
            next.clear();
            next.extend_from_slice(&self.left[k]);
            d.iter().for_each(|&y| push_reduced(&mut next, y));
            self.right[k].iter().for_each(|&y| push_reduced(&mut next, y));
            prefix.push(x);
            let stop = self.walk(depth - 1, &next, prefix, visit);
            prefix.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// First `w` in canonical order with `|w| <= maxlen` and `(wf)⁻¹ u (wg) = v`.
///
/// The search covers `1 + Σ_{i=1}^{maxlen} 2m(2m−1)^{i−1}` words for domain rank `m`.
pub fn brute_force_search(f: &FreeHom, g: &FreeHom, u: &Word, v: &Word, maxlen: usize) -> Result<Option<Word>> {
    check_pair(f, g)?;
    check_word(f, u)?;
    check_word(f, v)?;
    let tw = Twister::new(f, g);
    let target = v.letters();
    let mut found = None;
    for len in 0..=maxlen {
        let mut prefix = Vec::with_capacity(len);
        tw.walk(len, u.letters(), &mut prefix, &mut |w, d| {
            if d == target {
                found = Some(w.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(w) = found {
            return Ok(Some(Word::reduce(&w, f.domain_rank())?));
        }
    }
    Ok(None)
}

/// Every `w` with `|w| <= maxlen` and `(wf)⁻¹ u (wg) = v`, in canonical order.
pub fn all_conjugators(f: &FreeHom, g: &FreeHom, u: &Word, v: &Word, maxlen: usize) -> Result<Vec<Word>> {
    check_pair(f, g)?;
    check_word(f, u)?;
    check_word(f, v)?;
    let tw = Twister::new(f, g);
    let target = v.letters();
    let mut out = Vec::new();
    for len in 0..=maxlen {
        let mut prefix = Vec::with_capacity(len);
        tw.walk(len, u.letters(), &mut prefix, &mut |w, d| {
            if d == target {
                out.push(w.to_vec());
            }
            false
        });
    }
    out.into_iter().map(|w| Word::reduce(&w, f.domain_rank())).collect()
}

/// `⌊(|u| + |v|) / l⌋` with `l` the minimum remnant gap.
pub fn solution_length_bound(f: &FreeHom, g: &FreeHom, u: &Word, v: &Word) -> Result<usize> {
    let l = min_bsl(f, g)?;
    Ok((u.len() + v.len()) / l)
}

/// Decides whether `u` and `v` are doubly-twisted conjugate under `(f, g)`.
///
/// Requires the bounded-solution-length hypothesis; otherwise the answer is
/// `Inapplicable`.
pub fn decide_dtc(f: &FreeHom, g: &FreeHom, u: &Word, v: &Word) -> Result<Decision> {
    check_pair(f, g)?;
    check_word(f, u)?;
    check_word(f, v)?;
    if !has_bsl(f, g) {
        return Ok(Decision::inapplicable());
    }
    let bound = solution_length_bound(f, g, u, v)?;
    if u == v {
        return Ok(Decision::same(Word::identity(f.domain_rank()), Some(bound), Route::Equal));
    }
    if f.codomain_rank() > 1 && has_bslw(f, g, u, v)? {
        return Ok(Decision::different(Some(bound), Route::FreeProductRemnant));
    }
    if different_classes_strong(f, g, u, v)? {
        return Ok(Decision::different(Some(bound), Route::StrongRemnant));
    }
    Ok(match brute_force_search(f, g, u, v, bound)? {
        Some(w) => Decision::same(w, Some(bound), Route::Search),
        None => Decision::different(Some(bound), Route::Search),
    })
}

/// Twisted conjugacy `v = (wf)⁻¹ u w`, i.e. [`decide_dtc`] against the identity.
pub fn decide_twisted(f: &FreeHom, u: &Word, v: &Word) -> Result<Decision> {
    if !f.is_endomorphism() {
        return Err(Error::RankMismatch { expected: f.domain_rank(), found: f.codomain_rank() });
    }
    decide_dtc(f, &FreeHom::identity(f.domain_rank()), u, v)
}

/// A related pair with its conjugator: `(wf)⁻¹ u (wg) = v`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ConjugatePair {
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

/// Draws random distinct `u, v` of length at most `maxlen` and keeps the
/// pairs found to be conjugate within the solution-length bound.
///
/// Pairs certified different by the free-product remnant condition are
/// skipped without searching.
pub fn random_conjugate_pairs<R: Rng + ?Sized>(
    f: &FreeHom,
    g: &FreeHom,
    maxlen: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<ConjugatePair>> {
    check_pair(f, g)?;
    if !has_bsl(f, g) {
        return Err(Error::BslViolated);
    }
    let rank = f.codomain_rank();
    let mut out = Vec::new();
    for _ in 0..trials {
        let u = random_word(rank, maxlen, rng);
        let v = random_word(rank, maxlen, rng);
        if u == v || (rank > 1 && has_bslw(f, g, &u, &v)?) {
            continue;
        }
        let bound = solution_length_bound(f, g, &u, &v)?;
        if let Some(w) = brute_force_search(f, g, &u, &v, bound)? {
            out.push(ConjugatePair { u, v, w });
        }
    }
    Ok(out)
}

/// `{u f^k : 0 <= k <= bound}`, plus `u f^{-k}` when the inverse is supplied.
pub fn orbit_members(f: &FreeHom, u: &Word, bound: usize, inverse: Option<&FreeHom>) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::from([u.clone()]);
    let mut cur = u.clone();
    for _ in 0..bound {
        cur = f.apply(&cur)?;
        out.insert(cur.clone());
    }
    if let Some(inv) = inverse {
        let mut cur = u.clone();
        for _ in 0..bound {
            cur = inv.apply(&cur)?;
            out.insert(cur.clone());
        }
    }
    Ok(out)
}
