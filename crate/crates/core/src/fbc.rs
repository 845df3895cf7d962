//! Free-by-cyclic groups `M_ϕ = ⟨F, t | t⁻¹xt = xϕ⟩`, optionally with `t^m = h`.
//!
//! Every element is uniquely `t^r u` with `u ∈ F` (and `0 <= r < m` in the
//! finite case); moving letters past `t` uses `wt = t(wϕ)`. Conjugacy of
//! `t^r u` and `t^s v` reduces to finitely many twisted conjugacy questions
//! in `F`, answered here by the remnant decision procedure or by bounded
//! searches that report `Unknown` when they run out.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dtc::{decide_twisted, DecisionKind};
use crate::error::{Error, Result};
use crate::words::{FreeHom, Word};

/// Order of the image of `t` in `M_ϕ / F`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(m) => s.serialize_u32(*m),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(m) => Ok(Order::Finite(m)),
            Raw::Text(s) if s == "inf" => Ok(Order::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected an integer or \"inf\", got {s:?}"))),
        }
    }
}

/// `M_ϕ` for an automorphism `ϕ` of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FbcGroup {
    phi: FreeHom,
    phi_inverse: Option<FreeHom>,
    order: Order,
    h: Option<Word>,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    phi: FreeHom,
    phi_inverse: Option<FreeHom>,
    m: Order,
    h: Option<String>,
}

impl FbcGroup {
    /// Infinite cyclic quotient.
    pub fn infinite(phi: FreeHom, phi_inverse: Option<FreeHom>) -> Result<Self> {
        Self::new(phi, phi_inverse, Order::Infinite, None)
    }

    /// Checks that `ϕ` is an endomorphism, that a supplied inverse really is
    /// one, and in the finite case that `ϕ^m` is conjugation `x ↦ h⁻¹xh`
    /// and `hϕ = h`.
    pub fn new(phi: FreeHom, phi_inverse: Option<FreeHom>, order: Order, h: Option<Word>) -> Result<Self> {
        if !phi.is_endomorphism() {
            return Err(Error::InvalidGroup("ϕ must be an endomorphism".into()));
        }
        let rank = phi.domain_rank();
        let id = FreeHom::identity(rank);
        if let Some(inv) = &phi_inverse {
            if inv.domain_rank() != rank || phi.then(inv)? != id || inv.then(&phi)? != id {
                return Err(Error::InvalidGroup("supplied inverse does not invert ϕ".into()));
            }
        }
        match (order, &h) {
            (Order::Infinite, None) => {}
            (Order::Infinite, Some(_)) => {
                return Err(Error::InvalidGroup("h is only meaningful for finite order".into()))
            }
            (Order::Finite(0), _) => return Err(Error::InvalidGroup("order must be positive".into())),
            (Order::Finite(_), None) => return Err(Error::InvalidGroup("finite order requires h".into())),
            (Order::Finite(m), Some(h)) => {
                if h.rank() != rank {
                    return Err(Error::RankMismatch { expected: rank, found: h.rank() });
                }
                if phi.power(m)? != id.conjugated(h)? {
                    return Err(Error::InvalidGroup("ϕ^m is not conjugation by h".into()));
                }
                if phi.apply(h)? != *h {
                    return Err(Error::InvalidGroup("ϕ does not fix h".into()));
                }
            }
        }
        Ok(FbcGroup { phi, phi_inverse, order, h })
    }

    pub fn phi(&self) -> &FreeHom {
        &self.phi
    }

    pub fn phi_inverse(&self) -> Option<&FreeHom> {
        self.phi_inverse.as_ref()
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn h(&self) -> Option<&Word> {
        self.h.as_ref()
    }

    pub fn rank(&self) -> u32 {
        self.phi.domain_rank()
    }

    pub fn identity(&self) -> FbcElement {
        FbcElement { t_exp: 0, tail: Word::identity(self.rank()) }
    }

    /// `t` itself.
    pub fn t(&self) -> FbcElement {
        if self.order == Order::Finite(1) {
            return FbcElement { t_exp: 0, tail: self.h.clone().expect("finite order has h") };
        }
        FbcElement { t_exp: 1, tail: Word::identity(self.rank()) }
    }

    /// A free-group element `(0, w)`.
    pub fn element(&self, w: Word) -> Result<FbcElement> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: w.rank() });
        }
        Ok(FbcElement { t_exp: 0, tail: w })
    }

    /// Validates a normal form `t^r u`.
    pub fn make(&self, t_exp: i64, tail: Word) -> Result<FbcElement> {
        if tail.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), found: tail.rank() });
        }
        if let Order::Finite(m) = self.order {
            if !(0..i64::from(m)).contains(&t_exp) {
                return Err(Error::InvalidGroup(format!("t exponent {t_exp} outside 0..{m}")));
            }
        }
        Ok(FbcElement { t_exp, tail })
    }

    /// `w ϕ^k`; negative `k` needs the inverse.
    pub fn apply_power(&self, w: &Word, k: i64) -> Result<Word> {
        if w.is_identity() || k == 0 {
            return Ok(w.clone());
        }
        let f = if k >= 0 {
            &self.phi
        } else {
            self.phi_inverse.as_ref().ok_or(Error::InverseRequired)?
        };
        let mut out = w.clone();
        for _ in 0..k.unsigned_abs() {
            out = f.apply(&out)?;
        }
        Ok(out)
    }

    /// `(t^i w1)(t^j w2) = t^{i+j} (w1ϕ^j) w2`, wrapping through `t^m = h`.
    pub fn multiply(&self, a: &FbcElement, b: &FbcElement) -> Result<FbcElement> {
        let moved = self.apply_power(&a.tail, b.t_exp)?;
        let tail = moved.multiply(&b.tail)?;
        let e = a.t_exp + b.t_exp;
        match self.order {
            Order::Finite(m) if e >= i64::from(m) => {
                let h = self.h.as_ref().expect("finite order has h");
                Ok(FbcElement { t_exp: e - i64::from(m), tail: h.multiply(&tail)? })
            }
            _ => Ok(FbcElement { t_exp: e, tail }),
        }
    }

    /// `(t^r u)⁻¹ = t^{-r}(u⁻¹ϕ^{-r})`; in the finite case
    /// `t^{-r} = t^{m-r}h⁻¹`, so only forward powers of `ϕ` are needed.
    pub fn invert(&self, a: &FbcElement) -> Result<FbcElement> {
        let ui = a.tail.inverse();
        match self.order {
            Order::Finite(m) if a.t_exp > 0 => {
                let k = i64::from(m) - a.t_exp;
                let h = self.h.as_ref().expect("finite order has h");
                let tail = self.apply_power(&ui, k)?.multiply(&h.inverse())?;
                Ok(FbcElement { t_exp: k, tail })
            }
            Order::Finite(_) => Ok(FbcElement { t_exp: 0, tail: ui }),
            Order::Infinite => Ok(FbcElement { t_exp: -a.t_exp, tail: self.apply_power(&ui, -a.t_exp)? }),
        }
    }

    /// Normal form of a product of tokens.
    pub fn normalize(&self, raw: &[Token]) -> Result<FbcElement> {
        let t = self.t();
        let t_inv = self.invert(&t)?;
        let mut acc = self.identity();
        for tok in raw {
            let factor = match *tok {
                Token::T => t.clone(),
                Token::TInv => t_inv.clone(),
                Token::Letter(x) => self.element(Word::reduce(&[x], self.rank())?)?,
            };
            acc = self.multiply(&acc, &factor)?;
        }
        Ok(acc)
    }

    /// The token sequence `t^r u` (or `t^{-|r|} u`) of a normal form.
    pub fn render(&self, e: &FbcElement) -> Vec<Token> {
        let t = if e.t_exp >= 0 { Token::T } else { Token::TInv };
        std::iter::repeat_n(t, e.t_exp.unsigned_abs() as usize)
            .chain(e.tail.letters().iter().map(|&x| Token::Letter(x)))
            .collect()
    }

    /// `by⁻¹ · e · by`, computed as `t^r (gϕ^r)⁻¹ (uϕ^k) g` for `e = t^r u`, `by = t^k g`.
    pub fn conjugate(&self, e: &FbcElement, by: &FbcElement) -> Result<FbcElement> {
        let left = self.apply_power(&by.tail, e.t_exp)?.inverse();
        let mid = self.apply_power(&e.tail, by.t_exp)?;
        let tail = Word::product(self.rank(), [&left, &mid, &by.tail])?;
        Ok(FbcElement { t_exp: e.t_exp, tail })
    }
}

impl Serialize for FbcGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawGroup {
            phi: self.phi.clone(),
            phi_inverse: self.phi_inverse.clone(),
            m: self.order,
            h: self.h.as_ref().map(|w| w.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FbcGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGroup::deserialize(d)?;
        let rank = raw.phi.domain_rank();
        let h = raw
            .h
            .map(|s| Word::parse(&s, rank))
            .transpose()
            .map_err(serde::de::Error::custom)?;
        FbcGroup::new(raw.phi, raw.phi_inverse, raw.m, h).map_err(serde::de::Error::custom)
    }
}

/// `t^{t_exp} · tail`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct FbcElement {
    pub t_exp: i64,
    pub tail: Word,
}

/// Text form `r:word`, e.g. `1:ba` or `-2:1`.
impl fmt::Display for FbcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.t_exp, self.tail)
    }
}

impl Serialize for FbcElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FbcElement {
    /// Parses `r:word` in a group of the given rank (not yet range-checked).
    pub fn parse(s: &str, rank: u32) -> Result<Self> {
        let err = || Error::Parse { input: s.into(), reason: "expected r:word".into() };
        let (r, w) = s.split_once(':').ok_or_else(err)?;
        let t_exp = i64::from_str(r.trim()).map_err(|_| err())?;
        Ok(FbcElement { t_exp, tail: Word::parse(w, rank)? })
    }
}

/// Generators of `M_ϕ` used by [`FbcGroup::normalize`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Token {
    T,
    TInv,
    Letter(i32),
}

/// Parses a raw product such as `atbT`: `t`/`T` are the stable letter and
/// its inverse, other letters are free generators (so ranks up to 19).
pub fn parse_tokens(s: &str, rank: u32) -> Result<Vec<Token>> {
    if rank >= 20 {
        return Err(Error::Parse { input: s.into(), reason: "token syntax needs rank below 20".into() });
    }
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            't' => Ok(Token::T),
            'T' => Ok(Token::TInv),
            _ => {
                let w = Word::parse(&c.to_string(), rank)?;
                Ok(Token::Letter(w.letters()[0]))
            }
        })
        .collect()
}

/// `g` with `g⁻¹ x g = y` in `F`, by cyclic reduction and rotation.
pub fn ordinary_conjugator(x: &Word, y: &Word) -> Result<Option<Word>> {
    let (c, p) = x.cyclic_reduction();
    let (d, q) = y.cyclic_reduction();
    if c.len() != d.len() {
        return Ok(None);
    }
    let n = c.len();
    let rank = x.rank();
    for i in 0..n.max(1) {
        // c = αβ with |α| = i, rotated to βα = α⁻¹ c α
        let rotated: Vec<i32> = c.letters()[i..].iter().chain(&c.letters()[..i]).copied().collect();
        if rotated == d.letters() {
            let alpha = Word::reduce(&c.letters()[..i], rank)?;
            return Ok(Some(Word::product(rank, [&p, &alpha, &q.inverse()])?));
        }
    }
    Ok(None)
}

/// Finds `k` and `g` with `g⁻¹(uϕ^k)g = v`, standing in for an orbit
/// algorithm for automorphisms.
pub trait OrbitOracle {
    fn find(&self, group: &FbcGroup, u: &Word, v: &Word) -> Result<OracleAnswer<(i64, Word)>>;
}

/// Decides `v = (gψ)⁻¹ u g` for `ψ = ϕ^r`, standing in for a fixed-subgroup
/// algorithm when the remnant route does not apply.
pub trait TwistedOracle {
    fn find(&self, psi: &FreeHom, u: &Word, v: &Word) -> Result<OracleAnswer<Word>>;
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleAnswer<T> {
    Found(T),
    /// A complete search found nothing.
    Absent,
    /// The search was cut off.
    Unknown,
}

/// Tries `k ∈ [-bound, bound]` (negative `k` only with a supplied inverse).
/// Complete in the finite case, where `k ∈ [0, m)` suffices.
#[derive(Clone, Copy, Debug)]
pub struct BoundedOrbitSearch {
    pub bound: u32,
}

impl OrbitOracle for BoundedOrbitSearch {
    fn find(&self, group: &FbcGroup, u: &Word, v: &Word) -> Result<OracleAnswer<(i64, Word)>> {
        if let Order::Finite(m) = group.order() {
            // ϕ^m is inner, so uϕ^{k+m} is conjugate to uϕ^k
            let mut cur = u.clone();
            for k in 0..i64::from(m) {
                if let Some(g) = ordinary_conjugator(&cur, v)? {
                    return Ok(OracleAnswer::Found((k, g)));
                }
                cur = group.phi().apply(&cur)?;
            }
            return Ok(OracleAnswer::Absent);
        }
        let b = i64::from(self.bound);
        let mut ks: Vec<i64> = vec![0];
        for k in 1..=b {
            ks.push(k);
            if group.phi_inverse().is_some() {
                ks.push(-k);
            }
        }
        for k in ks {
            let x = group.apply_power(u, k)?;
            if let Some(g) = ordinary_conjugator(&x, v)? {
                return Ok(OracleAnswer::Found((k, g)));
            }
        }
        Ok(OracleAnswer::Unknown)
    }
}

/// Tries every conjugator up to `maxlen`; `Unknown` when none is found.
#[derive(Clone, Copy, Debug)]
pub struct BoundedTwistedSearch {
    pub maxlen: usize,
}

impl TwistedOracle for BoundedTwistedSearch {
    fn find(&self, psi: &FreeHom, u: &Word, v: &Word) -> Result<OracleAnswer<Word>> {
        let id = FreeHom::identity(psi.domain_rank());
        Ok(match crate::dtc::brute_force_search(psi, &id, u, v, self.maxlen)? {
            Some(g) => OracleAnswer::Found(g),
            None => OracleAnswer::Unknown,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FbcDecision {
    pub kind: DecisionKind,
    /// `c` with `c⁻¹ e1 c = e2`, present exactly for `SameClass`.
    pub conjugator: Option<FbcElement>,
}

impl FbcDecision {
    fn of(kind: DecisionKind) -> Self {
        FbcDecision { kind, conjugator: None }
    }
}

/// Conjugacy in `M_ϕ` with the default bounded oracles.
///
/// For `e1 = t^r u`, `e2 = t^s v`: different `r, s` are never conjugate.
/// With `r = s = 0` the question is whether some `uϕ^k` is conjugate to `v`
/// in `F`. Otherwise `t^k g` conjugates `e1` to `e2` exactly when
/// `v = (gϕ^r)⁻¹(uϕ^k)g`, and `k ∈ [0, |r|)` suffices; each of these is
/// settled by the remnant decision for `ϕ^r`, or is `Inapplicable`.
pub fn decide_conjugacy_fbc(group: &FbcGroup, e1: &FbcElement, e2: &FbcElement, orbit_bound: u32) -> Result<FbcDecision> {
    decide_conjugacy_fbc_with(group, e1, e2, &BoundedOrbitSearch { bound: orbit_bound }, None)
}

/// [`decide_conjugacy_fbc`] with explicit oracles. `twisted` is consulted
/// only when the remnant hypothesis fails for `ϕ^r`.
pub fn decide_conjugacy_fbc_with(
    group: &FbcGroup,
    e1: &FbcElement,
    e2: &FbcElement,
    orbit: &dyn OrbitOracle,
    twisted: Option<&dyn TwistedOracle>,
) -> Result<FbcDecision> {
    let e1 = group.make(e1.t_exp, e1.tail.clone())?;
    let e2 = group.make(e2.t_exp, e2.tail.clone())?;
    if e1 == e2 {
        return Ok(FbcDecision { kind: DecisionKind::SameClass, conjugator: Some(group.identity()) });
    }
    if e1.t_exp != e2.t_exp {
        return Ok(FbcDecision::of(DecisionKind::DifferentClasses));
    }
    if e1.t_exp == 0 {
        return Ok(match orbit.find(group, &e1.tail, &e2.tail)? {
            OracleAnswer::Found((k, g)) => FbcDecision {
                kind: DecisionKind::SameClass,
                conjugator: Some(FbcElement { t_exp: k, tail: g }),
            },
            OracleAnswer::Absent => FbcDecision::of(DecisionKind::DifferentClasses),
            OracleAnswer::Unknown => FbcDecision::of(DecisionKind::Unknown),
        });
    }
    // c conjugates e1 to e2 iff it conjugates e1⁻¹ to e2⁻¹, which have positive t-exponent
    let (a, b) = if e1.t_exp < 0 { (group.invert(&e1)?, group.invert(&e2)?) } else { (e1, e2) };
    let r = a.t_exp;
    let psi = group.phi().power(r as u32)?;
    let mut kind = DecisionKind::DifferentClasses;
    let mut cur = a.tail.clone();
    for k in 0..r {
        let d = decide_twisted(&psi, &cur, &b.tail)?;
        let answer = match d.kind {
            DecisionKind::SameClass => OracleAnswer::Found(d.conjugator.expect("same class has a conjugator")),
            DecisionKind::DifferentClasses => OracleAnswer::Absent,
            DecisionKind::Inapplicable | DecisionKind::Unknown => match twisted {
                None => return Ok(FbcDecision::of(DecisionKind::Inapplicable)),
                Some(o) => o.find(&psi, &cur, &b.tail)?,
            },
        };
        match answer {
            OracleAnswer::Found(g) => {
                return Ok(FbcDecision {
                    kind: DecisionKind::SameClass,
                    conjugator: Some(FbcElement { t_exp: k, tail: g }),
                })
            }
            OracleAnswer::Absent => {}
            OracleAnswer::Unknown => kind = DecisionKind::Unknown,
        }
        cur = group.phi().apply(&cur)?;
    }
    Ok(FbcDecision::of(kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn fib() -> FbcGroup {
        let phi = FreeHom::parse(2, &["b", "ab"]).unwrap();
        let inv = FreeHom::parse(2, &["bA", "a"]).unwrap();
        FbcGroup::infinite(phi, Some(inv)).unwrap()
    }

    fn conj_by_a_squared() -> FbcGroup {
        // ϕ = conjugation by a, so ϕ² is conjugation by a² and t² = a²
        let phi = FreeHom::identity(2).conjugated(&w("a")).unwrap();
        FbcGroup::new(phi, None, Order::Finite(2), Some(w("aa"))).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let g = fib();
        assert_eq!(g.normalize(&parse_tokens("ab", 2).unwrap()).unwrap(), FbcElement { t_exp: 0, tail: w("ab") });
        assert_eq!(g.normalize(&parse_tokens("at", 2).unwrap()).unwrap(), FbcElement { t_exp: 1, tail: w("b") });
        let swap = FreeHom::parse(2, &["b", "a"]).unwrap();
        let g2 = FbcGroup::new(swap, None, Order::Finite(2), Some(Word::identity(2))).unwrap();
        assert_eq!(g2.normalize(&parse_tokens("tt", 2).unwrap()).unwrap(), g2.identity());
        let g3 = conj_by_a_squared();
        assert_eq!(g3.normalize(&parse_tokens("tt", 2).unwrap()).unwrap(), FbcElement { t_exp: 0, tail: w("aa") });
        let no_inv = FbcGroup::infinite(fixtures::rh3(), None).unwrap();
        assert_eq!(no_inv.normalize(&parse_tokens("aT", 2).unwrap()), Err(Error::InverseRequired));
    }

    #[test]
    fn validation_rejects_bad_groups() {
        let id = FreeHom::identity(2);
        assert!(matches!(FbcGroup::new(id.clone(), None, Order::Finite(2), Some(w("a"))), Err(Error::InvalidGroup(_))));
        assert!(FbcGroup::new(id.clone(), None, Order::Finite(2), None).is_err());
        assert!(FbcGroup::infinite(fixtures::rh1(), Some(id)).is_err());
        // ϕ = conjugation by a with h = b: ϕ fixes neither side
        let phi = FreeHom::identity(2).conjugated(&w("a")).unwrap();
        assert!(FbcGroup::new(phi, None, Order::Finite(1), Some(w("b"))).is_err());
    }

    #[test]
    fn inverse_and_identity() {
        for g in [fib(), conj_by_a_squared()] {
            let e = g.make(1, w("bA")).unwrap();
            let ei = g.invert(&e).unwrap();
            assert_eq!(g.multiply(&e, &ei).unwrap(), g.identity());
            assert_eq!(g.multiply(&ei, &e).unwrap(), g.identity());
            assert_eq!(g.multiply(&e, &g.identity()).unwrap(), e);
            assert_eq!(g.conjugate(&e, &g.identity()).unwrap(), e);
        }
    }

    #[test]
    fn json_and_text() {
        let g = conj_by_a_squared();
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.contains("\"m\":2") && json.contains("\"h\":\"aa\""));
        assert_eq!(serde_json::from_str::<FbcGroup>(&json).unwrap(), g);
        let inf = serde_json::to_string(&fib()).unwrap();
        assert!(inf.contains("\"m\":\"inf\""));
        assert_eq!(serde_json::from_str::<FbcGroup>(&inf).unwrap(), fib());
        let e = FbcElement::parse("-2:bA", 2).unwrap();
        assert_eq!(e.to_string(), "-2:bA");
    }

    #[test]
    fn ordinary_conjugacy() {
        let x = w("abAB");
        let y = w("bbABaB");
        let g = ordinary_conjugator(&x, &y).unwrap().unwrap();
        assert_eq!(x.conjugate_by(&g).unwrap(), y);
        assert_eq!(ordinary_conjugator(&w("ab"), &w("aB")).unwrap(), None);
        assert_eq!(ordinary_conjugator(&Word::identity(2), &Word::identity(2)).unwrap(), Some(Word::identity(2)));
    }

    #[test]
    fn decisions() {
        let g = FbcGroup::infinite(fixtures::rh3(), None).unwrap();
        let e1 = g.make(1, w("ba")).unwrap();
        let e2 = g.make(1, w("BBBa")).unwrap();
        let d = decide_conjugacy_fbc(&g, &e1, &e2, 3).unwrap();
        assert_eq!(d.kind, DecisionKind::SameClass);
        assert_eq!(g.conjugate(&e1, d.conjugator.as_ref().unwrap()).unwrap(), e2);
        assert_eq!(decide_conjugacy_fbc(&g, &e1, &e1, 3).unwrap().conjugator, Some(g.identity()));
        let e3 = g.make(2, w("ba")).unwrap();
        assert_eq!(decide_conjugacy_fbc(&g, &e1, &e3, 3).unwrap().kind, DecisionKind::DifferentClasses);

        // r = 0: orbit under ϕ plus ordinary conjugacy
        let f = fib();
        let u = w("ba");
        let v = f.apply_power(&u, 2).unwrap().conjugate_by(&w("ab")).unwrap();
        let d = decide_conjugacy_fbc(&f, &f.element(u.clone()).unwrap(), &f.element(v.clone()).unwrap(), 3).unwrap();
        assert_eq!(d.kind, DecisionKind::SameClass);
        let c = d.conjugator.unwrap();
        assert_eq!(f.conjugate(&f.element(u).unwrap(), &c).unwrap(), f.element(v).unwrap());
        let d = decide_conjugacy_fbc(&f, &f.element(w("a")).unwrap(), &f.element(w("aab")).unwrap(), 3).unwrap();
        assert_eq!(d.kind, DecisionKind::Unknown);

        // finite order: the k-search is complete
        let fin = conj_by_a_squared();
        let d = decide_conjugacy_fbc(&fin, &fin.element(w("b")).unwrap(), &fin.element(w("bb")).unwrap(), 0).unwrap();
        assert_eq!(d.kind, DecisionKind::DifferentClasses);
    }

    #[test]
    fn negative_exponent_needs_only_forward_powers() {
        // rh3 is used without an inverse: elements t⁻¹x invert to t(x⁻¹ϕ)
        let g = FbcGroup::infinite(fixtures::rh3(), None).unwrap();
        let e1 = g.make(-1, w("ba")).unwrap();
        // conjugating by t gives t⁻¹(xϕ)
        let e2 = g.conjugate(&e1, &g.t()).unwrap();
        assert_eq!(e2, g.make(-1, g.apply_power(&w("ba"), 1).unwrap()).unwrap());
        let d = decide_conjugacy_fbc(&g, &e1, &e2, 1).unwrap();
        assert_eq!(d.kind, DecisionKind::SameClass);
        let c = d.conjugator.unwrap();
        let (i1, i2) = (g.invert(&e1).unwrap(), g.invert(&e2).unwrap());
        assert_eq!(g.conjugate(&i1, &c).unwrap(), i2);
    }

    #[test]
    fn inapplicable_without_remnant() {
        let swap = FreeHom::parse(2, &["b", "a"]).unwrap();
        let g = FbcGroup::infinite(swap, None).unwrap();
        let e1 = g.make(1, w("ab")).unwrap();
        let e2 = g.make(1, w("ba")).unwrap();
        assert_eq!(decide_conjugacy_fbc(&g, &e1, &e2, 2).unwrap().kind, DecisionKind::Inapplicable);
        let d = decide_conjugacy_fbc_with(&g, &e1, &e2, &BoundedOrbitSearch { bound: 2 }, Some(&BoundedTwistedSearch { maxlen: 4 })).unwrap();
        assert_eq!(d.kind, DecisionKind::SameClass);
        assert_eq!(g.conjugate(&e1, d.conjugator.as_ref().unwrap()).unwrap(), e2);
    }
}
