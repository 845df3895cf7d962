//! Remnants of free-group homomorphisms and the conditions built on them.
//!
//! For a generator `a`, the remnant of `a` under `f` is the longest middle
//! subword of `af` that survives every product `(bf)^{±1}(af)` and
//! `(af)(bf)^{±1}`, except the trivially cancelling `(af)⁻¹(af)` and
//! `(af)(af)⁻¹`. A homomorphism "has remnant" when every generator has a
//! nonempty one.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{initial_cancelling_segment, terminal_cancelling_segment, FreeHom, Word};

/// Decomposition `af = prefix · remnant · suffix` of a generator image.
///
/// When the generator has no remnant the triple is `(af, 1, 1)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RemnantTriple {
    pub prefix: Word,
    pub remnant: Word,
    pub suffix: Word,
    pub has_remnant: bool,
}

/// Remnant triple of generator `x_i` (`1 <= i <= domain_rank`).
pub fn remnant_triple(f: &FreeHom, i: u32) -> RemnantTriple {
    let image = f.image(i);
    let rank = f.codomain_rank();
    let me = i as i32;
    let others = (1..=f.domain_rank() as i32)
        .flat_map(|j| [j, -j])
        .filter(|&y| y != -me)
        .map(|y| f.letter_image(y));

    let mut prefix = Word::identity(rank);
    let mut suffix = Word::identity(rank);
    for other in others {
        let p = initial_cancelling_segment(image, &other);
        if p.len() > prefix.len() {
            prefix = p;
        }
        let s = terminal_cancelling_segment(image, &other);
        if s.len() > suffix.len() {
            suffix = s;
        }
    }

    if image.is_empty() || prefix.len() + suffix.len() >= image.len() {
        return RemnantTriple {
            prefix: image.clone(),
            remnant: Word::identity(rank),
            suffix: Word::identity(rank),
            has_remnant: false,
        };
    }
    let middle = image.letters()[prefix.len()..image.len() - suffix.len()].to_vec();
    RemnantTriple {
        prefix,
        remnant: Word::from_reduced(middle, rank),
        suffix,
        has_remnant: true,
    }
}

/// All remnant triples, indexed by generator `1..=domain_rank` (position `i-1`).
pub fn remnant_triples(f: &FreeHom) -> Vec<RemnantTriple> {
    (1..=f.domain_rank()).map(|i| remnant_triple(f, i)).collect()
}

pub fn has_remnant(f: &FreeHom) -> bool {
    (1..=f.domain_rank()).all(|i| remnant_triple(f, i).has_remnant)
}

/// Minimum remnant length over all generators.
pub fn remnant_length(f: &FreeHom) -> Result<usize> {
    let triples = remnant_triples(f);
    if !triples.iter().all(|t| t.has_remnant) {
        return Err(Error::NoRemnant);
    }
    Ok(triples.iter().map(|t| t.remnant.len()).min().unwrap_or(0))
}

/// Minimum of `|Rem(a)| / |af|` over all generators.
pub fn remnant_ratio(f: &FreeHom) -> Result<Ratio<usize>> {
    let triples = remnant_triples(f);
    if !triples.iter().all(|t| t.has_remnant) {
        return Err(Error::NoRemnant);
    }
    triples
        .iter()
        .zip(f.images())
        .map(|(t, img)| Ratio::new(t.remnant.len(), img.len()))
        .min()
        .ok_or(Error::NoRemnant)
}

/// Remnant lengths of `f`, or `None` if some generator has no remnant.
fn remnant_lengths(f: &FreeHom) -> Option<Vec<usize>> {
    remnant_triples(f)
        .into_iter()
        .map(|t| t.has_remnant.then_some(t.remnant.len()))
        .collect()
}

/// `f` has remnant and `|Rem_f(a)| > |ag|` for every generator `a`.
pub fn has_bsl(f: &FreeHom, g: &FreeHom) -> bool {
    if f.domain_rank() != g.domain_rank() {
        return false;
    }
    match remnant_lengths(f) {
        Some(lens) => lens.iter().zip(g.images()).all(|(&r, img)| r > img.len()),
        None => false,
    }
}

/// `min_a (|Rem_f(a)| - |ag|)`, defined when [`has_bsl`] holds.
pub fn min_bsl(f: &FreeHom, g: &FreeHom) -> Result<usize> {
    if !has_bsl(f, g) {
        return Err(Error::BslViolated);
    }
    let lens = remnant_lengths(f).ok_or(Error::BslViolated)?;
    Ok(lens
        .iter()
        .zip(g.images())
        .map(|(&r, img)| r - img.len())
        .min()
        .unwrap_or(0))
}

/// Remnant inequality for `f * u * v`: it has remnant on all of
/// `G * Z * Z` and `|Rem(a)| >= |ag|` for the generators `a` of `G`.
///
/// When true, `u` and `v` lie in different doubly-twisted classes.
pub fn has_bslw(f: &FreeHom, g: &FreeHom, u: &Word, v: &Word) -> Result<bool> {
    if f.codomain_rank() <= 1 {
        return Err(Error::RankTooSmall);
    }
    let fph = f.free_product_hom(u, v)?;
    let Some(lens) = remnant_lengths(&fph) else {
        return Ok(false);
    };
    Ok(lens.iter().zip(g.images()).all(|(&r, img)| r >= img.len()))
}

/// Strong remnant criterion for `[u] ≠ [v]`.
///
/// Builds `f^v * g` on `G * G` and requires it to have remnant, with every
/// remnant surviving the products `X · v⁻¹u` and `u⁻¹v · X` for each
/// generator image `X` and its inverse. A `true` answer certifies that `u`
/// and `v` are in different classes; `false` means the criterion does not
/// apply.
pub fn different_classes_strong(f: &FreeHom, g: &FreeHom, u: &Word, v: &Word) -> Result<bool> {
    if u == v {
        return Ok(false);
    }
    let joined = f.conjugated(v)?.join(g)?;
    let triples = remnant_triples(&joined);
    if !triples.iter().all(|t| t.has_remnant) {
        return Ok(false);
    }
    let right = v.inverse().multiply(u)?;
    let left = u.inverse().multiply(v)?;
    for (t, x) in triples.iter().zip(joined.images()) {
        let (p, r, s) = (t.prefix.len(), t.remnant.len(), t.suffix.len());
        let xi = x.inverse();
        let survives = terminal_cancelling_segment(x, &right).len() < s + r
            && initial_cancelling_segment(x, &left).len() < p + r
            && terminal_cancelling_segment(&xi, &right).len() < p + r
            && initial_cancelling_segment(&xi, &left).len() < s + r;
        if !survives {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn in_equalizer(f: &FreeHom, g: &FreeHom, w: &Word) -> Result<bool> {
    Ok(f.apply(w)? == g.apply(w)?)
}

/// Which result certifies that the equalizer `Eq(f, g)` is trivial.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum EqualizerCertificate {
    /// Strict remnant inequality on every generator.
    StrictGap,
    /// Strict inequality except one generator with equality and distinct images.
    OneTightGenerator,
    /// The join `f * g` on `G * G` has remnant.
    JoinHasRemnant,
    Unknown,
}

impl EqualizerCertificate {
    pub fn is_trivial(self) -> bool {
        self != EqualizerCertificate::Unknown
    }
}

pub fn equalizer_trivial_certificate(f: &FreeHom, g: &FreeHom) -> EqualizerCertificate {
    if f.domain_rank() != g.domain_rank() || f.codomain_rank() != g.codomain_rank() {
        return EqualizerCertificate::Unknown;
    }
    if has_bsl(f, g) {
        return EqualizerCertificate::StrictGap;
    }
    if let Some(lens) = remnant_lengths(f) {
        let mut equal = Vec::new();
        let mut rest_strict = true;
        for (i, (&r, img)) in lens.iter().zip(g.images()).enumerate() {
            match r.cmp(&img.len()) {
                std::cmp::Ordering::Equal => equal.push(i),
                std::cmp::Ordering::Less => rest_strict = false,
                std::cmp::Ordering::Greater => {}
            }
        }
        if rest_strict && equal.len() == 1 && f.images()[equal[0]] != g.images()[equal[0]] {
            return EqualizerCertificate::OneTightGenerator;
        }
    }
    if f.join(g).is_ok_and(|j| has_remnant(&j)) {
        return EqualizerCertificate::JoinHasRemnant;
    }
    EqualizerCertificate::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn triple(t: &RemnantTriple) -> [String; 3] {
        [t.prefix.to_string(), t.remnant.to_string(), t.suffix.to_string()]
    }

    #[test]
    fn worked_example_remnants() {
        let phi = FreeHom::parse(2, &["aabaBB", "baaaabAA"]).unwrap();
        assert_eq!(triple(&remnant_triple(&phi, 1)), ["aa", "baB", "B"]);
        assert_eq!(triple(&remnant_triple(&phi, 2)), ["b", "aaaab", "AA"]);
        assert_eq!(remnant_length(&phi).unwrap(), 3);
        assert_eq!(remnant_ratio(&phi).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn reference_session_triples() {
        let rh1 = fixtures::rh1();
        assert_eq!(triple(&remnant_triple(&rh1, 1)), ["b", "babbAA", "1"]);
        assert_eq!(triple(&remnant_triple(&rh1, 2)), ["1", "ABaBaa", "B"]);
        assert!(has_remnant(&rh1));
        assert!(!has_remnant(&fixtures::rh2()));
        assert_eq!(remnant_length(&rh1).unwrap(), 6);
        assert_eq!(remnant_length(&fixtures::rh2()), Err(Error::NoRemnant));
    }

    #[test]
    fn degenerate_images() {
        let f = FreeHom::parse(2, &["a", "a"]).unwrap();
        assert!(!has_remnant(&f));
        let f = FreeHom::parse(2, &["", "ab"]).unwrap();
        let t = remnant_triple(&f, 1);
        assert!(!t.has_remnant && t.prefix.is_identity());
        // each generator survives untouched: Rem(a) = a
        assert!(has_remnant(&FreeHom::identity(2)));
        assert_eq!(remnant_length(&FreeHom::identity(2)).unwrap(), 1);
    }

    #[test]
    fn bsl_fixtures() {
        let (rh1, rh2) = (fixtures::rh1(), fixtures::rh2());
        assert!(has_bsl(&rh1, &rh2));
        assert_eq!(min_bsl(&rh1, &rh2).unwrap(), 3);
        assert!(has_bsl(&fixtures::rh3(), &fixtures::rh4()));
        assert!(!has_bsl(&rh1, &rh1));
        assert_eq!(min_bsl(&rh2, &rh1), Err(Error::BslViolated));
        assert!(!has_bslw(&rh1, &rh2, &fixtures::u1(), &fixtures::v1()).unwrap());
        assert!(!has_bslw(&rh1, &rh2, &fixtures::u2(), &fixtures::v2()).unwrap());
        let r1 = FreeHom::parse(1, &["aa"]).unwrap();
        assert_eq!(has_bslw(&r1, &r1, &Word::identity(1), &Word::identity(1)), Err(Error::RankTooSmall));
    }

    #[test]
    fn strong_criterion_never_applies_to_identity() {
        let id = FreeHom::identity(2);
        let rh1 = fixtures::rh1();
        for (u, v) in [("ab", "ba"), ("bAbA", "bABB"), ("aab", "b")] {
            assert!(!different_classes_strong(&rh1, &id, &w(u), &w(v)).unwrap());
        }
        assert!(!different_classes_strong(&rh1, &fixtures::rh2(), &w("ab"), &w("ab")).unwrap());
    }

    #[test]
    fn equalizer_certificates() {
        let (rh1, rh2) = (fixtures::rh1(), fixtures::rh2());
        assert_eq!(equalizer_trivial_certificate(&rh1, &rh2), EqualizerCertificate::StrictGap);
        assert_eq!(equalizer_trivial_certificate(&rh1, &rh1), EqualizerCertificate::Unknown);
        assert!(in_equalizer(&rh1, &rh2, &Word::identity(2)).unwrap());
        assert!(!in_equalizer(&rh1, &rh2, &w("a")).unwrap());
    }
}
