//! Words and homomorphisms of finitely generated free groups.
//!
//! A letter is a nonzero `i32`: `i` stands for the generator `x_i` and `-i`
//! for its inverse. Words are always kept freely reduced.
//!
//! The text codec writes generators `1..=26` as `a..z` and their inverses as
//! `A..Z`, so `bbabbAA` is `b²ab²a⁻²`. Groups of rank above 26 use
//! `x<i>`/`X<i>` tokens instead. The identity prints as `1`.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A freely reduced word in the free group of rank `rank`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    letters: Vec<i32>,
    rank: u32,
}

/// Sort key putting `a < A < b < B < ...`.
#[inline]
pub fn letter_key(x: i32) -> u32 {
    2 * x.unsigned_abs() - u32::from(x > 0)
}

fn check_letter(x: i64, rank: u32) -> Result<i32> {
    if x == 0 || x.unsigned_abs() > u64::from(rank) {
        return Err(Error::InvalidLetter { letter: x, rank });
    }
    Ok(x as i32)
}

/// Appends `x` to an already reduced buffer, cancelling if needed.
#[inline]
pub(crate) fn push_reduced(buf: &mut Vec<i32>, x: i32) {
    if buf.last() == Some(&-x) {
        buf.pop();
    } else {
        buf.push(x);
    }
}

impl Word {
    pub fn identity(rank: u32) -> Self {
        Word { letters: Vec::new(), rank }
    }

    /// The generator `x_i` (or its inverse when `i < 0`).
    pub fn generator(i: i32, rank: u32) -> Result<Self> {
        Ok(Word { letters: vec![check_letter(i64::from(i), rank)?], rank })
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(raw: &[i32], rank: u32) -> Result<Self> {
        let mut letters = Vec::with_capacity(raw.len());
        for &x in raw {
            push_reduced(&mut letters, check_letter(i64::from(x), rank)?);
        }
        Ok(Word { letters, rank })
    }

    /// Builds a word from letters already known to be reduced and in range.
    pub(crate) fn from_reduced(letters: Vec<i32>, rank: u32) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != -p[1]));
        debug_assert!(letters.iter().all(|&x| x != 0 && x.unsigned_abs() <= rank));
        Word { letters, rank }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|x| -x).collect(),
            rank: self.rank,
        }
    }

    fn same_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.same_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let k = cancellation_length(&self.letters, &other.letters);
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * k);
        letters.extend_from_slice(&self.letters[..self.len() - k]);
        letters.extend_from_slice(&other.letters[k..]);
        Word { letters, rank: self.rank }
    }

    /// Product of several words of the same rank.
    pub fn product<'a>(rank: u32, words: impl IntoIterator<Item = &'a Word>) -> Result<Word> {
        let mut buf = Vec::new();
        for w in words {
            if w.rank != rank {
                return Err(Error::RankMismatch { expected: rank, found: w.rank });
            }
            for &x in &w.letters {
                push_reduced(&mut buf, x);
            }
        }
        Ok(Word { letters: buf, rank })
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..n.unsigned_abs() {
            for &x in &base.letters {
                push_reduced(&mut buf, x);
            }
        }
        Word { letters: buf, rank: self.rank }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Word) -> Result<Word> {
        Word::product(self.rank, [&g.inverse(), self, g])
    }

    /// The same word viewed in a free group of larger rank.
    pub fn with_rank(&self, rank: u32) -> Result<Word> {
        if let Some(&x) = self.letters.iter().find(|x| x.unsigned_abs() > rank) {
            return Err(Error::InvalidLetter { letter: i64::from(x), rank });
        }
        Ok(Word { letters: self.letters.clone(), rank })
    }

    /// Number of letters equal to `x_i` or `x_i⁻¹`.
    pub fn occurrences(&self, i: u32) -> usize {
        self.letters.iter().filter(|x| x.unsigned_abs() == i).count()
    }

    /// Cyclically reduced core `c` and conjugator `p` with `self = p c p⁻¹`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k] == -l[l.len() - 1 - k] {
            k += 1;
        }
        (
            Word { letters: l[k..l.len() - k].to_vec(), rank: self.rank },
            Word { letters: l[..k].to_vec(), rank: self.rank },
        )
    }

    /// Compares by length, then lexicographically with `a < A < b < B < ...`.
    pub fn canonical_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters
                .iter()
                .map(|&x| letter_key(x))
                .cmp(other.letters.iter().map(|&x| letter_key(x)))
        })
    }

    /// Parses the compact letter form (`bbabbAA`, `x27X3`, `1` for the identity).
    pub fn parse(s: &str, rank: u32) -> Result<Word> {
        let err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::identity(rank));
        }
        let chars: Vec<char> = t.chars().collect();
        let mut raw = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if (c == 'x' || c == 'X') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let idx: i64 = chars[start..end]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("bad generator index"))?;
                raw.push(if c == 'x' { idx } else { -idx });
                i = end;
            } else if c.is_ascii_lowercase() {
                raw.push(i64::from(c as u8 - b'a' + 1));
                i += 1;
            } else if c.is_ascii_uppercase() {
                raw.push(-i64::from(c as u8 - b'A' + 1));
                i += 1;
            } else {
                return Err(err("unexpected character"));
            }
        }
        let raw = raw
            .into_iter()
            .map(|x| check_letter(x, rank))
            .collect::<Result<Vec<_>>>()?;
        Word::reduce(&raw, rank)
    }

    /// Parses GAP-style output such as `b^2*a*b^-2` or `<identity ...>`.
    pub fn parse_gap(s: &str, rank: u32) -> Result<Word> {
        let err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        if t.is_empty() || t.starts_with("<identity") || t == "1" {
            return Ok(Word::identity(rank));
        }
        let mut raw = Vec::new();
        for factor in t.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (factor, 1),
            };
            let g = Word::parse(base, rank)?;
            if g.len() != 1 {
                return Err(err("factor is not a single generator"));
            }
            let x = g.letters[0];
            for _ in 0..exp.unsigned_abs() {
                raw.push(if exp < 0 { -x } else { x });
            }
        }
        Word::reduce(&raw, rank)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank.cmp(&other.rank).then_with(|| self.canonical_cmp(other))
    }
}

/// Serializes as the compact text form.
impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &x in &self.letters {
            let i = x.unsigned_abs();
            if self.rank <= 26 {
                let base = if x > 0 { b'a' } else { b'A' };
                write!(f, "{}", (base + (i - 1) as u8) as char)?;
            } else {
                write!(f, "{}{}", if x > 0 { 'x' } else { 'X' }, i)?;
            }
        }
        Ok(())
    }
}

/// Length of the cancellation in the product `u·w` of two reduced words.
#[inline]
pub(crate) fn cancellation_length(u: &[i32], w: &[i32]) -> usize {
    u.iter()
        .rev()
        .zip(w.iter())
        .take_while(|(a, b)| **a == -**b)
        .count()
}

/// Maximal prefix of `w` that cancels in the product `u·w`.
pub fn initial_cancelling_segment(w: &Word, u: &Word) -> Word {
    let k = cancellation_length(&u.letters, &w.letters);
    Word { letters: w.letters[..k].to_vec(), rank: w.rank }
}

/// Maximal suffix of `w` that cancels in the product `w·u`.
pub fn terminal_cancelling_segment(w: &Word, u: &Word) -> Word {
    let k = cancellation_length(&w.letters, &u.letters);
    Word { letters: w.letters[w.len() - k..].to_vec(), rank: w.rank }
}

/// All reduced words of length at most `maxlen`, in canonical order.
pub fn words_up_to(rank: u32, maxlen: usize) -> Vec<Word> {
    let alphabet = alphabet(rank);
    let mut out = vec![Word::identity(rank)];
    let mut layer = vec![Vec::<i32>::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for &x in &alphabet {
                if w.last() != Some(&-x) {
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|l| Word { letters: l.clone(), rank }));
        layer = next;
    }
    out
}

/// Signed generators in canonical order `a, A, b, B, ...`.
pub fn alphabet(rank: u32) -> Vec<i32> {
    (1..=rank as i32).flat_map(|i| [i, -i]).collect()
}

/// A homomorphism between free groups, given by the images of the generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawHom", into = "RawHom")]
pub struct FreeHom {
    domain_rank: u32,
    codomain_rank: u32,
    images: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct RawHom {
    domain_rank: u32,
    codomain_rank: u32,
    images: Vec<String>,
}

impl TryFrom<RawHom> for FreeHom {
    type Error = Error;

    fn try_from(raw: RawHom) -> Result<Self> {
        let images = raw
            .images
            .iter()
            .map(|s| Word::parse(s, raw.codomain_rank))
            .collect::<Result<Vec<_>>>()?;
        FreeHom::new(raw.domain_rank, raw.codomain_rank, images)
    }
}

impl From<FreeHom> for RawHom {
    fn from(f: FreeHom) -> Self {
        RawHom {
            domain_rank: f.domain_rank,
            codomain_rank: f.codomain_rank,
            images: f.images.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl FreeHom {
    pub fn new(domain_rank: u32, codomain_rank: u32, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain_rank as usize {
            return Err(Error::RankMismatch { expected: domain_rank, found: images.len() as u32 });
        }
        if let Some(w) = images.iter().find(|w| w.rank != codomain_rank) {
            return Err(Error::RankMismatch { expected: codomain_rank, found: w.rank });
        }
        Ok(FreeHom { domain_rank, codomain_rank, images })
    }

    /// Endomorphism of the free group of rank `rank` from compact-form images.
    pub fn parse(rank: u32, images: &[&str]) -> Result<Self> {
        let images = images.iter().map(|s| Word::parse(s, rank)).collect::<Result<Vec<_>>>()?;
        FreeHom::new(rank, rank, images)
    }

    pub fn identity(rank: u32) -> Self {
        let images = (1..=rank as i32).map(|i| Word::from_reduced(vec![i], rank)).collect();
        FreeHom { domain_rank: rank, codomain_rank: rank, images }
    }

    pub fn domain_rank(&self) -> u32 {
        self.domain_rank
    }

    pub fn codomain_rank(&self) -> u32 {
        self.codomain_rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of the generator `x_i`, `1 <= i <= domain_rank`.
    pub fn image(&self, i: u32) -> &Word {
        &self.images[i as usize - 1]
    }

    /// Image of a signed letter.
    pub fn letter_image(&self, x: i32) -> Word {
        let w = self.image(x.unsigned_abs());
        if x > 0 {
            w.clone()
        } else {
            w.inverse()
        }
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain_rank == self.codomain_rank
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank != self.domain_rank {
            return Err(Error::RankMismatch { expected: self.domain_rank, found: w.rank });
        }
        Ok(self.apply_unchecked(w.letters()))
    }

    pub(crate) fn apply_unchecked(&self, letters: &[i32]) -> Word {
        let mut buf = Vec::new();
        for &x in letters {
            let img = &self.images[x.unsigned_abs() as usize - 1].letters;
            if x > 0 {
                img.iter().for_each(|&y| push_reduced(&mut buf, y));
            } else {
                img.iter().rev().for_each(|&y| push_reduced(&mut buf, -y));
            }
        }
        Word { letters: buf, rank: self.codomain_rank }
    }

    /// `self` followed by `g`: `w ↦ (w self) g`.
    pub fn then(&self, g: &FreeHom) -> Result<FreeHom> {
        if self.codomain_rank != g.domain_rank {
            return Err(Error::RankMismatch { expected: g.domain_rank, found: self.codomain_rank });
        }
        let images = self.images.iter().map(|w| g.apply_unchecked(&w.letters)).collect();
        Ok(FreeHom { domain_rank: self.domain_rank, codomain_rank: g.codomain_rank, images })
    }

    /// The `k`-th iterate of an endomorphism (`k = 0` gives the identity).
    pub fn power(&self, k: u32) -> Result<FreeHom> {
        if !self.is_endomorphism() {
            return Err(Error::RankMismatch { expected: self.domain_rank, found: self.codomain_rank });
        }
        let mut acc = FreeHom::identity(self.domain_rank);
        for _ in 0..k {
            acc = acc.then(self)?;
        }
        Ok(acc)
    }

    fn check_codomain(&self, w: &Word) -> Result<()> {
        if w.rank != self.codomain_rank {
            return Err(Error::RankMismatch { expected: self.codomain_rank, found: w.rank });
        }
        Ok(())
    }

    /// `self * u * v` on `G * ⟨b1⟩ * ⟨b2⟩`: `a_i ↦ a_i self`, `b1 ↦ u`, `b2 ↦ v`.
    pub fn free_product_hom(&self, u: &Word, v: &Word) -> Result<FreeHom> {
        self.check_codomain(u)?;
        self.check_codomain(v)?;
        let mut images = self.images.clone();
        images.push(u.clone());
        images.push(v.clone());
        Ok(FreeHom { domain_rank: self.domain_rank + 2, codomain_rank: self.codomain_rank, images })
    }

    /// `self * g` on `G * G`: the first copy maps by `self`, the second by `g`.
    pub fn join(&self, g: &FreeHom) -> Result<FreeHom> {
        if self.codomain_rank != g.codomain_rank {
            return Err(Error::RankMismatch { expected: self.codomain_rank, found: g.codomain_rank });
        }
        let mut images = self.images.clone();
        images.extend(g.images.iter().cloned());
        Ok(FreeHom {
            domain_rank: self.domain_rank + g.domain_rank,
            codomain_rank: self.codomain_rank,
            images,
        })
    }

    /// `self` followed by right conjugation by `v`: `a ↦ v⁻¹ (a self) v`.
    pub fn conjugated(&self, v: &Word) -> Result<FreeHom> {
        self.check_codomain(v)?;
        let vi = v.inverse();
        let images = self
            .images
            .iter()
            .map(|w| Word::product(self.codomain_rank, [&vi, w, v]))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeHom { images, ..self.clone() })
    }

    /// Extension to `G * ⟨z⟩ → H * ⟨z⟩`, with `z` the new highest generator.
    ///
    /// `z ↦ u z u⁻¹` unless `fix_z`, in which case `z ↦ z`.
    pub fn extend_z(&self, u: &Word, fix_z: bool) -> Result<FreeHom> {
        self.check_codomain(u)?;
        let rank = self.codomain_rank + 1;
        let z = Word::from_reduced(vec![rank as i32], rank);
        let mut images = self
            .images
            .iter()
            .map(|w| w.with_rank(rank))
            .collect::<Result<Vec<_>>>()?;
        images.push(if fix_z {
            z
        } else {
            let u = u.with_rank(rank)?;
            Word::product(rank, [&u, &z, &u.inverse()])?
        });
        Ok(FreeHom { domain_rank: self.domain_rank + 1, codomain_rank: rank, images })
    }

    pub fn random<R: Rng + ?Sized>(domain_rank: u32, codomain_rank: u32, maxlen: usize, rng: &mut R) -> Self {
        let images = (0..domain_rank).map(|_| random_word(codomain_rank, maxlen, rng)).collect();
        FreeHom { domain_rank, codomain_rank, images }
    }
}

impl fmt::Display for FreeHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let g = Word::from_reduced(vec![i as i32 + 1], self.domain_rank);
            write!(f, "{g} -> {w}")?;
        }
        Ok(())
    }
}

/// Product of `maxlen` uniformly drawn signed generators, freely reduced.
///
/// The result can be shorter than `maxlen` and may be the identity.
pub fn random_word<R: Rng + ?Sized>(rank: u32, maxlen: usize, rng: &mut R) -> Word {
    let mut buf = Vec::with_capacity(maxlen);
    for _ in 0..maxlen {
        let g = rng.gen_range(1..=rank as i32);
        let x = if rng.gen_bool(0.5) { g } else { -g };
        push_reduced(&mut buf, x);
    }
    Word { letters: buf, rank }
}

/// Seeded generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
