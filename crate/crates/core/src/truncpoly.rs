//! Truncated polynomials `GF(2)[x]/⟨x^N⟩` and 2×2 matrices over them.
//!
//! Coefficients are stored little-endian and bit-packed: bit `j` is the
//! coefficient of `x^j`. The text form is the bitstring `a_0 a_1 ... a_{N-1}`,
//! so with `N = 7` the polynomial `1 + x + x³` is `1101000`.

use std::fmt;
use std::ops::{Add, Mul};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const LIMB: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    n: usize,
    limbs: Vec<u64>,
}

fn limbs_for(n: usize) -> usize {
    n.div_ceil(LIMB)
}

impl TruncPoly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "truncation degree must be positive");
        TruncPoly { n, limbs: vec![0; limbs_for(n)] }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0)
    }

    /// `x^k`, which is zero once `k >= n`.
    pub fn monomial(n: usize, k: usize) -> Self {
        let mut p = Self::zero(n);
        if k < n {
            p.set(k, true);
        }
        p
    }

    /// Sum of `x^k` over the given exponents (repeats cancel, `k >= n` is dropped).
    pub fn from_exponents(n: usize, exps: &[usize]) -> Self {
        let mut p = Self::zero(n);
        for &k in exps {
            if k < n {
                p.flip(k);
            }
        }
        p
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            p.set(i, b);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        (self.limbs[i / LIMB] >> (i % LIMB)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.n);
        let mask = 1u64 << (i % LIMB);
        if bit {
            self.limbs[i / LIMB] |= mask;
        } else {
            self.limbs[i / LIMB] &= !mask;
        }
    }

    #[inline]
    fn flip(&mut self, i: usize) {
        self.limbs[i / LIMB] ^= 1u64 << (i % LIMB);
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Constant term is 1, i.e. the polynomial lies in `R*`.
    pub fn is_unit_style(&self) -> bool {
        self.coeff(0)
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.coeff(i))
    }

    /// Degree of the lowest nonzero term; `None` for zero.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.support().next()
    }

    fn check(&self, other: &TruncPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        Ok(())
    }

    fn mask_top(&mut self) {
        let rem = self.n % LIMB;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn checked_add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &TruncPoly) -> TruncPoly {
        let limbs = self.limbs.iter().zip(&other.limbs).map(|(a, b)| a ^ b).collect();
        TruncPoly { n: self.n, limbs }
    }

    pub fn checked_mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Carryless product truncated below `x^n`.
    fn mul_unchecked(&self, other: &TruncPoly) -> TruncPoly {
        let mut out = vec![0u64; self.limbs.len()];
        for i in self.support() {
            let (q, r) = (i / LIMB, i % LIMB);
            for (k, &b) in other.limbs.iter().enumerate() {
                if q + k >= out.len() {
                    break;
                }
                out[q + k] ^= b << r;
                if r != 0 && q + k + 1 < out.len() {
                    out[q + k + 1] ^= b >> (LIMB - r);
                }
            }
        }
        let mut p = TruncPoly { n: self.n, limbs: out };
        p.mask_top();
        p
    }

    /// `self(g(x)) mod x^n` by Horner's rule.
    pub fn compose(&self, g: &TruncPoly) -> Result<TruncPoly> {
        self.check(g)?;
        let mut acc = TruncPoly::zero(self.n);
        for i in (0..self.n).rev() {
            acc = acc.mul_unchecked(g);
            if self.coeff(i) {
                acc.flip(0);
            }
        }
        Ok(acc)
    }

    /// The ring endomorphism `f ↦ f(p(x))`, defined when `p(0) = 0`.
    pub fn endo_apply(p: &TruncPoly, f: &TruncPoly) -> Result<TruncPoly> {
        if p.coeff(0) {
            return Err(Error::NotAnEndomorphism);
        }
        f.compose(p)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = TruncPoly::zero(n);
        for l in &mut p.limbs {
            *l = rng.gen();
        }
        p.mask_top();
        p
    }

    /// Random element of `R*` (constant term forced to 1).
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = Self::random(n, rng);
        p.set(0, true);
        p
    }

    /// Random element with zero constant term, i.e. a valid endomorphism.
    pub fn random_zero_const<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p = Self::random(n, rng);
        p.set(0, false);
        p
    }

    /// Parses the little-endian bitstring form.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse { input: s.into(), reason: "empty bitstring".into() });
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse { input: s.into(), reason: "expected 0 or 1".into() }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncPoly::from_bits(&bits))
    }

    pub fn to_bits(&self) -> String {
        (0..self.n).map(|i| if self.coeff(i) { '1' } else { '0' }).collect()
    }

    /// Descending-power form such as `x^6+x^4+x+1`.
    pub fn to_poly_string(&self) -> String {
        let terms: Vec<String> = (0..self.n)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses the descending-power form, e.g. `x^4 + x^3 + 1`.
    pub fn parse_poly(s: &str, n: usize) -> Result<Self> {
        let err = |reason: &str| Error::Parse { input: s.into(), reason: reason.into() };
        let mut exps = Vec::new();
        for term in s.split('+').map(str::trim) {
            match term {
                "0" => {}
                "1" => exps.push(0),
                "x" => exps.push(1),
                t => {
                    let k = t
                        .strip_prefix("x^")
                        .ok_or_else(|| err("unrecognised term"))?
                        .parse::<usize>()
                        .map_err(|_| err("bad exponent"))?;
                    exps.push(k);
                }
            }
        }
        Ok(Self::from_exponents(n, &exps))
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncPoly({})", self.to_poly_string())
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bits())
    }
}

impl Serialize for TruncPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bits())
    }
}

impl<'de> Deserialize<'de> for TruncPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TruncPoly::parse_bits(&s).map_err(serde::de::Error::custom)
    }
}

/// Panics on mismatched truncation degrees; use [`TruncPoly::checked_add`] otherwise.
impl Add for &TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        assert_eq!(self.n, rhs.n, "truncation degree mismatch");
        self.add_unchecked(rhs)
    }
}

/// Panics on mismatched truncation degrees; use [`TruncPoly::checked_mul`] otherwise.
impl Mul for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        assert_eq!(self.n, rhs.n, "truncation degree mismatch");
        self.mul_unchecked(rhs)
    }
}

/// 2×2 matrix over `GF(2)[x]/⟨x^N⟩`, entries row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    entries: [TruncPoly; 4],
}

impl Mat2 {
    pub fn new(entries: [TruncPoly; 4]) -> Result<Self> {
        let n = entries[0].n;
        if let Some(e) = entries.iter().find(|e| e.n != n) {
            return Err(Error::DegreeMismatch(n, e.n));
        }
        Ok(Mat2 { entries })
    }

    pub fn identity(n: usize) -> Self {
        Mat2 {
            entries: [TruncPoly::one(n), TruncPoly::zero(n), TruncPoly::zero(n), TruncPoly::one(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.entries[0].n
    }

    pub fn entries(&self) -> &[TruncPoly; 4] {
        &self.entries
    }

    /// Entry at row `i`, column `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &TruncPoly {
        &self.entries[2 * i + j]
    }

    pub fn mul(&self, other: &Mat2) -> Result<Mat2> {
        if self.n() != other.n() {
            return Err(Error::DegreeMismatch(self.n(), other.n()));
        }
        let e = |i: usize, j: usize| {
            &(self.get(i, 0) * other.get(0, j)) + &(self.get(i, 1) * other.get(1, j))
        };
        Ok(Mat2 { entries: [e(0, 0), e(0, 1), e(1, 0), e(1, 1)] })
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = self.entries.clone();
        Mat2 { entries: [a, c, b, d] }
    }

    /// Applies `f ↦ f(p(x))` to every entry.
    pub fn endo_apply(&self, p: &TruncPoly) -> Result<Mat2> {
        let entries = self
            .entries
            .iter()
            .map(|f| TruncPoly::endo_apply(p, f))
            .collect::<Result<Vec<_>>>()?;
        Mat2::new(entries.try_into().expect("four entries"))
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Mat2 { entries: std::array::from_fn(|_| TruncPoly::random(n, rng)) }
    }

    /// Random matrix whose entries all have constant term 1.
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Mat2 { entries: std::array::from_fn(|_| TruncPoly::random_unit(n, rng)) }
    }

    /// Parses four descending-power polynomials, row-major.
    pub fn parse_poly(rows: [&str; 4], n: usize) -> Result<Self> {
        let entries = rows.map(|s| TruncPoly::parse_poly(s, n));
        let [a, b, c, d] = entries;
        Mat2::new([a?, b?, c?, d?])
    }

    pub fn to_poly_string(&self) -> String {
        let e: Vec<String> = self.entries.iter().map(|p| p.to_poly_string()).collect();
        format!("[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = <[TruncPoly; 4]>::deserialize(d)?;
        Mat2::new(entries).map_err(serde::de::Error::custom)
    }
}

/// `(s∘p)ᵀ · m · (s∘q)`.
pub fn double_twist_mat(s: &Mat2, m: &Mat2, p: &TruncPoly, q: &TruncPoly) -> Result<Mat2> {
    let left = s.endo_apply(p)?.transpose();
    let right = s.endo_apply(q)?;
    left.mul(m)?.mul(&right)
}
