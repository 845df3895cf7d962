//! Key recovery for the truncated-polynomial scheme via truncated degree-2
//! Gröbner bases.
//!
//! Writing each unknown secret entry as `s̃_i = 1 + Σ_j y_ij x^j`, the public
//! relation `t = (s̃∘p)ᵀ w (s̃∘q)` becomes a quadratic system in the bits
//! `y_ij`. Coefficients of `x^d` are added one degree at a time; after each
//! step a Gröbner basis restricted to degree 2 is computed, linear
//! polynomials are solved by row reduction, and solved variables are
//! substituted back.
//!
//! Polynomials live in the Boolean ring: monomials are squarefree
//! (`y² = y`), which accounts for the field equations `y² − y` implicitly.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{PublicKey, SecretKey};
use crate::truncpoly::{double_twist_mat, Mat2, TruncPoly};

pub type Var = u32;

/// Index of `y_ij` (`i ∈ 1..=4`, `j ∈ 1..n`). Lower index means larger
/// variable: `y_11 > y_12 > ... > y_{4,n-1}`.
pub fn var_index(i: usize, j: usize, n: usize) -> Var {
    debug_assert!((1..=4).contains(&i) && (1..n).contains(&j));
    ((i - 1) * (n - 1) + (j - 1)) as Var
}

/// Inverse of [`var_index`].
pub fn var_name(v: Var, n: usize) -> (usize, usize) {
    let v = v as usize;
    (v / (n - 1) + 1, v % (n - 1) + 1)
}

/// Squarefree monomial: sorted, duplicate-free variable indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BoolMonomial {
    vars: Vec<Var>,
}

impl BoolMonomial {
    pub fn one() -> Self {
        BoolMonomial { vars: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        BoolMonomial { vars: vec![v] }
    }

    pub fn from_vars(vars: impl IntoIterator<Item = Var>) -> Self {
        let set: BTreeSet<Var> = vars.into_iter().collect();
        BoolMonomial { vars: set.into_iter().collect() }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    /// Product in the Boolean ring (union of variable sets).
    pub fn mul(&self, other: &BoolMonomial) -> BoolMonomial {
        let mut out = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() || j < other.vars.len() {
            match (self.vars.get(i), other.vars.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    out.push(a);
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    out.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    out.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    out.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        BoolMonomial { vars: out }
    }

    pub fn divides(&self, other: &BoolMonomial) -> bool {
        self.vars.iter().all(|v| other.vars.binary_search(v).is_ok())
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &BoolMonomial) -> BoolMonomial {
        BoolMonomial { vars: other.vars.iter().copied().filter(|v| self.vars.binary_search(v).is_err()).collect() }
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        self.vars.iter().all(|&v| bits[v as usize])
    }
}

/// Graded reverse lexicographic order.
///
/// Higher degree wins; for equal degree, `α > β` when the last (smallest)
/// variable at which the exponent vectors differ occurs in `β`.
pub fn grevlex_compare(a: &BoolMonomial, b: &BoolMonomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let (mut i, mut j) = (a.vars.len(), b.vars.len());
        while i > 0 && j > 0 {
            let (x, y) = (a.vars[i - 1], b.vars[j - 1]);
            match x.cmp(&y) {
                Ordering::Equal => {
                    i -= 1;
                    j -= 1;
                }
                // the smallest differing variable belongs to a
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
            }
        }
        Ordering::Equal
    })
}

impl Ord for BoolMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_compare(self, other)
    }
}

impl PartialOrd for BoolMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over `GF(2)` in the Boolean ring; terms sorted by grevlex,
/// so the leading term is the last one.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct BoolPoly {
    terms: BTreeSet<BoolMonomial>,
}

impl BoolPoly {
    pub fn zero() -> Self {
        BoolPoly::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(BoolMonomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::from_monomial(BoolMonomial::var(v))
    }

    pub fn constant(bit: bool) -> Self {
        if bit {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn from_monomial(m: BoolMonomial) -> Self {
        BoolPoly { terms: BTreeSet::from([m]) }
    }

    /// Sum of the given monomials (repeats cancel).
    pub fn from_terms(terms: impl IntoIterator<Item = BoolMonomial>) -> Self {
        let mut p = BoolPoly::zero();
        for m in terms {
            p.toggle(m);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &BoolMonomial> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.first().is_some_and(BoolMonomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&BoolMonomial> {
        self.terms.last()
    }

    pub fn degree(&self) -> usize {
        self.lead().map_or(0, BoolMonomial::degree)
    }

    pub fn constant_term(&self) -> bool {
        self.terms.first().is_some_and(BoolMonomial::is_one)
    }

    fn toggle(&mut self, m: BoolMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &BoolPoly) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &BoolPoly) -> BoolPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul_monomial(&self, m: &BoolMonomial) -> BoolPoly {
        BoolPoly::from_terms(self.terms.iter().map(|t| t.mul(m)))
    }

    pub fn mul(&self, other: &BoolPoly) -> BoolPoly {
        let mut out = BoolPoly::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        self.terms.iter().filter(|m| m.eval(bits)).count() % 2 == 1
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|m| m.vars.iter().copied()).collect()
    }

    /// Replaces each variable in `subst` by its polynomial.
    pub fn substitute(&self, subst: &BTreeMap<Var, BoolPoly>) -> BoolPoly {
        let mut out = BoolPoly::zero();
        for m in &self.terms {
            let mut prod = BoolPoly::one();
            let mut rest = Vec::new();
            for v in &m.vars {
                match subst.get(v) {
                    Some(p) => prod = prod.mul(p),
                    None => rest.push(*v),
                }
            }
            out.add_assign(&prod.mul_monomial(&BoolMonomial { vars: rest }));
        }
        out
    }
}

impl Serialize for BoolPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|m| {
                if m.is_one() {
                    "1".to_string()
                } else {
                    m.vars.iter().map(|v| format!("y{v}")).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Polynomial in `x` whose coefficients are Boolean polynomials in the `y`s.
pub type SymPoly = Vec<BoolPoly>;

/// 2×2 matrix of [`SymPoly`], row-major, each of length `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolicMat {
    pub n: usize,
    pub entries: [SymPoly; 4],
}

fn sym_add(a: &SymPoly, b: &SymPoly) -> SymPoly {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sym_mul(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let n = a.len();
    let mut out = vec![BoolPoly::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j].add_assign(&x.mul(y));
            }
        }
    }
    out
}

fn sym_const(f: &TruncPoly) -> SymPoly {
    (0..f.n()).map(|k| BoolPoly::constant(f.coeff(k))).collect()
}

fn sym_mat_mul(a: &[SymPoly; 4], b: &[SymPoly; 4]) -> [SymPoly; 4] {
    let e = |i: usize, j: usize| sym_add(&sym_mul(&a[2 * i], &b[j]), &sym_mul(&a[2 * i + 1], &b[2 + j]));
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

/// `s̃_i ∘ p` with `s̃_i = 1 + Σ_j y_ij x^j`; linear in the `y`s.
fn compose_unknown(i: usize, powers: &[TruncPoly], n: usize) -> SymPoly {
    let mut out = vec![BoolPoly::zero(); n];
    out[0] = BoolPoly::one();
    for j in 1..n {
        let v = var_index(i, j, n);
        for (k, c) in out.iter_mut().enumerate() {
            if powers[j].coeff(k) {
                c.add_assign(&BoolPoly::var(v));
            }
        }
    }
    out
}

fn powers_of(p: &TruncPoly) -> Vec<TruncPoly> {
    let n = p.n();
    let mut out = vec![TruncPoly::one(n)];
    for j in 1..n {
        let next = &out[j - 1] * p;
        out.push(next);
    }
    out
}

/// The right-hand side `(s̃∘p)ᵀ w (s̃∘q)` with unknown secret entries.
pub fn symbolic_rhs(pk: &PublicKey) -> SymbolicMat {
    let n = pk.n();
    let (pp, qp) = (powers_of(&pk.p), powers_of(&pk.q));
    let sp: Vec<SymPoly> = (1..=4).map(|i| compose_unknown(i, &pp, n)).collect();
    let sq: Vec<SymPoly> = (1..=4).map(|i| compose_unknown(i, &qp, n)).collect();
    let left = [sp[0].clone(), sp[2].clone(), sp[1].clone(), sp[3].clone()];
    let right = [sq[0].clone(), sq[1].clone(), sq[2].clone(), sq[3].clone()];
    let w = pk.w.entries().clone().map(|f| sym_const(&f));
    let entries = sym_mat_mul(&sym_mat_mul(&left, &w), &right);
    SymbolicMat { n, entries }
}

/// `B_d`: for each entry, coefficient of `x^d` on the right minus that of `t`.
pub fn coefficient_equations(sym: &SymbolicMat, t: &Mat2, d: usize) -> Result<Vec<BoolPoly>> {
    if d == 0 || d >= sym.n {
        return Err(Error::DegreeOutOfRange { degree: d, n: sym.n });
    }
    Ok((0..4)
        .map(|e| sym.entries[e][d].add(&BoolPoly::constant(t.entries()[e].coeff(d))))
        .filter(|p| !p.is_zero())
        .collect())
}

/// Full reduction of `f` by `basis`, leading terms first.
fn reduce(f: &BoolPoly, basis: &[BoolPoly]) -> BoolPoly {
    let mut p = f.clone();
    let mut rem = BoolPoly::zero();
    while let Some(m) = p.terms.pop_last() {
        match basis.iter().find(|g| g.lead().is_some_and(|l| l.divides(&m))) {
            Some(g) => {
                let q = g.lead().unwrap().quotient_of(&m);
                // m itself was already removed; add the rest of q·g
                let mut qg = g.mul_monomial(&q);
                qg.toggle(m);
                p.add_assign(&qg);
            }
            None => {
                rem.terms.insert(m);
            }
        }
    }
    rem
}

/// Gröbner basis computation that only processes S-pairs whose leading-term
/// lcm has degree at most 2. The result is reduced: leading terms are
/// pairwise non-divisible and tails are fully reduced.
///
/// Besides ordinary pairs, each basis element with linear leading term `y`
/// is paired with the field equation `y² − y`, which amounts to adding `y·f`.
pub fn truncated_groebner_deg2(input: &[BoolPoly]) -> Vec<BoolPoly> {
    let mut basis: Vec<BoolPoly> = Vec::new();
    let mut pairs: Vec<(usize, Option<usize>)> = Vec::new();

    let push = |f: &BoolPoly, basis: &mut Vec<BoolPoly>, pairs: &mut Vec<(usize, Option<usize>)>| -> bool {
        let r = reduce(f, basis);
        if r.is_zero() {
            return false;
        }
        let idx = basis.len();
        let lead = r.lead().unwrap().clone();
        if lead.degree() == 1 {
            pairs.push((idx, None));
        }
        for (k, g) in basis.iter().enumerate() {
            if lead.mul(g.lead().unwrap()).degree() <= 2 {
                pairs.push((k, Some(idx)));
            }
        }
        let one = r.is_one();
        basis.push(r);
        one
    };

    let mut sorted: Vec<&BoolPoly> = input.iter().filter(|p| !p.is_zero()).collect();
    sorted.sort_by(|a, b| a.lead().cmp(&b.lead()));
    for f in sorted {
        if push(f, &mut basis, &mut pairs) {
            return vec![BoolPoly::one()];
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let s = match j {
            None => {
                let y = basis[i].lead().unwrap().clone();
                basis[i].mul_monomial(&y)
            }
            Some(j) => {
                let (li, lj) = (basis[i].lead().unwrap(), basis[j].lead().unwrap());
                let l = li.mul(lj);
                basis[i].mul_monomial(&li.quotient_of(&l)).add(&basis[j].mul_monomial(&lj.quotient_of(&l)))
            }
        };
        if push(&s, &mut basis, &mut pairs) {
            return vec![BoolPoly::one()];
        }
    }
    interreduce(basis)
}

fn interreduce(mut basis: Vec<BoolPoly>) -> Vec<BoolPoly> {
    basis.sort_by(|a, b| a.lead().cmp(&b.lead()));
    let mut kept: Vec<BoolPoly> = Vec::new();
    for f in basis {
        let l = f.lead().unwrap();
        if !kept.iter().any(|g| g.lead().unwrap().divides(l)) {
            kept.push(f);
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<BoolPoly> = kept.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
        let lead = kept[i].lead().unwrap().clone();
        let mut tail = kept[i].clone();
        tail.toggle(lead.clone());
        let mut r = reduce(&tail, &others);
        r.terms.insert(lead);
        out.push(r);
    }
    out
}

/// Linear information extracted from a basis.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct LinearSolution {
    /// Variables with a determined value.
    pub assignments: BTreeMap<Var, bool>,
    /// `y = Σ others (+ 1)`: the pivot does not occur in any other row.
    pub substitutions: BTreeMap<Var, BoolPoly>,
}

/// Row-reduces the polynomials of degree at most one in `g` over `GF(2)`.
///
/// Pivots are the largest variables (grevlex leading terms).
pub fn extract_linear_rref(g: &[BoolPoly]) -> Result<LinearSolution> {
    let mut rows: Vec<BTreeSet<Option<Var>>> = g
        .iter()
        .filter(|p| !p.is_zero() && p.degree() <= 1)
        .map(|p| p.terms.iter().map(|m| m.vars.first().copied()).collect())
        .collect();
    // None stands for the constant 1 and sorts first, so a row's pivot is its smallest Some
    let pivot = |r: &BTreeSet<Option<Var>>| r.iter().find_map(|x| *x);
    let mut done: Vec<BTreeSet<Option<Var>>> = Vec::new();
    while let Some(mut r) = rows.pop() {
        for d in &done {
            let pv = pivot(d).unwrap();
            if r.contains(&Some(pv)) {
                r = r.symmetric_difference(d).copied().collect();
            }
        }
        let Some(pv) = pivot(&r) else {
            if r.contains(&None) {
                return Err(Error::InconsistentSystem);
            }
            continue;
        };
        for d in &mut done {
            if d.contains(&Some(pv)) {
                *d = d.symmetric_difference(&r).copied().collect();
            }
        }
        done.push(r);
    }
    let mut sol = LinearSolution::default();
    for r in done {
        let pv = pivot(&r).unwrap();
        let rest: Vec<&Option<Var>> = r.iter().filter(|x| **x != Some(pv)).collect();
        if rest.iter().all(|x| x.is_none()) {
            sol.assignments.insert(pv, !rest.is_empty());
        } else {
            let expr = BoolPoly::from_terms(rest.iter().map(|x| match x {
                Some(v) => BoolMonomial::var(*v),
                None => BoolMonomial::one(),
            }));
            sol.substitutions.insert(pv, expr);
        }
    }
    Ok(sol)
}

/// One pass of the main loop.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTrace {
    pub d: usize,
    /// Equations handed to the Gröbner step.
    pub input: Vec<BoolPoly>,
    pub basis: Vec<BoolPoly>,
    pub solved: LinearSolution,
    /// The basis after substituting the newly solved variables.
    pub residual: Vec<BoolPoly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub n: usize,
    pub recovered: bool,
    pub rounds_used: usize,
    /// Bits fixed by the algebra before free variables were set to zero.
    pub determined: usize,
    /// Those bits, keyed `y{i}_{j}`.
    pub assignments: BTreeMap<String, bool>,
    pub key: Option<SecretKey>,
    #[serde(skip)]
    pub trace: Vec<RoundTrace>,
}

/// Runs the attack for degrees `1..=max_rounds` (capped at `n − 1`).
pub fn run_attack(pk: &PublicKey, max_rounds: usize) -> Result<AttackReport> {
    attack(pk, max_rounds, false)
}

/// [`run_attack`], also recording every round.
pub fn run_attack_traced(pk: &PublicKey, max_rounds: usize) -> Result<AttackReport> {
    attack(pk, max_rounds, true)
}

fn attack(pk: &PublicKey, max_rounds: usize, keep_trace: bool) -> Result<AttackReport> {
    pk.validate()?;
    let n = pk.n();
    let nv = 4 * (n - 1);
    let sym = symbolic_rhs(pk);
    // eliminated variable -> expression in the remaining ones
    let mut elim: BTreeMap<Var, BoolPoly> = BTreeMap::new();
    let mut system: Vec<BoolPoly> = Vec::new();
    let mut trace = Vec::new();
    let mut rounds = 0;
    for d in 1..=max_rounds.min(n - 1) {
        rounds = d;
        for f in coefficient_equations(&sym, &pk.t, d)? {
            let f = f.substitute(&elim);
            if !f.is_zero() {
                system.push(f);
            }
        }
        let input = if keep_trace { system.clone() } else { Vec::new() };
        let basis = truncated_groebner_deg2(&system);
        let solved = extract_linear_rref(&basis)?;
        let mut fresh: BTreeMap<Var, BoolPoly> = solved.substitutions.clone();
        fresh.extend(solved.assignments.iter().map(|(&v, &b)| (v, BoolPoly::constant(b))));
        for e in elim.values_mut() {
            *e = e.substitute(&fresh);
        }
        elim.extend(fresh.clone());
        system = basis.iter().map(|f| f.substitute(&fresh)).filter(|f| !f.is_zero()).collect();
        if keep_trace {
            trace.push(RoundTrace { d, input, basis, solved, residual: system.clone() });
        }
        if elim.len() == nv && elim.values().all(|e| e.degree() == 0) {
            break;
        }
    }
    let assignments: BTreeMap<String, bool> = elim
        .iter()
        .filter(|(_, e)| e.degree() == 0)
        .map(|(&v, e)| {
            let (i, j) = var_name(v, n);
            (format!("y{i}_{j}"), e.constant_term())
        })
        .collect();
    let determined = assignments.len();
    let mut bits = vec![false; nv];
    for (&v, e) in &elim {
        bits[v as usize] = e.eval(&vec![false; nv]);
    }
    let candidate = key_from_bits(&bits, n);
    let ok = double_twist_mat(&candidate.s, &pk.w, &pk.p, &pk.q)? == pk.t;
    Ok(AttackReport {
        n,
        recovered: ok,
        rounds_used: rounds,
        determined,
        assignments,
        key: ok.then_some(candidate),
        trace,
    })
}

/// Secret matrix with `s_i = 1 + Σ_j bits[y_ij] x^j`.
pub fn key_from_bits(bits: &[bool], n: usize) -> SecretKey {
    let entry = |i: usize| {
        let mut f = TruncPoly::one(n);
        for j in 1..n {
            f.set(j, bits[var_index(i, j, n) as usize]);
        }
        f
    };
    let s = Mat2::new([entry(1), entry(2), entry(3), entry(4)]).expect("uniform degree");
    SecretKey { s }
}

/// The `y` bits of a secret with unit entries.
pub fn bits_from_key(sk: &SecretKey) -> Vec<bool> {
    let n = sk.s.n();
    let mut bits = vec![false; 4 * (n - 1)];
    for i in 1..=4 {
        for j in 1..n {
            bits[var_index(i, j, n) as usize] = sk.s.entries()[i - 1].coeff(j);
        }
    }
    bits
}
