//! Challenge-response authentication over 2×2 matrices of truncated polynomials.
//!
//! Alice's secret is a matrix `s` with unit entries. Her public key is
//! `(p, q, w, t)` with `t = (s∘p)ᵀ w (s∘q)`. Each round she commits to
//! `u = (r∘p)ᵀ t (r∘q)` for a fresh random `r`; on challenge 0 she reveals
//! `r`, on challenge 1 she reveals `sr`, and Bob recomputes `u` from `t` or
//! `w` respectively. Since `(sr)ᵀ = rᵀsᵀ` and the endomorphisms respect
//! products, both checks hold for an honest prover.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::truncpoly::{double_twist_mat, Mat2, TruncPoly};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SecretKey {
    pub s: Mat2,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PublicKey {
    pub p: TruncPoly,
    pub q: TruncPoly,
    pub w: Mat2,
    pub t: Mat2,
}

/// Key file layout: `{"n": 7, "public": {...}, "secret": {...}}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KeyPair {
    pub n: usize,
    pub public: PublicKey,
    pub secret: SecretKey,
}

impl PublicKey {
    pub fn n(&self) -> usize {
        self.t.n()
    }

    /// Checks the shape constraints: zero-constant `p, q`, unit entries of `w`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for d in [self.p.n(), self.q.n(), self.w.n()] {
            if d != n {
                return Err(Error::DegreeMismatch(n, d));
            }
        }
        if self.p.coeff(0) || self.q.coeff(0) {
            return Err(Error::NotAnEndomorphism);
        }
        Ok(())
    }
}

impl KeyPair {
    /// Checks that the public matrix `t` really is the twist of `w` by the secret.
    pub fn validate(&self) -> Result<()> {
        self.public.validate()?;
        let pk = &self.public;
        let t = double_twist_mat(&self.secret.s, &pk.w, &pk.p, &pk.q)?;
        if t != pk.t {
            return Err(Error::State("public matrix t does not match the secret key"));
        }
        Ok(())
    }
}

/// Random key pair over `GF(2)[x]/⟨x^n⟩`.
pub fn keygen<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<KeyPair> {
    if n < 2 {
        return Err(Error::DegreeOutOfRange { degree: n, n: 2 });
    }
    let s = Mat2::random_unit(n, rng);
    let w = Mat2::random_unit(n, rng);
    let p = TruncPoly::random_zero_const(n, rng);
    let q = TruncPoly::random_zero_const(n, rng);
    let t = double_twist_mat(&s, &w, &p, &q)?;
    Ok(KeyPair { n, public: PublicKey { p, q, w, t }, secret: SecretKey { s } })
}

fn check_challenge(c: u8) -> Result<bool> {
    match c {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::InvalidChallenge(c)),
    }
}

/// Prover side of one round. A commitment can be answered exactly once.
#[derive(Clone, Debug)]
pub struct ProverRound {
    r: Option<Mat2>,
}

/// Commits to a fresh random `r`, returning the round state and `u`.
pub fn prover_commit<R: Rng + ?Sized>(pk: &PublicKey, rng: &mut R) -> Result<(ProverRound, Mat2)> {
    let r = Mat2::random(pk.n(), rng);
    prover_commit_with(pk, r)
}

/// Commitment with a caller-chosen `r`.
pub fn prover_commit_with(pk: &PublicKey, r: Mat2) -> Result<(ProverRound, Mat2)> {
    let u = double_twist_mat(&r, &pk.t, &pk.p, &pk.q)?;
    Ok((ProverRound { r: Some(r) }, u))
}

impl ProverRound {
    /// `r` on challenge 0, `sr` on challenge 1.
    pub fn respond(&mut self, sk: &SecretKey, c: u8) -> Result<Mat2> {
        let one = check_challenge(c)?;
        let r = self.r.take().ok_or(Error::State("commitment already answered"))?;
        if one {
            sk.s.mul(&r)
        } else {
            Ok(r)
        }
    }
}

/// Free-function form of [`ProverRound::respond`].
pub fn prover_respond(round: &mut ProverRound, sk: &SecretKey, c: u8) -> Result<Mat2> {
    round.respond(sk, c)
}

/// Bob's check: `u = (v∘p)ᵀ t (v∘q)` for `c = 0`, with `w` in place of `t` for `c = 1`.
pub fn verifier_check(pk: &PublicKey, u: &Mat2, c: u8, v: &Mat2) -> Result<bool> {
    let middle = if check_challenge(c)? { &pk.w } else { &pk.t };
    Ok(double_twist_mat(v, middle, &pk.p, &pk.q)? == *u)
}

/// Verifier side of one round.
#[derive(Clone, Debug)]
pub struct VerifierRound {
    u: Mat2,
    c: Option<u8>,
}

impl VerifierRound {
    pub fn receive_commit(u: Mat2) -> Self {
        VerifierRound { u, c: None }
    }

    pub fn challenge<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u8> {
        if self.c.is_some() {
            return Err(Error::State("challenge already issued"));
        }
        let c = rng.gen_range(0..=1u8);
        self.c = Some(c);
        Ok(c)
    }

    pub fn receive_response(&self, pk: &PublicKey, v: &Mat2) -> Result<bool> {
        let c = self.c.ok_or(Error::State("response before challenge"))?;
        verifier_check(pk, &self.u, c, v)
    }
}

/// Newline-delimited JSON messages exchanged in a session.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Message {
    Commit { u: Mat2 },
    Challenge { c: u8 },
    Response { v: Mat2 },
    Verdict { accepted: bool },
}

pub fn write_message<W: Write>(out: &mut W, msg: &Message) -> Result<()> {
    let line = serde_json::to_string(msg)?;
    writeln!(out, "{line}").map_err(|e| Error::Json(e.to_string()))
}

/// Reads the next message; `None` at end of stream.
pub fn read_message<B: BufRead>(input: &mut B) -> Result<Option<Message>> {
    let mut line = String::new();
    let n = input.read_line(&mut line).map_err(|e| Error::Json(e.to_string()))?;
    if n == 0 {
        return Ok(None);
    }
    Ok(Some(serde_json::from_str(line.trim_end())?))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RoundTranscript {
    pub commitment: Mat2,
    pub challenge: u8,
    pub response: Mat2,
    pub accepted: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub accepted: bool,
    pub transcripts: Vec<RoundTranscript>,
}

impl ProtocolRun {
    /// The session as wire messages, ending with the verdict.
    pub fn messages(&self) -> Vec<Message> {
        let mut out = Vec::new();
        for t in &self.transcripts {
            out.push(Message::Commit { u: t.commitment.clone() });
            out.push(Message::Challenge { c: t.challenge });
            out.push(Message::Response { v: t.response.clone() });
        }
        out.push(Message::Verdict { accepted: self.accepted });
        out
    }
}

/// Runs `k` honest rounds. Stops at the first rejected round.
///
/// `k = 0` accepts vacuously.
pub fn run_protocol<R: Rng + ?Sized>(k: usize, keys: &KeyPair, rng: &mut R) -> Result<ProtocolRun> {
    run_with_responder(k, &keys.public, rng, |round, c| round.respond(&keys.secret, c))
}

/// Like [`run_protocol`] but with an arbitrary responder, e.g. one that lies.
pub fn run_with_responder<R, F>(k: usize, pk: &PublicKey, rng: &mut R, mut respond: F) -> Result<ProtocolRun>
where
    R: Rng + ?Sized,
    F: FnMut(&mut ProverRound, u8) -> Result<Mat2>,
{
    let mut transcripts = Vec::with_capacity(k);
    for _ in 0..k {
        let (mut prover, u) = prover_commit(pk, rng)?;
        let mut verifier = VerifierRound::receive_commit(u.clone());
        let c = verifier.challenge(rng)?;
        let v = respond(&mut prover, c)?;
        let accepted = verifier.receive_response(pk, &v)?;
        transcripts.push(RoundTranscript { commitment: u, challenge: c, response: v, accepted });
        if !accepted {
            return Ok(ProtocolRun { accepted: false, transcripts });
        }
    }
    Ok(ProtocolRun { accepted: true, transcripts })
}

/// An impersonator without the secret: each round she guesses the
/// challenge, prepares a commitment she can open for that guess only, and
/// fails the round when the guess is wrong. Succeeds with probability `2^-k`.
pub fn eve_attempt<R: Rng + ?Sized>(pk: &PublicKey, k: usize, rng: &mut R) -> Result<bool> {
    for _ in 0..k {
        let guess = rng.gen_range(0..=1u8);
        let r = Mat2::random(pk.n(), rng);
        let middle = if guess == 1 { &pk.w } else { &pk.t };
        let u = double_twist_mat(&r, middle, &pk.p, &pk.q)?;
        let mut verifier = VerifierRound::receive_commit(u);
        let c = verifier.challenge(rng)?;
        if c != guess || !verifier.receive_response(pk, &r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::seeded_rng;

    #[test]
    fn worked_example_round() {
        let keys = fixtures::example_key();
        keys.validate().unwrap();
        let ex = fixtures::example_round();
        let (mut round, u) = prover_commit_with(&keys.public, ex.r.clone()).unwrap();
        assert_eq!(u, ex.u);
        let mut again = round.clone();
        assert_eq!(round.respond(&keys.secret, 0).unwrap(), ex.r);
        assert_eq!(again.respond(&keys.secret, 1).unwrap(), ex.sr);
        assert!(verifier_check(&keys.public, &u, 0, &ex.r).unwrap());
        assert!(verifier_check(&keys.public, &u, 1, &ex.sr).unwrap());
        assert!(!verifier_check(&keys.public, &u, 1, &ex.r).unwrap());
    }

    #[test]
    fn state_machine_errors() {
        let keys = keygen(5, &mut seeded_rng(1)).unwrap();
        let (mut round, _) = prover_commit(&keys.public, &mut seeded_rng(2)).unwrap();
        assert_eq!(round.respond(&keys.secret, 2), Err(Error::InvalidChallenge(2)));
        round.respond(&keys.secret, 1).unwrap();
        assert!(matches!(round.respond(&keys.secret, 1), Err(Error::State(_))));
        assert!(keygen(1, &mut seeded_rng(0)).is_err());
    }

    #[test]
    fn identity_randomness_commits_to_t() {
        let keys = keygen(7, &mut seeded_rng(3)).unwrap();
        let (_, u) = prover_commit_with(&keys.public, Mat2::identity(7)).unwrap();
        assert_eq!(u, keys.public.t);
    }

    #[test]
    fn honest_runs_accept_and_serialize() {
        let keys = keygen(7, &mut seeded_rng(4)).unwrap();
        let run = run_protocol(10, &keys, &mut seeded_rng(5)).unwrap();
        assert!(run.accepted && run.transcripts.len() == 10);
        let json = serde_json::to_string(&run).unwrap();
        assert_eq!(serde_json::from_str::<ProtocolRun>(&json).unwrap(), run);

        let mut buf = Vec::new();
        for m in run.messages() {
            write_message(&mut buf, &m).unwrap();
        }
        let mut cursor = std::io::Cursor::new(buf);
        let mut back = Vec::new();
        while let Some(m) = read_message(&mut cursor).unwrap() {
            back.push(m);
        }
        assert_eq!(back, run.messages());
        assert!(run_protocol(0, &keys, &mut seeded_rng(5)).unwrap().accepted);
    }

    #[test]
    fn lying_prover_is_cut_off() {
        let keys = keygen(7, &mut seeded_rng(6)).unwrap();
        let mut rng = seeded_rng(7);
        let mut junk = seeded_rng(8);
        let run = run_with_responder(20, &keys.public, &mut rng, |_, _| Ok(Mat2::random(7, &mut junk))).unwrap();
        assert!(!run.accepted);
        assert_eq!(run.transcripts.len(), 1);
    }

    #[test]
    fn key_file_round_trip() {
        let keys = fixtures::example_key();
        let json = serde_json::to_string(&keys).unwrap();
        assert_eq!(serde_json::from_str::<KeyPair>(&json).unwrap(), keys);
        assert!(json.contains("\"secret\""));
    }
}
