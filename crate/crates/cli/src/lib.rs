//! Command-line driver for `freetwist`.
//!
//! Exit codes: 0 on success, 1 on a domain error or a failed replay, 2 on
//! a usage error.

pub mod replay;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use freetwist::dtc::{decide_dtc, decide_twisted, random_conjugate_pairs};
use freetwist::fbc::{decide_conjugacy_fbc, FbcElement, FbcGroup};
use freetwist::protocol::{eve_attempt, keygen, run_protocol, KeyPair, PublicKey};
use freetwist::remnant::{
    equalizer_trivial_certificate, has_bsl, has_bslw, min_bsl, remnant_length, remnant_ratio, remnant_triples,
};
use freetwist::stallings::build_subgroup_graph;
use freetwist::words::{random_word, seeded_rng};
use freetwist::{fixtures, FreeHom, Word};
use serde::Serialize;
use serde_json::{json, Value};

pub use replay::{replay_reference_sessions, ReplayReport};

#[derive(Debug, Parser)]
#[command(name = "freetwist", version, about = "Twisted conjugacy in free groups and a matrix authentication scheme")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "out", global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced words and homomorphism images.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Subgroup graphs and membership.
    #[command(subcommand)]
    Stallings(StallingsCmd),
    /// Remnant decompositions and the conditions built on them.
    #[command(subcommand)]
    Remnant(RemnantCmd),
    /// Doubly-twisted conjugacy.
    #[command(subcommand)]
    Dtc(DtcCmd),
    /// Twisted conjugacy (second map the identity).
    #[command(subcommand)]
    Twisted(TwistedCmd),
    /// Conjugacy in free-by-cyclic groups.
    #[command(subcommand)]
    Fbc(FbcCmd),
    /// Key generation, honest runs and the impersonator.
    #[command(subcommand)]
    Protocol(ProtocolCmd),
    /// Key recovery from a public key.
    #[command(subcommand)]
    Attack(AttackCmd),
    /// Shipped reference data.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Debug, Subcommand)]
pub enum WordsCmd {
    /// Freely reduce a word.
    Reduce {
        word: String,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
    /// Image of a word under a homomorphism.
    Apply {
        #[arg(long)]
        hom: String,
        word: String,
    },
    /// Random reduced words.
    Random {
        #[arg(long, default_value_t = 2)]
        rank: u32,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum StallingsCmd {
    /// Folded subgroup graph: DOT with `--format text`, JSON otherwise.
    Show {
        /// Subgroup generators.
        #[arg(required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
    /// Membership of a word in the subgroup.
    Member {
        /// Comma-separated generators.
        #[arg(long)]
        gens: String,
        word: String,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum RemnantCmd {
    /// Per-generator triples, remnant length and ratio.
    Show { hom: String },
    /// Bounded-solution-length certificate for a pair of maps.
    Check {
        /// The two maps `f g`.
        #[arg(long, num_args = 2, value_names = ["F", "G"], required = true)]
        bsl: Vec<String>,
        /// Also check the free-product condition for this pair of words.
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub psi: String,
}

#[derive(Debug, Subcommand)]
pub enum DtcCmd {
    /// Decide whether `v = (x phi)⁻¹ u (x psi)` for some `x`.
    Decide {
        #[command(flatten)]
        maps: PairArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Random related pairs with their conjugators.
    Pairs {
        #[command(flatten)]
        maps: PairArgs,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TwistedCmd {
    /// Decide whether `v = (x phi)⁻¹ u x` for some `x`.
    Decide {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FbcCmd {
    /// Conjugacy of two elements `r:word`.
    Decide {
        /// Group descriptor: a JSON file or inline JSON.
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        e1: String,
        #[arg(long, allow_hyphen_values = true)]
        e2: String,
        #[arg(long, default_value_t = 4)]
        orbit_bound: u32,
    },
}

#[derive(Debug, Args)]
pub struct KeySource {
    /// Key file, or `example_key`. A fresh key from `--seed` otherwise.
    #[arg(long)]
    pub keys: Option<String>,
    /// Truncation degree of a freshly generated key.
    #[arg(long, default_value_t = 7)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum ProtocolCmd {
    /// Fresh key pair.
    Keygen {
        #[arg(long, default_value_t = 7)]
        n: usize,
    },
    /// Honest session.
    Run {
        #[command(flatten)]
        key: KeySource,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        rounds: u32,
        /// Print the wire messages, one JSON object per line.
        #[arg(long)]
        messages: bool,
    },
    /// Acceptance rate of an impersonator who guesses challenges.
    Eve {
        #[command(flatten)]
        key: KeySource,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rounds: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum AttackCmd {
    /// Try to recover the secret from a public key.
    Run {
        #[command(flatten)]
        key: KeySource,
        /// Refuse keys with a larger truncation degree.
        #[arg(long, default_value_t = 16)]
        max_n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesCmd {
    /// Names of shipped fixtures.
    List,
    /// Contents of a fixture.
    Show { name: String },
    /// Re-run the recorded reference sessions.
    Replay,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input or a library error (exit 1).
    Domain(String),
    /// Command ran but a check failed; the output is still printed (exit 1).
    Failed(Output),
}

impl From<freetwist::Error> for CliError {
    fn from(e: freetwist::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// A command result in both renderings.
#[derive(Debug)]
pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Output { json, text: text.into() }
    }

    fn of<T: Serialize>(v: &T, text: impl Into<String>) -> Self {
        Output::new(serde_json::to_value(v).expect("serializable"), text)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

type CmdResult = Result<Output, CliError>;

fn domain(msg: impl Into<String>) -> CliError {
    CliError::Domain(msg.into())
}

/// Parses `argv` (program name first), runs the command, writes its output
/// and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (out, code) = match execute(&cli) {
        Ok(o) => (Some(o), 0),
        Err(CliError::Failed(o)) => (Some(o), 1),
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            (None, 1)
        }
    };
    if let Some(o) = out {
        if let Err(e) = emit(&o.render(cli.format), cli.out.as_deref()) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    code
}

fn emit(s: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, s),
        None => std::io::stdout().lock().write_all(s.as_bytes()),
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> CmdResult {
    let seed = cli.seed;
    match &cli.command {
        Command::Words(c) => words_cmd(c, seed),
        Command::Stallings(c) => stallings_cmd(c),
        Command::Remnant(c) => remnant_cmd(c),
        Command::Dtc(c) => dtc_cmd(c, seed),
        Command::Twisted(TwistedCmd::Decide { phi, u, v }) => {
            let f = load_hom(phi)?;
            let rank = f.codomain_rank();
            let d = decide_twisted(&f, &load_word(u, rank)?, &load_word(v, rank)?)?;
            Ok(Output::of(&d, decision_text(&d)))
        }
        Command::Fbc(FbcCmd::Decide { group, e1, e2, orbit_bound }) => {
            let text = if Path::new(group).is_file() { read_file(group)? } else { group.clone() };
            let g: FbcGroup = serde_json::from_str(&text).map_err(|e| domain(format!("group descriptor: {e}")))?;
            let e1 = FbcElement::parse(e1, g.rank())?;
            let e2 = FbcElement::parse(e2, g.rank())?;
            let d = decide_conjugacy_fbc(&g, &e1, &e2, *orbit_bound)?;
            let text = match &d.conjugator {
                Some(c) => format!("{:?} by {c}", d.kind),
                None => format!("{:?}", d.kind),
            };
            Ok(Output::of(&d, text))
        }
        Command::Protocol(c) => protocol_cmd(c, seed),
        Command::Attack(AttackCmd::Run { key, max_n }) => {
            let pk = load_public(key, seed)?;
            if pk.n() > *max_n {
                return Err(domain(format!("key has N = {} above --max-n {max_n}", pk.n())));
            }
            let report = freetwist::attack::run_attack(&pk, pk.n() - 1)?;
            let text = format!(
                "N = {}: {} after {} rounds, {} bits determined",
                report.n,
                if report.recovered { "recovered" } else { "not recovered" },
                report.rounds_used,
                report.determined
            );
            Ok(Output::of(&report, text))
        }
        Command::Fixtures(c) => fixtures_cmd(c),
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| domain(format!("{path}: {e}")))
}

/// Highest generator index named by letters in the text form.
fn letters_rank(s: &str) -> u32 {
    s.chars().filter(char::is_ascii_alphabetic).map(|c| (c.to_ascii_lowercase() as u32) - ('a' as u32) + 1).max().unwrap_or(1)
}

/// A fixture name, a JSON file, or comma-separated images such as `bA,ab`.
pub fn load_hom(arg: &str) -> Result<FreeHom, CliError> {
    if let Some(f) = fixtures::hom_by_name(arg) {
        return Ok(f);
    }
    if Path::new(arg).is_file() {
        return serde_json::from_str(&read_file(arg)?).map_err(|e| domain(format!("{arg}: {e}")));
    }
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let dom = parts.len() as u32;
    let cod = parts.iter().map(|p| letters_rank(p)).max().unwrap_or(1).max(dom);
    let images = parts.iter().map(|p| Word::parse(p, cod)).collect::<freetwist::Result<Vec<_>>>()?;
    Ok(FreeHom::new(dom, cod, images)?)
}

/// A fixture word name or a literal word, compact or GAP syntax.
pub fn load_word(arg: &str, rank: u32) -> Result<Word, CliError> {
    if let Some(w) = fixtures::word_by_name(arg) {
        return Ok(w.with_rank(rank)?);
    }
    if arg.contains(['^', '*', '<']) {
        return Ok(Word::parse_gap(arg, rank)?);
    }
    Ok(Word::parse(arg, rank)?)
}

fn load_keys(arg: &str) -> Result<KeyPair, CliError> {
    if arg == "example_key" {
        return Ok(fixtures::example_key());
    }
    let keys: KeyPair = serde_json::from_str(&read_file(arg)?).map_err(|e| domain(format!("{arg}: {e}")))?;
    keys.validate()?;
    Ok(keys)
}

/// Public key from a key file, a bare public-key file, or fresh from the seed.
fn load_public(src: &KeySource, seed: u64) -> Result<PublicKey, CliError> {
    match &src.keys {
        None => Ok(keygen(src.n, &mut seeded_rng(seed))?.public),
        Some(s) if s == "example_key" => Ok(fixtures::example_key().public),
        Some(path) => {
            let text = read_file(path)?;
            if let Ok(k) = serde_json::from_str::<KeyPair>(&text) {
                return Ok(k.public);
            }
            let pk: PublicKey = serde_json::from_str(&text).map_err(|e| domain(format!("{path}: {e}")))?;
            pk.validate()?;
            Ok(pk)
        }
    }
}

fn words_cmd(c: &WordsCmd, seed: u64) -> CmdResult {
    match c {
        WordsCmd::Reduce { word, rank } => {
            let w = load_word(word, *rank)?;
            Ok(Output::new(json!({"word": w, "length": w.len()}), w.to_string()))
        }
        WordsCmd::Apply { hom, word } => {
            let f = load_hom(hom)?;
            let x = load_word(word, f.domain_rank())?;
            let y = f.apply(&x)?;
            Ok(Output::new(json!({"word": x, "image": y}), y.to_string()))
        }
        WordsCmd::Random { rank, maxlen, count } => {
            if *rank == 0 {
                return Err(domain("rank must be positive"));
            }
            let mut rng = seeded_rng(seed);
            let ws: Vec<Word> = (0..*count).map(|_| random_word(*rank, *maxlen, &mut rng)).collect();
            let text: Vec<String> = ws.iter().map(Word::to_string).collect();
            Ok(Output::of(&ws, text.join("\n")))
        }
    }
}

fn parse_words(specs: &[&str], rank: u32) -> Result<Vec<Word>, CliError> {
    specs.iter().map(|s| load_word(s.trim(), rank)).collect()
}

fn stallings_cmd(c: &StallingsCmd) -> CmdResult {
    match c {
        StallingsCmd::Show { gens, rank } => {
            let specs: Vec<&str> = gens.iter().map(String::as_str).collect();
            let g = build_subgroup_graph(*rank, &parse_words(&specs, *rank)?);
            let edges: Vec<Value> = g
                .edges()
                .map(|e| json!({"from": e.origin, "label": Word::generator(e.label as i32, *rank).expect("label in range"), "to": e.terminus}))
                .collect();
            let vertices: Vec<usize> = g.vertices().collect();
            let j = json!({"rank": rank, "base": g.base(), "vertices": vertices, "edges": edges});
            Ok(Output::new(j, g.to_dot()))
        }
        StallingsCmd::Member { gens, word, rank } => {
            let specs: Vec<&str> = gens.split(',').collect();
            let g = build_subgroup_graph(*rank, &parse_words(&specs, *rank)?);
            let w = load_word(word, *rank)?;
            let m = g.is_member(&w);
            Ok(Output::new(json!({"word": w, "member": m}), m.to_string()))
        }
    }
}

fn remnant_cmd(c: &RemnantCmd) -> CmdResult {
    match c {
        RemnantCmd::Show { hom } => {
            let f = load_hom(hom)?;
            let triples = remnant_triples(&f);
            let length = remnant_length(&f).ok();
            let ratio = remnant_ratio(&f).ok().map(|r| r.to_string());
            let mut text = String::new();
            for (i, t) in triples.iter().enumerate() {
                let g = Word::generator(i as i32 + 1, f.domain_rank())?;
                text.push_str(&format!("{g}: [{}, {}, {}]\n", t.prefix, t.remnant, t.suffix));
            }
            text.push_str(&match (length, &ratio) {
                (Some(l), Some(r)) => format!("remnant length {l}, ratio {r}"),
                _ => "no remnant".to_string(),
            });
            Ok(Output::new(json!({"triples": triples, "remnant_length": length, "ratio": ratio}), text))
        }
        RemnantCmd::Check { bsl, u, v } => {
            let (f, g) = (load_hom(&bsl[0])?, load_hom(&bsl[1])?);
            let holds = has_bsl(&f, &g);
            let l = min_bsl(&f, &g).ok();
            let cert = equalizer_trivial_certificate(&f, &g);
            let mut j = json!({"has_bsl": holds, "min_bsl": l, "equalizer_certificate": cert});
            let mut text = format!("has_bsl {holds}\nmin_bsl {}\nequalizer {cert:?}", l.map_or("-".into(), |l| l.to_string()));
            if let (Some(u), Some(v)) = (u, v) {
                let rank = f.codomain_rank();
                let w = has_bslw(&f, &g, &load_word(u, rank)?, &load_word(v, rank)?)?;
                j["has_bslw"] = json!(w);
                text.push_str(&format!("\nhas_bslw {w}"));
            }
            Ok(Output::new(j, text))
        }
    }
}

fn decision_text(d: &freetwist::dtc::Decision) -> String {
    let mut s = format!("{:?}", d.kind);
    if let Some(c) = &d.conjugator {
        s.push_str(&format!(" by {c}"));
    }
    if let Some(b) = d.bound_used {
        s.push_str(&format!(" (bound {b})"));
    }
    s
}

fn dtc_cmd(c: &DtcCmd, seed: u64) -> CmdResult {
    match c {
        DtcCmd::Decide { maps, u, v } => {
            let (f, g) = (load_hom(&maps.phi)?, load_hom(&maps.psi)?);
            let rank = f.codomain_rank();
            let d = decide_dtc(&f, &g, &load_word(u, rank)?, &load_word(v, rank)?)?;
            Ok(Output::of(&d, decision_text(&d)))
        }
        DtcCmd::Pairs { maps, maxlen, trials } => {
            let (f, g) = (load_hom(&maps.phi)?, load_hom(&maps.psi)?);
            let pairs = random_conjugate_pairs(&f, &g, *maxlen, *trials, &mut seeded_rng(seed))?;
            let text: Vec<String> = pairs.iter().map(|p| format!("{} ~ {} by {}", p.u, p.v, p.w)).collect();
            Ok(Output::of(&pairs, text.join("\n")))
        }
    }
}

fn protocol_cmd(c: &ProtocolCmd, seed: u64) -> CmdResult {
    let mut rng = seeded_rng(seed);
    match c {
        ProtocolCmd::Keygen { n } => {
            let keys = keygen(*n, &mut rng)?;
            Ok(Output::of(&keys, serde_json::to_string_pretty(&keys).expect("serializable")))
        }
        ProtocolCmd::Run { key, rounds, messages } => {
            let keys = match &key.keys {
                Some(s) => load_keys(s)?,
                None => keygen(key.n, &mut rng)?,
            };
            let run = run_protocol(*rounds as usize, &keys, &mut rng)?;
            let verdict = format!(
                "{} after {} of {rounds} rounds",
                if run.accepted { "accepted" } else { "rejected" },
                run.transcripts.len()
            );
            if *messages {
                let lines: Vec<String> =
                    run.messages().iter().map(|m| serde_json::to_string(m).expect("serializable")).collect();
                return Ok(Output::of(&run, lines.join("\n")));
            }
            Ok(Output::of(&run, verdict))
        }
        ProtocolCmd::Eve { key, rounds, trials } => {
            let pk = load_public(key, seed)?;
            let mut hits = 0u32;
            for _ in 0..*trials {
                hits += eve_attempt(&pk, *rounds as usize, &mut rng)? as u32;
            }
            let rate = f64::from(hits) / f64::from((*trials).max(1));
            let expected = 0.5f64.powi(*rounds as i32);
            let j = json!({"rounds": rounds, "trials": trials, "accepted": hits, "rate": rate, "expected": expected});
            Ok(Output::new(j, format!("accepted {hits}/{trials}, rate {rate:.4} (expected {expected:.4})")))
        }
    }
}

/// Every fixture name with a one-line description.
pub fn fixture_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("rh1", "endomorphism of F2 with remnant"),
        ("rh2", "endomorphism of F2 without remnant"),
        ("rh3", "endomorphism of F2 with remnant"),
        ("rh4", "identity of F2"),
        ("remnant_example", "remnant length 3, ratio 1/2"),
        ("u1", "word"),
        ("v1", "word"),
        ("u2", "word"),
        ("v2", "word"),
        ("rh1_rh2_pairs", "related pairs for (rh1, rh2)"),
        ("rh3_twisted_pairs", "twisted pairs for rh3"),
        ("example_key", "N = 7 key pair of the worked example"),
        ("example_round", "one round on example_key"),
        ("reference_session", "recorded N = 7 protocol run"),
    ]
}

fn triples_json(pairs: &[(&str, &str, &str)]) -> Value {
    pairs.iter().map(|(u, v, w)| json!({"u": u, "v": v, "w": w})).collect()
}

fn fixtures_cmd(c: &FixturesCmd) -> CmdResult {
    match c {
        FixturesCmd::List => {
            let names = fixture_names();
            let text: Vec<String> = names.iter().map(|(n, d)| format!("{n:20} {d}")).collect();
            let j: Value = names.iter().map(|(n, d)| json!({"name": n, "description": d})).collect();
            Ok(Output::new(j, text.join("\n")))
        }
        FixturesCmd::Show { name } => {
            let raw = match name.as_str() {
                "rh1" => fixtures::RH1_JSON,
                "rh2" => fixtures::RH2_JSON,
                "rh3" => fixtures::RH3_JSON,
                "rh4" => fixtures::RH4_JSON,
                "remnant_example" => fixtures::REMNANT_EXAMPLE_JSON,
                "example_key" => fixtures::EXAMPLE_KEY_JSON,
                "example_round" => fixtures::EXAMPLE_ROUND_JSON,
                "reference_session" => fixtures::REFERENCE_SESSION_JSON,
                "rh1_rh2_pairs" => return Ok(text_of(triples_json(&fixtures::RH1_RH2_PAIRS))),
                "rh3_twisted_pairs" => return Ok(text_of(triples_json(&fixtures::RH3_TWISTED_PAIRS))),
                w => match fixtures::word_by_name(w) {
                    Some(x) => return Ok(Output::new(json!(x), x.to_string())),
                    None => return Err(domain(format!("unknown fixture {w:?}; see `fixtures list`"))),
                },
            };
            let j: Value = serde_json::from_str(raw).expect("shipped fixture is valid JSON");
            Ok(text_of(j))
        }
        FixturesCmd::Replay => {
            let rep = replay_reference_sessions();
            let out = Output::of(&rep, rep.to_text());
            if rep.all_passed() {
                Ok(out)
            } else {
                Err(CliError::Failed(out))
            }
        }
    }
}

fn text_of(j: Value) -> Output {
    let text = serde_json::to_string_pretty(&j).expect("serializable");
    Output::new(j, text)
}
