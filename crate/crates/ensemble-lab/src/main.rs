//! Batch front end: generate streams, apply operator pipelines, certify
//! tests, run diagnostics, audit codes, verify schemes.
//!
//! Exit codes: 0 = pass/ok, 1 = verdict failure, 2 = usage or input error.
//! All randomness flows from explicit `--seed`; identical invocations give
//! byte-identical outputs.

use clap::{Args, Parser, Subcommand};
use ensemble_lab::alphabet::Alphabet;
use ensemble_lab::coding;
use ensemble_lab::diagnostics;
use ensemble_lab::error::Result;
use ensemble_lab::fileformat;
use ensemble_lab::mltest;
use ensemble_lab::prob::{Event, FiniteProbabilitySpace, RandomVariable};
use ensemble_lab::rational::{fmt_rat, parse_rat, rat_to_f64};
use ensemble_lab::secrecy;
use ensemble_lab::stream::{self, FinitePrefix, Injection, SelectionRule, SymbolStream};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ensemble-lab", version, about = "exact probability spaces, sequence operators, ML-test certification, coding and secrecy checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a pseudo-ensemble prefix for a space
    Gen(GenArgs),
    /// Generate, then push the stream through an operator chain
    Pipe(PipeArgs),
    /// Test-level operations
    Test {
        #[command(subcommand)]
        cmd: TestCmd,
    },
    /// Empirical diagnostics over finite prefixes
    Diag {
        #[command(subcommand)]
        cmd: DiagCmd,
    },
    /// Instantaneous-code operations
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
    /// Encryption-scheme verification
    Secrecy {
        #[command(subcommand)]
        cmd: SecrecyCmd,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Space file (`<symbol> <p>/<q>` lines)
    #[arg(long)]
    space: PathBuf,
    /// PRNG seed; same seed, same output
    #[arg(long)]
    seed: u64,
    /// Number of symbols
    #[arg(long)]
    n: usize,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Packed binary output ({0,1} spaces only)
    #[arg(long)]
    packed: bool,
}

#[derive(Args)]
struct PipeArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Number of output symbols to take after the chain
    #[arg(long)]
    n: usize,
    /// Operators in order: filter=a,b | shuffle=SPEC | select=RULE | vn | map=a->0,b->1
    #[arg(long = "op")]
    ops: Vec<String>,
    /// Lifetime scan budget for filter/select/vn
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    packed: bool,
}

#[derive(Subcommand)]
enum TestCmd {
    /// Certify every level of a test file: exact measure vs strict 2^-n
    Certify {
        test: PathBuf,
        /// Override the space named in the test file
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Does a finite prefix hit a level's open set?
    Member {
        test: PathBuf,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        prefix: String,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Apply a test transformation to one level
    Transform {
        test: PathBuf,
        #[arg(long)]
        level: u32,
        /// map | shuffle | select | condition
        #[arg(long)]
        kind: String,
        /// map: `x->0,y->1`; shuffle: injection; select: rule; condition: `event=x,y sigma=<string>`
        #[arg(long)]
        param: String,
        /// Truncation depth for select/condition
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        space: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DiagCmd {
    /// Per-symbol frequency deviations against a claimed source
    Lln {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "human")]
        format: String,
    },
    /// Exponential tail bound for a binary space
    Chernoff {
        #[arg(long)]
        space: PathBuf,
        /// Rational, e.g. 1/4
        #[arg(long)]
        eps: String,
        #[arg(long)]
        n: u64,
    },
    /// Compression-proxy ratio (heuristic, not a randomness verdict)
    Compress {
        #[arg(long)]
        seq: PathBuf,
    },
    /// L-infinity empirical independence of same-length prefixes
    Indep {
        #[arg(long = "seq", required = true)]
        seqs: Vec<PathBuf>,
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "human")]
        format: String,
    },
    /// L-infinity frequency distance between two prefixes
    Equiv {
        #[arg(long = "seq", required = true)]
        seqs: Vec<PathBuf>,
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "human")]
        format: String,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Kraft sum, violations, and (with a space) entropy/length/optimality
    Audit {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Canonical absolutely-optimal code for an all-dyadic space
    Build {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Concatenate codewords over a source sequence
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        packed: bool,
    },
    /// Greedy-parse a bit sequence back into source symbols
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SecrecyCmd {
    /// Validate correctness and decide perfect secrecy
    Check {
        scheme: PathBuf,
        /// Check independence under this message distribution instead of
        /// the uniform one
        #[arg(long)]
        msg: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_space(path: &Path) -> Result<FiniteProbabilitySpace> {
    fileformat::parse_space(&read(path)?)
}

fn load_prefix(alphabet: &Alphabet, path: &Path) -> Result<FinitePrefix> {
    let bytes = std::fs::read(path)?;
    let symbols = if fileformat::is_packed(&bytes) {
        fileformat::parse_packed_bits(&bytes)?
    } else {
        fileformat::parse_sequence(alphabet, &String::from_utf8_lossy(&bytes))?
    };
    Ok(FinitePrefix {
        alphabet: alphabet.clone(),
        symbols,
        origin: path.display().to_string(),
    })
}

fn emit_prefix(prefix: &FinitePrefix, out: Option<&Path>, packed: bool) -> Result<()> {
    if packed {
        if !prefix.alphabet.same_as(&Alphabet::binary()) {
            return Err(ensemble_lab::error::Error::AlphabetMismatch(
                "--packed needs a {0,1} alphabet".into(),
            ));
        }
        let bytes = fileformat::write_packed_bits(&prefix.symbols);
        match out {
            Some(p) => std::fs::write(p, bytes)?,
            None => {
                return Err(ensemble_lab::error::Error::Parse(
                    "--packed needs --out".into(),
                ))
            }
        }
    } else {
        let text = fileformat::write_sequence(&prefix.alphabet, &prefix.symbols);
        match out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
    }
    Ok(())
}

/// Parse an `--op` string into a stream operator application.
fn apply_op(op: &str, s: SymbolStream, budget: u64) -> Result<SymbolStream> {
    if op == "vn" {
        return stream::von_neumann(s, budget);
    }
    let (name, arg) = op.split_once('=').ok_or_else(|| {
        ensemble_lab::error::Error::Parse(format!("bad operator `{op}`"))
    })?;
    match name {
        "filter" => {
            let event = Event::new(s.alphabet(), arg.split(','))?;
            stream::filter_event(&event, s, budget)
        }
        "shuffle" => Ok(stream::shuffle(Injection::parse(arg)?, s)),
        "select" => Ok(stream::select(SelectionRule::parse(arg)?, s, budget)),
        "map" => {
            let rv = parse_rv_spec(s.alphabet(), arg)?;
            stream::map_rv(&rv, s)
        }
        other => Err(ensemble_lab::error::Error::Parse(format!(
            "unknown operator `{other}`"
        ))),
    }
}

/// `x->0,y->1,z->0`: target alphabet in order of first appearance.
fn parse_rv_spec(source: &Alphabet, spec: &str) -> Result<RandomVariable> {
    let mut pairs = Vec::new();
    let mut targets: Vec<String> = Vec::new();
    for part in spec.split(',') {
        let (from, to) = part.split_once("->").ok_or_else(|| {
            ensemble_lab::error::Error::Parse(format!("bad map entry `{part}`"))
        })?;
        if !targets.iter().any(|t| t == to) {
            targets.push(to.to_string());
        }
        pairs.push((from.to_string(), to.to_string()));
    }
    let target = Alphabet::new_user(targets)?;
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    RandomVariable::new(source.clone(), target, &refs)
}

/// Resolve the space for a test file: explicit --space flag wins, else the
/// path named in the header, relative to the test file.
fn test_space(test_path: &Path, t: &fileformat::TestFile, flag: &Option<PathBuf>) -> Result<FiniteProbabilitySpace> {
    match flag {
        Some(p) => load_space(p),
        None => {
            let base = test_path.parent().unwrap_or_else(|| Path::new("."));
            load_space(&base.join(&t.space_path))
        }
    }
}

fn parse_level(
    space: &FiniteProbabilitySpace,
    t: &fileformat::TestFile,
    index: u32,
) -> Result<mltest::TestLevel> {
    let tokens = t.levels.get(&index).ok_or_else(|| {
        ensemble_lab::error::Error::Parse(format!("test file has no level {index}"))
    })?;
    let strings = tokens
        .iter()
        .map(|tok| space.alphabet().parse_word(tok))
        .collect::<Result<Vec<_>>>()?;
    Ok(mltest::TestLevel::new(index, strings))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let space = load_space(&a.space)?;
            let mut s = stream::pseudo_ensemble(&space, a.seed);
            let prefix = s.take_prefix(a.n)?;
            emit_prefix(&prefix, a.out.as_deref(), a.packed)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Pipe(a) => {
            let space = load_space(&a.space)?;
            let mut s = stream::pseudo_ensemble(&space, a.seed);
            for op in &a.ops {
                s = apply_op(op, s, a.budget)?;
            }
            let prefix = s.take_prefix(a.n)?;
            emit_prefix(&prefix, a.out.as_deref(), a.packed)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Test { cmd } => run_test(cmd),
        Cmd::Diag { cmd } => run_diag(cmd),
        Cmd::Code { cmd } => run_code(cmd),
        Cmd::Secrecy { cmd } => run_secrecy(cmd),
    }
}

fn run_test(cmd: TestCmd) -> Result<ExitCode> {
    match cmd {
        TestCmd::Certify { test, space } => {
            let t = fileformat::parse_test(&read(&test)?)?;
            let p = test_space(&test, &t, &space)?;
            let mut all_ok = true;
            for &index in t.levels.keys() {
                let level = parse_level(&p, &t, index)?;
                let cert = mltest::certify_level(&p, &level);
                println!(
                    "level {}: measure {} (~{:.6}) bound {} {}",
                    index,
                    fmt_rat(&cert.measure),
                    rat_to_f64(&cert.measure),
                    fmt_rat(&cert.bound),
                    if cert.certified {
                        "certified"
                    } else {
                        "VIOLATION"
                    }
                );
                all_ok &= cert.certified;
            }
            Ok(exit_verdict(all_ok))
        }
        TestCmd::Member {
            test,
            level,
            prefix,
            space,
        } => {
            let t = fileformat::parse_test(&read(&test)?)?;
            let p = test_space(&test, &t, &space)?;
            let lvl = parse_level(&p, &t, level)?;
            let word = p.alphabet().parse_word(&prefix)?;
            let hit = lvl.member(&word);
            println!("level {level}: member={hit} prefix={prefix}");
            Ok(ExitCode::SUCCESS)
        }
        TestCmd::Transform {
            test,
            level,
            kind,
            param,
            depth,
            space,
        } => {
            let t = fileformat::parse_test(&read(&test)?)?;
            let p = test_space(&test, &t, &space)?;
            let lvl = parse_level(&p, &t, level)?;
            let before = mltest::open_measure(&p, lvl.strings.iter());
            match kind.as_str() {
                "map" => {
                    let rv = parse_rv_spec(p.alphabet(), &param)?;
                    // level strings are over the target; space is the source
                    let induced = p.induced(&rv)?;
                    let target_level = mltest::TestLevel::new(
                        level,
                        t.levels[&level]
                            .iter()
                            .map(|tok| induced.alphabet().parse_word(tok))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    let before = mltest::open_measure(&induced, target_level.strings.iter());
                    let out = mltest::transform_map(&rv, &target_level, &p)?;
                    let after = mltest::open_measure(&p, out.strings.iter());
                    print_level(&p, &out);
                    println!(
                        "measure before {} after {} (exact equality: {})",
                        fmt_rat(&before),
                        fmt_rat(&after),
                        before == after
                    );
                }
                "shuffle" => {
                    let f = Injection::parse(&param)?;
                    let out = mltest::transform_shuffle(&f, &lvl, &p)?;
                    let after = mltest::open_measure(&p, out.strings.iter());
                    print_level(&p, &out);
                    println!(
                        "measure before {} after {} (exact equality: {})",
                        fmt_rat(&before),
                        fmt_rat(&after),
                        before == after
                    );
                }
                "select" => {
                    let rule = SelectionRule::parse(&param)?;
                    let (out, measure) = mltest::transform_select(&rule, &lvl, &p, depth)?;
                    print_level(&p, &out);
                    println!(
                        "truncated measure {} <= original {} at depth {}",
                        fmt_rat(&measure),
                        fmt_rat(&before),
                        depth
                    );
                }
                "condition" => {
                    // param: `event=x,y sigma=<string>`
                    let mut event = None;
                    let mut sigma = None;
                    for part in param.split_whitespace() {
                        if let Some(v) = part.strip_prefix("event=") {
                            event = Some(Event::new(p.alphabet(), v.split(','))?);
                        } else if let Some(v) = part.strip_prefix("sigma=") {
                            sigma = Some(v.to_string());
                        }
                    }
                    let (event, sigma) = match (event, sigma) {
                        (Some(e), Some(s)) => (e, s),
                        _ => {
                            return Err(ensemble_lab::error::Error::Parse(
                                "condition needs `event=… sigma=…`".into(),
                            ))
                        }
                    };
                    let c = mltest::transform_condition(&event, &sigma, &p, depth)?;
                    println!("pattern {}", c.pattern);
                    println!(
                        "closed form {} (~{:.6})",
                        fmt_rat(&c.closed_form),
                        rat_to_f64(&c.closed_form)
                    );
                    println!(
                        "truncated measure {} over {} strings at depth {}",
                        fmt_rat(&c.truncated_measure),
                        c.truncated.len(),
                        depth
                    );
                }
                other => {
                    return Err(ensemble_lab::error::Error::Parse(format!(
                        "unknown transform `{other}`"
                    )))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_level(space: &FiniteProbabilitySpace, level: &mltest::TestLevel) {
    let rendered: Vec<String> = level
        .strings
        .iter()
        .map(|w| space.alphabet().render(w))
        .collect();
    println!("level {}: {}", level.index, rendered.join(" "));
}

fn exit_verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_report(report: &diagnostics::DiagnosticReport, format: &str) -> ExitCode {
    if format == "kv" {
        print!("{}", report.render_kv());
    } else {
        print!("{}", report.render_human());
    }
    exit_verdict(report.pass())
}

fn run_diag(cmd: DiagCmd) -> Result<ExitCode> {
    match cmd {
        DiagCmd::Lln {
            space,
            seq,
            eps,
            format,
        } => {
            let p = load_space(&space)?;
            let prefix = load_prefix(p.alphabet(), &seq)?;
            let report = diagnostics::lln_report(&p, &prefix, eps)?;
            Ok(print_report(&report, &format))
        }
        DiagCmd::Chernoff { space, eps, n } => {
            let p = load_space(&space)?;
            let eps = parse_rat(&eps).map_err(ensemble_lab::error::Error::Parse)?;
            let bound = diagnostics::chernoff_bound(&p, &eps, n)?;
            println!(
                "chernoff bound 2exp(-eps^2 n / 2Q(0)Q(1)) = {bound:.6e} at eps={}, n={n}",
                fmt_rat(&eps)
            );
            Ok(ExitCode::SUCCESS)
        }
        DiagCmd::Compress { seq } => {
            let prefix = load_prefix(&Alphabet::binary(), &seq)?;
            let ratio = diagnostics::incompressibility_proxy(&prefix)?;
            println!(
                "compression ratio {ratio:.6} over {} bits (heuristic only, not a randomness verdict)",
                prefix.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        DiagCmd::Indep {
            seqs,
            space,
            eps,
            format,
        } => {
            let p = load_space(&space)?;
            let prefixes = seqs
                .iter()
                .map(|f| load_prefix(p.alphabet(), f))
                .collect::<Result<Vec<_>>>()?;
            let report = diagnostics::empirical_independence(&prefixes, eps)?;
            Ok(print_report(&report, &format))
        }
        DiagCmd::Equiv {
            seqs,
            space,
            eps,
            format,
        } => {
            if seqs.len() != 2 {
                return Err(ensemble_lab::error::Error::Parse(
                    "equiv needs exactly two --seq".into(),
                ));
            }
            let p = load_space(&space)?;
            let a = load_prefix(p.alphabet(), &seqs[0])?;
            let b = load_prefix(p.alphabet(), &seqs[1])?;
            let report = diagnostics::equivalence_check(&a, &b, eps)?;
            Ok(print_report(&report, &format))
        }
    }
}

fn run_code(cmd: CodeCmd) -> Result<ExitCode> {
    match cmd {
        CodeCmd::Audit { code, space } => {
            let c = fileformat::parse_code(&read(&code)?)?;
            let audit = coding::validate_code(&c);
            println!("kraft sum {}", fmt_rat(&audit.kraft_sum));
            for v in &audit.violations {
                match v {
                    coding::CodeViolation::DuplicateCodeword(a, b, w) => {
                        println!("violation: `{a}` and `{b}` share codeword {w}")
                    }
                    coding::CodeViolation::PrefixViolation(a, b) => {
                        println!("violation: {a} is a prefix of {b}")
                    }
                }
            }
            let mut ok = audit.ok();
            if let Some(space) = space {
                let p = load_space(&space)?;
                let h = coding::shannon_entropy(&p);
                match &h.exact {
                    Some(e) => println!("H(P) = {} exactly", fmt_rat(e)),
                    None => println!("H(P) ~= {:.12} (non-dyadic space)", h.approx),
                }
                let l = coding::avg_length(&p, &c)?;
                println!("L_P(C) = {} (~{:.6})", fmt_rat(&l), rat_to_f64(&l));
                let opt = coding::is_abs_optimal(&p, &c)?;
                if opt.optimal {
                    println!("absolutely optimal: yes");
                } else {
                    println!("absolutely optimal: no");
                    for (sym, pw, target) in &opt.witnesses {
                        println!(
                            "  witness {sym}: P = {} but 2^-|C| = {}",
                            fmt_rat(pw),
                            fmt_rat(target)
                        );
                    }
                    ok = false;
                }
                for z in &opt.zero_weight {
                    println!("  note: `{z}` has zero weight, outside the criterion");
                }
            }
            Ok(exit_verdict(ok))
        }
        CodeCmd::Build { space, out } => {
            let p = load_space(&space)?;
            let c = coding::build_dyadic_code(&p)?;
            let text = fileformat::write_code(&c);
            match out {
                Some(f) => std::fs::write(f, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        CodeCmd::Encode {
            code,
            seq,
            out,
            packed,
        } => {
            let c = fileformat::parse_code(&read(&code)?)?;
            let prefix = load_prefix(c.source(), &seq)?;
            let bit_len: usize = prefix
                .symbols
                .iter()
                .map(|&s| c.codeword(s).len())
                .sum();
            let s = stream::from_prefix(prefix);
            let mut enc = coding::encode_stream(&c, s)?;
            let bits = enc.take_prefix(bit_len)?;
            emit_prefix(&bits, out.as_deref(), packed)?;
            Ok(ExitCode::SUCCESS)
        }
        CodeCmd::Decode { code, seq, out } => {
            let c = fileformat::parse_code(&read(&code)?)?;
            let bits = load_prefix(&Alphabet::binary(), &seq)?;
            let raw: Vec<u8> = bits.symbols.iter().map(|&s| s as u8).collect();
            let (symbols, remainder) = coding::decode_word(&c, &raw)?;
            let prefix = FinitePrefix {
                alphabet: c.source().clone(),
                symbols,
                origin: format!("decode({})", seq.display()),
            };
            emit_prefix(&prefix, out.as_deref(), false)?;
            if !remainder.is_empty() {
                let tail: String = remainder
                    .iter()
                    .map(|b| if *b == 0 { '0' } else { '1' })
                    .collect();
                eprintln!("dangling partial codeword: {tail}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_secrecy(cmd: SecrecyCmd) -> Result<ExitCode> {
    match cmd {
        SecrecyCmd::Check { scheme, msg } => {
            let s = fileformat::parse_scheme(&read(&scheme)?)?;
            let audit = secrecy::validate_scheme(&s);
            if !audit.ok() {
                for (m, k) in &audit.violations {
                    println!("correctness violation: Dec(Enc({m},{k}),{k}) != {m}");
                }
                return Ok(ExitCode::from(1));
            }
            println!("correctness: ok over {}x{} pairs", s.messages.len(), s.keys.len());
            let verdict = match msg {
                Some(f) => {
                    let p = load_space(&f)?;
                    secrecy::secrecy_under(&s, &p)?
                }
                None => secrecy::is_perfectly_secret(&s)?,
            };
            if verdict.secret {
                println!("perfectly secret");
                let (holds, keys, image) = secrecy::key_bound_check(&s);
                println!("key bound: #K = {keys} >= max image {image} ({holds})");
                Ok(ExitCode::SUCCESS)
            } else {
                let (m, c, joint, product) = verdict.witness.unwrap();
                println!(
                    "NOT perfectly secret: joint({m},{c}) = {} but product of marginals = {}",
                    fmt_rat(&joint),
                    fmt_rat(&product)
                );
                Ok(ExitCode::from(1))
            }
        }
    }
}
