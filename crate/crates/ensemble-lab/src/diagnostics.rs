//! Empirical checks over finite prefixes: frequency/LLN reports, Chernoff
//! bounds, compression-proxy incompressibility, empirical independence and
//! ensemble-equivalence checks.
//!
//! Unlike the measure accounting elsewhere, these are statistical: values
//! are f64, every threshold is explicit in the report, and the compression
//! ratio is labeled a heuristic, never a randomness verdict.

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rat};
use crate::stream::FinitePrefix;
use flate2::write::DeflateEncoder;
use flate2::Compression;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::io::Write;

/// Pinned compressor level for the incompressibility proxy; changing this
/// changes recorded ratios, so treat it as part of the output format.
const DEFLATE_LEVEL: u32 = 6;

/// Minimum prefix length for a meaningful compression ratio.
const PROXY_MIN_BITS: usize = 1024;

#[derive(Debug, Clone)]
pub struct FrequencyTable {
    pub alphabet: Alphabet,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl FrequencyTable {
    pub fn count(&self, s: Sym) -> u64 {
        self.counts[s as usize]
    }

    /// N_a/n; zero when the table is empty.
    pub fn freq(&self, s: Sym) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.counts[s as usize] as f64 / self.total as f64
        }
    }
}

pub fn freq_table(prefix: &FinitePrefix) -> FrequencyTable {
    let mut counts = vec![0u64; prefix.alphabet.len()];
    for &s in &prefix.symbols {
        counts[s as usize] += 1;
    }
    FrequencyTable {
        alphabet: prefix.alphabet.clone(),
        total: prefix.symbols.len() as u64,
        counts,
    }
}

/// One named check with its observed statistic, explicit threshold, and the
/// formula that produced it.
#[derive(Debug, Clone)]
pub struct CheckVerdict {
    pub name: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
    pub formula: String,
}

#[derive(Debug, Clone)]
pub struct DiagnosticReport {
    /// Provenance of the input prefix(es).
    pub origin: String,
    pub verdicts: Vec<CheckVerdict>,
    pub notes: Vec<String>,
}

impl DiagnosticReport {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("input: {}\n", self.origin));
        out.push_str(&format!(
            "{:<28} {:>14} {:>14}  verdict\n",
            "check", "observed", "threshold"
        ));
        for v in &self.verdicts {
            out.push_str(&format!(
                "{:<28} {:>14.8} {:>14.8}  {}  [{}]\n",
                v.name,
                v.observed,
                v.threshold,
                if v.pass { "pass" } else { "FAIL" },
                v.formula
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.pass() { "pass" } else { "FAIL" }
        ));
        out
    }

    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("origin={}\n", self.origin));
        for v in &self.verdicts {
            out.push_str(&format!(
                "check={} observed={} threshold={} pass={} formula={}\n",
                v.name,
                v.observed,
                v.threshold,
                v.pass,
                v.formula.replace(' ', "_")
            ));
        }
        for (i, n) in self.notes.iter().enumerate() {
            out.push_str(&format!("note{}={}\n", i, n.replace(' ', "_")));
        }
        out.push_str(&format!("overall={}\n", self.pass()));
        out
    }
}

/// Per-symbol frequency deviation report against a claimed source space.
///
/// Two screenings run before the ε comparison and fail hard regardless of ε:
/// any occurrence of a zero-weight symbol, and — when some weight is 1 —
/// any occurrence of a different symbol.
pub fn lln_report(
    space: &crate::prob::FiniteProbabilitySpace,
    prefix: &FinitePrefix,
    eps: f64,
) -> Result<DiagnosticReport> {
    if prefix.symbols.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    if !prefix.alphabet.same_as(space.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "prefix alphabet differs from space alphabet".into(),
        ));
    }
    let table = freq_table(prefix);
    let n = table.total;
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();

    let point_mass: Option<Sym> = space
        .alphabet()
        .ids()
        .find(|&s| space.weight(s) == &crate::rational::rat_one());

    for s in space.alphabet().ids() {
        let p = rat_to_f64(space.weight(s));
        let observed = (table.freq(s) - p).abs();
        let mut pass = observed <= eps;
        let mut formula = format!("|N_a/n - P(a)|, a={}", space.alphabet().name(s));
        if space.weight(s).is_zero() && table.count(s) > 0 {
            pass = false;
            formula.push_str("; zero-weight symbol occurred: hard fail");
        }
        if let Some(m) = point_mass {
            if s != m && table.count(s) > 0 {
                pass = false;
                formula.push_str("; foreign symbol under point mass: hard fail");
            }
        }
        verdicts.push(CheckVerdict {
            name: format!("lln[{}]", space.alphabet().name(s)),
            observed,
            threshold: eps,
            pass,
            formula,
        });
    }

    // Chernoff context per symbol via the indicator reduction
    for s in space.alphabet().ids() {
        let p = rat_to_f64(space.weight(s));
        let var = p * (1.0 - p);
        if var > 0.0 && eps > 0.0 && eps <= var {
            let bound = 2.0 * (-(eps * eps) / (2.0 * var) * n as f64).exp();
            notes.push(format!(
                "chernoff[{}]: 2exp(-eps^2 n / 2P(0)P(1)) = {:.6e} at n={}, eps={}",
                space.alphabet().name(s),
                bound,
                n,
                eps
            ));
        }
    }

    Ok(DiagnosticReport {
        origin: prefix.origin.clone(),
        verdicts,
        notes,
    })
}

/// The exponential tail bound 2e^{-ε²n/(2Q(0)Q(1))}, rounded outward by one
/// ulp so the reported number is a true upper bound.
pub fn chernoff_bound(
    q: &crate::prob::FiniteProbabilitySpace,
    eps: &Rat,
    n: u64,
) -> Result<f64> {
    if !q.alphabet().same_as(&Alphabet::binary()) {
        return Err(Error::AlphabetMismatch("chernoff_bound needs a {0,1} space".into()));
    }
    if n == 0 {
        return Err(Error::Parse("chernoff_bound needs n >= 1".into()));
    }
    let limit = q.weight(0) * q.weight(1);
    if limit.is_zero() {
        return Err(Error::DegenerateQ);
    }
    if eps <= &Rat::zero() || eps > &limit {
        return Err(Error::EpsilonOutOfRange { limit });
    }
    // exponent computed exactly, exponentiated in f64
    let exponent = eps * eps / (Rat::from_integer(2.into()) * limit)
        * Rat::from_integer(n.into());
    let value = 2.0 * (-rat_to_f64(&exponent)).exp();
    Ok(f64::from_bits(value.to_bits() + 1))
}

/// Pack a {0,1} prefix into bytes (8 bits per byte, first bit in the high
/// position; the last byte is zero-padded).
pub fn pack_bits(symbols: &[Sym]) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len().div_ceil(8));
    for chunk in symbols.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            byte |= (b as u8 & 1) << (7 - i);
        }
        out.push(byte);
    }
    out
}

/// Compression ratio of the bit-packed prefix under the pinned DEFLATE
/// configuration. Heuristic evidence only — small ratios show
/// compressibility, large ones show nothing about randomness.
pub fn incompressibility_proxy(prefix: &FinitePrefix) -> Result<f64> {
    if !prefix.alphabet.same_as(&Alphabet::binary()) {
        return Err(Error::AlphabetMismatch(
            "compression proxy works on {0,1} prefixes".into(),
        ));
    }
    if prefix.symbols.len() < PROXY_MIN_BITS {
        return Err(Error::Inconclusive(prefix.symbols.len()));
    }
    let raw = pack_bits(&prefix.symbols);
    let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(DEFLATE_LEVEL));
    enc.write_all(&raw)?;
    let compressed = enc.finish()?;
    Ok(compressed.len() as f64 / raw.len() as f64)
}

/// L∞ distance between joint tuple frequencies and the product of marginal
/// frequencies; the maximum ranges over the product of observed marginal
/// supports, so vanishing joints with positive product mass are counted.
pub fn empirical_independence(
    prefixes: &[FinitePrefix],
    eps: f64,
) -> Result<DiagnosticReport> {
    assert!(!prefixes.is_empty());
    let n = prefixes[0].symbols.len();
    for p in prefixes {
        if p.symbols.len() != n {
            return Err(Error::LengthMismatch(n, p.symbols.len()));
        }
    }
    if n == 0 {
        return Err(Error::EmptyPrefix);
    }

    let mut joint: BTreeMap<Vec<Sym>, u64> = BTreeMap::new();
    for i in 0..n {
        let tuple: Vec<Sym> = prefixes.iter().map(|p| p.symbols[i]).collect();
        *joint.entry(tuple).or_insert(0) += 1;
    }
    let marginals: Vec<FrequencyTable> = prefixes.iter().map(freq_table).collect();

    // enumerate the product of observed marginal supports
    let supports: Vec<Vec<Sym>> = marginals
        .iter()
        .map(|m| {
            m.alphabet
                .ids()
                .filter(|&s| m.count(s) > 0)
                .collect()
        })
        .collect();
    let mut distance: f64 = 0.0;
    let mut witness = String::new();
    let mut tuple = vec![0 as Sym; prefixes.len()];
    let mut idx = vec![0usize; prefixes.len()];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            tuple[k] = supports[k][i];
        }
        let jf = *joint.get(&tuple).unwrap_or(&0) as f64 / n as f64;
        let pf: f64 = tuple
            .iter()
            .enumerate()
            .map(|(k, &s)| marginals[k].freq(s))
            .product();
        let d = (jf - pf).abs();
        if d > distance {
            distance = d;
            witness = tuple
                .iter()
                .enumerate()
                .map(|(k, &s)| prefixes[k].alphabet.name(s).to_string())
                .collect::<Vec<_>>()
                .join("|");
        }
        // odometer over support indices
        let mut k = prefixes.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < supports[k].len() {
                break;
            }
            idx[k] = 0;
            if k == 0 {
                return finish_independence(prefixes, distance, witness, eps);
            }
        }
    }
}

fn finish_independence(
    prefixes: &[FinitePrefix],
    distance: f64,
    witness: String,
    eps: f64,
) -> Result<DiagnosticReport> {
    let origin = prefixes
        .iter()
        .map(|p| p.origin.clone())
        .collect::<Vec<_>>()
        .join(" ; ");
    Ok(DiagnosticReport {
        origin,
        verdicts: vec![CheckVerdict {
            name: "empirical-independence".into(),
            observed: distance,
            threshold: eps,
            pass: distance <= eps,
            formula: "Linf(joint_freq, prod marginal_freq)".into(),
        }],
        notes: vec![format!("max attained at tuple {witness}")],
    })
}

/// L∞ distance between the frequency tables of two prefixes over one
/// alphabet; a finite-sample surrogate for "both are ensembles for one P"
/// (there is no exact finite-sample notion, so the threshold is explicit).
pub fn equivalence_check(
    a: &FinitePrefix,
    b: &FinitePrefix,
    eps: f64,
) -> Result<DiagnosticReport> {
    if !a.alphabet.same_as(&b.alphabet) {
        return Err(Error::AlphabetMismatch(
            "equivalence_check needs one shared alphabet".into(),
        ));
    }
    let fa = freq_table(a);
    let fb = freq_table(b);
    let mut distance: f64 = 0.0;
    let mut witness = 0 as Sym;
    for s in a.alphabet.ids() {
        let d = (fa.freq(s) - fb.freq(s)).abs();
        if d > distance {
            distance = d;
            witness = s;
        }
    }
    Ok(DiagnosticReport {
        origin: format!("{} ; {}", a.origin, b.origin),
        verdicts: vec![CheckVerdict {
            name: "ensemble-equivalence".into(),
            observed: distance,
            threshold: eps,
            pass: distance <= eps,
            formula: "Linf(freq_a, freq_b)".into(),
        }],
        notes: vec![format!(
            "max attained at symbol {}",
            a.alphabet.name(witness)
        )],
    })
}
