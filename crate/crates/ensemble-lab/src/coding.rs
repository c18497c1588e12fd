//! Instantaneous (prefix-free) binary codes: validation, exact Kraft sums,
//! entropy, average length, absolute optimality, lazy stream coding, and the
//! auxiliary Q-space built from codeword lengths.

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::prob::FiniteProbabilitySpace;
use crate::rational::{dyadic_exponent, pow2_neg, rat_one, rat_zero, rat_to_f64, Rat};
use crate::stream::SymbolStream;
use num_traits::Zero;
use std::cell::RefCell;
use std::collections::VecDeque;
use std::rc::Rc;

/// Bits of a codeword, 0/1 per element.
pub type Bits = Vec<u8>;

/// Total assignment of nonempty binary codewords to a source alphabet.
/// Construction checks only shape (nonempty, binary digits); injectivity
/// and prefix-freeness are reported by `validate_code`.
#[derive(Debug, Clone)]
pub struct InstantaneousCode {
    source: Alphabet,
    words: Vec<Bits>,
}

impl InstantaneousCode {
    pub fn new(source: Alphabet, words: &[(&str, &str)]) -> Result<Self> {
        let mut slots: Vec<Option<Bits>> = vec![None; source.len()];
        for (sym, cw) in words {
            let id = source.lookup(sym)?;
            slots[id as usize] = Some(parse_bits(cw)?);
        }
        let words = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::Parse(format!(
                        "no codeword for symbol `{}`",
                        source.name(i as Sym)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(InstantaneousCode { source, words })
    }

    pub fn from_words(source: Alphabet, words: Vec<Bits>) -> Result<Self> {
        assert_eq!(words.len(), source.len());
        for w in &words {
            if w.is_empty() {
                return Err(Error::Parse("empty codeword".into()));
            }
        }
        Ok(InstantaneousCode { source, words })
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn codeword(&self, s: Sym) -> &Bits {
        &self.words[s as usize]
    }

    pub fn codeword_str(&self, s: Sym) -> String {
        self.words[s as usize]
            .iter()
            .map(|b| if *b == 0 { '0' } else { '1' })
            .collect()
    }
}

fn parse_bits(s: &str) -> Result<Bits> {
    if s.is_empty() {
        return Err(Error::Parse("empty codeword".into()));
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("bad codeword digit `{other}`"))),
        })
        .collect()
}

/// Violations are values, not errors: a broken code is still a describable
/// object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeViolation {
    /// Two symbols share one codeword.
    DuplicateCodeword(String, String, String),
    /// First codeword is a proper prefix of the second.
    PrefixViolation(String, String),
}

#[derive(Debug, Clone)]
pub struct CodeAudit {
    pub violations: Vec<CodeViolation>,
    /// Exact Σ 2^{-|C(a)|}.
    pub kraft_sum: Rat,
}

impl CodeAudit {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_code(code: &InstantaneousCode) -> CodeAudit {
    let mut violations = Vec::new();
    let n = code.source.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (&code.words[i], &code.words[j]);
            if a == b {
                if i < j {
                    violations.push(CodeViolation::DuplicateCodeword(
                        code.source.name(i as Sym).into(),
                        code.source.name(j as Sym).into(),
                        code.codeword_str(i as Sym),
                    ));
                }
            } else if a.len() < b.len() && &b[..a.len()] == &a[..] {
                violations.push(CodeViolation::PrefixViolation(
                    code.codeword_str(i as Sym),
                    code.codeword_str(j as Sym),
                ));
            }
        }
    }
    let kraft_sum = code
        .words
        .iter()
        .fold(rat_zero(), |acc, w| acc + pow2_neg(w.len() as u32));
    CodeAudit {
        violations,
        kraft_sum,
    }
}

/// H(P) = −Σ P(a) log₂ P(a) with 0·log 0 := 0. Exact rational whenever
/// every nonzero weight is 2^{-k}; otherwise an f64 approximation only.
#[derive(Debug, Clone)]
pub struct Entropy {
    pub exact: Option<Rat>,
    pub approx: f64,
}

pub fn shannon_entropy(space: &FiniteProbabilitySpace) -> Entropy {
    let mut exact = Some(rat_zero());
    let mut approx = 0.0;
    for s in space.alphabet().ids() {
        let p = space.weight(s);
        if p.is_zero() {
            continue;
        }
        let pf = rat_to_f64(p);
        approx -= pf * pf.log2();
        match dyadic_exponent(p) {
            Some(k) => {
                if let Some(acc) = exact.as_mut() {
                    *acc += p * Rat::from_integer(k.into());
                }
            }
            None => exact = None,
        }
    }
    if let Some(e) = &exact {
        approx = rat_to_f64(e);
    }
    Entropy { exact, approx }
}

/// L_P(C) = Σ P(a)|C(a)|, exact.
pub fn avg_length(space: &FiniteProbabilitySpace, code: &InstantaneousCode) -> Result<Rat> {
    if !code.source.same_as(space.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "code source differs from space alphabet".into(),
        ));
    }
    Ok(space.alphabet().ids().fold(rat_zero(), |acc, s| {
        acc + space.weight(s) * Rat::from_integer((code.words[s as usize].len() as u64).into())
    }))
}

/// Verdict for L_P(C) = H(P), decided by the exact per-symbol criterion
/// P(a) = 2^{-|C(a)|}.
#[derive(Debug, Clone)]
pub struct OptimalityVerdict {
    pub optimal: bool,
    /// Offenders with (symbol, P(a), 2^{-|C(a)|}).
    pub witnesses: Vec<(String, Rat, Rat)>,
    /// Zero-weight symbols are outside the criterion; they are listed here
    /// rather than silently passed.
    pub zero_weight: Vec<String>,
}

pub fn is_abs_optimal(
    space: &FiniteProbabilitySpace,
    code: &InstantaneousCode,
) -> Result<OptimalityVerdict> {
    if !code.source.same_as(space.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "code source differs from space alphabet".into(),
        ));
    }
    let mut witnesses = Vec::new();
    let mut zero_weight = Vec::new();
    for s in space.alphabet().ids() {
        let p = space.weight(s);
        if p.is_zero() {
            zero_weight.push(space.alphabet().name(s).into());
            continue;
        }
        let target = pow2_neg(code.words[s as usize].len() as u32);
        if p != &target {
            witnesses.push((space.alphabet().name(s).into(), p.clone(), target));
        }
    }
    Ok(OptimalityVerdict {
        optimal: witnesses.is_empty(),
        witnesses,
        zero_weight,
    })
}

/// Canonical-code allocation for an all-dyadic space: codeword lengths are
/// the dyadic exponents, assigned in order of increasing length then
/// alphabet order. The single-symbol space gets "0" since empty codewords
/// are disallowed.
pub fn build_dyadic_code(space: &FiniteProbabilitySpace) -> Result<InstantaneousCode> {
    let mut lengths = Vec::with_capacity(space.alphabet().len());
    for s in space.alphabet().ids() {
        let p = space.weight(s);
        match dyadic_exponent(p) {
            Some(k) => lengths.push(k),
            None => {
                return Err(Error::NotDyadic {
                    symbol: space.alphabet().name(s).into(),
                    weight: p.clone(),
                })
            }
        }
    }
    if lengths == [0] {
        return InstantaneousCode::from_words(space.alphabet().clone(), vec![vec![0]]);
    }
    // increasing length, ties by alphabet order
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let mut words: Vec<Bits> = vec![Vec::new(); lengths.len()];
    let mut counter: u64 = 0;
    let mut cur_len: u32 = lengths[order[0]];
    for &i in &order {
        counter <<= lengths[i] - cur_len;
        cur_len = lengths[i];
        words[i] = (0..cur_len)
            .rev()
            .map(|b| ((counter >> b) & 1) as u8)
            .collect();
        counter += 1;
    }
    InstantaneousCode::from_words(space.alphabet().clone(), words)
}

/// Lazily concatenated codewords C(a₁)C(a₂)… over {0,1}.
pub fn encode_stream(code: &InstantaneousCode, mut s: SymbolStream) -> Result<SymbolStream> {
    if !s.alphabet().same_as(&code.source) {
        return Err(Error::AlphabetMismatch(
            "stream alphabet differs from code source".into(),
        ));
    }
    let origin = format!("encode({})", s.origin());
    let code = code.clone();
    let buffer: Rc<RefCell<VecDeque<u8>>> = Rc::new(RefCell::new(VecDeque::new()));
    let gen = Box::new(move || -> Result<Sym> {
        let mut buf = buffer.borrow_mut();
        while buf.is_empty() {
            let sym = s.next_symbol()?;
            buf.extend(code.codeword(sym).iter().copied());
        }
        Ok(buf.pop_front().unwrap() as Sym)
    });
    Ok(SymbolStream::new(Alphabet::binary(), origin, gen))
}

/// Greedy unique parse of a bit stream back into source symbols. Symbols
/// are emitted as codewords complete; a bit run matching no codeword is
/// `UnparsableBits` at the offset where the failed parse started.
pub fn decode_stream(code: &InstantaneousCode, mut bits: SymbolStream) -> Result<SymbolStream> {
    if !bits.alphabet().same_as(&Alphabet::binary()) {
        return Err(Error::AlphabetMismatch(
            "decode_stream needs a {0,1} stream".into(),
        ));
    }
    let origin = format!("decode({})", bits.origin());
    let source = code.source.clone();
    let code = code.clone();
    let max_len = code.words.iter().map(|w| w.len()).max().unwrap_or(0);
    let consumed = Rc::new(RefCell::new(0u64));
    let consumed_g = consumed.clone();
    let gen = Box::new(move || -> Result<Sym> {
        let start = *consumed_g.borrow();
        let mut run: Bits = Vec::new();
        loop {
            run.push(bits.next_symbol()? as u8);
            *consumed_g.borrow_mut() += 1;
            for s in 0..code.words.len() {
                if code.words[s] == run {
                    return Ok(s as Sym);
                }
            }
            if run.len() >= max_len {
                return Err(Error::UnparsableBits(start));
            }
        }
    });
    Ok(SymbolStream::new(source, origin, gen))
}

/// Decode a finite bit word; returns the parsed symbols and any dangling
/// partial codeword left at the end.
pub fn decode_word(code: &InstantaneousCode, bits: &[u8]) -> Result<(Vec<Sym>, Bits)> {
    let max_len = code.words.iter().map(|w| w.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    let mut run: Bits = Vec::new();
    let mut start = 0u64;
    for &b in bits {
        run.push(b);
        if let Some(s) = (0..code.words.len()).find(|&s| code.words[s] == run) {
            out.push(s as Sym);
            start += run.len() as u64;
            run.clear();
        } else if run.len() >= max_len {
            return Err(Error::UnparsableBits(start));
        }
    }
    Ok((out, run))
}

/// The auxiliary space Q over Ω plus one fresh symbol: Q(a) = 2^{-|C(a)|}
/// and the fresh symbol absorbs 1 − Kraft sum.
pub fn code_q_space(code: &InstantaneousCode) -> Result<FiniteProbabilitySpace> {
    let audit = validate_code(code);
    let mut fresh = "_".to_string();
    while code.source.contains(&fresh) {
        fresh.push('_');
    }
    let mut names: Vec<String> = code.source.symbols().to_vec();
    names.push(fresh);
    let alphabet = Alphabet::new(names)?;
    let mut weights: Vec<Rat> = code
        .words
        .iter()
        .map(|w| pow2_neg(w.len() as u32))
        .collect();
    weights.push(rat_one() - &audit.kraft_sum);
    FiniteProbabilitySpace::from_weights(alphabet, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::stream;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn abc_space() -> FiniteProbabilitySpace {
        FiniteProbabilitySpace::from_weights(abc(), vec![rat(1, 2), rat(1, 4), rat(1, 4)])
            .unwrap()
    }

    fn abc_code() -> InstantaneousCode {
        InstantaneousCode::new(abc(), &[("a", "0"), ("b", "10"), ("c", "11")]).unwrap()
    }

    #[test]
    fn validate_cases() {
        let audit = validate_code(&abc_code());
        assert!(audit.ok());
        assert_eq!(audit.kraft_sum, rat(1, 1));

        let ab = Alphabet::new(["a", "b"]).unwrap();
        let bad = InstantaneousCode::new(ab.clone(), &[("a", "0"), ("b", "01")]).unwrap();
        let audit = validate_code(&bad);
        assert_eq!(
            audit.violations,
            vec![CodeViolation::PrefixViolation("0".into(), "01".into())]
        );

        let bad = InstantaneousCode::new(abc(), &[("a", "0"), ("b", "1"), ("c", "11")]).unwrap();
        let audit = validate_code(&bad);
        assert!(audit
            .violations
            .contains(&CodeViolation::PrefixViolation("1".into(), "11".into())));

        let dup = InstantaneousCode::new(ab, &[("a", "0"), ("b", "0")]).unwrap();
        assert!(matches!(
            validate_code(&dup).violations[0],
            CodeViolation::DuplicateCodeword(..)
        ));

        assert!(InstantaneousCode::new(abc(), &[("a", ""), ("b", "1"), ("c", "0")]).is_err());
    }

    #[test]
    fn entropy_cases() {
        let u2 = FiniteProbabilitySpace::uniform(Alphabet::binary());
        assert_eq!(shannon_entropy(&u2).exact, Some(rat(1, 1)));

        assert_eq!(shannon_entropy(&abc_space()).exact, Some(rat(3, 2)));

        let point = FiniteProbabilitySpace::from_weights(
            Alphabet::binary(),
            vec![rat(1, 1), rat(0, 1)],
        )
        .unwrap();
        assert_eq!(shannon_entropy(&point).exact, Some(rat(0, 1)));

        let p3 = FiniteProbabilitySpace::from_weights(
            abc(),
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        )
        .unwrap();
        let e = shannon_entropy(&p3);
        assert!(e.exact.is_none());
        let expect = 0.5 + (1.0 / 3.0) * 3f64.log2() + (1.0 / 6.0) * 6f64.log2();
        assert!((e.approx - expect).abs() < 1e-12);
    }

    #[test]
    fn avg_length_cases() {
        assert_eq!(avg_length(&abc_space(), &abc_code()).unwrap(), rat(3, 2));

        let u2 = FiniteProbabilitySpace::uniform(Alphabet::binary());
        let c = InstantaneousCode::new(Alphabet::binary(), &[("0", "0"), ("1", "1")]).unwrap();
        assert_eq!(avg_length(&u2, &c).unwrap(), rat(1, 1));

        let point = FiniteProbabilitySpace::from_weights(
            abc(),
            vec![rat(1, 1), rat(0, 1), rat(0, 1)],
        )
        .unwrap();
        assert_eq!(avg_length(&point, &abc_code()).unwrap(), rat(1, 1));
    }

    #[test]
    fn optimality_cases() {
        let v = is_abs_optimal(&abc_space(), &abc_code()).unwrap();
        assert!(v.optimal);

        let p3 = FiniteProbabilitySpace::from_weights(
            abc(),
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        )
        .unwrap();
        assert!(!is_abs_optimal(&p3, &abc_code()).unwrap().optimal);

        let ab = Alphabet::new(["a", "b"]).unwrap();
        let uab = FiniteProbabilitySpace::uniform(ab.clone());
        let c = InstantaneousCode::new(ab, &[("a", "0"), ("b", "10")]).unwrap();
        let v = is_abs_optimal(&uab, &c).unwrap();
        assert!(!v.optimal);
        assert_eq!(v.witnesses, vec![("b".into(), rat(1, 2), rat(1, 4))]);
    }

    #[test]
    fn optimality_flags_zero_weight() {
        let z = FiniteProbabilitySpace::from_weights(
            abc(),
            vec![rat(1, 2), rat(1, 2), rat(0, 1)],
        )
        .unwrap();
        let c =
            InstantaneousCode::new(abc(), &[("a", "0"), ("b", "10"), ("c", "11")]).unwrap();
        let v = is_abs_optimal(&z, &c).unwrap();
        assert!(!v.optimal); // b: 1/2 != 1/4
        assert_eq!(v.zero_weight, vec!["c".to_string()]);
    }

    #[test]
    fn build_dyadic_cases() {
        let c = build_dyadic_code(&abc_space()).unwrap();
        assert_eq!(c.codeword_str(0), "0");
        assert_eq!(c.codeword_str(1), "10");
        assert_eq!(c.codeword_str(2), "11");
        assert!(is_abs_optimal(&abc_space(), &c).unwrap().optimal);

        let single = FiniteProbabilitySpace::uniform(Alphabet::new(["a"]).unwrap());
        let c = build_dyadic_code(&single).unwrap();
        assert_eq!(c.codeword_str(0), "0");

        let u2 = FiniteProbabilitySpace::uniform(Alphabet::binary());
        let c = build_dyadic_code(&u2).unwrap();
        assert_eq!(c.codeword_str(0), "0");
        assert_eq!(c.codeword_str(1), "1");

        let p3 = FiniteProbabilitySpace::from_weights(
            abc(),
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
        )
        .unwrap();
        assert!(matches!(
            build_dyadic_code(&p3),
            Err(Error::NotDyadic { .. })
        ));
    }

    #[test]
    fn encode_decode_cases() {
        let code = abc_code();
        let s = stream::from_prefix(
            crate::stream::FinitePrefix::from_token(&abc(), "abc").unwrap(),
        );
        let mut enc = encode_stream(&code, s).unwrap();
        let bits = enc.take_prefix(5).unwrap();
        assert_eq!(bits.render(), "01011");

        let back = decode_stream(
            &code,
            stream::from_prefix(
                crate::stream::FinitePrefix::from_token(&Alphabet::binary(), "01011").unwrap(),
            ),
        )
        .unwrap();
        let mut back = back;
        let word = back.take_prefix(3).unwrap();
        assert_eq!(word.render(), "abc");
    }

    #[test]
    fn decode_word_cases() {
        let code = abc_code();
        let (syms, rem) = decode_word(&code, &[0, 1, 0, 1, 1]).unwrap();
        assert_eq!(syms, vec![0, 1, 2]);
        assert!(rem.is_empty());

        let (syms, rem) = decode_word(&code, &[1]).unwrap();
        assert!(syms.is_empty());
        assert_eq!(rem, vec![1]);

        let ab = Alphabet::new(["a", "b"]).unwrap();
        let c = InstantaneousCode::new(ab, &[("a", "0"), ("b", "10")]).unwrap();
        assert!(matches!(
            decode_word(&c, &[1, 1, 1]),
            Err(Error::UnparsableBits(0))
        ));
    }

    #[test]
    fn q_space_cases() {
        let q = code_q_space(&abc_code()).unwrap();
        assert_eq!(q.weight_of("a").unwrap(), &rat(1, 2));
        assert_eq!(q.weight_of("_").unwrap(), &rat(0, 1));

        let ab = Alphabet::new(["a", "b"]).unwrap();
        let c = InstantaneousCode::new(ab, &[("a", "0"), ("b", "10")]).unwrap();
        let q = code_q_space(&c).unwrap();
        assert_eq!(q.weight_of("_").unwrap(), &rat(1, 4));

        let single = Alphabet::new(["a"]).unwrap();
        let c = InstantaneousCode::new(single, &[("a", "0")]).unwrap();
        let q = code_q_space(&c).unwrap();
        assert_eq!(q.weight_of("_").unwrap(), &rat(1, 2));
    }

    #[test]
    fn kraft_matches_open_measure() {
        let code = abc_code();
        let u2 = FiniteProbabilitySpace::uniform(Alphabet::binary());
        let words: std::collections::BTreeSet<Vec<Sym>> = (0..code.source().len())
            .map(|s| {
                code.codeword(s as Sym)
                    .iter()
                    .map(|&b| b as Sym)
                    .collect()
            })
            .collect();
        let m = crate::mltest::open_measure(&u2, words.iter());
        assert_eq!(m, validate_code(&code).kraft_sum);
    }

    #[test]
    fn source_coding_bound_exhaustive() {
        // all prefix-free codes with lengths <= 3 on a 3-symbol alphabet,
        // against a handful of rational spaces: L >= H
        let spaces = [
            abc_space(),
            FiniteProbabilitySpace::from_weights(
                abc(),
                vec![rat(1, 2), rat(1, 3), rat(1, 6)],
            )
            .unwrap(),
            FiniteProbabilitySpace::uniform(abc()),
        ];
        let words: Vec<Bits> = (1..=3u32)
            .flat_map(|len| {
                (0..(1u32 << len)).map(move |v| {
                    (0..len).rev().map(|b| ((v >> b) & 1) as u8).collect()
                })
            })
            .collect();
        let mut checked = 0;
        for i in 0..words.len() {
            for j in 0..words.len() {
                for k in 0..words.len() {
                    let c = InstantaneousCode::from_words(
                        abc(),
                        vec![words[i].clone(), words[j].clone(), words[k].clone()],
                    )
                    .unwrap();
                    if !validate_code(&c).ok() {
                        continue;
                    }
                    checked += 1;
                    for p in &spaces {
                        let l = avg_length(p, &c).unwrap();
                        let h = shannon_entropy(p);
                        match h.exact {
                            Some(he) => assert!(l >= he),
                            None => assert!(rat_to_f64(&l) >= h.approx - 1e-12),
                        }
                    }
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn optimality_equivalence_dyadic() {
        // dyadic spaces on 3 symbols: optimal <=> L == H exactly
        let spaces = [
            abc_space(),
            FiniteProbabilitySpace::from_weights(
                abc(),
                vec![rat(1, 4), rat(1, 4), rat(1, 2)],
            )
            .unwrap(),
        ];
        let codes = [
            abc_code(),
            InstantaneousCode::new(abc(), &[("a", "00"), ("b", "01"), ("c", "1")]).unwrap(),
            InstantaneousCode::new(abc(), &[("a", "00"), ("b", "010"), ("c", "1")]).unwrap(),
        ];
        for p in &spaces {
            for c in &codes {
                let opt = is_abs_optimal(p, c).unwrap().optimal;
                let l = avg_length(p, c).unwrap();
                let h = shannon_entropy(p).exact.unwrap();
                assert_eq!(opt, l == h);
            }
        }
    }
}
