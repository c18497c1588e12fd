//! Sequence-level operators on prefixes of infinite symbol sequences.
//!
//! True ensembles are non-computable; the streams here are seeded PRNG
//! pseudo-ensembles or transforms of other streams. Every derived stream
//! carries a budget so that starvation is a reported outcome, not a hang.

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::prng::SplitMix64;
use crate::prob::{Event, FiniteProbabilitySpace, RandomVariable};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Single-consumer stateful stream of symbols over a fixed alphabet.
pub struct SymbolStream {
    alphabet: Alphabet,
    origin: String,
    gen: Box<dyn FnMut() -> Result<Sym>>,
}

/// First `n` symbols of a stream, with reproducible pipeline provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePrefix {
    pub alphabet: Alphabet,
    pub symbols: Vec<Sym>,
    pub origin: String,
}

impl FinitePrefix {
    pub fn from_token(alphabet: &Alphabet, token: &str) -> Result<Self> {
        Ok(FinitePrefix {
            alphabet: alphabet.clone(),
            symbols: alphabet.parse_word(token)?,
            origin: "literal".into(),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn render(&self) -> String {
        self.alphabet.render(&self.symbols)
    }
}

/// Index injection for computable shuffling, 1-based.
#[derive(Debug, Clone)]
pub enum Injection {
    /// f(k) = a*k + b with a >= 1 and a + b >= 1.
    Affine { a: u64, b: i64 },
    /// Explicit images f(1), f(2), ... (must be pairwise distinct).
    Table(Vec<u64>),
}

impl Injection {
    pub fn identity() -> Self {
        Injection::Affine { a: 1, b: 0 }
    }

    pub fn apply(&self, k: u64) -> Result<u64> {
        match self {
            Injection::Affine { a, b } => {
                let v = (*a as i128) * (k as i128) + (*b as i128);
                if v < 1 {
                    return Err(Error::Parse(format!("affine index {v} below 1 at k={k}")));
                }
                Ok(v as u64)
            }
            Injection::Table(t) => t
                .get((k - 1) as usize)
                .copied()
                .ok_or_else(|| Error::Starved { scanned: k - 1 }),
        }
    }

    /// Parse `identity`, `shift:<c>`, `stride:<a>` or `affine:<a>,<b>`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(Injection::identity());
        }
        if let Some(c) = s.strip_prefix("shift:") {
            let c: i64 = c.parse().map_err(|_| Error::Parse(format!("bad shift `{s}`")))?;
            return Ok(Injection::Affine { a: 1, b: c });
        }
        if let Some(a) = s.strip_prefix("stride:") {
            let a: u64 = a.parse().map_err(|_| Error::Parse(format!("bad stride `{s}`")))?;
            if a == 0 {
                return Err(Error::Parse("stride must be >= 1".into()));
            }
            return Ok(Injection::Affine { a, b: 0 });
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad affine `{s}`")))?;
            let a: u64 = a.parse().map_err(|_| Error::Parse(format!("bad affine `{s}`")))?;
            let b: i64 = b.parse().map_err(|_| Error::Parse(format!("bad affine `{s}`")))?;
            if a == 0 || (a as i64) + b < 1 {
                return Err(Error::Parse(
                    "affine form needs a >= 1 and a + b >= 1".into(),
                ));
            }
            return Ok(Injection::Affine { a, b });
        }
        Err(Error::Parse(format!("unknown injection `{s}`")))
    }

    pub fn describe(&self) -> String {
        match self {
            Injection::Affine { a, b } => format!("affine:{a},{b}"),
            Injection::Table(t) => format!("table[{}]", t.len()),
        }
    }
}

/// Prefix-predicate selection rule. The decision depends only on the given
/// prefix, never on the next symbol.
#[derive(Debug, Clone)]
pub enum SelectionRule {
    AlwaysYes,
    Never,
    /// YES iff prefix length ≡ r (mod m).
    LengthMod { m: u32, r: u32 },
    /// YES iff the prefix is nonempty and ends with the named symbol.
    EndsWith(String),
    /// YES iff the count of the named symbol in the prefix ≡ r (mod m).
    CountMod { sym: String, m: u32, r: u32 },
    /// Undefined on prefixes longer than `defined_upto`; surfaces Stalled.
    Truncated {
        defined_upto: usize,
        inner: Box<SelectionRule>,
    },
}

impl SelectionRule {
    /// `None` means the rule is undefined on this prefix.
    pub fn decide(&self, alphabet: &Alphabet, prefix: &[Sym]) -> Option<bool> {
        match self {
            SelectionRule::AlwaysYes => Some(true),
            SelectionRule::Never => Some(false),
            SelectionRule::LengthMod { m, r } => Some(prefix.len() as u32 % m == *r),
            SelectionRule::EndsWith(name) => Some(
                prefix
                    .last()
                    .map(|&s| alphabet.name(s) == name)
                    .unwrap_or(false),
            ),
            SelectionRule::CountMod { sym, m, r } => {
                let c = prefix
                    .iter()
                    .filter(|&&s| alphabet.name(s) == sym)
                    .count() as u32;
                Some(c % m == *r)
            }
            SelectionRule::Truncated {
                defined_upto,
                inner,
            } => {
                if prefix.len() > *defined_upto {
                    None
                } else {
                    inner.decide(alphabet, prefix)
                }
            }
        }
    }

    /// Parse `always`, `never`, `len%<m>==<r>`, `ends=<sym>`, `count(<sym>)%<m>==<r>`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "always" {
            return Ok(SelectionRule::AlwaysYes);
        }
        if s == "never" {
            return Ok(SelectionRule::Never);
        }
        if let Some(sym) = s.strip_prefix("ends=") {
            return Ok(SelectionRule::EndsWith(sym.to_string()));
        }
        if let Some(rest) = s.strip_prefix("len%") {
            if let Some((m, r)) = rest.split_once("==") {
                let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad rule `{s}`")))?;
                let r: u32 = r.parse().map_err(|_| Error::Parse(format!("bad rule `{s}`")))?;
                if m == 0 {
                    return Err(Error::Parse("modulus must be >= 1".into()));
                }
                return Ok(SelectionRule::LengthMod { m, r });
            }
        }
        if let Some(rest) = s.strip_prefix("count(") {
            if let Some((sym, tail)) = rest.split_once(")%") {
                if let Some((m, r)) = tail.split_once("==") {
                    let m: u32 =
                        m.parse().map_err(|_| Error::Parse(format!("bad rule `{s}`")))?;
                    let r: u32 =
                        r.parse().map_err(|_| Error::Parse(format!("bad rule `{s}`")))?;
                    if m == 0 {
                        return Err(Error::Parse("modulus must be >= 1".into()));
                    }
                    return Ok(SelectionRule::CountMod {
                        sym: sym.to_string(),
                        m,
                        r,
                    });
                }
            }
        }
        Err(Error::Parse(format!("unknown selection rule `{s}`")))
    }

    pub fn describe(&self) -> String {
        match self {
            SelectionRule::AlwaysYes => "always".into(),
            SelectionRule::Never => "never".into(),
            SelectionRule::LengthMod { m, r } => format!("len%{m}=={r}"),
            SelectionRule::EndsWith(s) => format!("ends={s}"),
            SelectionRule::CountMod { sym, m, r } => format!("count({sym})%{m}=={r}"),
            SelectionRule::Truncated { defined_upto, inner } => {
                format!("{}|<=|{defined_upto}", inner.describe())
            }
        }
    }
}

impl SymbolStream {
    pub fn new(
        alphabet: Alphabet,
        origin: impl Into<String>,
        gen: Box<dyn FnMut() -> Result<Sym>>,
    ) -> Self {
        SymbolStream {
            alphabet,
            origin: origin.into(),
            gen,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn next_symbol(&mut self) -> Result<Sym> {
        (self.gen)()
    }

    /// First `n` symbols with pipeline provenance.
    pub fn take_prefix(&mut self, n: usize) -> Result<FinitePrefix> {
        let mut symbols = Vec::with_capacity(n);
        for _ in 0..n {
            symbols.push(self.next_symbol()?);
        }
        Ok(FinitePrefix {
            alphabet: self.alphabet.clone(),
            symbols,
            origin: self.origin.clone(),
        })
    }
}

/// I.i.d. sampled stream via inverse CDF over the space's cumulative exact
/// weights, driven by the pinned SplitMix64 generator. Identical seed,
/// identical stream.
pub fn pseudo_ensemble(space: &FiniteProbabilitySpace, seed: u64) -> SymbolStream {
    // thresholds t_i = ceil(c_i * 2^64), selection: first i with u < t_i
    let two64: BigInt = BigInt::from(1u8) << 64u32;
    let mut cum = crate::rational::rat_zero();
    let mut thresholds: Vec<u128> = Vec::with_capacity(space.alphabet().len());
    for s in space.alphabet().ids() {
        cum += space.weight(s);
        let scaled = &cum * crate::rational::Rat::new(two64.clone(), 1.into());
        let ceil = scaled.ceil().to_integer();
        thresholds.push(ceil.to_u128().unwrap_or(u128::MAX));
    }
    let mut rng = SplitMix64::new(seed);
    let alphabet = space.alphabet().clone();
    SymbolStream {
        alphabet,
        origin: format!("gen(seed={seed})"),
        gen: Box::new(move || {
            let u = rng.next_u64() as u128;
            let idx = thresholds
                .iter()
                .position(|&t| u < t)
                .unwrap_or(thresholds.len() - 1);
            Ok(idx as Sym)
        }),
    }
}

/// Stream replaying a fixed finite prefix; starves when it runs out.
pub fn from_prefix(prefix: FinitePrefix) -> SymbolStream {
    let mut pos = 0usize;
    let symbols = prefix.symbols;
    SymbolStream {
        alphabet: prefix.alphabet,
        origin: format!("{}+replay", prefix.origin),
        gen: Box::new(move || {
            if pos < symbols.len() {
                pos += 1;
                Ok(symbols[pos - 1])
            } else {
                Err(Error::Starved {
                    scanned: symbols.len() as u64,
                })
            }
        }),
    }
}

/// Infinite repetition of a finite pattern.
pub fn cycle(alphabet: &Alphabet, pattern: &[Sym]) -> SymbolStream {
    assert!(!pattern.is_empty());
    let pattern = pattern.to_vec();
    let mut pos = 0usize;
    SymbolStream {
        alphabet: alphabet.clone(),
        origin: format!("cycle({})", alphabet.render(&pattern)),
        gen: Box::new(move || {
            let s = pattern[pos];
            pos = (pos + 1) % pattern.len();
            Ok(s)
        }),
    }
}

/// Pointwise image stream: output(n) = x(s(n)).
pub fn map_rv(x: &RandomVariable, mut s: SymbolStream) -> Result<SymbolStream> {
    if !x.source().same_as(s.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "map_rv source differs from stream alphabet".into(),
        ));
    }
    let x = x.clone();
    let origin = format!("map_rv({})", s.origin());
    Ok(SymbolStream {
        alphabet: x.target().clone(),
        origin,
        gen: Box::new(move || Ok(x.apply(s.next_symbol()?))),
    })
}

/// Subsequence restricted to members of `b`. `budget` bounds the total
/// number of source symbols scanned over the stream's lifetime.
pub fn filter_event(b: &Event, mut s: SymbolStream, budget: u64) -> Result<SymbolStream> {
    if b.is_empty() {
        return Err(Error::ZeroConditionEvent);
    }
    if !b.alphabet().same_as(s.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "filter event is over a different alphabet".into(),
        ));
    }
    let names: Vec<String> = b
        .members()
        .map(|m| s.alphabet().name(m).to_string())
        .collect();
    let sub = Alphabet::new(names)?;
    let keep: Vec<Option<Sym>> = s
        .alphabet()
        .ids()
        .map(|id| {
            if b.contains(id) {
                sub.lookup(s.alphabet().name(id)).ok()
            } else {
                None
            }
        })
        .collect();
    let origin = format!("filter({})", s.origin());
    let mut scanned = 0u64;
    Ok(SymbolStream {
        alphabet: sub,
        origin,
        gen: Box::new(move || loop {
            if scanned >= budget {
                return Err(Error::Starved { scanned });
            }
            let sym = s.next_symbol()?;
            scanned += 1;
            if let Some(mapped) = keep[sym as usize] {
                return Ok(mapped);
            }
        }),
    })
}

/// output(k) = s(f(k)); buffers the source up to max f(1..k) and rejects
/// duplicate indices.
pub fn shuffle(f: Injection, mut s: SymbolStream) -> SymbolStream {
    let origin = format!("shuffle({},{})", f.describe(), s.origin());
    let alphabet = s.alphabet().clone();
    let mut buffer: Vec<Sym> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut k = 0u64;
    SymbolStream {
        alphabet,
        origin,
        gen: Box::new(move || {
            k += 1;
            let idx = f.apply(k)?;
            if !seen.insert(idx) {
                return Err(Error::NotInjective(idx));
            }
            while (buffer.len() as u64) < idx {
                buffer.push(s.next_symbol()?);
            }
            Ok(buffer[(idx - 1) as usize])
        }),
    }
}

/// output(k) = s(s_f(s,k)+1): the symbol following the k-th YES prefix,
/// with the prefix index counted from 0 (the empty prefix is eligible).
/// `budget` bounds the number of prefixes examined.
pub fn select(rule: SelectionRule, mut s: SymbolStream, budget: u64) -> SymbolStream {
    let origin = format!("select({},{})", rule.describe(), s.origin());
    let alphabet = s.alphabet().clone();
    let alpha = alphabet.clone();
    let mut prefix: Vec<Sym> = Vec::new();
    let mut examined = 0u64;
    SymbolStream {
        alphabet,
        origin,
        gen: Box::new(move || loop {
            if examined >= budget {
                return Err(Error::Starved { scanned: examined });
            }
            examined += 1;
            let verdict = rule
                .decide(&alpha, &prefix)
                .ok_or(Error::Stalled(prefix.len()))?;
            let next = s.next_symbol()?;
            prefix.push(next);
            if verdict {
                return Ok(next);
            }
        }),
    }
}

/// Pointwise tuple stream over the product alphabet.
pub fn product_stream(streams: Vec<SymbolStream>) -> Result<SymbolStream> {
    assert!(!streams.is_empty());
    let parts: Vec<Alphabet> = streams.iter().map(|s| s.alphabet().clone()).collect();
    let alphabet = Alphabet::product(&parts)?;
    let origin = format!(
        "product({})",
        streams
            .iter()
            .map(|s| s.origin().to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let mut streams = streams;
    let strides: Vec<u64> = {
        // row-major: last component varies fastest
        let mut strides = vec![1u64; parts.len()];
        for i in (0..parts.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * parts[i + 1].len() as u64;
        }
        strides
    };
    Ok(SymbolStream {
        alphabet,
        origin,
        gen: Box::new(move || {
            let mut idx = 0u64;
            for (s, stride) in streams.iter_mut().zip(&strides) {
                idx += s.next_symbol()? as u64 * stride;
            }
            Ok(idx as Sym)
        }),
    })
}

/// Alternating merge starting with `a`.
pub fn interleave(mut a: SymbolStream, mut b: SymbolStream) -> Result<SymbolStream> {
    if !a.alphabet().same_as(b.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "interleave inputs have different alphabets".into(),
        ));
    }
    let alphabet = a.alphabet().clone();
    let origin = format!("interleave({},{})", a.origin(), b.origin());
    let mut turn_a = true;
    Ok(SymbolStream {
        alphabet,
        origin,
        gen: Box::new(move || {
            let out = if turn_a {
                a.next_symbol()
            } else {
                b.next_symbol()
            };
            turn_a = !turn_a;
            out
        }),
    })
}

/// Pair-block extractor on a binary stream: 01 -> 0, 10 -> 1, matching
/// pairs produce nothing. `budget` bounds input bits scanned.
pub fn von_neumann(mut s: SymbolStream, budget: u64) -> Result<SymbolStream> {
    let bits = Alphabet::binary();
    if !s.alphabet().same_as(&bits) {
        return Err(Error::AlphabetMismatch(
            "von Neumann extraction needs a {0,1} stream".into(),
        ));
    }
    let origin = format!("von_neumann({})", s.origin());
    let mut scanned = 0u64;
    Ok(SymbolStream {
        alphabet: bits,
        origin,
        gen: Box::new(move || loop {
            if scanned >= budget {
                return Err(Error::Starved { scanned });
            }
            let first = s.next_symbol()?;
            let second = s.next_symbol()?;
            scanned += 2;
            if first != second {
                return Ok(first);
            }
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn u2() -> FiniteProbabilitySpace {
        FiniteProbabilitySpace::uniform(Alphabet::binary())
    }

    fn lit(alpha: &Alphabet, token: &str) -> SymbolStream {
        from_prefix(FinitePrefix::from_token(alpha, token).unwrap())
    }

    #[test]
    fn point_mass_stream() {
        let a = Alphabet::new(["a"]).unwrap();
        let p = FiniteProbabilitySpace::from_weights(a, vec![rat(1, 1)]).unwrap();
        let mut s = pseudo_ensemble(&p, 123);
        let pre = s.take_prefix(16).unwrap();
        assert_eq!(pre.render(), "aaaaaaaaaaaaaaaa");
    }

    #[test]
    fn zero_weight_never_emitted() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let p = FiniteProbabilitySpace::from_weights(a, vec![rat(1, 1), rat(0, 1)]).unwrap();
        let mut s = pseudo_ensemble(&p, 7);
        let pre = s.take_prefix(10_000).unwrap();
        assert!(pre.symbols.iter().all(|&s| s == 0));
    }

    #[test]
    fn seeded_stream_is_reproducible() {
        let p = u2();
        let a = pseudo_ensemble(&p, 42).take_prefix(64).unwrap();
        let b = pseudo_ensemble(&p, 42).take_prefix(64).unwrap();
        assert_eq!(a.symbols, b.symbols);
        let c = pseudo_ensemble(&p, 43).take_prefix(64).unwrap();
        assert_ne!(a.symbols, c.symbols);
    }

    #[test]
    fn map_rv_pointwise() {
        let omega = Alphabet::new(["x", "y", "z"]).unwrap();
        let a = Event::new(&omega, ["x", "y"]).unwrap();
        let chi = RandomVariable::indicator(&a);
        let s = lit(&omega, "xzyzx");
        let mut out = map_rv(&chi, s).unwrap();
        assert_eq!(out.take_prefix(5).unwrap().render(), "10101");
    }

    #[test]
    fn map_rv_contraction() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let aa = Alphabet::new(["a"]).unwrap();
        let contract = RandomVariable::from_fn(ab.clone(), aa, |_| "a".into()).unwrap();
        let mut out = map_rv(&contract, lit(&ab, "abbab")).unwrap();
        assert_eq!(out.take_prefix(5).unwrap().render(), "aaaaa");
    }

    #[test]
    fn filter_keeps_members() {
        let omega = Alphabet::new(["x", "y", "z"]).unwrap();
        let b = Event::new(&omega, ["y", "z"]).unwrap();
        let s = cycle(&omega, &omega.parse_word("xyz").unwrap());
        let mut out = filter_event(&b, s, 1_000).unwrap();
        assert_eq!(out.take_prefix(6).unwrap().render(), "yzyzyz");
    }

    #[test]
    fn filter_starves() {
        let omega = Alphabet::new(["x", "z"]).unwrap();
        let b = Event::new(&omega, ["z"]).unwrap();
        let s = cycle(&omega, &[0]);
        let mut out = filter_event(&b, s, 10_000).unwrap();
        match out.next_symbol() {
            Err(Error::Starved { scanned }) => assert_eq!(scanned, 10_000),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shuffle_shift_and_stride() {
        let ab = Alphabet::new(["a", "b", "c", "d", "e", "f"]).unwrap();
        let mut shifted = shuffle(Injection::parse("shift:1").unwrap(), cycle(&ab, &[0, 1, 2, 3, 4, 5]));
        assert_eq!(shifted.take_prefix(3).unwrap().render(), "bcd");

        let mut strided = shuffle(Injection::parse("stride:2").unwrap(), cycle(&ab, &[0, 1, 2, 3, 4, 5]));
        assert_eq!(strided.take_prefix(3).unwrap().render(), "bdf");
    }

    #[test]
    fn shuffle_rejects_duplicates() {
        let bits = Alphabet::binary();
        let mut s = shuffle(Injection::Table(vec![1, 1]), cycle(&bits, &[0, 1]));
        s.next_symbol().unwrap();
        assert!(matches!(s.next_symbol(), Err(Error::NotInjective(1))));
    }

    #[test]
    fn select_always_is_identity() {
        let bits = Alphabet::binary();
        let s = cycle(&bits, &[0, 1, 1, 0]);
        let mut out = select(SelectionRule::AlwaysYes, s, 1_000);
        assert_eq!(out.take_prefix(4).unwrap().render(), "0110");
    }

    #[test]
    fn select_even_prefix_lengths() {
        // YES on prefix lengths 0,2,4,... picks symbols at odd positions
        let a = Alphabet::new(["1", "2", "3", "4", "5", "6"]).unwrap();
        let s = cycle(&a, &[0, 1, 2, 3, 4, 5]);
        let mut out = select(SelectionRule::LengthMod { m: 2, r: 0 }, s, 1_000);
        assert_eq!(out.take_prefix(3).unwrap().render(), "135");
    }

    #[test]
    fn select_after_symbol() {
        let xy = Alphabet::new(["x", "y"]).unwrap();
        let s = cycle(&xy, &[0, 1]);
        let mut out = select(SelectionRule::EndsWith("x".into()), s, 1_000);
        assert_eq!(out.take_prefix(3).unwrap().render(), "yyy");
    }

    #[test]
    fn select_stalls_on_partial_rule() {
        let bits = Alphabet::binary();
        let rule = SelectionRule::Truncated {
            defined_upto: 2,
            inner: Box::new(SelectionRule::Never),
        };
        let mut out = select(rule, cycle(&bits, &[0]), 1_000);
        assert!(matches!(out.next_symbol(), Err(Error::Stalled(3))));
    }

    #[test]
    fn product_and_interleave() {
        let bits = Alphabet::binary();
        let zeros = cycle(&bits, &[0]);
        let ones = cycle(&bits, &[1]);
        let mut prod = product_stream(vec![zeros, ones]).unwrap();
        let pre = prod.take_prefix(2).unwrap();
        assert_eq!(pre.render(), "0|1.0|1");

        let zeros = cycle(&bits, &[0]);
        let ones = cycle(&bits, &[1]);
        let mut il = interleave(zeros, ones).unwrap();
        assert_eq!(il.take_prefix(6).unwrap().render(), "010101");
    }

    #[test]
    fn von_neumann_pairs() {
        let bits = Alphabet::binary();
        // pairs: 00 01 10 11 01 -> outputs 0,1,0
        let s = lit(&bits, "0001101101");
        let mut out = von_neumann(s, 1_000).unwrap();
        assert_eq!(out.take_prefix(3).unwrap().render(), "010");

        let all_zero = cycle(&bits, &[0]);
        let mut out = von_neumann(all_zero, 100).unwrap();
        assert!(matches!(out.next_symbol(), Err(Error::Starved { .. })));

        // pairs (01)(10)(01) -> 010
        let s = lit(&bits, "011001");
        let mut out = von_neumann(s, 1_000).unwrap();
        assert_eq!(out.take_prefix(3).unwrap().render(), "010");
    }

    #[test]
    fn take_prefix_zero() {
        let bits = Alphabet::binary();
        let mut s = cycle(&bits, &[0]);
        assert!(s.take_prefix(0).unwrap().is_empty());
    }
}
