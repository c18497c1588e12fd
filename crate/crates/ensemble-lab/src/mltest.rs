//! Explicit Martin-Löf P-test representation with exact cylinder-measure
//! accounting, the proof-constructive test transformations, and the
//! product-splitting section machinery.
//!
//! Tests are extensional: explicit finite levels rather than machine
//! enumerations. Strict `< 2^-n` bounds are enforced exactly; equality is
//! reported as a violation carrying the exact measure.

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::prob::{Event, FiniteProbabilitySpace, RandomVariable};
use crate::rational::{pow2_neg, rat_one, rat_zero, Rat};
use crate::stream::SelectionRule;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

pub type Word = Vec<Sym>;

/// Symbol-indexed trie over words; terminal nodes mark set membership.
#[derive(Debug, Default, Clone)]
struct TrieNode {
    terminal: bool,
    children: BTreeMap<Sym, TrieNode>,
}

impl TrieNode {
    fn insert(&mut self, word: &[Sym]) {
        let mut node = self;
        for &s in word {
            node = node.children.entry(s).or_default();
        }
        node.terminal = true;
    }

    /// True iff some member of the set is a prefix (not necessarily proper)
    /// of `word`.
    fn covers(&self, word: &[Sym]) -> bool {
        let mut node = self;
        if node.terminal {
            return true;
        }
        for &s in word {
            match node.children.get(&s) {
                Some(child) => {
                    node = child;
                    if node.terminal {
                        return true;
                    }
                }
                None => return false,
            }
        }
        false
    }

    /// True iff some proper prefix of `word` is a member.
    fn has_proper_prefix_of(&self, word: &[Sym]) -> bool {
        if word.is_empty() {
            return false;
        }
        let mut node = self;
        if node.terminal {
            return true;
        }
        for &s in &word[..word.len() - 1] {
            match node.children.get(&s) {
                Some(child) => {
                    node = child;
                    if node.terminal {
                        return true;
                    }
                }
                None => return false,
            }
        }
        false
    }
}

/// Finite antichain of words: no member is a proper prefix of another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixFreeSet {
    strings: BTreeSet<Word>,
}

impl PrefixFreeSet {
    pub fn strings(&self) -> &BTreeSet<Word> {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// Minimal-length antichain with the same open set: keeps each string none
/// of whose proper prefixes is in the set.
pub fn prefix_free_reduce<'a, I>(strings: I) -> PrefixFreeSet
where
    I: IntoIterator<Item = &'a Word>,
{
    let all: BTreeSet<Word> = strings.into_iter().cloned().collect();
    let mut trie = TrieNode::default();
    for w in &all {
        trie.insert(w);
    }
    let strings = all
        .iter()
        .filter(|w| !trie.has_proper_prefix_of(w))
        .cloned()
        .collect();
    PrefixFreeSet { strings }
}

/// Check that a word set is already an antichain; on violation returns the
/// offending pair.
pub fn check_prefix_free(strings: &BTreeSet<Word>, alphabet: &Alphabet) -> Result<()> {
    let mut trie = TrieNode::default();
    for w in strings {
        trie.insert(w);
    }
    for w in strings {
        if trie.has_proper_prefix_of(w) {
            // find the offending prefix for the report
            for cut in 0..w.len() {
                if strings.contains(&w[..cut].to_vec()) {
                    return Err(Error::NotPrefixFreeLevel(
                        alphabet.render(&w[..cut]),
                        alphabet.render(w),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Exact λ_P(⟦strings⟧): sum of string probabilities over the reduced
/// antichain.
pub fn open_measure<'a, I>(space: &FiniteProbabilitySpace, strings: I) -> Rat
where
    I: IntoIterator<Item = &'a Word>,
{
    let reduced = prefix_free_reduce(strings);
    reduced
        .strings
        .iter()
        .fold(rat_zero(), |acc, w| acc + space.string_prob(w))
}

/// One level of a Martin-Löf P-test: index n, string set, and an exact
/// measure certificate once certified.
#[derive(Debug, Clone)]
pub struct TestLevel {
    pub index: u32,
    pub strings: BTreeSet<Word>,
    pub certificate: Option<Rat>,
}

impl TestLevel {
    pub fn new(index: u32, strings: impl IntoIterator<Item = Word>) -> Self {
        TestLevel {
            index,
            strings: strings.into_iter().collect(),
            certificate: None,
        }
    }

    /// True iff some level string is a prefix of the given word. A false
    /// answer is provisional: a longer prefix may flip it.
    pub fn member(&self, prefix: &[Sym]) -> bool {
        let mut trie = TrieNode::default();
        for w in &self.strings {
            trie.insert(w);
        }
        trie.covers(prefix)
    }
}

/// Outcome of certifying one level against a space.
#[derive(Debug, Clone)]
pub struct Certification {
    pub index: u32,
    pub measure: Rat,
    pub bound: Rat,
    pub certified: bool,
}

/// Computes the exact level measure and certifies iff measure < 2^-index
/// (strictly; equality is a violation).
pub fn certify_level(space: &FiniteProbabilitySpace, level: &TestLevel) -> Certification {
    let measure = open_measure(space, level.strings.iter());
    let bound = pow2_neg(level.index);
    Certification {
        index: level.index,
        certified: measure < bound,
        measure,
        bound,
    }
}

/// Level-indexed family with explicit finite levels, all certified against
/// one space.
#[derive(Debug, Clone)]
pub struct MLTestFamily {
    pub space: FiniteProbabilitySpace,
    pub levels: BTreeMap<u32, TestLevel>,
}

impl MLTestFamily {
    pub fn new(space: FiniteProbabilitySpace) -> Self {
        MLTestFamily {
            space,
            levels: BTreeMap::new(),
        }
    }

    pub fn certify_all(&mut self) -> Vec<Certification> {
        let mut out = Vec::new();
        for level in self.levels.values_mut() {
            let cert = certify_level(&self.space, level);
            if cert.certified {
                level.certificate = Some(cert.measure.clone());
            }
            out.push(cert);
        }
        out
    }
}

/// The single test accepting exactly prefixes that contain a zero-weight
/// symbol; every level has exact measure 0.
#[derive(Debug, Clone)]
pub struct ZeroProbTest {
    zero_symbols: BTreeSet<Sym>,
}

pub fn zero_prob_test(space: &FiniteProbabilitySpace) -> ZeroProbTest {
    ZeroProbTest {
        zero_symbols: space
            .alphabet()
            .ids()
            .filter(|&s| space.weight(s).is_zero())
            .collect(),
    }
}

impl ZeroProbTest {
    /// Membership is level-independent: the same predicate at every index.
    pub fn member(&self, _level: u32, prefix: &[Sym]) -> bool {
        prefix.iter().any(|s| self.zero_symbols.contains(s))
    }

    pub fn level_measure(&self, _level: u32) -> Rat {
        rat_zero()
    }

    pub fn is_trivial(&self) -> bool {
        self.zero_symbols.is_empty()
    }
}

/// Frequency-deviation test for a binary space: parameters and membership
/// predicate derived from the exponential tail bound.
#[derive(Debug, Clone)]
pub struct LlnTest {
    pub r_left: Rat,
    pub r_right: Rat,
    pub decay: Rat,
}

/// Builds the test data for a {0,1} space: rational guard band
/// (r_L, r_R) = Q(1) -/+ 3ε/2, decay constant c = half the admissible
/// supremum ε²/(2 Q(0)Q(1)), and the least growth f(n) with
/// 2e^{-c f(n)}/(1-e^{-c}) < 2^{-n}.
pub fn lln_test(q: &FiniteProbabilitySpace, eps: &Rat) -> Result<LlnTest> {
    let bits = Alphabet::binary();
    if !q.alphabet().same_as(&bits) {
        return Err(Error::AlphabetMismatch("lln_test needs a {0,1} space".into()));
    }
    let q0 = q.weight(0).clone();
    let q1 = q.weight(1).clone();
    if q0.is_zero() || q1.is_zero() {
        return Err(Error::DegenerateQ);
    }
    let limit = &q0 * &q1;
    if eps <= &rat_zero() || eps > &limit {
        return Err(Error::EpsilonOutOfRange { limit });
    }
    let three_half_eps = eps * Rat::new(3.into(), 2.into());
    let r_left = &q1 - &three_half_eps;
    let r_right = &q1 + &three_half_eps;
    // c strictly inside (0, ε²/(2 Q(0)Q(1))): take the midpoint
    let sup = eps * eps / (Rat::new(2.into(), 1.into()) * &q0 * &q1);
    let decay = sup / Rat::new(2.into(), 1.into());
    Ok(LlnTest {
        r_left,
        r_right,
        decay,
    })
}

impl LlnTest {
    /// Least m with 2e^{-cm}/(1-e^{-c}) < 2^{-n}, rounded outward.
    pub fn growth(&self, n: u32) -> u64 {
        let c = crate::rational::rat_to_f64(&self.decay);
        let tail = |m: f64| 2.0 * (-c * m).exp() / (1.0 - (-c).exp());
        let target = 2f64.powi(-(n as i32));
        // closed-form candidate, then step outward until strictly below
        let mut m = (((2.0 / (1.0 - (-c).exp())).ln() + (n as f64) * 2f64.ln()) / c)
            .ceil()
            .max(1.0) as u64;
        while tail(m as f64) >= target {
            m += 1;
        }
        m
    }

    /// Membership at level n for a prefix β↾d: true iff some m in
    /// [f(n), d] has N₁(β↾m)/m outside [r_L, r_R].
    pub fn member(&self, n: u32, prefix: &[Sym]) -> bool {
        let f = self.growth(n);
        let mut ones = prefix[..(f.min(prefix.len() as u64) as usize).saturating_sub(1)]
            .iter()
            .filter(|&&s| s == 1)
            .count() as i64;
        for m in f..=(prefix.len() as u64) {
            ones += (prefix[(m - 1) as usize] == 1) as i64;
            let freq = Rat::new(ones.into(), (m as i64).into());
            if freq < self.r_left || freq > self.r_right {
                return true;
            }
        }
        false
    }
}

/// Full preimage expansion of one string under a random variable: all τ of
/// the same length mapping pointwise onto σ. The measure identity
/// λ_P(⟦f(σ)⟧) = λ_{X(P)}(⟦σ⟧) holds exactly per string.
pub fn map_preimage(x: &RandomVariable, sigma: &[Sym]) -> BTreeSet<Word> {
    let mut acc: Vec<Word> = vec![Vec::new()];
    for &t in sigma {
        let pre = x.preimage(t);
        let mut next = Vec::with_capacity(acc.len() * pre.len());
        for w in &acc {
            for &p in &pre {
                let mut w2 = w.clone();
                w2.push(p);
                next.push(w2);
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

/// Lifts a level over the target alphabet to a level over the source.
pub fn transform_map(
    x: &RandomVariable,
    level: &TestLevel,
    space: &FiniteProbabilitySpace,
) -> Result<TestLevel> {
    if !x.source().same_as(space.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "transform_map space does not match random variable source".into(),
        ));
    }
    let mut strings = BTreeSet::new();
    for sigma in &level.strings {
        strings.extend(map_preimage(x, sigma));
    }
    Ok(TestLevel {
        index: level.index,
        strings,
        certificate: None,
    })
}

/// F(σ) for computable shuffling: all τ with |τ| = max f({1..|σ|}) and
/// σ(k) = τ(f(k)); unconstrained positions range over the whole alphabet.
/// Exact measure preservation per string.
pub fn shuffle_preimage(
    f: &crate::stream::Injection,
    sigma: &[Sym],
    alphabet: &Alphabet,
) -> Result<BTreeSet<Word>> {
    if sigma.is_empty() {
        return Err(Error::EmptyStringInLevel);
    }
    let mut targets: Vec<u64> = Vec::with_capacity(sigma.len());
    let mut seen = BTreeSet::new();
    for k in 1..=(sigma.len() as u64) {
        let idx = f.apply(k)?;
        if !seen.insert(idx) {
            return Err(Error::NotInjective(idx));
        }
        targets.push(idx);
    }
    let len = *targets.iter().max().unwrap() as usize;
    let mut constrained: Vec<Option<Sym>> = vec![None; len];
    for (k, &idx) in targets.iter().enumerate() {
        constrained[(idx - 1) as usize] = Some(sigma[k]);
    }
    let mut acc: Vec<Word> = vec![Vec::new()];
    for slot in &constrained {
        let choices: Vec<Sym> = match slot {
            Some(s) => vec![*s],
            None => alphabet.ids().collect(),
        };
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for w in &acc {
            for &c in &choices {
                let mut w2 = w.clone();
                w2.push(c);
                next.push(w2);
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().collect())
}

pub fn transform_shuffle(
    f: &crate::stream::Injection,
    level: &TestLevel,
    space: &FiniteProbabilitySpace,
) -> Result<TestLevel> {
    if level.strings.contains(&Vec::new()) {
        return Err(Error::EmptyStringInLevel);
    }
    let mut strings = BTreeSet::new();
    for sigma in &level.strings {
        strings.extend(shuffle_preimage(f, sigma, space.alphabet())?);
    }
    Ok(TestLevel {
        index: level.index,
        strings,
        certificate: None,
    })
}

/// F(σ) ∩ Ω^{≤d} for selection: all τ of length at most d from which the
/// rule selects exactly σ, the last selected position being |τ|.
pub fn select_preimage(
    rule: &SelectionRule,
    sigma: &[Sym],
    alphabet: &Alphabet,
    depth: usize,
) -> Result<BTreeSet<Word>> {
    if sigma.is_empty() {
        return Ok(std::iter::once(Vec::new()).collect());
    }
    let mut out = BTreeSet::new();
    // depth-first over τ, tracking which YES positions have been matched
    fn walk(
        rule: &SelectionRule,
        sigma: &[Sym],
        alphabet: &Alphabet,
        depth: usize,
        tau: &mut Word,
        matched: usize,
        out: &mut BTreeSet<Word>,
    ) -> Result<()> {
        // decide whether position |tau|+1 is selected
        let verdict = rule
            .decide(alphabet, tau)
            .ok_or(Error::Stalled(tau.len()))?;
        if verdict && matched == sigma.len() {
            // another selected position would extend sigma: dead end
            return Ok(());
        }
        if tau.len() >= depth {
            return Ok(());
        }
        if verdict {
            // the next symbol must be sigma[matched]
            tau.push(sigma[matched]);
            if matched + 1 == sigma.len() {
                out.insert(tau.clone());
            } else {
                walk(rule, sigma, alphabet, depth, tau, matched + 1, out)?;
            }
            // even when complete, longer strings with trailing NO positions
            // would not end at a selected position, so stop extending here
            tau.pop();
        } else {
            for s in alphabet.ids() {
                tau.push(s);
                walk(rule, sigma, alphabet, depth, tau, matched, out)?;
                tau.pop();
            }
        }
        Ok(())
    }
    let mut tau = Vec::new();
    walk(rule, sigma, alphabet, depth, &mut tau, 0, &mut out)?;
    Ok(out)
}

/// Truncated selection transform: level strings mapped through
/// select_preimage, with the truncated measure (a lower bound on the open
/// set, and still at most the original level measure).
pub fn transform_select(
    rule: &SelectionRule,
    level: &TestLevel,
    space: &FiniteProbabilitySpace,
    depth: usize,
) -> Result<(TestLevel, Rat)> {
    let mut strings = BTreeSet::new();
    for sigma in &level.strings {
        strings.extend(select_preimage(rule, sigma, space.alphabet(), depth)?);
    }
    let out = TestLevel {
        index: level.index,
        strings,
        certificate: None,
    };
    let measure = open_measure(space, out.strings.iter());
    Ok((out, measure))
}

/// Result of the conditioning transform for one string.
#[derive(Debug, Clone)]
pub struct ConditionTransform {
    /// Alphabet B ∪ {a} of the pattern strings.
    pub alphabet: Alphabet,
    /// The merged symbol standing for Ω \ B, if B is proper.
    pub merged: Option<Sym>,
    /// Human-readable pattern a*σ₁a*σ₂…a*σ_L.
    pub pattern: String,
    /// Exact λ_Q(⟦σ⟧)/(1-Q(a))^L = λ_{P_B}(⟦σ⟧).
    pub closed_form: Rat,
    /// Finite enumeration with Σkᵢ ≤ d.
    pub truncated: BTreeSet<Word>,
    /// Measure of the truncation: a lower bound converging to closed_form.
    pub truncated_measure: Rat,
}

/// Conditioning transform for a single string σ over the event alphabet B.
/// Follows the merged-symbol construction: Q collapses Ω \ B onto one
/// fresh-by-choice symbol a with Q(a) = 1 - P(B).
pub fn transform_condition(
    b: &Event,
    sigma_b: &str,
    space: &FiniteProbabilitySpace,
    depth: usize,
) -> Result<ConditionTransform> {
    let pb = space.event_prob(b)?;
    if pb.is_zero() {
        return Err(Error::ZeroConditionEvent);
    }
    let omega = space.alphabet();
    let b_names: Vec<String> = b.members().map(|s| omega.name(s).to_string()).collect();

    if b.len() == omega.len() {
        // conditioning on the whole space: pattern is σ itself
        let word = omega.parse_word(sigma_b)?;
        let measure = space.string_prob(&word);
        return Ok(ConditionTransform {
            alphabet: omega.clone(),
            merged: None,
            pattern: sigma_b.to_string(),
            closed_form: measure.clone(),
            truncated: std::iter::once(word).collect(),
            truncated_measure: measure,
        });
    }

    let merged_name = omega
        .symbols()
        .iter()
        .find(|s| !b_names.contains(s))
        .unwrap()
        .clone();
    let mut q_names = b_names.clone();
    q_names.push(merged_name.clone());
    let q_alpha = Alphabet::new(q_names)?;
    let merged_id = q_alpha.lookup(&merged_name)?;
    // the merged symbol carries the whole mass outside B
    let q_weights: Vec<Rat> = q_alpha
        .symbols()
        .iter()
        .map(|name| {
            if name == &merged_name {
                Ok(rat_one() - &pb)
            } else {
                space.weight_of(name).cloned()
            }
        })
        .collect::<Result<_>>()?;
    let q = FiniteProbabilitySpace::from_weights(q_alpha.clone(), q_weights)?;

    let sigma: Word = {
        // parse σ over the sub-alphabet of B, then reindex into Q's alphabet
        let b_alpha = Alphabet::new(b_names.clone())?;
        b_alpha
            .parse_word(sigma_b)?
            .iter()
            .map(|&s| q_alpha.lookup(b_alpha.name(s)).unwrap())
            .collect()
    };
    let big_l = sigma.len() as u32;
    let q_sigma = q.string_prob(&sigma);
    let closed_form = &q_sigma / crate::rational::rat_pow(&pb, big_l);

    // enumeration a^{k1}σ1 ... a^{kL}σL with Σki ≤ depth
    let mut truncated = BTreeSet::new();
    let mut gaps = vec![0usize; sigma.len()];
    enumerate_gaps(&sigma, merged_id, depth, 0, &mut gaps, &mut truncated);
    let truncated_measure = truncated
        .iter()
        .fold(rat_zero(), |acc, w| acc + q.string_prob(w));

    let pattern = sigma
        .iter()
        .map(|&s| format!("{merged_name}*{}", q_alpha.name(s)))
        .collect::<Vec<_>>()
        .join("");

    Ok(ConditionTransform {
        alphabet: q_alpha,
        merged: Some(merged_id),
        pattern,
        closed_form,
        truncated,
        truncated_measure,
    })
}

fn enumerate_gaps(
    sigma: &[Sym],
    merged: Sym,
    budget: usize,
    pos: usize,
    gaps: &mut Vec<usize>,
    out: &mut BTreeSet<Word>,
) {
    if pos == sigma.len() {
        let mut w = Vec::new();
        for (i, &s) in sigma.iter().enumerate() {
            w.extend(std::iter::repeat(merged).take(gaps[i]));
            w.push(s);
        }
        out.insert(w);
        return;
    }
    for k in 0..=budget {
        gaps[pos] = k;
        enumerate_gaps(sigma, merged, budget - k, pos + 1, gaps, out);
    }
    gaps[pos] = 0;
}

/// Split a pair symbol of a product alphabet Ω₁×Ω₂ into its components.
pub fn pair_components(pair_sym: Sym, n2: usize) -> (Sym, Sym) {
    (pair_sym / n2 as Sym, pair_sym % n2 as Sym)
}

pub fn pair_symbol(s1: Sym, s2: Sym, n2: usize) -> Sym {
    s1 * n2 as Sym + s2
}

/// Projection F(W,x): first components of pair-strings in W whose second
/// component is a prefix of x.
pub fn vl_project(w: &BTreeSet<Word>, x: &[Sym], n2: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for pair_word in w {
        let (s1, s2): (Word, Word) = pair_word
            .iter()
            .map(|&p| pair_components(p, n2))
            .unzip();
        if s2.len() <= x.len() && s2[..] == x[..s2.len()] {
            out.insert(s1);
        }
    }
    out
}

/// Section report for one oracle prefix x against a prefix-free level V_d.
#[derive(Debug, Clone)]
pub struct VlSections {
    /// 2^-d < P₁(F(V_d ∩ ≤|x|, x))
    pub in_s_d: bool,
    pub f_measure: Rat,
    /// H_d(|x|): first components w with some prefix of w×x in V_d^{≤|x|}.
    pub h_set: BTreeSet<Word>,
    pub h_measure: Rat,
    /// The 2^-d bound the H-measure must respect when x is outside S_d.
    pub bound: Rat,
}

pub fn vl_sections(
    p1: &FiniteProbabilitySpace,
    p2: &FiniteProbabilitySpace,
    v_d: &TestLevel,
    d: u32,
    x: &[Sym],
) -> Result<VlSections> {
    let n2 = p2.alphabet().len();
    check_prefix_free(&v_d.strings, &pair_alphabet(p1, p2)?)?;
    let n = x.len();
    let v_trunc: BTreeSet<Word> = v_d
        .strings
        .iter()
        .filter(|w| w.len() <= n)
        .cloned()
        .collect();
    let f = vl_project(&v_trunc, x, n2);
    // W prefix-free makes F(W,x) an antichain: sum directly
    let f_measure = f
        .iter()
        .fold(rat_zero(), |acc, w| acc + p1.string_prob(w));
    let bound = pow2_neg(d);
    let in_s_d = bound < f_measure;

    // H_d(n): w ∈ Ω₁^n with some prefix of w×x in the truncated level
    let mut trie = TrieNode::default();
    for w in &v_trunc {
        trie.insert(w);
    }
    let mut h_set = BTreeSet::new();
    let mut w = Vec::with_capacity(n);
    collect_h(&trie, p1.alphabet(), x, n2, n, &mut w, &mut h_set);
    let h_measure = open_measure(p1, h_set.iter());
    Ok(VlSections {
        in_s_d,
        f_measure,
        h_set,
        h_measure,
        bound,
    })
}

fn pair_alphabet(
    p1: &FiniteProbabilitySpace,
    p2: &FiniteProbabilitySpace,
) -> Result<Alphabet> {
    Alphabet::product(&[p1.alphabet().clone(), p2.alphabet().clone()])
}

fn collect_h(
    trie: &TrieNode,
    a1: &Alphabet,
    x: &[Sym],
    n2: usize,
    n: usize,
    w: &mut Word,
    out: &mut BTreeSet<Word>,
) {
    // walk all w of length n; membership = trie covers the paired word
    fn covered(trie: &TrieNode, w: &[Sym], x: &[Sym], n2: usize) -> bool {
        let paired: Word = w
            .iter()
            .zip(x)
            .map(|(&s1, &s2)| pair_symbol(s1, s2, n2))
            .collect();
        trie.covers(&paired)
    }
    if w.len() == n {
        if covered(trie, w, x, n2) {
            out.insert(w.clone());
        }
        return;
    }
    for s in a1.ids() {
        w.push(s);
        collect_h(trie, a1, x, n2, n, w, out);
        w.pop();
    }
}

/// Oracle-indexed level: U^σ_n as a pure function of the oracle prefix.
pub struct OracleIndexedLevel<'a> {
    pub produce: &'a dyn Fn(&[Sym]) -> BTreeSet<Word>,
}

/// Merge report: the pair-string set G_n(k) and its exact measure.
#[derive(Debug, Clone)]
pub struct OracleMerge {
    pub g: BTreeSet<Word>,
    pub measure: Rat,
    pub bound: Rat,
    /// Strict bound measure < 2^-n; exact equality is a reported violation.
    pub within_bound: bool,
}

/// G_n(k) = { u×σ : u ∈ Ω₁^k, σ ∈ Ω₂^k, some prefix of u ∈ U^σ_n }, with
/// per-section certification λ_{P₁}(⟦U^σ_n⟧) < 2^-n checked first.
pub fn vl_oracle_merge(
    u: &OracleIndexedLevel,
    p1: &FiniteProbabilitySpace,
    p2: &FiniteProbabilitySpace,
    n: u32,
    k: usize,
) -> Result<OracleMerge> {
    let bound = pow2_neg(n);
    let n2 = p2.alphabet().len();
    let mut g = BTreeSet::new();

    let mut sections: Vec<Word> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &sections {
            for sym in p2.alphabet().ids() {
                let mut s2 = s.clone();
                s2.push(sym);
                next.push(s2);
            }
        }
        sections = next;
    }

    for sigma in &sections {
        let level = (u.produce)(sigma);
        let m = open_measure(p1, level.iter());
        if m >= bound {
            return Err(Error::UncertifiedOracleLevel {
                section: p2.alphabet().render(sigma),
                index: n,
                measure: m,
            });
        }
        let mut trie = TrieNode::default();
        for w in &level {
            trie.insert(w);
        }
        // all u ∈ Ω₁^k with a prefix in the section level
        let mut w = Vec::with_capacity(k);
        let mut us = BTreeSet::new();
        collect_covered(&trie, p1.alphabet(), k, &mut w, &mut us);
        for uword in us {
            let paired: Word = uword
                .iter()
                .zip(sigma)
                .map(|(&s1, &s2)| pair_symbol(s1, s2, n2))
                .collect();
            g.insert(paired);
        }
    }

    let prod = FiniteProbabilitySpace::product(&[p1.clone(), p2.clone()])?;
    let measure = open_measure(&prod, g.iter());
    let within_bound = measure < bound;
    Ok(OracleMerge {
        g,
        measure,
        bound,
        within_bound,
    })
}

fn collect_covered(
    trie: &TrieNode,
    alphabet: &Alphabet,
    k: usize,
    w: &mut Word,
    out: &mut BTreeSet<Word>,
) {
    if w.len() == k {
        if trie.covers(w) {
            out.insert(w.clone());
        }
        return;
    }
    for s in alphabet.ids() {
        w.push(s);
        collect_covered(trie, alphabet, k, w, out);
        w.pop();
    }
}
