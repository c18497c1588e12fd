//! Exact finite-probability-space algebra: spaces, events, random variables,
//! conditioning, products and independence, all over big rationals.

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::rational::{rat_one, rat_zero, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A finite probability space: an alphabet plus exact rational weights
/// summing to exactly 1. Zero weights are allowed.
#[derive(Debug, Clone)]
pub struct FiniteProbabilitySpace {
    alphabet: Alphabet,
    weights: Vec<Rat>,
}

/// A subset of an alphabet's symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    alphabet: Alphabet,
    members: BTreeSet<Sym>,
}

/// A total mapping from a source alphabet to a target alphabet.
#[derive(Debug, Clone)]
pub struct RandomVariable {
    source: Alphabet,
    target: Alphabet,
    map: Vec<Sym>,
}

impl FiniteProbabilitySpace {
    /// Validates that every weight is nonnegative and the total is exactly 1.
    pub fn new(alphabet: Alphabet, weights: Vec<(String, Rat)>) -> Result<Self> {
        let mut w = vec![None; alphabet.len()];
        for (name, r) in weights {
            let id = alphabet.lookup(&name)?;
            if r.is_negative() {
                return Err(Error::NegativeWeight {
                    symbol: name,
                    weight: r,
                });
            }
            w[id as usize] = Some(r);
        }
        let mut resolved = Vec::with_capacity(alphabet.len());
        for (i, slot) in w.into_iter().enumerate() {
            match slot {
                Some(r) => resolved.push(r),
                None => {
                    return Err(Error::Parse(format!(
                        "no weight given for symbol `{}`",
                        alphabet.name(i as Sym)
                    )))
                }
            }
        }
        Self::from_weights(alphabet, resolved)
    }

    /// Weights given in alphabet order.
    pub fn from_weights(alphabet: Alphabet, weights: Vec<Rat>) -> Result<Self> {
        assert_eq!(weights.len(), alphabet.len());
        for (i, r) in weights.iter().enumerate() {
            if r.is_negative() {
                return Err(Error::NegativeWeight {
                    symbol: alphabet.name(i as Sym).to_string(),
                    weight: r.clone(),
                });
            }
        }
        let sum: Rat = weights.iter().fold(rat_zero(), |a, b| a + b);
        if !sum.is_one() {
            let deficit = rat_one() - &sum;
            return Err(Error::SumNotOne { sum, deficit });
        }
        Ok(FiniteProbabilitySpace { alphabet, weights })
    }

    /// Every symbol gets weight 1/#alphabet.
    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        let w = Rat::new(1.into(), (n as i64).into());
        FiniteProbabilitySpace {
            alphabet,
            weights: vec![w; n],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weight(&self, s: Sym) -> &Rat {
        &self.weights[s as usize]
    }

    pub fn weight_of(&self, name: &str) -> Result<&Rat> {
        Ok(self.weight(self.alphabet.lookup(name)?))
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// P(A): exact sum of member weights.
    pub fn event_prob(&self, a: &Event) -> Result<Rat> {
        if !a.alphabet.same_as(&self.alphabet) {
            return Err(Error::AlphabetMismatch(
                "event is over a different alphabet".into(),
            ));
        }
        Ok(a.members
            .iter()
            .fold(rat_zero(), |acc, &s| acc + self.weight(s)))
    }

    /// P(σ) = P(σ₁)⋯P(σ_n); the empty string has probability 1.
    pub fn string_prob(&self, word: &[Sym]) -> Rat {
        word.iter()
            .fold(rat_one(), |acc, &s| acc * self.weight(s))
    }

    pub fn string_prob_named(&self, token: &str) -> Result<Rat> {
        Ok(self.string_prob(&self.alphabet.parse_word(token)?))
    }

    /// P_B over the alphabet B with weights P(a)/P(B).
    pub fn conditional(&self, b: &Event) -> Result<FiniteProbabilitySpace> {
        let pb = self.event_prob(b)?;
        if pb.is_zero() {
            return Err(Error::ZeroConditionEvent);
        }
        let names: Vec<String> = b
            .members
            .iter()
            .map(|&s| self.alphabet.name(s).to_string())
            .collect();
        let sub = Alphabet::new(names)?;
        let weights = b.members.iter().map(|&s| self.weight(s) / &pb).collect();
        Ok(FiniteProbabilitySpace {
            alphabet: sub,
            weights,
        })
    }

    /// Push-forward X(P) over the target alphabet of `x`.
    pub fn induced(&self, x: &RandomVariable) -> Result<FiniteProbabilitySpace> {
        if !x.source.same_as(&self.alphabet) {
            return Err(Error::AlphabetMismatch(
                "random variable source differs from space alphabet".into(),
            ));
        }
        let mut weights = vec![rat_zero(); x.target.len()];
        for s in self.alphabet.ids() {
            weights[x.apply(s) as usize] += self.weight(s);
        }
        Ok(FiniteProbabilitySpace {
            alphabet: x.target.clone(),
            weights,
        })
    }

    /// Product space over the tuple alphabet with product weights.
    pub fn product(spaces: &[FiniteProbabilitySpace]) -> Result<FiniteProbabilitySpace> {
        assert!(!spaces.is_empty());
        let alphabet =
            Alphabet::product(&spaces.iter().map(|p| p.alphabet.clone()).collect::<Vec<_>>())?;
        let mut weights = vec![rat_one()];
        for p in spaces {
            let mut next = Vec::with_capacity(weights.len() * p.alphabet.len());
            for w in &weights {
                for s in p.alphabet.ids() {
                    next.push(w * p.weight(s));
                }
            }
            weights = next;
        }
        Ok(FiniteProbabilitySpace { alphabet, weights })
    }

    /// Checks the product rule on every subcollection of size >= 2.
    /// On failure returns the first violated index set.
    pub fn events_independent(&self, events: &[Event]) -> Result<IndependenceVerdict<Vec<usize>>> {
        let n = events.len();
        if n > 20 {
            return Err(Error::TooManyEvents(n));
        }
        let probs: Vec<Rat> = events
            .iter()
            .map(|e| self.event_prob(e))
            .collect::<Result<_>>()?;
        for mask in 0u32..(1u32 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let mut inter: BTreeSet<Sym> = events[idx[0]].members.clone();
            let mut prod = probs[idx[0]].clone();
            for &i in &idx[1..] {
                inter = inter
                    .intersection(&events[i].members)
                    .copied()
                    .collect();
                prod *= &probs[i];
            }
            let inter_prob = inter
                .iter()
                .fold(rat_zero(), |acc, &s| acc + self.weight(s));
            if inter_prob != prod {
                return Ok(IndependenceVerdict::Dependent(idx));
            }
        }
        Ok(IndependenceVerdict::Independent)
    }

    /// Random variables are independent iff the induced joint space equals
    /// the product of the induced marginals, exactly. On failure returns a
    /// witness outcome tuple.
    pub fn rvs_independent(
        &self,
        rvs: &[RandomVariable],
    ) -> Result<IndependenceVerdict<String>> {
        assert!(!rvs.is_empty());
        for x in rvs {
            if !x.source.same_as(&self.alphabet) {
                return Err(Error::AlphabetMismatch(
                    "random variable source differs from space alphabet".into(),
                ));
            }
        }
        let joint = self.induced(&RandomVariable::tuple(rvs)?)?;
        let marginals: Vec<FiniteProbabilitySpace> = rvs
            .iter()
            .map(|x| self.induced(x))
            .collect::<Result<_>>()?;
        let prod = FiniteProbabilitySpace::product(&marginals)?;
        debug_assert!(joint.alphabet.same_as(&prod.alphabet));
        for s in joint.alphabet.ids() {
            if joint.weight(s) != prod.weight(s) {
                return Ok(IndependenceVerdict::Dependent(
                    joint.alphabet.name(s).to_string(),
                ));
            }
        }
        Ok(IndependenceVerdict::Independent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceVerdict<W> {
    Independent,
    Dependent(W),
}

impl<W> IndependenceVerdict<W> {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceVerdict::Independent)
    }
}

impl Event {
    pub fn new<I, S>(alphabet: &Alphabet, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for m in members {
            set.insert(alphabet.lookup(m.as_ref())?);
        }
        Ok(Event {
            alphabet: alphabet.clone(),
            members: set,
        })
    }

    pub fn from_ids(alphabet: &Alphabet, ids: impl IntoIterator<Item = Sym>) -> Self {
        Event {
            alphabet: alphabet.clone(),
            members: ids.into_iter().collect(),
        }
    }

    pub fn full(alphabet: &Alphabet) -> Self {
        Event::from_ids(alphabet, alphabet.ids())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn members(&self) -> impl Iterator<Item = Sym> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.members.contains(&s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn complement(&self) -> Event {
        Event::from_ids(
            &self.alphabet,
            self.alphabet.ids().filter(|s| !self.members.contains(s)),
        )
    }

    pub fn intersect(&self, other: &Event) -> Event {
        Event {
            alphabet: self.alphabet.clone(),
            members: self
                .members
                .intersection(&other.members)
                .copied()
                .collect(),
        }
    }
}

impl RandomVariable {
    pub fn new(source: Alphabet, target: Alphabet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![None; source.len()];
        for (from, to) in pairs {
            map[source.lookup(from)? as usize] = Some(target.lookup(to)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::Parse(format!(
                        "random variable undefined on `{}`",
                        source.name(i as Sym)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Ok(RandomVariable {
            source,
            target,
            map,
        })
    }

    pub fn from_fn(
        source: Alphabet,
        target: Alphabet,
        f: impl Fn(&str) -> String,
    ) -> Result<Self> {
        let map = source
            .symbols()
            .iter()
            .map(|s| target.lookup(&f(s)))
            .collect::<Result<_>>()?;
        Ok(RandomVariable {
            source,
            target,
            map,
        })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        RandomVariable {
            source: alphabet.clone(),
            target: alphabet.clone(),
            map: alphabet.ids().collect(),
        }
    }

    /// Indicator χ_A mapping into {0,1}.
    pub fn indicator(a: &Event) -> Self {
        let target = Alphabet::binary();
        let map = a
            .alphabet
            .ids()
            .map(|s| if a.contains(s) { 1 } else { 0 })
            .collect();
        RandomVariable {
            source: a.alphabet.clone(),
            target,
            map,
        }
    }

    /// X₁×⋯×X_n into the product target alphabet.
    pub fn tuple(rvs: &[RandomVariable]) -> Result<Self> {
        assert!(!rvs.is_empty());
        let source = rvs[0].source.clone();
        for x in rvs {
            if !x.source.same_as(&source) {
                return Err(Error::AlphabetMismatch(
                    "tuple components have different sources".into(),
                ));
            }
        }
        let target =
            Alphabet::product(&rvs.iter().map(|x| x.target.clone()).collect::<Vec<_>>())?;
        let map = source
            .ids()
            .map(|s| {
                let name = rvs
                    .iter()
                    .map(|x| x.target.name(x.apply(s)))
                    .collect::<Vec<_>>()
                    .join("|");
                target.lookup(&name)
            })
            .collect::<Result<_>>()?;
        Ok(RandomVariable {
            source,
            target,
            map,
        })
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn apply(&self, s: Sym) -> Sym {
        self.map[s as usize]
    }

    /// Preimage of a target symbol.
    pub fn preimage(&self, t: Sym) -> Vec<Sym> {
        self.source
            .ids()
            .filter(|&s| self.map[s as usize] == t)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub(crate) fn p3() -> FiniteProbabilitySpace {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        FiniteProbabilitySpace::from_weights(a, vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap()
    }

    #[test]
    fn make_space_validation() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let err =
            FiniteProbabilitySpace::from_weights(a.clone(), vec![rat(2, 3), rat(2, 3)]).unwrap_err();
        match err {
            Error::SumNotOne { deficit, .. } => assert_eq!(deficit, rat(-1, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(
            FiniteProbabilitySpace::from_weights(a.clone(), vec![rat(-1, 2), rat(3, 2)]).is_err()
        );
        let u = FiniteProbabilitySpace::uniform(a);
        assert_eq!(u.weight(0), &rat(1, 2));
    }

    #[test]
    fn uniform_singleton() {
        let a = Alphabet::new(["m"]).unwrap();
        let u = FiniteProbabilitySpace::uniform(a);
        assert_eq!(u.weight(0), &rat(1, 1));
    }

    #[test]
    fn event_prob_cases() {
        let p = p3();
        let xy = Event::new(p.alphabet(), ["x", "y"]).unwrap();
        assert_eq!(p.event_prob(&xy).unwrap(), rat(5, 6));
        let empty = Event::from_ids(p.alphabet(), []);
        assert_eq!(p.event_prob(&empty).unwrap(), rat(0, 1));
        let full = Event::full(p.alphabet());
        assert_eq!(p.event_prob(&full).unwrap(), rat(1, 1));
    }

    #[test]
    fn string_prob_cases() {
        let p = p3();
        assert_eq!(p.string_prob_named("xyz").unwrap(), rat(1, 36));
        assert_eq!(p.string_prob_named("").unwrap(), rat(1, 1));
        assert_eq!(p.string_prob_named("zz").unwrap(), rat(1, 36));
        assert!(p.string_prob_named("w").is_err());
    }

    #[test]
    fn conditional_cases() {
        let p = p3();
        let b = Event::new(p.alphabet(), ["x", "y"]).unwrap();
        let pb = p.conditional(&b).unwrap();
        assert_eq!(pb.weight_of("x").unwrap(), &rat(3, 5));
        assert_eq!(pb.weight_of("y").unwrap(), &rat(2, 5));

        let full = Event::full(p.alphabet());
        let pfull = p.conditional(&full).unwrap();
        assert_eq!(pfull.weights(), p.weights());

        let z = Event::new(p.alphabet(), ["z"]).unwrap();
        let pz = p.conditional(&z).unwrap();
        assert_eq!(pz.weight_of("z").unwrap(), &rat(1, 1));

        let dead = Event::from_ids(p.alphabet(), []);
        assert!(matches!(
            p.conditional(&dead),
            Err(Error::ZeroConditionEvent)
        ));
    }

    #[test]
    fn induced_cases() {
        let p = p3();
        let a = Event::new(p.alphabet(), ["x", "y"]).unwrap();
        let chi = RandomVariable::indicator(&a);
        let q = p.induced(&chi).unwrap();
        assert_eq!(q.weight_of("1").unwrap(), &rat(5, 6));
        assert_eq!(q.weight_of("0").unwrap(), &rat(1, 6));

        let id = RandomVariable::identity(p.alphabet());
        assert_eq!(p.induced(&id).unwrap().weights(), p.weights());

        let c = Alphabet::new(["c"]).unwrap();
        let konst = RandomVariable::from_fn(p.alphabet().clone(), c, |_| "c".into()).unwrap();
        assert_eq!(p.induced(&konst).unwrap().weight(0), &rat(1, 1));
    }

    #[test]
    fn product_cases() {
        let u2 = FiniteProbabilitySpace::uniform(Alphabet::binary());
        let q = FiniteProbabilitySpace::product(&[u2.clone(), u2]).unwrap();
        assert_eq!(q.alphabet().len(), 4);
        for s in q.alphabet().ids() {
            assert_eq!(q.weight(s), &rat(1, 4));
        }

        let p = p3();
        let single = FiniteProbabilitySpace::product(std::slice::from_ref(&p)).unwrap();
        assert_eq!(single.weights(), p.weights());

        let point = FiniteProbabilitySpace::from_weights(
            Alphabet::new(["a"]).unwrap(),
            vec![rat(1, 1)],
        )
        .unwrap();
        let mixed = FiniteProbabilitySpace::product(&[point, p.clone()]).unwrap();
        assert_eq!(mixed.weights(), p.weights());
    }

    #[test]
    fn events_independence_cases() {
        let pairs = Alphabet::new(["00", "01", "10", "11"]).unwrap();
        let u4 = FiniteProbabilitySpace::uniform(pairs.clone());
        let first = Event::new(&pairs, ["10", "11"]).unwrap();
        let second = Event::new(&pairs, ["01", "11"]).unwrap();
        assert!(u4
            .events_independent(&[first.clone(), second])
            .unwrap()
            .is_independent());

        let v = u4
            .events_independent(&[first.clone(), first.clone()])
            .unwrap();
        assert_eq!(v, IndependenceVerdict::Dependent(vec![0, 1]));

        let empty = Event::from_ids(&pairs, []);
        assert!(u4
            .events_independent(&[empty, first])
            .unwrap()
            .is_independent());
    }

    #[test]
    fn rv_independence_cases() {
        let pairs = Alphabet::new(["00", "01", "10", "11"]).unwrap();
        let u4 = FiniteProbabilitySpace::uniform(pairs.clone());
        let bits = Alphabet::binary();
        let first =
            RandomVariable::from_fn(pairs.clone(), bits.clone(), |s| s[0..1].into()).unwrap();
        let second =
            RandomVariable::from_fn(pairs.clone(), bits.clone(), |s| s[1..2].into()).unwrap();
        let xor = RandomVariable::from_fn(pairs.clone(), bits.clone(), |s| {
            if &s[0..1] == &s[1..2] { "0".into() } else { "1".into() }
        })
        .unwrap();

        assert!(u4
            .rvs_independent(&[first.clone(), second])
            .unwrap()
            .is_independent());
        assert!(u4
            .rvs_independent(&[first.clone(), xor])
            .unwrap()
            .is_independent());
        assert!(!u4
            .rvs_independent(&[first.clone(), first.clone()])
            .unwrap()
            .is_independent());
    }
}
