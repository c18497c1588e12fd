//! Finite encryption schemes and a decidable perfect-secrecy verifier.
//!
//! Enc and Dec are extensional tables, never user code, so every check is
//! total and exact. Perfect secrecy is decided by exact independence of the
//! message and ciphertext variables under the uniform message distribution
//! with the scheme's key space — sufficient for the universally quantified
//! definition, which the tests exercise separately.

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::prob::FiniteProbabilitySpace;
use crate::rational::{rat_zero, Rat};

#[derive(Debug, Clone)]
pub struct EncryptionScheme {
    pub messages: Alphabet,
    pub keys: Alphabet,
    pub ciphers: Alphabet,
    pub key_space: FiniteProbabilitySpace,
    /// enc[m][k] = c
    enc: Vec<Vec<Sym>>,
    /// dec[c][k] = m, derived by inverting enc per key; unreachable (c,k)
    /// cells are filled arbitrarily and validation exposes any ambiguity.
    dec: Vec<Vec<Sym>>,
}

impl EncryptionScheme {
    pub fn new(
        messages: Alphabet,
        keys: Alphabet,
        ciphers: Alphabet,
        key_space: FiniteProbabilitySpace,
        enc: Vec<Vec<Sym>>,
    ) -> Result<Self> {
        if !key_space.alphabet().same_as(&keys) {
            return Err(Error::AlphabetMismatch(
                "key space is not over the key alphabet".into(),
            ));
        }
        assert_eq!(enc.len(), messages.len());
        for row in &enc {
            assert_eq!(row.len(), keys.len());
            for &c in row {
                assert!((c as usize) < ciphers.len());
            }
        }
        // invert per key: last writer wins, validation catches collisions
        let mut dec = vec![vec![0 as Sym; keys.len()]; ciphers.len()];
        for (m, row) in enc.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                dec[c as usize][k] = m as Sym;
            }
        }
        Ok(EncryptionScheme {
            messages,
            keys,
            ciphers,
            key_space,
            enc,
            dec,
        })
    }

    pub fn enc(&self, m: Sym, k: Sym) -> Sym {
        self.enc[m as usize][k as usize]
    }

    pub fn dec(&self, c: Sym, k: Sym) -> Sym {
        self.dec[c as usize][k as usize]
    }
}

/// Exhaustive correctness check Dec(Enc(m,k),k) = m over ℳ×𝒦; violations
/// are returned as (message, key) witnesses, not errors.
#[derive(Debug, Clone)]
pub struct SchemeAudit {
    pub violations: Vec<(String, String)>,
}

impl SchemeAudit {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_scheme(scheme: &EncryptionScheme) -> SchemeAudit {
    let mut violations = Vec::new();
    for m in scheme.messages.ids() {
        for k in scheme.keys.ids() {
            if scheme.dec(scheme.enc(m, k), k) != m {
                violations.push((
                    scheme.messages.name(m).to_string(),
                    scheme.keys.name(k).to_string(),
                ));
            }
        }
    }
    SchemeAudit { violations }
}

/// Σ_k P_key(k)[Enc(m,k)=c] — the conditional ciphertext weight the
/// not-depend-on-m identity is about.
pub fn cipher_weight_given_msg(scheme: &EncryptionScheme, m: Sym, c: Sym) -> Rat {
    scheme
        .keys
        .ids()
        .filter(|&k| scheme.enc(m, k) == c)
        .fold(rat_zero(), |acc, k| acc + scheme.key_space.weight(k))
}

/// Exact joint and marginal tables over ℳ×𝒞 for a given message
/// distribution, computed by the three displayed marginalization formulas.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    pub msg_marginal: Vec<Rat>,
    pub cipher_marginal: Vec<Rat>,
    /// joint[m][c]
    pub joint: Vec<Vec<Rat>>,
}

pub fn joint_distribution(
    scheme: &EncryptionScheme,
    p_msg: &FiniteProbabilitySpace,
) -> Result<JointDistribution> {
    if !p_msg.alphabet().same_as(&scheme.messages) {
        return Err(Error::AlphabetMismatch(
            "message distribution is not over the message alphabet".into(),
        ));
    }
    let msg_marginal: Vec<Rat> = scheme.messages.ids().map(|m| p_msg.weight(m).clone()).collect();
    let joint: Vec<Vec<Rat>> = scheme
        .messages
        .ids()
        .map(|m| {
            scheme
                .ciphers
                .ids()
                .map(|c| p_msg.weight(m) * cipher_weight_given_msg(scheme, m, c))
                .collect()
        })
        .collect();
    let cipher_marginal: Vec<Rat> = scheme
        .ciphers
        .ids()
        .map(|c| {
            scheme
                .messages
                .ids()
                .fold(rat_zero(), |acc, m| acc + &joint[m as usize][c as usize])
        })
        .collect();
    Ok(JointDistribution {
        msg_marginal,
        cipher_marginal,
        joint,
    })
}

/// Verdict with an exact (m, c) witness when independence fails.
#[derive(Debug, Clone)]
pub struct SecrecyVerdict {
    pub secret: bool,
    /// (message, cipher, joint value, product of marginals)
    pub witness: Option<(String, String, Rat, Rat)>,
}

/// Independence of M_Π and C_Π under the given message distribution.
pub fn secrecy_under(
    scheme: &EncryptionScheme,
    p_msg: &FiniteProbabilitySpace,
) -> Result<SecrecyVerdict> {
    let d = joint_distribution(scheme, p_msg)?;
    for m in scheme.messages.ids() {
        for c in scheme.ciphers.ids() {
            let product = &d.msg_marginal[m as usize] * &d.cipher_marginal[c as usize];
            let joint = &d.joint[m as usize][c as usize];
            if joint != &product {
                return Ok(SecrecyVerdict {
                    secret: false,
                    witness: Some((
                        scheme.messages.name(m).into(),
                        scheme.ciphers.name(c).into(),
                        joint.clone(),
                        product,
                    )),
                });
            }
        }
    }
    Ok(SecrecyVerdict {
        secret: true,
        witness: None,
    })
}

/// Perfect secrecy, decided under the uniform message distribution only —
/// sufficient for the universally quantified definition.
pub fn is_perfectly_secret(scheme: &EncryptionScheme) -> Result<SecrecyVerdict> {
    let uniform = FiniteProbabilitySpace::uniform(scheme.messages.clone());
    secrecy_under(scheme, &uniform)
}

/// Auxiliary key-counting check: a correct perfectly-secret scheme needs at
/// least as many keys as any per-key encryption image has elements.
/// Returns (holds, #keys, max image size).
pub fn key_bound_check(scheme: &EncryptionScheme) -> (bool, usize, usize) {
    let max_image = scheme
        .keys
        .ids()
        .map(|k| {
            scheme
                .messages
                .ids()
                .map(|m| scheme.enc(m, k))
                .collect::<std::collections::BTreeSet<_>>()
                .len()
        })
        .max()
        .unwrap_or(0);
    (scheme.keys.len() >= max_image, scheme.keys.len(), max_image)
}

/// One-time pad over ℤ_m: uniform keys, Enc(m,k) = m+k mod m.
pub fn otp_scheme(modulus: u32) -> EncryptionScheme {
    assert!(modulus >= 1);
    let names: Vec<String> = (0..modulus).map(|i| i.to_string()).collect();
    let alpha = Alphabet::new(names).unwrap();
    let key_space = FiniteProbabilitySpace::uniform(alpha.clone());
    let enc = (0..modulus)
        .map(|m| (0..modulus).map(|k| (m + k) % modulus).collect())
        .collect();
    EncryptionScheme::new(alpha.clone(), alpha.clone(), alpha, key_space, enc).unwrap()
}

/// True iff Σ_k P_key(k)[Enc(m,k)=c] is literally the same reduced rational
/// for every m, for each c.
pub fn cipher_weights_independent_of_msg(scheme: &EncryptionScheme) -> bool {
    scheme.ciphers.ids().all(|c| {
        let mut values = scheme
            .messages
            .ids()
            .map(|m| cipher_weight_given_msg(scheme, m, c));
        match values.next() {
            None => true,
            Some(first) => values.all(|v| v == first),
        }
    })
}
