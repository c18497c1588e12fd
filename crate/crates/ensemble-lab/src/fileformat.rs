//! Text file formats: spaces, sequences, test levels, codes, and schemes.
//!
//! All formats are line-oriented with `#` comments. Sequences over {0,1}
//! additionally support a packed binary representation (magic "PBIT",
//! little-endian bit count, then 8 bits per byte).

use crate::alphabet::{Alphabet, Sym};
use crate::coding::InstantaneousCode;
use crate::error::{Error, Result};
use crate::prob::FiniteProbabilitySpace;
use crate::rational::{fmt_rat, parse_rat};
use crate::secrecy::EncryptionScheme;
use std::collections::BTreeMap;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        }
        .trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// One line per symbol: `<symbol> <p>/<q>`. Alphabet order is file order.
pub fn parse_space(text: &str) -> Result<FiniteProbabilitySpace> {
    let mut names = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in content_lines(text) {
        let mut parts = line.split_whitespace();
        let (sym, w) = match (parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(w), None) => (s, w),
            _ => {
                return Err(Error::Parse(format!(
                    "space line {lineno}: expected `<symbol> <p>/<q>`"
                )))
            }
        };
        names.push(sym.to_string());
        weights.push(parse_rat(w).map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?);
    }
    let alphabet = Alphabet::new_user(names)?;
    FiniteProbabilitySpace::from_weights(alphabet, weights)
}

pub fn write_space(space: &FiniteProbabilitySpace) -> String {
    let mut out = String::new();
    for s in space.alphabet().ids() {
        out.push_str(&format!(
            "{} {}\n",
            space.alphabet().name(s),
            fmt_rat(space.weight(s))
        ));
    }
    out
}

/// Whitespace-separated symbol tokens; a token over a single-character
/// alphabet may be a run of many symbols.
pub fn parse_sequence(alphabet: &Alphabet, text: &str) -> Result<Vec<Sym>> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        out.extend(alphabet.parse_word(token)?);
    }
    Ok(out)
}

pub fn write_sequence(alphabet: &Alphabet, symbols: &[Sym]) -> String {
    let mut s = alphabet.render(symbols);
    s.push('\n');
    s
}

const PACKED_MAGIC: &[u8; 4] = b"PBIT";

/// Packed binary sequence: magic, u64 LE bit count, then bits 8 per byte
/// (first bit in the high position).
pub fn write_packed_bits(symbols: &[Sym]) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + symbols.len() / 8);
    out.extend_from_slice(PACKED_MAGIC);
    out.extend_from_slice(&(symbols.len() as u64).to_le_bytes());
    out.extend(crate::diagnostics::pack_bits(symbols));
    out
}

pub fn parse_packed_bits(bytes: &[u8]) -> Result<Vec<Sym>> {
    if bytes.len() < 12 || &bytes[..4] != PACKED_MAGIC {
        return Err(Error::Parse("not a packed bit file".into()));
    }
    let n = u64::from_le_bytes(bytes[4..12].try_into().unwrap()) as usize;
    let data = &bytes[12..];
    if data.len() != n.div_ceil(8) {
        return Err(Error::Parse("packed bit file length mismatch".into()));
    }
    Ok((0..n)
        .map(|i| ((data[i / 8] >> (7 - (i % 8))) & 1) as Sym)
        .collect())
}

/// Is this byte buffer a packed sequence or a text one?
pub fn is_packed(bytes: &[u8]) -> bool {
    bytes.len() >= 4 && &bytes[..4] == PACKED_MAGIC
}

/// Parsed test file: the space file it names and the explicit levels.
#[derive(Debug, Clone)]
pub struct TestFile {
    pub space_path: String,
    /// level index → string tokens
    pub levels: BTreeMap<u32, Vec<String>>,
}

/// Header `space <file>` then lines `level <n>: <string> <string> …`.
pub fn parse_test(text: &str) -> Result<TestFile> {
    let mut space_path = None;
    let mut levels: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for (lineno, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("space ") {
            space_path = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("level ") {
            let (idx, strings) = rest.split_once(':').ok_or_else(|| {
                Error::Parse(format!("test line {lineno}: expected `level <n>: …`"))
            })?;
            let idx: u32 = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("test line {lineno}: bad level index")))?;
            let entry = levels.entry(idx).or_default();
            entry.extend(strings.split_whitespace().map(str::to_string));
        } else {
            return Err(Error::Parse(format!(
                "test line {lineno}: expected `space` or `level`"
            )));
        }
    }
    Ok(TestFile {
        space_path: space_path
            .ok_or_else(|| Error::Parse("test file missing `space <file>` header".into()))?,
        levels,
    })
}

/// Lines `<symbol> <binary codeword>`; source alphabet order is file order.
pub fn parse_code(text: &str) -> Result<InstantaneousCode> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, line) in content_lines(text) {
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(cw), None) => pairs.push((s.to_string(), cw.to_string())),
            _ => {
                return Err(Error::Parse(format!(
                    "code line {lineno}: expected `<symbol> <codeword>`"
                )))
            }
        }
    }
    let alphabet = Alphabet::new_user(pairs.iter().map(|(s, _)| s.clone()))?;
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(s, c)| (s.as_str(), c.as_str()))
        .collect();
    InstantaneousCode::new(alphabet, &refs)
}

pub fn write_code(code: &InstantaneousCode) -> String {
    let mut out = String::new();
    for s in code.source().ids() {
        out.push_str(&format!(
            "{} {}\n",
            code.source().name(s),
            code.codeword_str(s)
        ));
    }
    out
}

/// Sections `keys:` (lines `<key> <p>/<q>`) and `enc:` (lines `<m> <k> <c>`).
/// Message and cipher alphabets are taken from the enc table in order of
/// first appearance; Dec is derived by inversion and validated separately.
pub fn parse_scheme(text: &str) -> Result<EncryptionScheme> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Keys,
        Enc,
    }
    let mut section = Section::None;
    let mut key_names = Vec::new();
    let mut key_weights = Vec::new();
    let mut enc_lines: Vec<(String, String, String)> = Vec::new();
    for (lineno, line) in content_lines(text) {
        match line {
            "keys:" => section = Section::Keys,
            "enc:" => section = Section::Enc,
            _ => {
                let mut parts = line.split_whitespace();
                match section {
                    Section::Keys => match (parts.next(), parts.next(), parts.next()) {
                        (Some(k), Some(w), None) => {
                            key_names.push(k.to_string());
                            key_weights.push(
                                parse_rat(w)
                                    .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?,
                            );
                        }
                        _ => {
                            return Err(Error::Parse(format!(
                                "scheme line {lineno}: expected `<key> <p>/<q>`"
                            )))
                        }
                    },
                    Section::Enc => match (parts.next(), parts.next(), parts.next(), parts.next())
                    {
                        (Some(m), Some(k), Some(c), None) => {
                            enc_lines.push((m.to_string(), k.to_string(), c.to_string()))
                        }
                        _ => {
                            return Err(Error::Parse(format!(
                                "scheme line {lineno}: expected `<m> <k> <c>`"
                            )))
                        }
                    },
                    Section::None => {
                        return Err(Error::Parse(format!(
                            "scheme line {lineno}: outside `keys:`/`enc:` sections"
                        )))
                    }
                }
            }
        }
    }
    let keys = Alphabet::new_user(key_names)?;
    let key_space = FiniteProbabilitySpace::from_weights(keys.clone(), key_weights)?;

    let mut msg_names: Vec<String> = Vec::new();
    let mut cipher_names: Vec<String> = Vec::new();
    for (m, _, c) in &enc_lines {
        if !msg_names.contains(m) {
            msg_names.push(m.clone());
        }
        if !cipher_names.contains(c) {
            cipher_names.push(c.clone());
        }
    }
    let messages = Alphabet::new_user(msg_names)?;
    let ciphers = Alphabet::new_user(cipher_names)?;
    let mut enc = vec![vec![None; keys.len()]; messages.len()];
    for (m, k, c) in &enc_lines {
        let (mi, ki, ci) = (messages.lookup(m)?, keys.lookup(k)?, ciphers.lookup(c)?);
        enc[mi as usize][ki as usize] = Some(ci);
    }
    let enc: Vec<Vec<Sym>> = enc
        .into_iter()
        .enumerate()
        .map(|(mi, row)| {
            row.into_iter()
                .enumerate()
                .map(|(ki, slot)| {
                    slot.ok_or_else(|| {
                        Error::Parse(format!(
                            "enc table missing entry for ({}, {})",
                            messages.name(mi as Sym),
                            keys.name(ki as Sym)
                        ))
                    })
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    EncryptionScheme::new(messages, keys, ciphers, key_space, enc)
}
