//! The substitution file format.
//!
//! ```text
//! # Chacon
//! a -> a
//! b -> bbab
//! @levels a | b
//! ```
//!
//! One rule per line; alphabet order is declaration order. A `@levels` line
//! optionally lists the new letters of each level, separated by `|`.

use crate::error::{Error, Result};
use crate::structure::ComponentChain;
use crate::words::{Alphabet, Substitution, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSpec {
    pub source: String,
    pub substitution: Substitution,
    pub level_hints: Option<Vec<Vec<char>>>,
}

impl InputSpec {
    /// Hints are kept only when they match the computed chain.
    pub fn hints_consistent(&self, chain: &ComponentChain) -> Option<bool> {
        let hints = self.level_hints.as_ref()?;
        let ok = hints.len() == chain.n()
            && hints.iter().enumerate().all(|(i, h)| {
                let mut h = h.clone();
                h.sort_by_key(|c| self.substitution.alphabet().index_of(*c));
                h == chain.new_letters(i + 1)
            });
        Some(ok)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_input(text: &str) -> Result<InputSpec> {
    let mut letters: Vec<(char, usize)> = Vec::new();
    let mut images: Vec<(String, usize)> = Vec::new();
    let mut hints = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@levels") {
            let groups: Vec<Vec<char>> = rest
                .split('|')
                .map(|g| g.chars().filter(|c| !c.is_whitespace()).collect())
                .collect();
            hints = Some(groups);
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| parse_error(line_no, "expected `X -> IMAGE`"))?;
        let lhs = lhs.trim();
        let mut cs = lhs.chars();
        let c = match (cs.next(), cs.next()) {
            (Some(c), None) => c,
            _ => return Err(parse_error(line_no, format!("rule letter {lhs:?} must be a single character"))),
        };
        if c.is_control() || c.is_whitespace() {
            return Err(parse_error(line_no, "rule letter must be printable"));
        }
        if letters.iter().any(|&(x, _)| x == c) {
            return Err(parse_error(line_no, format!("duplicate rule for {c:?}")));
        }
        let img = rhs.trim();
        if img.is_empty() {
            return Err(parse_error(line_no, format!("empty image for {c:?}")));
        }
        if img.chars().any(char::is_whitespace) {
            return Err(parse_error(line_no, "image contains whitespace"));
        }
        letters.push((c, line_no));
        images.push((img.to_string(), line_no));
    }
    for (img, line_no) in &images {
        if let Some(x) = img.chars().find(|x| !letters.iter().any(|&(c, _)| c == *x)) {
            return Err(parse_error(*line_no, format!("undeclared letter {x:?} in image")));
        }
    }
    let alphabet = Alphabet::new(letters.iter().map(|l| l.0)).map_err(|e| parse_error(0, e.to_string()))?;
    let images = images.into_iter().map(|(s, _)| Word(s.chars().collect())).collect();
    let substitution = Substitution::new(alphabet, images).map_err(|e| parse_error(0, e.to_string()))?;
    Ok(InputSpec { source: text.to_string(), substitution, level_hints: hints })
}

/// Normalized text form; parsing it gives back the same substitution.
pub fn emit(spec: &InputSpec) -> String {
    let mut out = spec.substitution.to_string();
    if let Some(h) = &spec.level_hints {
        let groups: Vec<String> = h.iter().map(|g| g.iter().collect()).collect();
        out.push_str(&format!("@levels {}\n", groups.join(" | ")));
    }
    out
}
