//! Words over a finite alphabet, substitutions and factor languages.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Ordered finite alphabet of single-character letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
    index: HashMap<char, usize>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        let mut index = HashMap::new();
        for (i, &c) in letters.iter().enumerate() {
            if c.is_whitespace() || c.is_control() {
                return Err(Error::Argument(format!("letter {c:?} is not printable")));
            }
            if index.insert(c, i).is_some() {
                return Err(Error::Argument(format!("duplicate letter {c:?}")));
            }
        }
        if letters.len() < 2 {
            return Err(Error::Argument("an alphabet needs at least two letters".into()));
        }
        Ok(Alphabet { letters, index })
    }

    /// Sub-alphabets of a valid alphabet may be singletons.
    pub(crate) fn sub(letters: Vec<char>) -> Self {
        let index = letters.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Alphabet { letters, index }
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.index.contains_key(&c)
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// Sort key giving lexicographic order with respect to the alphabet order.
    pub fn key(&self, w: &Word) -> Vec<usize> {
        w.0.iter().map(|c| self.index.get(c).copied().unwrap_or(usize::MAX)).collect()
    }

    pub fn sort_words(&self, words: &mut [Word]) {
        words.sort_by_cached_key(|w| self.key(w));
    }
}

/// Finite word; the empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn first(&self) -> Option<char> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<char> {
        self.0.last().copied()
    }

    /// Validates every letter against `alphabet`.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Word> {
        let w: Vec<char> = s.chars().collect();
        if let Some(c) = w.iter().find(|c| !alphabet.contains(**c)) {
            return Err(Error::Argument(format!("letter {c:?} is not in the alphabet")));
        }
        Ok(Word(w))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// All factors of length `m`, left to right, with repetitions.
    pub fn factors(&self, m: usize) -> impl Iterator<Item = &[char]> {
        self.0.windows(m.max(1)).filter(move |_| m > 0)
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Positions (1-based, increasing) of overlapping occurrences of `u` in `v`.
pub fn occurrence_positions(u: &[char], v: &[char]) -> Result<Vec<usize>> {
    if u.is_empty() {
        return Err(Error::Argument("cannot count occurrences of the empty word".into()));
    }
    Ok(v.windows(u.len())
        .enumerate()
        .filter(|(_, w)| *w == u)
        .map(|(i, _)| i + 1)
        .collect())
}

/// N(u, v): number of overlapping occurrences of `u` in `v`.
pub fn count_occurrences(u: &Word, v: &Word) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::Argument("cannot count occurrences of the empty word".into()));
    }
    Ok(count_slice(&u.0, &v.0))
}

pub(crate) fn count_slice(u: &[char], v: &[char]) -> usize {
    if u.is_empty() || u.len() > v.len() {
        return 0;
    }
    v.windows(u.len()).filter(|w| *w == u).count()
}

/// A map from each letter to a nonempty word over the same alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Argument("one image per letter is required".into()));
        }
        for (c, img) in alphabet.letters().iter().zip(&images) {
            if img.is_empty() {
                return Err(Error::Argument(format!("image of {c:?} is empty")));
            }
            if let Some(x) = img.0.iter().find(|x| !alphabet.contains(**x)) {
                return Err(Error::Argument(format!(
                    "image of {c:?} uses undeclared letter {x:?}"
                )));
            }
        }
        Ok(Substitution { alphabet, images })
    }

    /// Convenience constructor from `(letter, image)` pairs.
    pub fn from_rules(rules: &[(char, &str)]) -> Result<Self> {
        let alphabet = Alphabet::new(rules.iter().map(|r| r.0))?;
        let images = rules.iter().map(|r| Word::from(r.1)).collect();
        Substitution::new(alphabet, images)
    }

    /// Restriction to a sub-alphabet closed under the substitution.
    pub(crate) fn restrict(&self, letters: &[char]) -> Substitution {
        let alphabet = Alphabet::sub(letters.to_vec());
        let images = letters.iter().map(|&c| self.image(c).clone()).collect();
        Substitution { alphabet, images }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Panics if `c` is not a letter of the alphabet.
    pub fn image(&self, c: char) -> &Word {
        &self.images[self.alphabet.index_of(c).expect("letter outside alphabet")]
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Every image reversed.
    pub fn reversed(&self) -> Substitution {
        Substitution {
            alphabet: self.alphabet.clone(),
            images: self.images.iter().map(Word::reversed).collect(),
        }
    }

    /// σᵏ as a substitution.
    pub fn power(&self, k: usize) -> Result<Substitution> {
        let images = self
            .alphabet
            .letters()
            .iter()
            .map(|&c| self.apply(&Word(vec![c]), k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution { alphabet: self.alphabet.clone(), images })
    }

    fn apply_once(&self, w: &[char]) -> Vec<char> {
        let mut out = Vec::with_capacity(w.len() * self.max_image_len());
        for &c in w {
            out.extend_from_slice(&self.image(c).0);
        }
        out
    }

    /// σᵏ(w) for k ≥ 1.
    pub fn apply(&self, w: &Word, k: usize) -> Result<Word> {
        self.apply_with(w, k, false)
    }

    /// σᵏ(w); `k = 0` returns `w` when `allow_identity` is set.
    pub fn apply_with(&self, w: &Word, k: usize, allow_identity: bool) -> Result<Word> {
        if w.is_empty() {
            return Err(Error::Argument("cannot apply a substitution to the empty word".into()));
        }
        if let Some(c) = w.0.iter().find(|c| !self.alphabet.contains(**c)) {
            return Err(Error::Argument(format!("letter {c:?} is not in the alphabet")));
        }
        if k == 0 && !allow_identity {
            return Err(Error::Argument("power must be at least 1".into()));
        }
        let mut cur = w.0.clone();
        for _ in 0..k {
            cur = self.apply_once(&cur);
        }
        Ok(Word(cur))
    }

    /// σ(w) applied to an arbitrary (possibly empty) word.
    pub(crate) fn image_of(&self, w: &[char]) -> Vec<char> {
        self.apply_once(w)
    }

    /// L_m(σ): length-m factors of σⁿ(a) over n ≥ 1 and all letters a.
    pub fn language(&self, m: usize) -> Result<BTreeSet<Word>> {
        if m == 0 {
            return Err(Error::Argument("window length must be at least 1".into()));
        }
        let mut set: HashSet<Vec<char>> = HashSet::new();
        for &a in self.alphabet.letters() {
            let mut seen: HashSet<Vec<char>> = HashSet::new();
            let mut cur = self.image(a).0.clone();
            while cur.len() < m {
                if !seen.insert(cur.clone()) {
                    break;
                }
                cur = self.apply_once(&cur);
            }
            if cur.len() >= m {
                for f in cur.windows(m) {
                    set.insert(f.to_vec());
                }
            }
        }
        let mut frontier: Vec<Vec<char>> = set.iter().cloned().collect();
        while let Some(w) = frontier.pop() {
            let img = self.apply_once(&w);
            for f in img.windows(m) {
                if set.insert(f.to_vec()) {
                    frontier.push(f.to_vec());
                }
            }
        }
        Ok(set.into_iter().map(Word).collect())
    }

    /// L_m(σ) sorted by the alphabet order.
    pub fn language_sorted(&self, m: usize) -> Result<Vec<Word>> {
        let mut v: Vec<Word> = self.language(m)?.into_iter().collect();
        self.alphabet.sort_words(&mut v);
        Ok(v)
    }

    /// Whether `w` lies in L(σ).
    pub fn contains_word(&self, w: &Word) -> bool {
        !w.is_empty() && self.language(w.len()).map(|l| l.contains(w)).unwrap_or(false)
    }

    /// |σʲ(c)| for j = 0..=k, saturating at `u128::MAX`.
    pub fn length_table(&self, k: usize) -> Vec<Vec<u128>> {
        let n = self.alphabet.len();
        let mut table = vec![vec![1u128; n]];
        for j in 1..=k {
            let prev = &table[j - 1];
            let row = self
                .images
                .iter()
                .map(|img| {
                    img.0.iter().fold(0u128, |acc, &c| {
                        acc.saturating_add(prev[self.alphabet.index_of(c).unwrap()])
                    })
                })
                .collect();
            table.push(row);
        }
        table
    }

    /// First `len` letters of σᵏ(c), generated without materializing σᵏ(c).
    pub fn prefix_of_power(&self, c: char, k: usize, len: usize) -> Vec<char> {
        let mut out = Vec::with_capacity(len);
        let mut stack = vec![(k, c)];
        while let Some((j, x)) = stack.pop() {
            if out.len() >= len {
                break;
            }
            if j == 0 {
                out.push(x);
            } else {
                for &y in self.image(x).0.iter().rev() {
                    stack.push((j - 1, y));
                }
            }
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, img) in self.alphabet.letters().iter().zip(&self.images) {
            writeln!(f, "{c} -> {img}")?;
        }
        Ok(())
    }
}

#[derive(Clone)]
struct Summary {
    count: u128,
    len: u128,
    head: Vec<char>,
    tail: Vec<char>,
}

/// Exact N(v, σᵏ(c)) for large k through a memoized recursion on images.
pub struct OccurrenceCounter<'a> {
    sigma: &'a Substitution,
    v: Vec<char>,
    memo: Vec<Vec<Summary>>,
}

impl<'a> OccurrenceCounter<'a> {
    pub fn new(sigma: &'a Substitution, v: &Word) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Argument("cannot count occurrences of the empty word".into()));
        }
        let h = v.len() - 1;
        let base = sigma
            .alphabet()
            .letters()
            .iter()
            .map(|&c| Summary {
                count: u128::from(v.0 == [c]),
                len: 1,
                head: vec![c].into_iter().take(h).collect(),
                tail: vec![c].into_iter().take(h).collect(),
            })
            .collect();
        Ok(OccurrenceCounter { sigma, v: v.0.clone(), memo: vec![base] })
    }

    fn extend(&mut self) -> Result<()> {
        let h = self.v.len() - 1;
        let prev = self.memo.last().unwrap();
        let alpha = self.sigma.alphabet();
        let mut next = Vec::with_capacity(alpha.len());
        for img in self.sigma.images() {
            let mut count = 0u128;
            let mut len = 0u128;
            let mut head: Vec<char> = Vec::new();
            let mut tail: Vec<char> = Vec::new();
            for &y in &img.0 {
                let s = &prev[alpha.index_of(y).unwrap()];
                if h > 0 {
                    let mut joined = tail.clone();
                    joined.extend_from_slice(&s.head);
                    count += joined
                        .windows(self.v.len())
                        .enumerate()
                        .filter(|(p, w)| *p < tail.len() && *w == self.v.as_slice())
                        .count() as u128;
                    if head.len() < h {
                        let need = h - head.len();
                        head.extend(s.head.iter().take(need));
                    }
                    let mut t = tail;
                    t.extend_from_slice(&s.tail);
                    let cut = t.len().saturating_sub(h);
                    tail = t[cut..].to_vec();
                }
                count = count.checked_add(s.count).ok_or(Error::BudgetExceeded {
                    needed: u128::MAX,
                    budget: u128::MAX,
                })?;
                len = len.checked_add(s.len).ok_or(Error::BudgetExceeded {
                    needed: u128::MAX,
                    budget: u128::MAX,
                })?;
            }
            next.push(Summary { count, len, head, tail });
        }
        self.memo.push(next);
        Ok(())
    }

    /// (N(v, σᵏ(c)), |σᵏ(c)|).
    pub fn count(&mut self, c: char, k: usize) -> Result<(u128, u128)> {
        while self.memo.len() <= k {
            self.extend()?;
        }
        let idx = self
            .sigma
            .alphabet()
            .index_of(c)
            .ok_or_else(|| Error::Argument(format!("letter {c:?} is not in the alphabet")))?;
        let s = &self.memo[k][idx];
        Ok((s.count, s.len))
    }
}
