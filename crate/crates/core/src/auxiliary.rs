//! The auxiliary substitution σ^(m) on the m-word alphabet L_m(σ).

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::structure::{sub_substitution, ComponentChain};
use crate::words::{Substitution, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Q_m(i) = L_m(σᵢ)∖B_m(i−1).
    Q,
    /// G_m(i) = B_m(i)∖L_m(σᵢ).
    G,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordBlock {
    pub kind: BlockKind,
    pub level: usize,
    pub range: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct AuxiliarySubstitution {
    pub m: usize,
    /// Ordered alphabet: Q(1), G(1), Q(2), …, G(n−1), Q(n), lexicographic inside.
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Image of each word as a sequence of coordinates.
    pub images: Vec<Vec<usize>>,
    pub blocks: Vec<CoordBlock>,
}

impl AuxiliarySubstitution {
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    fn block(&self, kind: BlockKind, level: usize) -> Range<usize> {
        self.blocks
            .iter()
            .find(|b| b.kind == kind && b.level == level)
            .map(|b| b.range.clone())
            .unwrap_or(0..0)
    }

    pub fn q_range(&self, i: usize) -> Range<usize> {
        self.block(BlockKind::Q, i)
    }

    pub fn g_range(&self, i: usize) -> Range<usize> {
        self.block(BlockKind::G, i)
    }

    /// Coordinates of L_m(σᵢ): a leading segment; i = 0 gives the empty set.
    pub fn language_end(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.q_range(i).end
        }
    }

    /// Coordinates of B_m(i) = L_m(σᵢ) ∪ G_m(i): a leading segment.
    pub fn b_end(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.g_range(i).end.max(self.language_end(i))
        }
    }

    pub fn words_in(&self, r: Range<usize>) -> &[Word] {
        &self.words[r]
    }
}

pub fn build_auxiliary(
    sigma: &Substitution,
    chain: &ComponentChain,
    m: usize,
) -> Result<AuxiliarySubstitution> {
    if m == 0 {
        return Err(Error::Argument("window length must be at least 1".into()));
    }
    let n = chain.n();
    let langs: Vec<BTreeSet<Word>> = (1..=n)
        .map(|i| sub_substitution(sigma, chain, i)?.substitution.language(m))
        .collect::<Result<_>>()?;
    let alpha = sigma.alphabet();
    // Slot 2j−2 holds Q(j), slot 2j−1 holds G(j).
    let mut slots: Vec<Vec<Word>> = vec![Vec::new(); 2 * n - 1];
    for w in &langs[n - 1] {
        let j = langs.iter().position(|l| l.contains(w)).unwrap() + 1;
        let l = chain.level_of(w.first().unwrap()).unwrap();
        let slot = if l == j { 2 * j - 2 } else { 2 * j - 3 };
        slots[slot].push(w.clone());
    }
    let mut words = Vec::new();
    let mut blocks = Vec::new();
    for (s, mut ws) in slots.into_iter().enumerate() {
        alpha.sort_words(&mut ws);
        let start = words.len();
        words.extend(ws);
        let (kind, level) = if s % 2 == 0 { (BlockKind::Q, s / 2 + 1) } else { (BlockKind::G, s / 2 + 1) };
        blocks.push(CoordBlock { kind, level, range: start..words.len() });
    }
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let images = words
        .iter()
        .map(|u| {
            let img = sigma.image_of(u.letters());
            let k = sigma.image(u.first().unwrap()).len();
            (0..k).map(|j| index[&Word(img[j..j + m].to_vec())]).collect()
        })
        .collect();
    Ok(AuxiliarySubstitution { m, words, index, images, blocks })
}

/// M_{σ^(m)}: entry (u, v) counts v in the image sequence of u.
pub fn auxiliary_matrix(aux: &AuxiliarySubstitution) -> IntMatrix {
    let n = aux.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, img) in aux.images.iter().enumerate() {
        for &j in img {
            m.add_to(i, j, 1);
        }
    }
    m
}

/// Whether Q_m(i) has no coordinates.
pub fn level_empty_diag(aux: &AuxiliarySubstitution, i: usize) -> bool {
    aux.q_range(i).is_empty()
}
