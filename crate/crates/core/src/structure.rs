//! Incidence matrices, the chain of primitive components and the restricted
//! substitutions on each level.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::linalg::{is_primitive, IntMatrix};
use crate::words::{Alphabet, Substitution};

/// M_σ with entry (a, b) = N(b, σ(a)), indexed by alphabet order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub alphabet: Alphabet,
    pub entries: IntMatrix,
}

impl IncidenceMatrix {
    pub fn entry(&self, a: char, b: char) -> i64 {
        self.entries.get(
            self.alphabet.index_of(a).expect("letter outside alphabet"),
            self.alphabet.index_of(b).expect("letter outside alphabet"),
        )
    }
}

pub fn incidence_matrix(sigma: &Substitution) -> IncidenceMatrix {
    let alpha = sigma.alphabet();
    let n = alpha.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, img) in sigma.images().iter().enumerate() {
        for &c in img.letters() {
            m.add_to(i, alpha.index_of(c).unwrap(), 1);
        }
    }
    IncidenceMatrix { alphabet: alpha.clone(), entries: m }
}

/// A₁ ⊂ A₂ ⊂ … ⊂ Aₙ with primitive diagonal blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentChain {
    /// Level differences Aᵢ∖Aᵢ₋₁, each in alphabet order.
    differences: Vec<Vec<char>>,
    pub witness_k: usize,
    /// Diagonal blocks Qᵢ over Aᵢ∖Aᵢ₋₁.
    pub blocks: Vec<IntMatrix>,
    matrix: IntMatrix,
    alphabet: Alphabet,
}

impl ComponentChain {
    /// Number of levels n_σ.
    pub fn n(&self) -> usize {
        self.differences.len()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(Error::LevelOutOfRange { level: i, levels: self.n() });
        }
        Ok(())
    }

    /// Aᵢ∖Aᵢ₋₁ for 1 ≤ i ≤ n.
    pub fn new_letters(&self, i: usize) -> &[char] {
        &self.differences[i - 1]
    }

    /// Aᵢ in alphabet order; A₀ is empty.
    pub fn level_set(&self, i: usize) -> Vec<char> {
        let mut v: Vec<char> = self.differences[..i].iter().flatten().copied().collect();
        v.sort_by_key(|c| self.alphabet.index_of(*c));
        v
    }

    /// The level i with c ∈ Aᵢ∖Aᵢ₋₁.
    pub fn level_of(&self, c: char) -> Option<usize> {
        self.differences.iter().position(|d| d.contains(&c)).map(|p| p + 1)
    }

    pub fn block(&self, i: usize) -> &IntMatrix {
        &self.blocks[i - 1]
    }

    /// Off-diagonal block R_{i,j}: rows Aᵢ∖Aᵢ₋₁, columns Aⱼ∖Aⱼ₋₁.
    pub fn off_diagonal(&self, i: usize, j: usize) -> IntMatrix {
        let idx = |cs: &[char]| -> Vec<usize> {
            cs.iter().map(|c| self.alphabet.index_of(*c).unwrap()).collect()
        };
        self.matrix.select(&idx(self.new_letters(i)), &idx(self.new_letters(j)))
    }

    pub fn levels(&self) -> Vec<Vec<char>> {
        (1..=self.n()).map(|i| self.level_set(i)).collect()
    }
}

pub fn component_chain(sigma: &Substitution) -> Result<ComponentChain> {
    let inc = incidence_matrix(sigma);
    let alpha = sigma.alphabet();
    let n = alpha.len();
    let m = &inc.entries;

    let mut g = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..n).map(|i| g.add_node(i)).collect();
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) > 0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    // Tarjan emits components in reverse topological order: sinks first.
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| g[x]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let name = |c: &[usize]| -> String {
        let s: String = c.iter().map(|&i| alpha.letters()[i]).collect();
        format!("{{{s}}}")
    };
    for w in sccs.windows(2) {
        let linked = w[1].iter().any(|&a| w[0].iter().any(|&b| m.get(a, b) > 0));
        if !linked {
            return Err(Error::NotSomePrimitiveComponents(format!(
                "components {} and {} are incomparable under reachability",
                name(&w[0]),
                name(&w[1])
            )));
        }
    }
    let mut blocks = Vec::new();
    for c in &sccs {
        let q = m.select(c, c);
        if !is_primitive(&q) {
            return Err(Error::NotSomePrimitiveComponents(format!(
                "diagonal block on {} is not primitive",
                name(c)
            )));
        }
        blocks.push(q);
    }

    // Least k with N(b, σᵏ(a)) > 0 for all a ∈ Aᵢ∖Aᵢ₋₁, b ∈ Aᵢ.
    let mut level = vec![0usize; n];
    for (l, c) in sccs.iter().enumerate() {
        for &x in c {
            level[x] = l;
        }
    }
    let b = m.to_bool();
    let bound = (n - 1) * (n - 1) + 1 + n;
    let mut p = b.clone();
    let mut witness = None;
    for k in 1..=4 * bound {
        let ok = (0..n).all(|a| (0..n).all(|c| level[c] > level[a] || p.get(a, c)));
        if ok {
            witness = Some(k);
            break;
        }
        p = p.mul(&b);
    }
    let witness_k = witness.ok_or_else(|| {
        Error::NotSomePrimitiveComponents("no uniform power reaches every lower letter".into())
    })?;

    for c in sccs.iter_mut() {
        c.sort_unstable();
    }
    Ok(ComponentChain {
        differences: sccs
            .iter()
            .map(|c| c.iter().map(|&i| alpha.letters()[i]).collect())
            .collect(),
        witness_k,
        blocks,
        matrix: m.clone(),
        alphabet: alpha.clone(),
    })
}

/// σᵢ: the restriction of σ to Aᵢ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubSubstitution {
    pub level: usize,
    pub substitution: Substitution,
}

pub fn sub_substitution(
    sigma: &Substitution,
    chain: &ComponentChain,
    i: usize,
) -> Result<SubSubstitution> {
    chain.check(i)?;
    Ok(SubSubstitution { level: i, substitution: sigma.restrict(&chain.level_set(i)) })
}

/// X_{σ₁} = ∅, i.e. A₁ = {s} with σ(s) = s.
pub fn is_empty_bottom(sigma: &Substitution, chain: &ComponentChain) -> bool {
    let a1 = chain.new_letters(1);
    a1.len() == 1 && sigma.image(a1[0]).letters() == [a1[0]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_matrices() {
        let s = Substitution::from_rules(&[('a', "aaaa"), ('b', "abbb"), ('c', "cbc")]).unwrap();
        assert_eq!(
            incidence_matrix(&s).entries.to_rows(),
            vec![vec![4, 0, 0], vec![1, 3, 0], vec![0, 1, 2]]
        );
        let ch = component_chain(&s).unwrap();
        assert_eq!(ch.levels(), vec![vec!['a'], vec!['a', 'b'], vec!['a', 'b', 'c']]);
        assert!(!is_empty_bottom(&s, &ch));
        let t = Substitution::from_rules(&[('a', "ab"), ('b', "ba")]).unwrap();
        assert_eq!(incidence_matrix(&t).entries.to_rows(), vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn chacon_chain() {
        let s = Substitution::from_rules(&[('a', "a"), ('b', "bbab")]).unwrap();
        let ch = component_chain(&s).unwrap();
        assert_eq!(ch.n(), 2);
        assert!(is_empty_bottom(&s, &ch));
    }

    #[test]
    fn rejects() {
        let s = Substitution::from_rules(&[('a', "b"), ('b', "a")]).unwrap();
        assert!(matches!(component_chain(&s), Err(Error::NotSomePrimitiveComponents(_))));
        // two incomparable sinks
        let s = Substitution::from_rules(&[('a', "aa"), ('b', "bb"), ('c', "abc")]).unwrap();
        assert!(matches!(component_chain(&s), Err(Error::NotSomePrimitiveComponents(_))));
        // never self-reproducing letter
        let s = Substitution::from_rules(&[('a', "aa"), ('b', "a")]).unwrap();
        assert!(matches!(component_chain(&s), Err(Error::NotSomePrimitiveComponents(_))));
    }

    #[test]
    fn restriction() {
        let s = Substitution::from_rules(&[
            ('a', "aa"),
            ('b', "abbbccc"),
            ('c', "abccccc"),
            ('d', "abcdd"),
        ])
        .unwrap();
        let ch = component_chain(&s).unwrap();
        let s2 = sub_substitution(&s, &ch, 2).unwrap().substitution;
        assert_eq!(s2.to_string(), "a -> aa\nb -> abbbccc\nc -> abccccc\n");
        assert!(sub_substitution(&s, &ch, 4).is_err());
    }
}
