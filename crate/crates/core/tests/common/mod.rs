//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use subshift::input::parse_input;
use subshift::spectral::{block_eigenvalues, SpectralProfile};
use subshift::structure::{component_chain, ComponentChain};
use subshift::{Substitution, Word};

pub fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

pub fn load(name: &str) -> Substitution {
    let text = std::fs::read_to_string(testdata(name)).unwrap();
    parse_input(&text).unwrap().substitution
}

pub struct Fixture {
    pub sigma: Substitution,
    pub chain: ComponentChain,
    pub spectral: SpectralProfile,
}

pub fn fixture(name: &str) -> Fixture {
    let sigma = load(name);
    let chain = component_chain(&sigma).unwrap();
    let spectral = block_eigenvalues(&sigma, &chain);
    Fixture { sigma, chain, spectral }
}

/// Every valid corpus file.
pub const CORPUS: &[&str] = &[
    "ex44i.sub",
    "ex44ii.sub",
    "ex531.sub",
    "ex532.sub",
    "chacon.sub",
    "chacon_ext.sub",
    "ex36i.sub",
    "ex36ii.sub",
    "ex36iii.sub",
    "ex39i.sub",
    "ex39ii.sub",
    "ex39iii.sub",
    "fib_acc.sub",
];

pub fn rules(pairs: &[(char, &str)]) -> Substitution {
    Substitution::from_rules(pairs).unwrap()
}

/// Naive iteration of the substitution on a plain string.
pub fn expand(sigma: &Substitution, c: char, k: usize) -> Vec<char> {
    let mut w = vec![c];
    for _ in 0..k {
        w = w.iter().flat_map(|x| sigma.image(*x).letters().iter().copied()).collect();
    }
    w
}

pub fn naive_count(u: &[char], v: &[char]) -> usize {
    if u.len() > v.len() {
        return 0;
    }
    (0..=v.len() - u.len()).filter(|&i| &v[i..i + u.len()] == u).count()
}

/// m-factors of σⁿ(a) over all letters and n ≥ 1 until the set is stable
/// for several rounds or images become too long.
pub fn brute_language(sigma: &Substitution, m: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for &a in sigma.alphabet().letters() {
        let mut w = vec![a];
        let mut stable = 0;
        for _ in 0..40 {
            w = w.iter().flat_map(|x| sigma.image(*x).letters().iter().copied()).collect();
            let before = out.len();
            for f in w.windows(m) {
                out.insert(Word(f.to_vec()));
            }
            stable = if out.len() == before { stable + 1 } else { 0 };
            if stable > 6 || w.len() > 400_000 {
                break;
            }
        }
    }
    out
}

/// Letter reachability via repeated boolean products.
pub fn reach(m: &[Vec<i64>]) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut r: Vec<Vec<bool>> = m.iter().map(|row| row.iter().map(|&x| x > 0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Independent check of the chain condition: mutual-reachability classes,
/// totally ordered, each class primitive. Returns the classes sinks first.
pub fn brute_chain(m: &[Vec<i64>]) -> Option<Vec<Vec<usize>>> {
    let n = m.len();
    let r = reach(m);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let c: Vec<usize> = (0..n).filter(|&j| j == i || (r[i][j] && r[j][i])).collect();
        for &j in &c {
            seen[j] = true;
        }
        classes.push(c);
    }
    for c in &classes {
        if !r[c[0]][c[0]] {
            return None;
        }
    }
    // order: class X below Y when Y reaches X
    classes.sort_by_key(|c| (0..n).filter(|&j| r[c[0]][j]).count());
    for w in classes.windows(2) {
        if !r[w[1][0]][w[0][0]] {
            return None;
        }
    }
    for c in &classes {
        let k = c.len();
        let b: Vec<Vec<bool>> = c.iter().map(|&i| c.iter().map(|&j| m[i][j] > 0).collect()).collect();
        let mut p = b.clone();
        let mut ok = false;
        for _ in 0..(k * k + 1) {
            if p.iter().all(|row| row.iter().all(|&x| x)) {
                ok = true;
                break;
            }
            p = (0..k).map(|i| (0..k).map(|j| (0..k).any(|t| p[i][t] && b[t][j])).collect()).collect();
        }
        if !ok {
            return None;
        }
    }
    // the restriction to each lower level must be closed, and every letter of
    // a higher class must eventually reach every lower letter
    for (l, c) in classes.iter().enumerate() {
        for lower in &classes[..l] {
            for &a in c {
                for &b in lower {
                    if !r[a][b] {
                        return None;
                    }
                }
            }
        }
    }
    Some(classes)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
