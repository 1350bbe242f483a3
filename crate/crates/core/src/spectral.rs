//! Block eigenvalues θᵢ with exact comparisons, Perron-Frobenius vectors of
//! σ^(m) and the per-level limit data.

use std::cmp::Ordering;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::auxiliary::{auxiliary_matrix, build_auxiliary, AuxiliarySubstitution, BlockKind};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Mat, Scalar};
use crate::poly::{AlgebraicReal, Poly};
use crate::structure::ComponentChain;
use crate::words::{Substitution, Word};

/// Dominant eigenvalue of one diagonal block.
#[derive(Debug, Clone)]
pub struct Theta {
    pub level: usize,
    pub value: AlgebraicReal,
    /// det(xI − Qᵢ), leading coefficient first.
    pub char_poly: Vec<BigInt>,
    pub float: f64,
}

#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub thetas: Vec<Theta>,
    order: Vec<Vec<Ordering>>,
    vs_one: Vec<Ordering>,
    /// Level attaining λᵢ = max_{j≤i} θⱼ (earliest on ties).
    pub lambda_at: Vec<usize>,
    /// Level attaining ηᵢ = max_{j≥i} θⱼ (earliest on ties).
    pub eta_at: Vec<usize>,
    pub i_min: usize,
    pub i_max: usize,
    /// i′ per level.
    pub i_prime: Vec<usize>,
}

impl SpectralProfile {
    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn theta(&self, i: usize) -> &Theta {
        &self.thetas[i - 1]
    }

    /// Exact comparison of θᵢ with θⱼ.
    pub fn cmp(&self, i: usize, j: usize) -> Ordering {
        self.order[i - 1][j - 1]
    }

    pub fn cmp_one(&self, i: usize) -> Ordering {
        self.vs_one[i - 1]
    }

    pub fn theta_is_one(&self, i: usize) -> bool {
        self.cmp_one(i) == Ordering::Equal
    }

    /// θᵢ > λᵢ₋₁, with λ₀ = 0.
    pub fn exceeds_below(&self, i: usize) -> bool {
        i == 1 || self.cmp(i, self.lambda_at[i - 2]) == Ordering::Greater
    }

    /// λ compared with 1.
    pub fn lambda_cmp_one(&self) -> Ordering {
        self.cmp_one(self.i_min)
    }

    pub fn lambda(&self) -> &Theta {
        self.theta(self.i_min)
    }

    pub fn i_prime(&self, i: usize) -> usize {
        self.i_prime[i - 1]
    }

    /// Levels grouped by exactly equal θ, in order of first appearance.
    pub fn eq_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 1..=self.n() {
            match classes.iter_mut().find(|c| self.cmp(c[0], i) == Ordering::Equal) {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        classes
    }
}

pub fn dominant_root(q: &IntMatrix) -> (AlgebraicReal, Vec<BigInt>) {
    let cp = q.char_poly();
    let sums: Vec<i64> = (0..q.rows()).map(|i| q.row_sum(i)).collect();
    let lo = BigRational::from_integer((*sums.iter().min().unwrap()).into());
    let hi = BigRational::from_integer((*sums.iter().max().unwrap()).into());
    let root = AlgebraicReal::largest_root_in(&Poly::from_descending(&cp), &lo, &hi)
        .expect("Perron root lies between the extreme row sums");
    (root, cp)
}

pub fn block_eigenvalues(_sigma: &Substitution, chain: &ComponentChain) -> SpectralProfile {
    let n = chain.n();
    let thetas: Vec<Theta> = (1..=n)
        .map(|i| {
            let (value, char_poly) = dominant_root(chain.block(i));
            let float = value.to_f64();
            Theta { level: i, value, char_poly, float }
        })
        .collect();
    let order: Vec<Vec<Ordering>> = thetas
        .iter()
        .map(|a| thetas.iter().map(|b| a.value.cmp_exact(&b.value)).collect())
        .collect();
    let vs_one = thetas.iter().map(|t| t.value.cmp_rational(&BigRational::one())).collect();
    let better = |cand: usize, cur: usize| order[cand][cur] == Ordering::Greater;
    let mut lambda_at = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if i == 0 { 0 } else { lambda_at[i - 1] - 1 };
        lambda_at.push(if i == 0 || better(i, prev) { i + 1 } else { prev + 1 });
    }
    let mut eta_at = vec![0; n];
    for i in (0..n).rev() {
        eta_at[i] = if i == n - 1 || order[i][eta_at[i + 1] - 1] != Ordering::Less {
            i + 1
        } else {
            eta_at[i + 1]
        };
    }
    let top = lambda_at[n - 1] - 1;
    let ties: Vec<usize> = (0..n).filter(|&j| order[j][top] == Ordering::Equal).collect();
    let i_min = ties[0] + 1;
    let i_max = *ties.last().unwrap() + 1;
    let i_prime = (0..n)
        .map(|i| {
            (0..i)
                .rev()
                .find(|&j| order[j][i] != Ordering::Less)
                .map_or(1, |j| j + 2)
        })
        .collect();
    SpectralProfile { thetas, order, vs_one, lambda_at, eta_at, i_min, i_max, i_prime }
}

/// A vector carried exactly when the relevant eigenvalue is an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    pub exact: Option<Vec<BigRational>>,
    pub approx: Vec<f64>,
}

impl Vector {
    fn from_exact(v: Vec<BigRational>) -> Self {
        let approx = v.iter().map(Scalar::approx).collect();
        Vector { exact: Some(v), approx }
    }

    fn from_approx(v: Vec<f64>) -> Self {
        Vector { exact: None, approx: v }
    }

    pub fn len(&self) -> usize {
        self.approx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.approx.is_empty()
    }

    /// Support pattern: true where the entry is positive.
    pub fn support(&self) -> Vec<bool> {
        match &self.exact {
            Some(e) => e.iter().map(Scalar::positive).collect(),
            None => self.approx.iter().map(|&x| x > 0.0).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub m: usize,
    pub words: Vec<Word>,
    pub lambda: f64,
    /// Right vector, smallest positive entry 1.
    pub alpha: Vector,
    /// Left vector, smallest positive entry 1.
    pub beta: Vector,
}

fn pf_right<T: Scalar>(d: &Mat<T>, theta: &T) -> Result<Vec<T>> {
    let mut v = d
        .shifted(theta)
        .null_vector()
        .ok_or_else(|| Error::Precondition("eigenvalue is not a root of its block".into()))?;
    let total = v.iter().fold(T::zero_val(), |a, x| a.add(x));
    if !total.positive() {
        v = v.iter().map(|x| T::zero_val().sub(x)).collect();
    }
    Ok(v)
}

/// Right eigenvector: zero before block `t`, Perron on `t`, solved after.
fn right_vector<T: Scalar>(m: &Mat<T>, blocks: &[Range<usize>], t: usize, theta: &T) -> Result<Vec<T>> {
    let mut x = vec![T::zero_val(); m.rows];
    let bt: Vec<usize> = blocks[t].clone().collect();
    for (k, v) in bt.iter().zip(pf_right(&m.select(&bt, &bt), theta)?) {
        x[*k] = v;
    }
    for b in blocks.iter().skip(t + 1) {
        if b.is_empty() {
            continue;
        }
        let idx: Vec<usize> = b.clone().collect();
        let rhs: Vec<T> = idx
            .iter()
            .map(|&r| (0..b.start).fold(T::zero_val(), |a, c| a.add(&m.get(r, c).mul(&x[c]))))
            .collect();
        let sol = m
            .select(&idx, &idx)
            .shifted(theta)
            .solve(&rhs)
            .ok_or_else(|| Error::Precondition("lower block shares the eigenvalue".into()))?;
        for (k, v) in idx.iter().zip(sol) {
            x[*k] = v;
        }
    }
    Ok(x)
}

/// Left eigenvector: zero after block `t`, Perron on `t`, solved before.
fn left_vector<T: Scalar>(m: &Mat<T>, blocks: &[Range<usize>], t: usize, theta: &T) -> Result<Vec<T>> {
    let mut y = vec![T::zero_val(); m.rows];
    let bt: Vec<usize> = blocks[t].clone().collect();
    for (k, v) in bt.iter().zip(pf_right(&m.select(&bt, &bt).transpose(), theta)?) {
        y[*k] = v;
    }
    let end = blocks[t].end;
    for b in blocks[..t].iter().rev() {
        if b.is_empty() {
            continue;
        }
        let idx: Vec<usize> = b.clone().collect();
        let rhs: Vec<T> = idx
            .iter()
            .map(|&c| (b.end..end).fold(T::zero_val(), |a, r| a.add(&y[r].mul(m.get(r, c)))))
            .collect();
        let sol = m
            .select(&idx, &idx)
            .shifted(theta)
            .transpose()
            .solve(&rhs)
            .ok_or_else(|| Error::Precondition("upper block shares the eigenvalue".into()))?;
        for (k, v) in idx.iter().zip(sol) {
            y[*k] = v;
        }
    }
    Ok(y)
}

fn scale_min_to_one<T: Scalar>(v: Vec<T>) -> Vec<T> {
    let max = v.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let cleaned: Vec<T> = v.into_iter().map(|x| if x.negligible(max) { T::zero_val() } else { x }).collect();
    let min = cleaned
        .iter()
        .filter(|x| x.positive())
        .min_by(|a, b| a.magnitude().total_cmp(&b.magnitude()))
        .cloned();
    match min {
        Some(mn) => cleaned.iter().map(|x| x.div(&mn)).collect(),
        None => cleaned,
    }
}

enum Side {
    Right,
    Left,
}

fn eigenvector(m: &IntMatrix, blocks: &[Range<usize>], t: usize, theta: &AlgebraicReal, side: Side) -> Result<Vector> {
    if let Some(int) = theta.as_integer() {
        let mr = m.to_rational();
        let th = BigRational::from_integer(int);
        let v = match side {
            Side::Right => right_vector(&mr, blocks, t, &th)?,
            Side::Left => left_vector(&mr, blocks, t, &th)?,
        };
        Ok(Vector::from_exact(scale_min_to_one(v)))
    } else {
        let mf = m.to_f64();
        let th = theta.to_f64();
        let v = match side {
            Side::Right => right_vector(&mf, blocks, t, &th)?,
            Side::Left => left_vector(&mf, blocks, t, &th)?,
        };
        Ok(Vector::from_approx(scale_min_to_one(v)))
    }
}

fn block_ranges(aux: &AuxiliarySubstitution) -> Vec<Range<usize>> {
    aux.blocks.iter().map(|b| b.range.clone()).collect()
}

fn q_slot(aux: &AuxiliarySubstitution, i: usize) -> usize {
    aux.blocks
        .iter()
        .position(|b| b.kind == BlockKind::Q && b.level == i)
        .expect("every level has a Q slot")
}

/// α and β of M_{σ^(m)} for the dominant eigenvalue λ.
pub fn pf_vectors(sigma: &Substitution, chain: &ComponentChain, m: usize) -> Result<EigenPair> {
    let sp = block_eigenvalues(sigma, chain);
    pf_vectors_with(sigma, chain, &sp, m)
}

pub fn pf_vectors_with(
    sigma: &Substitution,
    chain: &ComponentChain,
    sp: &SpectralProfile,
    m: usize,
) -> Result<EigenPair> {
    if sp.lambda_cmp_one() != Ordering::Greater {
        return Err(Error::LambdaNotDominant);
    }
    let aux = build_auxiliary(sigma, chain, m)?;
    let mat = auxiliary_matrix(&aux);
    let blocks = block_ranges(&aux);
    let lambda = &sp.lambda().value;
    let alpha = eigenvector(&mat, &blocks, q_slot(&aux, sp.i_max), lambda, Side::Right)?;
    let beta = eigenvector(&mat, &blocks, q_slot(&aux, sp.i_min), lambda, Side::Left)?;
    Ok(EigenPair { m, words: aux.words.clone(), lambda: sp.lambda().float, alpha, beta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMode {
    Convergent,
    Divergent,
}

/// Perron pair of M_{σᵢ^(m)} restricted to L_m(σᵢ)∖L_m(σ_{i′−1}).
#[derive(Debug, Clone)]
pub struct LimitData {
    pub level: usize,
    pub m: usize,
    pub mode: LimitMode,
    pub i_prime: usize,
    /// Restricted coordinate words, in auxiliary order.
    pub words: Vec<Word>,
    /// Words of L_m(σ_{i′−1}), whose limits diverge.
    pub infinite_words: Vec<Word>,
    /// Right vector, positive exactly on Q_m(i), smallest positive entry 1.
    pub gamma: Vector,
    /// Left vector with Σ δ·γ = 1.
    pub delta: Vector,
    pub theta: f64,
}

impl LimitData {
    pub fn position(&self, w: &Word) -> Option<usize> {
        self.words.iter().position(|x| x == w)
    }
}

pub fn limit_data(sigma: &Substitution, chain: &ComponentChain, m: usize, i: usize) -> Result<LimitData> {
    let sp = block_eigenvalues(sigma, chain);
    limit_data_with(sigma, chain, &sp, m, i)
}

pub fn limit_data_with(
    sigma: &Substitution,
    chain: &ComponentChain,
    sp: &SpectralProfile,
    m: usize,
    i: usize,
) -> Result<LimitData> {
    if i == 0 || i > chain.n() {
        return Err(Error::LevelOutOfRange { level: i, levels: chain.n() });
    }
    if sp.cmp_one(i) != Ordering::Greater {
        return Err(Error::ThetaNotAboveOne { level: i });
    }
    let aux = build_auxiliary(sigma, chain, m)?;
    let full = auxiliary_matrix(&aux);
    let (mode, ip) = if sp.exceeds_below(i) {
        (LimitMode::Convergent, 1)
    } else {
        (LimitMode::Divergent, sp.i_prime(i))
    };
    let start = aux.language_end(ip - 1);
    let end = aux.language_end(i);
    let coords: Vec<usize> = (start..end).collect();
    let sub = full.select(&coords, &coords);
    let mut blocks = Vec::new();
    let mut target = 0;
    for b in &aux.blocks {
        let lo = b.range.start.max(start);
        let hi = b.range.end.min(end);
        if lo < hi || (b.kind == BlockKind::Q && b.level == i) {
            if b.kind == BlockKind::Q && b.level == i {
                target = blocks.len();
            }
            blocks.push(lo - start..hi.max(lo) - start);
        }
    }
    let theta = &sp.theta(i).value;
    let gamma = eigenvector(&sub, &blocks, target, theta, Side::Right)?;
    let delta = eigenvector(&sub, &blocks, target, theta, Side::Left)?;
    let delta = match (&gamma.exact, &delta.exact) {
        (Some(g), Some(d)) => {
            let pair = g.iter().zip(d).fold(BigRational::zero(), |a, (x, y)| a + x * y);
            Vector::from_exact(d.iter().map(|x| x / &pair).collect())
        }
        _ => {
            let pair: f64 = gamma.approx.iter().zip(&delta.approx).map(|(x, y)| x * y).sum();
            Vector::from_approx(delta.approx.iter().map(|x| x / pair).collect())
        }
    };
    Ok(LimitData {
        level: i,
        m,
        mode,
        i_prime: ip,
        words: aux.words[start..end].to_vec(),
        infinite_words: aux.words[..start].to_vec(),
        gamma,
        delta,
        theta: sp.theta(i).float,
    })
}
