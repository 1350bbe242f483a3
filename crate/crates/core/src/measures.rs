//! Invariant measures per level: typing, cylinder values and empirical
//! frequency checks along streamed points.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::classify::{classify_level, find_seed_pair, Orientation, PointSeed};
use crate::error::{Error, Result};
use crate::spectral::{limit_data_with, LimitData, LimitMode, SpectralProfile};
use crate::structure::{sub_substitution, ComponentChain};
use crate::words::{count_slice, OccurrenceCounter, Substitution, Word};

/// Default bound on streamed or counted lengths.
pub const DEFAULT_BUDGET: u128 = 1 << 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// θᵢ > λᵢ₋₁: a probability measure μᵢ.
    FiniteErgodic,
    /// 1 < θᵢ ≤ λᵢ₋₁: an infinite Radon measure νᵢ.
    InfiniteRadon,
    /// θᵢ = 1 and the only orbit is a shift-fixed point.
    CountingAtomFinite,
    /// θᵢ = 1 with an infinite orbit.
    CountingInfinite,
    /// θᵢ = 1 and the level adds no points.
    Vacuous,
}

impl MeasureKind {
    pub fn tag(&self) -> &'static str {
        match self {
            MeasureKind::FiniteErgodic => "finite_ergodic",
            MeasureKind::InfiniteRadon => "infinite_radon",
            MeasureKind::CountingAtomFinite => "counting_atom_finite",
            MeasureKind::CountingInfinite => "counting_infinite",
            MeasureKind::Vacuous => "vacuous",
        }
    }

    pub fn is_counting(&self) -> bool {
        !matches!(self, MeasureKind::FiniteErgodic | MeasureKind::InfiniteRadon)
    }
}

/// Counting measure on the orbit of one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMeasure {
    pub seed: PointSeed,
    /// True only for shift-fixed points.
    pub finite: bool,
}

#[derive(Debug, Clone)]
pub struct MeasureDescriptor {
    pub level: usize,
    pub kind: MeasureKind,
    /// Normalization anchor bᵢ.
    pub anchor: char,
    pub i_prime: Option<usize>,
    pub orbits: Vec<OrbitMeasure>,
}

impl MeasureDescriptor {
    /// Number of finite invariant measures this level contributes.
    pub fn finite_count(&self) -> usize {
        usize::from(self.kind == MeasureKind::FiniteErgodic) + self.orbits.iter().filter(|o| o.finite).count()
    }
}

fn check_level(chain: &ComponentChain, i: usize) -> Result<()> {
    if i == 0 || i > chain.n() {
        return Err(Error::LevelOutOfRange { level: i, levels: chain.n() });
    }
    Ok(())
}

fn anchor_letter(sigma: &Substitution, chain: &ComponentChain, i: usize) -> Result<char> {
    if i == 1 {
        return Ok(chain.new_letters(1)[0]);
    }
    Ok(find_seed_pair(sigma, chain, i)?.b)
}

pub fn measure_type(
    sigma: &Substitution,
    chain: &ComponentChain,
    spectral: &SpectralProfile,
    i: usize,
) -> Result<MeasureDescriptor> {
    check_level(chain, i)?;
    let anchor = anchor_letter(sigma, chain, i)?;
    let report = classify_level(sigma, chain, spectral, i)?;
    let orbits: Vec<OrbitMeasure> = report
        .seeds
        .iter()
        .filter(|s| !matches!(s, PointSeed::QuasiFixed { primitive_type: false, .. }))
        .map(|s| OrbitMeasure { seed: s.clone(), finite: s.shift_periodic() })
        .collect();
    let (kind, i_prime) = if spectral.cmp_one(i) != Ordering::Greater {
        let kind = if orbits.is_empty() {
            MeasureKind::Vacuous
        } else if orbits.iter().all(|o| o.finite) {
            MeasureKind::CountingAtomFinite
        } else {
            MeasureKind::CountingInfinite
        };
        (kind, None)
    } else if spectral.exceeds_below(i) {
        (MeasureKind::FiniteErgodic, None)
    } else {
        (MeasureKind::InfiniteRadon, Some(spectral.i_prime(i)))
    };
    Ok(MeasureDescriptor { level: i, kind, anchor, i_prime, orbits })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderValue {
    pub word: Word,
    pub exact: Option<BigRational>,
    pub approx: f64,
    pub infinite: bool,
}

impl CylinderValue {
    fn infinite(word: Word) -> Self {
        CylinderValue { word, exact: None, approx: f64::INFINITY, infinite: true }
    }
}

/// Limit data of a level at window m, for the level's measure type.
pub fn level_limit_data(
    sigma: &Substitution,
    chain: &ComponentChain,
    spectral: &SpectralProfile,
    i: usize,
    m: usize,
) -> Result<LimitData> {
    check_level(chain, i)?;
    if spectral.cmp_one(i) != Ordering::Greater {
        return Err(Error::MeasureTypeCounting { level: i });
    }
    let si = sub_substitution(sigma, chain, i)?.substitution;
    let ci = crate::structure::component_chain(&si)?;
    let sp = crate::spectral::block_eigenvalues(&si, &ci);
    limit_data_with(&si, &ci, &sp, m, i)
}

pub fn cylinder_measure(
    sigma: &Substitution,
    chain: &ComponentChain,
    spectral: &SpectralProfile,
    i: usize,
    v: &Word,
) -> Result<CylinderValue> {
    check_level(chain, i)?;
    if spectral.cmp_one(i) != Ordering::Greater {
        return Err(Error::MeasureTypeCounting { level: i });
    }
    if v.is_empty() {
        return Err(Error::Argument("cylinder word must be nonempty".into()));
    }
    let si = sub_substitution(sigma, chain, i)?.substitution;
    if !si.contains_word(v) {
        return Err(Error::WordNotInLevelLanguage { word: v.to_string(), level: i });
    }
    let ld = level_limit_data(sigma, chain, spectral, i, v.len())?;
    if ld.infinite_words.contains(v) {
        return Ok(CylinderValue::infinite(v.clone()));
    }
    let pv = ld.position(v).expect("word of the level language has a coordinate");
    match ld.mode {
        LimitMode::Convergent => {
            let value = match &ld.delta.exact {
                Some(d) => {
                    let total = d.iter().fold(BigRational::zero(), |a, x| a + x);
                    let r = &d[pv] / total;
                    CylinderValue { word: v.clone(), approx: r.to_f64().unwrap_or(f64::NAN), exact: Some(r), infinite: false }
                }
                None => {
                    let total: f64 = ld.delta.approx.iter().sum();
                    CylinderValue { word: v.clone(), exact: None, approx: ld.delta.approx[pv] / total, infinite: false }
                }
            };
            Ok(value)
        }
        LimitMode::Divergent => {
            let b = anchor_letter(sigma, chain, i)?;
            let pu = ld
                .words
                .iter()
                .position(|w| w.first() == Some(b) && ld.gamma.support()[ld.position(w).unwrap()])
                .ok_or_else(|| Error::Precondition("no window word starts with the anchor letter".into()))?;
            let value = match (&ld.gamma.exact, &ld.delta.exact) {
                (Some(g), Some(d)) => {
                    let r = &g[pu] * &d[pv];
                    CylinderValue { word: v.clone(), approx: r.to_f64().unwrap_or(f64::NAN), exact: Some(r), infinite: false }
                }
                _ => CylinderValue {
                    word: v.clone(),
                    exact: None,
                    approx: ld.gamma.approx[pu] * ld.delta.approx[pv],
                    infinite: false,
                },
            };
            Ok(value)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Empirical {
    pub anchor: char,
    /// Prefix length L actually streamed.
    pub length: usize,
    /// Power k whose image prefix was streamed.
    pub power: usize,
    /// N(v, prefix) / L.
    pub ratio: f64,
    /// (k, θᵢ^{−k}·N(v, σᵏ(bᵢ))) for infinite levels.
    pub scaled: Option<(usize, f64)>,
}

pub fn empirical_frequency(
    sigma: &Substitution,
    chain: &ComponentChain,
    spectral: &SpectralProfile,
    i: usize,
    v: &Word,
    len: usize,
    budget: u128,
) -> Result<Empirical> {
    check_level(chain, i)?;
    if v.is_empty() || len < v.len() {
        return Err(Error::Argument("prefix length must be at least the word length".into()));
    }
    if len as u128 > budget {
        return Err(Error::BudgetExceeded { needed: len as u128, budget });
    }
    let si = sub_substitution(sigma, chain, i)?.substitution;
    if !si.contains_word(v) {
        return Err(Error::WordNotInLevelLanguage { word: v.to_string(), level: i });
    }
    let b = anchor_letter(sigma, chain, i)?;
    let bi = si.alphabet().index_of(b).unwrap();
    let mut k = 0;
    loop {
        let t = si.length_table(k);
        if t[k][bi] >= len as u128 {
            break;
        }
        if k > 4096 || (k > 0 && t[k][bi] == t[k - 1][bi]) {
            return Err(Error::Precondition(format!("images of {b} stop growing before length {len}")));
        }
        k += 1;
    }
    let prefix = si.prefix_of_power(b, k, len);
    let ratio = count_slice(v.letters(), &prefix) as f64 / len as f64;
    let scaled = if spectral.cmp_one(i) == Ordering::Greater && !spectral.exceeds_below(i) {
        let theta = spectral.theta(i).float;
        let mut counter = OccurrenceCounter::new(&si, v)?;
        let mut best = None;
        for j in 0.. {
            let (n, l) = match counter.count(b, j) {
                Ok(x) => x,
                Err(_) => break,
            };
            if l > budget || j > 4096 {
                break;
            }
            best = Some((j, n as f64 / theta.powi(j as i32)));
        }
        best
    } else {
        None
    };
    Ok(Empirical { anchor: b, length: len, power: k, ratio, scaled })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Uniformity {
    /// Δ_v = δ_v / Σ_{w∉B} δ_w.
    pub target: f64,
    /// (offset j, N(v, window)/n) per requested offset.
    pub ratios: Vec<(usize, f64)>,
    pub max_deviation: f64,
    /// Letters streamed.
    pub streamed: usize,
}

pub fn uniformity_check(
    sigma: &Substitution,
    chain: &ComponentChain,
    spectral: &SpectralProfile,
    i: usize,
    v: &Word,
    n: usize,
    offsets: &[usize],
    budget: u128,
) -> Result<Uniformity> {
    check_level(chain, i)?;
    if i < 2 {
        return Err(Error::Precondition("uniformity needs a level with a quasi-fixed point".into()));
    }
    if n == 0 || v.is_empty() {
        return Err(Error::Argument("window count and word must be nonempty".into()));
    }
    let seed = find_seed_pair(sigma, chain, i)?;
    if seed.v.is_empty() {
        return Err(Error::Precondition("quasi-fixed point has an empty right word".into()));
    }
    let si = sub_substitution(sigma, chain, i)?.substitution;
    let ld = level_limit_data(sigma, chain, spectral, i, v.len())?;
    let pv = ld
        .position(v)
        .ok_or_else(|| Error::WordNotInLevelLanguage { word: v.to_string(), level: i })?;
    let new = chain.new_letters(i);
    let outside: f64 = ld
        .words
        .iter()
        .zip(&ld.delta.approx)
        .filter(|(w, _)| new.contains(&w.first().unwrap()))
        .map(|(_, d)| d)
        .sum();
    let target = ld.delta.approx[pv] / outside;

    let (tau, pattern) = match seed.orientation {
        Orientation::Forward => (si.power(seed.k)?, v.clone()),
        Orientation::Reverse => (si.reversed().power(seed.k)?, v.reversed()),
    };
    let tail = match seed.orientation {
        Orientation::Forward => seed.v.clone(),
        Orientation::Reverse => seed.v.reversed(),
    };
    let needed = offsets.iter().max().copied().unwrap_or(0) + n + 1;
    let mut stream: Vec<char> = vec![seed.b];
    let mut cur = tail;
    let mut returns: Vec<usize> = vec![0];
    loop {
        let start = stream.len();
        stream.extend_from_slice(cur.letters());
        returns.extend((start..stream.len()).filter(|&p| new.contains(&stream[p])));
        if returns.len() > needed + 1 {
            break;
        }
        let next = tau.apply(&cur, 1)?;
        if (stream.len() + next.len()) as u128 > budget {
            return Err(Error::BudgetExceeded { needed: (stream.len() + next.len()) as u128, budget });
        }
        if next.len() == cur.len() && returns.len() == start {
            return Err(Error::Precondition("the streamed point never returns to the level".into()));
        }
        cur = next;
    }
    let p = pattern.letters();
    let mut ratios = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for &j in offsets {
        let (lo, hi) = (returns[j], returns[j + n]);
        let end = (hi + p.len() - 1).min(stream.len());
        let count = stream[lo..end].windows(p.len()).filter(|w| *w == p).count();
        let r = count as f64 / n as f64;
        max_deviation = max_deviation.max((r - target).abs());
        ratios.push((j, r));
    }
    Ok(Uniformity { target, ratios, max_deviation, streamed: stream.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::block_eigenvalues;
    use crate::structure::component_chain;

    fn setup(r: &[(char, &str)]) -> (Substitution, ComponentChain, SpectralProfile) {
        let s = Substitution::from_rules(r).unwrap();
        let c = component_chain(&s).unwrap();
        let p = block_eigenvalues(&s, &c);
        (s, c, p)
    }

    #[test]
    fn example_531() {
        let (s, c, p) = setup(&[('a', "aaaa"), ('b', "abbb"), ('c', "cbc")]);
        let kinds: Vec<_> = (1..=3).map(|i| measure_type(&s, &c, &p, i).unwrap().kind).collect();
        assert_eq!(kinds, [MeasureKind::FiniteErgodic, MeasureKind::InfiniteRadon, MeasureKind::InfiniteRadon]);
        let val = |i, w: &str| cylinder_measure(&s, &c, &p, i, &w.into()).unwrap();
        assert_eq!(val(2, "ab").exact.unwrap().to_string(), "1/3");
        assert_eq!(val(2, "b").exact.unwrap().to_string(), "1");
        assert!(val(2, "a").infinite);
        assert_eq!(val(3, "ca").exact.unwrap().to_string(), "1/2");
        assert!(val(3, "bb").infinite);
    }
}
