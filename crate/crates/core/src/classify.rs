//! Structural classification of each level: seed pairs, the case analysis of
//! X_{σᵢ}∖X_{σᵢ₋₁}, finite seeds of σ-periodic points, minimal sets and the
//! unique-ergodicity verdict.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::spectral::SpectralProfile;
use crate::structure::{is_empty_bottom, sub_substitution, ComponentChain};
use crate::words::{Substitution, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// σᵏ(ab) = u·a·b·v
    Forward,
    /// σᵏ(ba) = v·b·a·u
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedPair {
    pub level: usize,
    pub a: char,
    pub b: char,
    pub k: usize,
    pub u: Word,
    pub v: Word,
    pub orientation: Orientation,
}

impl SeedPair {
    /// The two-letter word ab (Forward) or ba (Reverse).
    pub fn pair_word(&self) -> Word {
        match self.orientation {
            Orientation::Forward => Word(vec![self.a, self.b]),
            Orientation::Reverse => Word(vec![self.b, self.a]),
        }
    }

    /// The right-hand side of the defining identity.
    pub fn expansion(&self) -> Word {
        let mid = self.pair_word();
        match self.orientation {
            Orientation::Forward => self.u.concat(&mid).concat(&self.v),
            Orientation::Reverse => self.v.concat(&mid).concat(&self.u),
        }
    }

    /// Re-expands σᵏ of the pair word and compares.
    pub fn verify(&self, sigma: &Substitution) -> bool {
        sigma.apply(&self.pair_word(), self.k).map(|w| w == self.expansion()).unwrap_or(false)
    }
}

fn first_new(w: &[char], old: &[char]) -> Option<usize> {
    w.iter().position(|c| !old.contains(c))
}

/// Pair search in forward orientation on `tau`, starting from a₀b₀.
fn forward_pair(tau: &Substitution, old: &[char], a0: char, b0: char) -> Result<(char, char, usize, Word, Word)> {
    let mut seen: HashMap<(char, char), usize> = HashMap::new();
    let (mut a, mut b) = (a0, b0);
    for j in 0.. {
        if let Some(&j1) = seen.get(&(a, b)) {
            let k = j - j1;
            let (a, b) = seen.iter().find(|(_, &t)| t == j1).map(|(p, _)| *p).unwrap();
            let full = tau.apply(&Word(vec![a, b]), k)?;
            let ak = tau.apply(&Word(vec![a]), k)?.len();
            let bk = tau.apply(&Word(vec![b]), k)?;
            let m = first_new(bk.letters(), old).expect("new letter reproduces");
            let pos = ak + m;
            let u = Word(full.letters()[..pos - 1].to_vec());
            let v = Word(full.letters()[pos + 1..].to_vec());
            return Ok((a, b, k, u, v));
        }
        if j > 4 * tau.alphabet().len() * tau.alphabet().len() + 4 {
            break;
        }
        seen.insert((a, b), j);
        let img = tau.image_of(&[a, b]);
        let sa = tau.image(a).len();
        let m = first_new(tau.image(b).letters(), old)
            .ok_or_else(|| Error::Precondition("a new letter maps into the lower level".into()))?;
        let pos = sa + m;
        a = img[pos - 1];
        b = img[pos];
    }
    Err(Error::Precondition("seed pair search did not repeat".into()))
}

pub fn find_seed_pair(sigma: &Substitution, chain: &ComponentChain, i: usize) -> Result<SeedPair> {
    if i < 2 || i > chain.n() {
        return Err(Error::LevelOutOfRange { level: i, levels: chain.n() });
    }
    let si = sub_substitution(sigma, chain, i)?.substitution;
    let old = chain.level_set(i - 1);
    let is_old = |c: char| old.contains(&c);
    for w in si.language_sorted(2)? {
        let (x, y) = (w.letters()[0], w.letters()[1]);
        if is_old(x) && !is_old(y) {
            let (a, b, k, u, v) = forward_pair(&si, &old, x, y)?;
            return Ok(SeedPair { level: i, a, b, k, u, v, orientation: Orientation::Forward });
        }
        if !is_old(x) && is_old(y) {
            let rev = si.reversed();
            let (a, b, k, u, v) = forward_pair(&rev, &old, y, x)?;
            return Ok(SeedPair {
                level: i,
                a,
                b,
                k,
                u: u.reversed(),
                v: v.reversed(),
                orientation: Orientation::Reverse,
            });
        }
    }
    Err(Error::Precondition(format!("no two-letter word crosses into level {i}")))
}

/// v contains a letter of Aᵢ∖Aᵢ₋₁.
pub fn positively_recurrent(_sigma: &Substitution, chain: &ComponentChain, seed: &SeedPair) -> Result<bool> {
    if seed.v.is_empty() {
        return Err(Error::Precondition("positive recurrence needs a nonempty right word".into()));
    }
    let new = chain.new_letters(seed.level);
    Ok(seed.v.letters().iter().any(|c| new.contains(c)))
}

/// Whether sᵖ ∈ L(τ) for every p, for a letter with τ(s) = s.
pub fn powers_unbounded(tau: &Substitution, s: char) -> bool {
    let scan = |t: &Substitution| -> bool {
        let step = |c: char| -> Option<(char, usize)> {
            let img = t.image(c).letters();
            let l = img.iter().take_while(|&&x| x == s).count();
            img.get(l).map(|&d| (d, l))
        };
        for &c in t.alphabet().letters() {
            if c == s {
                continue;
            }
            let mut x = c;
            let mut total = 0;
            for _ in 0..t.alphabet().len() {
                match step(x) {
                    Some((d, l)) => {
                        total += l;
                        x = d;
                        if x == c {
                            if total > 0 {
                                return true;
                            }
                            break;
                        }
                    }
                    None => break,
                }
            }
        }
        false
    };
    tau.image(s).letters() == [s] && (scan(tau) || scan(&tau.reversed()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitForm {
    /// lim σ^{qj}(left).s^p σ^{qj}(right), p possibly zero.
    Central,
    /// lim s^j.σ^{qj}(right)
    LeftFixedPower,
    /// lim σ^{qj}(left).s^j
    RightFixedPower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointSeed {
    /// s^∞
    FixedLetterPower { letter: char },
    BilateralLimit {
        left: char,
        right: char,
        q: usize,
        middle: Option<(char, usize)>,
        form: LimitForm,
        /// Whether the radius-R window looks shift-periodic.
        window_periodic: bool,
    },
    QuasiFixed { seed: SeedPair, primitive_type: bool },
}

impl PointSeed {
    pub fn shift_periodic(&self) -> bool {
        matches!(self, PointSeed::FixedLetterPower { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelCase {
    /// Level 1 with growing images.
    Primitive,
    /// A₁ = {s}, σ(s) = s.
    EmptyBottom,
    /// A₁ = {s}, σ(s) = sᵖ with p ≥ 2.
    FixedLetter,
    /// X_{σ₂} = {s^∞}.
    SingletonOrbit,
    AlmostPrimitive,
    /// Minimal and uniquely ergodic X_{σ₂}.
    ChaconType,
    /// The left word is a power of the paired letter.
    PowerDegenerate,
    /// v = Λ: only σ-periodic points.
    OneSided,
    QuasiFixedPrimitive,
    DenseOrbits,
}

impl LevelCase {
    pub fn tag(&self) -> &'static str {
        match self {
            LevelCase::Primitive => "primitive",
            LevelCase::EmptyBottom => "empty_bottom",
            LevelCase::FixedLetter => "fixed_letter",
            LevelCase::SingletonOrbit => "singleton_orbit",
            LevelCase::AlmostPrimitive => "almost_primitive",
            LevelCase::ChaconType => "chacon_type",
            LevelCase::PowerDegenerate => "power_degenerate",
            LevelCase::OneSided => "one_sided",
            LevelCase::QuasiFixedPrimitive => "quasi_fixed_primitive",
            LevelCase::DenseOrbits => "dense_orbits",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelReport {
    pub level: usize,
    pub case: LevelCase,
    pub seed_pair: Option<SeedPair>,
    pub seeds: Vec<PointSeed>,
    /// Whether the dense part Xᵢ is nonempty.
    pub dense_part_nonempty: bool,
    pub positively_recurrent: Option<bool>,
    /// Radius of the windows used to merge periodic seeds.
    pub dedup_radius: usize,
    /// X_{σ₂} is a single shift-periodic orbit.
    pub shift_periodic_closure: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimalSet {
    Bottom,
    SecondLevel,
    FixedPoint(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub uniquely_ergodic: bool,
    /// "i", "ii" or "iii" when uniquely ergodic.
    pub clause: Option<&'static str>,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub minimal_sets: Vec<MinimalSet>,
    /// Clause of the trichotomy that applied, or None when both sets occur.
    pub clause: Option<&'static str>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub levels: Vec<LevelReport>,
    pub census: Census,
}

/// The fixed letter s when A₁ = {s} and σ(s) = s.
fn bottom_fixed_letter(sigma: &Substitution, chain: &ComponentChain) -> Option<char> {
    is_empty_bottom(sigma, chain).then(|| chain.new_letters(1)[0])
}

/// First level j ≥ 2 where s-powers are unbounded in σⱼ.
fn s_power_level(sigma: &Substitution, chain: &ComponentChain) -> Option<usize> {
    let s = bottom_fixed_letter(sigma, chain)?;
    (2..=chain.n()).find(|&j| {
        let sj = sub_substitution(sigma, chain, j).unwrap().substitution;
        powers_unbounded(&sj, s)
    })
}

struct LangCache<'a> {
    sub: &'a Substitution,
    by_len: HashMap<usize, BTreeSet<Word>>,
}

impl<'a> LangCache<'a> {
    fn new(sub: &'a Substitution) -> Self {
        LangCache { sub, by_len: HashMap::new() }
    }

    fn contains(&mut self, w: &Word) -> bool {
        let sub = self.sub;
        self.by_len
            .entry(w.len())
            .or_insert_with(|| sub.language(w.len()).unwrap_or_default())
            .contains(w)
    }
}

fn cycle_period(sigma: &Substitution, c: char, last: bool) -> Option<usize> {
    let mut x = c;
    for n in 1..=sigma.alphabet().len() {
        let img = sigma.image(x);
        x = if last { img.last().unwrap() } else { img.first().unwrap() };
        if x == c {
            return Some(n);
        }
    }
    None
}

/// Smallest period of a word.
fn smallest_period(w: &[char]) -> usize {
    let n = w.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail.last().copied().unwrap_or(0)
}

const MAX_RADIUS: usize = 512;

fn seed_window(sigma: &Substitution, seed: &PointSeed, radius: usize) -> Vec<char> {
    let rev = sigma.reversed();
    let grow = |c: char, q: usize| -> usize {
        let mut j = 1;
        loop {
            let t = sigma.length_table(q * j);
            if t[q * j][sigma.alphabet().index_of(c).unwrap()] >= radius as u128 || j > 64 {
                return q * j;
            }
            j += 1;
        }
    };
    let suffix = |c: char, q: usize| -> Vec<char> {
        let mut s = rev.prefix_of_power(c, grow(c, q), radius);
        s.reverse();
        s
    };
    let prefix = |c: char, q: usize| sigma.prefix_of_power(c, grow(c, q), radius);
    match seed {
        PointSeed::FixedLetterPower { letter } => vec![*letter; 2 * radius],
        PointSeed::BilateralLimit { left, right, q, middle, form, .. } => {
            let s = middle.map(|m| m.0);
            let mut w = match form {
                LimitForm::LeftFixedPower => vec![s.unwrap(); radius],
                _ => suffix(*left, *q),
            };
            if let (LimitForm::Central, Some((c, p))) = (form, middle) {
                w.extend(std::iter::repeat(*c).take(*p));
            }
            match form {
                LimitForm::RightFixedPower => w.extend(std::iter::repeat(s.unwrap()).take(radius)),
                _ => w.extend(prefix(*right, *q)),
            }
            w
        }
        PointSeed::QuasiFixed { .. } => Vec::new(),
    }
}

fn same_orbit(a: &[char], b: &[char]) -> bool {
    let h = a.len() / 4;
    if h == 0 || a.len() < 2 * h {
        return a == b;
    }
    let mid = a.len() / 2;
    let core = &a[mid - h..mid + h];
    b.windows(core.len()).any(|w| w == core)
}

/// Bilateral seeds of σ-periodic points in X_{σᵢ}∖X_{σᵢ₋₁} inside A_{i−1}^ℤ.
fn periodic_seeds(sigma: &Substitution, chain: &ComponentChain, i: usize) -> Result<(Vec<PointSeed>, usize)> {
    let si = sub_substitution(sigma, chain, i)?.substitution;
    let prev = sub_substitution(sigma, chain, i - 1)?.substitution;
    let mut upper = LangCache::new(&si);
    let mut lower = LangCache::new(&prev);
    let letters = chain.level_set(i - 1);
    let mut found = Vec::new();
    let fresh = |w: &Word, upper: &mut LangCache, lower: &mut LangCache| upper.contains(w) && !lower.contains(w);
    match bottom_fixed_letter(sigma, chain) {
        None => {
            for &g in &letters {
                let Some(pg) = cycle_period(&si, g, true) else { continue };
                for &d in &letters {
                    let Some(pd) = cycle_period(&si, d, false) else { continue };
                    if fresh(&Word(vec![g, d]), &mut upper, &mut lower) {
                        found.push(PointSeed::BilateralLimit {
                            left: g,
                            right: d,
                            q: pg.lcm(&pd),
                            middle: None,
                            form: LimitForm::Central,
                            window_periodic: false,
                        });
                    }
                }
            }
        }
        Some(s) => {
            let cand: Vec<char> = letters.iter().copied().filter(|&c| c != s).collect();
            let bound = 2 * sigma.alphabet().len() * sigma.max_image_len() + 1;
            for &d in &cand {
                let Some(pd) = cycle_period(&si, d, true) else { continue };
                for &g in &cand {
                    let Some(pg) = cycle_period(&si, g, false) else { continue };
                    for p in 0..=bound {
                        let mut w = vec![d];
                        w.extend(std::iter::repeat(s).take(p));
                        w.push(g);
                        if fresh(&Word(w), &mut upper, &mut lower) {
                            found.push(PointSeed::BilateralLimit {
                                left: d,
                                right: g,
                                q: pd.lcm(&pg),
                                middle: (p > 0).then_some((s, p)),
                                form: LimitForm::Central,
                                window_periodic: false,
                            });
                        }
                    }
                }
            }
            let mut run = vec![s; bound];
            for &g in &cand {
                let Some(pg) = cycle_period(&si, g, false) else { continue };
                run.push(g);
                if fresh(&Word(run.clone()), &mut upper, &mut lower) {
                    found.push(PointSeed::BilateralLimit {
                        left: s,
                        right: g,
                        q: pg,
                        middle: Some((s, 0)),
                        form: LimitForm::LeftFixedPower,
                        window_periodic: false,
                    });
                }
                run.pop();
            }
            for &d in &cand {
                let Some(pd) = cycle_period(&si, d, true) else { continue };
                let mut w = vec![d];
                w.extend(std::iter::repeat(s).take(bound));
                if fresh(&Word(w), &mut upper, &mut lower) {
                    found.push(PointSeed::BilateralLimit {
                        left: d,
                        right: s,
                        q: pd,
                        middle: Some((s, 0)),
                        form: LimitForm::RightFixedPower,
                        window_periodic: false,
                    });
                }
            }
        }
    }
    let qmax = found
        .iter()
        .map(|p| match p {
            PointSeed::BilateralLimit { q, .. } => *q,
            _ => 1,
        })
        .max()
        .unwrap_or(1);
    let table = si.length_table(2 * qmax);
    let radius = table[2 * qmax]
        .iter()
        .map(|&x| x.saturating_mul(2))
        .max()
        .unwrap_or(2)
        .min(MAX_RADIUS as u128) as usize;
    let mut kept: Vec<(PointSeed, Vec<char>)> = Vec::new();
    for mut seed in found {
        let w = seed_window(&si, &seed, radius);
        if kept.iter().any(|(_, k)| same_orbit(k, &w) || same_orbit(&w, k)) {
            continue;
        }
        if let PointSeed::BilateralLimit { window_periodic, .. } = &mut seed {
            *window_periodic = smallest_period(&w) <= radius / 2;
        }
        kept.push((seed, w));
    }
    Ok((kept.into_iter().map(|(s, _)| s).collect(), radius))
}

/// Morse-Hedlund: the subshift is a periodic orbit iff some |Lₙ| ≤ n.
fn language_is_periodic(sub: &Substitution) -> bool {
    (1..=2 * sub.alphabet().len() + 2).any(|n| sub.language(n).map(|l| l.len() <= n).unwrap_or(false))
}

pub fn classify_level(
    sigma: &Substitution,
    chain: &ComponentChain,
    spectral: &SpectralProfile,
    i: usize,
) -> Result<LevelReport> {
    if i == 0 || i > chain.n() {
        return Err(Error::LevelOutOfRange { level: i, levels: chain.n() });
    }
    let s_level = s_power_level(sigma, chain);
    let mut report = LevelReport {
        level: i,
        case: LevelCase::Primitive,
        seed_pair: None,
        seeds: Vec::new(),
        dense_part_nonempty: false,
        positively_recurrent: None,
        dedup_radius: 0,
        shift_periodic_closure: false,
    };
    if i == 1 {
        let a1 = chain.new_letters(1);
        report.case = if is_empty_bottom(sigma, chain) {
            LevelCase::EmptyBottom
        } else if a1.len() == 1 {
            LevelCase::FixedLetter
        } else {
            LevelCase::Primitive
        };
        report.dense_part_nonempty = report.case != LevelCase::EmptyBottom;
        return Ok(report);
    }
    let pair = find_seed_pair(sigma, chain, i)?;
    let new = chain.new_letters(i);
    let lower = chain.level_set(i - 1);
    let a_power = pair.u.letters().iter().all(|&c| c == pair.a);
    let bottom_a = i == 2 && lower == [pair.a];
    let mut periodic = true;
    report.case = if pair.u.is_empty() && bottom_a && sigma.image(pair.a).letters() == [pair.a] {
        periodic = false;
        let s2 = sub_substitution(sigma, chain, 2)?.substitution;
        if powers_unbounded(&s2, pair.a) {
            let img = sigma.image(pair.b).letters();
            let others = img.iter().filter(|&&c| c != pair.a).count();
            let b_end = img.first() == Some(&pair.b) || img.last() == Some(&pair.b);
            if new == [pair.b] && others == 1 && b_end {
                LevelCase::SingletonOrbit
            } else {
                LevelCase::AlmostPrimitive
            }
        } else {
            report.shift_periodic_closure = language_is_periodic(&s2);
            LevelCase::ChaconType
        }
    } else if a_power && bottom_a {
        periodic = false;
        if pair.v.is_empty() {
            LevelCase::PowerDegenerate
        } else {
            LevelCase::AlmostPrimitive
        }
    } else if pair.v.is_empty() {
        LevelCase::OneSided
    } else if pair.v.letters().iter().all(|c| lower.contains(c)) {
        LevelCase::QuasiFixedPrimitive
    } else {
        LevelCase::DenseOrbits
    };
    if !pair.v.is_empty() {
        report.positively_recurrent = Some(positively_recurrent(sigma, chain, &pair)?);
    }
    report.dense_part_nonempty = matches!(
        report.case,
        LevelCase::ChaconType | LevelCase::AlmostPrimitive | LevelCase::DenseOrbits
    ) && spectral.cmp_one(i) == Ordering::Greater;
    if matches!(report.case, LevelCase::QuasiFixedPrimitive | LevelCase::DenseOrbits) {
        report.seeds.push(PointSeed::QuasiFixed {
            seed: pair.clone(),
            primitive_type: report.case == LevelCase::QuasiFixedPrimitive,
        });
    }
    if s_level == Some(i) {
        report.seeds.push(PointSeed::FixedLetterPower { letter: chain.new_letters(1)[0] });
    }
    if periodic {
        let (seeds, radius) = periodic_seeds(sigma, chain, i)?;
        report.seeds.extend(seeds);
        report.dedup_radius = radius;
    }
    report.seed_pair = Some(pair);
    Ok(report)
}

pub fn minimal_sets(sigma: &Substitution, chain: &ComponentChain, spectral: &SpectralProfile) -> Census {
    let (minimal_sets, clause) = match bottom_fixed_letter(sigma, chain) {
        None => (vec![MinimalSet::Bottom], Some("i")),
        Some(s) => {
            if !powers_unbounded(sigma, s) {
                (vec![MinimalSet::SecondLevel], Some("ii"))
            } else if s_power_level(sigma, chain) == Some(2) {
                (vec![MinimalSet::FixedPoint(s)], Some("iii"))
            } else {
                (vec![MinimalSet::SecondLevel, MinimalSet::FixedPoint(s)], None)
            }
        }
    };
    let lambda_gt_one = spectral.lambda_cmp_one() == Ordering::Greater;
    let clause_ue = if lambda_gt_one && spectral.i_min == 1 {
        Some("i")
    } else if lambda_gt_one
        && spectral.theta_is_one(1)
        && spectral.i_min == 2
        && bottom_fixed_letter(sigma, chain).is_some_and(|s| !powers_unbounded(sigma, s))
    {
        Some("ii")
    } else if spectral.lambda_cmp_one() == Ordering::Equal {
        Some("iii")
    } else {
        None
    };
    Census {
        minimal_sets,
        clause,
        verdict: Verdict { uniquely_ergodic: clause_ue.is_some(), clause: clause_ue },
    }
}

pub fn classify(sigma: &Substitution, chain: &ComponentChain, spectral: &SpectralProfile) -> Result<DecompositionReport> {
    let levels = (1..=chain.n())
        .map(|i| classify_level(sigma, chain, spectral, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport { levels, census: minimal_sets(sigma, chain, spectral) })
}
