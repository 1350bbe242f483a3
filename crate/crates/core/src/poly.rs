//! Univariate polynomials over ℚ, Sturm sequences and real algebraic numbers
//! represented by an isolating interval.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    /// From integer coefficients given leading term first.
    pub fn from_descending(c: &[BigInt]) -> Self {
        Poly::new(c.iter().rev().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        match self.0.last() {
            Some(l) => Poly(self.0.iter().map(|c| c / l).collect()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p / gcd(p, p′): same roots, all simple.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(Poly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval (lo, hi].
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if self.degree().unwrap_or(0) == 0 || lo >= hi {
            return 0;
        }
        let sf = self.squarefree();
        let seq = sf.sturm();
        let changes = |x: &BigRational| -> usize {
            let signs: Vec<i8> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        (changes(lo) as i64 - changes(hi) as i64).max(0) as usize
    }
}

/// A real algebraic number: the unique root of a squarefree polynomial in
/// the interval (lo, hi], or an exact rational.
#[derive(Debug, Clone)]
pub struct AlgebraicReal {
    poly: Poly,
    lo: BigRational,
    hi: BigRational,
    exact: Option<BigRational>,
}

impl AlgebraicReal {
    pub fn rational(r: BigRational) -> Self {
        AlgebraicReal {
            poly: Poly::new(vec![-r.clone(), BigRational::one()]),
            lo: r.clone() - BigRational::one(),
            hi: r.clone(),
            exact: Some(r),
        }
    }

    /// The largest real root of `p` within [lo, hi]; `None` if there is none.
    pub fn largest_root_in(p: &Poly, lo: &BigRational, hi: &BigRational) -> Option<Self> {
        let sf = p.squarefree();
        if sf.eval(hi).is_zero() {
            return Some(AlgebraicReal::rational(hi.clone()));
        }
        let mut a = lo.clone() - BigRational::new(1.into(), 1024.into());
        let mut b = hi.clone();
        if sf.count_roots(&a, &b) == 0 {
            return None;
        }
        while sf.count_roots(&a, &b) > 1 {
            let mid = (&a + &b) / rat(2);
            if sf.count_roots(&mid, &b) >= 1 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mut x = AlgebraicReal { poly: sf, lo: a, hi: b, exact: None };
        x.detect_integer();
        Some(x)
    }

    fn detect_integer(&mut self) {
        if self.exact.is_some() {
            return;
        }
        while &self.hi - &self.lo >= BigRational::one() {
            self.bisect();
            if self.exact.is_some() {
                return;
            }
        }
        let c = BigRational::from_integer(self.hi.floor().to_integer());
        if c > self.lo && self.poly.eval(&c).is_zero() {
            self.set_exact(c);
        }
    }

    fn set_exact(&mut self, r: BigRational) {
        *self = AlgebraicReal::rational(r);
    }

    fn bisect(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        if self.poly.eval(&mid).is_zero() {
            self.set_exact(mid);
        } else if self.poly.count_roots(&self.lo, &mid) >= 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Narrows the isolating interval below `width`.
    pub fn refine(&mut self, width: &BigRational) {
        while self.exact.is_none() && &(&self.hi - &self.lo) > width {
            self.bisect();
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    /// Integer value when the number is an integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.exact.as_ref().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = &self.exact {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let mut x = self.clone();
        x.refine(&BigRational::new(1.into(), BigInt::from(1u64) << 60));
        ((&x.lo + &x.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    fn equals(&self, other: &AlgebraicReal) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => return a == b,
            (Some(r), None) => return other.is_root_here(r),
            (None, Some(r)) => return self.is_root_here(r),
            (None, None) => {}
        }
        let g = self.poly.gcd(&other.poly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        lo < hi && g.count_roots(lo, hi) >= 1
    }

    fn is_root_here(&self, r: &BigRational) -> bool {
        r > &self.lo && r <= &self.hi && self.poly.eval(r).is_zero()
    }

    pub fn cmp_exact(&self, other: &AlgebraicReal) -> Ordering {
        if self.equals(other) {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            let (alo, ahi) = a.bounds();
            let (blo, bhi) = b.bounds();
            if ahi <= blo {
                return Ordering::Less;
            }
            if bhi <= alo {
                return Ordering::Greater;
            }
            if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
                return x.cmp(y);
            }
            a.bisect();
            b.bisect();
        }
    }

    fn bounds(&self) -> (BigRational, BigRational) {
        match &self.exact {
            Some(r) => (r.clone(), r.clone()),
            None => (self.lo.clone(), self.hi.clone()),
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp_exact(&AlgebraicReal::rational(r.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_descending(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn golden_ratio() {
        let f = p(&[1, -1, -1]);
        let phi = AlgebraicReal::largest_root_in(&f, &rat(1), &rat(2)).unwrap();
        assert!(phi.exact().is_none());
        assert!((phi.to_f64() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(phi.cmp_rational(&rat(2)), Ordering::Less);
        assert_eq!(phi.cmp_rational(&rat(1)), Ordering::Greater);
        let other = AlgebraicReal::largest_root_in(&p(&[1, -2, 0, 1]), &rat(1), &rat(3)).unwrap();
        // x^3 - 2x^2 + 1 = (x - 1)(x^2 - x - 1)
        assert_eq!(phi.cmp_exact(&other), Ordering::Equal);
    }

    #[test]
    fn integer_roots() {
        let q = p(&[1, -9, 26, -24]);
        let r = AlgebraicReal::largest_root_in(&q, &rat(0), &rat(10)).unwrap();
        assert_eq!(r.as_integer(), Some(BigInt::from(4)));
        let r = AlgebraicReal::largest_root_in(&p(&[1, -5, 6]), &rat(2), &rat(3)).unwrap();
        assert_eq!(r.as_integer(), Some(BigInt::from(3)));
    }

    #[test]
    fn root_counts() {
        let q = p(&[1, 0, -2]);
        assert_eq!(q.count_roots(&rat(-2), &rat(2)), 2);
        assert_eq!(q.count_roots(&rat(0), &rat(2)), 1);
        let sq = p(&[1, -2, 1]);
        assert_eq!(sq.count_roots(&rat(0), &rat(1)), 1);
        assert_eq!(sq.count_roots(&rat(1), &rat(2)), 0);
    }
}
