//! Sturm sequences, real-root counting and isolation, and the exact
//! nonnegativity test on a closed interval.

use num_traits::Signed;

use super::poly::Poly;
use super::rational::{midpoint, Rational};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// Sturm sequence of the squarefree part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let base = p.squarefree_part();
        let mut chain = vec![base.clone()];
        let d = base.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(-&r);
            }
        }
        Ok(SturmChain { chain })
    }

    pub fn polys(&self) -> &[Poly] {
        &self.chain
    }

    /// The squarefree polynomial heading the chain.
    pub fn base(&self) -> &Poly {
        &self.chain[0]
    }

    /// Sign variations at `x`, zeros skipped.
    pub fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<i8> = self.chain.iter().map(|p| p.sign_at(x)).collect();
        sign_variations(&signs)
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

fn sign_variations(signs: &[i8]) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Sturm sequence `(p0, p1, ...)` of the squarefree part of `p`.
pub fn sturm_chain(p: &Poly) -> Result<Vec<Poly>> {
    Ok(SturmChain::new(p)?.chain)
}

/// Number of distinct real roots in `(iv.lo, iv.hi]`.
pub fn count_roots(p: &Poly, iv: &Interval) -> Result<usize> {
    Ok(SturmChain::new(p)?.count(&iv.lo, &iv.hi))
}

/// How far [`isolate_roots_with`] shrinks each isolating interval.
#[derive(Debug, Clone)]
pub enum Resolution {
    /// Stop as soon as each interval holds exactly one root.
    Separate,
    /// Refine until the width is at most the given bound.
    Width(Rational),
}

/// Isolating intervals for every distinct root in `iv`, refined to width
/// `(hi - lo) / 2^40`.
pub fn isolate_roots(p: &Poly, iv: &Interval) -> Result<Vec<Interval>> {
    let eps = iv.width() / Rational::from_integer(num_traits::pow(2.into(), 40));
    isolate_roots_with(p, iv, &Resolution::Width(eps))
}

/// Sturm-guided bisection. Returned intervals are sorted and pairwise
/// disjoint; each is either a single exact root `[r, r]` or an interval whose
/// endpoints are not roots and whose interior holds exactly one root.
pub fn isolate_roots_with(p: &Poly, iv: &Interval, res: &Resolution) -> Result<Vec<Interval>> {
    let sturm = SturmChain::new(p)?;
    let q = sturm.base();
    let mut out = Vec::new();
    if q.degree() == Some(0) {
        return Ok(out);
    }
    if q.sign_at(&iv.lo) == 0 {
        out.push(Interval::point(iv.lo.clone()));
    }
    let total = sturm.count(&iv.lo, &iv.hi);
    split(&sturm, iv.lo.clone(), iv.hi.clone(), total, res, &mut out);
    Ok(out)
}

fn split(
    sturm: &SturmChain,
    lo: Rational,
    hi: Rational,
    count: usize,
    res: &Resolution,
    out: &mut Vec<Interval>,
) {
    match count {
        0 => {}
        1 => out.push(refine(sturm, lo, hi, res)),
        _ => {
            let mid = midpoint(&lo, &hi);
            let left = sturm.count(&lo, &mid);
            split(sturm, lo, mid.clone(), left, res, out);
            split(sturm, mid, hi, count - left, res, out);
        }
    }
}

/// Shrinks `(lo, hi]`, known to hold one root, to a conforming interval.
fn refine(sturm: &SturmChain, mut lo: Rational, mut hi: Rational, res: &Resolution) -> Interval {
    let q = sturm.base();
    loop {
        if q.sign_at(&hi) == 0 {
            return Interval::point(hi);
        }
        let narrow = match res {
            Resolution::Separate => true,
            Resolution::Width(w) => &(&hi - &lo) <= w,
        };
        if narrow && q.sign_at(&lo) != 0 {
            return Interval { lo, hi };
        }
        let mid = midpoint(&lo, &hi);
        if q.sign_at(&mid) == 0 {
            return Interval::point(mid);
        }
        if sturm.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Points of `iv` hitting every maximal region where `p` has constant sign:
/// both endpoints plus one point strictly inside each gap between roots.
/// Returned in increasing order.
pub fn sign_samples(p: &Poly, iv: &Interval) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 || iv.is_point() {
        let mut pts = vec![iv.lo.clone()];
        if !iv.is_point() {
            pts.push(iv.hi.clone());
        }
        return pts;
    }
    let roots = isolate_roots_with(p, iv, &Resolution::Separate).expect("nonzero polynomial");
    let mut pts = vec![iv.lo.clone()];
    let mut prev_hi = iv.lo.clone();
    for r in &roots {
        pts.push(midpoint(&prev_hi, &r.lo));
        if r.is_point() {
            pts.push(r.lo.clone());
        }
        prev_hi = r.hi.clone();
    }
    pts.push(midpoint(&prev_hi, &iv.hi));
    pts.push(iv.hi.clone());
    pts.dedup();
    pts
}

/// Outcome of an exact nonnegativity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nonneg {
    Nonneg,
    /// Leftmost sampled point where the value is strictly negative.
    Witness(Rational),
}

impl Nonneg {
    pub fn is_nonneg(&self) -> bool {
        matches!(self, Nonneg::Nonneg)
    }
}

/// Decides `p(x) >= 0` for all `x` in `iv`.
pub fn nonneg_on_interval(p: &Poly, iv: &Interval) -> Nonneg {
    if p.is_zero() {
        return Nonneg::Nonneg;
    }
    sign_samples(p, iv)
        .into_iter()
        .find(|x| p.eval(x).is_negative())
        .map_or(Nonneg::Nonneg, Nonneg::Witness)
}

/// A rational strictly between `lo` and `hi` with small denominator, used
/// where any interior point will do.
pub fn simple_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    let mut den = num_bigint::BigInt::from(1);
    loop {
        let d = Rational::from_integer(den.clone());
        let candidate = (lo * &d).floor() + Rational::from_integer(1.into());
        let x = candidate / &d;
        if &x < hi && &x > lo {
            return x;
        }
        den *= 2;
        if den > num_bigint::BigInt::from(1u64 << 62) {
            return midpoint(lo, hi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational::{int, ratio};

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(int(lo), int(hi)).unwrap()
    }

    #[test]
    fn known_chain() {
        let chain = sturm_chain(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(
            chain,
            vec![Poly::from_ints(&[-2, 0, 1]), Poly::from_ints(&[0, 2]), Poly::from_ints(&[2])]
        );
        let s = SturmChain::new(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(s.variations(&int(-2)) - s.variations(&int(2)), 2);
    }

    #[test]
    fn multiplicity_collapsed() {
        let s = SturmChain::new(&Poly::from_ints(&[1, -2, 1])).unwrap();
        assert_eq!(s.count(&int(-5), &int(5)), 1);
    }

    #[test]
    fn counts() {
        assert_eq!(count_roots(&Poly::from_ints(&[0, -1, 0, 1]), &iv(-2, 2)).unwrap(), 3);
        assert_eq!(count_roots(&Poly::from_ints(&[-2, 0, 1]), &iv(0, 2)).unwrap(), 1);
        assert_eq!(count_roots(&Poly::from_ints(&[1, 0, 1]), &iv(-10, 10)).unwrap(), 0);
        assert_eq!(count_roots(&Poly::from_ints(&[0, -1, 0, 1]), &iv(-1, 1)).unwrap(), 2);
        assert!(count_roots(&Poly::zero(), &iv(0, 1)).is_err());
        assert!(sturm_chain(&Poly::zero()).is_err());
    }

    #[test]
    fn isolates_sqrt2() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let roots = isolate_roots(&p, &iv(0, 2)).unwrap();
        assert_eq!(roots.len(), 1);
        let r = &roots[0];
        assert!(r.width() <= ratio(2, 1) / Rational::from_integer(num_traits::pow(2.into(), 40)));
        assert!(p.eval(&r.lo) < int(0) && p.eval(&r.hi) > int(0));
    }

    #[test]
    fn isolates_rational_root_exactly_or_bracketed() {
        let p = Poly::new(vec![ratio(-1, 2), int(1)]);
        let roots = isolate_roots(&p, &iv(0, 1)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].contains(&ratio(1, 2)));
    }

    #[test]
    fn isolates_quadratic_pair() {
        // 6x^2 - 24x + 22 has roots 2 +- sqrt(3)/3
        let p = Poly::from_ints(&[22, -24, 6]);
        let roots = isolate_roots(&p, &iv(1, 3)).unwrap();
        assert_eq!(roots.len(), 2);
        let lo = 2.0 - 3f64.sqrt() / 3.0;
        let hi = 2.0 + 3f64.sqrt() / 3.0;
        for (r, want) in roots.iter().zip([lo, hi]) {
            let (a, b) = (crate::to_f64(&r.lo), crate::to_f64(&r.hi));
            assert!(a <= want + 1e-12 && want - 1e-12 <= b);
        }
    }

    #[test]
    fn endpoint_roots_are_separated() {
        // roots 0 and 1 sit on the interval ends and at a bisection point
        let p = Poly::from_ints(&[0, -1, 1]);
        let roots = isolate_roots(&p, &iv(0, 1)).unwrap();
        assert_eq!(roots, vec![Interval::point(int(0)), Interval::point(int(1))]);
        let roots = isolate_roots(&Poly::from_ints(&[0, -1, 0, 1]), &iv(-1, 1)).unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn nonneg_cases() {
        assert_eq!(nonneg_on_interval(&Poly::from_ints(&[1, -2, 1]), &iv(0, 2)), Nonneg::Nonneg);
        match nonneg_on_interval(&Poly::from_ints(&[-1, 1]), &iv(0, 2)) {
            Nonneg::Witness(x) => assert!(Poly::from_ints(&[-1, 1]).eval(&x) < int(0)),
            other => panic!("{other:?}"),
        }
        let p = Poly::from_ints(&[-2, 3, -1]);
        match nonneg_on_interval(&p, &iv(0, 3)) {
            Nonneg::Witness(x) => {
                assert!(p.eval(&x) < int(0));
                assert!((x >= int(0) && x < int(1)) || (x > int(2) && x <= int(3)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(nonneg_on_interval(&Poly::zero(), &iv(0, 1)), Nonneg::Nonneg);
        // touches zero inside without crossing
        let sq = &Poly::from_ints(&[-1, 0, 3]) * &Poly::from_ints(&[-1, 0, 3]);
        assert_eq!(nonneg_on_interval(&sq, &iv(-1, 1)), Nonneg::Nonneg);
    }

    #[test]
    fn simple_between_is_strict() {
        let x = simple_between(&ratio(1, 3), &ratio(1, 2));
        assert!(x > ratio(1, 3) && x < ratio(1, 2));
        assert_eq!(simple_between(&int(0), &int(5)), int(1));
    }
}
