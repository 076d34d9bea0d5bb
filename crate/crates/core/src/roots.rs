//! Exact real root isolation and sign determination.
//!
//! Roots are represented as [`AlgebraicPoint`]s: a square-free defining
//! polynomial together with an isolating rational interval containing exactly
//! one of its real roots. All sign decisions are exact — zero tests go
//! through polynomial gcds, never numeric thresholds.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::poly::{rat, rat_int, rational_to_f64, Poly, Rational};
use crate::{Error, Result};

/// Closed rational interval, `lo ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalQ {
    pub lo: Rational,
    pub hi: Rational,
}

impl IntervalQ {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalQ { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        IntervalQ { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// A real algebraic number: the unique root of `defining` (square-free)
/// inside `isolator`. Isolator endpoints are never roots of `defining`
/// unless the interval is a single rational point.
#[derive(Debug, Clone)]
pub struct AlgebraicPoint {
    defining: Poly,
    isolator: IntervalQ,
}

impl AlgebraicPoint {
    pub fn new(defining: Poly, isolator: IntervalQ) -> Self {
        AlgebraicPoint { defining, isolator }
    }

    pub fn from_rational(r: Rational) -> Self {
        let defining = Poly::new(vec![-&r, Rational::one()]);
        AlgebraicPoint {
            defining,
            isolator: IntervalQ::point(r),
        }
    }

    pub fn defining(&self) -> &Poly {
        &self.defining
    }

    pub fn isolator(&self) -> &IntervalQ {
        &self.isolator
    }

    /// Exact rational value, when the point is rational by construction.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.isolator.is_point() {
            return Some(self.isolator.lo.clone());
        }
        if self.defining.degree() == Some(1) {
            return Some(-self.defining.coeff(0) / self.defining.coeff(1));
        }
        if self.defining.degree() == Some(2) {
            // Quadratic formula when the discriminant is a rational square;
            // the isolator picks out which root this point is.
            let (a, b, c) = (
                self.defining.coeff(2),
                self.defining.coeff(1),
                self.defining.coeff(0),
            );
            let disc = &b * &b - rat_int(4) * &a * &c;
            let s = crate::poly::rational_sqrt(&disc)?;
            for root in [(-&b - &s) / (rat_int(2) * &a), (-&b + &s) / (rat_int(2) * &a)] {
                if self.isolator.lo < root && root < self.isolator.hi {
                    return Some(root);
                }
            }
            return None;
        }
        // Higher-degree defining polynomial: locate the root in floating
        // point, take the simplest rational in a small margin around it, and
        // verify exactly — sound always, complete for moderate denominators.
        let mut lo = rational_to_f64(&self.isolator.lo);
        let mut hi = rational_to_f64(&self.isolator.hi);
        let s_lo = self.defining.eval_f64(lo);
        if !s_lo.is_finite() || !hi.is_finite() || !lo.is_finite() {
            return None;
        }
        for _ in 0..90 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.defining.eval_f64(mid);
            if v == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (v > 0.0) == (s_lo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        use num::FromPrimitive;
        let margin = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        let qlo = Rational::from_f64(lo - margin)?;
        let qhi = Rational::from_f64(hi + margin)?;
        let cand = simplest_in(&qlo, &qhi);
        if self.defining.eval(&cand).is_zero()
            && self.isolator.lo <= cand
            && cand <= self.isolator.hi
        {
            return Some(cand);
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return rational_to_f64(&r);
        }
        let scale = self
            .isolator
            .lo
            .abs()
            .max(self.isolator.hi.abs())
            .max(Rational::one());
        let eps = scale * Rational::new(1.into(), num::BigInt::from(10u64.pow(16)));
        let refined = refine(self, &eps);
        rational_to_f64(&refined.midpoint())
    }
}

// ---------------------------------------------------------------------------
// Sturm sequences
// ---------------------------------------------------------------------------

/// Signed remainder sequence with content removal at each step.
/// Smallest-denominator rational in the closed interval `[lo, hi]`
/// (Stern–Brocot descent).
fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    if lo > hi {
        return simplest_in(hi, lo);
    }
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi, &-lo);
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let f = lo.floor();
    let rec = simplest_in(
        &(Rational::one() / (hi - &f)),
        &(Rational::one() / (lo - &f)),
    );
    f + Rational::one() / rec
}

pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.primitive()];
    let d = p.derivative(1);
    if d.is_zero() {
        return chain;
    }
    chain.push(d.primitive());
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push((-&r).primitive());
    }
}

/// Where to evaluate sign variations.
#[derive(Debug, Clone)]
pub enum At<'a> {
    Value(&'a Rational),
    NegInf,
    PosInf,
}

fn sign_at_point(p: &Poly, at: &At) -> Sign {
    match at {
        At::Value(x) => Sign::of(&p.eval(x)),
        At::PosInf => match p.leading() {
            None => Sign::Zero,
            Some(l) => Sign::of(l),
        },
        At::NegInf => match (p.leading(), p.degree()) {
            (None, _) => Sign::Zero,
            (Some(l), Some(d)) => {
                if d % 2 == 0 {
                    Sign::of(l)
                } else {
                    Sign::of(&-l)
                }
            }
            _ => unreachable!(),
        },
    }
}

fn variations(chain: &[Poly], at: &At) -> usize {
    let mut count = 0;
    let mut last: Option<Sign> = None;
    for p in chain {
        let s = sign_at_point(p, at);
        if s == Sign::Zero {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots of `p` in `(lo, hi]`. Requires `p(lo) ≠ 0`.
pub fn count_roots_between(p: &Poly, lo: &At, hi: &At) -> usize {
    let chain = sturm_chain(p);
    variations(&chain, lo).saturating_sub(variations(&chain, hi))
}

/// Number of distinct real roots of `p` on all of ℝ.
pub fn count_real_roots(p: &Poly) -> usize {
    count_roots_between(p, &At::NegInf, &At::PosInf)
}

/// Distinct roots of `p` strictly inside `(lo, hi)`, with endpoint roots of
/// `p` divided out first so the Sturm count is valid at the endpoints.
fn count_roots_open(p: &Poly, lo: &Rational, hi: &Rational) -> usize {
    let mut q = p.clone();
    while !q.is_zero() && q.eval(lo).is_zero() {
        let (quot, r) = q.div_rem(&Poly::new(vec![-lo, Rational::one()]));
        debug_assert!(r.is_zero());
        q = quot;
    }
    while !q.is_zero() && q.eval(hi).is_zero() {
        let (quot, r) = q.div_rem(&Poly::new(vec![-hi, Rational::one()]));
        debug_assert!(r.is_zero());
        q = quot;
    }
    if q.is_constant() {
        return 0;
    }
    count_roots_between(&q, &At::Value(lo), &At::Value(hi))
        - usize::from(q.eval(hi).is_zero())
}

// ---------------------------------------------------------------------------
// Square-free decomposition (Yun's algorithm)
// ---------------------------------------------------------------------------

/// Writes `p = lead · Π factorᵢ^{mᵢ}` with monic, square-free, pairwise
/// coprime factors, ordered by increasing multiplicity.
pub fn squarefree_decompose(p: &Poly) -> Result<Vec<(Poly, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = p.monic();
    if f.is_constant() {
        return Ok(vec![]);
    }
    let df = f.derivative(1);
    let a = f.gcd(&df);
    let mut b = f.div_rem(&a).0;
    let mut d = &df.div_rem(&a).0 - &b.derivative(1);
    let mut out = Vec::new();
    let mut i = 1u32;
    while !b.is_constant() {
        let g = b.gcd(&d);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.monic(), i));
        }
        b = b.div_rem(&g).0;
        d = &d.div_rem(&g).0 - &b.derivative(1);
        i += 1;
    }
    Ok(out)
}

/// Square-free part of `p`, monic.
pub fn squarefree_part(p: &Poly) -> Result<Poly> {
    let factors = squarefree_decompose(p)?;
    let mut acc = Poly::constant(Rational::one());
    for (f, _) in &factors {
        acc = &acc * f;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Isolation
// ---------------------------------------------------------------------------

/// Picks a subdivision point in `(lo, hi)` that is not a root of `p`.
fn split_point(p: &Poly, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    let mut denom = rat_int(2);
    loop {
        // Try lo + width/2, lo + width/4, lo + 3·width/4, …
        let mut k = Rational::one();
        while k < denom {
            let cand = lo + &width * &k / &denom;
            if !p.eval(&cand).is_zero() {
                return cand;
            }
            k = k + rat_int(2);
        }
        denom = denom * rat_int(2);
    }
}

/// One [`AlgebraicPoint`] per distinct real root of `p`, sorted ascending.
pub fn isolate_real_roots(p: &Poly) -> Result<Vec<AlgebraicPoint>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = squarefree_part(p)?;
    if sf.is_constant() {
        return Ok(vec![]);
    }
    let bound = sf.cauchy_root_bound() + Rational::one();
    let lo = -&bound;
    let hi = bound;
    debug_assert!(!sf.eval(&lo).is_zero() && !sf.eval(&hi).is_zero());
    let chain = sturm_chain(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    // Depth-first, left interval last so results come out ascending.
    while let Some((a, b)) = stack.pop() {
        let n = variations(&chain, &At::Value(&a)) - variations(&chain, &At::Value(&b));
        match n {
            0 => {}
            1 => out.push(AlgebraicPoint::new(sf.clone(), IntervalQ::new(a, b))),
            _ => {
                let m = split_point(&sf, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    Ok(out)
}

/// Shrinks the isolator below `eps` (when it is wider than that) and returns
/// the refined interval; exact rational points collapse to width zero.
pub fn refine(a: &AlgebraicPoint, eps: &Rational) -> IntervalQ {
    assert!(eps.is_positive(), "eps must be positive");
    if let Some(r) = a.as_rational() {
        return IntervalQ::point(r);
    }
    bisect_isolator(a, eps)
}

/// Bisection only — no rational shortcut, so `as_rational` may call it.
fn bisect_isolator(a: &AlgebraicPoint, eps: &Rational) -> IntervalQ {
    let mut lo = a.isolator.lo.clone();
    let mut hi = a.isolator.hi.clone();
    let mut s_lo = Sign::of(&a.defining.eval(&lo));
    while &hi - &lo >= *eps {
        let mid = (&lo + &hi) / rat_int(2);
        let s_mid = Sign::of(&a.defining.eval(&mid));
        if s_mid == Sign::Zero {
            return IntervalQ::point(mid);
        }
        if s_mid == s_lo {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
        }
    }
    IntervalQ::new(lo, hi)
}

/// Replaces the stored isolator by a refined one.
pub fn refined_point(a: &AlgebraicPoint, eps: &Rational) -> AlgebraicPoint {
    AlgebraicPoint::new(a.defining.clone(), refine(a, eps))
}

/// Exact sign of `q` at the algebraic point `a`.
///
/// Zero is decided by `gcd(defining, q)` having the point as a root;
/// otherwise the isolator is bisected until `q` has no root on it, at which
/// point the sign is constant. Guaranteed to terminate.
pub fn sign_at(q: &Poly, a: &AlgebraicPoint) -> Sign {
    if q.is_zero() {
        return Sign::Zero;
    }
    if let Some(r) = a.as_rational() {
        return Sign::of(&q.eval(&r));
    }
    let g = a.defining.gcd(q);
    if !g.is_constant() {
        let s_lo = Sign::of(&g.eval(&a.isolator.lo));
        let s_hi = Sign::of(&g.eval(&a.isolator.hi));
        // g divides the square-free defining polynomial, so a root of g in
        // the isolator must be the point itself and must show a sign change.
        if s_lo != s_hi {
            return Sign::Zero;
        }
    }
    let mut lo = a.isolator.lo.clone();
    let mut hi = a.isolator.hi.clone();
    loop {
        if count_roots_open(q, &lo, &hi) == 0 && !q.eval(&lo).is_zero() && !q.eval(&hi).is_zero() {
            return Sign::of(&q.eval(&lo));
        }
        let mid = split_point(&a.defining, &lo, &hi);
        let s_lo = Sign::of(&a.defining.eval(&lo));
        let s_mid = Sign::of(&a.defining.eval(&mid));
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Total ordering of real algebraic points by their values.
pub fn compare_points(a: &AlgebraicPoint, b: &AlgebraicPoint) -> Ordering {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return x.cmp(&y);
    }
    // A rational point can be tested for equality exactly.
    if let Some(x) = a.as_rational() {
        return match sign_at(&Poly::new(vec![-&x, Rational::one()]), b) {
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Less, // b - x > 0
            Sign::Negative => Ordering::Greater,
        };
    }
    if b.as_rational().is_some() {
        return compare_points(b, a).reverse();
    }
    // Equality: a common root inside both isolators must be both points.
    let g = a.defining.gcd(&b.defining);
    let mut pa = a.clone();
    let mut pb = b.clone();
    loop {
        if pa.isolator.hi < pb.isolator.lo {
            return Ordering::Less;
        }
        if pb.isolator.hi < pa.isolator.lo {
            return Ordering::Greater;
        }
        if !g.is_constant() {
            let lo = pa.isolator.lo.clone().max(pb.isolator.lo.clone());
            let hi = pa.isolator.hi.clone().min(pb.isolator.hi.clone());
            if lo < hi && count_roots_open(&g, &lo, &hi) > 0 {
                return Ordering::Equal;
            }
        }
        let w = pa.isolator.width().min(pb.isolator.width()) / rat_int(4);
        let w = if w.is_zero() { rat(1, 1 << 20) } else { w };
        pa = refined_point(&pa, &w);
        pb = refined_point(&pb, &w);
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    fn p(s: &str) -> Poly {
        parse(s).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let d = squarefree_decompose(&p("(x-1/2)^2")).unwrap();
        assert_eq!(d, vec![(p("x-1/2"), 2)]);

        let d = squarefree_decompose(&p("x^3-x")).unwrap();
        assert_eq!(d, vec![(p("x^3-x"), 1)]);

        // φ(x) - x for φ = x + x³.
        let d = squarefree_decompose(&p("x^3")).unwrap();
        assert_eq!(d, vec![(p("x"), 3)]);
    }

    #[test]
    fn squarefree_product_check() {
        for s in ["3(x-1)^2(x+2)^3x", "x^5", "x^2-1", "-2x^4+x^2"] {
            let q = p(s);
            let d = squarefree_decompose(&q).unwrap();
            let mut acc = Poly::constant(q.leading().unwrap().clone());
            for (f, m) in &d {
                acc = &acc * &f.pow(*m);
            }
            assert_eq!(acc, q, "reconstruction of {s}");
        }
    }

    #[test]
    fn isolate_examples() {
        assert!(isolate_real_roots(&p("x^2+1")).unwrap().is_empty());

        let r = isolate_real_roots(&p("x^2-x+1/4")).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(sign_at(&p("x - 1/2"), &r[0]), Sign::Zero);

        let r = isolate_real_roots(&p("x^3-x")).unwrap();
        assert_eq!(r.len(), 3);
        for (pt, expect) in r.iter().zip([-1i64, 0, 1]) {
            assert_eq!(sign_at(&Poly::new(vec![rat_int(-expect), Rational::one()]), pt), Sign::Zero);
        }
    }

    #[test]
    fn isolation_is_sorted_and_separating() {
        // Roots of p·p' stay separated: no isolator holds two distinct roots.
        let q = p("(x-1)(x+1)(x-3)");
        let prod = &q * &q.derivative(1);
        let pts = isolate_real_roots(&prod).unwrap();
        assert_eq!(pts.len(), 5);
        for w in pts.windows(2) {
            assert_eq!(compare_points(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn refine_examples() {
        let pt = AlgebraicPoint::from_rational(rat(1, 2));
        let i = refine(&pt, &rat(1, 1000));
        assert_eq!(i, IntervalQ::point(rat(1, 2)));

        let sqrt2 = AlgebraicPoint::new(p("x^2-2"), IntervalQ::new(rat_int(1), rat_int(2)));
        let i = refine(&sqrt2, &rat(1, 100));
        assert!(i.width() < rat(1, 100));
        assert!(&i.lo * &i.lo < rat_int(2) && rat_int(2) < &i.hi * &i.hi);

        // eps wider than the current interval: unchanged.
        let i = refine(&sqrt2, &rat_int(5));
        assert_eq!(&i, sqrt2.isolator());
    }

    #[test]
    fn sign_at_examples() {
        // φ' − 1 vanishes at the double fixed point 1/2 of x² + 1/4.
        let phi = p("x^2+1/4");
        let a = AlgebraicPoint::from_rational(rat(1, 2));
        assert_eq!(sign_at(&(&phi.derivative(1) - &Poly::constant(rat_int(1))), &a), Sign::Zero);

        let sqrt2 = AlgebraicPoint::new(p("x^2-2"), IntervalQ::new(rat_int(1), rat_int(2)));
        assert_eq!(sign_at(&Poly::x(), &sqrt2), Sign::Positive);
        assert_eq!(sign_at(&p("x^2-2"), &sqrt2), Sign::Zero);
        assert_eq!(sign_at(&p("x-2"), &sqrt2), Sign::Negative);
    }

    #[test]
    fn sign_at_invariant_under_refinement() {
        let sqrt2 = AlgebraicPoint::new(p("x^2-2"), IntervalQ::new(rat_int(0), rat_int(1000)));
        let fine = refined_point(&sqrt2, &rat(1, 1 << 20));
        for q in ["x-1", "x^3-2x", "x^2-2", "7"] {
            assert_eq!(sign_at(&p(q), &sqrt2), sign_at(&p(q), &fine), "sign of {q}");
        }
    }

    #[test]
    fn sturm_count_matches_grid_scan() {
        // Small deterministic version of the acceptance oracle.
        let q = p("x^4 - 5x^2 + 4"); // roots ±1, ±2
        assert_eq!(count_real_roots(&q), 4);
        assert_eq!(
            count_roots_between(&q, &At::Value(&rat_int(0)), &At::Value(&rat_int(3))),
            2
        );
    }

    #[test]
    fn compare_irrational_points() {
        let sqrt2 = AlgebraicPoint::new(p("x^2-2"), IntervalQ::new(rat_int(1), rat_int(2)));
        let sqrt3 = AlgebraicPoint::new(p("x^2-3"), IntervalQ::new(rat_int(1), rat_int(2)));
        assert_eq!(compare_points(&sqrt2, &sqrt3), Ordering::Less);
        let sqrt2b = AlgebraicPoint::new(p("x^4-4"), IntervalQ::new(rat(5, 4), rat(3, 2)));
        assert_eq!(compare_points(&sqrt2, &sqrt2b), Ordering::Equal);
    }
}
