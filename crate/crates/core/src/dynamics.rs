//! Numerical and semi-exact certification of the iteration lemmas: the
//! squaring-iterate bound, growth certificates for derivatives of iterates,
//! orbit escape reports, and Cesàro-mean boundedness diagnostics.
//!
//! The squaring-iterate search is fully exact (Sturm queries on polynomial
//! inequalities); the growth certificates evaluate derivative recurrences in
//! floating point and report witnesses when no certificate exists.

use crate::classify::fixed_points;
use crate::error::Error;
use crate::map_grid;
use crate::poly::{rational_to_f64, Poly, Rational};
use crate::resolvent::{evaluate_test_function, SchwartzTestFunction};
use crate::roots::{
    count_roots_between, isolate_real_roots, squarefree_decompose, squarefree_part, At,
};
use crate::Result;
use num::{FromPrimitive, One, Signed, Zero};

const N_CAP: u32 = 8;
const Q_CAP: u32 = 16;

// ---------------------------------------------------------------------------
// Sampling grids
// ---------------------------------------------------------------------------

/// Symmetric uniform sampling grid: `points` nodes on [−l, l].
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub l: f64,
    pub points: usize,
}

impl GridSpec {
    /// Default: 401 points on [−L, L] with L = max(4, 2·root bound of
    /// φ(x) − x), so all fixed points and the escape region are covered.
    pub fn default_for(phi: &Poly) -> GridSpec {
        let disp = phi - &Poly::x();
        let bound = if disp.is_zero() {
            0.0
        } else {
            rational_to_f64(&disp.cauchy_root_bound())
        };
        GridSpec {
            l: (2.0 * bound).max(4.0),
            points: 401,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        crate::resolvent::uniform_grid(self.l, self.points)
    }
}

// ---------------------------------------------------------------------------
// Squaring iterate
// ---------------------------------------------------------------------------

/// Nonnegativity of p on all of ℝ, exactly: every real root has even
/// multiplicity and p is positive somewhere.
fn nonnegative_everywhere(p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Ok(true);
    }
    if p.leading().map(|l| l.is_negative()).unwrap_or(false) {
        return Ok(false);
    }
    for (factor, mult) in squarefree_decompose(p)? {
        if mult % 2 == 1 && !isolate_real_roots(&factor)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// p ≥ 0 on the ray [a, +∞) (or (−∞, −a] when `negative_ray`), by Sturm
/// root counting on the open ray plus exact endpoint evaluation.
fn nonnegative_on_ray(p: &Poly, a: &Rational, negative_ray: bool) -> Result<bool> {
    let endpoint = if negative_ray { -a.clone() } else { a.clone() };
    if p.eval(&endpoint).is_negative() {
        return Ok(false);
    }
    let sf = squarefree_part(p)?;
    // remove a root at the endpoint so the Sturm query is well posed
    let mut q = sf;
    while q.eval(&endpoint).is_zero() {
        let lin = Poly::new(vec![-endpoint.clone(), Rational::one()]);
        q = q.div_rem(&lin).0;
    }
    if q.degree().is_none() || q.degree() == Some(0) {
        return Ok(!q.leading().map(|l| l.is_negative()).unwrap_or(false));
    }
    let crossings = if negative_ray {
        count_roots_between(&q, &At::NegInf, &At::Value(&endpoint))
    } else {
        count_roots_between(&q, &At::Value(&endpoint), &At::PosInf)
    };
    if crossings > 0 {
        // sign changes of the square-free part on the ray may still keep p
        // nonnegative if the original roots have even multiplicity; check
        // the parities directly
        for (factor, mult) in squarefree_decompose(p)? {
            if mult % 2 == 0 {
                continue;
            }
            let c = if negative_ray {
                count_roots_between(&factor, &At::NegInf, &At::Value(&endpoint))
            } else {
                count_roots_between(&factor, &At::Value(&endpoint), &At::PosInf)
            };
            if c > 0 {
                return Ok(false);
            }
        }
    }
    // no odd-multiplicity roots past the endpoint: sign is constant there;
    // the sign at ±∞ is decided by the leading coefficient and parity
    let lead_pos = p.leading().map(|l| l.is_positive()).unwrap_or(false);
    let deg = p.degree().unwrap_or(0);
    Ok(if negative_ray {
        if deg % 2 == 0 { lead_pos } else { !lead_pos }
    } else {
        lead_pos
    })
}

/// Nearby rational with small terms, via continued fractions.
fn nice_rational(x: f64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (1.0f64, x.floor());
    let (mut k0, mut k1) = (0.0f64, 1.0f64);
    let mut t = x;
    for _ in 0..40 {
        if (h1 / k1 - x).abs() <= tol {
            return Some(Rational::new(
                num::BigInt::from_f64(h1)?,
                num::BigInt::from_f64(k1)?,
            ));
        }
        let frac = t - t.floor();
        if frac.abs() < 1e-15 {
            break;
        }
        t = 1.0 / frac;
        let a = t.floor();
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if k1 > 1e12 {
            break;
        }
    }
    None
}

/// Exact minimum of ψ when all its critical points are rational; otherwise a
/// certified rational lower bound.
fn certified_min(psi: &Poly) -> Result<Rational> {
    let crit = isolate_real_roots(&psi.derivative(1))?;
    let mut all_rational = true;
    let mut min: Option<Rational> = None;
    let mut numeric = f64::INFINITY;
    for c in &crit {
        numeric = numeric.min(psi.eval_f64(c.to_f64()));
        match c.as_rational() {
            Some(r) => {
                let v = psi.eval(&r);
                min = Some(match min {
                    Some(m) => m.min(v),
                    None => v,
                });
            }
            None => all_rational = false,
        }
    }
    if all_rational {
        if let Some(m) = min {
            return Ok(m);
        }
    }
    // fall back: round the numeric minimum to a nearby small rational, then
    // shave if needed, verifying ψ − a ≥ 0 exactly each time
    let scale = numeric.abs().max(1.0);
    let mut candidates = Vec::new();
    if let Some(r) = nice_rational(numeric, 1e-7 * scale) {
        candidates.push(r);
    }
    for i in 1..=8 {
        if let Some(r) = Rational::from_f64(numeric - scale * 1e-9 * 10f64.powi(i)) {
            candidates.push(r);
        }
    }
    for a in candidates {
        if nonnegative_everywhere(&(psi - &Poly::constant(a.clone())))? {
            return Ok(a);
        }
    }
    Err(Error::HypothesisViolation(
        "could not certify a lower bound for min|psi|".into(),
    ))
}

/// Smallest N ≤ 8 such that ψ = φ_N has no real zeros, no real fixed
/// points, min|ψ| = a > 1, and |ψ(u)| ≥ K·u² exactly on both rays |u| ≥ a.
/// Requires an even-degree symbol without real fixed points.
pub fn find_squaring_iterate(phi: &Poly, k_bound: &Rational) -> Result<(u32, Rational)> {
    if !k_bound.is_positive() {
        return Err(Error::HypothesisViolation("K must be positive".into()));
    }
    let deg = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if deg < 2 || deg % 2 == 1 {
        return Err(Error::HypothesisViolation(
            "squaring iterate needs an even-degree symbol".into(),
        ));
    }
    if !fixed_points(phi)?.is_empty() {
        return Err(Error::HypothesisViolation(
            "squaring iterate needs a symbol without real fixed points".into(),
        ));
    }
    let mut psi = phi.clone();
    for n in 1..=N_CAP {
        let ok = squaring_check(&psi, k_bound)?;
        if let Some(a) = ok {
            return Ok((n, a));
        }
        if n < N_CAP {
            psi = crate::poly::compose(phi, &psi)?;
        }
    }
    Err(Error::IterateCapExceeded {
        cap: N_CAP,
        tried: N_CAP,
    })
}

fn squaring_check(psi: &Poly, k_bound: &Rational) -> Result<Option<Rational>> {
    // no real zeros and no real fixed points
    if !isolate_real_roots(psi)?.is_empty() {
        return Ok(None);
    }
    if !isolate_real_roots(&(psi - &Poly::x()))?.is_empty() {
        return Ok(None);
    }
    // ψ keeps one sign; work with the positive version
    let pos = if psi.coeff(0).is_negative() { -psi } else { psi.clone() };
    let a = certified_min(&pos)?;
    if a <= Rational::one() {
        return Ok(None);
    }
    // ψ − a ≥ 0 everywhere confirms a really is a lower bound of min|ψ|
    if !nonnegative_everywhere(&(&pos - &Poly::constant(a.clone())))? {
        return Ok(None);
    }
    // the ray inequality |ψ(u)| ≥ K u² for |u| ≥ a
    let ku2 = Poly::new(vec![Rational::zero(), Rational::zero(), k_bound.clone()]);
    let gap = &pos - &ku2;
    if nonnegative_on_ray(&gap, &a, false)? && nonnegative_on_ray(&gap, &a, true)? {
        Ok(Some(a))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub x0: f64,
    pub values: Vec<f64>,
    pub escape_index: Option<usize>,
    pub escape_threshold: f64,
}

/// Forward orbit x0, φ(x0), …, φ_m(x0) with overflow propagated to ±∞ and
/// the first index whose magnitude exceeds M recorded.
pub fn orbit(phi: &Poly, x0: f64, m: usize, m_threshold: f64) -> OrbitReport {
    let mut values = Vec::with_capacity(m + 1);
    let mut x = x0;
    let mut escape_index = None;
    for k in 0..=m {
        values.push(x);
        if escape_index.is_none() && x.abs() > m_threshold {
            escape_index = Some(k);
        }
        if k < m {
            x = if x.is_finite() {
                phi.eval_f64(x)
            } else {
                // sign of the limit is decided by the leading term
                let deg = phi.degree().unwrap_or(0);
                let lead = phi.leading().map(|l| rational_to_f64(l)).unwrap_or(0.0);
                let s = if x > 0.0 || deg % 2 == 0 { lead } else { -lead };
                if s >= 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            };
        }
    }
    OrbitReport {
        x0,
        values,
        escape_index,
        escape_threshold: m_threshold,
    }
}

// ---------------------------------------------------------------------------
// Growth certificates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GrowthCertificate {
    pub r: Rational,
    pub c: f64,
    pub q: u32,
    pub n: usize,
    pub m_max: usize,
    pub grid: GridSpec,
}

/// Per-point derivative recurrence: given the value v = φ_m(x) and the
/// derivatives d[j] = φ_m^{(j+1)}(x), advance one iteration using Faà di
/// Bruno with Bell polynomials, all in floating point.
fn advance(phi: &Poly, v: f64, d: &[f64]) -> (f64, Vec<f64>) {
    let n = d.len();
    let next_v = phi.eval_f64(v);
    // outer derivatives φ^{(i)}(v)
    let outer: Vec<f64> = (1..=n).map(|i| phi.derivative(i).eval_f64(v)).collect();
    // Bell recurrence B_{j,i} over the inner derivative list d
    let mut bell = vec![vec![0.0f64; n + 1]; n + 1];
    bell[0][0] = 1.0;
    for j in 1..=n {
        for i in 1..=j {
            let mut acc = 0.0;
            let mut binom = 1.0f64;
            for t in 1..=j - i + 1 {
                // binom = C(j−1, t−1)
                acc += binom * d[t - 1] * bell[j - t][i - 1];
                binom *= (j - t) as f64 / t as f64;
            }
            bell[j][i] = acc;
        }
    }
    let next_d: Vec<f64> = (1..=n)
        .map(|j| (1..=j).map(|i| outer[i - 1] * bell[j][i]).sum())
        .collect();
    (next_v, next_d)
}

/// Per grid point, the samples (|φ_m^{(n)}(x)|, |φ_m(x)|) for m = 1..m_max.
fn derivative_samples(phi: &Poly, n: usize, m_max: usize, xs: &[f64]) -> Vec<Vec<(f64, f64)>> {
    map_grid(xs, |&x| {
        let mut v = x;
        let mut d = vec![0.0; n];
        d[0] = 1.0; // φ_0 = id
        let mut rows = Vec::with_capacity(m_max);
        for _ in 0..m_max {
            let (nv, nd) = advance(phi, v, &d);
            v = nv;
            d = nd;
            rows.push((d[n - 1].abs(), v.abs()));
        }
        rows
    })
}

/// Geometric growth in m at a single sample point: the tail of the ratio
/// sequence is monotone increasing and has gained a factor ≥ 2 over the
/// midpoint.
fn grows_at_point(ratios: &[f64]) -> bool {
    let m = ratios.len();
    if m < 6 || ratios.iter().any(|r| !r.is_finite()) {
        return false;
    }
    let tail = &ratios[m - 4..];
    if !tail.windows(2).all(|w| w[1] >= w[0]) {
        return false;
    }
    ratios[m - 1] > 2.0 * ratios[m / 2 - 1].max(f64::MIN_POSITIVE)
}

/// Search for the smallest q ≤ 16 with |φ_m^{(n)}(x)| ≤ C·r^m·(1+|φ_m(x)|)^q
/// over the sampled grid, fitting C as the max ratio. Fails with witnesses
/// when the ratio keeps growing in m for every q.
pub fn growth_certificate(
    phi: &Poly,
    n: usize,
    r: &Rational,
    m_max: usize,
    grid: &GridSpec,
) -> Result<GrowthCertificate> {
    if n < 1 {
        return Err(Error::HypothesisViolation(
            "derivative order must be at least 1".into(),
        ));
    }
    if r < &Rational::one() {
        return Err(Error::HypothesisViolation("r must be at least 1".into()));
    }
    let xs = grid.nodes();
    let rf = rational_to_f64(r);
    let samples = derivative_samples(phi, n, m_max, &xs);

    // ratios for a fixed q at one sample point, skipping overflowed entries
    let ratios_at = |rows: &[(f64, f64)], q: u32| -> Vec<f64> {
        rows.iter()
            .enumerate()
            .map(|(mi, &(deriv, value))| {
                if deriv.is_finite() && value.is_finite() {
                    deriv / (rf.powi(mi as i32 + 1) * (1.0 + value).powi(q as i32))
                } else {
                    0.0
                }
            })
            .collect()
    };

    for q in 1..=Q_CAP {
        let mut c = 0.0f64;
        let mut growing = false;
        for rows in &samples {
            let ratios = ratios_at(rows, q);
            if grows_at_point(&ratios) {
                growing = true;
                break;
            }
            c = ratios.iter().cloned().fold(c, f64::max);
        }
        if !growing && c.is_finite() {
            return Ok(GrowthCertificate {
                r: r.clone(),
                c: c.max(f64::MIN_POSITIVE),
                q,
                n,
                m_max,
                grid: grid.clone(),
            });
        }
    }
    // no q works: report the offending sample points with their raw
    // derivative magnitudes per iteration
    let mut witnesses: Vec<(usize, f64, f64)> = Vec::new();
    let mut reported = 0;
    for (xi, rows) in samples.iter().enumerate() {
        if reported >= 8 {
            break;
        }
        if grows_at_point(&ratios_at(rows, Q_CAP)) {
            reported += 1;
            for (mi, &(deriv, _)) in rows.iter().enumerate() {
                witnesses.push((mi + 1, xs[xi], deriv));
            }
        }
    }
    Err(Error::CertificateNotFound {
        q_cap: Q_CAP,
        witnesses,
    })
}

// ---------------------------------------------------------------------------
// Cesàro diagnostics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CesaroRow {
    pub n: usize,
    /// sup over the grid of |x^α (T_[n] f)(x)| for each requested α
    pub sup_proxies: Vec<f64>,
    /// finite-difference proxy for sup |(T_[n] f)′|
    pub deriv_proxy: f64,
}

#[derive(Debug, Clone)]
pub struct CesaroReport {
    pub rows: Vec<CesaroRow>,
    /// bounded-trend heuristic: last-third max ≤ 2× first-third max
    pub bounded: bool,
}

/// Discrete seminorm proxies of the Cesàro means T_[n] f = (1/n) Σ_{k≤n}
/// f∘φ_k on a grid. A diagnostic, never a proof.
pub fn cesaro_diagnostic(
    phi: &Poly,
    f: &SchwartzTestFunction,
    grid: &GridSpec,
    n_max: usize,
    alphas: &[u32],
) -> Result<CesaroReport> {
    let xs = grid.nodes();
    // running sums Σ_{k=1}^n f(φ_k(x)) per grid point
    let partial: Vec<Vec<f64>> = map_grid(&xs, |&x| {
        let mut sums = Vec::with_capacity(n_max);
        let mut acc = 0.0;
        let mut t = x;
        for _ in 0..n_max {
            t = if t.is_finite() { phi.eval_f64(t) } else { t };
            let ft = if t.is_finite() {
                evaluate_test_function(f, t, 0).unwrap_or(0.0)
            } else {
                0.0
            };
            acc += ft;
            sums.push(acc);
        }
        sums
    });

    let h = 2.0 * grid.l / (grid.points.max(2) - 1) as f64;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let means: Vec<f64> = partial.iter().map(|s| s[n - 1] / n as f64).collect();
        let sup_proxies = alphas
            .iter()
            .map(|&alpha| {
                xs.iter()
                    .zip(&means)
                    .map(|(&x, &m)| (x.powi(alpha as i32) * m).abs())
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let deriv_proxy = means
            .windows(2)
            .map(|w| ((w[1] - w[0]) / h).abs())
            .fold(0.0f64, f64::max);
        rows.push(CesaroRow {
            n,
            sup_proxies,
            deriv_proxy,
        });
    }
    let magnitude = |row: &CesaroRow| -> f64 {
        row.sup_proxies
            .iter()
            .cloned()
            .fold(row.deriv_proxy, f64::max)
    };
    let third = (n_max / 3).max(1);
    let first = rows[..third].iter().map(magnitude).fold(0.0f64, f64::max);
    let last = rows[n_max - third..]
        .iter()
        .map(magnitude)
        .fold(0.0f64, f64::max);
    let bounded = last <= 2.0 * first + 1e-12;
    Ok(CesaroReport { rows, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{iterate, parse, rat, rat_int};

    fn p(s: &str) -> Poly {
        parse(s).unwrap()
    }

    #[test]
    fn squaring_iterate_examples() {
        let (n, a) = find_squaring_iterate(&p("x^2+1"), &rat_int(1)).unwrap();
        assert_eq!(n, 2);
        assert_eq!(a, rat_int(2));

        let (n, a) = find_squaring_iterate(&p("x^2+2"), &rat_int(1)).unwrap();
        assert_eq!(n, 1);
        assert_eq!(a, rat_int(2));

        assert!(matches!(
            find_squaring_iterate(&p("x^2"), &rat_int(1)),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn squaring_inequality_recheck() {
        // |ψ_{m+1}(t)| ≥ K ψ_m(t)² re-verified by direct subtraction for
        // m = 1, 2 (ψ = φ_2 for φ = x²+1)
        let phi = p("x^2+1");
        let psi = iterate(&phi, 2).unwrap();
        let mut prev = psi.clone();
        for _ in 0..2 {
            let next = crate::poly::compose(&psi, &prev).unwrap();
            let gap = &next - &(&prev * &prev);
            assert!(nonnegative_everywhere(&gap).unwrap());
            prev = next;
        }
    }

    #[test]
    fn squaring_consequence_doubly_exponential() {
        // |ψ_m(t)| > a^(2^(m−1)) at grid samples, a = 2, ψ = (x²+1)_2
        let phi = p("x^2+1");
        let psi = iterate(&phi, 2).unwrap();
        let xs = GridSpec { l: 4.0, points: 401 }.nodes();
        for &x in &xs {
            let mut t = psi.eval_f64(x);
            for m in 1..=5 {
                let bound = 2.0f64.powf(2.0f64.powi(m - 1));
                assert!(t.abs() >= bound * (1.0 - 1e-12) || !t.is_finite(), "m={m}, x={x}");
                t = psi.eval_f64(t);
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let r = orbit(&p("x^2+1"), 0.0, 5, 2.0);
        assert_eq!(&r.values[..5], &[0.0, 1.0, 2.0, 5.0, 26.0]);
        assert_eq!(r.escape_index, Some(3));

        let r = orbit(&p("x^2+1/4"), 0.25, 200, 10.0);
        assert_eq!(r.escape_index, None);
        assert!(r.values.last().unwrap() < &0.5);

        let r = orbit(&p("x+1"), 0.0, 8, 5.0);
        assert_eq!(r.escape_index, Some(6));
    }

    #[test]
    fn orbit_overflow_goes_to_infinity() {
        let r = orbit(&p("x^2+1"), 10.0, 40, 1e6);
        assert!(r.values.last().unwrap().is_infinite());
        assert_eq!(r.escape_index, Some(3));
    }

    #[test]
    fn growth_certificate_examples() {
        let phi = p("x^2+1/4");
        let grid = GridSpec::default_for(&phi);
        let cert = growth_certificate(&phi, 1, &rat_int(2), 12, &grid).unwrap();
        assert!(cert.q <= 4, "q = {}", cert.q);
        assert!(cert.c.is_finite() && cert.c > 0.0);

        // power-bounded case: r = 1 works for x²+1
        let phi = p("x^2+1");
        let cert = growth_certificate(&phi, 1, &rat_int(1), 12, &GridSpec::default_for(&phi)).unwrap();
        assert!(cert.q <= Q_CAP);

        // x² at the repelling fixed point 1: φ_m′(1) = 2^m beats every q
        let phi = p("x^2");
        let err = growth_certificate(&phi, 1, &rat_int(1), 12, &GridSpec::default_for(&phi));
        match err {
            Err(Error::CertificateNotFound { witnesses, .. }) => {
                let at_one: Vec<_> = witnesses
                    .iter()
                    .filter(|(_, x, _)| (x - 1.0).abs() < 1e-9)
                    .collect();
                assert!(!at_one.is_empty(), "expected witnesses at x = 1");
                for (m, _, v) in at_one {
                    assert!((v - 2.0f64.powi(*m as i32)).abs() < 1e-6 * v, "m={m}");
                }
            }
            other => panic!("expected certificate failure, got {other:?}"),
        }
    }

    #[test]
    fn derivative_recurrence_matches_symbolic() {
        // floating recurrence vs expanded iterate polynomials, small cases
        let phi = p("x^2+1/4");
        for m in 1..=4u32 {
            let full = iterate(&phi, m).unwrap();
            let d1 = full.derivative(1);
            let d2 = full.derivative(2);
            for &x in &[-1.25, -0.3, 0.0, 0.4, 0.5, 1.1] {
                let samples = derivative_samples(&phi, 2, m as usize, &[x]);
                let (got_d2, got_v) = samples[0][m as usize - 1];
                assert!((got_v - full.eval_f64(x).abs()).abs() < 1e-9 * (1.0 + got_v));
                assert!((got_d2 - d2.eval_f64(x).abs()).abs() < 1e-7 * (1.0 + got_d2));
                let s1 = derivative_samples(&phi, 1, m as usize, &[x]);
                let (got_d1, _) = s1[0][m as usize - 1];
                assert!((got_d1 - d1.eval_f64(x).abs()).abs() < 1e-8 * (1.0 + got_d1));
            }
        }
    }

    #[test]
    fn product_formula_for_quarter_quadratic() {
        // φ = x² + 1/4: φ_m′(x) = 2^m Π_{j<m} φ_j(x), exactly in rationals
        let phi = p("x^2+1/4");
        for &(num, den) in &[(1i64, 3i64), (-2, 5), (1, 1), (3, 4)] {
            let x = rat(num, den);
            for m in 1..=5u32 {
                let lhs = iterate(&phi, m).unwrap().derivative(1).eval(&x);
                let mut prod = rat_int(1);
                for j in 0..m {
                    prod *= iterate(&phi, j).unwrap().eval(&x);
                }
                let mut pow = rat_int(1);
                for _ in 0..m {
                    pow *= rat_int(2);
                }
                assert_eq!(lhs, pow * prod, "m={m}, x={num}/{den}");
            }
        }
    }

    #[test]
    fn cesaro_trends() {
        let g = SchwartzTestFunction::gaussian();
        // mean ergodic: proxies decay
        let phi = p("x^2+1");
        let rep = cesaro_diagnostic(&phi, &g, &GridSpec::default_for(&phi), 30, &[0, 2]).unwrap();
        assert!(rep.bounded);
        let first = rep.rows.first().unwrap().sup_proxies[0];
        let last = rep.rows.last().unwrap().sup_proxies[0];
        assert!(last < first);

        // shift: bounded means
        let phi = p("x+1");
        let rep = cesaro_diagnostic(&phi, &g, &GridSpec::default_for(&phi), 30, &[0]).unwrap();
        assert!(rep.bounded);
    }
}
