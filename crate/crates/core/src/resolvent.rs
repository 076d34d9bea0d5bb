//! Schwartz test functions, resolvent-series evaluation with residual
//! checks, and the spectral-witness construction.
//!
//! The witness construction replays the inverse-orbit argument numerically:
//! it builds the points x_k, the interval J₀ and the orbit y_m at which any
//! solution f of f∘φ − λf = g is forced to take the values −λ^{−m−1}, which
//! do not decay when |λ| ≤ 1.

use crate::classify::fixed_points;
use crate::error::Error;
use crate::map_grid;
use crate::poly::{iterate, rational_to_f64, Poly};
use crate::roots::{compare_points, isolate_real_roots, sign_at, Sign};
use crate::Result;
use num::complex::Complex64;
use std::cmp::Ordering;

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

/// Rapidly decreasing (or compactly supported) test functions with evaluable
/// derivatives up to order 4.
#[derive(Debug, Clone)]
pub enum SchwartzTestFunction {
    Gaussian { center: f64, width: f64 },
    HermiteGaussian { order: u32 },
    Bump { a: f64, b: f64 },
}

impl SchwartzTestFunction {
    pub fn gaussian() -> Self {
        SchwartzTestFunction::Gaussian {
            center: 0.0,
            width: 1.0,
        }
    }

    /// Upper bound for sup|g| used by tail estimates.
    pub fn sup_bound(&self) -> f64 {
        match self {
            SchwartzTestFunction::Gaussian { .. } | SchwartzTestFunction::Bump { .. } => 1.0,
            SchwartzTestFunction::HermiteGaussian { order } => {
                let mut m: f64 = 0.0;
                for i in 0..=4000 {
                    let x = -10.0 + i as f64 * 0.005;
                    m = m.max(hermite(*order, x).abs() * (-x * x).exp());
                }
                m * 1.01
            }
        }
    }
}

/// Physicists' Hermite polynomial H_n(x).
fn hermite(n: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * (k as f64) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn bump_raw(a: f64, b: f64, x: f64) -> f64 {
    if x <= a || x >= b {
        return 0.0;
    }
    let mid = 0.5 * (b - a);
    // normalised so the midpoint value is 1
    ((1.0 / (mid * mid)) - 1.0 / ((x - a) * (b - x))).exp()
}

/// Evaluate g or one of its first four derivatives at x.
pub fn evaluate_test_function(g: &SchwartzTestFunction, x: f64, d: usize) -> Result<f64> {
    if d > 4 {
        return Err(Error::MissingDerivative(d));
    }
    Ok(match g {
        SchwartzTestFunction::Gaussian { center, width } => {
            let u = (x - center) / width;
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            sign * hermite(d as u32, u) * (-u * u).exp() / width.powi(d as i32)
        }
        SchwartzTestFunction::HermiteGaussian { order } => {
            // d/dx [H_k e^{−x²}] = −H_{k+1} e^{−x²}
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            sign * hermite(order + d as u32, x) * (-x * x).exp()
        }
        SchwartzTestFunction::Bump { a, b } => {
            if d == 0 {
                bump_raw(*a, *b, x)
            } else {
                let h = 1e-4 * (b - a);
                let f = |t: f64| bump_raw(*a, *b, t);
                match d {
                    1 => (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h))
                        / (12.0 * h),
                    2 => (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h)
                        - f(x - 2.0 * h))
                        / (12.0 * h * h),
                    3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h))
                        / (2.0 * h * h * h),
                    _ => (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h)
                        + f(x - 2.0 * h))
                        / (h * h * h * h),
                }
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Grid functions and the resolvent series
// ---------------------------------------------------------------------------

/// Complex-valued function sampled on a strictly increasing grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    /// Value at an exact node, if x is one.
    fn at_node(&self, x: f64) -> Option<Complex64> {
        let idx = self
            .grid
            .partition_point(|&t| t < x - 1e-12 * (1.0 + x.abs()));
        if idx < self.grid.len() && (self.grid[idx] - x).abs() <= 1e-12 * (1.0 + x.abs()) {
            Some(self.values[idx])
        } else {
            None
        }
    }
}

/// Uniform grid helper: n points on [−l, l].
pub fn uniform_grid(l: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -l + 2.0 * l * i as f64 / (n - 1) as f64)
        .collect()
}

/// Threshold beyond which |φ(x)| > |x|, hence orbits escape monotonically:
/// any bound on the real roots of (φ−x)(φ+x) works since the product has
/// positive leading coefficient for deg ≥ 2.
fn escape_threshold(phi: &Poly) -> f64 {
    let minus = phi - &Poly::x();
    let plus = phi + &Poly::x();
    let b = rational_to_f64(&minus.cauchy_root_bound())
        .max(rational_to_f64(&plus.cauchy_root_bound()));
    b + 1.0
}

/// Truncated resolvent series f = −Σ_k λ^{−k−1} g∘φ_k evaluated on the
/// given grid augmented with the in-range points of φ(grid), so that the
/// residual check hits exact nodes. Returns the grid function and the
/// largest truncation index m* used.
pub fn resolvent_apply(
    phi: &Poly,
    lambda: Complex64,
    g: &SchwartzTestFunction,
    grid: &[f64],
    tol: f64,
) -> Result<(GridFunction, usize)> {
    if lambda.norm() == 0.0 {
        return Err(Error::HypothesisViolation("lambda must be nonzero".into()));
    }
    let lo = grid.first().copied().unwrap_or(0.0);
    let hi = grid.last().copied().unwrap_or(0.0);
    let mut nodes: Vec<f64> = grid.to_vec();
    for &x in grid {
        let y = phi.eval_f64(x);
        if y.is_finite() && y >= lo && y <= hi {
            nodes.push(y);
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + a.abs()));

    let supg = g.sup_bound();
    let escape = escape_threshold(phi);
    let modulus = lambda.norm();
    let cap = 200usize;

    let per_point = map_grid(&nodes, |&x0| -> Result<(Complex64, usize)> {
        let inv = lambda.inv();
        let mut pow = inv; // λ^{−k−1}
        let mut sum = Complex64::new(0.0, 0.0);
        let mut x = x0;
        let mut used = 0usize;
        let mut calm = 0usize;
        let mut prev_abs = f64::INFINITY;
        let mut history: Vec<f64> = Vec::with_capacity(cap);
        for k in 0..cap {
            let gv = evaluate_test_function(g, x, 0)?;
            sum -= pow * gv;
            used = k + 1;
            history.push(sum.norm());
            if k >= 10 {
                let old = history[k - 10];
                if old > 1.0 && history[k] > 10.0 * old {
                    return Err(Error::Divergence {
                        from: old,
                        to: history[k],
                        terms: k,
                    });
                }
            }
            // geometric tail bound for |λ| > 1
            if modulus > 1.0 && supg * pow.norm() / (modulus - 1.0) < tol {
                break;
            }
            // escaped orbit: modulus growing beyond the no-return
            // threshold, and g already negligible
            if x.abs() > escape && x.abs() >= prev_abs && gv.abs() < tol * 1e-2 {
                calm += 1;
                if calm >= 3 {
                    break;
                }
            } else {
                calm = 0;
            }
            prev_abs = x.abs();
            x = phi.eval_f64(x);
            if !x.is_finite() {
                break;
            }
            pow *= inv;
        }
        Ok((sum, used))
    });

    let mut values = Vec::with_capacity(nodes.len());
    let mut m_star = 0usize;
    for r in per_point {
        let (v, used) = r?;
        values.push(v);
        m_star = m_star.max(used);
    }
    Ok((GridFunction { grid: nodes, values }, m_star))
}

/// Cubic Lagrange interpolation of f at y, with a crude error estimate
/// (distance to the linear interpolant).
fn interpolate(f: &GridFunction, y: f64) -> (Complex64, f64) {
    let n = f.grid.len();
    let idx = f.grid.partition_point(|&t| t <= y).min(n - 1).max(1);
    let i1 = idx - 1;
    let lo = i1.saturating_sub(1).min(n - 4);
    let xs = &f.grid[lo..lo + 4];
    let vs = &f.values[lo..lo + 4];
    let mut cubic = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        let mut w = 1.0;
        for k in 0..4 {
            if k != j {
                w *= (y - xs[k]) / (xs[j] - xs[k]);
            }
        }
        cubic += vs[j] * w;
    }
    let (xa, xb) = (f.grid[i1], f.grid[idx]);
    let t = (y - xa) / (xb - xa);
    let linear = f.values[i1] * (1.0 - t) + f.values[idx] * t;
    (cubic, (cubic - linear).norm())
}

fn lookup(f: &GridFunction, y: f64, tol: f64) -> Result<Complex64> {
    if let Some(v) = f.at_node(y) {
        return Ok(v);
    }
    let (lo, hi) = (f.grid[0], *f.grid.last().unwrap());
    if y < lo || y > hi {
        // outside the grid: rely on Schwartz decay, but only if f is
        // already negligible at the nearest boundary
        let edge = if y < lo {
            f.values[0]
        } else {
            *f.values.last().unwrap()
        };
        if edge.norm() < tol {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::GridTooCoarse {
            estimate: edge.norm(),
            tol,
        });
    }
    let (v, est) = interpolate(f, y);
    if est > 100.0 * tol {
        return Err(Error::GridTooCoarse { estimate: est, tol });
    }
    Ok(v)
}

/// Max over the grid of |f(φ(x)) − λ f(x) − g(x)|.
pub fn residual(
    phi: &Poly,
    lambda: Complex64,
    f: &GridFunction,
    g: &SchwartzTestFunction,
    grid: &[f64],
    tol: f64,
) -> Result<f64> {
    let per_point = map_grid(grid, |&x| -> Result<f64> {
        let fx = match f.at_node(x) {
            Some(v) => v,
            None => lookup(f, x, tol)?,
        };
        let fy = lookup(f, phi.eval_f64(x), tol)?;
        let gv = evaluate_test_function(g, x, 0)?;
        Ok((fy - lambda * fx - gv).norm())
    });
    let mut max = 0.0f64;
    for r in per_point {
        max = max.max(r?);
    }
    Ok(max)
}

// ---------------------------------------------------------------------------
// Inverse orbits and the spectral witness
// ---------------------------------------------------------------------------

/// Solve φ(x) = target by bisection inside [lo, hi].
fn bisect(phi: &Poly, target: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let h = |x: f64| phi.eval_f64(x) - target;
    let (mut flo, fhi) = (h(lo), h(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            message: "no sign change over bracket".into(),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e-14 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let fm = h(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Backward orbit: x_k solves φ(x_k) = x_{k−1}, found by bisection in the
/// bracket, to 1e−14 relative width.
pub fn inverse_orbit(phi: &Poly, x0: f64, m: usize, bracket: (f64, f64)) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(m);
    let mut target = x0;
    for _ in 0..m {
        let x = bisect(phi, target, bracket.0, bracket.1)?;
        out.push(x);
        target = x;
    }
    Ok(out)
}

/// Which branch of the fixed-point argument produced the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    /// Increasing to +∞: inverse orbit of φ itself.
    Direct,
    /// Even degree, leading coefficient negative: constructed for the
    /// reflection −φ(−x) and mapped back through x ↦ −x.
    Reflected,
    /// Odd degree, leading coefficient negative: inverse orbit of φ∘φ,
    /// forced values −λ^{−2m−1}.
    SecondIterate,
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub lambda: Complex64,
    pub case: WitnessCase,
    pub fixed_point: f64,
    pub x_k: Vec<f64>,
    pub y_m: Vec<f64>,
    pub candidate_values: Vec<Complex64>,
    pub divergence_flag: bool,
}

/// δ > 0 such that θ′ has no zero in (a, a+δ]: half the gap to the nearest
/// critical point above a, capped at 1.
fn derivative_gap(theta: &Poly, a: &crate::roots::AlgebraicPoint) -> Result<f64> {
    let af = a.to_f64();
    let mut delta = 1.0f64;
    for c in isolate_real_roots(&theta.derivative(1))? {
        if compare_points(&c, a) == Ordering::Greater {
            delta = delta.min(0.5 * (c.to_f64() - af));
        }
    }
    if delta <= 0.0 {
        return Err(Error::Geometry(
            "no room above the fixed point before the next critical point".into(),
        ));
    }
    Ok(delta)
}

/// Numerical enactment of why every 0 < |λ| ≤ 1 lies in the spectrum when φ
/// has fixed points: builds the inverse-orbit points and the values any
/// solution of the resolvent equation is forced to take.
pub fn spectral_witness(phi: &Poly, lambda: Complex64, m_max: usize) -> Result<WitnessReport> {
    let modulus = lambda.norm();
    if modulus == 0.0 || modulus > 1.0 + 1e-12 {
        return Err(Error::HypothesisViolation(
            "witness construction needs 0 < |lambda| <= 1".into(),
        ));
    }
    let deg = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if deg < 2 {
        return Err(Error::UnsupportedDegree {
            degree: deg,
            message: "witness construction needs degree >= 2".into(),
        });
    }
    let fps = fixed_points(phi)?;
    if fps.is_empty() {
        return Err(Error::NoRealFixedPoint(
            "the symbol has no real fixed point".into(),
        ));
    }
    let leading_positive = phi
        .leading()
        .map(|l| num::Signed::is_positive(l))
        .unwrap_or(false);

    if leading_positive {
        return witness_direct(phi, lambda, m_max, WitnessCase::Direct, 1, false);
    }
    if deg % 2 == 0 {
        let refl = crate::classify::reflect(phi);
        return witness_direct(&refl, lambda, m_max, WitnessCase::Reflected, 1, true);
    }
    witness_second_iterate(phi, lambda, m_max)
}

/// Core construction for a symbol θ that increases to +∞: a is its largest
/// fixed point, δ keeps θ monotone, x_k and y_m are inverse orbits, and the
/// forced values are −λ^{−em−1} with e the iterate step. `mirror` maps the
/// reported points back through x ↦ −x for the reflected case.
fn witness_direct(
    theta: &Poly,
    lambda: Complex64,
    m_max: usize,
    case: WitnessCase,
    step: u32,
    mirror: bool,
) -> Result<WitnessReport> {
    let fps = fixed_points(theta)?;
    let a = &fps.last().expect("nonempty fixed point set").point;
    let af = a.to_f64();
    let delta = derivative_gap(theta, a)?;
    let x0 = af + 0.5 * delta;

    let x_k = {
        let mut out = vec![x0];
        out.extend(inverse_orbit(theta, x0, m_max, (af, x0))?);
        out
    };
    let y0 = 0.5 * (x_k[0] + x_k[1]);
    let mut y_m = vec![y0];
    y_m.extend(inverse_orbit(theta, y0, m_max, (af, x0))?);

    let inv = lambda.inv();
    let mut candidate_values = Vec::with_capacity(m_max + 1);
    // f(y_m) = −λ^{−(step·m)−1}
    for m in 0..=m_max {
        let mut v = inv;
        for _ in 0..(step * m as u32) {
            v *= inv;
        }
        candidate_values.push(-v);
    }
    let maybe_mirror = |v: Vec<f64>| -> Vec<f64> {
        if mirror {
            v.into_iter().map(|t| -t).collect()
        } else {
            v
        }
    };
    Ok(WitnessReport {
        lambda,
        case,
        fixed_point: if mirror { -af } else { af },
        x_k: maybe_mirror(x_k),
        y_m: maybe_mirror(y_m),
        candidate_values,
        divergence_flag: lambda.norm() <= 1.0 + 1e-12,
    })
}

/// Odd degree with negative leading coefficient: run the construction on
/// φ∘φ, shrinking δ further so that φ maps (a, a+δ] strictly below a.
fn witness_second_iterate(phi: &Poly, lambda: Complex64, m_max: usize) -> Result<WitnessReport> {
    let theta = iterate(phi, 2)?;
    let fps2 = fixed_points(&theta)?;
    let a = &fps2.last().expect("odd degree always has fixed points").point;
    let af = a.to_f64();
    let mut delta = derivative_gap(&theta, a)?;
    // keep φ below the fixed point on (a, a+δ]
    let disp = phi - &Poly::x();
    let phi_fixes_a = sign_at(&disp, a) == Sign::Zero;
    for _ in 0..200 {
        let edge = phi.eval_f64(af + delta);
        if edge < af || (phi_fixes_a && edge < af + 1e-15) {
            break;
        }
        delta *= 0.5;
    }
    if phi.eval_f64(af + delta) >= af && !phi_fixes_a {
        return Err(Error::Geometry(
            "could not push the interval below the fixed point".into(),
        ));
    }
    let x0 = af + 0.5 * delta;
    let x_k = {
        let mut out = vec![x0];
        out.extend(inverse_orbit(&theta, x0, m_max, (af, x0))?);
        out
    };
    let y0 = 0.5 * (x_k[0] + x_k[1]);
    let mut y_m = vec![y0];
    y_m.extend(inverse_orbit(&theta, y0, m_max, (af, x0))?);

    let inv = lambda.inv();
    let mut candidate_values = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let mut v = inv;
        for _ in 0..(2 * m) {
            v *= inv;
        }
        candidate_values.push(-v);
    }
    Ok(WitnessReport {
        lambda,
        case: WitnessCase::SecondIterate,
        fixed_point: af,
        x_k,
        y_m,
        candidate_values,
        divergence_flag: true,
    })
}
