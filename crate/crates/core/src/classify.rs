//! Fixed-point census and symbol classification.
//!
//! Everything here is exact: fixed points are isolated as algebraic points,
//! multiplicities come from square-free decomposition of φ(x) − x, and the
//! derivative comparisons against 0 and ±1 are Sturm sign queries, never
//! floating-point tests.

use crate::error::Error;
use crate::poly::{rat_int, Poly, Rational};
use crate::roots::{
    compare_points, isolate_real_roots, sign_at, squarefree_decompose, AlgebraicPoint, Sign,
};
use crate::Result;

/// Local behaviour of the iteration x ↦ φ(x) at a real fixed point,
/// determined by |φ′(a)| versus 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    Repelling,
    NeutralPlusOne,
    NeutralMinusOne,
}

/// One real fixed point of a symbol, with its multiplicity as a root of
/// φ(x) − x and exact signs of φ′(a) against the three relevant thresholds.
#[derive(Debug, Clone)]
pub struct FixedPointRecord {
    pub point: AlgebraicPoint,
    pub multiplicity: u32,
    pub deriv_vs_one: Sign,
    pub deriv_vs_minus_one: Sign,
    pub deriv_vs_zero: Sign,
    pub stability: Stability,
}

/// Aggregated classification of a polynomial symbol.
#[derive(Debug, Clone)]
pub struct SymbolClass {
    pub degree: usize,
    pub leading_sign: i8,
    pub degree_is_even: bool,
    pub fixed_points: Vec<FixedPointRecord>,
    pub has_real_fixed_point: bool,
    pub derivative_has_real_zero: bool,
    /// Only meaningful for degree ≥ 2; `false` for affine symbols.
    pub mean_ergodic: bool,
    pub simple_fp_criterion: bool,
}

fn require_degree(phi: &Poly, min: usize) -> Result<usize> {
    let deg = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if deg < min {
        return Err(Error::UnsupportedDegree {
            degree: deg,
            message: format!("operation requires degree >= {min}"),
        });
    }
    Ok(deg)
}

/// All real fixed points of φ, ascending, with exact multiplicities and
/// derivative signs. The identity symbol is rejected (every point is fixed).
pub fn fixed_points(phi: &Poly) -> Result<Vec<FixedPointRecord>> {
    require_degree(phi, 1)?;
    let displacement = phi - &Poly::x();
    if displacement.is_zero() {
        return Err(Error::IdentitySymbol);
    }
    let dphi = phi.derivative(1);
    let d_minus = &dphi - &Poly::constant(rat_int(1));
    let d_plus = &dphi + &Poly::constant(rat_int(1));

    let mut records = Vec::new();
    for (factor, mult) in squarefree_decompose(&displacement)? {
        for point in isolate_real_roots(&factor)? {
            let deriv_vs_one = sign_at(&d_minus, &point);
            let deriv_vs_minus_one = sign_at(&d_plus, &point);
            let deriv_vs_zero = sign_at(&dphi, &point);
            let stability = match (deriv_vs_one, deriv_vs_minus_one) {
                (Sign::Zero, _) => Stability::NeutralPlusOne,
                (_, Sign::Zero) => Stability::NeutralMinusOne,
                // |φ′(a)| < 1 ⟺ φ′(a) − 1 < 0 < φ′(a) + 1
                (Sign::Negative, Sign::Positive) => Stability::Attracting,
                _ => Stability::Repelling,
            };
            records.push(FixedPointRecord {
                point,
                multiplicity: mult,
                deriv_vs_one,
                deriv_vs_minus_one,
                deriv_vs_zero,
                stability,
            });
        }
    }
    records.sort_by(|a, b| compare_points(&a.point, &b.point));
    Ok(records)
}

/// Mean ergodicity of C_φ for deg φ ≥ 2: holds exactly when the degree is
/// even and φ has no real fixed point (equivalently, C_φ is power bounded).
pub fn is_mean_ergodic(phi: &Poly) -> Result<bool> {
    let deg = require_degree(phi, 2)?;
    Ok(deg % 2 == 0 && fixed_points(phi)?.is_empty())
}

/// The reflection ψ(x) = −φ(−x), linearly conjugate to φ via x ↦ −x.
pub fn reflect(phi: &Poly) -> Poly {
    let coeffs: Vec<Rational> = phi
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { -c } else { c.clone() })
        .collect();
    Poly::new(coeffs)
}

/// Direct form of the simple-fixed-point test: some real fixed point a with
/// φ′(a) > 1 and φ⁽ⁿ⁾(a) ≥ 0 for all 2 ≤ n ≤ deg φ.
fn criterion_direct(phi: &Poly, deg: usize, fps: &[FixedPointRecord]) -> bool {
    let higher: Vec<Poly> = (2..=deg).map(|n| phi.derivative(n)).collect();
    fps.iter().any(|fp| {
        fp.deriv_vs_one == Sign::Positive
            && higher.iter().all(|d| sign_at(d, &fp.point) != Sign::Negative)
    })
}

/// Domination form: the largest real fixed point z_N is simple, no real fixed
/// point exceeds it, and (φ(x) − x)/(x − z_N) is positive at z_N. For a
/// simple largest root the quotient's value at z_N is φ′(z_N) − 1 and the
/// quotient has no real root beyond z_N, so the test reduces to exact sign
/// queries at z_N.
fn criterion_dominant(fps: &[FixedPointRecord]) -> bool {
    match fps.last() {
        Some(top) => top.multiplicity == 1 && top.deriv_vs_one == Sign::Positive,
        None => false,
    }
}

/// Sufficient criterion for σ(C_φ) ⊇ ℂ∖{0}: tested at every real fixed point
/// of φ and of the reflection ψ(x) = −φ(−x) (conjugate symbols share their
/// spectrum, and reflection flips the sign pattern of odd derivatives).
pub fn simple_fp_criterion(phi: &Poly) -> Result<bool> {
    let deg = require_degree(phi, 2)?;
    let displacement = phi - &Poly::x();
    if displacement.is_zero() {
        return Err(Error::IdentitySymbol);
    }
    for cand in [phi.clone(), reflect(phi)] {
        let fps = fixed_points(&cand)?;
        if criterion_direct(&cand, deg, &fps) || criterion_dominant(&fps) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Full classification record for a symbol of degree ≥ 1.
pub fn symbol_class(phi: &Poly) -> Result<SymbolClass> {
    let deg = require_degree(phi, 1)?;
    let fps = fixed_points(phi)?;
    let leading_sign = match Sign::of(phi.leading().expect("degree >= 1")) {
        Sign::Positive => 1,
        _ => -1,
    };
    let derivative_has_real_zero = if deg == 1 {
        false
    } else {
        !isolate_real_roots(&phi.derivative(1))?.is_empty()
    };
    let mean_ergodic = if deg >= 2 { is_mean_ergodic(phi)? } else { false };
    let simple_fp = if deg >= 2 { simple_fp_criterion(phi)? } else { false };
    Ok(SymbolClass {
        degree: deg,
        leading_sign,
        degree_is_even: deg % 2 == 0,
        has_real_fixed_point: !fps.is_empty(),
        fixed_points: fps,
        derivative_has_real_zero,
        mean_ergodic,
        simple_fp_criterion: simple_fp,
    })
}
