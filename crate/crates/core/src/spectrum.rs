//! The decision engine: maps a symbol to an exact spectrum descriptor or a
//! certified partial bound, answers membership queries, and powers
//! descriptors through iterates.
//!
//! Every branch is exact rational arithmetic; the engine never guesses. When
//! the classification is not settled by a theorem it returns `Partial` with a
//! certified lower bound and an unknown upper bound.

use crate::classify::{fixed_points, simple_fp_criterion};
use crate::error::Error;
use crate::poly::{iterate, normal_form, rat, rat_int, NormalFormTag, Poly, Rational};
use crate::roots::{count_real_roots, squarefree_part};
use crate::Result;
use num::{One, Signed, Zero};

/// Complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexQ::new(re, Rational::zero())
    }

    pub fn zero() -> Self {
        ComplexQ::real(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |λ|², kept rational so modulus comparisons stay exact.
    pub fn modulus_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, other: &ComplexQ) -> ComplexQ {
        ComplexQ::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn pow(&self, n: u32) -> ComplexQ {
        let mut acc = ComplexQ::real(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Exact subset of ℂ as used by the classification theorems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    OriginOnly,
    FinitePoints(Vec<ComplexQ>),
    UnitCircle,
    ClosedUnitDisc,
    ClosedDiscMinusOrigin,
    FullPlane,
    PlaneMinusOrigin,
    Annulus {
        r_in: Rational,
        r_out: Rational,
        include_in: bool,
        include_out: bool,
    },
    Union(Vec<SetExpr>),
}

impl SetExpr {
    pub fn finite(points: Vec<ComplexQ>) -> SetExpr {
        let mut pts = points;
        pts.sort();
        pts.dedup();
        SetExpr::FinitePoints(pts)
    }

    /// Exact membership test for a rational complex point.
    pub fn member(&self, lambda: &ComplexQ) -> bool {
        match self {
            SetExpr::OriginOnly => lambda.is_zero(),
            SetExpr::FinitePoints(pts) => pts.contains(lambda),
            SetExpr::UnitCircle => lambda.modulus_sq().is_one(),
            SetExpr::ClosedUnitDisc => lambda.modulus_sq() <= Rational::one(),
            SetExpr::ClosedDiscMinusOrigin => {
                !lambda.is_zero() && lambda.modulus_sq() <= Rational::one()
            }
            SetExpr::FullPlane => true,
            SetExpr::PlaneMinusOrigin => !lambda.is_zero(),
            SetExpr::Annulus {
                r_in,
                r_out,
                include_in,
                include_out,
            } => {
                let m = lambda.modulus_sq();
                let lo = r_in * r_in;
                let hi = r_out * r_out;
                let above = if *include_in { m >= lo } else { m > lo };
                let below = if *include_out { m <= hi } else { m < hi };
                above && below
            }
            SetExpr::Union(parts) => parts.iter().any(|p| p.member(lambda)),
        }
    }

    /// Conservative syntactic subset test; `false` means "not certified".
    pub fn subset_of(&self, other: &SetExpr) -> bool {
        use SetExpr::*;
        if self == other || matches!(other, FullPlane) {
            return true;
        }
        match (self, other) {
            (OriginOnly, _) => other.member(&ComplexQ::zero()),
            (FinitePoints(pts), _) => pts.iter().all(|p| other.member(p)),
            (Union(parts), _) => parts.iter().all(|p| p.subset_of(other)),
            (_, Union(parts)) => parts.iter().any(|q| self.subset_of(q)),
            (UnitCircle, ClosedUnitDisc | ClosedDiscMinusOrigin | PlaneMinusOrigin) => true,
            (ClosedDiscMinusOrigin, ClosedUnitDisc | PlaneMinusOrigin) => true,
            (Annulus { r_in, include_in, .. }, PlaneMinusOrigin) => {
                r_in.is_positive() || !include_in
            }
            (Annulus { r_out, .. }, ClosedUnitDisc) => r_out <= &Rational::one(),
            (Annulus { r_in, r_out, include_in, .. }, ClosedDiscMinusOrigin) => {
                (r_in.is_positive() || !include_in) && r_out <= &Rational::one()
            }
            _ => false,
        }
    }

    /// Canonical union: flatten, absorb, merge finite point sets.
    pub fn union(parts: Vec<SetExpr>) -> SetExpr {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                SetExpr::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.iter().any(|p| matches!(p, SetExpr::FullPlane)) {
            return SetExpr::FullPlane;
        }
        // {0} ∪ (punctured set) closes up.
        let has_origin = flat.iter().any(|p| p.member(&ComplexQ::zero()));
        if has_origin {
            for p in flat.iter_mut() {
                match p {
                    SetExpr::PlaneMinusOrigin => *p = SetExpr::FullPlane,
                    SetExpr::ClosedDiscMinusOrigin => *p = SetExpr::ClosedUnitDisc,
                    _ => {}
                }
            }
            if flat.iter().any(|p| matches!(p, SetExpr::FullPlane)) {
                return SetExpr::FullPlane;
            }
        }
        // Merge finite point sets.
        let mut pts = Vec::new();
        flat.retain(|p| match p {
            SetExpr::FinitePoints(ps) => {
                pts.extend(ps.clone());
                false
            }
            _ => true,
        });
        if !pts.is_empty() {
            flat.push(SetExpr::finite(pts));
        }
        // Drop members absorbed by another member.
        let mut keep: Vec<SetExpr> = Vec::new();
        for (i, p) in flat.iter().enumerate() {
            let absorbed = flat
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && p.subset_of(q) && !(q.subset_of(p) && j > i));
            if !absorbed && !keep.contains(p) {
                keep.push(p.clone());
            }
        }
        match keep.len() {
            0 => SetExpr::FinitePoints(Vec::new()),
            1 => keep.pop().unwrap(),
            _ => SetExpr::Union(keep),
        }
    }

    /// Image of the set under λ ↦ λ^N. Every descriptor shape used by the
    /// engine is rotation invariant or finite, so the image stays in the
    /// algebra.
    pub fn power(&self, n: u32) -> SetExpr {
        match self {
            SetExpr::FinitePoints(pts) => {
                SetExpr::finite(pts.iter().map(|p| p.pow(n)).collect())
            }
            SetExpr::Annulus {
                r_in,
                r_out,
                include_in,
                include_out,
            } => {
                let powr = |r: &Rational| -> Rational {
                    let mut acc = Rational::one();
                    for _ in 0..n {
                        acc *= r;
                    }
                    acc
                };
                SetExpr::Annulus {
                    r_in: powr(r_in),
                    r_out: powr(r_out),
                    include_in: *include_in,
                    include_out: *include_out,
                }
            }
            SetExpr::Union(parts) => SetExpr::union(parts.iter().map(|p| p.power(n)).collect()),
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Exact(SetExpr),
    Partial {
        lower: SetExpr,
        upper: Option<SetExpr>,
    },
}

/// Result of the decision engine, with the theorem tags that certified it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumDescriptor {
    pub status: Status,
    pub provenance: Vec<String>,
}

impl SpectrumDescriptor {
    fn exact(set: SetExpr, tags: &[&str]) -> Self {
        SpectrumDescriptor {
            status: Status::Exact(set),
            provenance: tags.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn partial(lower: SetExpr, upper: Option<SetExpr>, tags: &[&str]) -> Self {
        SpectrumDescriptor {
            status: Status::Partial { lower, upper },
            provenance: tags.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.status, Status::Exact(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

/// 0 ∈ σ(C_φ) exactly when φ′ has a real zero.
pub fn zero_in_spectrum(phi: &Poly) -> Result<bool> {
    let d = phi.derivative(1);
    match d.degree() {
        None | Some(0) => Ok(false),
        Some(_) => Ok(count_real_roots(&squarefree_part(&d)?) > 0),
    }
}

/// True when p has three distinct real roots (p cubic).
fn three_distinct_real_roots(p: &Poly) -> Result<bool> {
    let sf = squarefree_part(p)?;
    Ok(sf.degree() == Some(3) && count_real_roots(&sf) == 3)
}

/// Spectrum of C_φ on the Schwartz space as an exact descriptor where the
/// classification is complete, otherwise a certified partial bound.
pub fn spectrum_of(phi: &Poly) -> Result<SpectrumDescriptor> {
    let deg = phi.degree().ok_or(Error::ZeroPolynomial)?;
    if deg < 1 {
        return Err(Error::UnsupportedDegree {
            degree: deg,
            message: "spectrum classification requires degree >= 1".into(),
        });
    }
    if phi.is_identity() {
        return Ok(SpectrumDescriptor::exact(
            SetExpr::finite(vec![ComplexQ::real(rat_int(1))]),
            &["identity"],
        ));
    }

    if deg == 1 {
        let a = phi.coeff(1);
        return Ok(if a == rat_int(1) {
            SpectrumDescriptor::exact(SetExpr::UnitCircle, &["example1a"])
        } else if a == rat_int(-1) {
            SpectrumDescriptor::exact(
                SetExpr::finite(vec![ComplexQ::real(rat_int(-1)), ComplexQ::real(rat_int(1))]),
                &["example1c"],
            )
        } else {
            SpectrumDescriptor::exact(SetExpr::PlaneMinusOrigin, &["example1b"])
        });
    }

    let fps = fixed_points(phi)?;

    if deg % 2 == 0 && fps.is_empty() {
        return Ok(if deg == 2 {
            SpectrumDescriptor::exact(SetExpr::OriginOnly, &["withoutfixedpoints", "grau2a"])
        } else {
            SpectrumDescriptor::exact(SetExpr::OriginOnly, &["withoutfixedpoints"])
        });
    }

    let nf = normal_form(phi);

    if deg == 2 {
        if let NormalFormTag::Quadratic { c } = &nf.tag {
            let quarter = rat(1, 4);
            return Ok(if *c == quarter {
                SpectrumDescriptor::exact(SetExpr::ClosedUnitDisc, &["grau2b"])
            } else {
                // c > 1/4 has no fixed points and was handled above.
                SpectrumDescriptor::exact(SetExpr::FullPlane, &["grau2c"])
            });
        }
        unreachable!("quadratic symbols always produce a quadratic normal form");
    }

    if deg == 3 {
        let leading_positive = phi.leading().map(|l| l.is_positive()).unwrap_or(false);
        if leading_positive {
            return Ok(if fps.iter().any(|f| f.multiplicity == 3) {
                SpectrumDescriptor::exact(SetExpr::ClosedDiscMinusOrigin, &["cubic-positive"])
            } else if zero_in_spectrum(phi)? {
                SpectrumDescriptor::exact(SetExpr::FullPlane, &["cubic-positive", "elementary"])
            } else {
                SpectrumDescriptor::exact(SetExpr::PlaneMinusOrigin, &["cubic-positive"])
            });
        }
        // Negative leading coefficient: canonical form is −L·x³ + A·x + B
        // with L > 0.
        if let NormalFormTag::CubicNeg { a_lin, b_const } = &nf.tag {
            let canon = &nf.canonical;
            let big_l = -canon.coeff(3);
            if b_const.is_zero() {
                return Ok(if *a_lin == rat_int(-1) {
                    SpectrumDescriptor::exact(SetExpr::ClosedDiscMinusOrigin, &["negative-odd"])
                } else if a_lin.is_negative() {
                    SpectrumDescriptor::exact(SetExpr::PlaneMinusOrigin, &["negative-odd"])
                } else {
                    SpectrumDescriptor::exact(SetExpr::FullPlane, &["negative-odd"])
                });
            }
            // B ≠ 0: the three-fixed-points route. Both sign conventions of
            // the auxiliary cubic must have three distinct real fixed
            // points before we certify; otherwise stay partial.
            let aux_neg = Poly::new(vec![
                -b_const.clone(),
                -(a_lin + rat_int(1)),
                Rational::zero(),
                big_l.clone(),
            ]);
            let aux_pos = Poly::new(vec![
                b_const.clone(),
                a_lin - rat_int(1),
                Rational::zero(),
                big_l,
            ]);
            if three_distinct_real_roots(&aux_neg)? && three_distinct_real_roots(&aux_pos)? {
                return Ok(if zero_in_spectrum(phi)? {
                    SpectrumDescriptor::exact(SetExpr::FullPlane, &["cubic-negative", "elementary"])
                } else {
                    SpectrumDescriptor::exact(SetExpr::PlaneMinusOrigin, &["cubic-negative"])
                });
            }
            return partial_lower_bound(phi, &["polynomial_fixed_point", "elementary"]);
        }
        unreachable!("negative cubics always produce a cubic normal form");
    }

    // Degree ≥ 4: try the simple-fixed-point upgrades, else certified
    // partial bound from the fixed-point theorem.
    if simple_fp_criterion(phi)? {
        return exact_from_punctured_plane(phi, &["simplefixedpoint"]);
    }
    let leading_negative = phi.leading().map(|l| l.is_negative()).unwrap_or(false);
    if deg % 2 == 1 && leading_negative {
        let phi2 = iterate(phi, 2)?;
        if simple_fp_criterion(&phi2)? {
            return exact_from_punctured_plane(phi, &["simplefixedpoint", "rem-composition"]);
        }
    }
    partial_lower_bound(phi, &["polynomial_fixed_point", "elementary"])
}

/// ℂ∖{0} ⊆ σ is certified; zero-membership finishes the classification.
fn exact_from_punctured_plane(phi: &Poly, tags: &[&str]) -> Result<SpectrumDescriptor> {
    Ok(if zero_in_spectrum(phi)? {
        let mut t: Vec<&str> = tags.to_vec();
        t.push("elementary");
        SpectrumDescriptor::exact(SetExpr::FullPlane, &t)
    } else {
        SpectrumDescriptor::exact(SetExpr::PlaneMinusOrigin, tags)
    })
}

/// Certified lower bound when no theorem settles the symbol: the punctured
/// closed disc (fixed points exist), the rational derivative values at fixed
/// points, and the origin exactly when φ′ vanishes.
fn partial_lower_bound(phi: &Poly, tags: &[&str]) -> Result<SpectrumDescriptor> {
    let mut parts = vec![SetExpr::ClosedDiscMinusOrigin];
    let dphi = phi.derivative(1);
    let mut extra = Vec::new();
    for fp in fixed_points(phi)? {
        if let Some(a) = fp.point.as_rational() {
            let v = dphi.eval(&a);
            if v.abs() > Rational::one() {
                extra.push(ComplexQ::real(v));
            }
        }
    }
    if !extra.is_empty() {
        parts.push(SetExpr::finite(extra));
    }
    if zero_in_spectrum(phi)? {
        parts.push(SetExpr::OriginOnly);
    }
    Ok(SpectrumDescriptor::partial(
        SetExpr::union(parts),
        None,
        tags,
    ))
}

/// Membership of a rational complex λ in the (possibly partial) descriptor.
pub fn contains(d: &SpectrumDescriptor, lambda: &ComplexQ) -> Membership {
    match &d.status {
        Status::Exact(set) => {
            if set.member(lambda) {
                Membership::In
            } else {
                Membership::Out
            }
        }
        Status::Partial { lower, upper } => {
            if lower.member(lambda) {
                Membership::In
            } else if let Some(up) = upper {
                if !up.member(lambda) {
                    Membership::Out
                } else {
                    Membership::Unknown
                }
            } else {
                Membership::Unknown
            }
        }
    }
}

/// σ(C_{φ_N}) = {λ^N : λ ∈ σ(C_φ)}: descriptor image under the power map.
pub fn spectral_map_iterate(phi: &Poly, n: u32) -> Result<SpectrumDescriptor> {
    if n == 0 {
        return Err(Error::HypothesisViolation(
            "iterate count must be positive".into(),
        ));
    }
    let d = spectrum_of(phi)?;
    let mut provenance = d.provenance.clone();
    provenance.push("spectral-mapping".into());
    Ok(match d.status {
        Status::Exact(set) => SpectrumDescriptor {
            status: Status::Exact(set.power(n)),
            provenance,
        },
        Status::Partial { lower, .. } => SpectrumDescriptor {
            status: Status::Partial {
                lower: lower.power(n),
                upper: None,
            },
            provenance,
        },
    })
}

// ---------------------------------------------------------------------------
// Monotone symbols via declared metadata
// ---------------------------------------------------------------------------

/// Declared facts about a monotone (not necessarily polynomial) symbol.
#[derive(Debug, Clone)]
pub struct MonotoneMeta {
    pub increasing: bool,
    pub identity: bool,
    pub involution: bool,
    /// (location, φ′ at the fixed point), both rational.
    pub fixed_points: Vec<(Rational, Rational)>,
}

/// Certified containments in σ(C_φ) for a monotone symbol, assembled from
/// the declared metadata. Annulus endpoint inclusion follows the statements
/// exactly: attracting fixed points give the open annulus φ′(a) < |λ| < 1,
/// repelling ones give 1 ≤ |λ| < φ′(a), and a critical attracting fixed
/// point upgrades to the closed disc.
pub fn monotone_containments(meta: &MonotoneMeta) -> Result<SetExpr> {
    if meta.identity {
        if meta.involution || !meta.increasing {
            return Err(Error::InconsistentMetadata(
                "the identity is increasing and not an involution".into(),
            ));
        }
        return Ok(SetExpr::finite(vec![ComplexQ::real(rat_int(1))]));
    }
    if meta.increasing {
        if meta.involution {
            return Err(Error::InconsistentMetadata(
                "an increasing non-identity symbol cannot be an involution".into(),
            ));
        }
        if meta.fixed_points.iter().any(|(_, d)| d.is_negative()) {
            return Err(Error::InconsistentMetadata(
                "increasing symbols have nonnegative derivative".into(),
            ));
        }
        let mut parts = vec![SetExpr::UnitCircle];
        for (_, d) in &meta.fixed_points {
            if d.is_zero() {
                parts.push(SetExpr::ClosedUnitDisc);
            } else if d < &Rational::one() {
                parts.push(SetExpr::Annulus {
                    r_in: d.clone(),
                    r_out: Rational::one(),
                    include_in: false,
                    include_out: false,
                });
            } else if d > &Rational::one() {
                parts.push(SetExpr::Annulus {
                    r_in: Rational::one(),
                    r_out: d.clone(),
                    include_in: true,
                    include_out: false,
                });
            }
        }
        return Ok(SetExpr::union(parts));
    }
    // Decreasing: exactly one fixed point, negative derivative there.
    if meta.fixed_points.len() != 1 {
        return Err(Error::InconsistentMetadata(
            "a decreasing symbol has exactly one fixed point".into(),
        ));
    }
    if !meta.fixed_points[0].1.is_negative() {
        return Err(Error::InconsistentMetadata(
            "decreasing symbols have negative derivative".into(),
        ));
    }
    Ok(if meta.involution {
        SetExpr::finite(vec![ComplexQ::real(rat_int(-1)), ComplexQ::real(rat_int(1))])
    } else {
        SetExpr::UnitCircle
    })
}
