//! Exact univariate polynomial arithmetic over the rationals.
//!
//! Everything here is a pure function over immutable values: evaluation,
//! composition, iteration, derivatives, Faà di Bruno assembly via partial
//! Bell polynomials, linear conjugation and normal forms, plus a small
//! expression parser with a canonical formatter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from(BigInt::from(num))
}

/// Resource caps for composition and iteration. Coefficient growth under
/// iteration is doubly exponential, so we fail loudly instead of silently
/// degrading to floats.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum degree of any intermediate or final polynomial.
    pub max_degree: usize,
    /// Total bit budget over all coefficients (numerators plus denominators).
    pub max_coeff_bits: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_degree: 4096,
            max_coeff_bits: 1_000_000,
        }
    }
}

/// Univariate polynomial with exact rational coefficients, index = power.
/// The coefficient vector never has a trailing zero except for the zero
/// polynomial, which is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The identity symbol `x`.
    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_identity(&self) -> bool {
        *self == Poly::x()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// k-th derivative, exact.
    pub fn derivative(&self, k: usize) -> Poly {
        let mut p = self.clone();
        for _ in 0..k {
            if p.coeffs.len() <= 1 {
                return Poly::zero();
            }
            let coeffs = p
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect();
            p = Poly::new(coeffs);
        }
        p
    }

    fn check_caps(&self, caps: &Caps) -> Result<()> {
        if self.coeffs.len() > caps.max_degree + 1 {
            return Err(Error::ResourceExceeded(format!(
                "degree {} exceeds cap {}",
                self.coeffs.len() - 1,
                caps.max_degree
            )));
        }
        let bits: u64 = self
            .coeffs
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum();
        if bits > caps.max_coeff_bits {
            return Err(Error::ResourceExceeded(format!(
                "coefficient size {bits} bits exceeds cap {} bits",
                caps.max_coeff_bits
            )));
        }
        Ok(())
    }

    /// `self^e` with cap checks.
    pub fn pow_capped(&self, e: u32, caps: &Caps) -> Result<Poly> {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
            acc.check_caps(caps)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        self.pow_capped(e, &Caps::default())
            .expect("default caps exceeded")
    }

    /// Square of the 2-norm of the coefficient vector is irrelevant here;
    /// this is the Cauchy root bound `1 + max |a_i / a_n|`.
    pub fn cauchy_root_bound(&self) -> Rational {
        let Some(lead) = self.leading() else {
            return Rational::one();
        };
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = (c / lead).abs();
            if q > m {
                m = q;
            }
        }
        m + Rational::one()
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = q * div + r`, `deg r < deg div`.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.coeffs.len();
        if self.coeffs.len() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len() - dd + 1];
        let lead = div.coeffs.last().unwrap();
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd - 1] / lead;
            if !c.is_zero() {
                for (j, dc) in div.coeffs.iter().enumerate() {
                    let t = dc * &c;
                    rem[i + j] = &rem[i + j] - t;
                }
            }
            quot[i] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    /// Divides out the positive content (keeps the sign pattern). Used to
    /// control coefficient blowup in remainder sequences.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let content = Rational::new(num_gcd, den_lcm);
        self.scale(&(Rational::one() / content))
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    num::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                out[i + j] = &out[i + j] + t;
            }
        }
        Poly::new(out)
    }
}

/// `p(q(x))`, exact, with resource caps.
pub fn compose_capped(p: &Poly, q: &Poly, caps: &Caps) -> Result<Poly> {
    if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
        if dp.saturating_mul(dq) > caps.max_degree {
            return Err(Error::ResourceExceeded(format!(
                "composition degree {} exceeds cap {}",
                dp * dq,
                caps.max_degree
            )));
        }
    }
    let mut acc = Poly::zero();
    for c in p.coeffs.iter().rev() {
        acc = &acc * q;
        acc = &acc + &Poly::constant(c.clone());
        acc.check_caps(caps)?;
    }
    Ok(acc)
}

pub fn compose(p: &Poly, q: &Poly) -> Result<Poly> {
    compose_capped(p, q, &Caps::default())
}

/// `φ_n`, with `φ_0 = x`.
pub fn iterate_capped(p: &Poly, n: u32, caps: &Caps) -> Result<Poly> {
    if let Some(d) = p.degree() {
        if d >= 2 {
            let bits = (n as f64) * (d as f64).log2();
            if bits > (caps.max_degree as f64).log2() + 1e-9 {
                return Err(Error::ResourceExceeded(format!(
                    "iterate degree {d}^{n} exceeds cap {}",
                    caps.max_degree
                )));
            }
        }
    }
    let mut acc = Poly::x();
    for _ in 0..n {
        acc = compose_capped(p, &acc, caps)?;
    }
    Ok(acc)
}

pub fn iterate(p: &Poly, n: u32) -> Result<Poly> {
    iterate_capped(p, n, &Caps::default())
}

// ---------------------------------------------------------------------------
// Linear maps, conjugation and normal forms
// ---------------------------------------------------------------------------

/// The affine map `ℓ(x) = a x + b`, `a ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    a: Rational,
    b: Rational,
}

impl LinearMap {
    pub fn new(a: Rational, b: Rational) -> Self {
        assert!(!a.is_zero(), "linear map must have a != 0");
        LinearMap { a, b }
    }

    pub fn identity() -> Self {
        LinearMap::new(Rational::one(), Rational::zero())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.a * x + &self.b
    }

    pub fn inverse(&self) -> LinearMap {
        let inv_a = Rational::one() / &self.a;
        let b = -(&self.b * &inv_a);
        LinearMap::new(inv_a, b)
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(vec![self.b.clone(), self.a.clone()])
    }
}

/// Conjugate `p` by `ℓ`: returns `ℓ ∘ p ∘ ℓ^{-1}`, the representative of `p`
/// in the coordinate `y = ℓ(x)`. Conjugating twice, by `ℓ` and `ℓ^{-1}`, is
/// the identity.
pub fn linear_conjugate(p: &Poly, l: &LinearMap) -> Poly {
    let inner = compose(p, &l.inverse().as_poly()).expect("conjugation is degree preserving");
    compose(&l.as_poly(), &inner).expect("conjugation is degree preserving")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalFormTag {
    /// Degree one, `a x + b`.
    Affine { a: Rational, b: Rational },
    /// `x² + c`.
    Quadratic { c: Rational },
    /// Depressed cubic with positive leading coefficient, `L x³ + A x + B`.
    CubicPos { a_lin: Rational, b_const: Rational },
    /// Depressed cubic with negative leading coefficient.
    CubicNeg { a_lin: Rational, b_const: Rational },
    General,
}

/// A canonical representative together with the conjugator reaching it:
/// `linear_conjugate(p, conjugator) == canonical` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub tag: NormalFormTag,
    pub conjugator: LinearMap,
    pub canonical: Poly,
}

/// Rational square root when it exists (numerator and denominator both
/// perfect squares).
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// Canonical form under linear conjugation.
///
/// Quadratics land exactly on `x² + c` with `c = a₀a₂ + a₁/2 − a₁²/4`.
/// Cubics are depressed (no quadratic term) and rescaled to `±x³ + Ax + B`
/// when the leading coefficient admits a rational square root; otherwise the
/// rational conjugator reaches `L x³ + Ax + B` and the leading sign is
/// recorded in the tag. The linear coefficient `A` is invariant under the
/// remaining rational rescalings, which is all the spectrum engine needs.
pub fn normal_form(p: &Poly) -> NormalForm {
    let deg = p.degree().unwrap_or(0);
    match deg {
        1 => NormalForm {
            tag: NormalFormTag::Affine {
                a: p.coeff(1),
                b: p.coeff(0),
            },
            conjugator: LinearMap::identity(),
            canonical: p.clone(),
        },
        2 => {
            let (a0, a1, a2) = (p.coeff(0), p.coeff(1), p.coeff(2));
            let c = &a0 * &a2 + &a1 / rat_int(2) - &a1 * &a1 / rat_int(4);
            let conj = LinearMap::new(a2, a1 / rat_int(2));
            let canonical = Poly::new(vec![c.clone(), Rational::zero(), Rational::one()]);
            debug_assert_eq!(linear_conjugate(p, &conj), canonical);
            NormalForm {
                tag: NormalFormTag::Quadratic { c },
                conjugator: conj,
                canonical,
            }
        }
        3 => {
            let (a2, a3) = (p.coeff(2), p.coeff(3));
            // Scale to leading ±1 when that stays rational, otherwise only
            // depress the square term.
            let s = rational_sqrt(&a3.abs()).unwrap_or_else(Rational::one);
            let t = &a2 * &s / (rat_int(3) * &a3);
            let conj = LinearMap::new(s, t);
            let canonical = linear_conjugate(p, &conj);
            debug_assert!(canonical.coeff(2).is_zero());
            let a_lin = canonical.coeff(1);
            let b_const = canonical.coeff(0);
            let tag = if a3.is_positive() {
                NormalFormTag::CubicPos { a_lin, b_const }
            } else {
                NormalFormTag::CubicNeg { a_lin, b_const }
            };
            NormalForm {
                tag,
                conjugator: conj,
                canonical,
            }
        }
        _ => NormalForm {
            tag: NormalFormTag::General,
            conjugator: LinearMap::identity(),
            canonical: p.clone(),
        },
    }
}

// ---------------------------------------------------------------------------
// Faà di Bruno / partial Bell polynomials
// ---------------------------------------------------------------------------

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Partial Bell polynomial `B_{n,j}(x₁, …, x_{n−j+1})` by the standard
/// recurrence `B_{n,j} = Σ_i C(n−1, i−1) x_i B_{n−i, j−1}`.
pub fn bell_partial(n: usize, j: usize, xs: &[Rational]) -> Rational {
    if n == 0 && j == 0 {
        return Rational::one();
    }
    if n == 0 || j == 0 {
        return Rational::zero();
    }
    let mut acc = Rational::zero();
    for i in 1..=(n - j + 1) {
        let sub = bell_partial(n - i, j - 1, xs);
        if sub.is_zero() {
            continue;
        }
        acc = acc + Rational::from(binomial(n - 1, i - 1)) * &xs[i - 1] * sub;
    }
    acc
}

/// Values of `f^{(j)}` for `1 ≤ j ≤ n`, either as polynomials to evaluate at
/// the inner point or as ready-made numbers.
pub enum OuterDerivatives<'a> {
    Polys(&'a [Poly]),
    Values(&'a [Rational]),
}

/// `(f ∘ p)^{(n)}(x)` assembled from partial Bell polynomials of the inner
/// derivatives `p'(x), …, p^{(n−j+1)}(x)`.
pub fn faa_di_bruno_derivative(
    f_derivs: &OuterDerivatives,
    p: &Poly,
    n: usize,
    x: &Rational,
) -> Result<Rational> {
    assert!(n >= 1, "n must be positive");
    let len = match f_derivs {
        OuterDerivatives::Polys(ps) => ps.len(),
        OuterDerivatives::Values(vs) => vs.len(),
    };
    if len < n {
        return Err(Error::MissingDerivative(len + 1));
    }
    let inner = p.eval(x);
    let inner_derivs: Vec<Rational> = (1..=n).map(|i| p.derivative(i).eval(x)).collect();
    let mut acc = Rational::zero();
    for j in 1..=n {
        let fj = match f_derivs {
            OuterDerivatives::Polys(ps) => ps[j - 1].eval(&inner),
            OuterDerivatives::Values(vs) => vs[j - 1].clone(),
        };
        if fj.is_zero() {
            continue;
        }
        acc = acc + fj * bell_partial(n, j, &inner_derivs);
    }
    Ok(acc)
}

/// Convenience wrapper building the outer derivatives from a polynomial `f`.
pub fn faa_di_bruno_poly(f: &Poly, p: &Poly, n: usize, x: &Rational) -> Result<Rational> {
    let derivs: Vec<Poly> = (1..=n).map(|j| f.derivative(j)).collect();
    faa_di_bruno_derivative(&OuterDerivatives::Polys(&derivs), p, n, x)
}

// ---------------------------------------------------------------------------
// Parser and formatter
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>, // token with 1-based column
    pos: usize,
    end_col: usize,
}

impl Lexer {
    fn new(expr: &str) -> Result<Lexer> {
        let mut toks = Vec::new();
        let chars: Vec<char> = expr.chars().collect();
        let mut i = 0;
        let mut var_name: Option<char> = None;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                ' ' | '\t' => {
                    i += 1;
                    continue;
                }
                '+' => toks.push((Tok::Plus, col)),
                '-' | '−' => toks.push((Tok::Minus, col)),
                '*' => toks.push((Tok::Star, col)),
                '/' => toks.push((Tok::Slash, col)),
                '^' => toks.push((Tok::Caret, col)),
                '(' => toks.push((Tok::LParen, col)),
                ')' => toks.push((Tok::RParen, col)),
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i < chars.len() && chars[i] == '.' {
                        return Err(Error::Parse {
                            position: i + 1,
                            message: "decimal literals are not supported; use rationals like 1/4"
                                .into(),
                        });
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push((Tok::Num(s.parse().unwrap()), start + 1));
                    continue;
                }
                c if c.is_alphabetic() => {
                    match var_name {
                        None => var_name = Some(c),
                        Some(v) if v == c => {}
                        Some(v) => {
                            return Err(Error::Parse {
                                position: col,
                                message: format!(
                                    "polynomial must be univariate: saw both '{v}' and '{c}'"
                                ),
                            })
                        }
                    }
                    toks.push((Tok::Var, col));
                }
                _ => {
                    return Err(Error::Parse {
                        position: col,
                        message: format!("unexpected character '{c}'"),
                    })
                }
            }
            i += 1;
        }
        Ok(Lexer {
            toks,
            pos: 0,
            end_col: chars.len() + 1,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, c)| c)
            .unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
}

/// Parses a polynomial expression with operators `+ - * / ^`, parentheses,
/// implicit multiplication (`2x`, `3(x+1)`) and integer or rational literals.
/// `^` is right-associative and requires a constant nonnegative integer
/// exponent; division requires a nonzero constant divisor.
pub fn parse(expr: &str) -> Result<Poly> {
    let mut lx = Lexer::new(expr)?;
    let p = parse_sum(&mut lx)?;
    if lx.peek().is_some() {
        return Err(Error::Parse {
            position: lx.col(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(p)
}

fn parse_sum(lx: &mut Lexer) -> Result<Poly> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let t = parse_term(lx)?;
                acc = &acc + &t;
            }
            Some(Tok::Minus) => {
                lx.next();
                let t = parse_term(lx)?;
                acc = &acc - &t;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Poly> {
    let mut acc = parse_unary(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let u = parse_unary(lx)?;
                acc = &acc * &u;
            }
            Some(Tok::Slash) => {
                let col = lx.col();
                lx.next();
                let u = parse_unary(lx)?;
                if !u.is_constant() {
                    return Err(Error::Parse {
                        position: col,
                        message: "division by a variable is not a polynomial".into(),
                    });
                }
                if u.is_zero() {
                    return Err(Error::Parse {
                        position: col,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.scale(&(Rational::one() / u.coeff(0)));
            }
            // Implicit multiplication: `2x`, `2(x+1)`, `x(x+1)`, `(x+1)(x-1)`.
            Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::LParen) => {
                let u = parse_power(lx)?;
                acc = &acc * &u;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_unary(lx: &mut Lexer) -> Result<Poly> {
    if let Some(Tok::Minus) = lx.peek() {
        lx.next();
        let u = parse_unary(lx)?;
        return Ok(-&u);
    }
    if let Some(Tok::Plus) = lx.peek() {
        lx.next();
        return parse_unary(lx);
    }
    parse_power(lx)
}

fn parse_power(lx: &mut Lexer) -> Result<Poly> {
    let base = parse_atom(lx)?;
    if let Some(Tok::Caret) = lx.peek() {
        lx.next();
        let col = lx.col();
        let exp = parse_power(lx)?; // right-associative
        let e = constant_exponent(&exp).ok_or_else(|| Error::Parse {
            position: col,
            message: "exponent must be a nonnegative integer".into(),
        })?;
        return base.pow_capped(e, &Caps::default());
    }
    Ok(base)
}

fn constant_exponent(p: &Poly) -> Option<u32> {
    if p.is_zero() {
        return Some(0);
    }
    if !p.is_constant() {
        return None;
    }
    let c = p.coeff(0);
    if !c.denom().is_one() || c.is_negative() {
        return None;
    }
    num::ToPrimitive::to_u32(c.numer())
}

fn parse_atom(lx: &mut Lexer) -> Result<Poly> {
    let col = lx.col();
    match lx.next() {
        Some(Tok::Num(n)) => Ok(Poly::constant(Rational::from(n))),
        Some(Tok::Var) => Ok(Poly::x()),
        Some(Tok::LParen) => {
            let p = parse_sum(lx)?;
            match lx.next() {
                Some(Tok::RParen) => Ok(p),
                _ => Err(Error::Parse {
                    position: lx.col(),
                    message: "expected ')'".into(),
                }),
            }
        }
        Some(t) => Err(Error::Parse {
            position: col,
            message: format!("unexpected token {t:?}"),
        }),
        None => Err(Error::Parse {
            position: col,
            message: "unexpected end of input".into(),
        }),
    }
}

/// Canonical formatter: descending powers, lowest-terms rationals. Round
/// trips through [`parse`].
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_part = if mag.is_one() && k > 0 {
                None
            } else {
                Some(mag.to_string())
            };
            match (coeff_part, k) {
                (None, 1) => write!(f, "x")?,
                (None, _) => write!(f, "x^{k}")?,
                (Some(s), 0) => write!(f, "{s}")?,
                (Some(s), 1) => write!(f, "{s}*x")?,
                (Some(s), _) => write!(f, "{s}*x^{k}")?,
            }
        }
        Ok(())
    }
}
