//! Acceptance gate: the eleven criteria the toolkit must meet, one
//! pass/fail line each (run with `--nocapture` to see every line).

use copspec::classify::{fixed_points, is_mean_ergodic};
use copspec::dynamics::{find_squaring_iterate, growth_certificate, GridSpec};
use copspec::poly::{
    compose, faa_di_bruno_poly, iterate, linear_conjugate, parse, rat, rat_int, LinearMap, Poly,
    Rational,
};
use copspec::resolvent::{
    residual, resolvent_apply, spectral_witness, uniform_grid, SchwartzTestFunction,
};
use copspec::roots::{count_real_roots, squarefree_part};
use copspec::spectrum::{contains, spectrum_of, ComplexQ, Membership, SetExpr, Status};
use num::complex::Complex64;
use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn run(name: &str, limit_secs: f64, f: impl FnOnce() + std::panic::UnwindSafe) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(f);
    let elapsed = start.elapsed().as_secs_f64();
    // stated budgets assume an optimized build; allow slack under debug
    let budget = if cfg!(debug_assertions) {
        limit_secs * 40.0
    } else {
        limit_secs
    };
    let timely = elapsed <= budget;
    match (&outcome, timely) {
        (Ok(()), true) => println!("[PASS] {name} ({elapsed:.3}s)"),
        (Ok(()), false) => println!("[FAIL] {name} (over budget: {elapsed:.3}s > {budget:.3}s)"),
        (Err(_), _) => println!("[FAIL] {name} ({elapsed:.3}s)"),
    }
    if outcome.is_err() {
        panic!("{name} failed");
    }
    assert!(timely, "{name} exceeded its runtime budget");
}

fn rand_rational(rng: &mut StdRng, max_abs: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-(max_abs * den)..=max_abs * den);
    rat(num, den)
}

fn rand_poly(rng: &mut StdRng, degree: usize, max_abs: i64, max_den: i64) -> Poly {
    let mut coeffs: Vec<Rational> = (0..=degree)
        .map(|_| rand_rational(rng, max_abs, max_den))
        .collect();
    while coeffs[degree].is_zero() {
        coeffs[degree] = rand_rational(rng, max_abs, max_den);
    }
    Poly::new(coeffs)
}

#[test]
fn criterion_01_golden_classification_table() {
    run("01 golden classification table", 1.0, || {
        let exact: &[(&str, SetExpr, &str)] = &[
            ("x+1", SetExpr::UnitCircle, "example1a"),
            ("2x", SetExpr::PlaneMinusOrigin, "example1b"),
            (
                "-x",
                SetExpr::finite(vec![
                    ComplexQ::real(rat_int(-1)),
                    ComplexQ::real(rat_int(1)),
                ]),
                "example1c",
            ),
            ("x^2+1", SetExpr::OriginOnly, "withoutfixedpoints"),
            ("x^2+1", SetExpr::OriginOnly, "grau2a"),
            ("x^2+x", SetExpr::ClosedUnitDisc, "grau2b"),
            ("x^2", SetExpr::FullPlane, "grau2c"),
            ("x^2+1/4", SetExpr::ClosedUnitDisc, "grau2b"),
            ("x+x^3", SetExpr::ClosedDiscMinusOrigin, "cubic-positive"),
            ("x^3", SetExpr::FullPlane, "cubic-positive"),
            ("-x^3-x", SetExpr::ClosedDiscMinusOrigin, "negative-odd"),
            ("-x^3-2x", SetExpr::PlaneMinusOrigin, "negative-odd"),
            ("-x^3", SetExpr::FullPlane, "negative-odd"),
        ];
        for (expr, set, tag) in exact {
            let d = spectrum_of(&parse(expr).unwrap()).unwrap();
            assert_eq!(
                d.status,
                Status::Exact(set.clone()),
                "{expr}: wrong descriptor {:?}",
                d.status
            );
            assert!(
                d.provenance.iter().any(|t| t == tag),
                "{expr}: missing tag {tag} in {:?}",
                d.provenance
            );
        }
        // unresolved negative cubic: certified lower bound only
        let d = spectrum_of(&parse("-x^3+x-1").unwrap()).unwrap();
        match &d.status {
            Status::Partial { lower, .. } => {
                assert!(
                    SetExpr::ClosedDiscMinusOrigin.subset_of(lower),
                    "lower bound must contain the punctured closed disc: {lower:?}"
                );
            }
            other => panic!("-x^3+x-1 must stay partial, got {other:?}"),
        }
        assert!(d.provenance.iter().any(|t| t == "polynomial_fixed_point"));
    });
}

#[test]
fn criterion_02_boundary_sharpness() {
    run("02 boundary sharpness at c = 1/4", 0.1, || {
        let eps = rat(1, 1_000_000_000);
        let cases = [
            (rat(1, 4) - &eps, Status::Exact(SetExpr::FullPlane)),
            (rat(1, 4), Status::Exact(SetExpr::ClosedUnitDisc)),
            (rat(1, 4) + &eps, Status::Exact(SetExpr::OriginOnly)),
        ];
        for (c, expected) in cases {
            let phi = Poly::new(vec![c.clone(), rat_int(0), rat_int(1)]);
            let d = spectrum_of(&phi).unwrap();
            assert_eq!(d.status, expected, "x^2 + {c}");
        }
    });
}

#[test]
fn criterion_03_conjugation_invariance() {
    run("03 conjugation invariance", 10.0, || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..200 {
            let deg = rng.gen_range(1..=3usize);
            let phi = rand_poly(&mut rng, deg, 5, 4);
            let base = spectrum_of(&phi).unwrap();
            for _ in 0..10 {
                let mut a = rand_rational(&mut rng, 5, 4);
                while a.is_zero() {
                    a = rand_rational(&mut rng, 5, 4);
                }
                let b = rand_rational(&mut rng, 5, 4);
                let conj = linear_conjugate(&phi, &LinearMap::new(a, b));
                let d = spectrum_of(&conj).unwrap();
                assert_eq!(d, base, "conjugate of {phi} changed the descriptor");
            }
        }
    });
}

#[test]
fn criterion_04_elementary_containments() {
    run("04 elementary containments on goldens", 1.0, || {
        let goldens = [
            "x+1", "2x", "-x", "x^2+1", "x^2+x", "x^2", "x^2+1/4", "x+x^3", "x^3", "-x^3-x",
            "-x^3-2x", "-x^3", "-x^3+x-1",
        ];
        for expr in goldens {
            let phi = parse(expr).unwrap();
            let fps = fixed_points(&phi).unwrap();
            if fps.is_empty() {
                continue;
            }
            let d = spectrum_of(&phi).unwrap();
            assert_eq!(
                contains(&d, &ComplexQ::real(rat_int(1))),
                Membership::In,
                "{expr}: 1 must lie in the spectrum"
            );
            let dphi = phi.derivative(1);
            for fp in &fps {
                if let Some(a) = fp.point.as_rational() {
                    let v = ComplexQ::real(dphi.eval(&a));
                    assert_eq!(
                        contains(&d, &v),
                        Membership::In,
                        "{expr}: multiplier at fixed point {a} missing"
                    );
                }
            }
            let zero_expected = count_real_roots(&dphi) > 0;
            let zero_in = contains(&d, &ComplexQ::real(rat_int(0))) == Membership::In;
            assert_eq!(
                zero_in, zero_expected,
                "{expr}: origin membership disagrees with a real critical point"
            );
        }
    });
}

#[test]
fn criterion_05_mean_ergodicity() {
    run("05 mean ergodicity iff spectrum is the origin", 10.0, || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0005);
        for _ in 0..500 {
            let deg = rng.gen_range(2..=4usize);
            let phi = rand_poly(&mut rng, deg, 5, 3);
            let me = is_mean_ergodic(&phi).unwrap();
            let d = spectrum_of(&phi).unwrap();
            let origin_only = d.status == Status::Exact(SetExpr::OriginOnly);
            assert_eq!(me, origin_only, "{phi}");
        }
    });
}

#[test]
fn criterion_06_squaring_iterate() {
    run("06 squaring-iterate certificate", 1.0, || {
        let phi = parse("x^2+1").unwrap();
        let (n, a) = find_squaring_iterate(&phi, &rat_int(1)).unwrap();
        assert_eq!(n, 2);
        assert_eq!(a, rat_int(2));
        // consequence: |ψ_m(t)| ≥ 2^(2^(m−1)) on the whole grid, floating
        let psi = iterate(&phi, n).unwrap();
        let nodes = GridSpec::default_for(&phi).nodes();
        assert_eq!(nodes.len(), 401);
        for &x in &nodes {
            let mut t = x;
            for m in 1..=5u32 {
                t = psi.eval_f64(t);
                if !t.is_finite() {
                    break;
                }
                let bound = 2.0f64.powi(1 << (m - 1));
                assert!(
                    t.abs() >= bound * (1.0 - 1e-12),
                    "x={x}, m={m}: {t} below {bound}"
                );
            }
        }
    });
}

#[test]
fn criterion_07_growth_certificates() {
    run("07 growth certificates and certified failure", 5.0, || {
        let phi = parse("x^2+1/4").unwrap();
        let grid = GridSpec::default_for(&phi);
        for n in [1usize, 2] {
            let cert = growth_certificate(&phi, n, &rat_int(2), 12, &grid).unwrap();
            assert!(cert.q <= 6, "n={n}: needed q={}", cert.q);
            assert!(cert.c.is_finite() && cert.c > 0.0);
        }
        // φ = x², r = 1: no certificate can exist; the witness at x = 1
        // must show φ_m′(1) = 2^m exactly
        let sq = parse("x^2").unwrap();
        let small = GridSpec { l: 1.0, points: 5 };
        match growth_certificate(&sq, 1, &rat_int(1), 12, &small) {
            Err(copspec::Error::CertificateNotFound { witnesses, .. }) => {
                let at_one: Vec<_> = witnesses
                    .iter()
                    .filter(|(_, x, _)| (*x - 1.0).abs() < 1e-12)
                    .collect();
                assert!(!at_one.is_empty(), "expected a witness at x = 1");
                for (m, _, deriv) in at_one {
                    assert_eq!(*deriv, 2.0f64.powi(*m as i32), "m={m}");
                }
            }
            other => panic!("expected certified failure, got {other:?}"),
        }
    });
}

#[test]
fn criterion_08_resolvent_residuals() {
    run("08 resolvent residuals for x^2+2", 2.0, || {
        let phi = parse("x^2+2").unwrap();
        let g = SchwartzTestFunction::gaussian();
        let grid = uniform_grid(10.0, 801);
        for lambda in [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(5.0, 0.0),
        ] {
            let (f, m_star) = resolvent_apply(&phi, lambda, &g, &grid, 1e-10).unwrap();
            assert!(m_star <= 12, "lambda={lambda}: m*={m_star}");
            let r = residual(&phi, lambda, &f, &g, &grid, 1e-10).unwrap();
            assert!(r < 1e-8, "lambda={lambda}: residual {r}");
        }
    });
}

#[test]
fn criterion_09_witness_divergence() {
    run("09 witness forced values and divergence", 1.0, || {
        let phi = parse("x^2+1/4").unwrap();
        for lambda in [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
        ] {
            let w = spectral_witness(&phi, lambda, 10).unwrap();
            assert!(w.divergence_flag, "lambda={lambda}");
            let inv = 1.0 / lambda.norm();
            for (m, v) in w.candidate_values.iter().enumerate() {
                let expect = inv.powi(m as i32 + 1);
                assert!(
                    (v.norm() - expect).abs() <= 1e-12 * expect,
                    "lambda={lambda}, m={m}: |f(y_m)| = {} vs {expect}",
                    v.norm()
                );
            }
            for k in 1..w.x_k.len() {
                let res = (phi.eval_f64(w.x_k[k]) - w.x_k[k - 1]).abs();
                assert!(res < 1e-12, "lambda={lambda}, k={k}: orbit residual {res}");
            }
        }
    });
}

#[test]
fn criterion_10_root_isolation_oracle() {
    run("10 Sturm counts vs dense sign-change oracle", 5.0, || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0010);
        for _ in 0..500 {
            let deg = rng.gen_range(1..=6usize);
            let mut coeffs: Vec<Rational> =
                (0..=deg).map(|_| rat_int(rng.gen_range(-9..=9))).collect();
            while coeffs[deg].is_zero() {
                coeffs[deg] = rat_int(rng.gen_range(-9..=9));
            }
            let p = Poly::new(coeffs);
            let sf = squarefree_part(&p).unwrap();
            let sturm = count_real_roots(&sf);

            // oracle: sign changes of the squarefree part on a dense grid
            // past the Cauchy root bound
            let b = copspec::poly::rational_to_f64(&sf.cauchy_root_bound()) + 1.0;
            let n = 8001usize;
            let mut changes = 0usize;
            let mut prev: Option<f64> = None;
            for i in 0..n {
                let x = -b + 2.0 * b * i as f64 / (n - 1) as f64;
                let v = sf.eval_f64(x);
                if v == 0.0 {
                    continue;
                }
                if let Some(pv) = prev {
                    if pv * v < 0.0 {
                        changes += 1;
                    }
                }
                prev = Some(v);
            }
            assert_eq!(sturm, changes, "{p}");
        }
    });
}

#[test]
fn criterion_11_faa_di_bruno_exactness() {
    run("11 Faa di Bruno vs symbolic derivative", 5.0, || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0011);
        for _ in 0..100 {
            let df = rng.gen_range(1..=4);
            let f = rand_poly(&mut rng, df, 3, 2);
            let dp = rng.gen_range(1..=4);
            let p = rand_poly(&mut rng, dp, 3, 2);
            let x = rand_rational(&mut rng, 2, 3);
            let comp = compose(&f, &p).unwrap();
            for n in 1..=5usize {
                let got = faa_di_bruno_poly(&f, &p, n, &x).unwrap();
                let want = comp.derivative(n).eval(&x);
                assert_eq!(got, want, "f={f}, p={p}, n={n}, x={x}");
            }
        }
    });
}
