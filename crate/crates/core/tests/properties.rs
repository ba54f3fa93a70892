// Oracle tables list values such as e at full precision.
#![allow(clippy::approx_constant)]

use proptest::prelude::*;

use mfrac::expr::Func;
use mfrac::fracderiv::{
    deriv_closed, deriv_limit, family_params, initial_eps, richardson_limit, DerivFamily, FracParams,
};
use mfrac::fracint::mfrac_integral;
use mfrac::{gamma, ml_truncated, parse, Dual, Error, Expr, MLParams, TruncationIndex};

const INF: TruncationIndex = TruncationIndex::Infinity;

fn arb_func() -> impl Strategy<Value = Func> {
    prop::sample::select(Func::ALL.to_vec())
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..400).prop_map(|n| Expr::Constant(f64::from(n) / 100.0)),
        Just(Expr::Variable),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner.clone(), 0u32..4).prop_map(|(a, n)| a.pow(Expr::Constant(f64::from(n)))),
            inner.clone().prop_map(|a| -a),
            (arb_func(), inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e);
    }

    #[test]
    fn dual_value_is_plain_value(e in arb_expr(), t in -3.0f64..3.0) {
        if let Ok(v) = e.eval(t) {
            let d = e.eval_dual(t).unwrap();
            prop_assert_eq!(v.to_bits(), d.val.to_bits());
        }
    }

    #[test]
    fn dual_derivative_matches_central_difference(e in arb_expr(), t in -3.0f64..3.0) {
        let h = 1e-5;
        let d = match e.eval_dual(t) {
            Ok(d) if d.der.is_finite() => d,
            _ => return Ok(()),
        };
        let at = |x: f64| e.eval(x).ok().filter(|v| v.is_finite() && v.abs() < 1e4);
        let (Some(p1), Some(m1), Some(p2), Some(m2)) = (at(t + h), at(t - h), at(t + 2.0 * h), at(t - 2.0 * h)) else {
            return Ok(());
        };
        let cd = (p1 - m1) / (2.0 * h);
        let cd2 = (p2 - m2) / (4.0 * h);
        let tol = 1e-6 * (1.0 + d.der.abs());
        // skip points next to kinks and poles, where the difference itself is unreliable
        prop_assume!((cd - cd2).abs() <= tol);
        prop_assert!((d.der - cd).abs() <= tol, "{} at {}: {} vs {}", e, t, d.der, cd);
    }
}

#[test]
fn parse_print_parse_corpus() {
    let corpus = [
        "50*x*(1-x)",
        "sin(2*t)^2",
        "x^-1",
        "-x^2",
        "exp(-t) * cos(3*t) + 1e-3",
        "sqrt(abs(x - 0.5)) / (1 + x^2)",
        "ln(1 + t^2)^0.5",
        "((((x))))",
        "2^3^2 - -4",
    ];
    for src in corpus {
        let e = parse(src).unwrap();
        assert_eq!(parse(&e.to_string()).unwrap(), e, "{src}");
    }
}

/// mpmath values of E_β(z) at 30 significant digits.
const ML_ORACLE: [(f64, f64, f64); 36] = [
    (0.5, -10.0, 0.05614099274382259),
    (0.5, -7.5, 0.07457369306287669),
    (0.5, -5.0, 0.11070463773306863),
    (0.5, -2.5, 0.2108063640611436),
    (0.5, -1.0, 0.427583576155807),
    (0.5, -0.3, 0.7345993345676551),
    (0.5, 0.3, 1.4537492328427655),
    (0.5, 1.0, 5.008980080762283),
    (0.5, 2.5, 1035.814842972623),
    (0.5, 5.0, 144009798674.66104),
    (0.5, 7.5, 5.371487911873917e+24),
    (0.5, 10.0, 5.376234283632271e+43),
    (1.0, -10.0, 4.5399929762484854e-05),
    (1.0, -7.5, 0.0005530843701478336),
    (1.0, -5.0, 0.006737946999085467),
    (1.0, -2.5, 0.0820849986238988),
    (1.0, -1.0, 0.36787944117144233),
    (1.0, -0.3, 0.7408182206817179),
    (1.0, 0.3, 1.3498588075760032),
    (1.0, 1.0, 2.718281828459045),
    (1.0, 2.5, 12.182493960703473),
    (1.0, 5.0, 148.4131591025766),
    (1.0, 7.5, 1808.0424144560632),
    (1.0, 10.0, 22026.465794806718),
    (2.0, -10.0, -0.9997860728793259),
    (2.0, -7.5, -0.9198964918929052),
    (2.0, -5.0, -0.6172728764571666),
    (2.0, -2.5, -0.010342318905209131),
    (2.0, -1.0, 0.5403023058681398),
    (2.0, -0.3, 0.8537127002247337),
    (2.0, 0.3, 1.1537877015640243),
    (2.0, 1.0, 1.5430806348152437),
    (2.0, 2.5, 2.5331142957652446),
    (2.0, 5.0, 4.731673471130766),
    (2.0, 7.5, 7.765088116817567),
    (2.0, 10.0, 11.833336070820502),
];

#[test]
fn ml_matches_high_precision_oracle() {
    for (beta, z, want) in ML_ORACLE {
        let got = ml_truncated(z, MLParams::new(beta, INF).unwrap()).unwrap();
        let rel = ((got - want) / want).abs();
        assert!(rel <= 1e-12, "β = {beta}, z = {z}: {got} vs {want} ({rel:e})");
    }
}

#[test]
fn ml_at_zero_is_one() {
    for beta in [0.1, 0.5, 1.0, 2.0, 7.5] {
        for trunc in [
            TruncationIndex::Finite(0),
            TruncationIndex::Finite(1),
            TruncationIndex::Finite(40),
            INF,
        ] {
            assert_eq!(ml_truncated(0.0, MLParams::new(beta, trunc).unwrap()).unwrap(), 1.0);
        }
    }
}

/// Σ_{k≤i} z^k / k! by Horner with exactly computed factorials, plus the
/// sum of term magnitudes.
fn taylor_exp(z: f64, i: u32) -> (f64, f64) {
    let fact = |k: u32| (1..=u64::from(k)).product::<u64>() as f64;
    let value = (0..=i).rev().fold(0.0, |acc, k| acc * z + 1.0 / fact(k));
    let magnitude = (0..=i).map(|k| z.abs().powi(k as i32) / fact(k)).sum();
    (value, magnitude)
}

proptest! {
    #[test]
    fn ml_beta_one_is_taylor_polynomial(z in -10.0f64..10.0, i in 0u32..=20) {
        let got = ml_truncated(z, MLParams::new(1.0, TruncationIndex::Finite(i)).unwrap()).unwrap();
        let (want, magnitude) = taylor_exp(z, i);
        prop_assert!((got - want).abs() <= 1e-14 * magnitude, "{} vs {}", got, want);
    }

    #[test]
    fn ml_nondecreasing_in_truncation(z in 0.0f64..20.0, beta in 0.2f64..3.0, i in 0u32..60) {
        let e = |i| ml_truncated(z, MLParams::new(beta, TruncationIndex::Finite(i)).unwrap()).unwrap_or(f64::INFINITY);
        prop_assert!(e(i + 1) >= e(i));
        match ml_truncated(z, MLParams::new(beta, INF).unwrap()) {
            Ok(full) => prop_assert!(full >= e(i) * (1.0 - 1e-15)),
            Err(err) => prop_assert!(matches!(err, Error::Overflow(_) | Error::Convergence(_)), "{}", err),
        }
    }
}

fn arb_params() -> impl Strategy<Value = FracParams> {
    (
        0.05f64..0.95,
        0.2f64..3.0,
        prop_oneof![Just(INF), (1u32..25).prop_map(TruncationIndex::Finite)],
    )
        .prop_map(|(a, b, i)| FracParams::new(a, b, i).unwrap())
}

type Shape = (fn(f64) -> f64, fn(Dual) -> Dual);

const SHAPES: [Shape; 4] = [
    (|t| t * t, |t| t * t),
    (f64::sin, Dual::sin),
    (f64::exp, Dual::exp),
    (|t| (1.0 + t * t).ln(), |t| (t * t + 1.0).ln()),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn limit_agrees_with_closed_form(k in 0usize..4, p in arb_params(), t in 0.2f64..4.0) {
        let (f, fd) = SHAPES[k];
        let closed = deriv_closed(&fd, &p, t).unwrap();
        let lim = deriv_limit(&f, &p, t).unwrap();
        prop_assert!((lim.value - closed).abs() <= 1e-6 * closed.abs().max(1.0), "{:?} vs {}", lim, closed);
    }

    #[test]
    fn jump_blocks_convergence(t0 in 0.5f64..3.0, p in arb_params()) {
        let f = move |t: f64| if t < t0 { 0.0 } else if t == t0 { 0.5 } else { 1.0 };
        prop_assert!(matches!(deriv_limit(&f, &p, t0), Err(Error::Convergence(_))));
    }

    #[test]
    fn integral_additivity(k in 0usize..4, p in arb_params(), a in 0.0f64..1.0, c in 1.0f64..2.0, t in 2.0f64..4.0) {
        let f = SHAPES[k].0;
        let whole = mfrac_integral(&f, a, t, &p).unwrap();
        let left = mfrac_integral(&f, a, c, &p).unwrap();
        let right = mfrac_integral(&f, c, t, &p).unwrap();
        let slack = whole.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate;
        let gap = (left.value + right.value - whole.value).abs();
        prop_assert!(gap <= slack.max(1e-14 * whole.value.abs()), "{} > {}", gap, slack);
    }

    #[test]
    fn integral_linearity(j in 0usize..4, k in 0usize..4, p in arb_params(), u in -3.0f64..3.0, v in -3.0f64..3.0, t in 0.5f64..3.0) {
        let (f, g) = (SHAPES[j].0, SHAPES[k].0);
        let combined = mfrac_integral(&|x: f64| u * f(x) + v * g(x), 0.0, t, &p).unwrap();
        let fi = mfrac_integral(&f, 0.0, t, &p).unwrap();
        let gi = mfrac_integral(&g, 0.0, t, &p).unwrap();
        let slack = combined.abs_error_estimate + u.abs() * fi.abs_error_estimate + v.abs() * gi.abs_error_estimate;
        let gap = (combined.value - (u * fi.value + v * gi.value)).abs();
        prop_assert!(gap <= slack.max(1e-13 * (u * fi.value).abs().max((v * gi.value).abs())));
    }

    #[test]
    fn integral_beta_scaling(k in 0usize..4, alpha in 0.05f64..0.95, b1 in 0.2f64..3.0, b2 in 0.2f64..3.0, a in 0.0f64..1.0, t in 1.0f64..3.0) {
        let f = SHAPES[k].0;
        let r1 = mfrac_integral(&f, a, t, &FracParams::new(alpha, b1, INF).unwrap()).unwrap();
        let r2 = mfrac_integral(&f, a, t, &FracParams::new(alpha, b2, INF).unwrap()).unwrap();
        let want = r1.value * gamma(b2 + 1.0).unwrap() / gamma(b1 + 1.0).unwrap();
        prop_assert!(((r2.value - want) / want).abs() <= 1e-12);
    }
}

/// Quotients written out directly for each family, independent of the
/// Mittag-Leffler routine.
fn family_quotient(fam: DerivFamily, f: fn(f64) -> f64, alpha: f64, t: f64, eps: f64) -> f64 {
    let shifted = match fam {
        DerivFamily::Conformable => t + eps * t.powf(1.0 - alpha),
        DerivFamily::Alternative => t * (eps * t.powf(-alpha)).exp(),
        DerivFamily::Generalized(i) => {
            let z = eps * t.powf(-alpha);
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..=i {
                term *= z / f64::from(k);
                sum += term;
            }
            t * sum
        }
        _ => unreachable!(),
    };
    (f(shifted) - f(t)) / eps
}

#[test]
fn family_reductions_match_direct_quotients() {
    for (f, _) in SHAPES {
        for alpha in [0.2, 0.5, 0.8] {
            for t in [0.5, 1.0, 2.5] {
                for fam in [
                    DerivFamily::Conformable,
                    DerivFamily::Alternative,
                    DerivFamily::Generalized(2),
                    DerivFamily::Generalized(7),
                ] {
                    let p = family_params(fam, alpha).unwrap();
                    let ours = deriv_limit(&f, &p, t).unwrap();
                    let direct =
                        richardson_limit(|e| Ok(family_quotient(fam, f, alpha, t, e)), initial_eps(&p, t)).unwrap();
                    assert!(
                        (ours.value - direct.value).abs() <= 1e-10 * direct.value.abs().max(1.0),
                        "{fam} α={alpha} t={t}: {} vs {}",
                        ours.value,
                        direct.value
                    );
                }
            }
        }
    }
}
