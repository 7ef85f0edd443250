//! Property tests for the structural invariants: quadrature linearity and
//! antisymmetry, barycentric interpolation and count bounds, split
//! bookkeeping, parser round trips, and moment algebra.

use holozero::*;
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

fn finite_range(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_map(|x| x)
}

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = (f64, f64)> {
    (finite_range(lo, hi), finite_range(lo, hi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_preserves_area_and_pairs_children(
        (re0, im0) in complex_in(-10.0, 10.0),
        w in 0.1f64..5.0,
        h in 0.1f64..5.0,
        frac in 0.05f64..0.95,
    ) {
        let r = Rectangle::new(re0, re0 + w, im0, im0 + h).unwrap();
        let (a, b, edge) = r.split(frac);
        prop_assert!((a.area() + b.area() - r.area()).abs() <= 1e-12 * r.area());
        // the inserted edge bounds both children
        prop_assert!(a.contains(edge.start) && a.contains(edge.end));
        prop_assert!(b.contains(edge.start) && b.contains(edge.end));
        // perpendicular to the longer side
        if r.width() >= r.height() {
            prop_assert_eq!(edge.start.re, edge.end.re);
        } else {
            prop_assert_eq!(edge.start.im, edge.end.im);
        }
    }

    #[test]
    fn boundary_param_is_periodic_and_on_the_boundary(
        (re0, im0) in complex_in(-5.0, 5.0),
        w in 0.1f64..4.0,
        h in 0.1f64..4.0,
        t in 0.0f64..100.0,
    ) {
        let r = Rectangle::new(re0, re0 + w, im0, im0 + h).unwrap();
        let b = r.boundary();
        let p = b.point(t);
        let q = b.point(t + b.total_length());
        prop_assert!((p - q).norm() <= 1e-12 * (1.0 + p.norm()));
        let on_re_edge = (p.re - r.re_min).abs() < 1e-12 || (p.re - r.re_max).abs() < 1e-12;
        let on_im_edge = (p.im - r.im_min).abs() < 1e-12 || (p.im - r.im_max).abs() < 1e-12;
        prop_assert!(r.contains(p) && (on_re_edge || on_im_edge));
    }

    #[test]
    fn quadrature_is_linear_and_antisymmetric(
        (sr, si) in complex_in(-2.0, 2.0),
        (dr, di) in complex_in(0.1, 2.0),
        (ar, ai) in complex_in(-1.0, 1.0),
        scale in 0.2f64..3.0,
    ) {
        let edge = Edge::new(C::new(sr, si), C::new(sr + dr, si + di));
        let a = C::new(ar, ai);
        let f = move |z: C| (z * a).exp();
        let g = move |z: C| z * z + a;
        let cfg = QuadConfig::default();
        let rf = gk_integrate_edge(f, &edge, &cfg);
        let rg = gk_integrate_edge(g, &edge, &cfg);
        let combo = gk_integrate_edge(|z| scale * f(z) - 2.0 * g(z), &edge, &cfg);
        prop_assert!(rf.converged && rg.converged && combo.converged);
        let expect = scale * rf.value - 2.0 * rg.value;
        prop_assert!((combo.value - expect).norm() <= 1e-11 * (1.0 + expect.norm()));
        let back = gk_integrate_edge(f, &edge.reversed(), &cfg);
        prop_assert!((back.value + rf.value).norm() <= 1e-12 * (1.0 + rf.value.norm()));
    }

    #[test]
    fn barycentric_interpolates_and_bounds_pole_zero_counts(
        data in proptest::collection::vec((complex_in(-3.0, 3.0), complex_in(-2.0, 2.0), complex_in(-2.0, 2.0)), 2..7),
    ) {
        // distinct support points with arbitrary values/weights
        let mut support = Vec::new();
        let mut values = Vec::new();
        let mut weights = Vec::new();
        for (k, ((sre, sim), (vre, vim), (wre, wim))) in data.into_iter().enumerate() {
            support.push(C::new(sre + 8.0 * k as f64, sim));
            values.push(C::new(vre, vim + 0.1));
            weights.push(C::new(wre + 1.5, wim));
        }
        let m = support.len();
        let r = BarycentricRational::new(support.clone(), values.clone(), weights).unwrap();
        for (z, f) in support.iter().zip(&values) {
            prop_assert_eq!(r.eval(*z), *f);
        }
        prop_assert!(r.poles().unwrap().len() < m);
        prop_assert!(r.zeros().unwrap().len() < m);
    }

    #[test]
    fn cauchy_derivative_matches_analytic_derivative(
        (ar, ai) in complex_in(-0.8, 0.8),
        (br, bi) in complex_in(-0.8, 0.8),
        (zr, zi) in complex_in(-0.5, 0.5),
    ) {
        let a = C::new(ar, ai) + C::new(2.0, 0.0);
        let b = C::new(br, bi) - C::new(2.0, 0.0);
        let z = C::new(zr, zi);
        let f = move |w: C| (w - a) * (w - b) * w.exp();
        let exact = ((z - a) + (z - b) + (z - a) * (z - b)) * z.exp();
        let est = cauchy_derivative(f, z, &DerivConfig::default()).unwrap();
        prop_assert!((est.value - exact).norm() <= 1e-11 * (1.0 + exact.norm()));
        // determinism
        let again = cauchy_derivative(f, z, &DerivConfig::default()).unwrap();
        prop_assert_eq!(est.value, again.value);
    }

    #[test]
    fn newton_identities_invert_power_sums(
        zero_parts in proptest::collection::vec(complex_in(-1.0, 1.0), 1..7),
    ) {
        // power sums of known zeros -> coefficients -> evaluate at the zeros
        let zeros: Vec<C> = zero_parts.iter().map(|(re, im)| C::new(*re, *im)).collect();
        let n = zeros.len();
        let mut values = vec![C::new(n as f64, 0.0)];
        for k in 1..=n {
            values.push(zeros.iter().map(|z| z.powi(k as i32)).sum());
        }
        let poly = baseline::newton_identities(&baseline::MomentVector { values });
        prop_assert_eq!(poly.degree(), n);
        for z in &zeros {
            let mut value = C::new(1.0, 0.0);
            for c in &poly.coefficients {
                value = value * z + c;
            }
            prop_assert!(value.norm() <= 1e-10 * (1.0f64 + z.norm()).powi(n as i32));
        }
    }
}

// Expression trees: parse(print(e)) == e on randomly generated trees.
fn expr_strategy() -> impl Strategy<Value = exprparse::Expr> {
    use exprparse::{Expr, Func};
    // only literal shapes the parser itself can produce: real or pure
    // imaginary (a mixed literal always parses as a sum)
    let literal = prop_oneof![
        (0.01f64..100.0).prop_map(|re| Expr::Literal(C::new(re, 0.0))),
        (0.01f64..100.0).prop_map(|im| Expr::Literal(C::new(0.0, im))),
        Just(Expr::Var),
    ];
    literal.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
            (
                prop_oneof![
                    Just(Func::Exp),
                    Just(Func::Log),
                    Just(Func::Sin),
                    Just(Func::Cos),
                    Just(Func::Tan),
                    Just(Func::Sqrt)
                ],
                inner
            )
                .prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printer_parser_round_trip(expr in expr_strategy()) {
        let printed = expr.to_string();
        let reparsed = exprparse::parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &expr, "printed form: {}", printed);
    }

    #[test]
    fn parser_never_panics_on_arbitrary_input(src in "[ -~]{0,40}") {
        // any outcome is fine as long as it is a Result, not a panic
        let _ = exprparse::parse(&src);
    }

    #[test]
    fn parser_evaluates_what_it_accepts(
        src in "[0-9zi+*/^ ().-]{0,24}",
        (re, im) in complex_in(-2.0, 2.0),
    ) {
        if let Ok(expr) = exprparse::parse(&src) {
            // evaluation must not panic either; non-finite values are fine
            let _ = expr.eval(C::new(re, im));
        }
    }
}
