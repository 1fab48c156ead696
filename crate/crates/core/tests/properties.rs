use proptest::prelude::*;

use gmr_core::lie::{adjoint, apply_word, classify, commutator, eta, AlgebraElement};
use gmr_core::solutions::{catalog, FamilyId, Solution, SolutionFamily};
use gmr_core::specfun::{airy, gauss_integral, pcf_u_v, pcf_w};
use gmr_core::transform::{apply_point, apply_to_solution, superpose, PointMap};
use gmr_core::{pde_operator, to_log_coords, Derivs, ModelParams, PdePoint};

fn coeffs() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-2.0f64..2.0)
}

fn elem(a: [f64; 6], sigma: f64) -> AlgebraElement {
    AlgebraElement::new(a, sigma).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Second difference with a fourth-order stencil.
fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bracket_is_antisymmetric(a in coeffs(), b in coeffs(), s in 0.3f64..3.0) {
        let (x, y) = (elem(a, s), elem(b, s));
        let xy = commutator(&x, &y).unwrap();
        let yx = commutator(&y, &x).unwrap();
        for m in 0..6 {
            prop_assert_eq!(xy.a[m], -yx.a[m]);
        }
    }

    #[test]
    fn bracket_is_linear(a in coeffs(), b in coeffs(), c in coeffs(), k in -3.0f64..3.0) {
        let s = 1.1;
        let (x, y, z) = (elem(a, s), elem(b, s), elem(c, s));
        let lhs = commutator(&x.scaled(k).add(&y).unwrap(), &z).unwrap();
        let rhs = commutator(&x, &z).unwrap().scaled(k).add(&commutator(&y, &z).unwrap()).unwrap();
        for m in 0..6 {
            prop_assert!(close(lhs.a[m], rhs.a[m], 1e-12));
        }
    }

    #[test]
    fn eta_is_an_adjoint_invariant(a in coeffs(), i in 1usize..=6, eps in -1.5f64..1.5) {
        let x = elem(a, 0.9);
        let y = adjoint(i, eps, &x).unwrap();
        prop_assert!(close(eta(&y), eta(&x), 1e-10));
    }

    #[test]
    fn adjoint_is_a_one_parameter_group(a in coeffs(), i in 1usize..=6, e1 in -1.0f64..1.0, e2 in -1.0f64..1.0) {
        let x = elem(a, 1.4);
        let two = adjoint(i, e1, &adjoint(i, e2, &x).unwrap()).unwrap();
        let one = adjoint(i, e1 + e2, &x).unwrap();
        for m in 0..6 {
            prop_assert!(close(two.a[m], one.a[m], 1e-10));
        }
    }

    #[test]
    fn classification_replays(a in coeffs(), s in 0.5f64..2.0) {
        let x = elem(a, s);
        prop_assume!(!x.is_zero());
        let rep = classify(&x).unwrap();
        prop_assert!(rep.replay_error(&x).unwrap() <= 1e-9);
        let back = apply_word(&rep.word, &x).unwrap();
        prop_assert!(close(eta(&back), eta(&x), 1e-9));
    }

    #[test]
    fn gauss_integral_is_odd(y in -8.0f64..8.0, s in 0.2f64..4.0) {
        prop_assert_eq!(gauss_integral(-y, s).unwrap(), -gauss_integral(y, s).unwrap());
    }

    #[test]
    fn airy_solves_its_ode(x in -29.0f64..29.0) {
        let f = |s: f64| airy(s).unwrap().ai;
        let g = |s: f64| airy(s).unwrap().bi;
        let (ai, bi) = (f(x), g(x));
        prop_assert!((d2(f, x, 1e-3) - x * ai).abs() <= 1e-5 * ai.abs().max(1.0));
        prop_assert!((d2(g, x, 1e-3) - x * bi).abs() <= 1e-5 * bi.abs().max(1.0));
    }

    #[test]
    fn parabolic_cylinder_functions_solve_their_odes(a in -9.0f64..9.0, x in -25.0f64..25.0) {
        let u = |s: f64| pcf_u_v(a, s).unwrap().u;
        let v = |s: f64| pcf_u_v(a, s).unwrap().v;
        let w = |s: f64| pcf_w(a, s).unwrap().w;
        let q = x * x / 4.0 + a;
        prop_assert!((d2(u, x, 1e-3) - q * u(x)).abs() <= 1e-5 * u(x).abs().max(1.0));
        prop_assert!((d2(v, x, 1e-3) - q * v(x)).abs() <= 1e-5 * v(x).abs().max(1.0));
        let qw = a - x * x / 4.0;
        prop_assert!((d2(w, x, 1e-3) - qw * w(x)).abs() <= 1e-5 * w(x).abs().max(1.0));
    }

    #[test]
    fn catalog_families_solve_the_pde(idx in 0usize..12, t in 0.1f64..5.0, y in -2.0f64..2.0, s in prop::sample::select(vec![0.7, 1.0, 2.0])) {
        let p = ModelParams::symmetric(1.0, s).unwrap();
        let f = catalog(p).unwrap()[idx];
        let x = y.exp();
        let d = f.eval_derivs(t, x).unwrap();
        let r = pde_operator(&p, &d, x).unwrap();
        prop_assert!(r.abs() <= 1e-7 * (1.0 + d.u.abs()), "{}: {}", f.family, r);
    }

    #[test]
    fn log_coordinates_agree_with_the_operator(t in 0.2f64..3.0, y in -1.5f64..1.5, k in 0.2f64..2.0, s in 0.5f64..2.0) {
        let p = ModelParams::symmetric(k, s).unwrap();
        let f = SolutionFamily::new(FamilyId::Inv3, 2.0, -1.0, 0.0, p).unwrap();
        // perturb u so the residual is not zero
        let x = y.exp();
        let d0 = f.eval_derivs(t, x).unwrap();
        let d = Derivs { u: d0.u + 0.3, ..d0 };
        let direct = pde_operator(&p, &d, x).unwrap();
        let u_y = x * d.u_x;
        let u_yy = x * x * d.u_xx + x * d.u_x;
        let logc = to_log_coords(&p).residual(y, d.u, d.u_t, u_y, u_yy);
        let scale = 1.0 + d.u_t.abs() + (p.lambda * x * x * d.u).abs();
        prop_assert!((direct - logc).abs() <= 1e-12 * scale);
    }

    #[test]
    fn point_maps_compose(g in 1u8..=6, e1 in -0.3f64..0.3, e2 in -0.3f64..0.3, t in 0.1f64..1.0, x in 0.3f64..3.0) {
        let p = ModelParams::symmetric(0.8, 1.2).unwrap();
        let q = PdePoint::new(t, x, 1.5).unwrap();
        let two = apply_point(&p, &PointMap::new(g, e1).unwrap(), &apply_point(&p, &PointMap::new(g, e2).unwrap(), &q).unwrap()).unwrap();
        let one = apply_point(&p, &PointMap::new(g, e1 + e2).unwrap(), &q).unwrap();
        prop_assert!(close(two.t, one.t, 1e-10) && close(two.x, one.x, 1e-10) && close(two.u, one.u, 1e-10));
    }

    #[test]
    fn transformed_solutions_stay_solutions(g in 1u8..=6, eps in -0.5f64..0.5, idx in 0usize..12, t in 0.3f64..1.5, y in -1.0f64..1.0) {
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        let f = catalog(p).unwrap()[idx];
        let tf = apply_to_solution(&p, &PointMap::new(g, eps).unwrap(), f).unwrap();
        let x = y.exp();
        if let Some(Ok(d)) = tf.derivs(t, x) {
            let r = pde_operator(&p, &d, x).unwrap();
            prop_assert!(r.abs() <= 1e-6 * (1.0 + d.u.abs()));
        }
    }

    #[test]
    fn superposition_is_a_solution(i in 0usize..12, j in 0usize..12, eps in -2.0f64..2.0, t in 0.2f64..2.0, y in -1.5f64..1.5) {
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        let cat = catalog(p).unwrap();
        let s = superpose(cat[i], cat[j], eps);
        let x = y.exp();
        let d = s.derivs(t, x).unwrap().unwrap();
        let scale = 1.0 + cat[i].eval(t, x).unwrap().abs() + eps.abs() * cat[j].eval(t, x).unwrap().abs();
        prop_assert!(pde_operator(&p, &d, x).unwrap().abs() <= 1e-7 * scale);
    }
}
