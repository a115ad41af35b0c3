use proptest::prelude::*;
use swanson_ep::ep::{find_transitions, geometric_multiplicity, track_branches, FnFamily};
use swanson_ep::linalg::{
    char_poly, determinant, discriminant_quartic, eig, null_space, poly_roots, rank, ComplexMatrix,
    EigOptions, MonicPoly, DEFAULT_MAX_ITER,
};
use swanson_ep::model::{
    branch_spectrum_minus, build_matrix, delta_minus, delta_plus, DeltaMode, EtaMode, ModelParams,
    SwansonFamily, SweepParam,
};
use swanson_ep::sweep::{run_sweep, SweepConfig};
use swanson_ep::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn matrix4() -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(complex(), 16)
        .prop_map(|d| ComplexMatrix::from_row_major(4, d).unwrap())
}

fn params() -> impl Strategy<Value = ModelParams> {
    (
        0.5..3.0f64,
        0.0..2.0f64,
        0.0..2.0f64,
        -2.0..2.0f64,
        0.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(w, g, r, e, d, h)| ModelParams::new(w, g, r, e, d, h).unwrap())
}

fn well_separated(roots: &[Complex64], gap: f64) -> bool {
    roots
        .iter()
        .enumerate()
        .all(|(i, a)| roots[i + 1..].iter().all(|b| (a - b).norm() > gap))
}

fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn char_poly_matches_trace_and_determinant(m in matrix4()) {
        let p = char_poly(&m).unwrap();
        let scale = 1.0 + m.norm_inf().powi(4);
        prop_assert!((p.coeffs()[3] + m.trace()).norm() <= 1e-12 * scale);
        prop_assert!((p.coeffs()[0] - determinant(&m)).norm() <= 1e-10 * scale);
    }

    #[test]
    fn roots_round_trip(roots in proptest::collection::vec(complex().prop_map(|z| z * 5.0), 2..7)) {
        prop_assume!(well_separated(&roots, 0.1));
        let p = MonicPoly::from_roots(&roots).unwrap();
        let found = poly_roots(&p, 1e-12, DEFAULT_MAX_ITER).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        prop_assert!(multiset_distance(&roots, &found) <= 1e-8);
    }

    #[test]
    fn discriminant_equals_root_product(roots in proptest::collection::vec(complex(), 4)) {
        let p = MonicPoly::from_roots(&roots).unwrap();
        let mut prod = c(1.0, 0.0);
        for i in 0..4 {
            for j in i + 1..4 {
                prod *= (roots[i] - roots[j]).powi(2);
            }
        }
        let r = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let disc = discriminant_quartic(&p).unwrap();
        prop_assert!((disc - prod).norm() <= 1e-6 * (1.0 + r).powi(12), "{disc} vs {prod}");
    }

    #[test]
    fn rank_is_monotone_in_tolerance(m in matrix4(), a in -14.0..-1.0f64, b in -14.0..-1.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(rank(&m, 10f64.powf(hi)) <= rank(&m, 10f64.powf(lo)));
    }

    #[test]
    fn null_space_is_orthonormal(m in matrix4(), drop in 0usize..3) {
        // force a rank deficit by repeating the first row
        let mut m = m;
        for k in 0..drop {
            for j in 0..4 {
                m[(k + 1, j)] = m[(0, j)] * (k as f64 + 2.0);
            }
        }
        let tol = 1e-10;
        let basis = null_space(&m, tol);
        prop_assert_eq!(basis.len(), 4 - rank(&m, tol));
        for (i, u) in basis.iter().enumerate() {
            prop_assert!((u.norm() - 1.0).abs() <= 1e-12);
            prop_assert!(m.mul_vec(u).unwrap().norm() <= 1e-8 * (1.0 + m.norm_inf()));
            for v in &basis[i + 1..] {
                prop_assert!(u.dot(v).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn simple_eigenpairs_have_small_residuals(m in matrix4()) {
        let spec = eig(&m, &EigOptions::default()).unwrap();
        prop_assume!(well_separated(&spec.eigenvalues, 1e-2));
        for cl in &spec.clusters {
            prop_assert_eq!(cl.algebraic, 1);
            for v in &cl.eigenvectors {
                let r = m.shifted(cl.center).mul_vec(v).unwrap().norm() / v.norm();
                prop_assert!(r <= 1e-8 * m.norm_inf(), "residual {r}");
            }
        }
    }

    #[test]
    fn real_model_spectrum_is_closed_under_conjugation(p in params()) {
        // with delta = 0 the matrix pair structure makes the polynomial real
        let p = ModelParams::new(p.omega, p.gamma, p.rho, p.epsilon, 0.0, p.eta).unwrap();
        let spec = eig(&build_matrix(&p).unwrap(), &EigOptions::default()).unwrap();
        prop_assume!(spec.char_poly.coeffs().iter().all(|z| z.im.abs() <= 1e-12));
        let conj: Vec<Complex64> = spec.eigenvalues.iter().map(|z| z.conj()).collect();
        prop_assert!(multiset_distance(&spec.eigenvalues, &conj) <= 1e-6);
    }

    #[test]
    fn delta_branches_pin_omega(
        omega in 0.5..3.0f64, rho in 0.1..2.0f64, epsilon in -2.0..2.0f64, extra in 0.0..2.0f64, plus in any::<bool>()
    ) {
        let shift = if plus { epsilon - rho } else { epsilon + rho };
        let gamma = shift.abs() + extra;
        let delta = if plus { delta_plus(gamma, epsilon, rho) } else { delta_minus(gamma, epsilon, rho) }.unwrap();
        let p = ModelParams::new(omega, gamma, rho, epsilon, delta, -epsilon).unwrap();
        let spec = eig(&build_matrix(&p).unwrap(), &EigOptions::default()).unwrap();
        let cl = spec.nearest_cluster(c(omega, 0.0));
        prop_assert!(cl.algebraic >= 2);
        prop_assert!((cl.center - omega).norm() <= 1e-8);
    }

    #[test]
    fn discriminant_bounded_by_min_gap(p in params()) {
        let spec = eig(&build_matrix(&p).unwrap(), &EigOptions::default()).unwrap();
        let roots = &spec.roots;
        let mut gap = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                gap = gap.min((roots[i] - roots[j]).norm());
            }
        }
        let r = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let disc = discriminant_quartic(&spec.char_poly).unwrap().norm();
        prop_assert!(disc <= gap * gap * (2.0 * r).powi(10) * (1.0 + 1e-6) + 1e-9);
    }
}

#[test]
fn fig2_ep_has_rank_three_and_one_null_vector() {
    let p = ModelParams::new(2.0, 1.0, 0.5, -0.5, 1.0, 0.5).unwrap();
    let shifted = build_matrix(&p).unwrap().shifted(c(2.0, 0.0));
    assert_eq!(rank(&shifted, 1e-8), 3);
    assert_eq!(null_space(&shifted, 1e-8).len(), 1);
    assert_eq!(
        geometric_multiplicity(&build_matrix(&p).unwrap(), c(2.0, 0.0), 1e-6),
        1
    );
}

#[test]
fn branch_spectrum_agrees_with_matrix() {
    let (omega, gamma, rho, epsilon) = (2.0, 2.5, 1.0, -2.0);
    let delta = delta_minus(gamma, epsilon, rho).unwrap();
    let p = ModelParams::new(omega, gamma, rho, epsilon, delta, -epsilon).unwrap();
    let spec = eig(&build_matrix(&p).unwrap(), &EigOptions::default()).unwrap();
    let closed = branch_spectrum_minus(omega, gamma, rho, epsilon).unwrap();
    assert!(multiset_distance(&closed, &spec.eigenvalues) <= 1e-8);
}

#[test]
fn find_transitions_is_deterministic() {
    let family = SwansonFamily::new(
        ModelParams::new(2.0, 1.0, 0.5, 0.0, 0.0, 0.0).unwrap(),
        DeltaMode::AutoPlus,
        EtaMode::Auto,
        SweepParam::Epsilon,
    )
    .unwrap();
    let a = find_transitions(&family, -0.4, 1.4, 61, 1e-8).unwrap();
    let b = find_transitions(&family, -0.4, 1.4, 61, 1e-8).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn fig2_tracking_shows_bifurcation() {
    // below the EP one branch pair is complex, above it all four are real
    let cfg = SweepConfig::figure2();
    let family = cfg.family().unwrap();
    let ts: Vec<f64> = (0..=36).map(|k| -0.4 + 0.05 * k as f64).collect();
    let spectra: Vec<_> = ts
        .iter()
        .map(|&t| {
            eig(
                &build_matrix(&family.params_at(t).unwrap()).unwrap(),
                &EigOptions::default(),
            )
            .unwrap()
        })
        .collect();
    let branches = track_branches(&spectra);
    assert_eq!(branches.len(), 4);
    for (k, &t) in ts.iter().enumerate() {
        let complex = branches.iter().filter(|b| b[k].im.abs() > 1e-8).count();
        if t < 0.5 - 1e-9 {
            assert_eq!(complex, 2, "t={t}");
        } else {
            assert_eq!(complex, 0, "t={t}");
        }
    }
    // real branches separate from omega symmetrically past the EP
    let last = ts.len() - 1;
    let mut re: Vec<f64> = branches.iter().map(|b| b[last].re - 2.0).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + re[3]).abs() <= 1e-8 && re[1].abs() <= 1e-8 && re[2].abs() <= 1e-8);
}

#[test]
fn sweep_rows_are_consistent() {
    let mut cfg = SweepConfig::figure1();
    cfg.steps = 81;
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0].t, cfg.from);
    assert_eq!(rows[80].t, cfg.to);
    for r in &rows {
        let im = r.branches.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!((im - r.max_abs_im).abs() <= 1e-15);
        assert!(r.min_gap >= 0.0 && r.abs_disc >= 0.0);
    }
}

#[test]
fn constant_family_has_no_transitions() {
    let m = build_matrix(&ModelParams::new(1.0, 0.0, 0.3, 0.7, 0.0, 0.2).unwrap()).unwrap();
    let family = FnFamily::new("t", move |_t: f64| Ok(m.clone()));
    assert!(find_transitions(&family, 0.0, 1.0, 11, 1e-8)
        .unwrap()
        .is_empty());
}
