//! Oracle agreement of the characteristic-functional moment engine against
//! analytic norm moments and Monte Carlo.

use moment_ineq::cf_moments::{
    norm_moment_mc, norm_moment_via_cf, Covariance, MagnitudeLaw, RandomVectorModel,
};
use moment_ineq::kernels::MomentOrder;
use moment_ineq::quadrature::QuadratureConfig;
use moment_ineq::rng::{CounterRng, RunningStats};

const P_SWEEP: [f64; 5] = [0.5, 1.0, 1.3, 1.9, 3.1];

fn catalog_with_analytic(d: usize) -> Vec<(String, RandomVectorModel<f64>)> {
    let mut x = vec![0.0; d];
    x[0] = 0.8;
    if d > 1 {
        x[d - 1] = -0.6;
    }
    vec![
        (
            format!("gaussian(0, I_{d})"),
            RandomVectorModel::standard_gaussian(d).unwrap(),
        ),
        (
            format!("gaussian(0, 0.5 I_{d})"),
            RandomVectorModel::gaussian(vec![0.0; d], Covariance::Scalar(0.5)).unwrap(),
        ),
        (
            format!("point_mass d={d}"),
            RandomVectorModel::point_mass(x.clone()).unwrap(),
        ),
        (
            format!("symmetric_two_point d={d}"),
            RandomVectorModel::symmetric_two_point(x.clone()).unwrap(),
        ),
        (
            format!("scaled_rademacher d={d}"),
            RandomVectorModel::scaled_rademacher(
                x,
                MagnitudeLaw::Atoms(vec![(0.25, 0.5), (0.5, 1.0), (0.25, 2.0)]),
            )
            .unwrap(),
        ),
        (
            format!("uniform_sphere d={d}"),
            RandomVectorModel::uniform_sphere(d, 1.4).unwrap(),
        ),
        (
            format!("mixture d={d}"),
            RandomVectorModel::finite_mixture(vec![
                (0.3, RandomVectorModel::standard_gaussian(d).unwrap()),
                (0.7, RandomVectorModel::uniform_sphere(d, 2.0).unwrap()),
            ])
            .unwrap(),
        ),
    ]
}

/// cf route vs analytic closed forms, deterministic sphere rules (d <= 3).
#[test]
fn cf_route_matches_analytic_catalog() {
    let cfg = QuadratureConfig::<f64>::cf_moments();
    for d in 1..=3usize {
        for (name, model) in catalog_with_analytic(d) {
            for &p_val in &P_SWEEP {
                let p = MomentOrder::non_even(p_val).unwrap();
                let want = model.analytic_norm_moment(p_val).expect("catalog analytic");
                let got = norm_moment_via_cf(&model, &p, &cfg).unwrap();
                assert!(
                    ((got.value - want) / want).abs() <= 1e-3,
                    "{name} p={p_val}: cf {} vs analytic {want} (bound {:e})",
                    got.value,
                    got.error_bound
                );
            }
        }
    }
}

/// cf route vs Monte Carlo at d = 8 through the Monte Carlo sphere rule.
#[test]
fn cf_route_matches_monte_carlo_d8() {
    let d = 8usize;
    let mut cfg = QuadratureConfig::<f64>::cf_moments().with_dimension(d);
    cfg.sphere_nodes_or_samples = 3_000;
    cfg.seed = 404;
    cfg.use_isotropy_shortcut = false;
    let model = RandomVectorModel::<f64>::standard_gaussian(d).unwrap();
    for &p_val in &[1.3f64, 3.1] {
        let p = MomentOrder::non_even(p_val).unwrap();
        let cf = norm_moment_via_cf(&model, &p, &cfg).unwrap();
        let mc = norm_moment_mc(&model, p_val, 1_000_000, 505).unwrap();
        let sigma = (cf.std_error.unwrap_or(0.0).powi(2) + mc.std_error.powi(2)).sqrt();
        assert!(
            (cf.value - mc.value).abs() <= 4.0 * sigma + cf.error_bound,
            "p={p_val}: cf {} vs mc {} (sigma {sigma:e})",
            cf.value,
            mc.value
        );
    }
}

/// Scaling law: the moment of c X is |c|^p times the moment of X.
#[test]
fn cf_route_scaling_law() {
    let cfg = QuadratureConfig::<f64>::cf_moments();
    let base = RandomVectorModel::gaussian(vec![0.4, -0.2], Covariance::Scalar(0.8)).unwrap();
    let p = MomentOrder::non_even(1.3).unwrap();
    let m0 = norm_moment_via_cf(&base, &p, &cfg).unwrap().value;
    for &c in &[0.5f64, 2.0] {
        let scaled = base.scaled(c).unwrap();
        let got = norm_moment_via_cf(&scaled, &p, &cfg).unwrap().value;
        let want = c.abs().powf(1.3) * m0;
        assert!(
            ((got - want) / want).abs() < 1e-4,
            "c={c}: {got} vs scaled {want}"
        );
    }
}

/// The integrand of the cf radial integral vanishes identically for a point
/// mass at the origin.
#[test]
fn point_mass_at_origin_has_zero_moment() {
    let cfg = QuadratureConfig::<f64>::cf_moments();
    let model = RandomVectorModel::point_mass(vec![0.0, 0.0]).unwrap();
    let p = MomentOrder::non_even(1.3).unwrap();
    let got = norm_moment_via_cf(&model, &p, &cfg).unwrap();
    assert_eq!(got.value, 0.0);
    assert_eq!(got.error_bound, 0.0);
}

/// Sampler-vs-cf contract: the empirical average of cos(t . X) matches the
/// closed-form Re f_X(t) within four standard errors on probe vectors.
#[test]
fn sampler_matches_cf_on_probes() {
    let models: Vec<(&str, RandomVectorModel<f64>)> = vec![
        (
            "gaussian",
            RandomVectorModel::gaussian(vec![0.5, -1.0], Covariance::Scalar(1.3)).unwrap(),
        ),
        ("sphere", RandomVectorModel::uniform_sphere(2, 1.7).unwrap()),
        (
            "sum",
            RandomVectorModel::independent_sum(vec![
                RandomVectorModel::standard_gaussian(2).unwrap(),
                RandomVectorModel::symmetric_two_point(vec![1.0, 0.5]).unwrap(),
            ])
            .unwrap(),
        ),
        (
            "mixture",
            RandomVectorModel::finite_mixture(vec![
                (0.5, RandomVectorModel::point_mass(vec![1.0, 0.0]).unwrap()),
                (0.5, RandomVectorModel::uniform_sphere(2, 0.5).unwrap()),
            ])
            .unwrap(),
        ),
    ];
    let probes = [[0.3, 0.1], [1.0, -0.7], [2.5, 1.5]];
    for (name, model) in &models {
        for t in &probes {
            let want = model.evaluate_re(t);
            let mut stats = RunningStats::<f64>::new();
            let mut x = [0.0f64; 2];
            for i in 0..200_000u64 {
                let mut rng = CounterRng::new(0xCF0, i);
                model.sample_into(&mut rng, &mut x);
                stats.push((t[0] * x[0] + t[1] * x[1]).cos());
            }
            let se = stats.std_error().max(1e-9);
            assert!(
                (stats.mean() - want).abs() <= 4.0 * se,
                "{name} t={t:?}: mc {} vs cf {want} (se {se:e})",
                stats.mean()
            );
        }
    }
}

/// General-dimension sphere profiles go through the numeric-profile route
/// (beta-density quadrature for the evaluator, alternating-segment tail);
/// the constant norm is an exact oracle for it.
#[test]
fn cf_route_uniform_sphere_high_dimension() {
    let mut cfg = QuadratureConfig::<f64>::cf_moments().with_dimension(6);
    cfg.seed = 606;
    let model = RandomVectorModel::<f64>::uniform_sphere(6, 1.3).unwrap();
    for &p_val in &[0.7f64, 1.3, 3.1] {
        let p = MomentOrder::non_even(p_val).unwrap();
        let want = 1.3f64.powf(p_val);
        let got = norm_moment_via_cf(&model, &p, &cfg).unwrap();
        assert!(
            ((got.value - want) / want).abs() <= 1e-3,
            "p={p_val}: cf {} vs exact {want} (bound {:e})",
            got.value,
            got.error_bound
        );
    }
}
