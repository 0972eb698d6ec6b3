use std::sync::Arc;

use curvheat::geometry::ModelSurface;
use curvheat::heatflow::{
    assemble_operator, euclidean_semigroup, probe_hessian_log, solve, ChartGrid, EuclideanDatum, Grid, PolarGrid,
    ScalarGridField, SolveOptions,
};
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

fn gaussian(s: f64) -> impl Fn([f64; 2]) -> f64 {
    move |xi| (-(xi[0] * xi[0] + xi[1] * xi[1]) / (4.0 * s)).exp()
}

#[test]
fn polar_operator_is_weighted_symmetric() {
    for s in [ModelSurface::flat(), ModelSurface::sphere(1.0).unwrap(), ModelSurface::hyperbolic(-1.0).unwrap()] {
        let g = Grid::Polar(PolarGrid::new(s, 1.2, 40, 64).unwrap());
        let op = assemble_operator(&g).unwrap();
        assert!(op.weighted_asymmetry(&g.weights()) < 1e-12);
    }
}

#[test]
fn operator_kills_constants_away_from_boundary() {
    let s = ModelSurface::sphere(1.0).unwrap();
    for g in [Grid::Polar(PolarGrid::new(s, 1.0, 40, 64).unwrap()), Grid::Chart(ChartGrid::new(s, 1.0, 40).unwrap())] {
        let op = assemble_operator(&g).unwrap();
        let ones = vec![1.0; g.len()];
        let lu = op.apply(&ones);
        for (k, v) in lu.iter().enumerate() {
            let p = g.point(k);
            if (p[0] * p[0] + p[1] * p[1]).sqrt() < 0.5 {
                assert!(v.abs() < 1e-9, "row {k}: {v}");
            }
        }
    }
}

#[test]
fn flat_gaussian_matches_semigroup() {
    let s = 0.05;
    let grid = Arc::new(Grid::Polar(PolarGrid::new(ModelSurface::flat(), 3.0, 120, 128).unwrap()));
    let sol = solve(grid, &gaussian(s), &[0.05], &SolveOptions::new(1e-3)).unwrap();
    let f = &sol.fields[0];
    for x in [0.0, 0.2, 0.5, 0.9] {
        let exact = euclidean_semigroup(&EuclideanDatum::Gaussian { amp: 1.0, s }, &[x, 0.0], f.t).unwrap();
        let got = f.at([x, 0.0]).unwrap();
        assert!((got - exact).abs() < 1e-3 * exact.max(1e-2), "x={x}: {got} vs {exact}");
    }
    let p = probe_hessian_log(f, [1.0, 0.0], 0.1).unwrap();
    let exact = -0.5 / (s + f.t);
    assert!((p.value - exact).abs() < 0.01 * exact.abs(), "{} vs {exact}", p.value);
    assert!(sol.invariants.ok(), "{:?}", sol.invariants.breaches);
}

#[test]
fn chart_and_polar_solvers_agree_on_sphere() {
    let s = ModelSurface::sphere(1.0).unwrap();
    let phi = gaussian(0.02);
    let opts = SolveOptions::new(5e-4);
    let a = solve(Arc::new(Grid::Polar(PolarGrid::new(s, 1.0, 96, 96).unwrap())), &phi, &[0.02], &opts).unwrap();
    let b = solve(Arc::new(Grid::Chart(ChartGrid::new(s, 1.0, 96).unwrap())), &phi, &[0.02], &opts).unwrap();
    for x in [0.0, 0.15, 0.3] {
        let (u, v) = (a.fields[0].at([x, 0.0]).unwrap(), b.fields[0].at([x, 0.0]).unwrap());
        assert!((u - v).abs() < 2e-3 * u, "x={x}: {u} vs {v}");
    }
}

#[test]
fn rejects_negative_datum() {
    let grid = Arc::new(Grid::Polar(PolarGrid::new(ModelSurface::flat(), 1.0, 32, 64).unwrap()));
    assert!(solve(grid, &|xi: [f64; 2]| xi[0], &[0.01], &SolveOptions::new(1e-3)).is_err());
}

#[test]
fn probe_rejects_too_narrow_stencil() {
    let grid = Arc::new(Grid::Polar(PolarGrid::new(ModelSurface::flat(), 1.0, 32, 64).unwrap()));
    let f = ScalarGridField::sample(grid, &gaussian(0.1));
    assert!(probe_hessian_log(&f, [1.0, 0.0], 0.01).is_err());
}

#[test]
fn half_line_and_ball_match_normal_cdf() {
    // the time-1 kernel is N(0, 2); statrs' cdf is good to about 1e-11
    let n = Normal::new(0.0, 2f64.sqrt()).unwrap();
    for &(x, t) in &[(0.3, 0.5), (-1.0, 2.0), (4.0, 0.1)] {
        let got = euclidean_semigroup(&EuclideanDatum::HalfLine, &[x], t).unwrap();
        assert!((got - n.cdf(x / t.sqrt())).abs() < 1e-10);
        let ball = euclidean_semigroup(&EuclideanDatum::BallIndicator { radius: 1.0, height: 2.0 }, &[x], t).unwrap();
        let exact = 2.0 * (n.cdf((1.0 - x) / t.sqrt()) - n.cdf((-1.0 - x) / t.sqrt()));
        assert!((ball - exact).abs() < 1e-10, "{ball} vs {exact}");
    }
}

#[test]
fn planar_ball_indicator_by_quadrature() {
    // at the centre the planar kernel integrates to 1 − e^{−r²/(4t)}
    let a = euclidean_semigroup(&EuclideanDatum::BallIndicator { radius: 0.5, height: 1.0 }, &[0.0, 0.0], 0.1).unwrap();
    let exact = 1.0 - (-0.25f64 / 0.4).exp();
    assert!((a - exact).abs() < 1e-10, "{a} vs {exact}");
    // off centre, against a Compact datum through the generic convolution
    let disk = EuclideanDatum::Compact {
        radius: 0.5,
        f: Arc::new(|y: &[f64]| if y[0] * y[0] + y[1] * y[1] <= 0.25 { 1.0 } else { 0.0 }),
    };
    let b = euclidean_semigroup(&EuclideanDatum::BallIndicator { radius: 0.5, height: 1.0 }, &[0.3, 0.4], 0.1).unwrap();
    let c = euclidean_semigroup(&disk, &[0.3, 0.4], 0.1).unwrap();
    assert!((b - c).abs() < 1e-3, "{b} vs {c}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn maximum_principle_and_mass_decay(
        amp in prop::collection::vec(0.0f64..1.0, 4),
        which in 0usize..3,
    ) {
        let s = [ModelSurface::flat(), ModelSurface::sphere(1.0).unwrap(), ModelSurface::hyperbolic(-1.0).unwrap()][which];
        let grid = Arc::new(Grid::Polar(PolarGrid::new(s, 1.0, 32, 64).unwrap()));
        let phi = move |xi: [f64; 2]| {
            let r2 = xi[0] * xi[0] + xi[1] * xi[1];
            let bump = (1.0 - r2).max(0.0);
            bump * (amp[0] + amp[1] * xi[0] * xi[0] + amp[2] * (1.0 + xi[1]) + amp[3] * (3.0 * xi[0]).cos().abs())
        };
        let sol = solve(grid, &phi, &[0.01, 0.02, 0.04], &SolveOptions::new(1e-3)).unwrap();
        prop_assert!(sol.invariants.ok(), "{:?}", sol.invariants.breaches);
        let sup0 = sol.initial.sup();
        let mut mass = sol.initial.mass();
        for f in &sol.fields {
            prop_assert!(f.min() >= -1e-8 * sup0.max(1e-300));
            prop_assert!(f.sup() <= sup0 * (1.0 + 1e-10));
            prop_assert!(f.mass() <= mass * (1.0 + 1e-10));
            mass = f.mass();
        }
    }

    #[test]
    fn gaussian_semigroup_is_a_semigroup(s in 0.01f64..1.0, t1 in 0.01f64..1.0, t2 in 0.01f64..1.0, x in -2.0f64..2.0) {
        let one = euclidean_semigroup(&EuclideanDatum::Gaussian { amp: 1.0, s }, &[x], t1 + t2).unwrap();
        let two = euclidean_semigroup(&EuclideanDatum::Gaussian { amp: (s / (s + t1)).sqrt(), s: s + t1 }, &[x], t2).unwrap();
        prop_assert!((one - two).abs() < 1e-13);
    }
}
