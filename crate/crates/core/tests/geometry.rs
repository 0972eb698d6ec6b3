#![allow(clippy::needless_range_loop)]

use curvheat::geometry::{
    christoffel_at, covariant_hessian_matrix, curvature_data, geodesic, laplace_beltrami, metric_at, ModelSurface,
    NormalPoint,
};
use proptest::prelude::*;

fn surfaces() -> [ModelSurface; 3] {
    [ModelSurface::flat(), ModelSurface::sphere(1.0).unwrap(), ModelSurface::hyperbolic(-1.0).unwrap()]
}

// second-order normal-coordinate expansions with R_ikjl = K(δ_ij δ_kl − δ_il δ_kj)
fn metric_taylor(k: f64, xi: [f64; 2]) -> [[f64; 2]; 2] {
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    let mut g = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let d = if i == j { 1.0 } else { 0.0 };
            g[i][j] = d - k / 3.0 * (d * r2 - xi[i] * xi[j]);
        }
    }
    g
}

fn christoffel_taylor(k: f64, xi: [f64; 2], a: usize, i: usize, j: usize) -> f64 {
    let d = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
    -k / 3.0 * (d(a, j) * xi[i] + d(a, i) * xi[j] - 2.0 * d(i, j) * xi[a])
}

fn taylor_errors(s: &ModelSurface, xi: [f64; 2]) -> (f64, f64) {
    let p = NormalPoint { xi };
    let m = metric_at(s, p).unwrap();
    let c = christoffel_at(s, p).unwrap();
    let gt = metric_taylor(s.curvature(), xi);
    let mut em: f64 = 0.0;
    let mut ec: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            em = em.max((m.g[i][j] - gt[i][j]).abs());
            for a in 0..2 {
                ec = ec.max((c.get(a, i, j) - christoffel_taylor(s.curvature(), xi, a, i, j)).abs());
            }
        }
    }
    (em, ec)
}

#[test]
fn metric_remainder_is_fourth_order() {
    for s in &surfaces() {
        let dir = [0.6, -0.8];
        let mut prev = None;
        for k in 0..5 {
            let r = 0.2 / 2f64.powi(k);
            let (em, _) = taylor_errors(s, [r * dir[0], r * dir[1]]);
            if s.curvature() == 0.0 {
                assert!(em < 1e-15);
                continue;
            }
            assert!(em < 0.1 * r.powi(4), "{:?} r={r} err={em}", s.kind());
            if let Some(p) = prev {
                let ratio: f64 = p / em;
                assert!((ratio.log2() - 4.0).abs() < 0.1, "order {}", ratio.log2());
            }
            prev = Some(em);
        }
    }
}

#[test]
fn christoffel_remainder_is_third_order() {
    for s in &surfaces() {
        let mut prev = None;
        for k in 0..5 {
            let r = 0.2 / 2f64.powi(k);
            let (_, ec) = taylor_errors(s, [0.28 * r / 0.35, 0.21 * r / 0.35]);
            if s.curvature() == 0.0 {
                assert!(ec < 1e-15);
                continue;
            }
            if let Some(p) = prev {
                let ratio: f64 = p / ec;
                assert!((ratio.log2() - 3.0).abs() < 0.1, "order {}", ratio.log2());
            }
            prev = Some(ec);
        }
    }
}

#[test]
fn curvature_tables_are_exactly_symmetric() {
    for s in &surfaces() {
        let c = curvature_data(s);
        assert_eq!(c.symmetry_defect(), 0.0);
        assert_eq!(c.r(0, 1, 0, 1), -s.curvature());
        assert_eq!(c.r(0, 1, 1, 0), s.curvature());
    }
}

#[test]
fn laplacian_of_distance_squared() {
    // Δ(ρ²) = 2 + 2ρ·s_K'(ρ)/s_K(ρ)
    for s in &surfaces() {
        let f = |xi: [f64; 2]| xi[0] * xi[0] + xi[1] * xi[1];
        let p = NormalPoint::from_polar(0.7, 0.4);
        let rho: f64 = 0.7;
        let exact = 2.0 + 2.0 * rho * s.s_k_prime(rho) / s.s_k(rho);
        let got = laplace_beltrami(s, &f, p).unwrap();
        assert!((got - exact).abs() < 1e-5, "{:?}: {got} vs {exact}", s.kind());
    }
}

#[test]
fn hessian_of_distance_squared_at_origin() {
    for s in &surfaces() {
        let f = |xi: [f64; 2]| xi[0] * xi[0] + xi[1] * xi[1];
        let h = covariant_hessian_matrix(s, &f, NormalPoint::origin()).unwrap();
        assert!((h[0][0] - 2.0).abs() < 1e-6 && h[0][1].abs() < 1e-6 && (h[1][1] - 2.0).abs() < 1e-6);
    }
}

proptest! {
    #[test]
    fn metric_is_spd_and_inverse_is_consistent(r in 0.0f64..1.4, th in 0.0f64..6.3, which in 0usize..3) {
        let s = surfaces()[which];
        let m = metric_at(&s, NormalPoint::from_polar(r, th)).unwrap();
        let det = m.g[0][0] * m.g[1][1] - m.g[0][1] * m.g[1][0];
        prop_assert!(m.g[0][0] > 0.0 && det > 0.0);
        prop_assert!((m.g[0][1] - m.g[1][0]).abs() < 1e-15);
        prop_assert!((det.sqrt() - m.sqrt_det).abs() < 1e-12 * det.sqrt().max(1.0));
        for i in 0..2 {
            for j in 0..2 {
                let e: f64 = (0..2).map(|k| m.g[i][k] * m.g_inv[k][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((e - id).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn christoffel_is_odd_and_symmetric(r in 0.01f64..1.4, th in 0.0f64..6.3, which in 1usize..3) {
        let s = surfaces()[which];
        let p = NormalPoint::from_polar(r, th);
        let q = NormalPoint { xi: [-p.xi[0], -p.xi[1]] };
        let a = christoffel_at(&s, p).unwrap();
        let b = christoffel_at(&s, q).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((a.get(k, i, j) + b.get(k, i, j)).abs() < 1e-13);
                    prop_assert!((a.get(k, i, j) - a.get(k, j, i)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn geodesic_length_is_symmetric(
        a in (-0.5f64..0.5, -0.5f64..0.5),
        b in (-0.5f64..0.5, -0.5f64..0.5),
        which in 0usize..3,
    ) {
        let s = surfaces()[which];
        let p = NormalPoint::new(a.0, a.1);
        let q = NormalPoint::new(b.0, b.1);
        let pq = geodesic(&s, p, q).unwrap().length(&s);
        let qp = geodesic(&s, q, p).unwrap().length(&s);
        prop_assert!((pq - qp).abs() < 1e-6 * pq.max(1e-3));
        let euclid = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        if which == 0 {
            prop_assert!((pq - euclid).abs() < 1e-9);
        }
    }
}
