use serde::Serialize;

use crate::geometry::{CurvatureData, Jet, ScalarField};

/// The polynomial
///
/// `ψ = 2λ Σ_{I₊} ξ^i − λ² Σ_{i≥2} (ξ^i)² + ⅔λ (ξ¹)² Σ_{I₊} κ_i ξ^i
///      − (ξ¹)² [C(1+λ)|ξ|² + λ² Σ_{I₊} κ_i (ξ^i)²]`
///
/// in normal coordinates adapted to the curvature basis (index 0 is `ξ¹`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Psi {
    lambda: f64,
    c: f64,
    /// `κ_i 𝟙_{I₊}(i)`, zero at index 0.
    kappa_plus: Vec<f64>,
    /// `𝟙_{I₊}(i)`.
    plus: Vec<bool>,
}

impl Psi {
    pub fn new(curv: &CurvatureData, c: f64, lambda: f64) -> Self {
        let n = curv.n();
        let plus: Vec<bool> = (0..n).map(|i| curv.in_i_plus(i)).collect();
        let kappa_plus = (0..n).map(|i| if plus[i] { curv.kappa()[i] } else { 0.0 }).collect();
        Psi { lambda, c, kappa_plus, plus }
    }

    pub fn dim(&self) -> usize {
        self.plus.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    fn sums(&self, xi: &[f64]) -> (f64, f64, f64) {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let s1: f64 = (1..xi.len()).map(|i| self.kappa_plus[i] * xi[i]).sum();
        let s2: f64 = (1..xi.len()).map(|i| self.kappa_plus[i] * xi[i] * xi[i]).sum();
        (r2, s1, s2)
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let l = self.lambda;
        let cl = self.c * (1.0 + l);
        let (r2, s1, s2) = self.sums(xi);
        let x1 = xi[0];
        let mut lin = 0.0;
        let mut quad = 0.0;
        for i in 1..xi.len() {
            if self.plus[i] {
                lin += xi[i];
            }
            quad += xi[i] * xi[i];
        }
        2.0 * l * lin - l * l * quad + (2.0 / 3.0) * l * x1 * x1 * s1 - x1 * x1 * (cl * r2 + l * l * s2)
    }

    /// Value, gradient and coordinate Hessian in any dimension.
    pub fn jet_n(&self, xi: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let n = xi.len();
        let l = self.lambda;
        let l2 = l * l;
        let cl = self.c * (1.0 + l);
        let (r2, s1, s2) = self.sums(xi);
        let x1 = xi[0];
        let mut g = vec![0.0; n];
        let mut h = vec![vec![0.0; n]; n];
        g[0] = (4.0 / 3.0) * l * x1 * s1 - 2.0 * x1 * (cl * r2 + l2 * s2) - 2.0 * cl * x1.powi(3);
        h[0][0] = (4.0 / 3.0) * l * s1 - 2.0 * (cl * r2 + l2 * s2) - 10.0 * cl * x1 * x1;
        for i in 1..n {
            let kp = self.kappa_plus[i];
            let ind = if self.plus[i] { 1.0 } else { 0.0 };
            g[i] = 2.0 * l * ind - 2.0 * l2 * xi[i] + (2.0 / 3.0) * l * x1 * x1 * kp
                - x1 * x1 * (2.0 * cl * xi[i] + 2.0 * l2 * kp * xi[i]);
            let h1i = (4.0 / 3.0) * l * x1 * kp - 2.0 * x1 * (2.0 * cl * xi[i] + 2.0 * l2 * kp * xi[i]);
            h[0][i] = h1i;
            h[i][0] = h1i;
            h[i][i] = -2.0 * l2 - x1 * x1 * (2.0 * cl + 2.0 * l2 * kp);
        }
        (self.eval(xi), g, h)
    }
}

impl ScalarField for Psi {
    fn value(&self, xi: [f64; 2]) -> f64 {
        self.eval(&xi)
    }

    fn jet(&self, xi: [f64; 2]) -> Option<Jet> {
        let (value, g, h) = self.jet_n(&xi);
        Some(Jet { value, grad: [g[0], g[1]], hess: [[h[0][0], h[0][1]], [h[1][0], h[1][1]]] })
    }
}
