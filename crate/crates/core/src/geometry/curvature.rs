use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::surface::ModelSurface;
use crate::error::{Error, Result};

/// Curvature tensor at `o` in an orthonormal basis adapted to `e₁`.
///
/// The basis keeps `e₁` and diagonalises `[R_{1i1j}]_{i,j≥2}`, so that
/// `R_{1i1j} = −κ_i δ_ij` holds exactly in the stored components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureData {
    n: usize,
    r: Vec<f64>,
    kappa: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

/// The eight index permutations generated by the curvature symmetries, with signs.
fn orbit(i: usize, j: usize, k: usize, l: usize) -> [([usize; 4], f64); 8] {
    [
        ([i, j, k, l], 1.0),
        ([j, i, k, l], -1.0),
        ([i, j, l, k], -1.0),
        ([j, i, l, k], 1.0),
        ([k, l, i, j], 1.0),
        ([l, k, i, j], -1.0),
        ([k, l, j, i], -1.0),
        ([l, k, j, i], 1.0),
    ]
}

fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// Largest deviation from the symmetries, and the orbit-averaged table.
fn symmetrize(n: usize, r: &[f64]) -> (f64, Vec<f64>) {
    let mut out = vec![0.0; r.len()];
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let o = orbit(i, j, k, l);
                    let mut mean = 0.0;
                    for (p, s) in o.iter() {
                        mean += s * r[idx(n, p[0], p[1], p[2], p[3])];
                    }
                    mean /= 8.0;
                    defect = defect.max((r[idx(n, i, j, k, l)] - mean).abs());
                    out[idx(n, i, j, k, l)] = mean;
                }
            }
        }
    }
    (defect, out)
}

/// Writes `value` (with signs) onto the whole symmetry orbit of `(i,j,k,l)`.
fn set_orbit(n: usize, r: &mut [f64], ijkl: [usize; 4], value: f64) {
    for (p, s) in orbit(ijkl[0], ijkl[1], ijkl[2], ijkl[3]).iter() {
        r[idx(n, p[0], p[1], p[2], p[3])] = s * value;
    }
}

/// Makes the symmetries hold bit-exactly by copying one representative per orbit.
fn snap(n: usize, r: &mut [f64]) {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let o = orbit(i, j, k, l);
                    let rep =
                        o.iter().map(|(p, s)| (idx(n, p[0], p[1], p[2], p[3]), *s)).min_by_key(|(q, _)| *q).unwrap();
                    if rep.0 == idx(n, i, j, k, l) {
                        let v = rep.1 * r[rep.0];
                        let v = if i == j || k == l { 0.0 } else { v };
                        set_orbit(n, r, [i, j, k, l], v);
                    }
                }
            }
        }
    }
}

impl CurvatureData {
    /// Builds curvature data from a raw table `R[((i·n + j)·n + k)·n + l]`.
    ///
    /// The table is checked against the symmetries (absolute tolerance
    /// `tol·(1 + max|R|)`), averaged over symmetry orbits, and rotated to the
    /// eigenbasis of `[R_{1i1j}]`.
    pub fn from_table(n: usize, r: &[f64], tol: f64) -> Result<Self> {
        if n < 2 || r.len() != n.pow(4) {
            return Err(Error::Domain(format!(
                "curvature table needs n ≥ 2 and n⁴ entries (n = {n}, len = {})",
                r.len()
            )));
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("curvature table has non-finite entries".into()));
        }
        let scale = 1.0 + r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let (defect, mut sym) = symmetrize(n, r);
        if defect > tol * scale {
            return Err(Error::InvalidCurvature { defect, tolerance: tol * scale });
        }
        snap(n, &mut sym);

        // Eigen-decomposition of M_ij = −R_{1i1j}, i,j ≥ 2.
        let m = n - 1;
        let mat = DMatrix::from_fn(m, m, |a, b| {
            let v = -sym[idx(n, 0, a + 1, 0, b + 1)];
            let w = -sym[idx(n, 0, b + 1, 0, a + 1)];
            0.5 * (v + w)
        });
        let eig = SymmetricEigen::new(mat);
        let mut pairs: Vec<(f64, Vec<f64>, usize)> = (0..m)
            .map(|c| {
                let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
                // Sign: largest-magnitude component (first on ties) positive.
                let lead = v
                    .iter()
                    .enumerate()
                    .fold((0, 0.0f64), |(bi, bv), (i, x)| if x.abs() > bv + 1e-12 { (i, x.abs()) } else { (bi, bv) })
                    .0;
                if v[lead] < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                (eig.eigenvalues[c], v, lead)
            })
            .collect();
        // Descending κ; ties by the original coordinate the eigenvector lives on.
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.2.cmp(&y.2)));

        let mut basis = vec![vec![0.0; n]; n];
        basis[0][0] = 1.0;
        for (c, (_, v, _)) in pairs.iter().enumerate() {
            basis[c + 1][1..=m].copy_from_slice(&v[..m]);
        }
        // R'_{abcd} = Σ P_ia P_jb P_kc P_ld R_ijkl with P[i][a] = basis[a][i].
        let mut cur = sym;
        for slot in 0..4 {
            let mut next = vec![0.0; cur.len()];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let mut ids = [i, j, k, l];
                            let mut acc = 0.0;
                            let target = ids[slot];
                            for s in 0..n {
                                ids[slot] = s;
                                acc += basis[target][s] * cur[idx(n, ids[0], ids[1], ids[2], ids[3])];
                            }
                            next[idx(n, i, j, k, l)] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        snap(n, &mut cur);
        let mut kappa = vec![0.0; n];
        for (c, (val, _, _)) in pairs.iter().enumerate() {
            kappa[c + 1] = *val;
        }
        for a in 1..n {
            for b in 1..n {
                let v = if a == b { -kappa[a] } else { 0.0 };
                set_orbit(n, &mut cur, [0, a, 0, b], v);
            }
        }
        Ok(CurvatureData { n, r: cur, kappa, basis })
    }

    /// Curvature of a model surface: `R_{ijkl} = −K(δ_ik δ_jl − δ_il δ_jk)`.
    pub fn from_surface(surface: &ModelSurface) -> Self {
        let k = surface.curvature();
        let mut r = vec![0.0; 16];
        for i in 0..2 {
            for j in 0..2 {
                for kk in 0..2 {
                    for l in 0..2 {
                        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                        r[idx(2, i, j, kk, l)] = -k * (d(i, kk) * d(j, l) - d(i, l) * d(j, kk));
                    }
                }
            }
        }
        Self::from_table(2, &r, 1e-12).expect("model-surface table is symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `R_ijkl` in the stored basis (0-based indices).
    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r[idx(self.n, i, j, k, l)]
    }

    pub fn table(&self) -> &[f64] {
        &self.r
    }

    /// `κ_i` with `κ₁ = 0` at index 0, then descending.
    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// Basis vectors in the input coordinates; `basis()[a]` is `e_{a+1}`.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Indices `i ≥ 1` (0-based) with `κ_i > 0`.
    pub fn i_plus(&self) -> Vec<usize> {
        (1..self.n).filter(|&i| self.kappa[i] > 0.0).collect()
    }

    pub fn in_i_plus(&self, i: usize) -> bool {
        i >= 1 && self.kappa[i] > 0.0
    }

    /// Largest violation of the symmetries (zero after construction).
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.r(i, j, k, l);
                        worst = worst
                            .max((v + self.r(j, i, k, l)).abs())
                            .max((v + self.r(i, j, l, k)).abs())
                            .max((v - self.r(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Curvature data of a model surface (`n = 2`).
pub fn curvature_data(surface: &ModelSurface) -> CurvatureData {
    CurvatureData::from_surface(surface)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_hyperbolic_kappa() {
        let s = curvature_data(&ModelSurface::sphere(1.0).unwrap());
        assert_eq!(s.kappa(), &[0.0, 1.0]);
        assert_eq!(s.r(0, 1, 0, 1), -1.0);
        let h = curvature_data(&ModelSurface::hyperbolic(-1.0).unwrap());
        assert_eq!(h.kappa(), &[0.0, -1.0]);
        assert!(h.i_plus().is_empty());
    }

    #[test]
    fn rejects_asymmetric_table() {
        let mut r = vec![0.0; 16];
        r[idx(2, 0, 1, 0, 1)] = -2.0;
        let err = CurvatureData::from_table(2, &r, 1e-10).unwrap_err();
        assert!(matches!(err, Error::InvalidCurvature { .. }));
    }
}
