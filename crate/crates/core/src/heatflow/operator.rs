use rayon::prelude::*;

use super::grid::{ChartGrid, Grid, PolarGrid};
use crate::error::{Error, Result};
use crate::geometry::{christoffel_at, metric_at, NormalPoint};

/// Row-compressed discrete Laplace–Beltrami operator with homogeneous
/// Dirichlet data folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, v) in r {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).into_par_iter().map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// Largest `|W_i L_ij − W_j L_ji|` relative to `max |W_i L_ij|`.
    pub fn weighted_asymmetry(&self, w: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let a = w[i] * v;
                scale = scale.max(a.abs());
                worst = worst.max((a - w[j] * self.get(j, i)).abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    /// Triplets of `I − c·L`.
    pub(crate) fn shifted_triplets(&self, c: f64) -> Vec<faer::sparse::Triplet<usize, usize, f64>> {
        let mut t = Vec::with_capacity(self.nnz() + self.n);
        for i in 0..self.n {
            t.push(faer::sparse::Triplet::new(i, i, 1.0));
            for (j, v) in self.row(i) {
                t.push(faer::sparse::Triplet::new(i, j, -c * v));
            }
        }
        t
    }
}

fn assemble_polar(g: &PolarGrid) -> Vec<Vec<(usize, f64)>> {
    let s = |r: f64| g.surface().s_k(r);
    let h = g.h_rho();
    let ht = g.h_theta();
    let nr = g.n_rho();
    let nt = g.n_theta();
    let w = g.weights();
    let mut rows = vec![Vec::new(); g.len()];
    let pole_flux = s(0.5 * h) * ht / h;
    for j in 0..nt {
        let k = g.index(1, j);
        rows[0].push((k, pole_flux / w[0]));
        rows[0].push((0, -pole_flux / w[0]));
    }
    for i in 1..nr {
        let rho = i as f64 * h;
        let out = s(rho + 0.5 * h) * ht / h;
        let inn = s(rho - 0.5 * h) * ht / h;
        let ang = h / (s(rho) * ht);
        for j in 0..nt {
            let k = g.index(i, j);
            let a = w[k];
            let mut r = Vec::with_capacity(5);
            let inner = if i == 1 { 0 } else { g.index(i - 1, j) };
            r.push((inner, inn / a));
            if i + 1 < nr {
                r.push((g.index(i + 1, j), out / a));
            }
            r.push((g.index(i, j + 1), ang / a));
            r.push((g.index(i, j + nt - 1), ang / a));
            r.push((k, -(out + inn + 2.0 * ang) / a));
            rows[k] = r;
        }
    }
    rows
}

fn assemble_chart(g: &ChartGrid) -> Result<Vec<Vec<(usize, f64)>>> {
    let h = g.h();
    let h2 = h * h;
    (0..g.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = g.lattice(k);
            let p = NormalPoint { xi: g.point(k) };
            let m = metric_at(g.surface(), p)?;
            let gam = christoffel_at(g.surface(), p)?;
            let gi = m.g_inv;
            let mut b = [0.0; 2];
            for (kk, bk) in b.iter_mut().enumerate() {
                for a in 0..2 {
                    for c in 0..2 {
                        *bk -= gi[a][c] * gam.get(kk, a, c);
                    }
                }
            }
            let mut r = Vec::with_capacity(9);
            let mut push = |di: i64, dj: i64, v: f64| {
                if let Some(q) = g.index_of(i + di, j + dj) {
                    r.push((q, v));
                }
            };
            push(0, 0, -2.0 * (gi[0][0] + gi[1][1]) / h2);
            push(1, 0, gi[0][0] / h2 + b[0] / (2.0 * h));
            push(-1, 0, gi[0][0] / h2 - b[0] / (2.0 * h));
            push(0, 1, gi[1][1] / h2 + b[1] / (2.0 * h));
            push(0, -1, gi[1][1] / h2 - b[1] / (2.0 * h));
            let c = gi[0][1] / (2.0 * h2);
            if c != 0.0 {
                push(1, 1, c);
                push(-1, -1, c);
                push(1, -1, -c);
                push(-1, 1, -c);
            }
            Ok(r)
        })
        .collect()
}

/// Assemble the discrete Dirichlet Laplace–Beltrami operator of `grid`.
///
/// The polar operator is checked to be symmetric in the cell-area inner
/// product; a failure indicates a geometry bug and is reported as such.
pub fn assemble_operator(grid: &Grid) -> Result<SparseOperator> {
    let rows = match grid {
        Grid::Polar(g) => assemble_polar(g),
        Grid::Chart(g) => assemble_chart(g)?,
    };
    let op = SparseOperator::from_rows(rows);
    if op.vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical { stage: "operator assembly".into(), residual: f64::NAN });
    }
    if grid.is_symmetric() {
        let asym = op.weighted_asymmetry(&grid.weights());
        if asym > 1e-12 {
            return Err(Error::Invariant(format!("polar operator not self-adjoint: asymmetry {asym:e}")));
        }
    }
    Ok(op)
}
