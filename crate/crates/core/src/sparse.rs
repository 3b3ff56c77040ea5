//! Compressed sparse row storage and a preconditioned conjugate gradient solver.

use crate::error::SolveError;

/// Square CSR matrix with a structurally symmetric pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    /// Assemble from `(row, col, value)` triplets, summing duplicates.
    ///
    /// Mirror positions are added as explicit zeros so the pattern is
    /// symmetric even when only one triangle is supplied.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self, SolveError> {
        let mut all = Vec::with_capacity(2 * entries.len());
        for &(r, c, v) in entries {
            if r >= n || c >= n {
                return Err(SolveError::IndexOutOfRange { row: r, col: c, n });
            }
            all.push((r, c, v));
            if r != c {
                all.push((c, r, 0.0));
            }
        }
        all.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(all.len());
        let mut values: Vec<f64> = Vec::with_capacity(all.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in all {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                cols.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(SparseSym {
            n,
            row_ptr,
            cols,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseSym {
            n,
            row_ptr: (0..=n).collect(),
            cols: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let s = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.cols[s.clone()], &self.values[s])
    }

    /// Storage index of entry `(r, c)` if it is in the pattern.
    pub fn position(&self, r: usize, c: usize) -> Option<usize> {
        let s = self.row_ptr[r];
        self.cols[s..self.row_ptr[r + 1]]
            .binary_search(&c)
            .ok()
            .map(|o| s + o)
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.position(r, c).map_or(0.0, |p| self.values[p])
    }

    /// Same pattern, all values zero.
    pub fn zeroed(&self) -> Self {
        SparseSym {
            values: vec![0.0; self.values.len()],
            ..self.clone()
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    /// `self += s * other`; both must share the pattern.
    pub fn add_scaled(&mut self, s: f64, other: &SparseSym) {
        assert_eq!(self.cols, other.cols, "patterns differ");
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += s * b;
        }
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[p] * x[self.cols[p]];
            }
            *yr = acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// Symmetric elimination of fixed unknowns.
    ///
    /// Rows and columns of fixed entries become identity, their known values
    /// move to the right-hand side.
    pub fn apply_dirichlet(&mut self, fixed: &[(usize, f64)], rhs: &mut [f64]) {
        let mut value = vec![None; self.n];
        for &(v, x) in fixed {
            value[v] = Some(x);
        }
        for r in 0..self.n {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[p];
                match (value[r], value[c]) {
                    (None, Some(x)) => {
                        rhs[r] -= self.values[p] * x;
                        self.values[p] = 0.0;
                    }
                    (Some(_), _) => self.values[p] = if r == c { 1.0 } else { 0.0 },
                    (None, None) => {}
                }
            }
        }
        for &(v, x) in fixed {
            rhs[v] = x;
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (r, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] += v;
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preconditioner {
    None,
    #[default]
    Jacobi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `|b - A x| / |b|`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned conjugate gradients from initial guess `x0`.
pub fn cg(
    a: &SparseSym,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    maxiter: usize,
    precond: Preconditioner,
) -> Result<CgResult, SolveError> {
    cg_with_monitor(a, b, x0, tol, maxiter, precond, |_, _| {})
}

/// As [`cg`], calling `monitor(iteration, x)` after every update.
pub fn cg_with_monitor(
    a: &SparseSym,
    b: &[f64],
    x0: &[f64],
    tol: f64,
    maxiter: usize,
    precond: Preconditioner,
    mut monitor: impl FnMut(usize, &[f64]),
) -> Result<CgResult, SolveError> {
    let n = a.dim();
    for len in [b.len(), x0.len()] {
        if len != n {
            return Err(SolveError::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
    }
    let inv_diag: Vec<f64> = match precond {
        Preconditioner::None => vec![1.0; n],
        Preconditioner::Jacobi => a
            .diagonal()
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
            .collect(),
    };
    let diag_scale = a
        .diagonal()
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
        .max(f64::MIN_POSITIVE);
    let bnorm = dot(b, b).sqrt().max(1e-300);
    let mut x = x0.to_vec();
    let mut r = a.matvec(&x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut res = dot(&r, &r).sqrt() / bnorm;
    if !res.is_finite() {
        return Err(SolveError::NonFinite(0));
    }
    if res <= tol {
        return Ok(CgResult {
            x,
            iterations: 0,
            residual: res,
        });
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 1..=maxiter {
        a.matvec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        let pp = dot(&p, &p);
        if !pap.is_finite() {
            return Err(SolveError::NonFinite(it));
        }
        if pap <= 1e-14 * diag_scale * pp {
            return Err(SolveError::Breakdown(it));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        monitor(it, &x);
        res = dot(&r, &r).sqrt() / bnorm;
        if !res.is_finite() {
            return Err(SolveError::NonFinite(it));
        }
        if res <= tol {
            return Ok(CgResult {
                x,
                iterations: it,
                residual: res,
            });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(SolveError::NotConverged {
        iterations: maxiter,
        residual: res,
    })
}

/// Constant-nullspace handling for closed problems.
#[derive(Debug, Clone, PartialEq)]
pub enum Nullspace {
    /// Matrix is definite; solve as is.
    None,
    /// Constants span the kernel: project the right-hand side onto the
    /// range and return the solution with zero weighted mean.
    PinMean { weights: Vec<f64> },
}

/// Solve an SPD (or semi-definite with [`Nullspace::PinMean`]) system.
pub fn solve_spd(
    a: &SparseSym,
    rhs: &[f64],
    x0: &[f64],
    tol: f64,
    maxiter: usize,
    nullspace: &Nullspace,
) -> Result<CgResult, SolveError> {
    match nullspace {
        Nullspace::None => cg(a, rhs, x0, tol, maxiter, Preconditioner::Jacobi),
        Nullspace::PinMean { weights } => {
            let n = rhs.len() as f64;
            let mean = rhs.iter().sum::<f64>() / n;
            let b: Vec<f64> = rhs.iter().map(|v| v - mean).collect();
            let x0m = x0.iter().sum::<f64>() / n;
            let start: Vec<f64> = x0.iter().map(|v| v - x0m).collect();
            let mut out = cg(a, &b, &start, tol, maxiter, Preconditioner::None)?;
            let wsum: f64 = weights.iter().sum();
            let wmean = dot(weights, &out.x) / wsum;
            for v in &mut out.x {
                *v -= wmean;
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize, shift: f64) -> SparseSym {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 + shift));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SparseSym::from_triplets(n, &t).unwrap()
    }

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
            x[row] = (b[row] - s) / a[row][row];
        }
        x
    }

    #[test]
    fn triplets_sum_duplicates() {
        let a = SparseSym::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0)]).unwrap();
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.nnz(), 1);
        let empty = SparseSym::from_triplets(3, &[]).unwrap();
        assert_eq!(empty.matvec(&[1.0, 2.0, 3.0]), vec![0.0; 3]);
        assert!(SparseSym::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn pattern_is_symmetric() {
        let a = SparseSym::from_triplets(3, &[(0, 2, 5.0)]).unwrap();
        assert!(a.position(2, 0).is_some());
        assert_eq!(a.get(2, 0), 0.0);
    }

    #[test]
    fn cg_diagonal_and_zero_rhs() {
        let t: Vec<_> = (0..5).map(|i| (i, i, (i + 1) as f64)).collect();
        let a = SparseSym::from_triplets(5, &t).unwrap();
        let b = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let r = cg(&a, &b, &[0.0; 5], 1e-14, 10, Preconditioner::None).unwrap();
        for x in r.x {
            assert!((x - 1.0).abs() < 1e-13);
        }
        let r = cg(&a, &[0.0; 5], &[0.0; 5], 1e-12, 10, Preconditioner::Jacobi).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.x, vec![0.0; 5]);
    }

    #[test]
    fn cg_laplacian_matches_direct() {
        let a = laplacian_1d(10, 0.0);
        let b: Vec<f64> = (0..10).map(|i| (i as f64).sin() + 0.5).collect();
        let r = cg(&a, &b, &[0.0; 10], 1e-14, 100, Preconditioner::Jacobi).unwrap();
        let x = dense_solve(a.to_dense(), b);
        for (u, v) in r.x.iter().zip(&x) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_and_dirichlet() {
        let a = SparseSym::identity(3);
        let r = solve_spd(&a, &[1.0, -2.0, 3.0], &[0.0; 3], 1e-12, 10, &Nullspace::None).unwrap();
        assert_eq!(r.x, vec![1.0, -2.0, 3.0]);

        let mut a = laplacian_1d(4, 0.0);
        let mut rhs = vec![0.0; 4];
        a.apply_dirichlet(&[(0, 1.0), (3, 4.0)], &mut rhs);
        let r = cg(&a, &rhs, &[0.0; 4], 1e-14, 20, Preconditioner::Jacobi).unwrap();
        for (i, x) in r.x.iter().enumerate() {
            assert!((x - (1.0 + i as f64)).abs() < 1e-12);
        }
        let d = a.to_dense();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d[i][j], d[j][i]);
            }
        }
    }

    #[test]
    fn singular_neumann() {
        // Pure Neumann Laplacian: constants are in the kernel.
        let n = 6;
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i, 1.0));
            t.push((i + 1, i + 1, 1.0));
            t.push((i, i + 1, -1.0));
            t.push((i + 1, i, -1.0));
        }
        let a = SparseSym::from_triplets(n, &t).unwrap();
        let mut b = vec![0.0; n];
        b[0] = 1.0;
        let e = cg(&a, &b, &vec![0.0; n], 1e-12, 100, Preconditioner::None).unwrap_err();
        assert!(matches!(e, SolveError::Breakdown(_)));

        let w = vec![1.0; n];
        let r = solve_spd(&a, &b, &vec![0.0; n], 1e-12, 100, &Nullspace::PinMean { weights: w }).unwrap();
        assert!(r.x.iter().sum::<f64>().abs() < 1e-12);
        let ax = a.matvec(&r.x);
        let mean = 1.0 / n as f64;
        for (i, v) in ax.iter().enumerate() {
            let target = b[i] - mean;
            assert!((v - target).abs() < 1e-10);
        }
    }

    #[test]
    fn not_converged_reports_residual() {
        let a = laplacian_1d(50, 0.0);
        let b = vec![1.0; 50];
        match cg(&a, &b, &[0.0; 50], 1e-14, 3, Preconditioner::None) {
            Err(SolveError::NotConverged { iterations: 3, residual }) => assert!(residual > 1e-14),
            other => panic!("unexpected {other:?}"),
        }
    }
}
