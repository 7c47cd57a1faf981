//! Small dense linear algebra: symmetric matrices, cyclic Jacobi diagonalization,
//! LU solves and determinants. Sizes here are tiny (n ≲ 20), so plain row-major
//! storage is enough.

/// Dense square matrix, row-major. Used for Hessians, reduced Hessians and Jacobians.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    /// Principal submatrix on the given index set (in the given order).
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Leading `k × k` block.
    pub fn leading(&self, k: usize) -> SymMatrix {
        SymMatrix::from_fn(k, |i, j| self.get(i, j))
    }

    pub fn shifted(&self, eps: f64) -> SymMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, m.get(i, i) + eps);
        }
        m
    }

    /// `D·H·D` for a diagonal `D`.
    pub fn congruent_diag(&self, d: &[f64]) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| d[i] * self.get(i, j) * d[j])
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        match lu(self) {
            Some((lu, _, sign)) => (0..self.n).fold(sign, |acc, i| acc * lu.get(i, i)),
            None => 0.0,
        }
    }

    /// Solves `A x = b`; `None` if `A` is numerically singular.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let (lu, perm, _) = lu(self)?;
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[perm[i]];
            for k in 0..i {
                s -= lu.get(i, k) * y[k];
            }
            y[i] = s;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= lu.get(i, k) * x[k];
            }
            x[i] = s / lu.get(i, i);
        }
        x.iter().all(|v| v.is_finite()).then_some(x)
    }
}

/// LU with partial pivoting. Returns packed factors, row permutation and sign.
fn lu(a: &SymMatrix) -> Option<(SymMatrix, Vec<usize>, f64)> {
    let n = a.n;
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let (p, pv) = (k..n)
            .map(|i| (i, m.get(i, k).abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pv <= 1e-300 * scale {
            return None;
        }
        if p != k {
            for j in 0..n {
                let t = m.get(k, j);
                m.set(k, j, m.get(p, j));
                m.set(p, j, t);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = m.get(k, k);
        for i in k + 1..n {
            let f = m.get(i, k) / piv;
            m.set(i, k, f);
            for j in k + 1..n {
                m.set(i, j, m.get(i, j) - f * m.get(k, j));
            }
        }
    }
    Some((m, perm, sign))
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `1e-12` (relative to the matrix norm, floor 1).
pub fn sym_eigen(a: &SymMatrix) -> SymEigen {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = SymMatrix::identity(n);
    let target = 1e-12 * a.norm().max(1.0);
    let mut sweeps = 0;
    while sweeps < 100 && m.off_diagonal_norm() > target {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)));
    SymEigen {
        values: order.iter().map(|&i| m.get(i, i)).collect(),
        vectors: order.iter().map(|&i| (0..n).map(|k| v.get(k, i)).collect()).collect(),
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let e = sym_eigen(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let r = m.mul_vec(&e.vectors[1]);
        assert!((r[0] - 3.0 * e.vectors[1][0]).abs() < 1e-13);
    }

    #[test]
    fn det_and_solve() {
        let m = SymMatrix::from_rows(&[vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]]);
        // cofactor expansion: 0*(1) - 2*(1) + 1*(0-3) = -5
        assert!((m.det() + 5.0).abs() < 1e-13);
        let x = m.solve(&[3.0, 2.0, 4.0]).unwrap();
        let b = m.mul_vec(&x);
        for (bi, ei) in b.iter().zip([3.0, 2.0, 4.0]) {
            assert!((bi - ei).abs() < 1e-13);
        }
        assert!(SymMatrix::zeros(2).solve(&[1.0, 1.0]).is_none());
    }
}
