//! Morse index and degeneracy of critical Hessians, by symmetric
//! diagonalization and by counting sign changes of leading principal minors.

use crate::area::SymTridiagCorner;
use crate::linalg::{sym_eigen, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMethod {
    Eigen,
    Sylvester,
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseData {
    /// Number of negative eigenvalues.
    pub index: usize,
    /// Number of eigenvalues with `|λ|` below the degeneracy tolerance.
    pub nullity: usize,
    /// Ascending; empty when only the minor sequence was used.
    pub eigenvalues: Vec<f64>,
    pub method: IndexMethod,
    /// Diagonal shift used by the Sylvester rule, if any.
    pub epsilon: Option<f64>,
}

impl MorseData {
    pub fn is_morse(&self) -> bool {
        self.nullity == 0
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn positives(&self) -> usize {
        self.eigenvalues.len() - self.index - self.nullity
    }

    pub fn min_abs_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues.iter().map(|v| v.abs()).min_by(f64::total_cmp)
    }
}

/// `1e-8 × max(max|λ|, 1)`.
pub fn default_degeneracy_tol(eigenvalues: &[f64]) -> f64 {
    1e-8 * eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Index and nullity from the spectrum. `degeneracy_tol = None` uses
/// [`default_degeneracy_tol`].
pub fn eigen_index(h: &SymMatrix, degeneracy_tol: Option<f64>) -> MorseData {
    let values = sym_eigen(h).values;
    let tol = degeneracy_tol.unwrap_or_else(|| default_degeneracy_tol(&values));
    let index = values.iter().filter(|&&v| v < -tol).count();
    let nullity = values.iter().filter(|&&v| v.abs() <= tol).count();
    MorseData { index, nullity, eigenvalues: values, method: IndexMethod::Eigen, epsilon: None }
}

pub fn eigen_index_corner(h: &SymTridiagCorner, degeneracy_tol: Option<f64>) -> MorseData {
    eigen_index(&h.to_dense(), degeneracy_tol)
}

/// `det H₁, …, det Hₙ` for a general symmetric matrix.
///
/// Up to size 8 each block is factored on its own (LU with pivoting). Larger
/// matrices use one elimination pass without pivoting, whose pivots are the
/// ratios of consecutive minors, and drop back to blockwise LU after a
/// vanishing pivot.
pub fn leading_minors(h: &SymMatrix) -> Vec<f64> {
    let n = h.dim();
    if n <= 8 {
        return (1..=n).map(|k| h.leading(k).det()).collect();
    }
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut m = h.clone();
    let mut minors = Vec::with_capacity(n);
    let mut det = 1.0;
    for k in 0..n {
        let piv = m.get(k, k);
        if piv.abs() <= 1e-14 * scale {
            minors.extend((k + 1..=n).map(|j| h.leading(j).det()));
            return minors;
        }
        det *= piv;
        minors.push(det);
        for i in k + 1..n {
            let f = m.get(i, k) / piv;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m.set(i, j, m.get(i, j) - f * m.get(k, j));
            }
        }
    }
    minors
}

/// Leading minors of a corner-tridiagonal matrix. Every proper leading block is
/// plain tridiagonal (the corner couples the first and last index), so
/// `Dₖ = aₖDₖ₋₁ − bₖ₋₁²Dₖ₋₂`; only `Dₙ` needs the full determinant.
pub fn leading_minors_corner(h: &SymTridiagCorner) -> Vec<f64> {
    let n = h.dim();
    if n <= 3 {
        return leading_minors(&h.to_dense());
    }
    let mut d = Vec::with_capacity(n);
    let (mut prev2, mut prev1) = (1.0, h.a[0]);
    d.push(prev1);
    for k in 1..n - 1 {
        let cur = h.a[k] * prev1 - h.b[k - 1].powi(2) * prev2;
        d.push(cur);
        prev2 = prev1;
        prev1 = cur;
    }
    d.push(h.to_dense().det());
    d
}

/// Sign changes in `1, D₁, …, Dₙ`. Zeros are not skipped; callers must ensure
/// all minors are nonzero for the count to equal the index.
pub fn sign_changes(minors: &[f64]) -> usize {
    let mut prev = 1.0f64;
    let mut count = 0;
    for &d in minors {
        if d.signum() != prev.signum() {
            count += 1;
        }
        prev = d;
    }
    count
}

const MINOR_FLOOR: f64 = 1e-12;

/// Index by the Sylvester sign-change rule.
///
/// When a leading minor is (numerically) zero the rule is applied to
/// `H + εI` with `ε₀ = 1e-6·‖H‖`, halved up to 20 times, accepting the first
/// shift whose minors are all nonzero and whose count agrees with the
/// spectral index of `H`. In that case the nullity comes from the spectrum.
pub fn sylvester_index(h: &SymMatrix) -> MorseData {
    let minors = leading_minors(h);
    if minors.iter().all(|d| d.abs() >= MINOR_FLOOR) {
        return MorseData {
            index: sign_changes(&minors),
            nullity: 0,
            eigenvalues: Vec::new(),
            method: IndexMethod::Sylvester,
            epsilon: None,
        };
    }
    let eig = eigen_index(h, None);
    let eps0 = 1e-6 * h.norm().max(1e-300);
    for k in 0..=20 {
        let eps = eps0 / 2f64.powi(k);
        let shifted = leading_minors(&h.shifted(eps));
        if shifted.iter().all(|d| d.abs() >= MINOR_FLOOR) {
            let idx = sign_changes(&shifted);
            if idx == eig.index {
                return MorseData { index: idx, method: IndexMethod::Both, epsilon: Some(eps), ..eig };
            }
        }
    }
    MorseData { method: IndexMethod::Both, ..eig }
}

pub fn sylvester_index_corner(h: &SymTridiagCorner) -> MorseData {
    sylvester_index(&h.to_dense())
}

/// Spectral classification cross-checked with the minor sequence.
pub fn classify(h: &SymMatrix) -> MorseData {
    let eig = eigen_index(h, None);
    if eig.nullity == 0 {
        let syl = sylvester_index(h);
        if syl.index == eig.index {
            return MorseData { method: IndexMethod::Both, epsilon: syl.epsilon, ..eig };
        }
    }
    eig
}
