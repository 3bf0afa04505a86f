//! Dense real symmetric matrices.
//!
//! Entries are written through [`SymMatrix::set`], which stores both
//! `(i, j)` and `(j, i)`, so symmetry is exact bit for bit.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from a closure evaluated on the upper triangle `i <= j`.
    pub fn from_upper(n: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, entry(i, j));
            }
        }
        m
    }

    /// Builds from a full row-major slice, keeping its upper triangle.
    pub fn from_row_major_upper(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n, "expected {n}x{n} entries");
        Self::from_upper(n, |i, j| rows[i * n + j])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Row-major storage, symmetric by construction.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `tr H^2 = sum_ij H_ij^2`.
    pub fn trace_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Strict upper triangle, row by row.
    pub fn off_diagonal(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Isometric coordinates: `x = (H_11, .., H_nn, sqrt2 H_12, sqrt2 H_13, ..)`
    /// so that `|x|^2 = tr H^2`.
    pub fn to_f_vector(&self) -> Vec<f64> {
        let mut x = self.diagonal();
        x.extend(self.off_diagonal().into_iter().map(|v| v * std::f64::consts::SQRT_2));
        x
    }

    /// Inverse of [`SymMatrix::to_f_vector`].
    pub fn from_f_vector(n: usize, x: &[f64]) -> Self {
        assert_eq!(x.len(), n * (n + 1) / 2, "f-vector length");
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, x[i]);
        }
        let mut k = n;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, x[k] * std::f64::consts::FRAC_1_SQRT_2);
                k += 1;
            }
        }
        m
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix { n: self.n, data: self.data.iter().map(|v| v * c).collect() }
    }

    /// `O^T H O` for a row-major `n x n` matrix `o`; the upper triangle is
    /// computed and mirrored.
    pub fn rotate(&self, o: &[f64]) -> SymMatrix {
        let n = self.n;
        assert_eq!(o.len(), n * n);
        // t = H O
        let mut t = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let h = self.get(i, k);
                if h == 0.0 {
                    continue;
                }
                for j in 0..n {
                    t[i * n + j] += h * o[k * n + j];
                }
            }
        }
        Self::from_upper(n, |i, j| (0..n).map(|k| o[k * n + i] * t[k * n + j]).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SymMatrix {
        SymMatrix::from_upper(3, |i, j| (1 + i + 2 * j) as f64 * if i == j { 1.0 } else { -0.5 })
    }

    #[test]
    fn symmetric_storage() {
        let m = sample();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j).to_bits(), m.get(j, i).to_bits());
            }
        }
    }

    #[test]
    fn f_vector_is_isometric() {
        let m = sample();
        let x = m.to_f_vector();
        assert_eq!(x.len(), 6);
        let norm: f64 = x.iter().map(|v| v * v).sum();
        assert!((norm - m.trace_sq()).abs() < 1e-12);
        let back = SymMatrix::from_f_vector(3, &x);
        for (a, b) in back.as_slice().iter().zip(m.as_slice()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_preserves_invariants() {
        let m = sample();
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let o = [c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0];
        let r = m.rotate(&o);
        assert!((r.trace() - m.trace()).abs() < 1e-12);
        assert!((r.trace_sq() - m.trace_sq()).abs() < 1e-12);
        assert_eq!(r.get(0, 2).to_bits(), r.get(2, 0).to_bits());
    }
}
