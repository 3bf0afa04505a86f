//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by the implicit QL iteration with Wilkinson-type shifts (the classic
//! `tred2`/`tql2` pair).

use crate::matrix::SymMatrix;

/// Eigenvalues in ascending order and, optionally, the matching orthonormal
/// eigenvectors as the columns of a row-major `n x n` array.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<f64>>,
}

/// Sorted eigenvalues of `h`.
pub fn eigenvalues(h: &SymMatrix) -> Vec<f64> {
    decompose(h, false).values
}

/// Eigenvalues and eigenvectors of `h`.
pub fn symmetric_eigen(h: &SymMatrix) -> Eigen {
    decompose(h, true)
}

fn decompose(h: &SymMatrix, want_vectors: bool) -> Eigen {
    let n = h.n();
    if n == 0 {
        return Eigen { values: Vec::new(), vectors: want_vectors.then(Vec::new) };
    }
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| h.get(i, j)).collect()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, want_vectors);
    tql2(&mut v, &mut d, &mut e, want_vectors);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = want_vectors.then(|| {
        let mut out = vec![0.0; n * n];
        for (col, &k) in order.iter().enumerate() {
            for row in 0..n {
                out[row * n + col] = v[row][k];
            }
        }
        out
    });
    Eigen { values, vectors }
}

fn tred2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    if !want_vectors {
        for (i, di) in d.iter_mut().enumerate() {
            *di = v[i][i];
        }
        e[0] = 0.0;
        return;
    }
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn tql2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if want_vectors {
                        for row in v.iter_mut() {
                            let t = row[i + 1];
                            row[i + 1] = s * row[i] + c * t;
                            row[i] = c * row[i] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_goe, RngStream};
    use proptest::prelude::*;

    /// Number of eigenvalues below `x`, from the inertia of the LDL^T
    /// factorization of `H - x I`.
    fn count_below(h: &SymMatrix, x: f64) -> usize {
        let n = h.n();
        let mut a: Vec<f64> = (0..n * n).map(|k| h.get(k / n, k % n) - if k / n == k % n { x } else { 0.0 }).collect();
        let mut negatives = 0;
        for k in 0..n {
            let mut piv = a[k * n + k];
            if piv == 0.0 {
                piv = -f64::EPSILON * (1.0 + x.abs());
            }
            if piv < 0.0 {
                negatives += 1;
            }
            for i in k + 1..n {
                let l = a[i * n + k] / piv;
                for j in k + 1..n {
                    a[i * n + j] -= l * a[k * n + j];
                }
            }
        }
        negatives
    }

    fn bisection_eigenvalues(h: &SymMatrix) -> Vec<f64> {
        let n = h.n();
        let bound: f64 = (0..n).map(|i| (0..n).map(|j| h.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
        (0..n)
            .map(|k| {
                let (mut lo, mut hi) = (-bound, bound);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if count_below(h, mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    #[test]
    fn small_cases() {
        let id = SymMatrix::from_upper(3, |i, j| if i == j { 1.0 } else { 0.0 });
        assert_eq!(eigenvalues(&id), vec![1.0, 1.0, 1.0]);
        let pauli = SymMatrix::from_upper(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let ev = eigenvalues(&pauli);
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        assert_eq!(eigenvalues(&SymMatrix::from_upper(1, |_, _| 2.5)), vec![2.5]);
    }

    #[test]
    fn matches_sturm_bisection() {
        for seed in 0..5 {
            let h = sample_goe(5, 0.5, &mut RngStream::new(seed, 0).rng()).unwrap();
            let a = eigenvalues(&h);
            let b = bisection_eigenvalues(&h);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10, "{a:?} vs {b:?}");
            }
        }
    }

    fn check_decomposition(h: &SymMatrix) {
        let n = h.n();
        let eig = symmetric_eigen(h);
        let vecs = eig.vectors.as_ref().unwrap();
        let norm = h.trace_sq().sqrt().max(f64::MIN_POSITIVE);
        for (c, &lam) in eig.values.iter().enumerate() {
            let mut res = 0.0;
            for i in 0..n {
                let hv: f64 = (0..n).map(|j| h.get(i, j) * vecs[j * n + c]).sum();
                res += (hv - lam * vecs[i * n + c]).powi(2);
            }
            assert!(res.sqrt() <= 1e-12 * norm, "residual {}", res.sqrt());
        }
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|i| vecs[i * n + a] * vecs[i * n + b]).sum();
                assert!((dot - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        let values_only = eigenvalues(h);
        for (x, y) in values_only.iter().zip(&eig.values) {
            assert!((x - y).abs() <= 1e-13 * norm);
        }
    }

    #[test]
    fn residuals_and_orthogonality() {
        for (seed, n) in [(1u64, 2usize), (2, 7), (3, 20), (4, 50)] {
            check_decomposition(&sample_goe(n, 0.5, &mut RngStream::new(seed, 0).rng()).unwrap());
        }
        // degenerate and already diagonal inputs
        check_decomposition(&SymMatrix::from_upper(4, |i, j| if i == j { 3.0 } else { 0.0 }));
        check_decomposition(&SymMatrix::from_upper(4, |_, _| 1.0));
    }

    fn random_orthogonal(n: usize, seed: u64) -> Vec<f64> {
        symmetric_eigen(&sample_goe(n, 0.5, &mut RngStream::new(seed, 9).rng()).unwrap()).vectors.unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn spectrum_is_rotation_invariant(seed in any::<u64>(), n in 2usize..12) {
            let h = sample_goe(n, 0.5, &mut RngStream::new(seed, 0).rng()).unwrap();
            let o = random_orthogonal(n, seed);
            let a = eigenvalues(&h);
            let b = eigenvalues(&h.rotate(&o));
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }

        #[test]
        fn trace_identities(seed in any::<u64>(), n in 1usize..15, scale in 1e-3f64..1e3) {
            let h = sample_goe(n, 0.5, &mut RngStream::new(seed, 1).rng()).unwrap().scaled(scale);
            let ev = eigenvalues(&h);
            prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
            let norm2 = h.trace_sq();
            prop_assert!((ev.iter().sum::<f64>() - h.trace()).abs() < 1e-10 * norm2.sqrt().max(1.0));
            prop_assert!((ev.iter().map(|x| x * x).sum::<f64>() - norm2).abs() < 1e-10 * norm2);
        }
    }
}
