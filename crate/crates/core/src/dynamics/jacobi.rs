//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use ndarray::{Array1, Array2};

use crate::{Error, Result, C64};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and the unitary whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Array1<f64>,
    pub vectors: Array2<C64>,
}

fn off_diagonal_norm(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix by rotations in row-major pair order
/// `(0,1), (0,2), …, (n−2,n−1)`, repeated until the off-diagonal part vanishes
/// relative to the Frobenius norm.
pub fn eigh(matrix: &Array2<C64>) -> Result<HermitianEigen> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "eigh needs a square matrix");

    let mut a = matrix.clone();
    let mut v = Array2::<C64>::eye(n);
    let scale = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNonConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;

        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let z = a[[p, q]];
                let mag = z.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                // Phase e^{-iφ} on column q makes the pivot real, then a real
                // rotation with tan φ_rot = t annihilates it.
                let phase = z / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // J = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] on (p, q)
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * jpp + akq * jqp;
                    a[[k, q]] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[[q, k]] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);

                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = vkp * jpp + vkq * jqp;
                    v[[k, q]] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let values = Array1::from_iter(order.iter().map(|&i| a[[i, i]].re));
    let mut vectors = Array2::<C64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&v.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reconstruct(e: &HermitianEigen) -> Array2<C64> {
        let n = e.values.len();
        let mut out = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..n {
                    s += e.vectors[[i, k]] * e.values[k] * e.vectors[[j, k]].conj();
                }
                out[[i, j]] = s;
            }
        }
        out
    }

    fn max_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn pauli_y() {
        let m = Array2::from_shape_vec(
            (2, 2),
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let e = eigh(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(max_diff(&reconstruct(&e), &m) < 1e-14);
    }

    #[test]
    fn diagonal_matrix_is_sorted() {
        let mut m = Array2::<C64>::zeros((3, 3));
        m[[0, 0]] = C64::new(3.0, 0.0);
        m[[1, 1]] = C64::new(-1.0, 0.0);
        m[[2, 2]] = C64::new(2.0, 0.0);
        let e = eigh(&m).unwrap();
        assert_eq!(e.values.to_vec(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn empty_and_scalar() {
        let e = eigh(&Array2::<C64>::zeros((0, 0))).unwrap();
        assert!(e.values.is_empty());
        let m = Array2::from_elem((1, 1), C64::new(4.5, 0.0));
        assert_eq!(eigh(&m).unwrap().values[0], 4.5);
    }

    proptest! {
        #[test]
        fn random_hermitian_decomposes(n in 1usize..12, seed in proptest::collection::vec(-3.0f64..3.0, 288)) {
            let mut m = Array2::<C64>::zeros((n, n));
            let mut it = seed.into_iter();
            for i in 0..n {
                m[[i, i]] = C64::new(it.next().unwrap(), 0.0);
                for j in i + 1..n {
                    let z = C64::new(it.next().unwrap(), it.next().unwrap());
                    m[[i, j]] = z;
                    m[[j, i]] = z.conj();
                }
            }
            let e = eigh(&m).unwrap();
            prop_assert!(max_diff(&reconstruct(&e), &m) < 1e-10);
            let vhv = e.vectors.t().mapv(|x| x.conj()).dot(&e.vectors);
            prop_assert!(max_diff(&vhv, &Array2::eye(n)) < 1e-10);
            prop_assert!(e.values.windows(2).into_iter().all(|w| w[0] <= w[1]));
        }
    }
}
