//! Envelope (skyline) LDLᵀ factorization of sparse symmetric matrices.
//!
//! Rows are stored from their first nonzero column to the diagonal; fill-in
//! of the factor stays inside this envelope. No pivoting is performed, so the
//! factorization also applies to indefinite shifted pencils K − σM, and the
//! signs of D give the inertia.

use crate::error::{Error, Result};
use crate::ordering::reverse_cuthill_mckee;
use crate::sparse::CsrMatrix;

#[derive(Clone, Debug)]
pub struct Skyline {
    n: usize,
    /// new index → original index
    perm: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
    /// Strictly lower part of L, row-wise over [first[i], i).
    l: Vec<f64>,
    d: Vec<f64>,
}

/// Envelope structure reusable across factorizations with the same pattern.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub perm: Vec<usize>,
    inv: Vec<usize>,
    first: Vec<usize>,
    offset: Vec<usize>,
}

impl Envelope {
    pub fn new(a: &CsrMatrix) -> Self {
        let perm = reverse_cuthill_mckee(a);
        Self::with_permutation(a, perm)
    }

    pub fn with_permutation(a: &CsrMatrix, perm: Vec<usize>) -> Self {
        let n = a.n;
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first = vec![0; n];
        let mut offset = vec![0; n + 1];
        for i in 0..n {
            first[i] = a.row(perm[i]).map(|(j, _)| inv[j]).min().unwrap_or(i).min(i);
            offset[i + 1] = offset[i] + (i - first[i]);
        }
        Envelope { perm, inv, first, offset }
    }

    pub fn size(&self) -> usize {
        *self.offset.last().unwrap()
    }

    /// LDLᵀ factorization of `a`, whose pattern must be covered by the envelope.
    pub fn factor(&self, a: &CsrMatrix) -> Result<Skyline> {
        let n = a.n;
        let mut l = vec![0.0; self.size()];
        let mut d = vec![0.0; n];
        for i in 0..n {
            for (j, v) in a.row(self.perm[i]) {
                let jn = self.inv[j];
                if jn < i {
                    l[self.offset[i] + jn - self.first[i]] = v;
                } else if jn == i {
                    d[i] = v;
                }
            }
        }
        let mut scale = 0.0f64;
        for i in 0..n {
            scale = scale.max(d[i].abs());
        }
        let tiny = 1e-14 * scale;
        for i in 0..n {
            let fi = self.first[i];
            let oi = self.offset[i];
            // Row i holds g_ij = l_ij d_j while j sweeps upward.
            for j in fi..i {
                let fj = self.first[j];
                let lo = fi.max(fj);
                let (ri, rj) = (oi + lo - fi, self.offset[j] + lo - fj);
                let len = j - lo;
                let s = if len > 0 { dot(&l[ri..ri + len], &l[rj..rj + len]) } else { 0.0 };
                l[oi + j - fi] -= s;
            }
            let mut di = d[i];
            for j in fi..i {
                let g = l[oi + j - fi];
                let lij = g / d[j];
                di -= lij * g;
                l[oi + j - fi] = lij;
            }
            if !(di.abs() > tiny) || !di.is_finite() {
                return Err(Error::Factorization { pivot: i, value: di });
            }
            d[i] = di;
        }
        Ok(Skyline {
            n,
            perm: self.perm.clone(),
            first: self.first.clone(),
            offset: self.offset.clone(),
            l,
            d,
        })
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Four accumulators give the compiler room to vectorize.
    let mut acc = [0.0; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for k in 0..4 {
            acc[k] += a[4 * c + k] * b[4 * c + k];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

impl Skyline {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        Envelope::new(a).factor(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of negative pivots: by Sylvester's law, the number of negative
    /// eigenvalues of the factored matrix.
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = (0..n).map(|i| b[self.perm[i]]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let oi = self.offset[i];
            let len = i - fi;
            if len > 0 {
                y[i] -= dot(&self.l[oi..oi + len], &y[fi..i]);
            }
        }
        for i in 0..n {
            y[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let oi = self.offset[i];
            let xi = y[i];
            for (k, lk) in self.l[oi..oi + i - fi].iter().enumerate() {
                y[fi + k] -= lk * xi;
            }
        }
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_spd(n: usize, shift: f64) -> CsrMatrix {
        let mut t = Vec::new();
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            t.push((i, i, 4.0 + shift));
            for d in [1usize, 3, 7] {
                if i + d < n {
                    let v = rnd();
                    t.push((i, i + d, v));
                    t.push((i + d, i, v));
                }
            }
        }
        CsrMatrix::from_triplets(n, &t)
    }

    #[test]
    fn solves_spd_system() {
        let a = random_spd(200, 0.0);
        let f = Skyline::factor(&a).unwrap();
        assert_eq!(f.negative_pivots(), 0);
        let xs: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.mul(&xs);
        let x = f.solve(&b);
        for (p, q) in x.iter().zip(&xs) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn inertia_of_shifted_diagonal() {
        let t: Vec<(usize, usize, f64)> = (0..10).map(|i| (i, i, i as f64 - 3.5)).collect();
        let a = CsrMatrix::from_triplets(10, &t);
        assert_eq!(Skyline::factor(&a).unwrap().negative_pivots(), 4);
    }

    #[test]
    fn singular_pivot_is_reported() {
        let a = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]);
        assert!(matches!(Skyline::factor(&a), Err(Error::Factorization { .. })));
    }
}
