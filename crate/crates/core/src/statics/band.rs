//! Banded LU with partial pivoting (unblocked, LAPACK-style storage).
//!
//! The beam collocation Jacobian has bandwidths (kl, ku) = (4, 2); row
//! swaps widen U to kl + ku superdiagonals, so storage carries kl extra
//! fill rows above the input band.

use crate::error::{Error, Result};

pub(crate) struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Column-major LAPACK band layout: entry (i, j) lives at
    /// data[j * ldab + kl + ku + i - j]; rows 0..kl are pivot fill.
    data: Vec<f64>,
    ldab: usize,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, data: vec![0.0; ldab * n], ldab }
    }

    pub fn reset(&mut self) {
        self.data.fill(0.0);
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + self.kl + self.ku + i - j
    }

    /// Set entry (i, j); must satisfy -ku <= i - j <= kl.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j <= i + self.ku && i <= j + self.kl, "({i}, {j}) outside band");
        let at = self.idx(i, j);
        self.data[at] = v;
    }

    /// Factor in place and solve A x = b, overwriting b with x.
    /// The factorization destroys the stored matrix.
    pub fn solve_in_place(&mut self, b: &mut [f64]) -> Result<()> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let (kl, ku, ldab) = (self.kl, self.ku, self.ldab);
        let kv = kl + ku;
        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;

        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // partial pivot among the diagonal and its kl subdiagonal entries
            let mut jp = 0usize;
            let mut best = self.data[j * ldab + kv].abs();
            for p in 1..=km {
                let cand = self.data[j * ldab + kv + p].abs();
                if cand > best {
                    best = cand;
                    jp = p;
                }
            }
            ipiv[j] = j + jp;
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Convergence(format!(
                    "banded factorization broke down at column {j} (pivot {best})"
                )));
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                // swap rows j and j+jp across columns j..=ju
                for col in j..=ju {
                    let a = col * ldab + kv + j + jp - col;
                    let b2 = col * ldab + kv + j - col;
                    self.data.swap(a, b2);
                }
            }
            if km > 0 {
                let piv = self.data[j * ldab + kv];
                for p in 1..=km {
                    self.data[j * ldab + kv + p] /= piv;
                }
                for col in j + 1..=ju {
                    let u = self.data[col * ldab + kv + j - col];
                    if u != 0.0 {
                        for p in 1..=km {
                            let l = self.data[j * ldab + kv + p];
                            self.data[col * ldab + kv + j + p - col] -= l * u;
                        }
                    }
                }
            }
        }

        // forward: apply P and L
        for j in 0..n {
            if ipiv[j] != j {
                b.swap(j, ipiv[j]);
            }
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            for p in 1..=km {
                b[j + p] -= self.data[j * ldab + kv + p] * bj;
            }
        }
        // back substitution on U (bandwidth kv above the diagonal)
        for j in (0..n).rev() {
            let hi = (j + kv).min(n - 1);
            let mut s = b[j];
            for col in j + 1..=hi {
                s -= self.data[col * ldab + kv + j - col] * b[col];
            }
            b[j] = s / self.data[j * ldab + kv];
        }
        Ok(())
    }
}
