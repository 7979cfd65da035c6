//! Symmetric bilinear forms over the rationals and their real signatures.

use num::Zero;
use serde::Serialize;

use super::qmat::{dot, sign_of, QMat, Q};
use super::LefschetzError;

/// A symmetric form given by its Gram matrix on a chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    gram: QMat,
    /// Ambient coordinates of the basis the Gram matrix refers to.
    basis: Vec<Vec<Q>>,
}

impl QuadForm {
    pub fn new(gram: QMat) -> Result<Self, LefschetzError> {
        if !gram.is_symmetric() {
            return Err(LefschetzError::NotSymmetric);
        }
        let n = gram.rows();
        let basis = (0..n).map(|i| QMat::identity(n).column(i)).collect();
        Ok(QuadForm { gram, basis })
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// `B(x, y)` for coordinate vectors on the form's own basis.
    pub fn eval(&self, x: &[Q], y: &[Q]) -> Q {
        dot(x, &self.gram.mul_vec(y))
    }

    /// The form on the span of `vectors`, given in this form's coordinates.
    pub fn restrict(&self, vectors: &[Vec<Q>]) -> QuadForm {
        let k = vectors.len();
        let images: Vec<Vec<Q>> = vectors.iter().map(|v| self.gram.mul_vec(v)).collect();
        let mut gram = QMat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram.set(i, j, dot(&vectors[i], &images[j]));
            }
        }
        let basis = vectors
            .iter()
            .map(|v| {
                let mut out = vec![Q::zero(); self.basis.first().map_or(0, Vec::len)];
                for (c, b) in v.iter().zip(&self.basis) {
                    for (o, x) in out.iter_mut().zip(b) {
                        *o += c * x;
                    }
                }
                out
            })
            .collect();
        QuadForm { gram, basis }
    }

    pub fn det(&self) -> Q {
        self.gram.det()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }
}

/// Numbers of positive, negative and zero squares in a diagonalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureResult {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl SignatureResult {
    /// `n₊ − n₋`.
    pub fn sign(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

/// Signature by exact symmetric elimination. When every remaining diagonal
/// entry vanishes but some `B(e_i, e_j) ≠ 0`, replacing `e_i` by `e_i + e_j`
/// creates the nonzero pivot `2B(e_i, e_j)`.
pub fn signature(form: &QuadForm) -> SignatureResult {
    let mut a = form.gram().clone();
    let n = a.rows();
    let (mut plus, mut minus) = (0, 0);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a.get(i, i).is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_zero())
                else {
                    break;
                };
                add_row_col(&mut a, i, j);
                i
            }
        };
        swap_row_col(&mut a, k, p);
        let d = a.get(k, k).clone();
        match sign_of(&d) {
            1 => plus += 1,
            _ => minus += 1,
        }
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k) / &d;
            for j in k..n {
                let v = a.get(i, j) - &f * a.get(k, j);
                a.set(i, j, v);
            }
            for j in k..n {
                let v = a.get(j, i) - &f * a.get(j, k);
                a.set(j, i, v);
            }
        }
    }
    SignatureResult {
        n_plus: plus,
        n_minus: minus,
        n_zero: n - plus - minus,
    }
}

/// `e_i ← e_i + e_j` as a congruence.
fn add_row_col(a: &mut QMat, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

fn swap_row_col(a: &mut QMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
        a.set(r, i, y);
        a.set(r, j, x);
    }
}
