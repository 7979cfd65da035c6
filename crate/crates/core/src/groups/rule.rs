use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::linalg::{MatZpk, PrimePower};

use super::GroupError;

/// Multiplication rule of an ambient group whose finite subgroups we materialize.
pub trait GroupRule: Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Rejects encodings that do not belong to the ambient group.
    fn validate(&self, _e: &Self::Elem) -> Result<(), GroupError> {
        Ok(())
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a b a^{-1} b^{-1}`
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ai_bi = self.mul(&self.inv(a), &self.inv(b));
        self.mul(&ab, &ai_bi)
    }

    /// `a b a^{-1}`
    fn conjugate(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(a, b), &self.inv(a))
    }
}

/// `GL_n(Z/p^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixRule {
    modulus: PrimePower,
    n: usize,
}

impl MatrixRule {
    pub fn new(modulus: PrimePower, n: usize) -> Self {
        MatrixRule { modulus, n }
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl GroupRule for MatrixRule {
    type Elem = MatZpk;

    fn identity(&self) -> MatZpk {
        MatZpk::identity(self.modulus, self.n)
    }

    fn mul(&self, a: &MatZpk, b: &MatZpk) -> MatZpk {
        a.mul_unchecked(b)
    }

    fn inv(&self, a: &MatZpk) -> MatZpk {
        a.invert().expect("validated group elements are invertible")
    }

    fn validate(&self, e: &MatZpk) -> Result<(), GroupError> {
        if e.modulus() != self.modulus || e.dim() != self.n {
            return Err(GroupError::InvalidElement(format!(
                "{e:?} is not a {}x{} matrix mod {}",
                self.n, self.n, self.modulus
            )));
        }
        e.invert()
            .map(|_| ())
            .map_err(|_| GroupError::InvalidElement(format!("{e:?} is not invertible")))
    }
}

/// `Z/m_1 × … × Z/m_r`, written additively with residues in `[0, m_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianRule {
    moduli: Vec<u64>,
}

impl AbelianRule {
    pub fn new(moduli: Vec<u64>) -> Result<Self, GroupError> {
        if moduli.contains(&0) {
            return Err(GroupError::InvalidElement(
                "cyclic factor of order 0".into(),
            ));
        }
        Ok(AbelianRule { moduli })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn elem(&self, coords: &[i64]) -> Vec<u64> {
        coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| x.rem_euclid(m as i64) as u64)
            .collect()
    }

    /// Standard basis vectors, one per factor.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        (0..self.moduli.len())
            .map(|i| {
                let mut v = vec![0u64; self.moduli.len()];
                v[i] = 1 % self.moduli[i];
                v
            })
            .collect()
    }
}

impl GroupRule for AbelianRule {
    type Elem = Vec<u64>;

    fn identity(&self) -> Vec<u64> {
        vec![0; self.moduli.len()]
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(&self.moduli)
            .map(|(x, m)| (m - x) % m)
            .collect()
    }

    fn validate(&self, e: &Vec<u64>) -> Result<(), GroupError> {
        if e.len() != self.moduli.len() || e.iter().zip(&self.moduli).any(|(x, m)| x >= m) {
            return Err(GroupError::InvalidElement(format!(
                "{e:?} is not reduced for {:?}",
                self.moduli
            )));
        }
        Ok(())
    }
}

/// Cosets `gN` encoded by their canonical representative.
pub struct QuotientRule<R: GroupRule> {
    base: Arc<R>,
    canon: HashMap<R::Elem, R::Elem>,
    identity: R::Elem,
}

impl<R: GroupRule> QuotientRule<R> {
    pub(crate) fn new(base: Arc<R>, canon: HashMap<R::Elem, R::Elem>) -> Self {
        let identity = canon[&base.identity()].clone();
        QuotientRule {
            base,
            canon,
            identity,
        }
    }

    pub fn base(&self) -> &Arc<R> {
        &self.base
    }

    /// Canonical representative of the coset of `g`, if `g` lies in the ambient group.
    pub fn canonical(&self, g: &R::Elem) -> Option<&R::Elem> {
        self.canon.get(g)
    }

    fn canon_of(&self, g: &R::Elem) -> R::Elem {
        self.canon
            .get(g)
            .cloned()
            .expect("quotient arithmetic stays inside the ambient group")
    }
}

impl<R: GroupRule> GroupRule for QuotientRule<R> {
    type Elem = R::Elem;

    fn identity(&self) -> R::Elem {
        self.identity.clone()
    }

    fn mul(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.canon_of(&self.base.mul(a, b))
    }

    fn inv(&self, a: &R::Elem) -> R::Elem {
        self.canon_of(&self.base.inv(a))
    }

    fn validate(&self, e: &R::Elem) -> Result<(), GroupError> {
        match self.canon.get(e) {
            Some(c) if c == e => Ok(()),
            _ => Err(GroupError::InvalidElement(format!(
                "{e:?} is not a canonical coset representative"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_arithmetic() {
        let r = AbelianRule::new(vec![9, 3]).unwrap();
        let a = r.elem(&[5, 2]);
        let b = r.elem(&[7, -1]);
        assert_eq!(r.mul(&a, &b), vec![3, 1]);
        assert_eq!(r.mul(&a, &r.inv(&a)), r.identity());
        assert_eq!(r.pow(&a, 9), r.identity());
        assert!(r.validate(&vec![9, 0]).is_err());
        assert!(AbelianRule::new(vec![0]).is_err());
    }

    #[test]
    fn matrix_commutator() {
        let pp = PrimePower::new(3, 2).unwrap();
        let r = MatrixRule::new(pp, 2);
        let x = MatZpk::new(pp, 2, &[1, 1, 0, 1]).unwrap();
        let y = MatZpk::new(pp, 2, &[1, 0, 1, 1]).unwrap();
        let c = r.commutator(&x, &y);
        assert!(!c.is_identity());
        assert!(r.commutator(&x, &x).is_identity());
        assert!(r
            .validate(&MatZpk::new(pp, 2, &[3, 0, 0, 1]).unwrap())
            .is_err());
    }
}
