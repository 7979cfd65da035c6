use std::fmt;

use serde::{Deserialize, Serialize};

use super::{is_prime, LinalgError};

/// A prime power `p^k` used as a modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPrimePower", into = "RawPrimePower")]
pub struct PrimePower {
    p: u64,
    k: u32,
    modulus: u64,
}

#[derive(Serialize, Deserialize)]
struct RawPrimePower {
    p: u64,
    k: u32,
}

impl TryFrom<RawPrimePower> for PrimePower {
    type Error = LinalgError;
    fn try_from(raw: RawPrimePower) -> Result<Self, Self::Error> {
        PrimePower::new(raw.p, raw.k)
    }
}

impl From<PrimePower> for RawPrimePower {
    fn from(pp: PrimePower) -> Self {
        RawPrimePower { p: pp.p, k: pp.k }
    }
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self, LinalgError> {
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        if k == 0 {
            return Err(LinalgError::ZeroExponent);
        }
        // products of two residues must fit in u64
        let modulus = p
            .checked_pow(k)
            .filter(|&m| m < (1u64 << 32))
            .ok_or(LinalgError::ModulusTooLarge { p, k })?;
        Ok(PrimePower { p, k, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same prime at a (lower or equal) exponent.
    pub fn at_level(&self, k: u32) -> Result<Self, LinalgError> {
        PrimePower::new(self.p, k)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    /// Inverse of a residue, if it is a unit.
    pub fn inverse(&self, x: u64) -> Option<u64> {
        let m = self.modulus as i128;
        let (mut old_r, mut r) = ((x % self.modulus) as i128, m);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        (old_r == 1).then(|| old_s.rem_euclid(m) as u64)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)
    }
}

/// Square matrix over `Z/p^k` with entries reduced into `[0, p^k)`.
///
/// The derived ordering (modulus, dimension, then entries row-major) is the
/// encoding order used for canonical representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatZpk {
    modulus: PrimePower,
    n: usize,
    entries: Box<[u64]>,
}

impl fmt::Debug for MatZpk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.rows(), self.modulus)
    }
}

impl MatZpk {
    /// Builds a matrix from row-major integer entries, reducing each one.
    pub fn new(modulus: PrimePower, n: usize, entries: &[i64]) -> Result<Self, LinalgError> {
        if entries.len() != n * n {
            return Err(LinalgError::DimensionMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(MatZpk {
            modulus,
            n,
            entries: entries.iter().map(|&x| modulus.reduce(x)).collect(),
        })
    }

    pub fn from_rows(modulus: PrimePower, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::DimensionMismatch(
                "matrix is not square".into(),
            ));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(modulus, n, &flat)
    }

    pub fn identity(modulus: PrimePower, n: usize) -> Self {
        let mut entries = vec![0u64; n * n].into_boxed_slice();
        for i in 0..n {
            entries[i * n + i] = 1 % modulus.modulus();
        }
        MatZpk {
            modulus,
            n,
            entries,
        }
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        let m = self.modulus.modulus();
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { 1 % m } else { 0 }))
    }

    fn check_compatible(&self, other: &MatZpk) -> Result<(), LinalgError> {
        if self.modulus != other.modulus {
            return Err(LinalgError::ModulusMismatch);
        }
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    /// Entrywise-reduced matrix product.
    pub fn mul(&self, other: &MatZpk) -> Result<MatZpk, LinalgError> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product without the compatibility check; callers guarantee it.
    pub(crate) fn mul_unchecked(&self, other: &MatZpk) -> MatZpk {
        debug_assert!(self.modulus == other.modulus && self.n == other.n);
        let n = self.n;
        let m = self.modulus.modulus();
        let mut out = vec![0u64; n * n].into_boxed_slice();
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out[idx] = (out[idx] + a * other.entries[k * n + j]) % m;
                }
            }
        }
        MatZpk {
            modulus: self.modulus,
            n,
            entries: out,
        }
    }

    pub fn pow(&self, mut e: u64) -> MatZpk {
        let mut base = self.clone();
        let mut acc = MatZpk::identity(self.modulus, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> MatZpk {
        let n = self.n;
        let mut out = vec![0u64; n * n].into_boxed_slice();
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j];
            }
        }
        MatZpk {
            modulus: self.modulus,
            n,
            entries: out,
        }
    }

    /// Determinant modulo `p^k`.
    ///
    /// Fraction-free elimination over the integers; falls back to cofactor
    /// expansion modulo `p^k` if the intermediate values overflow.
    pub fn det(&self) -> u64 {
        let n = self.n;
        let m = self.modulus.modulus();
        if n == 0 {
            return 1 % m;
        }
        match bareiss_det(&self.entries, n) {
            Some(d) => d.rem_euclid(m as i128) as u64,
            None => cofactor_det_mod(&self.entries, n, m),
        }
    }

    /// Two-sided inverse modulo `p^k`.
    ///
    /// Gauss-Jordan elimination over the local ring `Z/p^k`: a unit pivot exists
    /// in every column exactly when the determinant is a unit mod `p`.
    pub fn invert(&self) -> Result<MatZpk, LinalgError> {
        let n = self.n;
        let pp = self.modulus;
        let m = pp.modulus();
        let p = pp.p();
        let mut a: Vec<u64> = self.entries.to_vec();
        let mut inv: Vec<u64> = MatZpk::identity(pp, n).entries.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_multiple_of(p))
                .ok_or(LinalgError::NotInvertible(p))?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let scale = pp
                .inverse(a[col * n + col])
                .ok_or(LinalgError::NotInvertible(p))?;
            for j in 0..n {
                a[col * n + j] = a[col * n + j] * scale % m;
                inv[col * n + j] = inv[col * n + j] * scale % m;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = (a[r * n + j] + (m - f) * a[col * n + j]) % m;
                    inv[r * n + j] = (inv[r * n + j] + (m - f) * inv[col * n + j]) % m;
                }
            }
        }
        Ok(MatZpk {
            modulus: pp,
            n,
            entries: inv.into_boxed_slice(),
        })
    }

    /// Reduction to the lower level `p^level`; a ring homomorphism.
    pub fn reduce_level(&self, level: u32) -> Result<MatZpk, LinalgError> {
        if level > self.modulus.k() {
            return Err(LinalgError::LevelTooHigh {
                from: self.modulus.k(),
                to: level,
            });
        }
        let target = self.modulus.at_level(level)?;
        let m = target.modulus();
        Ok(MatZpk {
            modulus: target,
            n: self.n,
            entries: self.entries.iter().map(|&x| x % m).collect(),
        })
    }

    /// Whether `self ≡ I (mod p^level)`.
    pub fn is_congruent_to_identity(&self, level: u32) -> bool {
        let q = self.modulus.p().pow(level.min(self.modulus.k()));
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let want = if i == j { 1 } else { 0 };
                (self.get(i, j) + q - want % q).is_multiple_of(q)
            })
        })
    }
}

fn bareiss_det(entries: &[u64], n: usize) -> Option<i128> {
    let mut a: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            let r = match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                Some(r) => r,
                None => return Some(0),
            };
            for j in 0..n {
                a.swap(k * n + j, r * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i * n + j].checked_mul(a[k * n + k])?;
                let rhs = a[i * n + k].checked_mul(a[k * n + j])?;
                a[i * n + j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

fn cofactor_det_mod(entries: &[u64], n: usize, m: u64) -> u64 {
    if n == 1 {
        return entries[0] % m;
    }
    let mut acc = 0u64;
    for col in 0..n {
        let a = entries[col];
        if a == 0 {
            continue;
        }
        let minor: Vec<u64> = (1..n)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| entries[i * n + j])
            .collect();
        let term = a * cofactor_det_mod(&minor, n - 1, m) % m;
        acc = if col % 2 == 0 {
            (acc + term) % m
        } else {
            (acc + m - term) % m
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, k: u32) -> PrimePower {
        PrimePower::new(p, k).unwrap()
    }

    fn mat(p: u64, k: u32, rows: &[&[i64]]) -> MatZpk {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        MatZpk::from_rows(pp(p, k), &rows).unwrap()
    }

    #[test]
    fn prime_power_validation() {
        assert_eq!(PrimePower::new(4, 1), Err(LinalgError::NotPrime(4)));
        assert_eq!(PrimePower::new(3, 0), Err(LinalgError::ZeroExponent));
        assert!(matches!(
            PrimePower::new(3, 40),
            Err(LinalgError::ModulusTooLarge { .. })
        ));
        assert_eq!(pp(5, 3).modulus(), 125);
        assert_eq!(pp(3, 2).inverse(2), Some(5));
        assert_eq!(pp(3, 2).inverse(3), None);
    }

    #[test]
    fn identity_squared() {
        let i = MatZpk::identity(pp(3, 2), 3);
        assert_eq!(i.mul(&i).unwrap(), i);
    }

    #[test]
    fn hand_multiplication_mod_9() {
        let a = mat(3, 2, &[&[1, 1], &[0, 1]]);
        let b = mat(3, 2, &[&[1, 0], &[1, 1]]);
        assert_eq!(a.mul(&b).unwrap(), mat(3, 2, &[&[2, 1], &[1, 1]]));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = MatZpk::identity(pp(3, 2), 2);
        let b = MatZpk::identity(pp(3, 1), 2);
        let c = MatZpk::identity(pp(3, 2), 3);
        assert_eq!(a.mul(&b), Err(LinalgError::ModulusMismatch));
        assert!(matches!(a.mul(&c), Err(LinalgError::DimensionMismatch(_))));
        assert!(MatZpk::new(pp(3, 1), 2, &[1, 2, 3]).is_err());
    }

    #[test]
    fn unitriangular_inverse_mod_25() {
        let a = mat(5, 2, &[&[1, 1], &[0, 1]]);
        assert_eq!(a.invert().unwrap(), mat(5, 2, &[&[1, 24], &[0, 1]]));
        let i = MatZpk::identity(pp(5, 2), 2);
        assert_eq!(i.invert().unwrap(), i);
    }

    #[test]
    fn non_unit_determinant() {
        let a = mat(3, 2, &[&[3, 0], &[0, 1]]);
        assert_eq!(a.invert(), Err(LinalgError::NotInvertible(3)));
        // unit det but zero leading entry needs a row swap
        let b = mat(3, 2, &[&[0, 1], &[1, 0]]);
        let bi = b.invert().unwrap();
        assert!(b.mul(&bi).unwrap().is_identity());
    }

    #[test]
    fn determinant() {
        assert_eq!(mat(3, 2, &[&[2, 1], &[1, 1]]).det(), 1);
        assert_eq!(mat(3, 2, &[&[0, 1], &[1, 0]]).det(), 8);
        assert_eq!(mat(5, 1, &[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]).det(), 1);
        assert_eq!(mat(7, 1, &[&[0, 0], &[0, 3]]).det(), 0);
        let big = [
            4294967290u64,
            17,
            3,
            99,
            5,
            4294967000,
            12,
            8,
            1,
            2,
            4294960000,
            6,
            7,
            7,
            7,
            4294967200,
        ];
        assert_eq!(bareiss_det(&big, 4), None);
        let m = 4294967291u64; // prime below 2^32
        let a = MatZpk::new(PrimePower::new(m, 1).unwrap(), 4, &big.map(|x| x as i64)).unwrap();
        assert_eq!(a.det(), cofactor_det_mod(a.entries(), 4, m));
        let small = [2u64, 1, 1, 3, 1, 0, 0, 1, 4];
        assert_eq!(
            bareiss_det(&small, 3).map(|d| d.rem_euclid(1000)),
            Some(cofactor_det_mod(&small, 3, 1000) as i128)
        );
    }

    #[test]
    fn reduce_levels() {
        let a = mat(3, 2, &[&[4, 3], &[0, 1]]);
        assert_eq!(a.reduce_level(1).unwrap(), mat(3, 1, &[&[1, 0], &[0, 1]]));
        assert_eq!(a.reduce_level(2).unwrap(), a);
        assert_eq!(
            a.reduce_level(3),
            Err(LinalgError::LevelTooHigh { from: 2, to: 3 })
        );
        assert!(a.is_congruent_to_identity(1));
        assert!(!a.is_congruent_to_identity(2));
    }

    #[test]
    fn power_and_transpose() {
        let u = mat(3, 2, &[&[1, 1], &[0, 1]]);
        assert!(u.pow(9).is_identity());
        assert!(!u.pow(3).is_identity());
        assert_eq!(u.transpose(), mat(3, 2, &[&[1, 0], &[1, 1]]));
    }
}
