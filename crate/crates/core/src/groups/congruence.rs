use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::{MatZpk, PrimePower};

use super::{FiniteGroup, GroupError, MatrixRule};

/// Classical families with congruence kernels implemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalFamily {
    #[serde(rename = "SL")]
    SL,
    /// `Sp_{2n}`, preserving `J = [[0, I_n], [-I_n, 0]]`.
    #[serde(rename = "Sp")]
    Sp,
    #[serde(rename = "GL")]
    GL,
}

impl ClassicalFamily {
    /// Matrix size for the family parameter `n` (`2n` for `Sp`).
    pub fn matrix_dim(self, n: usize) -> usize {
        match self {
            ClassicalFamily::Sp => 2 * n,
            _ => n,
        }
    }

    /// Dimension of the group as a `Z_p`-analytic group.
    pub fn lie_dim(self, n: usize) -> u32 {
        let n = n as u32;
        match self {
            ClassicalFamily::SL => (n * n).saturating_sub(1),
            ClassicalFamily::Sp => n * (2 * n + 1),
            ClassicalFamily::GL => n * n,
        }
    }
}

/// `p^{dim·(k−m)}`, the order of the level-`m` kernel mod `p^k`.
pub fn congruence_kernel_order(
    family: ClassicalFamily,
    n: usize,
    modulus: PrimePower,
    level: u32,
) -> u128 {
    let e = family.lie_dim(n) * (modulus.k() - level.min(modulus.k()));
    (modulus.p() as u128).pow(e)
}

fn unit(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut m = vec![0i64; n * n];
    m[i * n + j] = 1;
    m
}

/// Nilpotent Lie algebra elements `X` with `X² = 0` whose span, together
/// with the torus directions, is the Lie algebra of the family.
fn root_nilpotents(family: ClassicalFamily, n: usize) -> Vec<Vec<i64>> {
    let d = family.matrix_dim(n);
    let mut out = Vec::new();
    match family {
        ClassicalFamily::SL | ClassicalFamily::GL => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        out.push(unit(d, i, j));
                    }
                }
            }
        }
        ClassicalFamily::Sp => {
            for i in 0..n {
                for j in i..n {
                    // symmetric blocks in the upper right and lower left
                    let mut b = unit(d, i, n + j);
                    let mut c = unit(d, n + i, j);
                    if i != j {
                        b[j * d + n + i] = 1;
                        c[(n + j) * d + i] = 1;
                    }
                    out.push(b);
                    out.push(c);
                }
                for j in 0..n {
                    if i != j {
                        let mut a = unit(d, i, j);
                        a[(n + j) * d + n + i] = -1;
                        out.push(a);
                    }
                }
            }
        }
    }
    out
}

/// Diagonal entries of torus elements `t = 1 + s` placed per family.
fn torus_elements(family: ClassicalFamily, n: usize, modulus: PrimePower, s: u64) -> Vec<Vec<u64>> {
    let m = modulus.modulus();
    let t = (1 + s) % m;
    let t_inv = modulus.inverse(t).expect("1 + p^j is a unit");
    let d = family.matrix_dim(n);
    let mut out = Vec::new();
    let diag = |pairs: &[(usize, u64)]| {
        let mut v = vec![1u64; d];
        for &(i, x) in pairs {
            v[i] = x;
        }
        v
    };
    match family {
        ClassicalFamily::SL => {
            (0..n.saturating_sub(1)).for_each(|i| out.push(diag(&[(i, t), (i + 1, t_inv)])))
        }
        ClassicalFamily::GL => (0..n).for_each(|i| out.push(diag(&[(i, t)]))),
        ClassicalFamily::Sp => (0..n).for_each(|i| out.push(diag(&[(i, t), (n + i, t_inv)]))),
    }
    out
}

/// Generators of `ker(G(Z/p^k) → G(Z/p^m))`: elements `I + p^j X` and torus
/// elements with `t = 1 + p^j` for every `j` in `m..k`.
pub fn congruence_kernel_generators(
    family: ClassicalFamily,
    n: usize,
    modulus: PrimePower,
    level: u32,
) -> Result<Vec<MatZpk>, GroupError> {
    if n == 0 {
        return Err(GroupError::UnsupportedFamily("matrix size 0".into()));
    }
    if level == 0 || level > modulus.k() {
        return Err(GroupError::InvalidLevel {
            level,
            k: modulus.k(),
        });
    }
    let d = family.matrix_dim(n);
    let nil = root_nilpotents(family, n);
    let mut gens = Vec::new();
    for j in level..modulus.k() {
        let s = modulus.p().pow(j);
        for x in &nil {
            let entries: Vec<i64> = (0..d * d)
                .map(|i| (i % (d + 1) == 0) as i64 + s as i64 * x[i])
                .collect();
            gens.push(MatZpk::new(modulus, d, &entries)?);
        }
        for diag in torus_elements(family, n, modulus, s) {
            let mut entries = vec![0i64; d * d];
            for (i, &x) in diag.iter().enumerate() {
                entries[i * d + i] = x as i64;
            }
            gens.push(MatZpk::new(modulus, d, &entries)?);
        }
    }
    Ok(gens)
}

/// The level-`m` congruence kernel of `SL_n`, `Sp_{2n}` or `GL_n` mod `p^k`.
pub fn congruence_kernel(
    family: ClassicalFamily,
    n: usize,
    modulus: PrimePower,
    level: u32,
    cap: usize,
) -> Result<FiniteGroup<MatrixRule>, GroupError> {
    let gens = congruence_kernel_generators(family, n, modulus, level)?;
    let rule = Arc::new(MatrixRule::new(modulus, family.matrix_dim(n)));
    if gens.is_empty() {
        return Ok(FiniteGroup::trivial(rule));
    }
    FiniteGroup::closure(rule, gens, cap)
}

/// `J = [[0, I], [-I, 0]]`.
pub fn symplectic_form(modulus: PrimePower, n: usize) -> MatZpk {
    let d = 2 * n;
    let mut e = vec![0i64; d * d];
    for i in 0..n {
        e[i * d + n + i] = 1;
        e[(n + i) * d + i] = -1;
    }
    MatZpk::new(modulus, d, &e).expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All `I + p^m Y` mod `p^k` satisfying the family's defining equations.
    fn brute_kernel(family: ClassicalFamily, n: usize, pp: PrimePower, m: u32) -> usize {
        let d = family.matrix_dim(n);
        let s = pp.p().pow(m) as i64;
        let steps = pp.p().pow(pp.k() - m) as i64;
        let j = (family == ClassicalFamily::Sp).then(|| symplectic_form(pp, n));
        let mut count = 0;
        let total = (steps as usize).pow((d * d) as u32);
        for code in 0..total {
            let mut c = code;
            let entries: Vec<i64> = (0..d * d)
                .map(|i| {
                    let y = (c % steps as usize) as i64;
                    c /= steps as usize;
                    (i % (d + 1) == 0) as i64 + s * y
                })
                .collect();
            let g = MatZpk::new(pp, d, &entries).unwrap();
            let ok = match family {
                ClassicalFamily::SL => g.det() == 1,
                ClassicalFamily::GL => true,
                ClassicalFamily::Sp => {
                    let j = j.as_ref().unwrap();
                    g.transpose().mul(j).unwrap().mul(&g).unwrap() == *j
                }
            };
            count += ok as usize;
        }
        count
    }

    #[test]
    fn sl2_mod_9_level_1() {
        let pp = PrimePower::new(3, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 10_000).unwrap();
        assert_eq!(g.order(), 27);
        assert!(g.is_abelian());
        assert!(g.elements().all(|x| x.pow(3).is_identity()));
        assert_eq!(brute_kernel(ClassicalFamily::SL, 2, pp, 1), 27);
    }

    #[test]
    fn sl2_mod_27_level_1() {
        let pp = PrimePower::new(3, 3).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 10_000).unwrap();
        assert_eq!(g.order(), 729);
    }

    #[test]
    fn top_level_is_trivial() {
        let pp = PrimePower::new(5, 2).unwrap();
        assert!(congruence_kernel(ClassicalFamily::SL, 3, pp, 2, 10)
            .unwrap()
            .is_trivial());
        assert!(congruence_kernel(ClassicalFamily::SL, 2, pp, 0, 10).is_err());
        assert!(congruence_kernel(ClassicalFamily::SL, 2, pp, 3, 10).is_err());
    }

    #[test]
    fn orders_match_formula_and_brute_force() {
        let cases = [
            (ClassicalFamily::SL, 2, 3, 2, 1),
            (ClassicalFamily::SL, 2, 5, 2, 1),
            (ClassicalFamily::SL, 2, 2, 3, 1),
            (ClassicalFamily::GL, 2, 3, 2, 1),
            (ClassicalFamily::GL, 1, 5, 3, 1),
            (ClassicalFamily::SL, 3, 3, 2, 1),
            (ClassicalFamily::Sp, 1, 3, 2, 1),
            (ClassicalFamily::Sp, 2, 3, 2, 1),
        ];
        for (fam, n, p, k, m) in cases {
            let pp = PrimePower::new(p, k).unwrap();
            let g = congruence_kernel(fam, n, pp, m, 200_000).unwrap();
            assert_eq!(
                g.order() as u128,
                congruence_kernel_order(fam, n, pp, m),
                "{fam:?} n={n} p={p} k={k}"
            );
            if fam.matrix_dim(n) <= 2 || (fam == ClassicalFamily::SL && n == 3 && p == 3) {
                assert_eq!(
                    g.order(),
                    brute_kernel(fam, n, pp, m),
                    "{fam:?} n={n} p={p} k={k}"
                );
            }
        }
    }

    #[test]
    fn symplectic_generators_preserve_form() {
        let pp = PrimePower::new(5, 2).unwrap();
        let j = symplectic_form(pp, 2);
        for g in congruence_kernel_generators(ClassicalFamily::Sp, 2, pp, 1).unwrap() {
            assert_eq!(g.transpose().mul(&j).unwrap().mul(&g).unwrap(), j);
        }
    }
}
