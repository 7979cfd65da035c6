use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::groups::{AbelianRule, FiniteGroup, ThetaAction};
use crate::linalg::{is_prime, ker_mod_im, smith_normal_form, IntMat, KerModIm};

use super::{h1_finite, H1Error};

/// `Θ = Z/m` acting on `Z^d` through an integer matrix `A` with `A^m = I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLatticeAction", into = "RawLatticeAction")]
pub struct LatticeAction {
    a: IntMat,
    order: u64,
}

#[derive(Serialize, Deserialize)]
struct RawLatticeAction {
    matrix: Vec<Vec<i64>>,
    order: u64,
}

impl TryFrom<RawLatticeAction> for LatticeAction {
    type Error = H1Error;
    fn try_from(raw: RawLatticeAction) -> Result<Self, H1Error> {
        LatticeAction::new(IntMat::from_rows(&raw.matrix)?, raw.order)
    }
}

impl From<LatticeAction> for RawLatticeAction {
    fn from(l: LatticeAction) -> Self {
        RawLatticeAction {
            matrix: l.a.to_rows(),
            order: l.order,
        }
    }
}

impl LatticeAction {
    pub fn new(a: IntMat, order: u64) -> Result<Self, H1Error> {
        if !a.is_square() {
            return Err(H1Error::Incompatible("action matrix is not square".into()));
        }
        if order == 0 || order > u32::MAX as u64 || !a.pow(order as u32)?.is_identity() {
            return Err(H1Error::ActionOrder { order });
        }
        Ok(LatticeAction { a, order })
    }

    /// `-I` with `m = 2`.
    pub fn inversion(d: usize) -> Self {
        LatticeAction {
            a: IntMat::scalar(d, -1),
            order: 2,
        }
    }

    /// Exchange of the first two coordinates, `m = 2`.
    pub fn swap(d: usize) -> Self {
        assert!(d >= 2, "swap needs two coordinates");
        let mut a = IntMat::identity(d);
        a.set(0, 0, 0);
        a.set(1, 1, 0);
        a.set(0, 1, 1);
        a.set(1, 0, 1);
        LatticeAction { a, order: 2 }
    }

    pub fn trivial(d: usize, order: u64) -> Self {
        LatticeAction {
            a: IntMat::identity(d),
            order: order.max(1),
        }
    }

    pub fn matrix(&self) -> &IntMat {
        &self.a
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// `N = I + A + … + A^{m-1}`.
    pub fn norm_matrix(&self) -> Result<IntMat, H1Error> {
        let d = self.dim();
        let mut acc = IntMat::zeros(d, d);
        let mut pow = IntMat::identity(d);
        for _ in 0..self.order {
            acc = acc.add(&pow)?;
            pow = pow.mul(&self.a)?;
        }
        Ok(acc)
    }

    /// `A − I`, whose image is the coboundaries.
    pub fn coboundary_matrix(&self) -> Result<IntMat, H1Error> {
        Ok(self.a.sub(&IntMat::identity(self.dim()))?)
    }

    /// Rank of the fixed lattice `ker(A − I)`.
    pub fn fixed_rank(&self) -> Result<usize, H1Error> {
        Ok(self.dim() - smith_normal_form(&self.coboundary_matrix()?)?.rank())
    }

    /// A basis of the saturated fixed lattice `(Z^d)^Θ`.
    pub fn fixed_lattice_basis(&self) -> Result<Vec<Vec<i64>>, H1Error> {
        let snf = smith_normal_form(&self.coboundary_matrix()?)?;
        Ok((snf.rank()..self.dim())
            .map(|j| snf.v().column(j))
            .collect())
    }

    /// The same action on `(Z/M)^d`.
    pub fn reduce(
        &self,
        modulus: u64,
    ) -> Result<(Arc<AbelianRule>, ThetaAction<AbelianRule>), H1Error> {
        let rule = Arc::new(AbelianRule::new(vec![modulus; self.dim()])?);
        let act = ThetaAction::linear(
            rule.clone(),
            &self.a,
            self.order,
            format!("A mod {modulus}"),
        )?;
        Ok((rule, act))
    }
}

/// `H¹(Θ, Z^d) = ker N / im(A − I)`.
pub fn h1_lattice(action: &LatticeAction) -> Result<KerModIm, H1Error> {
    Ok(ker_mod_im(
        &action.norm_matrix()?,
        &action.coboundary_matrix()?,
    )?)
}

/// Vectors of `(Z/M)^d`, lexicographic.
pub(crate) fn all_vectors(modulus: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| (0..modulus).map(move |x| [v.as_slice(), &[x]].concat()))
            .collect();
    }
    out
}

fn count_fixed_mod(action: &LatticeAction, modulus: u64) -> u128 {
    let d = action.dim();
    let a = action.matrix();
    all_vectors(modulus, d)
        .iter()
        .filter(|x| {
            (0..d).all(|i| {
                let s: i128 = (0..d).map(|j| a.get(i, j) as i128 * x[j] as i128).sum();
                (s - x[i] as i128).rem_euclid(modulus as i128) == 0
            })
        })
        .count() as u128
}

/// Enumeration-only description of `H¹(Θ, Z^d)`, for cross-checking [`h1_lattice`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceH1 {
    /// `M = m`, which annihilates `H¹(Θ, Z^d)`.
    pub modulus: u64,
    /// Auxiliary prime `q ∤ m`.
    pub aux_prime: u64,
    /// `|((Z/M)^d)^Θ|`
    pub fixed_mod_m: u128,
    /// `f` with `|((Z/q)^d)^Θ| = q^f`
    pub fixed_rank: u32,
    /// `|((Z/M)^d)^Θ| / M^f`
    pub order: u128,
    /// number of classes of `H¹(Θ, (Z/M)^d)` by orbit enumeration
    pub reduced_classes: usize,
}

/// Computes `|H¹(Θ, Z^d)|` by counting fixed points only.
///
/// Multiplication by `M = m` kills `H¹(Θ, Z^d)`, so the long exact sequence of
/// `0 → Z^d → Z^d → (Z/M)^d → 0` gives `|H¹| = |((Z/M)^d)^Θ| / M^f` where `f`
/// is the rank of the fixed lattice; `f` is read off from fixed points mod a
/// prime `q ∤ m`, where `H¹` has no `q`-torsion.
pub fn h1_lattice_brute_force(action: &LatticeAction) -> Result<BruteForceH1, H1Error> {
    let m = action.order();
    let d = action.dim();
    let q = (2..)
        .find(|&q| is_prime(q) && !m.is_multiple_of(q))
        .expect("primes are infinite");
    let fixed_q = count_fixed_mod(action, q);
    let mut f = 0u32;
    let mut t = fixed_q;
    while t > 1 && t.is_multiple_of(q as u128) {
        t /= q as u128;
        f += 1;
    }
    if t != 1 {
        return Err(H1Error::Incompatible(format!(
            "{fixed_q} fixed points mod {q} is not a power of {q}"
        )));
    }
    let fixed_m = count_fixed_mod(action, m);
    let denom = (m as u128).pow(f);
    if !fixed_m.is_multiple_of(denom) {
        return Err(H1Error::Incompatible(
            "fixed-point count is not divisible by M^f".into(),
        ));
    }
    let (rule, act) = action.reduce(m)?;
    let g = if d == 0 {
        FiniteGroup::trivial(rule.clone())
    } else {
        FiniteGroup::closure(rule.clone(), rule.basis(), usize::MAX)?
    };
    let reduced_classes = h1_finite(&g, &act)?.len();
    Ok(BruteForceH1 {
        modulus: m,
        aux_prime: q,
        fixed_mod_m: fixed_m,
        fixed_rank: f,
        order: fixed_m / denom,
        reduced_classes,
    })
}

/// Whether the SNF class representatives stay pairwise distinct in
/// `H¹(Θ, (Z/m)^d)`, which they must since reduction mod `m` is injective on `H¹`.
pub fn representatives_reduce_injectively(
    action: &LatticeAction,
    h1: &KerModIm,
) -> Result<bool, H1Error> {
    let Some(reps) = h1.class_representatives() else {
        return Ok(false);
    };
    let m = action.order();
    let (rule, act) = action.reduce(m)?;
    let g = if action.dim() == 0 {
        FiniteGroup::trivial(rule.clone())
    } else {
        FiniteGroup::closure(rule.clone(), rule.basis(), usize::MAX)?
    };
    let classes = h1_finite(&g, &act)?;
    let mut seen = std::collections::HashSet::new();
    for r in &reps {
        let Some(c) = classes.class_of(&rule.elem(r)) else {
            return Ok(false);
        };
        if !seen.insert(c) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classes of `H¹(Θ, sZ^d)` that die in `H¹(Θ, Z^d)`.
///
/// `H¹(Θ, sZ^d)` is identified with `H¹(Θ, Z^d)` by dividing by `s`; the
/// class of `y` restricts to the class of `s·y`. Returns the representatives
/// `y` of the kernel, trivial class first.
pub fn restriction_kernel_lattice(
    action: &LatticeAction,
    scale: u64,
) -> Result<Vec<Vec<i64>>, H1Error> {
    if scale == 0 {
        return Err(H1Error::Incompatible("scale must be positive".into()));
    }
    let h1 = h1_lattice(action)?;
    let reps = h1
        .class_representatives()
        .ok_or(H1Error::Incompatible("H¹ is infinite".into()))?;
    let mut out = Vec::new();
    for y in reps {
        let sy: Vec<i64> = y.iter().map(|&v| v * scale as i64).collect();
        if h1.is_zero_class(&sy)? {
            out.push(y);
        }
    }
    Ok(out)
}
