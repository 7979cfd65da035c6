use std::sync::Arc;

use crate::linalg::{IntMat, MatZpk};

use super::{AbelianRule, FiniteGroup, GroupError, GroupRule, MatrixRule, QuotientRule};

type AutFn<E> = Arc<dyn Fn(&E) -> E + Send + Sync>;

/// A cyclic group `Θ = ⟨s⟩` of order `m` acting through the automorphism `α = α_s`.
pub struct ThetaAction<R: GroupRule> {
    order: u64,
    label: String,
    alpha: AutFn<R::Elem>,
}

impl<R: GroupRule> Clone for ThetaAction<R> {
    fn clone(&self) -> Self {
        ThetaAction {
            order: self.order,
            label: self.label.clone(),
            alpha: self.alpha.clone(),
        }
    }
}

impl<R: GroupRule> std::fmt::Debug for ThetaAction<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ThetaAction({}, order {})", self.label, self.order)
    }
}

impl<R: GroupRule> ThetaAction<R> {
    pub fn new(
        order: u64,
        label: impl Into<String>,
        alpha: impl Fn(&R::Elem) -> R::Elem + Send + Sync + 'static,
    ) -> Self {
        ThetaAction {
            order: order.max(1),
            label: label.into(),
            alpha: Arc::new(alpha),
        }
    }

    /// `Θ` of order `m` acting trivially.
    pub fn trivial(order: u64) -> Self {
        Self::new(order, "trivial", |x: &R::Elem| x.clone())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, x: &R::Elem) -> R::Elem {
        (self.alpha)(x)
    }

    /// `α^i(x)`.
    pub fn apply_power(&self, x: &R::Elem, i: u64) -> R::Elem {
        (0..i % self.order).fold(x.clone(), |acc, _| self.apply(&acc))
    }

    /// Checks that `α` maps `G` to itself, is multiplicative, and has `α^m = id`.
    pub fn validate_on(&self, g: &FiniteGroup<R>) -> Result<(), GroupError> {
        let r = g.rule();
        let images: Vec<R::Elem> = g.elements().map(|x| self.apply(x)).collect();
        if !images.iter().all(|y| g.contains(y)) {
            return Err(GroupError::ActionDoesNotStabilize);
        }
        for gen in g.generators() {
            let ag = self.apply(gen);
            for (x, ax) in g.elements().zip(&images) {
                if self.apply(&r.mul(x, gen)) != r.mul(ax, &ag) {
                    return Err(GroupError::NotAnAutomorphism(format!(
                        "{}: product law fails",
                        self.label
                    )));
                }
            }
        }
        if !g
            .elements()
            .all(|x| self.apply_power_raw(x, self.order) == *x)
        {
            return Err(GroupError::NotAnAutomorphism(format!(
                "{}: α^{} is not the identity",
                self.label, self.order
            )));
        }
        Ok(())
    }

    fn apply_power_raw(&self, x: &R::Elem, i: u64) -> R::Elem {
        (0..i).fold(x.clone(), |acc, _| self.apply(&acc))
    }

    /// The automorphism `x ↦ c α(x) c^{-1}` of the ambient group.
    pub fn twisted_by(&self, rule: Arc<R>, c: R::Elem) -> ThetaAction<R>
    where
        R: 'static,
    {
        let alpha = self.alpha.clone();
        ThetaAction {
            order: self.order,
            label: format!("{} twisted", self.label),
            alpha: Arc::new(move |x| rule.conjugate(&c, &alpha(x))),
        }
    }

    /// The induced action on a quotient by a `Θ`-stable normal subgroup.
    pub fn on_quotient(&self, qrule: Arc<QuotientRule<R>>) -> ThetaAction<QuotientRule<R>>
    where
        R: 'static,
    {
        let alpha = self.alpha.clone();
        ThetaAction {
            order: self.order,
            label: self.label.clone(),
            alpha: Arc::new(move |x| {
                qrule
                    .canonical(&alpha(x))
                    .expect("action stabilizes the ambient group")
                    .clone()
            }),
        }
    }
}

impl ThetaAction<MatrixRule> {
    /// `g ↦ (g^T)^{-1}`, an involution.
    pub fn transpose_inverse() -> Self {
        Self::new(2, "transpose-inverse", |g: &MatZpk| {
            g.transpose()
                .invert()
                .expect("group elements are invertible")
        })
    }

    /// `g ↦ c g c^{-1}` where `c^m` is central (the caller supplies `m`).
    pub fn conjugation(
        c: MatZpk,
        order: u64,
        label: impl Into<String>,
    ) -> Result<Self, GroupError> {
        let c_inv = c.invert()?;
        Ok(Self::new(order, label, move |g: &MatZpk| {
            c.mul_unchecked(g).mul_unchecked(&c_inv)
        }))
    }
}

impl ThetaAction<AbelianRule> {
    /// `x ↦ −x`.
    pub fn inversion(rule: Arc<AbelianRule>) -> Self {
        Self::new(2, "inversion", move |x: &Vec<u64>| rule.inv(x))
    }

    /// `x ↦ A x` on a product of cyclic groups of the same order.
    pub fn linear(
        rule: Arc<AbelianRule>,
        a: &IntMat,
        order: u64,
        label: impl Into<String>,
    ) -> Result<Self, GroupError> {
        let d = rule.moduli().len();
        if a.rows() != d || a.cols() != d {
            return Err(GroupError::InvalidElement(format!(
                "action matrix must be {d}x{d}"
            )));
        }
        if rule.moduli().windows(2).any(|w| w[0] != w[1]) {
            return Err(GroupError::InvalidElement(
                "linear actions need equal cyclic factors".into(),
            ));
        }
        let a = a.clone();
        Ok(Self::new(order, label, move |x: &Vec<u64>| {
            let m = rule.moduli().first().copied().unwrap_or(1) as i128;
            (0..d)
                .map(|i| {
                    let s: i128 = (0..d).map(|j| a.get(i, j) as i128 * x[j] as i128).sum();
                    s.rem_euclid(m) as u64
                })
                .collect()
        }))
    }
}

/// `G^Θ`, the elements fixed by the generator of `Θ`.
pub fn fixed_subgroup<R: GroupRule>(
    g: &FiniteGroup<R>,
    action: &ThetaAction<R>,
) -> Result<FiniteGroup<R>, GroupError> {
    action.validate_on(g)?;
    let fixed: Vec<R::Elem> = g
        .elements()
        .filter(|x| action.apply(x) == **x)
        .cloned()
        .collect();
    FiniteGroup::from_subset(g.rule().clone(), &fixed, g.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{congruence_kernel, ClassicalFamily};
    use crate::linalg::PrimePower;

    #[test]
    fn trivial_action_fixes_everything() {
        let pp = PrimePower::new(3, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 1000).unwrap();
        let f = fixed_subgroup(&g, &ThetaAction::trivial(2)).unwrap();
        assert!(f.same_elements(&g));
    }

    #[test]
    fn transpose_inverse_fixed_line() {
        let pp = PrimePower::new(3, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 1000).unwrap();
        let f = fixed_subgroup(&g, &ThetaAction::transpose_inverse()).unwrap();
        assert_eq!(f.order(), 3);
        let brute = g
            .elements()
            .filter(|x| x.transpose().mul(x).unwrap().is_identity())
            .count();
        assert_eq!(brute, 3);
    }

    #[test]
    fn inversion_on_odd_group_fixes_nothing() {
        let rule = Arc::new(AbelianRule::new(vec![9, 9]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let f = fixed_subgroup(&g, &ThetaAction::inversion(rule)).unwrap();
        assert!(f.is_trivial());
    }

    #[test]
    fn diagonal_conjugation() {
        let pp = PrimePower::new(5, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 1000).unwrap();
        let c = MatZpk::new(pp, 2, &[-1, 0, 0, 1]).unwrap();
        let act = ThetaAction::conjugation(c, 2, "conj diag(-1,1)").unwrap();
        let f = fixed_subgroup(&g, &act).unwrap();
        // the diagonal torus of the kernel
        assert_eq!(f.order(), 5);
        assert!(f.elements().all(|x| x.get(0, 1) == 0 && x.get(1, 0) == 0));
    }

    #[test]
    fn bad_actions_rejected() {
        let rule = Arc::new(AbelianRule::new(vec![9]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let not_hom =
            ThetaAction::<AbelianRule>::new(2, "square", |x: &Vec<u64>| vec![x[0] * x[0] % 9]);
        assert!(matches!(
            not_hom.validate_on(&g),
            Err(GroupError::NotAnAutomorphism(_))
        ));
        let wrong_order =
            ThetaAction::linear(rule.clone(), &IntMat::scalar(1, 2), 2, "times 2").unwrap();
        assert!(matches!(
            wrong_order.validate_on(&g),
            Err(GroupError::NotAnAutomorphism(_))
        ));
        let sub = FiniteGroup::closure(rule.clone(), vec![vec![3]], 100).unwrap();
        let shift =
            ThetaAction::<AbelianRule>::new(2, "leaves", |x: &Vec<u64>| vec![(x[0] + 1) % 9]);
        assert_eq!(
            shift.validate_on(&sub).unwrap_err(),
            GroupError::ActionDoesNotStabilize
        );
    }
}
