use std::collections::HashMap;
use std::sync::Arc;

use super::{FiniteGroup, GroupError, GroupRule, QuotientRule};

/// A map between materialized groups, stored as element indices.
pub struct GroupHom<R: GroupRule, S: GroupRule> {
    domain: FiniteGroup<R>,
    codomain: FiniteGroup<S>,
    images: Vec<usize>,
}

impl<R: GroupRule, S: GroupRule> std::fmt::Debug for GroupHom<R, S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupHom")
            .field("domain_order", &self.domain.order())
            .field("codomain_order", &self.codomain.order())
            .finish()
    }
}

impl<R: GroupRule, S: GroupRule> GroupHom<R, S> {
    /// Tabulates `f` on the domain; fails if some image leaves the codomain
    /// or `f` is not multiplicative.
    pub fn from_fn(
        domain: FiniteGroup<R>,
        codomain: FiniteGroup<S>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> Result<Self, GroupError> {
        let images = domain
            .elements()
            .map(|x| {
                codomain.index_of(&f(x)).ok_or(GroupError::NotAHomomorphism(
                    "image outside codomain".into(),
                ))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let hom = GroupHom {
            domain,
            codomain,
            images,
        };
        if !hom.is_homomorphism() {
            return Err(GroupError::NotAHomomorphism(
                "product law fails on a generator".into(),
            ));
        }
        Ok(hom)
    }

    pub fn domain(&self) -> &FiniteGroup<R> {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup<S> {
        &self.codomain
    }

    pub fn apply(&self, x: &R::Elem) -> Option<&S::Elem> {
        self.domain
            .index_of(x)
            .map(|i| self.codomain.element(self.images[i]))
    }

    fn image_at(&self, i: usize) -> &S::Elem {
        self.codomain.element(self.images[i])
    }

    /// `f(xg) = f(x) f(g)` for every element `x` and generator `g`, which
    /// forces multiplicativity on the whole domain.
    pub fn is_homomorphism(&self) -> bool {
        let id_ok = self.apply(&self.domain.identity()) == Some(&self.codomain.identity());
        id_ok
            && self.domain.generators().iter().all(|g| {
                let fg = self.apply(g).expect("generator lies in its group").clone();
                (0..self.domain.order()).all(|i| {
                    let xg = self.domain.mul(self.domain.element(i), g);
                    self.apply(&xg)
                        .is_some_and(|v| *v == self.codomain.mul(self.image_at(i), &fg))
                })
            })
    }

    /// Checks the product law on every pair of elements.
    pub fn is_homomorphism_exhaustive(&self) -> bool {
        let n = self.domain.order();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let xy = self
                    .domain
                    .mul(self.domain.element(i), self.domain.element(j));
                self.apply(&xy)
                    .is_some_and(|v| *v == self.codomain.mul(self.image_at(i), self.image_at(j)))
            })
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.order()];
        self.images.iter().for_each(|&i| hit[i] = true);
        hit.into_iter().all(|h| h)
    }

    /// Elements of the domain mapping to the identity.
    pub fn kernel_elements(&self) -> Vec<R::Elem> {
        let id = self
            .codomain
            .index_of(&self.codomain.identity())
            .expect("identity present");
        (0..self.domain.order())
            .filter(|&i| self.images[i] == id)
            .map(|i| self.domain.element(i).clone())
            .collect()
    }
}

/// The coset group `G/N` and the projection `G → G/N`.
///
/// Each coset is represented by its member with the smallest index in the
/// element order of `G`.
pub fn quotient<R: GroupRule>(
    g: &FiniteGroup<R>,
    n: &FiniteGroup<R>,
) -> Result<(FiniteGroup<QuotientRule<R>>, GroupHom<R, QuotientRule<R>>), GroupError> {
    if !n.is_subgroup_of(g) {
        return Err(GroupError::NotSubgroup);
    }
    if !n.is_normal_in(g) {
        return Err(GroupError::NotNormal);
    }
    let mut canon: HashMap<R::Elem, R::Elem> = HashMap::with_capacity(g.order());
    let n_elems: Vec<&R::Elem> = n.elements().collect();
    for x in g.elements() {
        if canon.contains_key(x) {
            continue;
        }
        for h in &n_elems {
            canon.insert(g.mul(x, h), x.clone());
        }
    }
    let qrule = Arc::new(QuotientRule::new(g.rule().clone(), canon));
    let qgens: Vec<R::Elem> = g
        .generators()
        .iter()
        .map(|x| qrule.canonical(x).expect("in G").clone())
        .collect();
    let q = FiniteGroup::close(qrule.clone(), qgens, g.order().max(1))?;
    let proj = GroupHom::from_fn(g.clone(), q.clone(), |x| {
        qrule.canonical(x).expect("in G").clone()
    })?;
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{congruence_kernel, frattini, AbelianRule, ClassicalFamily};
    use crate::linalg::PrimePower;

    #[test]
    fn quotient_by_whole_group_is_trivial() {
        let rule = Arc::new(AbelianRule::new(vec![9, 3]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let (q, proj) = quotient(&g, &g).unwrap();
        assert!(q.is_trivial());
        assert!(proj.is_surjective());
        assert_eq!(proj.kernel_elements().len(), 27);
    }

    #[test]
    fn quotient_by_trivial_is_isomorphic() {
        let rule = Arc::new(AbelianRule::new(vec![9, 3]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let (q, proj) = quotient(&g, &FiniteGroup::trivial(rule)).unwrap();
        assert_eq!(q.order(), 27);
        assert_eq!(proj.kernel_elements().len(), 1);
        assert!(proj.is_homomorphism_exhaustive());
    }

    #[test]
    fn kernel_mod_frattini_is_elementary_abelian() {
        let pp = PrimePower::new(3, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 10_000).unwrap();
        assert_eq!(g.order(), 27);
        let phi = frattini(&g, 10_000).unwrap();
        let (q, proj) = quotient(&g, &phi).unwrap();
        assert_eq!(q.order(), 27);
        assert!(q.is_abelian());
        assert!(q.elements().all(|x| q.rule().pow(x, 3) == q.identity()));
        assert!(proj.is_homomorphism_exhaustive());
    }

    #[test]
    fn non_normal_rejected() {
        let pp = PrimePower::new(3, 1).unwrap();
        let rule = Arc::new(crate::groups::MatrixRule::new(pp, 2));
        let u = crate::linalg::MatZpk::new(pp, 2, &[1, 1, 0, 1]).unwrap();
        let l = crate::linalg::MatZpk::new(pp, 2, &[1, 0, 1, 1]).unwrap();
        let g = FiniteGroup::closure(rule.clone(), vec![u.clone(), l], 100).unwrap();
        let h = FiniteGroup::closure(rule, vec![u], 100).unwrap();
        assert_eq!(quotient(&g, &h).unwrap_err(), GroupError::NotNormal);
    }
}
