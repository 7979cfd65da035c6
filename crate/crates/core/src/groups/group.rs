use std::sync::Arc;

use indexmap::IndexSet;
use rayon::prelude::*;

use super::{GroupError, GroupRule};

/// Default bound on materialized group orders.
pub const DEFAULT_ELEMENT_CAP: usize = 2_000_000;

/// Environment variable overriding [`DEFAULT_ELEMENT_CAP`].
pub const CAP_ENV_VAR: &str = "PTOWER_ELEMENT_CAP";

/// The element cap in effect: the environment override if set and valid.
pub fn default_cap() -> usize {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &usize| c > 0)
        .unwrap_or(DEFAULT_ELEMENT_CAP)
}

// layers smaller than this are expanded on the calling thread
const PAR_THRESHOLD: usize = 2048;

/// A finite group with every element materialized.
///
/// Elements are stored in breadth-first order from the identity over the
/// generators; each BFS layer is sorted by encoding, so the order (and every
/// index-based choice made from it) is reproducible.
pub struct FiniteGroup<R: GroupRule> {
    rule: Arc<R>,
    generators: Vec<R::Elem>,
    elements: IndexSet<R::Elem>,
}

impl<R: GroupRule> Clone for FiniteGroup<R> {
    fn clone(&self) -> Self {
        FiniteGroup {
            rule: self.rule.clone(),
            generators: self.generators.clone(),
            elements: self.elements.clone(),
        }
    }
}

impl<R: GroupRule> std::fmt::Debug for FiniteGroup<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl<R: GroupRule> FiniteGroup<R> {
    /// Closure of a nonempty generator list under the rule's product.
    pub fn closure(rule: Arc<R>, generators: Vec<R::Elem>, cap: usize) -> Result<Self, GroupError> {
        if generators.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        for g in &generators {
            rule.validate(g)?;
        }
        Self::close(rule, generators, cap)
    }

    /// The trivial subgroup of the ambient group.
    pub fn trivial(rule: Arc<R>) -> Self {
        let mut elements = IndexSet::new();
        elements.insert(rule.identity());
        FiniteGroup {
            rule,
            generators: Vec::new(),
            elements,
        }
    }

    pub(crate) fn close(
        rule: Arc<R>,
        generators: Vec<R::Elem>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        let id = rule.identity();
        let mut elements = IndexSet::new();
        elements.insert(id.clone());
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let expand = |x: &R::Elem| {
                generators
                    .iter()
                    .map(|g| rule.mul(x, g))
                    .collect::<Vec<_>>()
            };
            let products: Vec<R::Elem> = if frontier.len() >= PAR_THRESHOLD {
                frontier.par_iter().flat_map_iter(expand).collect()
            } else {
                frontier.iter().flat_map(expand).collect()
            };
            let mut layer: Vec<R::Elem> = products
                .into_iter()
                .filter(|e| !elements.contains(e))
                .collect();
            layer.sort_unstable();
            layer.dedup();
            if elements.len() + layer.len() > cap {
                return Err(GroupError::CapExceeded { cap });
            }
            elements.extend(layer.iter().cloned());
            frontier = layer;
        }
        Ok(FiniteGroup {
            rule,
            generators,
            elements,
        })
    }

    /// Subgroup generated by `candidates`, keeping only those not already
    /// generated by the earlier ones.
    pub fn generated_by(
        rule: Arc<R>,
        candidates: &[R::Elem],
        cap: usize,
    ) -> Result<Self, GroupError> {
        let mut group = Self::trivial(rule.clone());
        for c in candidates {
            if group.contains(c) {
                continue;
            }
            rule.validate(c)?;
            let mut gens = group.generators.clone();
            gens.push(c.clone());
            group = Self::close(rule.clone(), gens, cap)?;
        }
        Ok(group)
    }

    /// Builds the subgroup whose elements are exactly `subset`.
    pub fn from_subset(rule: Arc<R>, subset: &[R::Elem], cap: usize) -> Result<Self, GroupError> {
        let g = Self::generated_by(rule, subset, cap)?;
        let distinct: IndexSet<&R::Elem> = subset.iter().collect();
        if g.order() != distinct.len() || !distinct.iter().all(|e| g.contains(e)) {
            return Err(GroupError::NotSubgroup);
        }
        Ok(g)
    }

    pub fn rule(&self) -> &Arc<R> {
        &self.rule
    }

    pub fn generators(&self) -> &[R::Elem] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &R::Elem> + '_ {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &R::Elem {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &R::Elem) -> Option<usize> {
        self.elements.get_index_of(e)
    }

    pub fn contains(&self, e: &R::Elem) -> bool {
        self.elements.contains(e)
    }

    pub fn identity(&self) -> R::Elem {
        self.rule.identity()
    }

    pub fn mul(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.rule.mul(a, b)
    }

    pub fn inv(&self, a: &R::Elem) -> R::Elem {
        self.rule.inv(a)
    }

    /// Same element set, regardless of generators or order.
    pub fn same_elements(&self, other: &FiniteGroup<R>) -> bool {
        self.order() == other.order() && self.elements().all(|e| other.contains(e))
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup<R>) -> bool {
        self.order() <= other.order() && self.elements().all(|e| other.contains(e))
    }

    /// Normality in `other`, checked on generators of both groups.
    pub fn is_normal_in(&self, other: &FiniteGroup<R>) -> bool {
        self.is_subgroup_of(other)
            && other.generators.iter().all(|g| {
                self.generators
                    .iter()
                    .all(|h| self.contains(&self.rule.conjugate(g, h)))
            })
    }

    pub fn is_abelian(&self) -> bool {
        let r = &self.rule;
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| r.mul(a, b) == r.mul(b, a))
        })
    }

    pub fn element_order(&self, e: &R::Elem) -> u64 {
        let id = self.rule.identity();
        let mut x = e.clone();
        let mut n = 1;
        while x != id {
            x = self.rule.mul(&x, e);
            n += 1;
        }
        n
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(
        &self,
        seeds: &[R::Elem],
        cap: usize,
    ) -> Result<FiniteGroup<R>, GroupError> {
        let r = &self.rule;
        let mut h = Self::generated_by(r.clone(), seeds, cap)?;
        loop {
            let fresh: Vec<R::Elem> = self
                .generators
                .iter()
                .flat_map(|g| h.generators.iter().map(move |x| r.conjugate(g, x)))
                .filter(|c| !h.contains(c))
                .collect();
            if fresh.is_empty() {
                return Ok(h);
            }
            let mut cands = h.generators.clone();
            cands.extend(fresh);
            h = Self::generated_by(r.clone(), &cands, cap)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{AbelianRule, MatrixRule};
    use crate::linalg::{MatZpk, PrimePower};

    fn sl2_gens(p: u64, k: u32) -> (Arc<MatrixRule>, Vec<MatZpk>) {
        let pp = PrimePower::new(p, k).unwrap();
        let rule = Arc::new(MatrixRule::new(pp, 2));
        let gens = vec![
            MatZpk::new(pp, 2, &[1, 1, 0, 1]).unwrap(),
            MatZpk::new(pp, 2, &[1, 0, 1, 1]).unwrap(),
        ];
        (rule, gens)
    }

    #[test]
    fn identity_generates_trivial() {
        let (rule, _) = sl2_gens(3, 1);
        let id = rule.identity();
        let g = FiniteGroup::closure(rule, vec![id], 100).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn sl2_f3_has_order_24() {
        let (rule, gens) = sl2_gens(3, 1);
        let g = FiniteGroup::closure(rule, gens, 1000).unwrap();
        assert_eq!(g.order(), 24);
        assert!(!g.is_abelian());
    }

    #[test]
    fn unipotent_mod_9_is_cyclic_of_order_9() {
        let (rule, gens) = sl2_gens(3, 2);
        let g = FiniteGroup::closure(rule, vec![gens[0].clone()], 100).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.element_order(&gens[0]), 9);
    }

    #[test]
    fn cap_is_enforced() {
        let (rule, gens) = sl2_gens(3, 1);
        assert_eq!(
            FiniteGroup::closure(rule, gens, 10).unwrap_err(),
            GroupError::CapExceeded { cap: 10 }
        );
    }

    #[test]
    fn empty_generators_rejected() {
        let (rule, _) = sl2_gens(3, 1);
        assert_eq!(
            FiniteGroup::closure(rule, vec![], 10).unwrap_err(),
            GroupError::EmptyGenerators
        );
    }

    #[test]
    fn closure_order_is_deterministic() {
        let (rule, gens) = sl2_gens(5, 1);
        let a = FiniteGroup::closure(rule.clone(), gens.clone(), 1000).unwrap();
        let b = FiniteGroup::closure(rule, gens, 1000).unwrap();
        assert!(a.elements().eq(b.elements()));
        assert_eq!(a.order(), 120);
    }

    #[test]
    fn subsets_and_normality() {
        let rule = Arc::new(AbelianRule::new(vec![9, 9]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let sub: Vec<Vec<u64>> = g
            .elements()
            .filter(|e| e.iter().all(|x| x % 3 == 0))
            .cloned()
            .collect();
        let h = FiniteGroup::from_subset(rule.clone(), &sub, 100).unwrap();
        assert_eq!(h.order(), 9);
        assert!(h.is_normal_in(&g));
        let bad = vec![vec![0, 0], vec![1, 0]];
        assert_eq!(
            FiniteGroup::from_subset(rule, &bad, 100).unwrap_err(),
            GroupError::NotSubgroup
        );
    }

    #[test]
    fn normal_closure_in_sl2_f3() {
        let (rule, gens) = sl2_gens(3, 1);
        let g = FiniteGroup::closure(rule.clone(), gens.clone(), 1000).unwrap();
        // the normal closure of a unipotent in SL_2(F_3) is everything
        let n = g.normal_closure(&gens[..1], 1000).unwrap();
        assert_eq!(n.order(), 24);
        let h = FiniteGroup::closure(rule, vec![gens[0].clone()], 1000).unwrap();
        assert!(!h.is_normal_in(&g));
        assert!(n.is_normal_in(&g));
    }
}
