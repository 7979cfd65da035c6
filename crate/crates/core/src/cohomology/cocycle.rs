use std::collections::HashMap;

use rayon::prelude::*;

use crate::groups::{fixed_subgroup, FiniteGroup, GroupRule, ThetaAction};

use super::H1Error;

/// A 1-cocycle `a: Θ → G` of the cyclic group `Θ = ⟨s⟩`, stored as
/// `values[i] = a_{s^i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocycle<E> {
    values: Vec<E>,
}

impl<E: Clone> Cocycle<E> {
    pub fn values(&self) -> &[E] {
        &self.values
    }

    /// `a_s`, which determines the whole cocycle.
    pub fn at_generator(&self) -> &E {
        &self.values[1 % self.values.len()]
    }
}

/// `g · α(g) · … · α^{m-1}(g)`.
pub fn norm<R: GroupRule>(rule: &R, action: &ThetaAction<R>, g: &R::Elem) -> R::Elem {
    let mut acc = rule.identity();
    let mut x = g.clone();
    for _ in 0..action.order() {
        acc = rule.mul(&acc, &x);
        x = action.apply(&x);
    }
    acc
}

impl<E: Clone + Eq> Cocycle<E> {
    /// The cocycle with `a_s = g`, i.e. `a_{s^i} = g α(g) ⋯ α^{i-1}(g)`.
    /// The caller is responsible for `g` having trivial norm.
    pub fn from_generator<R: GroupRule<Elem = E>>(
        rule: &R,
        action: &ThetaAction<R>,
        g: &E,
    ) -> Self {
        let m = action.order() as usize;
        let mut values = Vec::with_capacity(m);
        let mut acc = rule.identity();
        let mut x = g.clone();
        for _ in 0..m {
            values.push(acc.clone());
            acc = rule.mul(&acc, &x);
            x = action.apply(&x);
        }
        Cocycle { values }
    }

    pub fn trivial<R: GroupRule<Elem = E>>(rule: &R, action: &ThetaAction<R>) -> Self {
        Cocycle {
            values: vec![rule.identity(); action.order() as usize],
        }
    }

    /// Checks `a_1 = 1` and `a_{st} = a_s · α_s(a_t)` on every pair.
    pub fn validate<R: GroupRule<Elem = E>>(
        &self,
        target: &FiniteGroup<R>,
        action: &ThetaAction<R>,
    ) -> Result<(), H1Error> {
        let m = action.order() as usize;
        let r = target.rule();
        if self.values.len() != m {
            return Err(H1Error::InvalidCocycle(format!(
                "{} values for a group of order {m}",
                self.values.len()
            )));
        }
        if self.values[0] != r.identity() {
            return Err(H1Error::InvalidCocycle("a_1 is not the identity".into()));
        }
        if !self.values.iter().all(|v| target.contains(v)) {
            return Err(H1Error::InvalidCocycle(
                "value outside the target group".into(),
            ));
        }
        for i in 0..m {
            for j in 0..m {
                let rhs = r.mul(
                    &self.values[i],
                    &action.apply_power(&self.values[j], i as u64),
                );
                if self.values[(i + j) % m] != rhs {
                    return Err(H1Error::InvalidCocycle(format!(
                        "a_(s^{i} s^{j}) ≠ a_(s^{i}) · s^{i}(a_(s^{j}))"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All cocycles, one per element with trivial norm, in the group's element order.
pub fn enumerate_cocycles<R: GroupRule>(
    target: &FiniteGroup<R>,
    action: &ThetaAction<R>,
) -> Result<Vec<Cocycle<R::Elem>>, H1Error> {
    action.validate_on(target)?;
    let r = target.rule();
    let id = r.identity();
    let elems: Vec<&R::Elem> = target.elements().collect();
    Ok(elems
        .par_iter()
        .filter(|g| norm(r.as_ref(), action, g) == id)
        .map(|g| Cocycle::from_generator(r.as_ref(), action, g))
        .collect())
}

/// `H¹(Θ, G)` as a pointed set: cocycles modulo `a ↦ h^{-1} a_s α(h)`.
#[derive(Clone, Debug)]
pub struct H1Classes<E> {
    representatives: Vec<Cocycle<E>>,
    sizes: Vec<usize>,
    total: usize,
    class_of: HashMap<E, usize>,
}

impl<E: Clone + Eq + std::hash::Hash> H1Classes<E> {
    /// Representatives; the trivial cocycle comes first, then the least
    /// cocycle of each remaining class in increasing order.
    pub fn representatives(&self) -> &[Cocycle<E>] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_cocycles(&self) -> usize {
        self.total
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Class index of the cocycle with `a_s = g`.
    pub fn class_of(&self, g: &E) -> Option<usize> {
        self.class_of.get(g).copied()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Orbits of the twisted conjugation action on cocycles.
pub fn h1_finite<R: GroupRule>(
    target: &FiniteGroup<R>,
    action: &ThetaAction<R>,
) -> Result<H1Classes<R::Elem>, H1Error> {
    let cocycles = enumerate_cocycles(target, action)?;
    let r = target.rule();
    let values: Vec<R::Elem> = cocycles.iter().map(|c| c.at_generator().clone()).collect();
    let index: HashMap<R::Elem, usize> = values
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let gen_data: Vec<(R::Elem, R::Elem)> = target
        .generators()
        .iter()
        .map(|h| (r.inv(h), action.apply(h)))
        .collect();
    let gen_data = &gen_data;
    let index = &index;
    let edges: Vec<(usize, usize)> = values
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, b)| {
            gen_data.iter().map(move |(h_inv, ah)| {
                let moved = r.mul(&r.mul(h_inv, b), ah);
                (i, index[&moved])
            })
        })
        .collect();
    let mut parent: Vec<usize> = (0..values.len()).collect();
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    // group members by root; the least encoding represents each class
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..values.len() {
        let root = find(&mut parent, i);
        members.entry(root).or_default().push(i);
    }
    let id = r.identity();
    let mut classes: Vec<(bool, R::Elem, Vec<usize>)> = members
        .into_values()
        .map(|ms| {
            let trivial = ms.iter().any(|&i| values[i] == id);
            let rep = if trivial {
                id.clone()
            } else {
                ms.iter()
                    .map(|&i| values[i].clone())
                    .min()
                    .expect("nonempty")
            };
            (!trivial, rep, ms)
        })
        .collect();
    classes.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut class_of = HashMap::with_capacity(values.len());
    for (ci, (_, _, ms)) in classes.iter().enumerate() {
        for &i in ms {
            class_of.insert(values[i].clone(), ci);
        }
    }
    Ok(H1Classes {
        representatives: classes
            .iter()
            .map(|(_, rep, _)| Cocycle::from_generator(r.as_ref(), action, rep))
            .collect(),
        sizes: classes.iter().map(|(_, _, ms)| ms.len()).collect(),
        total: values.len(),
        class_of,
    })
}

/// `G^{Θ|c}`: fixed points of `γ ↦ c_s α(γ) c_s^{-1}`.
pub fn twisted_fixed_subgroup<R: GroupRule + 'static>(
    target: &FiniteGroup<R>,
    action: &ThetaAction<R>,
    c: &Cocycle<R::Elem>,
) -> Result<FiniteGroup<R>, H1Error> {
    c.validate(target, action)?;
    let twisted = action.twisted_by(target.rule().clone(), c.at_generator().clone());
    Ok(fixed_subgroup(target, &twisted)?)
}

/// Classes of `H¹(Θ, Γ_n)` that become trivial in `H¹(Θ, Γ_1)`: those with
/// `c_s = a^{-1} α(a)` for some `a ∈ Γ_1`.
pub fn restriction_kernel_finite<R: GroupRule>(
    inner: &FiniteGroup<R>,
    outer: &FiniteGroup<R>,
    action: &ThetaAction<R>,
) -> Result<Vec<usize>, H1Error> {
    if !inner.is_subgroup_of(outer) {
        return Err(H1Error::Incompatible("Γ_n is not contained in Γ_1".into()));
    }
    action.validate_on(outer)?;
    let h1 = h1_finite(inner, action)?;
    let r = outer.rule();
    let coboundaries: std::collections::HashSet<R::Elem> = outer
        .elements()
        .map(|a| r.mul(&r.inv(a), &action.apply(a)))
        .collect();
    Ok((0..h1.len())
        .filter(|&i| coboundaries.contains(h1.representatives()[i].at_generator()))
        .collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::{congruence_kernel, lower_p_series, AbelianRule, ClassicalFamily};
    use crate::linalg::{IntMat, PrimePower};

    fn cyclic(n: u64) -> (Arc<AbelianRule>, FiniteGroup<AbelianRule>) {
        let rule = Arc::new(AbelianRule::new(vec![n]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 1000).unwrap();
        (rule, g)
    }

    #[test]
    fn trivial_theta_has_one_cocycle() {
        let (_, g) = cyclic(9);
        let cs = enumerate_cocycles(&g, &ThetaAction::trivial(1)).unwrap();
        assert_eq!(cs.len(), 1);
    }

    #[test]
    fn inversion_on_z9() {
        let (rule, g) = cyclic(9);
        let act = ThetaAction::inversion(rule);
        let cs = enumerate_cocycles(&g, &act).unwrap();
        assert_eq!(cs.len(), 9);
        for c in &cs {
            c.validate(&g, &act).unwrap();
        }
        let h1 = h1_finite(&g, &act).unwrap();
        assert_eq!(h1.len(), 1);
        assert_eq!(h1.sizes(), &[9]);
    }

    #[test]
    fn trivial_z2_on_z3() {
        let (_, g) = cyclic(3);
        let cs = enumerate_cocycles(&g, &ThetaAction::trivial(2)).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].at_generator(), &vec![0]);
    }

    #[test]
    fn inversion_on_z4_has_two_classes() {
        let (rule, g) = cyclic(4);
        let h1 = h1_finite(&g, &ThetaAction::inversion(rule)).unwrap();
        assert_eq!(h1.total_cocycles(), 4);
        assert_eq!(h1.len(), 2);
        assert_eq!(h1.representatives()[0].at_generator(), &vec![0]);
        assert_eq!(h1.representatives()[1].at_generator(), &vec![1]);
        assert_eq!(h1.class_of(&vec![3]), Some(1));
    }

    #[test]
    fn coprime_action_on_p_group_has_trivial_h1() {
        let pp = PrimePower::new(3, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 1000).unwrap();
        let h1 = h1_finite(&g, &ThetaAction::transpose_inverse()).unwrap();
        assert_eq!(h1.len(), 1);
    }

    #[test]
    fn twisting_by_trivial_cocycle() {
        let pp = PrimePower::new(5, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 1000).unwrap();
        let act = ThetaAction::transpose_inverse();
        let c = Cocycle::trivial(g.rule().as_ref(), &act);
        let tw = twisted_fixed_subgroup(&g, &act, &c).unwrap();
        assert!(tw.same_elements(&fixed_subgroup(&g, &act).unwrap()));
    }

    #[test]
    fn cohomologous_twists_have_matching_series() {
        let pp = PrimePower::new(3, 2).unwrap();
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 1000).unwrap();
        let act = ThetaAction::transpose_inverse();
        let r = g.rule().clone();
        let base = fixed_subgroup(&g, &act).unwrap();
        let base_orders = lower_p_series(&base, 1000).unwrap().orders();
        for h in g.elements().take(10) {
            let b = r.mul(&r.inv(h), &act.apply(h));
            let c = Cocycle::from_generator(r.as_ref(), &act, &b);
            let tw = twisted_fixed_subgroup(&g, &act, &c).unwrap();
            assert_eq!(tw.order(), base.order());
            assert_eq!(lower_p_series(&tw, 1000).unwrap().orders(), base_orders);
        }
    }

    #[test]
    fn abelian_twist_is_independent_of_cocycle() {
        let (rule, g) = cyclic(4);
        let act = ThetaAction::inversion(rule.clone());
        let orders: Vec<usize> = enumerate_cocycles(&g, &act)
            .unwrap()
            .iter()
            .map(|c| twisted_fixed_subgroup(&g, &act, c).unwrap().order())
            .collect();
        assert!(orders.iter().all(|&o| o == 2));
    }

    #[test]
    fn invalid_cocycle_rejected() {
        let (rule, g) = cyclic(3);
        let act = ThetaAction::<AbelianRule>::trivial(2);
        let bad = Cocycle::from_generator(rule.as_ref(), &act, &vec![1]);
        assert!(matches!(
            bad.validate(&g, &act),
            Err(H1Error::InvalidCocycle(_))
        ));
        assert!(twisted_fixed_subgroup(&g, &act, &bad).is_err());
    }

    #[test]
    fn restriction_kernel_examples() {
        let rule = Arc::new(AbelianRule::new(vec![9, 9]).unwrap());
        let g1 = FiniteGroup::closure(rule.clone(), rule.basis(), 1000).unwrap();
        let g2 = FiniteGroup::closure(rule.clone(), vec![vec![3, 0], vec![0, 3]], 1000).unwrap();
        let act = ThetaAction::inversion(rule.clone());
        assert_eq!(restriction_kernel_finite(&g2, &g1, &act).unwrap(), vec![0]);
        assert_eq!(restriction_kernel_finite(&g1, &g1, &act).unwrap(), vec![0]);
        assert!(restriction_kernel_finite(&g1, &g2, &act).is_err());
    }

    #[test]
    fn restriction_kernel_can_be_nontrivial() {
        // Z/4 ⊂ Z/8 under inversion: the class of 2 in H¹(Z/4) dies in Z/8
        let rule = Arc::new(AbelianRule::new(vec![8]).unwrap());
        let outer = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let inner = FiniteGroup::closure(rule.clone(), vec![vec![2]], 100).unwrap();
        let act = ThetaAction::inversion(rule);
        let h1 = h1_finite(&inner, &act).unwrap();
        assert_eq!(h1.len(), 2);
        let ker = restriction_kernel_finite(&inner, &outer, &act).unwrap();
        assert_eq!(ker, vec![0, 1]);
    }

    #[test]
    fn order_three_rotation_on_f2_squared() {
        let rule = Arc::new(AbelianRule::new(vec![2, 2]).unwrap());
        let g = FiniteGroup::closure(rule.clone(), rule.basis(), 100).unwrap();
        let rot = IntMat::from_rows(&[vec![0, -1], vec![1, -1]]).unwrap();
        let act = ThetaAction::linear(rule, &rot, 3, "rotation").unwrap();
        let h1 = h1_finite(&g, &act).unwrap();
        assert_eq!(h1.total_cocycles(), 4);
        assert_eq!(h1.len(), 1);
    }
}
