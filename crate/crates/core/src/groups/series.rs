use crate::linalg::prime_of_prime_power;

use super::{FiniteGroup, GroupError, GroupRule};

/// The prime of a nontrivial p-group, `None` for the trivial group.
pub fn p_group_prime<R: GroupRule>(g: &FiniteGroup<R>) -> Result<Option<u64>, GroupError> {
    if g.is_trivial() {
        return Ok(None);
    }
    prime_of_prime_power(g.order() as u64)
        .map(Some)
        .ok_or(GroupError::NotPGroup {
            order: g.order() as u64,
        })
}

/// `Φ(G) = G^p [G,G]` for a finite p-group: the normal closure of the p-th
/// powers and pairwise commutators of the generators.
pub fn frattini<R: GroupRule>(
    g: &FiniteGroup<R>,
    cap: usize,
) -> Result<FiniteGroup<R>, GroupError> {
    let Some(p) = p_group_prime(g)? else {
        return Ok(g.clone());
    };
    frattini_with_prime(g, p, cap)
}

fn frattini_with_prime<R: GroupRule>(
    g: &FiniteGroup<R>,
    p: u64,
    cap: usize,
) -> Result<FiniteGroup<R>, GroupError> {
    let r = g.rule();
    let gens = g.generators();
    let mut seeds: Vec<R::Elem> = gens.iter().map(|x| r.pow(x, p)).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            seeds.push(r.commutator(a, b));
        }
    }
    g.normal_closure(&seeds, cap)
}

/// The chain `G = P_1 ⊇ P_2 ⊇ … ⊇ P_m = {1}` with `P_{i+1} = Φ(P_i)`.
pub struct SeriesData<R: GroupRule> {
    prime: Option<u64>,
    terms: Vec<FiniteGroup<R>>,
}

impl<R: GroupRule> Clone for SeriesData<R> {
    fn clone(&self) -> Self {
        SeriesData {
            prime: self.prime,
            terms: self.terms.clone(),
        }
    }
}

impl<R: GroupRule> std::fmt::Debug for SeriesData<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeriesData")
            .field("prime", &self.prime)
            .field("orders", &self.orders())
            .finish()
    }
}

impl<R: GroupRule> SeriesData<R> {
    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn terms(&self) -> &[FiniteGroup<R>] {
        &self.terms
    }

    /// `|P_i|`, ending with 1.
    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(FiniteGroup::order).collect()
    }

    /// `|P_i / P_{i+1}|`.
    pub fn quotient_orders(&self) -> Vec<usize> {
        self.terms
            .windows(2)
            .map(|w| w[0].order() / w[1].order())
            .collect()
    }

    /// `dim_{F_p} P_i/P_{i+1}`.
    pub fn quotient_ranks(&self) -> Vec<u32> {
        let p = self.prime.unwrap_or(2) as usize;
        self.quotient_orders()
            .into_iter()
            .map(|q| q.ilog(p))
            .collect()
    }

    /// Term `P_i` for `i ≥ 1`; past the end of the chain it is trivial.
    pub fn term(&self, i: usize) -> &FiniteGroup<R> {
        assert!(i >= 1, "series terms are indexed from 1");
        &self.terms[(i - 1).min(self.terms.len() - 1)]
    }

    /// Checks `P_{i+1} ⊴ P_i` with elementary abelian quotient.
    pub fn verify(&self) -> Result<(), GroupError> {
        let Some(p) = self.prime else {
            return if self.terms.len() == 1 && self.terms[0].is_trivial() {
                Ok(())
            } else {
                Err(GroupError::SeriesViolation(
                    "a trivial group has a one-term series".into(),
                ))
            };
        };
        if !self.terms.last().is_some_and(FiniteGroup::is_trivial) {
            return Err(GroupError::SeriesViolation(
                "series does not end in the trivial group".into(),
            ));
        }
        for (i, w) in self.terms.windows(2).enumerate() {
            let (big, small) = (&w[0], &w[1]);
            if !small.is_normal_in(big) {
                return Err(GroupError::SeriesViolation(format!(
                    "P_{} is not normal in P_{}",
                    i + 2,
                    i + 1
                )));
            }
            if small.order() >= big.order() {
                return Err(GroupError::SeriesViolation(format!(
                    "P_{} does not shrink",
                    i + 1
                )));
            }
            let r = big.rule();
            let gens = big.generators();
            let powers_ok = gens.iter().all(|x| small.contains(&r.pow(x, p)));
            let comm_ok = gens
                .iter()
                .all(|a| gens.iter().all(|b| small.contains(&r.commutator(a, b))));
            if !powers_ok || !comm_ok {
                return Err(GroupError::SeriesViolation(format!(
                    "P_{}/P_{} is not elementary abelian",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }
}

/// Iterates the Frattini subgroup until the trivial group is reached.
pub fn lower_p_series<R: GroupRule>(
    g: &FiniteGroup<R>,
    cap: usize,
) -> Result<SeriesData<R>, GroupError> {
    let prime = p_group_prime(g)?;
    let mut terms = vec![g.clone()];
    if let Some(p) = prime {
        while !terms.last().expect("nonempty").is_trivial() {
            let next = frattini_with_prime(terms.last().expect("nonempty"), p, cap)?;
            terms.push(next);
        }
    }
    Ok(SeriesData { prime, terms })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::{congruence_kernel, AbelianRule, ClassicalFamily};
    use crate::linalg::PrimePower;

    fn abelian(moduli: Vec<u64>) -> FiniteGroup<AbelianRule> {
        let rule = Arc::new(AbelianRule::new(moduli).unwrap());
        FiniteGroup::closure(rule.clone(), rule.basis(), 10_000).unwrap()
    }

    #[test]
    fn frattini_of_z9_squared() {
        let g = abelian(vec![9, 9]);
        let phi = frattini(&g, 10_000).unwrap();
        assert_eq!(phi.order(), 9);
        assert!(phi.elements().all(|e| e.iter().all(|x| x % 3 == 0)));
    }

    #[test]
    fn frattini_of_elementary_abelian_is_trivial() {
        assert!(frattini(&abelian(vec![5, 5, 5]), 10_000)
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn non_p_group_rejected() {
        let g = abelian(vec![6]);
        assert_eq!(
            frattini(&g, 100).unwrap_err(),
            GroupError::NotPGroup { order: 6 }
        );
        assert!(lower_p_series(&g, 100).is_err());
    }

    #[test]
    fn series_of_z9_squared() {
        let s = lower_p_series(&abelian(vec![9, 9]), 10_000).unwrap();
        assert_eq!(s.orders(), vec![81, 9, 1]);
        assert_eq!(s.quotient_ranks(), vec![2, 2]);
        s.verify().unwrap();
    }

    #[test]
    fn series_of_trivial_group() {
        let rule = Arc::new(AbelianRule::new(vec![3]).unwrap());
        let s = lower_p_series(&FiniteGroup::trivial(rule), 10).unwrap();
        assert_eq!(s.orders(), vec![1]);
        s.verify().unwrap();
    }

    #[test]
    fn frattini_advances_congruence_level() {
        let pp = PrimePower::new(3, 3).unwrap();
        let k1 = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 100_000).unwrap();
        let k2 = congruence_kernel(ClassicalFamily::SL, 2, pp, 2, 100_000).unwrap();
        assert!(frattini(&k1, 100_000).unwrap().same_elements(&k2));
    }

    #[test]
    fn series_of_sl2_kernel_mod_27() {
        let pp = PrimePower::new(3, 3).unwrap();
        let k1 = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 100_000).unwrap();
        let s = lower_p_series(&k1, 100_000).unwrap();
        assert_eq!(s.orders(), vec![729, 27, 1]);
        s.verify().unwrap();
    }

    #[test]
    fn mixed_abelian_series() {
        let s = lower_p_series(&abelian(vec![8, 2, 4]), 10_000).unwrap();
        assert_eq!(s.orders(), vec![64, 8, 2, 1]);
        assert_eq!(s.quotient_ranks(), vec![3, 2, 1]);
        s.verify().unwrap();
    }
}
