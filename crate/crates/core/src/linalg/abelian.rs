use super::{smith_normal_form, IntMat, LinalgError};

/// The subquotient `ker(N) / im(B)` of `Z^d`, in elementary-divisor form.
///
/// Classes are addressed by coordinates: one residue per nontrivial cyclic
/// factor `Z/t_i`, followed by one integer per free factor.
#[derive(Clone, Debug)]
pub struct KerModIm {
    ambient_dim: usize,
    n: IntMat,
    /// `(V^{-1})` rows spanning coordinates on `ker N`.
    ker_coords: IntMat,
    /// change of basis on `ker N` coordinates from the second SNF
    quotient_u: IntMat,
    /// positions in the second SNF that give nontrivial factors
    torsion_slots: Vec<(usize, i64)>,
    free_slots: Vec<usize>,
    generators: Vec<Vec<i64>>,
}

impl KerModIm {
    /// Invariant factors `t_i > 1`, each dividing the next.
    pub fn torsion(&self) -> Vec<i64> {
        self.torsion_slots.iter().map(|&(_, t)| t).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.free_slots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Group order, `None` when there is a free part.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.torsion_slots.iter().map(|&(_, t)| t as u128).product())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    /// Vectors in `ker N` generating the factors, torsion first.
    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Coordinates of the class of `x`; torsion residues are reduced into `[0, t_i)`.
    pub fn coordinates(&self, x: &[i64]) -> Result<Vec<i64>, LinalgError> {
        if x.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch("vector length".into()));
        }
        if self.n.mul_vec(x)?.iter().any(|&v| v != 0) {
            return Err(LinalgError::NotInKernel);
        }
        let y = self.ker_coords.mul_vec(x)?;
        let z = self.quotient_u.mul_vec(&y)?;
        let mut out: Vec<i64> = self
            .torsion_slots
            .iter()
            .map(|&(i, t)| z[i].rem_euclid(t))
            .collect();
        out.extend(self.free_slots.iter().map(|&i| z[i]));
        Ok(out)
    }

    pub fn is_zero_class(&self, x: &[i64]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(x)?.iter().all(|&c| c == 0))
    }

    /// One representative vector per element of a finite quotient, in
    /// lexicographic order of coordinates (the zero class first).
    pub fn class_representatives(&self) -> Option<Vec<Vec<i64>>> {
        self.order()?;
        let torsion = self.torsion();
        let mut reps = vec![vec![0i64; self.ambient_dim]];
        for (g, &t) in self.generators.iter().zip(&torsion) {
            let mut next = Vec::with_capacity(reps.len() * t as usize);
            for r in &reps {
                for c in 0..t {
                    next.push(r.iter().zip(g).map(|(a, b)| a + c * b).collect());
                }
            }
            reps = next;
        }
        reps.sort_by_cached_key(|v| self.coordinates(v).unwrap_or_default());
        Some(reps)
    }
}

/// Computes `ker(N) / im(B)` for integer matrices `N: Z^d → Z^r` and
/// `B: Z^t → Z^d`, after checking `N·B = 0`.
pub fn ker_mod_im(n: &IntMat, b: &IntMat) -> Result<KerModIm, LinalgError> {
    let d = n.cols();
    if b.rows() != d {
        return Err(LinalgError::DimensionMismatch(format!(
            "N has {d} columns but B has {} rows",
            b.rows()
        )));
    }
    if !n.mul(b)?.is_zero() {
        return Err(LinalgError::ContainmentViolated);
    }
    let snf_n = smith_normal_form(n)?;
    let rank = snf_n.rank();
    let kdim = d - rank;
    // ker N = V · (0 ⊕ Z^{d-rank}); coordinates are the trailing rows of V^{-1}
    let v_inv_rows = snf_n.v_inv().to_rows();
    let ker_coords = IntMat::from_rows(&v_inv_rows[rank..]).map(|m| {
        if m.rows() == 0 {
            IntMat::zeros(0, d)
        } else {
            m
        }
    })?;
    let ker_basis: Vec<Vec<i64>> = (rank..d).map(|j| snf_n.v().column(j)).collect();

    let c = if b.cols() == 0 {
        IntMat::zeros(kdim, 0)
    } else {
        ker_coords.mul(b)?
    };
    let snf_c = smith_normal_form(&c)?;
    let divs = snf_c.divisors();
    let mut torsion_slots = Vec::new();
    let mut free_slots = Vec::new();
    for i in 0..kdim {
        match divs.get(i).copied().unwrap_or(0) {
            0 => free_slots.push(i),
            1 => {}
            t => torsion_slots.push((i, t)),
        }
    }
    let u_inv = snf_c.u_inv();
    let lift = |slot: usize| -> Vec<i64> {
        let y: Vec<i64> = (0..kdim).map(|r| u_inv.get(r, slot)).collect();
        (0..d)
            .map(|row| ker_basis.iter().zip(&y).map(|(kb, &c)| kb[row] * c).sum())
            .collect()
    };
    let generators = torsion_slots
        .iter()
        .map(|&(i, _)| lift(i))
        .chain(free_slots.iter().map(|&i| lift(i)))
        .collect();
    Ok(KerModIm {
        ambient_dim: d,
        n: n.clone(),
        ker_coords,
        quotient_u: snf_c.u().clone(),
        torsion_slots,
        free_slots,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Brute force: count classes of ker N ∩ box modulo im B, where im B is
    /// detected through a bounded search over coefficient vectors.
    fn brute_order(n: &IntMat, b: &IntMat, bound: i64) -> usize {
        let d = n.cols();
        let box_vecs = |r: i64, dim: usize| -> Vec<Vec<i64>> {
            let mut out = vec![vec![]];
            for _ in 0..dim {
                out = out
                    .into_iter()
                    .flat_map(|v: Vec<i64>| (-r..=r).map(move |x| [v.clone(), vec![x]].concat()))
                    .collect();
            }
            out
        };
        let image: std::collections::HashSet<Vec<i64>> = box_vecs(bound * 4, b.cols())
            .iter()
            .map(|c| b.mul_vec(c).unwrap())
            .collect();
        let kernel: Vec<Vec<i64>> = box_vecs(bound, d)
            .into_iter()
            .filter(|x| n.mul_vec(x).unwrap().iter().all(|&v| v == 0))
            .collect();
        let mut classes: Vec<Vec<i64>> = Vec::new();
        for x in kernel {
            if !classes.iter().any(|c| {
                let diff: Vec<i64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
                image.contains(&diff)
            }) {
                classes.push(x);
            }
        }
        classes.len()
    }

    #[test]
    fn sign_action_on_z() {
        let q = ker_mod_im(&m(&[&[0]]), &m(&[&[2]])).unwrap();
        assert_eq!(q.torsion(), vec![2]);
        assert_eq!(q.order(), Some(2));
        assert_eq!(q.coordinates(&[3]).unwrap(), vec![1]);
        assert!(q.is_zero_class(&[-4]).unwrap());
    }

    #[test]
    fn injective_n_gives_trivial() {
        let q = ker_mod_im(&IntMat::identity(3), &IntMat::zeros(3, 3)).unwrap();
        assert!(q.is_trivial());
        assert_eq!(q.class_representatives().unwrap(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn swap_norm_and_coboundary() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let n = IntMat::identity(2).add(&a).unwrap();
        let b = a.sub(&IntMat::identity(2)).unwrap();
        assert!(ker_mod_im(&n, &b).unwrap().is_trivial());
    }

    #[test]
    fn containment_checked() {
        assert_eq!(
            ker_mod_im(&IntMat::identity(2), &IntMat::identity(2)).unwrap_err(),
            LinalgError::ContainmentViolated
        );
        assert_eq!(
            ker_mod_im(&m(&[&[1, 0]]), &m(&[&[1], &[0]])).unwrap_err(),
            LinalgError::ContainmentViolated
        );
    }

    #[test]
    fn free_part() {
        let q = ker_mod_im(&IntMat::zeros(1, 2), &m(&[&[3], &[0]])).unwrap();
        assert_eq!(q.torsion(), vec![3]);
        assert_eq!(q.free_rank(), 1);
        assert_eq!(q.order(), None);
        assert!(q.class_representatives().is_none());
    }

    #[test]
    fn representatives_cover_classes() {
        // Z^2 / <(2,0),(0,4)> ≅ Z/2 ⊕ Z/4
        let q = ker_mod_im(&IntMat::zeros(0, 2), &m(&[&[2, 0], &[0, 4]])).unwrap();
        assert_eq!(q.torsion(), vec![2, 4]);
        let reps = q.class_representatives().unwrap();
        assert_eq!(reps.len(), 8);
        let coords: std::collections::HashSet<_> =
            reps.iter().map(|r| q.coordinates(r).unwrap()).collect();
        assert_eq!(coords.len(), 8);
        assert_eq!(reps[0], vec![0, 0]);
    }

    #[test]
    fn order_matches_brute_force_small() {
        let cases = [
            (m(&[&[0]]), m(&[&[2]])),
            (m(&[&[2, 2], &[2, 2]]), m(&[&[1, -1], &[-1, 1]])),
            (m(&[&[0, 0], &[0, 0]]), m(&[&[2, 0], &[0, -2]])),
            (m(&[&[1, 1, 0]]), m(&[&[2, 1], &[-2, -1], &[0, 3]])),
            (m(&[&[3, 0], &[0, 0]]), m(&[&[0], &[2]])),
        ];
        for (n, b) in cases {
            let q = ker_mod_im(&n, &b).unwrap();
            if let Some(ord) = q.order() {
                assert_eq!(ord as usize, brute_order(&n, &b, 3), "N={n:?} B={b:?}");
            }
        }
    }
}
