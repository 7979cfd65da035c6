use super::{IntMat, LinalgError};

/// Smith normal form `U·A·V = D` together with the inverse transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    divisors: Vec<i64>,
    rank: usize,
    u: IntMat,
    u_inv: IntMat,
    v: IntMat,
    v_inv: IntMat,
}

impl SnfResult {
    /// Diagonal entries `d_1 | d_2 | …`, `min(rows, cols)` of them, zeros last.
    pub fn divisors(&self) -> &[i64] {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn u(&self) -> &IntMat {
        &self.u
    }

    pub fn u_inv(&self) -> &IntMat {
        &self.u_inv
    }

    pub fn v(&self) -> &IntMat {
        &self.v
    }

    pub fn v_inv(&self) -> &IntMat {
        &self.v_inv
    }

    /// The `rows x cols` diagonal matrix `D`.
    pub fn diagonal(&self) -> IntMat {
        let mut d = IntMat::zeros(self.u.rows(), self.v.cols());
        for (i, &x) in self.divisors.iter().enumerate() {
            d.set(i, i, x);
        }
        d
    }
}

struct Work {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect()
}

impl Work {
    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        for j in 0..self.a[0].len() {
            self.a[dst][j] += c * self.a[src][j];
        }
        for j in 0..self.u.len() {
            self.u[dst][j] += c * self.u[src][j];
        }
        for r in &mut self.u_inv {
            r[src] -= c * r[dst];
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        for r in &mut self.a {
            r[dst] += c * r[src];
        }
        for r in &mut self.v {
            r[dst] += c * r[src];
        }
        let n = self.v_inv.len();
        for j in 0..n {
            self.v_inv[src][j] -= c * self.v_inv[dst][j];
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for r in &mut self.u_inv {
            r.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in &mut self.a {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a[i].iter_mut().for_each(|x| *x = -*x);
        self.u[i].iter_mut().for_each(|x| *x = -*x);
        for r in &mut self.u_inv {
            r[i] = -r[i];
        }
    }

    /// Smallest nonzero |entry| in the trailing block; ties go to the lowest
    /// (row, col) in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

fn to_intmat(m: &[Vec<i128>], rows: usize, cols: usize) -> Result<IntMat, LinalgError> {
    let data = m
        .iter()
        .flatten()
        .map(|&x| i64::try_from(x).map_err(|_| LinalgError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    IntMat::new(rows, cols, data)
}

/// Computes the Smith normal form of an integer matrix.
///
/// Pivoting always takes the smallest absolute value in the remaining block,
/// so the transforms are reproducible. Only fails if an entry of a transform
/// leaves the `i64` range.
pub fn smith_normal_form(a: &IntMat) -> Result<SnfResult, LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect(),
        u: identity(m),
        u_inv: identity(m),
        v: identity(n),
        v_inv: identity(n),
    };
    let steps = m.min(n);
    let mut rank = 0;
    't: for t in 0..steps {
        loop {
            let Some((pi, pj)) = w.pivot(t) else {
                break 't;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let piv = w.a[t][t];
            let mut cleared = true;
            for i in t + 1..m {
                let q = w.a[i][t] / piv;
                if q != 0 {
                    w.add_row(i, t, -q);
                }
                cleared &= w.a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = w.a[t][j] / piv;
                if q != 0 {
                    w.add_col(j, t, -q);
                }
                cleared &= w.a[t][j] == 0;
            }
            if !cleared {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| w.a[i][j] % piv != 0));
            match offender {
                Some(i) => w.add_row(t, i, 1),
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        rank = t + 1;
    }
    let divisors = (0..steps)
        .map(|t| i64::try_from(w.a[t][t]).map_err(|_| LinalgError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SnfResult {
        divisors,
        rank,
        u: to_intmat(&w.u, m, m)?,
        u_inv: to_intmat(&w.u_inv, m, m)?,
        v: to_intmat(&w.v, n, n)?,
        v_inv: to_intmat(&w.v_inv, n, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn assert_valid(a: &IntMat, s: &SnfResult) {
        let uav = s.u().mul(a).unwrap().mul(s.v()).unwrap();
        assert_eq!(uav, s.diagonal(), "U·A·V is not diagonal for {a:?}");
        assert_eq!(s.u().mul(s.u_inv()).unwrap(), IntMat::identity(a.rows()));
        assert_eq!(s.v().mul(s.v_inv()).unwrap(), IntMat::identity(a.cols()));
        assert_eq!(s.u().det().unwrap().abs(), 1);
        assert_eq!(s.v().det().unwrap().abs(), 1);
        let d = s.divisors();
        for w in d.windows(2) {
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {d:?}");
            }
        }
        assert!(d.iter().all(|&x| x >= 0));
        assert_eq!(s.rank(), d.iter().filter(|&&x| x != 0).count());
    }

    #[test]
    fn diag_two_three() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.divisors(), &[1, 6]);
        assert_valid(&a, &s);
    }

    #[test]
    fn identity_divisors() {
        let a = IntMat::identity(4);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.divisors(), &[1, 1, 1, 1]);
    }

    #[test]
    fn rank_one() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.divisors(), &[1, 0]);
        assert_eq!(s.rank(), 1);
        assert_valid(&a, &s);
    }

    #[test]
    fn empty_and_rectangular() {
        let e = IntMat::zeros(0, 0);
        assert!(smith_normal_form(&e).unwrap().divisors().is_empty());
        let a = m(&[&[2, 4, 4], &[-6, 6, 12]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.divisors(), &[2, 6]);
        assert_valid(&a, &s);
        let z = IntMat::zeros(2, 3);
        let s = smith_normal_form(&z).unwrap();
        assert_eq!(s.divisors(), &[0, 0]);
        assert_valid(&z, &s);
    }

    #[test]
    fn deterministic_transforms() {
        let a = m(&[&[4, 6, 2], &[2, 8, 10], &[6, 0, 14]]);
        assert_eq!(
            smith_normal_form(&a).unwrap(),
            smith_normal_form(&a).unwrap()
        );
    }

    proptest! {
        #[test]
        fn snf_invariants(rows in 0usize..5, cols in 0usize..5, seed in proptest::collection::vec(-9i64..=9, 25)) {
            let a = IntMat::new(rows, cols, seed[..rows * cols].to_vec()).unwrap();
            let s = smith_normal_form(&a).unwrap();
            assert_valid(&a, &s);
            if rows == cols {
                let prod: i128 = s.divisors().iter().map(|&d| d as i128).product();
                prop_assert_eq!(prod, a.det().unwrap().abs());
            }
        }
    }
}
