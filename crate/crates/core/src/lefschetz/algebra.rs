//! Lie algebras given by structure constants, their automorphisms, fixed
//! subalgebras and the centre/derived splitting of reductive pieces.

use num::{One, Zero};

use super::form::QuadForm;
use super::qmat::{coordinates, is_zero_vec, q, span_basis, QMat, Q};
use super::LefschetzError;

/// `[e_i, e_j] = Σ_k c_{ij}^k e_k` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSC {
    label: String,
    dim: usize,
    c: Vec<Q>,
}

fn idx(dim: usize, i: usize, j: usize, k: usize) -> usize {
    (i * dim + j) * dim + k
}

impl LieAlgebraSC {
    /// Takes the full tensor `c[(i·dim + j)·dim + k] = c_{ij}^k`.
    pub fn new(label: &str, dim: usize, c: Vec<Q>) -> Result<Self, LefschetzError> {
        if c.len() != dim * dim * dim {
            return Err(LefschetzError::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                dim.pow(3),
                c.len()
            )));
        }
        let g = LieAlgebraSC {
            label: label.into(),
            dim,
            c,
        };
        g.check_antisymmetry()?;
        g.check_jacobi()?;
        Ok(g)
    }

    /// Builds the algebra from entries `(i, j, k, c_{ij}^k)`; the entries for
    /// `(j, i)` are filled in by antisymmetry.
    pub fn from_brackets(
        label: &str,
        dim: usize,
        entries: &[(usize, usize, usize, Q)],
    ) -> Result<Self, LefschetzError> {
        let mut c: Vec<Option<Q>> = vec![None; dim * dim * dim];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(LefschetzError::InvalidAlgebra(format!(
                    "index ({i}, {j}, {k}) out of range"
                )));
            }
            for (slot, val) in [
                (idx(dim, i, j, k), v.clone()),
                (idx(dim, j, i, k), -v.clone()),
            ] {
                match &c[slot] {
                    Some(old) if *old != val => {
                        return Err(LefschetzError::InvalidAlgebra(format!(
                            "conflicting entries for [e{i}, e{j}]"
                        )));
                    }
                    _ => c[slot] = Some(val),
                }
            }
        }
        Self::new(
            label,
            dim,
            c.into_iter().map(|x| x.unwrap_or_else(Q::zero)).collect(),
        )
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebraSC {
            label: format!("abelian_{dim}"),
            dim,
            c: vec![Q::zero(); dim * dim * dim],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[idx(self.dim, i, j, k)]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim;
        let mut out = vec![Q::zero(); d];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let cc = &self.c[idx(d, i, j, k)];
                    if !cc.is_zero() {
                        *o += &w * cc;
                    }
                }
            }
        }
        out
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        (0..self.dim)
            .map(|k| self.structure_constant(i, j, k).clone())
            .collect()
    }

    /// Matrix of `ad x`; column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &[Q]) -> QMat {
        let cols: Vec<Vec<Q>> = (0..self.dim)
            .map(|j| self.bracket(x, &self.basis_vector(j)))
            .collect();
        QMat::from_columns(&cols, self.dim)
    }

    fn check_antisymmetry(&self) -> Result<(), LefschetzError> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.c[idx(d, i, j, k)] != -self.c[idx(d, j, i, k)].clone() {
                        return Err(LefschetzError::InvalidAlgebra(format!(
                            "c_({i},{j})^{k} is not antisymmetric"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<(), LefschetzError> {
        let d = self.dim;
        let e: Vec<Vec<Q>> = (0..d).map(|i| self.basis_vector(i)).collect();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let a = self.bracket(&e[i], &self.bracket_basis(j, k));
                    let b = self.bracket(&e[j], &self.bracket_basis(k, i));
                    let c = self.bracket(&e[k], &self.bracket_basis(i, j));
                    if (0..d).any(|t| !(&a[t] + &b[t] + &c[t]).is_zero()) {
                        return Err(LefschetzError::InvalidAlgebra(format!(
                            "Jacobi identity fails on (e{i}, e{j}, e{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the span of `basis` is closed under the bracket.
    pub fn is_subalgebra(&self, basis: &[Vec<Q>]) -> bool {
        basis.iter().enumerate().all(|(a, x)| {
            basis[a + 1..].iter().all(|y| {
                let z = self.bracket(x, y);
                is_zero_vec(&z) || coordinates(basis, &z).is_some()
            })
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

/// A Lie algebra realised inside `gl_N`, keeping the matrix basis so that
/// conjugations can be turned into automorphisms.
#[derive(Clone, Debug)]
pub struct MatrixLieAlgebra {
    algebra: LieAlgebraSC,
    basis: Vec<QMat>,
}

fn flatten(m: &QMat) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

impl MatrixLieAlgebra {
    pub fn new(label: &str, basis: Vec<QMat>) -> Result<Self, LefschetzError> {
        let Some(first) = basis.first() else {
            return Ok(MatrixLieAlgebra {
                algebra: LieAlgebraSC::abelian(0),
                basis,
            });
        };
        let n = first.rows();
        if basis.iter().any(|b| b.rows() != n || b.cols() != n) {
            return Err(LefschetzError::Shape(
                "basis matrices must be square of one size".into(),
            ));
        }
        let flat: Vec<Vec<Q>> = basis.iter().map(flatten).collect();
        if span_basis(&flat, n * n).len() != basis.len() {
            return Err(LefschetzError::InvalidAlgebra(
                "basis matrices are linearly dependent".into(),
            ));
        }
        let d = basis.len();
        let mut c = vec![Q::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                let br = basis[i].mul(&basis[j]).sub(&basis[j].mul(&basis[i]));
                let coords = coordinates(&flat, &flatten(&br)).ok_or_else(|| {
                    LefschetzError::InvalidAlgebra(format!("[X{i}, X{j}] leaves the span"))
                })?;
                for (k, v) in coords.into_iter().enumerate() {
                    c[idx(d, i, j, k)] = v;
                }
            }
        }
        Ok(MatrixLieAlgebra {
            algebra: LieAlgebraSC::new(label, d, c)?,
            basis,
        })
    }

    pub fn algebra(&self) -> &LieAlgebraSC {
        &self.algebra
    }

    pub fn basis(&self) -> &[QMat] {
        &self.basis
    }

    /// `Ad(g): X ↦ g X g⁻¹`, with its order found by search up to `max_order`.
    pub fn adjoint(&self, g: &QMat, max_order: u32) -> Result<AlgebraAuto, LefschetzError> {
        let n = self.basis.first().map_or(0, QMat::rows);
        if g.rows() != n || g.cols() != n {
            return Err(LefschetzError::Shape(format!(
                "conjugating matrix must be {n}×{n}"
            )));
        }
        let gi = g.inverse().ok_or_else(|| {
            LefschetzError::NotAutomorphism("conjugating matrix is singular".into())
        })?;
        let flat: Vec<Vec<Q>> = self.basis.iter().map(flatten).collect();
        let cols = self
            .basis
            .iter()
            .map(|x| {
                coordinates(&flat, &flatten(&g.mul(x).mul(&gi))).ok_or_else(|| {
                    LefschetzError::NotAutomorphism(
                        "conjugation does not preserve the algebra".into(),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sigma = QMat::from_columns(&cols, self.basis.len());
        AlgebraAuto::with_minimal_order(&self.algebra, sigma, max_order)
    }
}

fn unit(n: usize, i: usize, j: usize) -> QMat {
    let mut m = QMat::zeros(n, n);
    m.set(i, j, Q::one());
    m
}

fn lin(terms: &[(i64, &QMat)]) -> QMat {
    let n = terms[0].1.rows();
    let mut out = QMat::zeros(n, n);
    for (c, m) in terms {
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + q(*c) * m.get(i, j);
                out.set(i, j, v);
            }
        }
    }
    out
}

/// `sl_n` with basis `E_ij (i < j)`, then `H_i = E_ii − E_{i+1,i+1}`, then
/// `E_ij (i > j)`; for `n = 2` this is `(e, h, f)`.
pub fn sl(n: usize) -> Result<MatrixLieAlgebra, LefschetzError> {
    if !(2..=4).contains(&n) {
        return Err(LefschetzError::Unsupported(format!(
            "sl_{n} (need 2 ≤ n ≤ 4)"
        )));
    }
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(unit(n, i, j));
        }
    }
    for i in 0..n - 1 {
        basis.push(lin(&[(1, &unit(n, i, i)), (-1, &unit(n, i + 1, i + 1))]));
    }
    for i in 0..n {
        for j in 0..i {
            basis.push(unit(n, i, j));
        }
    }
    MatrixLieAlgebra::new(&format!("sl_{n}"), basis)
}

/// The compact form `so_n` with basis `E_ij − E_ji`, `i < j`.
pub fn so(n: usize) -> Result<MatrixLieAlgebra, LefschetzError> {
    if !(2..=5).contains(&n) {
        return Err(LefschetzError::Unsupported(format!(
            "so_{n} (need 2 ≤ n ≤ 5)"
        )));
    }
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(lin(&[(1, &unit(n, i, j)), (-1, &unit(n, j, i))]));
        }
    }
    MatrixLieAlgebra::new(&format!("so_{n}"), basis)
}

/// `J = [[0, I], [−I, 0]]` of size `2n`.
pub fn symplectic_gram(n: usize) -> QMat {
    let mut j = QMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, q(1));
        j.set(n + i, i, q(-1));
    }
    j
}

/// `sp_{2n} = {X : XᵀJ + JX = 0}`, basis read off the echelon form.
pub fn sp(n: usize) -> Result<MatrixLieAlgebra, LefschetzError> {
    if !(1..=3).contains(&n) {
        return Err(LefschetzError::Unsupported(format!(
            "sp_{} (need 1 ≤ n ≤ 3)",
            2 * n
        )));
    }
    let m = 2 * n;
    let j = symplectic_gram(n);
    let mut cond = QMat::zeros(m * m, m * m);
    for a in 0..m {
        for b in 0..m {
            let e = unit(m, a, b);
            let image = flatten(&e.transpose().mul(&j).add(&j.mul(&e)));
            for (r, v) in image.into_iter().enumerate() {
                cond.set(r, a * m + b, v);
            }
        }
    }
    let basis = cond
        .nullspace()
        .into_iter()
        .map(|v| QMat::from_rows(v.chunks(m).map(<[Q]>::to_vec).collect()).expect("square"))
        .collect();
    MatrixLieAlgebra::new(&format!("sp_{m}"), basis)
}

/// The compact form `su_n`, realised in `gl_{2n}(R)` through
/// `A + iB ↦ [[A, −B], [B, A]]`.
pub fn su(n: usize) -> Result<MatrixLieAlgebra, LefschetzError> {
    if !(2..=4).contains(&n) {
        return Err(LefschetzError::Unsupported(format!(
            "su_{n} (need 2 ≤ n ≤ 4)"
        )));
    }
    let realify = |re: &QMat, im: &QMat| {
        let mut out = QMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, re.get(i, j).clone());
                out.set(n + i, n + j, re.get(i, j).clone());
                out.set(n + i, j, im.get(i, j).clone());
                out.set(i, n + j, -im.get(i, j).clone());
            }
        }
        out
    };
    let zero = QMat::zeros(n, n);
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(realify(
                &lin(&[(1, &unit(n, i, j)), (-1, &unit(n, j, i))]),
                &zero,
            ));
            basis.push(realify(
                &zero,
                &lin(&[(1, &unit(n, i, j)), (1, &unit(n, j, i))]),
            ));
        }
    }
    for i in 0..n - 1 {
        basis.push(realify(
            &zero,
            &lin(&[(1, &unit(n, i, i)), (-1, &unit(n, i + 1, i + 1))]),
        ));
    }
    MatrixLieAlgebra::new(&format!("su_{n}"), basis)
}

/// A finite-order automorphism `σ` of a Lie algebra, as a matrix acting on
/// coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraAuto {
    matrix: QMat,
    order: u32,
}

impl AlgebraAuto {
    pub fn new(g: &LieAlgebraSC, matrix: QMat, order: u32) -> Result<Self, LefschetzError> {
        if order == 0 {
            return Err(LefschetzError::NotAutomorphism(
                "order must be positive".into(),
            ));
        }
        if matrix.rows() != g.dim() || matrix.cols() != g.dim() {
            return Err(LefschetzError::Shape(format!(
                "automorphism must be {0}×{0}",
                g.dim()
            )));
        }
        if matrix.pow(order) != QMat::identity(g.dim()) {
            return Err(LefschetzError::NotAutomorphism(format!(
                "σ^{order} is not the identity"
            )));
        }
        let images: Vec<Vec<Q>> = (0..g.dim()).map(|i| matrix.column(i)).collect();
        for i in 0..g.dim() {
            for j in i + 1..g.dim() {
                let lhs = matrix.mul_vec(&g.bracket_basis(i, j));
                if lhs != g.bracket(&images[i], &images[j]) {
                    return Err(LefschetzError::NotAutomorphism(format!(
                        "σ[e{i}, e{j}] ≠ [σe{i}, σe{j}]"
                    )));
                }
            }
        }
        Ok(AlgebraAuto { matrix, order })
    }

    /// Uses the least `m ≤ max_order` with `σ^m = 1`.
    pub fn with_minimal_order(
        g: &LieAlgebraSC,
        matrix: QMat,
        max_order: u32,
    ) -> Result<Self, LefschetzError> {
        let id = QMat::identity(g.dim());
        let mut p = matrix.clone();
        for m in 1..=max_order {
            if p == id {
                return Self::new(g, matrix, m);
            }
            p = p.mul(&matrix);
        }
        Err(LefschetzError::NotAutomorphism(format!(
            "order exceeds {max_order}"
        )))
    }

    pub fn identity(g: &LieAlgebraSC) -> Self {
        AlgebraAuto {
            matrix: QMat::identity(g.dim()),
            order: 1,
        }
    }

    pub fn matrix(&self) -> &QMat {
        &self.matrix
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `self ∘ other`, the twist of one automorphism by another.
    pub fn compose(
        &self,
        other: &AlgebraAuto,
        g: &LieAlgebraSC,
        max_order: u32,
    ) -> Result<Self, LefschetzError> {
        Self::with_minimal_order(g, self.matrix.mul(&other.matrix), max_order)
    }

    /// `B(σx, σy) = B(x, y)` on all basis pairs.
    pub fn preserves(&self, form: &QuadForm) -> bool {
        self.matrix.transpose().mul(form.gram()).mul(&self.matrix) == *form.gram()
    }
}

/// `B(x, y) = tr(ad x ∘ ad y)`.
pub fn killing_form(g: &LieAlgebraSC) -> QuadForm {
    let d = g.dim();
    let ads: Vec<QMat> = (0..d).map(|i| g.ad(&g.basis_vector(i))).collect();
    let mut gram = QMat::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut t = Q::zero();
            for a in 0..d {
                for b in 0..d {
                    let x = ads[i].get(a, b);
                    if !x.is_zero() {
                        let y = ads[j].get(b, a);
                        if !y.is_zero() {
                            t += x * y;
                        }
                    }
                }
            }
            gram.set(i, j, t.clone());
            gram.set(j, i, t);
        }
    }
    QuadForm::new(gram).expect("trace form is symmetric")
}

/// Basis of `g^σ = ker(σ − 1)`.
pub fn fixed_subalgebra(
    g: &LieAlgebraSC,
    sigma: &AlgebraAuto,
) -> Result<Vec<Vec<Q>>, LefschetzError> {
    if sigma.matrix().rows() != g.dim() {
        return Err(LefschetzError::Shape(
            "automorphism does not match the algebra".into(),
        ));
    }
    let basis = sigma.matrix().sub(&QMat::identity(g.dim())).nullspace();
    if !g.is_subalgebra(&basis) {
        return Err(LefschetzError::NotClosed);
    }
    Ok(basis)
}

/// `h = z ⊕ h′` with `z` the centre and `h′ = [h, h]`, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductiveSplit {
    pub center: Vec<Vec<Q>>,
    pub derived: Vec<Vec<Q>>,
}

/// Splits a subalgebra into centre and derived algebra, certifying that the
/// two span, are Killing-orthogonal and that the form is nondegenerate on
/// the derived part.
pub fn derived_center_split(
    g: &LieAlgebraSC,
    sub: &[Vec<Q>],
) -> Result<ReductiveSplit, LefschetzError> {
    let dim = g.dim();
    let sub = span_basis(sub, dim);
    if !g.is_subalgebra(&sub) {
        return Err(LefschetzError::NotClosed);
    }
    let k = sub.len();
    let mut brackets = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            brackets.push(g.bracket(&sub[a], &sub[b]));
        }
    }
    let derived = span_basis(
        &brackets
            .into_iter()
            .filter(|v| !is_zero_vec(v))
            .collect::<Vec<_>>(),
        dim,
    );

    let mut cond = QMat::zeros(k * dim, k);
    for (a, x) in sub.iter().enumerate() {
        for (b, y) in sub.iter().enumerate() {
            for (t, v) in g.bracket(x, y).into_iter().enumerate() {
                cond.set(b * dim + t, a, v);
            }
        }
    }
    let center: Vec<Vec<Q>> = cond
        .nullspace()
        .into_iter()
        .map(|coef| {
            let mut v = vec![Q::zero(); dim];
            for (c, x) in coef.iter().zip(&sub) {
                for (o, xi) in v.iter_mut().zip(x) {
                    *o += c * xi;
                }
            }
            v
        })
        .collect();

    let all: Vec<Vec<Q>> = center.iter().chain(&derived).cloned().collect();
    if center.len() + derived.len() != k || span_basis(&all, dim).len() != k {
        return Err(LefschetzError::NotReductive(format!(
            "centre ({}) and derived algebra ({}) do not split a {k}-dimensional algebra",
            center.len(),
            derived.len()
        )));
    }
    let b = killing_form(g);
    if center
        .iter()
        .any(|z| derived.iter().any(|x| !b.eval(z, x).is_zero()))
    {
        return Err(LefschetzError::NotReductive(
            "centre is not orthogonal to the derived algebra".into(),
        ));
    }
    if !derived.is_empty() && !b.restrict(&derived).is_nondegenerate() {
        return Err(LefschetzError::NotReductive(
            "Killing form degenerates on the derived algebra".into(),
        ));
    }
    Ok(ReductiveSplit { center, derived })
}
