//! Operators on 𝓕_a(h) ⊗ 𝓕_s(slot₁) ⊗ … kept as sums of Kronecker terms.
//!
//! Factors are shared through `Arc`; a product with an identity factor returns
//! the same `Arc`, so terms that differ only in their fermion part are merged
//! by pointer and cancel exactly.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sparse::CsrMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Above this many dense block entries the residual norm is computed by the
/// telescoped Gram expansion instead of explicit blocks.
const BLOCKWISE_BUDGET: f64 = 4.0e8;

#[derive(Debug, Clone)]
pub enum FermiFactor {
    Identity,
    Sparse(Arc<CsrMatrix>),
}

#[derive(Debug, Clone)]
pub enum BoseFactor {
    Identity,
    Dense(Arc<DMatrix<Complex64>>),
}

impl BoseFactor {
    fn key(&self) -> usize {
        match self {
            BoseFactor::Identity => 0,
            BoseFactor::Dense(a) => Arc::as_ptr(a) as usize,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (BoseFactor::Identity, x) | (x, BoseFactor::Identity) => x.clone(),
            (BoseFactor::Dense(a), BoseFactor::Dense(b)) => BoseFactor::Dense(Arc::new(a.as_ref() * b.as_ref())),
        }
    }

    fn adjoint(&self) -> Self {
        match self {
            BoseFactor::Identity => BoseFactor::Identity,
            BoseFactor::Dense(a) => BoseFactor::Dense(Arc::new(a.adjoint())),
        }
    }

    fn dense(&self, dim: usize) -> DMatrix<Complex64> {
        match self {
            BoseFactor::Identity => DMatrix::identity(dim, dim),
            BoseFactor::Dense(a) => a.as_ref().clone(),
        }
    }
}

impl FermiFactor {
    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (FermiFactor::Identity, x) | (x, FermiFactor::Identity) => x.clone(),
            (FermiFactor::Sparse(a), FermiFactor::Sparse(b)) => FermiFactor::Sparse(Arc::new(a.matmul(b))),
        }
    }

    fn adjoint(&self) -> Self {
        match self {
            FermiFactor::Identity => FermiFactor::Identity,
            FermiFactor::Sparse(a) => FermiFactor::Sparse(Arc::new(a.adjoint())),
        }
    }

    fn sparse(&self, dim: usize) -> CsrMatrix {
        match self {
            FermiFactor::Identity => CsrMatrix::identity(dim),
            FermiFactor::Sparse(a) => a.as_ref().clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: Complex64,
    pub fermi: FermiFactor,
    pub bose: Vec<BoseFactor>,
}

/// Dimensions of the fermion factor and of each boson slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims {
    pub fermi: usize,
    pub bose: Vec<usize>,
}

impl Dims {
    pub fn bose_total(&self) -> usize {
        self.bose.iter().product()
    }

    pub fn total(&self) -> usize {
        self.fermi * self.bose_total()
    }
}

/// Masks restricting rows or columns of each tensor factor; `None` keeps all.
#[derive(Debug, Clone, Default)]
pub struct Domain {
    pub fermi: Option<Vec<bool>>,
    pub bose: Vec<Option<Vec<bool>>>,
}

impl Domain {
    pub fn all(slots: usize) -> Self {
        Self { fermi: None, bose: vec![None; slots] }
    }

    fn fermi_mask(&self) -> Option<&[bool]> {
        self.fermi.as_deref()
    }

    fn bose_mask(&self, slot: usize) -> Option<&[bool]> {
        self.bose.get(slot).and_then(|m| m.as_deref())
    }
}

#[derive(Debug, Clone)]
pub struct CompositeOperator {
    dims: Dims,
    terms: Vec<Term>,
}

impl CompositeOperator {
    pub fn zero(dims: Dims) -> Self {
        Self { dims, terms: Vec::new() }
    }

    pub fn identity(dims: Dims) -> Self {
        let slots = dims.bose.len();
        Self { dims, terms: vec![Term { coeff: ONE, fermi: FermiFactor::Identity, bose: vec![BoseFactor::Identity; slots] }] }
    }

    /// F ⊗ I ⊗ … ⊗ I.
    pub fn fermi(dims: Dims, f: CsrMatrix) -> Self {
        assert_eq!(f.nrows(), dims.fermi, "fermion factor dimension");
        let slots = dims.bose.len();
        Self { dims, terms: vec![Term { coeff: ONE, fermi: FermiFactor::Sparse(Arc::new(f)), bose: vec![BoseFactor::Identity; slots] }] }
    }

    /// I ⊗ … ⊗ B (in `slot`) ⊗ … ⊗ I.
    pub fn bose(dims: Dims, slot: usize, b: DMatrix<Complex64>) -> Self {
        assert_eq!(b.nrows(), dims.bose[slot], "boson factor dimension");
        let mut bose = vec![BoseFactor::Identity; dims.bose.len()];
        bose[slot] = BoseFactor::Dense(Arc::new(b));
        Self { dims, terms: vec![Term { coeff: ONE, fermi: FermiFactor::Identity, bose }] }
    }

    /// F ⊗ B₁ ⊗ B₂ ⊗ …
    pub fn product(dims: Dims, f: CsrMatrix, bs: Vec<DMatrix<Complex64>>) -> Self {
        assert_eq!(bs.len(), dims.bose.len());
        let bose = bs.into_iter().map(|b| BoseFactor::Dense(Arc::new(b))).collect();
        Self { dims, terms: vec![Term { coeff: ONE, fermi: FermiFactor::Sparse(Arc::new(f)), bose }] }
    }

    /// The same operator on a space with extra boson slots appended; `dims` must
    /// agree with the current dimensions on the existing slots.
    pub fn extended(&self, dims: &Dims) -> Self {
        assert!(dims.fermi == self.dims.fermi && dims.bose.starts_with(&self.dims.bose), "extension must keep existing slots");
        let extra = dims.bose.len() - self.dims.bose.len();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut bose = t.bose.clone();
                bose.extend(std::iter::repeat_n(BoseFactor::Identity, extra));
                Term { bose, ..t.clone() }
            })
            .collect();
        Self { dims: dims.clone(), terms }
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * a, ..t.clone() }).collect();
        Self { dims: self.dims.clone(), terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims, "composite dimension mismatch");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { dims: self.dims.clone(), terms }.simplified()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims, "composite dimension mismatch");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    fermi: a.fermi.mul(&b.fermi),
                    bose: a.bose.iter().zip(&b.bose).map(|(x, y)| x.mul(y)).collect(),
                });
            }
        }
        Self { dims: self.dims.clone(), terms }.simplified()
    }

    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff.conj(), fermi: t.fermi.adjoint(), bose: t.bose.iter().map(|b| b.adjoint()).collect() })
            .collect();
        Self { dims: self.dims.clone(), terms }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Merge terms sharing all boson factors; drop exact zeros.
    pub fn simplified(&self) -> Self {
        let mut keys: Vec<Vec<usize>> = Vec::new();
        let mut groups: Vec<Vec<&Term>> = Vec::new();
        for t in &self.terms {
            if t.coeff == ZERO {
                continue;
            }
            let key: Vec<usize> = t.bose.iter().map(|b| b.key()).collect();
            match keys.iter().position(|k| *k == key) {
                Some(i) => groups[i].push(t),
                None => {
                    keys.push(key);
                    groups.push(vec![t]);
                }
            }
        }
        let mut terms = Vec::with_capacity(groups.len());
        for g in groups {
            if g.len() == 1 {
                terms.push(g[0].clone());
                continue;
            }
            let bose = g[0].bose.clone();
            if g.iter().all(|t| matches!(t.fermi, FermiFactor::Identity)) {
                let c: Complex64 = g.iter().map(|t| t.coeff).sum();
                if c != ZERO {
                    terms.push(Term { coeff: c, fermi: FermiFactor::Identity, bose });
                }
                continue;
            }
            let mut acc = CsrMatrix::zeros(self.dims.fermi, self.dims.fermi);
            for t in &g {
                acc = acc.lin_comb(ONE, &t.fermi.sparse(self.dims.fermi), t.coeff);
            }
            if !acc.is_zero() {
                terms.push(Term { coeff: ONE, fermi: FermiFactor::Sparse(Arc::new(acc)), bose });
            }
        }
        Self { dims: self.dims.clone(), terms }
    }

    pub fn is_zero(&self) -> bool {
        self.simplified().terms.is_empty()
    }

    /// Frobenius norm of the block with columns in `cols` and rows in `rows`.
    pub fn norm_on(&self, cols: &Domain, rows: &Domain) -> f64 {
        let s = self.simplified();
        match s.terms.len() {
            0 => 0.0,
            1 => s.single_term_norm(&s.terms[0], cols, rows),
            _ => {
                if s.blockwise_cost(cols, rows) <= BLOCKWISE_BUDGET {
                    s.blockwise_norm(cols, rows)
                } else {
                    s.telescoped_norm(cols, rows)
                }
            }
        }
    }

    /// Frobenius norm restricted to columns in `cols`, all rows.
    pub fn norm_cols(&self, cols: &Domain) -> f64 {
        self.norm_on(cols, &Domain::all(self.dims.bose.len()))
    }

    pub fn norm(&self) -> f64 {
        let all = Domain::all(self.dims.bose.len());
        self.norm_on(&all, &all)
    }

    fn single_term_norm(&self, t: &Term, cols: &Domain, rows: &Domain) -> f64 {
        let mut n = t.coeff.norm() * fermi_norm(&t.fermi, self.dims.fermi, rows.fermi_mask(), cols.fermi_mask());
        for (k, b) in t.bose.iter().enumerate() {
            n *= bose_norm(b, self.dims.bose[k], rows.bose_mask(k), cols.bose_mask(k));
        }
        n
    }

    fn joint_bose(&self, t: &Term, cols: &Domain, rows: &Domain) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(1, 1, ONE);
        for (k, b) in t.bose.iter().enumerate() {
            let d = self.dims.bose[k];
            let m = restrict(&b.dense(d), rows.bose_mask(k), cols.bose_mask(k));
            out = out.kronecker(&m);
        }
        out
    }

    fn blockwise_cost(&self, cols: &Domain, rows: &Domain) -> f64 {
        let rb: f64 = (0..self.dims.bose.len()).map(|k| count(rows.bose_mask(k), self.dims.bose[k]) as f64).product();
        let cb: f64 = (0..self.dims.bose.len()).map(|k| count(cols.bose_mask(k), self.dims.bose[k]) as f64).product();
        let pairs: f64 = self
            .terms
            .iter()
            .map(|t| match &t.fermi {
                FermiFactor::Identity => self.dims.fermi as f64,
                FermiFactor::Sparse(a) => a.nnz() as f64,
            })
            .sum();
        pairs * rb * cb
    }

    fn blockwise_norm(&self, cols: &Domain, rows: &Domain) -> f64 {
        let xs: Vec<DMatrix<Complex64>> = self.terms.iter().map(|t| self.joint_bose(t, cols, rows)).collect();
        let xnorm: Vec<f64> = xs.iter().map(|x| x.norm()).collect();
        let fr = rows.fermi_mask();
        let fc = cols.fermi_mask();
        let mut entries: std::collections::BTreeMap<(usize, usize), Vec<(usize, Complex64)>> = Default::default();
        for (g, t) in self.terms.iter().enumerate() {
            match &t.fermi {
                FermiFactor::Identity => {
                    for i in 0..self.dims.fermi {
                        if keep(fr, i) && keep(fc, i) {
                            entries.entry((i, i)).or_default().push((g, t.coeff));
                        }
                    }
                }
                FermiFactor::Sparse(a) => {
                    for (i, j, v) in a.iter() {
                        if keep(fr, i) && keep(fc, j) {
                            entries.entry((i, j)).or_default().push((g, t.coeff * v));
                        }
                    }
                }
            }
        }
        let mut total = 0.0;
        for list in entries.values() {
            if list.len() == 1 {
                let (g, v) = list[0];
                total += v.norm_sqr() * xnorm[g] * xnorm[g];
            } else {
                let mut block = &xs[list[0].0] * list[0].1;
                for &(g, v) in &list[1..] {
                    block += &xs[g] * v;
                }
                total += block.norm_squared();
            }
        }
        total.sqrt()
    }

    /// Σ_g F_g ⊗ X_g = (Σ_g F_g) ⊗ X_r + Σ_{g≠r} F_g ⊗ (X_g − X_r), with each
    /// difference telescoped slot by slot, then the Gram sum of the pieces.
    fn telescoped_norm(&self, cols: &Domain, rows: &Domain) -> f64 {
        let nd = self.dims.fermi;
        let r = &self.terms[0];
        let mut pieces: Vec<(CsrMatrix, Vec<Option<DMatrix<Complex64>>>)> = Vec::new();
        let mut fsum = CsrMatrix::zeros(nd, nd);
        for t in &self.terms {
            fsum = fsum.lin_comb(ONE, &t.fermi.sparse(nd), t.coeff);
        }
        let dense_or_id = |b: &BoseFactor| match b {
            BoseFactor::Identity => None,
            BoseFactor::Dense(a) => Some(a.as_ref().clone()),
        };
        pieces.push((fsum, r.bose.iter().map(dense_or_id).collect()));
        for t in &self.terms[1..] {
            let f = t.fermi.sparse(nd).scale(t.coeff);
            for k in 0..t.bose.len() {
                if t.bose[k].key() == r.bose[k].key() {
                    continue;
                }
                let d = self.dims.bose[k];
                let mut slots: Vec<Option<DMatrix<Complex64>>> = Vec::new();
                for j in 0..k {
                    slots.push(dense_or_id(&r.bose[j]));
                }
                slots.push(Some(t.bose[k].dense(d) - r.bose[k].dense(d)));
                for j in k + 1..t.bose.len() {
                    slots.push(dense_or_id(&t.bose[j]));
                }
                pieces.push((f.clone(), slots));
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for a in 0..pieces.len() {
            for b in 0..pieces.len() {
                let mut v = sparse_inner(&pieces[a].0, &pieces[b].0, rows.fermi_mask(), cols.fermi_mask());
                if v == ZERO {
                    continue;
                }
                for k in 0..self.dims.bose.len() {
                    v *= dense_inner(
                        pieces[a].1[k].as_ref(),
                        pieces[b].1[k].as_ref(),
                        self.dims.bose[k],
                        rows.bose_mask(k),
                        cols.bose_mask(k),
                    );
                }
                total += v;
            }
        }
        total.re.max(0.0).sqrt()
    }

    /// Apply to a vector in fermion-major layout (slot 1 next, last slot fastest).
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dims.total(), "vector dimension");
        let mut out = vec![ZERO; v.len()];
        let mut shape = vec![self.dims.fermi];
        shape.extend(&self.dims.bose);
        for t in &self.terms {
            let mut x = v.to_vec();
            for (k, b) in t.bose.iter().enumerate() {
                if let BoseFactor::Dense(m) = b {
                    x = apply_axis(&x, &shape, k + 1, |line| (m.as_ref() * nalgebra::DVector::from_vec(line)).data.into());
                }
            }
            if let FermiFactor::Sparse(f) = &t.fermi {
                x = apply_axis(&x, &shape, 0, |line| f.mul_vec(&line));
            }
            for (o, xi) in out.iter_mut().zip(&x) {
                *o += t.coeff * xi;
            }
        }
        out
    }

    /// ⟨u, A v⟩.
    pub fn matrix_element(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let av = self.apply(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    /// True if every fermion factor is diagonal.
    pub fn is_fermion_diagonal(&self) -> bool {
        self.terms.iter().all(|t| match &t.fermi {
            FermiFactor::Identity => true,
            FermiFactor::Sparse(a) => a.is_diagonal(),
        })
    }

    /// Joint boson block at fermion basis state `j` for fermion-diagonal operators.
    pub fn fermion_diagonal_block(&self, j: usize) -> DMatrix<Complex64> {
        let all = Domain::all(self.dims.bose.len());
        let nb = self.dims.bose_total();
        let mut out = DMatrix::zeros(nb, nb);
        for t in &self.terms {
            let f = match &t.fermi {
                FermiFactor::Identity => ONE,
                FermiFactor::Sparse(a) => a.get(j, j),
            };
            if f != ZERO {
                out += self.joint_bose(t, &all, &all) * (t.coeff * f);
            }
        }
        out
    }

    /// exp(iA) for A = Σ (diagonal fermion ⊗ I) + Σ (I ⊗ single boson slot);
    /// the summands commute, so the exponential factorizes.
    pub fn exp_i_separable(&self) -> Option<Self> {
        let nd = self.dims.fermi;
        let mut fd = vec![ZERO; nd];
        let mut slots: Vec<DMatrix<Complex64>> = self.dims.bose.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        for t in &self.terms {
            let nontrivial: Vec<usize> =
                t.bose.iter().enumerate().filter(|(_, b)| matches!(b, BoseFactor::Dense(_))).map(|(k, _)| k).collect();
            match (&t.fermi, nontrivial.as_slice()) {
                (FermiFactor::Identity, []) => fd.iter_mut().for_each(|x| *x += t.coeff),
                (FermiFactor::Sparse(a), []) if a.is_diagonal() => {
                    for (x, d) in fd.iter_mut().zip(a.diagonal()) {
                        *x += t.coeff * d;
                    }
                }
                (FermiFactor::Identity, [k]) => slots[*k] += t.bose[*k].dense(self.dims.bose[*k]) * t.coeff,
                _ => return None,
            }
        }
        let fexp: Vec<Complex64> = fd.iter().map(|d| (Complex64::i() * d).exp()).collect();
        let bexp: Vec<DMatrix<Complex64>> = slots.into_iter().map(|m| (m * Complex64::i()).exp()).collect();
        Some(Self::product(self.dims.clone(), CsrMatrix::from_diagonal(&fexp), bexp))
    }
}

fn keep(mask: Option<&[bool]>, i: usize) -> bool {
    mask.is_none_or(|m| m[i])
}

fn count(mask: Option<&[bool]>, n: usize) -> usize {
    mask.map_or(n, |m| m.iter().filter(|&&b| b).count())
}

fn restrict(m: &DMatrix<Complex64>, rows: Option<&[bool]>, cols: Option<&[bool]>) -> DMatrix<Complex64> {
    let ri: Vec<usize> = (0..m.nrows()).filter(|&i| keep(rows, i)).collect();
    let ci: Vec<usize> = (0..m.ncols()).filter(|&j| keep(cols, j)).collect();
    DMatrix::from_fn(ri.len(), ci.len(), |a, b| m[(ri[a], ci[b])])
}

fn fermi_norm(f: &FermiFactor, dim: usize, rows: Option<&[bool]>, cols: Option<&[bool]>) -> f64 {
    match f {
        FermiFactor::Identity => ((0..dim).filter(|&i| keep(rows, i) && keep(cols, i)).count() as f64).sqrt(),
        FermiFactor::Sparse(a) => a.masked_norm(rows, cols),
    }
}

fn bose_norm(b: &BoseFactor, dim: usize, rows: Option<&[bool]>, cols: Option<&[bool]>) -> f64 {
    match b {
        BoseFactor::Identity => ((0..dim).filter(|&i| keep(rows, i) && keep(cols, i)).count() as f64).sqrt(),
        BoseFactor::Dense(a) => restrict(a, rows, cols).norm(),
    }
}

fn sparse_inner(a: &CsrMatrix, b: &CsrMatrix, rows: Option<&[bool]>, cols: Option<&[bool]>) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        if !keep(rows, i) {
            continue;
        }
        let rb: Vec<(usize, Complex64)> = b.row(i).collect();
        for (j, v) in a.row(i) {
            if keep(cols, j) {
                if let Ok(p) = rb.binary_search_by_key(&j, |e| e.0) {
                    acc += v.conj() * rb[p].1;
                }
            }
        }
    }
    acc
}

fn dense_inner(
    a: Option<&DMatrix<Complex64>>,
    b: Option<&DMatrix<Complex64>>,
    dim: usize,
    rows: Option<&[bool]>,
    cols: Option<&[bool]>,
) -> Complex64 {
    let mut acc = ZERO;
    match (a, b) {
        (None, None) => {
            acc = Complex64::new((0..dim).filter(|&i| keep(rows, i) && keep(cols, i)).count() as f64, 0.0);
        }
        (Some(m), None) => {
            for i in 0..dim {
                if keep(rows, i) && keep(cols, i) {
                    acc += m[(i, i)].conj();
                }
            }
        }
        (None, Some(m)) => {
            for i in 0..dim {
                if keep(rows, i) && keep(cols, i) {
                    acc += m[(i, i)];
                }
            }
        }
        (Some(x), Some(y)) => {
            for j in 0..dim {
                if !keep(cols, j) {
                    continue;
                }
                for i in 0..dim {
                    if keep(rows, i) {
                        acc += x[(i, j)].conj() * y[(i, j)];
                    }
                }
            }
        }
    }
    acc
}

/// Apply `op` to every line of the row-major tensor `x` along `axis`.
fn apply_axis(x: &[Complex64], shape: &[usize], axis: usize, op: impl Fn(Vec<Complex64>) -> Vec<Complex64>) -> Vec<Complex64> {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![ZERO; x.len()];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * n * inner + i;
            let line: Vec<Complex64> = (0..n).map(|j| x[base + j * inner]).collect();
            for (j, v) in op(line).into_iter().enumerate() {
                out[base + j * inner] = v;
            }
        }
    }
    out
}

/// v_f ⊗ v₁ ⊗ v₂ ⊗ … in the layout used by [`CompositeOperator::apply`].
pub fn product_vector(fermi: &[Complex64], bose: &[&[Complex64]]) -> Vec<Complex64> {
    let mut out = fermi.to_vec();
    for b in bose {
        out = out.iter().flat_map(|a| b.iter().map(move |c| a * c)).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(n: usize, seed: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |i, j| Complex64::new(((i * 3 + j) as f64 * seed).sin(), ((i + 5 * j) as f64 * seed).cos()))
    }

    fn sparse(n: usize, seed: f64) -> CsrMatrix {
        let d = dense(n, seed).map(|z| if z.re.abs() < 0.3 { ZERO } else { z });
        CsrMatrix::from_dense(&d)
    }

    fn to_dense(op: &CompositeOperator) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(op.dims.total(), op.dims.total());
        for t in &op.terms {
            let mut m = t.fermi.sparse(op.dims.fermi).to_dense();
            for (k, b) in t.bose.iter().enumerate() {
                m = m.kronecker(&b.dense(op.dims.bose[k]));
            }
            out += m * t.coeff;
        }
        out
    }

    fn dims() -> Dims {
        Dims { fermi: 4, bose: vec![3, 2] }
    }

    #[test]
    fn algebra_matches_dense() {
        let a = CompositeOperator::fermi(dims(), sparse(4, 0.7)).add(&CompositeOperator::bose(dims(), 0, dense(3, 1.1)));
        let b = CompositeOperator::product(dims(), sparse(4, 1.9), vec![dense(3, 0.4), dense(2, 2.2)])
            .add(&CompositeOperator::bose(dims(), 1, dense(2, 0.9)).scale(Complex64::new(0.0, 2.0)));
        let (da, db) = (to_dense(&a), to_dense(&b));
        assert!((to_dense(&a.mul(&b)) - &da * &db).norm() < 1e-12);
        assert!((to_dense(&a.commutator(&b)) - (&da * &db - &db * &da)).norm() < 1e-12);
        assert!((to_dense(&a.adjoint()) - da.adjoint()).norm() < 1e-12);
        assert!((a.commutator(&b).norm() - (&da * &db - &db * &da).norm()).abs() < 1e-10);
        let v: Vec<Complex64> = (0..24).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let av = a.mul(&b).apply(&v);
        let dv = &da * &db * nalgebra::DVector::from_vec(v);
        assert!(av.iter().zip(dv.iter()).all(|(x, y)| (x - y).norm() < 1e-10));
    }

    #[test]
    fn masked_norms_agree_across_methods() {
        let a = CompositeOperator::product(dims(), sparse(4, 0.3), vec![dense(3, 0.5), dense(2, 0.8)])
            .add(&CompositeOperator::fermi(dims(), sparse(4, 1.3)))
            .add(&CompositeOperator::bose(dims(), 1, dense(2, 0.6)));
        let cols = Domain { fermi: Some(vec![true, false, true, true]), bose: vec![Some(vec![true, true, false]), None] };
        let rows = Domain { fermi: None, bose: vec![None, Some(vec![false, true])] };
        let b = a.blockwise_norm(&cols, &rows);
        let t = a.telescoped_norm(&cols, &rows);
        assert!((b - t).abs() < 1e-10 * b.max(1.0), "{b} {t}");
        // dense reference
        let d = to_dense(&a);
        let mut acc = 0.0;
        for i in 0..24 {
            for j in 0..24 {
                let (fi, bi0, bi1) = (i / 6, (i / 2) % 3, i % 2);
                let (fj, bj0, bj1) = (j / 6, (j / 2) % 3, j % 2);
                let r = rows.bose[1].as_ref().unwrap()[bi1];
                let c = cols.fermi.as_ref().unwrap()[fj] && cols.bose[0].as_ref().unwrap()[bj0];
                let _ = (fi, bi0, bj1);
                if r && c {
                    acc += d[(i, j)].norm_sqr();
                }
            }
        }
        assert!((acc.sqrt() - b).abs() < 1e-10);
    }

    #[test]
    fn identity_products_cancel_exactly() {
        let f = CompositeOperator::fermi(dims(), sparse(4, 0.3));
        let b = CompositeOperator::bose(dims(), 0, dense(3, 0.5));
        assert!(f.commutator(&b).is_zero());
    }

    #[test]
    fn separable_exponential() {
        let d: Vec<Complex64> = (0..4).map(|i| Complex64::new(0.3 * i as f64, 0.0)).collect();
        let h = dense(3, 0.5);
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let a = CompositeOperator::fermi(dims(), CsrMatrix::from_diagonal(&d)).add(&CompositeOperator::bose(dims(), 0, h));
        let e = a.exp_i_separable().unwrap();
        let reference = (to_dense(&a) * Complex64::i()).exp();
        assert!((to_dense(&e) - reference).norm() < 1e-11);
    }
}
