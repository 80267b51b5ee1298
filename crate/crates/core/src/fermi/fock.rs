use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::space::{OneParticleOperator, OneParticleSpace, OneParticleVector};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const UNIT_TOL: f64 = 1e-12;

/// Basis state: occupied modes in increasing order, standing for
/// c*_{m₁}···c*_{mₙ}Ω_f.
pub type Occupation = Vec<u32>;

/// Number-truncated fermionic Fock space over a [`OneParticleSpace`].
#[derive(Debug, Clone)]
pub struct FermionFockSpace {
    space: OneParticleSpace,
    f_max: usize,
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
    charge: Vec<i32>,
}

/// c*_m |S⟩ = (−1)^{#{s∈S : s<m}} |S∪{m}⟩.
fn create_mode(state: &[u32], m: u32) -> Option<(f64, Occupation)> {
    match state.binary_search(&m) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = Vec::with_capacity(state.len() + 1);
            out.extend_from_slice(&state[..pos]);
            out.push(m);
            out.extend_from_slice(&state[pos..]);
            Some((if pos % 2 == 0 { 1.0 } else { -1.0 }, out))
        }
    }
}

/// c_m |S⟩.
fn annihilate_mode(state: &[u32], m: u32) -> Option<(f64, Occupation)> {
    match state.binary_search(&m) {
        Err(_) => None,
        Ok(pos) => {
            let mut out = state.to_vec();
            out.remove(pos);
            Some((if pos % 2 == 0 { 1.0 } else { -1.0 }, out))
        }
    }
}

fn combinations(m: usize, k: usize, out: &mut Vec<Occupation>) {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Occupation>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i as u32);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut Vec::with_capacity(k), out);
}

impl FermionFockSpace {
    pub fn new(space: OneParticleSpace, f_max: usize) -> Self {
        let m = space.mode_count();
        let mut states = Vec::new();
        for k in 0..=f_max.min(m) {
            let mut block = Vec::new();
            combinations(m, k, &mut block);
            // bitset order: compare highest occupied mode first
            block.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
            states.extend(block);
        }
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let charge = states.iter().map(|s| s.iter().map(|&m| space.charge(m as usize)).sum()).collect();
        Self { space, f_max, states, index, charge }
    }

    pub fn space(&self) -> &OneParticleSpace {
        &self.space
    }

    pub fn f_max(&self) -> usize {
        self.f_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn state_index(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn number(&self, i: usize) -> usize {
        self.states[i].len()
    }

    pub fn charge(&self, i: usize) -> i32 {
        self.charge[i]
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Basis states with fermion number ≤ `n`.
    pub fn number_mask(&self, n: usize) -> Vec<bool> {
        self.states.iter().map(|s| s.len() <= n).collect()
    }

    /// States on which creation is not truncated: n ≤ F_max − 1.
    pub fn safe_mask(&self) -> Vec<bool> {
        match self.f_max.checked_sub(1) {
            Some(n) => self.number_mask(n),
            None => vec![false; self.dim()],
        }
    }

    /// Raw Σ_m v_m c*_m on a sparse vector, dropping states beyond F_max.
    fn raw_create_on(&self, v: &[(u32, Complex64)], x: &HashMap<Occupation, Complex64>) -> HashMap<Occupation, Complex64> {
        let mut out: HashMap<Occupation, Complex64> = HashMap::new();
        for (s, a) in x {
            if s.len() >= self.f_max {
                continue;
            }
            for &(m, c) in v {
                if let Some((sign, t)) = create_mode(s, m) {
                    *out.entry(t).or_insert(ZERO) += a * c * sign;
                }
            }
        }
        out
    }

    /// a*(w) = √ΔV Σ w_m c*_m; maps the top sector to 0.
    pub fn creation(&self, w: &[Complex64]) -> Result<CsrMatrix> {
        self.space.check_len(w.len())?;
        let scale = self.space.grid().cell_volume().sqrt();
        let nz: Vec<(u32, Complex64)> =
            w.iter().enumerate().filter(|(_, c)| **c != ZERO).map(|(m, c)| (m as u32, c * scale)).collect();
        let mut t = Vec::new();
        for (j, s) in self.states.iter().enumerate() {
            if s.len() >= self.f_max {
                continue;
            }
            for &(m, c) in &nz {
                if let Some((sign, target)) = create_mode(s, m) {
                    t.push((self.index[&target], j, c * sign));
                }
            }
        }
        Ok(CsrMatrix::from_triplets(self.dim(), self.dim(), t))
    }

    /// a(w) = √ΔV Σ w̄_m c_m, the adjoint of [`Self::creation`].
    pub fn annihilation(&self, w: &[Complex64]) -> Result<CsrMatrix> {
        Ok(self.creation(w)?.adjoint())
    }

    /// ψ(w) = 2^{−1/2}(a*(w⊕0) + a(0⊕w̄)) for w ∈ h₊.
    pub fn psi(&self, w: &[Complex64]) -> Result<CsrMatrix> {
        self.space.check_len(w.len())?;
        if self.space.positron_part(w).iter().any(|c| *c != ZERO) {
            return Err(Error::NotElectron);
        }
        let conj: Vec<Complex64> = self.space.electron_part(w).iter().map(|c| c.conj()).collect();
        let p = self.space.positron(&conj)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ok(self.creation(w)?.add(&self.annihilation(&p)?).scale(Complex64::new(s, 0.0)))
    }

    /// ψ̂(w) = 2^{−1/2}(a*(w) + a(κw)).
    pub fn psi_selfdual(&self, w: &[Complex64]) -> Result<CsrMatrix> {
        self.space.check_len(w.len())?;
        let kw = self.space.kappa().apply(w);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ok(self.creation(w)?.add(&self.annihilation(&kw)?).scale(Complex64::new(s, 0.0)))
    }

    /// dΓ(A) = Σ A_mn c*_m c_n, without a selfadjointness check.
    pub fn dgamma_matrix(&self, a: &DMatrix<Complex64>) -> Result<CsrMatrix> {
        self.space.check_len(a.nrows())?;
        let m = a.nrows();
        let cols: Vec<Vec<(u32, Complex64)>> = (0..m)
            .map(|n| (0..m).filter(|&i| a[(i, n)] != ZERO).map(|i| (i as u32, a[(i, n)])).collect())
            .collect();
        let mut t = Vec::new();
        for (j, s) in self.states.iter().enumerate() {
            for &n in s {
                let (s1, removed) = annihilate_mode(s, n).expect("occupied");
                for &(mm, c) in &cols[n as usize] {
                    if let Some((s2, target)) = create_mode(&removed, mm) {
                        t.push((self.index[&target], j, c * s1 * s2));
                    }
                }
            }
        }
        Ok(CsrMatrix::from_triplets(self.dim(), self.dim(), t))
    }

    pub fn dgamma(&self, a: &OneParticleOperator) -> Result<CsrMatrix> {
        let d = a.hermiticity_defect();
        if d > UNIT_TOL * (1.0 + a.matrix().norm()) {
            return Err(Error::NotSelfadjoint(d));
        }
        if a.is_diagonal() {
            let diag = a.diagonal();
            let d: Vec<Complex64> = self.states.iter().map(|s| s.iter().map(|&m| diag[m as usize]).sum()).collect();
            return Ok(CsrMatrix::from_diagonal(&d));
        }
        self.dgamma_matrix(a.matrix())
    }

    /// Γ_a(U)|S⟩ = c*(Ue_{m₁})···c*(Ue_{mₙ})Ω_f.
    pub fn gamma_unitary(&self, u: &OneParticleOperator) -> Result<CsrMatrix> {
        self.space.check_len(u.dim())?;
        let d = u.unitarity_defect();
        if d > UNIT_TOL * (u.dim() as f64).sqrt() {
            return Err(Error::NotUnitary(d));
        }
        if u.is_diagonal() {
            let diag = u.diagonal();
            let d: Vec<Complex64> =
                self.states.iter().map(|s| s.iter().map(|&m| diag[m as usize]).product()).collect();
            return Ok(CsrMatrix::from_diagonal(&d));
        }
        let m = u.dim();
        let cols: Vec<Vec<(u32, Complex64)>> = (0..m)
            .map(|n| (0..m).filter(|&i| u.matrix()[(i, n)] != ZERO).map(|i| (i as u32, u.matrix()[(i, n)])).collect())
            .collect();
        let mut t = Vec::new();
        for (j, s) in self.states.iter().enumerate() {
            let mut x: HashMap<Occupation, Complex64> = HashMap::new();
            x.insert(Vec::new(), Complex64::new(1.0, 0.0));
            for &mode in s.iter().rev() {
                x = self.raw_create_on(&cols[mode as usize], &x);
            }
            for (target, c) in x {
                if c != ZERO {
                    t.push((self.index[&target], j, c));
                }
            }
        }
        Ok(CsrMatrix::from_triplets(self.dim(), self.dim(), t))
    }

    pub fn number_operator(&self) -> CsrMatrix {
        let d: Vec<Complex64> = self.states.iter().map(|s| Complex64::new(s.len() as f64, 0.0)).collect();
        CsrMatrix::from_diagonal(&d)
    }

    /// Q = dΓ(diag q_mode).
    pub fn charge_operator(&self) -> CsrMatrix {
        let d: Vec<Complex64> = self.charge.iter().map(|&q| Complex64::new(q as f64, 0.0)).collect();
        CsrMatrix::from_diagonal(&d)
    }

    /// Γ_a(κ) = Γ_a(swap) ∘ conjugation.
    pub fn kappa_fock(&self) -> Result<AntilinearFockOperator> {
        let swap = OneParticleOperator::new(self.space.swap_matrix());
        Ok(AntilinearFockOperator { linear: self.gamma_unitary(&swap)? })
    }

    pub fn translate_fock(&self, a: &[i64]) -> Result<CsrMatrix> {
        self.gamma_unitary(&self.space.translation(a))
    }

    /// Normalized antisymmetrized product of one-particle vectors,
    /// c*(v₁)···c*(v_k)Ω_f / ‖·‖.
    pub fn wedge(&self, vs: &[OneParticleVector]) -> Result<Vec<Complex64>> {
        if vs.len() > self.f_max {
            return Err(Error::Truncation(format!("{} particles exceed F_max = {}", vs.len(), self.f_max)));
        }
        let mut x: HashMap<Occupation, Complex64> = HashMap::new();
        x.insert(Vec::new(), Complex64::new(1.0, 0.0));
        for v in vs.iter().rev() {
            self.space.check_len(v.len())?;
            let nz: Vec<(u32, Complex64)> =
                v.iter().enumerate().filter(|(_, c)| **c != ZERO).map(|(m, c)| (m as u32, *c)).collect();
            x = self.raw_create_on(&nz, &x);
        }
        let mut out = vec![ZERO; self.dim()];
        for (s, c) in x {
            out[self.index[&s]] += c;
        }
        let norm = out.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-12) {
            return Err(Error::Normalization);
        }
        out.iter_mut().for_each(|c| *c /= norm);
        Ok(out)
    }
}

/// X ↦ L·X̄ on Fock vectors.
#[derive(Debug, Clone)]
pub struct AntilinearFockOperator {
    pub linear: CsrMatrix,
}

impl AntilinearFockOperator {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let c: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        self.linear.mul_vec(&c)
    }

    /// B·L + L·B̄, which vanishes iff B anticommutes with the antilinear map.
    pub fn anticommutator(&self, b: &CsrMatrix) -> CsrMatrix {
        b.matmul(&self.linear).add(&self.linear.matmul(&b.conj()))
    }

    pub fn square(&self) -> CsrMatrix {
        self.linear.matmul(&self.linear.conj())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Grid, ScalarTestFunction, TwistKernel};

    fn fock(n: usize, f_max: usize) -> FermionFockSpace {
        FermionFockSpace::new(OneParticleSpace::new(Grid::new(1, n, 0.5).unwrap(), 1).unwrap(), f_max)
    }

    fn vec_c(m: usize, seed: f64) -> Vec<Complex64> {
        (0..m).map(|i| Complex64::new((seed * (i + 1) as f64).sin(), (seed * 0.7 * i as f64).cos())).collect()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn dimension_and_order() {
        let f = fock(3, 2);
        assert_eq!(f.dim(), 1 + 6 + binom(6, 2));
        assert!(f.states()[0].is_empty());
        let two: Vec<&Occupation> = f.states().iter().filter(|s| s.len() == 2).collect();
        assert_eq!(two[0], &vec![0, 1]);
        assert_eq!(two[1], &vec![0, 2]);
        assert_eq!(two[2], &vec![1, 2]);
        assert_eq!(two[3], &vec![0, 3]);
    }

    #[test]
    fn car_on_safe_sectors() {
        let f = fock(3, 3);
        let m = f.space().mode_count();
        let dv = f.space().grid().cell_volume();
        let safe = f.safe_mask();
        for i in 0..m {
            for j in 0..m {
                let mut ei = vec![ZERO; m];
                ei[i] = Complex64::new(1.0, 0.0);
                let mut ej = vec![ZERO; m];
                ej[j] = Complex64::new(1.0, 0.0);
                let a = f.annihilation(&ei).unwrap();
                let b = f.creation(&ej).unwrap();
                let ac = a.matmul(&b).add(&b.matmul(&a));
                let expect = if i == j { CsrMatrix::identity(f.dim()).scale(Complex64::new(dv, 0.0)) } else { CsrMatrix::zeros(f.dim(), f.dim()) };
                assert!(ac.sub(&expect).masked_norm(Some(&safe), Some(&safe)) < 1e-13);
            }
        }
    }

    #[test]
    fn wedge_matches_explicit_antisymmetrization() {
        // M = 6, two particles: coefficient of |m<n⟩ is v_m w_n − v_n w_m
        let f = fock(3, 2);
        let m = f.space().mode_count();
        let v = vec_c(m, 0.8);
        let w = vec_c(m, 1.9);
        let state = f.creation(&v).unwrap().mul_vec(&f.creation(&w).unwrap().mul_vec(&f.vacuum()));
        let dv = f.space().grid().cell_volume();
        for a in 0..m {
            for b in a + 1..m {
                let idx = f.state_index(&[a as u32, b as u32]).unwrap();
                let expect = dv * (v[a] * w[b] - v[b] * w[a]);
                assert!((state[idx] - expect).norm() < 1e-13);
            }
        }
        let anti = f.creation(&v).unwrap().matmul(&f.creation(&w).unwrap());
        let anti = anti.add(&f.creation(&w).unwrap().matmul(&f.creation(&v).unwrap()));
        assert!(anti.frobenius_norm() < 1e-13);
    }

    #[test]
    fn gamma_is_multiplicative_and_covariant() {
        let f = fock(3, 2);
        let h = f.space();
        let g = h.grid().clone();
        let sigma = TwistKernel::yukawa(&g, 1.0, crate::lattice::Sampling::Spectral).unwrap();
        let s = ScalarTestFunction::new(vec![0.3, -0.2, 0.5], vec![0.0; 3]).unwrap();
        let t = ScalarTestFunction::new(vec![0.1, 0.4, -0.6], vec![0.0; 3]).unwrap();
        let u = h.twist_unitary(&sigma, &s).unwrap();
        let v = h.twist_unitary(&sigma, &t).unwrap();
        let lhs = f.gamma_unitary(&u.compose(&v)).unwrap();
        let rhs = f.gamma_unitary(&u).unwrap().matmul(&f.gamma_unitary(&v).unwrap());
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-12);

        let w = vec_c(h.mode_count(), 1.1);
        let gu = f.gamma_unitary(&u).unwrap();
        let conj = gu.matmul(&f.creation(&w).unwrap()).matmul(&gu.adjoint());
        let direct = f.creation(&u.apply(&w)).unwrap();
        assert!(conj.sub(&direct).frobenius_norm() < 1e-12);
    }

    #[test]
    fn exp_of_dgamma_is_gamma() {
        let f = fock(2, 2);
        let m = f.space().mode_count();
        let a = DMatrix::from_fn(m, m, |i, j| Complex64::new(((i + 2 * j) as f64).sin(), (i as f64 - j as f64) * 0.1));
        let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let gen = OneParticleOperator::new(a);
        let lhs = (f.dgamma(&gen).unwrap().to_dense() * Complex64::i()).exp();
        let rhs = f.gamma_unitary(&gen.exp_i()).unwrap().to_dense();
        assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn psi_rejects_positron_input() {
        let f = fock(3, 2);
        let p = f.space().positron(&vec_c(3, 0.3)).unwrap();
        assert_eq!(f.psi(&p).unwrap_err(), Error::NotElectron);
    }

    #[test]
    fn kappa_fock_involution() {
        let f = fock(3, 2);
        let k = f.kappa_fock().unwrap();
        assert!(k.square().sub(&CsrMatrix::identity(f.dim())).frobenius_norm() < 1e-13);
    }
}
