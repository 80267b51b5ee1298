use num_complex::Complex64;

use crate::bose::{BosonField, BosonModeBasis};
use crate::composite::{CompositeOperator, Dims, Domain};
use crate::error::{Error, Result};
use crate::fermi::{FermionFockSpace, OneParticleOperator, OneParticleSpace};
use crate::lattice::{DiffOp, Grid, ScalarTestFunction, TwistKernel};
use crate::sparse::CsrMatrix;

/// Twisting kernel, optionally paired with the operator it inverts.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub sigma: TwistKernel,
    pub diffop: Option<DiffOp>,
}

impl ModelConfig {
    pub fn new(sigma: TwistKernel) -> Self {
        Self { sigma, diffop: None }
    }

    /// σ = fundamental_solution(P), with the mean-zero convention when P(0) = 0.
    pub fn with_fundamental_solution(p: DiffOp, grid: &Grid) -> Result<Self> {
        let mean_zero = p.symbol(grid)[0] == 0.0;
        Ok(Self { sigma: TwistKernel::fundamental_solution(p, grid, mean_zero)?, diffop: Some(p) })
    }

    /// max_k |σ̂(k)p(k) − 1| over modes with p(k) ≠ 0, and |σ̂(k)| where p(k) = 0.
    pub fn fundamental_defect(&self) -> Option<f64> {
        let p = self.diffop?;
        let sym = p.symbol(self.sigma.grid());
        let defect = sym
            .iter()
            .zip(self.sigma.spectrum())
            .map(|(&pk, &sk)| if pk == 0.0 { sk.norm() } else { (sk * pk - 1.0).norm() })
            .fold(0.0, f64::max);
        Some(defect)
    }
}

/// 𝓗 = 𝓕_a(h) ⊗ 𝓕_s(span) with the twisted Weyl operators of a model.
#[derive(Debug, Clone)]
pub struct TwistedSystem {
    fermi: FermionFockSpace,
    bose: BosonField,
    model: ModelConfig,
    dims: Dims,
}

const FS_TOL: f64 = 1e-12;
const SPAN_TOL: f64 = 1e-10;

impl TwistedSystem {
    pub fn new(fermi: FermionFockSpace, bose: BosonField, model: ModelConfig) -> Result<Self> {
        let grid = fermi.space().grid();
        grid.check_same(bose.basis().grid())?;
        grid.check_same(model.sigma.grid())?;
        if let Some(d) = model.fundamental_defect() {
            if d > FS_TOL {
                return Err(Error::Unsupported(format!("σ is not a fundamental solution of P (defect {d:.2e})")));
            }
        }
        let dims = Dims { fermi: fermi.dim(), bose: vec![bose.dim()] };
        Ok(Self { fermi, bose, model, dims })
    }

    /// Fock spaces over `grid`: D internal components, F_max fermions, and
    /// a boson mode span generated by `generators` truncated at N_max.
    pub fn from_parts(
        grid: &Grid,
        internal_dim: usize,
        f_max: usize,
        generators: &[Vec<Complex64>],
        n_max: usize,
        model: ModelConfig,
    ) -> Result<Self> {
        let space = OneParticleSpace::new(grid.clone(), internal_dim)?;
        let basis = BosonModeBasis::from_generators(grid, generators, SPAN_TOL)?;
        Self::new(FermionFockSpace::new(space, f_max), BosonField::new(basis, n_max), model)
    }

    pub fn fermi(&self) -> &FermionFockSpace {
        &self.fermi
    }

    pub fn bose(&self) -> &BosonField {
        &self.bose
    }

    pub fn model(&self) -> &ModelConfig {
        &self.model
    }

    pub fn sigma(&self) -> &TwistKernel {
        &self.model.sigma
    }

    pub fn grid(&self) -> &Grid {
        self.fermi.space().grid()
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn fermi_op(&self, f: CsrMatrix) -> CompositeOperator {
        CompositeOperator::fermi(self.dims.clone(), f)
    }

    pub fn bose_op(&self, b: nalgebra::DMatrix<Complex64>) -> CompositeOperator {
        CompositeOperator::bose(self.dims.clone(), 0, b)
    }

    pub fn identity(&self) -> CompositeOperator {
        CompositeOperator::identity(self.dims.clone())
    }

    /// States with n_f ≤ F_max − 1 and boson shell ≤ N_max − 2.
    pub fn safe_domain(&self) -> Domain {
        let shell = self.bose.fock().n_max().saturating_sub(2);
        Domain { fermi: Some(self.fermi.safe_mask()), bose: vec![Some(self.bose.fock().shell_mask(shell))] }
    }

    /// All fermion states, boson shells ≤ `shell`.
    pub fn interior_domain(&self, shell: usize) -> Domain {
        Domain { fermi: None, bose: vec![Some(self.bose.fock().shell_mask(shell))] }
    }

    pub fn all_domain(&self) -> Domain {
        Domain::all(1)
    }

    pub fn stone_generator(&self, s: &ScalarTestFunction) -> Result<OneParticleOperator> {
        self.fermi.space().stone_generator(&self.model.sigma, s)
    }

    pub fn twist_unitary(&self, s: &ScalarTestFunction) -> Result<OneParticleOperator> {
        self.fermi.space().twist_unitary(&self.model.sigma, s)
    }

    /// 𝛍^a_σ(s) = dΓ(𝛍_{σ,s}) on the fermion factor.
    pub fn mu_fock(&self, s: &ScalarTestFunction) -> Result<CsrMatrix> {
        self.fermi.dgamma(&self.stone_generator(s)?)
    }

    /// W^λ(s) = Γ_a(u_{σ,s}) ⊗ W(s).
    pub fn twisted_weyl(&self, s: &ScalarTestFunction) -> Result<CompositeOperator> {
        let g = self.fermi.gamma_unitary(&self.twist_unitary(s)?)?;
        let w = self.bose.weyl(s)?;
        Ok(CompositeOperator::product(self.dims.clone(), g, vec![w]))
    }

    /// φ^λ(s) = I ⊗ φ(s) + 𝛍^a_σ(s) ⊗ I.
    pub fn twisted_field(&self, s: &ScalarTestFunction) -> Result<CompositeOperator> {
        let phi = self.bose_op(self.bose.segal(s)?);
        Ok(phi.add(&self.fermi_op(self.mu_fock(s)?)))
    }

    /// a_{b,σ}(s) = I ⊗ b(f) + 2^{−1/2} 𝛍^a_σ(s) ⊗ I.
    pub fn twisted_annihilation(&self, s: &ScalarTestFunction) -> Result<CompositeOperator> {
        let b = self.bose_op(self.bose.annihilation(&s.complexified())?);
        let mu = self.fermi_op(self.mu_fock(s)?).scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        Ok(b.add(&mu))
    }

    /// ψ(w) ⊗ I for an electron wave function w (length D·N).
    pub fn psi(&self, w: &[Complex64]) -> Result<CompositeOperator> {
        let v = self.fermi.space().electron(w)?;
        Ok(self.fermi_op(self.fermi.psi(&v)?))
    }

    /// Gauge generator ρ(s) = φ^λ(P s).
    pub fn gauge_generator(&self, s: &ScalarTestFunction) -> Result<CompositeOperator> {
        let p = self.model.diffop.ok_or(Error::MissingDiffOp)?;
        self.twisted_field(&s.apply(p, self.grid()))
    }

    /// Ω_f ⊗ Ω_b.
    pub fn vacuum(&self) -> Vec<Complex64> {
        crate::composite::product_vector(&self.fermi.vacuum(), &[&self.bose.fock().vacuum()])
    }

    /// Fermion vector ⊗ Ω_b.
    pub fn with_boson_vacuum(&self, f: &[Complex64]) -> Vec<Complex64> {
        crate::composite::product_vector(f, &[&self.bose.fock().vacuum()])
    }
}

/// w ↦ e^{iθ(x)}·w on an electron wave function (scalar on the internal index).
pub fn phase_multiply(grid: &Grid, w: &[Complex64], theta: &[f64]) -> Vec<Complex64> {
    w.iter().enumerate().map(|(m, z)| z * Complex64::from_polar(1.0, theta[m % grid.len()])).collect()
}

/// w ↦ g(x)·w on an electron wave function.
pub fn field_multiply(grid: &Grid, w: &[Complex64], g: &[f64]) -> Vec<Complex64> {
    w.iter().enumerate().map(|(m, z)| z * g[m % grid.len()]).collect()
}
