use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Grid, ScalarTestFunction, TwistKernel};

pub type OneParticleVector = Vec<Complex64>;

/// Charge sector of a one-particle mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    /// h₊, charge −1.
    Electron,
    /// h₋, charge +1.
    Positron,
}

impl Sector {
    pub fn charge(self) -> i32 {
        match self {
            Sector::Electron => -1,
            Sector::Positron => 1,
        }
    }
}

/// Dirac one-particle space h = h₊ ⊕ h₋ on a grid, with D internal components.
/// Modes are ordered (sector, internal index, site).
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleSpace {
    grid: Grid,
    internal_dim: usize,
}

impl OneParticleSpace {
    pub fn new(grid: Grid, internal_dim: usize) -> Result<Self> {
        if internal_dim == 0 {
            return Err(Error::Unsupported("internal dimension must be at least 1".into()));
        }
        Ok(Self { grid, internal_dim })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn internal_dim(&self) -> usize {
        self.internal_dim
    }

    /// Modes per sector, D·N.
    pub fn sector_len(&self) -> usize {
        self.internal_dim * self.grid.len()
    }

    /// M = 2DN.
    pub fn mode_count(&self) -> usize {
        2 * self.sector_len()
    }

    pub fn mode(&self, sector: Sector, internal: usize, site: usize) -> usize {
        let s = match sector {
            Sector::Electron => 0,
            Sector::Positron => 1,
        };
        s * self.sector_len() + internal * self.grid.len() + site
    }

    /// (sector, internal index, site) of a mode.
    pub fn decode(&self, m: usize) -> (Sector, usize, usize) {
        let sector = if m < self.sector_len() { Sector::Electron } else { Sector::Positron };
        let r = m % self.sector_len();
        (sector, r / self.grid.len(), r % self.grid.len())
    }

    pub fn charge(&self, m: usize) -> i32 {
        self.decode(m).0.charge()
    }

    /// ⟨v,w⟩ = ΔV Σ v̄w.
    pub fn inner(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.grid.cell_volume() * v.iter().zip(w).map(|(a, b)| a.conj() * b).sum::<Complex64>()
    }

    pub fn norm(&self, v: &[Complex64]) -> f64 {
        self.inner(v, v).re.sqrt()
    }

    /// w ⊕ 0 for an electron wave function w of length D·N.
    pub fn electron(&self, w: &[Complex64]) -> Result<OneParticleVector> {
        self.check_sector_len(w.len())?;
        let mut v = vec![Complex64::new(0.0, 0.0); self.mode_count()];
        v[..w.len()].copy_from_slice(w);
        Ok(v)
    }

    /// 0 ⊕ w.
    pub fn positron(&self, w: &[Complex64]) -> Result<OneParticleVector> {
        self.check_sector_len(w.len())?;
        let mut v = vec![Complex64::new(0.0, 0.0); self.mode_count()];
        v[self.sector_len()..].copy_from_slice(w);
        Ok(v)
    }

    pub fn electron_part<'a>(&self, v: &'a [Complex64]) -> &'a [Complex64] {
        &v[..self.sector_len()]
    }

    pub fn positron_part<'a>(&self, v: &'a [Complex64]) -> &'a [Complex64] {
        &v[self.sector_len()..]
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len == self.mode_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.mode_count(), got: len })
        }
    }

    fn check_sector_len(&self, len: usize) -> Result<()> {
        if len == self.sector_len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.sector_len(), got: len })
        }
    }

    /// Sector swap; κ is this followed by complex conjugation.
    pub fn swap_matrix(&self) -> DMatrix<Complex64> {
        let m = self.mode_count();
        let h = self.sector_len();
        DMatrix::from_fn(m, m, |i, j| if (i + h) % m == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn kappa(&self) -> AntilinearOperator {
        AntilinearOperator { linear: self.swap_matrix() }
    }

    /// Multiplication by a site field, acting as `electron(x)` on h₊ and
    /// `positron(x)` on h₋, scalar on the internal index.
    pub fn site_diagonal(
        &self,
        electron: impl Fn(usize) -> Complex64,
        positron: impl Fn(usize) -> Complex64,
    ) -> OneParticleOperator {
        let d: Vec<Complex64> = (0..self.mode_count())
            .map(|m| match self.decode(m) {
                (Sector::Electron, _, x) => electron(x),
                (Sector::Positron, _, x) => positron(x),
            })
            .collect();
        OneParticleOperator::from_diagonal(&d)
    }

    /// 𝛍_{σ,s}: −(σ⋆s₀)(x) on electrons, +(σ⋆s₀)(x) on positrons.
    pub fn stone_generator(&self, sigma: &TwistKernel, s: &ScalarTestFunction) -> Result<OneParticleOperator> {
        sigma.grid().check_same(&self.grid)?;
        let c = sigma.convolve(&s.s0)?;
        Ok(self.site_diagonal(|x| Complex64::new(-c[x], 0.0), |x| Complex64::new(c[x], 0.0)))
    }

    /// u_{σ,s} = exp(i𝛍_{σ,s}): e^{−iσ⋆s₀} on electrons, e^{+iσ⋆s₀} on positrons.
    pub fn twist_unitary(&self, sigma: &TwistKernel, s: &ScalarTestFunction) -> Result<OneParticleOperator> {
        sigma.grid().check_same(&self.grid)?;
        let c = sigma.convolve(&s.s0)?;
        Ok(self.site_diagonal(|x| Complex64::from_polar(1.0, -c[x]), |x| Complex64::from_polar(1.0, c[x])))
    }

    /// Site shift (U_a v)(x) = v(x − a) on both sectors.
    pub fn translation(&self, a: &[i64]) -> OneParticleOperator {
        let m = self.mode_count();
        let mut u = DMatrix::zeros(m, m);
        for j in 0..m {
            let (sec, i, x) = self.decode(j);
            u[(self.mode(sec, i, self.grid.shift(x, a)), j)] = Complex64::new(1.0, 0.0);
        }
        OneParticleOperator::new(u)
    }

    pub fn identity(&self) -> OneParticleOperator {
        OneParticleOperator::new(DMatrix::identity(self.mode_count(), self.mode_count()))
    }

    /// diag(q_mode).
    pub fn charge_matrix(&self) -> OneParticleOperator {
        let d: Vec<Complex64> = (0..self.mode_count()).map(|m| Complex64::new(self.charge(m) as f64, 0.0)).collect();
        OneParticleOperator::from_diagonal(&d)
    }
}

/// M×M matrix with verified structure flags.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleOperator {
    matrix: DMatrix<Complex64>,
    diagonal: bool,
    sector_preserving: bool,
}

impl OneParticleOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Self {
        let n = matrix.nrows();
        let zero = Complex64::new(0.0, 0.0);
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || matrix[(i, j)] == zero));
        let h = n / 2;
        let sector_preserving = (0..n).all(|i| (0..n).all(|j| (i < h) == (j < h) || matrix[(i, j)] == zero));
        Self { matrix, diagonal, sector_preserving }
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn is_sector_preserving(&self) -> bool {
        self.sector_preserving
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (&self.matrix * nalgebra::DVector::from_column_slice(v)).iter().copied().collect()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(n, n)).norm()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.matrix * &other.matrix)
    }

    /// exp(iA) for a selfadjoint generator.
    pub fn exp_i(&self) -> Self {
        if self.diagonal {
            let d: Vec<Complex64> = self.diagonal().iter().map(|v| (Complex64::i() * v).exp()).collect();
            return Self::from_diagonal(&d);
        }
        Self::new((&self.matrix * Complex64::i()).exp())
    }
}

/// v ↦ L·v̄.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    pub linear: DMatrix<Complex64>,
}

impl AntilinearOperator {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let c = nalgebra::DVector::from_iterator(v.len(), v.iter().map(|z| z.conj()));
        (&self.linear * c).iter().copied().collect()
    }

    /// ‖B∘K + K∘B‖ for linear B; zero iff B·L + L·B̄ = 0.
    pub fn anticommutator_defect(&self, b: &DMatrix<Complex64>) -> f64 {
        (b * &self.linear + &self.linear * b.map(|z| z.conj())).norm()
    }

    /// ‖B∘K − K∘B‖.
    pub fn commutator_defect(&self, b: &DMatrix<Complex64>) -> f64 {
        (b * &self.linear - &self.linear * b.map(|z| z.conj())).norm()
    }

    /// K² as a linear map, L·L̄.
    pub fn square(&self) -> DMatrix<Complex64> {
        &self.linear * self.linear.map(|z| z.conj())
    }
}
