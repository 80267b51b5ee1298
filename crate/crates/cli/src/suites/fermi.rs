use twistlab::fermi::{FermionFockSpace, OneParticleOperator, OneParticleSpace};
use twistlab::lattice::{Sampling, ScalarTestFunction, TwistKernel};
use twistlab::sparse::CsrMatrix;

use super::{random_real, random_wave, suite_rng};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS};

const CONVENTIONS: &[&str] = &["electron charge -1", "mode order (sector, internal, site)", "a*(w) carries sqrt(ΔV)"];

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("fermi", cfg, CONVENTIONS);
    let g = cfg.grid.build()?;
    let space = OneParticleSpace::new(g.clone(), cfg.internal_dim).context("one-particle space")?;
    let fock = FermionFockSpace::new(space.clone(), cfg.f_max);
    let mut r = suite_rng(cfg, "fermi", 0);
    let d = cfg.internal_dim;
    let safe = fock.safe_mask();
    let id = CsrMatrix::identity(fock.dim());

    let mut car = Vec::new();
    for _ in 0..cfg.draws.min(6) {
        let v = [space.electron(&random_wave(&mut r, &g, d, &[])).context("electron")?, space.positron(&random_wave(&mut r, &g, d, &[])).context("positron")?];
        let w = [space.electron(&random_wave(&mut r, &g, d, &[])).context("electron")?, space.positron(&random_wave(&mut r, &g, d, &[])).context("positron")?];
        for a in &v {
            for b in &w {
                let an = fock.annihilation(a).context("annihilation")?;
                let cr = fock.creation(b).context("creation")?;
                let cr2 = fock.creation(a).context("creation")?;
                let mixed = an.matmul(&cr).add(&cr.matmul(&an)).sub(&id.scale(space.inner(a, b)));
                car.push(mixed.masked_norm(None, Some(&safe)));
                car.push(cr.matmul(&cr2).add(&cr2.matmul(&cr)).masked_norm(None, Some(&safe)));
            }
        }
    }
    rec.bound("car", "canonical anticommutation", Some(1), worst(car), 1e-12, "n_f ≤ F_max−1");

    let kappa = space.kappa();
    let kf = fock.kappa_fock().context("kappa")?;
    let n_f = fock.number_operator();
    let q = fock.charge_operator();
    let sigma = TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).context("yukawa")?;
    let mut one = Vec::new();
    let mut second = Vec::new();
    let mut mult = Vec::new();
    for _ in 0..3 {
        let s = ScalarTestFunction::from_s0(random_real(&mut r, g.len()));
        let t = ScalarTestFunction::from_s0(random_real(&mut r, g.len()));
        let mu = space.stone_generator(&sigma, &s).context("stone generator")?;
        let u = space.twist_unitary(&sigma, &s).context("twist unitary")?;
        one.push(kappa.anticommutator_defect(mu.matrix()));
        one.push(kappa.commutator_defect(u.matrix()));
        let dg = fock.dgamma(&mu).context("dgamma")?;
        second.push(dg.matmul(&n_f).sub(&n_f.matmul(&dg)).frobenius_norm());
        second.push(dg.matmul(&q).sub(&q.matmul(&dg)).frobenius_norm());
        second.push(kf.anticommutator(&dg).frobenius_norm());
        let v = space.twist_unitary(&sigma, &t).context("twist unitary")?;
        let uv = OneParticleOperator::new(u.matrix() * v.matrix());
        let lhs = fock.gamma_unitary(&uv).context("gamma")?;
        let rhs = fock.gamma_unitary(&u).context("gamma")?.matmul(&fock.gamma_unitary(&v).context("gamma")?);
        mult.push(lhs.sub(&rhs).frobenius_norm());
    }
    rec.bound("kappa_relations", "conjugation and twists", None, worst(one), 1e-13, ALL_SECTORS);
    rec.bound("dgamma_relations", "second-quantized twists", None, worst(second), 1e-12, ALL_SECTORS);
    rec.bound("gamma_multiplicative", "second-quantized twists", None, worst(mult), 1e-12, ALL_SECTORS);
    Ok(rec.finish())
}
