//! Builders for the Fermi-Hubbard chain and the multi-impurity Kondo model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{
    hermitian_closure, FermionHamiltonian, FermionOp, FermionTerm, SpinFactor, SpinOp,
};
use crate::jw::jw_hamiltonian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

/// Site-major mode index: site `j` spin up is `2j - 1`, spin down is `2j`.
pub fn hubbard_mode(site: usize, spin: Spin) -> usize {
    match spin {
        Spin::Up => 2 * site - 1,
        Spin::Down => 2 * site,
    }
}

/// Tight-binding Hubbard chain. `w` is signed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HubbardSpec {
    pub n_sites: usize,
    pub w: f64,
    pub u: f64,
    #[serde(default = "default_range")]
    pub neighbor_range: usize,
}

fn default_range() -> usize {
    1
}

impl HubbardSpec {
    pub fn new(n_sites: usize, w: f64, u: f64) -> Self {
        Self {
            n_sites,
            w,
            u,
            neighbor_range: 1,
        }
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_sites
    }
}

/// Hopping `w b+_i b_j` for every site pair within range (both spins) plus
/// Hermitian conjugates, and `U n_up n_down` on every site.
pub fn build_hubbard(spec: &HubbardSpec) -> Result<FermionHamiltonian> {
    if spec.n_sites == 0 {
        return Err(Error::Precondition("Hubbard chain needs at least one site".into()));
    }
    if spec.neighbor_range == 0 {
        return Err(Error::Precondition("neighbor range must be positive".into()));
    }
    let mut h = FermionHamiltonian::new(spec.n_modes(), 0);
    let w = Complex64::new(spec.w, 0.0);
    for i in 1..=spec.n_sites {
        for j in (i + 1)..=(i + spec.neighbor_range).min(spec.n_sites) {
            for spin in [Spin::Up, Spin::Down] {
                h.push(FermionTerm::new(
                    w,
                    vec![
                        FermionOp::create(hubbard_mode(i, spin)),
                        FermionOp::annihilate(hubbard_mode(j, spin)),
                    ],
                ))?;
            }
        }
    }
    let u = Complex64::new(spec.u, 0.0);
    for j in 1..=spec.n_sites {
        let up = hubbard_mode(j, Spin::Up);
        let dn = hubbard_mode(j, Spin::Down);
        h.push(FermionTerm::new(
            u,
            vec![
                FermionOp::create(up),
                FermionOp::annihilate(up),
                FermionOp::create(dn),
                FermionOp::annihilate(dn),
            ],
        ))?;
    }
    hermitian_closure(&h)
}

/// Conduction electrons on a finite momentum list coupled to localized
/// impurity spins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KondoSpec {
    /// Momentum values `p`, one per orbital.
    pub momenta: Vec<f64>,
    /// Kinetic energies `epsilon_p`, same length as `momenta`.
    pub epsilons: Vec<f64>,
    pub j: f64,
    pub impurity_positions: Vec<f64>,
}

impl KondoSpec {
    pub fn n_momenta(&self) -> usize {
        self.momenta.len()
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_momenta()
    }

    /// Momentum index `a` (1-based) spin up is mode `2a - 1`, spin down `2a`.
    pub fn mode(&self, a: usize, spin: Spin) -> usize {
        hubbard_mode(a, spin)
    }
}

/// `sum eps_p n_{p s} - J sum_{p p' j} e^{i R_j (p - p')} [ (b+_{p up} b_{p' up}
/// - b+_{p dn} b_{p' dn}) s^z_j + b+_{p up} b_{p' dn} s^-_j + b+_{p dn} b_{p' up} s^+_j ]`.
pub fn build_kondo(spec: &KondoSpec) -> Result<FermionHamiltonian> {
    let n = spec.n_momenta();
    if n == 0 {
        return Err(Error::Precondition("Kondo model needs at least one momentum".into()));
    }
    if spec.epsilons.len() != n {
        return Err(Error::Precondition(format!(
            "{} kinetic energies for {n} momenta",
            spec.epsilons.len()
        )));
    }
    let mut h = FermionHamiltonian::new(spec.n_modes(), spec.impurity_positions.len());
    for (a, &eps) in spec.epsilons.iter().enumerate() {
        for spin in [Spin::Up, Spin::Down] {
            let m = spec.mode(a + 1, spin);
            h.push(FermionTerm::new(
                Complex64::new(eps, 0.0),
                vec![FermionOp::create(m), FermionOp::annihilate(m)],
            ))?;
        }
    }
    if spec.j != 0.0 {
        for (imp, &r) in spec.impurity_positions.iter().enumerate() {
            let imp = imp + 1;
            for (a, &p) in spec.momenta.iter().enumerate() {
                for (b, &pp) in spec.momenta.iter().enumerate() {
                    let phase = Complex64::from_polar(1.0, r * (p - pp));
                    let coupling = -spec.j * phase;
                    let (a_up, a_dn) = (spec.mode(a + 1, Spin::Up), spec.mode(a + 1, Spin::Down));
                    let (b_up, b_dn) = (spec.mode(b + 1, Spin::Up), spec.mode(b + 1, Spin::Down));
                    let pair = |m1, m2| vec![FermionOp::create(m1), FermionOp::annihilate(m2)];
                    let spin = |op| vec![SpinFactor::new(imp, op)];
                    h.push(FermionTerm::new(coupling, pair(a_up, b_up)).with_spins(spin(SpinOp::Z)))?;
                    h.push(
                        FermionTerm::new(-coupling, pair(a_dn, b_dn)).with_spins(spin(SpinOp::Z)),
                    )?;
                    h.push(
                        FermionTerm::new(coupling, pair(a_up, b_dn)).with_spins(spin(SpinOp::Minus)),
                    )?;
                    h.push(
                        FermionTerm::new(coupling, pair(a_dn, b_up)).with_spins(spin(SpinOp::Plus)),
                    )?;
                }
            }
        }
    }
    hermitian_closure(&h)
}

/// Single long-range hop `g b+_i b_j + h.c.` on an `n_modes` register.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingSpec {
    pub n_modes: usize,
    pub from: usize,
    pub to: usize,
    pub g: f64,
}

pub fn build_tunneling(spec: &TunnelingSpec) -> Result<FermionHamiltonian> {
    if spec.from == spec.to {
        return Err(Error::Precondition("tunneling needs two distinct modes".into()));
    }
    let mut h = FermionHamiltonian::new(spec.n_modes, 0);
    h.push(FermionTerm::new(
        Complex64::new(spec.g, 0.0),
        vec![FermionOp::create(spec.from), FermionOp::annihilate(spec.to)],
    ))?;
    hermitian_closure(&h)
}

/// Number of strings of weight two or more in the qubit image.
pub fn nonlocal_term_count(h: &FermionHamiltonian) -> Result<usize> {
    Ok(jw_hamiltonian(h)?.nonlocal_count())
}
