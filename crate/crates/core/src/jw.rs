//! Jordan-Wigner transformation of fermionic terms into Pauli sums.
//!
//! Occupation convention: computational `|1>` is occupied, so the number
//! operator maps to `(I - Z)/2` and creation acts on the target qubit as
//! `sigma+ = |1><0| = (X - iY)/2`.
//!
//! The parity string carried on lower-indexed qubits is selectable. The
//! default [`JwConvention::MinusZ`] uses `-Z` on each lower qubit. This is
//! the textbook `sigma^z` string written in a basis where the occupied state
//! is the `+1` eigenvector of `sigma^z`, re-expressed in the `|1>`-occupied
//! computational basis. It reproduces hopping images such as
//! `b+_{j+1} b_j + h.c. -> -(X X + Y Y)/2`. [`JwConvention::Standard`] uses
//! plain `Z` strings. The two differ by the mode-dependent sign
//! `b_k -> (-1)^{k-1} b_k`, so both satisfy the canonical anticommutation
//! relations.
//!
//! Impurity spins carry no string. They live on qubits
//! `n_modes + 1 ..= n_modes + n_impurities` in the same `|1> = up` basis:
//! `sigma+ = (X - iY)/2`, `sigma- = (X + iY)/2`, `sigma^z = -Z`,
//! `sigma^y = -Y`, `sigma^x = X`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{FermionHamiltonian, FermionOp, FermionTerm, SpinFactor, SpinOp};
use crate::pauli::{Letter, PauliString, PauliSum, PauliTerm};

/// Imaginary residue tolerated in a mapped Hamiltonian.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JwConvention {
    /// Parity string of `-Z` factors.
    #[default]
    MinusZ,
    /// Parity string of `Z` factors.
    Standard,
}

impl JwConvention {
    fn string_sign(self, mode: usize) -> f64 {
        match self {
            JwConvention::MinusZ if (mode - 1) % 2 == 1 => -1.0,
            _ => 1.0,
        }
    }
}

/// Mapper bound to a register layout.
#[derive(Debug, Clone, Copy)]
pub struct JordanWigner {
    pub n_modes: usize,
    pub n_impurities: usize,
    pub convention: JwConvention,
}

impl JordanWigner {
    pub fn new(n_modes: usize, n_impurities: usize) -> Result<Self> {
        Self::with_convention(n_modes, n_impurities, JwConvention::default())
    }

    pub fn with_convention(
        n_modes: usize,
        n_impurities: usize,
        convention: JwConvention,
    ) -> Result<Self> {
        let n = n_modes + n_impurities;
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::Precondition(format!(
                "register of {n} qubits is not representable"
            )));
        }
        Ok(Self {
            n_modes,
            n_impurities,
            convention,
        })
    }

    pub fn for_hamiltonian(h: &FermionHamiltonian) -> Result<Self> {
        Self::new(h.n_modes, h.n_impurities)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_modes + self.n_impurities
    }

    /// Image of a single creation or annihilation operator: two terms,
    /// `(X -/+ iY)/2` on the mode qubit times the parity string below it.
    pub fn op(&self, op: FermionOp) -> Result<PauliSum> {
        let k = op.mode;
        if k == 0 || k > self.n_modes {
            return Err(Error::IndexOutOfRange {
                what: "fermionic mode",
                index: k,
                max: self.n_modes,
            });
        }
        let n = self.n_qubits();
        let mut string = PauliString::identity(n);
        for q in 1..k {
            string = string.with_letter(q, Letter::Z)?;
        }
        let sign = self.convention.string_sign(k);
        let y_coeff = if op.dagger { -0.5 } else { 0.5 };
        PauliSum::from_terms(
            n,
            [
                PauliTerm::new(
                    Complex64::new(0.5 * sign, 0.0),
                    string.with_letter(k, Letter::X)?,
                ),
                PauliTerm::new(
                    Complex64::new(0.0, y_coeff * sign),
                    string.with_letter(k, Letter::Y)?,
                ),
            ],
        )
    }

    /// Image of an impurity spin operator.
    pub fn spin(&self, s: SpinFactor) -> Result<PauliSum> {
        if s.impurity == 0 || s.impurity > self.n_impurities {
            return Err(Error::IndexOutOfRange {
                what: "impurity",
                index: s.impurity,
                max: self.n_impurities,
            });
        }
        let n = self.n_qubits();
        let q = self.n_modes + s.impurity;
        let single = |letter, c: Complex64| -> Result<PauliTerm> {
            Ok(PauliTerm::new(c, PauliString::single(n, q, letter)?))
        };
        let terms = match s.op {
            SpinOp::X => vec![single(Letter::X, Complex64::new(1.0, 0.0))?],
            SpinOp::Y => vec![single(Letter::Y, Complex64::new(-1.0, 0.0))?],
            SpinOp::Z => vec![single(Letter::Z, Complex64::new(-1.0, 0.0))?],
            SpinOp::Plus => vec![
                single(Letter::X, Complex64::new(0.5, 0.0))?,
                single(Letter::Y, Complex64::new(0.0, -0.5))?,
            ],
            SpinOp::Minus => vec![
                single(Letter::X, Complex64::new(0.5, 0.0))?,
                single(Letter::Y, Complex64::new(0.0, 0.5))?,
            ],
        };
        PauliSum::from_terms(n, terms)
    }

    /// Image of a full term: ordered product of operator images, times the
    /// spin factors, times the coupling.
    pub fn term(&self, t: &FermionTerm) -> Result<PauliSum> {
        let n = self.n_qubits();
        let mut acc = PauliSum::identity(n, t.coupling);
        for &op in &t.ops {
            acc = acc.mul(&self.op(op)?)?;
        }
        for &s in &t.spins {
            acc = acc.mul(&self.spin(s)?)?;
        }
        Ok(acc)
    }

    /// Sum of term images with the imaginary residue verified and stripped.
    pub fn hamiltonian(&self, h: &FermionHamiltonian) -> Result<PauliSum> {
        let mut sum = PauliSum::zero(self.n_qubits());
        for t in &h.terms {
            sum = sum.add(&self.term(t)?)?;
        }
        sum.into_real(HERMITICITY_TOLERANCE)
    }
}

/// Maps one operator on an `n_modes` register with the default convention.
pub fn jw_op(op: FermionOp, n_modes: usize) -> Result<PauliSum> {
    JordanWigner::new(n_modes, 0)?.op(op)
}

pub fn jw_term(t: &FermionTerm, n_modes: usize, n_impurities: usize) -> Result<PauliSum> {
    JordanWigner::new(n_modes, n_impurities)?.term(t)
}

/// Maps a closed Hamiltonian; fails with [`Error::NotHermitian`] when the
/// image has complex coefficients.
pub fn jw_hamiltonian(h: &FermionHamiltonian) -> Result<PauliSum> {
    h.validate()?;
    JordanWigner::for_hamiltonian(h)?.hamiltonian(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sum(n: usize, terms: &[(f64, f64, &str)]) -> PauliSum {
        PauliSum::from_terms(
            n,
            terms
                .iter()
                .map(|&(re, im, s)| PauliTerm::new(c(re, im), s.parse().unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn creation_on_first_mode() {
        let img = jw_op(FermionOp::create(1), 1).unwrap();
        assert_eq!(img, sum(1, &[(0.5, 0., "X"), (0., -0.5, "Y")]));
    }

    #[test]
    fn creation_on_third_of_four_modes() {
        let img = jw_op(FermionOp::create(3), 4).unwrap();
        assert_eq!(img.len(), 2);
        for t in img.terms() {
            assert_eq!(t.string.weight(), 3);
        }
        // (-Z)(-Z) = ZZ below mode 3
        assert_eq!(img, sum(4, &[(0.5, 0., "ZZXI"), (0., -0.5, "ZZYI")]));
    }

    #[test]
    fn standard_convention_has_plain_z_string() {
        let jw = JordanWigner::with_convention(2, 0, JwConvention::Standard).unwrap();
        let img = jw.op(FermionOp::annihilate(2)).unwrap();
        assert_eq!(img, sum(2, &[(0.5, 0., "ZX"), (0., 0.5, "ZY")]));
        let minus_z = jw_op(FermionOp::annihilate(2), 2).unwrap();
        assert_eq!(minus_z, img.scale(c(-1., 0.)));
    }

    #[test]
    fn mode_out_of_range() {
        assert!(matches!(
            jw_op(FermionOp::create(3), 2),
            Err(Error::IndexOutOfRange { index: 3, max: 2, .. })
        ));
        assert!(jw_op(FermionOp::create(0), 2).is_err());
    }

    #[test]
    fn adjacent_hopping_image() {
        let g = 0.8;
        for j in 1..4 {
            let mut h = FermionHamiltonian::new(4, 0);
            h.push(FermionTerm::new(
                c(g, 0.),
                vec![FermionOp::create(j + 1), FermionOp::annihilate(j)],
            ))
            .unwrap();
            let h = crate::fermion::hermitian_closure(&h).unwrap();
            let img = jw_hamiltonian(&h).unwrap();
            let mut xx = PauliString::identity(4);
            let mut yy = PauliString::identity(4);
            for q in [j, j + 1] {
                xx = xx.with_letter(q, Letter::X).unwrap();
                yy = yy.with_letter(q, Letter::Y).unwrap();
            }
            let expected = PauliSum::from_terms(
                4,
                [PauliTerm::real(-g / 2.0, xx), PauliTerm::real(-g / 2.0, yy)],
            )
            .unwrap();
            assert!(img.approx_eq(&expected, 1e-12), "{}", img.to_text());
        }
    }

    #[test]
    fn empty_hamiltonian_maps_to_zero() {
        let h = FermionHamiltonian::new(3, 0);
        assert!(jw_hamiltonian(&h).unwrap().is_empty());
    }

    #[test]
    fn unclosed_hamiltonian_is_rejected() {
        let mut h = FermionHamiltonian::new(2, 0);
        h.push(FermionTerm::new(
            c(1., 0.),
            vec![FermionOp::create(1), FermionOp::annihilate(2)],
        ))
        .unwrap();
        assert!(matches!(
            jw_hamiltonian(&h),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn impurity_ladder_operators() {
        let jw = JordanWigner::new(1, 1).unwrap();
        let plus = jw.spin(SpinFactor::new(1, SpinOp::Plus)).unwrap();
        assert_eq!(plus, sum(2, &[(0.5, 0., "IX"), (0., -0.5, "IY")]));
        let z = jw.spin(SpinFactor::new(1, SpinOp::Z)).unwrap();
        // [s+, s-] = sz
        let minus = jw.spin(SpinFactor::new(1, SpinOp::Minus)).unwrap();
        let comm = plus
            .mul(&minus)
            .unwrap()
            .add(&minus.mul(&plus).unwrap().scale(c(-1., 0.)))
            .unwrap();
        assert!(comm.approx_eq(&z, 1e-15));
        assert!(jw.spin(SpinFactor::new(2, SpinOp::X)).is_err());
    }
}
