//! Compilation of Pauli exponentials into MS-based circuits.
//!
//! A string of weight `k >= 3` is realized as
//! `MS(-pi/2, phi_B) exp(i phi' sigma_anchor) MS(pi/2, phi_B)`, which equals
//! `exp(+/- i phi' Z_anchor B_rest)` with `B` the MS axis (`X` for
//! `phi_B = 0`, `Y` for `phi_B = pi/2`). Letters that differ from that
//! natural pattern are fixed by conjugating with `pi/4` rotations; the sign
//! picked up by the conjugation is tracked symbolically.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::Serialize;

use super::circuit::{Circuit, GateRole};
use super::gate::{Gate, RotAxis};
use super::peephole::share_gates;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString, PauliSum, PauliTerm};
use crate::trotter::TrotterPlan;

/// Coefficients with a larger imaginary part are rejected.
pub const REAL_COEFFICIENT_TOLERANCE: f64 = 1e-12;

/// Axis of the collective spin in an MS gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MsFamily {
    /// `phi = 0`, collective `S_x`.
    X,
    /// `phi = pi/2`, collective `S_y`.
    Y,
}

impl MsFamily {
    pub fn phi(self) -> f64 {
        match self {
            MsFamily::X => 0.0,
            MsFamily::Y => FRAC_PI_2,
        }
    }

    pub fn letter(self) -> Letter {
        match self {
            MsFamily::X => Letter::X,
            MsFamily::Y => Letter::Y,
        }
    }
}

/// Local gate and sign for the MS sandwich on `k` ions:
/// `MS(-pi/2) exp(i a sigma^axis_1) MS(pi/2) = exp(i sign a Z_1 B_2 ... B_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignRule {
    pub k: usize,
    pub family: MsFamily,
    pub local_axis: RotAxis,
    pub sign: f64,
}

impl SignRule {
    pub fn new(k: usize, family: MsFamily) -> Result<Self> {
        if k < 2 {
            return Err(Error::Precondition(format!(
                "MS sandwich needs at least two ions, got {k}"
            )));
        }
        let (local_axis, positive) = match (k % 2, family) {
            (1, _) => (RotAxis::Z, k % 4 == 1),
            (_, MsFamily::X) => (RotAxis::Y, k.is_multiple_of(4)),
            (_, MsFamily::Y) => (RotAxis::X, k % 4 == 2),
        };
        Ok(Self {
            k,
            family,
            local_axis,
            sign: if positive { 1.0 } else { -1.0 },
        })
    }
}

/// `exp(i theta G) Q exp(-i theta G)` for `theta = +/- pi/4`.
pub(crate) fn conjugate_quarter(q: &PauliTerm, g: &PauliString, positive: bool) -> Result<PauliTerm> {
    if q.string.commutes(g)? {
        return Ok(*q);
    }
    let qg = q.multiply(&PauliTerm::real(1.0, *g))?;
    let f = if positive {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(0.0, 1.0)
    };
    Ok(PauliTerm::new(qg.coefficient * f, qg.string))
}

/// The letter orthogonal to two distinct non-identity letters.
fn third(a: Letter, b: Letter) -> Letter {
    match (a, b) {
        (Letter::X, Letter::Y) | (Letter::Y, Letter::X) => Letter::Z,
        (Letter::X, Letter::Z) | (Letter::Z, Letter::X) => Letter::Y,
        (Letter::Y, Letter::Z) | (Letter::Z, Letter::Y) => Letter::X,
        _ => unreachable!("third letter of {a:?}, {b:?}"),
    }
}

/// Basis change layer: `pi/4` rotations on distinct qubits.
#[derive(Debug, Default)]
struct BasisLayer {
    /// Collective rotation groups keyed by axis (x or y).
    collective: BTreeMap<u8, Vec<usize>>,
    /// Single-qubit `z` rotations.
    local_z: Vec<usize>,
}

impl BasisLayer {
    /// Adds a rotation on `q` about `axis`.
    fn add(&mut self, q: usize, axis: Letter) {
        match axis {
            Letter::X => self.collective.entry(0).or_default().push(q),
            Letter::Y => self.collective.entry(1).or_default().push(q),
            Letter::Z => self.local_z.push(q),
            Letter::I => {}
        }
    }

    fn cost(&self) -> usize {
        2 * (self.collective.len() + self.local_z.len())
    }

    /// Every `(qubit, axis)` factor of the layer.
    fn factors(&self) -> Vec<(usize, Letter)> {
        let mut out = Vec::new();
        for (&a, qs) in &self.collective {
            let axis = if a == 0 { Letter::X } else { Letter::Y };
            out.extend(qs.iter().map(|&q| (q, axis)));
        }
        out.extend(self.local_z.iter().map(|&q| (q, Letter::Z)));
        out
    }

    /// Gates of the layer with angle `sign * pi/4`.
    fn gates(&self, sign: f64) -> Vec<Gate> {
        let mut out = Vec::new();
        for (&a, qs) in &self.collective {
            let mut targets = qs.clone();
            targets.sort_unstable();
            out.push(Gate::CollectiveRot {
                axis: if a == 0 { RotAxis::X } else { RotAxis::Y },
                angle: sign * FRAC_PI_4,
                targets,
            });
        }
        for &q in &self.local_z {
            out.push(Gate::LocalRot {
                axis: RotAxis::Z,
                angle: sign * FRAC_PI_4,
                qubit: q,
            });
        }
        out
    }
}

/// Basis layer `V` with `V^dag N V = s P`, where `N` is the natural
/// operator of the MS core. `anchor` carries `Z` in `N`; every other
/// support qubit carries `family`'s letter.
fn basis_layer(p: &PauliString, anchor: Option<usize>, family: MsFamily) -> Result<BasisLayer> {
    let b = family.letter();
    let mut layer = BasisLayer::default();
    for q in p.support() {
        let want = p.letter(q)?;
        let have = if Some(q) == anchor { Letter::Z } else { b };
        if want != have {
            layer.add(q, third(want, have));
        }
    }
    Ok(layer)
}

/// Natural operator of the core: `Z` on the anchor, `B` elsewhere.
fn natural(p: &PauliString, anchor: Option<usize>, family: MsFamily) -> Result<PauliString> {
    let mut n = PauliString::identity(p.n_qubits());
    for q in p.support() {
        let l = if Some(q) == anchor { Letter::Z } else { family.letter() };
        n = n.with_letter(q, l)?;
    }
    Ok(n)
}

/// Sign `s` with `V^dag N V = s P` for `V` the product of the layer's
/// `+pi/4` rotations.
fn basis_sign(p: &PauliString, n: &PauliString, layer: &BasisLayer) -> Result<f64> {
    let mut acc = PauliTerm::real(1.0, *n);
    for (q, axis) in layer.factors() {
        let g = PauliString::single(p.n_qubits(), q, axis)?;
        // V^dag = exp(-i pi/4 sigma) on each factor
        acc = conjugate_quarter(&acc, &g, false)?;
    }
    if acc.string != *p || acc.coefficient.im.abs() > 1e-12 {
        return Err(Error::Numerical(format!(
            "basis change maps {} to {}",
            n,
            acc.string
        )));
    }
    Ok(acc.coefficient.re.signum())
}

/// Chosen anchor and MS family for a string, with the basis layer.
struct Layout {
    anchor: Option<usize>,
    family: MsFamily,
    layer: BasisLayer,
}

fn choose_layout(p: &PauliString) -> Result<Layout> {
    let support = p.support();
    let anchors: Vec<Option<usize>> = if support.len() == 2 {
        vec![None]
    } else {
        let z: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&q| p.letter(q).map(|l| l == Letter::Z).unwrap_or(false))
            .collect();
        let pool = if z.is_empty() { &support } else { &z };
        pool.iter().map(|&q| Some(q)).collect()
    };
    let mut best: Option<Layout> = None;
    for anchor in anchors {
        for family in [MsFamily::X, MsFamily::Y] {
            let layer = basis_layer(p, anchor, family)?;
            if best.as_ref().is_none_or(|b| layer.cost() < b.layer.cost()) {
                best = Some(Layout {
                    anchor,
                    family,
                    layer,
                });
            }
        }
    }
    Ok(best.expect("at least one layout"))
}

/// Circuit for `exp(i phi P)`.
pub fn compile_rotation(p: &PauliString, phi: f64) -> Result<Circuit> {
    let n = p.n_qubits();
    let mut c = Circuit::new(n);
    match p.weight() {
        0 => {
            c.phase = Complex64::from_polar(1.0, phi);
        }
        1 => {
            let q = p.support()[0];
            let axis = RotAxis::from_letter(p.letter(q)?).expect("non-identity letter");
            c.push(
                Gate::LocalRot {
                    axis,
                    angle: phi,
                    qubit: q,
                },
                GateRole::SingleQubitTerm,
            )?;
        }
        k => {
            let layout = choose_layout(p)?;
            let nat = natural(p, layout.anchor, layout.family)?;
            let s = basis_sign(p, &nat, &layout.layer)?;
            let targets = p.support();
            let ms_phi = layout.family.phi();
            for g in layout.layer.gates(1.0) {
                c.push(g, GateRole::BasisChange)?;
            }
            match layout.anchor {
                None => {
                    // MS(theta) = exp(-i theta/2) exp(-i theta/2 B B) on two ions
                    let theta = -2.0 * s * phi;
                    c.push(
                        Gate::Ms {
                            theta,
                            phi: ms_phi,
                            targets,
                        },
                        GateRole::Core,
                    )?;
                    c.phase *= Complex64::from_polar(1.0, theta / 2.0);
                }
                Some(anchor) => {
                    let rule = SignRule::new(k, layout.family)?;
                    c.push(
                        Gate::Ms {
                            theta: FRAC_PI_2,
                            phi: ms_phi,
                            targets: targets.clone(),
                        },
                        GateRole::Core,
                    )?;
                    c.push(
                        Gate::LocalRot {
                            axis: rule.local_axis,
                            angle: rule.sign * s * phi,
                            qubit: anchor,
                        },
                        GateRole::Core,
                    )?;
                    c.push(
                        Gate::Ms {
                            theta: -FRAC_PI_2,
                            phi: ms_phi,
                            targets,
                        },
                        GateRole::Core,
                    )?;
                }
            }
            let mut post = layout.layer.gates(-1.0);
            post.reverse();
            for g in post {
                c.push(g, GateRole::BasisChange)?;
            }
        }
    }
    Ok(c)
}

/// Circuit for `exp(-i g t_slice P)` with `g` the real coefficient of
/// `term`, i.e. `exp(i phi P)` with `phi = -g t_slice`.
pub fn compile_exponential(term: &PauliTerm, t_slice: f64) -> Result<Circuit> {
    if !term.is_hermitian(REAL_COEFFICIENT_TOLERANCE) {
        return Err(Error::InvalidTerm(format!(
            "complex coefficient {} on {}; split Hermitian pairs first",
            term.coefficient, term.string
        )));
    }
    compile_rotation(&term.string, -term.coefficient.re * t_slice)
}

/// Concatenated slice circuits without the sharing pass.
pub fn compile_plan_unshared(plan: &TrotterPlan, h: &PauliSum) -> Result<Circuit> {
    plan.check_against(h)?;
    let terms: Vec<PauliTerm> = h.terms().collect();
    let mut c = Circuit::new(h.n_qubits());
    for s in &plan.slices {
        c.append(compile_rotation(&terms[s.term].string, -s.angle)?)?;
    }
    c.phase *= Complex64::from_polar(1.0, -plan.identity_angle);
    Ok(c)
}

/// Compiles every slice of `plan` and runs the gate-sharing pass.
pub fn compile_plan(plan: &TrotterPlan, h: &PauliSum) -> Result<Circuit> {
    Ok(share_gates(&compile_plan_unshared(plan, h)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{phase_aligned_distance, HermitianEigen};

    fn target(p: &PauliString, phi: f64) -> crate::linalg::CMatrix {
        // exp(i phi P) = cos(phi) + i sin(phi) P
        let pm = p.to_matrix(14).unwrap();
        let dim = pm.nrows();
        crate::linalg::CMatrix::identity(dim, dim) * Complex64::new(phi.cos(), 0.0)
            + pm * Complex64::new(0.0, phi.sin())
    }

    #[test]
    fn sign_rule_table() {
        let cases = [
            (3, MsFamily::X, RotAxis::Z, -1.0),
            (5, MsFamily::X, RotAxis::Z, 1.0),
            (4, MsFamily::X, RotAxis::Y, 1.0),
            (6, MsFamily::X, RotAxis::Y, -1.0),
            (3, MsFamily::Y, RotAxis::Z, -1.0),
            (4, MsFamily::Y, RotAxis::X, -1.0),
            (6, MsFamily::Y, RotAxis::X, 1.0),
        ];
        for (k, f, axis, sign) in cases {
            let r = SignRule::new(k, f).unwrap();
            assert_eq!((r.local_axis, r.sign), (axis, sign), "k = {k}, {f:?}");
        }
        assert!(SignRule::new(1, MsFamily::X).is_err());
    }

    #[test]
    fn xzx_uses_bare_sandwich_on_middle_ion() {
        let p: PauliString = "XZX".parse().unwrap();
        let c = compile_rotation(&p, 0.3).unwrap();
        let gates: Vec<_> = c.gates.iter().map(|i| i.gate.clone()).collect();
        assert_eq!(
            gates,
            vec![
                Gate::Ms {
                    theta: FRAC_PI_2,
                    phi: 0.0,
                    targets: vec![1, 2, 3]
                },
                Gate::LocalRot {
                    axis: RotAxis::Z,
                    angle: -0.3,
                    qubit: 2
                },
                Gate::Ms {
                    theta: -FRAC_PI_2,
                    phi: 0.0,
                    targets: vec![1, 2, 3]
                },
            ]
        );
        assert_eq!(c.counted_gates(), 3);
    }

    #[test]
    fn low_weight_strategies() {
        let z1: PauliString = "ZII".parse().unwrap();
        let c = compile_rotation(&z1, 0.4).unwrap();
        assert_eq!(c.gates.len(), 1);
        assert_eq!(c.counts().local_layer, 1);
        assert_eq!(c.counted_gates(), 0);

        let id = PauliString::identity(2);
        let c = compile_rotation(&id, 0.4).unwrap();
        assert!(c.gates.is_empty());
        assert!((c.phase - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);

        for s in ["XXI", "IYY", "ZIZ", "XIY", "ZY"] {
            let p: PauliString = s.parse().unwrap();
            let c = compile_rotation(&p, 0.7).unwrap();
            let ms = c.counts().ms;
            assert_eq!(ms, 1, "{s}");
            assert!(c.counted_gates() <= 3, "{s}");
            let d = phase_aligned_distance(&c.unitary(14).unwrap(), &target(&p, 0.7));
            assert!(d < 1e-10, "{s}: {d}");
        }
    }

    #[test]
    fn exact_phase_is_tracked() {
        // compiled circuits match the exponential exactly, not only up to phase
        for s in ["ZXX", "XZX", "YY", "XYZY", "ZZ", "Y", "II"] {
            let p: PauliString = s.parse().unwrap();
            let u = compile_rotation(&p, -1.1).unwrap().unitary(14).unwrap();
            assert!((u - target(&p, -1.1)).norm() < 1e-10, "{s}");
        }
    }

    #[test]
    fn complex_coefficient_is_rejected() {
        let t = PauliTerm::new(Complex64::new(1.0, 0.5), "XX".parse().unwrap());
        assert!(matches!(compile_exponential(&t, 0.1), Err(Error::InvalidTerm(_))));
    }

    #[test]
    fn exponential_uses_minus_g_t() {
        let p: PauliString = "ZYY".parse().unwrap();
        let t = PauliTerm::real(0.5, p);
        let u = compile_exponential(&t, 0.8).unwrap().unitary(14).unwrap();
        let h = t.string.to_matrix(14).unwrap() * Complex64::new(0.5, 0.0);
        let exact = HermitianEigen::new(&h, 1e-12).unwrap().propagator(0.8);
        assert!(phase_aligned_distance(&u, &exact) < 1e-10);
    }
}
