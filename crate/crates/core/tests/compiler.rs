mod common;

use std::f64::consts::FRAC_PI_2;

use common::*;
use jwion::ion::{
    compile_exponential, compile_plan, compile_plan_unshared, compile_rotation, ms_unitary, share_gates, Gate,
    RotAxis,
};
use jwion::linalg::phase_aligned_distance;
use jwion::pauli::{PauliString, PauliTerm};
use jwion::trotter::make_plan;
use jwion::{build_hubbard, build_tunneling, jw_hamiltonian, TunnelingSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn two_ion_ms_expansion() {
    // S_x^2 = 2 I + 2 X X on two ions
    let u = ms_unitary(FRAC_PI_2, 0.0, &[1, 2], 2, 14).unwrap();
    let expected = pauli_exp_oracle("XX", -std::f64::consts::FRAC_PI_4) * c(0.0, -std::f64::consts::FRAC_PI_4).exp();
    assert!(max_abs(&(u - expected)) < 1e-12);
}

#[test]
fn ms_matches_oracle_off_axis() {
    let targets = [1, 3, 4];
    let u = ms_unitary(0.9, 0.37, &targets, 4, 14).unwrap();
    assert!(max_abs(&(u - ms_oracle(4, 0.9, 0.37, &targets))) < 1e-11);
}

#[test]
fn natural_strings_compile_to_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in ["ZXX", "ZYY", "XZX", "YZY", "ZXXX", "ZYYYY", "XXZXXX"] {
        let p: PauliString = s.parse().unwrap();
        for _ in 0..5 {
            let phi = rng.gen_range(-3.0..3.0);
            let u = compile_rotation(&p, phi).unwrap().unitary(14).unwrap();
            let d = distance_up_to_phase(&u, &pauli_exp_oracle(s, phi));
            assert!(d < 1e-10, "{s} phi={phi}: {d}");
        }
    }
}

#[test]
fn y_strings_use_the_y_ms_family() {
    let p: PauliString = "ZYY".parse().unwrap();
    let c = compile_rotation(&p, 0.4).unwrap();
    for ins in &c.gates {
        if let Gate::Ms { phi, .. } = ins.gate {
            assert!((phi - FRAC_PI_2).abs() < 1e-15);
        }
    }
    assert_eq!(c.counted_gates(), 3);
}

#[test]
fn anchor_prefers_lowest_z() {
    let p: PauliString = "XZZX".parse().unwrap();
    let c = compile_rotation(&p, 0.2).unwrap();
    let local = c
        .gates
        .iter()
        .find_map(|i| match i.gate {
            Gate::LocalRot { qubit, .. } if i.role == jwion::ion::GateRole::Core => Some(qubit),
            _ => None,
        })
        .unwrap();
    assert_eq!(local, 2);
}

#[test]
fn long_tunneling_pair_costs_ten_gates() {
    let h = jw_hamiltonian(&build_tunneling(&TunnelingSpec { n_modes: 10, from: 1, to: 10, g: 0.5 }).unwrap()).unwrap();
    let c = compile_plan(&make_plan(&h, 0.3, 1, 1).unwrap(), &h).unwrap();
    assert_eq!(c.counted_gates(), 10);
    let mut oracle = CMatrixProduct::new(10);
    for t in h.terms() {
        oracle.then(&pauli_exp_oracle(&t.string.to_letters(), -t.coefficient.re * 0.3));
    }
    assert!(distance_up_to_phase(&c.unitary(14).unwrap(), &oracle.m) < 1e-8);
}

struct CMatrixProduct {
    m: jwion::linalg::CMatrix,
}

impl CMatrixProduct {
    fn new(n: usize) -> Self {
        Self { m: jwion::linalg::CMatrix::identity(1 << n, 1 << n) }
    }
    fn then(&mut self, u: &jwion::linalg::CMatrix) {
        self.m = u * &self.m;
    }
}

#[test]
fn single_slice_plan_equals_exponential() {
    let t = PauliTerm::real(0.7, "XZX".parse().unwrap());
    let h = jwion::pauli::PauliSum::from_terms(3, [t]).unwrap();
    let plan = make_plan(&h, 0.5, 1, 1).unwrap();
    assert_eq!(compile_plan(&plan, &h).unwrap(), compile_exponential(&t, 0.5).unwrap());
}

#[test]
fn sharing_is_sound_and_does_not_increase_counts() {
    let h = jw_hamiltonian(&build_hubbard(&hubbard3(4.0)).unwrap()).unwrap();
    for order in [1, 2] {
        let plan = make_plan(&h, 1.0, 3, order).unwrap();
        let raw = compile_plan_unshared(&plan, &h).unwrap();
        let shared = share_gates(&raw);
        assert!(shared.counts().total_raw <= raw.counts().total_raw);
        let d = phase_aligned_distance(&raw.unitary(14).unwrap(), &shared.unitary(14).unwrap());
        assert!(d < 1e-10, "order {order}: {d}");
    }
}

#[test]
fn second_order_steps_share_their_boundary() {
    // consecutive palindromic steps meet on the same half-angle slices of
    // the single-Z strings, which fuse across gates on other qubits
    let h = jw_hamiltonian(&build_hubbard(&hubbard3(4.0)).unwrap()).unwrap();
    let plan = make_plan(&h, 1.0, 3, 2).unwrap();
    let raw = compile_plan_unshared(&plan, &h).unwrap().counts();
    let shared = compile_plan(&plan, &h).unwrap().counts();
    assert_eq!(shared.counted, raw.counted);
    assert!(shared.local_layer < raw.local_layer);
}

fn pauli_letters(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_string_compiles_exactly(s in pauli_letters(4), phi in -4.0f64..4.0) {
        let p: PauliString = s.parse().unwrap();
        let u = compile_rotation(&p, phi).unwrap().unitary(14).unwrap();
        // phase is tracked, so the match is exact rather than up to phase
        prop_assert!(max_abs(&(u - pauli_exp_oracle(&s, phi))) < 1e-10);
    }

    #[test]
    fn angles_are_normalized(s in pauli_letters(4), phi in -20.0f64..20.0) {
        let p: PauliString = s.parse().unwrap();
        let c = compile_rotation(&p, phi).unwrap();
        for ins in &c.gates {
            let a = match &ins.gate {
                Gate::Ms { theta, phi, .. } => { prop_assert!(*phi > -std::f64::consts::PI && *phi <= std::f64::consts::PI); *theta }
                Gate::CollectiveRot { angle, axis, .. } => { prop_assert!(*axis != RotAxis::Z); *angle }
                Gate::LocalRot { angle, .. } => *angle,
            };
            prop_assert!(a > -std::f64::consts::PI && a <= std::f64::consts::PI);
        }
    }
}
