//! Independent reference constructions shared by the integration tests.
//! Nothing here calls into the library's own matrix builders.

#![allow(dead_code)]

use jwion::linalg::CMatrix;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(letter: char) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let v = match letter {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        'Z' => [o, z, z, -o],
        _ => panic!("bad letter {letter}"),
    };
    CMatrix::from_row_slice(2, 2, &v)
}

/// Kronecker product with qubit 1 as the least significant factor, so
/// the first character of `letters` acts on bit 0.
pub fn kron_string(letters: &str) -> CMatrix {
    let mut m = CMatrix::identity(1, 1);
    for ch in letters.chars() {
        m = pauli_2x2(ch).kronecker(&m);
    }
    m
}

/// Letters string with `l` on each listed 1-based qubit.
pub fn letters_on(n: usize, placed: &[(usize, char)]) -> String {
    let mut v = vec!['I'; n];
    for &(q, l) in placed {
        v[q - 1] = l;
    }
    v.into_iter().collect()
}

/// Fock-space annihilator on `n` modes from the occupation-number
/// definition: `b_k |..1_k..> = (-1)^{sum_{i<k} n_i} |..0_k..>`.
pub fn fock_annihilator(n: usize, k: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    let bit = 1usize << (k - 1);
    for b in 0..dim {
        if b & bit != 0 {
            let below = (b & (bit - 1)).count_ones();
            let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
            m[(b ^ bit, b)] = c(sign, 0.0);
        }
    }
    m
}

pub fn fock_number(n: usize, k: usize) -> CMatrix {
    let a = fock_annihilator(n, k);
    a.adjoint() * a
}

/// `exp(A)` by scaling and squaring with a 30-term Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let norm = a.norm();
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scaled = a / c(2f64.powi(s), 0.0);
    let dim = a.nrows();
    let mut term = CMatrix::identity(dim, dim);
    let mut sum = term.clone();
    for j in 1..30 {
        term = &term * &scaled / c(j as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i theta (cos phi S_x + sin phi S_y)^2 / 4)` on `targets`.
pub fn ms_oracle(n: usize, theta: f64, phi: f64, targets: &[usize]) -> CMatrix {
    let dim = 1usize << n;
    let mut s = CMatrix::zeros(dim, dim);
    for &q in targets {
        let sx = kron_string(&letters_on(n, &[(q, 'X')]));
        let sy = kron_string(&letters_on(n, &[(q, 'Y')]));
        s += sx * c(phi.cos(), 0.0) + sy * c(phi.sin(), 0.0);
    }
    let gen = &s * &s * c(0.0, -theta / 4.0);
    expm(&gen)
}

/// `exp(i a sigma)` on qubit `q`.
pub fn local_oracle(n: usize, letter: char, a: f64, q: usize) -> CMatrix {
    pauli_exp_oracle(&letters_on(n, &[(q, letter)]), a)
}

/// `exp(i phi P) = cos(phi) I + i sin(phi) P`, valid since `P^2 = I`.
pub fn pauli_exp_oracle(letters: &str, phi: f64) -> CMatrix {
    let p = kron_string(letters);
    let dim = p.nrows();
    CMatrix::identity(dim, dim) * c(phi.cos(), 0.0) + p * c(0.0, phi.sin())
}

/// Frobenius distance after removing the relative phase at the largest
/// entry of `a`.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let (mut best, mut at) = (0.0, (0, 0));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a[(i, j)].norm() > best {
                best = a[(i, j)].norm();
                at = (i, j);
            }
        }
    }
    let r = b[at] / a[at];
    (a * (r / r.norm()) - b).norm()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Hubbard chain on 3 sites with hopping `w` and interaction 1.
pub fn hubbard3(w: f64) -> jwion::HubbardSpec {
    jwion::HubbardSpec::new(3, w, 1.0)
}
