//! N-qubit Pauli strings and weighted Pauli sums.
//!
//! A string is stored as a pair of bitmasks `(x, z)` with qubit `q` (1-based)
//! living in bit `q - 1`. The single-qubit letter is read off the bit pair:
//! `(0,0)=I`, `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`. With this encoding
//! `P = i^{|x & z|} X^x Z^z`, which makes products exact: the phase of a
//! product is always a power of `i` and is tracked as an integer mod 4.
//!
//! Matrices use the little-endian convention: qubit 1 is the least
//! significant bit of the basis index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Coefficients below this magnitude are dropped when canonicalizing.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Largest register representable by the bitmask encoding.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Powers of `i`, stored mod 4.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn mask(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

/// A tensor product of single-qubit Pauli letters on `n_qubits` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "register size must be in 1..=64"
        );
        Self { n_qubits, x: 0, z: 0 }
    }

    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::Precondition(format!(
                "register size {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let m = mask(n_qubits);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::Precondition(format!(
                "bitmask has bits beyond qubit {n_qubits}"
            )));
        }
        Ok(Self { n_qubits, x, z })
    }

    /// Single non-identity letter on qubit `q` (1-based).
    pub fn single(n_qubits: usize, q: usize, letter: Letter) -> Result<Self> {
        Self::identity(n_qubits).with_letter(q, letter)
    }

    /// Parses a letter string written with qubit 1 leftmost.
    pub fn from_letters(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let mut p = Self::from_masks(n, 0, 0)?;
        for (i, c) in s.chars().enumerate() {
            let letter = Letter::from_char(c)
                .ok_or_else(|| Error::Parse(format!("invalid Pauli letter {c:?}")))?;
            p = p.with_letter(i + 1, letter)?;
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    fn check_qubit(&self, q: usize) -> Result<u64> {
        if q == 0 || q > self.n_qubits {
            return Err(Error::IndexOutOfRange {
                what: "qubit",
                index: q,
                max: self.n_qubits,
            });
        }
        Ok(1u64 << (q - 1))
    }

    pub fn letter(&self, q: usize) -> Result<Letter> {
        let bit = self.check_qubit(q)?;
        Ok(Letter::from_bits(self.x & bit != 0, self.z & bit != 0))
    }

    pub fn with_letter(mut self, q: usize, letter: Letter) -> Result<Self> {
        let bit = self.check_qubit(q)?;
        let (x, z) = letter.bits();
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        Ok(self)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n_qubits).map(move |b| {
            let bit = 1u64 << b;
            Letter::from_bits(self.x & bit != 0, self.z & bit != 0)
        })
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// 1-based qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        let s = self.x | self.z;
        (0..self.n_qubits)
            .filter(|b| s & (1u64 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    fn same_register(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Symplectic test: two strings commute iff they anticommute on an even
    /// number of qubits.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.same_register(other)?;
        let sym = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(sym.is_multiple_of(2))
    }

    /// `self * other = i^k * result`, returns `(k mod 4, result)`.
    pub fn mul_phase(&self, other: &Self) -> Result<(u32, PauliString)> {
        self.same_register(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let ny_a = (self.x & self.z).count_ones();
        let ny_b = (other.x & other.z).count_ones();
        let ny_c = (x & z).count_ones();
        // Z^{z_a} X^{x_b} = (-1)^{|z_a & x_b|} X^{x_b} Z^{z_a}
        let swap = 2 * (self.z & other.x).count_ones();
        let k = (ny_a + ny_b + swap + 4 * 64 - ny_c) % 4;
        Ok((
            k,
            PauliString {
                n_qubits: self.n_qubits,
                x,
                z,
            },
        ))
    }

    /// Action on a computational basis state: `P|b> = phase |b'>`.
    #[inline]
    pub fn action(&self, basis: usize) -> (usize, Complex64) {
        let b = basis as u64;
        let ny = (self.x & self.z).count_ones();
        let sign = (b & self.z).count_ones() * 2;
        ((b ^ self.x) as usize, i_pow(ny + sign))
    }

    /// Applies the string to a dense state, writing into `out`.
    pub fn apply_into(&self, state: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(state.len(), out.len());
        for (b, amp) in state.iter().enumerate() {
            let (b2, ph) = self.action(b);
            out[b2] = ph * amp;
        }
    }

    pub fn to_letters(&self) -> String {
        self.letters().map(Letter::as_char).collect()
    }

    /// Canonical sort key: lexicographic on `(x, z)` bitmasks.
    pub fn key(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn to_matrix(&self, limit: usize) -> Result<CMatrix> {
        PauliSum::from_terms(self.n_qubits, [PauliTerm::new(Complex64::new(1.0, 0.0), *self)])?
            .to_matrix(limit)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_letters())
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_letters(s)
    }
}

/// A complex coefficient times a Pauli string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, string: PauliString) -> Self {
        Self {
            coefficient,
            string,
        }
    }

    pub fn real(coefficient: f64, string: PauliString) -> Self {
        Self::new(Complex64::new(coefficient, 0.0), string)
    }

    pub fn n_qubits(&self) -> usize {
        self.string.n_qubits
    }

    /// Hermitian iff the coefficient is real.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coefficient.im.abs() <= tol
    }

    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        let (k, string) = self.string.mul_phase(&other.string)?;
        Ok(PauliTerm {
            coefficient: self.coefficient * other.coefficient * i_pow(k),
            string,
        })
    }
}

/// Free-function form of [`PauliTerm::multiply`].
pub fn multiply(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    a.multiply(b)
}

/// Free-function form of [`PauliString::commutes`].
pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes(b)
}

/// A canonical weighted sum of Pauli strings: no duplicate strings, no
/// coefficients below [`PRUNE_TOLERANCE`], terms ordered by `(x, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "register size must be in 1..=64"
        );
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut s = Self::zero(n_qubits);
        for t in terms {
            s.accumulate(t)?;
        }
        s.prune();
        Ok(s)
    }

    pub fn identity(n_qubits: usize, coefficient: Complex64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.terms.insert((0, 0), coefficient);
        s.prune();
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        let n = self.n_qubits;
        self.terms.iter().map(move |(&(x, z), &c)| PauliTerm {
            coefficient: c,
            string: PauliString { n_qubits: n, x, z },
        })
    }

    pub fn term(&self, index: usize) -> Option<PauliTerm> {
        self.terms().nth(index)
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms
            .get(&string.key())
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn accumulate(&mut self, t: PauliTerm) -> Result<()> {
        if t.n_qubits() != self.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: t.n_qubits(),
            });
        }
        *self
            .terms
            .entry(t.string.key())
            .or_insert(Complex64::new(0.0, 0.0)) += t.coefficient;
        Ok(())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOLERANCE);
    }

    pub fn add_term(&mut self, t: PauliTerm) -> Result<()> {
        self.accumulate(t)?;
        self.prune();
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        for t in other.terms() {
            out.accumulate(t)?;
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    /// Operator product `self * other`, phases tracked exactly.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        let mut out = PauliSum::zero(self.n_qubits);
        for a in self.terms() {
            for b in other.terms() {
                out.accumulate(a.multiply(&b)?)?;
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Largest imaginary part among the coefficients.
    pub fn imaginary_residue(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Drops imaginary parts after checking they are below `tol`.
    pub fn into_real(self, tol: f64) -> Result<PauliSum> {
        let residue = self.imaginary_residue();
        if residue > tol {
            return Err(Error::NotHermitian {
                residue,
                tolerance: tol,
            });
        }
        let mut out = self;
        for c in out.terms.values_mut() {
            c.im = 0.0;
        }
        out.prune();
        Ok(out)
    }

    /// Maximum coefficient difference over the union of supports.
    pub fn max_difference(&self, other: &PauliSum) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::RegisterMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        let mut worst: f64 = 0.0;
        for (k, c) in &self.terms {
            let d = other.terms.get(k).copied().unwrap_or_default();
            worst = worst.max((c - d).norm());
        }
        for (k, d) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(d.norm());
            }
        }
        Ok(worst)
    }

    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        self.max_difference(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// Counts of strings per weight, index = weight.
    pub fn weight_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.n_qubits + 1];
        for t in self.terms() {
            h[t.string.weight()] += 1;
        }
        h
    }

    /// Number of strings acting on two or more qubits.
    pub fn nonlocal_count(&self) -> usize {
        self.terms().filter(|t| t.string.weight() >= 2).count()
    }

    /// Dense matrix of the sum, little-endian.
    pub fn to_matrix(&self, limit: usize) -> Result<CMatrix> {
        if self.n_qubits > limit {
            return Err(Error::RegisterTooLarge {
                n_qubits: self.n_qubits,
                limit,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for t in self.terms() {
            for b in 0..dim {
                let (row, ph) = t.string.action(b);
                m[(row, b)] += t.coefficient * ph;
            }
        }
        Ok(m)
    }

    /// Text form: one `coeff_re coeff_im letters` line per term, qubit 1
    /// leftmost.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in self.terms() {
            out.push_str(&format!(
                "{:?} {:?} {}\n",
                t.coefficient.re, t.coefficient.im, t.string
            ));
        }
        out
    }

    /// Parses [`PauliSum::to_text`] output. Blank lines and `#` comments are
    /// skipped; an empty input needs `n_qubits` to size the register.
    pub fn from_text(text: &str, n_qubits: Option<usize>) -> Result<PauliSum> {
        let mut terms = Vec::new();
        let mut n = n_qubits;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line = line.replace('\u{2212}', "-");
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "line {}: expected `re im letters`, got {raw:?}",
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let c = Complex64::new(parse(fields[0])?, parse(fields[1])?);
            let string = PauliString::from_letters(fields[2])?;
            match n {
                Some(n) if n != string.n_qubits() => {
                    return Err(Error::RegisterMismatch {
                        left: n,
                        right: string.n_qubits(),
                    })
                }
                None => n = Some(string.n_qubits()),
                _ => {}
            }
            terms.push(PauliTerm::new(c, string));
        }
        let n = n.ok_or_else(|| Error::Parse("empty Pauli sum without register size".into()))?;
        PauliSum::from_terms(n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn term(coef: Complex64, s: &str) -> PauliTerm {
        PauliTerm::new(coef, s.parse().unwrap())
    }

    #[test]
    fn xy_is_iz() {
        let p = multiply(&term(c(1., 0.), "X"), &term(c(1., 0.), "Y")).unwrap();
        assert_eq!(p.string.to_letters(), "Z");
        assert_eq!(p.coefficient, c(0., 1.));
    }

    #[test]
    fn identity_is_neutral() {
        let p = multiply(&term(c(1., 0.), "II"), &term(c(0.3, -2.0), "XZ")).unwrap();
        assert_eq!(p, term(c(0.3, -2.0), "XZ"));
    }

    #[test]
    fn two_qubit_product() {
        // X1 Z2 * Z1 Z2 = (XZ)_1 (ZZ)_2 = -i Y1
        let p = multiply(&term(c(1., 0.), "XZ"), &term(c(1., 0.), "ZZ")).unwrap();
        assert_eq!(p.string.to_letters(), "YI");
        assert_eq!(p.coefficient, c(0., -1.));
    }

    #[test]
    fn commutation_examples() {
        let s = |l: &str| l.parse::<PauliString>().unwrap();
        assert!(commutes(&s("X"), &s("X")).unwrap());
        assert!(!commutes(&s("X"), &s("Z")).unwrap());
        assert!(commutes(&s("XZ"), &s("ZX")).unwrap());
    }

    #[test]
    fn register_mismatch_is_an_error() {
        let r = multiply(&term(c(1., 0.), "X"), &term(c(1., 0.), "XX"));
        assert!(matches!(r, Err(Error::RegisterMismatch { .. })));
        let s = |l: &str| l.parse::<PauliString>().unwrap();
        assert!(commutes(&s("X"), &s("XI")).is_err());
    }

    #[test]
    fn letters_roundtrip_and_weight() {
        let p: PauliString = "XZIY".parse().unwrap();
        assert_eq!(p.letter(1).unwrap(), Letter::X);
        assert_eq!(p.letter(4).unwrap(), Letter::Y);
        assert!(p.letter(5).is_err());
        assert!(p.letter(0).is_err());
        assert_eq!(p.weight(), 3);
        assert_eq!(p.support(), vec![1, 2, 4]);
        assert_eq!(p.x_mask(), 0b1001);
        assert_eq!(p.z_mask(), 0b1010);
    }

    #[test]
    fn z_matrix_is_diagonal() {
        let m = PauliSum::from_terms(1, [term(c(1., 0.), "Z")])
            .unwrap()
            .to_matrix(14)
            .unwrap();
        assert_eq!(m[(0, 0)], c(1., 0.));
        assert_eq!(m[(1, 1)], c(-1., 0.));
        assert_eq!(m[(0, 1)], c(0., 0.));
    }

    #[test]
    fn x_on_qubit_one_is_least_significant() {
        let m = PauliSum::from_terms(2, [term(c(1., 0.), "XI")])
            .unwrap()
            .to_matrix(14)
            .unwrap();
        assert_eq!(m[(0, 1)], c(1., 0.));
        assert_eq!(m[(1, 0)], c(1., 0.));
        assert_eq!(m[(2, 3)], c(1., 0.));
        assert_eq!(m[(0, 2)], c(0., 0.));
    }

    #[test]
    fn dense_limit_is_enforced() {
        let s = PauliSum::zero(5);
        assert!(matches!(
            s.to_matrix(4),
            Err(Error::RegisterTooLarge { n_qubits: 5, limit: 4 })
        ));
    }

    #[test]
    fn canonical_form_merges_and_prunes() {
        let s = PauliSum::from_terms(
            2,
            [
                term(c(0.5, 0.), "XX"),
                term(c(1.0, 0.), "ZI"),
                term(c(-0.5, 0.), "XX"),
                term(c(1e-13, 0.), "YY"),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.term(0).unwrap().string.to_letters(), "ZI");
    }

    #[test]
    fn canonical_order_is_x_then_z() {
        let s = PauliSum::from_terms(
            2,
            ["XX", "ZI", "IZ", "YI", "ZZ"].map(|l| term(c(1., 0.), l)),
        )
        .unwrap();
        let order: Vec<String> = s.terms().map(|t| t.string.to_letters()).collect();
        assert_eq!(order, ["ZI", "IZ", "ZZ", "YI", "XX"]);
    }

    #[test]
    fn text_form() {
        let s = PauliSum::from_terms(3, [term(c(-0.5, 0.), "XZX")]).unwrap();
        assert_eq!(s.to_text(), "-0.5 0.0 XZX\n");
        let back = PauliSum::from_text("# comment\n\u{2212}0.5 0.0 XZX\n", None).unwrap();
        assert_eq!(back, s);
        assert!(PauliSum::from_text("1.0 XZ", None).is_err());
        assert!(PauliSum::from_text("1 0 XZ\n1 0 X\n", None).is_err());
        assert_eq!(PauliSum::from_text("", Some(3)).unwrap(), PauliSum::zero(3));
    }

    #[test]
    fn into_real_rejects_imaginary_residue() {
        let s = PauliSum::from_terms(1, [term(c(1., 1e-6), "X")]).unwrap();
        assert!(matches!(
            s.clone().into_real(1e-12),
            Err(Error::NotHermitian { .. })
        ));
        assert_eq!(s.into_real(1e-3).unwrap().term(0).unwrap().coefficient, c(1., 0.));
    }

    #[test]
    fn histogram_counts_weights() {
        let s = PauliSum::from_terms(
            3,
            ["III", "ZII", "IZI", "ZZI", "XZX", "YZY"].map(|l| term(c(1., 0.), l)),
        )
        .unwrap();
        assert_eq!(s.weight_histogram(), vec![1, 2, 1, 2]);
        assert_eq!(s.nonlocal_count(), 3);
    }
}
