//! Truncated normalized power series `f(z) = z + a₂z² + … + a_N z^N`.
//!
//! Besides evaluation, this module carries the Hadamard product, the Jackson
//! q-derivative `D_q f(z) = (f(qz) - f(z)) / (z(q - 1))`, and the q-Ruscheweyh
//! operator in two independent forms:
//!
//! * the convolution form `D_q^m f = F_{m+1,q} * f`, which scales `a_k` by
//!   [`ruscheweyh_coeff`];
//! * the differential form `D_q^m f(z) = z ∂_q^m (z^{m-1} f(z)) / [m, q]!`.
//!
//! The two forms share no code beyond q-numbers and act as oracles for each other.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::{q_factorial, q_number, ruscheweyh_coeff, QParam};
use crate::{Error, Result};

pub const DEFAULT_DEGREE: usize = 32;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Something that can be evaluated, with its first two derivatives, on the disk.
pub trait DiskFunction {
    fn value(&self, z: Complex64) -> Complex64;
    fn derivative(&self, z: Complex64) -> Complex64;
    fn second_derivative(&self, z: Complex64) -> Complex64;
}

/// A general complex polynomial `c₀ + c₁z + … + c_d z^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Length of the coefficient vector minus one; trailing zeros are not trimmed.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Maps `Σ c_k z^k` to `Σ [k, q] c_k z^{k-1}`.
    pub fn q_derivative(&self, q: QParam) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * q_number(k as u32, q))
            .collect();
        Polynomial::new(coeffs)
    }

    /// Multiplies by `z^shift`. A negative shift divides by a power of `z` and
    /// is only allowed when the dropped low-order coefficients are zero.
    pub fn shift(&self, shift: isize) -> Result<Polynomial> {
        if shift >= 0 {
            let mut coeffs = vec![ZERO; shift as usize];
            coeffs.extend_from_slice(&self.coeffs);
            return Ok(Polynomial::new(coeffs));
        }
        let drop = shift.unsigned_abs();
        if self.coeffs.iter().take(drop).any(|c| *c != ZERO) {
            return Err(Error::InvalidSeries(format!(
                "cannot divide by z^{drop}: low-order coefficients are nonzero"
            )));
        }
        Ok(Polynomial::new(self.coeffs.iter().skip(drop).copied().collect()))
    }

    pub fn scale(&self, factor: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::new(Vec::new());
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// `self ∘ inner`, computed exactly by Horner's scheme in polynomial arithmetic.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        let mut rev = self.coeffs.iter().rev();
        let mut acc = Polynomial::new(vec![rev.next().copied().unwrap_or(ZERO)]);
        for &c in rev {
            acc = acc.mul(inner).add(&Polynomial::new(vec![c]));
        }
        acc
    }

    /// Keeps coefficients up to and including degree `n`.
    pub fn truncate(&self, n: usize) -> Polynomial {
        Polynomial::new(self.coeffs.iter().take(n + 1).copied().collect())
    }
}

impl DiskFunction for Polynomial {
    fn value(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(ZERO, |acc, (k, &c)| acc * z + c * k as f64)
    }

    fn second_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(ZERO, |acc, (k, &c)| acc * z + c * (k * (k - 1)) as f64)
    }
}

/// Degree-`N` truncation of a normalized analytic function, `a₁ = 1` exactly.
///
/// Coefficients beyond `N` are zero. Values are immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesFile", into = "SeriesFile")]
pub struct TruncatedSeries {
    /// `coeffs[i]` is `a_{i+1}`.
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds from the full coefficient list `(a₁, …, a_N)`; `a₁` must be exactly 1.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.first() {
            None => return Err(Error::InvalidSeries("degree must be at least 1".into())),
            Some(&a1) if a1 != ONE => {
                return Err(Error::InvalidSeries(format!(
                    "first coefficient must be exactly 1, got {a1}"
                )))
            }
            _ => {}
        }
        if let Some(k) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSeries(format!("coefficient a_{} is not finite", k + 1)));
        }
        Ok(Self { coeffs })
    }

    /// Builds `z + Σ_{k≥2} a_k z^k` from the tail `(a₂, …, a_N)`.
    pub fn from_tail(tail: &[Complex64]) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(ONE);
        coeffs.extend_from_slice(tail);
        Self::new(coeffs)
    }

    pub fn from_real_tail(tail: &[f64]) -> Result<Self> {
        let tail: Vec<_> = tail.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        Self::from_tail(&tail)
    }

    /// `f(z) = z`, padded with zeros to degree `n`.
    pub fn identity(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n.max(1)];
        coeffs[0] = ONE;
        Self { coeffs }
    }

    /// Truncation of `z / (1 - z)`, the unit of the Hadamard product.
    pub fn geometric(n: usize) -> Self {
        Self { coeffs: vec![ONE; n.max(1)] }
    }

    /// Truncation of `F_{m+1,q}(z)`.
    pub fn ruscheweyh_kernel(m: u32, q: QParam, n: usize) -> Self {
        let coeffs = (1..=n.max(1))
            .map(|k| Complex64::new(ruscheweyh_coeff(m, k as u32, q), 0.0))
            .collect();
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `(a₁, …, a_N)`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_k` for `k ≥ 1`; zero past the truncation degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k == 0 {
            return ZERO;
        }
        self.coeffs.get(k - 1).copied().unwrap_or(ZERO)
    }

    /// Coefficient-wise product; the result has the smaller truncation degree.
    pub fn hadamard(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `D_q f` as a polynomial: `Σ [k, q] a_k z^{k-1}`.
    pub fn q_derivative(&self, q: QParam) -> Polynomial {
        self.to_polynomial().q_derivative(q)
    }

    /// `D_q^m f = F_{m+1,q} * f`.
    pub fn apply_ruscheweyh(&self, m: u32, q: QParam) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if i == 0 {
                    a
                } else {
                    a * ruscheweyh_coeff(m, i as u32 + 1, q)
                }
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `D_q^m f(z) = z ∂_q^m (z^{m-1} f(z)) / [m, q]!`.
    ///
    /// For `m = 0` the factor `z^{-1}` is read as a coefficient shift, which is
    /// exact because `f(0) = 0`; the result is then `f` itself.
    pub fn apply_ruscheweyh_differential(&self, m: u32, q: QParam) -> TruncatedSeries {
        let mut poly = self
            .to_polynomial()
            .shift(m as isize - 1)
            .expect("f(0) = 0 for a normalized series");
        for _ in 0..m {
            poly = poly.q_derivative(q);
        }
        let poly = poly
            .shift(1)
            .expect("positive shift never fails")
            .scale(Complex64::new(1.0 / q_factorial(m, q), 0.0));

        let mut coeffs: Vec<_> = poly.coefficients().iter().skip(1).copied().collect();
        coeffs.truncate(self.degree());
        // [1,q]…[m,q] / [m,q]! can land one ulp away from 1.
        debug_assert!((coeffs[0] - ONE).norm() < 1e-12);
        coeffs[0] = ONE;
        TruncatedSeries { coeffs }
    }

    /// Horner evaluation of `f(z)`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        z * self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    /// Like [`evaluate`](Self::evaluate), also reporting whether `z` lies outside the open unit disk.
    pub fn evaluate_flagged(&self, z: Complex64) -> (Complex64, bool) {
        (self.evaluate(z), z.norm() >= 1.0)
    }

    /// `f′(z) = Σ k a_k z^{k-1}`.
    pub fn evaluate_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(ZERO, |acc, (i, &a)| acc * z + a * (i + 1) as f64)
    }

    /// `f″(z) = Σ k(k-1) a_k z^{k-2}`.
    pub fn evaluate_second_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(ZERO, |acc, (i, &a)| acc * z + a * ((i + 1) * i) as f64)
    }

    /// `f(z) / z` as a polynomial `1 + a₂z + …`, well defined at `z = 0`.
    pub fn quotient_by_z(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial::new(coeffs)
    }

    /// Reads `f` as `z - Σ b_k z^k` when every tail coefficient is real and nonpositive.
    pub fn as_negative_coeff(&self) -> Option<NegativeCoeffSeries> {
        let tail = &self.coeffs[1..];
        if tail.iter().all(|a| a.im == 0.0 && a.re <= 0.0) {
            NegativeCoeffSeries::new(tail.iter().map(|a| -a.re).collect()).ok()
        } else {
            None
        }
    }
}

impl DiskFunction for TruncatedSeries {
    fn value(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.evaluate_derivative(z)
    }

    fn second_derivative(&self, z: Complex64) -> Complex64 {
        self.evaluate_second_derivative(z)
    }
}

/// On-disk JSON form: `{"degree": N, "coefficients": [[re, im], …]}`, `a₁` first.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub degree: usize,
    pub coefficients: Vec<[f64; 2]>,
}

impl TryFrom<SeriesFile> for TruncatedSeries {
    type Error = Error;

    fn try_from(file: SeriesFile) -> Result<Self> {
        if file.degree != file.coefficients.len() {
            return Err(Error::InvalidSeries(format!(
                "degree {} does not match {} coefficients",
                file.degree,
                file.coefficients.len()
            )));
        }
        TruncatedSeries::new(
            file.coefficients
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<TruncatedSeries> for SeriesFile {
    fn from(f: TruncatedSeries) -> Self {
        SeriesFile {
            degree: f.degree(),
            coefficients: f.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// `f(z) = z - Σ_{k≥2} b_k z^k` with every `b_k ≥ 0` (the class of negative coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct NegativeCoeffSeries {
    /// `magnitudes[i]` is `b_{i+2}`.
    magnitudes: Vec<f64>,
}

impl NegativeCoeffSeries {
    /// Builds from `(b₂, …, b_N)`.
    pub fn new(magnitudes: Vec<f64>) -> Result<Self> {
        if let Some(i) = magnitudes.iter().position(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidSeries(format!(
                "magnitude b_{} = {} must be finite and nonnegative",
                i + 2,
                magnitudes[i]
            )));
        }
        Ok(Self { magnitudes })
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self { magnitudes: Vec::new() }
    }

    /// `z - b z^k`.
    pub fn single_term(k: usize, b: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("term index must be ≥ 2, got {k}")));
        }
        let mut magnitudes = vec![0.0; k - 1];
        magnitudes[k - 2] = b;
        Self::new(magnitudes)
    }

    pub fn degree(&self) -> usize {
        self.magnitudes.len() + 1
    }

    /// `(b₂, …, b_N)`.
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `b_k` for `k ≥ 2`; zero past the truncation degree.
    pub fn magnitude(&self, k: usize) -> f64 {
        if k < 2 {
            return 0.0;
        }
        self.magnitudes.get(k - 2).copied().unwrap_or(0.0)
    }

    /// Iterator over `(k, b_k)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.magnitudes.iter().enumerate().map(|(i, &b)| (i + 2, b))
    }

    pub fn to_series(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.magnitudes.len() + 1);
        coeffs.push(ONE);
        coeffs.extend(self.magnitudes.iter().map(|&b| Complex64::new(-b, 0.0)));
        TruncatedSeries { coeffs }
    }
}

impl DiskFunction for NegativeCoeffSeries {
    fn value(&self, z: Complex64) -> Complex64 {
        let tail = self.magnitudes.iter().rev().fold(ZERO, |acc, &b| acc * z - b);
        z * (ONE + z * tail)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        let tail = self
            .magnitudes
            .iter()
            .enumerate()
            .rev()
            .fold(ZERO, |acc, (i, &b)| acc * z - b * (i + 2) as f64);
        ONE + z * tail
    }

    fn second_derivative(&self, z: Complex64) -> Complex64 {
        self.magnitudes
            .iter()
            .enumerate()
            .rev()
            .fold(ZERO, |acc, (i, &b)| acc * z - b * ((i + 2) * (i + 1)) as f64)
    }
}
