//! q-number primitives.
//!
//! `[k, q] = (1 - q^k) / (1 - q)`, the shifted factorial `[k, q]!`, the rising
//! q-Pochhammer symbol `[x, q]_k = [x, q][x + 1, q] … [x + k - 1, q]` and the
//! Taylor coefficients of `F_{m+1,q}(z) = z + Σ [m+1,q]_{k-1} / [k-1,q]! z^k`,
//! the kernel of the q-Ruscheweyh operator.
//!
//! Every routine works with products of factors in `[1, 1/(1-q))`, so nothing
//! cancels catastrophically. `[x, q]_k` is bounded by `(1 - q)^{-k}`, which stays
//! finite in `f64` for every `k ≤ 64` and `q ≤ 1 - 10⁻⁴`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The deformation parameter `q`, restricted to the open interval `(0, 1)`.
///
/// The endpoints are rejected rather than treated as limits: `[k, q]` divides by
/// `1 - q`. The classical `q → 1` limit is available through
/// [`classical_limit_coeff`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q > 0.0 && q < 1.0 {
            Ok(Self(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl<'de> Deserialize<'de> for QParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let q = f64::deserialize(d)?;
        QParam::new(q).map_err(serde::de::Error::custom)
    }
}

/// `[k, q] = 1 + q + … + q^{k-1}`; zero for `k = 0`.
pub fn q_number(k: u32, q: QParam) -> f64 {
    let q = q.0;
    // Horner form of the geometric sum; agrees with (1 - q^k)/(1 - q) without
    // the cancellation in 1 - q^k when q is close to 1.
    (0..k).fold(0.0, |acc, _| 1.0 + q * acc)
}

/// `[x, q] = (1 - q^x) / (1 - q)` for real `x`.
///
/// Evaluated as `expm1(x ln q) / expm1(ln q)`, which stays accurate near `q = 1`.
pub fn q_number_real(x: f64, q: QParam) -> f64 {
    let ln_q = q.0.ln();
    (x * ln_q).exp_m1() / ln_q.exp_m1()
}

/// `[k, q]! = [1, q][2, q] … [k, q]`, with `[0, q]! = 1`.
pub fn q_factorial(k: u32, q: QParam) -> f64 {
    (1..=k).map(|j| q_number(j, q)).product()
}

/// Rising q-Pochhammer symbol `[x, q]_k = [x, q][x + 1, q] … [x + k - 1, q]`.
///
/// Integer bases go through [`q_number`]; other bases through [`q_number_real`].
pub fn q_pochhammer(x: f64, k: u32, q: QParam) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::InvalidPochhammerBase(x));
    }
    if x.fract() == 0.0 && x <= u32::MAX as f64 {
        let base = x as u32;
        Ok(q_pochhammer_int(base, k, q))
    } else {
        Ok((0..k).map(|j| q_number_real(x + j as f64, q)).product())
    }
}

/// `[n, q]_k` for a positive integer base `n`.
pub fn q_pochhammer_int(n: u32, k: u32, q: QParam) -> f64 {
    (0..k).map(|j| q_number(n + j, q)).product()
}

/// `k`-th Taylor coefficient of `F_{m+1,q}`: `[m+1, q]_{k-1} / [k-1, q]!`.
///
/// Computed as `∏_{j=1}^{k-1} [m + j, q] / [j, q]`, each ratio at least one.
/// For `k = 1` this is the normalizing coefficient 1.
pub fn ruscheweyh_coeff(m: u32, k: u32, q: QParam) -> f64 {
    (1..k)
        .map(|j| q_number(m + j, q) / q_number(j, q))
        .product()
}

/// `C(m + k - 1, k - 1)`: the `k`-th Taylor coefficient of `z / (1 - z)^{m+1}`,
/// which is the `q → 1⁻` limit of [`ruscheweyh_coeff`].
pub fn classical_limit_coeff(m: u32, k: u32) -> f64 {
    (1..k)
        .map(|j| f64::from(m + j) / f64::from(j))
        .product()
}
