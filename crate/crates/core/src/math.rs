// SPDX-License-Identifier: Apache-2.0

//! Log-domain helpers. Bounds grow like `e^{theta * x}` and overflow `f64`
//! long before the optimizer is done with large `theta`, so everything is
//! carried as logarithms.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `ln(1 - e^{-x})` for `x > 0`, accurate at both ends.
pub fn ln_one_minus_exp_neg(x: f64) -> f64 {
    if x < core::f64::consts::LN_2 {
        libm::log(-libm::expm1(-x))
    } else {
        libm::log1p(-libm::exp(-x))
    }
}

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}
