//! Float helpers that work without `std`.

#[cfg(feature = "std")]
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `x^3` without `powi`, which is unavailable in `core`.
#[inline]
pub(crate) fn cube(x: f64) -> f64 {
    x * x * x
}

#[inline]
pub(crate) fn hypot2(a: f64, b: f64) -> f64 {
    sqrt(a * a + b * b)
}
