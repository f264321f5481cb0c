//! Float math shim: `std` intrinsics when available, `libm` otherwise.

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("cvmdi-core requires either the `std` or the `libm` feature");

#[cfg(feature = "std")]
mod imp {
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    pub fn log2(x: f64) -> f64 {
        x.log2()
    }
    pub fn tanh(x: f64) -> f64 {
        x.tanh()
    }
    pub fn acos(x: f64) -> f64 {
        x.acos()
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn log2(x: f64) -> f64 {
        libm::log2(x)
    }
    pub fn tanh(x: f64) -> f64 {
        libm::tanh(x)
    }
    pub fn acos(x: f64) -> f64 {
        libm::acos(x)
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
}

pub(crate) use imp::*;

/// Integer power by binary exponentiation; identical results on std and no_std
/// builds, unlike `f64::powi`.
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    if n < 0 {
        return 1.0 / powi(x, -n);
    }
    let mut base = x;
    let mut exp = n as u32;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_std() {
        for &x in &[0.3_f64, 0.9, 1.7, 10.0] {
            for n in -6..=12 {
                let got = powi(x, n);
                let want = x.powi(n);
                assert!((got - want).abs() <= 1e-15 * want.abs().max(1.0));
            }
        }
    }
}
