//! Float math shims usable both with `std` and with `libm` under `no_std`.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    #[inline]
    pub fn asin(x: f64) -> f64 {
        x.asin()
    }
    #[inline]
    pub fn acos(x: f64) -> f64 {
        x.acos()
    }
    #[inline]
    pub fn atan2(y: f64, x: f64) -> f64 {
        y.atan2(x)
    }
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        x.hypot(y)
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline]
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    #[inline]
    pub fn asin(x: f64) -> f64 {
        libm::asin(x)
    }
    #[inline]
    pub fn acos(x: f64) -> f64 {
        libm::acos(x)
    }
    #[inline]
    pub fn atan2(y: f64, x: f64) -> f64 {
        libm::atan2(y, x)
    }
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        libm::hypot(x, y)
    }
}

pub use imp::{acos, asin, atan2, cos, hypot, sin, sqrt};

/// Absolute value without relying on `std` (sign-bit clear, so `-0.0` maps to `0.0`).
#[inline]
pub fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

/// `sin` and `cos` evaluated together.
#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    (sin(x), cos(x))
}

/// Wraps an angle into the half-open interval `(-PI, PI]`.
///
/// Built on `%` (exact in IEEE 754), so the result is bitwise deterministic
/// and the function is idempotent: values already inside the interval are
/// returned unchanged.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let y = x % TAU; // exact, in (-TAU, TAU)
    if y > PI {
        y - TAU
    } else if y <= -PI {
        y + TAU
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn wrap_basic_values() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle(TAU), 0.0);
        assert_eq!(wrap_angle(-TAU), 0.0);
        assert_eq!(wrap_angle(3.0 * PI), PI);
        assert!((wrap_angle(FRAC_PI_2 + TAU) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn wrap_is_idempotent_on_its_range() {
        let mut x = -PI + 1e-12;
        while x <= PI {
            let w = wrap_angle(x);
            assert!(w > -PI && w <= PI);
            assert_eq!(wrap_angle(w).to_bits(), w.to_bits());
            x += 0.05;
        }
    }

    #[test]
    fn abs_clears_sign_bit() {
        assert_eq!(abs(-3.5), 3.5);
        assert_eq!(abs(3.5), 3.5);
        assert_eq!(abs(-0.0).to_bits(), 0.0f64.to_bits());
    }
}
