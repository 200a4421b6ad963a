//! Exact scalar coefficients of the form q * pi^(p/2) with q rational.
//!
//! All symbolic layers of the crate keep their scalars in this ring, so that
//! heat coefficients, phase-space constants and expansion coefficients stay
//! exact until a caller asks for an f64.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};
use std::fmt;

/// A rational multiple of an integer power of sqrt(pi).
///
/// The value is `q * pi^(pi_half/2)`. The zero element is normalized to
/// `pi_half == 0` so syntactic equality matches semantic equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficient {
    q: BigRational,
    pi_half: i32,
}

impl Coefficient {
    pub fn new(q: BigRational, pi_half: i32) -> Self {
        if q.is_zero() {
            Coefficient {
                q,
                pi_half: 0,
            }
        } else {
            Coefficient { q, pi_half }
        }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), 0)
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), 0)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            0,
        )
    }

    /// `q * pi^(pi_half/2)` with an explicit rational part.
    pub fn with_pi(num: i64, den: i64, pi_half: i32) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            pi_half,
        )
    }

    pub fn rational(&self) -> &BigRational {
        &self.q
    }

    /// Exponent of sqrt(pi); the pi power is `pi_half/2`.
    pub fn pi_half(&self) -> i32 {
        self.pi_half
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.q.clone(), self.pi_half)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.q * &other.q, self.pi_half + other.pi_half)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero coefficient");
        Self::new(&self.q / &other.q, self.pi_half - other.pi_half)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.q * r, self.pi_half)
    }

    /// Addition is only defined between terms carrying the same pi power.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.pi_half != other.pi_half {
            return None;
        }
        Some(Self::new(&self.q + &other.q, self.pi_half))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other)
            .expect("added coefficients with different pi powers")
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        q * std::f64::consts::PI.powf(self.pi_half as f64 / 2.0)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.q)?;
        if self.pi_half % 2 == 0 {
            write!(f, "*pi^{}", self.pi_half / 2)
        } else {
            write!(f, "*pi^{}/2", self.pi_half)
        }
    }
}

/// n! as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=n as u64 {
        out *= BigInt::from(k);
    }
    out
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Gamma(two_z / 2) evaluated exactly. Returns `None` at the poles
/// (non-positive integer argument, i.e. even `two_z <= 0`).
pub fn gamma_half(two_z: i64) -> Option<Coefficient> {
    if two_z % 2 == 0 {
        let z = two_z / 2;
        if z <= 0 {
            return None;
        }
        let mut q = BigRational::one();
        for k in 1..z {
            q *= BigRational::from_integer(BigInt::from(k));
        }
        return Some(Coefficient::new(q, 0));
    }
    // Odd two_z: walk from Gamma(1/2) = sqrt(pi) using Gamma(z+1) = z Gamma(z).
    let mut q = BigRational::one();
    let mut cur = 1i64; // doubled argument currently represented
    while cur < two_z {
        // Gamma(cur/2 + 1) = (cur/2) * Gamma(cur/2)
        q *= BigRational::new(BigInt::from(cur), BigInt::from(2));
        cur += 2;
    }
    while cur > two_z {
        // Gamma(cur/2 - 1) = Gamma(cur/2) / (cur/2 - 1)
        let denom = BigRational::new(BigInt::from(cur - 2), BigInt::from(2));
        q /= denom;
        cur -= 2;
    }
    Some(Coefficient::new(q, 1))
}

/// Gamma(a + 1/2) for integer a, exact.
pub fn gamma_half_shift(a: i64) -> Coefficient {
    gamma_half(2 * a + 1).expect("half-integer gamma has no poles")
}

/// Exact Beta function B(two_a/2, two_b/2) when neither argument hits a pole.
pub fn beta_half(two_a: i64, two_b: i64) -> Option<Coefficient> {
    let ga = gamma_half(two_a)?;
    let gb = gamma_half(two_b)?;
    let gab = gamma_half(two_a + two_b)?;
    Some(ga.mul(&gb).div(&gab))
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn gamma_integers() {
        assert_eq!(gamma_half(2).unwrap(), Coefficient::from_int(1));
        assert_eq!(gamma_half(8).unwrap(), Coefficient::from_int(6));
        assert_eq!(gamma_half(10).unwrap(), Coefficient::from_int(24));
        assert!(gamma_half(0).is_none());
        assert!(gamma_half(-2).is_none());
        assert!(gamma_half(-6).is_none());
    }

    #[test]
    fn gamma_half_integers() {
        // Gamma(1/2) = sqrt(pi)
        assert_eq!(gamma_half(1).unwrap(), Coefficient::with_pi(1, 1, 1));
        // Gamma(3/2) = sqrt(pi)/2
        assert_eq!(gamma_half(3).unwrap(), Coefficient::with_pi(1, 2, 1));
        // Gamma(5/2) = 3 sqrt(pi)/4
        assert_eq!(gamma_half(5).unwrap(), Coefficient::with_pi(3, 4, 1));
        // Gamma(-1/2) = -2 sqrt(pi)
        assert_eq!(gamma_half(-1).unwrap(), Coefficient::with_pi(-2, 1, 1));
        // Gamma(-3/2) = 4 sqrt(pi)/3
        assert_eq!(gamma_half(-3).unwrap(), Coefficient::with_pi(4, 3, 1));
        close(gamma_half(1).unwrap().to_f64(), std::f64::consts::PI.sqrt());
    }

    #[test]
    fn arithmetic_and_normalization() {
        let a = Coefficient::with_pi(2, 3, 1);
        let b = Coefficient::with_pi(3, 4, -1);
        let p = a.mul(&b);
        assert_eq!(p, Coefficient::from_ratio(1, 2));
        let q = a.div(&b);
        assert_eq!(q, Coefficient::with_pi(8, 9, 2));
        // zero normalizes its pi power away
        let z = a.mul(&Coefficient::zero());
        assert_eq!(z, Coefficient::zero());
        assert_eq!(z.pi_half(), 0);
        assert!(a.checked_add(&b).is_none());
        assert_eq!(
            a.checked_add(&Coefficient::with_pi(1, 3, 1)).unwrap(),
            Coefficient::with_pi(1, 1, 1)
        );
    }

    #[test]
    fn beta_values() {
        // B(1/2, 3/2) = pi/2
        assert_eq!(beta_half(1, 3).unwrap(), Coefficient::with_pi(1, 2, 2));
        // B(1, 1) = 1
        assert_eq!(beta_half(2, 2).unwrap(), Coefficient::one());
        // pole in numerator argument
        assert!(beta_half(-2, 3).is_none());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    #[test]
    fn display_format() {
        assert_eq!(Coefficient::from_ratio(-1, 6).to_string(), "(-1/6)*pi^0");
        assert_eq!(Coefficient::with_pi(1, 2, 1).to_string(), "(1/2)*pi^1/2");
        assert_eq!(Coefficient::with_pi(1, 4, -2).to_string(), "(1/4)*pi^-1");
    }
}
