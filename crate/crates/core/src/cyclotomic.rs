//! Exact arithmetic in the cyclotomic field `Q(ζ_p)` for prime `p`.
//!
//! An element is stored on the power basis `ζ^1, …, ζ^{p-1}`. The constant
//! term is folded away with `1 = -(ζ + ζ^2 + … + ζ^{p-1})`, which makes the
//! representation canonical: two elements are equal iff their coefficient
//! vectors are equal.
//!
//! Internally most operations work on the redundant "cyclic" form
//! `Σ_{j=0}^{p-1} c_j ζ^j`, where multiplication by `ζ^k` is a rotation and
//! multiplication is a cyclic convolution. A cyclic vector maps back to the
//! canonical form by subtracting `c_0` from every coefficient.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<u32> {
    if !is_prime(p) || p > u32::MAX as u64 {
        return Err(Error::NotPrime(p));
    }
    Ok(p as u32)
}

/// Legendre symbol `(a / p)` for an odd prime `p`: 0, 1 or -1.
pub fn legendre(a: u64, p: u32) -> i32 {
    let p64 = p as u64;
    let a = a % p64;
    if a == 0 {
        return 0;
    }
    // Euler's criterion.
    let mut result = 1u64;
    let mut base = a;
    let mut e = (p64 - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// An exact element of `Q(ζ_p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u32,
    /// `coeffs[j - 1]` is the coefficient of `ζ^j`, `j = 1..p-1`.
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero(p: u32) -> Self {
        debug_assert!(p >= 2);
        CycNum { p, coeffs: vec![Rational::zero(); p as usize - 1] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, &Rational::one())
    }

    pub fn from_rational(p: u32, q: &Rational) -> Self {
        let neg = -q;
        CycNum { p, coeffs: vec![neg; p as usize - 1] }
    }

    pub fn from_integer(p: u32, n: i64) -> Self {
        Self::from_rational(p, &Rational::from_integer(n))
    }

    /// `ζ^k`. Fails if `p` is not prime.
    pub fn root_power(p: u64, k: i64) -> Result<Self> {
        let p = ensure_prime(p)?;
        Ok(Self::root(p, k.rem_euclid(p as i64) as u32))
    }

    /// `ζ^k` for an already validated prime `p`.
    pub fn root(p: u32, k: u32) -> Self {
        let k = k % p;
        if k == 0 {
            return Self::one(p);
        }
        let mut z = Self::zero(p);
        z.coeffs[k as usize - 1] = Rational::one();
        z
    }

    /// Canonicalizes the cyclic form `Σ_{j<p} cyclic[j] ζ^j`.
    pub fn from_cyclic(p: u32, cyclic: &[Rational]) -> Self {
        assert_eq!(cyclic.len(), p as usize, "cyclic vector must have length p");
        let c0 = &cyclic[0];
        let coeffs = if c0.is_zero() { cyclic[1..].to_vec() } else { cyclic[1..].iter().map(|c| c - c0).collect() };
        CycNum { p, coeffs }
    }

    /// `Σ_k counts[k] ζ^k`, the value of a character sum from residue counts.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize, "counts must have length p");
        let c0 = counts[0];
        CycNum { p, coeffs: counts[1..].iter().map(|&c| Rational::from_integer(c - c0)).collect() }
    }

    /// Builds from canonical coefficients of `ζ^1..ζ^{p-1}`.
    pub fn from_coeffs(p: u64, coeffs: Vec<Rational>) -> Result<Self> {
        let p = ensure_prime(p)?;
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Domain(alloc::format!(
                "expected {} coefficients for p = {p}, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycNum { p, coeffs })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    ///
    /// An element is rational iff all canonical coefficients agree; the
    /// common coefficient `c` stands for `c(ζ + … + ζ^{p-1}) = -c`.
    pub fn as_rational(&self) -> Option<Rational> {
        let first = &self.coeffs[0];
        if self.coeffs.iter().all(|c| c == first) {
            Some(-first)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn to_cyclic(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.p as usize);
        out.push(Rational::zero());
        out.extend(self.coeffs.iter().cloned());
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycNum { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycNum { p: self.p, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p as usize;
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(&q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&q));
        }
        let mut acc = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j + 2) % p;
                acc[k] = &acc[k] + &(a * b);
            }
        }
        Ok(Self::from_cyclic(self.p, &acc))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_one() {
            return self.clone();
        }
        CycNum { p: self.p, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// `self · ζ^k`.
    pub fn mul_root(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = k as usize % p;
        if k == 0 {
            return self.clone();
        }
        let cyc = self.to_cyclic();
        let mut rotated = vec![Rational::zero(); p];
        for (j, c) in cyc.into_iter().enumerate() {
            rotated[(j + k) % p] = c;
        }
        Self::from_cyclic(self.p, &rotated)
    }

    /// Complex conjugation, the field automorphism `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        CycNum { p: self.p, coeffs }
    }

    /// `|a|^2 = a · conj(a)`, exact and fixed by conjugation.
    pub fn abs_sq(&self) -> Self {
        self * &self.conj()
    }

    /// Multiplicative inverse of a nonzero element, via the norm map.
    ///
    /// `a^{-1} = (Π_{σ ≠ id} σ(a)) / N(a)` where σ ranges over the Galois
    /// automorphisms `ζ ↦ ζ^k`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.p, &q.recip()));
        }
        let mut others = Self::one(self.p);
        for k in 2..self.p {
            others = &others * &self.galois(k);
        }
        let norm = (&others * self).as_rational().expect("norm of a cyclotomic element is rational");
        Ok(others.scale(&norm.recip()))
    }

    /// The automorphism `ζ ↦ ζ^k` for `k` coprime to `p`.
    pub fn galois(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = k as usize % p;
        assert!(k != 0, "galois exponent must be a unit mod p");
        let mut cyc = vec![Rational::zero(); p];
        for (j, c) in self.coeffs.iter().enumerate() {
            cyc[((j + 1) * k) % p] = c.clone();
        }
        Self::from_cyclic(self.p, &cyc)
    }

    /// Numerical embedding under `ζ ↦ e^{2πi/p}`.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * PI * (j + 1) as f64 / p;
            let v = c.to_f64();
            acc += Complex64::new(v * Float::cos(theta), v * Float::sin(theta));
        }
        acc
    }

    /// Upper bound on `|to_complex(a) - a|`.
    ///
    /// Each term carries at most a few ulps of rounding from the rational
    /// conversion, the angle and the trig evaluation; summation adds at most
    /// `p` more. `8 (p + 4) ε Σ|c_j|` dominates both.
    pub fn embedding_error_bound(&self) -> f64 {
        let l1: f64 = self.coeffs.iter().map(|c| c.to_f64().abs()).sum();
        8.0 * (self.p as f64 + 4.0) * f64::EPSILON * l1.max(1.0)
    }
}

/// `Σ_{t ∈ Z_p} ζ^{t^2}` for an odd prime `p`.
pub fn gauss_sum(p: u64) -> Result<CycNum> {
    let p = ensure_prime(p)?;
    if p == 2 {
        return Err(Error::Domain("the quadratic Gauss sum needs an odd prime".into()));
    }
    let mut counts = vec![0i64; p as usize];
    for t in 0..p as u64 {
        counts[(t * t % p as u64) as usize] += 1;
    }
    Ok(CycNum::from_exponent_counts(p, &counts))
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    /// Panics on mismatched moduli; see [`CycNum::checked_add`].
    fn add(self, rhs: &'a CycNum) -> CycNum {
        self.checked_add(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &'a CycNum) -> CycNum {
        self.checked_sub(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &'a CycNum) -> CycNum {
        self.checked_mul(rhs).expect("cyclotomic modulus mismatch")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "z^{}", j + 1)?;
            } else {
                write!(f, "({c})z^{}", j + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[p={}]({})", self.p, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, k: i64) -> CycNum {
        CycNum::root_power(p, k).unwrap()
    }

    #[test]
    fn one_is_folded_into_the_power_basis() {
        let one = z(5, 0);
        assert_eq!(one.coeffs(), &vec![Rational::from_integer(-1); 4][..]);
        assert_eq!(one.as_rational(), Some(Rational::one()));
        let z2 = z(5, 2);
        assert_eq!(z2.coeffs()[1], Rational::one());
        assert!(z2.as_rational().is_none());
    }

    #[test]
    fn non_prime_modulus_is_rejected() {
        assert_eq!(CycNum::root_power(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(CycNum::root_power(1, 0), Err(Error::NotPrime(1)));
        assert!(gauss_sum(9).is_err());
        assert!(gauss_sum(2).is_err());
    }

    #[test]
    fn product_of_conjugate_roots_is_one() {
        assert_eq!(&z(3, 1) * &z(3, 2), CycNum::one(3));
        assert_eq!(&z(7, 3) * &z(7, 6), z(7, 2));
    }

    #[test]
    fn geometric_character_sum_vanishes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for k in 0..p as i64 {
                let mut acc = CycNum::zero(p as u32);
                for j in 0..p as i64 {
                    acc = &acc + &z(p, j * k);
                }
                let expected = if k == 0 { p as i64 } else { 0 };
                assert_eq!(acc, CycNum::from_integer(p as u32, expected), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn mismatched_moduli_error() {
        let err = z(5, 1).checked_add(&z(7, 1)).unwrap_err();
        assert_eq!(err, Error::ModulusMismatch { left: 5, right: 7 });
        assert!(z(5, 1).checked_mul(&z(3, 1)).is_err());
    }

    #[test]
    fn gauss_sums_match_hand_expansion() {
        // squares mod 5: 0,1,4,4,1
        let g5 = &(&CycNum::one(5) + &z(5, 1).scale(&2.into())) + &z(5, 4).scale(&2.into());
        assert_eq!(gauss_sum(5).unwrap(), g5);
        // squares mod 3: 0,1,1
        let g3 = &CycNum::one(3) + &z(3, 1).scale(&2.into());
        assert_eq!(gauss_sum(3).unwrap(), g3);
        // (1 + 2ζ + 2ζ⁴)² expanded by hand: 1 + 4ζ + 4ζ⁴ + 4ζ² + 4ζ³ + 8
        // = 9 + 4(ζ+ζ²+ζ³+ζ⁴) = 9 - 4 = 5
        assert_eq!(&g5 * &g5, CycNum::from_integer(5, 5));
    }

    #[test]
    fn gauss_sum_modulus_is_p() {
        for p in [3u64, 5, 7, 11, 13] {
            let g = gauss_sum(p).unwrap();
            assert_eq!(g.abs_sq().as_rational(), Some(Rational::from(p as i64)));
        }
        let g5 = gauss_sum(5).unwrap();
        assert_eq!(g5.conj(), g5);
        // p ≡ 3 (mod 4): G² = -p, so G is not real.
        let g7 = gauss_sum(7).unwrap();
        assert_eq!(&g7 * &g7, CycNum::from_integer(7, -7));
        assert_ne!(g7.conj(), g7);
    }

    #[test]
    fn conjugation_maps_roots_to_inverses() {
        assert_eq!(z(5, 1).conj(), z(5, 4));
        let q = CycNum::from_rational(7, &Rational::new(3, 4).unwrap());
        assert_eq!(q.conj(), q);
        let a = &z(7, 1) + &z(7, 3).scale(&Rational::new(-2, 3).unwrap());
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn unit_abs_sq() {
        for k in 0..7 {
            assert_eq!(z(7, k).abs_sq(), CycNum::one(7));
        }
        assert!(CycNum::zero(7).abs_sq().is_zero());
    }

    #[test]
    fn mul_root_matches_multiplication() {
        let a = &z(5, 1) + &CycNum::from_integer(5, 3);
        for k in 0..5u32 {
            assert_eq!(a.mul_root(k), &a * &z(5, k as i64));
        }
    }

    #[test]
    fn inverse_via_norm() {
        let a = &z(5, 1) + &CycNum::from_integer(5, 2);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, CycNum::one(5));
        let g = gauss_sum(13).unwrap();
        assert_eq!(g.inverse().unwrap(), g.conj().scale(&Rational::new(1, 13).unwrap()));
        assert!(CycNum::zero(5).inverse().is_err());
    }

    #[test]
    fn float_embedding() {
        let one = CycNum::one(5).to_complex();
        assert!((one.re - 1.0).abs() < 1e-12 && one.im.abs() < 1e-12);
        let g = gauss_sum(5).unwrap().to_complex();
        assert!((g.re - 5f64.sqrt()).abs() < 1e-9 && g.im.abs() < 1e-9);
        let g7 = gauss_sum(7).unwrap().to_complex();
        assert!(g7.re.abs() < 1e-9 && (g7.im - 7f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn legendre_symbols() {
        let qr13: Vec<u64> = (1..13).filter(|&a| legendre(a, 13) == 1).collect();
        assert_eq!(qr13, [1, 3, 4, 9, 10, 12]);
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(3, 7), -1);
    }
}
