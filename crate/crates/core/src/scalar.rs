//! The scalar interface shared by the exact and floating-point backends.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Debug;

use num_complex::Complex64;
use num_traits::Float;

use crate::cyclotomic::CycNum;
use crate::rational::Rational;

/// Absolute tolerance of the float backend, applied after scaling by the
/// reference magnitude of the quantity being tested.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// A scalar value produced by either backend, for reports.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(CycNum),
    Float(Complex64),
}

/// Field operations over `Q(ζ_p)` (exact) or its complex embedding (float).
///
/// All constructors take the prime `p` explicitly because the float backend
/// does not carry it.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero(p: u32) -> Self;
    fn one(p: u32) -> Self;
    /// `ζ^k`.
    fn root(p: u32, k: u32) -> Self;
    fn from_rational(p: u32, q: &Rational) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    /// `self · ζ^k`.
    fn mul_root(&self, p: u32, k: u32) -> Self;

    fn is_zero(&self) -> bool;
    /// Zero test relative to the size of `reference` (exact backends ignore
    /// the reference).
    fn negligible_against(&self, reference: &Self) -> bool;
    /// Equality up to the backend's notion of equality.
    fn same(&self, other: &Self) -> bool {
        self.sub(other).negligible_against(other)
    }

    fn to_complex(&self) -> Complex64;
    fn to_value(&self) -> Value;

    /// The real rational value, if the scalar is known to be one exactly.
    fn as_rational(&self) -> Option<Rational>;

    /// `Σ_i v_i ζ^{k_i}`.
    fn twisted_sum<'a, I>(p: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, u32)>,
        Self: 'a,
    {
        let mut acc = Self::zero(p);
        for (v, k) in terms {
            acc = acc.add(&v.mul_root(p, k));
        }
        acc
    }

    fn abs_sq(&self) -> Self {
        self.mul(&self.conj())
    }
}

impl Scalar for CycNum {
    const BACKEND: Backend = Backend::Exact;

    fn zero(p: u32) -> Self {
        CycNum::zero(p)
    }
    fn one(p: u32) -> Self {
        CycNum::one(p)
    }
    fn root(p: u32, k: u32) -> Self {
        CycNum::root(p, k)
    }
    fn from_rational(p: u32, q: &Rational) -> Self {
        CycNum::from_rational(p, q)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        CycNum::conj(self)
    }
    fn scale(&self, q: &Rational) -> Self {
        CycNum::scale(self, q)
    }
    fn mul_root(&self, _p: u32, k: u32) -> Self {
        CycNum::mul_root(self, k)
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
    fn negligible_against(&self, _reference: &Self) -> bool {
        CycNum::is_zero(self)
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
    fn to_complex(&self) -> Complex64 {
        CycNum::to_complex(self)
    }
    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }
    fn as_rational(&self) -> Option<Rational> {
        CycNum::as_rational(self)
    }

    fn twisted_sum<'a, I>(p: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, u32)>,
    {
        // Accumulate every rotated term into one cyclic vector and
        // canonicalize once at the end.
        let pu = p as usize;
        let mut acc = vec![Rational::zero(); pu];
        for (v, k) in terms {
            let k = k as usize % pu;
            if let Some(q) = v.as_rational() {
                acc[k] = &acc[k] + &q;
                continue;
            }
            for (j, c) in v.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let slot = (j + 1 + k) % pu;
                acc[slot] = &acc[slot] + c;
            }
        }
        CycNum::from_cyclic(p, &acc)
    }
}

fn unit_root(p: u32, k: u32) -> Complex64 {
    let theta = 2.0 * PI * (k % p) as f64 / p as f64;
    Complex64::new(Float::cos(theta), Float::sin(theta))
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero(_p: u32) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one(_p: u32) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn root(p: u32, k: u32) -> Self {
        unit_root(p, k)
    }
    fn from_rational(_p: u32, q: &Rational) -> Self {
        Complex64::new(q.to_f64(), 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q.to_f64()
    }
    fn mul_root(&self, p: u32, k: u32) -> Self {
        self * unit_root(p, k)
    }
    fn is_zero(&self) -> bool {
        self.norm() <= FLOAT_TOLERANCE
    }
    fn negligible_against(&self, reference: &Self) -> bool {
        self.norm() <= FLOAT_TOLERANCE * reference.norm().max(1.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_value(&self) -> Value {
        Value::Float(*self)
    }
    fn as_rational(&self) -> Option<Rational> {
        None
    }

    fn twisted_sum<'a, I>(p: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, u32)>,
    {
        let table: Vec<Complex64> = (0..p).map(|k| unit_root(p, k)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, k) in terms {
            acc += v * table[(k % p) as usize];
        }
        acc
    }
}
