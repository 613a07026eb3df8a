//! Windows on `Z_p^d` and the discrete Fourier transform.
//!
//! The forward transform carries the factor `p^{-d}`:
//! `ĝ(m) = p^{-d} Σ_x ζ^{-x·m} g(x)`, and the inverse carries none:
//! `g(x) = Σ_m ĝ(m) ζ^{x·m}`. With this pair Plancherel reads
//! `Σ_m |ĝ(m)|^2 = p^{-d} Σ_x |g(x)|^2`.
//!
//! Transforms are direct `O(p^{2d})` sums; each output entry is one
//! [`Scalar::twisted_sum`] over the support of the input.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::group::{GroupParams, PointSet};
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::verdict::{Certificate, Verdict, Witness};

/// A function `Z_p^d → Q(ζ_p)` (or `C` for the float backend), stored in
/// canonical point order together with its support.
#[derive(Clone, Debug, PartialEq)]
pub struct Window<S> {
    params: GroupParams,
    values: Vec<S>,
    support: PointSet,
}

impl<S: Scalar> Window<S> {
    pub fn new(params: GroupParams, values: Vec<S>) -> Result<Self> {
        if values.len() != params.size() {
            return Err(Error::Domain(alloc::format!(
                "window over {params} needs {} values, got {}",
                params.size(),
                values.len()
            )));
        }
        let support =
            PointSet::from_indices(params, values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i));
        Ok(Window { params, values, support })
    }

    pub fn from_fn(params: GroupParams, f: impl FnMut(usize) -> S) -> Self {
        let values = (0..params.size()).map(f).collect();
        Self::new(params, values).expect("length matches by construction")
    }

    pub fn zeros(params: GroupParams) -> Self {
        Self::from_fn(params, |_| S::zero(params.p()))
    }

    /// `1_E`.
    pub fn indicator(set: &PointSet) -> Self {
        let params = set.params();
        let p = params.p();
        Self::from_fn(params, |i| if set.contains_index(i) { S::one(p) } else { S::zero(p) })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &S {
        &self.values[index]
    }

    pub fn support(&self) -> &PointSet {
        &self.support
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// `Σ_x |g(x)|^2`.
    pub fn norm_sq(&self) -> S {
        let p = self.params.p();
        self.support.iter().fold(S::zero(p), |acc, i| acc.add(&self.values[i].abs_sq()))
    }

    /// `x ↦ g(x - a)`.
    pub fn translate(&self, a: usize) -> Self {
        let params = self.params;
        Self::from_fn(params, |x| self.values[params.sub_index(x, a)].clone())
    }

    /// `x ↦ g(x) ζ^{x·b}`.
    pub fn modulate(&self, b: usize) -> Self {
        let params = self.params;
        Self::from_fn(params, |x| self.values[x].mul_root(params.p(), params.dot_index(x, b)))
    }

    /// `x ↦ g(-x)`.
    pub fn reflect(&self) -> Self {
        let params = self.params;
        Self::from_fn(params, |x| self.values[params.neg_index(x)].clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self::from_fn(self.params, |i| f(&self.values[i]))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map(|v| v.scale(q))
    }

    pub fn mul_scalar(&self, c: &S) -> Self {
        self.map(|v| v.mul(c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        Ok(())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_fn(self.params, |i| self.values[i].sub(&other.values[i])))
    }

    /// Pointwise equality up to the backend's tolerance.
    pub fn same(&self, other: &Self) -> bool {
        self.params == other.params && self.values.iter().zip(&other.values).all(|(a, b)| a.same(b))
    }
}

impl Window<CycNum> {
    pub fn from_rationals(params: GroupParams, values: &[Rational]) -> Result<Self> {
        let p = params.p();
        Self::new(params, values.iter().map(|q| CycNum::from_rational(p, q)).collect())
    }

    /// The float shadow under `ζ ↦ e^{2πi/p}`.
    pub fn to_float(&self) -> Window<Complex64> {
        Window::from_fn(self.params, |i| self.values[i].to_complex())
    }
}

fn inv_group_order(params: GroupParams) -> Rational {
    Rational::from_integer(params.size() as i64).recip()
}

/// `ĝ(m) = p^{-d} Σ_x ζ^{-x·m} g(x)`.
pub fn dft<S: Scalar>(g: &Window<S>) -> Window<S> {
    let params = g.params();
    let p = params.p();
    let support: Vec<usize> = g.support().iter().collect();
    let scale = inv_group_order(params);
    Window::from_fn(params, |m| {
        let terms = support.iter().map(|&x| (g.value(x), (p - params.dot_index(x, m)) % p));
        S::twisted_sum(p, terms).scale(&scale)
    })
}

/// `g(x) = Σ_m G(m) ζ^{x·m}`.
pub fn idft<S: Scalar>(spectrum: &Window<S>) -> Window<S> {
    let params = spectrum.params();
    let p = params.p();
    let support: Vec<usize> = spectrum.support().iter().collect();
    Window::from_fn(params, |x| {
        let terms = support.iter().map(|&m| (spectrum.value(m), params.dot_index(x, m)));
        S::twisted_sum(p, terms)
    })
}

/// Checks `Σ_m |ĝ(m)|^2 = p^{-d} Σ_x |g(x)|^2`; the certificate carries
/// the common value.
pub fn plancherel_check<S: Scalar>(g: &Window<S>) -> Verdict {
    let params = g.params();
    let lhs = dft(g).norm_sq();
    let rhs = g.norm_sq().scale(&inv_group_order(params));
    if lhs.same(&rhs) {
        Verdict::pass().with_certificate(Certificate::Value(lhs.to_value()))
    } else {
        Verdict::fail(Witness::Note("plancherel sides differ"))
    }
}

/// `Σ_x g(x - a) conj(g(x))`.
pub fn convolve_autocorrelation<S: Scalar>(g: &Window<S>, a: usize) -> S {
    let params = g.params();
    let p = params.p();
    g.support().iter().fold(S::zero(p), |acc, x| {
        let shifted = g.value(params.sub_index(x, a));
        acc.add(&shifted.mul(&g.value(x).conj()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{gauss_sum, legendre};
    use crate::group::parabola;

    fn z(p: u64, d: u32) -> GroupParams {
        GroupParams::new(p, d).unwrap()
    }

    #[test]
    fn delta_transforms_to_constant() {
        let g = z(5, 1);
        let delta: Window<CycNum> = Window::indicator(&PointSet::singleton(g, 0));
        let expected = CycNum::from_rational(5, &Rational::new(1, 5).unwrap());
        assert!(dft(&delta).values().iter().all(|v| *v == expected));
        assert_eq!(idft(&delta), Window::indicator(&PointSet::full(g)));
    }

    #[test]
    fn constant_transforms_to_delta() {
        let g = z(3, 2);
        let one: Window<CycNum> = Window::indicator(&PointSet::full(g));
        assert_eq!(dft(&one), Window::indicator(&PointSet::singleton(g, 0)));
    }

    #[test]
    fn parabola_spectrum_support_has_p2_minus_p_plus_1_points() {
        for (p, expected) in [(3u64, 7usize), (5, 21), (7, 43)] {
            let f: Window<CycNum> = Window::indicator(&parabola(z(p, 2)).unwrap());
            assert_eq!(dft(&f).support().len(), expected, "p = {p}");
        }
    }

    #[test]
    fn gauss_spectrum_inverts_to_residue_pattern() {
        // Spectrum: 1 at m = 0, G⁻¹ Σ_t ζ^{-m t²} elsewhere (G real for p = 13).
        let p = 13u32;
        let params = z(13, 1);
        let g = gauss_sum(13).unwrap();
        let g_inv = g.inverse().unwrap();
        let spectrum = Window::from_fn(params, |m| {
            if m == 0 {
                CycNum::one(p)
            } else {
                let mut counts = alloc::vec![0i64; 13];
                for t in 0..13usize {
                    counts[(13 - (m * t * t) % 13) % 13] += 1;
                }
                &CycNum::from_exponent_counts(p, &counts) * &g_inv
            }
        });
        let f = idft(&spectrum);
        let one = CycNum::one(p);
        for x in 0..13u64 {
            let expected = match legendre(x, p) {
                0 => one.clone(),
                1 => &one + &g,
                _ => &one - &g,
            };
            assert_eq!(f.value(x as usize), &expected, "x = {x}");
        }
    }

    #[test]
    fn plancherel_examples() {
        let g = z(5, 2);
        let mut vals = alloc::vec![CycNum::zero(5); 25];
        vals[7] = &CycNum::root(5, 2) + &CycNum::from_integer(5, 3);
        let single = Window::new(g, vals).unwrap();
        assert!(plancherel_check(&single).passed);
        let one: Window<CycNum> = Window::indicator(&PointSet::full(g));
        let v = plancherel_check(&one);
        assert_eq!(v.certificate, Some(Certificate::Value(CycNum::one(5).to_value())));
    }

    #[test]
    fn autocorrelation() {
        let g = z(7, 1);
        let e = PointSet::from_indices(g, [0, 1]);
        let w: Window<CycNum> = Window::indicator(&e);
        assert_eq!(convolve_autocorrelation(&w, 0), w.norm_sq());
        assert!(convolve_autocorrelation(&w, 3).is_zero());
        assert_eq!(convolve_autocorrelation(&w, 1), CycNum::one(7));
    }

    #[test]
    fn window_length_is_checked() {
        assert!(Window::<CycNum>::new(z(3, 1), alloc::vec![CycNum::zero(3); 2]).is_err());
    }
}
