//! Named window constructors.
//!
//! All windows are exact. Where the natural normalization involves `√p`,
//! the constructor picks a global scale that keeps every value in
//! `Q(ζ_p)`; no basis verdict depends on a global scale.

use alloc::format;
use alloc::vec;

use crate::cyclotomic::{gauss_sum, legendre, CycNum};
use crate::error::{Error, Result};
use crate::fourier::{dft, idft, Window};
use crate::group::{parabola, GroupParams, PointSet, MAX_DIM};
use crate::rational::Rational;
use crate::search::{find_spectrum, find_tiling_complement};

use super::{is_orthonormal_basis, GaborSystem, NormMode};

fn odd_prime(p: u64) -> Result<u32> {
    let p = crate::cyclotomic::ensure_prime(p)?;
    if p == 2 {
        return Err(Error::Domain("requires an odd prime".into()));
    }
    Ok(p)
}

/// `1_E`.
pub fn make_indicator_window(set: &PointSet) -> Window<CycNum> {
    Window::indicator(set)
}

/// The quadratic spectrum on `Z_p`: `F(0) = G`, `F(m) = Σ_t ζ^{-m t^2}`
/// for `m ≠ 0`, where `G = Σ_t ζ^{t^2}`. Every entry has `|F(m)|^2 = p`.
pub fn gauss_spectrum(p: u64) -> Result<Window<CycNum>> {
    let p = odd_prime(p)?;
    let params = GroupParams::new(p as u64, 1)?;
    let g = gauss_sum(p as u64)?;
    Ok(Window::from_fn(params, |m| {
        if m == 0 {
            return g.clone();
        }
        let mut counts = vec![0i64; p as usize];
        for t in 0..p as usize {
            let e = (m * t % p as usize) * t % p as usize;
            counts[(p as usize - e) % p as usize] += 1;
        }
        CycNum::from_exponent_counts(p, &counts)
    }))
}

/// The inverse transform of [`gauss_spectrum`], scaled by `conj(G)/p` so
/// that `f̂(0) = 1`.
///
/// The result is `f(0) = 1` and `f(x) = 1 + (x/p) conj(G)` otherwise, with
/// `(x/p)` the Legendre symbol; for `p ≡ 1 (mod 4)`, `conj(G) = G = √p`.
pub fn make_gauss_window(p: u64) -> Result<Window<CycNum>> {
    let spectrum = gauss_spectrum(p)?;
    let p = spectrum.params().p();
    let scale = gauss_sum(p as u64)?.conj().scale(&Rational::new(1, p as i64)?);
    Ok(idft(&spectrum).mul_scalar(&scale))
}

/// `f = idft(F)` with `F(0) = -1` and `F(m) = 1` for `m ≠ 0`; this gives
/// `f(0) = p - 2` and `f(x) = -2` for `x ≠ 0`.
pub fn make_flat_window(p: u64) -> Result<Window<CycNum>> {
    let p = crate::cyclotomic::ensure_prime(p)?;
    let params = GroupParams::new(p as u64, 1)?;
    let spectrum = Window::from_fn(params, |m| CycNum::from_integer(p, if m == 0 { -1 } else { 1 }));
    Ok(idft(&spectrum))
}

/// `h = 1` except `h(p - 1) = -1`: unimodular, with a transform of
/// non-constant modulus for `p ≥ 3`.
pub fn make_sign_flip_window(p: u64) -> Result<Window<CycNum>> {
    let p = crate::cyclotomic::ensure_prime(p)?;
    let params = GroupParams::new(p as u64, 1)?;
    let last = p as usize - 1;
    Ok(Window::from_fn(params, |x| CycNum::from_integer(p, if x == last { -1 } else { 1 })))
}

/// `g(x1, x2) = f(x1) h(x2)`.
pub fn make_product_window(f: &Window<CycNum>, h: &Window<CycNum>) -> Result<Window<CycNum>> {
    let (pf, ph) = (f.params(), h.params());
    if pf.p() != ph.p() {
        return Err(Error::ModulusMismatch { left: pf.p(), right: ph.p() });
    }
    let d = pf.d() + ph.d();
    if d as usize > MAX_DIM {
        return Err(Error::Domain(format!("product dimension {d} exceeds {MAX_DIM}")));
    }
    let params = GroupParams::new(pf.p() as u64, d)?;
    let inner = ph.size();
    Ok(Window::from_fn(params, |i| f.value(i / inner) * h.value(i % inner)))
}

/// On `Z_p^2`: `g(k, r) = 1` if `k = 0`, `1 + √p` if `k` is a nonzero
/// square mod `p`, `1 - √p` otherwise. `√p` is the Gauss sum, which is
/// real only for `p ≡ 1 (mod 4)`; other primes are rejected.
pub fn make_qr_row_window(p: u64) -> Result<Window<CycNum>> {
    let p = odd_prime(p)?;
    if p % 4 != 1 {
        return Err(Error::Domain(format!(
            "qr-row window requires p ≡ 1 (mod 4) so that the Gauss sum is the real √p; got p = {p}"
        )));
    }
    let params = GroupParams::new(p as u64, 2)?;
    let root = gauss_sum(p as u64)?;
    let one = CycNum::one(p);
    let (plus, minus) = (&one + &root, &one - &root);
    Ok(Window::from_fn(params, |i| match legendre((i / p as usize) as u64, p) {
        0 => one.clone(),
        1 => plus.clone(),
        _ => minus.clone(),
    }))
}

/// The Fourier-dual system built from the parabola `F = {(t, t^2)}`.
#[derive(Clone, Debug)]
pub struct ParabolaDual {
    /// `p^2 · dft(1_F)`, i.e. `m ↦ Σ_{x∈F} ζ^{-x·m}`.
    pub window: Window<CycNum>,
    /// `B`, the spectrum of `F`.
    pub translations: PointSet,
    /// `-A`, with `A` the tiling complement of `F`.
    pub modulations: PointSet,
    pub parabola: PointSet,
    pub tiling: PointSet,
    pub spectrum: PointSet,
}

/// Finds the lexicographically smallest tiling complement `A` and spectrum
/// `B` of the parabola and returns the dual system `(ĝ, B, -A)` of
/// `g = 1_F`. The dual is re-verified to be an orthonormal basis with
/// `|supp ĝ| = p^2 - p + 1`.
pub fn make_parabola_dual_window(p: u64) -> Result<ParabolaDual> {
    let p = odd_prime(p)?;
    let params = GroupParams::new(p as u64, 2)?;
    let f = parabola(params)?;
    let tiling =
        find_tiling_complement(&f)?.ok_or_else(|| Error::Domain("parabola has no tiling complement".into()))?;
    let spectrum = find_spectrum(&f)?.ok_or_else(|| Error::Domain("parabola has no spectrum".into()))?;
    let size = Rational::from_integer(params.size() as i64);
    let window = dft(&Window::<CycNum>::indicator(&f)).scale(&size);
    let sys = GaborSystem::new(window.clone(), spectrum.clone(), tiling.negate())?;
    let expected = (p * p - p + 1) as usize;
    if window.support().len() != expected || !is_orthonormal_basis(&sys, NormMode::ScaleFree)?.passed {
        return Err(Error::Domain("parabola dual system failed verification".into()));
    }
    Ok(ParabolaDual {
        window,
        translations: spectrum.clone(),
        modulations: tiling.negate(),
        parabola: f,
        tiling,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_window_closed_form() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = make_gauss_window(p).unwrap();
            let p32 = p as u32;
            let gc = gauss_sum(p).unwrap().conj();
            let one = CycNum::one(p32);
            for x in 0..p {
                let expected = match legendre(x, p32) {
                    0 => one.clone(),
                    1 => &one + &gc,
                    _ => &one - &gc,
                };
                assert_eq!(f.value(x as usize), &expected, "p = {p}, x = {x}");
            }
            let spec = dft(&f);
            assert_eq!(spec.value(0), &CycNum::one(spec.params().p()));
            let m0 = spec.value(0).abs_sq();
            assert!(spec.values().iter().all(|v| v.abs_sq() == m0), "p = {p}");
        }
    }

    #[test]
    fn flat_window_values() {
        let f = make_flat_window(5).unwrap();
        let v: alloc::vec::Vec<_> = f.values().iter().map(|v| v.as_rational().unwrap()).collect();
        assert_eq!(v[0], Rational::from_integer(3));
        assert!(v[1..].iter().all(|q| *q == Rational::from_integer(-2)));
        assert!(dft(&f).values().iter().all(|v| v.abs_sq() == CycNum::one(5)));
    }

    #[test]
    fn qr_row_window_rejects_p_3_mod_4() {
        assert!(matches!(make_qr_row_window(7), Err(Error::Domain(_))));
        assert!(make_qr_row_window(2).is_err());
        let g = make_qr_row_window(13).unwrap();
        let spec = dft(&g);
        let p = 13usize;
        assert_eq!(spec.value(0), &CycNum::one(spec.params().p()));
        for m in 0..p * p {
            if m % p != 0 {
                assert!(spec.value(m).is_zero());
            }
        }
    }

    #[test]
    fn product_window_support_and_mismatch() {
        let f = make_gauss_window(5).unwrap();
        let h = make_sign_flip_window(5).unwrap();
        let g = make_product_window(&f, &h).unwrap();
        assert_eq!(g.support().len(), 25);
        assert!(make_product_window(&f, &make_sign_flip_window(3).unwrap()).is_err());
    }

    #[test]
    fn parabola_dual_small() {
        let d = make_parabola_dual_window(3).unwrap();
        assert_eq!(d.window.support().len(), 7);
        assert_eq!(d.tiling.indices(), [0, 1, 2]);
        assert_eq!(d.spectrum.indices(), [0, 3, 6]);
        assert!(make_parabola_dual_window(2).is_err());
    }
}
