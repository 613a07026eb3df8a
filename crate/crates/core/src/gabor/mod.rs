//! Gabor systems `G(g, A, B) = {g(x - a) χ(x · b)}` and their exact
//! orthonormal-basis decision.
//!
//! The window's normalization `‖g‖ = 1` usually involves square roots
//! (`p^{-d/2}`, `|E|^{-1/2}`) that are not in `Q(ζ_p)`. The basis test is
//! therefore scale-free by default: pairwise orthogonality, all atoms of
//! the same norm (automatic for translates and modulates of one window),
//! and `|A||B| = p^d`. The exact norm is recorded in the certificate.

mod theorems;
mod windows;

pub use theorems::{indicator_equivalence_check, theorem15_check, theorem16_check, theorem17_check};
pub use windows::{
    gauss_spectrum, make_flat_window, make_gauss_window, make_indicator_window, make_parabola_dual_window,
    make_product_window, make_qr_row_window, make_sign_flip_window, ParabolaDual,
};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fourier::{dft, Window};
use crate::group::{GroupParams, PointSet};
use crate::scalar::Scalar;
use crate::verdict::{Atom, Certificate, Verdict, Witness};

/// How the window's norm enters the basis decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMode {
    /// Require `‖g‖^2 = 1`.
    Normalized,
    /// Accept any nonzero norm; decide orthogonality and completeness.
    ScaleFree,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaborSystem<S> {
    window: Window<S>,
    translations: PointSet,
    modulations: PointSet,
}

impl<S: Scalar> GaborSystem<S> {
    pub fn new(window: Window<S>, translations: PointSet, modulations: PointSet) -> Result<Self> {
        let params = window.params();
        if translations.params() != params || modulations.params() != params {
            return Err(Error::ParamsMismatch);
        }
        Ok(GaborSystem { window, translations, modulations })
    }

    pub fn window(&self) -> &Window<S> {
        &self.window
    }

    pub fn translations(&self) -> &PointSet {
        &self.translations
    }

    pub fn modulations(&self) -> &PointSet {
        &self.modulations
    }

    pub fn params(&self) -> GroupParams {
        self.window.params()
    }

    /// Atoms `(a, b) ∈ A × B` in canonical order.
    pub fn atoms(&self) -> Vec<Atom> {
        let params = self.params();
        let mut out = Vec::with_capacity(self.translations.len() * self.modulations.len());
        for a in self.translations.iter() {
            for b in self.modulations.iter() {
                out.push(Atom { a: params.point(a), b: params.point(b) });
            }
        }
        out
    }

    /// The atom `x ↦ g(x - a) χ(x · b)` as a window.
    pub fn atom_window(&self, atom: &Atom) -> Window<S> {
        let params = self.params();
        self.window.translate(params.index(&atom.a)).modulate(params.index(&atom.b))
    }
}

/// `⟨t1, t2⟩ = Σ_x g(x - a) conj(g(x - a')) χ(x · (b - b'))`.
pub fn gabor_inner<S: Scalar>(g: &Window<S>, t1: &Atom, t2: &Atom) -> Result<S> {
    let params = g.params();
    for x in [&t1.a, &t1.b, &t2.a, &t2.b] {
        if !params.owns(x) {
            return Err(Error::ParamsMismatch);
        }
    }
    let (a, a2) = (params.index(&t1.a), params.index(&t2.a));
    let delta = params.sub_index(params.index(&t1.b), params.index(&t2.b));
    let products = overlap_products(g, &conj_values(g), a, a2);
    Ok(twisted(params, &products, delta))
}

fn conj_values<S: Scalar>(g: &Window<S>) -> Vec<S> {
    g.values().iter().map(S::conj).collect()
}

type Products<S> = Vec<(usize, S)>;

/// `(x, g(x - a) conj(g(x - a')))` over `x ∈ (E + a) ∩ (E + a')`.
fn overlap_products<S: Scalar>(g: &Window<S>, conj: &[S], a: usize, a2: usize) -> Products<S> {
    let params = g.params();
    let support = g.support();
    let mut out = Vec::new();
    for e in support.iter() {
        let x = params.add_index(e, a);
        let e2 = params.sub_index(x, a2);
        if support.contains_index(e2) {
            out.push((x, g.value(e).mul(&conj[e2])));
        }
    }
    out
}

fn twisted<S: Scalar>(params: GroupParams, products: &[(usize, S)], delta: usize) -> S {
    S::twisted_sum(params.p(), products.iter().map(|(x, v)| (v, params.dot_index(*x, delta))))
}

/// The full Gram matrix `[⟨t_i, t_j⟩]` over atoms in canonical order.
pub fn gram_matrix<S: Scalar>(sys: &GaborSystem<S>) -> Vec<Vec<S>> {
    let params = sys.params();
    let g = sys.window();
    let conj = conj_values(g);
    let tr: Vec<usize> = sys.translations.iter().collect();
    let md: Vec<usize> = sys.modulations.iter().collect();
    let atoms: Vec<(usize, usize)> = tr.iter().flat_map(|&a| md.iter().map(move |&b| (a, b))).collect();
    let mut products: Vec<Vec<Option<Products<S>>>> = vec![vec![None; tr.len()]; tr.len()];
    let pos = |a: usize| tr.iter().position(|&t| t == a).unwrap();
    atoms
        .iter()
        .map(|&(a, b)| {
            atoms
                .iter()
                .map(|&(a2, b2)| {
                    let (i, j) = (pos(a), pos(a2));
                    let prods = products[i][j].get_or_insert_with(|| overlap_products(g, &conj, a, a2));
                    twisted(params, prods, params.sub_index(b, b2))
                })
                .collect()
        })
        .collect()
}

/// Scans atom pairs `t1 < t2` in canonical order and returns the first
/// pair with a nonzero inner product.
///
/// The inner product depends on `(a, a', b - b')` only, so products over
/// each translation pair are built once and each difference is summed once.
fn first_nonorthogonal<S: Scalar>(sys: &GaborSystem<S>, norm: &S) -> Option<(Atom, Atom, S)> {
    let params = sys.params();
    let g = sys.window();
    let conj = conj_values(g);
    let tr: Vec<usize> = sys.translations.iter().collect();
    let md: Vec<usize> = sys.modulations.iter().collect();
    let n = params.size();
    for (i, &a) in tr.iter().enumerate() {
        let mut products: Vec<Option<Products<S>>> = vec![None; tr.len() - i];
        // 0 = unknown, 1 = vanishes, 2 = nonzero
        let mut memo: Vec<Vec<u8>> = vec![Vec::new(); tr.len() - i];
        for (bi, &b) in md.iter().enumerate() {
            for (j, &a2) in tr.iter().enumerate().skip(i) {
                let slot = j - i;
                let start = if j == i { bi + 1 } else { 0 };
                for &b2 in &md[start..] {
                    let delta = params.sub_index(b, b2);
                    if memo[slot].is_empty() {
                        memo[slot] = vec![0; n];
                    }
                    if memo[slot][delta] == 0 {
                        let prods = products[slot].get_or_insert_with(|| overlap_products(g, &conj, a, a2));
                        let value = twisted(params, prods, delta);
                        memo[slot][delta] = if value.negligible_against(norm) { 1 } else { 2 };
                    }
                    if memo[slot][delta] == 2 {
                        let prods = products[slot].get_or_insert_with(|| overlap_products(g, &conj, a, a2));
                        let value = twisted(params, prods, delta);
                        return Some((
                            Atom { a: params.point(a), b: params.point(b) },
                            Atom { a: params.point(a2), b: params.point(b2) },
                            value,
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Whether `G(g, A, B)` is an orthonormal basis of `L^2(Z_p^d)`.
///
/// Passes iff all distinct atoms are orthogonal and `|A||B| = p^d`; a
/// failure names the first offending atom pair (or the cardinality). In
/// [`NormMode::Normalized`] a window with `‖g‖^2 ≠ 1` is a precondition
/// error.
pub fn is_orthonormal_basis<S: Scalar>(sys: &GaborSystem<S>, mode: NormMode) -> Result<Verdict> {
    let params = sys.params();
    let p = params.p();
    let norm = sys.window.norm_sq();
    if mode == NormMode::Normalized && !norm.same(&S::one(p)) {
        return Err(Error::Precondition("window must have unit norm outside scale-free mode".into()));
    }
    if norm.negligible_against(&S::one(p)) {
        return Ok(Verdict::fail(Witness::Note("zero window")));
    }
    let count = sys.translations.len() * sys.modulations.len();
    if count != params.size() {
        return Ok(Verdict::fail(Witness::Cardinality { what: "|A||B| = p^d", expected: params.size(), found: count }));
    }
    Ok(match first_nonorthogonal(sys, &norm) {
        None => Verdict::pass().with_certificate(Certificate::NormSquared(norm.to_value())),
        Some((first, second, inner)) => Verdict::fail(Witness::AtomPair { first, second, inner: inner.to_value() }),
    })
}

/// `G(ĝ, B, -A)`.
pub fn fourier_dual<S: Scalar>(sys: &GaborSystem<S>) -> GaborSystem<S> {
    GaborSystem {
        window: dft(&sys.window),
        translations: sys.modulations.clone(),
        modulations: sys.translations.negate(),
    }
}

/// Decides the system and its Fourier dual independently; `equivalence`
/// records whether the two verdicts agree.
pub fn duality_check<S: Scalar>(sys: &GaborSystem<S>) -> Result<Verdict> {
    let original = is_orthonormal_basis(sys, NormMode::ScaleFree)?;
    let dual = is_orthonormal_basis(&fourier_dual(sys), NormMode::ScaleFree)?;
    let equivalence = Verdict::from_bool(original.passed == dual.passed, || Witness::Note("system and dual disagree"));
    Ok(Verdict::all(vec![("original".into(), original), ("dual".into(), dual), ("equivalence".into(), equivalence)]))
}
