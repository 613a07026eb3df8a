//! Instance checkers relating Gabor bases to spectral and tiling pairs.
//!
//! Each checker decides the basis property and the structural conclusions
//! independently and reports them as separate parts, plus an
//! `equivalence` part recording whether the two sides agree. A checker
//! passes only when every part passes, so a non-basis input fails the
//! checker while its `equivalence` part may still hold.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::fourier::{dft, Window};
use crate::group::{is_graph, subgroup_and_complement, GroupParams, PointSet};
use crate::pairs::{is_spectral_pair, is_tiling_pair};
use crate::verdict::{Verdict, Witness};

use super::{is_orthonormal_basis, GaborSystem, NormMode};

fn agreement(lhs: bool, rhs: bool) -> Verdict {
    Verdict::from_bool(lhs == rhs, || Witness::Note("basis verdict and structural verdict disagree"))
}

fn conclusions(parts: &[(String, Verdict)]) -> bool {
    parts.iter().all(|(_, v)| v.passed)
}

/// `1_E` generates an orthonormal basis `G(1_E, A, B)` iff `(E, B)` is
/// spectral and `(E, A)` tiles.
///
/// Parts: `basis`, `spectral`, `tiling`, `equivalence`.
pub fn indicator_equivalence_check(set: &PointSet, translations: &PointSet, modulations: &PointSet) -> Result<Verdict> {
    if set.is_empty() {
        return Err(Error::Domain("indicator window needs a nonempty set".into()));
    }
    let sys = GaborSystem::new(Window::<CycNum>::indicator(set), translations.clone(), modulations.clone())?;
    let basis = is_orthonormal_basis(&sys, NormMode::ScaleFree)?;
    let structural = vec![
        ("spectral".into(), is_spectral_pair(set, modulations)?),
        ("tiling".into(), is_tiling_pair(set, translations)?),
    ];
    let equivalence = agreement(basis.passed, conclusions(&structural));
    let mut parts = vec![("basis".into(), basis)];
    parts.extend(structural);
    parts.push(("equivalence".into(), equivalence));
    Ok(Verdict::all(parts))
}

/// `|g|^2` is constant on `supp g`.
fn modulus_constant(g: &Window<CycNum>) -> Verdict {
    let params = g.params();
    let mut values = g.support().iter().map(|i| (i, g.value(i).abs_sq()));
    let Some((_, first)) = values.next() else {
        return Verdict::fail(Witness::Note("zero window"));
    };
    match values.find(|(_, v)| *v != first) {
        None => Verdict::pass(),
        Some((i, _)) => Verdict::fail(Witness::Point {
            point: params.point(i),
            reason: "|g|^2 differs from its value at the first support point",
        }),
    }
}

fn graph_part(set: &PointSet, translations: &PointSet, modulations: &PointSet) -> Result<Option<Verdict>> {
    let params = set.params();
    let n = params.size();
    let in_range = |k: usize| 1 < k && k < n;
    if params.d() == 2 && in_range(translations.len()) && in_range(modulations.len()) {
        Ok(Some(is_graph(set)?))
    } else {
        Ok(None)
    }
}

/// For a window with `|supp g| = |B|`: `G(g, A, B)` is an orthonormal
/// basis iff `|g|` is constant on `E = supp g`, `(E, B)` is spectral and
/// `(E, A)` tiles. In `d = 2` with `1 < |A|, |B| < p^2` a `graph` part
/// checks that `E` is the graph of a function.
///
/// Parts: `basis`, `modulus_constant`, `spectral`, `tiling`, `graph`
/// (when applicable), `equivalence`. The graph claim is a consequence of
/// the basis property only, so it is evaluated only when the basis passes.
pub fn theorem15_check(g: &Window<CycNum>, translations: &PointSet, modulations: &PointSet) -> Result<Verdict> {
    let support = g.support().clone();
    if support.len() != modulations.len() {
        return Err(Error::Precondition(alloc::format!(
            "needs |supp g| = |B|, got {} and {}",
            support.len(),
            modulations.len()
        )));
    }
    let sys = GaborSystem::new(g.clone(), translations.clone(), modulations.clone())?;
    let basis = is_orthonormal_basis(&sys, NormMode::ScaleFree)?;
    let structural: Vec<(String, Verdict)> = vec![
        ("modulus_constant".into(), modulus_constant(g)),
        ("spectral".into(), is_spectral_pair(&support, modulations)?),
        ("tiling".into(), is_tiling_pair(&support, translations)?),
    ];
    let equivalence = agreement(basis.passed, conclusions(&structural));
    let graph = if basis.passed { graph_part(&support, translations, modulations)? } else { None };
    let mut parts = vec![("basis".into(), basis)];
    parts.extend(structural);
    if let Some(v) = graph {
        parts.push(("graph".into(), v));
    }
    parts.push(("equivalence".into(), equivalence));
    Ok(Verdict::all(parts))
}

/// For a nonnegative rational window: `G(g, A, B)` is an orthonormal basis
/// iff `g` is constant on `E = supp g`, `(E, B)` is spectral and `(E, A)`
/// tiles.
///
/// Parts: `basis`, `constant`, `spectral`, `tiling`, `equivalence`.
pub fn theorem16_check(g: &Window<CycNum>, translations: &PointSet, modulations: &PointSet) -> Result<Verdict> {
    let params = g.params();
    let mut values = Vec::with_capacity(params.size());
    for (i, v) in g.values().iter().enumerate() {
        match v.as_rational() {
            Some(q) if !q.is_negative() => values.push(q),
            Some(_) => return Err(Error::Domain(alloc::format!("window is negative at {}", params.point(i)))),
            None => return Err(Error::Domain(alloc::format!("window is not real at {}", params.point(i)))),
        }
    }
    let support = g.support().clone();
    let sys = GaborSystem::new(g.clone(), translations.clone(), modulations.clone())?;
    let basis = is_orthonormal_basis(&sys, NormMode::ScaleFree)?;
    let first = support.iter().next().map(|i| values[i].clone());
    let constant = match (&first, support.iter().find(|&i| Some(&values[i]) != first.as_ref())) {
        (None, _) => Verdict::fail(Witness::Note("zero window")),
        (Some(_), None) => Verdict::pass(),
        (Some(_), Some(i)) => Verdict::fail(Witness::Point {
            point: params.point(i),
            reason: "g differs from its value at the first support point",
        }),
    };
    let structural: Vec<(String, Verdict)> = vec![
        ("constant".into(), constant),
        ("spectral".into(), is_spectral_pair(&support, modulations)?),
        ("tiling".into(), is_tiling_pair(&support, translations)?),
    ];
    let equivalence = agreement(basis.passed, conclusions(&structural));
    let mut parts = vec![("basis".into(), basis)];
    parts.extend(structural);
    parts.push(("equivalence".into(), equivalence));
    Ok(Verdict::all(parts))
}

/// Splits `x = (x1, x2)` with `x1 ∈ Z_p^k`, `x2 ∈ Z_p^{d-k}` and checks,
/// for `A = Z_p^k × {0}` and `B = {0} × Z_p^{d-k}`:
///
/// * (a) for each `x2`, `|Σ_{x1} g(x1, x2) χ(-x1 · m)|` is constant in `m`
///   (the constant may depend on `x2`);
/// * (b) `Σ_{x1} |g(x1, x2)|^2` is constant in `x2`;
///
/// and compares `(a) ∧ (b)` with the basis property of `G(g, A, B)`.
///
/// Parts: `a`, `b`, `basis`, `equivalence`.
pub fn theorem17_check(g: &Window<CycNum>, k: u32) -> Result<Verdict> {
    let params = g.params();
    let (translations, modulations) = subgroup_and_complement(params, k)?;
    let p = params.p();
    let tail = (p as usize).pow(params.d() - k);
    let head = params.size() / tail;
    let slice_params = GroupParams::with_cap(p as u64, k, usize::MAX)?;
    let tail_params = GroupParams::with_cap(p as u64, params.d() - k, usize::MAX)?;

    let mut cond_a = Verdict::pass();
    for x2 in 0..tail {
        let slice = Window::from_fn(slice_params, |x1| g.value(x1 * tail + x2).clone());
        let spectrum = dft(&slice);
        let first = spectrum.value(0).abs_sq();
        if let Some(m) = (1..head).find(|&m| spectrum.value(m).abs_sq() != first) {
            cond_a = Verdict::fail(Witness::Slice {
                slice: tail_params.point(x2).coords().to_vec(),
                frequency: slice_params.point(m).coords().to_vec(),
                reason: "|slice transform| not constant in m",
            });
            break;
        }
    }

    let row_mass = |x2: usize| (0..head).fold(CycNum::zero(p), |acc, x1| &acc + &g.value(x1 * tail + x2).abs_sq());
    let mass0 = row_mass(0);
    let cond_b = match (1..tail).find(|&x2| row_mass(x2) != mass0) {
        None => Verdict::pass(),
        Some(x2) => Verdict::fail(Witness::Slice {
            slice: tail_params.point(x2).coords().to_vec(),
            frequency: Vec::new(),
            reason: "slice mass differs from the mass at x2 = 0",
        }),
    };

    let sys = GaborSystem::new(g.clone(), translations, modulations)?;
    let basis = is_orthonormal_basis(&sys, NormMode::ScaleFree)?;
    let equivalence = agreement(basis.passed, cond_a.passed && cond_b.passed);
    Ok(Verdict::all(vec![
        ("a".into(), cond_a),
        ("b".into(), cond_b),
        ("basis".into(), basis),
        ("equivalence".into(), equivalence),
    ]))
}
