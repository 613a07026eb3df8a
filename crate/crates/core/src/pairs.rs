//! Spectral pairs, tiling pairs, packings and weighted spectra.
//!
//! Character sums of indicator functions are evaluated from residue counts:
//! `Σ_{x∈E} ζ^{x·m} = Σ_k #{x ∈ E : x·m ≡ k} ζ^k`, which is an exact
//! [`CycNum`] built without any multiplication.
//!
//! Completeness of `{χ_b}_{b∈B}` in `L^2(w)` is decided by counting: the
//! characters are unimodular, hence nonzero in `L^2(w)`, and
//! `dim L^2(w) = |supp w|`, so pairwise orthogonal characters form a basis
//! exactly when `|B| = |supp w|`. Completeness is understood in `L^2(w)`,
//! i.e. for functions up to `w`-null sets.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::fourier::{dft, Window};
use crate::group::{GroupParams, PointSet};
use crate::rational::Rational;
use crate::scalar::Value;
use crate::verdict::{Certificate, Verdict, Witness};

/// `Σ_{x∈E} ζ^{x·m}`.
pub fn indicator_character_sum(set: &PointSet, m: usize) -> CycNum {
    let params = set.params();
    let p = params.p();
    let mut counts = vec![0i64; p as usize];
    for x in set.iter() {
        counts[params.dot_index(x, m) as usize] += 1;
    }
    CycNum::from_exponent_counts(p, &counts)
}

/// The frequencies `m ≠ 0` at which `Σ_{x∈E} ζ^{x·m}` vanishes.
pub fn zero_set(set: &PointSet) -> PointSet {
    let params = set.params();
    PointSet::from_indices(params, (1..params.size()).filter(|&m| indicator_character_sum(set, m).is_zero()))
}

fn check_same(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.params() != b.params() {
        return Err(Error::ParamsMismatch);
    }
    Ok(())
}

/// Scans `b < b'` in canonical order and reports the first pair whose
/// difference fails `vanishes`, memoizing per difference.
fn pairwise_differences(
    params: GroupParams,
    set: &PointSet,
    mut vanishes: impl FnMut(usize) -> bool,
) -> Option<(usize, usize)> {
    let members: Vec<usize> = set.iter().collect();
    let mut memo: BTreeMap<usize, bool> = BTreeMap::new();
    for (i, &b) in members.iter().enumerate() {
        for &b2 in &members[i + 1..] {
            let delta = params.sub_index(b, b2);
            let ok = *memo.entry(delta).or_insert_with(|| vanishes(delta));
            if !ok {
                return Some((b, b2));
            }
        }
    }
    None
}

/// `(E, B)` is a spectral pair: `|B| = |E|` and
/// `Σ_{x∈E} ζ^{x·(b-b')} = 0` for all `b ≠ b'` in `B`.
pub fn is_spectral_pair(set: &PointSet, spectrum: &PointSet) -> Result<Verdict> {
    check_same(set, spectrum)?;
    if set.is_empty() {
        return Err(Error::Domain("spectral pairs need a nonempty set".into()));
    }
    let params = set.params();
    if spectrum.len() != set.len() {
        return Ok(Verdict::fail(Witness::Cardinality {
            what: "|B| = |E|",
            expected: set.len(),
            found: spectrum.len(),
        }));
    }
    let bad = pairwise_differences(params, spectrum, |delta| indicator_character_sum(set, delta).is_zero());
    Ok(match bad {
        None => Verdict::pass().with_certificate(Certificate::Set(spectrum.clone())),
        Some((b, b2)) => Verdict::fail(Witness::ModulationPair { first: params.point(b), second: params.point(b2) }),
    })
}

/// `Σ_{a∈A} 1_E(x - a)` for every `x`.
pub fn cover_counts(set: &PointSet, translations: &PointSet) -> Vec<u32> {
    let params = set.params();
    let mut counts = vec![0u32; params.size()];
    for a in translations.iter() {
        for e in set.iter() {
            counts[params.add_index(e, a)] += 1;
        }
    }
    counts
}

/// `(E, A)` is a tiling pair: every point is covered exactly once.
pub fn is_tiling_pair(set: &PointSet, translations: &PointSet) -> Result<Verdict> {
    check_same(set, translations)?;
    let params = set.params();
    let counts = cover_counts(set, translations);
    Ok(match counts.iter().position(|&c| c != 1) {
        None => Verdict::pass().with_certificate(Certificate::CoverCounts(counts)),
        Some(x) => Verdict::fail(Witness::Coverage { point: params.point(x), count: counts[x] as usize }),
    })
}

/// `E` packs with `A`: no point is covered twice.
pub fn is_packing(set: &PointSet, translations: &PointSet) -> Result<Verdict> {
    check_same(set, translations)?;
    let params = set.params();
    let counts = cover_counts(set, translations);
    Ok(match counts.iter().position(|&c| c > 1) {
        None => Verdict::pass().with_certificate(Certificate::CoverCounts(counts)),
        Some(x) => Verdict::fail(Witness::Coverage { point: params.point(x), count: counts[x] as usize }),
    })
}

/// A nonnegative rational weight on `Z_p^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFn {
    params: GroupParams,
    values: Vec<Rational>,
    support: PointSet,
    mass: Rational,
}

impl WeightFn {
    pub fn new(params: GroupParams, values: Vec<Rational>) -> Result<Self> {
        if values.len() != params.size() {
            return Err(Error::Domain(alloc::format!(
                "weight over {params} needs {} values, got {}",
                params.size(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(Rational::is_negative) {
            return Err(Error::Domain(alloc::format!(
                "weights must be nonnegative; value at {} is {}",
                params.point(i),
                values[i]
            )));
        }
        let support =
            PointSet::from_indices(params, values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i));
        let mass = values.iter().fold(Rational::zero(), |acc, v| &acc + v);
        Ok(WeightFn { params, values, support, mass })
    }

    /// Reads a window whose values are all nonnegative rationals.
    pub fn from_window(window: &Window<CycNum>) -> Result<Self> {
        let values = window
            .values()
            .iter()
            .map(|v| v.as_rational().ok_or_else(|| Error::Domain("weights must be rational".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(window.params(), values)
    }

    /// `c · 1_E`.
    pub fn uniform(set: &PointSet, c: &Rational) -> Result<Self> {
        let params = set.params();
        Self::new(
            params,
            (0..params.size()).map(|i| if set.contains_index(i) { c.clone() } else { Rational::zero() }).collect(),
        )
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn support(&self) -> &PointSet {
        &self.support
    }

    /// `Σ_x w(x)`.
    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    /// `w / Σ w`.
    pub fn normalized(&self) -> Result<Self> {
        if self.mass.is_zero() {
            return Err(Error::Domain("cannot normalize the zero weight".into()));
        }
        let inv = self.mass.recip();
        Self::new(self.params, self.values.iter().map(|v| v * &inv).collect())
    }

    /// Whether `w` is constant on its support.
    pub fn is_constant_on_support(&self) -> bool {
        let mut vals = self.support.iter().map(|i| &self.values[i]);
        match vals.next() {
            None => true,
            Some(first) => vals.all(|v| v == first),
        }
    }

    pub fn to_window(&self) -> Window<CycNum> {
        Window::from_rationals(self.params, &self.values).expect("length matches")
    }

    /// `Σ_x ζ^{x·m} w(x)`.
    pub fn character_sum(&self, m: usize) -> CycNum {
        let p = self.params.p();
        let mut buckets = vec![Rational::zero(); p as usize];
        for x in self.support.iter() {
            let k = self.params.dot_index(x, m) as usize;
            buckets[k] = &buckets[k] + &self.values[x];
        }
        CycNum::from_cyclic(p, &buckets)
    }
}

/// `B` is a spectrum for `L^2(w)`: pairwise orthogonality
/// `Σ_x ζ^{x·(b-b')} w(x) = 0` and `|B| = |supp w|`.
pub fn weighted_spectrum_check(weight: &WeightFn, spectrum: &PointSet) -> Result<Verdict> {
    if weight.params() != spectrum.params() {
        return Err(Error::ParamsMismatch);
    }
    if weight.support().is_empty() {
        return Err(Error::Domain("weight must have nonempty support".into()));
    }
    let params = weight.params();
    let orthogonality = match pairwise_differences(params, spectrum, |delta| weight.character_sum(delta).is_zero()) {
        None => Verdict::pass(),
        Some((b, b2)) => Verdict::fail(Witness::ModulationPair { first: params.point(b), second: params.point(b2) }),
    };
    let complete = Verdict::from_bool(spectrum.len() == weight.support().len(), || Witness::Cardinality {
        what: "|B| = |supp w|",
        expected: weight.support().len(),
        found: spectrum.len(),
    });
    Ok(Verdict::all(vec![("orthogonality".into(), orthogonality), ("completeness".into(), complete)]))
}

/// Checks `Σ_{b∈B} |ŵ(x - b)|^2 = p^{-2d}` at one point `x`.
///
/// Requires `Σ w = 1` and that `B` is a spectrum for `L^2(w)`; violations
/// of either come back as [`Error::Precondition`].
pub fn square_sum_identity(weight: &WeightFn, spectrum: &PointSet, x: usize) -> Result<Verdict> {
    let checker = SquareSum::new(weight, spectrum)?;
    Ok(checker.at(x))
}

/// Checks the square-sum identity at every point of the group.
pub fn square_sum_identity_everywhere(weight: &WeightFn, spectrum: &PointSet) -> Result<Verdict> {
    let checker = SquareSum::new(weight, spectrum)?;
    let params = weight.params();
    for x in 0..params.size() {
        let v = checker.at(x);
        if !v.passed {
            return Ok(v);
        }
    }
    Ok(Verdict::pass().with_certificate(Certificate::Value(Value::Exact(checker.target.clone()))))
}

struct SquareSum<'a> {
    spectrum: &'a PointSet,
    abs_sq: Vec<CycNum>,
    target: CycNum,
}

impl<'a> SquareSum<'a> {
    fn new(weight: &WeightFn, spectrum: &'a PointSet) -> Result<Self> {
        if !weight.mass().is_one() {
            return Err(Error::Precondition(alloc::format!(
                "weight must have total mass 1 (normalize first), got {}",
                weight.mass()
            )));
        }
        let spec = weighted_spectrum_check(weight, spectrum)?;
        if !spec.passed {
            return Err(Error::Precondition("B is not a spectrum for L^2(w)".into()));
        }
        let params = weight.params();
        let p = params.p();
        let hat = dft(&weight.to_window());
        let abs_sq = hat.values().iter().map(CycNum::abs_sq).collect();
        let n = Rational::from_integer(params.size() as i64);
        let target = CycNum::from_rational(p, &(&n * &n).recip());
        Ok(SquareSum { spectrum, abs_sq, target })
    }

    fn at(&self, x: usize) -> Verdict {
        let params = self.spectrum.params();
        let p = params.p();
        let total = self.spectrum.iter().fold(CycNum::zero(p), |acc, b| &acc + &self.abs_sq[params.sub_index(x, b)]);
        if total == self.target {
            Verdict::pass().with_certificate(Certificate::Value(Value::Exact(total)))
        } else {
            Verdict::fail(Witness::Point { point: params.point(x), reason: "square sum differs from p^(-2d)" })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parabola, subgroup_and_complement};

    fn z(p: u64, d: u32) -> GroupParams {
        GroupParams::new(p, d).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn full_group_is_spectral_with_itself() {
        for (p, d) in [(2, 2), (3, 1), (5, 2)] {
            let full = PointSet::full(z(p, d));
            assert!(is_spectral_pair(&full, &full).unwrap().passed);
        }
    }

    #[test]
    fn two_point_set_in_z2_squared() {
        let g = z(2, 2);
        // (0,0),(1,0) have indices 0 and 2.
        let e = PointSet::from_indices(g, [0, 2]);
        assert!(is_spectral_pair(&e, &e).unwrap().passed);
    }

    #[test]
    fn parabola_is_not_spectral_with_vertical_line() {
        let g = z(5, 2);
        let f = parabola(g).unwrap();
        let (horizontal, vertical) = subgroup_and_complement(g, 1).unwrap();
        // Σ_t ζ^{t² δ} is a Gauss sum, never zero.
        let v = is_spectral_pair(&f, &vertical).unwrap();
        assert!(!v.passed);
        assert!(matches!(v.witness, Some(Witness::ModulationPair { .. })));
        // Σ_t ζ^{t δ} vanishes for δ ≠ 0.
        assert!(is_spectral_pair(&f, &horizontal).unwrap().passed);
    }

    #[test]
    fn spectral_pair_rejects_empty_and_mismatched() {
        let g = z(3, 1);
        assert!(is_spectral_pair(&PointSet::empty(g), &PointSet::full(g)).is_err());
        let other = PointSet::full(z(5, 1));
        assert_eq!(is_spectral_pair(&PointSet::full(g), &other), Err(Error::ParamsMismatch));
        let v = is_spectral_pair(&PointSet::full(g), &PointSet::singleton(g, 0)).unwrap();
        assert!(matches!(v.witness, Some(Witness::Cardinality { .. })));
    }

    #[test]
    fn tiling_examples() {
        for p in [3u64, 5, 7] {
            let g = z(p, 2);
            let (horizontal, vertical) = subgroup_and_complement(g, 1).unwrap();
            assert!(is_tiling_pair(&horizontal, &vertical).unwrap().passed);
            assert!(is_tiling_pair(&parabola(g).unwrap(), &vertical).unwrap().passed);
        }
        let g = z(3, 1);
        let e = PointSet::from_indices(g, [0, 1]);
        let v = is_tiling_pair(&e, &e).unwrap();
        assert_eq!(v.witness, Some(Witness::Coverage { point: g.point(1), count: 2 }));
        assert!(!is_packing(&e, &e).unwrap().passed);
    }

    #[test]
    fn packing_examples() {
        let g = z(5, 2);
        let (horizontal, vertical) = subgroup_and_complement(g, 1).unwrap();
        assert!(is_packing(&horizontal, &vertical).unwrap().passed);
        let e = PointSet::from_indices(g, [0, 3, 17, 24]);
        assert!(is_packing(&e, &PointSet::singleton(g, 0)).unwrap().passed);
    }

    #[test]
    fn tiling_is_symmetric_on_small_cases() {
        let g = z(2, 2);
        for e in 0u128..16 {
            for a in 0u128..16 {
                let e = PointSet::from_mask(g, e);
                let a = PointSet::from_mask(g, a);
                assert_eq!(is_tiling_pair(&e, &a).unwrap().passed, is_tiling_pair(&a, &e).unwrap().passed);
            }
        }
    }

    #[test]
    fn weighted_spectrum_reduces_to_spectral_pairs() {
        let g = z(3, 2);
        let f = parabola(g).unwrap();
        let (horizontal, _) = subgroup_and_complement(g, 1).unwrap();
        let w = WeightFn::uniform(&f, &r(1, 3)).unwrap();
        assert!(weighted_spectrum_check(&w, &horizontal).unwrap().passed);
    }

    #[test]
    fn positive_weight_needs_full_spectrum() {
        let g = z(3, 1);
        let w = WeightFn::new(g, alloc::vec![r(1, 2), r(1, 3), r(1, 6)]).unwrap();
        let v = weighted_spectrum_check(&w, &PointSet::full(g)).unwrap();
        // non-constant weight: orthogonality fails somewhere
        assert!(!v.passed);
        let flat = WeightFn::uniform(&PointSet::full(g), &r(1, 3)).unwrap();
        assert!(weighted_spectrum_check(&flat, &PointSet::full(g)).unwrap().passed);
        let partial = weighted_spectrum_check(&flat, &PointSet::from_indices(g, [0, 1])).unwrap();
        assert_eq!(partial.part_passed("orthogonality"), Some(true));
        assert_eq!(partial.part_passed("completeness"), Some(false));
    }

    #[test]
    fn negative_weights_are_rejected() {
        assert!(WeightFn::new(z(2, 1), alloc::vec![r(1, 1), r(-1, 2)]).is_err());
    }

    #[test]
    fn square_sum_on_full_group() {
        let g = z(5, 1);
        let w = WeightFn::uniform(&PointSet::full(g), &r(1, 5)).unwrap();
        for x in 0..5 {
            let v = square_sum_identity(&w, &PointSet::full(g), x).unwrap();
            assert!(v.passed);
            assert_eq!(v.certificate, Some(Certificate::Value(Value::Exact(CycNum::from_rational(5, &r(1, 25))))));
        }
    }

    #[test]
    fn square_sum_on_parabola() {
        let g = z(3, 2);
        let f = parabola(g).unwrap();
        let (horizontal, _) = subgroup_and_complement(g, 1).unwrap();
        let w = WeightFn::uniform(&f, &r(1, 3)).unwrap();
        let v = square_sum_identity_everywhere(&w, &horizontal).unwrap();
        assert!(v.passed);
        assert_eq!(v.certificate, Some(Certificate::Value(Value::Exact(CycNum::from_rational(3, &r(1, 81))))));
    }

    #[test]
    fn square_sum_preconditions() {
        let g = z(3, 1);
        let unnormalized = WeightFn::uniform(&PointSet::full(g), &r(1, 1)).unwrap();
        assert!(matches!(square_sum_identity(&unnormalized, &PointSet::full(g), 0), Err(Error::Precondition(_))));
        let w = WeightFn::uniform(&PointSet::full(g), &r(1, 3)).unwrap();
        assert!(matches!(square_sum_identity(&w, &PointSet::singleton(g, 0), 0), Err(Error::Precondition(_))));
    }
}
