//! Exhaustive searches over subsets and windows of small groups.
//!
//! Every search space is a range of integers: subsets are bitmasks in
//! canonical point order, windows are base-`|alphabet|` digit strings. A
//! [`Shard`] keeps the integers `n` with `n % count == index`, so shards
//! partition the space and a run over `[start, end)` can be resumed from
//! any integer. Reports from disjoint runs merge associatively and
//! commutatively; findings are kept sorted by their integer key.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::fourier::{dft, Window};
use crate::gabor::{is_orthonormal_basis, GaborSystem, NormMode};
use crate::group::{GroupParams, PointSet};
use crate::pairs::{is_spectral_pair, is_tiling_pair, weighted_spectrum_check, zero_set, WeightFn};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// Largest group handled by the subset enumerations (`2^24` subsets).
pub const MAX_ENUMERATION_BITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    index: u32,
    count: u32,
}

impl Shard {
    pub fn new(index: u32, count: u32) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::Domain(alloc::format!("shard {index}/{count} is invalid")));
        }
        Ok(Shard { index, count })
    }

    pub fn full() -> Self {
        Shard { index: 0, count: 1 }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn contains(&self, n: u128) -> bool {
        n % self.count as u128 == self.index as u128
    }

    /// The first integer `≥ n` owned by this shard.
    pub fn first_at_or_after(&self, n: u128) -> u128 {
        let (c, i) = (self.count as u128, self.index as u128);
        let r = n % c;
        if r <= i {
            n + (i - r)
        } else {
            n + (c - r) + i
        }
    }
}

/// One result item, keyed by the integer that produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum Finding {
    Tile {
        set: PointSet,
        complement: PointSet,
    },
    Spectral {
        set: PointSet,
        spectrum: PointSet,
    },
    /// A set on which the tile and spectral predicates disagree.
    Mismatch {
        set: PointSet,
        tiles: bool,
        spectral: bool,
    },
    /// A weight with one of its spectra containing `0`.
    WeightedSpectrum {
        key: u128,
        weight: WeightFn,
        spectrum: PointSet,
        constant: bool,
    },
    Question1 {
        key: u128,
        window: Window<CycNum>,
        translations: PointSet,
        modulations: PointSet,
        flags: Question1Flags,
    },
}

impl Finding {
    pub fn key(&self) -> u128 {
        match self {
            Finding::Tile { set, .. } | Finding::Spectral { set, .. } | Finding::Mismatch { set, .. } => set.to_mask(),
            Finding::WeightedSpectrum { key, .. } | Finding::Question1 { key, .. } => *key,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub kind: String,
    /// Integers of the shard visited.
    pub visited: u128,
    /// Named counters; all are additive under merge.
    pub counts: BTreeMap<String, u64>,
    pub findings: Vec<Finding>,
    /// True iff the whole assigned range was visited.
    pub complete: bool,
}

impl SearchReport {
    pub fn new(kind: &str) -> Self {
        SearchReport {
            kind: kind.to_string(),
            visited: 0,
            counts: BTreeMap::new(),
            findings: Vec::new(),
            complete: true,
        }
    }

    pub fn bump(&mut self, name: &str) {
        self.add(name, 1);
    }

    pub fn add(&mut self, name: &str, by: u64) {
        *self.counts.entry(name.to_string()).or_insert(0) += by;
    }

    pub fn count(&self, name: &str) -> u64 {
        self.counts.get(name).copied().unwrap_or(0)
    }

    /// Combines reports over disjoint parts of one search space.
    pub fn merge(mut self, other: SearchReport) -> Result<SearchReport> {
        if self.kind != other.kind {
            return Err(Error::Domain(alloc::format!("cannot merge {} with {}", self.kind, other.kind)));
        }
        self.visited += other.visited;
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.findings.extend(other.findings);
        self.findings.sort_by_key(Finding::key);
        self.complete &= other.complete;
        Ok(self)
    }
}

fn subset_space(params: GroupParams) -> Result<u128> {
    let n = params.size();
    if n > MAX_ENUMERATION_BITS {
        return Err(Error::TooLarge { size: 1u128 << n.min(127), cap: 1 << MAX_ENUMERATION_BITS });
    }
    Ok(1u128 << n)
}

fn visit_range(shard: Shard, start: u128, end: u128, mut visit: impl FnMut(u128) -> Result<()>) -> Result<u128> {
    let mut n = shard.first_at_or_after(start);
    let mut visited = 0;
    while n < end {
        visit(n)?;
        visited += 1;
        n += shard.count as u128;
    }
    Ok(visited)
}

// ---------------------------------------------------------------- cliques

/// Lexicographic DFS for sorted `B ∋ 0` with `|B| = size` and all pairwise
/// differences in `allowed`; calls `found` for each, stopping when it
/// returns false.
fn cliques_from_zero(params: GroupParams, allowed: &PointSet, size: usize, mut found: impl FnMut(&[usize]) -> bool) {
    if size == 0 {
        return;
    }
    let candidates: Vec<usize> = allowed.iter().collect();
    let mut chosen = vec![0usize];
    fn rec(
        params: GroupParams,
        allowed: &PointSet,
        candidates: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        size: usize,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return found(chosen);
        }
        let need = size - chosen.len();
        for (ci, &b) in candidates.iter().enumerate().skip(from) {
            if candidates.len() - ci < need {
                break;
            }
            if chosen.iter().all(|&c| allowed.contains_index(params.sub_index(b, c))) {
                chosen.push(b);
                if !rec(params, allowed, candidates, ci + 1, chosen, size, found) {
                    return false;
                }
                chosen.pop();
            }
        }
        true
    }
    // differences are symmetric under negation, so `b - 0 ∈ allowed` is the
    // first condition and is covered by iterating `allowed` itself
    rec(params, allowed, &candidates, 0, &mut chosen, size, &mut found);
}

/// The lexicographically smallest spectrum of `E`, if any.
///
/// A spectrum translates to a spectrum, so the smallest one contains `0`
/// and its other points lie in the zero set of `Σ_{x∈E} ζ^{x·m}`.
pub fn find_spectrum(set: &PointSet) -> Result<Option<PointSet>> {
    if set.is_empty() {
        return Err(Error::Domain("spectra need a nonempty set".into()));
    }
    let params = set.params();
    let zeros = zero_set(set);
    let mut result = None;
    cliques_from_zero(params, &zeros, set.len(), |b| {
        result = Some(PointSet::from_indices(params, b.iter().copied()));
        false
    });
    Ok(result)
}

/// The lexicographically smallest `A` with `(E, A)` a tiling pair, if any.
///
/// Tiling complements translate to tiling complements, so the smallest
/// contains `0`. The DFS adds translations in increasing order and prunes
/// once the smallest uncovered point can no longer be reached.
pub fn find_tiling_complement(set: &PointSet) -> Result<Option<PointSet>> {
    if set.is_empty() {
        return Err(Error::Domain("tiling needs a nonempty set".into()));
    }
    let params = set.params();
    let n = params.size();
    if n % set.len() != 0 {
        return Ok(None);
    }
    let members: Vec<usize> = set.iter().collect();
    let mut covered = vec![false; n];
    for &e in &members {
        covered[e] = true;
    }
    let mut chosen = vec![0usize];
    let target = n / set.len();

    fn packs(params: GroupParams, members: &[usize], covered: &[bool], a: usize) -> bool {
        members.iter().all(|&e| !covered[params.add_index(e, a)])
    }

    fn rec(
        params: GroupParams,
        members: &[usize],
        covered: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        target: usize,
    ) -> bool {
        if chosen.len() == target {
            return true;
        }
        let last = *chosen.last().unwrap();
        let Some(u) = covered.iter().position(|c| !c) else { return false };
        // translations covering u, beyond the last one chosen
        let mut reach: Vec<usize> = members
            .iter()
            .map(|&e| params.sub_index(u, e))
            .filter(|&a| a > last && packs(params, members, covered, a))
            .collect();
        reach.sort_unstable();
        let Some(&max) = reach.last() else { return false };
        for a in last + 1..=max {
            if !packs(params, members, covered, a) {
                continue;
            }
            for &e in members {
                covered[params.add_index(e, a)] = true;
            }
            chosen.push(a);
            if rec(params, members, covered, chosen, target) {
                return true;
            }
            chosen.pop();
            for &e in members {
                covered[params.add_index(e, a)] = false;
            }
        }
        false
    }

    if rec(params, &members, &mut covered, &mut chosen, target) {
        Ok(Some(PointSet::from_indices(params, chosen)))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------- enumerations

pub fn enumerate_tiles_range(params: GroupParams, shard: Shard, start: u128, end: u128) -> Result<SearchReport> {
    let end = end.min(subset_space(params)?);
    let mut report = SearchReport::new("tiles");
    report.visited = visit_range(shard, start, end, |mask| {
        if mask == 0 {
            return Ok(());
        }
        let set = PointSet::from_mask(params, mask);
        if let Some(complement) = find_tiling_complement(&set)? {
            report.bump("tiles");
            report.findings.push(Finding::Tile { set, complement });
        }
        Ok(())
    })?;
    Ok(report)
}

/// All nonempty `E ⊂ Z_p^d` that tile, each with its smallest complement.
pub fn enumerate_tiles(params: GroupParams) -> Result<SearchReport> {
    enumerate_tiles_range(params, Shard::full(), 0, subset_space(params)?)
}

pub fn enumerate_spectral_range(params: GroupParams, shard: Shard, start: u128, end: u128) -> Result<SearchReport> {
    let end = end.min(subset_space(params)?);
    let mut report = SearchReport::new("spectral");
    report.visited = visit_range(shard, start, end, |mask| {
        if mask == 0 {
            return Ok(());
        }
        let set = PointSet::from_mask(params, mask);
        if let Some(spectrum) = find_spectrum(&set)? {
            report.bump("spectral");
            report.findings.push(Finding::Spectral { set, spectrum });
        }
        Ok(())
    })?;
    Ok(report)
}

/// All nonempty spectral `E ⊂ Z_p^d`, each with its smallest spectrum.
pub fn enumerate_spectral(params: GroupParams) -> Result<SearchReport> {
    enumerate_spectral_range(params, Shard::full(), 0, subset_space(params)?)
}

/// Compares two predicates on every nonempty subset in range; mismatches
/// become findings.
pub fn fuglede_range_by(
    params: GroupParams,
    shard: Shard,
    start: u128,
    end: u128,
    mut tiles: impl FnMut(&PointSet) -> Result<bool>,
    mut spectral: impl FnMut(&PointSet) -> Result<bool>,
) -> Result<SearchReport> {
    let end = end.min(subset_space(params)?);
    let mut report = SearchReport::new("fuglede");
    report.visited = visit_range(shard, start, end, |mask| {
        if mask == 0 {
            return Ok(());
        }
        let set = PointSet::from_mask(params, mask);
        let t = tiles(&set)?;
        let s = spectral(&set)?;
        if t {
            report.bump("tiles");
        }
        if s {
            report.bump("spectral");
        }
        if t != s {
            report.bump("mismatches");
            report.findings.push(Finding::Mismatch { set, tiles: t, spectral: s });
        }
        Ok(())
    })?;
    Ok(report)
}

pub fn is_tile(set: &PointSet) -> Result<bool> {
    Ok(find_tiling_complement(set)?.is_some())
}

pub fn is_spectral(set: &PointSet) -> Result<bool> {
    Ok(find_spectrum(set)?.is_some())
}

pub fn fuglede_range(params: GroupParams, shard: Shard, start: u128, end: u128) -> Result<SearchReport> {
    fuglede_range_by(params, shard, start, end, is_tile, is_spectral)
}

fn fuglede_verdict(report: &SearchReport) -> Verdict {
    match report.findings.first() {
        None => Verdict::pass(),
        Some(Finding::Mismatch { set, .. }) => {
            Verdict::fail(Witness::Set { set: set.clone(), reason: "tile and spectral predicates disagree" })
        }
        Some(_) => Verdict::fail(Witness::Note("unexpected finding")),
    }
}

/// Whether tiles and spectral sets coincide, by exhaustive enumeration.
pub fn fuglede_compare(params: GroupParams) -> Result<Verdict> {
    Ok(fuglede_verdict(&fuglede_range(params, Shard::full(), 0, subset_space(params)?)?))
}

/// [`fuglede_compare`] with replaceable predicates (for mutation tests).
pub fn fuglede_compare_by(
    params: GroupParams,
    tiles: impl FnMut(&PointSet) -> Result<bool>,
    spectral: impl FnMut(&PointSet) -> Result<bool>,
) -> Result<Verdict> {
    let report = fuglede_range_by(params, Shard::full(), 0, subset_space(params)?, tiles, spectral)?;
    Ok(fuglede_verdict(&report))
}

// ------------------------------------------------------ weighted spectra

fn digits(mut n: u128, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (n % base as u128) as usize;
        n /= base as u128;
    }
    out
}

fn alphabet_space(base: usize, len: usize) -> Result<u128> {
    let mut total: u128 = 1;
    for _ in 0..len {
        total = total.checked_mul(base as u128).ok_or(Error::TooLarge { size: u128::MAX, cap: usize::MAX })?;
    }
    Ok(total)
}

/// Size of the weight space for [`weighted_spectra_range`].
pub fn weighted_space(params: GroupParams, alphabet: &[Rational]) -> Result<u128> {
    alphabet_space(alphabet.len(), params.size())
}

/// For every weight with values in `alphabet` (digit strings in canonical
/// point order), every spectrum `B ∋ 0` of `L^2(w)`.
///
/// Weighted spectra translate to weighted spectra, so `0 ∈ B` loses
/// nothing. Findings carry the raw weight and whether it is constant on
/// its support.
pub fn weighted_spectra_range(
    params: GroupParams,
    alphabet: &[Rational],
    shard: Shard,
    start: u128,
    end: u128,
) -> Result<SearchReport> {
    if alphabet.is_empty() || alphabet.iter().any(Rational::is_negative) {
        return Err(Error::Domain("weight alphabet must be nonempty and nonnegative".into()));
    }
    let n = params.size();
    let end = end.min(weighted_space(params, alphabet)?);
    let mut report = SearchReport::new("weighted-spectra");
    report.visited = visit_range(shard, start, end, |key| {
        let values: Vec<Rational> = digits(key, alphabet.len(), n).into_iter().map(|d| alphabet[d].clone()).collect();
        let weight = WeightFn::new(params, values)?;
        if weight.support().is_empty() {
            return Ok(());
        }
        report.bump("weights");
        let zeros = PointSet::from_indices(params, (1..n).filter(|&m| weight.character_sum(m).is_zero()));
        let constant = weight.is_constant_on_support();
        let mut spectra = Vec::new();
        cliques_from_zero(params, &zeros, weight.support().len(), |b| {
            spectra.push(PointSet::from_indices(params, b.iter().copied()));
            true
        });
        for spectrum in spectra {
            debug_assert!(weighted_spectrum_check(&weight, &spectrum).map(|v| v.passed).unwrap_or(false));
            report.bump("pairs");
            if !constant {
                report.bump("non_constant_pairs");
            }
            report.findings.push(Finding::WeightedSpectrum { key, weight: weight.clone(), spectrum, constant });
        }
        Ok(())
    })?;
    Ok(report)
}

// --------------------------------------------- product-free window hunt

/// Window-level and system-level properties sought by the hunt. A hit
/// needs all six.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Question1Flags {
    /// `g` is not `f_1(x_1) ⋯ f_d(x_d)`.
    pub non_product: bool,
    /// `g` is not a nonnegative real function.
    pub non_positive: bool,
    /// `|g|` is not constant on its support.
    pub modulus_not_indicator: bool,
    /// `|ĝ|` is not constant on its support.
    pub spectrum_not_indicator: bool,
    /// `|supp g| ≠ |B|`.
    pub support_ne_modulations: bool,
    /// `supp g` does not tile.
    pub support_not_tile: bool,
}

impl Question1Flags {
    pub fn window_level(&self) -> bool {
        self.non_product
            && self.non_positive
            && self.modulus_not_indicator
            && self.spectrum_not_indicator
            && self.support_not_tile
    }

    pub fn all(&self) -> bool {
        self.window_level() && self.support_ne_modulations
    }
}

/// Whether a nonzero window on `Z_p^d` factors as `f_1(x_1) ⋯ f_d(x_d)`:
/// every mode unfolding must have rank one, tested through `2 × 2` minors
/// against a nonzero pivot.
pub fn is_product_window(g: &Window<CycNum>) -> bool {
    let params = g.params();
    let (p, d) = (params.p() as usize, params.d());
    let Some(pivot) = g.support().iter().next() else { return true };
    for mode in 0..d {
        let stride = p.pow(d - 1 - mode);
        // split index i into (row = coordinate `mode`, column = the rest)
        let row = |i: usize| (i / stride) % p;
        let with_row = |i: usize, r: usize| i - row(i) * stride + r * stride;
        let r0 = row(pivot);
        let g0 = g.value(pivot);
        for i in 0..params.size() {
            // M[r][c] M[r0][c0] = M[r][c0] M[r0][c]
            let lhs = g.value(i) * g0;
            let rhs = g.value(with_row(pivot, row(i))) * g.value(with_row(i, r0));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn modulus_constant(g: &Window<CycNum>) -> bool {
    let mut values = g.support().iter().map(|i| g.value(i).abs_sq());
    match values.next() {
        None => true,
        Some(first) => values.all(|v| v == first),
    }
}

fn window_flags(g: &Window<CycNum>) -> Result<Question1Flags> {
    let non_positive = g.values().iter().any(|v| v.as_rational().map_or(true, |q| q.is_negative()));
    Ok(Question1Flags {
        non_product: !is_product_window(g),
        non_positive,
        modulus_not_indicator: !modulus_constant(g),
        spectrum_not_indicator: !modulus_constant(&dft(g)),
        support_ne_modulations: false,
        support_not_tile: !is_tile(g.support())?,
    })
}

/// Size of the window space for [`question1_range`].
pub fn question1_space(params: GroupParams, alphabet: &[CycNum]) -> Result<u128> {
    alphabet_space(alphabet.len(), params.size())
}

/// Orthogonality of atoms sharing a modulation forces `A - A` into the
/// zero set of `a ↦ Σ_x g(x - a) conj(g(x))`; atoms sharing a translation
/// force `B - B` into the zero set of `m ↦ Σ_x |g(x)|^2 ζ^{x·m}`.
fn necessary_differences(g: &Window<CycNum>) -> (PointSet, PointSet) {
    let params = g.params();
    let p = params.p();
    let n = params.size();
    let translation_zeros =
        PointSet::from_indices(params, (1..n).filter(|&a| crate::fourier::convolve_autocorrelation(g, a).is_zero()));
    let power: Vec<CycNum> = g.values().iter().map(CycNum::abs_sq).collect();
    let modulation_zeros = PointSet::from_indices(
        params,
        (1..n).filter(|&m| {
            let terms = g.support().iter().map(|x| (&power[x], params.dot_index(x, m)));
            <CycNum as crate::scalar::Scalar>::twisted_sum(p, terms).is_zero()
        }),
    );
    (translation_zeros, modulation_zeros)
}

/// Hunts for windows with values in `alphabet` generating an orthonormal
/// basis `G(g, A, B)` with all six [`Question1Flags`].
///
/// Windows failing a window-level property are screened out before any
/// system is tried. Translating `A` or modulating by a point of `B` maps a
/// basis to a basis and changes none of the properties, so only `A, B ∋ 0`
/// are searched. Every hit is re-verified with the exact basis check.
pub fn question1_range(
    params: GroupParams,
    alphabet: &[CycNum],
    shard: Shard,
    start: u128,
    end: u128,
) -> Result<SearchReport> {
    if alphabet.is_empty() {
        return Err(Error::Domain("alphabet must be nonempty".into()));
    }
    if let Some(bad) = alphabet.iter().find(|v| v.modulus() != params.p()) {
        return Err(Error::ModulusMismatch { left: params.p(), right: bad.modulus() });
    }
    let n = params.size();
    let end = end.min(question1_space(params, alphabet)?);
    let mut report = SearchReport::new("question1");
    report.visited = visit_range(shard, start, end, |key| {
        let values: Vec<CycNum> = digits(key, alphabet.len(), n).into_iter().map(|d| alphabet[d].clone()).collect();
        let g = Window::new(params, values)?;
        if g.support().is_empty() {
            return Ok(());
        }
        report.bump("windows");
        let flags = window_flags(&g)?;
        for (name, on) in [
            ("non_product", flags.non_product),
            ("non_positive", flags.non_positive),
            ("modulus_not_indicator", flags.modulus_not_indicator),
            ("spectrum_not_indicator", flags.spectrum_not_indicator),
            ("support_not_tile", flags.support_not_tile),
        ] {
            if on {
                report.bump(name);
            }
        }
        if !flags.window_level() {
            return Ok(());
        }
        report.bump("screened");
        let support = g.support().len();
        let (tz, mz) = necessary_differences(&g);
        for a_size in (1..=n).filter(|k| n % k == 0) {
            let b_size = n / a_size;
            if b_size == support {
                continue;
            }
            let mut a_sets = Vec::new();
            cliques_from_zero(params, &tz, a_size, |a| {
                a_sets.push(PointSet::from_indices(params, a.iter().copied()));
                true
            });
            let mut b_sets = Vec::new();
            cliques_from_zero(params, &mz, b_size, |b| {
                b_sets.push(PointSet::from_indices(params, b.iter().copied()));
                true
            });
            for a in &a_sets {
                for b in &b_sets {
                    report.bump("systems");
                    let sys = GaborSystem::new(g.clone(), a.clone(), b.clone())?;
                    if is_orthonormal_basis(&sys, NormMode::ScaleFree)?.passed {
                        report.bump("bases");
                        let flags = Question1Flags { support_ne_modulations: true, ..flags };
                        report.bump("hits");
                        report.findings.push(Finding::Question1 {
                            key,
                            window: g.clone(),
                            translations: a.clone(),
                            modulations: b.clone(),
                            flags,
                        });
                    }
                }
            }
        }
        Ok(())
    })?;
    Ok(report)
}

/// Parses `0`, `-3/2`, `z2`, `-z1`, `2z3` into an element of `Q(ζ_p)`.
pub fn parse_token(p: u32, token: &str) -> Result<CycNum> {
    let t = token.trim();
    if let Some(pos) = t.find('z') {
        let (coef, exp) = (&t[..pos], &t[pos + 1..]);
        let k: i64 = exp.parse().map_err(|_| Error::Parse(alloc::format!("bad root exponent in {t:?}")))?;
        let c = match coef {
            "" | "+" => Rational::one(),
            "-" => Rational::from_integer(-1),
            s => s.parse::<Rational>()?,
        };
        Ok(CycNum::root_power(p as u64, k)?.scale(&c))
    } else {
        Ok(CycNum::from_rational(p, &t.parse::<Rational>()?))
    }
}

// -------------------------------------------------------------- jobs

/// What a [`SearchJob`] enumerates.
#[derive(Clone, Debug, PartialEq)]
pub enum JobKind {
    AllTiles,
    AllSpectral,
    FugledeCompare,
    FindSpectrum(PointSet),
    FindTiling(PointSet),
    WeightedSpectra { alphabet: Vec<Rational> },
    Question1 { alphabet: Vec<CycNum> },
}

impl JobKind {
    pub fn name(&self) -> &'static str {
        match self {
            JobKind::AllTiles => "tiles",
            JobKind::AllSpectral => "spectral",
            JobKind::FugledeCompare => "fuglede",
            JobKind::FindSpectrum(_) => "find-spectrum",
            JobKind::FindTiling(_) => "find-tiling",
            JobKind::WeightedSpectra { .. } => "weighted-spectra",
            JobKind::Question1 { .. } => "question1",
        }
    }
}

/// Limits on a run. Node budgets count visited integers; time budgets are
/// enforced by the caller between ranges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u128>,
    pub max_millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchJob {
    pub params: GroupParams,
    pub kind: JobKind,
    pub budget: Budget,
    pub shard: Shard,
}

impl SearchJob {
    pub fn new(params: GroupParams, kind: JobKind) -> Self {
        SearchJob { params, kind, budget: Budget::default(), shard: Shard::full() }
    }

    /// The integer range `[0, space)` this job walks.
    pub fn space(&self) -> Result<u128> {
        match &self.kind {
            JobKind::AllTiles | JobKind::AllSpectral | JobKind::FugledeCompare => subset_space(self.params),
            JobKind::FindSpectrum(_) | JobKind::FindTiling(_) => Ok(1),
            JobKind::WeightedSpectra { alphabet } => weighted_space(self.params, alphabet),
            JobKind::Question1 { alphabet } => question1_space(self.params, alphabet),
        }
    }

    /// Runs the shard's part of `[start, end)`.
    pub fn run_range(&self, start: u128, end: u128) -> Result<SearchReport> {
        let (params, shard) = (self.params, self.shard);
        match &self.kind {
            JobKind::AllTiles => enumerate_tiles_range(params, shard, start, end),
            JobKind::AllSpectral => enumerate_spectral_range(params, shard, start, end),
            JobKind::FugledeCompare => fuglede_range(params, shard, start, end),
            JobKind::FindSpectrum(set) => self.single(start, end, || {
                Ok(find_spectrum(set)?.map(|spectrum| Finding::Spectral { set: set.clone(), spectrum }))
            }),
            JobKind::FindTiling(set) => self.single(start, end, || {
                Ok(find_tiling_complement(set)?.map(|complement| Finding::Tile { set: set.clone(), complement }))
            }),
            JobKind::WeightedSpectra { alphabet } => weighted_spectra_range(params, alphabet, shard, start, end),
            JobKind::Question1 { alphabet } => question1_range(params, alphabet, shard, start, end),
        }
    }

    fn single(&self, start: u128, end: u128, f: impl FnOnce() -> Result<Option<Finding>>) -> Result<SearchReport> {
        let mut report = SearchReport::new(self.kind.name());
        if start == 0 && end > 0 && self.shard.contains(0) {
            report.visited = 1;
            if let Some(found) = f()? {
                report.bump("found");
                report.findings.push(found);
            }
        }
        Ok(report)
    }

    /// Runs the whole shard, honoring the node budget; `complete` is false
    /// when the budget cut the run short.
    pub fn run(&self) -> Result<SearchReport> {
        let space = self.space()?;
        let end = match self.budget.max_nodes {
            Some(nodes) => {
                let last =
                    self.shard.first_at_or_after(0).saturating_add(nodes.saturating_mul(self.shard.count as u128));
                last.min(space)
            }
            None => space,
        };
        let mut report = self.run_range(0, end)?;
        report.complete = end >= space;
        Ok(report)
    }
}

/// Re-checks a tile or spectral finding from scratch.
pub fn reverify(finding: &Finding) -> Result<bool> {
    Ok(match finding {
        Finding::Tile { set, complement } => is_tiling_pair(set, complement)?.passed,
        Finding::Spectral { set, spectrum } => is_spectral_pair(set, spectrum)?.passed,
        Finding::Mismatch { set, tiles, spectral } => is_tile(set)? == *tiles && is_spectral(set)? == *spectral,
        Finding::WeightedSpectrum { weight, spectrum, .. } => weighted_spectrum_check(weight, spectrum)?.passed,
        Finding::Question1 { window, translations, modulations, .. } => {
            let sys = GaborSystem::new(window.clone(), translations.clone(), modulations.clone())?;
            is_orthonormal_basis(&sys, NormMode::ScaleFree)?.passed
        }
    })
}
