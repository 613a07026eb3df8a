//! The ambient group `Z_p^d`: points, dense point sets and characters.
//!
//! Points are numbered in lexicographic order of their coordinates, so the
//! point `(c_1, …, c_d)` has index `c_1 p^{d-1} + … + c_d`. Every bitset,
//! witness and serialized list uses this order.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::cyclotomic::{ensure_prime, CycNum};
use crate::error::{Error, Result};
use crate::verdict::{Verdict, Witness};

pub const MAX_DIM: usize = 4;
/// Default bound on `p^d`, keeping `O(p^{2d})` Gram computations small.
pub const DEFAULT_CAP: usize = 30_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupParams {
    p: u32,
    d: u32,
    size: usize,
}

impl GroupParams {
    pub fn new(p: u64, d: u32) -> Result<Self> {
        Self::with_cap(p, d, DEFAULT_CAP)
    }

    /// Like [`GroupParams::new`] with an explicit bound on `p^d`.
    pub fn with_cap(p: u64, d: u32, cap: usize) -> Result<Self> {
        let p = ensure_prime(p)?;
        if d == 0 || d as usize > MAX_DIM {
            return Err(Error::Domain(alloc::format!("dimension must be in 1..={MAX_DIM}, got {d}")));
        }
        let size = (p as u128).pow(d);
        if size > cap as u128 {
            return Err(Error::TooLarge { size, cap });
        }
        Ok(GroupParams { p, d, size: size as usize })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `p^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn point(&self, index: usize) -> Point {
        debug_assert!(index < self.size);
        let mut coords = [0u32; MAX_DIM];
        let mut rest = index;
        for i in (0..self.d as usize).rev() {
            coords[i] = (rest % self.p as usize) as u32;
            rest /= self.p as usize;
        }
        Point { p: self.p, d: self.d as u8, coords }
    }

    pub fn index(&self, x: &Point) -> usize {
        debug_assert!(self.owns(x));
        x.coords().iter().fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    /// Reduces arbitrary integer coordinates mod `p`.
    pub fn point_from(&self, coords: &[i64]) -> Result<Point> {
        if coords.len() != self.d as usize {
            return Err(Error::Domain(alloc::format!("expected {} coordinates, got {}", self.d, coords.len())));
        }
        let mut c = [0u32; MAX_DIM];
        for (slot, &v) in c.iter_mut().zip(coords) {
            *slot = v.rem_euclid(self.p as i64) as u32;
        }
        Ok(Point { p: self.p, d: self.d as u8, coords: c })
    }

    pub fn zero(&self) -> Point {
        Point { p: self.p, d: self.d as u8, coords: [0; MAX_DIM] }
    }

    pub fn owns(&self, x: &Point) -> bool {
        x.p == self.p && x.d as u32 == self.d
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(move |i| self.point(i))
    }

    pub fn add_index(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, |a, b, p| (a + b) % p)
    }

    pub fn sub_index(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, |a, b, p| (a + p - b) % p)
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.sub_index(0, i)
    }

    pub fn dot_index(&self, i: usize, j: usize) -> u32 {
        let p = self.p as usize;
        let (mut i, mut j) = (i, j);
        let mut acc = 0usize;
        for _ in 0..self.d {
            acc += (i % p) * (j % p);
            i /= p;
            j /= p;
        }
        (acc % p) as u32
    }

    fn combine(&self, i: usize, j: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let p = self.p as usize;
        let (mut i, mut j) = (i, j);
        let mut out = 0usize;
        let mut place = 1usize;
        for _ in 0..self.d {
            out += op(i % p, j % p, p) * place;
            i /= p;
            j /= p;
            place *= p;
        }
        out
    }

    /// `x · m` for every `x`, in canonical order.
    pub fn dot_table(&self, m: usize) -> Vec<u32> {
        (0..self.size).map(|x| self.dot_index(x, m)).collect()
    }

    fn check(&self, x: &Point) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.p, self.d)
    }
}

/// An element of `Z_p^d` with coordinates reduced into `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    p: u32,
    d: u8,
    coords: [u32; MAX_DIM],
}

impl Point {
    pub fn coords(&self) -> &[u32] {
        &self.coords[..self.d as usize]
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> u32 {
        self.d as u32
    }

    fn same_group(&self, other: &Point) -> Result<()> {
        if self.p == other.p && self.d == other.d {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }

    fn zip_with(&self, other: &Point, op: impl Fn(u32, u32) -> u32) -> Result<Point> {
        self.same_group(other)?;
        let mut coords = [0u32; MAX_DIM];
        for (c, (&x, &y)) in coords.iter_mut().zip(self.coords().iter().zip(other.coords())) {
            *c = op(x, y) % self.p;
        }
        Ok(Point { coords, ..*self })
    }

    pub fn add(&self, other: &Point) -> Result<Point> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        let p = self.p;
        self.zip_with(other, |a, b| a + p - b)
    }

    pub fn neg(&self) -> Point {
        let mut coords = [0u32; MAX_DIM];
        for (c, &x) in coords.iter_mut().zip(self.coords()) {
            *c = (self.p - x) % self.p;
        }
        Point { coords, ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.d, self.coords).cmp(&(other.p, other.d, other.coords))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `x · y mod p`.
pub fn dot(x: &Point, y: &Point) -> Result<u32> {
    x.same_group(y)?;
    let p = x.p as u64;
    let s = x.coords().iter().zip(y.coords()).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
    Ok(s as u32)
}

/// The character value `ζ^{x · m}`.
pub fn character(x: &Point, m: &Point) -> Result<CycNum> {
    Ok(CycNum::root(x.p, dot(x, m)?))
}

/// A subset of `Z_p^d`, stored as a bitset over canonical indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    params: GroupParams,
    bits: Vec<u64>,
    len: usize,
}

impl PointSet {
    pub fn empty(params: GroupParams) -> Self {
        PointSet { params, bits: vec![0; params.size().div_ceil(64)], len: 0 }
    }

    pub fn full(params: GroupParams) -> Self {
        Self::from_indices(params, 0..params.size())
    }

    pub fn singleton(params: GroupParams, index: usize) -> Self {
        Self::from_indices(params, [index])
    }

    pub fn from_indices(params: GroupParams, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(params);
        for i in indices {
            set.insert_index(i);
        }
        set
    }

    pub fn from_points<'a>(params: GroupParams, points: impl IntoIterator<Item = &'a Point>) -> Result<Self> {
        let mut set = Self::empty(params);
        for x in points {
            params.check(x)?;
            set.insert_index(params.index(x));
        }
        Ok(set)
    }

    /// Members are the indices of the set bits of `mask`.
    pub fn from_mask(params: GroupParams, mask: u128) -> Self {
        assert!(params.size() <= 128, "mask enumeration needs p^d <= 128");
        Self::from_indices(params, (0..params.size()).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn to_mask(&self) -> u128 {
        assert!(self.params.size() <= 128, "mask enumeration needs p^d <= 128");
        self.iter().fold(0u128, |m, i| m | 1u128 << i)
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        i < self.params.size() && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.params.owns(x) && self.contains_index(self.params.index(x))
    }

    pub fn insert_index(&mut self, i: usize) -> bool {
        assert!(i < self.params.size(), "point index out of range");
        let fresh = !self.contains_index(i);
        if fresh {
            self.bits[i / 64] |= 1 << (i % 64);
            self.len += 1;
        }
        fresh
    }

    pub fn remove_index(&mut self, i: usize) -> bool {
        let present = self.contains_index(i);
        if present {
            self.bits[i / 64] &= !(1 << (i % 64));
            self.len -= 1;
        }
        present
    }

    /// Member indices in ascending (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            core::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter().map(|i| self.params.point(i)).collect()
    }

    /// `{e + a : e ∈ E}`.
    pub fn translate(&self, a: &Point) -> Result<PointSet> {
        self.params.check(a)?;
        Ok(self.translate_index(self.params.index(a)))
    }

    pub fn translate_index(&self, a: usize) -> PointSet {
        Self::from_indices(self.params, self.iter().map(|e| self.params.add_index(e, a)))
    }

    /// `{-e : e ∈ E}`.
    pub fn negate(&self) -> PointSet {
        Self::from_indices(self.params, self.iter().map(|e| self.params.neg_index(e)))
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.params == other.params && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        let len = bits.iter().map(|w| w.count_ones() as usize).sum();
        PointSet { params: self.params, bits, len }
    }
}

impl Ord for PointSet {
    /// Lexicographic comparison of the ascending index sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        self.params.cmp(&other.params).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.params)?;
        for (n, x) in self.points().iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// `{e + a : e ∈ E}`.
pub fn translate_set(set: &PointSet, a: &Point) -> Result<PointSet> {
    set.translate(a)
}

/// Whether `E ⊂ Z_p^2` is the graph `{(x, u(x))}` of a function `u`.
///
/// The witness of a failure is the first abscissa that occurs zero or
/// several times.
pub fn is_graph(set: &PointSet) -> Result<Verdict> {
    let params = set.params();
    if params.d() != 2 {
        return Err(Error::Domain("graph test needs d = 2".into()));
    }
    let p = params.p() as usize;
    let mut hits = vec![0usize; p];
    for i in set.iter() {
        hits[i / p] += 1;
    }
    match hits.iter().position(|&h| h != 1) {
        None => Ok(Verdict::pass()),
        Some(x) => Ok(Verdict::fail(Witness::Abscissa { x: x as u32, count: hits[x] })),
    }
}

/// `A = Z_p^k × {0}` and its orthogonal complement `B = {0} × Z_p^{d-k}`.
pub fn subgroup_and_complement(params: GroupParams, k: u32) -> Result<(PointSet, PointSet)> {
    let d = params.d();
    if k == 0 || k >= d {
        return Err(Error::Domain(alloc::format!("split k must satisfy 1 <= k < d = {d}, got {k}")));
    }
    let tail = (params.p() as usize).pow(d - k);
    let head = params.size() / tail;
    let a = PointSet::from_indices(params, (0..head).map(|i| i * tail));
    let b = PointSet::from_indices(params, 0..tail);
    Ok((a, b))
}

/// The parabola `{(t, t^2) : t ∈ Z_p}` in `Z_p^2`.
pub fn parabola(params: GroupParams) -> Result<PointSet> {
    if params.d() != 2 {
        return Err(Error::Domain("the parabola lives in d = 2".into()));
    }
    let p = params.p() as usize;
    Ok(PointSet::from_indices(params, (0..p).map(|t| t * p + t * t % p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, d: u32) -> GroupParams {
        GroupParams::new(p, d).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(GroupParams::new(4, 2), Err(Error::NotPrime(4)));
        assert!(GroupParams::new(5, 0).is_err());
        assert!(GroupParams::new(5, 5).is_err());
        assert!(matches!(GroupParams::new(181, 2), Err(Error::TooLarge { .. })));
        assert!(GroupParams::with_cap(181, 2, 40_000).is_ok());
    }

    #[test]
    fn index_round_trip_is_lexicographic() {
        let g = z(3, 2);
        let pts: Vec<Point> = g.points().collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for (i, x) in pts.iter().enumerate() {
            assert_eq!(g.index(x), i);
        }
        assert_eq!(g.point(5).coords(), &[1, 2]);
    }

    #[test]
    fn dot_products() {
        let g = z(5, 2);
        let x = g.point_from(&[1, 2]).unwrap();
        let y = g.point_from(&[3, 4]).unwrap();
        assert_eq!(dot(&x, &y).unwrap(), 1);
        assert_eq!(dot(&x, &g.zero()).unwrap(), 0);
        assert_eq!(g.dot_index(g.index(&x), g.index(&y)), 1);
        let other = z(7, 2).zero();
        assert_eq!(dot(&x, &other), Err(Error::ParamsMismatch));
        // (t, t²)·(0, b) = t² b
        for t in 0..5i64 {
            let pt = g.point_from(&[t, t * t]).unwrap();
            let b = g.point_from(&[0, 3]).unwrap();
            assert_eq!(dot(&pt, &b).unwrap() as i64, (t * t * 3) % 5);
        }
    }

    #[test]
    fn characters() {
        let g = z(5, 2);
        let x = g.point_from(&[1, 1]).unwrap();
        let m = g.point_from(&[1, 2]).unwrap();
        assert_eq!(character(&x, &m).unwrap(), CycNum::root(5, 3));
        assert_eq!(character(&x, &g.zero()).unwrap(), CycNum::one(5));
        for m in g.points() {
            let mut acc = CycNum::zero(5);
            for x in g.points() {
                acc = &acc + &character(&x, &m).unwrap();
            }
            let expected = if m.is_zero() { 25 } else { 0 };
            assert_eq!(acc, CycNum::from_integer(5, expected));
        }
        // multiplicativity
        let y = g.point_from(&[4, 2]).unwrap();
        assert_eq!(
            character(&x.add(&y).unwrap(), &m).unwrap(),
            &character(&x, &m).unwrap() * &character(&y, &m).unwrap()
        );
    }

    #[test]
    fn translation() {
        let g = z(3, 2);
        let e = PointSet::from_indices(g, [0, 4, 7]);
        assert_eq!(e.translate(&g.zero()).unwrap(), e);
        assert_eq!(PointSet::full(g).translate_index(5), PointSet::full(g));
        let one = PointSet::singleton(g, 0);
        let a = g.point_from(&[1, 2]).unwrap();
        assert_eq!(one.translate(&a).unwrap().points(), [a]);
        let back = e.translate(&a).unwrap().translate(&a.neg()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn graph_detection() {
        let g = z(5, 2);
        assert!(is_graph(&parabola(g).unwrap()).unwrap().passed);
        let bad = PointSet::from_indices(g, [0, 1]);
        let v = is_graph(&bad).unwrap();
        assert!(!v.passed);
        assert_eq!(v.witness, Some(Witness::Abscissa { x: 0, count: 2 }));
        assert!(!is_graph(&PointSet::full(g)).unwrap().passed);
        assert!(is_graph(&PointSet::full(z(5, 1))).is_err());
    }

    #[test]
    fn coordinate_subgroups() {
        let (a, b) = subgroup_and_complement(z(3, 2), 1).unwrap();
        assert_eq!(a.points().iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>(), [[0, 0], [1, 0], [2, 0]]);
        assert_eq!(b.indices(), [0, 1, 2]);
        let (a, b) = subgroup_and_complement(z(3, 3), 2).unwrap();
        assert_eq!((a.len(), b.len()), (9, 3));
        assert_eq!(a.len() * b.len(), 27);
        assert!(subgroup_and_complement(z(3, 2), 2).is_err());
        assert!(subgroup_and_complement(z(3, 2), 0).is_err());
    }

    #[test]
    fn lexicographic_set_order() {
        let g = z(2, 2);
        let a = PointSet::from_indices(g, [0, 3]);
        let b = PointSet::from_indices(g, [1, 2]);
        let c = PointSet::from_indices(g, [0, 1, 3]);
        assert!(a < b);
        assert!(c < a);
        assert_eq!(PointSet::from_mask(g, a.to_mask()), a);
    }
}
