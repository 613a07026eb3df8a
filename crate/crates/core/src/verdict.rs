//! Structured pass/fail results.

use alloc::string::String;
use alloc::vec::Vec;

use crate::group::{Point, PointSet};
use crate::scalar::Value;

/// An atom `g(x - a) χ(x · b)` of a Gabor system, named by `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub a: Point,
    pub b: Point,
}

/// Machine-readable counterexample attached to every failed verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Two modulations `b ≠ b'` whose characters are not orthogonal.
    ModulationPair { first: Point, second: Point },
    /// Two atoms with a nonzero inner product.
    AtomPair { first: Atom, second: Atom, inner: Value },
    /// A point covered `count ≠ 1` times by the translates.
    Coverage { point: Point, count: usize },
    /// A cardinality that disagrees with the required one.
    Cardinality { what: &'static str, expected: usize, found: usize },
    /// An abscissa hit `count ≠ 1` times by a would-be graph.
    Abscissa { x: u32, count: usize },
    /// A point where a pointwise condition fails.
    Point { point: Point, reason: &'static str },
    /// Coordinates in a sub-lattice (slice and frequency for slice tests).
    Slice { slice: Vec<u32>, frequency: Vec<u32>, reason: &'static str },
    /// A set separating two collections that should agree.
    Set { set: PointSet, reason: &'static str },
    /// The named sub-verdict failed.
    Part(String),
    /// A failure with no finer structure (e.g. the zero window).
    Note(&'static str),
}

/// Evidence attached to a pass.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// `Σ_a 1_E(x - a)` for every `x` in canonical order.
    CoverCounts(Vec<u32>),
    /// The squared norm shared by all atoms.
    NormSquared(Value),
    /// A set realizing the property (spectrum, tiling complement, ...).
    Set(PointSet),
    Value(Value),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub passed: bool,
    /// Always present when `passed` is false.
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
    /// Named sub-verdicts, in the order they were evaluated.
    pub parts: Vec<(String, Verdict)>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { passed: true, witness: None, certificate: None, parts: Vec::new() }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict { passed: false, witness: Some(witness), certificate: None, parts: Vec::new() }
    }

    pub fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn from_bool(passed: bool, witness: impl FnOnce() -> Witness) -> Self {
        if passed {
            Self::pass()
        } else {
            Self::fail(witness())
        }
    }

    /// A verdict that passes iff every part passes; the witness names the
    /// first failing part.
    pub fn all(parts: Vec<(String, Verdict)>) -> Self {
        let failed = parts.iter().find(|(_, v)| !v.passed).map(|(n, _)| n.clone());
        let mut v = match failed {
            None => Self::pass(),
            Some(name) => Self::fail(Witness::Part(name)),
        };
        v.parts = parts;
        v
    }

    pub fn part(&self, name: &str) -> Option<&Verdict> {
        self.parts.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn part_passed(&self, name: &str) -> Option<bool> {
        self.part(name).map(|v| v.passed)
    }
}
