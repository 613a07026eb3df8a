#![allow(dead_code)]

use proptest::prelude::*;
use zpgabor_core::{CycNum, GroupParams, PointSet, Rational, Window};

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn z(p: u64, d: u32) -> GroupParams {
    GroupParams::new(p, d).unwrap()
}

/// An element of `Q(ζ_p)` from small rational coefficients on `1, ζ, …, ζ^{p-1}`.
pub fn cyc(p: u32) -> impl Strategy<Value = CycNum> {
    prop::collection::vec((-4i64..=4, 1i64..=3), p as usize).prop_map(move |cs| {
        let coeffs: Vec<Rational> = cs.into_iter().map(|(n, d)| Rational::new(n, d).unwrap()).collect();
        CycNum::from_cyclic(p, &coeffs)
    })
}

/// A sparse window with small integer coefficients.
pub fn window(params: GroupParams) -> impl Strategy<Value = Window<CycNum>> {
    let p = params.p();
    let n = params.size();
    prop::collection::vec(prop::option::weighted(0.6, prop::collection::vec(-3i64..=3, p as usize)), n).prop_map(
        move |vals| {
            let values = vals
                .into_iter()
                .map(|v| match v {
                    None => CycNum::zero(p),
                    Some(cs) => CycNum::from_exponent_counts(p, &cs),
                })
                .collect();
            Window::new(params, values).unwrap()
        },
    )
}

pub fn subset(params: GroupParams) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(any::<bool>(), params.size()).prop_map(move |bits| {
        PointSet::from_indices(params, bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    })
}

/// `Σ_x g(x) ζ^{-x·m} / p^d` computed with explicit characters, independent
/// of the bucketed sums used by the library.
pub fn dft_oracle(g: &Window<CycNum>) -> Vec<CycNum> {
    let params = g.params();
    let p = params.p();
    let scale = Rational::new(1, params.size() as i64).unwrap();
    (0..params.size())
        .map(|m| {
            let pm = params.point(m);
            let mut acc = CycNum::zero(p);
            for x in 0..params.size() {
                let chi = zpgabor_core::group::character(&params.point(x), &pm.neg()).unwrap();
                acc = &acc + &(g.value(x) * &chi);
            }
            acc.scale(&scale)
        })
        .collect()
}
