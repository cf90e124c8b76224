//! Shared helpers for the integration suites: an independent straightening
//! oracle and random generators. The oracle deliberately shares no code with
//! `Envelope::normalize_word`: it rewrites at a randomly chosen inversion
//! each step and uses no memoization.

use rand::Rng;

use lwr_core::lie::LieAlgebra;
use lwr_core::pbw::{StdMonomial, UElement};
use lwr_core::scalar::FieldSpec;
use lwr_core::wreath::TruncatedHom;
use lwr_core::Vector;

/// Normal form by random-position rewriting: a worklist of scaled words,
/// each step rewriting one randomly chosen adjacent inversion.
pub fn random_strategy_normal_form(
    alg: &LieAlgebra,
    word: &[u16],
    rng: &mut impl Rng,
) -> UElement {
    let mut result = UElement::zero();
    let mut work: Vec<(Vec<u16>, lwr_core::Scalar)> =
        vec![(word.to_vec(), alg.field().one())];
    while let Some((w, c)) = work.pop() {
        let inversions: Vec<usize> = w
            .windows(2)
            .enumerate()
            .filter(|(_, pair)| pair[0] > pair[1])
            .map(|(t, _)| t)
            .collect();
        if inversions.is_empty() {
            result.add_term(StdMonomial::from_sorted(w.iter().copied()), &c);
            continue;
        }
        let t = inversions[rng.gen_range(0..inversions.len())];
        let (a, b) = (w[t], w[t + 1]);
        let mut swapped = w.clone();
        swapped.swap(t, t + 1);
        work.push((swapped, c.clone()));
        for (k, coeff) in alg.bracket_basis(a as usize, b as usize).iter() {
            let mut shorter = w[..t].to_vec();
            shorter.push(k as u16);
            shorter.extend_from_slice(&w[t + 2..]);
            work.push((shorter, &c * coeff));
        }
    }
    result
}

pub fn random_word(rng: &mut impl Rng, dim: usize, max_len: usize) -> Vec<u16> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..dim) as u16).collect()
}

/// A dense random truncated hom with small integer values.
pub fn random_hom(
    rng: &mut impl Rng,
    dim_l: usize,
    dim_m: usize,
    degree: usize,
    field: FieldSpec,
) -> TruncatedHom {
    let mut f = TruncatedHom::zero(degree, dim_m);
    for e in lwr_core::pbw::monomials_up_to(dim_l, degree) {
        let v = Vector::from_entries(
            dim_m,
            (0..dim_m).map(|i| (i, field.integer(rng.gen_range(-3i64..=3)))),
        );
        f.set(e, v);
    }
    f
}
