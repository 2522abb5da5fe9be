//! Seeded random instances for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{blades, qi, Blade, ExprCoeff, Monomial, Poly};
use crate::forms::DiffForm;
use crate::lie::{Cochain, MultiVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A polynomial with up to `terms` monomials of total degree `<= max_deg`
/// and integer coefficients in `[-3, 3]`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, arity: usize, max_deg: u32, terms: usize) -> ExprCoeff {
    let mut p = Poly::zero(arity);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut m = Monomial::unit(arity);
        for _ in 0..rng.gen_range(0..=max_deg) {
            m.x[rng.gen_range(0..arity)] += 1;
        }
        let c = rng.gen_range(-3..=3);
        p.add_term(m, qi(c));
    }
    ExprCoeff::from_poly(p)
}

/// A `degree`-form with random polynomial coefficients on a few blades.
pub fn random_form(rng: &mut ChaCha8Rng, arity: usize, degree: usize) -> DiffForm {
    let all = blades(arity, degree);
    let mut f = DiffForm::zero(arity, degree);
    for _ in 0..rng.gen_range(1..=all.len().min(3)) {
        let b = all[rng.gen_range(0..all.len())];
        f.add_term(b, random_polynomial(rng, arity, 2, 3));
    }
    f
}

fn random_terms(rng: &mut ChaCha8Rng, dim: usize, k: usize, max_terms: usize) -> Vec<(Blade, i64)> {
    let all = blades(dim, k);
    (0..rng.gen_range(1..=max_terms))
        .map(|_| (all[rng.gen_range(0..all.len())], rng.gen_range(-3..=3)))
        .collect()
}

pub fn random_multivector(rng: &mut ChaCha8Rng, dim: usize, k: usize) -> MultiVector {
    let mut p = MultiVector::zero(k);
    for (b, c) in random_terms(rng, dim, k, 4) {
        p.add_term(b, qi(c));
    }
    p
}

pub fn random_cochain(rng: &mut ChaCha8Rng, dim: usize, k: usize) -> Cochain {
    let mut c = Cochain::zero(k);
    for (b, v) in random_terms(rng, dim, k, 4) {
        c.add_term(b, qi(v));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_the_seed() {
        let a = random_form(&mut rng(5), 4, 2);
        let b = random_form(&mut rng(5), 4, 2);
        assert_eq!(a, b);
        assert_eq!(a.degree(), 2);
        assert_eq!(random_multivector(&mut rng(1), 6, 3), random_multivector(&mut rng(1), 6, 3));
    }
}
