//! Shared fixtures: random almost Hermitian structures on catalog algebras.

#![allow(dead_code)]

use ahforms::field::rat;
use ahforms::{catalog, ManifoldSpec, Rational, RealMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn standard_j() -> RealMatrix {
    let r = |v: i64| rat(v, 1);
    RealMatrix::from_rows(vec![
        vec![r(0), r(-1), r(0), r(0)],
        vec![r(1), r(0), r(0), r(0)],
        vec![r(0), r(0), r(0), r(-1)],
        vec![r(0), r(0), r(1), r(0)],
    ])
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| rat(rng.random_range(-2..=2), 1)).collect())
            .collect();
        let a = RealMatrix::from_rows(rows);
        if a.inverse().is_some() {
            return a;
        }
    }
}

/// `J = A J₀ A⁻¹` and `g = A⁻ᵀ A⁻¹` with a random small-integer `A`; the
/// pair is compatible because `(J₀, Id)` is.
pub fn random_structure(base: &ManifoldSpec, rng: &mut ChaCha8Rng, label: usize) -> ManifoldSpec {
    let a = random_invertible(rng, base.dim);
    let inv = a.inverse().unwrap();
    let j = &(&a * &standard_j()) * &inv;
    let g = &inv.transpose() * &inv;
    let mut spec = ManifoldSpec::new(format!("{}-random-{label}", base.name), base.dim, base.constants.clone(), j, g).unwrap();
    spec.params = base.params.clone();
    spec
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn catalog_specs() -> Vec<ManifoldSpec> {
    catalog::ids().into_iter().map(|id| catalog::instantiate(id, &[]).unwrap()).collect()
}

/// Twenty random structures on every catalog algebra.
pub fn random_specs(per_algebra: usize) -> Vec<ManifoldSpec> {
    let mut r = rng(0x5eed);
    let mut out = Vec::new();
    for base in catalog_specs() {
        for i in 0..per_algebra {
            out.push(random_structure(&base, &mut r, i));
        }
    }
    out
}

pub fn q(v: i64) -> Rational {
    rat(v, 1)
}
