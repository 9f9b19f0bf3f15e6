//! Drawing codes from the socket-permutation ensemble.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gf::{FieldElement, FieldSpec};
use crate::sim::matrix::Matrix;
use crate::spectrum::EnsembleParams;

/// One member of the ensemble.
///
/// Variable socket `i` belongs to variable `i / c` and is wired to check
/// socket `permutation[i]`, which belongs to check `permutation[i] / d` and
/// carries the multiplier `multipliers[permutation[i]]`. Parallel edges add up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeSample {
    pub params: EnsembleParams,
    pub permutation: Vec<u32>,
    pub multipliers: Vec<FieldElement>,
    pub parity_matrix: Matrix,
}

/// SplitMix64 output function.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`: `splitmix64(master ^ splitmix64(index))`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Generator used for every random draw in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parity-check matrix of a fixed wiring.
pub fn assemble_parity_matrix(
    field: &FieldSpec,
    params: &EnsembleParams,
    permutation: &[u32],
    multipliers: &[FieldElement],
) -> Matrix {
    let (c, d) = (params.c as usize, params.d as usize);
    let mut h = Matrix::zeros(params.checks() as usize, params.n as usize);
    for (i, &j) in permutation.iter().enumerate() {
        let j = j as usize;
        let (row, col) = (j / d, i / c);
        h.set(row, col, field.add(h.get(row, col), multipliers[j]));
    }
    h
}

/// Draws a code using an existing field and generator.
pub fn sample_code_with<R: Rng>(field: &FieldSpec, params: &EnsembleParams, rng: &mut R) -> CodeSample {
    let sockets = params.sockets() as u32;
    let mut permutation: Vec<u32> = (0..sockets).collect();
    permutation.shuffle(rng);
    let q = field.order();
    let multipliers: Vec<FieldElement> = (0..sockets)
        .map(|_| FieldElement::from_raw(rng.gen_range(1..q)))
        .collect();
    let parity_matrix = assemble_parity_matrix(field, params, &permutation, &multipliers);
    CodeSample {
        params: *params,
        permutation,
        multipliers,
        parity_matrix,
    }
}

/// Draws a code deterministically from `seed`.
pub fn sample_code(params: &EnsembleParams, seed: u64) -> Result<CodeSample> {
    let field = FieldSpec::new(params.q)?;
    Ok(sample_code_with(&field, params, &mut rng_from_seed(seed)))
}

/// Predicate on sampled codes used to condition ensemble statistics.
pub trait CodeFilter: Sync {
    fn name(&self) -> &'static str;
    fn accepts(&self, sample: &CodeSample) -> bool;
}

/// Accepts codes whose parity-check matrix has no all-zero column,
/// i.e. codes with minimum distance at least 2.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoZeroColumn;

impl CodeFilter for NoZeroColumn {
    fn name(&self) -> &'static str {
        "no-zero-column"
    }

    fn accepts(&self, sample: &CodeSample) -> bool {
        !sample.parity_matrix.has_zero_column()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let p = EnsembleParams::new(3, 3, 6, 12).unwrap();
        assert_eq!(sample_code(&p, 7).unwrap(), sample_code(&p, 7).unwrap());
        assert_ne!(sample_code(&p, 7).unwrap(), sample_code(&p, 8).unwrap());
    }

    #[test]
    fn structure_invariants() {
        let p = EnsembleParams::new(4, 3, 6, 12).unwrap();
        for seed in 0..20 {
            let s = sample_code(&p, seed).unwrap();
            let mut sorted = s.permutation.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..36).collect::<Vec<_>>());
            assert!(s.multipliers.iter().all(|m| !m.is_zero()));
            assert_eq!((s.parity_matrix.rows(), s.parity_matrix.cols()), (6, 12));
        }
    }

    #[test]
    fn hand_evaluated_matrices() {
        let p = EnsembleParams::new(2, 2, 4, 2).unwrap();
        for seed in 0..10 {
            assert_eq!(sample_code(&p, seed).unwrap().parity_matrix.to_rows(), vec![vec![0, 0]]);
        }
        let p = EnsembleParams::new(2, 1, 3, 3).unwrap();
        for seed in 0..10 {
            assert_eq!(sample_code(&p, seed).unwrap().parity_matrix.to_rows(), vec![vec![1, 1, 1]]);
        }
    }

    #[test]
    fn seeds_are_spread() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(0, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(0, 1));
    }
}
