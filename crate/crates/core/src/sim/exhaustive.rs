//! Exact ensemble average by enumerating every wiring and multiplier choice.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::sim::enumerate::{enumerate_weights, DEFAULT_ENUM_CAP};
use crate::sim::sample::assemble_parity_matrix;
use crate::spectrum::{EnsembleParams, SpectrumTable};

/// Default limit on `(cn)! (q-1)^(cn)`.
pub const DEFAULT_CONFIG_CAP: u64 = 100_000_000;

/// `(cn)! (q-1)^(cn)` if it fits within `cap`.
pub fn configuration_count(params: &EnsembleParams, cap: u64) -> Result<u64> {
    let sockets = params.sockets();
    let too_many = || {
        Error::capacity(format!(
            "more than {cap} ensemble configurations ({sockets}! * {}^{sockets})",
            params.q - 1
        ))
    };
    let mut total: u64 = 1;
    for k in 1..=sockets as u64 {
        total = total.checked_mul(k).filter(|&t| t <= cap).ok_or_else(too_many)?;
    }
    for _ in 0..sockets {
        total = total
            .checked_mul((params.q - 1) as u64)
            .filter(|&t| t <= cap)
            .ok_or_else(too_many)?;
    }
    Ok(total)
}

/// Average weight distribution over all `(cn)!` interleavers and all
/// `(q-1)^(cn)` multiplier vectors, as exact rationals.
pub fn exhaustive_ensemble(params: &EnsembleParams, cap: u64) -> Result<SpectrumTable> {
    let total = configuration_count(params, cap)?;
    let field = FieldSpec::new(params.q)?;
    let sockets = params.sockets() as usize;
    let n = params.n as usize;
    let q = params.q;

    let multiplier_sets: Vec<Vec<FieldElement>> = (0..sockets)
        .map(|_| (1..q).map(FieldElement::from_raw))
        .multi_cartesian_product()
        .collect();

    let zero = || vec![0u128; n + 1];
    let sums = (0..sockets as u32)
        .permutations(sockets)
        .par_bridge()
        .try_fold(zero, |mut acc, perm| {
            for mult in &multiplier_sets {
                let h = assemble_parity_matrix(&field, params, &perm, mult);
                let we = enumerate_weights(&field, &h, DEFAULT_ENUM_CAP)?;
                for (s, v) in acc.iter_mut().zip(&we.a) {
                    *s += *v as u128;
                }
            }
            Ok::<_, Error>(acc)
        })
        .try_reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            Ok(a)
        })?;

    let denom = BigInt::from(total);
    Ok(SpectrumTable {
        params: *params,
        values: sums
            .into_iter()
            .map(|s| BigRational::new(BigInt::from(BigUint::from(s)), denom.clone()))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn hand_computed_averages() {
        let p = EnsembleParams::new(3, 1, 3, 3).unwrap();
        let t = exhaustive_ensemble(&p, DEFAULT_CONFIG_CAP).unwrap();
        let v: Vec<i64> = t.values.iter().map(|r| r.to_integer().to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, 0, 6, 2]);
        assert!(t.values.iter().all(|r| r.is_integer()));
        let p = EnsembleParams::new(2, 2, 4, 2).unwrap();
        let t = exhaustive_ensemble(&p, DEFAULT_CONFIG_CAP).unwrap();
        let v: Vec<i64> = t.values.iter().map(|r| r.to_integer().to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, 2, 1]);
    }

    #[test]
    fn cap_is_enforced() {
        let p = EnsembleParams::new(2, 3, 6, 12).unwrap();
        assert!(matches!(exhaustive_ensemble(&p, DEFAULT_CONFIG_CAP), Err(Error::Capacity(_))));
    }
}
