//! Brute-force weight enumeration of kernel codes.

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::sim::matrix::Matrix;

/// Default limit on the number of codewords visited, `2^24`.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

/// Weight distribution of one code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightEnumeration {
    /// `a[l]` is the number of codewords of weight `l`.
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    /// Minimum distance; `None` for the zero code.
    #[serde(serialize_with = "serialize_dmin")]
    pub dmin: Option<u32>,
    pub dim: u32,
}

fn serialize_dmin<S: Serializer>(d: &Option<u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(v) => s.serialize_u32(*v),
        None => s.serialize_str("infinite"),
    }
}

fn dmin_of(a: &[u64]) -> Option<u32> {
    a.iter().skip(1).position(|&x| x > 0).map(|p| p as u32 + 1)
}

/// Number of trailing zero base-`q` digits of `t > 0`.
fn trailing_digit(mut t: u64, q: u64) -> usize {
    let mut j = 0;
    while t % q == 0 {
        t /= q;
        j += 1;
    }
    j
}

/// `q^dim`, or an error when it exceeds `cap`.
fn checked_size(q: u32, dim: usize, cap: u64) -> Result<u64> {
    let size = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::capacity(format!(
            "enumeration of q^dim = {q}^{dim} codewords exceeds the cap of {cap}"
        )));
    }
    Ok(size as u64)
}

/// Counts the kernel codewords of `h` by weight, walking a modular q-ary
/// Gray code so that each step changes one coordinate of the message.
pub fn enumerate_weights(field: &FieldSpec, h: &Matrix, cap: u64) -> Result<WeightEnumeration> {
    let n = h.cols();
    let basis = h.kernel_basis(field);
    let dim = basis.len();
    let size = checked_size(field.order(), dim, cap)?;
    let a = if field.order() == 2 && n <= 128 {
        binary_walk(&basis, n, size)
    } else {
        general_walk(field, &basis, n, size)
    };
    Ok(WeightEnumeration {
        dmin: dmin_of(&a),
        a,
        dim: dim as u32,
    })
}

fn binary_walk(basis: &[Vec<FieldElement>], n: usize, size: u64) -> Vec<u64> {
    let masks: Vec<u128> = basis
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .fold(0u128, |m, (i, _)| m | (1u128 << i))
        })
        .collect();
    let mut a = vec![0u64; n + 1];
    a[0] = 1;
    let mut word = 0u128;
    for t in 1..size {
        word ^= masks[t.trailing_zeros() as usize];
        a[word.count_ones() as usize] += 1;
    }
    a
}

fn general_walk(field: &FieldSpec, basis: &[Vec<FieldElement>], n: usize, size: u64) -> Vec<u64> {
    let q = field.order();
    // digit k -> k+1 (mod q) adds (e[k+1] - e[k]) * b_j; stored sparsely
    let steps: Vec<Vec<Vec<(usize, FieldElement)>>> = basis
        .iter()
        .map(|b| {
            (0..q)
                .map(|k| {
                    let from = FieldElement::from_raw(k);
                    let to = FieldElement::from_raw((k + 1) % q);
                    let diff = field.sub(to, from);
                    b.iter()
                        .enumerate()
                        .filter(|(_, e)| !e.is_zero())
                        .map(|(i, &e)| (i, field.mul(diff, e)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut digits = vec![0u32; basis.len()];
    let mut word = vec![FieldElement::ZERO; n];
    let mut weight = 0usize;
    let mut a = vec![0u64; n + 1];
    a[0] = 1;
    for t in 1..size {
        let j = trailing_digit(t, q as u64);
        let k = digits[j];
        for &(i, v) in &steps[j][k as usize] {
            let old = word[i];
            let new = field.add(old, v);
            weight = weight + usize::from(!new.is_zero()) - usize::from(!old.is_zero());
            word[i] = new;
        }
        digits[j] = (k + 1) % q;
        a[weight] += 1;
    }
    a
}

/// Minimum distance if it is at most `t`, found by scanning column supports
/// in order of size. Runs in `O(C(n, t))` rank computations.
pub fn low_weight_dmin(field: &FieldSpec, h: &Matrix, t: u32) -> Option<u32> {
    let n = h.cols();
    (1..=t.min(n as u32)).find(|&s| {
        let s = s as usize;
        match s {
            1 => (0..n).any(|j| h.column_is_zero(j)),
            2 => (0..n).tuple_combinations().any(|(i, j)| columns_dependent(field, h, i, j)),
            _ => (0..n)
                .combinations(s)
                .any(|cols| h.select_columns(&cols).rank(field) < s),
        }
    })
}

/// Whether columns `i` and `j` admit `a h_i + b h_j = 0` with `a, b` nonzero.
/// Only meaningful when neither column is zero.
fn columns_dependent(field: &FieldSpec, h: &Matrix, i: usize, j: usize) -> bool {
    let mut ratio: Option<FieldElement> = None;
    for r in 0..h.rows() {
        let (x, y) = (h.get(r, i), h.get(r, j));
        match (x.is_zero(), y.is_zero()) {
            (true, true) => continue,
            (false, false) => {
                let k = field.mul(x, field.inv(y).expect("nonzero"));
                if ratio.is_some_and(|r| r != k) {
                    return false;
                }
                ratio = Some(k);
            }
            _ => return false,
        }
    }
    ratio.is_some()
}
