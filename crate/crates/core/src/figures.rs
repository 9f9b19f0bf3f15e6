//! Tabulated curves of `delta` and `omega` for the standard parameter sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{delta_curve, omega_curve, x1};

/// Number of uniform samples on `[0, 1]`.
pub const FIGURE_SAMPLES: usize = 1001;

/// `(q, d)` pairs shared by all figures.
pub const FIGURE_PAIRS: [(u32, u32); 4] = [(2, 5), (2, 6), (3, 5), (3, 6)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureTable {
    pub id: u32,
    pub title: String,
    pub columns: Vec<String>,
    /// One row per abscissa; the first entry is `x`.
    #[serde(serialize_with = "crate::real::serialize_rows")]
    pub rows: Vec<Vec<f64>>,
}

/// Uniform grid on `[0, 1]` merged with the given anchor points.
pub fn figure_grid(anchors: &[f64]) -> Vec<f64> {
    let last = (FIGURE_SAMPLES - 1) as f64;
    let mut xs: Vec<f64> = (0..FIGURE_SAMPLES).map(|i| i as f64 / last).collect();
    xs.extend_from_slice(anchors);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn anchors(q: u32, d: u32) -> [f64; 2] {
    [1.0 - 1.0 / q as f64, x1(q, d)]
}

/// Data for figure `id`: 1 tabulates `delta`, 2 to 5 tabulate `omega` for
/// `c = 1, 2, 3` at the `(q, d)` pair `FIGURE_PAIRS[id - 2]`.
pub fn figure_data(id: u32) -> Result<FigureTable> {
    match id {
        1 => {
            let all: Vec<f64> = FIGURE_PAIRS.iter().flat_map(|&(q, d)| anchors(q, d)).collect();
            let xs = figure_grid(&all);
            let curves = FIGURE_PAIRS
                .iter()
                .map(|&(q, d)| delta_curve(q, d, &xs))
                .collect::<Result<Vec<_>>>()?;
            let mut columns = vec!["x".to_string()];
            columns.extend(FIGURE_PAIRS.iter().map(|(q, d)| format!("delta_{q}_{d}")));
            let rows = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| std::iter::once(x).chain(curves.iter().map(|c| c[i].delta)).collect())
                .collect();
            Ok(FigureTable {
                id,
                title: "delta_{q,d}(x)".into(),
                columns,
                rows,
            })
        }
        2..=5 => {
            let (q, d) = FIGURE_PAIRS[(id - 2) as usize];
            let xs = figure_grid(&anchors(q, d));
            let curves = (1..=3)
                .map(|c| omega_curve(q, c, d, &xs))
                .collect::<Result<Vec<_>>>()?;
            let rows = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| std::iter::once(x).chain(curves.iter().map(|c| c[i].omega)).collect())
                .collect();
            Ok(FigureTable {
                id,
                title: format!("omega_{{{q},c,{d}}}(x)"),
                columns: ["x", "omega_c1", "omega_c2", "omega_c3"].map(String::from).to_vec(),
                rows,
            })
        }
        _ => Err(Error::param(format!("figure id {id} is not in 1..=5"))),
    }
}
