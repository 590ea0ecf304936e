use serde::Serialize;

use super::sheet::GeodesicSheet;

/// Interior samples of `c = U_tt - U_ts^2 / U_ss` with summary norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MAResidualReport {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `(n_t - 2) x (n_points - 2)` interior values.
    #[serde(skip)]
    pub c_values: Vec<f64>,
    pub sup_abs: f64,
    /// Mean of `|c|` over the interior nodes.
    pub l1: f64,
    /// Nodes where `U_ss` fell below the floor and was replaced by it.
    pub floored_nodes: usize,
    pub epsilon_floor: f64,
}

pub fn default_epsilon_floor(sheet: &GeodesicSheet) -> f64 {
    let scale = sheet.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    1e-10 * (1.0 + scale)
}

/// Centered-difference Schur complement of the `(t, s)` Hessian at every
/// interior node.
pub fn ma_residual(sheet: &GeodesicSheet, epsilon_floor: f64) -> MAResidualReport {
    let nt = sheet.n_t();
    let ns = sheet.s_grid().len();
    let ht = sheet.t_grid().spacing();
    let hs = sheet.s_grid().spacing();
    let u = |i: usize, k: usize| sheet.value(i, k);
    let mut c_values = Vec::with_capacity(nt.saturating_sub(2) * ns.saturating_sub(2));
    let mut floored = 0usize;
    for i in 1..nt.saturating_sub(1) {
        for k in 1..ns - 1 {
            let utt = (u(i + 1, k) - 2.0 * u(i, k) + u(i - 1, k)) / (ht * ht);
            let uss = (u(i, k + 1) - 2.0 * u(i, k) + u(i, k - 1)) / (hs * hs);
            let uts = (u(i + 1, k + 1) - u(i + 1, k - 1) - u(i - 1, k + 1) + u(i - 1, k - 1))
                / (4.0 * ht * hs);
            let denom = if uss < epsilon_floor {
                floored += 1;
                epsilon_floor
            } else {
                uss
            };
            c_values.push(utt - uts * uts / denom);
        }
    }
    let sup_abs = c_values.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let l1 = if c_values.is_empty() {
        0.0
    } else {
        c_values.iter().map(|c| c.abs()).sum::<f64>() / c_values.len() as f64
    };
    MAResidualReport {
        rows: nt.saturating_sub(2),
        cols: ns - 2,
        c_values,
        sup_abs,
        l1,
        floored_nodes: floored,
        epsilon_floor,
    }
}

/// Largest one-sided difference quotient `|U(t_{i+1}, s) - U(t_i, s)| / h_t`.
pub fn lipschitz_certificate(sheet: &GeodesicSheet) -> f64 {
    let ht = sheet.t_grid().spacing();
    let mut worst = 0.0f64;
    for i in 0..sheet.n_t() - 1 {
        for (a, b) in sheet.row(i).iter().zip(sheet.row(i + 1)) {
            worst = worst.max((b - a).abs() / ht);
        }
    }
    worst
}
