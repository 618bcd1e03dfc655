//! Elementary symmetric functions of n quantities, full and with one quantity
//! omitted, plus the bracket pairings with a mass vector.

use crate::poly::{C64, ONE, ZERO};

/// Elementary symmetric functions e_1..e_n of `values`.
pub fn esym(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let mut e = vec![ZERO; n + 1];
    e[0] = ONE;
    for (k, &v) in values.iter().enumerate() {
        for i in (1..=k + 1).rev() {
            let prev = e[i - 1];
            e[i] += v * prev;
        }
    }
    e[1..].to_vec()
}

/// Table of symmetric functions: `full[i-1]` is sigma_i of all values;
/// `omitted[k][i]` is sigma_i of the values with the k-th one left out
/// (i = 0..n-1, sigma_0 = 1).
#[derive(Debug, Clone)]
pub struct SymTable {
    pub values: Vec<C64>,
    pub full: Vec<C64>,
    pub omitted: Vec<Vec<C64>>,
}

pub fn sym_table(values: &[C64]) -> SymTable {
    let n = values.len();
    let full = esym(values);
    let mut omitted = Vec::with_capacity(n);
    for k in 0..n {
        let rest: Vec<C64> = values
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, &v)| v)
            .collect();
        let mut e = vec![ONE];
        e.extend(esym(&rest));
        omitted.push(e);
    }
    SymTable { values: values.to_vec(), full, omitted }
}

impl SymTable {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// sigma_i of all n values (sigma_0 = 1, zero beyond n).
    pub fn sigma(&self, i: usize) -> C64 {
        if i == 0 {
            ONE
        } else {
            self.full.get(i - 1).copied().unwrap_or(ZERO)
        }
    }

    /// sigma_i^k: sigma_i of the values with the k-th omitted (zero for i >= n).
    pub fn sigma_omitted(&self, i: usize, k: usize) -> C64 {
        self.omitted[k].get(i).copied().unwrap_or(ZERO)
    }

    /// The vector (sigma_i^1, ..., sigma_i^n).
    pub fn sigma_vec(&self, i: usize) -> Vec<C64> {
        (0..self.n()).map(|k| self.sigma_omitted(i, k)).collect()
    }

    /// Inner product <m, sigma_i>.
    pub fn bracket(&self, masses: &[C64], i: usize) -> C64 {
        masses
            .iter()
            .zip(0..self.n())
            .map(|(&m, k)| m * self.sigma_omitted(i, k))
            .sum()
    }
}

/// d/dt of the elementary symmetric vector (e_1..e_m) of moving points:
/// de_i = sum_l v_l * e_{i-1}(points without l).
pub fn esym_velocity(points: &[C64], velocities: &[C64]) -> Vec<C64> {
    let m = points.len();
    let mut out = vec![ZERO; m];
    for l in 0..m {
        let rest: Vec<C64> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != l)
            .map(|(_, &v)| v)
            .collect();
        let mut e = vec![ONE];
        e.extend(esym(&rest));
        for i in 1..=m {
            out[i - 1] += velocities[l] * e.get(i - 1).copied().unwrap_or(ZERO);
        }
    }
    out
}
