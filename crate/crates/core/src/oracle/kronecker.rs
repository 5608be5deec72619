use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::sysmodel::Coefficient;

/// Sampling range used when `a` is irrational.
const ALGEBRAIC_PERIOD: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProbe {
    pub a: Coefficient,
    pub j: usize,
    pub zeta: Vec<f64>,
    pub grid: usize,
    /// Length of the sampled range `[0, T)`.
    pub period: f64,
    /// `min_t max_i frac(ζ_i + a^i t)` over the grid.
    pub estimate: f64,
    pub argmin_t: f64,
}

/// `q^J` for `a = p/q`: every `a^i t` with `i ≤ J` is periodic mod 1 with this period.
pub fn probe_period(a: &Coefficient, j: usize) -> f64 {
    match a.as_rational() {
        Some(r) => num_traits::ToPrimitive::to_f64(r.denom()).unwrap_or(f64::INFINITY).powi(j as i32),
        None => ALGEBRAIC_PERIOD,
    }
}

/// Uniform-grid minimization in double precision; `zeta[i-1]` pairs with `a^i`.
pub fn kronecker_density_probe(
    a: &Coefficient,
    j: usize,
    zeta: &[f64],
    grid: usize,
) -> Result<DensityProbe, OracleError> {
    if j == 0 || grid == 0 {
        return Err(OracleError::InvalidArgument("J and grid must be at least 1".into()));
    }
    if zeta.len() != j {
        return Err(OracleError::DimensionMismatch { expected: j, got: zeta.len() });
    }
    let af = a.to_f64();
    let powers: Vec<f64> = (1..=j as i32).map(|i| af.powi(i)).collect();
    let period = probe_period(a, j);
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..grid {
        let t = period * k as f64 / grid as f64;
        let worst = powers.iter().zip(zeta).map(|(p, z)| frac(z + p * t)).fold(0.0, f64::max);
        if worst < best.0 {
            best = (worst, t);
        }
    }
    Ok(DensityProbe { a: a.clone(), j, zeta: zeta.to_vec(), grid, period, estimate: best.0, argmin_t: best.1 })
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}
