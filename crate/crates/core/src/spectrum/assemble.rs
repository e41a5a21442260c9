use rayon::prelude::*;

use super::{coherent_cell, incoherent_cell, Kernel, TransitionLine};
use crate::error::{Error, Result};
use crate::kinematics::{doppler_denominator, Kinematics};

/// Intensities below this count as zero when forming the ratio.
pub const ZERO_INTENSITY: f64 = 1e-300;

/// Both intensity fields and their ratio on a (θ, ω) lattice, stored
/// row-major with one row per θ.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub theta_axis: Vec<f64>,
    pub omega_axis: Vec<f64>,
    pub incoherent: Vec<f64>,
    pub coherent: Vec<f64>,
    pub ratio: Vec<f64>,
}

impl SpectrumGrid {
    pub fn index(&self, i_theta: usize, i_omega: usize) -> usize {
        i_theta * self.omega_axis.len() + i_omega
    }

    pub fn incoherent_row(&self, i_theta: usize) -> &[f64] {
        let w = self.omega_axis.len();
        &self.incoherent[i_theta * w..(i_theta + 1) * w]
    }

    pub fn coherent_row(&self, i_theta: usize) -> &[f64] {
        let w = self.omega_axis.len();
        &self.coherent[i_theta * w..(i_theta + 1) * w]
    }

    pub fn ratio_row(&self, i_theta: usize) -> &[f64] {
        let w = self.omega_axis.len();
        &self.ratio[i_theta * w..(i_theta + 1) * w]
    }
}

/// coherent/incoherent with 0/0 → 1.
pub fn intensity_ratio(coherent: f64, incoherent: f64) -> f64 {
    if coherent < ZERO_INTENSITY && incoherent < ZERO_INTENSITY {
        1.0
    } else {
        coherent / incoherent
    }
}

fn check_axis(axis: &[f64], name: &'static str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::AxisEmpty { axis: name });
    }
    if axis.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::AxisUnordered { axis: name });
    }
    Ok(())
}

/// Evaluates every cell independently. Rows are distributed over `workers`
/// threads; each cell sums its lines in (n_initial, n_final) order, so the
/// output does not depend on the worker count.
pub fn build_spectrum_grid(
    lines: &[TransitionLine],
    kin: &Kinematics,
    theta_axis: &[f64],
    omega_axis: &[f64],
    kernel: Kernel,
    workers: usize,
) -> Result<SpectrumGrid> {
    check_axis(theta_axis, "theta")?;
    check_axis(omega_axis, "omega")?;
    let mut sorted = lines.to_vec();
    sorted.sort_by_key(|l| (l.n_initial, l.n_final));

    let row = |&theta: &f64| -> Vec<(f64, f64)> {
        let denominator = doppler_denominator(kin, theta);
        omega_axis
            .iter()
            .map(|&omega| {
                let k = kernel.eval(omega, theta);
                (
                    incoherent_cell(&sorted, denominator, omega) * k,
                    coherent_cell(&sorted, denominator, omega) * k,
                )
            })
            .collect()
    };

    let rows: Vec<Vec<(f64, f64)>> = if workers <= 1 {
        theta_axis.iter().map(row).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| theta_axis.par_iter().map(row).collect())
    };

    let cells = theta_axis.len() * omega_axis.len();
    let mut grid = SpectrumGrid {
        theta_axis: theta_axis.to_vec(),
        omega_axis: omega_axis.to_vec(),
        incoherent: Vec::with_capacity(cells),
        coherent: Vec::with_capacity(cells),
        ratio: Vec::with_capacity(cells),
    };
    for (inc, coh) in rows.into_iter().flatten() {
        grid.incoherent.push(inc);
        grid.coherent.push(coh);
        grid.ratio.push(intensity_ratio(coh, inc));
    }
    Ok(grid)
}
