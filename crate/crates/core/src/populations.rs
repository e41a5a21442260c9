//! Entry amplitudes c_n: the incident transverse plane wave projected onto
//! the in-channel bound states at the crystal surface.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kinematics::{BeamCrystalConfig, HBAR_C};
use crate::states::{GridSpec, LevelSet, Wavefunction};

/// Captured fractions below this raise the `low_capture` flag.
pub const LOW_CAPTURE_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    /// c_n, index-aligned with the level set, normalized to Σ|c_n|² = 1.
    pub amplitudes: Vec<Complex64>,
    /// Σ|ĉ_n|² before renormalization.
    pub captured_fraction: f64,
    pub theta_in: f64,
    pub low_capture: bool,
}

impl AmplitudeVector {
    /// All weight in level `n`.
    pub fn single(n: usize, len: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        AmplitudeVector {
            amplitudes,
            captured_fraction: 1.0,
            theta_in: 0.0,
            low_capture: false,
        }
    }

    /// Normalizes arbitrary amplitudes; the captured fraction is taken as 1.
    pub fn from_amplitudes(raw: Vec<Complex64>) -> Self {
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        AmplitudeVector {
            amplitudes: raw.into_iter().map(|c| c / norm).collect(),
            captured_fraction: 1.0,
            theta_in: 0.0,
            low_capture: false,
        }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Every amplitude multiplied by e^{iφ}.
    pub fn rotated(&self, phase: f64) -> Self {
        let w = Complex64::from_polar(1.0, phase);
        AmplitudeVector {
            amplitudes: self.amplitudes.iter().map(|c| c * w).collect(),
            ..self.clone()
        }
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Σ|c_n|²·ε_n.
    pub fn mean_energy(&self, levels: &LevelSet) -> f64 {
        self.amplitudes
            .iter()
            .zip(&levels.levels)
            .map(|(c, e)| c.norm_sqr() * e)
            .sum()
    }
}

pub fn captured_fraction(av: &AmplitudeVector) -> f64 {
    av.captured_fraction
}

/// Projects the plane wave exp(i·p_x·x/ħc)/sqrt(d_p), p_x = E·θ_in, over
/// one channel period [−d_p/2, d_p/2] onto each bound state, then
/// renormalizes onto the bound subspace.
pub fn entry_amplitudes(
    cfg: &BeamCrystalConfig,
    levels: &LevelSet,
    wavefns: &[Wavefunction],
) -> Result<AmplitudeVector> {
    entry_amplitudes_with_phase(cfg, levels, wavefns, 0.0)
}

/// As [`entry_amplitudes`] with the incident wave carrying an extra global
/// phase e^{iφ}.
pub fn entry_amplitudes_with_phase(
    cfg: &BeamCrystalConfig,
    levels: &LevelSet,
    wavefns: &[Wavefunction],
    phase: f64,
) -> Result<AmplitudeVector> {
    cfg.validate()?;
    if wavefns.len() != levels.len() {
        return Err(Error::Misaligned {
            amplitudes: wavefns.len(),
            levels: levels.len(),
        });
    }
    let Some(first) = wavefns.first() else {
        return Err(Error::NoBoundStates {
            cutoff: levels.well_depth,
        });
    };
    let grid = first.grid;
    if wavefns.iter().any(|w| w.grid != grid) {
        return Err(Error::GridMismatch);
    }
    let k = cfg.total_energy * cfg.theta_in / HBAR_C;
    let nodes = window_weights(&grid, 0.5 * cfg.dp);
    let prefactor = Complex64::from_polar(1.0 / cfg.dp.sqrt(), phase);
    let plane: Vec<Complex64> = nodes
        .iter()
        .map(|&(x, w)| Complex64::from_polar(w, k * x) * prefactor)
        .collect();

    let raw: Vec<Complex64> = wavefns
        .par_iter()
        .map(|wf| {
            nodes
                .iter()
                .zip(&plane)
                .fold(Complex64::new(0.0, 0.0), |acc, (&(x, _), p)| {
                    acc + p * sample(wf, &grid, x)
                })
        })
        .collect();

    let captured: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
    let scale = 1.0 / captured.sqrt();
    Ok(AmplitudeVector {
        amplitudes: raw.into_iter().map(|c| c * scale).collect(),
        captured_fraction: captured,
        theta_in: cfg.theta_in,
        low_capture: captured < LOW_CAPTURE_THRESHOLD,
    })
}

/// Linear interpolation of a sampled state; exact at nodes.
fn sample(wf: &Wavefunction, grid: &GridSpec, x: f64) -> f64 {
    let pos = (x + grid.half_width) / grid.step();
    let i = pos.floor().clamp(0.0, (grid.points - 2) as f64) as usize;
    let t = pos - i as f64;
    if t.abs() < 1e-9 {
        return wf.values[i];
    }
    if (1.0 - t).abs() < 1e-9 {
        return wf.values[i + 1];
    }
    wf.values[i] * (1.0 - t) + wf.values[i + 1] * t
}

/// Quadrature nodes and weights for ∫_{−half}^{half} on `grid`.
///
/// When both window ends are grid nodes the rule is composite Simpson (with
/// a closing 3/8 panel for an odd interval count); otherwise interior nodes
/// use the trapezoid rule and the partial end segments are integrated with
/// linearly interpolated end values.
pub(crate) fn window_weights(grid: &GridSpec, half: f64) -> Vec<(f64, f64)> {
    let h = grid.step();
    let half = half.min(grid.half_width);
    if let (Some(lo), Some(hi)) = (grid.node_at(-half), grid.node_at(half)) {
        if hi - lo >= 2 {
            return simpson_weights(lo, hi, h)
                .into_iter()
                .map(|(i, w)| (grid.x(i), w))
                .collect();
        }
    }
    let inside: Vec<usize> = (0..grid.points)
        .filter(|&i| grid.x(i).abs() < half)
        .collect();
    let mut out = Vec::with_capacity(inside.len() + 2);
    let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
        return vec![(-half, half), (half, half)];
    };
    let left = grid.x(first) + half;
    let right = half - grid.x(last);
    out.push((-half, 0.5 * left));
    for &i in &inside {
        let mut w = h;
        if i == first {
            w = 0.5 * h + 0.5 * left;
        }
        if i == last {
            w = if first == last {
                0.5 * (left + right)
            } else {
                0.5 * h + 0.5 * right
            };
        }
        out.push((grid.x(i), w));
    }
    out.push((half, 0.5 * right));
    out
}

fn simpson_weights(lo: usize, hi: usize, h: f64) -> Vec<(usize, f64)> {
    let intervals = hi - lo;
    let mut w = vec![0.0; intervals + 1];
    let simpson_end = if intervals.is_multiple_of(2) {
        intervals
    } else {
        intervals - 3
    };
    for j in (0..simpson_end).step_by(2) {
        w[j] += h / 3.0;
        w[j + 1] += 4.0 * h / 3.0;
        w[j + 2] += h / 3.0;
    }
    if simpson_end != intervals {
        let s = simpson_end;
        let c = 3.0 * h / 8.0;
        w[s] += c;
        w[s + 1] += 3.0 * c;
        w[s + 2] += 3.0 * c;
        w[s + 3] += c;
    }
    w.into_iter()
        .enumerate()
        .map(|(j, w)| (lo + j, w))
        .collect()
}
