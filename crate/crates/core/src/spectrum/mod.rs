//! Spectral-angular distribution of the emitted photons, assembled two ways:
//!
//! * incoherent: Σ_j |A_j|²·|a(Δ_j, T)|²·K(ω, θ), one term per transition;
//! * coherent:   |Σ_j A_j·a(Δ_j, T)|²·K(ω, θ), amplitudes summed first.
//!
//! A_j = c_n·M_{n,n−1} is the line amplitude and a(Δ, T) the finite-time
//! emission amplitude. The detuning Δ_j = ω·(1 − β·cosθ) − Δε_j is the
//! phase-mismatch rate seen by the particle, so it vanishes exactly on the
//! Doppler line ω_j(θ) = Δε_j/(1 − β·cosθ) and the line width in ω is
//! 2π/(T·(1 − β·cosθ)).

mod assemble;
mod peaks;
mod summary;

pub use assemble::{build_spectrum_grid, SpectrumGrid, ZERO_INTENSITY};
pub use peaks::{find_peaks, Peak};
pub use summary::{interference_summary, InterferenceSummary};

use num_complex::Complex64;

use crate::kinematics::{doppler_denominator, BeamCrystalConfig, Kinematics, HBAR_C};
use crate::populations::AmplitudeVector;
use crate::states::{DipoleTable, LevelSet};

/// Matrix elements below this fraction of the table maximum count as
/// forbidden.
pub const SELECTION_THRESHOLD: f64 = 1e-10;

/// One radiative channel n_initial → n_final.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionLine {
    pub n_initial: usize,
    pub n_final: usize,
    /// ε_initial − ε_final [eV].
    pub delta_eps: f64,
    /// c_n·M_{n_final, n_initial} [arb·Å].
    pub amplitude: Complex64,
    /// Traversal time T [eV⁻¹].
    pub interaction_time: f64,
}

/// Angular-spectral weight K(ω, θ). It multiplies both summation rules and
/// cancels in their ratio; it is not the full QED kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    Unit,
    #[default]
    Omega2,
}

impl Kernel {
    pub fn eval(self, omega: f64, _theta: f64) -> f64 {
        match self {
            Kernel::Unit => 1.0,
            Kernel::Omega2 => omega * omega,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Unit => "unit",
            Kernel::Omega2 => "omega2",
        }
    }
}

/// Crystal traversal time L/ħc [eV⁻¹].
pub fn interaction_time(cfg: &BeamCrystalConfig) -> f64 {
    cfg.crystal_length / HBAR_C
}

/// Nearest-neighbor lines n → n − 1 for every n ≥ 1 with an allowed
/// matrix element.
pub fn build_lines(
    av: &AmplitudeVector,
    levels: &LevelSet,
    matels: &DipoleTable,
    cfg: &BeamCrystalConfig,
) -> Vec<TransitionLine> {
    build_lines_with(av, levels, matels, cfg, 1)
}

/// Downward lines with 1 ≤ n_initial − n_final ≤ `max_delta_n`, ordered by
/// (n_initial, n_final).
pub fn build_lines_with(
    av: &AmplitudeVector,
    levels: &LevelSet,
    matels: &DipoleTable,
    cfg: &BeamCrystalConfig,
    max_delta_n: usize,
) -> Vec<TransitionLine> {
    let count = levels.len().min(av.len()).min(matels.size());
    let threshold = SELECTION_THRESHOLD * matels.max_abs();
    let t = interaction_time(cfg);
    let mut lines = Vec::new();
    for n_initial in 1..count {
        for n_final in n_initial.saturating_sub(max_delta_n)..n_initial {
            let m = matels.get(n_final, n_initial);
            if m.abs() <= threshold {
                continue;
            }
            lines.push(TransitionLine {
                n_initial,
                n_final,
                delta_eps: levels.gap(n_initial, n_final),
                amplitude: av.amplitudes[n_initial] * m,
                interaction_time: t,
            });
        }
    }
    lines
}

/// a(Δ, T) = ∫₀ᵀ e^{iΔt} dt = e^{iΔT/2}·2·sin(ΔT/2)/Δ, equal to T at Δ = 0.
pub fn amplitude_profile(detuning: f64, t: f64) -> Complex64 {
    let half = 0.5 * detuning * t;
    let sinc = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(t * sinc, half)
}

/// Doppler-frame detuning ω·(1 − β·cosθ) − Δε.
fn detuning(omega: f64, denominator: f64, line: &TransitionLine) -> f64 {
    omega * denominator - line.delta_eps
}

/// Incoherent sum at one (θ, ω) with a precomputed 1 − β·cosθ.
pub(crate) fn incoherent_cell(lines: &[TransitionLine], denominator: f64, omega: f64) -> f64 {
    lines
        .iter()
        .map(|l| {
            l.amplitude.norm_sqr()
                * amplitude_profile(detuning(omega, denominator, l), l.interaction_time).norm_sqr()
        })
        .sum()
}

pub(crate) fn coherent_cell(lines: &[TransitionLine], denominator: f64, omega: f64) -> f64 {
    lines
        .iter()
        .map(|l| {
            l.amplitude * amplitude_profile(detuning(omega, denominator, l), l.interaction_time)
        })
        .sum::<Complex64>()
        .norm_sqr()
}

/// Σ_j |A_j|²·|a(Δ_j, T)|²·K(ω, θ).
pub fn intensity_incoherent(
    lines: &[TransitionLine],
    kin: &Kinematics,
    theta: f64,
    omega: f64,
    kernel: Kernel,
) -> f64 {
    incoherent_cell(lines, doppler_denominator(kin, theta), omega) * kernel.eval(omega, theta)
}

/// |Σ_j A_j·a(Δ_j, T)|²·K(ω, θ).
pub fn intensity_coherent(
    lines: &[TransitionLine],
    kin: &Kinematics,
    theta: f64,
    omega: f64,
    kernel: Kernel,
) -> f64 {
    coherent_cell(lines, doppler_denominator(kin, theta), omega) * kernel.eval(omega, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{doppler_exact, make_kinematics};
    use crate::states::harmonic_levels;
    use std::f64::consts::PI;

    fn reference() -> (BeamCrystalConfig, Kinematics, LevelSet) {
        let cfg = BeamCrystalConfig::reference();
        let kin = make_kinematics(&cfg).unwrap();
        let ls = harmonic_levels(&kin, cfg.u0).unwrap();
        (cfg, kin, ls)
    }

    fn line(amp: f64, delta_eps: f64) -> TransitionLine {
        TransitionLine {
            n_initial: 1,
            n_final: 0,
            delta_eps,
            amplitude: Complex64::new(amp, 0.0),
            interaction_time: 101.354_614_353_587_9,
        }
    }

    #[test]
    fn profile_limits() {
        assert_eq!(amplitude_profile(0.0, 7.5), Complex64::new(7.5, 0.0));
        let t = 3.0;
        let zero = amplitude_profile(2.0 * PI / t, t);
        assert!(zero.norm() < 1e-14);
        // continuity across the series switch
        let half = 0.999e-4;
        let a = amplitude_profile(half * 2.0 / t, t);
        let direct = Complex64::from_polar(t * half.sin() / half, half);
        assert!((a - direct).norm() < 1e-15 * t);
    }

    #[test]
    fn reference_oscillation_count() {
        // N = L·Ω/(2π·ħc) = 7.1114442559
        let (cfg, kin, _) = reference();
        let n = cfg.crystal_length * kin.omega_osc / (2.0 * PI * HBAR_C);
        assert!((n - 7.111_444_255_902_783).abs() < 1e-12);
        // fractional half-width of the line in ω equals 1/N
        let t = interaction_time(&cfg);
        let d = doppler_denominator(&kin, 0.0);
        let width = 2.0 * PI / (t * d);
        let centre = doppler_exact(kin.omega_osc, &kin, 0.0);
        assert!((width / centre - 1.0 / n).abs() < 1e-12);
    }

    #[test]
    fn harmonic_lines_are_equidistant() {
        let (cfg, kin, ls) = reference();
        let table = DipoleTable::harmonic(ls.len(), kin.oscillator_length());
        let av = AmplitudeVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); ls.len()]);
        let lines = build_lines(&av, &ls, &table, &cfg);
        assert_eq!(lines.len(), 51);
        assert!(lines
            .iter()
            .all(|l| l.delta_eps == kin.omega_osc && l.n_final + 1 == l.n_initial));
        // Δn = 3 is forbidden for the harmonic table
        assert_eq!(build_lines_with(&av, &ls, &table, &cfg, 3).len(), 51);
    }

    #[test]
    fn single_population_gives_one_live_line() {
        let (cfg, kin, ls) = reference();
        let table = DipoleTable::harmonic(ls.len(), kin.oscillator_length());
        let av = AmplitudeVector::single(3, ls.len());
        let live: Vec<_> = build_lines(&av, &ls, &table, &cfg)
            .into_iter()
            .filter(|l| l.amplitude.norm() > 0.0)
            .collect();
        assert_eq!(live.len(), 1);
        assert_eq!((live[0].n_initial, live[0].n_final), (3, 2));
    }

    #[test]
    fn intensities_at_line_centre() {
        let (_, kin, _) = reference();
        assert_eq!(
            intensity_incoherent(&[], &kin, 0.0, 3e6, Kernel::Omega2),
            0.0
        );
        let l = line(0.3, kin.omega_osc);
        let t = l.interaction_time;
        for theta in [0.0, 1.0 / kin.gamma] {
            let w = doppler_exact(kin.omega_osc, &kin, theta);
            let inc = intensity_incoherent(&[l], &kin, theta, w, Kernel::Omega2);
            let expected = 0.09 * t * t * w * w;
            assert!((inc / expected - 1.0).abs() < 1e-12);
            let coh = intensity_coherent(&[l], &kin, theta, w, Kernel::Omega2);
            assert!((coh / inc - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn co_located_lines_enhance_by_count() {
        let (_, kin, _) = reference();
        let w = doppler_exact(kin.omega_osc, &kin, 0.0);
        for n in [2usize, 5, 52] {
            let lines = vec![line(0.2, kin.omega_osc); n];
            let coh = intensity_coherent(&lines, &kin, 0.0, w, Kernel::Unit);
            let inc = intensity_incoherent(&lines, &kin, 0.0, w, Kernel::Unit);
            assert!((coh / inc - n as f64).abs() < 1e-12 * n as f64);
        }
    }
}
