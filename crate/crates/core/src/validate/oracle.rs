//! Second implementations used only for cross-checking. They share no
//! numerical code with the main pipeline.

use num_complex::Complex64;

use crate::kinematics::{BeamCrystalConfig, HBAR_C};
use crate::spectrum::{Kernel, TransitionLine};

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// 1 − β·cosθ written as (1/γ² + β²·sin²θ)/(1 + β·cosθ).
pub fn emission_denominator(gamma: f64, beta: f64, theta: f64) -> f64 {
    let s = theta.sin();
    (1.0 / (gamma * gamma) + beta * beta * s * s) / (1.0 + beta * theta.cos())
}

/// ∫₀ᵀ e^{iΔt} dt as (sin ΔT + i·(1 − cos ΔT))/Δ.
pub fn finite_time_amplitude(detuning: f64, t: f64) -> Complex64 {
    let x = detuning * t;
    if x.abs() < 1e-3 {
        let x2 = x * x;
        Complex64::new(
            t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0),
            t * (x / 2.0 - x * x2 / 24.0),
        )
    } else {
        let h = (0.5 * x).sin();
        Complex64::new(x.sin() / detuning, 2.0 * h * h / detuning)
    }
}

/// (incoherent, coherent) at one cell, summing lines in reverse order with
/// compensated accumulation and the detuning taken from the line centre.
pub fn brute_force_cell(
    lines: &[TransitionLine],
    gamma: f64,
    beta: f64,
    theta: f64,
    omega: f64,
    kernel: Kernel,
) -> (f64, f64) {
    let d = emission_denominator(gamma, beta, theta);
    let mut inc = Neumaier::default();
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for l in lines.iter().rev() {
        let centre = l.delta_eps / d;
        let a = finite_time_amplitude((omega - centre) * d, l.interaction_time);
        let term = l.amplitude * a;
        inc.add(term.re * term.re + term.im * term.im);
        re.add(term.re);
        im.add(term.im);
    }
    let k = match kernel {
        Kernel::Unit => 1.0,
        Kernel::Omega2 => omega * omega,
    };
    let (r, i) = (re.value(), im.value());
    (inc.value() * k, (r * r + i * i) * k)
}

/// Oscillator frequency and length recomputed from the configuration.
pub fn oscillator_scales(cfg: &BeamCrystalConfig) -> (f64, f64) {
    let omega = 2.0 * HBAR_C / cfg.dp * (2.0 * cfg.u0 / cfg.total_energy).sqrt();
    let x1 = HBAR_C / (cfg.total_energy * omega).sqrt();
    (omega, x1)
}

/// Normalized Hermite function from the physicists' polynomial H_n and an
/// explicit 1/sqrt(2ⁿ·n!·sqrt π) factor taken in logarithms.
pub fn hermite_function(n: usize, p: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * p);
    let h = match n {
        0 => h0,
        _ => {
            for k in 1..n {
                let next = 2.0 * p * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = next;
            }
            h1
        }
    };
    let log_norm: f64 =
        (1..=n).map(|j| (2.0 * j as f64).ln()).sum::<f64>() + 0.5 * std::f64::consts::PI.ln();
    h * (-0.5 * p * p - 0.5 * log_norm).exp()
}

/// Full-line overlap of the plane wave e^{ikx}/sqrt(d_p) with harmonic
/// state n, via the Fourier transform of the Hermite function.
pub fn momentum_space_amplitude(cfg: &BeamCrystalConfig, n: usize) -> Complex64 {
    let (_, x1) = oscillator_scales(cfg);
    let k = cfg.total_energy * cfg.theta_in / HBAR_C;
    let i_n = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    i_n * ((2.0 * std::f64::consts::PI * x1 / cfg.dp).sqrt() * hermite_function(n, k * x1))
}
