//! Beam and channel parameters, relativistic factors and Doppler kinematics.
//!
//! Unit system: energies in eV, lengths in Å, angles in rad. Every conversion
//! between lengths and inverse energies goes through [`HBAR_C`].

use crate::error::{Error, Result};

/// ħc in eV·Å.
pub const HBAR_C: f64 = 1973.269804;

/// Electron (and positron) rest energy in eV.
pub const ELECTRON_MASS: f64 = 510_998.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Positron,
    Electron,
}

impl Species {
    pub fn charge_sign(self) -> i32 {
        match self {
            Species::Positron => 1,
            Species::Electron => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Species::Positron => "positron",
            Species::Electron => "electron",
        }
    }
}

/// Incident beam and planar channel.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamCrystalConfig {
    pub species: Species,
    /// Total energy E [eV].
    pub total_energy: f64,
    /// Rest energy m [eV].
    pub rest_mass: f64,
    /// Interplanar distance d_p [Å].
    pub dp: f64,
    /// Well depth U0 [eV].
    pub u0: f64,
    /// Crystal thickness along the beam [Å].
    pub crystal_length: f64,
    /// Incidence angle with respect to the planes [rad].
    pub theta_in: f64,
}

impl BeamCrystalConfig {
    /// 1 GeV positrons in a 1.92 Å / 23 eV planar channel, 20 µm thick,
    /// at normal incidence to the channel.
    pub fn reference() -> Self {
        BeamCrystalConfig {
            species: Species::Positron,
            total_energy: 1.0e9,
            rest_mass: ELECTRON_MASS,
            dp: 1.92,
            u0: 23.0,
            crystal_length: 2.0e5,
            theta_in: 0.0,
        }
    }

    pub fn with_theta_in(mut self, theta_in: f64) -> Self {
        self.theta_in = theta_in;
        self
    }

    /// Checks everything except the incidence angle.
    pub fn validate_channel(&self) -> Result<()> {
        if !(self.total_energy > self.rest_mass) {
            return Err(Error::NonRelativistic {
                total_energy: self.total_energy,
                rest_mass: self.rest_mass,
            });
        }
        for (field, value) in [
            ("dp", self.dp),
            ("u0", self.u0),
            ("crystal_length", self.crystal_length),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::EmptyChannel { field, value });
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_channel()?;
        let psi_c = acceptance_angle(self);
        if !(self.theta_in.abs() < psi_c) {
            return Err(Error::AboveBarrier {
                theta_in: self.theta_in,
                psi_c,
            });
        }
        Ok(())
    }
}

/// Derived relativistic quantities for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub gamma: f64,
    /// Longitudinal velocity p∥/E, computed exactly from γ.
    pub beta: f64,
    /// Transverse oscillation quantum Ω [eV].
    pub omega_osc: f64,
    /// Transverse inertia γ·m [eV].
    pub effective_mass: f64,
}

impl Kinematics {
    /// Oscillator length ħc/sqrt(m_eff·Ω) [Å].
    pub fn oscillator_length(&self) -> f64 {
        HBAR_C / (self.effective_mass * self.omega_osc).sqrt()
    }

    /// 1/(1 − β), evaluated without cancellation as γ²(1 + β).
    pub fn forward_doppler_factor(&self) -> f64 {
        self.gamma * self.gamma * (1.0 + self.beta)
    }
}

/// Relativistic factors and the harmonic channel frequency
/// Ω = (2/d_p)·sqrt(2U0/E)·ħc.
///
/// The incidence angle is not checked here; see [`BeamCrystalConfig::validate`].
pub fn make_kinematics(cfg: &BeamCrystalConfig) -> Result<Kinematics> {
    cfg.validate_channel()?;
    let gamma = cfg.total_energy / cfg.rest_mass;
    // sqrt(γ² − 1)/γ keeps full relative precision for β close to 1
    let beta = ((gamma - 1.0) * (gamma + 1.0)).sqrt() / gamma;
    let omega_osc = (2.0 / cfg.dp) * (2.0 * cfg.u0 / cfg.total_energy).sqrt() * HBAR_C;
    Ok(Kinematics {
        gamma,
        beta,
        omega_osc,
        effective_mass: gamma * cfg.rest_mass,
    })
}

/// Critical channeling angle ψ_c = sqrt(2·U0/E).
pub fn acceptance_angle(cfg: &BeamCrystalConfig) -> f64 {
    (2.0 * cfg.u0 / cfg.total_energy).sqrt()
}

/// Lab-frame photon energy for a transverse level gap `delta_eps` emitted at
/// angle `theta`: ω = Δε/(1 − β·cosθ).
pub fn doppler_exact(delta_eps: f64, kin: &Kinematics, theta: f64) -> f64 {
    debug_assert!(delta_eps >= 0.0);
    debug_assert!((0.0..=std::f64::consts::PI).contains(&theta));
    delta_eps / doppler_denominator(kin, theta)
}

/// 1 − β·cosθ, rewritten near θ = 0 to avoid subtracting nearly equal numbers.
pub fn doppler_denominator(kin: &Kinematics, theta: f64) -> f64 {
    // 1 − β cosθ = (1 − β) + β(1 − cosθ) = 1/(γ²(1+β)) + 2β sin²(θ/2)
    let half = (0.5 * theta).sin();
    1.0 / kin.forward_doppler_factor() + 2.0 * kin.beta * half * half
}

/// Small-angle, high-γ form ω = 2γ²·Δn·Ω/(1 + θ²γ²).
pub fn doppler_forward(delta_n: u32, kin: &Kinematics, theta: f64) -> f64 {
    debug_assert!(delta_n >= 1);
    let g2 = kin.gamma * kin.gamma;
    2.0 * g2 * f64::from(delta_n) * kin.omega_osc / (1.0 + theta * theta * g2)
}
