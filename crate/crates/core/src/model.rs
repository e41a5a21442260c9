//! Levels → entry amplitudes → dipole table → transition lines for one
//! beam/channel configuration.

use crate::error::Result;
use crate::kinematics::{make_kinematics, BeamCrystalConfig, Kinematics};
use crate::populations::{entry_amplitudes, AmplitudeVector};
use crate::spectrum::{build_lines, TransitionLine};
use crate::states::{
    harmonic_levels, harmonic_wavefunctions, solve_bound_states, DipoleTable, GridSpec, LevelSet,
    PotentialModel, Wavefunction,
};

#[derive(Debug, Clone)]
pub struct ChannelModel {
    pub cfg: BeamCrystalConfig,
    pub kin: Kinematics,
    pub potential: PotentialModel,
    pub levels: LevelSet,
    pub wavefns: Vec<Wavefunction>,
    pub amplitudes: AmplitudeVector,
    pub dipoles: DipoleTable,
    pub lines: Vec<TransitionLine>,
}

impl ChannelModel {
    /// The harmonic well uses the closed-form ladder, Hermite states and
    /// ladder-operator matrix elements; any other potential goes through the
    /// finite-difference eigensolver and quadrature matrix elements.
    pub fn build(
        cfg: &BeamCrystalConfig,
        potential: &PotentialModel,
        grid: &GridSpec,
    ) -> Result<Self> {
        cfg.validate()?;
        let kin = make_kinematics(cfg)?;
        let (levels, wavefns, dipoles) = match potential {
            PotentialModel::Harmonic { .. } => {
                let levels = harmonic_levels(&kin, cfg.u0)?;
                let wavefns = harmonic_wavefunctions(levels.len(), &kin, grid)?;
                let dipoles = DipoleTable::harmonic(levels.len(), kin.oscillator_length());
                (levels, wavefns, dipoles)
            }
            other => {
                let (levels, wavefns) = solve_bound_states(other, &kin, grid)?;
                let dipoles = DipoleTable::from_wavefunctions(&wavefns)?;
                (levels, wavefns, dipoles)
            }
        };
        let amplitudes = entry_amplitudes(cfg, &levels, &wavefns)?;
        let lines = build_lines(&amplitudes, &levels, &dipoles, cfg);
        Ok(ChannelModel {
            cfg: cfg.clone(),
            kin,
            potential: potential.clone(),
            levels,
            wavefns,
            amplitudes,
            dipoles,
            lines,
        })
    }

    pub fn harmonic(cfg: &BeamCrystalConfig, grid: &GridSpec) -> Result<Self> {
        Self::build(
            cfg,
            &PotentialModel::Harmonic {
                u0: cfg.u0,
                dp: cfg.dp,
            },
            grid,
        )
    }
}
