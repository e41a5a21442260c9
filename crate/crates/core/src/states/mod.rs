//! Transverse bound states of the planar channel.
//!
//! The positron channel is modeled by the harmonic well U0·(2x/d_p)², whose
//! ladder ε_n = Ω(n + 1/2) and Hermite eigenfunctions are known in closed
//! form. Anharmonic wells go through [`solve_bound_states`], a three-point
//! finite-difference discretization of
//! −(ħc)²/(2m_eff)·ψ″ + U·ψ = ε·ψ with Dirichlet walls at the grid ends.

mod dipole;
mod grid;
mod potential;
pub mod tridiag;

pub use dipole::{dipole_matrix_element, DipoleTable};
pub use grid::{trapezoid, GridSpec};
pub use potential::PotentialModel;

use crate::error::{Error, Result};
use crate::kinematics::{Kinematics, HBAR_C};
use tridiag::SymTridiagonal;

/// Minimum number of nodes accepted by the eigensolver.
pub const MIN_SOLVER_POINTS: usize = 2000;

/// Largest boundary value, relative to the peak, tolerated for a state to
/// count as contained in its grid.
pub const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelModel {
    Harmonic,
    Numeric,
}

/// Ordered bound transverse levels, measured from the well bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub model: LevelModel,
    /// Ω [eV]; only for the harmonic ladder.
    pub omega_osc: Option<f64>,
    pub effective_mass: f64,
    pub levels: Vec<f64>,
    pub well_depth: f64,
}

impl LevelSet {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Index of the highest bound level.
    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    /// ε_initial − ε_final. The harmonic ladder returns (Δn)·Ω, so equal
    /// gaps are bitwise equal rather than equal up to rounding.
    pub fn gap(&self, n_initial: usize, n_final: usize) -> f64 {
        match (self.model, self.omega_osc) {
            (LevelModel::Harmonic, Some(omega)) => (n_initial as f64 - n_final as f64) * omega,
            _ => self.levels[n_initial] - self.levels[n_final],
        }
    }
}

/// Sampled real eigenfunction [Å^(−1/2)].
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub level_index: usize,
}

impl Wavefunction {
    pub fn norm_squared(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        trapezoid(&sq, self.grid.step())
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest end value relative to the peak.
    pub fn boundary_tail(&self) -> f64 {
        let (first, last) = (
            self.values[0].abs(),
            self.values[self.values.len() - 1].abs(),
        );
        first.max(last) / self.peak()
    }

    /// Trapezoid normalization plus the sign convention: the outermost lobe
    /// on the positive side is positive.
    fn normalize(&mut self) {
        let norm = self.norm_squared().sqrt();
        let peak = self.peak();
        let outer = self
            .values
            .iter()
            .rev()
            .find(|v| v.abs() > 1e-3 * peak)
            .copied()
            .unwrap_or(1.0);
        let scale = if outer < 0.0 { -1.0 / norm } else { 1.0 / norm };
        self.values.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Equidistant ladder ε_n = Ω(n + 1/2) for n = 0..=floor(U0/Ω − 1/2).
pub fn harmonic_levels(kin: &Kinematics, u0: f64) -> Result<LevelSet> {
    let omega = kin.omega_osc;
    if !(u0 > 0.5 * omega) {
        return Err(Error::EmptyWell {
            well_depth: u0,
            half_omega: 0.5 * omega,
        });
    }
    let mut n_max = (u0 / omega - 0.5).floor() as usize;
    // the ladder must stay strictly below the rim
    while omega * (n_max as f64 + 0.5) >= u0 {
        n_max -= 1;
    }
    Ok(LevelSet {
        model: LevelModel::Harmonic,
        omega_osc: Some(omega),
        effective_mass: kin.effective_mass,
        levels: (0..=n_max).map(|n| omega * (n as f64 + 0.5)).collect(),
        well_depth: u0,
    })
}

/// Normalized Hermite functions φ_0..φ_{count−1} at dimensionless ξ, by the
/// stable three-term recurrence
/// φ_{k+1} = sqrt(2/(k+1))·ξ·φ_k − sqrt(k/(k+1))·φ_{k−1}.
pub fn hermite_functions(count: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    out.push(phi0);
    if count > 1 {
        out.push(std::f64::consts::SQRT_2 * xi * phi0);
    }
    for k in 1..count.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Harmonic eigenfunctions 0..count sampled on `grid`, with length scale
/// x₁ = ħc/sqrt(m_eff·Ω).
pub fn harmonic_wavefunctions(
    count: usize,
    kin: &Kinematics,
    grid: &GridSpec,
) -> Result<Vec<Wavefunction>> {
    let x1 = kin.oscillator_length();
    let scale = x1.sqrt();
    let mut values = vec![Vec::with_capacity(grid.points); count];
    for x in grid.coords() {
        for (n, phi) in hermite_functions(count, x / x1).into_iter().enumerate() {
            values[n].push(phi / scale);
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(n, values)| {
            let mut wf = Wavefunction {
                grid: *grid,
                values,
                level_index: n,
            };
            let tail = wf.boundary_tail();
            if !(tail <= TAIL_TOLERANCE) {
                return Err(Error::GridTooNarrow { n, tail });
            }
            wf.normalize();
            Ok(wf)
        })
        .collect()
}

pub fn harmonic_wavefunction(n: usize, kin: &Kinematics, grid: &GridSpec) -> Result<Wavefunction> {
    let mut all = harmonic_wavefunctions(n + 1, kin, grid)?;
    Ok(all.pop().expect("n + 1 >= 1 states"))
}

/// Grid centered on the channel whose half width covers the classical
/// turning point of level `n_top` plus `margin` oscillator lengths.
pub fn harmonic_grid(n_top: usize, kin: &Kinematics, margin: f64, points: usize) -> GridSpec {
    let x1 = kin.oscillator_length();
    GridSpec::new(x1 * ((2 * n_top + 1) as f64).sqrt() + margin * x1, points)
}

/// All eigenpairs of the discretized transverse Hamiltonian below the
/// potential at the grid boundary.
pub fn solve_bound_states(
    pot: &PotentialModel,
    kin: &Kinematics,
    grid: &GridSpec,
) -> Result<(LevelSet, Vec<Wavefunction>)> {
    if grid.points < MIN_SOLVER_POINTS {
        return Err(Error::GridTooCoarse {
            points: grid.points,
            required: MIN_SOLVER_POINTS,
        });
    }
    let u: Vec<f64> = grid
        .coords()
        .into_iter()
        .map(|x| {
            pot.eval(x)
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::BadPotential {
                    reason: format!("{} potential undefined at x = {x} Å", pot.name()),
                })
        })
        .collect::<Result<_>>()?;
    let h = grid.step();
    let hop = HBAR_C * HBAR_C / (2.0 * kin.effective_mass * h * h);
    let matrix = SymTridiagonal::new(
        u.iter().map(|v| 2.0 * hop + v).collect(),
        vec![-hop; grid.points - 1],
    );
    let cutoff = u[0].min(u[u.len() - 1]);
    let count = matrix.count_below(cutoff);
    if count == 0 {
        return Err(Error::NoBoundStates { cutoff });
    }
    let mut levels = Vec::with_capacity(count);
    let mut states = Vec::with_capacity(count);
    for k in 0..count {
        let eps = matrix.eigenvalue(k);
        let vec = matrix.eigenvector(eps, k)?;
        let mut wf = Wavefunction {
            grid: *grid,
            values: vec,
            level_index: k,
        };
        wf.normalize();
        levels.push(eps);
        states.push(wf);
    }
    Ok((
        LevelSet {
            model: LevelModel::Numeric,
            omega_osc: None,
            effective_mass: kin.effective_mass,
            levels,
            well_depth: cutoff,
        },
        states,
    ))
}

/// Closed-form bound spectrum of U0·tanh²(x/a):
/// ε_n = U0 − (ħc)²/(2m_eff a²)·(s − n)² for 0 ≤ n < s.
pub fn poschl_teller_levels(u0: f64, a: f64, effective_mass: f64) -> Vec<f64> {
    let e_a = HBAR_C * HBAR_C / (2.0 * effective_mass * a * a);
    let s = 0.5 * (-1.0 + (1.0 + 4.0 * u0 / e_a).sqrt());
    (0..)
        .map(|n| n as f64)
        .take_while(|&n| n < s)
        .map(|n| u0 - e_a * (s - n) * (s - n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{make_kinematics, BeamCrystalConfig};

    fn reference() -> Kinematics {
        make_kinematics(&BeamCrystalConfig::reference()).unwrap()
    }

    #[test]
    fn reference_ladder() {
        let kin = reference();
        let ls = harmonic_levels(&kin, 23.0).unwrap();
        assert_eq!(ls.n_max(), 51);
        assert!((ls.levels[0] - 0.220_426_678_876_378_6).abs() < 1e-14);
        assert!(ls.levels.iter().all(|&e| e < ls.well_depth));
        for n in 0..ls.n_max() {
            assert_eq!(ls.gap(n + 1, n), kin.omega_osc);
            assert!((ls.levels[n + 1] - ls.levels[n] - kin.omega_osc).abs() < 1e-14);
        }
    }

    #[test]
    fn shallow_well_is_empty() {
        let kin = reference();
        assert!(matches!(
            harmonic_levels(&kin, kin.omega_osc / 4.0),
            Err(Error::EmptyWell { .. })
        ));
    }

    #[test]
    fn ground_state_width() {
        // rms width x₁/√2 = 0.066454500166994 Å
        let kin = reference();
        let grid = harmonic_grid(0, &kin, 10.0, 4001);
        let wf = harmonic_wavefunction(0, &kin, &grid).unwrap();
        let x2: Vec<f64> = grid
            .coords()
            .iter()
            .zip(&wf.values)
            .map(|(x, v)| x * x * v * v)
            .collect();
        let rms = trapezoid(&x2, grid.step()).sqrt();
        assert!(
            (rms / 0.066_454_500_166_994_05 - 1.0).abs() < 1e-10,
            "{rms}"
        );
    }

    #[test]
    fn parity_and_normalization() {
        let kin = reference();
        let grid = harmonic_grid(51, &kin, 10.0, 8001);
        let wfs = harmonic_wavefunctions(52, &kin, &grid).unwrap();
        let mid = grid.points / 2;
        assert_eq!(wfs[1].values[mid], 0.0);
        for n in [0, 10, 51] {
            assert!((wfs[n].norm_squared() - 1.0).abs() < 1e-10);
        }
        for wf in &wfs {
            let sign = if wf.level_index % 2 == 0 { 1.0 } else { -1.0 };
            let peak = wf.peak();
            for i in 0..grid.points {
                let mirror = wf.values[grid.points - 1 - i];
                assert!((mirror - sign * wf.values[i]).abs() <= 1e-10 * peak);
            }
            // outermost lobe positive
            assert!(
                wf.values
                    .iter()
                    .rev()
                    .find(|v| v.abs() > 1e-3 * peak)
                    .unwrap()
                    > &0.0
            );
        }
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let kin = reference();
        let grid = GridSpec::new(0.2, 2001);
        assert!(matches!(
            harmonic_wavefunction(10, &kin, &grid),
            Err(Error::GridTooNarrow { n: 0, .. }) | Err(Error::GridTooNarrow { .. })
        ));
    }

    #[test]
    fn turning_points_inside_channel() {
        let cfg = BeamCrystalConfig::reference();
        let kin = reference();
        let ls = harmonic_levels(&kin, cfg.u0).unwrap();
        for &eps in &ls.levels {
            let turning = 0.5 * cfg.dp * (eps / cfg.u0).sqrt();
            assert!(turning < 0.5 * cfg.dp);
        }
    }

    #[test]
    fn solver_rejects_coarse_grid() {
        let kin = reference();
        let pot = PotentialModel::Harmonic { u0: 23.0, dp: 1.92 };
        assert!(matches!(
            solve_bound_states(&pot, &kin, &GridSpec::new(1.5, 1999)),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn solver_reports_missing_bound_states() {
        let kin = reference();
        let pot = PotentialModel::Tabulated {
            x: vec![-1.0, 1.0],
            u: vec![5.0, 5.0],
        };
        assert!(matches!(
            solve_bound_states(&pot, &kin, &GridSpec::new(1.0, 2001)),
            Err(Error::NoBoundStates { .. })
        ));
        let short = PotentialModel::Tabulated {
            x: vec![-0.5, 0.5],
            u: vec![5.0, 5.0],
        };
        assert!(matches!(
            solve_bound_states(&short, &kin, &GridSpec::new(1.0, 2001)),
            Err(Error::BadPotential { .. })
        ));
    }

    #[test]
    fn solver_matches_harmonic_ladder() {
        let kin = reference();
        let pot = PotentialModel::Harmonic { u0: 23.0, dp: 1.92 };
        let (ls, wfs) = solve_bound_states(&pot, &kin, &GridSpec::new(1.5, 4000)).unwrap();
        assert!(ls.len() > 20);
        for (n, wf) in wfs.iter().enumerate().take(20) {
            let exact = kin.omega_osc * (n as f64 + 0.5);
            assert!((ls.levels[n] / exact - 1.0).abs() < 1e-4, "n={n}");
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let peak = wf.peak();
            let p = wf.grid.points;
            for i in 0..p {
                assert!((wf.values[p - 1 - i] - sign * wf.values[i]).abs() <= 1e-10 * peak);
            }
        }
    }

    #[test]
    fn poschl_teller_closed_form_count() {
        let kin = reference();
        let levels = poschl_teller_levels(23.0, 0.1, kin.effective_mass);
        assert_eq!(levels.len(), 11);
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
        assert!(levels.iter().all(|&e| e > 0.0 && e < 23.0));
    }

    #[test]
    fn hermite_values() {
        // φ_2(ξ) = π^{-1/4}(2ξ² − 1)e^{−ξ²/2}/√2
        let xi = 0.8;
        let phi = hermite_functions(3, xi);
        let exact =
            std::f64::consts::PI.powf(-0.25) * (2.0 * xi * xi - 1.0) * (-0.5 * xi * xi).exp()
                / std::f64::consts::SQRT_2;
        assert!((phi[2] - exact).abs() < 1e-15);
    }
}
