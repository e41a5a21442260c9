//! Built-in verification suite. Each check pits the pipeline against an
//! analytic closed form or an independent second implementation and
//! reports pass/fail with the measured figure.

pub mod oracle;

use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::error::Result;
use crate::kinematics::{
    acceptance_angle, doppler_exact, doppler_forward, make_kinematics, BeamCrystalConfig,
    ELECTRON_MASS,
};
use crate::model::ChannelModel;
use crate::output::spectrum_csv;
use crate::populations::{entry_amplitudes, AmplitudeVector};
use crate::spectrum::{
    build_lines, build_spectrum_grid, find_peaks, intensity_coherent, intensity_incoherent,
    interaction_time, interference_summary, Kernel, SpectrumGrid, TransitionLine,
};
use crate::states::{
    dipole_matrix_element, harmonic_levels, harmonic_wavefunctions, poschl_teller_levels,
    solve_bound_states, GridSpec, PotentialModel,
};

use oracle::{brute_force_cell, momentum_space_amplitude, oscillator_scales};

/// Pöschl–Teller width used by the non-equidistant configuration [Å].
pub const PT_WIDTH: f64 = 0.1;
/// integrated_rel_diff of the Pöschl–Teller configuration must stay below
/// this value, fixed from the brute-force run (0.051888).
pub const PT_REL_DIFF_LIMIT: f64 = 0.0519;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        Check {
            id,
            name,
            passed,
            detail,
        }
    }
}

/// Reference positron beam entering at half the acceptance angle.
pub fn tilted_reference() -> BeamCrystalConfig {
    let cfg = BeamCrystalConfig::reference();
    let psi = acceptance_angle(&cfg);
    cfg.with_theta_in(0.5 * psi)
}

pub fn reference_grid(cfg: &BeamCrystalConfig) -> GridSpec {
    GridSpec::new(cfg.dp, 8001)
}

/// θ from 0 to 3/γ, ω over ±50 % of the forward first-harmonic energy.
pub fn reference_axes(
    model: &ChannelModel,
    n_theta: usize,
    n_omega: usize,
) -> (Vec<f64>, Vec<f64>) {
    let kin = &model.kin;
    let centre = doppler_exact(kin.omega_osc, kin, 0.0);
    let theta_max = 3.0 / kin.gamma;
    let theta = (0..n_theta)
        .map(|i| theta_max * i as f64 / (n_theta - 1) as f64)
        .collect();
    let omega = (0..n_omega)
        .map(|j| centre * (0.5 + j as f64 / (n_omega - 1) as f64))
        .collect();
    (theta, omega)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn check_kinematics() -> Check {
    let (worst, elapsed) = timed(|| {
        let mut worst: f64 = 0.0;
        for gamma in [100.0, 1956.95, 1e4] {
            let cfg = BeamCrystalConfig {
                total_energy: gamma * ELECTRON_MASS,
                ..BeamCrystalConfig::reference()
            };
            let Ok(kin) = make_kinematics(&cfg) else {
                return f64::INFINITY;
            };
            let rel = (doppler_exact(kin.omega_osc, &kin, 0.0) / doppler_forward(1, &kin, 0.0)
                - 1.0)
                .abs();
            worst = worst.max(rel * kin.gamma * kin.gamma);
        }
        worst
    });
    Check::new(
        1,
        "kinematics consistency",
        worst < 1.0 && elapsed < Duration::from_secs(1),
        format!(
            "max γ²·|exact/forward − 1| = {worst:.3e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn check_ladder() -> Check {
    let cfg = BeamCrystalConfig::reference();
    let (omega, _) = oscillator_scales(&cfg);
    let result = make_kinematics(&cfg).and_then(|kin| Ok((kin, harmonic_levels(&kin, cfg.u0)?)));
    let Ok((kin, levels)) = result else {
        return Check::new(2, "harmonic ladder", false, "pipeline error".into());
    };
    let rel = (kin.omega_osc / omega - 1.0).abs();
    // 0.4409 is quoted to four figures
    let rounded = (kin.omega_osc - 0.4409).abs() <= 5e-5;
    Check::new(
        2,
        "harmonic ladder",
        rel < 1e-4 && rounded && levels.n_max() == 51,
        format!(
            "Ω = {:.10} eV (oracle rel {rel:.1e}), n_max = {}",
            kin.omega_osc,
            levels.n_max()
        ),
    )
}

/// Largest relative level error of the solver against `exact` on `grid`.
fn solver_error(pot: &PotentialModel, exact: &[f64], grid: &GridSpec) -> Result<f64> {
    let kin = make_kinematics(&BeamCrystalConfig::reference())?;
    let (levels, _) = solve_bound_states(pot, &kin, grid)?;
    if levels.len() < exact.len() {
        return Ok(f64::INFINITY);
    }
    Ok(exact
        .iter()
        .zip(&levels.levels)
        .map(|(e, s)| (s / e - 1.0).abs())
        .fold(0.0, f64::max))
}

fn check_eigensolver() -> Check {
    let run = || -> Result<[(f64, f64); 2]> {
        let cfg = BeamCrystalConfig::reference();
        let kin = make_kinematics(&cfg)?;
        let harmonic = PotentialModel::Harmonic {
            u0: cfg.u0,
            dp: cfg.dp,
        };
        let ladder: Vec<f64> = (0..20).map(|n| kin.omega_osc * (n as f64 + 0.5)).collect();
        let pt = PotentialModel::PoschlTeller {
            u0: cfg.u0,
            a: PT_WIDTH,
        };
        let pt_exact = poschl_teller_levels(cfg.u0, PT_WIDTH, kin.effective_mass);
        let coarse = GridSpec::new(1.5, 4000);
        let fine = coarse.refined();
        Ok([
            (
                solver_error(&harmonic, &ladder, &coarse)?,
                solver_error(&harmonic, &ladder, &fine)?,
            ),
            (
                solver_error(&pt, &pt_exact, &coarse)?,
                solver_error(&pt, &pt_exact, &fine)?,
            ),
        ])
    };
    let (result, elapsed) = timed(run);
    let Ok(errors) = result else {
        return Check::new(
            3,
            "eigensolver vs closed forms",
            false,
            format!("{result:?}"),
        );
    };
    let ok = errors
        .iter()
        .all(|&(c, f)| c < 1e-4 && (3.5..=4.5).contains(&(c / f)));
    Check::new(
        3,
        "eigensolver vs closed forms",
        ok && elapsed < Duration::from_secs(10),
        format!(
            "harmonic {:.2e} (ratio {:.2}), Pöschl–Teller {:.2e} (ratio {:.2}), {:.2} s",
            errors[0].0,
            errors[0].0 / errors[0].1,
            errors[1].0,
            errors[1].0 / errors[1].1,
            elapsed.as_secs_f64()
        ),
    )
}

fn check_selection_rules() -> Check {
    let run = || -> Result<(f64, f64, f64)> {
        let cfg = BeamCrystalConfig::reference();
        let kin = make_kinematics(&cfg)?;
        let grid = reference_grid(&cfg);
        let x1 = kin.oscillator_length();
        let levels = harmonic_levels(&kin, cfg.u0)?;
        let harmonic = harmonic_wavefunctions(levels.len(), &kin, &grid)?;
        let (_, pt) = solve_bound_states(
            &PotentialModel::PoschlTeller {
                u0: cfg.u0,
                a: PT_WIDTH,
            },
            &kin,
            &grid,
        )?;
        let mut parity: f64 = 0.0;
        for states in [&harmonic, &pt] {
            for (i, a) in states.iter().enumerate() {
                for b in states.iter().skip(i).step_by(2) {
                    parity = parity.max(dipole_matrix_element(a, b)?.abs() / x1);
                }
            }
        }
        let straight = entry_amplitudes(&cfg, &levels, &harmonic)?;
        let odd = straight
            .amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let base = dipole_matrix_element(&harmonic[0], &harmonic[1])?;
        let mut ladder: f64 = 0.0;
        for n in 1..harmonic.len() {
            let m = dipole_matrix_element(&harmonic[n - 1], &harmonic[n])?;
            ladder = ladder.max((m / base / (n as f64).sqrt() - 1.0).abs());
        }
        Ok((parity, odd, ladder))
    };
    match run() {
        Ok((parity, odd, ladder)) => Check::new(
            4,
            "selection rules and parity",
            parity < 1e-10 && odd < 1e-12 && ladder < 1e-6,
            format!("equal parity {parity:.1e}·x₁, |c_odd| {odd:.1e}, sqrt(n) ladder {ladder:.1e}"),
        ),
        Err(e) => Check::new(4, "selection rules and parity", false, e.to_string()),
    }
}

fn check_entry_amplitudes() -> Check {
    let run = || -> Result<(f64, f64, usize)> {
        let mut worst: f64 = 0.0;
        let mut norm: f64 = 0.0;
        let mut compared = 0;
        for cfg in [BeamCrystalConfig::reference(), tilted_reference()] {
            let model = ChannelModel::harmonic(&cfg, &reference_grid(&cfg))?;
            let av = &model.amplitudes;
            norm = norm.max((av.populations().iter().sum::<f64>() - 1.0).abs());
            let scale = av.captured_fraction.sqrt();
            let grid = model.wavefns[0].grid;
            let edge = grid.node_at(0.5 * cfg.dp).expect("window edge is a node");
            for (n, wf) in model.wavefns.iter().enumerate() {
                if wf.values[edge].abs() >= 1e-8 * wf.peak() {
                    continue;
                }
                let exact = momentum_space_amplitude(&cfg, n);
                if exact.norm() == 0.0 {
                    worst = worst.max((av.amplitudes[n] * scale).norm());
                } else {
                    worst = worst.max(((av.amplitudes[n] * scale - exact) / exact).norm());
                }
                compared += 1;
            }
        }
        Ok((worst, norm, compared))
    };
    match run() {
        Ok((worst, norm, compared)) => Check::new(
            5,
            "entry amplitudes vs momentum-space oracle",
            compared > 0 && worst < 1e-6 && norm < 1e-12,
            format!("{compared} contained states, max rel {worst:.2e}, |Σ|c|² − 1| {norm:.1e}"),
        ),
        Err(e) => Check::new(
            5,
            "entry amplitudes vs momentum-space oracle",
            false,
            e.to_string(),
        ),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn max_field_rel(a: &SpectrumGrid, b: &SpectrumGrid) -> f64 {
    let inc = a
        .incoherent
        .iter()
        .zip(&b.incoherent)
        .map(|(x, y)| rel(*x, *y));
    let coh = a.coherent.iter().zip(&b.coherent).map(|(x, y)| rel(*x, *y));
    inc.chain(coh).fold(0.0, f64::max)
}

/// (Σ|A_j·a_j|)² / |Σ A_j·a_j|², the rounding amplification of the
/// coherent sum at one cell (at least 1).
fn summation_condition(
    lines: &[TransitionLine],
    gamma: f64,
    beta: f64,
    theta: f64,
    omega: f64,
) -> f64 {
    let d = oracle::emission_denominator(gamma, beta, theta);
    let mut abs_sum = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for l in lines {
        let z = l.amplitude
            * oracle::finite_time_amplitude((omega - l.delta_eps / d) * d, l.interaction_time);
        abs_sum += z.norm();
        sum += z;
    }
    if sum.norm() == 0.0 {
        f64::INFINITY
    } else {
        (abs_sum / sum.norm()).powi(2).max(1.0)
    }
}

fn check_coherence() -> Check {
    let run = || -> Result<(f64, f64, f64, f64)> {
        let cfg = tilted_reference();
        let model = ChannelModel::harmonic(&cfg, &reference_grid(&cfg))?;
        let kin = &model.kin;
        let (theta, omega) = reference_axes(&model, 16, 64);
        let grid_of = |lines: &[TransitionLine], kernel| {
            build_spectrum_grid(lines, kin, &theta, &omega, kernel, 1)
        };

        let mut single: f64 = 0.0;
        for n in [1, 7, 30, 51] {
            let av = AmplitudeVector::single(n, model.levels.len());
            let lines = build_lines(&av, &model.levels, &model.dipoles, &cfg);
            let g = grid_of(&lines, Kernel::Omega2)?;
            single = single.max(
                g.coherent
                    .iter()
                    .zip(&g.incoherent)
                    .map(|(c, i)| rel(*c, *i))
                    .fold(0.0, f64::max),
            );
        }

        let centre = doppler_exact(kin.omega_osc, kin, 0.0);
        let mut stacked: f64 = 0.0;
        for n in [2usize, 5, 52] {
            let line = TransitionLine {
                n_initial: 1,
                n_final: 0,
                delta_eps: kin.omega_osc,
                amplitude: Complex64::new(0.3, 0.0),
                interaction_time: interaction_time(&cfg),
            };
            let lines = vec![line; n];
            let r = intensity_coherent(&lines, kin, 0.0, centre, Kernel::Omega2)
                / intensity_incoherent(&lines, kin, 0.0, centre, Kernel::Omega2);
            stacked = stacked.max((r - n as f64).abs());
        }

        let base = grid_of(&model.lines, Kernel::Omega2)?;
        let mut turned_av = model.amplitudes.clone();
        turned_av
            .amplitudes
            .iter_mut()
            .for_each(|c| *c *= Complex64::i());
        let quarter = build_lines(&turned_av, &model.levels, &model.dipoles, &cfg);
        // a quarter turn is exact in floating point; a generic phase is held
        // to rounding scaled by the conditioning of the coherent sum
        let mut phase = max_field_rel(&base, &grid_of(&quarter, Kernel::Omega2)?);
        let rotated = build_lines(
            &model.amplitudes.rotated(1.234),
            &model.levels,
            &model.dipoles,
            &cfg,
        );
        let turned = grid_of(&rotated, Kernel::Omega2)?;
        for (i, &th) in theta.iter().enumerate() {
            for (j, &om) in omega.iter().enumerate() {
                let k = base.index(i, j);
                let kappa = summation_condition(&model.lines, kin.gamma, kin.beta, th, om);
                phase = phase
                    .max(rel(base.incoherent[k], turned.incoherent[k]))
                    .max(rel(base.coherent[k], turned.coherent[k]) / kappa);
            }
        }

        let unit = grid_of(&model.lines, Kernel::Unit)?;
        let kernel = base
            .ratio
            .iter()
            .zip(&unit.ratio)
            .map(|(a, b)| rel(*a, *b))
            .fold(0.0, f64::max);
        Ok((single, stacked, phase, kernel))
    };
    match run() {
        Ok((single, stacked, phase, kernel)) => Check::new(
            6,
            "coherence identities",
            single < 1e-12 && stacked < 1e-12 && phase < 1e-15 && kernel < 1e-12,
            format!("single {single:.1e}, N-stack {stacked:.1e}, global phase {phase:.1e}, kernel {kernel:.1e}"),
        ),
        Err(e) => Check::new(6, "coherence identities", false, e.to_string()),
    }
}

/// Worst relative deviation of `grid` from the brute-force evaluation.
pub fn brute_force_deviation(
    lines: &[TransitionLine],
    model: &ChannelModel,
    grid: &SpectrumGrid,
    kernel: Kernel,
) -> f64 {
    let (gamma, beta) = (model.kin.gamma, model.kin.beta);
    let mut worst: f64 = 0.0;
    for (i, &theta) in grid.theta_axis.iter().enumerate() {
        for (j, &omega) in grid.omega_axis.iter().enumerate() {
            let (inc, coh) = brute_force_cell(lines, gamma, beta, theta, omega, kernel);
            let k = grid.index(i, j);
            worst = worst
                .max(rel(grid.incoherent[k], inc))
                .max(rel(grid.coherent[k], coh));
        }
    }
    worst
}

fn check_brute_force() -> Check {
    let run = || -> Result<f64> {
        let cfg = tilted_reference();
        let grid = reference_grid(&cfg);
        let mut worst: f64 = 0.0;
        for pot in [
            PotentialModel::Harmonic {
                u0: cfg.u0,
                dp: cfg.dp,
            },
            PotentialModel::PoschlTeller {
                u0: cfg.u0,
                a: PT_WIDTH,
            },
        ] {
            let model = ChannelModel::build(&cfg, &pot, &grid)?;
            let (theta, omega) = reference_axes(&model, 64, 64);
            let g =
                build_spectrum_grid(&model.lines, &model.kin, &theta, &omega, Kernel::Omega2, 1)?;
            worst = worst.max(brute_force_deviation(
                &model.lines,
                &model,
                &g,
                Kernel::Omega2,
            ));
        }
        Ok(worst)
    };
    let (result, elapsed) = timed(run);
    match result {
        Ok(worst) => Check::new(
            7,
            "brute-force equivalence",
            worst < 1e-10 && elapsed < Duration::from_secs(5),
            format!(
                "max rel {worst:.2e} on 64×64 (harmonic and Pöschl–Teller), {:.2} s",
                elapsed.as_secs_f64()
            ),
        ),
        Err(e) => Check::new(7, "brute-force equivalence", false, e.to_string()),
    }
}

/// Pöschl–Teller configuration: θ up to 3/γ in 64 rows, ω from 0 to 40 MeV
/// in 4096 columns.
pub fn poschl_teller_grid(workers: usize) -> Result<(ChannelModel, SpectrumGrid)> {
    let cfg = tilted_reference();
    let model = ChannelModel::build(
        &cfg,
        &PotentialModel::PoschlTeller {
            u0: cfg.u0,
            a: PT_WIDTH,
        },
        &reference_grid(&cfg),
    )?;
    let theta_max = 3.0 / model.kin.gamma;
    let theta: Vec<f64> = (0..64).map(|i| theta_max * i as f64 / 63.0).collect();
    let omega: Vec<f64> = (0..4096).map(|j| 4e7 * j as f64 / 4095.0).collect();
    let grid = build_spectrum_grid(
        &model.lines,
        &model.kin,
        &theta,
        &omega,
        Kernel::Omega2,
        workers,
    )?;
    Ok((model, grid))
}

fn check_claims() -> [Check; 2] {
    let positron = || -> Result<(f64, f64, usize, usize)> {
        let cfg = tilted_reference();
        let model = ChannelModel::harmonic(&cfg, &reference_grid(&cfg))?;
        let (theta, omega) = reference_axes(&model, 200, 400);
        let g = build_spectrum_grid(&model.lines, &model.kin, &theta, &omega, Kernel::Omega2, 8)?;
        let s = interference_summary(&g);
        let target = doppler_exact(model.kin.omega_osc, &model.kin, 0.0);
        let nearest = omega
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
            .map_or(0, |(j, _)| j);
        let top = find_peaks(&omega, g.coherent_row(0))
            .first()
            .map_or(usize::MAX, |p| p.index);
        Ok((s.max_ratio, s.min_ratio, top, nearest))
    };
    let a = match positron() {
        Ok((max, min, top, nearest)) => Check::new(
            8,
            "claim (a): positron interference",
            max > min && max > 1.0 && top.abs_diff(nearest) <= 1,
            format!("ratio range [{min:.6}, {max:.6}], θ=0 peak bin {top} vs 2γ²Ω bin {nearest}"),
        ),
        Err(e) => Check::new(8, "claim (a): positron interference", false, e.to_string()),
    };
    let b = match poschl_teller_grid(8) {
        Ok((model, g)) => {
            let s = interference_summary(&g);
            let t = interaction_time(&model.cfg);
            let width = 2.0 * std::f64::consts::PI / t;
            let mut gaps: Vec<f64> = model.lines.iter().map(|l| l.delta_eps).collect();
            gaps.sort_by(f64::total_cmp);
            let separation = gaps
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            Check::new(
                8,
                "claim (b): non-equidistant levels",
                separation > 5.0 * width && s.integrated_rel_diff < PT_REL_DIFF_LIMIT,
                format!(
                    "integrated_rel_diff {:.6} (limit {PT_REL_DIFF_LIMIT}), min line gap {:.1} widths",
                    s.integrated_rel_diff,
                    separation / width
                ),
            )
        }
        Err(e) => Check::new(8, "claim (b): non-equidistant levels", false, e.to_string()),
    };
    [a, b]
}

fn check_determinism() -> Check {
    let run = || -> Result<bool> {
        let cfg = tilted_reference();
        let model = ChannelModel::harmonic(&cfg, &reference_grid(&cfg))?;
        let (theta, omega) = reference_axes(&model, 200, 400);
        let mut outputs = Vec::new();
        for workers in [1, 8] {
            let g = build_spectrum_grid(
                &model.lines,
                &model.kin,
                &theta,
                &omega,
                Kernel::Omega2,
                workers,
            )?;
            outputs.push(spectrum_csv(&g));
        }
        Ok(outputs[0] == outputs[1])
    };
    let (result, elapsed) = timed(run);
    match result {
        Ok(same) => Check::new(
            9,
            "determinism across workers",
            same && elapsed < Duration::from_secs(5),
            format!(
                "200×400 CSV {} for 1 and 8 workers, {:.2} s",
                if same { "identical" } else { "differs" },
                elapsed.as_secs_f64()
            ),
        ),
        Err(e) => Check::new(9, "determinism across workers", false, e.to_string()),
    }
}

pub fn run_validation() -> Vec<Check> {
    let mut checks = vec![
        check_kinematics(),
        check_ladder(),
        check_eigensolver(),
        check_selection_rules(),
        check_entry_amplitudes(),
        check_coherence(),
        check_brute_force(),
    ];
    checks.extend(check_claims());
    checks.push(check_determinism());
    checks
}

pub fn format_table(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:>2}  {:<4}  {:<42}  {}\n",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    s
}
