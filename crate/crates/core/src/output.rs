//! CSV tables. Each file opens with a '#' line naming the columns and a '#'
//! line stating units; floats carry 17 significant digits.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::populations::AmplitudeVector;
use crate::spectrum::{find_peaks, SpectrumGrid, TransitionLine};
use crate::states::LevelSet;

const UNITS: &str = "# units: energies in eV, angles in rad; intensities in arbitrary units";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(columns: &[&str], note: Option<&str>) -> String {
    let mut s = format!("# {}\n{UNITS}", columns.join(","));
    if let Some(note) = note {
        let _ = write!(s, "; {note}");
    }
    s.push('\n');
    s
}

pub fn levels_csv(levels: &LevelSet) -> String {
    let mut s = header(&["n", "energy_eV"], None);
    for (n, e) in levels.levels.iter().enumerate() {
        let _ = writeln!(s, "{n},{}", num(*e));
    }
    s
}

pub fn populations_csv(av: &AmplitudeVector) -> String {
    let mut s = header(
        &["n", "re_c", "im_c", "abs2_c"],
        Some(&format!("captured_fraction {}", num(av.captured_fraction))),
    );
    for (n, c) in av.amplitudes.iter().enumerate() {
        let _ = writeln!(s, "{n},{},{},{}", num(c.re), num(c.im), num(c.norm_sqr()));
    }
    s
}

pub fn lines_csv(lines: &[TransitionLine]) -> String {
    let mut s = header(
        &["n_initial", "n_final", "delta_eps_eV", "re_amp", "im_amp"],
        None,
    );
    for l in lines {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            l.n_initial,
            l.n_final,
            num(l.delta_eps),
            num(l.amplitude.re),
            num(l.amplitude.im)
        );
    }
    s
}

pub fn spectrum_csv(grid: &SpectrumGrid) -> String {
    let mut s = header(
        &[
            "theta_rad",
            "omega_eV",
            "I_incoherent_arb",
            "I_coherent_arb",
            "ratio",
        ],
        None,
    );
    for (i, &theta) in grid.theta_axis.iter().enumerate() {
        for (j, &omega) in grid.omega_axis.iter().enumerate() {
            let k = grid.index(i, j);
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                num(theta),
                num(omega),
                num(grid.incoherent[k]),
                num(grid.coherent[k]),
                num(grid.ratio[k])
            );
        }
    }
    s
}

/// Local maxima of the coherent intensity along ω, ranked within each θ row.
pub fn peaks_csv(grid: &SpectrumGrid) -> String {
    let mut s = header(
        &["theta_rad", "omega_eV", "height_arb", "rank"],
        Some("peaks of the coherent intensity per theta row"),
    );
    for (i, &theta) in grid.theta_axis.iter().enumerate() {
        for (rank, p) in find_peaks(&grid.omega_axis, grid.coherent_row(i))
            .iter()
            .enumerate()
        {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                num(theta),
                num(p.omega),
                num(p.height),
                rank + 1
            );
        }
    }
    s
}

/// `<prefix>_<name>`.
pub fn output_path(prefix: &str, name: &str) -> PathBuf {
    PathBuf::from(format!("{prefix}_{name}"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::IoFailure {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
