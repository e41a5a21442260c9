//! Run configuration: a flat `key = value` file (a TOML subset) with a
//! closed set of keys. Unknown keys are errors; every default is written
//! into the returned [`RunConfig`].

use std::fmt::Write as _;
use std::path::PathBuf;

use thiserror::Error;

use crate::kinematics::{BeamCrystalConfig, Species, ELECTRON_MASS};
use crate::spectrum::Kernel;
use crate::states::GridSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("missing required key '{0}'")]
    MissingKey(String),
    #[error("bad value for '{key}': {reason}")]
    BadValue { key: String, reason: String },
    #[error("syntax error: {0}")]
    Syntax(String),
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialChoice {
    Harmonic,
    PoschlTeller { a: f64 },
    Tabulated { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Sinc,
}

/// `count` evenly spaced samples from `min` to `max`; a single sample sits
/// at `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.min + span * (i as f64 / last))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beam: BeamCrystalConfig,
    pub potential: PotentialChoice,
    pub grid: GridSpec,
    pub theta: AxisSpec,
    pub omega: AxisSpec,
    pub kernel: Kernel,
    pub profile: Profile,
    pub out: String,
    pub workers: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 8001;
pub const DEFAULT_OUT: &str = "chanrad";

const KEYS: &[&str] = &[
    "species",
    "energy_eV",
    "rest_mass_eV",
    "dp_A",
    "u0_eV",
    "length_A",
    "theta_in_rad",
    "potential",
    "pt_a_A",
    "potential_path",
    "grid_points",
    "grid_half_width_A",
    "theta_min_rad",
    "theta_max_rad",
    "theta_count",
    "omega_min_eV",
    "omega_max_eV",
    "omega_count",
    "kernel",
    "profile",
    "out",
    "workers",
];

struct Fields {
    table: toml::Table,
}

impl Fields {
    fn bad(key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::BadValue {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) if v.is_finite() => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(Self::bad(
                key,
                format!("expected a finite number, got {other}"),
            )),
        }
    }

    fn req_float(&self, key: &str) -> Result<f64> {
        self.float(key)?
            .ok_or_else(|| ConfigError::MissingKey(key.to_string()))
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v = self.req_float(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Self::bad(key, "must be positive"))
        }
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 1 => Ok(Some(*v as usize)),
            Some(other) => Err(Self::bad(
                key,
                format!("expected an integer >= 1, got {other}"),
            )),
        }
    }

    fn string(&self, key: &str) -> Result<Option<&str>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(Self::bad(key, format!("expected a string, got {other}"))),
        }
    }

    fn axis(&self, name: &str, unit: &str) -> Result<AxisSpec> {
        let min_key = format!("{name}_min_{unit}");
        let max_key = format!("{name}_max_{unit}");
        let count_key = format!("{name}_count");
        let min = self.req_float(&min_key)?;
        let max = self.req_float(&max_key)?;
        let count = self
            .count(&count_key)?
            .ok_or_else(|| ConfigError::MissingKey(count_key.clone()))?;
        if !(min < max) {
            return Err(Self::bad(&max_key, format!("must exceed {min_key}")));
        }
        Ok(AxisSpec { min, max, count })
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
    let mut keys: Vec<&String> = table.keys().collect();
    keys.sort();
    for key in keys {
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key.clone()));
        }
        if table[key].is_table() || table[key].is_array() {
            return Err(Fields::bad(key, "nested values are not supported"));
        }
    }
    let f = Fields { table };

    let species = match f.string("species")?.unwrap_or("positron") {
        "positron" => Species::Positron,
        "electron" => Species::Electron,
        other => return Err(Fields::bad("species", format!("unknown species '{other}'"))),
    };
    let beam = BeamCrystalConfig {
        species,
        total_energy: f.positive("energy_eV")?,
        rest_mass: match f.float("rest_mass_eV")? {
            None => ELECTRON_MASS,
            Some(m) if m > 0.0 => m,
            Some(_) => return Err(Fields::bad("rest_mass_eV", "must be positive")),
        },
        dp: f.positive("dp_A")?,
        u0: f.positive("u0_eV")?,
        crystal_length: f.positive("length_A")?,
        theta_in: f.req_float("theta_in_rad")?,
    };

    let potential = match f.string("potential")?.unwrap_or("harmonic") {
        "harmonic" => PotentialChoice::Harmonic,
        "poschl_teller" => {
            let a = f
                .float("pt_a_A")?
                .ok_or_else(|| ConfigError::MissingKey("pt_a_A".into()))?;
            if !(a > 0.0) {
                return Err(Fields::bad("pt_a_A", "must be positive"));
            }
            PotentialChoice::PoschlTeller { a }
        }
        "tabulated" => {
            let path = f
                .string("potential_path")?
                .ok_or_else(|| ConfigError::MissingKey("potential_path".into()))?;
            PotentialChoice::Tabulated { path: path.into() }
        }
        other => {
            return Err(Fields::bad(
                "potential",
                format!("unknown potential '{other}'"),
            ))
        }
    };
    if !matches!(potential, PotentialChoice::PoschlTeller { .. }) && f.table.contains_key("pt_a_A")
    {
        return Err(Fields::bad(
            "pt_a_A",
            "only valid with potential = \"poschl_teller\"",
        ));
    }
    if !matches!(potential, PotentialChoice::Tabulated { .. })
        && f.table.contains_key("potential_path")
    {
        return Err(Fields::bad(
            "potential_path",
            "only valid with potential = \"tabulated\"",
        ));
    }

    let points = f.count("grid_points")?.unwrap_or(DEFAULT_GRID_POINTS);
    if points < 3 {
        return Err(Fields::bad("grid_points", "need at least 3 points"));
    }
    let half_width = match f.float("grid_half_width_A")? {
        None => beam.dp,
        Some(w) if w > 0.0 => w,
        Some(_) => return Err(Fields::bad("grid_half_width_A", "must be positive")),
    };

    let kernel = match f.string("kernel")?.unwrap_or("omega2") {
        "omega2" => Kernel::Omega2,
        "unit" => Kernel::Unit,
        other => return Err(Fields::bad("kernel", format!("unknown kernel '{other}'"))),
    };
    let profile = match f.string("profile")?.unwrap_or("sinc") {
        "sinc" => Profile::Sinc,
        other => return Err(Fields::bad("profile", format!("unknown profile '{other}'"))),
    };

    Ok(RunConfig {
        beam,
        potential,
        grid: GridSpec::new(half_width, points),
        theta: f.axis("theta", "rad")?,
        omega: f.axis("omega", "eV")?,
        kernel,
        profile,
        out: f.string("out")?.unwrap_or(DEFAULT_OUT).to_string(),
        workers: f.count("workers")?.unwrap_or(1),
    })
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Writes every field, defaults included, in a form [`parse_config`] reads
/// back to an identical value.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut s = String::new();
    let b = &cfg.beam;
    let mut put = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    put("species", quote(b.species.name()));
    put("energy_eV", format!("{:?}", b.total_energy));
    put("rest_mass_eV", format!("{:?}", b.rest_mass));
    put("dp_A", format!("{:?}", b.dp));
    put("u0_eV", format!("{:?}", b.u0));
    put("length_A", format!("{:?}", b.crystal_length));
    put("theta_in_rad", format!("{:?}", b.theta_in));
    match &cfg.potential {
        PotentialChoice::Harmonic => put("potential", quote("harmonic")),
        PotentialChoice::PoschlTeller { a } => {
            put("potential", quote("poschl_teller"));
            put("pt_a_A", format!("{a:?}"));
        }
        PotentialChoice::Tabulated { path } => {
            put("potential", quote("tabulated"));
            put("potential_path", quote(&path.to_string_lossy()));
        }
    }
    put("grid_points", cfg.grid.points.to_string());
    put("grid_half_width_A", format!("{:?}", cfg.grid.half_width));
    put("theta_min_rad", format!("{:?}", cfg.theta.min));
    put("theta_max_rad", format!("{:?}", cfg.theta.max));
    put("theta_count", cfg.theta.count.to_string());
    put("omega_min_eV", format!("{:?}", cfg.omega.min));
    put("omega_max_eV", format!("{:?}", cfg.omega.max));
    put("omega_count", cfg.omega.count.to_string());
    put("kernel", quote(cfg.kernel.name()));
    put("profile", quote("sinc"));
    put("out", quote(&cfg.out));
    put("workers", cfg.workers.to_string());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
energy_eV = 1e9
dp_A = 1.92
u0_eV = 23.0
length_A = 2e5
theta_in_rad = 0.0
theta_min_rad = 0.0
theta_max_rad = 1.5e-3
theta_count = 4
omega_min_eV = 1.0e6
omega_max_eV = 5.0e6
omega_count = 8
"#;

    #[test]
    fn minimal_config_records_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.kernel, Kernel::Omega2);
        assert_eq!(cfg.potential, PotentialChoice::Harmonic);
        assert_eq!(cfg.beam.rest_mass, ELECTRON_MASS);
        assert_eq!(cfg.beam.species, Species::Positron);
        assert_eq!(cfg.grid, GridSpec::new(1.92, DEFAULT_GRID_POINTS));
        assert_eq!(cfg.workers, 1);
        assert_eq!(cfg.out, DEFAULT_OUT);
        assert_eq!(cfg.theta.values().len(), 4);
    }

    #[test]
    fn typo_is_an_unknown_key() {
        let text = format!("{MINIMAL}speciess = \"positron\"\n");
        assert_eq!(
            parse_config(&text),
            Err(ConfigError::UnknownKey("speciess".into()))
        );
    }

    #[test]
    fn missing_and_bad_values_name_the_key() {
        let text = MINIMAL.replace("dp_A = 1.92\n", "");
        assert_eq!(
            parse_config(&text),
            Err(ConfigError::MissingKey("dp_A".into()))
        );
        let text = MINIMAL.replace("u0_eV = 23.0", "u0_eV = \"deep\"");
        assert!(
            matches!(parse_config(&text), Err(ConfigError::BadValue { key, .. }) if key == "u0_eV")
        );
        let text = MINIMAL.replace("theta_count = 4", "theta_count = 0");
        assert!(
            matches!(parse_config(&text), Err(ConfigError::BadValue { key, .. }) if key == "theta_count")
        );
        let text = MINIMAL.replace("omega_max_eV = 5.0e6", "omega_max_eV = 1.0e6");
        assert!(
            matches!(parse_config(&text), Err(ConfigError::BadValue { key, .. }) if key == "omega_max_eV")
        );
        let text = format!("{MINIMAL}pt_a_A = 0.1\n");
        assert!(
            matches!(parse_config(&text), Err(ConfigError::BadValue { key, .. }) if key == "pt_a_A")
        );
        let text = format!("{MINIMAL}potential = \"poschl_teller\"\n");
        assert_eq!(
            parse_config(&text),
            Err(ConfigError::MissingKey("pt_a_A".into()))
        );
        assert!(matches!(
            parse_config("energy_eV = "),
            Err(ConfigError::Syntax(_))
        ));
    }

    #[test]
    fn serialization_round_trips() {
        let variants = [
            MINIMAL.to_string(),
            format!("{MINIMAL}potential = \"poschl_teller\"\npt_a_A = 0.1\nkernel = \"unit\"\nworkers = 8\n"),
            format!("{MINIMAL}potential = \"tabulated\"\npotential_path = \"well.dat\"\nout = \"runs/a b\"\n"),
        ];
        for text in variants {
            let cfg = parse_config(&text).unwrap();
            let again = parse_config(&serialize_config(&cfg)).unwrap();
            assert_eq!(cfg, again);
        }
    }

    #[test]
    fn axis_values() {
        let a = AxisSpec {
            min: 1.0,
            max: 2.0,
            count: 3,
        };
        assert_eq!(a.values(), vec![1.0, 1.5, 2.0]);
        let one = AxisSpec {
            min: 1.0,
            max: 2.0,
            count: 1,
        };
        assert_eq!(one.values(), vec![1.0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_any_numbers(
                e in 1e6f64..1e12,
                dp in 0.1f64..10.0,
                theta in -1e-3f64..1e-3,
                tmax in 1e-6f64..1e-2,
                n in 1usize..5000,
                workers in 1usize..64,
            ) {
                let text = format!(
                    "energy_eV = {e:?}\ndp_A = {dp:?}\nu0_eV = 20.0\nlength_A = 1e5\n\
                     theta_in_rad = {theta:?}\ntheta_min_rad = 0.0\ntheta_max_rad = {tmax:?}\n\
                     theta_count = {n}\nomega_min_eV = 0.0\nomega_max_eV = 1e7\nomega_count = 3\n\
                     workers = {workers}\n"
                );
                let cfg = parse_config(&text).unwrap();
                prop_assert_eq!(parse_config(&serialize_config(&cfg)).unwrap(), cfg);
            }
        }
    }
}
