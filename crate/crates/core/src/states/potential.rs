use crate::error::{Error, Result};

/// Transverse channel potential U(x) in eV, measured from the well bottom.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    /// U(x) = U0·(2x/d_p)², reaching U0 at the planes x = ±d_p/2.
    Harmonic { u0: f64, dp: f64 },
    /// U(x) = U0·tanh²(x/a), i.e. −U0·sech²(x/a) lifted by U0.
    PoschlTeller { u0: f64, a: f64 },
    /// Linear interpolation through (x, U) samples with strictly increasing x.
    Tabulated { x: Vec<f64>, u: Vec<f64> },
}

impl PotentialModel {
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            PotentialModel::Harmonic { u0, dp } => {
                let r = 2.0 * x / dp;
                Some(u0 * r * r)
            }
            PotentialModel::PoschlTeller { u0, a } => {
                let t = (x / a).tanh();
                Some(u0 * t * t)
            }
            PotentialModel::Tabulated { x: xs, u } => {
                let (&lo, &hi) = (xs.first()?, xs.last()?);
                if !(lo..=hi).contains(&x) {
                    return None;
                }
                let j = xs.partition_point(|&v| v <= x);
                if j == xs.len() {
                    return u.last().copied();
                }
                let (x0, x1) = (xs[j - 1], xs[j]);
                let w = (x - x0) / (x1 - x0);
                Some(u[j - 1] + w * (u[j] - u[j - 1]))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialModel::Harmonic { .. } => "harmonic",
            PotentialModel::PoschlTeller { .. } => "poschl_teller",
            PotentialModel::Tabulated { .. } => "tabulated",
        }
    }

    /// Reads a two-column `x_Å U_eV` table. Blank lines and lines starting
    /// with '#' are skipped; columns may be separated by whitespace or commas.
    pub fn parse_tabulated(text: &str) -> Result<Self> {
        let bad = |reason: String| Error::BadPotential { reason };
        let mut xs = Vec::new();
        let mut us = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty());
            let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(bad(format!("line {}: expected two columns", lineno + 1)));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("line {}: bad number '{s}'", lineno + 1)))
            };
            let (x, u) = (parse(a)?, parse(b)?);
            if xs.last().is_some_and(|&prev| x <= prev) {
                return Err(bad(format!(
                    "line {}: x not strictly increasing",
                    lineno + 1
                )));
            }
            xs.push(x);
            us.push(u);
        }
        if xs.len() < 2 {
            return Err(bad("fewer than two samples".into()));
        }
        Ok(PotentialModel::Tabulated { x: xs, u: us })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_reaches_depth_at_planes() {
        let p = PotentialModel::Harmonic { u0: 23.0, dp: 1.92 };
        assert_eq!(p.eval(0.96), Some(23.0));
        assert_eq!(p.eval(-0.96), Some(23.0));
        assert_eq!(p.eval(0.0), Some(0.0));
    }

    #[test]
    fn builtins_are_symmetric() {
        let kinds = [
            PotentialModel::Harmonic { u0: 23.0, dp: 1.92 },
            PotentialModel::PoschlTeller { u0: 23.0, a: 0.1 },
        ];
        for p in &kinds {
            for x in [0.01, 0.3, 0.77, 2.5] {
                assert_eq!(p.eval(x), p.eval(-x));
            }
        }
    }

    #[test]
    fn tabulated_parsing_and_interpolation() {
        let text = "# x_A U_eV\n# another header\n-1.0 4.0\n0.0, 0.0\n\n1.0 4.0\n";
        let p = PotentialModel::parse_tabulated(text).unwrap();
        assert_eq!(p.eval(0.5), Some(2.0));
        assert_eq!(p.eval(1.0), Some(4.0));
        assert_eq!(p.eval(-1.0), Some(4.0));
        assert_eq!(p.eval(1.5), None);
    }

    #[test]
    fn tabulated_rejects_unordered_and_malformed() {
        assert!(PotentialModel::parse_tabulated("0 1\n0 2\n").is_err());
        assert!(PotentialModel::parse_tabulated("0 1 3\n1 2\n").is_err());
        assert!(PotentialModel::parse_tabulated("0 nan\n1 2\n").is_err());
        assert!(PotentialModel::parse_tabulated("# only header\n").is_err());
    }
}
