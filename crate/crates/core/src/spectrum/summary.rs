use super::SpectrumGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceSummary {
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// Σ over θ rows of the trapezoid ω-integral of the coherent field.
    pub integrated_coh: f64,
    pub integrated_inc: f64,
    /// |integrated_coh − integrated_inc| / integrated_inc (0 when both vanish).
    pub integrated_rel_diff: f64,
    /// Per θ row: (∫I_coh dω, ∫I_inc dω).
    pub rows: Vec<(f64, f64)>,
}

fn trapezoid_on(axis: &[f64], values: &[f64]) -> f64 {
    axis.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub fn interference_summary(grid: &SpectrumGrid) -> InterferenceSummary {
    let (max_ratio, min_ratio) = grid
        .ratio
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), &r| {
            (hi.max(r), lo.min(r))
        });
    let rows: Vec<(f64, f64)> = (0..grid.theta_axis.len())
        .map(|i| {
            (
                trapezoid_on(&grid.omega_axis, grid.coherent_row(i)),
                trapezoid_on(&grid.omega_axis, grid.incoherent_row(i)),
            )
        })
        .collect();
    let integrated_coh: f64 = rows.iter().map(|r| r.0).sum();
    let integrated_inc: f64 = rows.iter().map(|r| r.1).sum();
    let integrated_rel_diff = if integrated_inc > 0.0 {
        (integrated_coh - integrated_inc).abs() / integrated_inc
    } else if integrated_coh > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    InterferenceSummary {
        max_ratio,
        min_ratio,
        integrated_coh,
        integrated_inc,
        integrated_rel_diff,
        rows,
    }
}
