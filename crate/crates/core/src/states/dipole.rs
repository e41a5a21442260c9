use super::{trapezoid, Wavefunction};
use crate::error::{Error, Result};

/// ∫ψ_a·x·ψ_b dx by the trapezoid rule [Å].
pub fn dipole_matrix_element(psi_a: &Wavefunction, psi_b: &Wavefunction) -> Result<f64> {
    if psi_a.grid != psi_b.grid {
        return Err(Error::GridMismatch);
    }
    let grid = psi_a.grid;
    let integrand: Vec<f64> = (0..grid.points)
        .map(|i| psi_a.values[i] * grid.x(i) * psi_b.values[i])
        .collect();
    Ok(trapezoid(&integrand, grid.step()))
}

/// Symmetric table of coordinate matrix elements ⟨n′|x|n⟩ [Å].
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleTable {
    size: usize,
    data: Vec<f64>,
}

impl DipoleTable {
    pub fn zeros(size: usize) -> Self {
        DipoleTable {
            size,
            data: vec![0.0; size * size],
        }
    }

    /// Ladder-operator closed form ⟨n−1|x|n⟩ = sqrt(n/2)·x₁; everything
    /// else is zero.
    pub fn harmonic(size: usize, oscillator_length: f64) -> Self {
        let mut table = Self::zeros(size);
        for n in 1..size {
            let v = (0.5 * n as f64).sqrt() * oscillator_length;
            table.set(n - 1, n, v);
        }
        table
    }

    /// Quadrature over every pair of sampled states.
    pub fn from_wavefunctions(states: &[Wavefunction]) -> Result<Self> {
        let mut table = Self::zeros(states.len());
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate().skip(i) {
                table.set(i, j, dipole_matrix_element(a, b)?);
            }
        }
        Ok(table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.size + col]
    }

    fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.size + col] = value;
        self.data[col * self.size + row] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
