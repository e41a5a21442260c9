/// Uniform grid on the symmetric interval [−half_width, half_width].
///
/// Nodes are `x_i = (2i − (points − 1))·half_width/(points − 1)`, so
/// `x_{points−1−i} == −x_i` holds bitwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// [Å]
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Self {
        assert!(half_width > 0.0 && points >= 3, "degenerate grid");
        GridSpec { half_width, points }
    }

    /// Same interval with the step halved.
    pub fn refined(&self) -> Self {
        GridSpec::new(self.half_width, 2 * self.points - 1)
    }

    fn half_step(&self) -> f64 {
        self.half_width / (self.points - 1) as f64
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_step()
    }

    pub fn x(&self, i: usize) -> f64 {
        (2.0 * i as f64 - (self.points - 1) as f64) * self.half_step()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    /// Index of the node at `x`, if `x` falls on one (to 1e−9 of a step).
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let pos = (x + self.half_width) / self.step();
        let i = pos.round();
        if i < 0.0 || i > (self.points - 1) as f64 || (pos - i).abs() > 1e-9 {
            return None;
        }
        Some(i as usize)
    }
}

/// Trapezoid rule on uniform samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => step * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}
