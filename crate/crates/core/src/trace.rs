use nalgebra::DMatrix;

use crate::state::SingleExcitationState;

/// Per-time, per-site excitation probabilities. Row `i` of each matrix
/// belongs to `times[i]`, column `x` to cavity `x + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub p_field: DMatrix<f64>,
    pub p_atom: DMatrix<f64>,
    pub total_field: Vec<f64>,
    pub total_atom: Vec<f64>,
}

impl EvolutionTrace {
    pub fn from_states(times: &[f64], states: &[SingleExcitationState]) -> Self {
        assert_eq!(times.len(), states.len(), "one state per time");
        let n = states.first().map_or(0, |s| s.n_cavities());
        let mut p_field = DMatrix::zeros(times.len(), n);
        let mut p_atom = DMatrix::zeros(times.len(), n);
        for (i, s) in states.iter().enumerate() {
            for (x, p) in s.photon_probabilities().into_iter().enumerate() {
                p_field[(i, x)] = p;
            }
            for (x, p) in s.atom_probabilities().into_iter().enumerate() {
                p_atom[(i, x)] = p;
            }
        }
        let (total_field, total_atom) = row_sums(&p_field, &p_atom);
        Self {
            times: times.to_vec(),
            p_field,
            p_atom,
            total_field,
            total_atom,
        }
    }

    pub fn n_cavities(&self) -> usize {
        self.p_field.ncols()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest absolute difference between any probability of the two
    /// traces. Panics if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.p_field.shape(), other.p_field.shape());
        let f = (&self.p_field - &other.p_field).amax();
        let a = (&self.p_atom - &other.p_atom).amax();
        f.max(a)
    }

    /// Largest deviation of any probability from its value at the first time.
    pub fn max_deviation_from_initial(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for m in [&self.p_field, &self.p_atom] {
            for i in 0..m.nrows() {
                for x in 0..m.ncols() {
                    dev = dev.max((m[(i, x)] - m[(0, x)]).abs());
                }
            }
        }
        dev
    }
}

fn row_sums(p_field: &DMatrix<f64>, p_atom: &DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let sum = |m: &DMatrix<f64>| (0..m.nrows()).map(|i| m.row(i).sum()).collect();
    (sum(p_field), sum(p_atom))
}

/// Overall atomic and photonic excitation probability at every sample time,
/// recomputed from the per-site matrices.
pub fn total_probabilities(trace: &EvolutionTrace) -> (Vec<f64>, Vec<f64>) {
    let (field, atom) = row_sums(&trace.p_field, &trace.p_atom);
    (atom, field)
}

/// `steps` evenly spaced times from `0` to `t_max` inclusive.
pub fn linspace(t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps)
            .map(|i| t_max * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_atom_totals() {
        let s = SingleExcitationState::atom(3, 1).unwrap();
        let tr = EvolutionTrace::from_states(&[0.0], &[s]);
        let (atom, field) = total_probabilities(&tr);
        assert_eq!(atom, vec![1.0]);
        assert_eq!(field, vec![0.0]);
        assert_eq!(tr.max_deviation_from_initial(), 0.0);
    }

    #[test]
    fn linspace_endpoints() {
        let t = linspace(2.0, 5);
        assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
