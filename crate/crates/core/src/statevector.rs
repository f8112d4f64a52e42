//! Dense statevector simulation for the variational solver. Qubit k maps to
//! bit k of the basis-state index (little-endian, matching bit assignments).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ising::IsingModel;

/// Hard ceiling: 2^24 amplitudes is the desk-scale memory limit.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;

#[derive(Debug, Clone)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Uniform superposition over all basis states.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::TooManyVariables {
                got: num_qubits,
                cap: MAX_STATEVECTOR_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Statevector {
            num_qubits,
            amps: vec![amp; dim],
        })
    }

    /// Computational basis state |index>.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::TooManyVariables {
                got: num_qubits,
                cap: MAX_STATEVECTOR_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        assert!(index < dim);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of measuring basis state `index`.
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// Rotation about Y by `theta` on one qubit.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) {
        assert!(qubit < self.num_qubits);
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        let stride = 1usize << qubit;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for off in 0..stride {
                let i0 = base + off;
                let i1 = i0 + stride;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = c * a0 - s * a1;
                self.amps[i1] = s * a0 + c * a1;
            }
            base += stride << 1;
        }
    }

    /// Controlled phase flip: negates amplitudes where both qubits are set.
    pub fn apply_cz(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.num_qubits && b < self.num_qubits);
        let mask = (1usize << a) | (1usize << b);
        for (z, amp) in self.amps.iter_mut().enumerate() {
            if z & mask == mask {
                *amp = -*amp;
            }
        }
    }
}

/// Hardware-efficient layered ansatz: uniform superposition, then per layer
/// one Y rotation per qubit followed by a CZ chain over neighbours (q, q+1).
pub fn build_ansatz_state(num_qubits: usize, params: &[f64], layers: usize) -> Result<Statevector> {
    if params.len() != layers * num_qubits {
        return Err(Error::LengthMismatch {
            expected: layers * num_qubits,
            got: params.len(),
        });
    }
    let mut state = Statevector::uniform(num_qubits)?;
    for layer in 0..layers {
        for q in 0..num_qubits {
            state.apply_ry(q, params[layer * num_qubits + q]);
        }
        for q in 0..num_qubits.saturating_sub(1) {
            state.apply_cz(q, q + 1);
        }
    }
    Ok(state)
}

/// Expectation of the diagonal Hamiltonian in the given state:
/// sum over basis states of probability times classical spin energy.
pub fn expectation(model: &IsingModel, state: &Statevector) -> Result<f64> {
    if 1usize << model.num_spins() != state.amplitudes().len() {
        return Err(Error::LengthMismatch {
            expected: 1usize << model.num_spins(),
            got: state.amplitudes().len(),
        });
    }
    let table = basis_energies(model);
    Ok(state
        .amplitudes()
        .iter()
        .zip(&table)
        .map(|(a, &e)| a.norm_sqr() * e)
        .sum())
}

/// Classical energy of every basis state, indexed little-endian.
pub fn basis_energies(model: &IsingModel) -> Vec<f64> {
    let q = model.num_spins();
    let dim = 1usize << q;
    let mut table = vec![model.offset(); dim];
    for (&i, &h) in model.fields() {
        let bit = 1usize << i;
        for (z, e) in table.iter_mut().enumerate() {
            *e += if z & bit != 0 { h } else { -h };
        }
    }
    for (&(i, j), &c) in model.couplings() {
        let bi = 1usize << i;
        let bj = 1usize << j;
        for (z, e) in table.iter_mut().enumerate() {
            let same = (z & bi != 0) == (z & bj != 0);
            *e += if same { c } else { -c };
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::IsingModel;

    #[test]
    fn uniform_state_is_normalized() {
        let s = Statevector::uniform(3).unwrap();
        assert!((s.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ansatz_preserves_normalization_over_many_layers() {
        let layers = 100;
        let num_qubits = 4;
        let params: Vec<f64> = (0..layers * num_qubits)
            .map(|k| (k as f64 * 0.7).sin() * 3.0)
            .collect();
        let state = build_ansatz_state(num_qubits, &params, layers).unwrap();
        assert!((state.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_rotations_keep_uniform_probabilities() {
        // CZ chains only add phases, so |amplitudes| stay uniform.
        let state = build_ansatz_state(3, &[0.0; 6], 2).unwrap();
        for z in 0..8 {
            assert!((state.probability(z) - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn param_length_mismatch_errors() {
        assert!(build_ansatz_state(3, &[0.0; 5], 2).is_err());
    }

    #[test]
    fn two_qubit_ansatz_matches_dense_matrix_product() {
        // Independent oracle: assemble the 4x4 layer matrices explicitly and
        // multiply them against the uniform start vector.
        let params = [0.37, -1.2, 2.1, 0.45];
        let layers = 2;
        let state = build_ansatz_state(2, &params, layers).unwrap();

        let kron = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
            let mut m = [[0.0f64; 4]; 4];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            // Qubit 0 is the low bit: index = q1*2 + q0.
                            m[k * 2 + i][l * 2 + j] = a[i][j] * b[k][l];
                        }
                    }
                }
            }
            m
        };
        let ry = |t: f64| {
            [
                [(t / 2.0).cos(), -(t / 2.0).sin()],
                [(t / 2.0).sin(), (t / 2.0).cos()],
            ]
        };
        let eye = [[1.0, 0.0], [0.0, 1.0]];
        let matvec = |m: &[[f64; 4]; 4], v: &[f64; 4]| {
            let mut out = [0.0f64; 4];
            for r in 0..4 {
                for c in 0..4 {
                    out[r] += m[r][c] * v[c];
                }
            }
            out
        };

        let mut v = [0.5f64; 4];
        for layer in 0..layers {
            v = matvec(&kron(ry(params[layer * 2]), eye), &v);
            v = matvec(&kron(eye, ry(params[layer * 2 + 1])), &v);
            v[3] = -v[3]; // CZ on (0,1)
        }
        for z in 0..4 {
            assert!(
                (state.amplitudes()[z].re - v[z]).abs() < 1e-9
                    && state.amplitudes()[z].im.abs() < 1e-12,
                "state {z}: {:?} vs {}",
                state.amplitudes()[z],
                v[z]
            );
        }
    }

    #[test]
    fn expectation_of_basis_state_is_classical_energy() {
        let mut model = IsingModel::new(3);
        model.add_field(0, 0.5);
        model.add_field(2, -1.5);
        model.add_coupling(0, 1, 2.0);
        model.add_coupling(1, 2, -0.75);
        model.add_offset(4.0);
        for z in 0..8usize {
            let spins: Vec<i8> = (0..3).map(|b| if z >> b & 1 == 1 { 1 } else { -1 }).collect();
            let state = Statevector::basis(3, z).unwrap();
            let ev = expectation(&model, &state).unwrap();
            assert!((ev - model.energy(&spins).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_of_uniform_state_is_offset() {
        let mut model = IsingModel::new(4);
        model.add_field(1, 3.0);
        model.add_coupling(0, 3, -2.0);
        model.add_offset(1.25);
        let state = Statevector::uniform(4).unwrap();
        let ev = expectation(&model, &state).unwrap();
        assert!((ev - 1.25).abs() < 1e-12);
    }

    #[test]
    fn expectation_matches_brute_force_sum_on_random_state() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = 8;
        let mut model = IsingModel::new(q);
        for i in 0..q {
            model.add_field(i, rng.random_range(-1.0..1.0));
            for j in (i + 1)..q {
                if rng.random_bool(0.4) {
                    model.add_coupling(i, j, rng.random_range(-1.0..1.0));
                }
            }
        }
        // Random normalized real state via the ansatz.
        let params: Vec<f64> = (0..2 * q).map(|_| rng.random_range(-3.0..3.0)).collect();
        let state = build_ansatz_state(q, &params, 2).unwrap();

        let mut brute = 0.0;
        for z in 0..(1usize << q) {
            let spins: Vec<i8> = (0..q).map(|b| if z >> b & 1 == 1 { 1 } else { -1 }).collect();
            brute += state.probability(z) * model.energy(&spins).unwrap();
        }
        let ev = expectation(&model, &state).unwrap();
        assert!((ev - brute).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_errors() {
        let model = IsingModel::new(3);
        let state = Statevector::uniform(2).unwrap();
        assert!(expectation(&model, &state).is_err());
    }
}
