//! Spin form of a QUBO: local fields h, couplings J and a tracked constant
//! offset, related to the binary form by z = 2x - 1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qubo::QuboModel;

/// Diagonal spin Hamiltonian over {-1,+1} variables.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    num_spins: usize,
    h: BTreeMap<usize, f64>,
    j: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl IsingModel {
    pub fn new(num_spins: usize) -> Self {
        IsingModel {
            num_spins,
            h: BTreeMap::new(),
            j: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn fields(&self) -> &BTreeMap<usize, f64> {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.j
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    pub fn add_field(&mut self, index: usize, value: f64) {
        assert!(index < self.num_spins);
        let entry = self.h.entry(index).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.h.remove(&index);
        }
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, value: f64) {
        assert!(i != j && i < self.num_spins && j < self.num_spins);
        let key = if i < j { (i, j) } else { (j, i) };
        let entry = self.j.entry(key).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.j.remove(&key);
        }
    }

    /// offset + sum h_i z_i + sum J_ij z_i z_j.
    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.num_spins {
            return Err(Error::LengthMismatch {
                expected: self.num_spins,
                got: spins.len(),
            });
        }
        if let Some(bad) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!(
                "spin {bad} is {}, expected -1 or +1",
                spins[bad]
            )));
        }
        let mut e = self.offset;
        for (&i, &v) in &self.h {
            e += v * f64::from(spins[i]);
        }
        for (&(i, j), &v) in &self.j {
            e += v * f64::from(spins[i]) * f64::from(spins[j]);
        }
        Ok(e)
    }

    /// Energy of the spin image of a bit assignment.
    pub fn energy_of_bits(&self, bits: &[bool]) -> Result<f64> {
        self.energy(&spins_from_bits(bits))
    }
}

/// Change of variables x = (z+1)/2 applied to every QUBO term. Energies are
/// preserved exactly, including the constant offset.
pub fn to_ising(model: &QuboModel) -> IsingModel {
    let mut ising = IsingModel::new(model.num_vars());
    ising.add_offset(model.offset());
    for (&i, &a) in model.linear() {
        ising.add_field(i, a / 2.0);
        ising.add_offset(a / 2.0);
    }
    for (&(i, j), &b) in model.quadratic() {
        ising.add_coupling(i, j, b / 4.0);
        ising.add_field(i, b / 4.0);
        ising.add_field(j, b / 4.0);
        ising.add_offset(b / 4.0);
    }
    ising
}

/// Elementwise 2b - 1.
pub fn spins_from_bits(bits: &[bool]) -> Vec<i8> {
    bits.iter().map(|&b| if b { 1 } else { -1 }).collect()
}

/// Inverse of [`spins_from_bits`].
pub fn bits_from_spins(spins: &[i8]) -> Vec<bool> {
    spins.iter().map(|&s| s > 0).collect()
}
