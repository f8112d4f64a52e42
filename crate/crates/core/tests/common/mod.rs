//! Helpers shared by the integration and acceptance suites.

use pickbatch::instance::explicit_instance;
use pickbatch::{EncodingMode, Instance};

/// Explicit-matrix instance over `weights.len()` products.
pub fn make_instance(weights: &[f64], distances: Vec<Vec<f64>>, fleet: usize, capacity: u32) -> Instance {
    explicit_instance("test", weights, distances, fleet, capacity).unwrap()
}

/// Dense symmetric matrix from the strict upper triangle (row-major).
pub fn matrix_from_upper(n: usize, upper: &[f64]) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = *it.next().expect("enough entries");
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    rows
}

/// The little-endian bit pattern of `word`.
pub fn bits_of(word: u64, len: usize) -> Vec<bool> {
    (0..len).map(|b| word >> b & 1 == 1).collect()
}

/// Small instances whose layouts stay within `max_vars` bits, paired with
/// the modes to scan. Covers both modes, multiple robots, a capacity with a
/// slack register, capacity 1 (no slack) and a power-of-two capacity whose
/// slack register cannot represent every value.
pub fn scan_cases(max_vars: usize) -> Vec<(Instance, EncodingMode)> {
    let line = |w: &[f64], fleet, cap| make_instance(w, matrix_from_upper(2, &[2.0]), fleet, cap);
    let tri = |w: &[f64], fleet, cap| {
        make_instance(w, matrix_from_upper(3, &[1.0, 2.0, 3.0]), fleet, cap)
    };

    let mut cases = vec![
        (line(&[1.0], 1, 1), EncodingMode::Reduced),
        (line(&[2.0], 1, 3), EncodingMode::Reduced),
        (line(&[2.0], 1, 3), EncodingMode::Full),
        (line(&[3.0], 2, 3), EncodingMode::Reduced),
        (tri(&[1.0, 2.0], 1, 3), EncodingMode::Reduced),
        (tri(&[1.0, 2.0], 1, 3), EncodingMode::Full),
        (tri(&[2.0, 1.0], 2, 3), EncodingMode::Reduced),
        (tri(&[6.0, 7.0], 1, 15), EncodingMode::Reduced),
        // Power-of-two capacity: slack value 2 is unrepresentable.
        (tri(&[1.0, 1.0], 2, 4), EncodingMode::Reduced),
        // Capacity violations can undercut distances: the split tour is much
        // longer than the combined overweight one.
        (
            make_instance(
                &[14.0, 2.0],
                matrix_from_upper(3, &[10.0, 10.0, 0.5]),
                2,
                15,
            ),
            EncodingMode::Reduced,
        ),
    ];
    cases.retain(|(inst, mode)| {
        pickbatch::qubit_count(inst.num_products(), inst.fleet_size, inst.capacity, *mode)
            .unwrap()
            <= max_vars
    });
    cases
}
