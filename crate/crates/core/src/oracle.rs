//! Exhaustive capacitated-routing optimum for small instances. Searches
//! routes directly, independent of the QUBO pipeline, so it can serve as
//! ground truth for every solver.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::parallel::map_indexed;

const MAX_PRODUCTS: usize = 8;
const MAX_FLEET: usize = 4;

/// Distance ties below this are broken lexicographically on the route list.
const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub optimal_distance: f64,
    /// One route per robot, `[0, 0]` for robots that stay parked.
    pub routes: Vec<Vec<usize>>,
    /// Product-to-robot assignments examined (K^n).
    pub assignments_searched: u64,
}

/// Enumerates every assignment of products to robots and every visiting
/// order per robot, skipping capacity-violating assignments. Ties are broken
/// by the lexicographically smallest route list; parked robots cost nothing.
pub fn oracle_optimum(instance: &Instance) -> Result<OracleResult> {
    let n = instance.num_products();
    let fleet = instance.fleet_size;
    if n > MAX_PRODUCTS || fleet > MAX_FLEET {
        return Err(Error::InstanceTooLarge(format!(
            "oracle handles at most {MAX_PRODUCTS} products and {MAX_FLEET} robots, \
             instance has {n} and {fleet}"
        )));
    }

    let tours = best_tours_per_subset(instance);
    let capacity = f64::from(instance.capacity);
    let subset_weight: Vec<f64> = (0..1usize << n)
        .map(|mask| {
            (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| instance.weight(i + 1))
                .sum()
        })
        .collect();

    let total_assignments = (fleet as u64).pow(n as u32);
    let chunk = 1usize << 12;
    let chunks = (total_assignments as usize).div_ceil(chunk);

    let best_per_chunk = map_indexed(chunks, |c| {
        let lo = c * chunk;
        let hi = ((c + 1) * chunk).min(total_assignments as usize);
        let mut best: Option<(f64, Vec<Vec<usize>>)> = None;
        for a in lo..hi {
            // Split the assignment index into per-robot product subsets.
            let mut masks = vec![0usize; fleet];
            let mut rest = a;
            for i in 0..n {
                masks[rest % fleet] |= 1 << i;
                rest /= fleet;
            }
            if masks.iter().any(|&m| subset_weight[m] > capacity) {
                continue;
            }
            let cost: f64 = masks.iter().map(|&m| tours[m].0).sum();
            let better = match &best {
                None => true,
                Some((b, routes)) => {
                    cost < b - TIE_EPS
                        || (cost <= b + TIE_EPS && assemble_routes(&masks, &tours) < *routes)
                }
            };
            if better {
                best = Some((cost, assemble_routes(&masks, &tours)));
            }
        }
        best
    });

    let mut best: Option<(f64, Vec<Vec<usize>>)> = None;
    for (cost, routes) in best_per_chunk.into_iter().flatten() {
        let take = match &best {
            None => true,
            Some((b, r)) => cost < b - TIE_EPS || (cost <= b + TIE_EPS && routes < *r),
        };
        if take {
            best = Some((cost, routes));
        }
    }

    match best {
        Some((optimal_distance, routes)) => Ok(OracleResult {
            optimal_distance,
            routes,
            assignments_searched: total_assignments,
        }),
        None => Err(Error::InfeasibleInstance),
    }
}

/// Route list for an assignment: `[0, products.., 0]` per robot, parked
/// robots as `[0, 0]`.
fn assemble_routes(masks: &[usize], tours: &[(f64, Vec<usize>)]) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|&m| {
            let mut route = Vec::with_capacity(tours[m].1.len() + 2);
            route.push(0);
            route.extend_from_slice(&tours[m].1);
            route.push(0);
            route
        })
        .collect()
}

/// For every product subset: minimal open-the-depot-and-return tour cost and
/// the lexicographically smallest order achieving it.
fn best_tours_per_subset(instance: &Instance) -> Vec<(f64, Vec<usize>)> {
    let n = instance.num_products();
    map_indexed(1usize << n, |mask| {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        if members.is_empty() {
            return (0.0, Vec::new());
        }
        let mut order = members.clone();
        let mut best_cost = f64::INFINITY;
        let mut best_order = Vec::new();
        loop {
            let mut cost = instance.distance(0, order[0]);
            for w in order.windows(2) {
                cost += instance.distance(w[0], w[1]);
            }
            cost += instance.distance(*order.last().unwrap(), 0);
            // Lexicographic enumeration order makes "strictly better" keep
            // the smallest tied order automatically.
            if cost < best_cost - TIE_EPS {
                best_cost = cost;
                best_order = order.clone();
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        (best_cost, best_order)
    })
}

/// Advances to the next lexicographic permutation; false once exhausted.
fn next_permutation(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::explicit_instance;

    fn triangle(fleet: usize, capacity: u32, w: &[f64]) -> Instance {
        explicit_instance(
            "tri",
            w,
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 3.0],
                vec![2.0, 3.0, 0.0],
            ],
            fleet,
            capacity,
        )
        .unwrap()
    }

    #[test]
    fn single_product() {
        let inst = explicit_instance(
            "one",
            &[1.0],
            vec![vec![0.0, 2.0], vec![2.0, 0.0]],
            1,
            1,
        )
        .unwrap();
        let res = oracle_optimum(&inst).unwrap();
        assert_eq!(res.optimal_distance, 4.0);
        assert_eq!(res.routes, vec![vec![0, 1, 0]]);
        assert_eq!(res.assignments_searched, 1);
    }

    #[test]
    fn two_products_tie_breaks_lexicographically() {
        // Both orders cost 6; [0,1,2,0] is the smaller route list.
        let inst = triangle(1, 45, &[1.0, 1.0]);
        let res = oracle_optimum(&inst).unwrap();
        assert_eq!(res.optimal_distance, 6.0);
        assert_eq!(res.routes, vec![vec![0, 1, 2, 0]]);
    }

    #[test]
    fn capacity_forces_a_split() {
        // Each robot can carry exactly one product.
        let inst = triangle(2, 5, &[5.0, 5.0]);
        let res = oracle_optimum(&inst).unwrap();
        assert_eq!(res.optimal_distance, 2.0 * 1.0 + 2.0 * 2.0);
        assert_eq!(res.routes, vec![vec![0, 1, 0], vec![0, 2, 0]]);
    }

    #[test]
    fn infeasible_instance_errors() {
        let inst = triangle(1, 5, &[5.0, 5.0]);
        assert!(matches!(oracle_optimum(&inst), Err(Error::InfeasibleInstance)));
    }

    #[test]
    fn oversized_instance_errors() {
        let n = 9;
        let mut rows = vec![vec![0.0; n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    rows[i][j] = 1.0;
                }
            }
        }
        let inst = explicit_instance("big", &vec![1.0; n], rows, 1, 45).unwrap();
        assert!(matches!(oracle_optimum(&inst), Err(Error::InstanceTooLarge(_))));
    }

    #[test]
    fn extra_robot_never_hurts() {
        let inst = triangle(1, 45, &[1.0, 1.0]);
        let base = oracle_optimum(&inst).unwrap().optimal_distance;
        let more = oracle_optimum(&inst.with_fleet_size(2).unwrap())
            .unwrap()
            .optimal_distance;
        assert!(more <= base + 1e-12);
    }

    #[test]
    fn parked_robots_cost_nothing() {
        // Every assignment ties at cost 6 here; the lexicographically
        // smallest route list parks robot 0 and routes robot 1.
        let inst = triangle(2, 45, &[1.0, 1.0]);
        let res = oracle_optimum(&inst).unwrap();
        assert_eq!(res.optimal_distance, 6.0);
        assert_eq!(res.routes, vec![vec![0, 0], vec![0, 1, 2, 0]]);
        assert_eq!(res.assignments_searched, 4);
    }
}
