//! Translating bit assignments back into per-robot routes, checking every
//! constraint directly, and computing true travel distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::layout::{slack_coefficients, EncodingLayout, EncodingMode};

/// One constraint violation found while decoding or validating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub robot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<usize>,
    pub magnitude: f64,
}

/// The violation kinds mirror the penalty terms one-to-one, so that a bit
/// assignment has zero constraint penalty exactly when its decode is
/// feasible. `MultiPosition` covers any step where the position count is
/// not one (zero set bits included); `SlackMismatch` flags a slack register
/// that does not complement the load to the capacity even though the load
/// itself fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    MultiPosition,
    MissedProduct,
    DuplicatedProduct,
    CapacityExceeded,
    BadBoundary,
    SlackMismatch,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        FeasibilityReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Decoded per-robot routes with loads, distance and a feasibility report.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// One route per robot, each beginning and ending at the depot.
    pub routes: Vec<Vec<usize>>,
    pub loads: Vec<f64>,
    pub total_distance: f64,
    /// Model energy of the source bits (as reported by the solver).
    pub energy: f64,
    pub feasibility: FeasibilityReport,
    pub robots_used: usize,
}

/// Sum of consecutive-pair distances along a route.
pub fn route_distance(route: &[usize], instance: &Instance) -> Result<f64> {
    let count = instance.num_nodes();
    if let Some(&bad) = route.iter().find(|&&id| id >= count) {
        return Err(Error::InvalidInput(format!(
            "route references unknown node id {bad}"
        )));
    }
    Ok(route
        .windows(2)
        .map(|w| instance.distance(w[0], w[1]))
        .sum())
}

/// Reads the routes, loads and feasibility out of a bit assignment.
///
/// Each free time step is read as the unique set node; steps with several
/// set bits are flagged and read as the lowest set node, steps with none
/// are read as the depot. Leading and trailing depot parking is trimmed
/// from the reported route; interior depot returns are kept verbatim.
/// `energy` is the model energy the solver reported for these bits.
pub fn decode(
    bits: &[bool],
    layout: &EncodingLayout,
    instance: &Instance,
    energy: f64,
) -> Result<Solution> {
    if bits.len() != layout.num_vars() {
        return Err(Error::LengthMismatch {
            expected: layout.num_vars(),
            got: bits.len(),
        });
    }
    let n = layout.num_products();
    let fleet = layout.fleet_size();
    let capacity = f64::from(layout.capacity());
    let slack_coeffs = slack_coefficients(layout.capacity());

    let mut violations = Vec::new();
    let mut routes = Vec::with_capacity(fleet);
    let mut loads = Vec::with_capacity(fleet);
    let mut product_visits = vec![0usize; n + 1];

    for robot in 0..fleet {
        let mut visited = Vec::with_capacity(layout.free_steps().len());
        let mut load = 0.0;
        for t in layout.free_steps() {
            let set: Vec<usize> = (0..=n)
                .filter(|&i| bits[layout.route_index(robot, t, i)])
                .collect();
            if set.len() != 1 {
                violations.push(Violation {
                    kind: ViolationKind::MultiPosition,
                    robot: Some(robot),
                    time: Some(t),
                    product: None,
                    magnitude: (set.len() as f64 - 1.0).abs(),
                });
            }
            for &i in &set {
                if i >= 1 {
                    product_visits[i] += 1;
                    load += instance.weight(i);
                }
            }
            visited.push(set.first().copied().unwrap_or(0));
        }

        if layout.mode() == EncodingMode::Full {
            for t in [0, n + 1] {
                if !bits[layout.route_index(robot, t, 0)] {
                    violations.push(Violation {
                        kind: ViolationKind::BadBoundary,
                        robot: Some(robot),
                        time: Some(t),
                        product: None,
                        magnitude: 1.0,
                    });
                }
            }
        }

        let slack: f64 = slack_coeffs
            .iter()
            .enumerate()
            .filter(|&(b, _)| bits[layout.slack_index(robot, b)])
            .map(|(_, &c)| f64::from(c))
            .sum();
        if load > capacity {
            violations.push(Violation {
                kind: ViolationKind::CapacityExceeded,
                robot: Some(robot),
                time: None,
                product: None,
                magnitude: load - capacity,
            });
        } else if load + slack != capacity {
            violations.push(Violation {
                kind: ViolationKind::SlackMismatch,
                robot: Some(robot),
                time: None,
                product: None,
                magnitude: (load + slack - capacity).abs(),
            });
        }

        routes.push(canonical_route(&visited));
        loads.push(load);
    }

    for product in 1..=n {
        let visits = product_visits[product];
        if visits == 0 {
            violations.push(Violation {
                kind: ViolationKind::MissedProduct,
                robot: None,
                time: None,
                product: Some(product),
                magnitude: 1.0,
            });
        } else if visits > 1 {
            violations.push(Violation {
                kind: ViolationKind::DuplicatedProduct,
                robot: None,
                time: None,
                product: Some(product),
                magnitude: visits as f64 - 1.0,
            });
        }
    }

    let mut total_distance = 0.0;
    for route in &routes {
        total_distance += route_distance(route, instance)?;
    }
    let robots_used = routes.iter().filter(|r| r.iter().any(|&id| id != 0)).count();

    Ok(Solution {
        routes,
        loads,
        total_distance,
        energy,
        feasibility: FeasibilityReport::from_violations(violations),
        robots_used,
    })
}

/// Trims leading/trailing depot parking; parked robots become `[0, 0]`.
fn canonical_route(visited: &[usize]) -> Vec<usize> {
    let first = visited.iter().position(|&id| id != 0);
    let last = visited.iter().rposition(|&id| id != 0);
    match (first, last) {
        (Some(a), Some(b)) => {
            let mut route = Vec::with_capacity(b - a + 3);
            route.push(0);
            route.extend_from_slice(&visited[a..=b]);
            route.push(0);
            route
        }
        _ => vec![0, 0],
    }
}

/// Re-derives a feasibility report from routes alone: boundary depots,
/// per-product exactly-once across the fleet, per-robot capacity. Slack
/// registers and position multiplicities are not visible at this level.
pub fn validate(solution: &Solution, instance: &Instance) -> FeasibilityReport {
    let n = instance.num_products();
    let mut violations = Vec::new();
    let mut product_visits = vec![0usize; n + 1];

    for (robot, route) in solution.routes.iter().enumerate() {
        if route.first() != Some(&0) || route.last() != Some(&0) || route.len() < 2 {
            violations.push(Violation {
                kind: ViolationKind::BadBoundary,
                robot: Some(robot),
                time: None,
                product: None,
                magnitude: 1.0,
            });
        }
        let mut load = 0.0;
        for &id in route {
            if id >= 1 && id <= n {
                product_visits[id] += 1;
                load += instance.weight(id);
            }
        }
        let capacity = f64::from(instance.capacity);
        if load > capacity {
            violations.push(Violation {
                kind: ViolationKind::CapacityExceeded,
                robot: Some(robot),
                time: None,
                product: None,
                magnitude: load - capacity,
            });
        }
    }

    for product in 1..=n {
        let visits = product_visits[product];
        if visits == 0 {
            violations.push(Violation {
                kind: ViolationKind::MissedProduct,
                robot: None,
                time: None,
                product: Some(product),
                magnitude: 1.0,
            });
        } else if visits > 1 {
            violations.push(Violation {
                kind: ViolationKind::DuplicatedProduct,
                robot: None,
                time: None,
                product: Some(product),
                magnitude: visits as f64 - 1.0,
            });
        }
    }

    FeasibilityReport::from_violations(violations)
}

/// On-disk solution document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub routes: Vec<Vec<usize>>,
    pub loads: Vec<f64>,
    pub total_distance: f64,
    pub energy: f64,
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub solver: String,
    pub seed: u64,
}

impl SolutionDocument {
    pub fn new(solution: &Solution, solver: impl Into<String>, seed: u64) -> Self {
        SolutionDocument {
            routes: solution.routes.clone(),
            loads: solution.loads.clone(),
            total_distance: solution.total_distance,
            energy: solution.energy,
            feasible: solution.feasibility.ok,
            violations: solution.feasibility.violations.clone(),
            solver: solver.into(),
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
