//! Problem instances: depot, product nodes with weights, a distance matrix,
//! fleet size and per-robot capacity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking a provided matrix against node positions.
const METRIC_TOLERANCE: f64 = 1e-9;

/// How the distance matrix relates to node positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Matrix is given verbatim in the instance document.
    Explicit,
    Euclidean,
    Manhattan,
}

impl Metric {
    fn apply(self, a: [f64; 2], b: [f64; 2]) -> f64 {
        match self {
            Metric::Explicit => unreachable!("explicit metric has no formula"),
            Metric::Euclidean => ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt(),
            Metric::Manhattan => (a[0] - b[0]).abs() + (a[1] - b[1]).abs(),
        }
    }
}

/// A storage position (or the depot, id 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    /// Weight of the product stored here, kg. Zero for the depot.
    pub weight: f64,
    pub position: Option<[f64; 2]>,
}

/// A validated picking/batching problem.
///
/// Immutable after construction; node 0 is always the depot.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    nodes: Vec<Node>,
    /// Row-major (n+1) x (n+1), symmetric, zero diagonal.
    distances: Vec<f64>,
    pub fleet_size: usize,
    pub capacity: u32,
    pub metric: Metric,
}

impl Instance {
    /// Builds and validates an instance from its parts.
    ///
    /// `distances` must be given for [`Metric::Explicit`] and may be given for
    /// the generated metrics, in which case it is checked against the node
    /// positions.
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<Node>,
        distances: Option<Vec<Vec<f64>>>,
        fleet_size: usize,
        capacity: u32,
        metric: Metric,
    ) -> Result<Self> {
        if fleet_size == 0 {
            return Err(Error::validation("robots", "must be a positive integer"));
        }
        if capacity == 0 {
            return Err(Error::validation("capacity", "must be a positive integer"));
        }
        if nodes.is_empty() {
            return Err(Error::validation("nodes", "at least the depot is required"));
        }
        if nodes[0].id != 0 {
            return Err(Error::validation(
                "nodes[0].id",
                format!("depot must be listed first with id 0, found id {}", nodes[0].id),
            ));
        }
        if nodes[0].weight != 0.0 {
            return Err(Error::validation(
                "nodes[0].weight",
                format!("depot weight must be exactly 0, found {}", nodes[0].weight),
            ));
        }
        for (k, node) in nodes.iter().enumerate() {
            if node.id != k {
                return Err(Error::validation(
                    format!("nodes[{k}].id"),
                    format!("product ids must be 1..n with no gaps, expected {k}, found {}", node.id),
                ));
            }
            if !node.weight.is_finite() || node.weight < 0.0 {
                return Err(Error::validation(
                    format!("nodes[{k}].weight"),
                    format!("weight must be a finite non-negative number, found {}", node.weight),
                ));
            }
            if let Some(p) = node.position {
                if !p[0].is_finite() || !p[1].is_finite() {
                    return Err(Error::validation(
                        format!("nodes[{k}].pos"),
                        "coordinates must be finite".to_string(),
                    ));
                }
            }
        }

        let count = nodes.len();
        let matrix = match (metric, distances) {
            (Metric::Explicit, None) => {
                return Err(Error::validation(
                    "distances",
                    "required when metric is \"explicit\"",
                ));
            }
            (Metric::Explicit, Some(rows)) => flatten_checked(rows, count)?,
            (m, given) => {
                let positions = positions_of(&nodes)?;
                let generated = build_distance_matrix(&positions, m)?;
                if let Some(rows) = given {
                    let provided = flatten_checked(rows, count)?;
                    for i in 0..count {
                        for j in 0..count {
                            let d = provided[i * count + j];
                            let g = generated[i * count + j];
                            if (d - g).abs() > METRIC_TOLERANCE {
                                return Err(Error::validation(
                                    format!("distances[{i}][{j}]"),
                                    format!("{d} does not match the {m:?} metric value {g}"),
                                ));
                            }
                        }
                    }
                    provided
                } else {
                    generated
                }
            }
        };

        Ok(Instance {
            name: name.into(),
            nodes,
            distances: matrix,
            fleet_size,
            capacity,
            metric,
        })
    }

    /// Number of products (excludes the depot).
    pub fn num_products(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Number of nodes including the depot.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.nodes.len() + j]
    }

    pub fn max_distance(&self) -> f64 {
        self.distances.iter().cloned().fold(0.0, f64::max)
    }

    /// Weight of product `i` (1-based product id).
    pub fn weight(&self, i: usize) -> f64 {
        self.nodes[i].weight
    }

    /// True when every product weight is a non-negative integer, as the
    /// capacity slack encoding requires.
    pub fn has_integer_weights(&self) -> bool {
        self.nodes.iter().all(|n| n.weight.fract() == 0.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Parses and validates an instance document (JSON).
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_instance()
    }

    /// Serializes to the instance document format. `from_json` of the output
    /// reproduces the instance exactly.
    pub fn to_json(&self) -> String {
        let doc = InstanceDoc::from_instance(self);
        serde_json::to_string_pretty(&doc).expect("instance serialization cannot fail")
    }

    /// Returns a copy with a different fleet size.
    pub fn with_fleet_size(&self, fleet_size: usize) -> Result<Self> {
        if fleet_size == 0 {
            return Err(Error::validation("robots", "must be a positive integer"));
        }
        let mut out = self.clone();
        out.fleet_size = fleet_size;
        Ok(out)
    }
}

fn positions_of(nodes: &[Node]) -> Result<Vec<[f64; 2]>> {
    nodes
        .iter()
        .map(|n| {
            n.position.ok_or_else(|| {
                Error::validation(
                    format!("nodes[{}].pos", n.id),
                    "required when metric is not \"explicit\"",
                )
            })
        })
        .collect()
}

fn flatten_checked(rows: Vec<Vec<f64>>, count: usize) -> Result<Vec<f64>> {
    if rows.len() != count {
        return Err(Error::validation(
            "distances",
            format!("expected {count} rows, found {}", rows.len()),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != count {
            return Err(Error::validation(
                format!("distances[{i}]"),
                format!("expected {count} entries, found {}", row.len()),
            ));
        }
    }
    let mut flat = vec![0.0; count * count];
    for i in 0..count {
        for j in 0..count {
            let d = rows[i][j];
            if !d.is_finite() || d < 0.0 {
                return Err(Error::validation(
                    format!("distances[{i}][{j}]"),
                    format!("must be finite and non-negative, found {d}"),
                ));
            }
            if i == j && d != 0.0 {
                return Err(Error::validation(
                    format!("distances[{i}][{i}]"),
                    "diagonal must be zero",
                ));
            }
            if rows[j][i] != d {
                return Err(Error::validation(
                    format!("distances[{i}][{j}]"),
                    format!("matrix is asymmetric: {d} vs distances[{j}][{i}] = {}", rows[j][i]),
                ));
            }
            flat[i * count + j] = d;
        }
    }
    Ok(flat)
}

/// Computes a full distance matrix from 2-D points.
pub fn build_distance_matrix(positions: &[[f64; 2]], metric: Metric) -> Result<Vec<f64>> {
    if positions.is_empty() {
        return Err(Error::InvalidInput("at least one point is required".into()));
    }
    if metric == Metric::Explicit {
        return Err(Error::InvalidInput(
            "explicit metric has no generator; provide the matrix".into(),
        ));
    }
    for (k, p) in positions.iter().enumerate() {
        if !p[0].is_finite() || !p[1].is_finite() {
            return Err(Error::InvalidInput(format!(
                "point {k} has a non-finite coordinate"
            )));
        }
    }
    let n = positions.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.apply(positions[i], positions[j]);
            m[i * n + j] = d;
            m[j * n + i] = d;
        }
    }
    Ok(m)
}

/// On-disk instance document. Field set is closed: unknown keys are rejected.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    name: String,
    capacity: u32,
    robots: usize,
    metric: Metric,
    nodes: Vec<NodeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distances: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    weight: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pos: Option<[f64; 2]>,
}

impl InstanceDoc {
    fn into_instance(self) -> Result<Instance> {
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| Node {
                id: n.id,
                weight: n.weight,
                position: n.pos,
            })
            .collect();
        Instance::new(
            self.name,
            nodes,
            self.distances,
            self.robots,
            self.capacity,
            self.metric,
        )
    }

    fn from_instance(inst: &Instance) -> Self {
        let count = inst.num_nodes();
        let distances = match inst.metric {
            Metric::Explicit => Some(
                (0..count)
                    .map(|i| (0..count).map(|j| inst.distance(i, j)).collect())
                    .collect(),
            ),
            _ => None,
        };
        InstanceDoc {
            name: inst.name.clone(),
            capacity: inst.capacity,
            robots: inst.fleet_size,
            metric: inst.metric,
            nodes: inst
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id,
                    weight: n.weight,
                    pos: n.position,
                })
                .collect(),
            distances,
        }
    }
}

/// Convenience constructor used across the test suite and the bench command:
/// explicit matrix, products numbered 1..=weights.len().
pub fn explicit_instance(
    name: &str,
    weights: &[f64],
    distances: Vec<Vec<f64>>,
    fleet_size: usize,
    capacity: u32,
) -> Result<Instance> {
    let mut nodes = vec![Node {
        id: 0,
        weight: 0.0,
        position: None,
    }];
    for (k, &w) in weights.iter().enumerate() {
        nodes.push(Node {
            id: k + 1,
            weight: w,
            position: None,
        });
    }
    Instance::new(name, nodes, Some(distances), fleet_size, capacity, Metric::Explicit)
}
