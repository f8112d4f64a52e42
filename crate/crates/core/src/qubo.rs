//! QUBO assembly: travel-distance objective plus squared penalty terms for
//! the routing and capacity constraints, over the layout's route and slack
//! bits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::layout::{slack_coefficients, EncodingLayout, EncodingMode};

/// Quadratic binary model: offset + sum(linear) + sum(quadratic), variables
/// in {0,1}. Quadratic keys are strictly upper-triangular and no stored
/// coefficient is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    num_vars: usize,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        QuboModel {
            num_vars,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    pub fn add_linear(&mut self, index: usize, value: f64) {
        assert!(index < self.num_vars, "variable {index} out of range");
        let entry = self.linear.entry(index).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.linear.remove(&index);
        }
    }

    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) {
        assert!(i != j, "quadratic terms need two distinct variables");
        assert!(i < self.num_vars && j < self.num_vars, "variable out of range");
        let key = if i < j { (i, j) } else { (j, i) };
        let entry = self.quadratic.entry(key).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.quadratic.remove(&key);
        }
    }

    /// Adds `weight * (sum(coeff_k * x_k) - target)^2`, expanded using
    /// x^2 = x for binary variables.
    pub fn add_squared_penalty(&mut self, terms: &[(usize, f64)], target: f64, weight: f64) {
        for (a, &(idx, coeff)) in terms.iter().enumerate() {
            self.add_linear(idx, weight * (coeff * coeff - 2.0 * target * coeff));
            for &(jdx, coeff_j) in &terms[a + 1..] {
                self.add_quadratic(idx, jdx, weight * 2.0 * coeff * coeff_j);
            }
        }
        self.add_offset(weight * target * target);
    }

    /// Merges another model over the same variable set into this one.
    pub fn add_model(&mut self, other: &QuboModel) {
        assert_eq!(self.num_vars, other.num_vars);
        for (&i, &v) in &other.linear {
            self.add_linear(i, v);
        }
        for (&(i, j), &v) in &other.quadratic {
            self.add_quadratic(i, j, v);
        }
        self.add_offset(other.offset);
    }

    /// Model energy of a bit assignment.
    pub fn energy(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: bits.len(),
            });
        }
        let mut e = self.offset;
        for (&i, &v) in &self.linear {
            if bits[i] {
                e += v;
            }
        }
        for (&(i, j), &v) in &self.quadratic {
            if bits[i] && bits[j] {
                e += v;
            }
        }
        Ok(e)
    }
}

/// Magnitudes of the squared penalty terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyWeights {
    /// Weight of the start/end, one-position-per-step and visit-once terms.
    pub route: f64,
    /// Weight of the squared capacity term.
    pub capacity: f64,
}

impl PenaltyWeights {
    /// Default scaling: any unit constraint violation must cost more than
    /// the longest possible feasible tour set. Feasible totals are bounded
    /// by 2n * max d, so `2(n+2) * max d + 1` clears them strictly; the
    /// capacity term gets the same weight because its smallest violation is
    /// also 1 under integer weights.
    pub fn auto(instance: &Instance) -> Self {
        let n = instance.num_products() as f64;
        let route = 2.0 * (n + 2.0) * instance.max_distance() + 1.0;
        PenaltyWeights {
            route,
            capacity: route,
        }
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.route > 0.0) || !(self.capacity > 0.0) {
            return Err(Error::InvalidInput(
                "penalty weights must be strictly positive".into(),
            ));
        }
        Ok(self)
    }
}

/// A QUBO compiled from a picking instance, together with the layout and
/// penalty weights that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PickingModel {
    pub qubo: QuboModel,
    pub layout: EncodingLayout,
    pub weights: PenaltyWeights,
}

fn check_layout(instance: &Instance, layout: &EncodingLayout) -> Result<()> {
    if layout.num_products() != instance.num_products()
        || layout.fleet_size() != instance.fleet_size
        || layout.capacity() != instance.capacity
    {
        return Err(Error::LayoutMismatch(format!(
            "layout is (n={}, K={}, M={}), instance is (n={}, K={}, M={})",
            layout.num_products(),
            layout.fleet_size(),
            layout.capacity(),
            instance.num_products(),
            instance.fleet_size,
            instance.capacity
        )));
    }
    Ok(())
}

/// Travel-distance objective: d(i,j) * x[t-1][i][p] * x[t][j][p] summed over
/// robots and consecutive time pairs. Pairs with a boundary step fixed at
/// the depot (reduced mode) collapse to linear terms.
pub fn build_objective(instance: &Instance, layout: &EncodingLayout) -> Result<QuboModel> {
    check_layout(instance, layout)?;
    let n = layout.num_products();
    let mut model = QuboModel::new(layout.num_vars());
    let steps = layout.free_steps();

    for robot in 0..layout.fleet_size() {
        for t in 1..=(n + 1) {
            let prev_free = steps.contains(&(t - 1));
            let cur_free = steps.contains(&t);
            match (prev_free, cur_free) {
                (true, true) => {
                    for i in 0..=n {
                        for j in 0..=n {
                            let d = instance.distance(i, j);
                            if d != 0.0 {
                                model.add_quadratic(
                                    layout.route_index(robot, t - 1, i),
                                    layout.route_index(robot, t, j),
                                    d,
                                );
                            }
                        }
                    }
                }
                (false, true) => {
                    // t-1 is the fixed depot start.
                    for j in 0..=n {
                        let d = instance.distance(0, j);
                        if d != 0.0 {
                            model.add_linear(layout.route_index(robot, t, j), d);
                        }
                    }
                }
                (true, false) => {
                    // t is the fixed depot return.
                    for i in 0..=n {
                        let d = instance.distance(i, 0);
                        if d != 0.0 {
                            model.add_linear(layout.route_index(robot, t - 1, i), d);
                        }
                    }
                }
                (false, false) => unreachable!("interior steps always carry variables"),
            }
        }
    }
    Ok(model)
}

/// Squared penalty terms:
/// (a) one position per robot per free step,
/// (b) each product visited exactly once by the fleet,
/// (c) per-robot load plus slack register equals capacity,
/// (d) in full mode, boundary steps pinned to the depot.
pub fn build_constraints(
    instance: &Instance,
    layout: &EncodingLayout,
    weights: PenaltyWeights,
) -> Result<QuboModel> {
    check_layout(instance, layout)?;
    let weights = weights.validated()?;
    if !instance.has_integer_weights() {
        return Err(Error::InvalidInput(
            "capacity slack encoding needs integer weights; normalize the batch weights first"
                .into(),
        ));
    }
    let n = layout.num_products();
    let mut model = QuboModel::new(layout.num_vars());
    let slack = slack_coefficients(layout.capacity());

    for robot in 0..layout.fleet_size() {
        // (a) exactly one node per free time step.
        for t in layout.free_steps() {
            let terms: Vec<(usize, f64)> = (0..=n)
                .map(|i| (layout.route_index(robot, t, i), 1.0))
                .collect();
            model.add_squared_penalty(&terms, 1.0, weights.route);
        }

        // (c) load + slack = capacity.
        let mut terms: Vec<(usize, f64)> = Vec::new();
        for t in layout.free_steps() {
            for i in 1..=n {
                terms.push((layout.route_index(robot, t, i), instance.weight(i)));
            }
        }
        for (b, &c) in slack.iter().enumerate() {
            terms.push((layout.slack_index(robot, b), f64::from(c)));
        }
        model.add_squared_penalty(&terms, f64::from(layout.capacity()), weights.capacity);

        // (d) boundary steps pinned to the depot (full mode only).
        if layout.mode() == EncodingMode::Full {
            for t in [0, n + 1] {
                let idx = layout.route_index(robot, t, 0);
                model.add_squared_penalty(&[(idx, 1.0)], 1.0, weights.route);
            }
        }
    }

    // (b) each product visited exactly once across the fleet.
    for i in 1..=n {
        let mut terms: Vec<(usize, f64)> = Vec::new();
        for robot in 0..layout.fleet_size() {
            for t in layout.free_steps() {
                terms.push((layout.route_index(robot, t, i), 1.0));
            }
        }
        model.add_squared_penalty(&terms, 1.0, weights.route);
    }

    Ok(model)
}

/// Objective plus constraints. With `weights` omitted the automatic scaling
/// rule applies. Deterministic: identical inputs produce identical term maps.
pub fn assemble_qubo(
    instance: &Instance,
    mode: EncodingMode,
    weights: Option<PenaltyWeights>,
) -> Result<PickingModel> {
    let layout = EncodingLayout::for_instance(instance, mode)?;
    let weights = weights
        .unwrap_or_else(|| PenaltyWeights::auto(instance))
        .validated()?;
    let mut qubo = build_objective(instance, &layout)?;
    let constraints = build_constraints(instance, &layout, weights)?;
    qubo.add_model(&constraints);
    Ok(PickingModel {
        qubo,
        layout,
        weights,
    })
}
