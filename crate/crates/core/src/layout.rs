//! Variable layout: the bijection between route bits x[t][i][robot] plus
//! per-robot slack bits and flat indices into a bit assignment.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Which time steps carry free variables.
///
/// In `Full` mode every step 0..=n+1 carries variables and the boundary
/// depot conditions become penalty terms. In `Reduced` mode steps 0 and n+1
/// are fixed at the depot and carry no variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingMode {
    Full,
    Reduced,
}

/// Role of a flat variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    /// Robot `robot` is at node `node` at time step `time`.
    Route { robot: usize, time: usize, node: usize },
    /// Bit `bit` of robot `robot`'s capacity slack register.
    Slack { robot: usize, bit: usize },
}

/// Immutable index layout for a given (n, K, M, mode) combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingLayout {
    num_products: usize,
    fleet_size: usize,
    capacity: u32,
    mode: EncodingMode,
    slack_bits: usize,
    num_vars: usize,
}

/// Number of binary variables used by the encoding:
/// `K(n+1)(n+2) + K*ceil(log2 M)` in full mode,
/// `K*n*(n+1) + K*ceil(log2 M)` in reduced mode.
pub fn qubit_count(n: usize, fleet_size: usize, capacity: u32, mode: EncodingMode) -> Result<usize> {
    if n == 0 || fleet_size == 0 || capacity == 0 {
        return Err(Error::InvalidInput(
            "item count, fleet size and capacity must all be positive".into(),
        ));
    }
    let route = match mode {
        EncodingMode::Full => fleet_size * (n + 1) * (n + 2),
        EncodingMode::Reduced => fleet_size * n * (n + 1),
    };
    Ok(route + fleet_size * slack_bits_for(capacity))
}

/// ceil(log2 M); 0 when M = 1.
pub fn slack_bits_for(capacity: u32) -> usize {
    if capacity <= 1 {
        0
    } else {
        (u32::BITS - (capacity - 1).leading_zeros()) as usize
    }
}

/// Coefficients of the capacity slack register: plain binary bits with the
/// top coefficient capped at `M - (2^(m-1) - 1)` so the register never
/// exceeds M.
pub fn slack_coefficients(capacity: u32) -> Vec<u32> {
    let m = slack_bits_for(capacity);
    let mut coeffs = Vec::with_capacity(m);
    for b in 0..m {
        if b + 1 < m {
            coeffs.push(1 << b);
        } else {
            coeffs.push(capacity - ((1 << (m - 1)) - 1));
        }
    }
    coeffs
}

impl EncodingLayout {
    pub fn new(n: usize, fleet_size: usize, capacity: u32, mode: EncodingMode) -> Result<Self> {
        let num_vars = qubit_count(n, fleet_size, capacity, mode)?;
        Ok(EncodingLayout {
            num_products: n,
            fleet_size,
            capacity,
            mode,
            slack_bits: slack_bits_for(capacity),
            num_vars,
        })
    }

    /// Layout matching an instance's product count, fleet size and capacity.
    pub fn for_instance(instance: &Instance, mode: EncodingMode) -> Result<Self> {
        Self::new(
            instance.num_products(),
            instance.fleet_size,
            instance.capacity,
            mode,
        )
    }

    pub fn num_products(&self) -> usize {
        self.num_products
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn mode(&self) -> EncodingMode {
        self.mode
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn slack_bits(&self) -> usize {
        self.slack_bits
    }

    /// Time steps that carry free variables, in order.
    pub fn free_steps(&self) -> Range<usize> {
        match self.mode {
            EncodingMode::Full => 0..self.num_products + 2,
            EncodingMode::Reduced => 1..self.num_products + 1,
        }
    }

    fn steps_per_robot(&self) -> usize {
        self.free_steps().len()
    }

    fn nodes_per_step(&self) -> usize {
        self.num_products + 1
    }

    /// Flat index of the route bit "robot is at `node` at time `time`".
    ///
    /// `robot` is 0-based, `time` must be a free step, `node` in 0..=n.
    pub fn route_index(&self, robot: usize, time: usize, node: usize) -> usize {
        let steps = self.free_steps();
        debug_assert!(robot < self.fleet_size);
        debug_assert!(steps.contains(&time));
        debug_assert!(node <= self.num_products);
        let t_off = time - steps.start;
        robot * self.steps_per_robot() * self.nodes_per_step()
            + t_off * self.nodes_per_step()
            + node
    }

    /// Flat index of slack bit `bit` of `robot`'s capacity register.
    pub fn slack_index(&self, robot: usize, bit: usize) -> usize {
        debug_assert!(robot < self.fleet_size);
        debug_assert!(bit < self.slack_bits);
        self.route_vars() + robot * self.slack_bits + bit
    }

    fn route_vars(&self) -> usize {
        self.fleet_size * self.steps_per_robot() * self.nodes_per_step()
    }

    /// Inverse of the index maps.
    pub fn role_of(&self, index: usize) -> VarRole {
        assert!(index < self.num_vars, "index {index} out of range");
        let route_vars = self.route_vars();
        if index < route_vars {
            let per_robot = self.steps_per_robot() * self.nodes_per_step();
            let robot = index / per_robot;
            let rem = index % per_robot;
            let time = rem / self.nodes_per_step() + self.free_steps().start;
            let node = rem % self.nodes_per_step();
            VarRole::Route { robot, time, node }
        } else {
            let rem = index - route_vars;
            VarRole::Slack {
                robot: rem / self.slack_bits,
                bit: rem % self.slack_bits,
            }
        }
    }
}
