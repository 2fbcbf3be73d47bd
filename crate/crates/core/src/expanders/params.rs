use serde::{Deserialize, Serialize};

use crate::graph::SimpleGraph;
use crate::scalar::Real;

/// Numeric constants of the expansion definitions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExpansionConstants<T> {
    pub rho_denom: T,
    pub edge_factor_undirected: T,
    pub edge_factor_directed: T,
    pub vertex_factor_undirected: T,
    pub vertex_factor_directed: T,
    pub connector_len: T,
    pub connector_half: T,
}

impl<T: Real> Default for ExpansionConstants<T> {
    fn default() -> Self {
        ExpansionConstants {
            rho_denom: T::lit(256.0),
            edge_factor_undirected: T::lit(32.0),
            edge_factor_directed: T::lit(4.0),
            vertex_factor_undirected: T::lit(2.0),
            vertex_factor_directed: T::lit(1.0),
            connector_len: T::lit(1600.0),
            connector_half: T::lit(800.0),
        }
    }
}

/// Scale parameter `t` plus constants. Logarithms are base 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExpansionParams<T> {
    pub t: T,
    pub constants: ExpansionConstants<T>,
    /// Largest vertex count for exhaustive subset enumeration.
    pub exhaustive_cap: usize,
}

impl<T: Real> ExpansionParams<T> {
    pub fn new(t: T) -> Self {
        assert!(t > T::zero(), "t must be positive");
        ExpansionParams {
            t,
            constants: ExpansionConstants::default(),
            exhaustive_cap: 16,
        }
    }

    /// ρ_t(x): zero below t, else 1 / (256 log²(4x/t)).
    pub fn rho(&self, x: T) -> T {
        if x < self.t {
            return T::zero();
        }
        let l = (T::lit(4.0) * x / self.t).log2();
        T::one() / (self.constants.rho_denom * l * l)
    }

    /// γ(x) = min(1, 1/log(2x/t)). Where the logarithm is at most 1
    /// (including where it is negative) the value is 1.
    pub fn gamma(&self, x: T) -> T {
        let l = (T::lit(2.0) * x / self.t).log2();
        if l <= T::one() {
            T::one()
        } else {
            T::one() / l
        }
    }

    /// φ(H) = d(H)(1 + γ(|H|)) with d the undirected average degree 2e/n.
    pub fn phi(&self, g: &SimpleGraph) -> T {
        self.phi_of(g.vertex_count(), g.edge_count())
    }

    pub(crate) fn phi_of(&self, n: usize, e: usize) -> T {
        if n == 0 {
            return T::zero();
        }
        let n_t = T::count(n);
        let d = T::lit(2.0) * T::count(e) / n_t;
        d * (T::one() + self.gamma(n_t))
    }

    /// Path length bound for connecting two large sets: 1600 log³(n/t).
    pub fn connector_bound(&self, n: usize) -> T {
        let l = (T::count(n) / self.t).log2();
        self.constants.connector_len * l * l * l
    }
}
