use serde::{Deserialize, Serialize};

use crate::expanders::{ExpansionConstants, ExpansionParams, Probe};
use crate::scalar::Real;

/// Thresholds for the dense-immersion step. Fields set to `None` take the
/// asymptotic value from `n` and `k` at call time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DenseParams<T> {
    /// Enforce the asymptotic size hypotheses; otherwise only structural
    /// postconditions are checked.
    pub strict: bool,
    /// Record ball growth against the expansion recurrence.
    pub diagnostics: bool,
    pub expansion: ExpansionConstants<T>,
    pub exhaustive_cap: usize,
    pub probe: Probe,
    pub beta: T,
    /// Required minimum in-degree is `min_degree_factor * k`.
    pub min_degree_factor: usize,
    /// Regularize to degree `2 * regular_factor * k`; `None` uses half the
    /// minimum in-degree.
    pub regular_factor: Option<usize>,
    /// Maximum in/out-degree bound is `max_degree_factor * k`.
    pub max_degree_factor: usize,
    /// Underlying edge count must reach `edge_factor * k * n`.
    pub edge_factor: usize,
    /// Terminals need out- (in-) degree `terminal_degree_factor * k`.
    pub terminal_degree_factor: usize,
    /// Separation radius; default ⌊(log log n)⁶⌋.
    pub radius: Option<usize>,
    /// Degree in used edges at which a vertex is blocked; default ⌈k / (log log n)³⌉.
    pub saturation: Option<usize>,
    /// Path cap in the large case; default ⌊(log n)⁴⌋.
    pub large_path_cap: Option<usize>,
    /// Path cap in the small case; default ⌊(log ℓ)⁵⌋ with ℓ = n/k.
    pub small_path_cap: Option<usize>,
    pub small_select_factor: usize,
    pub small_w_factor: usize,
    pub small_w_prime_factor: usize,
}

impl<T: Real> DenseParams<T> {
    pub fn paper() -> Self {
        DenseParams {
            strict: true,
            diagnostics: false,
            expansion: ExpansionConstants::default(),
            exhaustive_cap: 16,
            probe: Probe::default(),
            beta: T::lit(100.0),
            min_degree_factor: 100,
            regular_factor: Some(50),
            max_degree_factor: 100,
            edge_factor: 100,
            terminal_degree_factor: 3,
            radius: None,
            saturation: None,
            large_path_cap: None,
            small_path_cap: None,
            small_select_factor: 50,
            small_w_factor: 20,
            small_w_prime_factor: 10,
        }
    }

    /// Small absolute thresholds so the construction runs on graphs with
    /// tens of vertices. β is chosen so that βk is odd for k = 2.
    pub fn desk() -> Self {
        DenseParams {
            strict: false,
            diagnostics: false,
            expansion: ExpansionConstants::default(),
            exhaustive_cap: 16,
            probe: Probe::default(),
            beta: T::lit(12.5),
            min_degree_factor: 2,
            regular_factor: None,
            max_degree_factor: 100,
            edge_factor: 1,
            terminal_degree_factor: 1,
            radius: Some(0),
            saturation: None,
            large_path_cap: None,
            small_path_cap: None,
            small_select_factor: 3,
            small_w_factor: 2,
            small_w_prime_factor: 1,
        }
    }

    /// Expansion parameters at scale `t = k`.
    pub fn expansion_for(&self, k: usize) -> ExpansionParams<T> {
        ExpansionParams {
            t: T::count(k.max(1)),
            constants: self.expansion,
            exhaustive_cap: self.exhaustive_cap,
        }
    }

    pub fn radius_for(&self, n: usize) -> usize {
        self.radius.unwrap_or_else(|| log_log(n).powi(6).floor() as usize)
    }

    pub fn saturation_for(&self, n: usize, k: usize) -> usize {
        self.saturation.unwrap_or_else(|| {
            let ll = log_log(n).powi(3);
            if ll <= 0.0 {
                k.max(1)
            } else {
                ((k as f64 / ll).ceil() as usize).max(1)
            }
        })
    }

    pub fn large_path_cap_for(&self, n: usize) -> Option<usize> {
        match self.large_path_cap {
            Some(c) => Some(c),
            None if self.strict => Some(log2(n as f64).max(0.0).powi(4).floor() as usize),
            None => None,
        }
    }

    pub fn small_path_cap_for(&self, n: usize, k: usize) -> Option<usize> {
        match self.small_path_cap {
            Some(c) => Some(c),
            None if self.strict => {
                let l = n as f64 / k.max(1) as f64;
                Some(log2(l).max(0.0).powi(5).floor() as usize)
            }
            None => None,
        }
    }
}

pub(crate) fn log2(x: f64) -> f64 {
    x.log2()
}

/// log₂ log₂ n, clamped at zero for tiny n.
pub(crate) fn log_log(n: usize) -> f64 {
    let l = log2(n as f64);
    if l <= 1.0 {
        0.0
    } else {
        l.log2()
    }
}
