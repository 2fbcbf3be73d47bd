//! Dense immersions in directed expanders: a complete biclique when the
//! expander is large, most of a slightly larger biclique when it is of
//! moderate size, and the expander itself when it is small.

mod large;
mod ledger;
mod params;
mod small;
mod terminals;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use large::{immerse_biclique_large, large_case_applies, LargeCaseReport, PairRecord};
pub use ledger::{diagnose_growth, ForbiddenLedger, GrowthHypothesis, GrowthOutcome, GrowthStep, PairForbidden};
pub use params::DenseParams;
pub use small::{
    block_sizes, build_layout, immerse_biclique_small, small_case_applies, MatchingRecord, SmallCaseLayout,
    SmallCaseReport,
};
pub use terminals::{grow_ball, separated_terminals, TerminalSystem};

use crate::error::{Error, Result};
use crate::eulerian::{regularize_or_biclique, Regularized};
use crate::expanders::{
    check_expansion_auto, directed_expander_immersion, CheckMode, DirectedExpanderOptions, ExpansionKind,
    ExpansionParams,
};
use crate::graph::{MultiDigraph, VertexId};
use crate::immersion::ImmersionCertificate;
use crate::scalar::Real;

/// A certificate together with the run report of the step that built it.
#[derive(Clone, Debug)]
pub struct Immersed<R> {
    pub certificate: ImmersionCertificate,
    pub report: R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Regularization stopped at a complete biclique.
    Biclique,
    /// The expander has at most βk vertices and is returned whole.
    Direct,
    Small,
    Large,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Biclique => "biclique",
            Branch::Direct => "direct",
            Branch::Small => "small",
            Branch::Large => "large",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DenseReport<T> {
    pub k: usize,
    pub branch: Branch,
    /// Half the regular degree targeted by regularization.
    pub regular_half_degree: usize,
    pub expander_vertices: usize,
    pub expander_edges: usize,
    pub expander_audit_passed: bool,
    pub small: Option<SmallCaseReport>,
    pub large: Option<LargeCaseReport<T>>,
    pub pattern_vertices: usize,
    pub pattern_edges: usize,
}

/// Degree, density and expansion requirements shared by both biclique cases.
pub(crate) fn check_host<T: Real>(g: &MultiDigraph, k: usize, p: &DenseParams<T>, stage: &str) -> Result<()> {
    let n = g.vertex_count();
    let max_deg = g.max_in_degree().max(g.max_out_degree());
    if max_deg > p.max_degree_factor * k {
        return Err(Error::hypothesis(
            stage,
            format!("maximum degree {max_deg} exceeds {}", p.max_degree_factor * k),
        ));
    }
    let e = g.underlying_simple().edge_count();
    if e < p.edge_factor * k * n {
        return Err(Error::hypothesis(
            stage,
            format!("underlying graph has {e} edges, need {}", p.edge_factor * k * n),
        ));
    }
    let rep = check_expansion_auto(g, &p.expansion_for(k), ExpansionKind::RobustVertexDirected, p.probe.seed, p.probe.trials)?;
    if let Some(w) = rep.witness {
        return Err(Error::hypothesis(
            stage,
            format!("not a robust vertex expander: set of {} vertices has {} out-neighbours", w.set.len(), w.measured),
        ));
    }
    Ok(())
}

/// True when robust vertex expansion was verified on every subset.
pub(crate) fn expansion_certified<T: Real>(g: &MultiDigraph, p: &ExpansionParams<T>) -> Result<bool> {
    if g.vertex_count() > p.exhaustive_cap {
        return Ok(false);
    }
    let rep = crate::expanders::check_expansion(g, p, ExpansionKind::RobustVertexDirected, CheckMode::Exhaustive)?;
    Ok(rep.holds)
}

/// The pattern with one copy of each parallel class, mapped identically.
fn deduplicated(host: &Arc<MultiDigraph>) -> Result<ImmersionCertificate> {
    let g: &MultiDigraph = host;
    let mut pattern = MultiDigraph::new(g.vertex_count());
    let mut trails = BTreeMap::new();
    for ((a, b), _) in g.multiplicities() {
        let id = pattern.add_edge(a, b)?;
        trails.insert(id, vec![g.parallel_copies(a, b)[0]]);
    }
    let vertex_map = g.vertices().map(|v| (v, v)).collect();
    Ok(ImmersionCertificate::new(host.clone(), pattern, vertex_map, trails))
}

fn in_branch(e: Error, branch: Branch) -> Error {
    match e {
        Error::HypothesisNotMet { stage, detail } => Error::HypothesisNotMet {
            stage: format!("{branch} branch: {stage}"),
            detail,
        },
        e => e,
    }
}

/// Immerses a simple digraph on at most βk vertices with at least k²/2 edges
/// in a simple Eulerian digraph of large minimum in-degree.
pub fn find_dense_immersion<T: Real>(
    host: &Arc<MultiDigraph>,
    k: usize,
    p: &DenseParams<T>,
) -> Result<Immersed<DenseReport<T>>> {
    let g: &MultiDigraph = host;
    if k == 0 {
        return Err(Error::precondition("k must be positive"));
    }
    if !g.is_simple() || !g.is_eulerian() || g.vertex_count() == 0 {
        return Err(Error::precondition("input must be a nonempty simple Eulerian digraph"));
    }
    let delta = g.min_in_degree();
    if delta < p.min_degree_factor * k {
        return Err(Error::precondition(format!(
            "minimum in-degree {delta} is below {}",
            p.min_degree_factor * k
        )));
    }
    let d = p.regular_factor.map_or(delta / 2, |f| f * k);
    let beta_k = (p.beta * T::count(k)).floor().to_usize().unwrap_or(usize::MAX);
    let need_edges = (k * k).div_ceil(2);
    let finish = |certificate: ImmersionCertificate, report: DenseReport<T>| -> Result<Immersed<DenseReport<T>>> {
        let pv = certificate.pattern().vertex_count();
        let pe = certificate.pattern().edge_count();
        if pe < need_edges || pv > beta_k || !certificate.pattern().is_simple() {
            return Err(in_branch(
                Error::hypothesis(
                    "dense",
                    format!("pattern has {pv} vertices and {pe} edges, need at most {beta_k} and at least {need_edges}"),
                ),
                report.branch,
            ));
        }
        let verdict = certificate.verify();
        if !verdict.is_valid() {
            return Err(Error::internal(format!("dense certificate invalid: {verdict}")));
        }
        Ok(Immersed {
            certificate,
            report: DenseReport {
                pattern_vertices: pv,
                pattern_edges: pe,
                ..report
            },
        })
    };
    let mut report = DenseReport {
        k,
        branch: Branch::Biclique,
        regular_half_degree: d,
        expander_vertices: 0,
        expander_edges: 0,
        expander_audit_passed: false,
        small: None,
        large: None,
        pattern_vertices: 0,
        pattern_edges: 0,
    };

    let regular = match regularize_or_biclique(g, d)? {
        Regularized::Biclique(cert) => {
            // keep at most βk/2 vertices on each side
            let m = d.min(beta_k / 2);
            let keep: Vec<VertexId> = (0..m).chain(d..d + m).map(VertexId).collect();
            return finish(cert.restrict(&keep)?, report);
        }
        Regularized::Regular(lg) => lg,
    };
    let reg_cert = regular.extract_certificate();
    let opts = DirectedExpanderOptions {
        require_oriented: false,
        probe: p.probe,
    };
    let expander = directed_expander_immersion(regular.current(), 2 * d, &p.expansion_for(k), opts)?;
    let exp_cert = expander.lifted.extract_certificate();
    let dd = Arc::new(expander.lifted.current().clone());
    let n = dd.vertex_count();
    report.expander_vertices = n;
    report.expander_edges = dd.edge_count();
    report.expander_audit_passed = expander.audit.passed();

    report.branch = if n <= beta_k {
        Branch::Direct
    } else if small_case_applies(n, k) {
        Branch::Small
    } else {
        Branch::Large
    };
    let inner = match report.branch {
        Branch::Direct => deduplicated(&dd)?,
        Branch::Small => {
            let out = immerse_biclique_small(&dd, k, p).map_err(|e| in_branch(e, Branch::Small))?;
            report.small = Some(out.report);
            out.certificate
        }
        Branch::Large => {
            let out = immerse_biclique_large(&dd, k, p).map_err(|e| in_branch(e, Branch::Large))?;
            report.large = Some(out.report);
            out.certificate
        }
        Branch::Biclique => unreachable!("handled above"),
    };
    let chained = ImmersionCertificate::compose(&ImmersionCertificate::compose(&reg_cert, &exp_cert)?, &inner)?;
    finish(chained, report)
}

#[cfg(test)]
mod tests;
