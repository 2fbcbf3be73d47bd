use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ledger::{diagnose_growth, ForbiddenLedger, GrowthStep};
use super::params::{log2, log_log, DenseParams};
use super::terminals::{grow_ball, separated_terminals, TerminalSystem};
use super::{check_host, expansion_certified, Immersed};
use crate::error::{Error, Result};
use crate::eulerian::biclique_pattern;
use crate::expanders::{connect_avoiding, ConnectOptions, Connection};
use crate::graph::{MultiDigraph, VertexId};
use crate::immersion::ImmersionCertificate;
use crate::scalar::Real;
use crate::search::Direction;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub source: VertexId,
    pub sink: VertexId,
    pub length: usize,
    pub forbidden: usize,
    pub saturated: usize,
    /// `|X_r|` and `|Y_r|` grown around the two ends.
    pub source_ball: usize,
    pub sink_ball: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LargeCaseReport<T> {
    pub terminals: TerminalSystem,
    pub saturation: usize,
    pub path_cap: Option<usize>,
    pub pairs: Vec<PairRecord>,
    /// Ball growth checks, filled in diagnostic mode only.
    pub growth: Vec<GrowthStep<T>>,
}

/// `n > 4k (100k)^((log log n)^6)`, compared in log space.
pub fn large_case_applies(n: usize, k: usize) -> bool {
    let lhs = log2(4.0 * k as f64) + log_log(n).powi(6) * log2(100.0 * k as f64);
    lhs < log2(n as f64)
}

/// Edge-disjoint paths joining every source to every sink, chosen one pair at
/// a time as shortest paths avoiding the forbidden ledger.
pub fn immerse_biclique_large<T: Real>(
    host: &Arc<MultiDigraph>,
    k: usize,
    p: &DenseParams<T>,
) -> Result<Immersed<LargeCaseReport<T>>> {
    let g: &MultiDigraph = host;
    let n = g.vertex_count();
    if k == 0 {
        return Err(Error::precondition("k must be positive"));
    }
    let ep = p.expansion_for(k);
    if p.strict {
        check_host(g, k, p, "large")?;
        if !large_case_applies(n, k) {
            return Err(Error::hypothesis(
                "large",
                format!("n = {n} is not above 4k(100k)^((log log n)^6) for k = {k}"),
            ));
        }
    }
    let r = p.radius_for(n);
    let thr = p.terminal_degree_factor * k;
    let terminals = separated_terminals(g, k, r, thr, thr)?;
    let saturation = p.saturation_for(n, k);
    let path_cap = p.large_path_cap_for(n);
    let certified = p.diagnostics && expansion_certified(g, &ep)?;

    let mut ledger = ForbiddenLedger::new(saturation);
    let mut pairs = Vec::with_capacity(k * k);
    let mut growth = Vec::new();
    let mut trails = BTreeMap::new();
    let pattern = biclique_pattern(k);
    for (a, &x) in terminals.sources.iter().enumerate() {
        for (b, &y) in terminals.sinks.iter().enumerate() {
            let exempt: BTreeSet<VertexId> = terminals.ball(x).union(terminals.ball(y)).copied().collect();
            let f = ledger.forbidden_for(g, x, y, &exempt);
            let rest: BTreeSet<_> = f.all.difference(&f.source).copied().collect();
            let out_layers = grow_ball(g, x, Direction::Forward, &rest, &f.source, r);
            let in_layers = grow_ball(g, y, Direction::Backward, &f.all, &BTreeSet::new(), r);
            if p.diagnostics {
                growth.extend(diagnose_growth(g, x, &out_layers, &rest, &f.source, saturation, &ep, certified));
            }
            let opts = ConnectOptions {
                allow_trivial: false,
                max_len: path_cap,
            };
            let path = match connect_avoiding(g, &[x], &[y], &f.all, opts) {
                Ok(Connection::Path(t)) => t,
                Ok(Connection::Trivial(_)) => return Err(Error::internal("source equals sink")),
                Err(Error::NoPath(_)) => {
                    return Err(Error::hypothesis(
                        "large",
                        format!(
                            "no path from {x} to {y} (pair {} of {}) within cap {path_cap:?}; \
                             ledger holds {} used and {} saturated edges",
                            pairs.len() + 1,
                            k * k,
                            ledger.used().len(),
                            f.saturated.len()
                        ),
                    ))
                }
                Err(e) => return Err(e),
            };
            pairs.push(PairRecord {
                source: x,
                sink: y,
                length: path.len(),
                forbidden: f.all.len(),
                saturated: f.saturated.len(),
                source_ball: out_layers.last().map_or(0, BTreeSet::len),
                sink_ball: in_layers.last().map_or(0, BTreeSet::len),
            });
            ledger.record(g, x, y, path.edges());
            trails.insert(crate::graph::EdgeId(a * k + b), path.into_edges());
        }
    }
    let vertex_map = terminals
        .sources
        .iter()
        .chain(&terminals.sinks)
        .enumerate()
        .map(|(i, &v)| (VertexId(i), v))
        .collect();
    let certificate = ImmersionCertificate::new(host.clone(), pattern, vertex_map, trails);
    let report = certificate.verify();
    if !report.is_valid() {
        return Err(Error::internal(format!("large-case certificate invalid: {report}")));
    }
    Ok(Immersed {
        certificate,
        report: LargeCaseReport {
            terminals,
            saturation,
            path_cap,
            pairs,
            growth,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::ledger::GrowthOutcome;

    fn complete(n: usize) -> Arc<MultiDigraph> {
        Arc::new(
            MultiDigraph::from_edges(
                n,
                (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))),
            )
            .unwrap(),
        )
    }

    #[test]
    fn k22_in_complete_digraph() {
        let host = complete(30);
        let out = immerse_biclique_large(&host, 2, &DenseParams::<f64>::desk()).unwrap();
        assert!(out.certificate.verify().is_valid());
        assert_eq!(out.certificate.pattern().edge_count(), 4);
        assert_eq!(out.report.pairs.len(), 4);
    }

    #[test]
    fn directed_cycle_fails() {
        let host = Arc::new(MultiDigraph::from_edges(30, (0..30).map(|i| (i, (i + 1) % 30))).unwrap());
        let err = immerse_biclique_large(&host, 2, &DenseParams::<f64>::desk()).unwrap_err();
        assert!(matches!(err, Error::HypothesisNotMet { .. }), "{err}");
    }

    #[test]
    fn single_pair_is_a_shortest_path() {
        let host = complete(10);
        let out = immerse_biclique_large(&host, 1, &DenseParams::<f64>::desk()).unwrap();
        let x = out.report.terminals.sources[0];
        let y = out.report.terminals.sinks[0];
        let direct = connect_avoiding(&host, &[x], &[y], &BTreeSet::new(), ConnectOptions::default()).unwrap();
        assert_eq!(out.certificate.trails()[&crate::graph::EdgeId(0)], direct.trail().unwrap().edges());
    }

    #[test]
    fn diagnostics_on_bidirected_cycle() {
        let host = Arc::new(
            MultiDigraph::from_edges(16, (0..16).flat_map(|i| [(i, (i + 1) % 16), ((i + 1) % 16, i)])).unwrap(),
        );
        let mut p = DenseParams::<f64>::desk();
        p.diagnostics = true;
        p.radius = Some(2);
        let out = immerse_biclique_large(&host, 1, &p).unwrap();
        assert!(!out.report.growth.is_empty());
        assert!(out.report.growth.iter().all(|s| s.outcome != GrowthOutcome::Violated));
        assert!(out.report.growth.iter().any(|s| s.outcome == GrowthOutcome::Holds));
    }

    #[test]
    fn large_case_inequality() {
        assert!(!large_case_applies(1000, 2));
        // log log n = 4 gives exponent 4096
        assert!(!large_case_applies(1 << 16, 1));
        // no machine-sized n satisfies it
        assert!(!large_case_applies(usize::MAX, 1));
    }
}
