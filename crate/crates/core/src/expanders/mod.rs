//! Sublinear expansion: the ρ/γ/φ functions, expansion checks, φ-ascent
//! extraction, directed expander immersion and short connecting paths.

mod check;
mod connect;
mod directed;
mod extract;
mod params;

pub use check::{
    check_expansion, check_expansion_auto, CheckMode, ExpansionKind, ExpansionReport,
    ExpansionSubject, ForbiddenEdge, Side, Witness,
};
pub use connect::{connect_avoiding, ConnectOptions, Connection};
pub use directed::{
    directed_expander_immersion, DirectedExpander, DirectedExpanderOptions, ExpanderAudit,
};
pub use extract::{extract_expander, AscentStep, Extraction, MoveKind, Probe};
pub use params::{ExpansionConstants, ExpansionParams};
