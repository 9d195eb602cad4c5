//! Reconfiguration problems, the reductions between them, and a BFS
//! reachability engine that produces checkable certificates.

pub mod exactcover;
pub mod graph;
pub mod hypercube;
pub mod naesat;
pub mod ncl;
pub mod statespace;
pub mod subsetsum;
pub mod tokens;

pub use statespace::{
    check_certificate, explore_component, reachable, reachable_set, CertificateCheck, ReachabilityResult,
    ReconfigurationSpace, SearchError, SearchLimits,
};
