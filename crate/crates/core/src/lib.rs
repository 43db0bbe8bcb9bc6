//! Coded-caching toolkit built on projective geometry over finite fields:
//! exact parameter computation, caching-line-graph construction, placement
//! delivery arrays, and byte-level delivery simulation.

pub mod cli;
pub mod gf;
pub mod linegraph;
pub mod oracle;
pub mod pda;
pub mod projective;
pub mod scheme;
pub mod simulator;
