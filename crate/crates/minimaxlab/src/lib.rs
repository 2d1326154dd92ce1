//! minimaxlab classifies optimal points of smooth two-player zero-sum games
//! (saddle, minimax, maximin, local robust) — exactly for quadratic games,
//! numerically for general smooth games — and decides local exponential
//! stability of gradient algorithms (GDA, HB, NAG, EG, OGD and alternating
//! variants) at those points through spectral criteria.

pub mod linalg;
pub mod quadratic;
pub mod oracle;
pub mod fixtures;
pub mod envelope;
pub mod optimality;
pub mod dynamics;
pub mod stability;
pub mod replication;
pub mod cli;
