//! Halphen–Castelnuovo numerics, (d,g)-plane classification, and explicit
//! divisor-class certificates on blown-up planes.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: exact integer profiles `π_p`, `α_p`, the boundary `B(d,n)`,
//!   the Gruson–Peskine genus polynomial and four-square decompositions.
//! - [`picard`]: the Picard lattice of the plane blown up in `s+1` points.
//! - [`domains`]: classification of `(n,d,g)` into the plane decomposition.
//! - [`builder`]: constructs a [`builder::Certificate`] for band points.
//! - [`smoothness`]: arithmetic criteria checked against a certificate.
//! - [`oracle`]: brute-force spectra and identity audits.
//! - [`sweep`]: grid sweeps used by the CLI, the acceptance suite and benches.
//! - [`chart`]: static SVG of a sweep.
//!
//! Sweeps run on rayon when the `parallel` feature is enabled (the default)
//! and fall back to a sequential loop otherwise; see [`exec::Exec`].

pub mod builder;
pub mod chart;
pub mod domains;
pub mod error;
pub mod exec;
pub mod numerics;
pub mod oracle;
pub mod picard;
pub mod smoothness;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Exec;
