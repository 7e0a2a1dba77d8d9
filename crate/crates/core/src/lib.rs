//! Simplicial Hodge theory and high-dimensional expander mixing, checked numerically.
//!
//! The crate builds finite simplicial complexes, assembles their boundary,
//! Laplacian and adjacency operators as exact integer matrices, certifies
//! `(j, k, ε)`-expansion from Laplace spectra, counts galleries, and evaluates
//! the mixing bounds that spectral concentration implies.
//!
//! ```
//! use hdx_mixing::generators::complete_skeleton;
//! use hdx_mixing::spectral::certify;
//!
//! let k4 = complete_skeleton(4, 1).unwrap();
//! let cert = certify(&k4, 0, None).unwrap();
//! assert!((cert.k - 4.0).abs() < 1e-9 && cert.valid);
//! ```
//!
//! # Examples
//!
//! | example | shows |
//! |---|---|
//! | `cargo run --example build_complex` | cells, relations, boundary and Laplacian matrices, identity checks |
//! | `cargo run --example certify` | spectra, Betti numbers, certificates, error operator, count lemma |
//! | `cargo run --example galleries` | gallery counts by brute force and by operator products |
//! | `cargo run --example mixing_bounds` | descent lemma, from-j-to-l estimate, top mixing lemma |
//! | `cargo run --example chromatic` | spectral chromatic bound against exact search |
//! | `cargo run --example overlap` | overlap lower bound and embedding estimate |
//! | `cargo run --example ideal_expanders` | rigidity of ideal expanders |
//! | `cargo run --example random_complexes` | seeded Linial–Meshulam complexes and JSON files |

pub mod applications;
pub mod cli;
pub mod complex;
pub mod error;
pub mod generators;
pub mod hodge;
pub mod mixing;
pub mod spectral;

pub use complex::{Cell, OrientedCell, Relation, SimplicialComplex};
pub use error::{HdxError, Result};
pub use hodge::{AdjacencyKind, Form, LaplacianKind, OperatorMatrix};
pub use mixing::{MixingReport, VertexFamily};
pub use spectral::{CertificateSet, ExpanderCertificate, SpectralSummary};
