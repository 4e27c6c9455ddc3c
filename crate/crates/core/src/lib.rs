//! Brauer configurations, their configuration algebras, flips at polygons
//! satisfying condition (E), and an instance-level verifier relating flips
//! to tilting mutation.
//!
//! The crate is organised bottom-up:
//!
//! - [`config`]: the combinatorial data (angles, vertex cycles, polygons,
//!   multiplicities), the `.bcf` text format, isomorphism search and random
//!   generation.
//! - [`algebra`]: the bound quiver of a configuration, canonical path bases
//!   of Hom spaces between indecomposable projectives, multiplication and
//!   the Cartan matrix.
//! - [`flip`]: condition (E), the five-way angle decomposition and left/right
//!   flips.
//! - [`mutation`]: the two-term mutation complex and dimension identities
//!   evaluated through the Euler form.
//! - [`oracle`]: exact linear algebra in the homotopy category of two-term
//!   complexes, used to check the dimension formulas independently and to
//!   certify the endomorphism algebra isomorphism on instances.
//! - [`corpus`]: seeded random configurations and the invariant suite.

pub mod algebra;
pub mod config;
pub mod corpus;
pub mod error;
pub mod field;
pub mod flip;
pub mod linalg;
pub mod mutation;
pub mod oracle;
pub mod report;

pub use algebra::{BasisTable, CanonicalPath, QuiverPresentation};
pub use config::{
    AngleId, BrauerConfiguration, ConfigurationData, PolygonId, VertexId,
};
pub use error::{Error, Result};
pub use flip::{Direction, FlipDecomposition, FlipResult};
pub use mutation::TwoTermComplex;
pub use report::VerificationReport;
