//! Exact integer toolkit for toric fans of Bott manifolds and their
//! J-construction (simplicial wedge) extensions.
//!
//! The crate builds fans ([`bott`], [`wedge`]), computes the degree-2 and
//! degree-4 integral cohomology of the corresponding smooth projective toric
//! varieties ([`cohomology`]), and searches for torus bundles whose Chern
//! classes satisfy `Σ w_j² = 0`, the cohomological condition for an SKT
//! metric on the total space ([`skt`]). All arithmetic is exact.
//!
//! ```
//! use toric_skt::{bott::{build_bott, BottSpec}, cohomology::Cohomology};
//!
//! let spec = BottSpec::new(2)?.with(1, 2, 3)?;
//! let coh = Cohomology::new(&build_bott(&spec)?)?;
//! assert!(coh.square(&coh.generator(0))?.is_zero());
//! # Ok::<(), toric_skt::Error>(())
//! ```

pub mod bott;
pub mod cli;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod skt;
pub mod wedge;

pub use bott::{bott_linear_relations, build_bott, BottSpec};
pub use cohomology::{Cohomology, CohomologyClass, H4Element};
pub use error::{Error, Result};
pub use fan::{parse_fan, serialize_fan, validate_fan, Fan, ValidationReport};
pub use skt::{
    certify_skt, check_isolation_implies_square_zero, find_skt_bundle, isolation_decompose,
    square_zero_search, transport_witness, verify_certificate, IsolationWitness, SktCertificate,
};
pub use wedge::{wedge_atomic, wedge_j, JVector, WedgeTrace};
