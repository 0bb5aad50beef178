//! Combinatorial Johansson diagrams of (pseudo) Dehn surfaces.
//!
//! A diagram is a 4-regular combinatorial map on a closed orientable surface
//! together with a dart-level sistering involution. From it this crate builds
//! the quotient 2-complex, two presentations of its fundamental group, first
//! homology via Smith normal form, finite covers along permutation
//! representations, handle piping, and triple point bound bookkeeping.
//!
//! Dart conventions (fixed, shared by every module):
//!
//! * darts `4v..4v+3` sit at crossing `v` in counterclockwise order,
//!   so the rotation is `σ(d) = 4v + ((d mod 4) + 1) mod 4`;
//! * the strand partner is `s(d) = 4v + ((d mod 4) + 2) mod 4`;
//! * `theta` pairs the two darts of a map edge, dart `d` runs from
//!   `vertex(d)` to `vertex(theta(d))`;
//! * the face successor is `φ(d) = σ(theta(d))`, the curve advance is
//!   `adv(d) = s(theta(d))`.

pub mod complex;
pub mod covers;
pub mod diagram;
pub mod error;
pub mod group;
pub mod piping;
pub mod search;
pub mod snf;
pub mod spectrum;
pub mod surface;

pub use complex::{build_quotient, filling_report, FillingReport, QuotientComplex};
pub use covers::{lift_diagram, validate_rep, CoveringDiagram, PermRep, RepVerdict};
pub use diagram::{
    curves, isomorphic, parse_diagram, serialize_diagram, triplets, validate, Condition, Curve,
    Dart, Isomorphism, JohanssonDiagram, Mode, TriplePoint, ValidationReport,
};
pub use error::{Error, Result};
pub use group::{
    count_homs, h1_paper, pi1_cw, pi1_paper, presentations_agree, AbelianInvariants, Agreement,
    ArTableau, FiniteGroup, GroupPresentation, Ring,
};
pub use piping::{handle_pipe, PipeChoice};
pub use search::{enumerate, EnumResult, EnumSpec};
pub use snf::{smith_normal_form, Snf};
pub use spectrum::{
    assemble_spectrum, certify, height, is_exceptional, lower_bound, Assumption, BoundCertificate,
    CertifyReport, Seed, SpectrumTable,
};
pub use surface::{
    checkerboard, curve_class, euler_genus, surface_homology, trace_faces, Checkerboard, FaceSet,
    SurfaceHomology,
};
