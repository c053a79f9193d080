//! Finite-model verification for bitopological dynamical systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`fintop`]: finite topologies stored as minimal open neighbourhoods,
//!   open-set and cover enumeration, topology enumeration.
//! * [`bitop`]: bitopological spaces and the pairwise separation axioms.
//! * [`dynamics`]: point maps, (pairwise) continuity, composition, orbits.
//! * [`homotopy`]: finite interval models, product spaces and the
//!   verification/search of BTDS, iteration and path homotopies.
//! * [`selection`]: the H/PH Rothberger–Menger deciders (characterization
//!   and bounded oracle) and the classical bitopological covering properties.
//!
//! Everything here is pure and immutable once built, so values can be shared
//! freely across worker threads.

pub mod bitop;
pub mod dynamics;
pub mod error;
pub mod fintop;
pub mod homotopy;
pub mod selection;

pub use bitop::{BitopSpace, Prop22Outcome, Prop22Report};
pub use dynamics::{Btds, ContinuityWitness, Orbit, OrbitKind, PointMap};
pub use error::{Error, Result};
pub use fintop::{Cover, FiniteTopology, PointSet, TopologyIndex};
pub use homotopy::{BitopPath, Homotopy, IntervalModel, ProductSpace};
pub use selection::{
    AnchorReading, FamilyKind, HProperty, SelectionMode, SelectionOptions, SelectionReport,
    TargetOpenness,
};
