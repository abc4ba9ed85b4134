//! Degenerate fibres of surfaces ruled by conics.
//!
//! A fibre configuration records, for each irreducible component, its
//! self-intersection, its multiplicity in the fibre and its degree against
//! the transform of the bisecant divisor, together with the intersection
//! numbers between components. Starting from the smooth conic, the crate
//! blows up points ([`transform`]), computes the base locus and the image of
//! the fibre under the adjoint map ([`resolution`]), classifies the
//! resulting rational double points, enumerates all configurations up to
//! isomorphism ([`enumeration`]) and lists the geometrically ruled models
//! a fibre contracts to ([`models`]).
//!
//! ```
//! use conic_fibers::enumeration::main_fiber;
//! use conic_fibers::fiber::FiberKind;
//! use conic_fibers::resolution::resolve;
//!
//! let report = resolve(&main_fiber(FiberKind::D, 5).unwrap()).unwrap();
//! assert_eq!(report.signature().to_string(), "DoubleLine + D(5)@double_line");
//! ```

pub mod cli;
pub mod enumeration;
pub mod fiber;
pub mod lattice;
pub mod models;
pub mod render;
pub mod resolution;
pub mod script;
pub mod transform;

pub use enumeration::{enumerate, main_fiber, verify_classification};
pub use fiber::{ComponentId, ComponentRecord, FiberConfig, FiberKind};
pub use resolution::{embedded_level, resolve, FiberReport};
pub use script::{apply_script, BlowUpScript};
pub use transform::{blow_down, blow_up, BlowUpCenter};
