//! Generalized Baumslag–Solitar graphs of groups and their deformation spaces.
//!
//! A [`GbsGraph`] is a finite connected graph whose vertex and edge groups are
//! all infinite cyclic, encoded by a nonzero integer label on each edge end.
//! On top of it this crate provides
//!
//! * the move calculus ([`moves`]): elementary collapses and expansions,
//!   slides, removal of redundant vertices, all reductions of a graph;
//! * deformation-space invariants: Betti number, the exponent lattice of the
//!   modular homomorphism and the integer-modulus test ([`modulus`]);
//! * the `=`/`≠` combinatorics of ascending loops, shelters, surviving edges
//!   and the retraction onto the spine ([`shelters`]);
//! * canonical forms ([`canon`]) and bounded searches that connect graphs by
//!   moves and return replayable traces ([`search`]).
//!
//! ```
//! use gbs_core::fixtures::bs24_loop;
//! use gbs_core::search::{same_space, MoveSet, SameSpace};
//! use gbs_core::{canonical_form, GbsGraph, SearchBounds};
//!
//! let two = GbsGraph::from_edges(&[(0, 2, 1, 2), (1, 1, 1, 2)]).unwrap();
//! let b = SearchBounds { max_abs_label: 24, max_edges: 4, ..SearchBounds::default() };
//! let SameSpace::Connected { trace, .. } = same_space(&bs24_loop(), &two, &b, MoveSet::All { negative: false }).unwrap()
//! else {
//!     panic!("connected within the bounds");
//! };
//! let end = trace.replay(&bs24_loop()).unwrap();
//! assert_eq!(canonical_form(&end).unwrap(), canonical_form(&two).unwrap());
//! ```

pub mod canon;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod model;
pub mod modulus;
pub mod moves;
pub mod search;
pub mod shelters;

pub use canon::{canonical_form, CanonError, CanonicalForm};
pub use graph::{Direction, EdgeEnd, EdgeId, MultiGraph, OrientedEdge, VertexId, Walk};
pub use model::{validate, Diagnostic, GbsGraph, InvalidGraph, Label};
pub use modulus::{has_integer_modulus, modular_image, IntegerModulus, ModulusLattice};
pub use moves::{Move, MoveError, MoveTrace};
pub use search::{Classification, SearchBounds, SpaceReport};
pub use shelters::{EqNeqLabeling, Mark, Shelter, ShelterError};
