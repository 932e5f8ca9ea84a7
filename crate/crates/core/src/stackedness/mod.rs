//! Stacked spheres, T/I decomposition of 2-spheres, chordless cycles and
//! the Möbius-band / triangle conditions on vertex links, Kuratowski
//! subgraphs, and replay of stacked-manifold certificates.

mod certificate;
mod cycles;
mod decompose;
mod kuratowski;
mod stacked;

pub use certificate::{replay_certificate, verify_stacked_certificate};
pub use cycles::{induced_cycles, mod3_obstruction, triangle_bound_check, verify_moebius, CycleWitness, FacetDiff};
pub use decompose::{decompose_ti, Cut, Leaf, Summand, SummandList};
pub use kuratowski::{find_kuratowski_subdivision, is_planar, KuratowskiWitness, Pattern};
pub use stacked::{is_locally_stacked, is_stacked_sphere, StackedSphereReport};
