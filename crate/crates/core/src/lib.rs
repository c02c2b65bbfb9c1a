//! Spectral radius and conditional connectivity of small graphs.
//!
//! Builds the graphs claimed to maximise the adjacency spectral radius for a
//! given order, minimum degree and g-good r-component (or g-good neighbour)
//! connectivity, and checks the claim by exhaustive search.
//!
//! ```
//! use specconn::connectivity::{connectivity, CutQuery};
//! use specconn::families::{claimed_extremal, construct};
//! use specconn::spectral::rho;
//!
//! let f = construct(&claimed_extremal(8, 2, 3, 1, 2)?)?;
//! assert_eq!(f.graph.min_degree(), 3);
//! assert_eq!(connectivity(&f.graph, CutQuery::full(1, 2))?, Some(2));
//! assert!(rho(&f.graph)? > 5.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod canon;
pub mod cli;
pub mod connectivity;
pub mod enumerate;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod spectral;
pub mod transforms;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/connectivity.md")]
    mod connectivity {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
