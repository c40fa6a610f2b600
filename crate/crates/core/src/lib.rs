//! Exact piecewise-polynomial form of box splines.
//!
//! Given a direction matrix `Ξ` with rational entries this crate derives the
//! difference operator `S_Ξ`, the Green's function sets `P_k` and their
//! spatial terms, the knot-plane arrangement over the support, one exact
//! polynomial per mesh cell, and a BSP tree for fast point evaluation. A
//! quadrature evaluator of the convolution definition serves as an
//! independent check, and the tree can be emitted as C source.
//!
//! ```
//! use boxpp::{build_bsp, build_ppform, catalog};
//!
//! let pp = build_ppform(&catalog::courant(), false).unwrap();
//! assert_eq!(pp.regions.len(), 6);
//! let tree = build_bsp(&catalog::courant(), false).unwrap();
//! assert_eq!(tree.eval(&[0.5, 0.25]), 0.25);
//! ```

pub mod bsp;
pub mod catalog;
pub mod codegen;
pub mod diffop;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod ppform;
pub mod ratlinalg;

pub use bsp::{build_bsp, choose_split, eval_bsp, BspNode, BspTree, CompiledBsp};
pub use codegen::emit_c;
pub use diffop::{difference_support, ShiftAtom};
pub use error::{BoxError, Result};
pub use geometry::{enumerate_regions, knot_planes, support_zonotope, Hyperplane, Polyhedron, Region, Side};
pub use greens::{build_p_sets, greens_fourier_check, nu_vector, spatial_terms, GreensAtom, GreensBuilder, NuVector, SpatialGreensTerm};
pub use io::XiSpec;
pub use oracle::{eval_convolution, eval_convolution_centered, ConvolutionOracle, QuadratureSpec};
pub use poly::MultiPoly;
pub use ppform::{build_ppform, region_polynomial, PPForm, PolyRegion};
pub use ratlinalg::{RatMatrix, Rational};
