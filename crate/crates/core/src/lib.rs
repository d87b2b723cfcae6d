//! Primitive ideal spaces of finite self-similar k-graph algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`kgraph`]: validated k-graphs, normal-form paths, eventually periodic infinite paths.
//! * [`selfsim`]: finite group actions with restriction cocycles, pseudo-freeness and
//!   the exact cycline decision procedure.
//! * [`tails`]: hereditary saturated closures, maximal tails, `H_T` and tail classification.
//! * [`perdual`]: periodicity lattices in `Z^k` and their rational characters.
//! * [`primtop`]: strata of the primitive ideal space, hypothesis checks, and
//!   hull-kernel closure queries.
//! * [`repr`]: exact finite truncations of the orbit representations.
//! * [`io`]: the line-oriented graph document format.

pub mod io;
pub mod kgraph;
pub mod par;
pub mod perdual;
pub mod primtop;
pub mod repr;
pub mod selfsim;
pub mod tails;

mod bounds;

pub use bounds::Bounds;
