//! Exact and semi-exact analysis of composition operators `f ↦ f∘φ` on the
//! Schwartz space, for real polynomial symbols `φ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] — exact rational polynomial arithmetic, composition, iteration,
//!   linear conjugation, normal forms and an expression parser.
//! * [`roots`] — Sturm-sequence real root isolation, square-free
//!   decomposition and exact sign determination at real algebraic points.
//! * [`classify`] — fixed-point census and symbol classification.
//! * [`spectrum`] — the decision engine mapping a symbol to an exact set
//!   descriptor of the spectrum, or certified partial bounds.
//! * [`dynamics`] — numerical certification of iterate growth bounds and
//!   Cesàro-mean diagnostics.
//! * [`resolvent`] — resolvent series evaluation on grids, residual checks
//!   and spectral witness construction.

pub mod classify;
pub mod dynamics;
mod error;
pub mod poly;
pub mod resolvent;
pub mod roots;
pub mod spectrum;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Maps `f` over a slice, in parallel when the `parallel` feature is enabled.
///
/// Grid evaluations in [`dynamics`] and [`resolvent`] are pure per-point
/// computations; reductions over the results keep a deterministic order.
#[doc(hidden)]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential variant of [`map_grid`], kept available for benchmarking the
/// parallel dispatch against a plain loop.
#[doc(hidden)]
pub fn map_grid_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
