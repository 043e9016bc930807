//! Finite Gabor multipliers and LTI filters.
//!
//! Signals live on the cyclic group `Z_N`. The crate builds matrix and
//! spreading-function representations of convolution operators and of
//! lattice-sampled STFT multipliers, decides when a filter can be written
//! exactly as a Gabor multiplier and constructs the mask when it can.
//! A small Gaussian calculus on `R^d`, checked by quadrature, covers the
//! continuous counterparts.
//!
//! ```
//! use gabmul::equivalence::{check_representability, construct_symbol};
//! use gabmul::operators::{gm_kernel, op_distance};
//! use gabmul::random::random_signal;
//! use gabmul::tf::discrete_gaussian_normalized;
//! use gabmul::{GaborMultiplier, Lattice, LtiFilter};
//!
//! let n = 24;
//! let lat = Lattice::new(n, 1, 1)?;
//! let g = discrete_gaussian_normalized(n, 3.0)?;
//! let h = random_signal(n, 7);
//! let report = check_representability(&h, &g, &g, &lat, 1e-9)?;
//! assert!(report.representable);
//! let sym = construct_symbol(&h, &g, &g, &lat)?;
//! let gm = GaborMultiplier::new(g.clone(), g, sym.mask, lat)?;
//! let d = op_distance(&gm_kernel(&gm), &LtiFilter::new(h).kernel())?;
//! assert!(d.spectral < 1e-10);
//! # Ok::<(), gabmul::Error>(())
//! ```

pub mod algebra;
pub mod equivalence;
pub mod error;
pub mod gauss;
pub mod io;
pub mod operators;
pub mod random;
pub mod tf;

pub use algebra::{Lattice, Matrix2D, Signal};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operators::{GaborMultiplier, LinearOp, LtiFilter, SpreadingFunction};
