//! Coastline edge-detection benchmark.
//!
//! * [`raster`]: graymaps, binary maps and PGM I/O.
//! * [`canny`]: a from-scratch Canny detector and the mask-to-edges
//!   ground-truth constructor.
//! * [`metrics`]: RMSE, PSNR, global SSIM, Pratt's figure of merit and
//!   confusion counts.
//! * [`cmreform`]: the same metrics written purely in confusion counts, and a
//!   checker that compares both routes.
//! * [`synth`]: seeded synthetic coastline scenes with a known best threshold.
//! * [`harness`]: threshold sweeps, summary tables and the command line.

pub mod canny;
pub mod cmreform;
pub mod harness;
pub mod metrics;
pub mod raster;
pub mod synth;
