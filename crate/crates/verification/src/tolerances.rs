//! Every pinned tolerance of the acceptance suite, in one place.

/// Series vs quadrature generalized Bessel values, absolute.
pub const GB_ORACLE_ABS: f64 = 1e-10;
/// Wall-clock budget of the default generalized Bessel oracle grid, s.
pub const GB_ORACLE_SECONDS: f64 = 10.0;
/// Parseval deficit `|sum a_m^2 - 1|` at the automatic truncation.
pub const PARSEVAL_ABS: f64 = 1e-9;
/// Odd sidebands at zero dc field, absolute.
pub const ODD_SIDEBAND_ABS: f64 = 1e-12;
/// Pair shift vs its van der Waals limit for `|delta| >= 20 |V|`, relative.
pub const VDW_LIMIT_REL: f64 = 0.01;
/// Ratio `|delta| / |V|` above which the van der Waals limit is checked.
pub const VDW_LIMIT_RATIO: f64 = 20.0;
/// Pair shift at zero defect vs `sqrt(2) V`, relative (exact up to rounding).
pub const RESONANT_SHIFT_REL: f64 = 1e-14;
/// Values of the 70P enhancement chain, relative.
pub const CHAIN_REL: f64 = 0.05;
/// Spacing of adjacent loci in defect vs the rf frequency, MHz.
pub const LOCUS_SPACING_ABS: f64 = 1e-6;
/// 39P loci vs the quoted fields, relative.
pub const LOCUS_FIELD_REL: f64 = 0.05;
/// Field-to-frequency width conversion, relative.
pub const WIDTH_REL: f64 = 0.15;
/// Saturation bound on the ensemble-averaged transfer fraction.
pub const SATURATION: f64 = 0.25;
/// Allowed distance of the strong-drive plateau from the saturation value.
pub const SATURATION_ABS: f64 = 0.03;
/// Monte Carlo significance, in standard errors.
pub const MC_SIGMA: f64 = 3.0;
/// Budget of the full desk-scale scan, s.
pub const FULL_SCAN_SECONDS: f64 = 600.0;
/// Oracle vs sideband model in the weak-coupling grid, relative.
pub const MODEL_REL: f64 = 0.05;
/// Transfer of both backends half-way between orders.
pub const OFF_RESONANT_ABS: f64 = 1e-3;
/// Norm drift of every oracle evolution.
pub const NORM_DRIFT: f64 = 1e-6;
/// Ensemble spot checks, oracle vs sideband backend on identical samples, absolute.
pub const SPOT_CHECK_ABS: f64 = 0.02;

/// Allowed offset of a located spectral peak from its resonance, in grid steps.
pub const PEAK_POSITION_STEPS: f64 = 1.0;
/// Same, as a fraction of the peak's full width at half maximum; the larger
/// of the two applies, so power-broadened lines are not held to the grid.
pub const PEAK_POSITION_FWHM: f64 = 0.05;
