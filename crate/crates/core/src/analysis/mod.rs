//! Degree preservation reports, degree histograms, analytic edge counts and
//! scaling benchmarks.

mod bench;
mod degree;
mod expected;
mod histogram;

pub use bench::{bench_scaling, subsample, ScalingAxis, ScalingRecord};
pub use degree::{degree_report, variance_bound, DegreeReport, GateViolation, UserDegreeStats};
pub use expected::{edges_variance, expected_edges, EdgeModel};
pub use histogram::{degree_histogram, log_bins, DegreeHistogram};
