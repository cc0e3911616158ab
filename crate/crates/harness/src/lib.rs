//! Verification harness for `ncfourier`: configuration, calibrated caps,
//! suites, reports and the `ncfourier` command.

pub mod calibration;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod specfile;
pub mod suites;

pub use error::HarnessError;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/group-files.md")]
    mod group_files {}
    #[doc = include_str!("../../../book/src/calibration.md")]
    mod calibration {}
}
