//! Design and simulation toolkit for a kirigami-skinned, cam-driven biopsy
//! capsule: cut-pattern layout, deployment mechanics, cam synthesis, stepper
//! drive calibration, end-to-end actuation traces and force-data analysis.

pub mod analysis;
pub mod cam;
pub mod cli;
pub mod drive;
mod format;
pub mod geometry;
pub mod mechanics;
pub mod sim;
