//! Scenario files, reports and randomized property suites on top of
//! [`gnslab_core`].
//!
//! A scenario is a JSON document declaring algebras, states, maps and the
//! checks to run on them; [`exec::run_scenario`] turns it into a report.
//! [`suites`] holds the seeded randomized suites behind `gnslab suite` and
//! the acceptance tests.

pub mod codec;
pub mod exec;
pub mod random;
pub mod report;
pub mod scenario;
pub mod suites;
