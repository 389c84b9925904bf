//! Library half of the `hypmetric` command: suite runners and output
//! formatting, kept separate from argument parsing so they can be tested.

pub mod output;
pub mod suites;
