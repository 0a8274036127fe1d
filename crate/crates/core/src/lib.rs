pub mod child_set;
pub mod error;
pub mod exact;
pub mod lagrange;
pub mod poly;
pub mod moments;
pub mod gauss;
pub mod oracle;
pub mod recurrence;
pub mod cli;
