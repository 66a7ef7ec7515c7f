//! Instance files and report rendering.

pub mod report;
pub mod schema;

pub use report::{render, Format, Record, Status, Summary};
pub use schema::{parse_instance, print_instance, InstanceFile, MemberSpec, Q, SCHEMA_VERSION};
