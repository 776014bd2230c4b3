//! Library half of the `powerca` binary: CSV ingestion, report
//! emission and SVG factor maps, kept separate so integration tests
//! can drive them directly.

pub mod app;
pub mod error;
pub mod io;
pub mod map;
pub mod report;

pub use error::{CliError, Result};
pub use io::{read_table, write_matrix, write_table};
pub use map::{emit_map, MapAxes};
pub use report::{write_decomposition, ReportFormat};
