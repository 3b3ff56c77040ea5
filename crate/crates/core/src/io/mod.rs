//! Configuration files and output writers.

mod config;
mod csv;
mod vtk;

pub use crate::mesh::{read_mesh, write_mesh};
pub use config::{parse_config, read_config, write_config, OutputConfig, RunConfig};
pub use csv::{cut_csv_string, gauges_csv_string, write_cut_csv, write_gauges_csv};
pub use vtk::{momentum_at_vertices, write_vtk, write_vtk_string};
