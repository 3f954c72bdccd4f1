//! JSON and CSV persistence. Every JSON document carries a `schema` tag that
//! is checked on load.

mod labels;
mod points;
mod tree;

pub use labels::{labels_json, read_labels_csv, write_labels_csv};
pub use points::{
    load_points, read_matrix_json, read_points_csv, read_points_json, write_points_csv, CsvLimits, MatrixFile,
    PointsFile,
};
pub use tree::{
    load_hierarchy, load_tree, read_hierarchy, read_tree, save_hierarchy, save_tree, write_hierarchy, write_tree,
    HierNodeFile, HierarchyFile, TreeFile, TreeNodeFile, HIERARCHY_SCHEMA, TREE_SCHEMA,
};

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::error::FormatError;

pub(crate) fn open(path: &Path) -> Result<BufReader<File>, FormatError> {
    Ok(BufReader::new(File::open(path)?))
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>, FormatError> {
    Ok(BufWriter::new(File::create(path)?))
}

pub(crate) fn check_schema(found: &str, expected: &'static str) -> Result<(), FormatError> {
    if found == expected {
        Ok(())
    } else {
        Err(FormatError::Schema {
            expected,
            found: found.to_string(),
        })
    }
}
