//! Small output helpers shared by the CLI.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;

/// `node_id<TAB>label` for every node, so outputs can be joined back to the
/// identifiers of the input file.
pub fn write_node_map<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "node_id\tlabel")?;
    for u in 0..g.node_count() {
        writeln!(w, "{u}\t{}", g.label(u))?;
    }
    Ok(())
}

pub fn create(path: impl AsRef<Path>) -> Result<BufWriter<File>> {
    if let Some(dir) = path.as_ref().parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Edge list `u v` (or `u v w` for weighted graphs), one edge per line.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    for (u, v, x) in g.edges() {
        if g.is_weighted() {
            writeln!(w, "{u} {v} {x}")?;
        } else {
            writeln!(w, "{u} {v}")?;
        }
    }
    Ok(())
}
