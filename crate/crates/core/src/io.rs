//! View descriptor files and atomic file output.
//!
//! A view descriptor lists the Black nodes of a view by their original
//! labels, one per line; `#` starts a comment.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::view::IncompleteView;

pub fn write_view<W: Write>(view: &IncompleteView, comment: &str, mut out: W) -> Result<()> {
    for line in comment.lines() {
        writeln!(out, "# {line}")?;
    }
    let g = view.graph();
    for u in view.black_nodes() {
        writeln!(out, "{}", g.label(u))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads Black node labels and maps them onto `graph`.
pub fn read_seed_set<R: BufRead>(graph: &Graph, reader: R) -> Result<Vec<NodeId>> {
    let mut seeds = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let label: u64 = text.parse().map_err(|_| Error::parse(idx + 1, format!("bad node label `{text}`")))?;
        let node = graph
            .node_for_label(label)
            .ok_or_else(|| Error::parse(idx + 1, format!("label {label} is not in the graph")))?;
        seeds.push(node);
    }
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    Ok(seeds)
}

pub fn read_view(graph: &Arc<Graph>, path: impl AsRef<Path>) -> Result<IncompleteView> {
    let file = fs::File::open(path.as_ref())?;
    let seeds = read_seed_set(graph, std::io::BufReader::new(file))?;
    IncompleteView::new(Arc::clone(graph), &seeds)
}

/// Writes `bytes` to a temporary sibling of `path`, then renames it over
/// `path`, so readers never see a partial file.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("`{}` is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
