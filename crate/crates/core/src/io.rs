//! Reading and writing matrix sequences.
//!
//! Three text formats are involved:
//!
//! * Matrix Market coordinate files (`pattern`, `real` or `integer` field,
//!   `symmetric` or `general` symmetry) for each step's matrix.
//! * Node-map files: one integer per line, line `i` holding the old index of
//!   new node `i`, or `-1` for an added node.
//! * Manifests: one step per line, `matrix=<path>[;map=<path>][;label=<str>]`.
//!   Blank lines and lines starting with `#` are skipped. Relative paths are
//!   resolved against the manifest's directory. Referenced files are only
//!   opened when a step is loaded.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{NodeMap, SparsityPattern};

/// A matrix read from disk; `values` is aligned with `pattern.col_indices()`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixData {
    pub pattern: SparsityPattern,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Pattern,
    Real,
    Integer,
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_ascii_whitespace().map(move |t| {
        let col = t.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, t)
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Reads a Matrix Market coordinate file. Symmetric files are expanded to
/// full storage; duplicate entries are merged (values summed).
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MatrixData> {
    let path = path.as_ref();
    parse_matrix_market(open(path)?, path)
}

/// Parses Matrix Market text from any reader; `path` is only used in errors.
pub fn parse_matrix_market(reader: impl BufRead, path: &Path) -> Result<MatrixData> {
    let perr = |line: usize, col: usize, msg: String| Error::parse(path, line, col, msg);
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (lno, header) = match lines.next() {
        Some((lno, l)) => (lno, l.map_err(|e| Error::io(path, e))?),
        None => return Err(perr(1, 1, "empty file".into())),
    };
    let head: Vec<(usize, String)> = tokens(&header).map(|(c, t)| (c, t.to_ascii_lowercase())).collect();
    if head.len() != 5 || head[0].1 != "%%matrixmarket" {
        return Err(perr(lno, 1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'".into()));
    }
    if head[1].1 != "matrix" {
        return Err(perr(lno, head[1].0, format!("unsupported object '{}'", head[1].1)));
    }
    if head[2].1 != "coordinate" {
        return Err(perr(lno, head[2].0, format!("unsupported format '{}'", head[2].1)));
    }
    let field = match head[3].1.as_str() {
        "pattern" => Field::Pattern,
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        other => return Err(perr(lno, head[3].0, format!("unsupported field '{other}'"))),
    };
    let symmetric = match head[4].1.as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(perr(lno, head[4].0, format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut last_line = lno;
    for (lno, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        last_line = lno;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens(&line).collect();
        let int = |k: usize| -> Result<usize> {
            let (c, t) = toks[k];
            t.parse::<usize>()
                .map_err(|_| perr(lno, c, format!("expected a non-negative integer, found '{t}'")))
        };
        match size {
            None => {
                if toks.len() != 3 {
                    return Err(perr(lno, 1, "size line must hold rows, columns and entry count".into()));
                }
                let (rows, cols, nnz) = (int(0)?, int(1)?, int(2)?);
                if rows != cols {
                    return Err(perr(lno, toks[1].0, format!("matrix is {rows}x{cols}, expected square")));
                }
                size = Some((rows, nnz));
                entries.reserve(nnz);
            }
            Some((n, nnz)) => {
                let want = if field == Field::Pattern { 2 } else { 3 };
                if toks.len() != want {
                    return Err(perr(lno, 1, format!("expected {want} fields, found {}", toks.len())));
                }
                if entries.len() == nnz {
                    return Err(perr(lno, 1, format!("more than the declared {nnz} entries")));
                }
                let mut idx = [0usize; 2];
                for k in 0..2 {
                    let v = int(k)?;
                    if v == 0 || v > n {
                        return Err(perr(lno, toks[k].0, format!("index {v} outside 1..={n}")));
                    }
                    idx[k] = v - 1;
                }
                let value = match field {
                    Field::Pattern => 1.0,
                    Field::Real | Field::Integer => {
                        let (c, t) = toks[2];
                        let parsed = if field == Field::Integer {
                            t.parse::<i64>().map(|v| v as f64).ok()
                        } else {
                            t.parse::<f64>().ok()
                        };
                        parsed.ok_or_else(|| perr(lno, c, format!("invalid value '{t}'")))?
                    }
                };
                entries.push((idx[0], idx[1], value));
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| perr(last_line, 1, "missing size line".into()))?;
    if entries.len() != nnz {
        return Err(perr(
            last_line,
            1,
            format!("declared {nnz} entries, found {}", entries.len()),
        ));
    }
    if symmetric {
        let mirrored: Vec<_> = entries
            .iter()
            .filter(|&&(r, c, _)| r != c)
            .map(|&(r, c, v)| (c, r, v))
            .collect();
        entries.extend(mirrored);
    }
    entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
    for (r, c, v) in entries {
        match merged.last_mut() {
            Some(last) if (last.0, last.1) == (r, c) => last.2 += v,
            _ => merged.push((r, c, v)),
        }
    }
    let pattern = SparsityPattern::from_entries(n, merged.iter().map(|&(r, c, _)| (r, c)))?;
    if !symmetric {
        pattern.check_symmetric()?;
    }
    let values = (field != Field::Pattern).then(|| merged.iter().map(|e| e.2).collect());
    Ok(MatrixData { pattern, values })
}

/// Writes `pattern` (and optional values aligned with its column indices).
/// Symmetric input is written with a `symmetric` header and only its lower
/// triangle; anything else uses `general`.
pub fn write_matrix_market(path: impl AsRef<Path>, pattern: &SparsityPattern, values: Option<&[f64]>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_matrix_market_to(&mut w, pattern, values).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        e => e,
    })?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Same as [`write_matrix_market`] on any writer.
pub fn write_matrix_market_to(w: &mut impl Write, pattern: &SparsityPattern, values: Option<&[f64]>) -> Result<()> {
    if let Some(v) = values {
        if v.len() != pattern.nnz() {
            return Err(Error::MalformedPattern(format!(
                "{} values for {} entries",
                v.len(),
                pattern.nnz()
            )));
        }
    }
    let symmetric = pattern.check_symmetric().is_ok()
        && values.is_none_or(|v| {
            pattern
                .entries()
                .enumerate()
                .all(|(k, (r, c))| v[k] == v[pattern.position(c, r).unwrap_or(k)])
        });
    let keep = |r: usize, c: usize| !symmetric || c <= r;
    let count = pattern.entries().filter(|&(r, c)| keep(r, c)).count();
    let io = |e: std::io::Error| Error::io("<writer>", e);
    let field = if values.is_some() { "real" } else { "pattern" };
    let sym = if symmetric { "symmetric" } else { "general" };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} {sym}").map_err(io)?;
    writeln!(w, "{} {} {count}", pattern.n_rows(), pattern.n_rows()).map_err(io)?;
    for (k, (r, c)) in pattern.entries().enumerate() {
        if !keep(r, c) {
            continue;
        }
        match values {
            Some(v) => writeln!(w, "{} {} {:e}", r + 1, c + 1, v[k]),
            None => writeln!(w, "{} {}", r + 1, c + 1),
        }
        .map_err(io)?;
    }
    Ok(())
}

/// Reads a node-map file and validates it against the expected sizes.
pub fn read_node_map(path: impl AsRef<Path>, n_new: usize, n_old: usize) -> Result<NodeMap> {
    let path = path.as_ref();
    parse_node_map(open(path)?, path, n_new, n_old)
}

pub fn parse_node_map(reader: impl BufRead, path: &Path, n_new: usize, n_old: usize) -> Result<NodeMap> {
    let mut entries = Vec::with_capacity(n_new);
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut toks = tokens(&line);
        let Some((col, tok)) = toks.next() else {
            continue;
        };
        if let Some((c, _)) = toks.next() {
            return Err(Error::parse(path, i + 1, c, "expected one integer per line"));
        }
        let entry = match tok {
            "-1" => None,
            t => Some(t.parse::<usize>().map_err(|_| {
                Error::parse(path, i + 1, col, format!("expected an index or -1, found '{t}'"))
            })?),
        };
        entries.push(entry);
    }
    if entries.len() != n_new {
        return Err(Error::InvalidMap(format!(
            "{} has {} entries, expected {n_new}",
            path.display(),
            entries.len()
        )));
    }
    NodeMap::new(entries, n_old)
}

pub fn write_node_map(path: impl AsRef<Path>, map: &NodeMap) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    for e in map.entries() {
        match e {
            Some(o) => writeln!(w, "{o}"),
            None => writeln!(w, "-1"),
        }
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// One manifest record. Paths are already resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceStep {
    pub matrix_path: PathBuf,
    pub map_path: Option<PathBuf>,
    pub label: String,
}

impl SequenceStep {
    pub fn new(matrix_path: impl Into<PathBuf>) -> Self {
        let matrix_path = matrix_path.into();
        let label = matrix_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        SequenceStep {
            matrix_path,
            map_path: None,
            label,
        }
    }

    pub fn with_map(mut self, map_path: impl Into<PathBuf>) -> Self {
        self.map_path = Some(map_path.into());
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn load_matrix(&self) -> Result<MatrixData> {
        read_matrix_market(&self.matrix_path)
    }

    /// Loads the map, if any, for a step going from `n_old` to `n_new` nodes.
    pub fn load_map(&self, n_new: usize, n_old: usize) -> Result<Option<NodeMap>> {
        self.map_path
            .as_ref()
            .map(|p| read_node_map(p, n_new, n_old))
            .transpose()
    }
}

/// Streams manifest records one line at a time.
pub struct ManifestReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    path: PathBuf,
    base: PathBuf,
}

impl ManifestReader<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self::new(open(path)?, path, base))
    }
}

impl<R: BufRead> ManifestReader<R> {
    /// `base` is the directory relative paths are resolved against.
    pub fn new(reader: R, path: impl Into<PathBuf>, base: impl Into<PathBuf>) -> Self {
        ManifestReader {
            lines: reader.lines(),
            line_no: 0,
            path: path.into(),
            base: base.into(),
        }
    }

    fn parse_line(&self, line: &str) -> Result<SequenceStep> {
        let lno = self.line_no;
        let offset = line.len() - line.trim_start().len();
        let mut matrix = None;
        let mut map = None;
        let mut label = None;
        let mut col = offset + 1;
        for field in line.trim().split(';') {
            let perr = |msg: String| Error::parse(&self.path, lno, col, msg);
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| perr(format!("expected key=value, found '{field}'")))?;
            let slot = match key.trim() {
                "matrix" => &mut matrix,
                "map" => &mut map,
                "label" => &mut label,
                other => return Err(perr(format!("unknown key '{other}'"))),
            };
            if slot.is_some() {
                return Err(perr(format!("duplicate key '{}'", key.trim())));
            }
            *slot = Some(value.trim().to_string());
            col += field.len() + 1;
        }
        let matrix = matrix
            .filter(|m| !m.is_empty())
            .ok_or_else(|| Error::parse(&self.path, lno, offset + 1, "missing matrix=<path>"))?;
        let mut step = SequenceStep::new(self.base.join(matrix));
        if let Some(m) = map.filter(|m| !m.is_empty()) {
            step = step.with_map(self.base.join(m));
        }
        if let Some(l) = label {
            step = step.with_label(l);
        }
        Ok(step)
    }
}

impl<R: BufRead> Iterator for ManifestReader<R> {
    type Item = Result<SequenceStep>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::io(&self.path, e))),
            };
            self.line_no += 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some(self.parse_line(&line));
        }
    }
}

/// Reads every record of a manifest without touching the referenced files.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<SequenceStep>> {
    ManifestReader::open(path)?.collect()
}

/// Writes a manifest. Paths under the manifest's directory are written
/// relative to it.
pub fn write_manifest(path: impl AsRef<Path>, steps: &[SequenceStep]) -> Result<()> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or(Path::new(""));
    let rel = |p: &Path| -> Result<String> {
        let p = if base.as_os_str().is_empty() {
            p
        } else {
            p.strip_prefix(base).unwrap_or(p)
        };
        let s = p.to_string_lossy().into_owned();
        if s.contains([';', '\n', '\r']) {
            return Err(Error::InvalidManifest(format!("path '{s}' contains ';' or a newline")));
        }
        Ok(s)
    };
    let mut w = create(path)?;
    for step in steps {
        if step.label.contains([';', '\n', '\r']) {
            return Err(Error::InvalidManifest(format!(
                "label '{}' contains ';' or a newline",
                step.label
            )));
        }
        let mut line = format!("matrix={}", rel(&step.matrix_path)?);
        if let Some(m) = &step.map_path {
            line.push_str(&format!(";map={}", rel(m)?));
        }
        if !step.label.is_empty() {
            line.push_str(&format!(";label={}", step.label));
        }
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(text: &str) -> Result<MatrixData> {
        parse_matrix_market(text.as_bytes(), Path::new("t.mtx"))
    }

    #[test]
    fn symmetric_pattern_is_expanded() {
        let m = mm("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n1 1\n3 1\n").unwrap();
        assert_eq!(m.pattern.entries().collect::<Vec<_>>(), vec![(0, 0), (0, 2), (2, 0)]);
        assert!(m.values.is_none());
    }

    #[test]
    fn empty_entry_list() {
        let m = mm("%%MatrixMarket matrix coordinate pattern general\n% c\n4 4 0\n").unwrap();
        assert_eq!((m.pattern.n_rows(), m.pattern.nnz()), (4, 0));
    }

    #[test]
    fn zero_index_reports_position() {
        let e = mm("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 1, .. }), "{e}");
        let e = mm("%%MatrixMarket matrix coordinate real general\n2 2 1\n1  1 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 6, .. }), "{e}");
    }

    #[test]
    fn general_asymmetric_rejected() {
        let e = mm("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n").unwrap_err();
        assert!(matches!(e, Error::AsymmetricPattern { .. }));
    }

    #[test]
    fn values_kept_and_mirrored() {
        let m = mm("%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 4\n2 1 -1.5\n2 2 4\n").unwrap();
        assert_eq!(m.values.unwrap(), vec![4.0, -1.5, -1.5, 4.0]);
    }

    #[test]
    fn entry_count_checked() {
        assert!(mm("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n").is_err());
        assert!(mm("%%MatrixMarket matrix array real general\n2 2\n").is_err());
    }

    #[test]
    fn write_read_round_trip() {
        let p = SparsityPattern::symmetric_with_diagonal(5, [(0, 3), (1, 4), (2, 3)]).unwrap();
        let vals: Vec<f64> = p.entries().map(|(r, c)| if r == c { 3.25 } else { -0.1 }).collect();
        let mut buf = Vec::new();
        write_matrix_market_to(&mut buf, &p, Some(&vals)).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("symmetric"));
        let back = parse_matrix_market(&buf[..], Path::new("x")).unwrap();
        assert_eq!(back.pattern, p);
        assert_eq!(back.values.unwrap(), vals);
    }

    #[test]
    fn node_maps() {
        let pm = |s: &str, n_new, n_old| parse_node_map(s.as_bytes(), Path::new("m"), n_new, n_old);
        assert!(pm("0\n1\n2\n", 3, 3).unwrap().is_identity());
        let m = pm("0\n2\n-1\n", 3, 3).unwrap();
        assert_eq!(m.entries(), &[Some(0), Some(2), None]);
        assert!(matches!(pm("0\n0\n", 2, 2), Err(Error::InvalidMap(_))));
        assert!(matches!(pm("0\n5\n", 2, 2), Err(Error::InvalidMap(_))));
        assert!(matches!(pm("0\n", 2, 2), Err(Error::InvalidMap(_))));
        assert!(matches!(pm("0\n-2\n", 2, 2), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn manifest_lines() {
        let text = "# seq\nmatrix=a.mtx\n\nmatrix=b.mtx;map=b.map;label=second\n";
        let steps: Vec<_> = ManifestReader::new(text.as_bytes(), "m.txt", "/data")
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].matrix_path, Path::new("/data/a.mtx"));
        assert_eq!(steps[0].map_path, None);
        assert_eq!(steps[0].label, "a");
        assert_eq!(steps[1].map_path.as_deref(), Some(Path::new("/data/b.map")));
        assert_eq!(steps[1].label, "second");
    }

    #[test]
    fn manifest_errors_carry_line() {
        let bad = "matrix=a.mtx\nmatrix=b.mtx;mop=x\n";
        let r: Result<Vec<_>> = ManifestReader::new(bad.as_bytes(), "m.txt", "").collect();
        assert!(matches!(r, Err(Error::Parse { line: 2, column: 14, .. })));
        let r: Result<Vec<_>> = ManifestReader::new("label=x\n".as_bytes(), "m.txt", "").collect();
        assert!(matches!(r, Err(Error::Parse { line: 1, .. })));
    }
}
