//! Graph and partition file formats.
//!
//! Input graphs are read as raw edge lists and always passed through
//! [`preprocess`], so the returned graph is symmetric, loop-free and
//! connected.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{GraphError, IoError};
use crate::graph::{Graph, Weight};
use crate::preprocess::{preprocess, Preprocessed};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Metis,
    MatrixMarket,
}

impl Format {
    /// `.mtx` files are Matrix Market, everything else is METIS.
    pub fn from_extension(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => Format::MatrixMarket,
            _ => Format::Metis,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metis" | "graph" => Ok(Format::Metis),
            "mtx" | "matrix-market" => Ok(Format::MatrixMarket),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    File::open(path).map(BufReader::new).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Reads and preprocesses a graph file.
pub fn load_graph(path: &Path, format: Format) -> Result<Graph, IoError> {
    let reader = open(path)?;
    let pre = match format {
        Format::Metis => parse_metis(reader)?,
        Format::MatrixMarket => parse_matrix_market(reader)?,
    };
    Ok(pre.graph)
}

fn parse_int<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T, IoError> {
    tok.parse()
        .map_err(|_| IoError::parse(line, format!("invalid {what} '{tok}'")))
}

/// Parses the METIS `.graph` text format (1-indexed neighbors, header
/// `n m [fmt [ncon]]`, fmt in {0, 1, 10, 11}).
pub fn parse_metis<R: Read>(reader: R) -> Result<Preprocessed, IoError> {
    let mut lines = BufReader::new(reader).lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut header = None;
    for (lineno, line) in lines.by_ref() {
        let line = line.map_err(|e| IoError::parse(lineno, e.to_string()))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        header = Some((lineno, t.to_owned()));
        break;
    }
    let (hline, header) = header.ok_or_else(|| IoError::parse(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 2 || toks.len() > 4 {
        return Err(IoError::parse(hline, "header must be 'n m [fmt [ncon]]'"));
    }
    let n: usize = parse_int(toks[0], hline, "vertex count")?;
    let _m: usize = parse_int(toks[1], hline, "edge count")?;
    if n == 0 {
        return Err(GraphError::Empty.into());
    }
    let fmt = toks.get(2).copied().unwrap_or("0");
    if fmt.is_empty() || fmt.len() > 3 || !fmt.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(IoError::parse(hline, format!("unsupported fmt '{fmt}'")));
    }
    let flags: Vec<bool> = fmt.bytes().rev().map(|b| b == b'1').collect();
    let has_ewgt = flags[0];
    let has_vwgt = flags.get(1).copied().unwrap_or(false);
    if flags.get(2).copied().unwrap_or(false) {
        return Err(IoError::parse(hline, "vertex sizes (fmt 100) are not supported"));
    }
    if let Some(ncon) = toks.get(3) {
        let ncon: usize = parse_int(ncon, hline, "ncon")?;
        if ncon != 1 {
            return Err(IoError::parse(
                hline,
                "multi-constraint vertex weights are not supported",
            ));
        }
    }

    let mut edges = Vec::new();
    let mut vwgt = has_vwgt.then(|| Vec::with_capacity(n));
    let mut v = 0usize;
    for (lineno, line) in lines {
        let line = line.map_err(|e| IoError::parse(lineno, e.to_string()))?;
        let t = line.trim();
        if t.starts_with('%') {
            continue;
        }
        if v == n {
            if t.is_empty() {
                continue;
            }
            return Err(IoError::parse(lineno, format!("more than {n} vertex lines")));
        }
        let mut toks = t.split_whitespace();
        if let Some(vw) = vwgt.as_mut() {
            let w: Weight = match toks.next() {
                Some(tok) => parse_int(tok, lineno, "vertex weight")?,
                None => return Err(IoError::parse(lineno, "missing vertex weight")),
            };
            if w < 1 {
                return Err(IoError::parse(lineno, format!("non-positive vertex weight {w}")));
            }
            vw.push(w);
        }
        while let Some(tok) = toks.next() {
            let u: usize = parse_int(tok, lineno, "neighbor id")?;
            if u == 0 || u > n {
                return Err(IoError::parse(lineno, format!("neighbor id {u} out of range 1..={n}")));
            }
            let w: Weight = if has_ewgt {
                let tok = toks
                    .next()
                    .ok_or_else(|| IoError::parse(lineno, "missing edge weight"))?;
                parse_int(tok, lineno, "edge weight")?
            } else {
                1
            };
            if w < 1 {
                return Err(IoError::parse(lineno, format!("non-positive edge weight {w}")));
            }
            edges.push((v, u - 1, w));
        }
        v += 1;
    }
    // Missing trailing lines are isolated vertices.
    if let Some(vw) = vwgt.as_mut() {
        vw.resize(n, 1);
    }
    Ok(preprocess(&edges, n, vwgt.as_deref())?)
}

/// Parses Matrix Market coordinate format. The sparsity pattern defines the
/// edges; numeric values are ignored and every edge gets unit weight.
pub fn parse_matrix_market<R: Read>(reader: R) -> Result<Preprocessed, IoError> {
    let mut lines = BufReader::new(reader).lines().enumerate().map(|(i, l)| (i + 1, l));
    let banner = match lines.next() {
        Some((_, l)) => l.map_err(|e| IoError::parse(1, e.to_string()))?,
        None => return Err(IoError::parse(1, "empty file")),
    };
    let b: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if b.len() < 4 || b[0] != "%%matrixmarket" || b[1] != "matrix" {
        return Err(IoError::parse(1, "missing %%MatrixMarket matrix banner"));
    }
    if b[2] != "coordinate" {
        return Err(IoError::parse(1, "only coordinate format is supported"));
    }

    let mut size = None;
    let mut edges = Vec::new();
    let mut expected = 0usize;
    for (lineno, line) in lines {
        let line = line.map_err(|e| IoError::parse(lineno, e.to_string()))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if toks.len() != 3 {
                    return Err(IoError::parse(lineno, "size line must be 'rows cols entries'"));
                }
                let rows: usize = parse_int(toks[0], lineno, "row count")?;
                let cols: usize = parse_int(toks[1], lineno, "column count")?;
                expected = parse_int(toks[2], lineno, "entry count")?;
                if rows != cols {
                    return Err(IoError::parse(lineno, format!("matrix is {rows}x{cols}, not square")));
                }
                if rows == 0 {
                    return Err(GraphError::Empty.into());
                }
                size = Some(rows);
                edges.reserve(expected);
            }
            Some(n) => {
                if toks.len() < 2 {
                    return Err(IoError::parse(lineno, "entry needs row and column"));
                }
                let i: usize = parse_int(toks[0], lineno, "row index")?;
                let j: usize = parse_int(toks[1], lineno, "column index")?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(IoError::parse(lineno, format!("entry ({i},{j}) out of range")));
                }
                edges.push((i - 1, j - 1, 1));
            }
        }
    }
    let n = size.ok_or_else(|| IoError::parse(1, "missing size line"))?;
    if edges.len() != expected {
        return Err(IoError::parse(
            0,
            format!("expected {expected} entries, found {}", edges.len()),
        ));
    }
    Ok(preprocess(&edges, n, None)?)
}

/// Writes `g` in METIS format, emitting weights only when they are not all 1.
pub fn write_metis<W: Write>(g: &Graph, out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    let vw = !g.has_unit_vertex_weights();
    let ew = !g.has_unit_edge_weights();
    match (vw, ew) {
        (false, false) => writeln!(out, "{} {}", g.n(), g.edge_count())?,
        (false, true) => writeln!(out, "{} {} 1", g.n(), g.edge_count())?,
        (true, false) => writeln!(out, "{} {} 10", g.n(), g.edge_count())?,
        (true, true) => writeln!(out, "{} {} 11", g.n(), g.edge_count())?,
    }
    for v in 0..g.n() {
        let mut fields = Vec::with_capacity(2 * g.degree(v) + 1);
        if vw {
            fields.push(g.vertex_weight(v).to_string());
        }
        for (u, w) in g.neighbors(v) {
            fields.push((u + 1).to_string());
            if ew {
                fields.push(w.to_string());
            }
        }
        writeln!(out, "{}", fields.join(" "))?;
    }
    out.flush()
}

/// One part id per line; line `i` holds the part of vertex `i`.
pub fn write_partition<W: Write>(parts: &[usize], out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    for p in parts {
        writeln!(out, "{p}")?;
    }
    out.flush()
}

pub fn read_partition<R: Read>(reader: R) -> Result<Vec<usize>, IoError> {
    let mut parts = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| IoError::parse(i + 1, e.to_string()))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        parts.push(parse_int(t, i + 1, "part id")?);
    }
    Ok(parts)
}
