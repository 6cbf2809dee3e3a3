//! Edge lists, TSPLIB files, CSV matrices and the generator mini-language.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{gen_er, gen_regular};
use crate::graph::Graph;
use crate::linalg::SymMatrix;
use crate::maxcut::planted_instance;

/// Parses `u v [w]` lines. Vertex indices start at `base` (0 or 1); the vertex
/// count is the largest index seen.
pub fn parse_edgelist(text: &str, base: usize) -> Result<Graph> {
    if base > 1 {
        return Err(Error::InvalidParameter(format!("index base must be 0 or 1, got {base}")));
    }
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut n = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::parse(line, format!("expected `u v [w]`, got {:?}", body)));
        }
        let idx = |s: &str| -> Result<usize> {
            let i: usize = s
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid vertex index {s:?}")))?;
            i.checked_sub(base)
                .ok_or_else(|| Error::parse(line, format!("vertex index {i} is below the base {base}")))
        };
        let (u, v) = (idx(fields[0])?, idx(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| Error::parse(line, format!("invalid weight {s:?}")))?,
            None => 1.0,
        };
        if u == v {
            return Err(Error::parse(line, format!("self-loop at vertex {}", u + base)));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::parse(line, format!("weight {w} must be finite and nonnegative")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line, format!("duplicate edge ({}, {})", u + base, v + base)));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    if n == 0 {
        return Err(Error::parse(0, "edge list contains no edges"));
    }
    Graph::new(n, edges)
}

/// Writes one `u v [w]` line per edge; unit weights are omitted.
pub fn write_edgelist(g: &Graph, base: usize) -> String {
    let mut out = String::new();
    for e in g.edges() {
        if e.w == 1.0 {
            out.push_str(&format!("{} {}\n", e.u + base, e.v + base));
        } else {
            out.push_str(&format!("{} {} {}\n", e.u + base, e.v + base, e.w));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WeightType {
    Euc2d,
    Geo,
    Explicit,
}

/// Parses a symmetric TSPLIB instance into a complete weighted graph.
///
/// Supports `EUC_2D` and `GEO` coordinates and explicit weights in
/// `FULL_MATRIX`, `UPPER_ROW`, `LOWER_ROW`, `UPPER_DIAG_ROW` and
/// `LOWER_DIAG_ROW` layouts.
pub fn parse_tsplib(text: &str) -> Result<Graph> {
    let mut dim = None;
    let mut wtype = None;
    let mut wformat = None;
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut section = "";
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        if body == "EOF" {
            break;
        }
        let upper = body.to_ascii_uppercase();
        if upper.ends_with("_SECTION") {
            section = match upper.as_str() {
                "NODE_COORD_SECTION" => "coords",
                "EDGE_WEIGHT_SECTION" => "weights",
                "DISPLAY_DATA_SECTION" => "skip",
                other => return Err(Error::parse(line, format!("unsupported section {other}"))),
            };
            continue;
        }
        if let Some((key, value)) = body.split_once(':') {
            let key = key.trim().to_ascii_uppercase();
            let value = value.trim();
            section = "";
            match key.as_str() {
                "DIMENSION" => {
                    let d: usize = value
                        .parse()
                        .map_err(|_| Error::parse(line, format!("invalid DIMENSION {value:?}")))?;
                    dim = Some(d);
                }
                "EDGE_WEIGHT_TYPE" => {
                    wtype = Some(match value {
                        "EUC_2D" => WeightType::Euc2d,
                        "GEO" => WeightType::Geo,
                        "EXPLICIT" => WeightType::Explicit,
                        other => {
                            return Err(Error::parse(line, format!("unsupported EDGE_WEIGHT_TYPE {other}")))
                        }
                    })
                }
                "EDGE_WEIGHT_FORMAT" => match value {
                    "FULL_MATRIX" | "UPPER_ROW" | "LOWER_ROW" | "UPPER_DIAG_ROW" | "LOWER_DIAG_ROW" => {
                        wformat = Some(value.to_string())
                    }
                    other => return Err(Error::parse(line, format!("unsupported EDGE_WEIGHT_FORMAT {other}"))),
                },
                "TYPE" => {
                    if value != "TSP" {
                        return Err(Error::parse(line, format!("unsupported TYPE {value} (only TSP)")));
                    }
                }
                _ => {}
            }
            continue;
        }
        match section {
            "coords" => {
                let f: Vec<&str> = body.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(Error::parse(line, "expected `index x y`"));
                }
                let num = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|_| Error::parse(line, format!("invalid coordinate {s:?}")))
                };
                coords.push((num(f[1])?, num(f[2])?));
            }
            "weights" => {
                for s in body.split_whitespace() {
                    weights.push(
                        s.parse::<f64>()
                            .map_err(|_| Error::parse(line, format!("invalid weight {s:?}")))?,
                    );
                }
            }
            "skip" => {}
            _ => return Err(Error::parse(line, format!("unexpected line {body:?}"))),
        }
    }
    let n = dim.ok_or_else(|| Error::parse(0, "missing DIMENSION"))?;
    if n == 0 {
        return Err(Error::parse(0, "DIMENSION must be positive"));
    }
    let wtype = wtype.ok_or_else(|| Error::parse(0, "missing EDGE_WEIGHT_TYPE"))?;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    match wtype {
        WeightType::Euc2d | WeightType::Geo => {
            if coords.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: coords.len(),
                });
            }
            for u in 0..n {
                for v in u + 1..n {
                    let w = if wtype == WeightType::Euc2d {
                        euc_2d(coords[u], coords[v])
                    } else {
                        geo(coords[u], coords[v])
                    };
                    edges.push((u, v, w));
                }
            }
        }
        WeightType::Explicit => {
            let format = wformat.ok_or_else(|| Error::parse(0, "EXPLICIT weights need EDGE_WEIGHT_FORMAT"))?;
            let m = explicit_matrix(n, &format, &weights)?;
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v, m.get(u, v)));
                }
            }
        }
    }
    Graph::new(n, edges)
}

fn explicit_matrix(n: usize, format: &str, w: &[f64]) -> Result<SymMatrix> {
    let expected = match format {
        "FULL_MATRIX" => n * n,
        "UPPER_ROW" | "LOWER_ROW" => n * (n - 1) / 2,
        _ => n * (n + 1) / 2,
    };
    if w.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: w.len(),
        });
    }
    if format == "FULL_MATRIX" {
        return SymMatrix::from_row_slice(n, w);
    }
    let mut m = SymMatrix::zeros(n);
    let mut it = w.iter();
    for r in 0..n {
        let cols: Vec<usize> = match format {
            "UPPER_ROW" => (r + 1..n).collect(),
            "UPPER_DIAG_ROW" => (r..n).collect(),
            "LOWER_ROW" => (0..r).collect(),
            _ => (0..=r).collect(),
        };
        for c in cols {
            m.set(r, c, *it.next().expect("length checked"));
        }
    }
    Ok(m)
}

fn euc_2d(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt().round()
}

fn geo(a: (f64, f64), b: (f64, f64)) -> f64 {
    // TSPLIB uses this truncated value of pi and DDD.MM coordinates
    #[allow(clippy::approx_constant)]
    const PI: f64 = 3.141592;
    const RRR: f64 = 6378.388;
    let rad = |x: f64| {
        let deg = x.trunc();
        PI * (deg + 5.0 * (x - deg) / 3.0) / 180.0
    };
    let (lat_a, lon_a, lat_b, lon_b) = (rad(a.0), rad(a.1), rad(b.0), rad(b.1));
    let q1 = (lon_a - lon_b).cos();
    let q2 = (lat_a - lat_b).cos();
    let q3 = (lat_a + lat_b).cos();
    (RRR * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0).trunc()
}

/// A square numeric CSV matrix with optional column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMatrix {
    pub labels: Option<Vec<String>>,
    pub matrix: SymMatrix,
}

/// Parses a square numeric CSV. A first row with any non-numeric cell is
/// taken as a header.
pub fn parse_csv_labeled(text: &str) -> Result<LabeledMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::parse(e.position().map_or(k + 1, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        let parsed: Vec<Option<f64>> = rec.iter().map(|c| c.parse::<f64>().ok()).collect();
        if k == 0 && parsed.iter().any(Option::is_none) {
            labels = Some(rec.iter().map(str::to_string).collect());
            continue;
        }
        let row = parsed
            .iter()
            .zip(rec.iter())
            .map(|(p, cell)| p.ok_or_else(|| Error::parse(line, format!("non-numeric cell {cell:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(line, format!("row has {} cells, expected {}", row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::parse(0, "matrix has no rows"));
    }
    if rows[0].len() != n {
        return Err(Error::InvalidMatrix(format!("matrix is {}x{}, not square", n, rows[0].len())));
    }
    if let Some(l) = &labels {
        if l.len() != n {
            return Err(Error::parse(1, format!("header has {} labels for {n} columns", l.len())));
        }
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(LabeledMatrix {
        labels,
        matrix: SymMatrix::from_row_slice(n, &flat)?,
    })
}

pub fn parse_csv_matrix(text: &str) -> Result<SymMatrix> {
    Ok(parse_csv_labeled(text)?.matrix)
}

/// Weighted graph from a symmetric adjacency matrix; zero entries are non-edges.
pub fn graph_from_matrix(w: &SymMatrix) -> Result<Graph> {
    let n = w.dim();
    if let Some(i) = (0..n).find(|&i| w.get(i, i) != 0.0) {
        return Err(Error::InvalidGraph(format!("adjacency matrix has a nonzero diagonal at {i}")));
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter_map(|(u, v)| {
        let x = w.get(u, v);
        (x != 0.0).then_some((u, v, x))
    });
    Graph::new(n, edges.collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FileFormat {
    Edgelist,
    Tsplib,
    CsvMatrix,
}

impl FileFormat {
    /// `.tsp` is TSPLIB, `.csv` a CSV adjacency matrix, anything else an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("tsp") => FileFormat::Tsplib,
            Some("csv") => FileFormat::CsvMatrix,
            _ => FileFormat::Edgelist,
        }
    }
}

impl FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(FileFormat::Edgelist),
            "tsplib" => Ok(FileFormat::Tsplib),
            "csv-matrix" => Ok(FileFormat::CsvMatrix),
            other => Err(Error::InvalidParameter(format!("unknown file format {other:?}"))),
        }
    }
}

/// A seeded random graph family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Er { n: usize, p: f64 },
    Regular { n: usize, d: usize },
    Planted { n: usize, d: usize, l: usize },
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            GeneratorSpec::Er { n, p } => gen_er(n, p, seed),
            GeneratorSpec::Regular { n, d } => gen_regular(n, d, seed),
            GeneratorSpec::Planted { n, d, l } => planted_instance(n, d, l, seed),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// `er:n=50,p=0.25`, `regular:n=50,d=6` or `planted:n=64,d=4,l=5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(format!("generator spec {s:?}: {msg}"));
        let (name, rest) = s.split_once(':').ok_or_else(|| bad("expected `name:key=value,...`".into()))?;
        let mut params = Vec::new();
        for kv in rest.split(',').filter(|kv| !kv.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {kv:?}")))?;
            if params.iter().any(|(pk, _): &(String, String)| pk == k.trim()) {
                return Err(bad(format!("repeated key {k:?}")));
            }
            params.push((k.trim().to_string(), v.trim().to_string()));
        }
        let keys: &[&str] = match name.trim() {
            "er" => &["n", "p"],
            "regular" => &["n", "d"],
            "planted" => &["n", "d", "l"],
            other => return Err(bad(format!("unknown generator {other:?}"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
            return Err(bad(format!("unexpected key {k:?}")));
        }
        let get = |k: &str| -> Result<&str> {
            params
                .iter()
                .find(|(pk, _)| pk == k)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| bad(format!("missing key {k:?}")))
        };
        let int = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(format!("{k} must be an integer"))) };
        let spec = match name.trim() {
            "er" => {
                let p: f64 = get("p")?.parse().map_err(|_| bad("p must be a number".into()))?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(bad(format!("p = {p} must lie in (0, 1)")));
                }
                GeneratorSpec::Er { n: int("n")?, p }
            }
            "regular" => {
                let (n, d) = (int("n")?, int("d")?);
                if d >= n || (n * d) % 2 != 0 {
                    return Err(bad(format!("need d < n and n*d even, got n={n}, d={d}")));
                }
                GeneratorSpec::Regular { n, d }
            }
            _ => GeneratorSpec::Planted {
                n: int("n")?,
                d: int("d")?,
                l: int("l")?,
            },
        };
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Er { n, p } => write!(f, "er:n={n},p={p}"),
            GeneratorSpec::Regular { n, d } => write!(f, "regular:n={n},d={d}"),
            GeneratorSpec::Planted { n, d, l } => write!(f, "planted:n={n},d={d},l={l}"),
        }
    }
}

/// Where a graph instance comes from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum InstanceSpec {
    File { path: PathBuf, format: FileFormat },
    Generator { spec: GeneratorSpec, seed: u64 },
}

impl InstanceSpec {
    pub fn file(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let format = FileFormat::from_path(&path);
        InstanceSpec::File { path, format }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            InstanceSpec::Generator { spec, seed } => spec.generate(*seed),
            InstanceSpec::File { path, format } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
                match format {
                    FileFormat::Edgelist => parse_edgelist(&text, 1),
                    FileFormat::Tsplib => parse_tsplib(&text),
                    FileFormat::CsvMatrix => graph_from_matrix(&parse_csv_matrix(&text)?),
                }
            }
        }
    }

    /// Short human-readable name.
    pub fn describe(&self) -> String {
        match self {
            InstanceSpec::File { path, .. } => path
                .file_name()
                .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned()),
            InstanceSpec::Generator { spec, seed } => format!("{spec}#{seed}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgelist_examples() {
        assert_eq!(parse_edgelist("1 2", 1).unwrap(), Graph::complete(2));
        let t = parse_edgelist("1 2\n2 3\n3 1\n", 1).unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.m_total(), 3.0);
        let w = parse_edgelist("# weighted\n1 2 2.5", 1).unwrap();
        assert_eq!(w.m_total(), 2.5);
        assert_eq!(parse_edgelist("0 1", 0).unwrap(), Graph::complete(2));
    }

    #[test]
    fn edgelist_errors_carry_line_numbers() {
        let err = parse_edgelist("1 2\n1 x\n", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_edgelist("1 2\n2 1\n", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(matches!(parse_edgelist("3 3", 1).unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(parse_edgelist("0 1", 1).is_err());
        assert!(parse_edgelist("# nothing\n", 1).is_err());
        assert!(parse_edgelist("1 2 -1", 1).is_err());
    }

    #[test]
    fn edgelist_round_trip() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 3, 0.1), (2, 3, 7.25)]).unwrap();
        assert_eq!(parse_edgelist(&write_edgelist(&g, 1), 1).unwrap(), g);
        assert_eq!(parse_edgelist(&write_edgelist(&g, 0), 0).unwrap(), g);
    }

    #[test]
    fn tsplib_euclidean_triangle() {
        let text = "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
        let g = parse_tsplib(text).unwrap();
        let w: Vec<f64> = g.edges().iter().map(|e| e.w).collect();
        assert_eq!(w, vec![3.0, 4.0, 5.0]);
        assert_eq!(g.m_total(), 12.0);
    }

    #[test]
    fn tsplib_explicit_formats_agree() {
        let full = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2\n1 0 3\n2 3 0\nEOF";
        let upper = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n1 2\n3\n";
        let lower = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW\nEDGE_WEIGHT_SECTION\n0 1 0 2 3 0\n";
        let g = parse_tsplib(full).unwrap();
        assert_eq!(g, parse_tsplib(upper).unwrap());
        assert_eq!(g, parse_tsplib(lower).unwrap());
        let pair = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 7\n7 0\n";
        let g = parse_tsplib(pair).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.m_total(), 7.0);
    }

    #[test]
    fn tsplib_rejects_unsupported_input() {
        let err = parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: ATT\n").unwrap_err();
        assert!(err.to_string().contains("ATT"));
        let err = parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_COL\n").unwrap_err();
        assert!(err.to_string().contains("UPPER_COL"));
        let short = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n";
        assert!(matches!(parse_tsplib(short).unwrap_err(), Error::DimensionMismatch { .. }));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn geo_distance_matches_tsplib_convention() {
        // two points one degree of latitude apart on the same meridian
        let d = geo((10.0, 20.0), (11.0, 20.0));
        let arc: f64 = 6378.388 * (3.141592 / 180.0);
        assert_eq!(d, (arc + 1.0).trunc());
    }

    #[test]
    fn csv_examples() {
        assert_eq!(parse_csv_matrix("1,0\n0,1").unwrap(), SymMatrix::identity(2));
        let m = parse_csv_matrix("a,b\n2,1\n1,2\n").unwrap();
        assert_eq!(m, SymMatrix::from_row_slice(2, &[2.0, 1.0, 1.0, 2.0]).unwrap());
        let l = parse_csv_labeled("a, b\n2,1\n1,2\n").unwrap();
        assert_eq!(l.labels.unwrap(), vec!["a", "b"]);
        assert!(parse_csv_matrix("1,2,3\n4,5,6").is_err());
        assert!(matches!(parse_csv_matrix("1,0\n0,x").unwrap_err(), Error::Parse { line: 2, .. }));
        assert!(parse_csv_matrix("1,5\n0,1").is_err());
    }

    #[test]
    fn generator_specs() {
        let s: GeneratorSpec = "er:n=50,p=0.25".parse().unwrap();
        assert_eq!(s, GeneratorSpec::Er { n: 50, p: 0.25 });
        assert_eq!(s.to_string(), "er:n=50,p=0.25");
        let s: GeneratorSpec = "regular:n=50,d=6".parse().unwrap();
        assert_eq!(s.generate(1).unwrap().degrees(), vec![6.0; 50]);
        let s: GeneratorSpec = "planted:n=64,d=4,l=5".parse().unwrap();
        assert_eq!(s.generate(2).unwrap().m_total(), 165.0);
        for bad in ["er:n=50", "er:n=50,p=1", "regular:n=5,d=3", "foo:n=1", "er:n=5,p=0.5,q=1", "er"] {
            assert!(bad.parse::<GeneratorSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_graphs() {
        let w = SymMatrix::from_row_slice(3, &[0.0, 2.0, 0.0, 2.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        let g = graph_from_matrix(&w).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.adjacency(), w);
        assert!(graph_from_matrix(&SymMatrix::identity(2)).is_err());
    }
}
