//! Tab-separated text formats.
//!
//! Every file starts with `#` header lines. Edge lists carry the model
//! parameters as `# key<TAB>value` lines followed by `src<TAB>dst<TAB>weight`
//! rows with 0-based node ids in birth order. Reals are written with 17
//! significant digits so 64-bit values survive a round trip.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::analysis::{GraphView, SpectrumTable};
use crate::error::{Error, Result};
use crate::growth::Trajectory;
use crate::params::ModelParams;

/// Formats `x` like C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let join = |int: &str, frac: &str| {
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if !(-4..17).contains(&exp) {
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{}e{esign}{:02}", join(&digits[..1], &digits[1..]), exp.abs())
    } else if exp >= 0 {
        let split = exp as usize + 1;
        format!("{sign}{}", join(&digits[..split], &digits[split..]))
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}{}", join("0", &format!("{zeros}{digits}")))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

macro_rules! out {
    ($w:expr, $path:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(|e| Error::io($path, e))?
    };
}

fn write_params_header(w: &mut impl Write, path: &Path, params: &ModelParams) -> Result<()> {
    out!(w, path, "# m\t{}", params.m);
    out!(w, path, "# delta\t{}", format_g17(params.delta));
    out!(w, path, "# n0\t{}", params.n0);
    out!(w, path, "# n\t{}", params.n_final);
    out!(w, path, "# seed\t{}", params.rng_seed);
    Ok(())
}

pub fn write_edge_list(view: &GraphView, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    out!(w, path, "# traffic-web edge list");
    if let Some(params) = view.params() {
        write_params_header(&mut w, path, params)?;
    } else {
        out!(w, path, "# n\t{}", view.len());
    }
    out!(w, path, "# src\tdst\tweight");
    for (i, j, wt) in view.edges() {
        out!(w, path, "{i}\t{j}\t{}", format_g17(wt));
    }
    finish(w, path)
}

#[derive(Default)]
struct Header {
    m: Option<usize>,
    delta: Option<f64>,
    n0: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
}

impl Header {
    fn params(&self) -> Option<ModelParams> {
        Some(ModelParams {
            m: self.m?,
            delta: self.delta?,
            n0: self.n0?,
            n_final: self.n?,
            rng_seed: self.seed?,
        })
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn read_edge_list(path: &Path) -> Result<GraphView> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut header = Header::default();
    let mut edges = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.trim().split('\t');
            let key = parts.next().unwrap_or("");
            let Some(value) = parts.next() else { continue };
            let bad = || parse_err(path, lineno, format!("bad header value for {key}: {value:?}"));
            match key {
                "m" => header.m = Some(value.parse().map_err(|_| bad())?),
                "delta" => header.delta = Some(value.parse().map_err(|_| bad())?),
                "n0" => header.n0 = Some(value.parse().map_err(|_| bad())?),
                "n" => header.n = Some(value.parse().map_err(|_| bad())?),
                "seed" => header.seed = Some(value.parse().map_err(|_| bad())?),
                _ => {}
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected src<TAB>dst<TAB>weight, found {} field(s)", fields.len()),
            ));
        }
        let src: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad source id {:?}", fields[0])))?;
        let dst: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad target id {:?}", fields[1])))?;
        let weight: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad weight {:?}", fields[2])))?;
        if !(weight >= 0.0) {
            return Err(Error::domain(format!(
                "{}:{lineno}: negative weight {weight}",
                path.display()
            )));
        }
        edges.push((src, dst, weight));
    }
    let max_id = edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0);
    let n = match header.n {
        Some(n) if n < max_id => {
            return Err(parse_err(
                path,
                0,
                format!("header declares {n} nodes but ids reach {}", max_id - 1),
            ))
        }
        Some(n) => n,
        None => max_id,
    };
    GraphView::from_edges(n, &edges, None, header.params())
}

pub fn write_node_table(view: &GraphView, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    out!(w, path, "# node\tbirth\tk_in\tk_out\ts_in\ts_out");
    for i in 0..view.len() {
        out!(
            w,
            path,
            "{i}\t{}\t{}\t{}\t{}\t{}",
            view.birth(i),
            view.k_in(i),
            view.k_out(i),
            format_g17(view.s_in(i)),
            format_g17(view.s_out(i))
        );
    }
    finish(w, path)
}

/// One row of a node table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeRow {
    pub node: usize,
    pub birth: usize,
    pub k_in: usize,
    pub k_out: usize,
    pub s_in: f64,
    pub s_out: f64,
}

pub fn read_node_table(path: &Path) -> Result<Vec<NodeRow>> {
    let rows = read_rows(path)?;
    rows.into_iter()
        .map(|(lineno, f)| {
            if f.len() != 6 {
                return Err(parse_err(path, lineno, "expected 6 columns"));
            }
            let int = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| parse_err(path, lineno, format!("bad integer {s:?}")))
            };
            let real = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| parse_err(path, lineno, format!("bad real {s:?}")))
            };
            Ok(NodeRow {
                node: int(&f[0])?,
                birth: int(&f[1])?,
                k_in: int(&f[2])?,
                k_out: int(&f[3])?,
                s_in: real(&f[4])?,
                s_out: real(&f[5])?,
            })
        })
        .collect()
}

pub fn write_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    out!(w, path, "# node\t{}", traj.node);
    out!(w, path, "# birth\t{}", traj.birth);
    out!(w, path, "# t\ts_in\tk_in");
    for p in &traj.points {
        out!(w, path, "{}\t{}\t{}", p.t, format_g17(p.s_in), p.k_in);
    }
    finish(w, path)
}

pub fn read_trajectory(path: &Path) -> Result<Vec<(usize, f64, usize)>> {
    read_rows(path)?
        .into_iter()
        .map(|(lineno, f)| {
            let bad = || parse_err(path, lineno, "expected t<TAB>s_in<TAB>k_in");
            if f.len() != 3 {
                return Err(bad());
            }
            Ok((
                f[0].parse().map_err(|_| bad())?,
                f[1].parse().map_err(|_| bad())?,
                f[2].parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// Writes `class<TAB>count<TAB><value_name><TAB>reliable` rows; `reliable`
/// is 0 for classes below [`crate::analysis::RELIABLE_CLASS_SIZE`].
pub fn write_spectrum(table: &SpectrumTable, value_name: &str, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    out!(w, path, "# class\tcount\t{value_name}\treliable");
    for r in &table.rows {
        out!(
            w,
            path,
            "{}\t{}\t{}\t{}",
            format_g17(r.class),
            r.count,
            format_g17(r.mean),
            u8::from(r.is_reliable())
        );
    }
    finish(w, path)
}

/// Writes `key<TAB>value` lines.
pub fn write_summary(entries: &[(String, f64)], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    out!(w, path, "# key\tvalue");
    for (k, v) in entries {
        out!(w, path, "{k}\t{}", format_g17(*v));
    }
    finish(w, path)
}

pub fn read_summary(path: &Path) -> Result<Vec<(String, f64)>> {
    read_rows(path)?
        .into_iter()
        .map(|(lineno, f)| {
            if f.len() != 2 {
                return Err(parse_err(path, lineno, "expected key<TAB>value"));
            }
            let v = f[1]
                .parse()
                .map_err(|_| parse_err(path, lineno, format!("bad value {:?}", f[1])))?;
            Ok((f[0].clone(), v))
        })
        .collect()
}

fn read_rows(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        rows.push((idx + 1, line.split('\t').map(str::to_owned).collect()));
    }
    Ok(rows)
}
