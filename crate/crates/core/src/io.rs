//! Line-oriented text formats for matrices, certificates and partitions.
//!
//! Every file starts with `#`-prefixed `key=value` header lines. Matrix
//! bodies hold one row per line with entries written as `re,im` and
//! separated by spaces. Floats are written either in shortest round-trip
//! decimal form or as C99 hex floats (`--exact`), both of which parse back to
//! the identical bit pattern.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use crate::counterexample::{CounterexampleFrame, FrameParams, Rational};
use crate::frame::IndexSet;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::partition::Partition;
use crate::witness::RieszWitness;
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const MATRIX_FORMAT: &str = "paving-matrix";
pub const CERTIFICATE_FORMAT: &str = "paving-certificate";
pub const PARTITION_FORMAT: &str = "paving-partition";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Encoding {
    #[default]
    Decimal,
    Hex,
}

impl Encoding {
    fn name(self) -> &'static str {
        match self {
            Self::Decimal => "decimal",
            Self::Hex => "hex",
        }
    }

    pub fn float(self, x: f64) -> String {
        match self {
            Self::Decimal => format!("{x:?}"),
            Self::Hex => hex_float(x),
        }
    }

    fn complex(self, z: Complex64) -> String {
        format!("{},{}", self.float(z.re), self.float(z.im))
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "decimal" => Ok(Self::Decimal),
            "hex" => Ok(Self::Hex),
            other => Err(format!("unknown encoding {other:?}")),
        }
    }
}

/// C99 hex-float text, e.g. `0x1.8p-1` for 0.75.
pub fn hex_float(x: f64) -> String {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0x7ff {
        // Never produced by validated matrices; kept for completeness.
        return format!("{x}");
    }
    let (lead, e) = if exp == 0 {
        if mant == 0 {
            return format!("{sign}0x0p+0");
        }
        (0, -1022)
    } else {
        (1, exp - 1023)
    };
    let digits = format!("{mant:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{e:+}")
    }
}

pub fn parse_hex_float(s: &str) -> Option<f64> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let body = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X"))?;
    let (mantissa, exponent) = body.split_once(['p', 'P'])?;
    let e: i64 = exponent.parse().ok()?;
    let (lead, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.len() > 13 || !frac.chars().all(|c| c.is_ascii_hexdigit()) {
        return None;
    }
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(&format!("{frac:0<13}"), 16).ok()?
    };
    let magnitude = match lead {
        "1" => {
            let field = e + 1023;
            if !(1..=2046).contains(&field) {
                return None;
            }
            ((field as u64) << 52) | frac_bits
        }
        "0" if frac_bits == 0 => 0,
        "0" if e == -1022 => frac_bits,
        _ => return None,
    };
    let sign = if negative { 1u64 << 63 } else { 0 };
    Some(f64::from_bits(sign | magnitude))
}

/// Parses decimal or hex-float text.
pub fn parse_float(s: &str) -> Option<f64> {
    let t = s.trim_start_matches(['-', '+']);
    if t.starts_with("0x") || t.starts_with("0X") {
        parse_hex_float(s)
    } else {
        s.parse().ok()
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let (re, im) = s.split_once(',')?;
    Some(Complex64::new(parse_float(re)?, parse_float(im)?))
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// `#`-prefixed header lines and the remaining body lines, with 1-based
/// line numbers.
struct Sections<'a> {
    header: Vec<(usize, String, String)>,
    body: Vec<(usize, &'a str)>,
}

fn split_sections(text: &str) -> Result<Sections<'_>> {
    let mut header = Vec::new();
    let mut body = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest
                .trim()
                .split_once('=')
                .ok_or_else(|| perr(line_no, "header line without '='"))?;
            header.push((line_no, k.trim().to_string(), v.trim().to_string()));
        } else {
            body.push((line_no, line));
        }
    }
    Ok(Sections { header, body })
}

/// Reads the `format` header value, if present.
pub fn detect_format(text: &str) -> Option<String> {
    let sections = split_sections(text).ok()?;
    sections
        .header
        .into_iter()
        .find(|(_, k, _)| k == "format")
        .map(|(_, _, v)| v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Stack,
    Projection,
    Block(usize),
    Custom(String),
}

impl Construction {
    pub fn id(&self) -> String {
        match self {
            Self::Stack => "stack".into(),
            Self::Projection => "projection".into(),
            Self::Block(k) => format!("block:{k}"),
            Self::Custom(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Self {
        match s {
            "stack" => Self::Stack,
            "projection" => Self::Projection,
            other => other
                .strip_prefix("block:")
                .and_then(|k| k.parse().ok())
                .map_or_else(|| Self::Custom(other.to_string()), Self::Block),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub construction: Construction,
    pub encoding: Encoding,
    /// Further metadata kept in order, e.g. `delta_1=1/2`.
    pub extra: Vec<(String, String)>,
    pub matrix: ComplexMatrix,
}

impl MatrixFile {
    /// A file for a matrix derived from `frame`, carrying the exact `δ_k`.
    pub fn for_frame(
        frame: &CounterexampleFrame,
        construction: Construction,
        matrix: ComplexMatrix,
        encoding: Encoding,
    ) -> Self {
        let params = frame.params();
        let mut extra: Vec<(String, String)> = frame
            .deltas_exact()
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("delta_{}", i + 1), d.to_string()))
            .collect();
        extra.push(("generator".into(), generator()));
        Self {
            r: Some(params.r()),
            n: Some(params.n()),
            construction,
            encoding,
            extra,
            matrix,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# format={MATRIX_FORMAT}");
        let _ = writeln!(out, "# version={FORMAT_VERSION}");
        let _ = writeln!(out, "# rows={}", self.matrix.rows());
        let _ = writeln!(out, "# cols={}", self.matrix.cols());
        if let Some(r) = self.r {
            let _ = writeln!(out, "# r={r}");
        }
        if let Some(n) = self.n {
            let _ = writeln!(out, "# n={n}");
        }
        let _ = writeln!(out, "# construction={}", self.construction.id());
        let _ = writeln!(out, "# encoding={}", self.encoding.name());
        for (k, v) in &self.extra {
            let _ = writeln!(out, "# {k}={v}");
        }
        for i in 0..self.matrix.rows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|&z| self.encoding.complex(z)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let sections = split_sections(text)?;
        let mut rows = None;
        let mut cols = None;
        let mut r = None;
        let mut n = None;
        let mut construction = Construction::Custom("unknown".into());
        let mut encoding = Encoding::Decimal;
        let mut format_seen = false;
        let mut extra = Vec::new();
        for (line, k, v) in sections.header {
            let num = |v: &str| v.parse::<usize>().map_err(|_| perr(line, format!("bad {k}: {v:?}")));
            match k.as_str() {
                "format" if v == MATRIX_FORMAT => format_seen = true,
                "format" => return Err(perr(line, format!("not a matrix file: format={v}"))),
                "version" if v == FORMAT_VERSION.to_string() => {}
                "version" => return Err(perr(line, format!("unsupported version {v}"))),
                "rows" => rows = Some(num(&v)?),
                "cols" => cols = Some(num(&v)?),
                "r" => r = Some(num(&v)?),
                "n" => n = Some(num(&v)?),
                "construction" => construction = Construction::parse(&v),
                "encoding" => encoding = v.parse().map_err(|e: String| perr(line, e))?,
                _ => extra.push((k, v)),
            }
        }
        if !format_seen {
            return Err(perr(1, "missing format header"));
        }
        let rows = rows.ok_or_else(|| perr(1, "missing rows header"))?;
        let cols = cols.ok_or_else(|| perr(1, "missing cols header"))?;
        if sections.body.len() != rows {
            return Err(perr(
                sections.body.last().map_or(1, |b| b.0),
                format!("expected {rows} rows, found {}", sections.body.len()),
            ));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (line, text) in sections.body {
            let before = data.len();
            for tok in text.split_whitespace() {
                data.push(parse_complex(tok).ok_or_else(|| perr(line, format!("bad entry {tok:?}")))?);
            }
            if data.len() - before != cols {
                return Err(perr(line, format!("expected {cols} entries, found {}", data.len() - before)));
            }
        }
        let matrix = ComplexMatrix::new(rows, cols, data)?;
        Ok(Self {
            r,
            n,
            construction,
            encoding,
            extra,
            matrix,
        })
    }
}

pub fn generator() -> String {
    format!("paving {}", env!("CARGO_PKG_VERSION"))
}

/// A self-contained witness: the frame parameters, the partition and the
/// certificate itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateFile {
    pub r: usize,
    pub n: usize,
    pub partition_source: String,
    pub partition: Partition,
    pub k: usize,
    pub j: usize,
    pub support: Vec<usize>,
    pub coefficients: ComplexVector,
    pub achieved: f64,
    pub bound_exact: Rational,
    pub bound: f64,
    pub dft_tail_norm_sq: f64,
    pub dft_norm_sq: f64,
    pub constraint_residual: f64,
    pub verdict: bool,
    pub encoding: Encoding,
}

impl CertificateFile {
    pub fn new(
        witness: &RieszWitness,
        partition: &Partition,
        partition_source: impl Into<String>,
        verdict: bool,
        encoding: Encoding,
    ) -> Self {
        Self {
            r: witness.r,
            n: witness.n,
            partition_source: partition_source.into(),
            partition: partition.clone(),
            k: witness.k,
            j: witness.j,
            support: witness.support.one_based().to_vec(),
            coefficients: witness.coefficients.clone(),
            achieved: witness.achieved,
            bound_exact: witness.bound_exact,
            bound: witness.bound,
            dft_tail_norm_sq: witness.dft_tail_norm_sq,
            dft_norm_sq: witness.dft_norm_sq,
            constraint_residual: witness.constraint_residual,
            verdict,
            encoding,
        }
    }

    pub fn witness(&self) -> Result<RieszWitness> {
        let params = FrameParams::new(self.r, self.n)?;
        Ok(RieszWitness {
            r: self.r,
            n: self.n,
            k: self.k,
            j: self.j,
            support: IndexSet::new(self.support.clone(), params.vectors())?,
            coefficients: self.coefficients.clone(),
            achieved: self.achieved,
            bound: self.bound,
            bound_exact: self.bound_exact,
            dft_tail_norm_sq: self.dft_tail_norm_sq,
            dft_norm_sq: self.dft_norm_sq,
            constraint_residual: self.constraint_residual,
        })
    }

    pub fn to_text(&self) -> String {
        let e = self.encoding;
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "# format={CERTIFICATE_FORMAT}");
        let _ = writeln!(out, "# version={FORMAT_VERSION}");
        let _ = writeln!(out, "# encoding={}", e.name());
        let _ = writeln!(out, "# generator={}", generator());
        let _ = writeln!(out, "r={}", self.r);
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "partition_source={}", self.partition_source);
        let _ = writeln!(out, "partition={}", self.partition);
        let _ = writeln!(out, "k={}", self.k);
        let _ = writeln!(out, "j={}", self.j);
        let _ = writeln!(out, "support={}", join(&self.support));
        let coeffs: Vec<String> = self.coefficients.iter().map(|&z| e.complex(z)).collect();
        let _ = writeln!(out, "coefficients={}", coeffs.join(" "));
        let _ = writeln!(out, "achieved={}", e.float(self.achieved));
        let _ = writeln!(out, "bound={}", self.bound_exact);
        let _ = writeln!(out, "bound_float={}", e.float(self.bound));
        let _ = writeln!(out, "dft_tail_norm_sq={}", e.float(self.dft_tail_norm_sq));
        let _ = writeln!(out, "dft_norm_sq={}", e.float(self.dft_norm_sq));
        let _ = writeln!(out, "constraint_residual={}", e.float(self.constraint_residual));
        let _ = writeln!(out, "verdict={}", self.verdict);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let sections = split_sections(text)?;
        let mut encoding = Encoding::Decimal;
        let mut format_seen = false;
        for (line, k, v) in &sections.header {
            match k.as_str() {
                "format" if v == CERTIFICATE_FORMAT => format_seen = true,
                "format" => return Err(perr(*line, format!("not a certificate: format={v}"))),
                "version" if *v != FORMAT_VERSION.to_string() => {
                    return Err(perr(*line, format!("unsupported version {v}")))
                }
                "encoding" => encoding = v.parse().map_err(|e: String| perr(*line, e))?,
                _ => {}
            }
        }
        if !format_seen {
            return Err(perr(1, "missing format header"));
        }
        let mut fields = std::collections::HashMap::new();
        for (line, text) in &sections.body {
            let (k, v) = text
                .split_once('=')
                .ok_or_else(|| perr(*line, "expected key=value"))?;
            fields.insert(k.trim().to_string(), (*line, v.trim().to_string()));
        }
        let get = |key: &str| -> Result<(usize, &str)> {
            fields
                .get(key)
                .map(|(l, v)| (*l, v.as_str()))
                .ok_or_else(|| perr(0, format!("missing field {key}")))
        };
        let int = |key: &str| -> Result<usize> {
            let (l, v) = get(key)?;
            v.parse().map_err(|_| perr(l, format!("bad {key}: {v:?}")))
        };
        let float = |key: &str| -> Result<f64> {
            let (l, v) = get(key)?;
            parse_float(v).ok_or_else(|| perr(l, format!("bad {key}: {v:?}")))
        };
        let ints = |key: &str| -> Result<Vec<usize>> {
            let (l, v) = get(key)?;
            v.split_whitespace()
                .map(|t| t.parse().map_err(|_| perr(l, format!("bad {key} entry {t:?}"))))
                .collect()
        };
        let r = int("r")?;
        let partition = Partition::new(r, ints("partition")?)?;
        let (cl, cv) = get("coefficients")?;
        let coefficients = cv
            .split_whitespace()
            .map(|t| parse_complex(t).ok_or_else(|| perr(cl, format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let (bl, bv) = get("bound")?;
        let bound_exact: Rational = bv.parse().map_err(|_| perr(bl, format!("bad bound {bv:?}")))?;
        let (vl, vv) = get("verdict")?;
        Ok(Self {
            r,
            n: int("n")?,
            partition_source: get("partition_source")?.1.to_string(),
            partition,
            k: int("k")?,
            j: int("j")?,
            support: ints("support")?,
            coefficients: ComplexVector(coefficients),
            achieved: float("achieved")?,
            bound_exact,
            bound: float("bound_float")?,
            dft_tail_norm_sq: float("dft_tail_norm_sq")?,
            dft_norm_sq: float("dft_norm_sq")?,
            constraint_residual: float("constraint_residual")?,
            verdict: vv.parse().map_err(|_| perr(vl, format!("bad verdict {vv:?}")))?,
            encoding,
        })
    }
}

/// Plain partition file: optional `#` header, then whitespace-separated
/// labels.
pub fn partition_to_text(p: &Partition) -> String {
    format!(
        "# format={PARTITION_FORMAT}\n# r={}\n# size={}\n{p}\n",
        p.arity(),
        p.len()
    )
}

pub fn parse_partition(text: &str, arity: usize) -> Result<Partition> {
    let sections = split_sections(text)?;
    let mut labels = Vec::new();
    for (line, body) in sections.body {
        for tok in body.split_whitespace() {
            labels.push(tok.parse().map_err(|_| perr(line, format!("bad label {tok:?}")))?);
        }
    }
    Partition::new(arity, labels)
}
