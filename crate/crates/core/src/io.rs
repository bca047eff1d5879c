//! File formats and byte-stable JSON output.
//!
//! Site indices are 1-based in every file. Complex numbers are `[re, im]`
//! pairs. Floats are written with 17 significant digits; non-finite values
//! become `null`.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::feasibility::{Budgets, SamplingScheme};
use crate::hardy::{DiskSequence, SequenceFamily, WeightedVector};
use crate::matrix::{ComplexMatrix, C64};
use crate::sampling::{NoiseMeta, TimeSpaceSamples};

/// `{"rows": n, "cols": m, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<C64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixFile {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: m.row_major_entries(),
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_row_major(self.rows, self.cols, self.entries)
    }
}

/// `{"B": matrix, "J": matrix}` with `A* = B^{-1} J B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationFile {
    #[serde(rename = "B")]
    pub basis: MatrixFile,
    #[serde(rename = "J")]
    pub jordan: MatrixFile,
}

/// `{"omega": [i, ...], "budgets": [l_i, ...]}` or `{"omega": [...], "L": n}`;
/// with neither budget field every site gets an unlimited budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub omega: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<usize>>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
}

impl SchemeFile {
    pub fn from_scheme(s: &SamplingScheme) -> Self {
        let omega = s.omega().iter().map(|i| i + 1).collect();
        match s.budgets() {
            Budgets::Uniform(l) => SchemeFile {
                omega,
                budgets: None,
                l: Some(*l),
            },
            Budgets::PerSite(b) => SchemeFile {
                omega,
                budgets: Some(b.clone()),
                l: None,
            },
            Budgets::Unlimited => SchemeFile {
                omega,
                budgets: None,
                l: None,
            },
        }
    }

    pub fn into_scheme(self) -> Result<SamplingScheme> {
        if self.omega.contains(&0) {
            return Err(Error::InvalidScheme("site indices are 1-based".into()));
        }
        let omega = self.omega.iter().map(|i| i - 1).collect();
        let budgets = match (self.budgets, self.l) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidScheme(
                    "give either \"budgets\" or \"L\", not both".into(),
                ))
            }
            (Some(b), None) => Budgets::PerSite(b),
            (None, Some(l)) => Budgets::Uniform(l),
            (None, None) => Budgets::Unlimited,
        };
        SamplingScheme::new(omega, budgets)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseFile {
    pub sigma: f64,
    pub seed: u64,
}

/// `{"scheme": ..., "values": [[re, im], ...], "noise": {...} | null}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesFile {
    pub scheme: SchemeFile,
    pub values: Vec<C64>,
    #[serde(default)]
    pub noise: Option<NoiseFile>,
}

impl SamplesFile {
    pub fn from_samples(s: &TimeSpaceSamples) -> Self {
        SamplesFile {
            scheme: SchemeFile::from_scheme(&s.scheme),
            values: s.values.clone(),
            noise: s.noise.map(|n| NoiseFile {
                sigma: n.sigma,
                seed: n.seed,
            }),
        }
    }

    pub fn into_samples(self) -> Result<TimeSpaceSamples> {
        Ok(TimeSpaceSamples {
            scheme: self.scheme.into_scheme()?,
            values: self.values,
            noise: self.noise.map(|n| NoiseMeta {
                sigma: n.sigma,
                seed: n.seed,
            }),
        })
    }
}

/// `{"lambdas": [[re, im], ...], "b": [[re, im], ...] | null}`.
///
/// The optional `complements` field gives `1 - lambda_k` directly, for
/// points too close to 1 to be represented as `lambda_k` in binary64; when
/// present it replaces `lambdas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    #[serde(default)]
    pub lambdas: Vec<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complements: Option<Vec<C64>>,
    #[serde(default)]
    pub b: Option<Vec<C64>>,
}

/// A sequence file or a generator specification.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SequenceSource {
    Family(SequenceFamily),
    Explicit(SequenceFile),
}

impl SequenceFile {
    pub fn into_parts(self) -> Result<(DiskSequence, Option<WeightedVector>)> {
        let seq = match self.complements {
            Some(c) => {
                if !self.lambdas.is_empty() {
                    return Err(Error::Parse(
                        "give either \"lambdas\" or \"complements\", not both".into(),
                    ));
                }
                DiskSequence::from_complements(c)?
            }
            None => DiskSequence::new(self.lambdas)?,
        };
        let b = self.b.map(WeightedVector::new).transpose()?;
        Ok((seq, b))
    }
}

/// A complex vector, either bare (`[[re, im], ...]`) or as `{"values": [...]}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum VectorFile {
    Bare(Vec<C64>),
    Wrapped { values: Vec<C64> },
}

impl VectorFile {
    pub fn into_values(self) -> Vec<C64> {
        match self {
            VectorFile::Bare(v) | VectorFile::Wrapped { values: v } => v,
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses JSON, reporting line and column on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

/// Plain numeric grid, one matrix row per line, comma separated.
pub fn parse_csv_matrix(text: &str, origin: &str) -> Result<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    Error::Parse(format!(
                        "{origin}: line {line}, column {}: not a number: {field:?}",
                        col + 1
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!(
                    "{origin}: line {line}: expected {} fields, found {}",
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse(format!("{origin}: no rows")));
    }
    ComplexMatrix::from_real_rows(&rows)
}

/// Reads a matrix from JSON, or from CSV when the extension is `.csv`.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = read_text(path)?;
    let origin = path.display().to_string();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_csv_matrix(&text, &origin)
    } else {
        parse_json::<MatrixFile>(&text, &origin)?.into_matrix()
    }
}

/// Pretty JSON with floats in `{:.16e}` form (17 significant digits).
struct FixedDigits<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes `value` as pretty JSON with fixed float formatting and a
/// trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        FixedDigits {
            inner: PrettyFormatter::new(),
        },
    );
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Formats a float the way the JSON writer does.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".into()
    }
}
