//! CSV and JSON file formats.
//!
//! * signals: `index,re,im`
//! * matrices: one row per `u`, columns `v0.re,v0.im,v1.re,...`
//! * operators: a one-line JSON header `{"representation": ..., "n": N}`
//!   followed by a matrix CSV
//! * spectrograms: one row per frequency, columns `t0,t1,...`
//! * grid functions: a `# half_width=L,step=Δ` line, then `t,re,im`
//!
//! Floats are written in shortest round-trip form, so reading back is exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix2D, Signal};
use crate::error::{Error, Result};
use crate::gauss::GridFunction;

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: not a number: {field:?}")))
}

fn record_field<'a>(rec: &'a csv::StringRecord, i: usize, line: usize) -> Result<&'a str> {
    rec.get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column {i}")))
}

pub fn write_signal<W: Write>(w: W, f: &Signal) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "re", "im"])?;
    for (i, z) in f.iter().enumerate() {
        out.write_record([i.to_string(), z.re.to_string(), z.im.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Rows may come in any order but must cover `0..N` exactly once.
pub fn read_signal<R: Read>(r: R) -> Result<Signal> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut entries = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line + 2;
        let idx: usize = record_field(&rec, 0, line)?
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {line}: bad index")))?;
        let re = parse_f64(record_field(&rec, 1, line)?, line)?;
        let im = parse_f64(record_field(&rec, 2, line)?, line)?;
        entries.push((idx, Complex64::new(re, im)));
    }
    let n = entries.len();
    let mut values = vec![None; n];
    for (idx, z) in entries {
        match values.get_mut(idx) {
            Some(slot @ None) => *slot = Some(z),
            Some(Some(_)) => return Err(Error::Parse(format!("duplicate index {idx}"))),
            None => return Err(Error::Parse(format!("index {idx} out of range 0..{n}"))),
        }
    }
    Signal::new(values.into_iter().map(|z| z.expect("every slot filled")).collect())
}

pub fn write_matrix<W: Write>(w: W, m: &Matrix2D) -> Result<()> {
    let n = m.n();
    let mut out = csv::Writer::from_writer(w);
    let header: Vec<String> = (0..n)
        .flat_map(|v| [format!("v{v}.re"), format!("v{v}.im")])
        .collect();
    out.write_record(&header)?;
    for u in 0..n {
        let row: Vec<String> = (0..n)
            .flat_map(|v| {
                let z = m[(u, v)];
                [z.re.to_string(), z.im.to_string()]
            })
            .collect();
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_matrix<R: Read>(r: R) -> Result<Matrix2D> {
    let mut rdr = csv::Reader::from_reader(r);
    let cols = rdr.headers()?.len();
    if cols % 2 != 0 || cols == 0 {
        return Err(Error::Parse(format!(
            "matrix header needs an even, positive number of columns, got {cols}"
        )));
    }
    let n = cols / 2;
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line + 2;
        for v in 0..n {
            let re = parse_f64(record_field(&rec, 2 * v, line)?, line)?;
            let im = parse_f64(record_field(&rec, 2 * v + 1, line)?, line)?;
            data.push(Complex64::new(re, im));
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Parse(format!("expected {n} rows, found {rows}")));
    }
    Matrix2D::from_rows(n, data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Kernel,
    Spreading,
    Mask,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorHeader {
    pub representation: Representation,
    pub n: usize,
}

pub fn write_operator<W: Write>(mut w: W, representation: Representation, m: &Matrix2D) -> Result<()> {
    let header = OperatorHeader {
        representation,
        n: m.n(),
    };
    writeln!(w, "{}", serde_json::to_string(&header)?)?;
    write_matrix(w, m)
}

pub fn read_operator<R: Read>(r: R) -> Result<(OperatorHeader, Matrix2D)> {
    let mut reader = BufReader::new(r);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let header: OperatorHeader = serde_json::from_str(first.trim())?;
    let m = read_matrix(reader)?;
    if m.n() != header.n {
        return Err(Error::LengthMismatch {
            expected: header.n,
            got: m.n(),
        });
    }
    Ok((header, m))
}

/// `values[u][v]` written transposed: row `v`, column `t{u}`.
pub fn write_spectrogram<W: Write>(w: W, values: &[Vec<f64>]) -> Result<()> {
    let n = values.len();
    let mut out = csv::Writer::from_writer(w);
    let header: Vec<String> = (0..n).map(|u| format!("t{u}")).collect();
    out.write_record(&header)?;
    let freqs = values.first().map_or(0, |r| r.len());
    for v in 0..freqs {
        let row: Vec<String> = values.iter().map(|col| col[v].to_string()).collect();
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_spectrogram`], returning `values[u][v]`.
pub fn read_spectrogram<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_reader(r);
    let n = rdr.headers()?.len();
    let mut by_time = vec![Vec::new(); n];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (u, col) in by_time.iter_mut().enumerate() {
            col.push(parse_f64(record_field(&rec, u, line + 2)?, line + 2)?);
        }
    }
    Ok(by_time)
}

/// `index,value` rows.
pub fn write_values<W: Write>(w: W, values: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "value"])?;
    for (i, x) in values.iter().enumerate() {
        out.write_record([i.to_string(), x.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_values<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.records()
        .enumerate()
        .map(|(line, rec)| parse_f64(record_field(&rec?, 1, line + 2)?, line + 2))
        .collect()
}

pub fn write_grid<W: Write>(mut w: W, g: &GridFunction) -> Result<()> {
    writeln!(w, "# half_width={},step={}", g.half_width(), g.step())?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "re", "im"])?;
    for (t, z) in g.points().zip(g.samples()) {
        out.write_record([t.to_string(), z.re.to_string(), z.im.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_grid<R: Read>(r: R) -> Result<GridFunction> {
    let mut reader = BufReader::new(r);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let meta = first
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("grid file must start with '# half_width=..,step=..'".into()))?;
    let (mut half_width, mut step) = (None, None);
    for part in meta.split(',') {
        let (key, value) = part
            .trim()
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad grid header entry {part:?}")))?;
        match key.trim() {
            "half_width" => half_width = Some(parse_f64(value, 1)?),
            "step" => step = Some(parse_f64(value, 1)?),
            other => return Err(Error::Parse(format!("unknown grid header key {other:?}"))),
        }
    }
    let (half_width, step) = half_width
        .zip(step)
        .ok_or_else(|| Error::Parse("grid header needs half_width and step".into()))?;
    let mut rdr = csv::Reader::from_reader(reader);
    let mut samples = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line + 3;
        let re = parse_f64(record_field(&rec, 1, line)?, line)?;
        let im = parse_f64(record_field(&rec, 2, line)?, line)?;
        samples.push(Complex64::new(re, im));
    }
    GridFunction::new(half_width, step, samples)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}
