use std::fs;
use std::path::Path;

use crate::born::{FourierSamples, XiGrid};
use crate::dtn::DtnSpectrum;
use crate::error::{Error, Result};
use crate::fourier::RadialSamples;
use crate::highprec::{BigReal, Precision};
use crate::profiles::ProfileKind;

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("{}: {other:?}", path.display())),
    }
}

/// Shortest round-trip representation of an f64; −0 prints as 0.
pub fn fmt_f64(v: f64) -> String {
    format!("{:e}", v + 0.0)
}

/// Writes a header and rows; creates parent directories.
pub fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows(path: &Path, expected: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got.len() < expected.len() || got[..expected.len()] != *expected {
        return Err(Error::parse(1, 1, format!("{}: expected header {}", path.display(), expected.join(","))));
    }
    r.records().map(|rec| rec.map_err(|e| csv_err(path, e))).collect()
}

/// `k,lambda,shift` with λ_k − k/R in the last column.
pub fn write_spectrum_csv(path: &Path, spec: &DtnSpectrum) -> Result<()> {
    let rows = spec
        .lambdas
        .iter()
        .enumerate()
        .map(|(k, l)| vec![k.to_string(), l.to_decimal(), spec.shift(k).to_decimal()]);
    write_rows(path, &["k", "lambda", "shift"], rows)
}

pub fn read_spectrum_csv(path: &Path, kind: ProfileKind, radius: &BigReal, prec: Precision) -> Result<DtnSpectrum> {
    let rows = read_rows(path, &["k", "lambda", "shift"])?;
    let mut lambdas = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let k: usize = row.get(0).unwrap_or("").trim().parse().map_err(|_| Error::parse(line, 1, "bad degree"))?;
        if k != i {
            return Err(Error::parse(line, 1, format!("degrees must run 0, 1, 2, …; found {k}")));
        }
        let lam = row.get(1).ok_or_else(|| Error::parse(line, 2, "missing lambda"))?;
        lambdas.push(BigReal::parse_decimal(lam, prec).map_err(|e| Error::parse(line, 2, e.to_string()))?);
    }
    if lambdas.is_empty() {
        return Err(Error::parse(2, 1, "spectrum file has no rows"));
    }
    Ok(DtnSpectrum { kind, radius: BigReal::with_precision(radius.as_float(), prec), lambdas, precision: prec })
}

/// `xi,value` with decimal strings.
pub fn write_fourier_csv(path: &Path, f: &FourierSamples) -> Result<()> {
    let rows = f.values.iter().enumerate().map(|(j, v)| vec![f.xi(j).to_decimal(), v.to_decimal()]);
    write_rows(path, &["xi", "value"], rows)
}

/// Reads `xi,value`; the grid must start at 0 and be uniform.
pub fn read_fourier_csv(path: &Path, prec: Precision) -> Result<FourierSamples> {
    let rows = read_rows(path, &["xi", "value"])?;
    let mut xs = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let field = |c: usize| row.get(c).ok_or_else(|| Error::parse(line, c + 1, "missing field"));
        xs.push(BigReal::parse_decimal(field(0)?, prec).map_err(|e| Error::parse(line, 1, e.to_string()))?);
        values.push(BigReal::parse_decimal(field(1)?, prec).map_err(|e| Error::parse(line, 2, e.to_string()))?);
    }
    if xs.len() < 2 || !xs[0].is_zero() {
        return Err(Error::GridMismatch("ξ-grid must start at 0 and have at least two nodes".into()));
    }
    let h = xs[1].clone();
    for (j, x) in xs.iter().enumerate() {
        let expect = h.to_f64() * j as f64;
        if (x.to_f64() - expect).abs() > 1e-9 * expect.max(1.0) {
            return Err(Error::GridMismatch(format!("ξ node {j} is {} instead of {expect}", x.to_f64())));
        }
    }
    Ok(FourierSamples { grid: XiGrid::new(h, xs.len())?, values, d: 3, label: "file".into() })
}

/// `r,<label>…,in_ball` over the common grid of `columns`.
pub fn write_radial_csv(path: &Path, columns: &[&RadialSamples], radius: f64) -> Result<()> {
    let first = columns.first().ok_or_else(|| Error::InvalidArgument("no columns".into()))?;
    let n = columns.iter().map(|c| c.len()).min().unwrap_or(0);
    let mut header: Vec<&str> = vec!["r"];
    header.extend(columns.iter().map(|c| c.label.as_str()));
    header.push("in_ball");
    let rows = (0..n).map(|m| {
        let r = first.r(m);
        let mut row = vec![fmt_f64(r)];
        row.extend(columns.iter().map(|c| fmt_f64(c.values[m])));
        row.push(if r <= radius * (1.0 + 1e-12) { "1" } else { "0" }.into());
        row
    });
    write_rows(path, &header, rows)
}
