//! Interchange formats: coefficient JSON, sampled boundary signals (CSV) and
//! the CSV residual report.
//!
//! ```text
//! {"type":"disc","coeffs":[[re,im],...]}                 c_0..c_N
//! {"type":"boundary","min_k":-N,"coeffs":[[re,im],...]}  c_{min_k}..
//! ```

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::engine::ExpansionResult;
use crate::error::{Error, Result};
use crate::hardy::{BoundaryFunction, DiscFunction};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionRecord {
    Disc { coeffs: Vec<Complex64> },
    Boundary { min_k: i64, coeffs: Vec<Complex64> },
}

impl From<DiscFunction> for FunctionRecord {
    fn from(f: DiscFunction) -> Self {
        FunctionRecord::Disc { coeffs: f.into_coeffs() }
    }
}

impl From<BoundaryFunction> for FunctionRecord {
    fn from(f: BoundaryFunction) -> Self {
        FunctionRecord::Boundary {
            min_k: f.min_k(),
            coeffs: f.coeffs().to_vec(),
        }
    }
}

impl TryFrom<FunctionRecord> for DiscFunction {
    type Error = Error;

    fn try_from(r: FunctionRecord) -> Result<Self> {
        match r {
            FunctionRecord::Disc { coeffs } => DiscFunction::from_coeffs(coeffs),
            FunctionRecord::Boundary { .. } => Err(Error::MalformedInput("expected a disc function".into())),
        }
    }
}

impl TryFrom<FunctionRecord> for BoundaryFunction {
    type Error = Error;

    fn try_from(r: FunctionRecord) -> Result<Self> {
        match r {
            FunctionRecord::Boundary { min_k, coeffs } => BoundaryFunction::from_two_sided(min_k, coeffs),
            FunctionRecord::Disc { .. } => Err(Error::MalformedInput("expected a boundary function".into())),
        }
    }
}

/// A function read from disk.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    Disc(DiscFunction),
    Boundary(BoundaryFunction),
}

impl Signal {
    pub fn to_json(&self) -> Result<String> {
        let record: FunctionRecord = match self.clone() {
            Signal::Disc(f) => f.into(),
            Signal::Boundary(f) => f.into(),
        };
        Ok(serde_json::to_string(&record)?)
    }
}

/// Parses coefficient JSON.
pub fn parse_json(text: &str) -> Result<Signal> {
    let record: FunctionRecord = serde_json::from_str(text)?;
    Ok(match record {
        r @ FunctionRecord::Disc { .. } => Signal::Disc(r.try_into()?),
        r @ FunctionRecord::Boundary { .. } => Signal::Boundary(r.try_into()?),
    })
}

/// Parses `M` uniform samples `f(e^{2πij/M})`, one per line as `re` or
/// `re,im`; blank lines and `#` comments are skipped.
pub fn parse_samples(text: &str) -> Result<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut samples = Vec::new();
    let mut width = None;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() > 2 {
            return Err(Error::MalformedInput(format!("sample row {} has {} columns", line + 1, record.len())));
        }
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(Error::MalformedInput(format!("sample row {} has inconsistent width", line + 1)));
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| Error::MalformedInput(format!("sample row {}: cannot parse {s:?}", line + 1)))?;
            if !v.is_finite() {
                return Err(Error::MalformedInput(format!("sample row {} is not finite", line + 1)));
            }
            Ok(v)
        };
        let re = parse(&record[0])?;
        let im = if record.len() == 2 { parse(&record[1])? } else { 0.0 };
        samples.push(Complex64::new(re, im));
    }
    Ok(samples)
}

/// Fourier coefficients `c_k`, `|k| <= min(M/2 - 1, max_band)`, of uniform samples.
pub fn samples_to_boundary(samples: &[Complex64], max_band: usize) -> Result<BoundaryFunction> {
    let m = samples.len();
    if m < 4 {
        return Err(Error::MalformedInput(format!("need at least 4 samples, got {m}")));
    }
    let band = (m / 2 - 1).min(max_band);
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let mut out = BoundaryFunction::zeros(band);
    for k in -(band as i64)..=band as i64 {
        let idx = k.rem_euclid(m as i64) as usize;
        out.set(k, buf[idx] * scale);
    }
    Ok(out)
}

/// Reads coefficient JSON or a CSV of uniform samples. Sampled data is
/// converted to Fourier coefficients with band at most `max_band`.
pub fn ingest(path: &Path, max_band: usize) -> Result<Signal> {
    let text = std::fs::read_to_string(path)?;
    ingest_str(&text, max_band)
}

pub fn ingest_str(text: &str, max_band: usize) -> Result<Signal> {
    let trimmed = text.trim_start();
    if trimmed.is_empty() {
        return Err(Error::MalformedInput("input is empty".into()));
    }
    if trimmed.starts_with('{') {
        parse_json(trimmed)
    } else {
        let samples = parse_samples(text)?;
        if samples.is_empty() {
            return Err(Error::MalformedInput("no samples found".into()));
        }
        Ok(Signal::Boundary(samples_to_boundary(&samples, max_band)?))
    }
}

/// Column order of the residual report.
pub const REPORT_HEADER: [&str; 8] = ["n", "q_re", "q_im", "order", "coeff_re", "coeff_im", "coeff_abs", "residual"];

/// Writes one row per selected term.
pub fn write_residual_report<W: Write>(result: &ExpansionResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for (i, (p, c)) in result.params().iter().zip(&result.coefficients).enumerate() {
        w.write_record([
            (i + 1).to_string(),
            p.q.re.to_string(),
            p.q.im.to_string(),
            p.order.to_string(),
            c.re.to_string(),
            c.im.to_string(),
            c.norm().to_string(),
            result.residual_norms[i + 1].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn residual_report(result: &ExpansionResult) -> Result<String> {
    let mut buf = Vec::new();
    write_residual_report(result, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::MalformedInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cosine_samples() {
        let m = 64;
        let text: String = (0..m)
            .map(|j| format!("{}\n", 2.0 * (std::f64::consts::TAU * j as f64 / m as f64).cos()))
            .collect();
        let Signal::Boundary(f) = ingest_str(&text, 256).unwrap() else {
            panic!("expected boundary data");
        };
        assert_eq!(f.trunc(), 31);
        for k in -31..=31i64 {
            let expect = if k.abs() == 1 { 1.0 } else { 0.0 };
            assert!((f.coeff(k) - c(expect, 0.0)).norm() <= 1e-12, "k={k}");
        }
    }

    #[test]
    fn json_schema_shapes() {
        let d = DiscFunction::from_coeffs(vec![c(1.0, 0.0), c(0.5, -0.25)]).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"type":"disc","coeffs":[[1.0,0.0],[0.5,-0.25]]}"#
        );
        let b = BoundaryFunction::from_two_sided(-1, vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"type":"boundary","min_k":-1,"coeffs":[[2.0,0.0],[0.0,0.0],[0.0,1.0]]}"#
        );
        let back: BoundaryFunction = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(ingest_str("", 8), Err(Error::MalformedInput(_))));
        assert!(matches!(ingest_str("   \n", 8), Err(Error::MalformedInput(_))));
        assert!(ingest_str("1,2\n3\n4,5\n6,7\n", 8).is_err());
        assert!(ingest_str("1\n2\nx\n4\n", 8).is_err());
        assert!(ingest_str("1\n2\nNaN\n4\n", 8).is_err());
        assert!(ingest_str(r#"{"type":"disc","coeffs":[]}"#, 8).is_err());
        assert!(ingest_str(r#"{"type":"disc"}"#, 8).is_err());
        assert!(ingest_str(r#"{"type":"wave","coeffs":[[1,0]]}"#, 8).is_err());
        assert!(ingest_str("1\n2\n", 8).is_err());
    }

    #[test]
    fn disc_json_round_trip_is_byte_exact() {
        let text = r#"{"type":"disc","coeffs":[[0.1,0.2],[-3.0e-17,1.0],[0.30000000000000004,0.0]]}"#;
        let s = ingest_str(text, 8).unwrap();
        let once = s.to_json().unwrap();
        let twice = ingest_str(&once, 8).unwrap().to_json().unwrap();
        assert_eq!(once, twice);
        assert_eq!(ingest_str(&once, 8).unwrap(), s);
    }
}
