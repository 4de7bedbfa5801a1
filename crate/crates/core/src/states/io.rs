//! State files: `{"dims":[dA,dB],"re":[[...]],"im":[[...]]}`, row-major.
//!
//! The writer emits every number with 17 significant digits so that files
//! round-trip bit-exactly.

use num_complex::Complex64;
use serde::Deserialize;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Deserialize)]
struct StateFile {
    dims: [usize; 2],
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Parses and validates a state file.
pub fn parse_state_json(text: &str) -> Result<DensityMatrix> {
    let f: StateFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let n = f.dims[0] * f.dims[1];
    if f.re.len() != n || f.re.iter().any(|r| r.len() != n) {
        return Err(Error::Format(format!("\"re\" must be {n}x{n}")));
    }
    if let Some(im) = &f.im {
        if im.len() != n || im.iter().any(|r| r.len() != n) {
            return Err(Error::Format(format!("\"im\" must be {n}x{n}")));
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let im = f.im.as_ref().map_or(0.0, |m| m[i][j]);
            entries.push(Complex64::new(f.re[i][j], im));
        }
    }
    let m = ComplexMatrix::from_row_major(n, n, &entries)?;
    DensityMatrix::new(m, (f.dims[0], f.dims[1]))
}

/// `{:.16e}` gives 17 significant digits, which is valid JSON.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows(out: &mut String, m: &ComplexMatrix, part: impl Fn(Complex64) -> f64) {
    out.push('[');
    for i in 0..m.n_rows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.n_cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format_f64(part(m.get(i, j))));
        }
        out.push(']');
    }
    out.push(']');
}

pub fn state_to_json(s: &DensityMatrix) -> String {
    let (da, db) = s.dims();
    let mut out = format!("{{\"dims\":[{da},{db}],\"re\":");
    write_rows(&mut out, s.matrix(), |z| z.re);
    out.push_str(",\"im\":");
    write_rows(&mut out, s.matrix(), |z| z.im);
    out.push_str("}\n");
    out
}
