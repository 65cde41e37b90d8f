//! Dense finite sections of operators in the graded basis, and their file formats.
//!
//! Binary layout (little-endian):
//!
//! | bytes | content |
//! |-------|---------|
//! | 16 | magic `FOCKLAB-MAT` padded with five NUL bytes |
//! | 4  | u32 format version (1) |
//! | 4  | u32 dimension n |
//! | 4  | u32 truncation N |
//! | 8  | f64 domain smoothness |
//! | 8  | f64 codomain smoothness |
//! | 1  | u8 basis code (0 PaperH, 1 BargmannH, 2 Fock) |
//! | 16·L² | row-major entries as (re, im) f64 pairs, L = C(N+n, n) |
//!
//! The CSV layout carries the same header as `# key = value` comment lines
//! followed by `row,col,re,im` records in row-major order.

use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{FockError, Result};
use crate::multi_index::GradedBasis;
use crate::spectral::{Basis, SpectralVector};
use crate::sum::ComplexSum;

pub const MAGIC: &[u8; 16] = b"FOCKLAB-MAT\0\0\0\0\0";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 16 + 4 + 4 + 4 + 8 + 8 + 1;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    basis: Arc<GradedBasis>,
    tag: Basis,
    domain_s: f64,
    codomain_s: f64,
    entries: DMatrix<C64>,
    /// Set when the operator is expected to be unitary: ‖A*A - I‖ on the
    /// interior block should stay below this.
    unitary_tolerance: Option<f64>,
}

impl OperatorMatrix {
    pub fn from_entries(basis: Arc<GradedBasis>, tag: Basis, entries: DMatrix<C64>) -> Result<Self> {
        let l = basis.len();
        if entries.nrows() != l || entries.ncols() != l {
            return Err(FockError::DimensionMismatch {
                expected: l,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self {
            basis,
            tag,
            domain_s: 0.0,
            codomain_s: 0.0,
            entries,
            unitary_tolerance: None,
        })
    }

    /// Entry (i, j) = f(i, j), assembled in parallel over rows.
    pub fn from_fn<F>(basis: Arc<GradedBasis>, tag: Basis, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> C64 + Sync,
    {
        let l = basis.len();
        let rows: Vec<Vec<C64>> = (0..l)
            .into_par_iter()
            .map(|i| (0..l).map(|j| f(i, j)).collect())
            .collect();
        let entries = DMatrix::from_fn(l, l, |i, j| rows[i][j]);
        Self::from_entries(basis, tag, entries)
    }

    pub fn identity(dim: usize, truncation: u32, tag: Basis) -> Result<Self> {
        let basis = GradedBasis::new(dim, truncation)?;
        let l = basis.len();
        Self::from_entries(basis, tag, DMatrix::identity(l, l))
    }

    pub fn diagonal(basis: Arc<GradedBasis>, tag: Basis, d: &[C64]) -> Result<Self> {
        let l = basis.len();
        if d.len() != l {
            return Err(FockError::DimensionMismatch {
                expected: l,
                got: d.len(),
            });
        }
        Self::from_entries(
            basis,
            tag,
            DMatrix::from_fn(l, l, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) }),
        )
    }

    pub fn with_smoothness(mut self, domain_s: f64, codomain_s: f64) -> Self {
        self.domain_s = domain_s;
        self.codomain_s = codomain_s;
        self
    }

    pub fn with_unitary_tolerance(mut self, tol: f64) -> Self {
        self.unitary_tolerance = Some(tol);
        self
    }

    pub fn retag(mut self, tag: Basis) -> Self {
        self.tag = tag;
        self
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn tag(&self) -> Basis {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn truncation(&self) -> u32 {
        self.basis.truncation()
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn domain_s(&self) -> f64 {
        self.domain_s
    }

    pub fn codomain_s(&self) -> f64 {
        self.codomain_s
    }

    pub fn unitary_tolerance(&self) -> Option<f64> {
        self.unitary_tolerance
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.basis.dim() != other.basis.dim() || self.basis.truncation() != other.basis.truncation() {
            return Err(FockError::DimensionMismatch {
                expected: self.size(),
                got: other.size(),
            });
        }
        Ok(())
    }

    /// Matrix product self · other (finite-section composition).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let l = self.size();
        let rows: Vec<Vec<C64>> = (0..l)
            .into_par_iter()
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let mut acc = ComplexSum::new();
                        for k in 0..l {
                            acc.add(self.entries[(i, k)] * other.entries[(k, j)]);
                        }
                        acc.value()
                    })
                    .collect()
            })
            .collect();
        Self::from_entries(self.basis.clone(), self.tag, DMatrix::from_fn(l, l, |i, j| rows[i][j]))
            .map(|m| m.with_smoothness(other.domain_s, self.codomain_s))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.entries -= &other.entries;
        Ok(out)
    }

    /// self·other - other·self.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        out.entries = self.entries.adjoint();
        out
    }

    pub fn apply(&self, v: &SpectralVector) -> Result<SpectralVector> {
        if v.len() != self.size() || v.dim() != self.dim() {
            return Err(FockError::DimensionMismatch {
                expected: self.size(),
                got: v.len(),
            });
        }
        let l = self.size();
        let out: Vec<C64> = (0..l)
            .into_par_iter()
            .map(|i| {
                let mut acc = ComplexSum::new();
                for (j, c) in v.coeffs().iter().enumerate() {
                    acc.add(self.entries[(i, j)] * c);
                }
                acc.value()
            })
            .collect();
        SpectralVector::from_coeffs(self.basis.clone(), v.tag(), out)
    }

    /// Number of rows/columns with |α| ≤ ⌊N/2⌋.
    pub fn interior_len(&self) -> usize {
        self.basis.prefix_len(self.basis.truncation() / 2)
    }

    /// Leading block of the entries with |α|, |β| ≤ `order`.
    pub fn block(&self, order: u32) -> DMatrix<C64> {
        let k = self.basis.prefix_len(order);
        self.entries.view((0, 0), (k, k)).into_owned()
    }

    pub fn interior(&self) -> DMatrix<C64> {
        self.block(self.basis.truncation() / 2)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.entries)
    }

    /// Frobenius norm of (self - other) restricted to the interior block |α| ≤ N/2.
    pub fn interior_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(frobenius(&(self.interior() - other.interior())))
    }

    /// Frobenius norm of A*A - I on the interior block, with the product taken
    /// over the whole finite section.
    pub fn unitarity_defect(&self) -> f64 {
        let k = self.interior_len();
        let l = self.size();
        let mut acc = crate::sum::NeumaierSum::new();
        for i in 0..k {
            for j in 0..k {
                let mut s = ComplexSum::new();
                for r in 0..l {
                    s.add(self.entries[(r, i)].conj() * self.entries[(r, j)]);
                }
                let d = s.value() - if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                acc.add(d.norm_sqr());
            }
        }
        acc.value().sqrt()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let l = self.size();
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * l * l);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dim() as u32).to_le_bytes());
        out.extend_from_slice(&self.truncation().to_le_bytes());
        out.extend_from_slice(&self.domain_s.to_le_bytes());
        out.extend_from_slice(&self.codomain_s.to_le_bytes());
        out.push(self.tag.code());
        for i in 0..l {
            for j in 0..l {
                let z = self.entries[(i, j)];
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let fmt = |m: &str| FockError::Format(m.to_string());
        if bytes.len() < HEADER_LEN {
            return Err(fmt("file shorter than the header"));
        }
        if &bytes[..16] != MAGIC {
            return Err(fmt("bad magic"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let version = u32_at(16);
        if version != FORMAT_VERSION {
            return Err(fmt(&format!("unsupported version {version}")));
        }
        let dim = u32_at(20) as usize;
        let truncation = u32_at(24);
        let domain_s = f64_at(28);
        let codomain_s = f64_at(36);
        let tag = Basis::from_code(bytes[44]).ok_or_else(|| fmt(&format!("unknown basis code {}", bytes[44])))?;
        let basis = GradedBasis::new(dim, truncation)?;
        let l = basis.len();
        let body = &bytes[HEADER_LEN..];
        if body.len() != 16 * l * l {
            return Err(fmt(&format!(
                "expected {} entry bytes, found {}",
                16 * l * l,
                body.len()
            )));
        }
        let entries = DMatrix::from_fn(l, l, |i, j| {
            let o = 16 * (i * l + j);
            C64::new(
                f64::from_le_bytes(body[o..o + 8].try_into().unwrap()),
                f64::from_le_bytes(body[o + 8..o + 16].try_into().unwrap()),
            )
        });
        Ok(Self::from_entries(basis, tag, entries)?.with_smoothness(domain_s, codomain_s))
    }

    pub fn write_binary(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| io_err(path, e))
    }

    pub fn read_binary(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
        Self::from_bytes(&bytes)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# format = focklab-matrix-csv")?;
        writeln!(w, "# version = {FORMAT_VERSION}")?;
        writeln!(w, "# n = {}", self.dim())?;
        writeln!(w, "# N = {}", self.truncation())?;
        writeln!(w, "# s_domain = {}", fmt_f64(self.domain_s))?;
        writeln!(w, "# s_codomain = {}", fmt_f64(self.codomain_s))?;
        writeln!(w, "# convention = {}", self.tag.name())?;
        writeln!(w, "row,col,re,im")?;
        let l = self.size();
        for i in 0..l {
            for j in 0..l {
                let z = self.entries[(i, j)];
                writeln!(w, "{i},{j},{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let fmt = |m: String| FockError::Format(m);
        let mut dim = None;
        let mut truncation = None;
        let mut domain_s = 0.0;
        let mut codomain_s = 0.0;
        let mut tag = None;
        let mut entries: Option<DMatrix<C64>> = None;
        for line in r.lines() {
            let line = line.map_err(|e| fmt(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line == "row,col,re,im" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let Some((k, v)) = rest.split_once('=') else { continue };
                let (k, v) = (k.trim(), v.trim());
                let bad = |_| fmt(format!("bad header value {k} = {v}"));
                match k {
                    "n" => dim = Some(v.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                    "N" => truncation = Some(v.parse::<u32>().map_err(|e| bad(e.to_string()))?),
                    "s_domain" => domain_s = v.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                    "s_codomain" => {
                        codomain_s = v.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?
                    }
                    "convention" => {
                        tag = Some(match v {
                            "PaperH" => Basis::PaperH,
                            "BargmannH" => Basis::BargmannH,
                            "Fock" => Basis::Fock,
                            other => return Err(fmt(format!("unknown convention {other}"))),
                        })
                    }
                    _ => {}
                }
                continue;
            }
            if entries.is_none() {
                let (d, t) = dim.zip(truncation).ok_or_else(|| fmt("entries before header".into()))?;
                let l = crate::multi_index::basis_size(d, t);
                entries = Some(DMatrix::zeros(l, l));
            }
            let m = entries.as_mut().unwrap();
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(fmt(format!("malformed record `{line}`")));
            }
            let i: usize = parts[0].parse().map_err(|_| fmt(format!("bad row in `{line}`")))?;
            let j: usize = parts[1].parse().map_err(|_| fmt(format!("bad column in `{line}`")))?;
            let re: f64 = parts[2].parse().map_err(|_| fmt(format!("bad value in `{line}`")))?;
            let im: f64 = parts[3].parse().map_err(|_| fmt(format!("bad value in `{line}`")))?;
            if i >= m.nrows() || j >= m.ncols() {
                return Err(fmt(format!("index out of range in `{line}`")));
            }
            m[(i, j)] = C64::new(re, im);
        }
        let (d, t) = dim.zip(truncation).ok_or_else(|| fmt("missing header".into()))?;
        let basis = GradedBasis::new(d, t)?;
        let l = basis.len();
        let entries = entries.unwrap_or_else(|| DMatrix::zeros(l, l));
        Ok(
            Self::from_entries(basis, tag.ok_or_else(|| fmt("missing convention".into()))?, entries)?
                .with_smoothness(domain_s, codomain_s),
        )
    }
}

pub fn frobenius(m: &DMatrix<C64>) -> f64 {
    crate::sum::sum_f64(m.iter().map(|z| z.norm_sqr())).sqrt()
}

/// Shortest round-tripping text for an f64 (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: std::io::Error) -> FockError {
    FockError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OperatorMatrix {
        let b = GradedBasis::new(2, 3).unwrap();
        OperatorMatrix::from_fn(b, Basis::Fock, |i, j| {
            C64::new(i as f64 * 0.1 + 1.0 / 3.0, -(j as f64) / 7.0)
        })
        .unwrap()
        .with_smoothness(1.0, 2.5)
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let m = sample();
        let bytes = m.to_bytes();
        assert_eq!(&bytes[..16], MAGIC);
        assert_eq!(bytes.len(), 45 + 16 * 100);
        let back = OperatorMatrix::from_bytes(&bytes).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let m = sample();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let back = OperatorMatrix::read_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let mut bytes = sample().to_bytes();
        bytes[0] = b'X';
        assert!(matches!(OperatorMatrix::from_bytes(&bytes), Err(FockError::Format(_))));
        let bytes = sample().to_bytes();
        assert!(OperatorMatrix::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn interior_and_unitarity() {
        let id = OperatorMatrix::identity(1, 10, Basis::Fock).unwrap();
        assert_eq!(id.interior_len(), 6);
        assert_eq!(id.unitarity_defect(), 0.0);
        let m = sample();
        assert!(m.interior_distance(&m).unwrap() == 0.0);
        let c = id.commutator(&sample().retag(Basis::Fock)).ok();
        assert!(c.is_none(), "shape mismatch must be rejected");
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE, -0.0] {
            let t = fmt_f64(x);
            assert_eq!(t.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{t}");
        }
    }
}
