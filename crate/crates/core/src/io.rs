//! Signal files.
//!
//! CSV: a header line `# frlp-signal v1; dim;L;N` followed by one `re,im`
//! row per sample in row-major order. Numbers are written in the shortest
//! form that parses back to the same `f64`.
//!
//! Binary: the 16-byte magic `FRLPSIG1` padded with NUL, then `dim: u32`,
//! `L: f64`, `N: u32` and the interleaved `re, im` pairs, all little-endian.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use crate::error::{FrlpError, Result};
use crate::grid::{GridSpec, Signal};
use crate::scalar::{Complex, Real};

pub const MAGIC: [u8; 16] = *b"FRLPSIG1\0\0\0\0\0\0\0\0";
const CSV_TAG: &str = "# frlp-signal v1;";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Binary,
}

impl Format {
    /// `.csv` is CSV, anything else is binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Binary,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "bin" | "binary" => Some(Format::Binary),
            _ => None,
        }
    }
}

pub fn write_csv<T: Real, W: Write>(f: &Signal<T>, mut w: W) -> Result<()> {
    let g = f.grid();
    writeln!(w, "{CSV_TAG} {};{};{}", g.dim(), g.extent().to_f64(), g.samples())?;
    for v in f.values() {
        writeln!(w, "{},{}", v.re.to_f64(), v.im.to_f64())?;
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> FrlpError {
    FrlpError::Format(msg.into())
}

fn parse_header(line: &str) -> Result<(usize, f64, usize)> {
    let rest = line.trim().strip_prefix(CSV_TAG).ok_or_else(|| bad("missing '# frlp-signal v1;' header"))?;
    let parts: Vec<&str> = rest.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad(format!("header needs dim;L;N, got '{rest}'")));
    }
    let dim = parts[0].parse().map_err(|_| bad(format!("bad dim '{}'", parts[0])))?;
    let extent = parts[1].parse().map_err(|_| bad(format!("bad extent '{}'", parts[1])))?;
    let samples = parts[2].parse().map_err(|_| bad(format!("bad sample count '{}'", parts[2])))?;
    Ok((dim, extent, samples))
}

pub fn read_csv<T: Real, R: BufRead>(r: R) -> Result<Signal<T>> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))??;
    let (dim, extent, samples) = parse_header(&header)?;
    let grid = GridSpec::new(dim, T::of(extent), samples)?;
    let mut values = Vec::with_capacity(grid.len());
    for (k, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (re, im) = line.split_once(',').ok_or_else(|| bad(format!("row {k}: expected 're,im'")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("row {k}: bad number '{s}'")));
        values.push(Complex::new(T::of(parse(re)?), T::of(parse(im)?)));
    }
    Signal::new(grid, values)
}

pub fn write_binary<T: Real, W: Write>(f: &Signal<T>, mut w: W) -> Result<()> {
    let g = f.grid();
    let mut buf = Vec::with_capacity(32 + 16 * g.len());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    buf.extend_from_slice(&g.extent().to_f64().to_le_bytes());
    buf.extend_from_slice(&(g.samples() as u32).to_le_bytes());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_f64().to_le_bytes());
        buf.extend_from_slice(&v.im.to_f64().to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_binary<T: Real, R: Read>(mut r: R) -> Result<Signal<T>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 32 || bytes[..16] != MAGIC {
        return Err(bad("missing FRLPSIG1 magic"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let grid = GridSpec::new(u32_at(16) as usize, T::of(f64_at(20)), u32_at(28) as usize)?;
    let body = &bytes[32..];
    if body.len() != 16 * grid.len() {
        return Err(FrlpError::LengthMismatch { expected: grid.len(), got: body.len() / 16 });
    }
    let values = (0..grid.len())
        .map(|k| Complex::new(T::of(f64_at(32 + 16 * k)), T::of(f64_at(40 + 16 * k))))
        .collect();
    Signal::new(grid, values)
}

pub fn read_signal<T: Real>(path: &Path) -> Result<Signal<T>> {
    let file = std::fs::File::open(path)?;
    let mut head = [0u8; 16];
    let mut reader = std::io::BufReader::new(file);
    let n = reader.fill_buf()?.len().min(16);
    head[..n].copy_from_slice(&reader.fill_buf()?[..n]);
    if head == MAGIC {
        read_binary(reader)
    } else {
        read_csv(reader)
    }
}

pub fn write_signal<T: Real>(f: &Signal<T>, path: &Path, format: Format) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        Format::Csv => write_csv(f, file),
        Format::Binary => write_binary(f, file),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::signals::random_signal;

    #[test]
    fn csv_binary_csv_is_lossless() {
        for (dim, n) in [(1, 64), (2, 16)] {
            let g = make_grid(dim, 6.5f64, n).unwrap();
            let f = random_signal(&g, 3).map(|v| v * 1e-7 + Complex::new(1.0 / 3.0, 1e-300));
            let mut csv = Vec::new();
            write_csv(&f, &mut csv).unwrap();
            let a: Signal<f64> = read_csv(&csv[..]).unwrap();
            let mut bin = Vec::new();
            write_binary(&a, &mut bin).unwrap();
            let b: Signal<f64> = read_binary(&bin[..]).unwrap();
            let mut csv2 = Vec::new();
            write_csv(&b, &mut csv2).unwrap();
            assert_eq!(csv, csv2);
            assert_eq!(f, b);
        }
    }

    #[test]
    fn header_layout() {
        let g = make_grid(1, 8.0f64, 8).unwrap();
        let mut csv = Vec::new();
        write_csv(&Signal::zeros(g), &mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().starts_with("# frlp-signal v1; 1;8;8\n0,0\n"));
        let mut bin = Vec::new();
        write_binary(&Signal::zeros(g), &mut bin).unwrap();
        assert_eq!(&bin[..8], b"FRLPSIG1");
        assert_eq!(bin.len(), 32 + 16 * 8);
        assert_eq!(&bin[16..20], &1u32.to_le_bytes());
        assert_eq!(&bin[20..28], &8.0f64.to_le_bytes());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_csv::<f64, _>(&b"0,0\n"[..]), Err(FrlpError::Format(_))));
        assert!(matches!(read_csv::<f64, _>(&b"# frlp-signal v1; 1;8;8\n0,0\n"[..]), Err(FrlpError::LengthMismatch { .. })));
        assert!(matches!(read_csv::<f64, _>(&b"# frlp-signal v1; 1;8;7\n"[..]), Err(FrlpError::OddSampleCount(7))));
        assert!(matches!(read_binary::<f64, _>(&b"NOTMAGIC"[..]), Err(FrlpError::Format(_))));
        let g = make_grid(1, 8.0f64, 8).unwrap();
        let mut bin = Vec::new();
        write_binary(&Signal::zeros(g), &mut bin).unwrap();
        bin.pop();
        assert!(read_binary::<f64, _>(&bin[..]).is_err());
    }

    #[test]
    fn files_dispatch_on_content() {
        let dir = std::env::temp_dir().join(format!("frlp-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let g = make_grid(1, 4.0f64, 32).unwrap();
        let f = random_signal(&g, 1);
        for (name, fmt) in [("a.csv", Format::Csv), ("a.bin", Format::Binary), ("b.dat", Format::Csv)] {
            let p = dir.join(name);
            write_signal(&f, &p, fmt).unwrap();
            assert_eq!(read_signal::<f64>(&p).unwrap(), f);
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
