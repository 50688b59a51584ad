//! Field serialization.
//!
//! Binary layout (little-endian): magic `ELF2`, `u32` n, `f64` box length,
//! then `n²` `f64` samples in row-major order. The CSV form writes one grid
//! row (constant `y`) per line.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Grid2D, RealField};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAGIC: &[u8; 4] = b"ELF2";

pub fn write_binary<T: Real, W: Write>(field: &RealField<T>, mut w: W) -> Result<()> {
    let grid = field.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&grid.box_length().as_f64().to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.as_f64().to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<T: Real, R: Read>(mut r: R) -> Result<RealField<T>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let l = f64::from_le_bytes(b8);
    let grid = Grid2D::new(n, T::of(l))?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut b8)?;
        values.push(T::of(f64::from_le_bytes(b8)));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after field samples".into()));
    }
    RealField::new(grid, values)
}

pub fn write_csv<T: Real, W: Write>(field: &RealField<T>, mut w: W) -> Result<()> {
    let n = field.grid().n();
    for row in field.values().chunks(n) {
        let line: Vec<String> = row.iter().map(|v| format!("{}", v.as_f64())).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Reads the CSV form; the grid size is inferred from the row count.
pub fn read_csv<T: Real, R: Read>(r: R, box_length: T) -> Result<RealField<T>> {
    let mut values = Vec::new();
    let mut rows = 0usize;
    for line in BufReader::new(r).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for tok in line.split(',') {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("row {rows}: {e}")))?;
            values.push(T::of(v));
        }
        rows += 1;
    }
    let grid = Grid2D::new(rows, box_length)?;
    RealField::new(grid, values)
}

pub fn save_binary<T: Real>(field: &RealField<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    write_binary(field, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_binary<T: Real>(path: impl AsRef<Path>) -> Result<RealField<T>> {
    read_binary(BufReader::new(std::fs::File::open(path)?))
}

pub fn save_csv<T: Real>(field: &RealField<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    write_csv(field, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_csv<T: Real>(path: impl AsRef<Path>, box_length: T) -> Result<RealField<T>> {
    read_csv(std::fs::File::open(path)?, box_length)
}
