//! Binary field checkpoints and CSV export.
//!
//! Layout (all multi-byte values in the byte order announced by the tag):
//!
//! ```text
//! magic          8 bytes  "GSQGFLD\0"
//! endian tag     u32      0x01020304
//! version        u32      1
//! n              u64
//! L              f64
//! representation u8       0 = physical, 1 = spectral
//! payload        n*n f64 (physical) or n*n (re, im) f64 pairs (spectral), row-major
//! ```

use std::io::{Read, Write};

use byteorder::{BigEndian, ByteOrder, LittleEndian, ReadBytesExt, WriteBytesExt};
use rustfft::num_complex::Complex64;

use super::{Grid2D, ScalarField2D};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"GSQGFLD\0";
const ENDIAN_TAG: u32 = 0x0102_0304;
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

pub fn write_field<W: Write>(mut w: W, field: &ScalarField2D, repr: Representation) -> Result<()> {
    let g = field.grid();
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(ENDIAN_TAG)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u64::<LittleEndian>(g.n() as u64)?;
    w.write_f64::<LittleEndian>(g.length())?;
    match repr {
        Representation::Physical => {
            w.write_u8(0)?;
            for &v in field.physical() {
                w.write_f64::<LittleEndian>(v)?;
            }
        }
        Representation::Spectral => {
            w.write_u8(1)?;
            for c in field.spectral() {
                w.write_f64::<LittleEndian>(c.re)?;
                w.write_f64::<LittleEndian>(c.im)?;
            }
        }
    }
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<(ScalarField2D, Representation)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a field checkpoint (bad magic)".into()));
    }
    let mut tag = [0u8; 4];
    r.read_exact(&mut tag)?;
    if LittleEndian::read_u32(&tag) == ENDIAN_TAG {
        read_body::<LittleEndian, _>(r)
    } else if BigEndian::read_u32(&tag) == ENDIAN_TAG {
        read_body::<BigEndian, _>(r)
    } else {
        Err(Error::Format("unrecognized endianness tag".into()))
    }
}

fn read_body<B: ByteOrder, R: Read>(mut r: R) -> Result<(ScalarField2D, Representation)> {
    let version = r.read_u32::<B>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let n = r.read_u64::<B>()? as usize;
    let length = r.read_f64::<B>()?;
    let grid = Grid2D::new(n, length)?;
    match r.read_u8()? {
        0 => {
            let mut values = vec![0.0; n * n];
            r.read_f64_into::<B>(&mut values)?;
            Ok((ScalarField2D::from_physical(&grid, values)?, Representation::Physical))
        }
        1 => {
            let mut raw = vec![0.0; 2 * n * n];
            r.read_f64_into::<B>(&mut raw)?;
            let coeffs = raw
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect();
            Ok((ScalarField2D::from_spectral(&grid, coeffs)?, Representation::Spectral))
        }
        other => Err(Error::Format(format!("unknown representation flag {other}"))),
    }
}

/// Plain-text export: one CSV row per grid row (`x₂` index), physical values.
pub fn write_field_csv<W: Write>(mut w: W, field: &ScalarField2D) -> Result<()> {
    let n = field.grid().n();
    for row in field.physical().chunks(n) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}
