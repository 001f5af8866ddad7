//! Field serialization: a little-endian binary format with a 16-byte header
//! (dimension u32, resolution u32, 8 reserved zero bytes) followed by the
//! flat f64 payload, and a P5 graymap snapshot with [−1, 1] mapped affinely
//! to [0, 255].

use std::io::{Read, Write};

use crate::error::{CoreError, Result};
use crate::torus::grid::{GridSpec, ScalarField};

pub fn write_field<W: Write>(w: &mut W, field: &ScalarField) -> Result<()> {
    w.write_all(&(field.spec.dimension as u32).to_le_bytes())?;
    w.write_all(&(field.spec.resolution as u32).to_le_bytes())?;
    w.write_all(&[0u8; 8])?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<ScalarField> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    let dimension = u32::from_le_bytes(header[0..4].try_into().unwrap()) as usize;
    let resolution = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let spec = GridSpec::new(dimension, resolution)?;
    let mut values = vec![0.0f64; spec.cell_count()];
    let mut buf = [0u8; 8];
    for v in values.iter_mut() {
        r.read_exact(&mut buf)?;
        *v = f64::from_le_bytes(buf);
    }
    ScalarField::from_values(spec, values)
}

/// P5 snapshot; rows follow the axis-0 index. Values outside [−1, 1] clamp.
pub fn write_pgm<W: Write>(w: &mut W, field: &ScalarField) -> Result<()> {
    if field.spec.dimension != 2 {
        return Err(CoreError::Unsupported(
            "graymap export is two-dimensional only".into(),
        ));
    }
    let res = field.spec.resolution;
    write!(w, "P5\n{res} {res}\n255\n")?;
    let mut row = Vec::with_capacity(res);
    for i in 0..res {
        row.clear();
        for j in 0..res {
            let v = field.get2(i, j).clamp(-1.0, 1.0);
            row.push(((v + 1.0) * 127.5).round() as u8);
        }
        w.write_all(&row)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip_is_exact() {
        let g = GridSpec::new(2, 16).unwrap();
        let f = ScalarField::sample(g, |p| (p.get(0) * 13.7).sin() + p.get(1));
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        assert_eq!(buf.len(), 16 + 8 * 256);
        let back = read_field(&mut buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn pgm_header_and_size() {
        let g = GridSpec::new(2, 16).unwrap();
        let f = ScalarField::constant(g, 0.0);
        let mut buf = Vec::new();
        write_pgm(&mut buf, &f).unwrap();
        let header = b"P5\n16 16\n255\n";
        assert!(buf.starts_with(header));
        assert_eq!(buf.len(), header.len() + 256);
        // u = 0 maps to mid-gray
        assert_eq!(buf[header.len()], 128);
    }
}
