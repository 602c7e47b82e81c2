//! Flat binary field snapshots and CSV slices.
//!
//! Layout: the 8-byte magic `WCSNAP01`, `N` as little-endian `u64`, `L` as
//! little-endian `f64`, then `ψ` and `π` as `N³` little-endian `f64` each in
//! row-major `(x, y, z)` order.

use std::io::{Read, Write};

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::fields::GridField;
use crate::grid::GridSpec;

pub const MAGIC: &[u8; 8] = b"WCSNAP01";

pub fn write_snapshot<W: Write>(mut out: W, field: &GridField) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&(field.grid.points as u64).to_le_bytes())?;
    out.write_all(&field.grid.length.to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * field.grid.total_points());
    for a in [&field.psi, &field.pi] {
        buf.clear();
        for v in a.iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<GridField> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let mut word = [0u8; 8];
    input.read_exact(&mut word)?;
    let n = usize::try_from(u64::from_le_bytes(word)).map_err(|_| Error::Snapshot("grid too large".into()))?;
    input.read_exact(&mut word)?;
    let grid = GridSpec::new(f64::from_le_bytes(word), n).map_err(|e| Error::Snapshot(e.to_string()))?;
    let mut read_array = || -> Result<Array3<f64>> {
        let mut bytes = vec![0u8; 8 * grid.total_points()];
        input.read_exact(&mut bytes)?;
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        Ok(Array3::from_shape_vec(grid.shape(), values).expect("length matches shape"))
    };
    let psi = read_array()?;
    let pi = read_array()?;
    Ok(GridField { grid, psi, pi })
}

/// CSV of the plane `z = 0` (index 0): columns `x, y, psi, pi`.
pub fn write_slice_csv<W: Write>(mut out: W, field: &GridField) -> Result<()> {
    let g = field.grid;
    writeln!(out, "x,y,psi,pi")?;
    for i in 0..g.points {
        for j in 0..g.points {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                g.coordinate(i),
                g.coordinate(j),
                field.psi[[i, j, 0]],
                field.pi[[i, j, 0]]
            )?;
        }
    }
    Ok(())
}
