//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic   8 bytes  "CHFIELD1"
//! N       3 x u32  modes per axis
//! L       f64      box edge length
//! t       f64      sample time
//! payload N^3 f64  samples, x fastest, row-major
//! ```
//!
//! The payload round-trips bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::Grid;

pub const MAGIC: &[u8; 8] = b"CHFIELD1";

pub fn save_snapshot(path: &Path, field: &RealField, t: f64) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let n = field.grid().modes_per_axis() as u32;
    w.write_all(MAGIC)?;
    for _ in 0..3 {
        w.write_all(&n.to_le_bytes())?;
    }
    w.write_all(&field.grid().edge_length().to_le_bytes())?;
    w.write_all(&t.to_le_bytes())?;
    for &v in field.samples() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a snapshot, rebuilding the grid from the header.
pub fn load_snapshot(path: &Path) -> Result<(RealField, f64)> {
    let mut r = BufReader::new(File::open(path)?);

    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)
        .map_err(|_| Error::SnapshotFormat("file too short for header".into()))?;
    if &magic != MAGIC {
        return Err(Error::SnapshotFormat(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&magic),
            String::from_utf8_lossy(MAGIC)
        )));
    }

    let mut dims = [0u32; 3];
    for d in dims.iter_mut() {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)
            .map_err(|_| Error::SnapshotFormat("truncated dimension header".into()))?;
        *d = u32::from_le_bytes(b);
    }
    if dims[0] != dims[1] || dims[1] != dims[2] {
        return Err(Error::SnapshotFormat(format!(
            "grid is not cubic: {dims:?}"
        )));
    }

    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)
        .map_err(|_| Error::SnapshotFormat("truncated edge length".into()))?;
    let l = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)
        .map_err(|_| Error::SnapshotFormat("truncated time".into()))?;
    let t = f64::from_le_bytes(b8);

    let grid = Arc::new(Grid::new(dims[0] as usize, l)?);
    let expected = grid.num_points();
    let mut payload = Vec::with_capacity(expected * 8);
    r.read_to_end(&mut payload)?;
    if payload.len() != expected * 8 {
        return Err(Error::SnapshotFormat(format!(
            "payload holds {} bytes, expected {} ({} doubles)",
            payload.len(),
            expected * 8,
            expected
        )));
    }
    let samples: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((RealField::new(grid, samples)?, t))
}

/// Loads a snapshot and checks it matches an expected grid.
pub fn load_snapshot_on(path: &Path, grid: &Grid) -> Result<(RealField, f64)> {
    let (field, t) = load_snapshot(path)?;
    if !field.grid().same_layout(grid) {
        return Err(Error::SnapshotFormat(format!(
            "snapshot grid {}^3 (L = {}) disagrees with the configured grid {}^3 (L = {})",
            field.grid().modes_per_axis(),
            field.grid().edge_length(),
            grid.modes_per_axis(),
            grid.edge_length()
        )));
    }
    Ok((field, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::seeded_field;

    fn roundtrip_dir() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn round_trip_is_bitwise() {
        let dir = roundtrip_dir();
        let path = dir.path().join("field.chf");
        let g = Arc::new(Grid::new(8, 1.5).unwrap());
        let f = seeded_field(&g, 77, 2.0);
        save_snapshot(&path, &f, 0.375).unwrap();
        let (back, t) = load_snapshot(&path).unwrap();
        assert_eq!(t, 0.375);
        assert_eq!(back.grid().edge_length(), 1.5);
        let same = f
            .samples()
            .iter()
            .zip(back.samples())
            .all(|(a, b)| a.to_bits() == b.to_bits());
        assert!(same);
    }

    #[test]
    fn rejects_wrong_magic() {
        let dir = roundtrip_dir();
        let path = dir.path().join("bad.chf");
        std::fs::write(&path, b"NOTAFILE plus junk").unwrap();
        assert!(matches!(
            load_snapshot(&path),
            Err(Error::SnapshotFormat(_))
        ));
    }

    #[test]
    fn rejects_truncated_payload() {
        let dir = roundtrip_dir();
        let path = dir.path().join("short.chf");
        let g = Arc::new(Grid::new(8, 1.0).unwrap());
        let f = seeded_field(&g, 1, 1.0);
        save_snapshot(&path, &f, 0.0).unwrap();
        // claim 16^3 in the header but keep the 8^3 payload
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[8..12].copy_from_slice(&16u32.to_le_bytes());
        bytes[12..16].copy_from_slice(&16u32.to_le_bytes());
        bytes[16..20].copy_from_slice(&16u32.to_le_bytes());
        std::fs::write(&path, &bytes).unwrap();
        let err = load_snapshot(&path).unwrap_err();
        assert!(matches!(err, Error::SnapshotFormat(m) if m.contains("payload")));
    }

    #[test]
    fn grid_disagreement_is_reported() {
        let dir = roundtrip_dir();
        let path = dir.path().join("field.chf");
        let g = Arc::new(Grid::new(8, 1.0).unwrap());
        save_snapshot(&path, &seeded_field(&g, 2, 1.0), 0.0).unwrap();
        let other = Grid::new(16, 1.0).unwrap();
        assert!(load_snapshot_on(&path, &other).is_err());
        assert!(load_snapshot_on(&path, &g).is_ok());
    }
}
