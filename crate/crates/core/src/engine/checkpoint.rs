//! Binary checkpoint of a complete layer.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! "GSEQCKPT"            8 bytes
//! version               u32
//! parity tag            u8   (0 = even, 1 = odd)
//! depth                 u64
//! row count             u64  (always 2·depth + 2)
//! per row, by increasing y:
//!   y                   i64
//!   a_min               u64
//!   a_cap               u64
//!   value count         u64  (a_cap + 2 - a_min)
//!   per value: length   u32, then that many ASCII decimal digits
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::BigUint;

use super::layer::{cap_for, width_for, Layer};
use super::{lower_area, EngineError, InitialParity};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"GSEQCKPT";
pub const CHECKPOINT_VERSION: u32 = 1;

/// A layer together with its on-disk format version.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub version: u32,
    pub layer: Layer,
}

impl Checkpoint {
    pub fn new(layer: Layer) -> Self {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            layer,
        }
    }

    pub fn depth(&self) -> u32 {
        self.layer.depth()
    }

    pub fn parity(&self) -> InitialParity {
        self.layer.parity()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), EngineError> {
        let layer = &self.layer;
        w.write_all(CHECKPOINT_MAGIC)?;
        w.write_all(&self.version.to_le_bytes())?;
        w.write_all(&[layer.parity().tag()])?;
        w.write_all(&u64::from(layer.depth()).to_le_bytes())?;
        w.write_all(&(layer.rows.len() as u64).to_le_bytes())?;
        for row in layer.rows() {
            w.write_all(&row.y.to_le_bytes())?;
            w.write_all(&row.a_min.to_le_bytes())?;
            w.write_all(&row.cap.to_le_bytes())?;
            w.write_all(&(row.len() as u64).to_le_bytes())?;
            for v in row.values() {
                let digits = v.to_string();
                w.write_all(&(digits.len() as u32).to_le_bytes())?;
                w.write_all(digits.as_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Checkpoint, EngineError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(EngineError::BadMagic);
        }
        let version = read_u32(&mut r)?;
        if version != CHECKPOINT_VERSION {
            return Err(EngineError::VersionMismatch {
                found: version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let mut tag = [0u8; 1];
        r.read_exact(&mut tag)?;
        let parity = InitialParity::from_tag(tag[0])
            .ok_or_else(|| EngineError::Corrupt(format!("parity tag {}", tag[0])))?;
        let depth = u32::try_from(read_u64(&mut r)?)
            .map_err(|_| EngineError::Corrupt("depth out of range".into()))?;
        let row_count = read_u64(&mut r)?;
        let n = depth as i64;
        if row_count != 2 * depth as u64 + 2 {
            return Err(EngineError::Corrupt(format!(
                "{row_count} rows for depth {depth}"
            )));
        }
        let width = width_for(depth);
        let mut rows = Vec::with_capacity(row_count as usize);
        let mut digits = Vec::new();
        for expected_y in -n - 1..=n {
            let y = read_u64(&mut r)? as i64;
            let a_min = read_u64(&mut r)?;
            let cap = read_u64(&mut r)?;
            let count = read_u64(&mut r)?;
            if y != expected_y
                || a_min != lower_area(y) as u64
                || cap != cap_for(depth, y)
                || count != cap + 2 - a_min
            {
                return Err(EngineError::Corrupt(format!(
                    "row header for y = {expected_y}"
                )));
            }
            let mut values = Vec::with_capacity(count as usize);
            for _ in 0..count {
                let len = read_u32(&mut r)? as usize;
                digits.resize(len, 0);
                r.read_exact(&mut digits)?;
                let v = BigUint::parse_bytes(&digits, 10)
                    .ok_or_else(|| EngineError::Corrupt("bad decimal count".into()))?;
                values.push(v);
            }
            let row = Layer::values_to_row(width, a_min, cap, &values).ok_or_else(|| {
                EngineError::Corrupt(format!("count too large for depth {depth}"))
            })?;
            rows.push(row);
        }
        Ok(Checkpoint {
            version,
            layer: Layer::from_parts(depth, parity, rows),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), EngineError> {
        let tmp = path.with_extension("partial");
        self.write_to(BufWriter::new(File::create(&tmp)?))?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint, EngineError> {
        Checkpoint::read_from(BufReader::new(File::open(path)?))
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, EngineError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, EngineError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;

    fn layer_at(depth: u32) -> Layer {
        let mut l = Layer::initial(InitialParity::Odd);
        for _ in 0..depth {
            l = l.advance(Exec::Sequential);
        }
        l
    }

    #[test]
    fn round_trip_is_identity() {
        for depth in [0, 1, 7, 40] {
            let ck = Checkpoint::new(layer_at(depth));
            let mut buf = Vec::new();
            ck.write_to(&mut buf).unwrap();
            assert_eq!(&buf[..8], CHECKPOINT_MAGIC);
            let back = Checkpoint::read_from(buf.as_slice()).unwrap();
            assert_eq!(back, ck);
        }
    }

    #[test]
    fn rejects_other_versions_and_magic() {
        let mut buf = Vec::new();
        Checkpoint::new(layer_at(2)).write_to(&mut buf).unwrap();

        let mut bumped = buf.clone();
        bumped[8..12].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(
            Checkpoint::read_from(bumped.as_slice()),
            Err(EngineError::VersionMismatch { found: 7, .. })
        ));

        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(
            Checkpoint::read_from(bad.as_slice()),
            Err(EngineError::BadMagic)
        ));

        let truncated = &buf[..buf.len() - 3];
        assert!(Checkpoint::read_from(truncated).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("layer.ckpt");
        let ck = Checkpoint::new(layer_at(12));
        ck.save(&path).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap(), ck);
    }
}
