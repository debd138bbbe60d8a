//! TT3F binary tensor format.
//!
//! Layout: magic bytes `TT3F`, a one-byte version (currently 1), three 64-bit
//! little-endian unsigned dimensions (rows, cols, depth), then
//! `rows * cols * depth` IEEE-754 binary64 little-endian values in the
//! canonical slice-major, column-major-within-slice order.

use crate::error::{Error, Result};
use crate::tensor::Tensor3;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"TT3F";
const VERSION: u8 = 1;

pub fn write_tensor(path: &Path, t: &Tensor3) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    for dim in [t.rows(), t.cols(), t.depth()] {
        w.write_all(&(dim as u64).to_le_bytes())?;
    }
    for v in t.tv() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_tensor(path: &Path) -> Result<Tensor3> {
    let file = std::fs::File::open(path)?;
    let mut r = std::io::BufReader::new(file);
    let mut offset: u64 = 0;

    let mut magic = [0u8; 4];
    read_exact_at(&mut r, &mut magic, &mut offset, "magic bytes")?;
    if &magic != MAGIC {
        return Err(Error::Parse {
            offset: 0,
            msg: format!("bad magic {:?}, expected \"TT3F\"", magic),
        });
    }

    let mut version = [0u8; 1];
    read_exact_at(&mut r, &mut version, &mut offset, "version byte")?;
    if version[0] != VERSION {
        return Err(Error::Parse {
            offset: 4,
            msg: format!("unsupported version {}", version[0]),
        });
    }

    let mut dims = [0usize; 3];
    for dim in &mut dims {
        let mut buf = [0u8; 8];
        read_exact_at(&mut r, &mut buf, &mut offset, "dimension")?;
        let v = u64::from_le_bytes(buf);
        *dim = usize::try_from(v).map_err(|_| Error::Parse {
            offset: offset - 8,
            msg: format!("dimension {} does not fit in usize", v),
        })?;
    }
    let [rows, cols, depth] = dims;

    let count = rows
        .checked_mul(cols)
        .and_then(|x| x.checked_mul(depth))
        .ok_or(Error::Parse {
            offset: 5,
            msg: "dimension product overflows".into(),
        })?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let mut buf = [0u8; 8];
        read_exact_at(&mut r, &mut buf, &mut offset, "value")?;
        values.push(f64::from_le_bytes(buf));
    }

    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Parse {
            offset,
            msg: "trailing bytes after tensor payload".into(),
        });
    }

    Tensor3::from_values(rows, cols, depth, values).map_err(|e| match e {
        Error::NonFinite { index } => Error::Parse {
            offset: 29 + 8 * index as u64,
            msg: "non-finite value".into(),
        },
        other => other,
    })
}

fn read_exact_at(r: &mut impl Read, buf: &mut [u8], offset: &mut u64, what: &str) -> Result<()> {
    match r.read_exact(buf) {
        Ok(()) => {
            *offset += buf.len() as u64;
            Ok(())
        }
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => Err(Error::Parse {
            offset: *offset,
            msg: format!("truncated file while reading {}", what),
        }),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::rand_tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let t = rand_tensor(&mut rng, 3, 4, 2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tt3f");
        write_tensor(&path, &t).unwrap();
        let back = read_tensor(&path).unwrap();
        assert_eq!(t.tv(), back.tv());
        assert_eq!(t.shape(), back.shape());
    }

    #[test]
    fn truncated_file_reports_offset() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let t = rand_tensor(&mut rng, 2, 2, 2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tt3f");
        write_tensor(&path, &t).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        match read_tensor(&path) {
            Err(Error::Parse { offset, .. }) => {
                // 29-byte header + 7 full values already consumed.
                assert_eq!(offset, 29 + 7 * 8);
            }
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tt3f");
        std::fs::write(&path, b"NOPE!").unwrap();
        assert!(matches!(read_tensor(&path), Err(Error::Parse { offset: 0, .. })));
    }
}
