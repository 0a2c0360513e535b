//! Binary dump/load of divisor tables.
//!
//! Format: 8-byte magic, then little-endian header fields (version u32,
//! k u32, limit u64, entry width u32), then the raw 32-bit entries for
//! indices 0..=limit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sieve::DivisorTable;

const MAGIC: &[u8; 8] = b"DIVISUMT";
const VERSION: u32 = 1;
const ENTRY_WIDTH: u32 = 4;

pub fn dump_divisor_table(table: &DivisorTable, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&table.k().to_le_bytes())?;
    w.write_all(&table.limit().to_le_bytes())?;
    w.write_all(&ENTRY_WIDTH.to_le_bytes())?;
    let mut buf = Vec::with_capacity(1 << 16);
    for n in 0..=table.limit() {
        let v = if n == 0 { 0u32 } else { table.get(n) as u32 };
        buf.extend_from_slice(&v.to_le_bytes());
        if buf.len() >= 1 << 16 {
            w.write_all(&buf)?;
            buf.clear();
        }
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn load_divisor_table(path: &Path) -> Result<DivisorTable> {
    let file = File::open(path)?;
    let mut r = BufReader::new(file);

    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::CacheFormat("bad magic".into()));
    }
    let mut u32buf = [0u8; 4];
    let mut u64buf = [0u8; 8];

    r.read_exact(&mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != VERSION {
        return Err(Error::CacheFormat(format!(
            "unsupported version {version}"
        )));
    }
    r.read_exact(&mut u32buf)?;
    let k = u32::from_le_bytes(u32buf);
    r.read_exact(&mut u64buf)?;
    let limit = u64::from_le_bytes(u64buf);
    r.read_exact(&mut u32buf)?;
    let width = u32::from_le_bytes(u32buf);
    if width != ENTRY_WIDTH {
        return Err(Error::CacheFormat(format!("unsupported entry width {width}")));
    }
    if k == 0 || limit == 0 {
        return Err(Error::CacheFormat("empty table header".into()));
    }

    let count = limit as usize + 1;
    let mut raw = vec![0u8; count * 4];
    r.read_exact(&mut raw)?;
    let mut values = Vec::new();
    values
        .try_reserve_exact(count)
        .map_err(|_| Error::Allocation {
            what: "divisor table",
            bytes: count as u64 * 4,
        })?;
    values.extend(
        raw.chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])),
    );
    DivisorTable::from_raw(k, limit, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{sieve_dk, SpfTable};

    #[test]
    fn round_trip() {
        let spf = SpfTable::build(5000).unwrap();
        let table = sieve_dk(5000, 3, &spf).unwrap();
        let dir = std::env::temp_dir().join("divisum-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("dk3.tbl");
        dump_divisor_table(&table, &path).unwrap();
        let loaded = load_divisor_table(&path).unwrap();
        assert_eq!(loaded.k(), 3);
        assert_eq!(loaded.limit(), 5000);
        for n in 1..=5000u64 {
            assert_eq!(loaded.get(n), table.get(n));
        }
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn rejects_garbage() {
        let dir = std::env::temp_dir().join("divisum-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("garbage.tbl");
        std::fs::write(&path, b"not a table").unwrap();
        assert!(load_divisor_table(&path).is_err());
        std::fs::remove_file(&path).unwrap();
    }
}
