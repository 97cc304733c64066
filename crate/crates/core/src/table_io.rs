//! Binary table files: `"ICT1"`, version byte, `N` as u64 little-endian,
//! then `N` value bytes for `f(1..=N)`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::all_targets::{ComplexityTable, Engine};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ICT1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;

pub fn write_table<W: Write>(table: &ComplexityTable, mut out: W) -> std::io::Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&[VERSION])?;
    out.write_all(&(table.n() as u64).to_le_bytes())?;
    out.write_all(table.values())?;
    out.flush()
}

/// The engine tag is not stored; tables read back report [`Engine::Capped`].
pub fn read_table<R: Read>(mut input: R) -> Result<ComplexityTable> {
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|e| Error::TableFormat(format!("short header: {e}")))?;
    if &header[..4] != MAGIC {
        return Err(Error::TableFormat("bad magic".into()));
    }
    if header[4] != VERSION {
        return Err(Error::TableFormat(format!("unsupported version {}", header[4])));
    }
    let n = u64::from_le_bytes(header[5..13].try_into().unwrap());
    let n = usize::try_from(n).map_err(|_| Error::TableFormat(format!("N = {n} too large")))?;
    let mut values = Vec::new();
    input
        .take(n as u64 + 1)
        .read_to_end(&mut values)
        .map_err(|e| Error::TableFormat(e.to_string()))?;
    if values.len() != n {
        return Err(Error::TableFormat(format!(
            "expected {n} value bytes, found {}{}",
            values.len().min(n),
            if values.len() > n { " and trailing data" } else { "" }
        )));
    }
    if n >= 1 && values[0] != 1 {
        return Err(Error::TableFormat("f(1) must be 1".into()));
    }
    Ok(ComplexityTable::from_raw(values, Engine::Capped))
}

pub fn save(table: &ComplexityTable, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_table(table, BufWriter::new(file)).map_err(io_err)
}

pub fn load(path: &Path) -> Result<ComplexityTable> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_table(BufReader::new(file))
}
