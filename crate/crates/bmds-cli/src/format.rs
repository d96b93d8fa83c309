//! On-disk column format and manifest.
//!
//! A column file is a fixed 24-byte header followed by the payload:
//!
//! ```text
//! magic   "BMDS1"          5 bytes
//! family  1 = c1, 2 = c2   u8
//! k                        u16 LE
//! r                        u16 LE
//! p                        u32 LE
//! column  1-based index    u16 LE
//! L       bits per stripe  u64 LE
//! payload stripes * ceil(L/8) bytes, bits packed LSB-first per byte
//! ```
//!
//! Every stripe occupies a whole number of bytes; slack bits in a stripe's
//! last byte are zero. The manifest (JSON, `manifest.json` in the shard
//! directory) records the original byte length, the padding added to fill
//! the final stripe, and the column file names in index order.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use bmds::code::{CodeParams, Family};
use bmds::Bits;

pub const MAGIC: &[u8; 5] = b"BMDS1";
pub const HEADER_LEN: usize = 24;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnHeader {
    pub family: Family,
    pub k: u16,
    pub r: u16,
    pub p: u32,
    /// 1-based column index.
    pub column: u16,
    /// Payload bits per stripe: L = (p-1)*tau.
    pub payload_bits: u64,
}

impl ColumnHeader {
    pub fn to_bytes(self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..5].copy_from_slice(MAGIC);
        out[5] = match self.family {
            Family::C1 => 1,
            Family::C2 => 2,
        };
        out[6..8].copy_from_slice(&self.k.to_le_bytes());
        out[8..10].copy_from_slice(&self.r.to_le_bytes());
        out[10..14].copy_from_slice(&self.p.to_le_bytes());
        out[14..16].copy_from_slice(&self.column.to_le_bytes());
        out[16..24].copy_from_slice(&self.payload_bits.to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<ColumnHeader> {
        if bytes.len() < HEADER_LEN {
            bail!("column file too short for a header");
        }
        if &bytes[..5] != MAGIC {
            bail!("bad magic, not a column file");
        }
        let family = match bytes[5] {
            1 => Family::C1,
            2 => Family::C2,
            other => bail!("unknown family tag {other}"),
        };
        Ok(ColumnHeader {
            family,
            k: u16::from_le_bytes(bytes[6..8].try_into().unwrap()),
            r: u16::from_le_bytes(bytes[8..10].try_into().unwrap()),
            p: u32::from_le_bytes(bytes[10..14].try_into().unwrap()),
            column: u16::from_le_bytes(bytes[14..16].try_into().unwrap()),
            payload_bits: u64::from_le_bytes(bytes[16..24].try_into().unwrap()),
        })
    }

    /// Re-validates the recorded parameters; the payload bit length must
    /// match the derived `(p-1)*tau`.
    pub fn params(&self) -> Result<CodeParams> {
        let params = CodeParams::validate(
            self.family,
            self.k as usize,
            self.r as usize,
            self.p as usize,
        )
        .map_err(|e| anyhow::anyhow!("{e}"))?;
        if self.payload_bits as usize != params.stored_bits {
            bail!(
                "header claims {} payload bits, parameters derive {}",
                self.payload_bits,
                params.stored_bits
            );
        }
        Ok(params)
    }

    pub fn for_params(params: &CodeParams, column: usize) -> ColumnHeader {
        ColumnHeader {
            family: params.family,
            k: params.k as u16,
            r: params.r as u16,
            p: params.p as u32,
            column: (column + 1) as u16,
            payload_bits: params.stored_bits as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnFile {
    pub header: ColumnHeader,
    pub payload: Vec<u8>,
}

impl ColumnFile {
    pub fn stripe_bytes(&self) -> usize {
        (self.header.payload_bits as usize).div_ceil(8)
    }

    pub fn stripes(&self) -> Result<usize> {
        let per = self.stripe_bytes();
        if per == 0 || self.payload.len() % per != 0 {
            bail!(
                "payload of {} bytes is not whole stripes of {per}",
                self.payload.len()
            );
        }
        Ok(self.payload.len() / per)
    }

    pub fn stripe(&self, s: usize) -> Result<Bits> {
        let per = self.stripe_bytes();
        let chunk = &self.payload[s * per..(s + 1) * per];
        Bits::from_le_bytes(chunk, self.header.payload_bits as usize)
            .map_err(|e| anyhow::anyhow!("stripe {s}: {e}"))
    }

    pub fn push_stripe(&mut self, bits: &Bits) {
        debug_assert_eq!(bits.len() as u64, self.header.payload_bits);
        self.payload.extend_from_slice(&bits.to_le_bytes());
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&self.header.to_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<ColumnFile> {
        let header = ColumnHeader::parse(bytes)?;
        Ok(ColumnFile {
            header,
            payload: bytes[HEADER_LEN..].to_vec(),
        })
    }

    pub fn read(path: &Path) -> Result<ColumnFile> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&bytes).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).with_context(|| format!("writing {}", path.display()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub family: String,
    pub k: usize,
    pub r: usize,
    pub p: usize,
    /// Byte length of the original input.
    pub original_len: u64,
    /// Zero bytes appended to fill the final stripe (rounded up when the
    /// stripe size is not a whole number of bytes).
    pub padding: u64,
    /// Column file names in column-index order, length k + r.
    pub columns: Vec<String>,
}

impl Manifest {
    pub fn params(&self) -> Result<CodeParams> {
        let family: Family = self.family.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
        CodeParams::validate(family, self.k, self.r, self.p).map_err(|e| anyhow::anyhow!("{e}"))
    }

    pub fn column_path(&self, dir: &Path, column: usize) -> PathBuf {
        dir.join(&self.columns[column])
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_NAME);
        let json = serde_json::to_string_pretty(self)?;
        fs::write(&path, json).with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(dir: &Path) -> Result<Manifest> {
        let path = dir.join(MANIFEST_NAME);
        let json =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let manifest: Manifest = serde_json::from_str(&json)?;
        if manifest.columns.len() != manifest.k + manifest.r {
            bail!(
                "manifest lists {} columns, expected {}",
                manifest.columns.len(),
                manifest.k + manifest.r
            );
        }
        Ok(manifest)
    }
}
