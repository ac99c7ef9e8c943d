//! Single-file binary index format. All integers are little-endian.
//!
//! ```text
//! magic      4 bytes  "ODCI"
//! version    u32
//! records    u32 count, then per record:
//!              str portal_id, str dataset_id, str title, str description,
//!              u32 keyword count + str each, str landing_url,
//!              str language, str publisher,
//!              u32 concept count + u32 each (ascending)
//! postings   u32 count, then per concept (ascending):
//!              u32 concept, u32 length, u32 ordinals (ascending)
//! checksum   u32 CRC-32 (IEEE) of every preceding byte
//! ```
//! `str` is a u32 byte length followed by UTF-8 bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{ConceptIndex, IndexError, IndexedDataset, Ordinal};
use crate::linker::ConceptId;
use crate::record::DatasetRecord;

pub const MAGIC: &[u8; 4] = b"ODCI";
pub const FORMAT_VERSION: u32 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn len(&mut self, n: usize) {
        self.u32(u32::try_from(n).expect("length fits u32"));
    }

    fn str(&mut self, s: &str) {
        self.len(s.len());
        self.0.extend_from_slice(s.as_bytes());
    }
}

/// Serializes the index to bytes.
pub fn write_index(index: &ConceptIndex) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u32(FORMAT_VERSION);
    w.len(index.records.len());
    for d in &index.records {
        let r = &d.record;
        w.str(&r.portal_id);
        w.str(&r.dataset_id);
        w.str(&r.title);
        w.str(&r.description);
        w.len(r.keywords.len());
        for k in &r.keywords {
            w.str(k);
        }
        w.str(&r.landing_url);
        w.str(r.language.code());
        w.str(&r.publisher);
        w.len(d.concepts.len());
        for c in &d.concepts {
            w.u32(c.get());
        }
    }
    let postings = index.posting_map();
    w.len(postings.len());
    for (c, list) in postings {
        w.u32(c.get());
        w.len(list.len());
        for &o in list {
            w.u32(o);
        }
    }
    let crc = crc32fast::hash(&w.0);
    w.u32(crc);
    w.0
}

pub fn save_index(index: &ConceptIndex, path: &Path) -> Result<(), IndexError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&write_index(index))?;
    f.sync_all()?;
    Ok(())
}

pub fn load_index(path: &Path) -> Result<ConceptIndex, IndexError> {
    read_index(&fs::read(path)?)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

fn truncated() -> IndexError {
    IndexError::CorruptIndex("unexpected end of data".into())
}

impl<'a> Reader<'a> {
    fn bytes(&mut self, n: usize) -> Result<&'a [u8], IndexError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(truncated)?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, IndexError> {
        let b = self.bytes(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    /// A count whose items need at least `min_item` bytes each; rejects
    /// counts the remaining data cannot hold.
    fn count(&mut self, min_item: usize) -> Result<usize, IndexError> {
        let n = self.u32()? as usize;
        if n.saturating_mul(min_item) > self.buf.len() - self.pos {
            return Err(truncated());
        }
        Ok(n)
    }

    fn str(&mut self) -> Result<String, IndexError> {
        let n = self.u32()? as usize;
        let b = self.bytes(n)?;
        String::from_utf8(b.to_vec()).map_err(|_| IndexError::CorruptIndex("invalid UTF-8".into()))
    }

    fn concept(&mut self) -> Result<ConceptId, IndexError> {
        let n = self.u32()?;
        ConceptId::new(n).ok_or_else(|| IndexError::CorruptIndex(format!("concept id {n} out of range")))
    }
}

/// Parses bytes written by [`write_index`]. The magic is checked first, then
/// the version, then the checksum, then structural consistency.
pub fn read_index(buf: &[u8]) -> Result<ConceptIndex, IndexError> {
    if buf.len() < 8 || &buf[..4] != MAGIC {
        return Err(IndexError::CorruptIndex("missing ODCI header".into()));
    }
    let version = u32::from_le_bytes([buf[4], buf[5], buf[6], buf[7]]);
    if version != FORMAT_VERSION {
        return Err(IndexError::VersionMismatch { found: version, expected: FORMAT_VERSION });
    }
    if buf.len() < 12 {
        return Err(truncated());
    }
    let (body, tail) = buf.split_at(buf.len() - 4);
    let stored = u32::from_le_bytes([tail[0], tail[1], tail[2], tail[3]]);
    if crc32fast::hash(body) != stored {
        return Err(IndexError::CorruptIndex("checksum mismatch".into()));
    }
    let mut r = Reader { buf: body, pos: 8 };
    let n_records = r.count(40)?;
    let mut records = Vec::with_capacity(n_records);
    for _ in 0..n_records {
        let portal_id = r.str()?;
        let dataset_id = r.str()?;
        let title = r.str()?;
        let description = r.str()?;
        let n_kw = r.count(4)?;
        let keywords = (0..n_kw).map(|_| r.str()).collect::<Result<Vec<_>, _>>()?;
        let landing_url = r.str()?;
        let language = r.str()?.parse().map_err(|e| IndexError::CorruptIndex(format!("{e}")))?;
        let publisher = r.str()?;
        let n_c = r.count(4)?;
        let concepts = (0..n_c).map(|_| r.concept()).collect::<Result<Vec<_>, _>>()?;
        let record =
            DatasetRecord { portal_id, dataset_id, title, description, keywords, landing_url, language, publisher };
        records.push(IndexedDataset { record, concepts });
    }
    let n_postings = r.count(8)?;
    let mut postings: BTreeMap<ConceptId, Vec<Ordinal>> = BTreeMap::new();
    for _ in 0..n_postings {
        let c = r.concept()?;
        let n = r.count(4)?;
        let list = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>, _>>()?;
        if postings.insert(c, list).is_some() {
            return Err(IndexError::CorruptIndex(format!("duplicate postings for {c}")));
        }
    }
    if r.pos != body.len() {
        return Err(IndexError::CorruptIndex("trailing bytes before checksum".into()));
    }
    ConceptIndex::from_parts(records, postings)
}
