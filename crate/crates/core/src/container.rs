//! The `LRMK` container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "LRMK"  version:u8  tag:u8  payload_len:u64  payload
//! ```
//!
//! Bit strings inside payloads are written as `padding:u8 byte_len:u64 bytes`, bits
//! packed least significant first and `padding` unused high bits in the last byte.

use std::fs;
use std::path::Path;

use crate::bitseq::{BitRankSelect, CompressedBitSeq, PlainBitSeq, RawBits};
use crate::bp_forest::BpForest;
use crate::lrm::LrmTree;
use crate::partition_sort::{MergeNode, MergeTree};
use crate::permcode::PermCode;
use crate::rmq::{PlainRmqIndex, RunsRmqIndex, StrictRunsRmqIndex};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"LRMK";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 8;

/// Payload type stored in a container.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Tag {
    PlainBitSeq = 1,
    CompressedBitSeq = 2,
    BpForest = 3,
    LrmTree = 4,
    PlainRmqIndex = 5,
    StrictRunsRmqIndex = 6,
    RunsRmqIndex = 7,
    PermCode = 8,
}

impl TryFrom<u8> for Tag {
    type Error = Error;

    fn try_from(b: u8) -> Result<Self> {
        Ok(match b {
            1 => Tag::PlainBitSeq,
            2 => Tag::CompressedBitSeq,
            3 => Tag::BpForest,
            4 => Tag::LrmTree,
            5 => Tag::PlainRmqIndex,
            6 => Tag::StrictRunsRmqIndex,
            7 => Tag::RunsRmqIndex,
            8 => Tag::PermCode,
            other => return Err(Error::format(format!("unknown payload tag {other}"))),
        })
    }
}

/// Payload encoder.
#[derive(Debug, Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn bools(&mut self, bits: &[bool]) {
        self.raw(&RawBits::from_bools(bits));
    }

    pub(crate) fn raw(&mut self, bits: &RawBits) {
        let nbytes = bits.len().div_ceil(8);
        self.u8((nbytes * 8 - bits.len()) as u8);
        self.u64(nbytes as u64);
        let bytes = bits.words().iter().flat_map(|w| w.to_le_bytes());
        self.buf.extend(bytes.take(nbytes));
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

/// Payload decoder; every read fails with a format error on truncated input.
#[derive(Debug)]
pub struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Reader { data, pos: 0 }
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < k {
            return Err(Error::format("truncated payload"));
        }
        let s = &self.data[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    /// A `u64` that must fit in memory-sized counts.
    pub fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v)
            .ok()
            .filter(|&v| v <= self.data.len().saturating_mul(8))
            .ok_or_else(|| Error::format(format!("count {v} exceeds the payload")))
    }

    pub fn bools(&mut self) -> Result<Vec<bool>> {
        Ok(self.raw()?.to_bools())
    }

    pub(crate) fn raw(&mut self) -> Result<RawBits> {
        let padding = self.u8()? as usize;
        let nbytes = self.usize()?;
        if padding > 7 || (nbytes == 0 && padding != 0) {
            return Err(Error::format(format!("bad bit-string padding {padding}")));
        }
        let bytes = self.take(nbytes)?;
        let len = nbytes * 8 - padding;
        let mut raw = RawBits::with_len(0);
        for (k, chunk) in bytes.chunks(8).enumerate() {
            let mut w = [0u8; 8];
            w[..chunk.len()].copy_from_slice(chunk);
            let width = (len - 64 * k).min(64);
            raw.push_bits(u64::from_le_bytes(w), width);
        }
        Ok(raw)
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::format(format!(
                "{} trailing payload bytes",
                self.data.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// Wraps a payload in the container header.
pub fn wrap(tag: Tag, payload: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(tag as u8);
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(payload);
    out
}

/// Checks the header and returns the tag and payload.
pub fn unwrap(bytes: &[u8]) -> Result<(Tag, &[u8])> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::format("not an LRMK container"));
    }
    if bytes[4] != VERSION {
        return Err(Error::format(format!(
            "container version {} is not supported (expected {VERSION})",
            bytes[4]
        )));
    }
    let tag = Tag::try_from(bytes[5])?;
    let len = u64::from_le_bytes(bytes[6..14].try_into().expect("8 bytes"));
    let payload = &bytes[HEADER_LEN..];
    if payload.len() as u64 != len {
        return Err(Error::format(format!(
            "payload length {} does not match header {len}",
            payload.len()
        )));
    }
    Ok((tag, payload))
}

/// Types stored in `LRMK` containers.
pub trait Persist: Sized {
    const TAG: Tag;

    fn write_payload(&self, w: &mut Writer);

    fn read_payload(r: &mut Reader<'_>) -> Result<Self>;

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::default();
        self.write_payload(&mut w);
        wrap(Self::TAG, &w.into_bytes())
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (tag, payload) = unwrap(bytes)?;
        if tag != Self::TAG {
            return Err(Error::format(format!(
                "container holds {tag:?}, expected {:?}",
                Self::TAG
            )));
        }
        let mut r = Reader::new(payload);
        let v = Self::read_payload(&mut r)?;
        r.finish()?;
        Ok(v)
    }

    fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

impl Persist for PlainBitSeq {
    const TAG: Tag = Tag::PlainBitSeq;

    fn write_payload(&self, w: &mut Writer) {
        w.raw(self.raw());
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        Ok(PlainBitSeq::from_raw(r.raw()?))
    }
}

impl Persist for CompressedBitSeq {
    const TAG: Tag = Tag::CompressedBitSeq;

    fn write_payload(&self, w: &mut Writer) {
        w.u64(self.len() as u64);
        w.raw(self.class_stream());
        w.raw(self.offset_stream());
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        let len = r.usize()?;
        let classes = r.raw()?;
        let offsets = r.raw()?;
        CompressedBitSeq::from_parts(len, classes, offsets)
    }
}

fn read_forest(r: &mut Reader<'_>) -> Result<BpForest> {
    BpForest::from_bits(&r.bools()?).map_err(|e| Error::format(format!("parentheses: {e}")))
}

impl Persist for BpForest {
    const TAG: Tag = Tag::BpForest;

    fn write_payload(&self, w: &mut Writer) {
        w.bools(&self.bits());
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        read_forest(r)
    }
}

impl Persist for LrmTree {
    const TAG: Tag = Tag::LrmTree;

    fn write_payload(&self, w: &mut Writer) {
        w.bools(&self.bp().bits());
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        LrmTree::from_bp(read_forest(r)?)
    }
}

impl Persist for PlainRmqIndex {
    const TAG: Tag = Tag::PlainRmqIndex;

    fn write_payload(&self, w: &mut Writer) {
        w.bools(&self.bp().bits());
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        PlainRmqIndex::from_bp(read_forest(r)?)
    }
}

impl Persist for StrictRunsRmqIndex {
    const TAG: Tag = Tag::StrictRunsRmqIndex;

    fn write_payload(&self, w: &mut Writer) {
        self.heads().write_payload(w);
        self.head_index().write_payload(w);
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        let heads = CompressedBitSeq::read_payload(r)?;
        let index = PlainRmqIndex::read_payload(r)?;
        StrictRunsRmqIndex::from_parts(heads, index)
    }
}

impl Persist for RunsRmqIndex {
    const TAG: Tag = Tag::RunsRmqIndex;

    fn write_payload(&self, w: &mut Writer) {
        self.heads().write_payload(w);
        self.head_index().write_payload(w);
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        let heads = CompressedBitSeq::read_payload(r)?;
        let index = PlainRmqIndex::read_payload(r)?;
        RunsRmqIndex::from_parts(heads, index)
    }
}

const FLAG_LRM: u8 = 1;

/// Sections: header (n, ρ, flags), forest parentheses, merge-tree shape in preorder
/// with the leaf part ids, node bit strings in preorder, optional LRM-tree
/// parentheses.
impl Persist for PermCode {
    const TAG: Tag = Tag::PermCode;

    fn write_payload(&self, w: &mut Writer) {
        w.u64(self.len() as u64);
        w.u64(self.runs() as u64);
        w.u8(if self.lrm_index().is_some() { FLAG_LRM } else { 0 });
        w.bools(&self.forest().bits());
        let plan = self.plan();
        let (shape, leaves) = plan.to_preorder();
        w.bools(&shape);
        for k in leaves {
            w.u64(k as u64);
        }
        let mut stack = vec![plan.root()];
        while let Some(v) = stack.pop() {
            if let MergeNode::Internal { left, right } = plan.nodes()[v] {
                w.raw(self.node_bits()[v].as_ref().expect("internal node").raw());
                stack.push(right);
                stack.push(left);
            }
        }
        if let Some(idx) = self.lrm_index() {
            w.bools(&idx.bp().bits());
        }
    }

    fn read_payload(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.usize()?;
        let rho = r.usize()?;
        let flags = r.u8()?;
        if flags & !FLAG_LRM != 0 {
            return Err(Error::format(format!("unknown flags {flags:#04x}")));
        }
        let forest = read_forest(r)?;
        let shape = r.bools()?;
        let leaves = (0..shape.iter().filter(|&&b| !b).count())
            .map(|_| r.usize())
            .collect::<Result<Vec<_>>>()?;
        let plan = MergeTree::from_preorder(&shape, &leaves)?;
        // node ids of `plan` are preorder ranks
        let node_bits = shape
            .iter()
            .map(|&internal| {
                internal
                    .then(|| r.raw().map(PlainBitSeq::from_raw))
                    .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        let lrm = if flags & FLAG_LRM != 0 {
            Some(PlainRmqIndex::from_bp(read_forest(r)?)?)
        } else {
            None
        };
        let code = PermCode::from_parts(forest, plan, node_bits, lrm)?;
        if code.len() != n || code.runs() != rho {
            return Err(Error::format("header counts do not match the payload"));
        }
        Ok(code)
    }
}

/// Reads only the tag of a container.
pub fn peek_tag(bytes: &[u8]) -> Result<Tag> {
    Ok(unwrap(bytes)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrm::build_lrm_tree;

    const PI: [i64; 9] = [4, 5, 9, 6, 8, 1, 3, 7, 2];

    #[test]
    fn bit_strings_round_trip() {
        for len in [0, 1, 7, 8, 9, 63, 64, 65, 200] {
            let bits: Vec<bool> = (0..len).map(|i| (i * 7 + 3) % 5 < 2).collect();
            let plain = PlainBitSeq::new(&bits);
            let back = PlainBitSeq::from_bytes(&plain.to_bytes()).unwrap();
            assert_eq!(back.to_bools(), bits);
            let comp = CompressedBitSeq::new(&bits);
            let back = CompressedBitSeq::from_bytes(&comp.to_bytes()).unwrap();
            assert_eq!(back.to_bools(), bits);
        }
    }

    #[test]
    fn structures_round_trip() {
        let (tree, _) = build_lrm_tree(&PI);
        let back = LrmTree::from_bytes(&tree.to_bytes()).unwrap();
        assert_eq!(back.parents(), tree.parents());
        let f = BpForest::from_paren_string("(()())(())").unwrap();
        assert_eq!(BpForest::from_bytes(&f.to_bytes()).unwrap(), f);

        let (s, _) = StrictRunsRmqIndex::build(&PI).unwrap();
        let s2 = StrictRunsRmqIndex::from_bytes(&s.to_bytes()).unwrap();
        let (r, _) = RunsRmqIndex::build(&PI).unwrap();
        let r2 = RunsRmqIndex::from_bytes(&r.to_bytes()).unwrap();
        let (p, _) = PlainRmqIndex::build(&PI).unwrap();
        let p2 = PlainRmqIndex::from_bytes(&p.to_bytes()).unwrap();
        for i in 1..=9 {
            for j in i..=9 {
                let want = p.query(i, j).unwrap();
                assert_eq!(p2.query(i, j).unwrap(), want);
                assert_eq!(s2.query(i, j).unwrap(), want);
                let mut c = crate::lrm::Counter::new();
                assert_eq!(r2.query(&PI, i, j, &mut c).unwrap(), want);
            }
        }

        for with in [false, true] {
            let code = PermCode::encode(&PI, with).unwrap();
            let back = PermCode::from_bytes(&code.to_bytes()).unwrap();
            for i in 1..=9 {
                assert_eq!(back.apply(i).unwrap(), code.apply(i).unwrap());
                assert_eq!(back.inverse(i).unwrap(), code.inverse(i).unwrap());
            }
            assert_eq!(back.lrm_index().is_some(), with);
            assert_eq!(back.size_report().total_bits, code.size_report().total_bits);
        }
    }

    #[test]
    fn rejects_bad_containers() {
        let code = PermCode::encode(&PI, false).unwrap();
        let mut bytes = code.to_bytes();
        assert!(matches!(PlainRmqIndex::from_bytes(&bytes), Err(Error::Format(_))));
        bytes[4] = 2;
        let err = PermCode::from_bytes(&bytes).unwrap_err();
        assert!(matches!(err, Error::Format(ref m) if m.contains("version")));
        assert!(matches!(PermCode::from_bytes(b"LRM"), Err(Error::Format(_))));
        let good = code.to_bytes();
        for cut in [HEADER_LEN, HEADER_LEN + 5, good.len() - 1] {
            let mut t = good[..cut].to_vec();
            t[6..14].copy_from_slice(&((cut - HEADER_LEN) as u64).to_le_bytes());
            assert!(PermCode::from_bytes(&t).is_err());
        }
    }
}
