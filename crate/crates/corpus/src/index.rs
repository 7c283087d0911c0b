use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use regex::RegexBuilder;
use sha2::{Digest, Sha256};

use crate::attr::{Attr, Layer};
use crate::error::CorpusError;
use crate::lexicon::Lexicon;
use crate::region::{region_at, StructuralRegion};

const MAGIC: &[u8; 7] = b"CORQIDX";
const FORMAT_VERSION: u16 = 1;

/// One token-aligned attribute column: a lexicon plus one id per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalAttribute {
    name: Attr,
    lexicon: Lexicon,
    tokens: Vec<u32>,
}

impl PositionalAttribute {
    pub(crate) fn new(name: Attr, lexicon: Lexicon, tokens: Vec<u32>) -> Self {
        PositionalAttribute {
            name,
            lexicon,
            tokens,
        }
    }

    pub fn name(&self) -> Attr {
        self.name
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn token_id(&self, pos: usize) -> u32 {
        self.tokens[pos]
    }

    pub fn token_value(&self, pos: usize) -> &str {
        self.lexicon.value(self.tokens[pos])
    }
}

/// Immutable indexed corpus: six positional attribute columns plus
/// text and sentence regions. Built once, then only queried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusIndex {
    name: String,
    token_count: usize,
    attributes: Vec<PositionalAttribute>,
    text_regions: Vec<StructuralRegion>,
    s_regions: Vec<StructuralRegion>,
    build_digest: String,
}

/// Compile `pattern` so it must match an entire attribute value.
/// Case-insensitive matching uses Unicode simple case folding.
pub fn anchored_regex(pattern: &str, case_insensitive: bool) -> Result<regex::Regex, CorpusError> {
    RegexBuilder::new(&format!("^(?:{pattern})$"))
        .case_insensitive(case_insensitive)
        .build()
        .map_err(|source| CorpusError::BadRegex {
            pattern: pattern.to_string(),
            source,
        })
}

impl CorpusIndex {
    pub(crate) fn from_parts(
        name: String,
        attributes: Vec<PositionalAttribute>,
        text_regions: Vec<StructuralRegion>,
        s_regions: Vec<StructuralRegion>,
    ) -> Self {
        debug_assert_eq!(attributes.len(), Attr::ALL.len());
        let token_count = attributes[0].tokens.len();
        debug_assert!(attributes.iter().all(|a| a.tokens.len() == token_count));
        let mut index = CorpusIndex {
            name,
            token_count,
            attributes,
            text_regions,
            s_regions,
            build_digest: String::new(),
        };
        index.build_digest = hex::encode(Sha256::digest(index.encode_content()));
        index
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn token_count(&self) -> usize {
        self.token_count
    }

    /// Content hash of the index (everything except the display name).
    pub fn build_digest(&self) -> &str {
        &self.build_digest
    }

    pub fn attribute(&self, attr: Attr) -> &PositionalAttribute {
        &self.attributes[attr.column()]
    }

    pub fn attributes(&self) -> &[PositionalAttribute] {
        &self.attributes
    }

    pub fn regions(&self, layer: Layer) -> &[StructuralRegion] {
        match layer {
            Layer::Text => &self.text_regions,
            Layer::S => &self.s_regions,
        }
    }

    /// Region of `layer` covering token position `pos`, if any.
    pub fn region_at(&self, layer: Layer, pos: usize) -> Option<&StructuralRegion> {
        region_at(self.regions(layer), pos)
    }

    /// Ids of lexicon values fully matched by `pattern`.
    pub fn lexicon_match(
        &self,
        attr: Attr,
        pattern: &str,
        case_insensitive: bool,
    ) -> Result<BTreeSet<u32>, CorpusError> {
        let re = anchored_regex(pattern, case_insensitive)?;
        let lex = self.attribute(attr).lexicon();
        Ok((0..lex.len() as u32)
            .filter(|&id| re.is_match(lex.value(id)))
            .collect())
    }

    /// Metadata attribute names observed on regions of `layer`.
    pub fn layer_attr_names(&self, layer: Layer) -> BTreeSet<&str> {
        self.regions(layer)
            .iter()
            .flat_map(|r| r.attrs.keys().map(String::as_str))
            .collect()
    }

    /// Distinct values observed for one metadata attribute of `layer`.
    pub fn layer_attr_values(&self, layer: Layer, attr_name: &str) -> BTreeSet<&str> {
        self.regions(layer)
            .iter()
            .filter_map(|r| r.attrs.get(attr_name).map(String::as_str))
            .collect()
    }

    // --- persistence ---------------------------------------------------

    /// Canonical byte encoding of the index content. The build digest is
    /// the SHA-256 of exactly these bytes.
    fn encode_content(&self) -> Vec<u8> {
        let mut out = Vec::new();
        put_u64(&mut out, self.token_count as u64);
        for attr in &self.attributes {
            put_str(&mut out, attr.name.as_str());
            put_u32(&mut out, attr.lexicon.len() as u32);
            for v in attr.lexicon.values() {
                put_str(&mut out, v);
            }
            for &id in &attr.tokens {
                put_u32(&mut out, id);
            }
        }
        for regions in [&self.text_regions, &self.s_regions] {
            put_u32(&mut out, regions.len() as u32);
            for r in regions {
                put_u64(&mut out, r.start as u64);
                put_u64(&mut out, r.end as u64);
                put_u32(&mut out, r.attrs.len() as u32);
                for (k, v) in &r.attrs {
                    put_str(&mut out, k);
                    put_str(&mut out, v);
                }
            }
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        let content = self.encode_content();
        let mut out = Vec::with_capacity(content.len() + 64);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        put_str(&mut out, &self.name);
        out.extend_from_slice(&content);
        out.extend_from_slice(&Sha256::digest(&content));
        fs::write(path, out)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CorpusIndex, CorpusError> {
        let bytes = fs::read(path)?;
        let mut cur = Cursor::new(&bytes);
        if cur.take(MAGIC.len())? != MAGIC.as_slice() {
            return Err(CorpusError::IndexFormat("bad magic bytes".into()));
        }
        let version = u16::from_le_bytes(cur.take(2)?.try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(CorpusError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let name = cur.get_str()?;
        let content_start = cur.pos;
        if bytes.len() < content_start + 32 {
            return Err(CorpusError::IndexFormat("unexpected end of file".into()));
        }
        let content = &bytes[content_start..bytes.len() - 32];
        let stored_digest = &bytes[bytes.len() - 32..];
        if Sha256::digest(content).as_slice() != stored_digest {
            return Err(CorpusError::DigestMismatch);
        }

        let mut cur = Cursor::new(content);
        let token_count = cur.get_u64()? as usize;
        let mut attributes = Vec::with_capacity(Attr::ALL.len());
        for expected in Attr::ALL {
            let attr_name = cur.get_str()?;
            if attr_name != expected.as_str() {
                return Err(CorpusError::IndexFormat(format!(
                    "attribute order: expected {expected}, found {attr_name}"
                )));
            }
            let lex_len = cur.get_u32()? as usize;
            let mut entries = Vec::with_capacity(lex_len);
            for _ in 0..lex_len {
                entries.push(cur.get_str()?);
            }
            let lexicon = Lexicon::from_entries(entries).map_err(CorpusError::IndexFormat)?;
            let mut tokens = Vec::with_capacity(token_count);
            for _ in 0..token_count {
                let id = cur.get_u32()?;
                if id as usize >= lexicon.len() {
                    return Err(CorpusError::IndexFormat(format!(
                        "token id {id} out of range for {expected} lexicon"
                    )));
                }
                tokens.push(id);
            }
            attributes.push(PositionalAttribute::new(expected, lexicon, tokens));
        }
        let mut layers = Vec::with_capacity(2);
        for layer_name in ["text", "s"] {
            let count = cur.get_u32()? as usize;
            let mut regions: Vec<StructuralRegion> = Vec::with_capacity(count);
            for _ in 0..count {
                let start = cur.get_u64()? as usize;
                let end = cur.get_u64()? as usize;
                if start > end || end >= token_count {
                    return Err(CorpusError::IndexFormat(format!(
                        "invalid {layer_name} region {start}..={end}"
                    )));
                }
                if let Some(prev) = regions.last() {
                    if start <= prev.end {
                        return Err(CorpusError::IndexFormat(format!(
                            "{layer_name} regions overlap or are unsorted at {start}"
                        )));
                    }
                }
                let attr_count = cur.get_u32()? as usize;
                let mut attrs = std::collections::BTreeMap::new();
                for _ in 0..attr_count {
                    let k = cur.get_str()?;
                    let v = cur.get_str()?;
                    attrs.insert(k, v);
                }
                regions.push(StructuralRegion { start, end, attrs });
            }
            layers.push(regions);
        }
        if cur.pos != content.len() {
            return Err(CorpusError::IndexFormat("trailing bytes".into()));
        }
        let s_regions = layers.pop().unwrap();
        let text_regions = layers.pop().unwrap();
        let index = CorpusIndex::from_parts(name, attributes, text_regions, s_regions);
        Ok(index)
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Cursor { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], CorpusError> {
        if self.pos + n > self.bytes.len() {
            return Err(CorpusError::IndexFormat("unexpected end of file".into()));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn get_u32(&mut self) -> Result<u32, CorpusError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn get_u64(&mut self) -> Result<u64, CorpusError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn get_str(&mut self) -> Result<String, CorpusError> {
        let len = self.get_u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| CorpusError::IndexFormat("invalid utf-8 in string".into()))
    }
}
