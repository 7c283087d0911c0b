//! Vertical text ingest and export.
//!
//! One token per line, six tab-separated columns (word, lemma, pos,
//! pos_fine, deprel, head). Structural markup lines open and close
//! `<text>` and `<s>` regions; attribute values are XML-attribute-escaped.
//! Ingest is strict: column drift, stray markup, and tokens outside a
//! `<text>` region are hard errors naming the offending line.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::attr::{Attr, Layer};
use crate::error::CorpusError;
use crate::index::{CorpusIndex, PositionalAttribute};
use crate::lexicon::Lexicon;
use crate::period::PeriodTable;
use crate::region::StructuralRegion;

/// Build an index from vertical text using the default period boundaries.
pub fn build_index<R: BufRead>(reader: R, name: &str) -> Result<CorpusIndex, CorpusError> {
    build_index_with(reader, name, &PeriodTable::default())
}

/// Build an index, bucketing `year` attributes with `periods`.
pub fn build_index_with<R: BufRead>(
    reader: R,
    name: &str,
    periods: &PeriodTable,
) -> Result<CorpusIndex, CorpusError> {
    let mut builder = Builder::new(periods);
    let mut line_no = 0usize;
    for line in reader.lines() {
        line_no += 1;
        let mut line = line?;
        if line.ends_with('\r') {
            line.pop();
        }
        builder.line(line_no, &line)?;
    }
    builder.finish(name)
}

struct Builder<'a> {
    periods: &'a PeriodTable,
    lexicons: Vec<Lexicon>,
    columns: Vec<Vec<u32>>,
    pos: usize,
    text_regions: Vec<StructuralRegion>,
    s_regions: Vec<StructuralRegion>,
    open_text: Option<Open>,
    open_s: Option<Open>,
}

struct Open {
    start: usize,
    attrs: BTreeMap<String, String>,
    line: usize,
}

enum MarkupLine {
    Open(Layer, BTreeMap<String, String>),
    Close(Layer),
}

impl<'a> Builder<'a> {
    fn new(periods: &'a PeriodTable) -> Self {
        Builder {
            periods,
            lexicons: (0..Attr::ALL.len()).map(|_| Lexicon::new()).collect(),
            columns: (0..Attr::ALL.len()).map(|_| Vec::new()).collect(),
            pos: 0,
            text_regions: Vec::new(),
            s_regions: Vec::new(),
            open_text: None,
            open_s: None,
        }
    }

    fn line(&mut self, line_no: usize, line: &str) -> Result<(), CorpusError> {
        if line.starts_with('<') {
            match parse_markup(line_no, line)? {
                MarkupLine::Open(Layer::Text, attrs) => self.open_text(line_no, attrs),
                MarkupLine::Open(Layer::S, attrs) => self.open_s(line_no, attrs),
                MarkupLine::Close(Layer::Text) => self.close_text(line_no),
                MarkupLine::Close(Layer::S) => self.close_s(line_no),
            }
        } else {
            self.token(line_no, line)
        }
    }

    fn open_text(
        &mut self,
        line_no: usize,
        mut attrs: BTreeMap<String, String>,
    ) -> Result<(), CorpusError> {
        if self.open_text.is_some() {
            return Err(CorpusError::Unbalanced {
                line: line_no,
                reason: "<text> opened inside another <text>".into(),
            });
        }
        if attrs.contains_key("period") {
            return Err(CorpusError::ReservedAttribute { line: line_no });
        }
        if let Some(year) = attrs.get("year") {
            let year: i32 = year.parse().map_err(|_| CorpusError::BadYear {
                line: line_no,
                value: year.clone(),
            })?;
            attrs.insert("period".into(), self.periods.assign(year).as_str().into());
        }
        self.open_text = Some(Open {
            start: self.pos,
            attrs,
            line: line_no,
        });
        Ok(())
    }

    fn open_s(
        &mut self,
        line_no: usize,
        attrs: BTreeMap<String, String>,
    ) -> Result<(), CorpusError> {
        if self.open_text.is_none() {
            return Err(CorpusError::Unbalanced {
                line: line_no,
                reason: "<s> outside any <text>".into(),
            });
        }
        if self.open_s.is_some() {
            return Err(CorpusError::Unbalanced {
                line: line_no,
                reason: "<s> opened inside another <s>".into(),
            });
        }
        self.open_s = Some(Open {
            start: self.pos,
            attrs,
            line: line_no,
        });
        Ok(())
    }

    fn close_text(&mut self, line_no: usize) -> Result<(), CorpusError> {
        if self.open_s.is_some() {
            return Err(CorpusError::Unbalanced {
                line: line_no,
                reason: "</text> while an <s> is still open".into(),
            });
        }
        let open = self.open_text.take().ok_or(CorpusError::Unbalanced {
            line: line_no,
            reason: "</text> without a matching <text>".into(),
        })?;
        if self.pos == open.start {
            return Err(CorpusError::EmptyRegion {
                line: line_no,
                layer: "text".into(),
            });
        }
        self.text_regions.push(StructuralRegion {
            start: open.start,
            end: self.pos - 1,
            attrs: open.attrs,
        });
        Ok(())
    }

    fn close_s(&mut self, line_no: usize) -> Result<(), CorpusError> {
        let open = self.open_s.take().ok_or(CorpusError::Unbalanced {
            line: line_no,
            reason: "</s> without a matching <s>".into(),
        })?;
        if self.pos == open.start {
            return Err(CorpusError::EmptyRegion {
                line: line_no,
                layer: "s".into(),
            });
        }
        self.s_regions.push(StructuralRegion {
            start: open.start,
            end: self.pos - 1,
            attrs: open.attrs,
        });
        Ok(())
    }

    fn token(&mut self, line_no: usize, line: &str) -> Result<(), CorpusError> {
        if self.open_text.is_none() {
            return Err(CorpusError::TokenOutsideText { line: line_no });
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != Attr::ALL.len() {
            return Err(CorpusError::ColumnCount {
                line: line_no,
                expected: Attr::ALL.len(),
                found: fields.len(),
            });
        }
        for (col, field) in fields.iter().enumerate() {
            let id = self.lexicons[col].intern(field);
            self.columns[col].push(id);
        }
        self.pos += 1;
        Ok(())
    }

    fn finish(mut self, name: &str) -> Result<CorpusIndex, CorpusError> {
        if let Some(open) = &self.open_s {
            return Err(CorpusError::Unbalanced {
                line: open.line,
                reason: "<s> never closed".into(),
            });
        }
        if let Some(open) = &self.open_text {
            return Err(CorpusError::Unbalanced {
                line: open.line,
                reason: "<text> never closed".into(),
            });
        }
        let mut attributes = Vec::with_capacity(Attr::ALL.len());
        for attr in Attr::ALL.into_iter().rev() {
            let tokens = self.columns.pop().unwrap();
            let lexicon = self.lexicons.pop().unwrap();
            attributes.push(PositionalAttribute::new(attr, lexicon, tokens));
        }
        attributes.reverse();
        Ok(CorpusIndex::from_parts(
            name.to_string(),
            attributes,
            self.text_regions,
            self.s_regions,
        ))
    }
}

fn parse_markup(line_no: usize, line: &str) -> Result<MarkupLine, CorpusError> {
    let err = |reason: &str| CorpusError::Markup {
        line: line_no,
        reason: reason.to_string(),
    };
    let body = line
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| err("markup line must end with '>'"))?;
    if let Some(tag) = body.strip_prefix('/') {
        return match tag {
            "text" => Ok(MarkupLine::Close(Layer::Text)),
            "s" => Ok(MarkupLine::Close(Layer::S)),
            other => Err(err(&format!("unknown closing tag </{other}>"))),
        };
    }
    let (tag, rest) = match body.find(char::is_whitespace) {
        Some(i) => (&body[..i], body[i..].trim_start()),
        None => (body, ""),
    };
    let layer = match tag {
        "text" => Layer::Text,
        "s" => Layer::S,
        other => return Err(err(&format!("unknown tag <{other}>"))),
    };
    let mut attrs = BTreeMap::new();
    let mut rest = rest;
    while !rest.is_empty() {
        let eq = rest
            .find('=')
            .ok_or_else(|| err("expected key=\"value\" attribute"))?;
        let key = rest[..eq].trim_end();
        if key.is_empty()
            || !key
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(err(&format!("invalid attribute name {key:?}")));
        }
        let after = rest[eq + 1..].trim_start();
        let Some(quoted) = after.strip_prefix('"') else {
            return Err(err("attribute value must be double-quoted"));
        };
        let close = quoted
            .find('"')
            .ok_or_else(|| err("unterminated attribute value"))?;
        let raw = &quoted[..close];
        let value = unescape_attr(raw).map_err(|reason| err(&reason))?;
        if attrs.insert(key.to_string(), value).is_some() {
            return Err(err(&format!("duplicate attribute {key:?}")));
        }
        rest = quoted[close + 1..].trim_start();
    }
    Ok(MarkupLine::Open(layer, attrs))
}

/// Escape a string for use inside a double-quoted markup attribute.
pub fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Inverse of [`escape_attr`]; also accepts `&apos;` and decimal
/// character references.
pub fn unescape_attr(raw: &str) -> Result<String, String> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.char_indices();
    while let Some((i, c)) = chars.next() {
        if c != '&' {
            out.push(c);
            continue;
        }
        let rest = &raw[i..];
        let semi = rest
            .find(';')
            .ok_or_else(|| format!("unterminated entity in {raw:?}"))?;
        let entity = &rest[1..semi];
        let decoded = match entity {
            "amp" => '&',
            "lt" => '<',
            "gt" => '>',
            "quot" => '"',
            "apos" => '\'',
            _ => {
                let code = entity
                    .strip_prefix('#')
                    .and_then(|d| d.parse::<u32>().ok())
                    .and_then(char::from_u32)
                    .ok_or_else(|| format!("unknown entity &{entity};"))?;
                code
            }
        };
        out.push(decoded);
        for _ in 0..semi {
            chars.next();
        }
    }
    Ok(out)
}

/// Write the index back out as vertical text. The derived `period`
/// attribute is omitted; re-ingesting the output reproduces it from
/// `year`, so round trips preserve the build digest.
pub fn export_vrt<W: Write>(index: &CorpusIndex, out: &mut W) -> Result<(), CorpusError> {
    let texts = index.regions(Layer::Text);
    let sents = index.regions(Layer::S);
    let mut next_s = 0usize;
    for text in texts {
        write_open(out, "text", &text.attrs, true)?;
        for pos in text.start..=text.end {
            if next_s < sents.len() && sents[next_s].start == pos {
                write_open(out, "s", &sents[next_s].attrs, false)?;
            }
            let mut fields = Vec::with_capacity(Attr::ALL.len());
            for attr in Attr::ALL {
                let v = index.attribute(attr).token_value(pos);
                if v.contains('\t') || v.contains('\n') {
                    return Err(CorpusError::IndexFormat(format!(
                        "token value {v:?} is not representable in vertical text"
                    )));
                }
                fields.push(v);
            }
            if fields[0].starts_with('<') {
                return Err(CorpusError::IndexFormat(format!(
                    "token {:?} would be read back as markup",
                    fields[0]
                )));
            }
            writeln!(out, "{}", fields.join("\t"))?;
            if next_s < sents.len() && sents[next_s].end == pos {
                writeln!(out, "</s>")?;
                next_s += 1;
            }
        }
        writeln!(out, "</text>")?;
    }
    Ok(())
}

fn write_open<W: Write>(
    out: &mut W,
    tag: &str,
    attrs: &BTreeMap<String, String>,
    skip_period: bool,
) -> Result<(), CorpusError> {
    write!(out, "<{tag}")?;
    for (k, v) in attrs {
        if skip_period && k == "period" {
            continue;
        }
        write!(out, " {k}=\"{}\"", escape_attr(v))?;
    }
    writeln!(out, ">")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "<text id=\"t1\" author=\"A &amp; B\" text_category=\"Poetry\" year=\"1858\">\n<s clause_type=\"main\">\nThis\tthis\tDT\tDT\tdet\t2\nis\tbe\tVBZ\tVBZ\tcop\t2\nso\tso\tRB\tRB\tadvmod\t4\ngood\tgood\tJJ\tJJ\tADJ\t0\n.\t.\t.\t.\tpunct\t4\n</s>\n</text>\n";

    #[test]
    fn ingest_sample() {
        let idx = build_index(SAMPLE.as_bytes(), "sample").unwrap();
        assert_eq!(idx.token_count(), 5);
        assert_eq!(idx.attribute(Attr::Word).token_value(3), "good");
        assert_eq!(idx.attribute(Attr::Deprel).token_value(3), "ADJ");
        let text = &idx.regions(Layer::Text)[0];
        assert_eq!((text.start, text.end), (0, 4));
        assert_eq!(text.attrs["author"], "A & B");
        assert_eq!(text.attrs["period"], "late_19c");
        let s = &idx.regions(Layer::S)[0];
        assert_eq!(s.attrs["clause_type"], "main");
    }

    #[test]
    fn negative_year_is_ancient() {
        let src = "<text year=\"-50\">\nurbs\turbs\tNN\tNN\tdep\t0\n</text>\n";
        let idx = build_index(src.as_bytes(), "t").unwrap();
        assert_eq!(idx.regions(Layer::Text)[0].attrs["period"], "ancient");
    }

    #[test]
    fn text_without_year_has_no_period() {
        let src = "<text id=\"x\">\na\ta\tNN\tNN\tdep\t0\n</text>\n";
        let idx = build_index(src.as_bytes(), "t").unwrap();
        assert!(!idx.regions(Layer::Text)[0].attrs.contains_key("period"));
    }

    #[test]
    fn column_drift_names_line() {
        let src = "<text>\na\ta\tNN\tNN\tdep\t0\nb\tb\tNN\n</text>\n";
        match build_index(src.as_bytes(), "t") {
            Err(CorpusError::ColumnCount { line, found, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(found, 3);
            }
            other => panic!("expected column error, got {other:?}"),
        }
    }

    #[test]
    fn token_outside_text_rejected() {
        let src = "a\ta\tNN\tNN\tdep\t0\n";
        assert!(matches!(
            build_index(src.as_bytes(), "t"),
            Err(CorpusError::TokenOutsideText { line: 1 })
        ));
    }

    #[test]
    fn interleaved_markup_rejected() {
        let src = "<text>\n<s>\na\ta\tNN\tNN\tdep\t0\n</text>\n</s>\n";
        assert!(matches!(
            build_index(src.as_bytes(), "t"),
            Err(CorpusError::Unbalanced { line: 4, .. })
        ));
    }

    #[test]
    fn unclosed_text_rejected() {
        let src = "<text>\na\ta\tNN\tNN\tdep\t0\n";
        assert!(matches!(
            build_index(src.as_bytes(), "t"),
            Err(CorpusError::Unbalanced { line: 1, .. })
        ));
    }

    #[test]
    fn empty_region_rejected() {
        let src = "<text>\n<s>\n</s>\na\ta\tNN\tNN\tdep\t0\n</text>\n";
        assert!(matches!(
            build_index(src.as_bytes(), "t"),
            Err(CorpusError::EmptyRegion { line: 3, .. })
        ));
    }

    #[test]
    fn malformed_year_rejected() {
        let src = "<text year=\"MDCCC\">\na\ta\tNN\tNN\tdep\t0\n</text>\n";
        assert!(matches!(
            build_index(src.as_bytes(), "t"),
            Err(CorpusError::BadYear { line: 1, .. })
        ));
    }

    #[test]
    fn explicit_period_rejected() {
        let src = "<text period=\"ancient\">\na\ta\tNN\tNN\tdep\t0\n</text>\n";
        assert!(matches!(
            build_index(src.as_bytes(), "t"),
            Err(CorpusError::ReservedAttribute { line: 1 })
        ));
    }

    #[test]
    fn stray_markup_rejected() {
        for bad in ["<chapter>\n", "<text\n", "<text> x\n", "<text a=b>\n"] {
            let src = format!("{bad}a\ta\tNN\tNN\tdep\t0\n</text>\n");
            assert!(
                matches!(
                    build_index(src.as_bytes(), "t"),
                    Err(CorpusError::Markup { line: 1, .. })
                ),
                "input {bad:?}"
            );
        }
    }

    #[test]
    fn escape_round_trip() {
        let raw = "a & b < c > d \" e ' f";
        assert_eq!(unescape_attr(&escape_attr(raw)).unwrap(), raw);
        assert_eq!(unescape_attr("&apos;&#233;").unwrap(), "'é");
        assert!(unescape_attr("&bogus;").is_err());
        assert!(unescape_attr("&amp").is_err());
    }

    #[test]
    fn export_reproduces_build_digest() {
        let idx = build_index(SAMPLE.as_bytes(), "sample").unwrap();
        let mut out = Vec::new();
        export_vrt(&idx, &mut out).unwrap();
        let again = build_index(out.as_slice(), "re-ingested").unwrap();
        assert_eq!(again.build_digest(), idx.build_digest());
        assert_eq!(again.regions(Layer::Text), idx.regions(Layer::Text));
    }
}
