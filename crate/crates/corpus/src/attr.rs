use std::fmt;
use std::str::FromStr;

/// The fixed inventory of positional attributes, in token-column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attr {
    Word,
    Lemma,
    Pos,
    PosFine,
    Deprel,
    Head,
}

impl Attr {
    pub const ALL: [Attr; 6] = [
        Attr::Word,
        Attr::Lemma,
        Attr::Pos,
        Attr::PosFine,
        Attr::Deprel,
        Attr::Head,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attr::Word => "word",
            Attr::Lemma => "lemma",
            Attr::Pos => "pos",
            Attr::PosFine => "pos_fine",
            Attr::Deprel => "deprel",
            Attr::Head => "head",
        }
    }

    /// Column index in a vertical-text token line.
    pub fn column(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Attr {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "word" => Ok(Attr::Word),
            "lemma" => Ok(Attr::Lemma),
            "pos" => Ok(Attr::Pos),
            "pos_fine" => Ok(Attr::PosFine),
            "deprel" => Ok(Attr::Deprel),
            "head" => Ok(Attr::Head),
            _ => Err(()),
        }
    }
}

/// Structural annotation layers. `Text` regions partition the corpus;
/// `S` regions sit inside texts and may leave gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Text,
    S,
}

impl Layer {
    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Text => "text",
            Layer::S => "s",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Layer {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Layer::Text),
            "s" => Ok(Layer::S),
            _ => Err(()),
        }
    }
}

/// Metadata attributes addressable in filters and grouping, per layer.
/// `period` is derived from `year` at ingest.
pub fn layer_of_structural_attr(name: &str) -> Option<Layer> {
    match name {
        "author" | "text_category" | "year" | "period" => Some(Layer::Text),
        "clause_type" | "sentiment" | "subjectivity" => Some(Layer::S),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attr_columns_follow_declaration_order() {
        for (i, a) in Attr::ALL.iter().enumerate() {
            assert_eq!(a.column(), i);
            assert_eq!(a.as_str().parse::<Attr>(), Ok(*a));
        }
        assert!("POS".parse::<Attr>().is_err());
    }

    #[test]
    fn structural_schema_layers() {
        assert_eq!(layer_of_structural_attr("text_category"), Some(Layer::Text));
        assert_eq!(layer_of_structural_attr("period"), Some(Layer::Text));
        assert_eq!(layer_of_structural_attr("clause_type"), Some(Layer::S));
        assert_eq!(layer_of_structural_attr("title"), None);
    }
}
