use std::collections::HashMap;

/// Bijection between attribute value strings and dense u32 ids.
/// Ids are assigned in first-seen order during ingest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Id for `value`, interning it if unseen.
    pub fn intern(&mut self, value: &str) -> u32 {
        if let Some(&id) = self.ids.get(value) {
            return id;
        }
        let id = u32::try_from(self.entries.len()).expect("lexicon overflow");
        self.entries.push(value.to_string());
        self.ids.insert(value.to_string(), id);
        id
    }

    pub fn id(&self, value: &str) -> Option<u32> {
        self.ids.get(value).copied()
    }

    /// Panics if `id` was not issued by this lexicon.
    pub fn value(&self, id: u32) -> &str {
        &self.entries[id as usize]
    }

    pub fn values(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    /// Rebuild the reverse map from an id-ordered entry list (index load path).
    pub(crate) fn from_entries(entries: Vec<String>) -> Result<Self, String> {
        let mut ids = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if ids.insert(e.clone(), i as u32).is_some() {
                return Err(format!("duplicate lexicon entry {e:?}"));
            }
        }
        Ok(Lexicon { entries, ids })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intern_is_idempotent_and_bijective() {
        let mut lex = Lexicon::new();
        let a = lex.intern("so");
        let b = lex.intern("good");
        assert_eq!(lex.intern("so"), a);
        assert_ne!(a, b);
        assert_eq!(lex.value(a), "so");
        assert_eq!(lex.id("good"), Some(b));
        assert_eq!(lex.id("missing"), None);
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn from_entries_rejects_duplicates() {
        assert!(Lexicon::from_entries(vec!["a".into(), "a".into()]).is_err());
        let lex = Lexicon::from_entries(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(lex.id("y"), Some(1));
    }
}
