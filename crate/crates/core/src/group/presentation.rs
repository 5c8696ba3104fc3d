use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::word::{free_reduce, Letter, Word};
use super::GroupError;

/// A finite presentation `<generators | relators>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    index: HashMap<String, usize>,
}

/// On-disk form of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

impl Presentation {
    /// Build a presentation, freely reducing the relators.
    ///
    /// Relators that reduce to the empty word are rejected, as are duplicate or
    /// empty generator names and out-of-range generator indices.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        let mut index = HashMap::new();
        for (i, name) in generators.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('^') {
                return Err(GroupError::BadGeneratorName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(GroupError::DuplicateGenerator(name.clone()));
            }
        }
        let mut reduced = Vec::with_capacity(relators.len());
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(GroupError::GeneratorOutOfRange(g));
                }
            }
            let r = free_reduce(r);
            if r.is_empty() {
                return Err(GroupError::TrivialRelator(i));
            }
            reduced.push(r);
        }
        Ok(Presentation {
            generators,
            relators: reduced,
            index,
        })
    }

    /// Parse generator names and textual relators.
    pub fn parse<S: AsRef<str>>(generators: &[S], relators: &[S]) -> Result<Self, GroupError> {
        let gens: Vec<String> = generators.iter().map(|s| s.as_ref().to_string()).collect();
        let skeleton = Presentation::new(gens.clone(), Vec::new())?;
        let words = relators
            .iter()
            .map(|r| skeleton.parse_word(r.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(gens, words)
    }

    pub fn free(names: &[&str]) -> Self {
        Presentation::parse::<&str>(names, &[]).expect("valid generator names")
    }

    pub fn from_file(file: &PresentationFile) -> Result<Self, GroupError> {
        Presentation::parse(&file.generators, &file.relators)
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let file: PresentationFile =
            serde_json::from_str(text).map_err(|e| GroupError::Json(e.to_string()))?;
        Presentation::from_file(&file)
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| self.format_word(r)).collect(),
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Parse whitespace separated `name` / `name^-1` tokens. The empty string
    /// (or a lone `1`) is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, GroupError> {
        let mut word = Word::empty();
        for token in text.split_whitespace() {
            if token == "1" && self.generator_index("1").is_none() {
                continue;
            }
            let (name, inverse) = match token.split_once('^') {
                None => (token, false),
                Some((name, "-1")) => (name, true),
                Some((name, "1")) => (name, false),
                Some(_) => return Err(GroupError::BadToken(token.to_string())),
            };
            let g = self
                .generator_index(name)
                .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))?;
            word.push(Letter::new(g, inverse));
        }
        Ok(word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Presentation with extra relators appended.
    pub fn with_relators(&self, extra: Vec<Word>) -> Result<Self, GroupError> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Presentation::new(self.generators.clone(), rels)
    }

    /// Direct product: disjoint union of generators, both relator sets, and
    /// commutators between generators of different factors.
    pub fn direct_product(&self, other: &Presentation) -> Result<Self, GroupError> {
        let offset = self.num_generators();
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        let mut rels = self.relators.clone();
        rels.extend(other.relators.iter().map(|r| r.shifted(offset)));
        for i in 0..offset {
            for j in 0..other.num_generators() {
                let (a, b) = (Letter::pos(i), Letter::pos(offset + j));
                rels.push(Word::from_letters(vec![a, b, a.inverted(), b.inverted()]));
            }
        }
        Presentation::new(gens, rels)
    }
}
