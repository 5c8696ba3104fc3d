use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub fn inverted(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word in the free group on some generating set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    /// Concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn power(&self, exponent: u32) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * exponent as usize);
        for _ in 0..exponent {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Exponent sum of every generator, over `num_generators` columns.
    pub fn exponent_vector(&self, num_generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_generators];
        for l in &self.letters {
            v[l.generator] += l.sign();
        }
        v
    }

    /// Replace every letter by a word (its image under a substitution).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut letters = Vec::new();
        for l in &self.letters {
            let img = &images[l.generator];
            if l.inverse {
                letters.extend(img.letters.iter().rev().map(|x| x.inverted()));
            } else {
                letters.extend_from_slice(&img.letters);
            }
        }
        Word { letters }
    }

    /// Shift every generator index by `offset`.
    pub fn shifted(&self, offset: usize) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(l.generator + offset, l.inverse))
                .collect(),
        }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Render with the given generator names, `name` / `name^-1` tokens.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

/// Freely reduce a word. Idempotent; never increases length.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word { letters: out }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self
                .names
                .get(l.generator)
                .map(String::as_str)
                .unwrap_or("?");
            if l.inverse {
                write!(f, "{name}^-1")?;
            } else {
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &[(usize, bool)]) -> Word {
        Word::from_letters(spec.iter().map(|&(g, i)| Letter::new(g, i)).collect())
    }

    #[test]
    fn cancellation() {
        assert!(free_reduce(&w(&[(0, false), (0, true)])).is_empty());
        let r = free_reduce(&w(&[(0, false), (1, false), (1, true), (0, false)]));
        assert_eq!(r, w(&[(0, false), (0, false)]));
    }

    #[test]
    fn klein_relator_is_reduced() {
        let klein = w(&[(0, false), (1, false), (0, false), (1, true)]);
        assert_eq!(free_reduce(&klein), klein);
        assert!(klein.is_freely_reduced());
    }

    #[test]
    fn nested_cancellation() {
        // a b c c^-1 b^-1 a^-1 -> empty
        let x = w(&[(0, false), (1, false), (2, false), (2, true), (1, true), (0, true)]);
        assert!(free_reduce(&x).is_empty());
    }

    #[test]
    fn substitution_of_inverse_letter() {
        // (a b)^-1 under a -> x y
        let images = vec![w(&[(0, false), (1, false)]), w(&[(1, true)])];
        let word = w(&[(0, true)]);
        assert_eq!(word.substitute(&images), w(&[(1, true), (0, true)]));
    }

    proptest::proptest! {
        #[test]
        fn reduce_idempotent_and_shrinking(spec in proptest::collection::vec((0usize..3, proptest::bool::ANY), 0..20)) {
            let word = w(&spec);
            let r = free_reduce(&word);
            proptest::prop_assert!(r.len() <= word.len());
            proptest::prop_assert!(r.is_freely_reduced());
            proptest::prop_assert_eq!(free_reduce(&r), r.clone());
            // reduced form of w w^-1 is empty
            proptest::prop_assert!(free_reduce(&word.concat(&word.inverse())).is_empty());
        }
    }
}
