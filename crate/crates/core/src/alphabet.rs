//! Finite alphabets, symbols and words.

use crate::error::{Error, Result};

/// Index of a letter in `[0, size)`.
pub type Symbol = u32;

/// Finite sequence of symbols.
pub type Word = Vec<Symbol>;

const DEFAULT_GLYPHS: &str = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// A finite alphabet, optionally with a glyph per symbol for text streams.
///
/// Without explicit glyphs, symbols render as digits then lowercase then
/// uppercase letters, which covers alphabets of up to 62 symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: usize,
    glyphs: Option<Vec<char>>,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("alphabet size must be at least 1".into()));
        }
        if size > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("alphabet size {size} too large")));
        }
        Ok(Self { size, glyphs: None })
    }

    pub fn with_glyphs(glyphs: impl IntoIterator<Item = char>) -> Result<Self> {
        let glyphs: Vec<char> = glyphs.into_iter().collect();
        if glyphs.is_empty() {
            return Err(Error::InvalidParameter("glyph table is empty".into()));
        }
        for (i, g) in glyphs.iter().enumerate() {
            if glyphs[..i].contains(g) {
                return Err(Error::InvalidParameter(format!("duplicate glyph {g:?}")));
            }
            if g.is_whitespace() {
                return Err(Error::InvalidParameter("whitespace cannot be a glyph".into()));
            }
        }
        Ok(Self {
            size: glyphs.len(),
            glyphs: Some(glyphs),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn has_custom_glyphs(&self) -> bool {
        self.glyphs.is_some()
    }

    pub fn glyph(&self, symbol: Symbol) -> Option<char> {
        if symbol as usize >= self.size {
            return None;
        }
        match &self.glyphs {
            Some(g) => Some(g[symbol as usize]),
            None => DEFAULT_GLYPHS.chars().nth(symbol as usize),
        }
    }

    pub fn symbol_of(&self, glyph: char) -> Option<Symbol> {
        let pos = match &self.glyphs {
            Some(g) => g.iter().position(|&c| c == glyph),
            None => DEFAULT_GLYPHS.chars().position(|c| c == glyph),
        }?;
        (pos < self.size).then_some(pos as Symbol)
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        word.iter().all(|&s| (s as usize) < self.size)
    }

    pub fn check(&self, word: &[Symbol]) -> Result<()> {
        match word.iter().find(|&&s| (s as usize) >= self.size) {
            Some(&symbol) => Err(Error::SymbolOutOfRange {
                symbol,
                size: self.size,
            }),
            None => Ok(()),
        }
    }

    /// Renders a word with this alphabet's glyphs.
    pub fn render(&self, word: &[Symbol]) -> Result<String> {
        word.iter()
            .map(|&s| {
                self.glyph(s).ok_or(Error::SymbolOutOfRange {
                    symbol: s,
                    size: self.size,
                })
            })
            .collect()
    }

    /// Parses glyphs into a word. On failure returns the byte position of the
    /// first unknown glyph.
    pub fn parse(&self, text: &str) -> std::result::Result<Word, usize> {
        text.char_indices()
            .map(|(pos, c)| self.symbol_of(c).ok_or(pos))
            .collect()
    }
}

/// Iterates all words of length `len` over `size` symbols in lexicographic order.
pub fn all_words(size: usize, len: usize) -> impl Iterator<Item = Word> {
    let mut next = if size == 0 && len > 0 {
        None
    } else {
        Some(vec![0 as Symbol; len])
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = len;
        while i > 0 {
            i -= 1;
            if (succ[i] as usize) + 1 < size {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    })
}

/// Word of length `len` spelling `value` in base `base`, most significant first.
pub fn word_from_index(mut value: u64, base: usize, len: usize) -> Word {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = (value % base as u64) as Symbol;
        value /= base as u64;
    }
    w
}

pub fn is_prefix(prefix: &[Symbol], word: &[Symbol]) -> bool {
    prefix.len() <= word.len() && word[..prefix.len()] == *prefix
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_glyphs_roundtrip() {
        let a = Alphabet::new(12).unwrap();
        let w = a.parse("0ab9").unwrap();
        assert_eq!(w, vec![0, 10, 11, 9]);
        assert_eq!(a.render(&w).unwrap(), "0ab9");
        assert_eq!(a.parse("0c"), Err(1));
    }

    #[test]
    fn custom_glyphs() {
        let a = Alphabet::with_glyphs("ht".chars()).unwrap();
        assert_eq!(a.parse("htth").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(a.parse("hX"), Err(1));
        assert!(Alphabet::with_glyphs("aa".chars()).is_err());
    }

    #[test]
    fn enumerates_words_lexicographically() {
        let words: Vec<_> = all_words(2, 2).collect();
        assert_eq!(words, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_words(3, 0).count(), 1);
        assert_eq!(all_words(3, 4).count(), 81);
        assert_eq!(word_from_index(5, 2, 4), vec![0, 1, 0, 1]);
    }
}
