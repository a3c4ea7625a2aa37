//! Colors and colored words.
//!
//! A word labels a tree node by the slot colors met on the way down from the
//! root, preceded by a root letter (always `0` for melons rooted on color 0).
//! The textual form is `0;10132120312`; colors of ten and above are written in
//! brackets, e.g. `0;1[12]3`. Surrounding parentheses are accepted on input.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest supported ambient dimension.
pub const MIN_DIM: usize = 2;
/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

pub fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

/// A letter of the alphabet `{0, ..., D}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Color(u8);

impl Color {
    pub const ZERO: Color = Color(0);

    /// Checked constructor: `value` must not exceed `dim`.
    pub fn new(value: usize, dim: usize) -> Result<Color> {
        if value <= dim && value <= MAX_DIM {
            Ok(Color(value as u8))
        } else {
            Err(Error::ColorOutOfRange { color: value, dim })
        }
    }

    pub(crate) const fn from_raw(value: u8) -> Color {
        Color(value)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn check(self, dim: usize) -> Result<()> {
        if self.index() <= dim {
            Ok(())
        } else {
            Err(Error::ColorOutOfRange { color: self.index(), dim })
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 10 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "[{}]", self.0)
        }
    }
}

/// Root letter plus the letter sequence read along a root-to-node path.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredWord {
    root: Color,
    letters: Vec<Color>,
}

impl ColoredWord {
    pub fn new(root: Color, letters: Vec<Color>) -> Self {
        ColoredWord { root, letters }
    }

    /// Word with root letter 0.
    pub fn rooted(letters: Vec<Color>) -> Self {
        ColoredWord { root: Color::ZERO, letters }
    }

    /// Builds a word from plain integers, validating each against `dim`.
    pub fn from_values(root: usize, letters: &[usize], dim: usize) -> Result<Self> {
        let root = Color::new(root, dim)?;
        let letters = letters.iter().map(|&c| Color::new(c, dim)).collect::<Result<Vec<_>>>()?;
        Ok(ColoredWord { root, letters })
    }

    pub fn root_letter(&self) -> Color {
        self.root
    }

    pub fn letters(&self) -> &[Color] {
        &self.letters
    }

    /// Tree depth of the labelled node, i.e. the number of letters after the root letter.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Validates every letter (root included) against `dim`.
    pub fn check(&self, dim: usize) -> Result<()> {
        self.root.check(dim)?;
        self.letters.iter().try_for_each(|c| c.check(dim))
    }

    /// Prefix of the word with the first `len` letters.
    pub fn prefix(&self, len: usize) -> ColoredWord {
        ColoredWord { root: self.root, letters: self.letters[..len].to_vec() }
    }

    /// Compact token used by the tree serialization: root letter followed by
    /// the letters, no separator.
    pub fn compact(&self) -> String {
        let mut s = self.root.to_string();
        for c in &self.letters {
            s.push_str(&c.to_string());
        }
        s
    }

    /// Parses the compact form produced by [`ColoredWord::compact`].
    pub fn parse_compact(token: &str) -> Result<Self> {
        let mut colors = parse_letters(token)?;
        if colors.is_empty() {
            return Err(Error::Parse("empty word token".into()));
        }
        let root = colors.remove(0);
        Ok(ColoredWord { root, letters: colors })
    }
}

fn parse_letters(s: &str) -> Result<Vec<Color>> {
    let mut out = Vec::new();
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        match ch {
            '0'..='9' => out.push(Color::from_raw(ch as u8 - b'0')),
            '[' => {
                let mut digits = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(d) if d.is_ascii_digit() => digits.push(d),
                        _ => return Err(Error::Parse(format!("unterminated bracket in {s:?}"))),
                    }
                }
                let v: usize = digits.parse().map_err(|_| Error::Parse(format!("bad bracketed color in {s:?}")))?;
                if v > MAX_DIM {
                    return Err(Error::ColorOutOfRange { color: v, dim: MAX_DIM });
                }
                out.push(Color::from_raw(v as u8));
            }
            c if c.is_whitespace() => {}
            _ => return Err(Error::Parse(format!("unexpected character {ch:?} in {s:?}"))),
        }
    }
    Ok(out)
}

impl fmt::Display for ColoredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.root)?;
        for c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ColoredWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('(').map(|r| r.strip_suffix(')').unwrap_or(r)).unwrap_or(s);
        let (root, body) = s.split_once(';').ok_or_else(|| Error::Parse(format!("missing ';' in word {s:?}")))?;
        let root = parse_letters(root)?;
        if root.len() != 1 {
            return Err(Error::Parse(format!("root must be a single letter in {s:?}")));
        }
        Ok(ColoredWord { root: root[0], letters: parse_letters(body)? })
    }
}
