use std::fmt;

/// Letters of the Thue–Morse alphabet `{1, 1̄}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TmLetter {
    One,
    OneBar,
}

impl TmLetter {
    pub fn bar(self) -> Self {
        match self {
            TmLetter::One => TmLetter::OneBar,
            TmLetter::OneBar => TmLetter::One,
        }
    }

    /// Scattering magnitude of the letter in the cover: 1/5 or 7/5.
    pub fn cover_weight(self) -> f64 {
        match self {
            TmLetter::One => 0.2,
            TmLetter::OneBar => 1.4,
        }
    }
}

impl fmt::Display for TmLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TmLetter::One => "1",
            TmLetter::OneBar => "1\u{304}",
        })
    }
}

/// `depth`-fold image of `1` under `1 -> 1 1̄`, `1̄ -> 1̄ 1`.
///
/// Each iteration appends the bar-image of the current word, which is the
/// same as substituting letter by letter.
pub fn tm_word(depth: u32) -> Vec<TmLetter> {
    let mut word = Vec::with_capacity(1 << depth);
    word.push(TmLetter::One);
    for _ in 0..depth {
        let barred: Vec<_> = word.iter().map(|l| l.bar()).collect();
        word.extend(barred);
    }
    word
}
