//! Line tokenizer shared by every file format.
//!
//! A `#` at the start of a token begins a comment running to end of line.
//! Columns are 1-based character offsets.

pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<(&'a str, usize)>,
    content_chars: usize,
}

impl<'a> Line<'a> {
    fn parse(number: usize, raw: &'a str) -> Line<'a> {
        let mut tokens = Vec::new();
        let mut content_chars = 0;
        let mut start: Option<(usize, usize)> = None;
        let mut col = 0;
        for (byte, ch) in raw.char_indices() {
            col += 1;
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    tokens.push((&raw[b..byte], c));
                }
                continue;
            }
            if start.is_none() {
                if ch == '#' {
                    break;
                }
                start = Some((byte, col));
            }
            content_chars = col;
        }
        if let Some((b, c)) = start {
            let end = raw[b..].find(char::is_whitespace).map_or(raw.len(), |off| b + off);
            tokens.push((&raw[b..end], c));
        }
        Line {
            number,
            tokens,
            content_chars,
        }
    }

    /// Column just past the last token.
    pub fn end_column(&self) -> usize {
        self.content_chars + 1
    }

    pub fn is_blank(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_number: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last_number: 0,
        }
    }

    /// Next line carrying at least one token.
    pub fn next_content(&mut self) -> Option<Line<'a>> {
        for (i, raw) in self.inner.by_ref() {
            self.last_number = i + 1;
            let line = Line::parse(i + 1, raw);
            if !line.is_blank() {
                return Some(line);
            }
        }
        None
    }

    /// Number of the last line consumed, for end-of-input diagnostics.
    pub fn last_number(&self) -> usize {
        self.last_number.max(1)
    }
}
