//! Source spans and line/column bookkeeping.
//!
//! Columns count Unicode scalar values (so `↦`, `λ` and `·` are one column
//! each), byte offsets index into the original UTF-8 text. Both line and
//! column are 1-based; byte ranges are half-open.

/// A byte range in one source file together with its line/column positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    /// Byte offset of the first byte, 0-based.
    pub start: usize,
    /// Byte offset one past the last byte (exclusive).
    pub end: usize,
    /// 1-based line of `start`.
    pub line: u32,
    /// 1-based column of `start`, counted in Unicode scalar values.
    pub col: u32,
    /// 1-based line of `end`.
    pub end_line: u32,
    /// 1-based column of `end`.
    pub end_col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32, end_line: u32, end_col: u32) -> Self {
        debug_assert!(start <= end);
        Span {
            start,
            end,
            line,
            col,
            end_line,
            end_col,
        }
    }

    /// A zero-width span at the given position.
    pub fn caret(offset: usize, line: u32, col: u32) -> Self {
        Span::new(offset, offset, line, col, line, col)
    }

    /// Smallest span covering both `a` and `b`.
    pub fn join(a: Span, b: Span) -> Span {
        let (start, line, col) = if a.start <= b.start {
            (a.start, a.line, a.col)
        } else {
            (b.start, b.line, b.col)
        };
        let (end, end_line, end_col) = if a.end >= b.end {
            (a.end, a.end_line, a.end_col)
        } else {
            (b.end, b.end_line, b.end_col)
        };
        Span::new(start, end, line, col, end_line, end_col)
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn contains_offset(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end.max(self.start + 1)
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Byte offsets of line starts, for offset -> line/col lookups and for
/// slicing whole lines out of a file.
#[derive(Debug, Clone)]
pub struct LineIndex {
    line_starts: Vec<usize>,
    text_len: usize,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i + 1);
            }
        }
        LineIndex {
            line_starts,
            text_len: text.len(),
        }
    }

    pub fn line_count(&self) -> usize {
        self.line_starts.len()
    }

    /// Byte offset where the 1-based `line` starts.
    pub fn line_start(&self, line: usize) -> usize {
        self.line_starts
            .get(line.saturating_sub(1))
            .copied()
            .unwrap_or(self.text_len)
    }

    /// 1-based line containing the byte `offset`.
    pub fn line_of(&self, offset: usize) -> usize {
        match self.line_starts.binary_search(&offset) {
            Ok(i) => i + 1,
            Err(i) => i,
        }
    }

    /// (line, col) of a byte offset; `text` must be the indexed text.
    pub fn position(&self, text: &str, offset: usize) -> (u32, u32) {
        let offset = offset.min(self.text_len);
        let line = self.line_of(offset);
        let start = self.line_start(line);
        let col = text[start..offset].chars().count() + 1;
        (line as u32, col as u32)
    }

    /// Span for an arbitrary byte range of `text`.
    pub fn span_of_range(&self, text: &str, start: usize, end: usize) -> Span {
        let (line, col) = self.position(text, start);
        let (end_line, end_col) = self.position(text, end);
        Span::new(start, end, line, col, end_line, end_col)
    }
}
