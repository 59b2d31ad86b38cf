use serde::Serialize;

/// A region of source text.
///
/// Byte offsets are half-open (`start_byte..end_byte`). Lines and columns are
/// 1-based; columns count Unicode scalar values, not bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub start_byte: usize,
    pub end_byte: usize,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn len(&self) -> usize {
        self.end_byte - self.start_byte
    }

    pub fn is_empty(&self) -> bool {
        self.start_byte == self.end_byte
    }

    /// Smallest span covering both `self` and `other`.
    pub fn cover(&self, other: &SourceSpan) -> SourceSpan {
        let (start, end) = (self.min_start(other), self.max_end(other));
        SourceSpan {
            start_byte: start.0,
            start_line: start.1,
            start_col: start.2,
            end_byte: end.0,
            end_line: end.1,
            end_col: end.2,
        }
    }

    fn min_start(&self, other: &SourceSpan) -> (usize, usize, usize) {
        if self.start_byte <= other.start_byte {
            (self.start_byte, self.start_line, self.start_col)
        } else {
            (other.start_byte, other.start_line, other.start_col)
        }
    }

    fn max_end(&self, other: &SourceSpan) -> (usize, usize, usize) {
        if self.end_byte >= other.end_byte {
            (self.end_byte, self.end_line, self.end_col)
        } else {
            (other.end_byte, other.end_line, other.end_col)
        }
    }

    /// True when the two spans share at least one byte.
    pub fn intersects(&self, other: &SourceSpan) -> bool {
        self.start_byte < other.end_byte && other.start_byte < self.end_byte
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start_byte <= other.start_byte && other.end_byte <= self.end_byte
    }
}

/// Maps byte offsets to line/column positions.
#[derive(Debug, Clone)]
pub struct LineIndex<'a> {
    text: &'a str,
    line_starts: Vec<usize>,
}

impl<'a> LineIndex<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { text, line_starts }
    }

    /// 1-based (line, column) of a byte offset. `offset` must be a char boundary.
    pub fn position(&self, offset: usize) -> (usize, usize) {
        let line = match self.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let col = self.text[self.line_starts[line]..offset].chars().count() + 1;
        (line + 1, col)
    }

    pub fn span(&self, start: usize, end: usize) -> SourceSpan {
        let (start_line, start_col) = self.position(start);
        let (end_line, end_col) = self.position(end);
        SourceSpan {
            start_byte: start,
            end_byte: end,
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_follow_newlines() {
        let idx = LineIndex::new("ab\ncé\n\nx");
        assert_eq!(idx.position(0), (1, 1));
        assert_eq!(idx.position(2), (1, 3));
        assert_eq!(idx.position(3), (2, 1));
        // 'é' is two bytes but one column
        assert_eq!(idx.position(6), (2, 3));
        assert_eq!(idx.position(7), (3, 1));
        assert_eq!(idx.position(8), (4, 1));
        assert_eq!(idx.position(9), (4, 2));
    }

    #[test]
    fn intersection_is_strict_on_touching_spans() {
        let idx = LineIndex::new("abcdef");
        let a = idx.span(0, 3);
        let b = idx.span(3, 6);
        assert!(!a.intersects(&b));
        assert!(a.intersects(&idx.span(2, 4)));
        assert!(idx.span(0, 6).contains(&b));
        assert_eq!(a.cover(&b), idx.span(0, 6));
    }
}
