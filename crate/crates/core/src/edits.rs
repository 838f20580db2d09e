//! Textual auto-fix application: non-overlapping span replacements.

use thiserror::Error;

use crate::span::Span;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EditError {
    /// Overlapping fix spans signal a fix-generation bug, not a user error.
    #[error("internal error: overlapping edits at {a_start}..{a_end} and {b_start}..{b_end}")]
    Overlapping {
        a_start: usize,
        a_end: usize,
        b_start: usize,
        b_end: usize,
    },
    #[error("internal error: edit span {start}..{end} is outside the text (len {len})")]
    OutOfBounds { start: usize, end: usize, len: usize },
    #[error("internal error: edit span {start}..{end} does not fall on character boundaries")]
    NotCharBoundary { start: usize, end: usize },
}

/// Replace each span with its replacement string. Edits are applied
/// right-to-left so earlier offsets stay valid; spans must be pairwise
/// non-overlapping (touching is fine).
pub fn apply_edits(text: &str, edits: &[(Span, String)]) -> Result<String, EditError> {
    let mut ordered: Vec<&(Span, String)> = edits.iter().collect();
    ordered.sort_by_key(|(s, _)| (s.start, s.end));

    for (span, _) in &ordered {
        if span.end > text.len() || span.start > span.end {
            return Err(EditError::OutOfBounds {
                start: span.start,
                end: span.end,
                len: text.len(),
            });
        }
        if !text.is_char_boundary(span.start) || !text.is_char_boundary(span.end) {
            return Err(EditError::NotCharBoundary {
                start: span.start,
                end: span.end,
            });
        }
    }
    for pair in ordered.windows(2) {
        let (a, _) = pair[0];
        let (b, _) = pair[1];
        if a.end > b.start {
            return Err(EditError::Overlapping {
                a_start: a.start,
                a_end: a.end,
                b_start: b.start,
                b_end: b.end,
            });
        }
    }

    let mut out = text.to_string();
    for (span, replacement) in ordered.into_iter().rev() {
        out.replace_range(span.start..span.end, replacement);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(start: usize, end: usize) -> Span {
        Span::new(start, end, 1, 1, 1, 1)
    }

    #[test]
    fn no_edits_is_identity() {
        assert_eq!(apply_edits("abc", &[]).unwrap(), "abc");
    }

    #[test]
    fn single_splice() {
        assert_eq!(
            apply_edits("foo bar", &[(sp(0, 3), "baz".to_string())]).unwrap(),
            "baz bar"
        );
    }

    #[test]
    fn lambda_notation_rewrite() {
        // "λ x => x" -> "fun x ↦ x"
        let text = "λ x => x";
        let lambda_len = "λ".len();
        let arrow_start = text.find("=>").unwrap();
        let edits = vec![
            (sp(0, lambda_len), "fun".to_string()),
            (sp(arrow_start, arrow_start + 2), "↦".to_string()),
        ];
        assert_eq!(apply_edits(text, &edits).unwrap(), "fun x ↦ x");
    }

    #[test]
    fn edits_apply_right_to_left_regardless_of_input_order() {
        let text = "aa bb cc";
        let edits = vec![
            (sp(6, 8), "C".to_string()),
            (sp(0, 2), "A".to_string()),
            (sp(3, 5), "B".to_string()),
        ];
        assert_eq!(apply_edits(text, &edits).unwrap(), "A B C");
    }

    #[test]
    fn overlapping_spans_are_rejected() {
        let err = apply_edits(
            "abcdef",
            &[(sp(0, 3), "x".to_string()), (sp(2, 4), "y".to_string())],
        )
        .unwrap_err();
        assert!(matches!(err, EditError::Overlapping { .. }));
    }

    #[test]
    fn touching_spans_are_fine() {
        assert_eq!(
            apply_edits(
                "abcd",
                &[(sp(0, 2), "x".to_string()), (sp(2, 4), "y".to_string())]
            )
            .unwrap(),
            "xy"
        );
    }

    #[test]
    fn insertions_at_same_point_as_empty_spans() {
        assert_eq!(
            apply_edits("ab", &[(sp(1, 1), "X".to_string())]).unwrap(),
            "aXb"
        );
    }

    #[test]
    fn out_of_bounds_rejected() {
        assert!(matches!(
            apply_edits("ab", &[(sp(1, 5), "x".to_string())]),
            Err(EditError::OutOfBounds { .. })
        ));
    }
}
