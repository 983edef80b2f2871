//! Character-level helpers shared by the linkers.
//!
//! All offsets in this crate count Unicode scalar values, never bytes.

/// Length-preserving case fold of a single character.
///
/// Characters whose lowercase mapping expands to more than one scalar value
/// (e.g. `'İ'`) fold to themselves; see [`fold_changes_length`].
pub fn fold_char(c: char) -> char {
    if c.is_ascii() {
        return c.to_ascii_lowercase();
    }
    match c {
        // final sigma folds with sigma
        'ς' => 'σ',
        _ => {
            let mut lower = c.to_lowercase();
            match (lower.next(), lower.next()) {
                (Some(l), None) => l,
                _ => c,
            }
        }
    }
}

/// True when the full lowercase mapping of `c` is not a single character.
pub fn fold_changes_length(c: char) -> bool {
    !c.is_ascii() && c.to_lowercase().count() != 1
}

pub fn fold_str(s: &str) -> String {
    s.chars().map(fold_char).collect()
}

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

/// Number of Unicode scalar values in `s`.
pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Slice `s` by scalar-value offsets. Out-of-range bounds are clamped.
pub fn char_slice(s: &str, start: usize, end: usize) -> &str {
    let mut indices = s.char_indices().map(|(i, _)| i).chain(std::iter::once(s.len()));
    let from = indices.by_ref().nth(start).unwrap_or(s.len());
    let to = if end > start {
        indices.nth(end - start - 1).unwrap_or(s.len())
    } else {
        from
    };
    &s[from..to]
}

pub fn is_token_char(c: char) -> bool {
    c.is_alphanumeric()
}
