//! Small string helpers shared by the analyzers.

use alloc::string::String;
use unicode_normalization::{is_nfc, UnicodeNormalization};

/// Returns `s` in Unicode normalization form C.
pub fn nfc(s: &str) -> String {
    if is_nfc(s) {
        String::from(s)
    } else {
        s.nfc().collect()
    }
}

pub fn is_nfc_str(s: &str) -> bool {
    is_nfc(s)
}

pub fn starts_uppercase(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// Uppercases the first character only.
pub fn upper_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Lowercases the first character only.
pub fn lower_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Whether a generated form realizes a surface token.
///
/// A capitalized surface token also matches the lowercase form, since any
/// word is capitalized at the start of a sentence. The reverse does not hold:
/// `winde` never matches the noun `Winde`.
pub fn surface_matches(generated: &str, surface: &str) -> bool {
    if generated == surface {
        return true;
    }
    starts_uppercase(surface) && !starts_uppercase(generated) && lower_first(surface) == generated
}

pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_helpers() {
        assert_eq!(upper_first("übel"), "Übel");
        assert_eq!(lower_first("Winde"), "winde");
        assert_eq!(upper_first(""), "");
    }

    #[test]
    fn sentence_initial_capital_matches_lowercase_form() {
        assert!(surface_matches("winde", "Winde"));
        assert!(surface_matches("Winde", "Winde"));
        assert!(!surface_matches("Winde", "winde"));
        assert!(!surface_matches("wind", "Winde"));
    }

    #[test]
    fn nfc_composes() {
        let decomposed = "Ha\u{0308}user";
        assert_eq!(nfc(decomposed), "Häuser");
        assert!(is_nfc_str("Häuser"));
    }
}
