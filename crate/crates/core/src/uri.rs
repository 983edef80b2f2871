//! URI normalization for comparing system links with hand-entered gold URLs.

use percent_encoding::percent_decode_str;

/// Canonical form of an entity URI.
///
/// Lowercases scheme and host, decodes percent-escapes, writes Wikipedia titles
/// with underscores and strips trailing slashes. The steps are repeated until
/// nothing changes, which makes the function idempotent.
pub fn normalize_uri(uri: &str) -> String {
    let mut current = uri.to_string();
    for _ in 0..16 {
        let next = normalize_once(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn normalize_once(uri: &str) -> String {
    let decoded = percent_decode_str(uri.trim()).decode_utf8_lossy().into_owned();
    let (scheme, rest) = match decoded.split_once("://") {
        Some((s, r)) if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)) => {
            (Some(s.to_ascii_lowercase()), r)
        }
        _ => (None, decoded.as_str()),
    };
    let mut out = match scheme {
        Some(scheme) => {
            let (host, path) = match rest.find('/') {
                Some(i) => rest.split_at(i),
                None => (rest, ""),
            };
            let host = host.to_lowercase();
            let path = if host.ends_with("wikipedia.org") {
                path.replace(' ', "_")
            } else {
                path.to_string()
            };
            format!("{scheme}://{host}{path}")
        }
        None => decoded.clone(),
    };
    while out.ends_with('/') && !out.ends_with("://") {
        out.pop();
    }
    out
}
