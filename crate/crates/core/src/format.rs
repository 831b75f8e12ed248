//! Fixed-precision number formatting shared by the file emitters.

/// Formats `value` with exactly `places` decimals, never emitting a negative zero.
pub fn fixed(value: f64, places: usize) -> String {
    let s = format!("{:.*}", places, value);
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}
