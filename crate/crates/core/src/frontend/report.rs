//! JSON rendering shared by the CLI and the bindings.

use serde::Serialize;

/// Pretty JSON with a trailing newline. Maps are ordered, so the output is
/// deterministic.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
