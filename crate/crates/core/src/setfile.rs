//! Text codec for element sets.
//!
//! ```text
//! # group=product:3^2
//! 0,1
//! 2,2
//! ```
//!
//! One element per line; cyclic and interval elements are decimal integers,
//! product elements comma-separated coordinates. Interval elements are
//! written 1-based (`1..=n`). Other lines starting with `#` and blank lines
//! are ignored. Exactly one `# group=` header is required.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{Elem, GSet, GroupDescriptor};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str) -> Option<&str> {
    line.strip_prefix('#')?.trim().strip_prefix("group=").map(str::trim)
}

/// Parses a group descriptor header value such as `cyclic:7`.
pub fn parse_group(s: &str) -> Result<GroupDescriptor> {
    s.parse()
}

fn parse_elem(group: GroupDescriptor, text: &str, line: usize) -> Result<Elem> {
    let num = |t: &str| -> Result<u64> {
        t.trim()
            .parse::<u64>()
            .map_err(|_| parse_err(line, format!("malformed number {:?}", t.trim())))
    };
    let elem = match group {
        GroupDescriptor::Product { d, .. } => {
            let coords = text.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if coords.len() != d as usize {
                return Err(parse_err(
                    line,
                    format!("expected {d} coordinates, got {}", coords.len()),
                ));
            }
            Elem(coords)
        }
        GroupDescriptor::Cyclic { .. } => Elem::scalar(num(text)?),
        GroupDescriptor::IntegerInterval { n } => {
            let v = num(text)?;
            if v == 0 || v > n {
                return Err(parse_err(line, format!("{v} is outside [1, {n}]")));
            }
            Elem::scalar(v - 1)
        }
    };
    group.validate(&elem).map_err(|e| parse_err(line, e.to_string()))?;
    Ok(elem)
}

/// Parses the text form. Duplicate elements are merged.
pub fn parse_set(text: &str) -> Result<GSet> {
    let mut group = None;
    for (i, raw) in text.lines().enumerate() {
        if let Some(desc) = parse_header(raw.trim()) {
            if group.is_some() {
                return Err(parse_err(i + 1, "duplicate group header"));
            }
            group = Some(parse_group(desc).map_err(|e| parse_err(i + 1, e.to_string()))?);
        }
    }
    let group = group.ok_or_else(|| parse_err(0, "missing `# group=` header"))?;
    let mut elems = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        elems.push(parse_elem(group, line, i + 1)?);
    }
    GSet::new(group, elems)
}

/// Renders a set in the text form; `parse_set` inverts it.
pub fn format_set(set: &GSet) -> String {
    let group = set.group();
    let mut out = format!("# group={group}\n");
    for e in set.elems() {
        match group {
            GroupDescriptor::IntegerInterval { .. } => out.push_str(&(e.coords()[0] + 1).to_string()),
            _ => {
                let parts: Vec<String> = e.coords().iter().map(u64::to_string).collect();
                out.push_str(&parts.join(","));
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_set_file(path: impl AsRef<Path>) -> Result<GSet> {
    parse_set(&fs::read_to_string(path)?)
}

pub fn write_set_file(path: impl AsRef<Path>, set: &GSet) -> Result<()> {
    fs::write(path, format_set(set))?;
    Ok(())
}
