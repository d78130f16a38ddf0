//! Plain-text ruler and DGR files.
//!
//! A ruler line is its marks in base 10, ascending, separated by single
//! spaces. A DGR file starts with the header line `I J n` and continues with
//! exactly `I` ruler lines. Lines starting with `#` are comments and blank
//! lines are skipped.

use dgr_core::{DgrSystem, Header, Ruler};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Integers separated by exactly one space, no leading or trailing blanks.
fn numbers(line_no: usize, line: &str) -> Result<Vec<u32>, ParseError> {
    let mut out = Vec::new();
    let mut col = 1;
    for (k, field) in line.split(' ').enumerate() {
        if field.is_empty() {
            let msg = if k == 0 { "leading space" } else { "expected a single space between numbers" };
            return Err(ParseError::at(line_no, col, msg));
        }
        if let Some(bad) = field.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
            return Err(ParseError::at(line_no, col + bad.0, format!("unexpected character {:?}", bad.1)));
        }
        if field.len() > 1 && field.starts_with('0') {
            return Err(ParseError::at(line_no, col, "leading zero"));
        }
        let v = field.parse::<u32>().map_err(|_| ParseError::at(line_no, col, "number too large"))?;
        out.push(v);
        col += field.len() + 1;
    }
    Ok(out)
}

fn ruler_from_line(line_no: usize, line: &str) -> Result<Ruler, ParseError> {
    let marks = numbers(line_no, line)?;
    let mut col = 1;
    for w in marks.windows(2) {
        col += w[0].to_string().len() + 1;
        if w[1] <= w[0] {
            return Err(ParseError::at(line_no, col, format!("marks must ascend ({} after {})", w[1], w[0])));
        }
    }
    Ok(Ruler::from_sorted(marks).expect("checked ascending"))
}

/// Parses one ruler per content line.
pub fn parse_rulers(text: &str) -> Result<Vec<Ruler>, ParseError> {
    content_lines(text).map(|(no, l)| ruler_from_line(no, l)).collect()
}

/// Parses a DGR file. The result is not verified; see [`DgrSystem::verify`].
pub fn parse_dgr(text: &str) -> Result<DgrSystem, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| ParseError::at(1, 1, "missing header line \"I J n\""))?;
    let fields = numbers(hline, header)?;
    let [i, j, n] = fields[..] else {
        return Err(ParseError::at(hline, 1, format!("header needs 3 numbers \"I J n\", found {}", fields.len())));
    };
    let mut rulers = Vec::with_capacity(i as usize);
    let mut last = hline;
    for (no, l) in lines {
        if rulers.len() == i as usize {
            return Err(ParseError::at(no, 1, format!("more than I = {i} ruler lines")));
        }
        rulers.push(ruler_from_line(no, l)?);
        last = no;
    }
    if rulers.len() != i as usize {
        return Err(ParseError::at(last + 1, 1, format!("expected {i} ruler lines, found {}", rulers.len())));
    }
    Ok(DgrSystem::from_parts(Header::new(i, j, n), rulers))
}

pub fn emit_ruler(r: &Ruler) -> String {
    r.to_string()
}

/// The canonical text of `s` (no comments, trailing newline).
pub fn emit_dgr(s: &DgrSystem) -> String {
    let h = s.header();
    let mut out = format!("{} {} {}\n", h.i, h.j, h.n);
    for r in s.rulers() {
        out.push_str(&emit_ruler(r));
        out.push('\n');
    }
    out
}
