//! Line reader shared by the text formats: `#` starts a comment, blank lines
//! are skipped, and every line keeps its 1-based number for diagnostics.

use crate::error::{Error, Result};

pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        let iter: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, line)| (i + 1, strip_comment(line).trim()))
                .filter(|(_, line)| !line.is_empty()),
        );
        Lines {
            inner: iter.peekable(),
        }
    }

    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }

    pub fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, l)| *l)
    }

    pub fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_line()
            .ok_or_else(|| Error::parse(format!("unexpected end of input, expected {what}")))
    }

    /// Consumes a `key: value` line and returns the value.
    pub fn expect_field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (no, line) = self.expect_line(key)?;
        let rest = line
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .ok_or_else(|| Error::parse(format!("line {no}: expected `{key}: ...`")))?;
        Ok((no, rest.trim()))
    }

    pub fn expect_end(&mut self) -> Result<()> {
        match self.next_line() {
            None => Ok(()),
            Some((no, line)) => Err(Error::parse(format!(
                "line {no}: trailing content `{line}`"
            ))),
        }
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

pub(crate) fn parse_usize(token: &str, line: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(format!("line {line}: `{token}` is not an index")))
}
