//! Line-oriented tokenizer shared by the automaton, NPDA and LBA formats.

/// One non-empty declaration line: `key: tok tok ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub key: &'a str,
    pub tokens: Vec<&'a str>,
}

/// Strips `//` comments and blank lines. A line whose first token does not
/// end in `:` is reported as `Err((line, first_token))`.
pub(crate) fn lines(src: &str) -> Vec<Result<Line<'_>, (usize, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let number = idx + 1;
        let content = match raw.find("//") {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut toks = content.split_whitespace();
        let Some(first) = toks.next() else { continue };
        match first.strip_suffix(':') {
            Some(key) if !key.is_empty() => out.push(Ok(Line {
                number,
                key,
                tokens: toks.collect(),
            })),
            _ => out.push(Err((number, first.to_string()))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_are_skipped() {
        let src = "// header\n\nstates: q0 q1 // trailing\n  stack:\n";
        let got: Vec<_> = lines(src).into_iter().map(Result::unwrap).collect();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].key, "states");
        assert_eq!(got[0].tokens, vec!["q0", "q1"]);
        assert_eq!(got[0].number, 3);
        assert_eq!(got[1].key, "stack");
        assert!(got[1].tokens.is_empty());
    }

    #[test]
    fn missing_key_is_reported() {
        let got = lines("q0 q1\n");
        assert_eq!(got, vec![Err((1, "q0".to_string()))]);
    }
}
