use super::{
    Description, Mode, Rhs, TransitionDecl, TranslucentDecl, Violation, ViolationKind,
    Violations,
};
use crate::text;

/// Parses the line-oriented text format into a raw description. Only
/// syntactic problems are reported here; everything else is left to
/// [`Description::validate`].
pub fn parse_description(src: &str) -> Result<Description, Violations> {
    let mut d = Description::default();
    let mut errs = Vec::new();
    let mut unknown = Vec::new();
    let mut syntax = |line: usize, msg: String| {
        errs.push(Violation {
            line: Some(line),
            kind: ViolationKind::Syntax(msg),
        })
    };
    for item in text::lines(src) {
        let line = match item {
            Ok(l) => l,
            Err((n, tok)) => {
                syntax(n, format!("expected `key:` at start of line, found `{tok}`"));
                continue;
            }
        };
        let n = line.number;
        let owned = |toks: &[&str]| toks.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match line.key {
            "mode" => match line.tokens.as_slice() {
                ["returning"] => d.mode = Some(Mode::Returning),
                ["non-returning"] => d.mode = Some(Mode::NonReturning),
                _ => syntax(n, "mode must be `returning` or `non-returning`".into()),
            },
            "letters.push" => d.push_letters.extend(owned(&line.tokens)),
            "letters.pop" => d.pop_letters.extend(owned(&line.tokens)),
            "letters.state" => d.state_letters.extend(owned(&line.tokens)),
            "stack" => d.stack.extend(owned(&line.tokens)),
            "states" => d.states.extend(owned(&line.tokens)),
            "initial" => match line.tokens.as_slice() {
                [q] => d.initial = Some(q.to_string()),
                _ => syntax(n, "`initial:` takes exactly one state".into()),
            },
            "translucent" => match line.tokens.as_slice() {
                [q, "->", rest @ ..] => d.translucent.push(TranslucentDecl {
                    state: q.to_string(),
                    letters: owned(rest),
                    line: Some(n),
                }),
                _ => syntax(n, "expected `translucent: <state> -> <letters>`".into()),
            },
            "trans" => match parse_trans(&line.tokens) {
                Ok((state, input, top, rhs)) => d.transitions.push(TransitionDecl {
                    state,
                    input,
                    top,
                    rhs,
                    line: Some(n),
                }),
                Err(msg) => syntax(n, msg),
            },
            other => unknown.push((n, other.to_string())),
        }
    }
    errs.extend(unknown.into_iter().map(|(n, key)| Violation {
        line: Some(n),
        kind: ViolationKind::UnknownKey(key),
    }));
    errs.sort_by_key(|v| v.line);
    if errs.is_empty() {
        Ok(d)
    } else {
        Err(Violations(errs))
    }
}

pub(crate) fn parse_trans(toks: &[&str]) -> Result<(String, String, String, Rhs), String> {
    let s = |t: &&str| t.to_string();
    let rhs = match toks {
        [_, _, _, "->", "accept"] => Rhs::Accept,
        [_, _, _, "->", p, "push", z] => Rhs::Push {
            state: s(p),
            symbol: s(z),
        },
        [_, _, _, "->", p, "pop"] => Rhs::Pop { state: s(p) },
        [_, _, _, "->", p, "none"] => Rhs::Stay { state: s(p) },
        _ => {
            return Err(
                "expected `trans: <state> <letter|end> <top|_> -> accept | <state> push <sym> | <state> pop | <state> none`"
                    .into(),
            )
        }
    };
    Ok((s(&toks[0]), s(&toks[1]), s(&toks[2]), rhs))
}

pub(crate) fn write_rhs(rhs: &Rhs) -> String {
    match rhs {
        Rhs::Accept => "accept".to_string(),
        Rhs::Push { state, symbol } => format!("{state} push {symbol}"),
        Rhs::Pop { state } => format!("{state} pop"),
        Rhs::Stay { state } => format!("{state} none"),
    }
}

fn list(key: &str, toks: &[String]) -> String {
    if toks.is_empty() {
        format!("{key}:\n")
    } else {
        format!("{key}: {}\n", toks.join(" "))
    }
}

pub(crate) fn write_description(d: &Description) -> String {
    let mut out = String::new();
    if let Some(mode) = d.mode {
        out.push_str(&format!("mode: {mode}\n"));
    }
    out.push_str(&list("letters.push", &d.push_letters));
    out.push_str(&list("letters.pop", &d.pop_letters));
    out.push_str(&list("letters.state", &d.state_letters));
    out.push_str(&list("stack", &d.stack));
    out.push_str(&list("states", &d.states));
    if let Some(q) = &d.initial {
        out.push_str(&format!("initial: {q}\n"));
    }
    for t in &d.translucent {
        if t.letters.is_empty() {
            out.push_str(&format!("translucent: {} ->\n", t.state));
        } else {
            out.push_str(&format!("translucent: {} -> {}\n", t.state, t.letters.join(" ")));
        }
    }
    for t in &d.transitions {
        out.push_str(&format!(
            "trans: {} {} {} -> {}\n",
            t.state,
            t.input,
            t.top,
            write_rhs(&t.rhs)
        ));
    }
    out
}
