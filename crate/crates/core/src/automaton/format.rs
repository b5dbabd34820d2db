//! Text formats.
//!
//! NFA files:
//!
//! ```text
//! # comments start with '#'
//! NFA <n> <m> <source> <sigma>
//! <from> <to> <letter>      (m lines)
//! ```
//!
//! A comment of the form `# letters: a b c` names the letters in code order.
//!
//! Ordered partitions:
//!
//! ```text
//! ORDPART <k>
//! <i>: <id> <id> ...        (k lines, line order = part order)
//! ```

use std::fmt::Write as _;

use super::{Automaton, Edge, OrderedPartition, StateId};
use crate::error::{Error, Result};

const LETTERS_TAG: &str = "letters:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseWarning {
    DuplicateEdges(usize),
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseWarning::DuplicateEdges(k) => write!(f, "removed {k} duplicate edge(s)"),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Splits a line into its record and comment parts.
fn split_comment(line: &str) -> (&str, Option<&str>) {
    match line.find('#') {
        Some(i) => (&line[..i], Some(&line[i + 1..])),
        None => (line, None),
    }
}

fn int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

/// Parses the NFA file format. Duplicate edges are dropped and reported.
pub fn parse_automaton(text: &str) -> Result<(Automaton, Vec<ParseWarning>)> {
    let mut header: Option<(usize, usize, u32, u32)> = None;
    let mut edges = Vec::new();
    let mut names = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let (record, comment) = split_comment(raw);
        if let Some(c) = comment {
            if let Some(rest) = c.trim().strip_prefix(LETTERS_TAG) {
                names = Some(rest.split_whitespace().map(str::to_owned).collect::<Vec<_>>());
            }
        }
        let toks: Vec<&str> = record.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match header {
            None => {
                if toks.len() != 5 || toks[0] != "NFA" {
                    return Err(parse_err(
                        lineno,
                        "expected header 'NFA <n> <m> <source> <sigma>'",
                    ));
                }
                let n: usize = int(toks[1], lineno, "state count")?;
                let m: usize = int(toks[2], lineno, "edge count")?;
                let s: u32 = int(toks[3], lineno, "source")?;
                let sigma: u32 = int(toks[4], lineno, "alphabet size")?;
                if n == 0 {
                    return Err(parse_err(lineno, "state count must be positive"));
                }
                if s as usize >= n {
                    return Err(parse_err(lineno, "source state out of range"));
                }
                edges.reserve(m);
                header = Some((n, m, s, sigma));
            }
            Some((n, m, _, sigma)) => {
                if toks.len() != 3 {
                    return Err(parse_err(lineno, "expected edge '<from> <to> <letter>'"));
                }
                if edges.len() == m {
                    return Err(parse_err(lineno, format!("more than {m} edges")));
                }
                let u: u32 = int(toks[0], lineno, "state")?;
                let v: u32 = int(toks[1], lineno, "state")?;
                let a: u32 = int(toks[2], lineno, "letter")?;
                if u as usize >= n || v as usize >= n {
                    return Err(parse_err(lineno, "state out of range"));
                }
                if a >= sigma {
                    return Err(parse_err(lineno, "letter out of range"));
                }
                edges.push(Edge::new(u, v, a));
            }
        }
    }
    let (n, m, s, sigma) = header.ok_or_else(|| parse_err(1, "missing NFA header"))?;
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    let (mut a, dups) = Automaton::with_duplicates(n, sigma, StateId(s), edges)?;
    if let Some(names) = names {
        if names.len() == sigma as usize {
            a.set_letter_names(Some(names));
        }
    }
    let warnings = if dups > 0 {
        vec![ParseWarning::DuplicateEdges(dups)]
    } else {
        Vec::new()
    };
    Ok((a, warnings))
}

impl Automaton {
    /// Canonical NFA text: edges sorted by `(from, to, letter)`.
    pub fn to_nfa_string(&self) -> String {
        self.to_nfa_string_with_comment(None)
    }

    pub fn to_nfa_string_with_comment(&self, comment: Option<&str>) -> String {
        let mut s = String::with_capacity(32 + self.num_edges() * 16);
        if let Some(c) = comment {
            writeln!(s, "# {c}").unwrap();
        }
        if let Some(names) = self.letter_names() {
            writeln!(s, "# {LETTERS_TAG} {}", names.join(" ")).unwrap();
        }
        writeln!(
            s,
            "NFA {} {} {} {}",
            self.n(),
            self.num_edges(),
            self.source(),
            self.sigma()
        )
        .unwrap();
        for e in self.edges() {
            writeln!(s, "{} {} {}", e.from, e.to, e.letter).unwrap();
        }
        s
    }
}

/// Parses the ORDPART format for an automaton with `n` states.
pub fn parse_ordered_partition(text: &str, n: usize) -> Result<OrderedPartition> {
    let mut expected: Option<usize> = None;
    let mut parts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let (record, _) = split_comment(raw);
        let record = record.trim();
        if record.is_empty() {
            continue;
        }
        match expected {
            None => {
                let toks: Vec<&str> = record.split_whitespace().collect();
                if toks.len() != 2 || toks[0] != "ORDPART" {
                    return Err(parse_err(lineno, "expected header 'ORDPART <k>'"));
                }
                expected = Some(int(toks[1], lineno, "part count")?);
            }
            Some(k) => {
                if parts.len() == k {
                    // Trailing records (e.g. a QUASI_WHEELER line) end the block.
                    break;
                }
                let (idx, ids) = record
                    .split_once(':')
                    .ok_or_else(|| parse_err(lineno, "expected '<i>: <id> ...'"))?;
                let idx: usize = int(idx.trim(), lineno, "part index")?;
                if idx != parts.len() {
                    return Err(parse_err(lineno, format!("expected part index {}", parts.len())));
                }
                let part = ids
                    .split_whitespace()
                    .map(|t| int::<u32>(t, lineno, "state").map(StateId))
                    .collect::<Result<Vec<_>>>()?;
                parts.push(part);
            }
        }
    }
    let k = expected.ok_or_else(|| parse_err(1, "missing ORDPART header"))?;
    if parts.len() != k {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("expected {k} parts, found {}", parts.len()),
        ));
    }
    OrderedPartition::new(parts, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Letter;
    use proptest::prelude::*;

    const FIG1_CENTER: &str = "NFA 5 7 0 2\n0 1 0\n0 2 0\n0 3 1\n1 3 1\n1 4 1\n2 3 1\n2 4 1\n";

    #[test]
    fn smallest_automaton() {
        let (a, w) = parse_automaton("NFA 2 1 0 1\n0 1 0\n").unwrap();
        assert!(w.is_empty());
        assert_eq!(a.n(), 2);
        assert_eq!(a.source(), StateId(0));
        assert_eq!(a.edges(), &[Edge::new(0, 1, 0)]);
    }

    #[test]
    fn merge_nfa_in_labels() {
        let (a, _) = parse_automaton(FIG1_CENTER).unwrap();
        assert_eq!(a.in_label(StateId(1)), Some(Letter(0)));
        assert_eq!(a.in_label(StateId(2)), Some(Letter(0)));
        assert_eq!(a.in_label(StateId(3)), Some(Letter(1)));
        assert_eq!(a.in_label(StateId(4)), Some(Letter(1)));
        assert!(a.validate().is_empty());
    }

    #[test]
    fn out_of_range_state_names_the_line() {
        match parse_automaton("NFA 2 1 0 1\n0 5 0\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert_eq!(msg, "state out of range");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_automaton("NFA 2 1\n0 1 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_automaton("NFA 2 1 0 1\n0 x 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_automaton("NFA 2 2 0 1\n0 1 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_automaton("NFA 2 1 0 1\n0 1 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn comments_and_duplicates() {
        let text = "# hello\nNFA 2 2 0 1 # trailing\n\n0 1 0\n0 1 0 # again\n";
        let (a, w) = parse_automaton(text).unwrap();
        assert_eq!(a.num_edges(), 1);
        assert_eq!(w, vec![ParseWarning::DuplicateEdges(1)]);
    }

    #[test]
    fn letter_names_round_trip() {
        let text = "# letters: a b\nNFA 5 7 0 2\n0 1 0\n0 2 0\n0 3 1\n1 3 1\n1 4 1\n2 3 1\n2 4 1\n";
        let (a, _) = parse_automaton(text).unwrap();
        assert_eq!(a.letter_names().unwrap(), &["a".to_string(), "b".to_string()]);
        assert_eq!(a.to_nfa_string(), text);
    }

    #[test]
    fn ordpart_parse() {
        let p = parse_ordered_partition("ORDPART 3\n0: 0\n1: 1 2\n2: 3 4\nQUASI_WHEELER: true\n", 5)
            .unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.parts()[1], vec![StateId(1), StateId(2)]);
        assert_eq!(parse_ordered_partition(&p.to_ordpart_string(), 5).unwrap(), p);
        assert!(parse_ordered_partition("ORDPART 2\n0: 0\n1: 1\n", 3).is_err());
        assert!(parse_ordered_partition("ORDPART 2\n0: 0\n5: 1 2\n", 3).is_err());
    }

    fn arb_automaton() -> impl Strategy<Value = Automaton> {
        (1usize..8, 1u32..4).prop_flat_map(|(n, sigma)| {
            let edge = (0..n as u32, 0..n as u32, 0..sigma);
            proptest::collection::vec(edge, 0..20).prop_map(move |es| {
                let edges = es.into_iter().map(|(u, v, a)| Edge::new(u, v, a)).collect();
                Automaton::new(n, sigma, StateId(0), edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(a in arb_automaton()) {
            let text = a.to_nfa_string();
            let (b, w) = parse_automaton(&text).unwrap();
            prop_assert!(w.is_empty());
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(b.to_nfa_string(), text);
        }
    }
}
