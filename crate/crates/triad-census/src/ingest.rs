//! Readers for Pajek `.net` files and SNAP-style edge lists.
//!
//! Parsing is line-streamed into an [`EdgeListDoc`] staging structure (a
//! growable arc list plus bookkeeping); [`finalize`] shifts external ids to
//! the internal 0-based range and hands off to the CRS builder.
//!
//! Pajek files are 1-indexed, declare their order with `*Vertices N`, and
//! list directed records under `*Arcs` and undirected records under
//! `*Edges` (each edge becomes a mutual arc pair). `%` starts a comment.
//! Edge lists are bare `u v` pairs with `#` comments; the index base is
//! auto-detected (any id 0 means 0-based) and can be overridden for
//! pathological files.

use crate::graph::{BuildStats, Digraph, GraphError, VertexId};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexBase {
    Zero,
    One,
}

impl IndexBase {
    pub fn offset(self) -> u64 {
        match self {
            IndexBase::Zero => 0,
            IndexBase::One => 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex id {id} outside the declared range [1, {declared_n}]")]
    IdOutOfRange {
        line: usize,
        id: u64,
        declared_n: usize,
    },
    #[error("vertex id {id} below the {base}-based index origin")]
    IdBelowBase { id: u64, base: u64 },
    #[error("empty document with no declared vertex count; graph order is unknown")]
    EmptyDocument,
    #[error("vertex ids exceed the supported range")]
    IdRangeTooLarge,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parsed-but-unresolved graph input: external-id arcs plus the information
/// needed to map them onto `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListDoc {
    pub declared_n: Option<usize>,
    pub arcs: Vec<(u64, u64)>,
    pub index_base: IndexBase,
}

impl EdgeListDoc {
    /// Forces the index base, for edge-list files where auto-detection is
    /// wrong (e.g. a 0-based file that happens to never mention vertex 0).
    pub fn set_index_base(&mut self, base: IndexBase) {
        self.index_base = base;
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> IngestError {
    IngestError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn parse_id(token: &str, line: usize) -> Result<u64, IngestError> {
    token
        .parse::<u64>()
        .map_err(|_| malformed(line, format!("expected a vertex id, found {token:?}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PajekSection {
    Preamble,
    Vertices,
    Arcs,
    Edges,
}

/// Parses Pajek text. Section keywords are case-insensitive; vertex-label
/// lines under `*Vertices` and any tokens after the two endpoint ids are
/// ignored, since real Pajek files carry labels and weights the census never
/// uses.
pub fn parse_pajek(reader: impl BufRead) -> Result<EdgeListDoc, IngestError> {
    let mut declared_n: Option<usize> = None;
    let mut arcs: Vec<(u64, u64)> = Vec::new();
    let mut section = PajekSection::Preamble;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        if let Some(rest) = text.strip_prefix('*') {
            let mut tokens = rest.split_whitespace();
            let keyword = tokens.next().unwrap_or("").to_ascii_lowercase();
            section = match keyword.as_str() {
                "vertices" => {
                    if declared_n.is_some() {
                        return Err(malformed(line_no, "duplicate *Vertices section"));
                    }
                    let count = tokens
                        .next()
                        .ok_or_else(|| malformed(line_no, "*Vertices requires a count"))?;
                    let n: usize = count.parse().map_err(|_| {
                        malformed(line_no, format!("invalid vertex count {count:?}"))
                    })?;
                    declared_n = Some(n);
                    PajekSection::Vertices
                }
                "arcs" => PajekSection::Arcs,
                "edges" => PajekSection::Edges,
                other => {
                    return Err(malformed(line_no, format!("unknown section *{other}")));
                }
            };
            continue;
        }
        match section {
            PajekSection::Preamble => {
                return Err(malformed(line_no, "record before any *-section"));
            }
            PajekSection::Vertices => {} // vertex label line, ignored
            PajekSection::Arcs | PajekSection::Edges => {
                let n = declared_n
                    .ok_or_else(|| malformed(line_no, "arc record before *Vertices"))?;
                let mut tokens = text.split_whitespace();
                let u = parse_id(
                    tokens.next().ok_or_else(|| malformed(line_no, "missing endpoints"))?,
                    line_no,
                )?;
                let v = parse_id(
                    tokens.next().ok_or_else(|| malformed(line_no, "missing second endpoint"))?,
                    line_no,
                )?;
                for id in [u, v] {
                    if id < 1 || id > n as u64 {
                        return Err(IngestError::IdOutOfRange {
                            line: line_no,
                            id,
                            declared_n: n,
                        });
                    }
                }
                arcs.push((u, v));
                if section == PajekSection::Edges {
                    arcs.push((v, u));
                }
            }
        }
    }

    Ok(EdgeListDoc {
        declared_n,
        arcs,
        index_base: IndexBase::One,
    })
}

/// Parses a SNAP-style edge list: one `u v` pair per line, `#` comments.
/// Extra tokens on a record are an error rather than silently ignored, so a
/// weighted edge list cannot be half-read by mistake.
pub fn parse_edgelist(reader: impl BufRead) -> Result<EdgeListDoc, IngestError> {
    let mut arcs: Vec<(u64, u64)> = Vec::new();
    let mut saw_zero = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(malformed(
                line_no,
                format!("expected exactly two endpoints, found {} tokens", tokens.len()),
            ));
        }
        let u = parse_id(tokens[0], line_no)?;
        let v = parse_id(tokens[1], line_no)?;
        saw_zero |= u == 0 || v == 0;
        arcs.push((u, v));
    }

    Ok(EdgeListDoc {
        declared_n: None,
        arcs,
        index_base: if saw_zero { IndexBase::Zero } else { IndexBase::One },
    })
}

/// Resolves external ids to the internal 0-based range and builds the graph.
pub fn finalize(doc: EdgeListDoc) -> Result<(Digraph, BuildStats), IngestError> {
    let base = doc.index_base.offset();
    let n = match doc.declared_n {
        Some(n) => n,
        None => {
            let max_id = doc
                .arcs
                .iter()
                .map(|&(u, v)| u.max(v))
                .max()
                .ok_or(IngestError::EmptyDocument)?;
            usize::try_from(max_id - base + 1).map_err(|_| IngestError::IdRangeTooLarge)?
        }
    };

    let mut shifted = Vec::with_capacity(doc.arcs.len());
    for &(u, v) in &doc.arcs {
        if u < base || v < base {
            return Err(IngestError::IdBelowBase {
                id: u.min(v),
                base,
            });
        }
        let u = VertexId::try_from(u - base).map_err(|_| IngestError::IdRangeTooLarge)?;
        let v = VertexId::try_from(v - base).map_err(|_| IngestError::IdRangeTooLarge)?;
        shifted.push((u, v));
    }

    Ok(Digraph::build(n, &shifted)?)
}

/// Writes the graph back out as 1-indexed Pajek. Arcs are emitted in CRS
/// order, so rereading the output reproduces the graph bit for bit.
pub fn write_pajek(g: &Digraph, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "*Vertices {}", g.order())?;
    writeln!(w, "*Arcs")?;
    for u in 0..g.order() as VertexId {
        for &v in g.out_row(u) {
            writeln!(w, "{} {}", u as u64 + 1, v as u64 + 1)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Pajek,
    EdgeList,
}

/// Format sniffing for `--format auto`: Pajek files open with a `*` section.
/// Leading blank and comment lines (either comment style) are skipped.
pub fn detect_format(head: &str) -> InputFormat {
    for line in head.lines() {
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') || text.starts_with('#') {
            continue;
        }
        return if text.starts_with('*') {
            InputFormat::Pajek
        } else {
            InputFormat::EdgeList
        };
    }
    InputFormat::EdgeList
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pajek(text: &str) -> Result<EdgeListDoc, IngestError> {
        parse_pajek(text.as_bytes())
    }

    fn edgelist(text: &str) -> Result<EdgeListDoc, IngestError> {
        parse_edgelist(text.as_bytes())
    }

    #[test]
    fn pajek_minimal() {
        let doc = pajek("*Vertices 3\n*Arcs\n1 2\n").unwrap();
        assert_eq!(doc.declared_n, Some(3));
        assert_eq!(doc.arcs, vec![(1, 2)]);
        assert_eq!(doc.index_base, IndexBase::One);
    }

    #[test]
    fn pajek_edges_expand_to_mutual_arcs() {
        let doc = pajek("*Vertices 2\n*Edges\n1 2\n").unwrap();
        assert_eq!(doc.arcs, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn pajek_malformed_endpoint_reports_line() {
        let err = pajek("*Vertices 2\n*Arcs\n1 x\n").unwrap_err();
        assert!(matches!(err, IngestError::Malformed { line: 3, .. }), "{err}");
    }

    #[test]
    fn pajek_out_of_range_id_reports_line() {
        let err = pajek("*Vertices 2\n*Arcs\n1 3\n").unwrap_err();
        assert!(
            matches!(err, IngestError::IdOutOfRange { line: 3, id: 3, declared_n: 2 }),
            "{err}"
        );
    }

    #[test]
    fn pajek_ignores_labels_comments_and_case() {
        let text = "% a comment\n*vertices 3\n1 \"alice\"\n2 \"bob\"\n\n*ARCS\n1 2 0.7\n*edges\n2 3\n";
        let doc = pajek(text).unwrap();
        assert_eq!(doc.arcs, vec![(1, 2), (2, 3), (3, 2)]);
    }

    #[test]
    fn edgelist_zero_base_detection() {
        let doc = edgelist("# comment\n0 1\n1 2\n").unwrap();
        assert_eq!(doc.index_base, IndexBase::Zero);
        assert_eq!(doc.arcs, vec![(0, 1), (1, 2)]);

        let doc = edgelist("1 2\n2 3\n").unwrap();
        assert_eq!(doc.index_base, IndexBase::One);
        assert_eq!(doc.arcs, vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn edgelist_rejects_extra_tokens() {
        let err = edgelist("1 2 3\n").unwrap_err();
        assert!(matches!(err, IngestError::Malformed { line: 1, .. }));
    }

    #[test]
    fn finalize_shifts_bases() {
        let (g, _) = finalize(pajek("*Vertices 3\n*Arcs\n1 2\n").unwrap()).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_edge(0, 1));

        let (g, _) = finalize(edgelist("0 1\n").unwrap()).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.is_edge(0, 1));
    }

    #[test]
    fn finalize_empty_document_is_an_error() {
        assert!(matches!(
            finalize(edgelist("# nothing\n").unwrap()),
            Err(IngestError::EmptyDocument)
        ));
        // An explicit order makes an empty Pajek file legal.
        let (g, _) = finalize(pajek("*Vertices 3\n*Arcs\n").unwrap()).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.arc_count(), 0);
    }

    #[test]
    fn index_base_override_validates() {
        let mut doc = edgelist("0 1\n").unwrap();
        doc.set_index_base(IndexBase::One);
        assert!(matches!(
            finalize(doc),
            Err(IngestError::IdBelowBase { id: 0, base: 1 })
        ));
    }

    #[test]
    fn detect_format_examples() {
        assert_eq!(detect_format("*Vertices 3\n"), InputFormat::Pajek);
        assert_eq!(detect_format("# snap\n0 1\n"), InputFormat::EdgeList);
        assert_eq!(detect_format("% pajek comment\n*Arcs\n"), InputFormat::Pajek);
        assert_eq!(detect_format(""), InputFormat::EdgeList);
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(VertexId, VertexId)>)> {
        (1..24usize).prop_flat_map(|n| {
            let arc = (0..n as VertexId, 0..n as VertexId);
            (Just(n), proptest::collection::vec(arc, 0..120))
        })
    }

    proptest! {
        #[test]
        fn pajek_round_trip_is_bit_identical((n, arcs) in arb_graph()) {
            let (g, _) = Digraph::build(n, &arcs).unwrap();
            let mut text = Vec::new();
            write_pajek(&g, &mut text).unwrap();
            let (back, _) = finalize(parse_pajek(text.as_slice()).unwrap()).unwrap();
            prop_assert_eq!(g.out_arcs(), back.out_arcs());
            prop_assert_eq!(g.neighbours(), back.neighbours());
        }

        #[test]
        fn edgelist_parse_is_line_order_insensitive((_n, arcs) in arb_graph()) {
            let lines: Vec<String> = arcs.iter().map(|&(u, v)| format!("{u} {v}")).collect();
            let forward = format!("0 0\n{}\n", lines.join("\n")); // self-loop pins vertex 0 and base
            let mut rev = lines.clone();
            rev.reverse();
            let reversed = format!("0 0\n{}\n", rev.join("\n"));
            let (a, _) = finalize(parse_edgelist(forward.as_bytes()).unwrap()).unwrap();
            let (b, _) = finalize(parse_edgelist(reversed.as_bytes()).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn pajek_edges_yield_mutual_dyads((n, arcs) in arb_graph()) {
            let mut text = format!("*Vertices {n}\n*Edges\n");
            for (u, v) in &arcs {
                if u != v {
                    text.push_str(&format!("{} {}\n", u + 1, v + 1));
                }
            }
            let (g, _) = finalize(parse_pajek(text.as_bytes()).unwrap()).unwrap();
            for u in 0..n as VertexId {
                for &v in g.neighbour_row(u) {
                    prop_assert!(g.is_edge(u, v) && g.is_edge(v, u));
                }
            }
        }
    }
}
