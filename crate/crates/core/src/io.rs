//! Text formats for graphs, hypergraphs and decompositions, and the JSON form
//! of modified nice decompositions.
//!
//! Vertex and bag ids are 1-based in every text format and 0-based in memory.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{DecompError, ModifiedNiceDecomposition, NiceNode, TreeDecomposition};
use crate::graphs::{Graph, GraphError, Hypergraph};

pub const NICE_SCHEMA: &str = "ztdp.nice/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based line numbers. `c` lines are
/// handed to `on_comment`.
fn content_lines<'a>(text: &'a str, mut on_comment: impl FnMut(usize, &'a str)) -> Vec<(usize, Vec<&'a str>)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "c" || line.starts_with("c ") {
            on_comment(i + 1, line[1..].trim());
            continue;
        }
        out.push((i + 1, line.split_whitespace().collect()));
    }
    out
}

fn number(line: usize, tok: &str) -> Result<usize, IoError> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a number, found {tok:?}")))
}

fn one_based(line: usize, tok: &str) -> Result<usize, IoError> {
    match number(line, tok)? {
        0 => Err(parse_err(line, "ids are 1-based")),
        v => Ok(v - 1),
    }
}

type Line<'a> = (usize, Vec<&'a str>);

/// Header line number, header parameters and the remaining lines.
fn header<'a>(lines: &'a [Line<'a>], tag: [&str; 2]) -> Result<(usize, &'a [&'a str], &'a [Line<'a>]), IoError> {
    let Some(((line, toks), rest)) = lines.split_first() else {
        return Err(parse_err(0, "missing header"));
    };
    if toks.len() < 2 || toks[..2] != tag {
        return Err(parse_err(*line, format!("expected a header starting with \"{} {}\"", tag[0], tag[1])));
    }
    Ok((*line, &toks[2..], rest))
}

/// `p gr <n> <m>` followed by `m` edge lines. Multigraphs carry a `c multigraph` line.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    if g.is_multigraph() {
        out.push_str("c multigraph\n");
    }
    out.push_str(&format!("p gr {} {}\n", g.n(), g.edges().len()));
    for &[u, v] in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    let mut multi = false;
    let lines = content_lines(text, |_, c| multi |= c == "multigraph");
    let (hline, params, rest) = header(&lines, ["p", "gr"])?;
    let [n, m] = params else {
        return Err(parse_err(hline, "header needs <n> <m>"));
    };
    let (n, m) = (number(hline, n)?, number(hline, m)?);
    if rest.len() != m {
        return Err(parse_err(hline, format!("header announces {m} edges, found {}", rest.len())));
    }
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in rest {
        let [u, v] = toks[..] else {
            return Err(parse_err(*line, "edge line needs two endpoints"));
        };
        edges.push((one_based(*line, u)?, one_based(*line, v)?));
    }
    Ok(if multi { Graph::multigraph(n, &edges)? } else { Graph::new(n, &edges)? })
}

/// `p hg <n> <m>` followed by one line of members per hyperedge.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("p hg {} {}\n", h.n(), h.hyperedges().len());
    for e in h.hyperedges() {
        let members: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&members.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, IoError> {
    let lines = content_lines(text, |_, _| {});
    let (hline, params, rest) = header(&lines, ["p", "hg"])?;
    let [n, m] = params else {
        return Err(parse_err(hline, "header needs <n> <m>"));
    };
    let (n, m) = (number(hline, n)?, number(hline, m)?);
    if rest.len() != m {
        return Err(parse_err(hline, format!("header announces {m} hyperedges, found {}", rest.len())));
    }
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in rest {
        edges.push(toks.iter().map(|t| one_based(*line, t)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Hypergraph::new(n, edges)?)
}

/// `s td <bags> <max bag size> <n>`, `b <id> <vertices>` lines and tree edges.
/// Bags are renumbered breadth-first so the root is bag 1. An edge assignment,
/// if present, is kept as `c assign <edge> <bag>` lines.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let td = td.renumbered();
    let width = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.len(), width, n);
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for (p, c) in td.tree_edges() {
        out.push_str(&format!("{} {}\n", p + 1, c + 1));
    }
    if let Some(assign) = td.assignment() {
        for (e, x) in assign.iter().enumerate() {
            out.push_str(&format!("c assign {} {}\n", e + 1, x + 1));
        }
    }
    out
}

/// Parses a decomposition and roots it at `root` (0-based; bag 1 by default).
/// Returns the decomposition and the vertex count from the header.
pub fn parse_td(text: &str, root: Option<usize>) -> Result<(TreeDecomposition, usize), IoError> {
    let mut assign_lines = Vec::new();
    let lines = content_lines(text, |line, c| {
        if let Some(rest) = c.strip_prefix("assign ") {
            assign_lines.push((line, rest));
        }
    });
    let (hline, params, rest) = header(&lines, ["s", "td"])?;
    let [k, _, n] = params else {
        return Err(parse_err(hline, "header needs <bags> <max bag size> <n>"));
    };
    let (k, n) = (number(hline, k)?, number(hline, n)?);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; k];
    let mut tree_edges = Vec::new();
    for (line, toks) in rest {
        if toks[0] == "b" {
            let id = one_based(*line, toks.get(1).ok_or_else(|| parse_err(*line, "bag line needs an id"))?)?;
            if id >= k {
                return Err(parse_err(*line, format!("bag id {} exceeds {k}", id + 1)));
            }
            let bag = toks[2..].iter().map(|t| one_based(*line, t)).collect::<Result<Vec<_>, _>>()?;
            if bag.iter().any(|&v| v >= n) {
                return Err(parse_err(*line, "bag vertex exceeds n"));
            }
            if bags[id].replace(bag).is_some() {
                return Err(parse_err(*line, format!("bag {} defined twice", id + 1)));
            }
        } else {
            let [a, b] = toks[..] else {
                return Err(parse_err(*line, "tree edge line needs two bag ids"));
            };
            tree_edges.push((one_based(*line, a)?, one_based(*line, b)?));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_err(hline, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut td = TreeDecomposition::from_tree_edges(bags, &tree_edges, root.unwrap_or(0))?;
    if !assign_lines.is_empty() {
        let mut assignment = vec![usize::MAX; assign_lines.len()];
        for (line, rest) in assign_lines {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let [e, x] = toks[..] else {
                return Err(parse_err(line, "assign needs <edge> <bag>"));
            };
            let (e, x) = (one_based(line, e)?, one_based(line, x)?);
            if e >= assignment.len() || x >= k {
                return Err(parse_err(line, "assignment out of range"));
            }
            assignment[e] = x;
        }
        td = td.with_assignment(assignment);
    }
    Ok((td, n))
}

#[derive(Serialize, Deserialize)]
struct NiceDoc {
    schema: String,
    n: usize,
    root: usize,
    edges: Vec<Vec<usize>>,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    #[serde(flatten)]
    node: NiceNode,
}

/// JSON document with schema tag, vertex count, edge list, root id and nodes.
pub fn nice_to_json(nice: &ModifiedNiceDecomposition) -> String {
    let doc = NiceDoc {
        schema: NICE_SCHEMA.into(),
        n: nice.n(),
        root: nice.root(),
        edges: nice.edges().to_vec(),
        nodes: nice.nodes().iter().enumerate().map(|(id, node)| NodeDoc { id, node: node.clone() }).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn nice_from_json(text: &str) -> Result<ModifiedNiceDecomposition, IoError> {
    let doc: NiceDoc = serde_json::from_str(text)?;
    if doc.schema != NICE_SCHEMA {
        return Err(IoError::Schema(doc.schema));
    }
    let mut nodes: Vec<Option<NiceNode>> = vec![None; doc.nodes.len()];
    for nd in doc.nodes {
        let slot =
            nodes.get_mut(nd.id).ok_or_else(|| DecompError::Nice { node: nd.id, reason: "id out of range".into() })?;
        if slot.replace(nd.node).is_some() {
            return Err(DecompError::Nice { node: nd.id, reason: "duplicate id".into() }.into());
        }
    }
    let nodes = nodes
        .into_iter()
        .enumerate()
        .map(|(id, n)| n.ok_or_else(|| DecompError::Nice { node: id, reason: "missing node".into() }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModifiedNiceDecomposition::new(doc.n, doc.edges, nodes, doc.root)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{grid_balanced_td, to_modified_nice};
    use crate::graphs::{grid_graph, GridSpec};

    #[test]
    fn graph_round_trip() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "p gr 3 2\n1 2\n2 3\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
        let m = Graph::multigraph(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(parse_graph(&write_graph(&m)).unwrap(), m);
    }

    #[test]
    fn graph_parse_errors() {
        assert!(parse_graph("p gr 2 1\n1 3\n").is_err());
        assert!(parse_graph("p gr 2 2\n1 2\n").is_err());
        assert!(parse_graph("p gr 2 1\n0 1\n").is_err());
        assert!(parse_graph("c hello\n1 2\n").is_err());
    }

    #[test]
    fn hypergraph_round_trip() {
        let h = Hypergraph::new(3, vec![vec![0, 2], vec![1], vec![0, 2]]).unwrap();
        assert_eq!(parse_hypergraph(&write_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn td_round_trip() {
        let s = GridSpec::new(vec![3, 3]).unwrap();
        let td = grid_balanced_td(&s);
        let text = write_td(&td, 9);
        let (back, n) = parse_td(&text, None).unwrap();
        assert_eq!(n, 9);
        assert_eq!(back, td.renumbered());
    }

    #[test]
    fn td_assignment_survives() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let td = TreeDecomposition::rooted(vec![vec![0, 1], vec![0, 1]], vec![None, Some(0)])
            .unwrap()
            .with_assignment(vec![1]);
        let (back, _) = parse_td(&write_td(&td, 2), None).unwrap();
        assert_eq!(back.assignment(), Some(&[1][..]));
        assert!(to_modified_nice(&back, &g).is_ok());
    }

    #[test]
    fn nice_json_round_trip() {
        let s = GridSpec::new(vec![2, 3]).unwrap();
        let nice = to_modified_nice(&grid_balanced_td(&s), &grid_graph(&s)).unwrap();
        let json = nice_to_json(&nice);
        assert!(json.contains("\"schema\": \"ztdp.nice/1\""));
        assert_eq!(nice_from_json(&json).unwrap(), nice);
        assert!(matches!(nice_from_json(&json.replace("nice/1", "nice/9")), Err(IoError::Schema(_))));
    }
}
