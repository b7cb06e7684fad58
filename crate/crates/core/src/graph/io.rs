//! Edge-list text format: a first line holding `n`, then one `u v` pair per
//! line. Blank lines are skipped and `#` starts a comment.

use super::{Graph, GraphError};

pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());

    let (line_no, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing node count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| GraphError::Parse {
        line: line_no,
        message: format!("expected node count, found {header:?}"),
    })?;

    let mut g = Graph::empty(n);
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("expected node id, found {s:?}"),
            })
        };
        match fields.as_slice() {
            [u, v] => g.add_edge(parse(u)?, parse(v)?)?,
            _ => {
                return Err(GraphError::Parse {
                    line: line_no,
                    message: format!("expected \"u v\", found {line:?}"),
                })
            }
        }
    }
    Ok(g)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.0, e.1));
    }
    out
}
