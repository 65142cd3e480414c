use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Undirected simple graph with weighted edges stored as `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
}

impl Graph {
    /// Unit-weight graph. Edges are normalized to `u < v` and kept in the
    /// given order.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::weighted(num_vertices, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    pub fn weighted(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            let (a, b) = (u.min(v), u.max(v));
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on vertex {a}")));
            }
            if b >= num_vertices {
                return Err(Error::InvalidArgument(format!("vertex {b} out of range")));
            }
            if !seen.insert((a, b)) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({a}, {b})")));
            }
            out.push((a, b));
            weights.push(w);
        }
        Ok(Self {
            num_vertices,
            edges: out,
            weights,
        })
    }

    /// The complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges).expect("complete graph is simple")
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Edge-list text: a `p N M` header, then one `u v` line per edge (with
    /// a third weight column when any weight differs from 1).
    pub fn to_edge_list(&self) -> String {
        let weighted = self.weights.iter().any(|&w| w != 1.0);
        let mut out = format!("p {} {}\n", self.num_vertices, self.edges.len());
        for (&(u, v), w) in self.edges.iter().zip(&self.weights) {
            if weighted {
                writeln!(out, "{u} {v} {w}").unwrap();
            } else {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let syntax = |line: usize, message: &str| Error::Syntax {
            line,
            column: 1,
            message: message.to_string(),
        };
        let (hline, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match fields.as_slice() {
            ["p", n, m] => (
                n.parse::<usize>().map_err(|_| syntax(hline, "bad vertex count"))?,
                m.parse::<usize>().map_err(|_| syntax(hline, "bad edge count"))?,
            ),
            _ => return Err(syntax(hline, "expected header `p N M`")),
        };
        let mut edges = Vec::with_capacity(m);
        for (line, text) in lines {
            let f: Vec<&str> = text.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| syntax(line, "bad vertex"));
            let edge = match f.as_slice() {
                [u, v] => (num(u)?, num(v)?, 1.0),
                [u, v, w] => (num(u)?, num(v)?, w.parse().map_err(|_| syntax(line, "bad weight"))?),
                _ => return Err(syntax(line, "expected `u v` or `u v w`")),
            };
            edges.push(edge);
        }
        if edges.len() != m {
            return Err(syntax(hline, &format!("header declares {m} edges, found {}", edges.len())));
        }
        Self::weighted(n, edges)
    }
}

/// Random 3-regular simple graph on `n` vertices.
///
/// Configuration model: three stubs per vertex are shuffled and paired;
/// pairings with a self-loop or repeated edge are rejected and redrawn.
/// Edges are returned sorted.
pub fn random_u3r_graph(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "3-regular graphs need an even N >= 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    'draw: loop {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * n / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v {
                continue 'draw;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::new(n, &edges);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u3r_is_three_regular_and_deterministic() {
        let g = random_u3r_graph(80, 5).unwrap();
        assert_eq!(g.edges().len(), 120);
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert_eq!(g, random_u3r_graph(80, 5).unwrap());
        assert_ne!(g, random_u3r_graph(80, 6).unwrap());
    }

    #[test]
    fn u3r_on_four_vertices_is_k4() {
        assert_eq!(random_u3r_graph(4, 0).unwrap(), Graph::complete(4));
        assert!(random_u3r_graph(7, 0).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, &[(1, 1)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = random_u3r_graph(10, 1).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("p 10 15\n"));
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        let w = Graph::weighted(3, vec![(0, 1, 2.5), (1, 2, 1.0)]).unwrap();
        assert_eq!(Graph::parse_edge_list(&w.to_edge_list()).unwrap(), w);
        assert!(Graph::parse_edge_list("p 3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n").is_err());
    }
}
