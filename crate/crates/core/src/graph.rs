//! Double graphs: representation, seeded sparse sampling, induced subgraphs,
//! unions and a plain-text file format.
//!
//! Vertices are labelled `1..=n`. Each colour stores its edges as a sorted
//! list of `(u, v)` pairs with `u < v`, plus a CSR adjacency index built once
//! at construction.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::Geometric;

use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

pub type Vertex = u32;
pub type Edge = (Vertex, Vertex);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn tag(self) -> u64 {
        match self {
            Colour::Red => rng::RED_TAG,
            Colour::Blue => rng::BLUE_TAG,
        }
    }
}

/// Compressed adjacency lists, neighbours sorted ascending.
#[derive(Clone, Debug, Default)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Adjacency {
    fn build(n: usize, edges: &[Edge]) -> Self {
        let mut degree = vec![0usize; n + 2];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 2];
        for v in 1..=n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n + 1]];
        // Edges are sorted by (u, v), so each list comes out sorted.
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
        }
        for &(u, v) in edges {
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 1..=n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    fn neighbours(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Two edge sets on the common vertex set `1..=n`.
#[derive(Clone, Debug)]
pub struct DoubleGraph {
    n: usize,
    red: Vec<Edge>,
    blue: Vec<Edge>,
    red_adj: Adjacency,
    blue_adj: Adjacency,
}

impl PartialEq for DoubleGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.red == other.red && self.blue == other.blue
    }
}

impl Eq for DoubleGraph {}

fn normalise(n: usize, colour: Colour, edges: impl IntoIterator<Item = Edge>) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for (a, b) in edges {
        if a == b {
            return Err(Error::param(format!("{colour:?} self-loop at vertex {a}")));
        }
        for x in [a, b] {
            if x == 0 || x as usize > n {
                return Err(Error::param(format!(
                    "{colour:?} edge ({a}, {b}) has endpoint outside 1..={n}"
                )));
            }
        }
        out.push((a.min(b), a.max(b)));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl DoubleGraph {
    /// Builds a double graph, normalising pair orientation and collapsing
    /// duplicate pairs within a colour.
    pub fn new(
        n: usize,
        red: impl IntoIterator<Item = Edge>,
        blue: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("a double graph needs at least one vertex"));
        }
        if n > Vertex::MAX as usize {
            return Err(Error::param(format!("n = {n} does not fit a 32-bit label")));
        }
        let red = normalise(n, Colour::Red, red)?;
        let blue = normalise(n, Colour::Blue, blue)?;
        Ok(Self::from_sorted(n, red, blue))
    }

    /// Edges must already be normalised, sorted and deduplicated.
    fn from_sorted(n: usize, red: Vec<Edge>, blue: Vec<Edge>) -> Self {
        let red_adj = Adjacency::build(n, &red);
        let blue_adj = Adjacency::build(n, &blue);
        DoubleGraph {
            n,
            red,
            blue,
            red_adj,
            blue_adj,
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [], [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn red_edges(&self) -> &[Edge] {
        &self.red
    }

    pub fn blue_edges(&self) -> &[Edge] {
        &self.blue
    }

    pub fn edges(&self, colour: Colour) -> &[Edge] {
        match colour {
            Colour::Red => &self.red,
            Colour::Blue => &self.blue,
        }
    }

    pub fn neighbours(&self, colour: Colour, v: Vertex) -> &[Vertex] {
        match colour {
            Colour::Red => self.red_adj.neighbours(v),
            Colour::Blue => self.blue_adj.neighbours(v),
        }
    }

    pub fn has_edge(&self, colour: Colour, u: Vertex, v: Vertex) -> bool {
        if u == 0 || v == 0 || u as usize > self.n || v as usize > self.n {
            return false;
        }
        self.neighbours(colour, u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    /// The same graph with red and blue exchanged.
    pub fn swap_colours(&self) -> Self {
        DoubleGraph {
            n: self.n,
            red: self.blue.clone(),
            blue: self.red.clone(),
            red_adj: self.blue_adj.clone(),
            blue_adj: self.red_adj.clone(),
        }
    }

    /// A copy with one more edge of the given colour.
    pub fn with_edge(&self, colour: Colour, u: Vertex, v: Vertex) -> Result<Self> {
        let (mut red, mut blue) = (self.red.clone(), self.blue.clone());
        match colour {
            Colour::Red => red.push((u, v)),
            Colour::Blue => blue.push((u, v)),
        }
        Self::new(self.n, red, blue)
    }

    /// Writes the text format: `n m1 m2`, then the red pairs, then the blue.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.n, self.red.len(), self.blue.len());
        for &(u, v) in self.red.iter().chain(&self.blue) {
            let _ = writeln!(out, "{u} {v}");
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }

    /// Parses the text format written by [`write_text`](Self::write_text).
    /// Blank lines and lines starting with `#` are skipped.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let nums = trimmed
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    msg: e.to_string(),
                })?;
            rows.push((idx + 1, nums));
        }
        let mut rows = rows.into_iter();
        let (hline, header) = rows.next().ok_or(Error::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let [n, m1, m2] = header[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n m1 m2`".into(),
            });
        };
        let mut pairs = Vec::new();
        for (line, nums) in rows {
            let [u, v] = nums[..] else {
                return Err(Error::Parse {
                    line,
                    msg: "edge line must be `u v`".into(),
                });
            };
            if u > Vertex::MAX as u64 || v > Vertex::MAX as u64 {
                return Err(Error::Parse {
                    line,
                    msg: "vertex label too large".into(),
                });
            }
            pairs.push((u as Vertex, v as Vertex));
        }
        if pairs.len() as u64 != m1 + m2 {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header announces {} edges, found {}", m1 + m2, pairs.len()),
            });
        }
        let blue = pairs.split_off(m1 as usize);
        Self::new(n as usize, pairs, blue)
    }
}

/// Parameters of the random double graph `G(n, p1, p2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn new(n: usize, p1: f64, p2: f64, seed: u64) -> Self {
        GenParams { n, p1, p2, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n must be at least 1"));
        }
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }
}

/// Samples `G(n, p)` by geometric skips over the row-major pair order
/// `(1,2), (1,3), ..., (1,n), (2,3), ...`. Output is sorted.
pub fn sample_gnp(n: usize, p: f64, rng: &mut StreamRng) -> Result<Vec<Edge>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("p = {p} is not a probability")));
    }
    let n64 = n as u64;
    let total = n64 * n64.saturating_sub(1) / 2;
    if p == 0.0 || total == 0 {
        return Ok(Vec::new());
    }
    if p == 1.0 {
        let mut all = Vec::with_capacity(total as usize);
        for u in 1..n as Vertex {
            for v in u + 1..=n as Vertex {
                all.push((u, v));
            }
        }
        return Ok(all);
    }
    let skip = Geometric::new(p).map_err(|e| Error::param(e.to_string()))?;
    let mut edges = Vec::with_capacity(((total as f64) * p * 1.1) as usize + 16);
    // Row u holds the n - u pairs (u, u+1..=n); `row_start` is its first index.
    let mut u: u64 = 1;
    let mut row_start: u64 = 0;
    let mut idx: u64 = 0;
    let mut first = true;
    loop {
        let gap = rng.sample(skip);
        idx = if first {
            first = false;
            gap
        } else {
            match idx.checked_add(gap).and_then(|x| x.checked_add(1)) {
                Some(x) => x,
                None => break,
            }
        };
        if idx >= total {
            break;
        }
        while idx >= row_start + (n64 - u) {
            row_start += n64 - u;
            u += 1;
        }
        let v = u + 1 + (idx - row_start);
        edges.push((u as Vertex, v as Vertex));
    }
    Ok(edges)
}

/// Samples `G(n, p1, p2)`. Red and blue use independent streams derived from
/// the seed, so changing `p2` never changes the red edges.
pub fn generate_double_graph(params: &GenParams) -> Result<DoubleGraph> {
    params.validate()?;
    if params.n > Vertex::MAX as usize {
        return Err(Error::param("n does not fit a 32-bit label"));
    }
    let red = sample_gnp(params.n, params.p1, &mut rng::stream(params.seed, rng::RED_TAG))?;
    let blue = sample_gnp(params.n, params.p2, &mut rng::stream(params.seed, rng::BLUE_TAG))?;
    Ok(DoubleGraph::from_sorted(params.n, red, blue))
}

/// An induced double graph with its relabelling.
#[derive(Clone, Debug)]
pub struct InducedGraph {
    pub graph: DoubleGraph,
    /// `labels[i]` is the original label of new vertex `i + 1`.
    pub labels: Vec<Vertex>,
}

impl InducedGraph {
    pub fn original(&self, v: Vertex) -> Vertex {
        self.labels[v as usize - 1]
    }
}

/// Restriction of `g` to the vertex set `u`, relabelled `1..=|u|` in
/// ascending order of original label.
pub fn induced_double_graph(g: &DoubleGraph, u: &[Vertex]) -> Result<InducedGraph> {
    let mut labels = u.to_vec();
    labels.sort_unstable();
    labels.dedup();
    if labels.is_empty() {
        return Err(Error::param("cannot induce on an empty vertex set"));
    }
    if labels[0] == 0 || *labels.last().unwrap() as usize > g.n {
        return Err(Error::param(format!("vertex set leaves 1..={}", g.n)));
    }
    let mut new_label = vec![0 as Vertex; g.n + 1];
    for (i, &v) in labels.iter().enumerate() {
        new_label[v as usize] = i as Vertex + 1;
    }
    let restrict = |edges: &[Edge]| -> Vec<Edge> {
        let mut out: Vec<Edge> = edges
            .iter()
            .filter_map(|&(a, b)| {
                let (x, y) = (new_label[a as usize], new_label[b as usize]);
                (x != 0 && y != 0).then_some((x, y))
            })
            .collect();
        out.sort_unstable();
        out
    };
    let graph = DoubleGraph::from_sorted(labels.len(), restrict(&g.red), restrict(&g.blue));
    Ok(InducedGraph { graph, labels })
}

/// Colourwise union of two double graphs on the same vertex set.
pub fn union_double_graph(a: &DoubleGraph, b: &DoubleGraph) -> Result<DoubleGraph> {
    if a.n != b.n {
        return Err(Error::param(format!(
            "cannot unite graphs on {} and {} vertices",
            a.n, b.n
        )));
    }
    let merge = |x: &[Edge], y: &[Edge]| -> Vec<Edge> {
        let mut out = Vec::with_capacity(x.len() + y.len());
        out.extend_from_slice(x);
        out.extend_from_slice(y);
        out.sort_unstable();
        out.dedup();
        out
    };
    Ok(DoubleGraph::from_sorted(
        a.n,
        merge(&a.red, &b.red),
        merge(&a.blue, &b.blue),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g4() -> DoubleGraph {
        DoubleGraph::new(4, [(1, 2), (2, 3), (3, 4)], [(1, 2), (1, 3), (1, 4)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(DoubleGraph::new(3, [(1, 1)], []).is_err());
        assert!(DoubleGraph::new(3, [(1, 4)], []).is_err());
        assert!(DoubleGraph::new(3, [], [(0, 2)]).is_err());
        assert!(DoubleGraph::new(0, [], []).is_err());
    }

    #[test]
    fn normalises_and_dedups() {
        let g = DoubleGraph::new(3, [(2, 1), (1, 2), (3, 2)], [(3, 1)]).unwrap();
        assert_eq!(g.red_edges(), &[(1, 2), (2, 3)]);
        assert_eq!(g.blue_edges(), &[(1, 3)]);
        assert_eq!(g.neighbours(Colour::Red, 2), &[1, 3]);
        assert!(g.has_edge(Colour::Blue, 3, 1));
        assert!(!g.has_edge(Colour::Blue, 2, 1));
    }

    #[test]
    fn certain_and_impossible_edges() {
        let g = generate_double_graph(&GenParams::new(3, 1.0, 1.0, 99)).unwrap();
        assert_eq!(g.red_edges(), &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(g.blue_edges(), g.red_edges());
        let g = generate_double_graph(&GenParams::new(10, 0.0, 0.5, 5)).unwrap();
        assert!(g.red_edges().is_empty());
    }

    #[test]
    fn invalid_params() {
        assert!(generate_double_graph(&GenParams::new(0, 0.1, 0.1, 0)).is_err());
        assert!(generate_double_graph(&GenParams::new(5, 1.5, 0.1, 0)).is_err());
        assert!(generate_double_graph(&GenParams::new(5, 0.1, -0.1, 0)).is_err());
        assert!(generate_double_graph(&GenParams::new(5, 0.1, f64::NAN, 0)).is_err());
    }

    #[test]
    fn generation_is_deterministic_and_streams_independent() {
        let a = generate_double_graph(&GenParams::new(300, 0.05, 0.02, 11)).unwrap();
        let b = generate_double_graph(&GenParams::new(300, 0.05, 0.02, 11)).unwrap();
        assert_eq!(a, b);
        let c = generate_double_graph(&GenParams::new(300, 0.05, 0.3, 11)).unwrap();
        assert_eq!(a.red_edges(), c.red_edges());
        let d = generate_double_graph(&GenParams::new(300, 0.05, 0.02, 12)).unwrap();
        assert_ne!(a.red_edges(), d.red_edges());
    }

    #[test]
    fn sampled_pairs_are_valid_and_sorted() {
        let g = generate_double_graph(&GenParams::new(200, 0.3, 0.7, 3)).unwrap();
        for edges in [g.red_edges(), g.blue_edges()] {
            assert!(edges.windows(2).all(|w| w[0] < w[1]));
            assert!(edges.iter().all(|&(u, v)| 1 <= u && u < v && v <= 200));
        }
    }

    #[test]
    fn induced_examples() {
        let g = g4();
        let full = induced_double_graph(&g, &[1, 2, 3, 4]).unwrap();
        assert_eq!(full.graph, g);
        assert_eq!(full.labels, vec![1, 2, 3, 4]);

        let one = induced_double_graph(&g, &[3]).unwrap();
        assert!(one.graph.red_edges().is_empty() && one.graph.blue_edges().is_empty());

        let sub = induced_double_graph(&g, &[3, 1, 2]).unwrap();
        assert_eq!(sub.graph.red_edges(), &[(1, 2), (2, 3)]);
        assert_eq!(sub.graph.blue_edges(), &[(1, 2), (1, 3)]);

        assert!(induced_double_graph(&g, &[1, 5]).is_err());
        assert!(induced_double_graph(&g, &[]).is_err());
    }

    #[test]
    fn induced_relabels() {
        let g = g4();
        let sub = induced_double_graph(&g, &[2, 4, 3]).unwrap();
        assert_eq!(sub.labels, vec![2, 3, 4]);
        assert_eq!(sub.graph.red_edges(), &[(1, 2), (2, 3)]);
        assert!(sub.graph.blue_edges().is_empty());
        assert_eq!(sub.original(3), 4);
    }

    #[test]
    fn union_examples() {
        let g = g4();
        let empty = DoubleGraph::empty(4).unwrap();
        assert_eq!(union_double_graph(&g, &empty).unwrap(), g);
        assert_eq!(union_double_graph(&g, &g).unwrap(), g);
        assert!(union_double_graph(&g, &DoubleGraph::empty(5).unwrap()).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let g = g4();
        let text = g.to_text();
        assert!(text.starts_with("4 3 3\n"));
        let back = DoubleGraph::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn text_format_errors() {
        assert!(DoubleGraph::read_text("".as_bytes()).is_err());
        assert!(DoubleGraph::read_text("3 1\n1 2\n".as_bytes()).is_err());
        assert!(DoubleGraph::read_text("3 1 1\n1 2\n".as_bytes()).is_err());
        assert!(DoubleGraph::read_text("3 1 0\n1 x\n".as_bytes()).is_err());
        assert!(DoubleGraph::read_text("3 1 0\n1 4\n".as_bytes()).is_err());
        let g = DoubleGraph::read_text("# comment\n3 1 1\n\n2 1\n3 2\n".as_bytes()).unwrap();
        assert_eq!(g.red_edges(), &[(1, 2)]);
        assert_eq!(g.blue_edges(), &[(2, 3)]);
    }
}
