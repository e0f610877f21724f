use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::triangulation::Triangulation;

/// Oriented edge of the truncated complex. Corner (k, i, j) is the vertex of
/// truncated simplex k near vertex i on the edge ij.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Step {
    /// From corner (tet, i, j) to corner (tet, j, i).
    Long { tet: usize, i: u8, j: u8 },
    /// From corner (tet, v, a) to corner (tet, v, b).
    Short { tet: usize, v: u8, a: u8, b: u8 },
}

impl Step {
    pub fn reverse(self) -> Step {
        match self {
            Step::Long { tet, i, j } => Step::Long { tet, i: j, j: i },
            Step::Short { tet, v, a, b } => Step::Short { tet, v, a: b, b: a },
        }
    }

    pub fn is_long(self) -> bool {
        matches!(self, Step::Long { .. })
    }

    fn tail_corner(self) -> (usize, u8, u8) {
        match self {
            Step::Long { tet, i, j } => (tet, i, j),
            Step::Short { tet, v, a, .. } => (tet, v, a),
        }
    }

    fn head_corner(self) -> (usize, u8, u8) {
        self.reverse().tail_corner()
    }

    fn index(self) -> usize {
        match self {
            Step::Long { tet, i, j } => tet * 16 + i as usize * 4 + j as usize,
            Step::Short { tet, v, a, b } => {
                (1 << 40) + tet * 64 + v as usize * 16 + a as usize * 4 + b as usize
            }
        }
    }
}

/// Reverses a path.
pub fn inverse_word(word: &[Step]) -> Vec<Step> {
    word.iter().rev().map(|s| s.reverse()).collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.parent[x] = r;
        r
    }

    /// Keeps the smaller root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Every oriented edge instance of simplex `k`.
fn steps_of(k: usize) -> Vec<Step> {
    let mut out = Vec::new();
    for i in 0..4u8 {
        for j in 0..4u8 {
            if i != j {
                out.push(Step::Long { tet: k, i, j });
            }
        }
    }
    for v in 0..4u8 {
        for a in 0..4u8 {
            for b in 0..4u8 {
                if a != v && b != v && a != b {
                    out.push(Step::Short { tet: k, v, a, b });
                }
            }
        }
    }
    out
}

/// Edge-path groupoid of the truncated complex: corners glued along faces,
/// long and short edges identified accordingly.
#[derive(Clone, Debug)]
pub struct Groupoid {
    node_of: Vec<usize>,
    num_nodes: usize,
    node_cusp: Vec<usize>,
    /// One forward representative per quotient edge.
    edges: Vec<Step>,
    /// Identified pairs of step instances with the face that identifies them.
    pub(crate) identified: Vec<(Step, Step, (usize, usize))>,
}

impl Groupoid {
    pub fn new(tri: &Triangulation) -> Self {
        let s = tri.num_tetrahedra();
        let cusp_of = tri.cusp_of();
        let corner = |k: usize, i: u8, j: u8| k * 16 + i as usize * 4 + j as usize;
        let mut nodes = UnionFind::new(16 * s);
        let mut identified = Vec::new();
        for g in tri.gluings() {
            let (k, f) = g.source;
            let (k2, _) = g.target;
            let p = g.perm;
            let map = |x: u8| p.apply(x as usize) as u8;
            for i in 0..4u8 {
                for j in 0..4u8 {
                    if i != j && i as usize != f && j as usize != f {
                        nodes.union(corner(k, i, j), corner(k2, map(i), map(j)));
                    }
                }
            }
            if (k, f) < g.target {
                for st in steps_of(k) {
                    let on_face = match st {
                        Step::Long { i, j, .. } => i as usize != f && j as usize != f,
                        Step::Short { v, a, b, .. } => [v, a, b].iter().all(|&x| x as usize != f),
                    };
                    if !on_face {
                        continue;
                    }
                    let image = match st {
                        Step::Long { i, j, .. } => Step::Long { tet: k2, i: map(i), j: map(j) },
                        Step::Short { v, a, b, .. } => {
                            Step::Short { tet: k2, v: map(v), a: map(a), b: map(b) }
                        }
                    };
                    identified.push((st, image, (k, f)));
                }
            }
        }
        let mut dense = BTreeMap::new();
        let mut node_of = vec![usize::MAX; 16 * s];
        let mut node_cusp = Vec::new();
        for k in 0..s {
            for i in 0..4u8 {
                for j in 0..4u8 {
                    if i == j {
                        continue;
                    }
                    let root = nodes.find(corner(k, i, j));
                    let id = *dense.entry(root).or_insert_with(|| {
                        node_cusp.push(cusp_of[k][i as usize]);
                        node_cusp.len() - 1
                    });
                    node_of[corner(k, i, j)] = id;
                }
            }
        }
        // quotient edges
        let all: Vec<Step> = (0..s).flat_map(steps_of).collect();
        let index: BTreeMap<Step, usize> = all.iter().enumerate().map(|(n, &st)| (st, n)).collect();
        let mut uf = UnionFind::new(all.len());
        for &(a, b, _) in &identified {
            uf.union(index[&a], index[&b]);
            uf.union(index[&a.reverse()], index[&b.reverse()]);
        }
        let mut edges = Vec::new();
        for (n, &st) in all.iter().enumerate() {
            let root = uf.find(n);
            let rev_root = uf.find(index[&st.reverse()]);
            // roots are least members; keep a class when it is its own root
            // and precedes its reverse class
            if root == n && root < rev_root {
                edges.push(st);
            }
        }
        edges.sort_by_key(|s| s.index());
        Groupoid { node_of, num_nodes: dense.len(), node_cusp, edges, identified }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[Step] {
        &self.edges
    }

    pub fn corner(&self, tet: usize, i: u8, j: u8) -> usize {
        self.node_of[tet * 16 + i as usize * 4 + j as usize]
    }

    pub fn tail(&self, st: Step) -> usize {
        let (k, i, j) = st.tail_corner();
        self.corner(k, i, j)
    }

    pub fn head(&self, st: Step) -> usize {
        let (k, i, j) = st.head_corner();
        self.corner(k, i, j)
    }

    pub fn cusp(&self, node: usize) -> usize {
        self.node_cusp[node]
    }

    fn adjacency(&self, keep: impl Fn(Step) -> bool) -> Vec<Vec<Step>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &e in &self.edges {
            if keep(e) {
                adj[self.tail(e)].push(e);
                adj[self.head(e)].push(e.reverse());
            }
        }
        adj
    }

    /// BFS tree from `base`: for each reached node, the step used to reach it.
    fn bfs(&self, base: usize, adj: &[Vec<Step>]) -> Vec<Option<Step>> {
        let mut via: Vec<Option<Step>> = vec![None; self.num_nodes];
        let mut seen = vec![false; self.num_nodes];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for &st in &adj[u] {
                let w = self.head(st);
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some(st);
                    queue.push_back(w);
                }
            }
        }
        via
    }

    fn tree_path(&self, via: &[Option<Step>], base: usize, to: usize) -> Vec<Step> {
        let mut out = Vec::new();
        let mut cur = to;
        while cur != base {
            let st = via[cur].expect("node reached by the tree");
            out.push(st);
            cur = self.tail(st);
        }
        out.reverse();
        out
    }

    fn cycles(&self, base: usize, keep: impl Fn(Step) -> bool + Copy) -> Vec<Vec<Step>> {
        let adj = self.adjacency(keep);
        let via = self.bfs(base, &adj);
        let mut out = Vec::new();
        for &e in &self.edges {
            if !keep(e) {
                continue;
            }
            let (u, w) = (self.tail(e), self.head(e));
            if via[w] == Some(e) || via[u] == Some(e.reverse()) {
                continue;
            }
            let mut word = self.tree_path(&via, base, u);
            word.push(e);
            word.extend(inverse_word(&self.tree_path(&via, base, w)));
            out.push(word);
        }
        out
    }

    /// Generator loops at node 0: one per edge outside a BFS spanning tree.
    pub fn generator_loops(&self) -> Vec<Vec<Step>> {
        self.cycles(0, |_| true)
    }

    pub fn cusp_nodes(&self, cusp: usize) -> Vec<usize> {
        (0..self.num_nodes).filter(|&n| self.node_cusp[n] == cusp).collect()
    }

    fn on_cusp(&self, cusp: usize) -> impl Fn(Step) -> bool + Copy + '_ {
        move |st: Step| !st.is_long() && self.node_cusp[self.tail(st)] == cusp
    }

    /// Fundamental cycles of the short-edge graph of one cusp, based at its
    /// least node.
    pub fn cusp_cycles(&self, cusp: usize) -> (usize, Vec<Vec<Step>>) {
        let base = self.cusp_nodes(cusp)[0];
        (base, self.cycles(base, self.on_cusp(cusp)))
    }

    /// Path of short edges between two corners on the same cusp.
    pub fn peripheral_path(&self, from: usize, to: usize) -> Option<Vec<Step>> {
        let cusp = self.node_cusp[from];
        if self.node_cusp[to] != cusp {
            return None;
        }
        let adj = self.adjacency(self.on_cusp(cusp));
        let via = self.bfs(from, &adj);
        if from != to && via[to].is_none() {
            return None;
        }
        Some(self.tree_path(&via, from, to))
    }

    /// Whether consecutive steps of `word` connect and the word closes up.
    pub fn is_loop(&self, word: &[Step]) -> bool {
        word.windows(2).all(|w| self.head(w[0]) == self.tail(w[1]))
            && word.first().zip(word.last()).is_none_or(|(a, b)| self.tail(*a) == self.head(*b))
    }
}
