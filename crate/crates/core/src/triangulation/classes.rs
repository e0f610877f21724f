use std::collections::HashMap;

use serde::Serialize;

use super::{edge_point, non_vertex_points, point_name, Quad, Triangulation};

/// Union-find that also tracks a Z/2 parity relative to the root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
    conflict: Vec<bool>,
}

impl ParityUnionFind {
    fn new(size: usize) -> Self {
        ParityUnionFind {
            parent: (0..size).collect(),
            parity: vec![0; size],
            conflict: vec![false; size],
        }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Declares parity(a) + parity(b) = `rel`.
    fn union(&mut self, a: usize, b: usize, rel: u8) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != rel {
                self.conflict[ra] = true;
            }
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.parity[hi] = pa ^ pb ^ rel;
        self.conflict[lo] |= self.conflict[hi];
    }

    /// Groups of elements, each sorted, ordered by their least element.
    fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut index = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.parent.len() {
            let (r, _) = self.find(x);
            let id = *index.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[id].push(x);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointInstance {
    pub tet: usize,
    pub t: Quad,
    /// Identification sign relative to the representative, if known.
    pub sign: Option<i8>,
}

/// One orbit of integral points under the face pairings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointClass {
    /// Sorted by (tet, t); the first instance is the representative.
    pub instances: Vec<PointInstance>,
    /// The derived signs identify the point with its own negative.
    pub sign_conflict: bool,
}

impl PointClass {
    pub fn representative(&self) -> (usize, Quad) {
        (self.instances[0].tet, self.instances[0].t)
    }

    pub fn name(&self) -> String {
        let (k, t) = self.representative();
        point_name(k, &t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeInstance {
    pub tet: usize,
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub instances: Vec<EdgeInstance>,
    /// Cusps at vertex i and vertex j of the representative.
    pub cusps: (usize, usize),
    pub sign_conflict: bool,
}

impl EdgeClass {
    pub fn representative(&self) -> EdgeInstance {
        self.instances[0]
    }

    pub fn name(&self) -> String {
        let r = self.representative();
        point_name(r.tet, &edge_point(r.i, r.j))
    }

    pub fn is_self_edge(&self) -> bool {
        self.cusps.0 == self.cusps.1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspClass {
    pub index: usize,
    pub instances: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceClass {
    pub instances: Vec<(usize, usize)>,
}

/// The 1-skeleton of the collapsed manifold: cusps joined by edge classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SkeletonGraph {
    pub fn is_self_edge(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let mut seen = vec![false; self.num_vertices];
        seen[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &self.edges {
                if seen[a] != seen[b] {
                    seen[a] = true;
                    seen[b] = true;
                    changed = true;
                }
            }
        }
        seen.into_iter().all(|x| x)
    }
}

/// Oriented edge lookup for n = 2: which class and sign c_{ij,k} carries.
#[derive(Clone, Debug)]
pub struct EdgeTable {
    pub classes: Vec<EdgeClass>,
    slots: Vec<[[(usize, i8); 4]; 4]>,
}

impl EdgeTable {
    /// Class index and sign of the oriented edge i→j of simplex `tet`, so that
    /// c_{ij,tet} = sign · c_class (with c_ji = −c_ij).
    pub fn oriented(&self, tet: usize, i: usize, j: usize) -> (usize, i8) {
        debug_assert!(i != j);
        self.slots[tet][i][j]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCounts {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub s: usize,
}

impl EulerCounts {
    pub fn chi(&self) -> i64 {
        self.v as i64 - self.e as i64 + self.f as i64 - self.s as i64
    }
}

impl Triangulation {
    fn face_points(n: u32) -> (Vec<Quad>, HashMap<Quad, usize>) {
        let pts = non_vertex_points(n);
        let index = pts.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        (pts, index)
    }

    fn point_union_find(&self, n: u32) -> (Vec<Quad>, ParityUnionFind) {
        let (pts, index) = Self::face_points(n);
        let m = pts.len();
        let mut uf = ParityUnionFind::new(self.num_tetrahedra() * m);
        for g in self.gluings() {
            let (k, f) = g.source;
            let k2 = g.target.0;
            for (a, t) in pts.iter().enumerate() {
                if t[f] != 0 {
                    continue;
                }
                let mut t2 = [0; 4];
                for i in 0..4 {
                    t2[g.perm.apply(i)] = t[i];
                }
                // For n = 2 the parity records whether the edge direction flips.
                let rel = if n == 2 {
                    let nz: Vec<usize> = (0..4).filter(|&i| t[i] > 0).collect();
                    (g.perm.apply(nz[0]) > g.perm.apply(nz[1])) as u8
                } else {
                    0
                };
                uf.union(k * m + a, k2 * m + index[&t2], rel);
            }
        }
        (pts, uf)
    }

    /// Classes of (tetrahedron, point) slots without signs, sorted by representative.
    pub(crate) fn point_classes_unsigned(&self, n: u32) -> Vec<Vec<(usize, Quad)>> {
        let (pts, mut uf) = self.point_union_find(n);
        let m = pts.len();
        uf.groups()
            .into_iter()
            .map(|g| g.into_iter().map(|x| (x / m, pts[x % m])).collect())
            .collect()
    }

    /// Orbits of non-vertex integral points of level n, sorted by representative.
    pub fn point_classes(&self, n: u32) -> Vec<PointClass> {
        let (pts, mut uf) = self.point_union_find(n);
        let m = pts.len();
        let ordered = self.is_ordered();
        let table = self.sign_table(n);
        let groups = uf.groups();
        groups
            .into_iter()
            .map(|g| {
                let (root, rep_par) = uf.find(g[0]);
                let conflict = table.is_none() && n == 2 && uf.conflict[root];
                let instances = g
                    .iter()
                    .map(|&x| {
                        let (tet, t) = (x / m, pts[x % m]);
                        let sign = if let Some(table) = table {
                            Some(table[&(tet, t)])
                        } else if n == 2 {
                            let (_, par) = uf.find(x);
                            Some(if par == rep_par { 1 } else { -1 })
                        } else if ordered {
                            Some(1)
                        } else {
                            None
                        };
                        PointInstance { tet, t, sign }
                    })
                    .collect();
                PointClass { instances, sign_conflict: conflict }
            })
            .collect()
    }

    pub fn cusp_classes(&self) -> Vec<CuspClass> {
        let s = self.num_tetrahedra();
        let mut uf = ParityUnionFind::new(4 * s);
        for g in self.gluings() {
            let (k, f) = g.source;
            for v in (0..4).filter(|&v| v != f) {
                uf.union(4 * k + v, 4 * g.target.0 + g.perm.apply(v), 0);
            }
        }
        uf.groups()
            .into_iter()
            .enumerate()
            .map(|(index, g)| CuspClass {
                index,
                instances: g.into_iter().map(|x| (x / 4, x % 4)).collect(),
            })
            .collect()
    }

    /// `cusp_of()[k][v]` is the cusp containing vertex v of simplex k.
    pub fn cusp_of(&self) -> Vec<[usize; 4]> {
        let mut out = vec![[0; 4]; self.num_tetrahedra()];
        for c in self.cusp_classes() {
            for (k, v) in c.instances {
                out[k][v] = c.index;
            }
        }
        out
    }

    pub fn face_classes(&self) -> Vec<FaceClass> {
        let s = self.num_tetrahedra();
        let mut uf = ParityUnionFind::new(4 * s);
        for g in self.gluings() {
            let (k, f) = g.source;
            uf.union(4 * k + f, 4 * g.target.0 + g.target.1, 0);
        }
        uf.groups()
            .into_iter()
            .map(|g| FaceClass { instances: g.into_iter().map(|x| (x / 4, x % 4)).collect() })
            .collect()
    }

    /// `face_class_of()[k][f]` is the class of the face of simplex k opposite vertex f.
    pub fn face_class_of(&self) -> Vec<[usize; 4]> {
        let mut out = vec![[0; 4]; self.num_tetrahedra()];
        for (idx, c) in self.face_classes().into_iter().enumerate() {
            for (k, f) in c.instances {
                out[k][f] = idx;
            }
        }
        out
    }

    /// Edge classes (n = 2 point classes), with identification signs.
    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        let cusp_of = self.cusp_of();
        self.point_classes(2)
            .into_iter()
            .map(|pc| {
                let instances: Vec<EdgeInstance> = pc
                    .instances
                    .iter()
                    .map(|p| {
                        let nz: Vec<usize> = (0..4).filter(|&i| p.t[i] > 0).collect();
                        EdgeInstance {
                            tet: p.tet,
                            i: nz[0],
                            j: nz[1],
                            sign: p.sign.unwrap_or(1),
                        }
                    })
                    .collect();
                let r = instances[0];
                EdgeClass {
                    cusps: (cusp_of[r.tet][r.i], cusp_of[r.tet][r.j]),
                    instances,
                    sign_conflict: pc.sign_conflict,
                }
            })
            .collect()
    }

    pub fn edge_table(&self) -> EdgeTable {
        let classes = self.edge_classes();
        let mut slots = vec![[[(usize::MAX, 0i8); 4]; 4]; self.num_tetrahedra()];
        for (idx, class) in classes.iter().enumerate() {
            for inst in &class.instances {
                slots[inst.tet][inst.i][inst.j] = (idx, inst.sign);
                slots[inst.tet][inst.j][inst.i] = (idx, -inst.sign);
            }
        }
        EdgeTable { classes, slots }
    }

    pub fn one_skeleton(&self) -> SkeletonGraph {
        let edges = self.edge_classes().iter().map(|c| c.cusps).collect();
        SkeletonGraph { num_vertices: self.cusp_classes().len(), edges }
    }

    pub fn euler_counts(&self) -> EulerCounts {
        EulerCounts {
            v: self.cusp_classes().len(),
            e: self.edge_classes().len(),
            f: self.face_classes().len(),
            s: self.num_tetrahedra(),
        }
    }

    /// Euler characteristic of the link of each cusp.
    pub fn cusp_link_euler(&self) -> Vec<i64> {
        let cusps = self.cusp_classes();
        let mut out = Vec::with_capacity(cusps.len());
        let edges = self.edge_classes();
        for c in &cusps {
            let triangles = c.instances.len() as i64;
            let sides = 3 * triangles / 2;
            let vertices: i64 = edges
                .iter()
                .map(|e| (e.cusps.0 == c.index) as i64 + (e.cusps.1 == c.index) as i64)
                .sum();
            out.push(vertices - sides + triangles);
        }
        out
    }
}
