//! The diagonal torus action: α*, its cokernel and kernel, basic generators
//! and the reduced Ptolemy ideal.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::{integer_kernel, smith_normal_form, IntMatrix};
use crate::poly::rat;
use crate::triangulation::{edge_point, Quad, Triangulation};
use crate::variety::PtolemyIdeal;

#[derive(Clone, Debug)]
pub struct AlphaStar {
    pub n: u32,
    pub matrix: IntMatrix,
    /// (cusp, j) for each row, j in 1..n.
    pub rows: Vec<(usize, u32)>,
    /// Point-class names for each column.
    pub names: Vec<String>,
    /// Representative (tet, t) of each column.
    pub points: Vec<(usize, Quad)>,
}

impl AlphaStar {
    fn row_of(&self, cusp: usize, j: u32) -> usize {
        self.rows.iter().position(|&r| r == (cusp, j)).expect("row exists")
    }
}

fn row_order(v: usize, n: u32) -> Vec<(usize, u32)> {
    let mut rows = Vec::new();
    for c in 0..v {
        let js: Vec<u32> = if c % 2 == 0 { (1..n).collect() } else { (1..n).rev().collect() };
        rows.extend(js.into_iter().map(|j| (c, j)));
    }
    rows
}

/// Column of α* for the point t of simplex k: Σ_{t_i > 0} x_{cusp(k,i)} ⊗ e_{t_i}.
fn point_column(alpha: &AlphaStar, cusp_of: &[[usize; 4]], k: usize, t: &Quad) -> Vec<i64> {
    let mut col = vec![0; alpha.rows.len()];
    for i in 0..4 {
        if t[i] > 0 {
            col[alpha.row_of(cusp_of[k][i], t[i])] += 1;
        }
    }
    col
}

pub fn alpha_star(tri: &Triangulation, n: u32) -> AlphaStar {
    let cusp_of = tri.cusp_of();
    let v = tri.cusp_classes().len();
    let classes = tri.point_classes(n);
    let mut alpha = AlphaStar {
        n,
        matrix: IntMatrix::zeros(0, 0),
        rows: row_order(v, n),
        names: classes.iter().map(|c| c.name()).collect(),
        points: classes.iter().map(|c| c.representative()).collect(),
    };
    let cols: Vec<Vec<i64>> =
        alpha.points.iter().map(|(k, t)| point_column(&alpha, &cusp_of, *k, t)).collect();
    let rows: Vec<Vec<i64>> =
        (0..alpha.rows.len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    alpha.matrix = if rows.is_empty() {
        IntMatrix::zeros(0, cols.len())
    } else {
        IntMatrix::from_i64(&rows)
    };
    alpha
}

#[derive(Clone, Debug, Serialize)]
pub struct Cokernel {
    pub invariant_factors: Vec<String>,
    pub order: String,
}

/// Smith form of α*; the cokernel must be Z/n.
pub fn cokernel(alpha: &AlphaStar) -> Result<Cokernel> {
    let snf = smith_normal_form(&alpha.matrix);
    let factors = snf.invariant_factors();
    let (torsion, free) = snf.cokernel();
    let strs: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
    if free != 0 || torsion != vec![BigInt::from(alpha.n)] {
        return Err(Error::UnexpectedCokernel { n: alpha.n, factors: strs });
    }
    Ok(Cokernel { invariant_factors: strs, order: alpha.n.to_string() })
}

/// Exponent vector w with α*(w) = 0, i.e. the invariant Laurent monomial c^w.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantMonomial {
    pub exponents: Vec<i64>,
}

impl InvariantMonomial {
    pub fn display(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .zip(names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub fn kernel_basis(alpha: &AlphaStar) -> Vec<InvariantMonomial> {
    integer_kernel(&alpha.matrix)
        .into_iter()
        .map(|w| InvariantMonomial {
            exponents: w.iter().map(|x| x.to_i64().expect("small exponent")).collect(),
        })
        .collect()
}

/// How the n = 2 basic set was built from the 1-skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleKind {
    /// One cusp: a single edge.
    SingleCusp { edge: usize },
    /// A self edge plus a maximal tree.
    SelfEdge { edge: usize },
    /// A face (tet, face) with edges ε1, ε2, ε3; the tree contains ε2 and ε3.
    ThreeCycle { tet: usize, face: usize, edges: [usize; 3] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeStructure {
    pub kind: CycleKind,
    /// Edge classes of the maximal tree, in insertion order.
    pub tree: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasicGeneratorSet {
    pub n: u32,
    /// Column (point class) indices, ascending.
    pub classes: Vec<usize>,
    pub names: Vec<String>,
    #[serde(skip)]
    pub submatrix: IntMatrix,
    pub determinant: String,
    pub strategy: String,
    pub structure: Option<TreeStructure>,
}

/// Kruskal in edge-index order, seeded with `seed` edges.
fn spanning_tree(v: usize, edges: &[(usize, usize)], seed: &[usize]) -> Vec<usize> {
    let mut comp: Vec<usize> = (0..v).collect();
    fn root(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        comp[x] = r;
        r
    }
    let mut tree = Vec::new();
    for e in seed.iter().copied().chain(0..edges.len()) {
        let (a, b) = edges[e];
        let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
        if ra != rb && !tree.contains(&e) {
            comp[ra.max(rb)] = ra.min(rb);
            tree.push(e);
        }
    }
    tree
}

fn finish(
    alpha: &AlphaStar,
    mut classes: Vec<usize>,
    strategy: &str,
    structure: Option<TreeStructure>,
) -> Option<BasicGeneratorSet> {
    classes.sort_unstable();
    classes.dedup();
    if classes.len() != alpha.rows.len() {
        return None;
    }
    let submatrix = alpha.matrix.select_columns(&classes);
    let det = submatrix.determinant();
    if det.abs() != BigInt::from(alpha.n) {
        return None;
    }
    Some(BasicGeneratorSet {
        n: alpha.n,
        names: classes.iter().map(|&c| alpha.names[c].clone()).collect(),
        classes,
        submatrix,
        determinant: det.to_string(),
        strategy: strategy.into(),
        structure,
    })
}

/// Edge classes of the face `face` of simplex `tet`: (ε1, ε2, ε3) with ε1
/// opposite the lowest vertex.
fn face_edges(tri: &Triangulation, tet: usize, face: usize) -> ([usize; 3], [usize; 3]) {
    let table = tri.edge_table();
    let vs: Vec<usize> = (0..4).filter(|&x| x != face).collect();
    let e = |a: usize, b: usize| table.oriented(tet, vs[a], vs[b]).0;
    ([e(1, 2), e(0, 1), e(0, 2)], [vs[0], vs[1], vs[2]])
}

/// Chooses the tree-with-cycle skeleton structure used for any n.
pub fn skeleton_structure(tri: &Triangulation) -> TreeStructure {
    let skel = tri.one_skeleton();
    let v = skel.num_vertices;
    if v == 1 {
        return TreeStructure { kind: CycleKind::SingleCusp { edge: 0 }, tree: Vec::new() };
    }
    if let Some(e) = (0..skel.edges.len()).find(|&e| skel.is_self_edge(e)) {
        let tree = spanning_tree(v, &skel.edges, &[]);
        return TreeStructure { kind: CycleKind::SelfEdge { edge: e }, tree };
    }
    // without self edges every face spans three distinct cusps
    let (tet, face) = tri.face_classes()[0].instances[0];
    let (edges, _) = face_edges(tri, tet, face);
    let tree = spanning_tree(v, &skel.edges, &[edges[1], edges[2]]);
    TreeStructure { kind: CycleKind::ThreeCycle { tet, face, edges }, tree }
}

pub fn find_basic_generators(tri: &Triangulation, n: u32) -> Result<BasicGeneratorSet> {
    let alpha = alpha_star(tri, n);
    let structure = skeleton_structure(tri);
    let found = if n == 2 {
        let mut cols = structure.tree.clone();
        match structure.kind {
            CycleKind::SingleCusp { edge } | CycleKind::SelfEdge { edge } => cols.push(edge),
            CycleKind::ThreeCycle { edges, .. } => cols.push(edges[0]),
        }
        finish(&alpha, cols, "tree-with-cycle", Some(structure.clone()))
    } else {
        pattern_search(tri, &alpha, &structure)
    };
    match found {
        Some(b) => Ok(b),
        None => greedy_fallback(&alpha).ok_or(Error::NoBasicSet),
    }
}

fn class_lookup(tri: &Triangulation, n: u32) -> std::collections::HashMap<(usize, Quad), usize> {
    let mut map = std::collections::HashMap::new();
    for (idx, class) in tri.point_classes(n).iter().enumerate() {
        for inst in &class.instances {
            map.insert((inst.tet, inst.t), idx);
        }
    }
    map
}

/// Edge points j·e_a + (n−j)·e_b of the representative of an edge class.
fn edge_points(tri: &Triangulation, n: u32, edge: usize) -> Vec<(usize, Quad)> {
    let r = tri.edge_classes()[edge].representative();
    (1..n)
        .map(|j| {
            let mut t = [0; 4];
            t[r.i] = j;
            t[r.j] = n - j;
            (r.tet, t)
        })
        .collect()
}

/// Tree edge points plus a search over n − 1 points near the chosen cycle.
fn pattern_search(
    tri: &Triangulation,
    alpha: &AlphaStar,
    structure: &TreeStructure,
) -> Option<BasicGeneratorSet> {
    let n = alpha.n;
    let lookup = class_lookup(tri, n);
    let mut base = BTreeSet::new();
    for &e in &structure.tree {
        for p in edge_points(tri, n, e) {
            base.insert(lookup[&p]);
        }
    }
    let (tet, face, cycle_edges): (usize, usize, Vec<usize>) = match structure.kind {
        CycleKind::SingleCusp { edge } | CycleKind::SelfEdge { edge } => {
            let r = tri.edge_classes()[edge].representative();
            let face = (0..4).find(|&f| f != r.i && f != r.j).unwrap();
            (r.tet, face, vec![edge])
        }
        CycleKind::ThreeCycle { tet, face, edges } => (tet, face, edges.to_vec()),
    };
    let mut pool: Vec<usize> = Vec::new();
    let push = |c: usize, pool: &mut Vec<usize>| {
        if !base.contains(&c) && !pool.contains(&c) {
            pool.push(c);
        }
    };
    for &e in &cycle_edges {
        for p in edge_points(tri, n, e) {
            push(lookup[&p], &mut pool);
        }
    }
    for t in crate::triangulation::non_vertex_points(n) {
        if t[face] == 0 {
            push(lookup[&(tet, t)], &mut pool);
        }
    }
    let need = alpha.rows.len().checked_sub(base.len())?;
    let base: Vec<usize> = base.into_iter().collect();
    let mut combo: Vec<usize> = (0..need).collect();
    if need > pool.len() {
        return None;
    }
    loop {
        let mut cols = base.clone();
        cols.extend(combo.iter().map(|&i| pool[i]));
        if let Some(b) = finish(alpha, cols, "tree-with-cycle search", Some(structure.clone())) {
            return Some(b);
        }
        // next combination in lexicographic order
        let mut i = need;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if combo[i] < pool.len() - need + i {
                combo[i] += 1;
                for j in i + 1..need {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn full_rank_columns(alpha: &AlphaStar) -> Vec<usize> {
    let m = &alpha.matrix;
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.cols() {
        let mut trial = chosen.clone();
        trial.push(j);
        if m.select_columns(&trial).rank() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == m.rows() {
            break;
        }
    }
    chosen
}

/// Greedy full-rank selection followed by swaps that shrink |det| to n.
fn greedy_fallback(alpha: &AlphaStar) -> Option<BasicGeneratorSet> {
    let m = &alpha.matrix;
    let mut chosen = full_rank_columns(alpha);
    if chosen.len() != m.rows() {
        return None;
    }
    let target = BigInt::from(alpha.n);
    let mut det = m.select_columns(&chosen).determinant().abs();
    'outer: while det != target {
        for pos in 0..chosen.len() {
            for j in 0..m.cols() {
                if chosen.contains(&j) {
                    continue;
                }
                let mut trial = chosen.clone();
                trial[pos] = j;
                let d = m.select_columns(&trial).determinant().abs();
                if !d.is_zero() && d < det {
                    chosen = trial;
                    det = d;
                    continue 'outer;
                }
            }
        }
        return None;
    }
    finish(alpha, chosen, "greedy", None)
}

/// Fixes the basic generators to 1 and drops their variables.
pub fn reduce_ideal(ideal: &PtolemyIdeal, basic: &BasicGeneratorSet) -> PtolemyIdeal {
    let one = rat(1);
    let nv = ideal.nvars();
    let fixed_vars: Vec<usize> =
        (0..ideal.classes.len()).filter(|&v| basic.classes.contains(&ideal.classes[v])).collect();
    let mut map = Vec::with_capacity(nv);
    let mut next = 0;
    for v in 0..nv {
        if fixed_vars.contains(&v) {
            map.push(None);
        } else {
            map.push(Some(next));
            next += 1;
        }
    }
    let generators = ideal
        .generators
        .iter()
        .map(|g| {
            let mut p = g.clone();
            for &v in &fixed_vars {
                p = p.substitute(v, &one);
            }
            p.remap(next, &map)
        })
        .collect();
    let keep = |v: &usize| !fixed_vars.contains(v);
    let mut fixed = ideal.fixed.clone();
    fixed.extend(fixed_vars.iter().map(|&v| (ideal.classes[v], ideal.variables[v].clone())));
    PtolemyIdeal {
        variables: (0..nv).filter(keep).map(|v| ideal.variables[v].clone()).collect(),
        classes: (0..ideal.classes.len()).filter(keep).map(|v| ideal.classes[v]).collect(),
        generators,
        fixed,
        ..ideal.clone()
    }
}

fn lemma_matrix(k: usize, with_t: bool) -> IntMatrix {
    let mut m = IntMatrix::identity(k);
    for j in 0..k {
        let v = m.get(0, j) + BigInt::one();
        m.set(0, j, v);
    }
    for i in 1..k {
        m.set(i, i - 1, -BigInt::one());
    }
    if with_t {
        let v = m.get(k - 1, k - 1) + BigInt::one();
        m.set(k - 1, k - 1, v);
    }
    m
}

/// (det(I+R−S), det(I+R+T−S)) for k×k matrices.
pub fn determinant_lemmas(k: usize) -> (BigInt, BigInt) {
    assert!(k >= 1);
    (lemma_matrix(k, false).determinant(), lemma_matrix(k, true).determinant())
}

pub fn lemma_matrices(k: usize) -> (IntMatrix, IntMatrix) {
    (lemma_matrix(k, false), lemma_matrix(k, true))
}

/// Edge class names of the representative edge of each column at n = 2.
pub fn edge_column_name(tri: &Triangulation, e: usize) -> String {
    let r = tri.edge_classes()[e].representative();
    crate::triangulation::point_name(r.tet, &edge_point(r.i, r.j))
}
