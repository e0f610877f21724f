//! Ideal triangulations: face pairings, the classes of cells they identify,
//! and the plain-text file format.

mod classes;
mod format;

use std::collections::BTreeMap;

pub use classes::{
    CuspClass, EdgeClass, EdgeInstance, EdgeTable, EulerCounts, FaceClass, PointClass,
    PointInstance, SkeletonGraph,
};
pub use format::parse_triangulation;

use crate::error::{Error, Result};
use crate::perm::Perm4;

/// An integral point t = (t0, t1, t2, t3) of a simplex.
pub type Quad = [u32; 4];

/// Sign tables keyed by n, each mapping (tetrahedron, point) to ±1.
pub type SignTables = BTreeMap<u32, BTreeMap<(usize, Quad), i8>>;

/// Face `source.1` of simplex `source.0` glued to face `target.1` of simplex
/// `target.0`; `perm` sends source vertices to target vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceGluing {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    name: Option<String>,
    gluings: Vec<[(usize, Perm4); 4]>,
    signs: SignTables,
    cocycles: Vec<CocycleSpec>,
}

/// Supplied obstruction cocycle representative: `(tet, face, sign)` entries,
/// unlisted face classes being +.
pub type CocycleSpec = Vec<(usize, usize, i8)>;

impl Triangulation {
    /// Builds and validates a triangulation from per-simplex `(target tet, perm)`
    /// lists; the target face of face `f` is `perm(f)`.
    pub fn new(name: Option<String>, gluings: Vec<[(usize, Perm4); 4]>) -> Result<Self> {
        Self::with_signs(name, gluings, SignTables::new())
    }

    pub fn with_signs(
        name: Option<String>,
        gluings: Vec<[(usize, Perm4); 4]>,
        signs: SignTables,
    ) -> Result<Self> {
        if gluings.is_empty() {
            return Err(Error::InvalidTriangulation("no tetrahedra".into()));
        }
        let s = gluings.len();
        for (k, faces) in gluings.iter().enumerate() {
            for (f, &(k2, p)) in faces.iter().enumerate() {
                if k2 >= s {
                    return Err(Error::InvalidTriangulation(format!(
                        "tetrahedron {k} face {f} glued to nonexistent tetrahedron {k2}"
                    )));
                }
                let f2 = p.apply(f);
                if (k2, f2) == (k, f) {
                    return Err(Error::InvalidTriangulation(format!(
                        "tetrahedron {k} face {f} is glued to itself"
                    )));
                }
                let (back_k, back_p) = gluings[k2][f2];
                if back_k != k || back_p != p.inverse() {
                    return Err(Error::NonInvolutiveGluing {
                        tet: k,
                        face: f,
                        other_tet: k2,
                        other_face: f2,
                    });
                }
            }
        }
        let mut tri = Triangulation { name, gluings, signs: SignTables::new(), cocycles: Vec::new() };
        if !tri.is_connected() {
            return Err(Error::InvalidTriangulation("triangulation is disconnected".into()));
        }
        tri.signs = tri.normalize_sign_tables(signs)?;
        Ok(tri)
    }

    /// Attaches obstruction cocycle representatives (checked when classes are enumerated).
    pub fn with_cocycles(mut self, cocycles: Vec<CocycleSpec>) -> Result<Self> {
        for spec in &cocycles {
            for &(k, f, sg) in spec {
                if k >= self.num_tetrahedra() || f > 3 || (sg != 1 && sg != -1) {
                    return Err(Error::InvalidCocycle(format!("bad face entry tet {k} face {f}")));
                }
            }
        }
        self.cocycles = cocycles;
        Ok(self)
    }

    pub fn cocycles(&self) -> &[CocycleSpec] {
        &self.cocycles
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> FaceGluing {
        let (k2, p) = self.gluings[tet][face];
        FaceGluing { source: (tet, face), target: (k2, p.apply(face)), perm: p }
    }

    pub fn gluings(&self) -> impl Iterator<Item = FaceGluing> + '_ {
        (0..self.num_tetrahedra()).flat_map(move |k| (0..4).map(move |f| self.gluing(k, f)))
    }

    pub fn sign_tables(&self) -> &SignTables {
        &self.signs
    }

    pub fn sign_table(&self, n: u32) -> Option<&BTreeMap<(usize, Quad), i8>> {
        self.signs.get(&n)
    }

    /// Every identification preserves the order of edge endpoints.
    pub fn is_ordered(&self) -> bool {
        self.gluings().all(|g| {
            let f = g.source.1;
            (0..4).all(|i| {
                (i + 1..4).all(|j| i == f || j == f || g.perm.apply(i) < g.perm.apply(j))
            })
        })
    }

    /// All face pairings are odd, i.e. the simplices carry compatible orientations.
    pub fn is_oriented(&self) -> bool {
        self.gluings().all(|g| g.perm.is_odd())
    }

    /// Orientation of each simplex relative to simplex 0, or `None` if the
    /// underlying manifold is non-orientable.
    pub fn tet_orientations(&self) -> Option<Vec<i8>> {
        let s = self.num_tetrahedra();
        let mut o = vec![0i8; s];
        o[0] = 1;
        let mut stack = vec![0];
        while let Some(k) = stack.pop() {
            for f in 0..4 {
                let g = self.gluing(k, f);
                let want = -g.perm.sign() * o[k];
                let k2 = g.target.0;
                if o[k2] == 0 {
                    o[k2] = want;
                    stack.push(k2);
                } else if o[k2] != want {
                    return None;
                }
            }
        }
        Some(o)
    }

    fn is_connected(&self) -> bool {
        let s = self.num_tetrahedra();
        let mut seen = vec![false; s];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(k) = stack.pop() {
            for &(k2, _) in &self.gluings[k] {
                if !seen[k2] {
                    seen[k2] = true;
                    stack.push(k2);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Renumbers simplices: simplex `k` becomes `order[k]`. Sign tables follow.
    pub fn relabel_tetrahedra(&self, order: &[usize]) -> Result<Triangulation> {
        let s = self.num_tetrahedra();
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..s).collect::<Vec<_>>() {
            return Err(Error::InvalidConfig("not a permutation of the simplices".into()));
        }
        let mut gluings = vec![[(0, Perm4::IDENTITY); 4]; s];
        for k in 0..s {
            for f in 0..4 {
                let (k2, p) = self.gluings[k][f];
                gluings[order[k]][f] = (order[k2], p);
            }
        }
        let signs = self
            .signs
            .iter()
            .map(|(&n, table)| {
                (n, table.iter().map(|(&(k, t), &sg)| ((order[k], t), sg)).collect())
            })
            .collect();
        let cocycles = self
            .cocycles
            .iter()
            .map(|spec| spec.iter().map(|&(k, f, sg)| (order[k], f, sg)).collect())
            .collect();
        Triangulation::with_signs(self.name.clone(), gluings, signs)?.with_cocycles(cocycles)
    }

    /// Relabels the vertices of simplex `k` by `vertex_perms[k]`. Sign tables
    /// are dropped since their meaning depends on the vertex labels; cocycle
    /// faces follow the relabeling.
    pub fn relabel_vertices(&self, vertex_perms: &[Perm4]) -> Result<Triangulation> {
        let s = self.num_tetrahedra();
        if vertex_perms.len() != s {
            return Err(Error::InvalidConfig("one permutation per simplex required".into()));
        }
        let mut gluings = vec![[(0, Perm4::IDENTITY); 4]; s];
        for k in 0..s {
            for f in 0..4 {
                let (k2, p) = self.gluings[k][f];
                // new label a = q_k(old), so old = q_k^{-1}(a)
                let q = vertex_perms[k];
                let q2 = vertex_perms[k2];
                let newp = q2.compose(&p).compose(&q.inverse());
                gluings[k][q.apply(f)] = (k2, newp);
            }
        }
        let cocycles = self
            .cocycles
            .iter()
            .map(|spec| spec.iter().map(|&(k, f, sg)| (k, vertex_perms[k].apply(f), sg)).collect())
            .collect();
        Triangulation::new(self.name.clone(), gluings)?.with_cocycles(cocycles)
    }

    fn normalize_sign_tables(&self, tables: SignTables) -> Result<SignTables> {
        let mut out = SignTables::new();
        for (n, table) in tables {
            if n < 2 {
                return Err(Error::malformed(0, format!("sign table for invalid n = {n}")));
            }
            for &(k, t) in table.keys() {
                if k >= self.num_tetrahedra() {
                    return Err(Error::malformed(
                        0,
                        format!("sign table entry for nonexistent tetrahedron {k}"),
                    ));
                }
                if t.iter().sum::<u32>() != n || t.contains(&n) {
                    return Err(Error::malformed(
                        0,
                        format!("{t:?} is not a non-vertex integral point for n = {n}"),
                    ));
                }
            }
            let mut normalized = BTreeMap::new();
            for class in self.point_classes_unsigned(n) {
                let rep = class[0];
                if class.len() == 1 {
                    normalized.insert(rep, 1);
                    continue;
                }
                let rep_sign = match table.get(&rep) {
                    Some(&sg) => sg,
                    None => {
                        return Err(Error::malformed(
                            0,
                            format!(
                                "signs {n} table lacks tet {} point {:?}",
                                rep.0, rep.1
                            ),
                        ))
                    }
                };
                for inst in class {
                    let sg = table.get(&inst).copied().ok_or_else(|| {
                        Error::malformed(
                            0,
                            format!(
                                "signs {n} table lacks tet {} point {:?}",
                                inst.0, inst.1
                            ),
                        )
                    })?;
                    normalized.insert(inst, sg * rep_sign);
                }
            }
            out.insert(n, normalized);
        }
        Ok(out)
    }
}

/// Integral points t with |t| = n that are not vertices, in lexicographic order.
pub fn non_vertex_points(n: u32) -> Vec<Quad> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                let t = [a, b, c, n - a - b - c];
                if !t.contains(&n) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Point of a simplex as the integral point of the edge {i, j} at n = 2.
pub fn edge_point(i: usize, j: usize) -> Quad {
    let mut t = [0; 4];
    t[i] += 1;
    t[j] += 1;
    t
}

/// Variable name `c_<t0t1t2t3>_<k>` of a representative point.
pub fn point_name(tet: usize, t: &Quad) -> String {
    let digits: String = t.iter().map(|x| x.to_string()).collect();
    format!("c_{digits}_{tet}")
}
