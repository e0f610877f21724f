//! Mod-2 cochain complex of the collapsed manifold and obstruction classes in H².

use serde::Serialize;

use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

pub const DEFAULT_H2_CAP: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<bool>>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows, cols, data: vec![vec![false; cols]; rows] }
    }

    pub fn from_rows(rows: Vec<Vec<bool>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Gf2Matrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i][j]
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i][j] ^= true;
    }

    pub fn column(&self, j: usize) -> Vec<bool> {
        self.data.iter().map(|r| r[j]).collect()
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k] {
                    for j in 0..other.cols {
                        out.data[i][j] ^= other.data[k][j];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(false, |acc, (&a, &b)| acc ^ (a & b)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&x| !x))
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j];
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self.data.clone(), self.cols).rows.len()
    }

    /// Basis of the null space {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<bool>> {
        let ech = Echelon::new(self.data.clone(), self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![false; self.cols];
                x[fc] = true;
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if row[fc] {
                        x[p] = true;
                    }
                }
                x
            })
            .collect()
    }
}

/// Reduced row echelon form of a set of vectors.
struct Echelon {
    rows: Vec<Vec<bool>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(mut vecs: Vec<Vec<bool>>, cols: usize) -> Self {
        let mut rows: Vec<Vec<bool>> = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..cols {
            let Some(pos) = vecs.iter().position(|v| v[c]) else { continue };
            let pivot = vecs.swap_remove(pos);
            for v in vecs.iter_mut().chain(rows.iter_mut()) {
                if v[c] {
                    xor_into(v, &pivot);
                }
            }
            rows.push(pivot);
            pivots.push(c);
        }
        Echelon { rows, pivots }
    }

    /// Clears every pivot position; yields the lexicographically least coset member.
    fn reduce(&self, v: &[bool]) -> Vec<bool> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] {
                xor_into(&mut v, row);
            }
        }
        v
    }
}

fn xor_into(v: &mut [bool], w: &[bool]) {
    for (a, &b) in v.iter_mut().zip(w) {
        *a ^= b;
    }
}

/// δ0: cusps → edges, δ1: edges → faces, δ2: faces → simplices, all mod 2.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub d0: Gf2Matrix,
    pub d1: Gf2Matrix,
    pub d2: Gf2Matrix,
}

impl CochainComplex {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.d0.cols(), self.d0.rows(), self.d1.rows(), self.d2.rows())
    }

    pub fn is_complex(&self) -> bool {
        self.d1.mul(&self.d0).is_zero() && self.d2.mul(&self.d1).is_zero()
    }

    pub fn h2_dimension(&self) -> usize {
        let f = self.d1.rows();
        (f - self.d2.rank()) - self.d1.rank()
    }
}

pub fn build_complex(tri: &Triangulation) -> CochainComplex {
    let edges = tri.edge_table();
    let faces = tri.face_classes();
    let (v, e, f, s) = (tri.cusp_classes().len(), edges.len(), faces.len(), tri.num_tetrahedra());

    let mut d0 = Gf2Matrix::zeros(e, v);
    for (idx, class) in edges.classes.iter().enumerate() {
        d0.toggle(idx, class.cusps.0);
        d0.toggle(idx, class.cusps.1);
    }
    let mut d1 = Gf2Matrix::zeros(f, e);
    for (idx, class) in faces.iter().enumerate() {
        let (k, face) = class.instances[0];
        let verts: Vec<usize> = (0..4).filter(|&x| x != face).collect();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            d1.toggle(idx, edges.oriented(k, verts[a], verts[b]).0);
        }
    }
    let face_of = tri.face_class_of();
    let mut d2 = Gf2Matrix::zeros(s, f);
    for (k, row) in face_of.iter().enumerate() {
        for &fc in row {
            d2.toggle(k, fc);
        }
    }
    CochainComplex { d0, d1, d2 }
}

/// A sign per face class satisfying the cocycle condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCocycle {
    face_signs: Vec<i8>,
    #[serde(skip)]
    tet_signs: Vec<[i8; 4]>,
}

impl ObstructionCocycle {
    pub fn new(tri: &Triangulation, face_signs: Vec<i8>) -> Result<Self> {
        let face_of = tri.face_class_of();
        let f = tri.face_classes().len();
        if face_signs.len() != f {
            return Err(Error::InvalidCocycle(format!(
                "expected {f} face signs, got {}",
                face_signs.len()
            )));
        }
        if face_signs.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::InvalidCocycle("signs must be +1 or -1".into()));
        }
        let tet_signs: Vec<[i8; 4]> =
            face_of.iter().map(|row| row.map(|fc| face_signs[fc])).collect();
        for (k, signs) in tet_signs.iter().enumerate() {
            if signs.iter().map(|&x| x as i32).product::<i32>() != 1 {
                return Err(Error::InvalidCocycle(format!(
                    "face signs of tetrahedron {k} multiply to -1"
                )));
            }
        }
        Ok(ObstructionCocycle { face_signs, tet_signs })
    }

    pub fn trivial(tri: &Triangulation) -> Self {
        Self::new(tri, vec![1; tri.face_classes().len()]).expect("trivial cocycle")
    }

    pub fn from_bits(tri: &Triangulation, bits: &[bool]) -> Result<Self> {
        Self::new(tri, bits.iter().map(|&b| if b { -1 } else { 1 }).collect())
    }

    pub fn face_signs(&self) -> &[i8] {
        &self.face_signs
    }

    pub fn bits(&self) -> Vec<bool> {
        self.face_signs.iter().map(|&x| x < 0).collect()
    }

    /// σ_{i,k}: sign of the face of simplex k opposite vertex i.
    pub fn sign(&self, tet: usize, vertex: usize) -> i8 {
        self.tet_signs[tet][vertex]
    }

    pub fn is_trivial(&self) -> bool {
        self.face_signs.iter().all(|&x| x == 1)
    }
}

/// Cocycle from `(tet, face, sign)` entries; unlisted face classes are +.
pub fn cocycle_from_faces(tri: &Triangulation, entries: &[(usize, usize, i8)]) -> Result<ObstructionCocycle> {
    let face_of = tri.face_class_of();
    let mut signs: Vec<Option<i8>> = vec![None; tri.face_classes().len()];
    for &(k, f, sign) in entries {
        if k >= face_of.len() || f > 3 {
            return Err(Error::InvalidCocycle(format!("no face {f} on tet {k}")));
        }
        let slot = &mut signs[face_of[k][f]];
        if slot.is_some_and(|old| old != sign) {
            return Err(Error::InvalidCocycle(format!(
                "conflicting signs for the face class of tet {k} face {f}"
            )));
        }
        *slot = Some(sign);
    }
    ObstructionCocycle::new(tri, signs.into_iter().map(|s| s.unwrap_or(1)).collect())
}

/// Reads cocycles from text: each `cocycle` line opens a block of
/// `tet k face f +|-` lines.
pub fn parse_cocycles(tri: &Triangulation, text: &str) -> Result<Vec<ObstructionCocycle>> {
    let mut blocks: Vec<Vec<(usize, usize, i8)>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words.as_slice() {
            ["cocycle"] => blocks.push(Vec::new()),
            ["tet", k, "face", f, s] => {
                let block = blocks
                    .last_mut()
                    .ok_or_else(|| Error::malformed(line, "face sign outside a cocycle block"))?;
                let k: usize = k.parse().map_err(|_| Error::malformed(line, "bad tetrahedron index"))?;
                let f: usize = f.parse().map_err(|_| Error::malformed(line, "bad face index"))?;
                let sign = match *s {
                    "+" => 1,
                    "-" => -1,
                    _ => return Err(Error::malformed(line, "sign must be + or -")),
                };
                block.push((k, f, sign));
            }
            _ => return Err(Error::malformed(line, format!("unrecognized line: {body}"))),
        }
    }
    blocks.iter().map(|b| cocycle_from_faces(tri, b)).collect()
}

/// One representative per class of H²(M̂; Z/2), trivial class first.
/// Representatives supplied with the triangulation replace the lex-least
/// choice for their class.
pub fn obstruction_classes(tri: &Triangulation, cap: usize) -> Result<Vec<ObstructionCocycle>> {
    let mut reps = enumerate_h2(tri, cap)?;
    let mut taken = vec![false; reps.len()];
    for spec in tri.cocycles() {
        let c = cocycle_from_faces(tri, spec)?;
        let i = class_index(tri, &reps, &c).expect("classes cover H^2");
        if taken[i] {
            return Err(Error::InvalidCocycle(format!(
                "two supplied representatives for obstruction class {i}"
            )));
        }
        taken[i] = true;
        reps[i] = c;
    }
    Ok(reps)
}

impl ObstructionCocycle {
    /// Text block listing the least face of every class with sign -1.
    pub fn to_text(&self, tri: &Triangulation) -> String {
        let mut out = String::from("cocycle\n");
        for (class, fc) in tri.face_classes().iter().enumerate() {
            if self.face_signs[class] < 0 {
                let (k, f) = fc.instances[0];
                out.push_str(&format!("  tet {k} face {f} -\n"));
            }
        }
        out
    }
}

/// Index of the class in `classes` that contains `sigma`.
pub fn class_index(
    tri: &Triangulation,
    classes: &[ObstructionCocycle],
    sigma: &ObstructionCocycle,
) -> Option<usize> {
    classes.iter().position(|c| cohomologous(tri, c, sigma))
}

/// One lexicographically least representative per class of H²(M̂; Z/2),
/// trivial class first.
pub fn enumerate_h2(tri: &Triangulation, cap: usize) -> Result<Vec<ObstructionCocycle>> {
    let cx = build_complex(tri);
    let f = cx.d1.rows();
    let boundaries = Echelon::new(cx.d1.transpose().data, f);
    let cycles = cx.d2.kernel();
    let reduced: Vec<Vec<bool>> = cycles.iter().map(|z| boundaries.reduce(z)).collect();
    let basis = Echelon::new(reduced, f).rows;
    let dim = basis.len();
    if dim >= usize::BITS as usize || (1usize << dim) > cap {
        return Err(Error::GroupTooLarge { dim, cap });
    }
    let mut reps: Vec<Vec<bool>> = (0..1usize << dim)
        .map(|mask| {
            let mut v = vec![false; f];
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    xor_into(&mut v, b);
                }
            }
            boundaries.reduce(&v)
        })
        .collect();
    reps.sort();
    reps.dedup();
    reps.iter().map(|bits| ObstructionCocycle::from_bits(tri, bits)).collect()
}

/// Whether two cocycles differ by a coboundary.
pub fn cohomologous(tri: &Triangulation, a: &ObstructionCocycle, b: &ObstructionCocycle) -> bool {
    let cx = build_complex(tri);
    let boundaries = Echelon::new(cx.d1.transpose().data, cx.d1.rows());
    let diff: Vec<bool> = a.bits().iter().zip(b.bits()).map(|(x, y)| x ^ y).collect();
    boundaries.reduce(&diff).iter().all(|&x| !x)
}

/// σ·δτ for an edge-class sign assignment τ.
pub fn coboundary_adjust(
    tri: &Triangulation,
    sigma: &ObstructionCocycle,
    tau: &[i8],
) -> Result<ObstructionCocycle> {
    let cx = build_complex(tri);
    if tau.len() != cx.d1.cols() {
        return Err(Error::InvalidCocycle(format!(
            "expected {} edge signs, got {}",
            cx.d1.cols(),
            tau.len()
        )));
    }
    let tau_bits: Vec<bool> = tau.iter().map(|&x| x < 0).collect();
    let delta = cx.d1.mul_vec(&tau_bits);
    let signs = sigma
        .face_signs
        .iter()
        .zip(delta)
        .map(|(&s, d)| if d { -s } else { s })
        .collect();
    ObstructionCocycle::new(tri, signs)
}

/// Basis of the 1-cocycles Z¹(M̂; Z/2) over edge classes.
pub fn one_cocycles(tri: &Triangulation) -> Vec<Vec<bool>> {
    build_complex(tri).d1.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn complexes_square_to_zero() {
        for t in fixtures::all() {
            let cx = build_complex(&t);
            assert!(cx.is_complex());
            let f = cx.d1.rows();
            assert_eq!(cx.d2.kernel().len() + cx.d2.rank(), f);
        }
    }

    #[test]
    fn figure8_dims() {
        let cx = build_complex(&fixtures::figure8());
        assert_eq!(cx.dims(), (1, 2, 4, 2));
        let d = build_complex(&fixtures::doubled_simplex());
        assert_eq!((d.d2.rows(), d.d2.cols()), (2, 4));
        // each face class touches both simplices once
        for j in 0..4 {
            assert_eq!(d.d2.column(j), vec![true, true]);
        }
    }

    #[test]
    fn class_counts() {
        let fig8 = enumerate_h2(&fixtures::figure8(), DEFAULT_H2_CAP).unwrap();
        assert_eq!(fig8.len(), 2);
        assert!(fig8[0].is_trivial());
        assert_eq!(fig8[1].face_signs(), &[1, 1, -1, -1]);
        assert_eq!(enumerate_h2(&fixtures::sister(), DEFAULT_H2_CAP).unwrap().len(), 2);
        let wh = fixtures::whitehead();
        let r = build_complex(&wh).h2_dimension();
        assert_eq!(enumerate_h2(&wh, DEFAULT_H2_CAP).unwrap().len(), 1 << r);
        assert_eq!(r, 2);
        assert!(matches!(enumerate_h2(&wh, 2), Err(Error::GroupTooLarge { dim: 2, cap: 2 })));
    }

    #[test]
    fn representatives_pairwise_distinct() {
        for t in fixtures::all() {
            let reps = enumerate_h2(&t, DEFAULT_H2_CAP).unwrap();
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    assert!(!cohomologous(&t, a, b));
                }
            }
        }
    }

    #[test]
    fn adjustments() {
        let t = fixtures::figure8();
        let reps = enumerate_h2(&t, DEFAULT_H2_CAP).unwrap();
        assert_eq!(coboundary_adjust(&t, &reps[1], &[1, 1]).unwrap(), reps[1]);
        for tau in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            let adj = coboundary_adjust(&t, &reps[1], &tau).unwrap();
            assert!(!adj.is_trivial());
            assert!(cohomologous(&t, &adj, &reps[1]));
            let triv = coboundary_adjust(&t, &reps[0], &tau).unwrap();
            assert!(cohomologous(&t, &triv, &reps[0]));
        }
    }

    #[test]
    fn cocycle_text_round_trip() {
        let t = fixtures::whitehead();
        for c in enumerate_h2(&t, DEFAULT_H2_CAP).unwrap() {
            let back = parse_cocycles(&t, &c.to_text(&t)).unwrap();
            assert_eq!(back, vec![c]);
        }
        assert!(parse_cocycles(&fixtures::figure8(), "cocycle\n  tet 0 face 0 -\n").is_err());
        assert!(matches!(
            parse_cocycles(&fixtures::figure8(), "tet 0 face 0 -\n"),
            Err(Error::MalformedInput { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_non_cocycles() {
        let t = fixtures::figure8();
        assert!(ObstructionCocycle::new(&t, vec![1, 1, 1, -1]).is_err());
    }
}
