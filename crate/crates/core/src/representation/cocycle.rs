use std::collections::BTreeMap;

use rug::Complex;

use super::groupoid::{Groupoid, Step};
use super::mat2::{abs, Mat2};
use crate::cohomology::ObstructionCocycle;
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

/// Residual above which a face or identification check fails.
pub const FACE_TOL: f64 = 1e-10;

/// SL(2, C) labels on the edges of the truncated complex.
#[derive(Clone, Debug)]
pub struct NaturalCocycle {
    groupoid: Groupoid,
    labels: BTreeMap<Step, Mat2>,
    prec: u32,
    /// Largest deviation of a hexagon or triangle from its expected value.
    pub face_residual: f64,
}

fn oriented(tri_table: &crate::triangulation::EdgeTable, values: &[Complex], k: usize, i: u8, j: u8) -> Complex {
    let (class, sign) = tri_table.oriented(k, i as usize, j as usize);
    let v = values[class].clone();
    if sign < 0 {
        -v
    } else {
        v
    }
}

/// Builds the natural cocycle of an n = 2 Ptolemy assignment given per edge
/// class, and checks the face relations.
pub fn build_natural_cocycle(
    tri: &Triangulation,
    sigma: &ObstructionCocycle,
    values: &[Complex],
    prec: u32,
) -> Result<NaturalCocycle> {
    let table = tri.edge_table();
    if values.len() != table.len() {
        return Err(Error::InvalidConfig(format!(
            "expected {} edge values, got {}",
            table.len(),
            values.len()
        )));
    }
    let values: Vec<Complex> = values.iter().map(|v| Complex::with_val(prec, v)).collect();
    for (class, v) in values.iter().enumerate() {
        if abs(v) < FACE_TOL {
            let r = table.classes[class].representative();
            return Err(Error::FaceProductViolation { tet: r.tet, face: 6 - r.i - r.j, residual: 0.0 });
        }
    }
    let mut labels = BTreeMap::new();
    for k in 0..tri.num_tetrahedra() {
        let c = |i: u8, j: u8| oriented(&table, &values, k, i, j);
        for i in 0..4u8 {
            for j in 0..4u8 {
                if i != j {
                    labels.insert(Step::Long { tet: k, i, j }, Mat2::alpha(&c(i, j)));
                }
            }
        }
        for v in 0..4u8 {
            for a in 0..4u8 {
                for b in 0..4u8 {
                    if a == v || b == v || a == b {
                        continue;
                    }
                    let m = 6 - v - a - b;
                    let denom = Complex::with_val(prec, c(v, a) * c(v, b));
                    let mut x = -Complex::with_val(prec, c(a, b) / denom);
                    if sigma.sign(k, m as usize) < 0 {
                        x = -x;
                    }
                    labels.insert(Step::Short { tet: k, v, a, b }, Mat2::beta(&x));
                }
            }
        }
    }
    from_labels(tri, Some(sigma), labels, prec)
}

/// Wraps explicit labels; checks identified edges agree and, when `sigma` is
/// given, the face relations.
pub fn from_labels(
    tri: &Triangulation,
    sigma: Option<&ObstructionCocycle>,
    labels: BTreeMap<Step, Mat2>,
    prec: u32,
) -> Result<NaturalCocycle> {
    let groupoid = Groupoid::new(tri);
    let mut worst = 0.0f64;
    for &(a, b, (tet, face)) in &groupoid.identified {
        let r = labels[&a].distance(&labels[&b]);
        if r > FACE_TOL {
            return Err(Error::FaceProductViolation { tet, face, residual: r });
        }
        worst = worst.max(r);
    }
    let mut cocycle = NaturalCocycle { groupoid, labels, prec, face_residual: worst };
    if let Some(sigma) = sigma {
        for k in 0..tri.num_tetrahedra() {
            for f in 0..4u8 {
                let r = cocycle.hexagon(k, f).distance_to_scalar(sigma.sign(k, f as usize) as i32);
                if r > FACE_TOL {
                    return Err(Error::FaceProductViolation { tet: k, face: f as usize, residual: r });
                }
                worst = worst.max(r);
                // vertex triangle at vertex f
                let o: Vec<u8> = (0..4).filter(|&x| x != f).collect();
                let tri_word = [
                    Step::Short { tet: k, v: f, a: o[0], b: o[1] },
                    Step::Short { tet: k, v: f, a: o[1], b: o[2] },
                    Step::Short { tet: k, v: f, a: o[2], b: o[0] },
                ];
                let r = cocycle.eval(&tri_word).distance_to_scalar(1);
                if r > FACE_TOL {
                    let face = (0..4).find(|&x| x != f as usize).unwrap_or(0);
                    return Err(Error::FaceProductViolation { tet: k, face, residual: r });
                }
                worst = worst.max(r);
            }
        }
    }
    cocycle.face_residual = worst;
    Ok(cocycle)
}

impl NaturalCocycle {
    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn label(&self, st: Step) -> &Mat2 {
        &self.labels[&st]
    }

    /// Product of labels along a path, left to right.
    pub fn eval(&self, word: &[Step]) -> Mat2 {
        word.iter().fold(Mat2::identity(self.prec), |acc, st| acc.mul(self.label(*st)))
    }

    pub fn trace(&self, word: &[Step]) -> Complex {
        self.eval(word).trace()
    }

    /// Hexagon around the face of simplex `tet` opposite `face`.
    pub fn hexagon(&self, tet: usize, face: u8) -> Mat2 {
        let vs: Vec<u8> = (0..4).filter(|&x| x != face).collect();
        let (a, b, c) = (vs[0], vs[1], vs[2]);
        let word = [
            Step::Long { tet, i: a, j: b },
            Step::Short { tet, v: b, a, b: c },
            Step::Long { tet, i: b, j: c },
            Step::Short { tet, v: c, a: b, b: a },
            Step::Long { tet, i: c, j: a },
            Step::Short { tet, v: a, a: c, b },
        ];
        self.eval(&word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cx(re: f64, im: f64) -> Complex {
        Complex::with_val(200, (re, im))
    }

    #[test]
    fn figure8_geometric_solution() {
        // c_0 = 1 and c_1 a primitive sixth root of unity
        let tri = fixtures::figure8();
        let sigma = &crate::cohomology::obstruction_classes(&tri, 1024).unwrap()[1];
        let w = cx(0.5, 3f64.sqrt() / 2.0);
        let mut ok = 0;
        for vals in [[cx(1.0, 0.0), w.clone()], [w.clone(), cx(1.0, 0.0)]] {
            if let Ok(c) = build_natural_cocycle(&tri, sigma, &vals, 200) {
                assert!(c.face_residual < 1e-12);
                ok += 1;
            }
        }
        assert!(ok >= 1);
    }
}
