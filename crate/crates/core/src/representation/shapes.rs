use rug::Complex;
use serde::Serialize;

use super::mat2::abs;
use crate::cohomology::ObstructionCocycle;
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, Serialize)]
pub struct ShapeAssignment {
    #[serde(skip)]
    pub shapes: Vec<Complex>,
    /// Product of edge parameters around each edge class.
    #[serde(skip)]
    pub edge_products: Vec<Complex>,
    pub gluing_residual: f64,
}

/// Edge parameter of edge ij of a simplex with shape z.
fn edge_parameter(z: &Complex, i: usize, j: usize) -> Complex {
    let prec = z.prec().0;
    let one = Complex::with_val(prec, 1);
    match (i.min(j), i.max(j)) {
        (0, 1) | (2, 3) => z.clone(),
        (0, 2) | (1, 3) => one - Complex::with_val(prec, z.recip_ref()),
        _ => Complex::with_val(prec, &one - z).recip(),
    }
}

/// Shapes z_k = σ₂σ₃ c₀₃c₁₂ / (c₀₂c₁₃) of an n = 2 Ptolemy assignment, with the
/// gluing equation residual.
pub fn compute_shapes(
    tri: &Triangulation,
    sigma: &ObstructionCocycle,
    values: &[Complex],
) -> Result<ShapeAssignment> {
    let table = tri.edge_table();
    let orient = tri
        .tet_orientations()
        .ok_or_else(|| Error::InvalidTriangulation("shapes need an orientable manifold".into()))?;
    let prec = values.first().map_or(128, |v| v.prec().0);
    let c = |k: usize, i: usize, j: usize| {
        let (class, sign) = table.oriented(k, i, j);
        Complex::with_val(prec, &values[class] * sign as i32)
    };
    let mut shapes = Vec::new();
    for k in 0..tri.num_tetrahedra() {
        let s = (sigma.sign(k, 2) * sigma.sign(k, 3)) as i32;
        let num = Complex::with_val(prec, c(k, 0, 3) * c(k, 1, 2)) * s;
        let den = Complex::with_val(prec, c(k, 0, 2) * c(k, 1, 3));
        if abs(&den) < 1e-300 {
            return Err(Error::DegenerateShape { tet: k });
        }
        let z = num / den;
        if abs(&z) < 1e-10 || abs(&Complex::with_val(prec, &z - 1)) < 1e-10 {
            return Err(Error::DegenerateShape { tet: k });
        }
        shapes.push(z);
    }
    let mut edge_products = vec![Complex::with_val(prec, 1); table.len()];
    for (class, ec) in table.classes.iter().enumerate() {
        for inst in &ec.instances {
            let mut p = edge_parameter(&shapes[inst.tet], inst.i, inst.j);
            if orient[inst.tet] < 0 {
                p = p.recip();
            }
            edge_products[class] *= p;
        }
    }
    let gluing_residual =
        edge_products.iter().map(|p| abs(&Complex::with_val(prec, p - 1))).fold(0.0, f64::max);
    Ok(ShapeAssignment { shapes, edge_products, gluing_residual })
}
