use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::univariate::UniPoly;
use crate::error::{Error, Result};
use crate::poly::rat_to_float;

const MAX_ITERATIONS: usize = 5000;

/// All complex roots of a squarefree polynomial by Aberth iteration at
/// `prec` bits, sorted by real then imaginary part.
pub fn polynomial_roots(p: &UniPoly, prec: u32) -> Result<Vec<Complex>> {
    let d = p.degree();
    if p.is_zero() || d == 0 {
        return Ok(Vec::new());
    }
    let work = prec + 32;
    let coeffs: Vec<Float> = p.coeffs().iter().map(|c| rat_to_float(c, work)).collect();
    let dp = p.derivative();
    let lc = coeffs[d].clone().abs();
    let radius = coeffs[..d]
        .iter()
        .map(|c| Float::with_val(work, c.abs_ref()) / &lc)
        .fold(Float::with_val(work, 0), |a, b| if b > a { b } else { a })
        + 1u32;
    let pi = Float::with_val(work, Constant::Pi);
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let angle = Float::with_val(work, &pi * 2u32) * (k as f64 + 0.4) / d as f64;
            let r = Float::with_val(work, &radius * (0.5 + 0.5 * ((k % 3) as f64 + 1.0) / 3.0));
            Complex::with_val(work, (Float::with_val(work, &r * angle.clone().cos()), r * angle.sin()))
        })
        .collect();
    let tol = Float::with_val(work, 2u32).pow(-(prec as i32) - 8);
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = Float::with_val(work, 0);
        for k in 0..d {
            let pv = p.eval_complex(&z[k]);
            let dv = dp.eval_complex(&z[k]);
            if pv.clone().abs().real().is_zero() {
                continue;
            }
            let ratio = Complex::with_val(work, &pv / &dv);
            let mut sum = Complex::new(work);
            for j in 0..d {
                if j != k {
                    let diff = Complex::with_val(work, &z[k] - &z[j]);
                    sum += diff.recip();
                }
            }
            let denom = Complex::with_val(work, 1) - Complex::with_val(work, &ratio * &sum);
            let w = Complex::with_val(work, &ratio / &denom);
            let scale = Float::with_val(work, z[k].abs_ref()).max(&Float::with_val(work, 1));
            let step = Float::with_val(work, w.abs_ref()) / scale;
            if step > max_step {
                max_step = step;
            }
            z[k] -= w;
        }
        if max_step < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::PrecisionNotReached { residual: f64::INFINITY });
    }
    // backward check: |p(z)| against Σ|a_i||z|^i
    for r in &z {
        let val = p.eval_complex(r).abs().real().clone();
        let absz = Float::with_val(work, r.abs_ref());
        let mut scale = Float::with_val(work, 0);
        for c in coeffs.iter().rev() {
            scale = scale * &absz + c.clone().abs();
        }
        let rel = Float::with_val(work, &val / &scale);
        if rel > Float::with_val(work, 2u32).pow(-(prec as i32) / 2) {
            return Err(Error::PrecisionNotReached { residual: rel.to_f64() });
        }
    }
    let mut out: Vec<Complex> = z.into_iter().map(|c| Complex::with_val(prec, c)).collect();
    sort_complex(&mut out);
    Ok(out)
}

pub(crate) fn sort_complex(v: &mut [Complex]) {
    v.sort_by(|a, b| {
        let key = |c: &Complex| (round12(c.real().to_f64()), round12(c.imag().to_f64()));
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let r = polynomial_roots(&UniPoly::from_i64(&[1, -1, 1]), 200).unwrap();
        assert_eq!(r.len(), 2);
        let s3 = 3f64.sqrt() / 2.0;
        assert!((r[0].real().to_f64() - 0.5).abs() < 1e-15);
        assert!((r[0].imag().to_f64() + s3).abs() < 1e-15);
        assert!((r[1].imag().to_f64() - s3).abs() < 1e-15);
        let g = polynomial_roots(&UniPoly::from_i64(&[-1, -1, 1]), 200).unwrap();
        assert!((g[1].real().to_f64() - 1.618_033_988_749_895).abs() < 1e-14);
        assert!((g[0].real().to_f64() + 0.618_033_988_749_895).abs() < 1e-14);
    }

    #[test]
    fn high_precision_residual() {
        let p = UniPoly::from_i64(&[-1, -3, -2, 0, 1]);
        for r in polynomial_roots(&p, 256).unwrap() {
            let v = p.eval_complex(&r);
            assert!(v.abs().real().to_f64() < 1e-60);
        }
    }
}
