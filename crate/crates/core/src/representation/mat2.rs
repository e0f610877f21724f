use rug::{Complex, Float};

/// 2×2 complex matrix [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Mat2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(prec: u32) -> Self {
        Self::scalar(prec, 1)
    }

    pub fn scalar(prec: u32, s: i32) -> Self {
        Mat2 {
            a: Complex::with_val(prec, s),
            b: Complex::new(prec),
            c: Complex::new(prec),
            d: Complex::with_val(prec, s),
        }
    }

    /// α(x) = [[0, −1/x], [x, 0]].
    pub fn alpha(x: &Complex) -> Self {
        let prec = x.prec().0;
        Mat2 {
            a: Complex::new(prec),
            b: -Complex::with_val(prec, x.recip_ref()),
            c: x.clone(),
            d: Complex::new(prec),
        }
    }

    /// β(x) = [[1, x], [0, 1]].
    pub fn beta(x: &Complex) -> Self {
        let prec = x.prec().0;
        Mat2 {
            a: Complex::with_val(prec, 1),
            b: x.clone(),
            c: Complex::new(prec),
            d: Complex::with_val(prec, 1),
        }
    }

    pub fn prec(&self) -> u32 {
        self.a.prec().0
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = self.prec();
        let dot = |x: &Complex, y: &Complex, z: &Complex, w: &Complex| {
            Complex::with_val(p, x * y) + Complex::with_val(p, z * w)
        };
        Mat2 {
            a: dot(&self.a, &o.a, &self.b, &o.c),
            b: dot(&self.a, &o.b, &self.b, &o.d),
            c: dot(&self.c, &o.a, &self.d, &o.c),
            d: dot(&self.c, &o.b, &self.d, &o.d),
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone(), d: -self.d.clone() }
    }

    pub fn det(&self) -> Complex {
        let p = self.prec();
        Complex::with_val(p, &self.a * &self.d) - Complex::with_val(p, &self.b * &self.c)
    }

    /// Inverse assuming determinant 1.
    pub fn inverse(&self) -> Mat2 {
        Mat2 { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    pub fn trace(&self) -> Complex {
        Complex::with_val(self.prec(), &self.a + &self.d)
    }

    /// Largest entry modulus of self − s·I.
    pub fn distance_to_scalar(&self, s: i32) -> f64 {
        let p = self.prec();
        let diag = |x: &Complex| abs(&(Complex::with_val(p, x - s)));
        diag(&self.a).max(diag(&self.d)).max(abs(&self.b)).max(abs(&self.c))
    }

    pub fn distance(&self, o: &Mat2) -> f64 {
        let p = self.prec();
        let d = |x: &Complex, y: &Complex| abs(&Complex::with_val(p, x - y));
        d(&self.a, &o.a).max(d(&self.b, &o.b)).max(d(&self.c, &o.c)).max(d(&self.d, &o.d))
    }

    /// If self = ±β(m) within `tol`, returns (±1, m).
    pub fn as_unipotent(&self, tol: f64) -> Option<(i32, Complex)> {
        let p = self.prec();
        if abs(&self.c) > tol {
            return None;
        }
        for s in [1, -1] {
            let da = abs(&Complex::with_val(p, &self.a - s));
            let dd = abs(&Complex::with_val(p, &self.d - s));
            if da < tol && dd < tol {
                let m = Complex::with_val(p, &self.b * s);
                return Some((s, m));
            }
        }
        None
    }
}

pub(crate) fn abs(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex {
        Complex::with_val(128, (re, im))
    }

    #[test]
    fn labels_have_det_one() {
        let x = cx(0.3, -1.7);
        assert!(abs(&(Mat2::alpha(&x).det() - 1u32)) < 1e-30);
        assert!(abs(&(Mat2::beta(&x).det() - 1u32)) < 1e-30);
        let m = Mat2::alpha(&x).mul(&Mat2::beta(&cx(2.0, 0.5)));
        assert!(m.mul(&m.inverse()).distance_to_scalar(1) < 1e-30);
    }

    #[test]
    fn single_simplex_labels() {
        // all c = 1: long edges α(1), short edges β(−1); hexagon product is I
        let one = cx(1.0, 0.0);
        let m1 = cx(-1.0, 0.0);
        let step = Mat2::alpha(&one).mul(&Mat2::beta(&m1));
        let hex = step.mul(&step).mul(&step);
        assert!(hex.distance_to_scalar(1) < 1e-30);
        assert_eq!(Mat2::beta(&m1).as_unipotent(1e-20).map(|(s, _)| s), Some(1));
    }
}
