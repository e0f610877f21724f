use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rug::Complex;

use ptolemy_core::cohomology::{build_complex, cohomologous, enumerate_h2, obstruction_classes};
use ptolemy_core::pipeline::{setup_class, solve_class, PipelineConfig};
use ptolemy_core::poly::TermOrder;
use ptolemy_core::reduction::{alpha_star, cokernel, find_basic_generators, kernel_basis};
use ptolemy_core::representation::{
    build_natural_cocycle, compute_shapes, edge_values, iterated_difference, Mat2,
};
use ptolemy_core::solver::{buchberger, determinant, factor_univariate, GroebnerConfig, UniPoly};
use ptolemy_core::variety::{generate_ptolemy_relations, saturate};
use ptolemy_core::{fixtures, parse_triangulation, Perm4, Triangulation};

const PREC: u32 = 200;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn fixture() -> impl Strategy<Value = Triangulation> {
    (0..fixtures::ALL.len()).prop_map(|i| fixtures::load(fixtures::ALL[i].0).unwrap())
}

/// A fixture with its simplices shuffled and vertices relabeled.
fn relabeled() -> impl Strategy<Value = Triangulation> {
    fixture().prop_flat_map(|tri| {
        let s = tri.num_tetrahedra();
        let perms: Vec<Perm4> = Perm4::all().collect();
        (
            Just(tri),
            Just((0..s).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(0..perms.len(), s),
        )
            .prop_map(move |(tri, order, vp)| {
                let vp: Vec<Perm4> = vp.iter().map(|&i| perms[i]).collect();
                tri.relabel_tetrahedra(&order).unwrap().relabel_vertices(&vp).unwrap()
            })
    })
}

fn complex() -> impl Strategy<Value = Complex> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex::with_val(PREC, (a, b)))
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    Complex::with_val(PREC, a - b).abs().real().to_f64()
}

fn class_sizes(tri: &Triangulation) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut e: Vec<usize> = tri.edge_classes().iter().map(|c| c.instances.len()).collect();
    let mut v: Vec<usize> = tri.cusp_classes().iter().map(|c| c.instances.len()).collect();
    let mut f: Vec<usize> = tri.face_classes().iter().map(|c| c.instances.len()).collect();
    e.sort_unstable();
    v.sort_unstable();
    f.sort_unstable();
    (e, v, f)
}

fn laplace(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * laplace(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn slots_partitioned(tri in relabeled()) {
        let s = tri.num_tetrahedra();
        let mut edges = vec![0; 6 * s];
        for c in tri.edge_classes() {
            for i in c.instances {
                let (a, b) = (i.i.min(i.j), i.i.max(i.j));
                let slot = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().position(|&p| p == (a, b)).unwrap();
                edges[6 * i.tet + slot] += 1;
            }
        }
        prop_assert!(edges.iter().all(|&x| x == 1));
        let mut verts = vec![0; 4 * s];
        for c in tri.cusp_classes() {
            for (k, v) in c.instances {
                verts[4 * k + v] += 1;
            }
        }
        prop_assert!(verts.iter().all(|&x| x == 1));
    }

    #[test]
    fn euler_counts(tri in relabeled()) {
        let c = tri.euler_counts();
        let expected: i64 = tri.cusp_link_euler().iter().map(|&chi| 1 - chi / 2).sum();
        prop_assert_eq!(c.chi(), expected);
        prop_assert_eq!(c.f, 2 * c.s);
    }

    #[test]
    fn text_round_trip(tri in relabeled()) {
        let back = parse_triangulation(&tri.to_text()).unwrap();
        prop_assert_eq!(back, tri);
    }

    #[test]
    fn relabeling_keeps_class_sizes(tri in fixture(), seed in any::<u64>()) {
        let s = tri.num_tetrahedra();
        let mut order: Vec<usize> = (0..s).collect();
        order.rotate_left((seed as usize) % s);
        let other = tri.relabel_tetrahedra(&order).unwrap();
        prop_assert_eq!(class_sizes(&tri), class_sizes(&other));
    }

    #[test]
    fn cochain_complex_and_representatives(tri in relabeled()) {
        prop_assert!(build_complex(&tri).is_complex());
        let reps = enumerate_h2(&tri, 1024).unwrap();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                prop_assert!(!cohomologous(&tri, a, b));
            }
        }
        prop_assert_eq!(reps.len(), 1 << build_complex(&tri).h2_dimension());
    }

    #[test]
    fn relation_counts_and_homogeneity(tri in fixture(), n in 2u32..5) {
        let sigma = ptolemy_core::cohomology::ObstructionCocycle::trivial(&tri);
        if let Ok(ideal) = generate_ptolemy_relations(&tri, n, &sigma) {
            let expected = tri.num_tetrahedra() * ((n + 1) * n * (n - 1) / 6) as usize;
            prop_assert_eq!(ideal.generators.len(), expected);
            prop_assert!(ideal.generators.iter().all(|g| g.is_homogeneous() && g.total_degree() == 2));
            prop_assert_eq!(saturate(&ideal).generators.len(), expected + 1);
        }
    }

    #[test]
    fn cokernel_and_basic_determinant(tri in fixture(), n in 2u32..5) {
        let alpha = alpha_star(&tri, n);
        let coker = cokernel(&alpha).unwrap();
        prop_assert_eq!(coker.order, n.to_string());
        if n <= 3 {
            let basic = find_basic_generators(&tri, n).unwrap();
            let rows: Vec<Vec<BigInt>> = (0..basic.submatrix.rows()).map(|i| basic.submatrix.row(i).to_vec()).collect();
            let det = laplace(&rows);
            prop_assert_eq!(det.magnitude(), &num_bigint::BigUint::from(n));
        }
    }

    #[test]
    fn invariant_monomials_are_torus_invariant(
        tri in fixture(),
        xs in proptest::collection::vec(1i64..7, 8),
        cs in proptest::collection::vec(1i64..9, 40),
    ) {
        let alpha = alpha_star(&tri, 2);
        let (rows, cols) = (alpha.matrix.rows(), alpha.matrix.cols());
        let c: Vec<BigRational> = (0..cols).map(|i| q(cs[i % cs.len()])).collect();
        let x: Vec<BigRational> = (0..rows).map(|i| BigRational::new(xs[i % xs.len()].into(), 2.into())).collect();
        let pow = |b: &BigRational, e: i64| {
            let p = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
            if e < 0 { p.recip() } else { p }
        };
        let acted: Vec<BigRational> = (0..cols)
            .map(|j| {
                let mut v = c[j].clone();
                for (i, xi) in x.iter().enumerate() {
                    let e: i64 = alpha.matrix.get(i, j).try_into().unwrap();
                    v *= pow(xi, e);
                }
                v
            })
            .collect();
        for w in kernel_basis(&alpha) {
            let mono = |vals: &[BigRational]| {
                w.exponents.iter().zip(vals).fold(BigRational::one(), |acc, (&e, v)| acc * pow(v, e))
            };
            prop_assert_eq!(mono(&c), mono(&acted));
        }
    }

    #[test]
    fn block_determinant(entries in proptest::collection::vec(-4i64..5, 16), shift in 1i64..4) {
        // 4x4 matrix with 2x2 blocks; D made invertible by a diagonal shift
        let mut m: Vec<Vec<BigRational>> = (0..4).map(|i| (0..4).map(|j| q(entries[4 * i + j])).collect()).collect();
        let d_det = |m: &Vec<Vec<BigRational>>| &m[2][2] * &m[3][3] - &m[2][3] * &m[3][2];
        while d_det(&m).is_zero() {
            m[2][2] += q(shift);
            m[3][3] += q(shift);
        }
        let dd = d_det(&m);
        let dinv = [[&m[3][3] / &dd, -&m[2][3] / &dd], [-&m[3][2] / &dd, &m[2][2] / &dd]];
        let mut schur = vec![vec![BigRational::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut v = m[i][j].clone();
                for a in 0..2 {
                    for b in 0..2 {
                        v -= &m[i][2 + a] * &dinv[a][b] * &m[2 + b][j];
                    }
                }
                schur[i][j] = v;
            }
        }
        prop_assert_eq!(determinant(m.clone()), dd * determinant(schur));
    }

    #[test]
    fn groebner_basis_is_order_independent(tri in fixture(), seed in any::<u64>()) {
        let sigma = &obstruction_classes(&tri, 1024).unwrap()[0];
        let setup = setup_class(&tri, 2, 0, sigma, TermOrder::Grevlex).unwrap();
        let gens = setup.reduced.generators.clone();
        let mut shuffled = gens.clone();
        let len = shuffled.len();
        shuffled.rotate_left(seed as usize % len);
        shuffled.reverse();
        let cfg = GroebnerConfig::default();
        let a = buchberger(setup.reduced.nvars(), &gens, TermOrder::Grevlex, &cfg);
        let b = buchberger(setup.reduced.nvars(), &shuffled, TermOrder::Grevlex, &cfg);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.polys(), b.polys()),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "one run failed"),
        }
    }

    #[test]
    fn factorization_multiplies_back(
        factors in proptest::collection::vec(proptest::collection::vec(-5i64..6, 2..4), 1..4),
        scale in 1i64..6,
    ) {
        let mut p = UniPoly::from_i64(&[scale]);
        for f in &factors {
            let mut f = f.clone();
            if *f.last().unwrap() == 0 {
                *f.last_mut().unwrap() = 1;
            }
            p = p.mul(&UniPoly::from_i64(&f));
        }
        let fac = factor_univariate(&p).unwrap();
        prop_assert_eq!(fac.product(), p);
    }

    #[test]
    fn difference_isolates_leading_term(
        r in 1usize..6,
        coeffs in proptest::collection::vec(-9i64..10, 32),
        x in proptest::collection::vec(-5i64..6, 5),
        h in proptest::collection::vec(1i64..6, 5),
    ) {
        // multilinear f = Σ_S a_S ∏_{i∈S} x_i; the top coefficient a_{full} is isolated
        let f = |v: &[BigRational]| {
            let mut total = BigRational::zero();
            for mask in 0usize..(1 << r) {
                let mut t = q(coeffs[mask]);
                for (i, vi) in v.iter().enumerate().take(r) {
                    if mask >> i & 1 == 1 {
                        t *= vi;
                    }
                }
                total += t;
            }
            total
        };
        let xs: Vec<BigRational> = x[..r].iter().map(|&v| q(v)).collect();
        let hs: Vec<BigRational> = h[..r].iter().map(|&v| q(v)).collect();
        let want = hs.iter().fold(q(coeffs[(1 << r) - 1]), |acc, v| acc * v);
        prop_assert_eq!(iterated_difference(&f, &xs, &hs), want);
    }

    #[test]
    fn trace_identities(x in complex(), c in complex(), m in complex(), m2 in complex(), m3 in complex()) {
        prop_assume!(c.clone().abs().real().to_f64() > 0.1);
        let t = Mat2::beta(&x).mul(&Mat2::alpha(&c)).trace();
        prop_assert!(dist(&t, &Complex::with_val(PREC, &x * &c)) < 1e-12);
        let neg = |z: &Complex| Complex::with_val(PREC, -z);
        let t = Mat2::alpha(&c).mul(&Mat2::beta(&neg(&m))).mul(&Mat2::alpha(&neg(&c))).mul(&Mat2::beta(&m2)).trace();
        let want = Complex::with_val(PREC, &m2 * &m) * Complex::with_val(PREC, &c * &c) + 2u32;
        prop_assert!(dist(&t, &want) < 1e-12 * (1.0 + want.clone().abs().real().to_f64()));
        // face loop with c = 1 and short edges β(m_i − 1)
        let one = Complex::with_val(PREC, 1);
        let step = |mi: &Complex| Mat2::beta(&Complex::with_val(PREC, mi - 1u32)).mul(&Mat2::alpha(&one));
        let t = step(&m).mul(&step(&m2)).mul(&step(&m3)).trace();
        let p = |a: &Complex, b: &Complex| Complex::with_val(PREC, a * b);
        let want = p(&p(&m, &m2), &m3) - p(&m, &m2) - p(&m2, &m3) - p(&m3, &m) + 2u32;
        prop_assert!(dist(&t, &want) < 1e-12 * (1.0 + want.clone().abs().real().to_f64()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn torus_action_on_solutions(idx in 0usize..3, l in proptest::collection::vec(complex(), 2)) {
        let (tri, class) = [(fixtures::figure8(), 1), (fixtures::sister(), 0), (fixtures::whitehead(), 1)][idx].clone();
        prop_assume!(l.iter().all(|z| z.clone().abs().real().to_f64() > 0.2));
        let sigma = &obstruction_classes(&tri, 1024).unwrap()[class];
        let setup = setup_class(&tri, 2, class, sigma, TermOrder::Grevlex).unwrap();
        let d = solve_class(&setup, &PipelineConfig::default()).unwrap();
        for s in d.solutions() {
            let vals = edge_values(&tri, &setup.reduced, s);
            let scaled: Vec<Complex> = tri
                .edge_classes()
                .iter()
                .zip(&vals)
                .map(|(ec, v)| Complex::with_val(PREC, v * &l[ec.cusps.0]) * &l[ec.cusps.1])
                .collect();
            let a = compute_shapes(&tri, sigma, &vals).unwrap();
            let b = compute_shapes(&tri, sigma, &scaled).unwrap();
            prop_assert!(a.gluing_residual < 1e-10 && b.gluing_residual < 1e-10);
            for (x, y) in a.shapes.iter().zip(&b.shapes) {
                prop_assert!(dist(x, y) < 1e-20);
            }
            let c = build_natural_cocycle(&tri, sigma, &scaled, PREC).unwrap();
            prop_assert!(c.face_residual < 1e-10);
        }
    }
}

#[test]
fn degree_counts_points_on_radical_examples() {
    let mut checked = 0;
    for tri in fixtures::all() {
        for (i, sigma) in obstruction_classes(&tri, 1024).unwrap().iter().enumerate() {
            let setup = setup_class(&tri, 2, i, sigma, TermOrder::Grevlex).unwrap();
            let d = solve_class(&setup, &PipelineConfig::default()).unwrap();
            if d.empty || d.positive_dimensional {
                continue;
            }
            let radical = d.eliminants.iter().all(|(p, _)| p.is_squarefree());
            if radical && d.degree == Some(d.points) {
                checked += 1;
            }
            assert_eq!(d.solutions().count(), d.points);
            for s in d.solutions() {
                assert!(s.residual < 1e-10 && s.min_abs > 1e-10);
            }
        }
    }
    assert!(checked >= 4);
}

#[test]
fn empty_basis_has_no_grid_solutions() {
    // figure-8 trivial class: GB = {1}; a coarse complex grid finds no common zero
    let tri = fixtures::figure8();
    let sigma = &obstruction_classes(&tri, 1024).unwrap()[0];
    let setup = setup_class(&tri, 2, 0, sigma, TermOrder::Grevlex).unwrap();
    let reduced = ptolemy_core::reduction::reduce_ideal(&setup.ideal, &setup.basic);
    assert_eq!(reduced.nvars(), 1);
    let mut best = f64::INFINITY;
    for a in -40..=40 {
        for b in -40..=40 {
            let z = [Complex::with_val(PREC, (a as f64 / 10.0, b as f64 / 10.0))];
            if z[0].clone().abs().real().to_f64() < 1e-3 {
                continue;
            }
            let worst = reduced.generators.iter().map(|g| g.eval_complex(&z, PREC).abs().real().to_f64()).fold(0.0, f64::max);
            best = best.min(worst);
        }
    }
    assert!(best > 1e-2, "grid found a near-zero {best}");
}
