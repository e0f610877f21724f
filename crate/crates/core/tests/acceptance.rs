//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ptolemy-core --test acceptance`. The process exits
//! non-zero only when a criterion fails unexpectedly.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rug::Complex;

use ptolemy_core::cohomology::{obstruction_classes, ObstructionCocycle};
use ptolemy_core::intmat::same_lattice;
use ptolemy_core::pipeline::{setup_class, solve_class, ClassSetup, PipelineConfig};
use ptolemy_core::poly::TermOrder;
use ptolemy_core::reduction::{alpha_star, cokernel, determinant_lemmas, find_basic_generators, kernel_basis};
use ptolemy_core::representation::{
    build_natural_cocycle, compute_shapes, edge_values, iterated_difference, trace_field_report, Mat2,
};
use ptolemy_core::solver::{buchberger, Decomposition, GroebnerConfig, UniPoly};
use ptolemy_core::variety::generate_ptolemy_relations;
use ptolemy_core::{fixtures, parse_triangulation, Error, Triangulation};

const PREC: u32 = 256;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    /// A known, documented failure that does not affect the exit status.
    expected_failure: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, expected_failure: false, detail: detail.into() }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn class_setup(tri: &Triangulation, class: usize) -> (ObstructionCocycle, ClassSetup) {
    let sigma = obstruction_classes(tri, 1024).unwrap()[class].clone();
    let setup = setup_class(tri, 2, class, &sigma, TermOrder::Grevlex).unwrap();
    (sigma, setup)
}

fn solve(setup: &ClassSetup) -> Decomposition {
    solve_class(setup, &PipelineConfig::default()).unwrap()
}

fn poly(c: &[i64]) -> UniPoly {
    UniPoly::from_i64(c)
}

fn factors_text(d: &Decomposition) -> String {
    d.all_factors().iter().map(|p| p.display("x")).collect::<Vec<_>>().join(", ")
}

/// Fraction-free Gaussian elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn c1() -> Outcome {
    let tri = fixtures::figure8();
    let ((gb, _), t) = timed(|| {
        let (_, setup) = class_setup(&tri, 0);
        let r = &setup.reduced;
        let gb = buchberger(r.nvars(), &r.generators, TermOrder::Grevlex, &GroebnerConfig::default()).unwrap();
        (gb, setup)
    });
    let unit = gb.is_unit();
    Outcome::check(unit && t < Duration::from_secs(1), format!("basis is {{1}}: {unit}, {t:.2?}"))
}

fn c2() -> Outcome {
    let tri = fixtures::figure8();
    let (d, t) = timed(|| solve(&class_setup(&tri, 1).1));
    let want = poly(&[1, -1, 1]);
    let field = d.components.iter().map(|c| c.field.monic()).collect::<Vec<_>>();
    Outcome::check(
        field == vec![want.clone()] && d.all_factors() == vec![want] && t < Duration::from_secs(1),
        format!("eliminant factors [{}], {t:.2?}", factors_text(&d)),
    )
}

fn c3() -> Outcome {
    let tri = fixtures::sister();
    let ((d0, d1), t) = timed(|| (solve(&class_setup(&tri, 0).1), solve(&class_setup(&tri, 1).1)));
    // a variable with the opposite orientation sees x -> -x
    let ok0 = d0.all_factors().contains(&poly(&[-1, -1, 1]));
    let ok1 = d1.all_factors().contains(&poly(&[1, 1, 1]));
    Outcome::check(
        ok0 && ok1 && t < Duration::from_secs(1),
        format!("trivial [{}], nontrivial [{}], {t:.2?}", factors_text(&d0), factors_text(&d1)),
    )
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn c4() -> Outcome {
    let published = [[2i64, 1, 1, 0], [0, 1, 1, 2]];
    let published_kernel: Vec<Vec<i64>> = vec![vec![0, -2, 0, 1], vec![-1, 1, 1, 0]];
    let ((alpha, kernel), t) = timed(|| {
        let a = alpha_star(&fixtures::whitehead(), 2);
        let k = kernel_basis(&a);
        (a, k)
    });
    let ours = alpha.matrix.to_i64().unwrap();
    // column maps under which the published matrix is ours up to row order
    let matches: Vec<Vec<usize>> = permutations(4)
        .into_iter()
        .filter(|cols| {
            permutations(2).iter().any(|rows| {
                (0..2).all(|i| (0..4).all(|j| ours[rows[i]][cols[j]] == published[i][j]))
            })
        })
        .collect();
    let alpha_ok = !matches.is_empty();
    let ours_kernel: Vec<Vec<BigInt>> =
        kernel.iter().map(|w| w.exponents.iter().map(|&e| BigInt::from(e)).collect()).collect();
    let kernel_ok = matches.iter().any(|cols| {
        let moved: Vec<Vec<BigInt>> = published_kernel
            .iter()
            .map(|v| {
                let mut w = vec![BigInt::zero(); 4];
                for j in 0..4 {
                    w[cols[j]] = BigInt::from(v[j]);
                }
                w
            })
            .collect();
        same_lattice(&moved, &ours_kernel, 4)
    });
    let in_own_kernel = published_kernel
        .iter()
        .all(|v| published.iter().all(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() == 0));
    let detail = format!(
        "alpha* up to permutation: {alpha_ok}; kernel lattice matches: {kernel_ok}; computed invariants {}; \
         published vectors annihilated by published alpha*: {in_own_kernel}; {t:.2?}",
        kernel.iter().map(|w| w.display(&alpha.names)).collect::<Vec<_>>().join(", "),
    );
    let pass = alpha_ok && kernel_ok && t < Duration::from_secs(1);
    // The published kernel vectors are not in the kernel of the published
    // matrix, so the kernel part cannot match any correct computation.
    let expected_failure = alpha_ok && !kernel_ok && !in_own_kernel;
    Outcome { pass, expected_failure, detail }
}

fn c5() -> Outcome {
    let (bad, t) = timed(|| {
        let mut bad = Vec::new();
        for k in 1..=12usize {
            // I + R − S: R is ones in row 0, S the subdiagonal; T adds 1 at (k−1, k−1)
            let build = |with_t: bool| {
                let mut m = vec![vec![BigInt::zero(); k]; k];
                for i in 0..k {
                    m[i][i] += 1;
                    m[0][i] += 1;
                    if i > 0 {
                        m[i][i - 1] -= 1;
                    }
                }
                if with_t {
                    m[k - 1][k - 1] += 1;
                }
                m
            };
            let (a, b) = (bareiss(build(false)), bareiss(build(true)));
            let lib = determinant_lemmas(k);
            if a != BigInt::from(k + 1) || b != BigInt::from(2 * k + 1) || lib != (a, b) {
                bad.push(k);
            }
        }
        bad
    });
    Outcome::check(bad.is_empty() && t < Duration::from_secs(1), format!("k = 1..12, mismatches {bad:?}, {t:.2?}"))
}

fn c6() -> Outcome {
    let (bad, t) = timed(|| {
        let mut bad = Vec::new();
        for tri in fixtures::all() {
            for n in 2..=4u32 {
                let c = cokernel(&alpha_star(&tri, n)).unwrap();
                let cyclic = c.invariant_factors.iter().filter(|f| f.as_str() != "1").count() <= 1;
                if c.order != n.to_string() || !cyclic {
                    bad.push(format!("{} n={n}: {:?}", tri.name().unwrap_or("?"), c.invariant_factors));
                }
            }
        }
        bad
    });
    Outcome::check(bad.is_empty() && t < Duration::from_secs(5), format!("Z/n on all fixtures, n = 2..4, {t:.2?} {bad:?}"))
}

fn c7() -> Outcome {
    let (bad, t) = timed(|| {
        let mut bad = Vec::new();
        for tri in fixtures::all() {
            for n in 2..=3u32 {
                let b = find_basic_generators(&tri, n).unwrap();
                let rows: Vec<Vec<BigInt>> = (0..b.submatrix.rows()).map(|i| b.submatrix.row(i).to_vec()).collect();
                let det = bareiss(rows);
                if det.abs() != BigInt::from(n) || b.determinant.trim_start_matches('-') != n.to_string() {
                    bad.push(format!("{} n={n}: det {det}", tri.name().unwrap_or("?")));
                }
            }
        }
        bad
    });
    Outcome::check(bad.is_empty() && t < Duration::from_secs(5), format!("|det| = n on all fixtures, n = 2, 3, {t:.2?} {bad:?}"))
}

/// A `signs n` block giving every non-vertex point the sign +.
fn plus_signs(s: usize, n: u32) -> String {
    let mut out = format!("signs {n}\n");
    for tet in 0..s {
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    let d = n - a - b - c;
                    if [a, b, c, d].iter().all(|&x| x < n) {
                        out.push_str(&format!("  tet {tet} point {a} {b} {c} {d} +\n"));
                    }
                }
            }
        }
    }
    out
}

fn c8() -> Outcome {
    let (bad, t) = timed(|| {
        let mut bad = Vec::new();
        for (name, text) in fixtures::ALL {
            for n in 2..=4u32 {
                // bundled sign tables cover n = 2 only; the count does not depend on signs
                let base = parse_triangulation(text).unwrap();
                let text = match n {
                    2 => text.to_string(),
                    _ => format!("{text}{}", plus_signs(base.num_tetrahedra(), n)),
                };
                let tri = parse_triangulation(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
                let sigma = ObstructionCocycle::trivial(&tri);
                let ideal = generate_ptolemy_relations(&tri, n, &sigma).unwrap();
                let want = tri.num_tetrahedra() * ((n + 1) * n * (n - 1) / 6) as usize;
                if ideal.num_relations != want || ideal.generators.len() != want {
                    bad.push(format!("{} n={n}: {} != {want}", tri.name().unwrap_or("?"), ideal.num_relations));
                }
            }
        }
        bad
    });
    Outcome::check(bad.is_empty() && t < Duration::from_secs(1), format!("s*binom(n+1,3) relations, n = 2..4, {t:.2?} {bad:?}"))
}

fn c9() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut slow = Vec::new();
    let mut errors = Vec::new();
    for tri in fixtures::all() {
        let (_, t) = timed(|| {
            for class in 0..obstruction_classes(&tri, 1024).unwrap().len() {
                let (sigma, setup) = class_setup(&tri, class);
                for s in solve(&setup).solutions() {
                    match build_natural_cocycle(&tri, &sigma, &edge_values(&tri, &setup.reduced, s), PREC) {
                        Ok(c) => worst = worst.max(c.face_residual),
                        Err(e) => errors.push(e.to_string()),
                    }
                    count += 1;
                }
            }
        });
        if t >= Duration::from_secs(5) {
            slow.push(tri.name().unwrap_or("?").to_string());
        }
    }
    Outcome::check(
        errors.is_empty() && slow.is_empty() && worst < 1e-10 && count > 0,
        format!("{count} solutions, max face residual {worst:.1e}, slow {slow:?}, errors {errors:?}"),
    )
}

fn c10() -> Outcome {
    let tri = fixtures::figure8();
    let (sigma, setup) = class_setup(&tri, 1);
    // roots of z^2 - z + 1 from the quadratic formula
    let half = Complex::with_val(PREC, 0.5);
    let h = Complex::with_val(PREC, (-3, 0)).sqrt() / 2u32;
    let roots = [Complex::with_val(PREC, &half + &h), Complex::with_val(PREC, &half - &h)];
    let mut worst_root = 0.0f64;
    let mut worst_glue = 0.0f64;
    for s in solve(&setup).solutions() {
        let sh = compute_shapes(&tri, &sigma, &edge_values(&tri, &setup.reduced, s)).unwrap();
        for z in &sh.shapes {
            let d = roots.iter().map(|r| Complex::with_val(PREC, z - r).abs().real().to_f64()).fold(f64::INFINITY, f64::min);
            worst_root = worst_root.max(d);
        }
        let one = Complex::with_val(PREC, 1);
        for p in &sh.edge_products {
            worst_glue = worst_glue.max(Complex::with_val(PREC, p - &one).abs().real().to_f64());
        }
        worst_glue = worst_glue.max(sh.gluing_residual);
    }
    Outcome::check(
        worst_root < 1e-10 && worst_glue < 1e-10,
        format!("shape distance to roots {worst_root:.1e}, edge products - 1 {worst_glue:.1e}"),
    )
}

fn random_complex(rng: &mut StdRng) -> Complex {
    Complex::with_val(PREC, (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    Complex::with_val(PREC, a - b).abs().real().to_f64() / (1.0 + b.clone().abs().real().to_f64())
}

fn c11() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let neg = |z: &Complex| Complex::with_val(PREC, -z);
    let mul = |a: &Complex, b: &Complex| Complex::with_val(PREC, a * b);
    for _ in 0..100 {
        let (x, c) = (random_complex(&mut rng), random_complex(&mut rng));
        let (mi, mj, mk) = (random_complex(&mut rng), random_complex(&mut rng), random_complex(&mut rng));
        let t = Mat2::beta(&x).mul(&Mat2::alpha(&c)).trace();
        worst = worst.max(rel(&t, &mul(&x, &c)));
        let t = Mat2::alpha(&c).mul(&Mat2::beta(&neg(&mj))).mul(&Mat2::alpha(&neg(&c))).mul(&Mat2::beta(&mi)).trace();
        let want = Complex::with_val(PREC, mul(&mul(&mi, &mj), &mul(&c, &c)) + 2u32);
        worst = worst.max(rel(&t, &want));
        // three short edges β(m − 1) around a face with unit long edges
        let one = Complex::with_val(PREC, 1);
        let step = |m: &Complex| Mat2::beta(&Complex::with_val(PREC, m - 1u32)).mul(&Mat2::alpha(&one));
        let t = step(&mi).mul(&step(&mj)).mul(&step(&mk)).trace();
        let want = Complex::with_val(
            PREC,
            mul(&mul(&mi, &mj), &mk) - mul(&mi, &mj) - mul(&mj, &mk) - mul(&mk, &mi) + 2u32,
        );
        worst = worst.max(rel(&t, &want));
    }
    Outcome::check(worst < 1e-12, format!("100 draws, max relative error {worst:.1e}"))
}

fn c12() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let q = |v: i64| BigRational::from_integer(v.into());
    let mut failures = 0;
    for _ in 0..200 {
        let r = rng.random_range(1..=5usize);
        let coeffs: Vec<BigRational> = (0..1 << r).map(|_| q(rng.random_range(-20..=20))).collect();
        let f = |v: &[BigRational]| {
            let mut total = BigRational::zero();
            for (mask, a) in coeffs.iter().enumerate() {
                let mut t = a.clone();
                for (i, vi) in v.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        t *= vi;
                    }
                }
                total += t;
            }
            total
        };
        let x: Vec<BigRational> = (0..r).map(|_| BigRational::new(rng.random_range(-9..=9).into(), rng.random_range(1..=4).into())).collect();
        let h: Vec<BigRational> = (0..r).map(|_| BigRational::new(rng.random_range(1..=9).into(), rng.random_range(1..=4).into())).collect();
        let want = h.iter().fold(coeffs[(1 << r) - 1].clone(), |acc, v| acc * v);
        if iterated_difference(&f, &x, &h) != want {
            failures += 1;
        }
    }
    Outcome::check(failures == 0, format!("200 random multilinear polynomials, r <= 5, {failures} mismatches"))
}

fn c13() -> Outcome {
    let bits = PipelineConfig::default().bits();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, tri, class) in [("figure-8", fixtures::figure8(), 1), ("sister", fixtures::sister(), 1), ("sister", fixtures::sister(), 0)] {
        let (sigma, setup) = class_setup(&tri, class);
        let d = solve(&setup);
        let (mut rec, mut fit, mut n, mut trivial) = (0.0f64, 0.0f64, 0, 0);
        for comp in &d.components {
            for which in 0..comp.solutions.len() {
                match trace_field_report(&tri, &sigma, &setup.reduced, &setup.basic, comp, which, bits, 2) {
                    Ok(r) => {
                        rec = rec.max(r.max_recovery_residual);
                        fit = fit.max(r.max_fit_residual);
                        ok &= r.fields_agree && r.recovery.iter().all(|c| c.residual < 1e-9);
                        n += 1;
                    }
                    // recovery requires boundary-non-trivial cusps
                    Err(Error::BoundaryTrivialCusp { .. }) => trivial += 1,
                    Err(e) => {
                        ok = false;
                        lines.push(format!("{name} class {class}: {e}"));
                    }
                }
            }
        }
        if class == 1 {
            ok &= n > 0 && trivial == 0;
        }
        ok &= rec < 1e-9 && fit < 1e-9;
        lines.push(format!(
            "{name} class {class}: {n} recovered (max residual {rec:.1e}, field fit {fit:.1e}), {trivial} boundary-trivial"
        ));
    }
    Outcome::check(ok, lines.join("; "))
}

fn m019_path() -> PathBuf {
    std::env::var_os("PTOLEMY_M019")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/m019.tri"))
}

fn m019_factors(tri: &Triangulation) -> Vec<(usize, Vec<UniPoly>)> {
    (0..obstruction_classes(tri, 1024).unwrap().len())
        .map(|class| (class, solve(&class_setup(tri, class).1).all_factors()))
        .collect()
}

fn show(factors: &[(usize, Vec<UniPoly>)]) -> String {
    factors
        .iter()
        .map(|(c, f)| format!("class {c} [{}]", f.iter().map(|p| p.display("x")).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn c14() -> Option<(Outcome, String)> {
    let path = m019_path();
    let text = std::fs::read_to_string(&path).ok()?;
    let tri = parse_triangulation(&text).unwrap();
    let (factors, t) = timed(|| m019_factors(&tri));
    let trivial = poly(&[-1, -3, -2, 0, 1]);
    let nontrivial = poly(&[-1, 1, 0, 0, 1]);
    let ok = factors.iter().any(|(c, f)| *c == 0 && f.contains(&trivial))
        && factors.iter().any(|(c, f)| *c != 0 && f.contains(&nontrivial));
    let outcome = Outcome::check(ok && t < Duration::from_secs(60), format!("{}, {t:.2?}", show(&factors)));
    // the same gluing with the lex-least class representatives
    let stripped: String = text.lines().take_while(|l| l.trim() != "cocycle").map(|l| format!("{l}\n")).collect();
    let info = match parse_triangulation(&stripped) {
        Ok(plain) => format!("lex-least representatives give {}", show(&m019_factors(&plain))),
        Err(e) => format!("lex-least variant not parsed: {e}"),
    };
    Some((outcome, info))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 figure-8 trivial class is empty", c1),
        ("2 figure-8 nontrivial eliminant", c2),
        ("3 sister eliminants", c3),
        ("4 Whitehead alpha* and invariant monomials", c4),
        ("5 determinant lemmas", c5),
        ("6 cokernel Z/n", c6),
        ("7 basic generator determinants", c7),
        ("8 relation counts", c8),
        ("9 cocycle face products", c9),
        ("10 shapes and gluing equations", c10),
        ("11 trace identities", c11),
        ("12 iterated differences", c12),
        ("13 Ptolemy coordinates from traces", c13),
    ];
    let mut unexpected = 0;
    let mut report = |name: &str, o: &Outcome| {
        let verdict = match (o.pass, o.expected_failure) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("{verdict} [{name}] {}", o.detail);
    };
    for (name, run) in criteria {
        report(name, &run());
    }
    match c14() {
        Some((o, info)) => {
            report("14 m019 eliminant factors", &o);
            println!("INFO [14] {info}");
        }
        None => println!("SKIP [14 m019 eliminant factors] no gluing file at {}", m019_path().display()),
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
