//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
//!
//! Oracles here are written independently of the library: matrix entries come
//! from their defining formulas, determinants from plain Gaussian elimination
//! over the rationals, polynomial roots from companion-matrix eigenvalues.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hurwitz_tnn::cfrac::{correspond, eval_exact, CFraction};
use hurwitz_tnn::classify::{
    entire_neg_zeros_check, fixture_from_form, interlacing_check, is_s_profile, quasi_stable_check, random_quasi_stable,
    random_s_pole_data, s_from_poles, Evidence, SPoleData, Verdict, Witness, ZeroPoleSpec,
};
use hurwitz_tnn::factorization::{factorize, verify_reconstruction, Budget};
use hurwitz_tnn::matrix::MatrixSpec;
use hurwitz_tnn::minors::{tnn_scan, MinorIndex};
use hurwitz_tnn::routh::{routh_run, verify_hlpm, verify_minor_product};
use hurwitz_tnn::series::{even_odd_split, poly_gcd, ps_div};
use hurwitz_tnn::sturm::{count_roots_in, sturm_sequence};
use hurwitz_tnn::{int, rat, PowerSeries, Rational};
use hurwitz_tnn_cli::demo_stieltjes;

const FAST_LIMIT: Duration = Duration::from_secs(1);
const CROSS_CHECK_LIMIT: Duration = Duration::from_secs(60);
/// Residual of a claimed zero, relative to the coefficient scale.
const ROOT_RESIDUAL_TOL: f64 = 1e-9;
/// Separation required between companion-matrix roots of different owners.
const ROOT_ORDER_TOL: f64 = 1e-9;
const CONVERGENCE_TOL: f64 = 1e-12;
/// Agreement between the demo's backward evaluation and a forward recurrence.
const EVAL_AGREEMENT_TOL: f64 = 1e-13;
const SEED: u64 = 20_240_611;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn poly(c: &[i64]) -> PowerSeries {
    PowerSeries::from_ints(c)
}

fn coeff(f: &PowerSeries, k: isize) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    f.coeffs().get(k as usize).cloned().unwrap_or_else(Rational::zero)
}

/// `H(p, q)` entry from its row pattern: odd rows carry `q`, even rows `p`, each pair shifted one column.
fn h_entry(p: &PowerSeries, q: &PowerSeries, i: usize, j: usize) -> Rational {
    let (i, j) = (i as isize, j as isize);
    if i % 2 == 1 {
        coeff(q, j - (i - 1) / 2 - 1)
    } else {
        coeff(p, j - i / 2 - 1)
    }
}

fn hurwitz_parts(f: &PowerSeries) -> (PowerSeries, PowerSeries) {
    let s = f.valuation().unwrap_or(0);
    let pick = |start: usize| {
        PowerSeries::polynomial(f.coeffs().iter().skip(start).step_by(2).cloned().collect())
    };
    (pick(s + 1), pick(s))
}

fn derivative(f: &PowerSeries) -> PowerSeries {
    PowerSeries::polynomial(f.coeffs().iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
}

fn gauss_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let factor = &m[r][c] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for k in c..n {
                let delta = &factor * &m[c][k];
                m[r][k] -= delta;
            }
        }
    }
    det
}

fn oracle_minor(entry: impl Fn(usize, usize) -> Rational, index: &MinorIndex) -> Rational {
    gauss_det(index.rows.iter().map(|&i| index.cols.iter().map(|&j| entry(i, j)).collect()).collect())
}

fn oracle_pair_minor(p: &PowerSeries, q: &PowerSeries, index: &MinorIndex) -> Rational {
    oracle_minor(|i, j| h_entry(p, q, i, j), index)
}

fn to_f64(r: &Rational) -> f64 {
    hurwitz_tnn::rational::to_f64(r)
}

fn horner(f: &PowerSeries, z: Complex64) -> Complex64 {
    f.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
}

/// Roots through the eigenvalues of the companion matrix.
fn companion_roots(f: &PowerSeries) -> Vec<Complex64> {
    let c: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().map(|z| Complex64::new(z.re, z.im)).collect()
}

fn zeros_of_form(form: &ZeroPoleSpec) -> Vec<Complex64> {
    let mut z = vec![Complex64::new(0.0, 0.0); form.j];
    z.extend(form.neg_zeros.iter().chain(&form.neg_zeros_simple).map(|x| Complex64::new(-to_f64(x), 0.0)));
    for a in &form.complex_pairs {
        z.push(Complex64::new(-to_f64(&a.re), to_f64(&a.im)));
        z.push(Complex64::new(-to_f64(&a.re), -to_f64(&a.im)));
    }
    z
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-30..=30), rng.gen_range(1..=12))
}

/// Randomly generated quasi-stable polynomials shared by criteria 3 and 10.
fn quasi_stable_fixtures() -> Vec<(ZeroPoleSpec, PowerSeries)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..200)
        .map(|_| {
            let form = random_quasi_stable(&mut rng, 8);
            let f = fixture_from_form(&form, 0).expect("polynomial fixture");
            (form, f)
        })
        .collect()
}

fn s_fixtures() -> Vec<SPoleData> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    (0..50)
        .map(|_| {
            let poles = rng.gen_range(1..=4);
            let at_infinity = rng.gen_bool(0.5);
            random_s_pole_data(&mut rng, poles, at_infinity)
        })
        .collect()
}

fn timed(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(took)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let run = routh_run(&poly(&[1, 1]), &poly(&[1, 2]), 32).map_err(|e| e.to_string())?;
    ensure!(run.b0 == int(1), "b0 = {}", run.b0);
    ensure!(run.betas == vec![int(1), int(1)], "betas {:?}", run.betas);
    ensure!(run.omega == Some(2), "omega {:?}", run.omega);
    let cf = CFraction::regular(int(1), &[int(1), int(1)]).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut points = 0;
    while points < 20 {
        let z = random_rational(&mut rng);
        if z == int(-1) {
            continue;
        }
        let got = eval_exact(&cf, &z, 2).map_err(|e| e.to_string())?;
        let want = (int(1) + int(2) * &z) / (int(1) + &z);
        ensure!(got == want, "at z = {z}: {got} != {want}");
        points += 1;
    }
    let took = timed(FAST_LIMIT, start)?;
    Ok(format!("b0=1 betas=[1,1] omega=2; 20 exact evaluations match; {took:?}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let (p, q) = (poly(&[1, 2, 1]), poly(&[1, 3, 2]));
    let fr = factorize(&p, &q, 32).map_err(|e| e.to_string())?;
    ensure!(fr.terminated, "run did not terminate: {:?}", fr.status);
    let g = fr.g.clone().ok_or("no terminal series")?;
    ensure!(g == poly(&[1, 1]), "g = {g}");
    let gcd = poly_gcd(&p, &q).map_err(|e| e.to_string())?;
    let gcd = gcd.scale(&gcd.constant_term().recip());
    ensure!(gcd == g, "gcd {gcd} differs from g {g}");
    let residual = verify_reconstruction(&p, &q, &fr, 16, &rat(1, 2)).map_err(|e| e.to_string())?;
    ensure!(residual.value.is_zero(), "residual {}", residual.value);

    // the factor product rebuilt from entry formulas: J(b0, beta_0) J(1, beta_1) H(1, 1) T(g)
    let n = 16;
    let inner = 2 * n + 2;
    let j_factor = |c: Rational, beta: Rational| {
        move |i: usize, j: usize| -> Rational {
            if i % 2 == 1 && j == i {
                c.clone()
            } else if i % 2 == 1 && j == i + 1 {
                beta.clone()
            } else if i % 2 == 0 && j == i + 1 {
                int(1)
            } else {
                Rational::zero()
            }
        }
    };
    let dense = |rows: usize, cols: usize, f: &dyn Fn(usize, usize) -> Rational| -> Vec<Vec<Rational>> {
        (1..=rows).map(|i| (1..=cols).map(|j| f(i, j)).collect()).collect()
    };
    let mul = |a: &Vec<Vec<Rational>>, b: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
        a.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|j| row.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                    .collect()
            })
            .collect()
    };
    let j0 = j_factor(fr.b0.clone(), fr.betas[0].clone());
    let j1 = j_factor(int(1), fr.betas[1].clone());
    let h11 = |i: usize, j: usize| if j == i / 2 + 1 { int(1) } else { Rational::zero() };
    let toeplitz = |i: usize, j: usize| coeff(&g, j as isize - i as isize);
    let prod = mul(
        &mul(&mul(&dense(n, inner, &j0), &dense(inner, inner, &j1)), &dense(inner, inner, &h11)),
        &dense(inner, n, &toeplitz),
    );
    for i in 1..=n {
        for j in 1..=n {
            ensure!(prod[i - 1][j - 1] == h_entry(&p, &q, i, j), "entry ({i},{j}) of the rebuilt product differs");
        }
    }
    let took = timed(FAST_LIMIT, start)?;
    Ok(format!("g = 1+z = normalized gcd; residual 0 on 16x16; independent product agrees; {took:?}"))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let budget = Budget::default();
    for (k, (form, f)) in quasi_stable_fixtures().iter().enumerate() {
        ensure!(f.degree().unwrap_or(0) <= 8, "fixture {k} has degree {:?}", f.degree());
        // the fixture really has the zeros it was built from, all with nonpositive real part
        let zeros = zeros_of_form(form);
        ensure!(zeros.len() == f.degree().unwrap_or(0), "fixture {k}: zero count");
        let scale = f.coeffs().iter().map(|c| to_f64(c).abs()).fold(1.0, f64::max);
        for z in &zeros {
            let r = horner(f, *z).norm() / (scale * (1.0 + z.norm()).powi(f.degree().unwrap_or(0) as i32));
            ensure!(r < ROOT_RESIDUAL_TOL && z.re <= 0.0, "fixture {k}: claimed zero {z} residual {r}");
        }
        let report = quasi_stable_check(f, &budget).map_err(|e| e.to_string())?;
        ensure!(report.verdict == Verdict::CertifiedYes, "fixture {k} ({f}) not certified: {:?}", report.notes);
        let scan = tnn_scan(&MatrixSpec::hurwitz_f(f.clone()), 12, 12, 4).map_err(|e| e.to_string())?;
        ensure!(!scan.is_violated(), "fixture {k} ({f}): negative minor {:?}", scan.witness);
    }
    let took = timed(CROSS_CHECK_LIMIT, start)?;
    Ok(format!("200 fixtures certified, no negative minor in 12x12 up to order 4; {took:?}"))
}

fn recheck_negative(w: &Witness, entry: impl Fn(usize, usize) -> Rational) -> Result<(MinorIndex, Rational), String> {
    let Witness::NegativeMinor { index, value, .. } = w else {
        return Err(format!("expected a negative minor, got {w:?}"));
    };
    let recomputed = oracle_minor(entry, index);
    ensure!(recomputed == *value && value.is_negative(), "witness {index:?}: claimed {value}, recomputed {recomputed}");
    Ok((index.clone(), value.clone()))
}

fn criterion_4() -> Check {
    let budget = Budget::default();
    let f = poly(&[1, -1, 1]);
    let r = quasi_stable_check(&f, &budget).map_err(|e| e.to_string())?;
    ensure!(r.verdict == Verdict::Refuted, "z^2 - z + 1 not refuted");
    let (a, b) = hurwitz_parts(&f);
    let (index, value) = recheck_negative(r.witness.as_ref().unwrap(), |i, j| h_entry(&a, &b, i, j))?;
    ensure!(index.size() == 1 && value == int(-1), "expected the entry f1 = -1, got {index:?} = {value}");

    let f = poly(&[1, 1, 1]);
    let r = entire_neg_zeros_check(&f, &budget).map_err(|e| e.to_string())?;
    ensure!(r.verdict == Verdict::Refuted, "1 + z + z^2 not refuted");
    let d = derivative(&f);
    let (index, value) = recheck_negative(r.witness.as_ref().unwrap(), |i, j| h_entry(&d, &f, i, j))?;
    ensure!(index == MinorIndex::new(vec![2, 3], vec![2, 3]).unwrap() && value == int(-1), "got {index:?} = {value}");

    let (p, q) = (poly(&[1, 1]), poly(&[1]));
    let r = is_s_profile(&p, &q, 6).map_err(|e| e.to_string())?;
    ensure!(r.verdict == Verdict::Refuted, "pair (1+z, 1) not refuted");
    let (index, value) = recheck_negative(r.witness.as_ref().unwrap(), |i, j| h_entry(&p, &q, i, j))?;
    ensure!(index == MinorIndex::principal(3).unwrap() && value == int(-1), "got {index:?} = {value}");
    Ok("three refutations, witnesses recompute to -1".into())
}

fn random_pair(rng: &mut ChaCha8Rng) -> (PowerSeries, PowerSeries) {
    loop {
        let dp = rng.gen_range(1..=4);
        let dq = rng.gen_range(1..=4);
        let mut pc = vec![int(1)];
        pc.extend((0..dp).map(|_| random_rational(rng)));
        let mut qc = vec![rat(rng.gen_range(0..=6), rng.gen_range(1..=3))];
        qc.extend((0..dq).map(|_| random_rational(rng)));
        let (p, q) = (PowerSeries::polynomial(pc), PowerSeries::polynomial(qc));
        let beta0 = coeff(&q, 1) - coeff(&q, 0) * coeff(&p, 1);
        if !beta0.is_zero() {
            return (p, q);
        }
    }
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut identities = 0;
    for _ in 0..100 {
        let (p, q) = random_pair(&mut rng);
        // next series of the recurrence, computed directly
        let (b0, a1, b1) = (coeff(&q, 0), coeff(&p, 1), coeff(&q, 1));
        let beta0 = &b1 - &b0 * &a1;
        let tail = &q - &p.scale(&b0);
        let p1 = tail.shift_down(1).map_err(|e| e.to_string())?.scale(&beta0.recip());
        for k in 2..=6 {
            for i in k..=k + 4 {
                let (lhs, rhs) = verify_hlpm(&p, &q, k, i).map_err(|e| e.to_string())?;
                ensure!(lhs == rhs, "p={p} q={q} k={k} i={i}: {lhs} != {rhs}");
                let mut cols: Vec<usize> = (2..=k).collect();
                cols.push(i + 1);
                let oracle_lhs = oracle_pair_minor(&p, &q, &MinorIndex::new((2..=k + 1).collect(), cols).unwrap());
                let mut cols: Vec<usize> = (2..k).collect();
                cols.push(i);
                let sub = oracle_pair_minor(&p1, &p, &MinorIndex::new((2..=k).collect(), cols).unwrap());
                let oracle_rhs = hurwitz_tnn::rational::pow(&beta0, k / 2) * sub;
                ensure!(oracle_lhs == lhs && oracle_rhs == rhs, "oracle disagrees at k={k} i={i}");
                identities += 1;
            }
        }
    }
    let mut products = 0;
    for data in s_fixtures() {
        let (p, q) = s_from_poles(&data).map_err(|e| e.to_string())?;
        for k in 2..=8 {
            let (lhs, rhs) = verify_minor_product(&p, &q, k).map_err(|e| e.to_string())?;
            let oracle = oracle_pair_minor(&p, &q, &MinorIndex::principal(k).unwrap());
            ensure!(lhs == rhs && lhs == oracle, "k={k}: {lhs} vs {rhs} vs oracle {oracle}");
            products += 1;
        }
    }
    Ok(format!("{identities} leading-minor identities and {products} minor products exact"))
}

fn criterion_6() -> Check {
    let demo = demo_stieltjes(40, 0.5, 84).map_err(|e| e.to_string())?;
    // forward recurrence for the convergents of 1 + b_0 z / (1 + b_1 z / ...)
    let z = 0.5;
    let (mut a_prev, mut a_cur, mut b_prev, mut b_cur) = (1.0, 1.0, 0.0, 1.0);
    for (d, beta) in demo.betas.iter().enumerate() {
        let t = to_f64(beta) * z;
        (a_prev, a_cur) = (a_cur, a_cur + t * a_prev);
        (b_prev, b_cur) = (b_cur, b_cur + t * b_prev);
        let v = a_cur / b_cur;
        ensure!((v - demo.values[d + 1]).abs() < EVAL_AGREEMENT_TOL, "depth {}: {v} vs {}", d + 1, demo.values[d + 1]);
    }
    let settled = demo.differences.iter().position(|&d| d < CONVERGENCE_TOL).ok_or("differences never fall below tolerance")?;
    ensure!(demo.differences[settled..].iter().all(|&d| d < CONVERGENCE_TOL), "differences rise again after depth {}", settled + 1);
    ensure!(demo.worpitzky_radius == rat(1, 2), "Worpitzky radius {}", demo.worpitzky_radius);

    let trip = demo_stieltjes(20, 0.5, 44).map_err(|e| e.to_string())?;
    let want: Vec<Rational> = (0..20).map(|j| hurwitz_tnn::rational::pow(&rat(1, 2), j + 1)).collect();
    ensure!(trip.roundtrip_exact && trip.recovered_betas.get(..20) == Some(&want[..]), "round trip lost betas");
    Ok(format!(
        "differences below 1e-12 from depth {}; radius 1/2; 20 betas recovered from order 44",
        settled + 1
    ))
}

fn criterion_7() -> Check {
    let form = ZeroPoleSpec { gamma1: int(1), ..ZeroPoleSpec::constant(int(1)) };
    let e = fixture_from_form(&form, 23).map_err(|e| e.to_string())?;
    let mut factorial = int(1);
    for k in 0..24 {
        if k > 0 {
            factorial *= int(k as i64);
        }
        ensure!(coeff(&e, k as isize) == factorial.recip(), "coefficient {k} of e^z");
    }
    let scan = tnn_scan(&MatrixSpec::toeplitz(e), 12, 12, 4).map_err(|e| e.to_string())?;
    ensure!(!scan.is_violated(), "e^z window has negative minor {:?}", scan.witness);
    let f = poly(&[1, -1]);
    let scan = tnn_scan(&MatrixSpec::toeplitz(f.clone()), 12, 12, 4).map_err(|e| e.to_string())?;
    let w = scan.witness.ok_or("1 - z not refuted")?;
    let recomputed = oracle_minor(|i, j| coeff(&f, j as isize - i as isize), &w.index);
    ensure!(w.index.size() == 1 && w.value == int(-1) && recomputed == w.value, "witness {:?} = {}", w.index, w.value);
    Ok("e^z (24 terms) clean on 12x12 order 4; 1 - z refuted by a 1x1 minor -1".into())
}

fn criterion_8() -> Check {
    let mut by_count = [0usize; 6];
    for data in s_fixtures() {
        let (p, q) = s_from_poles(&data).map_err(|e| e.to_string())?;
        let poles = data.poles.len() + usize::from(q.degree() > p.degree());
        ensure!(poles == data.pole_count(), "pole at infinity disagrees with the degrees");
        let r = is_s_profile(&p, &q, 4).map_err(|e| e.to_string())?;
        let profile = r.minor_profile.clone().ok_or("no profile")?;
        let omega = profile.iter().take_while(|e| e.value.is_positive()).last().map_or(1, |e| e.k);
        ensure!(profile.iter().filter(|e| e.k > omega).all(|e| e.value.is_zero()), "profile does not vanish after omega");
        for e in profile.iter().take(8) {
            ensure!(oracle_pair_minor(&p, &q, &MinorIndex::principal(e.k).unwrap()) == e.value, "minor {} differs", e.k);
        }
        ensure!((omega - 1) / 2 == poles, "omega {omega} for {poles} poles");
        ensure!(r.evidence == Some(Evidence::MinorProfile { omega, poles }), "evidence {:?}", r.evidence);
        by_count[poles] += 1;
    }
    Ok(format!("50 fixtures obey the law; by pole count {:?}", &by_count[1..]))
}

fn criterion_9() -> Check {
    for data in s_fixtures() {
        let (p, q) = s_from_poles(&data).map_err(|e| e.to_string())?;
        let r = interlacing_check(&p, &q).map_err(|e| e.to_string())?;
        ensure!(r.verdict == Verdict::CertifiedYes, "p={p} q={q} not certified: {:?}", r.witness);
        let mut roots: Vec<(f64, char)> = data.poles.iter().map(|pole| (-to_f64(&pole.location), 'p')).collect();
        for z in companion_roots(&q) {
            ensure!(z.im.abs() < ROOT_ORDER_TOL, "q={q} has a non-real root {z}");
            roots.push((z.re, 'q'));
        }
        roots.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in roots.windows(2) {
            ensure!(w[0].1 != w[1].1 && w[1].0 - w[0].0 > ROOT_ORDER_TOL, "p={p} q={q}: roots {roots:?} do not alternate");
        }
    }
    // roots -1, -1/3 against -1/2, -2/5: both roots of q fall between the roots of p
    let p = PowerSeries::polynomial(vec![int(1), int(4), int(3)]);
    let q = PowerSeries::polynomial(vec![int(1), rat(9, 2), int(5)]);
    for (f, roots) in [(&p, [int(-1), rat(-1, 3)]), (&q, [rat(-1, 2), rat(-2, 5)])] {
        ensure!(roots.iter().all(|r| f.eval(r).is_zero()), "{f} does not vanish at {roots:?}");
    }
    let seq = sturm_sequence(&q).map_err(|e| e.to_string())?;
    ensure!(count_roots_in(&seq, &int(-1), &rat(-1, 3)) == 2, "Sturm count of q between the roots of p");
    let r = interlacing_check(&p, &q).map_err(|e| e.to_string())?;
    ensure!(matches!(r.witness, Some(Witness::NonInterlacing { .. })), "pair not refuted: {:?}", r.verdict);
    Ok("50 fixtures certified and alternate numerically; constructed pair refuted".into())
}

fn criterion_10() -> Check {
    let mut pairs = vec![(poly(&[1, 1]), poly(&[1, 2])), (poly(&[1, 2, 1]), poly(&[1, 3, 2]))];
    for (_, f) in quasi_stable_fixtures() {
        let split = even_odd_split(&f).map_err(|e| e.to_string())?;
        let a0 = split.p_odd.constant_term().clone();
        if a0.is_positive() {
            pairs.push((split.p_odd.scale(&a0.recip()), split.q_even.scale(&a0.recip())));
        }
    }
    let mut checked = 0;
    for (p, q) in &pairs {
        let fr = factorize(p, q, 32).map_err(|e| e.to_string())?;
        if !fr.terminated {
            continue;
        }
        let n = fr.betas.len();
        let order = 2 * n + 8;
        let cf = correspond(&ps_div(q, p, order).map_err(|e| e.to_string())?, n + 4);
        ensure!(cf.c0 == fr.b0, "p={p} q={q}: c0 {} vs b0 {}", cf.c0, fr.b0);
        ensure!(cf.terms.iter().all(|(_, r)| *r == 1), "p={p} q={q}: non-unit powers {:?}", cf.terms);
        ensure!(cf.coefficients() == fr.betas, "p={p} q={q}: {:?} vs {:?}", cf.coefficients(), fr.betas);
        checked += 1;
    }
    ensure!(checked >= 2, "only {checked} terminating runs");
    Ok(format!("{checked} terminating runs match their C-fractions"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("routh and fraction worked example", criterion_1),
        ("common factor extraction", criterion_2),
        ("quasi-stable fixtures cross-check", criterion_3),
        ("refutation witnesses", criterion_4),
        ("minor identities", criterion_5),
        ("Stieltjes fraction desk check", criterion_6),
        ("Polya frequency windows", criterion_7),
        ("pole-count law", criterion_8),
        ("interlacing", criterion_9),
        ("betas as fraction coefficients", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
