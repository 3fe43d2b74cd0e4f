//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use circuit_roots::counter::{
    count_affine, count_positive, count_positive_detailed, count_torus, count_torus_detailed, CountOptions,
    CountResult, Detailed, PolySystem,
};
use circuit_roots::gale::{check_genericity, find_subcircuit, reduce_to_gale, reindex_candidates};
use circuit_roots::gallery::{affine_axes, five_dim_circuit, four_dim_torus, hidden_curve};
use circuit_roots::linalg::{hermite, primitive_right_kernel, rref, smith, IntMatrix};
use circuit_roots::logsign::{critical_poly, critical_poly_raw, verify_sign_pattern, Endpoint, LogLinForm};
use circuit_roots::unipoly::{isolate_real_roots, IntPoly};
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

type Check = std::result::Result<String, String>;

/// Every log form built by any criterion, for the coefficient bound check.
static FORMS: Mutex<Vec<LogLinForm>> = Mutex::new(Vec::new());

fn record(d: &Detailed) {
    if let Some(l) = d.diagnostics.gale.as_ref().and_then(|g| g.log_form().ok()) {
        FORMS.lock().unwrap().push(l);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> CountOptions {
    CountOptions::default()
}

/// `M 2^(M-1) B H^(2M)` for a form with `M` terms.
fn g_bound_holds(l: &LogLinForm) -> bool {
    let terms = l.terms();
    let m = terms.len() as u32;
    let b = terms.iter().map(|t| t.b.abs()).max().unwrap_or_else(BigInt::zero);
    let h = terms
        .iter()
        .flat_map(|t| [t.slope.numer(), t.slope.denom(), t.offset.numer(), t.offset.denom()])
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigInt::one)
        .max(BigInt::one());
    let bound = BigInt::from(m) * (BigInt::one() << (m - 1)) * b * h.pow(2 * m);
    critical_poly_raw(l).max_abs() <= bound
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Check {
    let mut worst = Duration::ZERO;
    for (k, want) in [(20731, 2), (20730, 6), (14392, 6), (14391, 2), (13059, 2), (13058, 0)] {
        let start = Instant::now();
        let d = count_positive_detailed(&five_dim_circuit(k), &opts()).map_err(|e| format!("c = 1/{k}: {e}"))?;
        let took = start.elapsed();
        record(&d);
        let got = d.result;
        worst = worst.max(took);
        ensure(got == CountResult::Finite(want), || format!("c = 1/{k}: got {got}, want {want}"))?;
        ensure(took <= Duration::from_secs(60), || format!("c = 1/{k} took {took:?}"))?;
    }
    Ok(format!("2, 6, 6, 2, 2, 0 reproduced; slowest {worst:.2?}"))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Check {
    let expected_b = [-2i64, 2, -2, 2, -2, 1, 1];
    let slopes = [16384i64, 4096, 256, 16, 1];
    let consts = [q(1, 4), q(1, 1), q(1, 1), q(1, 1), q(1, 1)];
    for k in [20731i64, 20730, 14392, 14391, 13059, 13058] {
        let f = five_dim_circuit(k);
        let cd = find_subcircuit(f.support()).map_err(|e| e.to_string())?;
        let gs = reduce_to_gale(&f, &reindex_candidates(&cd, false)[0]).map_err(|e| e.to_string())?;
        ensure(gs.reindexing.order == (0..7).collect::<Vec<_>>(), || format!("order {:?}", gs.reindexing.order))?;
        let b: Vec<i64> = gs.relation.iter().map(|x| x.to_i64().unwrap()).collect();
        let neg: Vec<i64> = expected_b.iter().map(|x| -x).collect();
        ensure(b == expected_b || b == neg, || format!("relation {b:?}"))?;
        for i in 0..5 {
            let (s, o) = &gs.gammas[i];
            ensure(*s == q(slopes[i], k) && *o == consts[i], || format!("k = {k}, gamma_{} = ({s}, {o})", i + 1))?;
        }
    }
    Ok("relation +-(-2,2,-2,2,-2,1,1) and 16384c, 4096c, 256c, 16c, c with constants 1/4,1,1,1,1 exact for all six c"
        .into())
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Check {
    let start = Instant::now();
    let f = four_dim_torus();
    let d = count_torus_detailed(&f, &opts()).map_err(|e| e.to_string())?;
    record(&d);
    let gs = d.diagnostics.gale.as_ref().ok_or("no reduction")?;
    // (a)
    let b: Vec<i64> = gs.relation[..5].iter().map(|x| x.to_i64().unwrap()).collect();
    ensure(b == [54667, -16978, -43727, 5123, -10129], || format!("log coefficients {b:?}"))?;
    let den = 27281;
    let want = [(-84556, 39898), (-125680, 47210), (-126754, 42139), (-114296, 20845)];
    for (i, &(s, o)) in want.iter().enumerate() {
        ensure(gs.gammas[i] == (q(s, den), q(o, den)), || format!("gamma_{} = {:?}", i + 1, gs.gammas[i]))?;
    }
    // (b)
    let l = gs.log_form().map_err(|e| e.to_string())?;
    let g = critical_poly(&l);
    let quartic: Vec<BigInt> = [
        "-837930167824219163155",
        "13833463598904597755876",
        "-78932164016242868100268",
        "160578806134338659719072",
        "-85015812446550320118784",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let quartic = IntPoly::new(quartic);
    let neg = quartic.scale(&BigInt::from(-1));
    ensure(g == quartic.primitive() || g == neg.primitive(), || format!("g = {g}"))?;
    // (c)
    let roots = isolate_real_roots(&g).map_err(|e| e.to_string())?;
    ensure(roots.len() == 2, || format!("{} real roots of g", roots.len()))?;
    // (d)
    ensure(d.result == CountResult::Finite(2), || format!("torus count {}", d.result))?;
    // (e)
    let cells: Vec<(Endpoint, Endpoint)> =
        d.diagnostics.cells.iter().filter(|c| c.eligible).map(|c| (c.lo.clone(), c.hi.clone())).collect();
    let fin = |n, d| Endpoint::Finite(q(n, d));
    let want_cells = vec![
        (fin(0, 1), fin(20845, 114296)),
        (fin(42139, 126754), fin(47210, 125680)),
        (fin(47210, 125680), fin(39898, 84556)),
    ];
    ensure(cells == want_cells, || format!("eligible cells {cells:?}"))?;
    for (p, digits) in
        [((20845, 114296), 182377), ((42139, 126754), 332447), ((47210, 125680), 375636), ((39898, 84556), 471852)]
    {
        let six = (q(p.0, p.1) * q(1_000_000, 1)).floor().to_integer();
        ensure(six == BigInt::from(digits), || format!("{}/{} begins 0.{six}", p.0, p.1))?;
    }
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("b, gamma, g, 2 roots of g, torus count 2 and the three eligible cells exact ({took:.2?})"))
}

// ---------------------------------------------------------------- 4, 5

fn criterion_4() -> Check {
    let f = hidden_curve();
    for (name, r) in [
        ("positive", count_positive(&f, &opts())),
        ("torus", count_torus(&f, &opts())),
        ("affine", count_affine(&f, &opts())),
    ] {
        let r = r.map_err(|e| format!("{name}: {e}"))?;
        ensure(matches!(r, CountResult::GenericityFailure(_)), || format!("{name} gave {r}"))?;
    }
    ensure(!check_genericity(f.coeffs()).passed, || "coefficient matrix reported generic".into())?;
    Ok("positive, torus and affine counts all refused".into())
}

fn criterion_5() -> Check {
    let r = count_affine(&affine_axes(), &opts()).map_err(|e| e.to_string())?;
    ensure(r == CountResult::Infinite, || format!("affine count {r}"))?;
    Ok("affine count is Infinite".into())
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut r = rng(6);
    let (mut done, mut resampled) = (0, 0);
    while done < 500 {
        let mut e: Vec<i64> = Vec::new();
        while e.len() < 3 {
            let x = r.gen_range(0..=30);
            if !e.contains(&x) {
                e.push(x);
            }
        }
        let c: Vec<i64> = (0..3)
            .map(|_| loop {
                let v = r.gen_range(-100..=100);
                if v != 0 {
                    break v;
                }
            })
            .collect();
        let f =
            PolySystem::from_i64(1, &[[e[0]], [e[1]], [e[2]]], std::slice::from_ref(&c)).map_err(|e| e.to_string())?;
        let pos = count_positive_detailed(&f, &opts()).map_err(|er| format!("{e:?} {c:?}: {er}"))?;
        let tor = count_torus_detailed(&f, &opts()).map_err(|er| format!("{e:?} {c:?}: {er}"))?;
        record(&pos);
        record(&tor);
        let (pos, tor) = (pos.result, tor.result);
        if matches!(pos, CountResult::GenericityFailure(_)) || matches!(tor, CountResult::GenericityFailure(_)) {
            resampled += 1;
            continue;
        }
        let low = *e.iter().min().unwrap();
        let deg = (*e.iter().max().unwrap() - low) as usize;
        let mut poly = vec![BigInt::zero(); deg + 1];
        for (ei, ci) in e.iter().zip(&c) {
            poly[(ei - low) as usize] += *ci;
        }
        let (neg, _, positive) = sturm_counts(&poly);
        ensure(pos == CountResult::Finite(positive as u64), || format!("{e:?} {c:?}: positive {pos} vs {positive}"))?;
        ensure(tor == CountResult::Finite((neg + positive) as u64), || {
            format!("{e:?} {c:?}: torus {tor} vs {}", neg + positive)
        })?;
        done += 1;
    }
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!("500/500 trinomials agree with a Sturm chain ({resampled} resampled, {took:.2?})"))
}

// ---------------------------------------------------------------- 7

fn is_rref(r: &[Vec<BigRational>]) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for (i, row) in r.iter().enumerate() {
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(p) => {
                if seen_zero || last.is_some_and(|l| p <= l) || !row[p].is_one() {
                    return false;
                }
                if r.iter().enumerate().any(|(k, other)| k != i && !other[p].is_zero()) {
                    return false;
                }
                last = Some(p);
            }
        }
    }
    true
}

fn is_hermite(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        match h.row(i).iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(p) => {
                let piv = &h[(i, p)];
                if seen_zero || last.is_some_and(|l| p <= l) || !piv.is_positive() {
                    return false;
                }
                if (0..i).any(|k| h[(k, p)].is_negative() || &h[(k, p)] >= piv) {
                    return false;
                }
                last = Some(p);
            }
        }
    }
    true
}

fn unimodular(m: &IntMatrix) -> bool {
    m.det().map(|d| d.abs().is_one()).unwrap_or(false)
}

fn criterion_7a() -> Check {
    let mut r = rng(71);
    for t in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=6), r.gen_range(1..=8));
        let mut m = random_matrix(&mut r, rows, cols, 20);
        if rows > 2 && t % 4 == 0 {
            m[rows - 1] = m[0].iter().zip(&m[1]).map(|(a, b)| 3 * a - b).collect();
        }
        let a = IntMatrix::from_rows(&m);
        let st = smith(&a);
        ensure(unimodular(&st.u) && unimodular(&st.v), || format!("Smith transforms not unimodular for {m:?}"))?;
        ensure((&(&st.u * &a) * &st.v) == st.s, || format!("U M V != S for {m:?}"))?;
        let diag = st.diagonal();
        let off_diag = (0..rows).any(|i| (0..cols).any(|j| i != j && !st.s[(i, j)].is_zero()));
        ensure(!off_diag, || format!("S not diagonal for {m:?}"))?;
        for w in diag.windows(2) {
            let ok = !w[0].is_negative() && if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            ensure(ok, || format!("divisibility chain broken: {diag:?}"))?;
        }
        let (u, h) = hermite(&a);
        ensure(unimodular(&u) && (&u * &a) == h && is_hermite(&h), || format!("Hermite failed for {m:?}"))?;
        let ar = a.to_rat();
        let (rr, tt) = rref(&ar);
        let rows_of =
            |x: &circuit_roots::linalg::RatMatrix| (0..x.rows()).map(|i| x.row(i).to_vec()).collect::<Vec<_>>();
        ensure((&tt * &ar) == rr && is_rref(&rows_of(&rr)), || format!("RREF identity failed for {m:?}"))?;
        let naive = naive_rref(&rows_of(&ar));
        ensure(rows_of(&rr) == naive, || format!("RREF differs from naive elimination for {m:?}"))?;
    }
    Ok("1000/1000 matrices: Smith, Hermite and RREF identities and shapes hold".into())
}

fn criterion_7b() -> Check {
    let mut r = rng(72);
    for t in 0..500 {
        let poly = if t % 3 == 0 {
            // repeated factors
            let a = IntPoly::from_i64(&[r.gen_range(-5..=5), r.gen_range(1..=3)]);
            let b = IntPoly::from_i64(&[r.gen_range(-9..=9), r.gen_range(-4..=4), 1]);
            let c =
                IntPoly::from_i64(&(0..r.gen_range(1..=4)).map(|_| r.gen_range(-9..=9)).chain([1]).collect::<Vec<_>>());
            a.pow(r.gen_range(1..=3)).mul(&b.pow(r.gen_range(1..=2))).mul(&c)
        } else {
            let deg = r.gen_range(1..=12);
            let mut c: Vec<i64> = (0..=deg).map(|_| r.gen_range(-50..=50)).collect();
            if c[deg] == 0 {
                c[deg] = 7;
            }
            IntPoly::from_i64(&c)
        };
        ensure(poly.degree().unwrap_or(0) <= 12, || format!("degree {:?}", poly.degree()))?;
        let got = isolate_real_roots(&poly).map_err(|e| e.to_string())?.len();
        let (neg, zero, pos) = sturm_counts(poly.coeffs());
        ensure(got == neg + pos + usize::from(zero), || {
            format!("{poly}: {got} vs Sturm {}", neg + pos + usize::from(zero))
        })?;
    }
    Ok("500/500 polynomials agree with the Sturm oracle".into())
}

/// Random circuit system with n <= 4, exponents <= 20 and coefficients <= 50
/// that passes genericity.
fn random_generic_circuit(r: &mut rand_chacha::ChaCha8Rng) -> PolySystem {
    loop {
        let n = r.gen_range(1..=4);
        let pts = random_points(r, n, n + 2, 0, 20);
        let coeffs = random_matrix(r, n, n + 2, 50);
        let Ok(f) = PolySystem::from_i64(n, &pts, &coeffs) else { continue };
        if f.support().affine_rank() != n || !check_genericity(f.coeffs()).passed {
            continue;
        }
        return f;
    }
}

fn verify_all(d: &Detailed, samples: usize) -> std::result::Result<u64, String> {
    let Some(gs) = &d.diagnostics.gale else { return Ok(0) };
    let Ok(l) = gs.log_form() else { return Ok(0) };
    let mut checked = 0;
    for c in &d.diagnostics.cells {
        if let Some(t) = &c.count {
            checked += verify_sign_pattern(&l, t, &c.lo, &c.hi, samples)?;
        }
    }
    Ok(checked)
}

fn criterion_7d() -> Check {
    let mut r = rng(74);
    let mut samples = 0u64;
    let mut inconsistent = Vec::new();
    let mut systems = 0;
    while systems < 50 {
        let f = random_generic_circuit(&mut r);
        let (Ok(p), Ok(t)) = (count_positive_detailed(&f, &opts()), count_torus_detailed(&f, &opts())) else {
            continue;
        };
        if matches!(p.result, CountResult::GenericityFailure(_))
            || matches!(t.result, CountResult::GenericityFailure(_))
        {
            continue;
        }
        systems += 1;
        for d in [&p, &t] {
            record(d);
            match verify_all(d, 100_000) {
                Ok(k) => samples += k,
                Err(msg) => inconsistent.push(msg),
            }
        }
    }
    ensure(inconsistent.is_empty(), || format!("{} inconsistencies, first: {}", inconsistent.len(), inconsistent[0]))?;
    Ok(format!("50 systems, {samples} decisive samples, 0 inconsistencies"))
}

/// Runs last, over the forms recorded by the other criteria.
fn criterion_7c() -> Check {
    let forms = FORMS.lock().unwrap();
    ensure(!forms.is_empty(), || "no forms recorded".into())?;
    let bad = forms.iter().filter(|l| !g_bound_holds(l)).count();
    ensure(bad == 0, || format!("{bad} of {} forms exceed the bound", forms.len()))?;
    Ok(format!("bound holds on all {} forms built by criteria 1, 3, 6, 7d and 8", forms.len()))
}

fn criterion_7e() -> Check {
    let mut r = rng(75);
    let mut done = 0;
    while done < 500 {
        let n = r.gen_range(1..=5);
        let d = r.gen_range(1..=20);
        let pts = random_points(&mut r, n, n + 2, -d, d);
        let lifted: Vec<Vec<i64>> =
            std::iter::once(vec![1; n + 2]).chain((0..n).map(|k| pts.iter().map(|p| p[k]).collect())).collect();
        let m = IntMatrix::from_rows(&lifted);
        if m.rank() != n + 1 {
            continue;
        }
        let b = primitive_right_kernel(&m).map_err(|e| e.to_string())?;
        let k = (n + 1) as u32;
        // |b_j|^2 <= k^k prod d_i^2
        let mut bound = BigInt::from(k).pow(k);
        for row in &lifted {
            let di = row.iter().map(|v| v.abs()).max().unwrap().max(1);
            bound *= BigInt::from(di * di);
        }
        for bj in &b {
            ensure(bj * bj <= bound, || format!("|b_j| = {bj} exceeds the bound for {pts:?}"))?;
        }
        done += 1;
    }
    Ok("500/500 supports within the kernel bound".into())
}

fn criterion_7f() -> Check {
    let mut r = rng(76);
    let trials = 4000;
    let mut report = Vec::new();
    for n in 1..=4usize {
        let fails = (0..trials)
            .filter(|_| !check_genericity(&IntMatrix::from_rows(&random_matrix(&mut r, n, n + 2, 100))).passed)
            .count();
        let p = 2.0 * (n * n) as f64 / 201.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let rate = fails as f64 / trials as f64;
        ensure(rate <= p + 3.0 * sigma, || format!("n = {n}: failure rate {rate:.4} > {:.4}", p + 3.0 * sigma))?;
        report.push(format!("n={n} {rate:.4}<={:.4}", p + 3.0 * sigma));
    }
    Ok(report.join(", "))
}

// ---------------------------------------------------------------- 8

fn kind(c: &CountResult) -> &'static str {
    match c {
        CountResult::Finite(_) => "finite",
        CountResult::Infinite => "infinite",
        CountResult::GenericityFailure(_) => "refused",
        CountResult::UnverifiedGenericity { .. } => "unverified",
    }
}

fn criterion_8() -> Check {
    let mut r = rng(8);
    let mut kinds = std::collections::BTreeMap::new();
    for _ in 0..100 {
        let n = r.gen_range(1..=3);
        let (pts, coeffs, f) = loop {
            let pts = random_points(&mut r, n, n + 2, 0, 12);
            let coeffs = random_matrix(&mut r, n, n + 2, 30);
            if let Ok(f) = PolySystem::from_i64(n, &pts, &coeffs) {
                if f.support().affine_rank() == n {
                    break (pts, coeffs, f);
                }
            }
        };
        let all = |f: &PolySystem| -> std::result::Result<[CountResult; 3], String> {
            Ok([
                count_positive(f, &opts()).map_err(|e| e.to_string())?,
                count_torus(f, &opts()).map_err(|e| e.to_string())?,
                count_affine(f, &opts()).map_err(|e| e.to_string())?,
            ])
        };
        for d in [count_positive_detailed(&f, &opts()), count_torus_detailed(&f, &opts())].iter().flatten() {
            record(d);
        }
        let base = all(&f)?;
        for c in &base {
            *kinds.entry(kind(c)).or_insert(0) += 1;
        }
        let scaled: Vec<Vec<i64>> = coeffs
            .iter()
            .map(|row| {
                let s = loop {
                    let s = r.gen_range(-5..=5);
                    if s != 0 {
                        break s;
                    }
                };
                row.iter().map(|v| v * s).collect()
            })
            .collect();
        let fs = PolySystem::from_i64(n, &pts, &scaled).unwrap();
        ensure(all(&fs)? == base, || format!("scaling changed counts of {pts:?} {coeffs:?}"))?;
        let shift: Vec<i64> = (0..n).map(|_| r.gen_range(-5..=5)).collect();
        let moved: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let ft = PolySystem::from_i64(n, &moved, &coeffs).unwrap();
        let got = [
            count_positive(&ft, &opts()).map_err(|e| e.to_string())?,
            count_torus(&ft, &opts()).map_err(|e| e.to_string())?,
        ];
        ensure(got[..] == base[..2], || format!("translation by {shift:?} changed counts of {pts:?} {coeffs:?}"))?;
    }
    Ok(format!(
        "100 instances, results {kinds:?}: scaling keeps all counts, translation keeps positive and torus counts"
    ))
}

// ---------------------------------------------------------------- driver

fn guarded(f: impl FnOnce() -> Check) -> Check {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    })
}

fn main() {
    let mut results: Vec<(&str, &str, Check)> = vec![
        ("1", "golden positive counts, 5x5 circuit", guarded(criterion_1)),
        ("2", "golden Gale reduction, 5x5 circuit", guarded(criterion_2)),
        ("3", "golden pipeline, 4x4 torus system", guarded(criterion_3)),
        ("4", "genericity refusal", guarded(criterion_4)),
        ("5", "affine infinitude", guarded(criterion_5)),
        ("6", "trinomials vs direct isolation", guarded(criterion_6)),
        ("7a", "Smith/Hermite/RREF identities", guarded(criterion_7a)),
        ("7b", "isolation vs Sturm", guarded(criterion_7b)),
        ("7d", "sampling consistency of L", guarded(criterion_7d)),
        ("7e", "kernel vector bound", guarded(criterion_7e)),
        ("7f", "genericity pass rate", guarded(criterion_7f)),
        ("8", "scaling and translation invariance", guarded(criterion_8)),
    ];
    results.insert(8, ("7c", "critical polynomial coefficient bound", guarded(criterion_7c)));
    let mut failed = 0;
    for (id, name, res) in &results {
        match res {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
