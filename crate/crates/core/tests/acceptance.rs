//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! when any criterion fails.
//!
//! Brute-force oracles here share no code with the library beyond exact
//! rational arithmetic.
//!
//! Base-change oracle height: solutions of `a x^2 + b y^2 = 1` over
//! `Q(sqrt m)` are searched as `x = (x0 + x1 sqrt m)/w`,
//! `y = (y0 + y1 sqrt m)/w` with all four numerators bounded by a height.
//! Every triple is searched at height 12. A triple whose symbol vanishes
//! without a solution at that height is searched again in boxes of height
//! 24, 48, ..., 384. Over the corpus about 1000 triples need this, and the
//! largest minimal height is 130, attained by `(13, 15)` over `Q(sqrt -13)`:
//! only 13 ramifies over Q there, and 13 ramifies in the field.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigmafix::arith::{is_square, Rational, Var};
use sigmafix::decider::{
    decide, decide_with_norm_solution, point_on_x, scan, Certificate, Decider, Decision,
    ScanOutcome, ScanRequest, SurfaceSpec, Verdict,
};
use sigmafix::hilbert::{candidate_places, global_hilbert, local_hilbert};
use sigmafix::quadfield::{ext_hilbert, squarefree_core};
use sigmafix::sigma::{
    verify_composition_identity, verify_involution_and_invariance, verify_proof_chain_nonsquare,
    verify_proof_chain_square,
};
use sigmafix::solver::{find_quadric_point, solve_norm_equation, QuadricSpec, SolverConfig};
use sigmafix::Error;

const EX22_NOT_RATIONAL: [i64; 18] = [13, 19, 26, 37, 38, 39, 43, 52, 57, 61, 65, 67, 74, 76, 78, 86, 91, 95];
const EX23_RATIONAL: [i64; 35] = [
    3, 5, 6, 10, 12, 13, 19, 20, 21, 24, 26, 27, 35, 38, 40, 42, 45, 48, 51, 52, 54, 59, 61, 69, 70,
    75, 76, 80, 83, 84, 85, 90, 91, 93, 96,
];

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn r(n: i64) -> Rational {
    Rational::from(n)
}

fn rand_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den)).unwrap()
}

fn rand_nonzero(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    loop {
        let q = rand_rat(rng, num, den);
        if !q.is_zero() {
            return q;
        }
    }
}

fn rand_nonsquare(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    loop {
        let q = r(rng.gen_range(-max..=max));
        if !q.is_zero() && is_square(&q).is_none() {
            return q;
        }
    }
}

fn rand_spec(rng: &mut ChaCha8Rng, max: i64) -> SurfaceSpec {
    loop {
        let a = rand_nonsquare(rng, max);
        let b = rand_nonzero(rng, max, 3);
        let c = rand_rat(rng, max, 3);
        let d = rand_rat(rng, max, 3);
        if let Ok(s) = SurfaceSpec::new(a, b, c, d) {
            return s;
        }
    }
}

/// `n` is a perfect square, for `n` within the precomputed table.
struct Squares(Vec<bool>);

impl Squares {
    fn up_to(max: u64) -> Self {
        let mut t = vec![false; max as usize + 1];
        let mut k = 0u64;
        while k * k <= max {
            t[(k * k) as usize] = true;
            k += 1;
        }
        Squares(t)
    }

    fn has(&self, n: i64) -> bool {
        n >= 0 && self.0[n as usize]
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let entries = scan(&ScanRequest::ex22());
    let secs = start.elapsed().as_secs_f64();
    let not_rational: Vec<i64> = entries
        .iter()
        .filter(|e| e.verdict() == Some(Verdict::NotRational))
        .map(|e| e.c)
        .collect();
    let decided = entries.iter().filter(|e| e.verdict().is_some()).count();
    if not_rational != EX22_NOT_RATIONAL || decided != 100 {
        return fail(format!("non-rational set {not_rational:?}, {decided} decided"));
    }
    if secs >= 10.0 {
        return fail(format!("correct set but took {secs:.2} s"));
    }
    pass(format!("18 non-rational values match, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let entries = scan(&ScanRequest::ex23());
    let mut expected: Vec<i64> = EX23_RATIONAL.iter().flat_map(|&c| [c, -c]).collect();
    expected.sort();
    let rational: Vec<i64> = entries
        .iter()
        .filter(|e| e.verdict() == Some(Verdict::Rational))
        .map(|e| e.c)
        .collect();
    let decided = entries.iter().filter(|e| e.verdict().is_some()).count();
    let zero_skipped = entries
        .iter()
        .any(|e| e.c == 0 && matches!(e.outcome, ScanOutcome::Skipped { .. }));
    if rational == expected && decided == 200 && zero_skipped {
        pass("rational exactly on the 70 values +-{3, ..., 96}; c = 0 skipped")
    } else {
        fail(format!("rational set {rational:?}, {decided} decided"))
    }
}

fn criterion_3() -> Outcome {
    let spec = SurfaceSpec::from_ints(3, 4, 7, 28).unwrap();
    let verdict = decide(&spec).unwrap().verdict;
    if verdict != Verdict::NotRational {
        return fail(format!("decide(3, 4, 7, 28) = {verdict}"));
    }
    let point = match point_on_x(&spec) {
        Ok(Some(p)) if spec.is_point(&p) => p,
        other => return fail(format!("point_on_x gave {other:?}")),
    };
    // independent check of the two norm equations
    let [al, be, ga, de] = &point;
    let ok = &al.square() - &(&r(3) * &be.square()) == r(4)
        && &ga.square() - &(&r(3) * &de.square()) == &(&r(14) * al) + &r(28);
    if !ok {
        return fail(format!("point {point:?} fails the norm equations"));
    }
    let bad: Vec<i64> = (1..=200)
        .filter(|m| m % 3 == 2)
        .filter(|&m| global_hilbert(&r(3), &r(m)).unwrap().is_empty())
        .collect();
    if !bad.is_empty() {
        return fail(format!("(3, m) split for m = {bad:?}"));
    }
    pass(format!(
        "not_rational; point ({}, {}, {}, {}); (3, m) ramified for all 67 m = 2 mod 3 up to 200",
        al, be, ga, de
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let a = rand_nonzero(&mut rng, 1000, 1000);
        let b = rand_nonzero(&mut rng, 1000, 1000);
        let mut prod = 1i8;
        for v in candidate_places(&a, &b).unwrap() {
            prod *= local_hilbert(&a, &b, &v).unwrap();
        }
        if prod != 1 {
            return fail(format!("pair {i}: ({a}, {b}) has product {prod}"));
        }
    }
    pass("product of local symbols is +1 on 1000 pseudorandom pairs")
}

/// Nontrivial zero of `X1^2 - a X2^2 - b X3^2` with entries of height at most `h`.
fn brute_ternary(sq: &Squares, a: i64, b: i64, h: i64) -> bool {
    for x3 in 0..=h {
        for x2 in -h..=h {
            if x2 == 0 && x3 == 0 {
                continue;
            }
            let v = a * x2 * x2 + b * x3 * x3;
            if v >= 0 && v <= (h * h) && sq.has(v) {
                return true;
            }
        }
    }
    false
}

/// Nontrivial zero of `X1^2 - a X2^2 - b X3^2 + ab X4^2` of height at most `h`.
fn brute_quaternary(sq: &Squares, a: i64, b: i64, h: i64) -> bool {
    for x4 in 0..=h {
        for x3 in -h..=h {
            for x2 in -h..=h {
                if x2 == 0 && x3 == 0 && x4 == 0 {
                    continue;
                }
                let v = a * x2 * x2 + b * x3 * x3 - a * b * x4 * x4;
                if v >= 0 && v <= h * h && sq.has(v) {
                    return true;
                }
            }
        }
    }
    false
}

fn criterion_5(budget_errors: &mut Vec<String>) -> Outcome {
    let h = 200;
    let sq = Squares::up_to((h * h) as u64);
    let (mut pairs, mut split, mut quaternary_checked) = (0, 0, 0);
    for a in -30i64..=30 {
        if a == 0 || is_square(&r(a)).is_some() {
            continue;
        }
        for b in -30i64..=30 {
            if b == 0 {
                continue;
            }
            pairs += 1;
            let symbol_split = global_hilbert(&r(a), &r(b)).unwrap().is_empty();
            let brute = brute_ternary(&sq, a, b, h);
            if symbol_split != brute {
                return fail(format!("({a}, {b}): symbol split {symbol_split}, brute force {brute}"));
            }
            // the solver must agree and must not run out of budget
            match solve_norm_equation(&r(a), &r(b)) {
                Ok(s) if s.is_some() == symbol_split => {}
                Ok(s) => return fail(format!("({a}, {b}): solver gave {s:?}")),
                Err(Error::SearchBudgetExceeded(m)) => budget_errors.push(format!("norm ({a}, {b}): {m}")),
                Err(e) => return fail(format!("({a}, {b}): {e}")),
            }
            // quaternary norm form of the same quaternion algebra
            // a, b < 0 gives a definite form, which the solver rejects up front
            let point = match QuadricSpec::new(vec![r(1), r(-a), r(-b), r(a * b)]) {
                Ok(q) => match find_quadric_point(&q) {
                    Ok(Some(p)) if !q.contains(&p) => return fail(format!("({a}, {b}): {p:?} off the quadric")),
                    Ok(p) => p,
                    Err(e) => return fail(format!("({a}, {b}): quaternary solver: {e}")),
                },
                Err(Error::InvalidQuadric(_)) if a < 0 && b < 0 => None,
                Err(e) => return fail(format!("({a}, {b}): {e}")),
            };
            if point.is_some() != symbol_split {
                return fail(format!("({a}, {b}): quaternary solver disagrees"));
            }
            if !symbol_split {
                quaternary_checked += 1;
                if brute_quaternary(&sq, a, b, 12) {
                    return fail(format!("({a}, {b}): quaternary zero for a ramified pair"));
                }
            }
            split += usize::from(symbol_split);
        }
    }
    pass(format!(
        "{pairs} pairs, {split} split; ternary brute force (height 200) and quaternary solver agree; \
         {quaternary_checked} ramified pairs have no quaternary zero of height 12"
    ))
}

fn is_square_i64(n: i64) -> bool {
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).any(|k| k * k == n)
}

/// Minimal height of a solution of `a x^2 + b y^2 = 1` over Q(sqrt m), or
/// `None` when there is none with numerators of height at most `h`.
fn brute_ext(a: i64, b: i64, m: i64, h: i64) -> Option<i64> {
    let mut best: Option<i64> = None;
    for x0 in -h..=h {
        for x1 in -h..=h {
            for y0 in -h..=h {
                // irrational part: a x0 x1 + b y0 y1 = 0
                let t = a * x0 * x1;
                let y1s: Vec<i64> = if y0 == 0 {
                    if t != 0 {
                        continue;
                    }
                    (-h..=h).collect()
                } else {
                    if t % (b * y0) != 0 {
                        continue;
                    }
                    let y1 = -t / (b * y0);
                    if y1.abs() > h {
                        continue;
                    }
                    vec![y1]
                };
                for y1 in y1s {
                    let w2 = a * (x0 * x0 + m * x1 * x1) + b * (y0 * y0 + m * y1 * y1);
                    if w2 > 0 && is_square_i64(w2) {
                        let ht = x0.abs().max(x1.abs()).max(y0.abs()).max(y1.abs());
                        best = Some(best.map_or(ht, |b: i64| b.min(ht)));
                    }
                }
            }
        }
    }
    best
}

fn criterion_6() -> Outcome {
    const BASE: i64 = 12;
    const ESCALATION: [i64; 5] = [24, 48, 96, 192, 384];
    let ms: Vec<i64> = (-15i64..=15)
        .filter(|&m| m != 0 && m != 1)
        .filter(|&m| squarefree_core(&r(m)).unwrap().core() == &BigInt::from(m))
        .collect();
    let (mut triples, mut split, mut stabilizing, mut escalated) = (0, 0, 0, 0);
    for &m in &ms {
        let field = squarefree_core(&r(m)).unwrap();
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if a == 0 || b == 0 {
                    continue;
                }
                triples += 1;
                let sym = ext_hilbert(&r(a), &r(b), &field).unwrap();
                let mut brute = brute_ext(a, b, m, BASE);
                if sym.is_zero() && brute.is_none() {
                    escalated += 1;
                    brute = ESCALATION.iter().find_map(|&h| brute_ext(a, b, m, h));
                }
                if sym.is_zero() != brute.is_some() {
                    return fail(format!("({a}, {b}) over Q(sqrt {m}): symbol {:?}, brute {brute:?}", sym.value));
                }
                if let Some(ht) = brute {
                    split += 1;
                    stabilizing = stabilizing.max(ht);
                }
            }
        }
    }
    pass(format!(
        "{triples} triples over {} fields, {split} split; brute force agrees \
         ({escalated} searches escalated past height {BASE}, largest minimal height {stabilizing})",
        ms.len()
    ))
}

/// Exact check of both defining relations at rational parameter values.
fn maps_hold_at_samples(spec: &SurfaceSpec, maps: &[sigmafix::arith::QRatFunc; 4], params: &[Var], rng: &mut ChaCha8Rng) -> bool {
    let mut checked = 0;
    for _ in 0..40 {
        let values: BTreeMap<Var, Rational> = params.iter().map(|&v| (v, rand_rat(rng, 30, 7))).collect();
        let t: Option<Vec<Rational>> = maps.iter().map(|f| f.eval(&values)).collect();
        let Some(t) = t else { continue };
        let first = &t[0].square() - &(spec.a() * &t[1].square());
        let second = &t[2].square() - &(spec.a() * &t[3].square());
        let rhs = &(&(spec.c() + spec.c()) * &t[0]) + spec.d();
        if &first != spec.b() || second != rhs {
            return false;
        }
        checked += 1;
        if checked == 3 {
            return true;
        }
    }
    false
}

fn certificate_sound(d: &Decision, rng: &mut ChaCha8Rng) -> Result<(usize, usize), String> {
    let Certificate::Rational { point, parametrization, norm_solution, .. } = &d.certificate else {
        return Ok((0, 0));
    };
    let spec = &d.spec;
    if &(&norm_solution.alpha.square() - &(spec.a() * &norm_solution.beta.square())) != spec.b() {
        return Err(format!("{spec}: norm solution"));
    }
    let mut counts = (0, 0);
    if let Some(p) = point {
        let first = &p[0].square() - &(spec.a() * &p[1].square());
        let second = &p[2].square() - &(spec.a() * &p[3].square());
        if &first != spec.b() || second != &(&(spec.c() + spec.c()) * &p[0]) + spec.d() {
            return Err(format!("{spec}: point {p:?}"));
        }
        counts.0 = 1;
    }
    if let Some(m) = parametrization {
        if !m.satisfies(spec) || !maps_hold_at_samples(spec, &m.maps, &m.params, rng) {
            return Err(format!("{spec}: parametrization"));
        }
        counts.1 = 1;
    }
    Ok(counts)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let certify = Decider { always_parametrize: true, ..Decider::default() };
    let plain = Decider::default();
    let mut specs: Vec<SurfaceSpec> = Vec::new();
    for c in 1..=100 {
        specs.push(SurfaceSpec::from_ints(2, 1, c, c).unwrap());
    }
    for c in (-100..=100).filter(|&c| c != 0) {
        specs.push(SurfaceSpec::from_ints(2, 2, c, c).unwrap());
    }
    for _ in 0..200 {
        specs.push(rand_spec(&mut rng, 20));
    }
    let (mut rational, mut points, mut maps) = (0, 0, 0);
    for spec in &specs {
        for decider in [&plain, &certify] {
            let d = match decider.decide(spec) {
                Ok(d) => d,
                Err(e) => return fail(format!("{spec}: {e}")),
            };
            if d.verdict != Verdict::Rational {
                continue;
            }
            rational += 1;
            match certificate_sound(&d, &mut rng) {
                Ok((p, m)) => {
                    points += p;
                    maps += m;
                }
                Err(e) => return fail(e),
            }
        }
    }
    pass(format!(
        "{rational} rational certificates: {points} points satisfy both norm equations, \
         {maps} parametrizations satisfy both relations symbolically and at sample values"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let composition = verify_composition_identity();
    if !composition.all_passed() {
        return fail(format!("composition identity\n{composition}"));
    }
    for _ in 0..200 {
        let spec = rand_spec(&mut rng, 20);
        let rep = verify_involution_and_invariance(&spec);
        if !rep.all_passed() {
            return fail(format!("involution on {spec}\n{rep}"));
        }
    }
    let mut n = 0;
    while n < 50 {
        let a = rand_nonsquare(&mut rng, 20);
        let alpha = rand_rat(&mut rng, 12, 4);
        let beta = rand_nonzero(&mut rng, 12, 4);
        let b = &alpha.square() - &(&a * &beta.square());
        if b.is_zero() || is_square(&b).is_some() {
            continue;
        }
        let Ok(spec) = SurfaceSpec::new(a, b, rand_rat(&mut rng, 20, 3), rand_rat(&mut rng, 20, 3)) else {
            continue;
        };
        let rep = verify_proof_chain_nonsquare(&spec, &alpha, &beta).unwrap();
        if !rep.all_passed() {
            return fail(format!("nonsquare chain on {spec}, ({alpha}, {beta})\n{rep}"));
        }
        n += 1;
    }
    let mut n = 0;
    while n < 50 {
        let a = rand_nonsquare(&mut rng, 20);
        let beta = rand_nonzero(&mut rng, 12, 4);
        let Ok(spec) = SurfaceSpec::new(a, beta.square(), rand_rat(&mut rng, 20, 3), rand_rat(&mut rng, 20, 3)) else {
            continue;
        };
        let rep = verify_proof_chain_square(&spec, &beta).unwrap();
        if !rep.all_passed() {
            return fail(format!("square chain on {spec}, beta = {beta}\n{rep}"));
        }
        n += 1;
    }
    pass("composition identity; 200 involution reports; 50 + 50 proof chains; zero failures")
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut specs = 0;
    while specs < 50 {
        let spec = rand_spec(&mut rng, 20);
        if is_square(spec.b()).is_some() || !global_hilbert(spec.a(), spec.b()).unwrap().is_empty() {
            continue;
        }
        let base = solve_norm_equation(spec.a(), spec.b()).unwrap().expect("split pair");
        let reference = decide(&spec).unwrap().verdict;
        let mut seen = vec![base.clone()];
        let mut k = 1i64;
        while seen.len() < 21 {
            let s = Rational::new(k, 1 + k % 3).unwrap();
            k += 1;
            let sol = base.twist(spec.a(), &s);
            if !sol.satisfies(spec.a(), spec.b()) {
                return fail(format!("{spec}: twist by {s} left the norm equation"));
            }
            if !seen.contains(&sol) {
                seen.push(sol);
            }
        }
        for sol in &seen {
            let v = match decide_with_norm_solution(&spec, sol) {
                Ok(d) => d.verdict,
                Err(e) => return fail(format!("{spec} with ({}, {}): {e}", sol.alpha, sol.beta)),
            };
            if v != reference {
                return fail(format!("{spec}: ({}, {}) gives {v}, expected {reference}", sol.alpha, sol.beta));
            }
        }
        specs += 1;
    }
    pass("50 specs x 21 distinct norm solutions: verdicts identical")
}

fn criterion_10(budget_errors: &[String]) -> Outcome {
    let mut errors: Vec<String> = budget_errors.to_vec();
    for req in [ScanRequest::ex22(), ScanRequest::ex23()] {
        for e in scan(&req) {
            if let ScanOutcome::Error { message } = e.outcome {
                errors.push(format!("scan c = {}: {message}", e.c));
            }
        }
    }
    if !errors.is_empty() {
        return fail(errors.join("; "));
    }
    // with the exhaustive fallback disabled, any budget error is a descent failure
    let descent_only = SolverConfig { fallback_height: 0, ..SolverConfig::default() };
    let mut needs_fallback = Vec::new();
    for a in (-30i64..=30).filter(|&a| a != 0 && is_square(&r(a)).is_none()) {
        for b in (-30i64..=30).filter(|&b| b != 0) {
            if descent_only.solve_norm_equation(&r(a), &r(b)).is_err() {
                needs_fallback.push((a, b));
            }
        }
    }
    pass(format!(
        "no budget errors from the norm solver (criterion 5 corpus) or the scans; \
         descent alone solves {} of 3300 corpus pairs",
        3300 - needs_fallback.len()
    ))
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; a name
    // filter that does not mention this suite skips it.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }
    // ACCEPTANCE_ONLY=6,9 runs a subset while iterating
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|n| n.trim().parse().ok()).collect());
    let mut budget_errors = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |n: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            return;
        }
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} [{n:>2}] {name}: {} ({secs:.1} s)",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail
        );
        results.push((n, name, out));
    };
    run(1, "ex22 reproduction", &mut criterion_1);
    run(2, "ex23 reproduction", &mut criterion_2);
    run(3, "(3, 4, 7, 28) and m = 2 mod 3", &mut criterion_3);
    run(4, "product formula", &mut criterion_4);
    run(5, "ternary/quaternary oracle", &mut || criterion_5(&mut budget_errors));
    run(6, "base-change oracle", &mut criterion_6);
    run(7, "certificate soundness", &mut criterion_7);
    run(8, "symbolic suite", &mut criterion_8);
    run(9, "solution independence", &mut criterion_9);
    let errors = budget_errors.clone();
    run(10, "no budget errors", &mut || criterion_10(&errors));
    let failed = results.iter().filter(|(_, _, o)| !o.ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
