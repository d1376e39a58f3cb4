//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p deadend-core --test acceptance`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use deadend::cayley::{Ball, Budget};
use deadend::construction::{
    factorize, length_inequality_holds, required_ball_radius, verify_construction, BoundMode,
    Construction, QuotientChoice,
};
use deadend::depth::{depth, depth_oracle, depth_oracle_translated, depth_profile, DepthValue};
use deadend::group::{Element, GeneratingSet, Group, Letter, TableGroup, Word};
use deadend::quotient::{
    counting_bound_check, diameter, find_quotient, QuotientFamily, QuotientMap, SearchMode,
};

/// Maximum finite depth in the lamplighter ball of radius 8 under {t, a},
/// recorded from the brute-force oracle.
const LAMPLIGHTER_R8_MAX_FINITE_DEPTH: u32 = 3;
const LAMPLIGHTER_R8_ELEMENTS: usize = 490;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zz1() -> GeneratingSet {
    GeneratingSet::parse(&Group::integers(), "1").unwrap()
}

fn ones(v: i64) -> Word {
    let letter = if v >= 0 { Letter::pos(0) } else { Letter::neg(0) };
    Word(vec![letter; v.unsigned_abs() as usize])
}

fn as_int(e: &Element) -> i64 {
    match e {
        Element::Int(v) => *v,
        other => panic!("expected an integer, got {other}"),
    }
}

fn construct_integers(m: u64, target_depth: u32, mode: BoundMode) -> Result<Construction, String> {
    let s = zz1();
    let pi = QuotientMap::onto_cyclic(&s, m).map_err(|e| e.to_string())?;
    Construction::build(&s, QuotientChoice::Fixed(pi), target_depth, mode, &Budget::default())
        .map_err(|e| e.to_string())
}

/// Word norms on Z under the symmetric closure of `a`, by BFS over integers
/// up to `max_len` steps. Exact for norms up to `max_len`.
fn integer_norms(a: &[i64], max_len: u32) -> HashMap<i64, u32> {
    let mut norms = HashMap::from([(0i64, 0u32)]);
    let mut queue = VecDeque::from([0i64]);
    while let Some(x) = queue.pop_front() {
        let d = norms[&x];
        if d == max_len {
            continue;
        }
        for &s in a {
            for y in [x + s, x - s] {
                norms.entry(y).or_insert_with(|| {
                    queue.push_back(y);
                    d + 1
                });
            }
        }
    }
    norms
}

/// `g + (sum of at most r elements of ±a)`.
fn integer_neighbourhood(g: i64, a: &[i64], r: u32) -> BTreeSet<i64> {
    let mut out = BTreeSet::from([g]);
    let mut frontier = out.clone();
    for _ in 0..r {
        let mut next = BTreeSet::new();
        for &x in &frontier {
            for &s in a {
                next.insert(x + s);
                next.insert(x - s);
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

/// Shared check for the integer constructions: `A` matches the residue
/// filter, the witness has norm exactly n, and every element within d of it
/// has norm at most n, all from an integer BFS written here.
fn check_integer_construction(c: &Construction, m: i64) -> Result<(Vec<i64>, u32), String> {
    let (n, d, big) = (c.params.n, c.params.d, c.params.ball_radius as i64);
    let a: Vec<i64> = c.generating_set.gens().elements().map(as_int).collect();
    let expected: BTreeSet<i64> = (-big..=big).filter(|k| k.rem_euclid(m) == 1).collect();
    ensure(a.iter().copied().collect::<BTreeSet<_>>() == expected, || {
        format!("A = {a:?} differs from the residue filter")
    })?;
    let g_n = as_int(&c.witness.element);
    let norms = integer_norms(&a, n);
    ensure(norms.get(&g_n) == Some(&n), || {
        format!("independent BFS gives |{g_n}|_A = {:?}", norms.get(&g_n))
    })?;
    let near = integer_neighbourhood(g_n, &a, d);
    let worst = near.iter().map(|x| norms.get(x).copied()).max().flatten();
    ensure(near.iter().all(|x| norms.contains_key(x)), || {
        format!("some element within {d} of {g_n} has A-norm above {n}")
    })?;
    Ok((a, worst.unwrap_or(0)))
}

fn criterion_1() -> Outcome {
    let c = construct_integers(10, 3, BoundMode::Paper)?;
    let p = &c.params;
    ensure((p.d, p.n, p.ball_radius) == (2, 5, 78), || format!("params {p:?}"))?;
    ensure(c.generating_set.len() == 15, || format!("|A| = {}", c.generating_set.len()))?;
    ensure(c.witness.element == Element::Int(5) && c.witness.a_norm == 5, || {
        format!("witness {} with A-norm {}", c.witness.element, c.witness.a_norm)
    })?;
    let (_, worst) = check_integer_construction(&c, 10)?;
    let report = verify_construction(&c, 2).map_err(|e| e.to_string())?;
    ensure(report.max_a_norm <= 5 && report.certified_depth == 3, || {
        format!("max norm {} certified {}", report.max_a_norm, report.certified_depth)
    })?;
    ensure(report.witness_depth.is_at_least(3), || {
        format!("depth(5) = {}", report.witness_depth)
    })?;
    Ok(format!(
        "|A| = 15, |5|_A = 5, {} elements within 2 of 5 have norm <= {worst}, depth(5) = {}",
        report.elements.len(),
        report.witness_depth
    ))
}

fn criterion_2() -> Outcome {
    let c = construct_integers(10, 3, BoundMode::Tight)?;
    ensure(c.params.ball_radius == 38, || format!("tight N = {}", c.params.ball_radius))?;
    ensure(
        required_ball_radius(5, 2, BoundMode::Tight).ok() == Some(38),
        || "tight formula".into(),
    )?;
    check_integer_construction(&c, 10)?;
    let report = verify_construction(&c, 2).map_err(|e| e.to_string())?;
    let checks = [
        (38, length_inequality_holds(5, 2, 38), true),
        (78, length_inequality_holds(5, 2, 78), true),
        (37, length_inequality_holds(5, 2, 37), false),
    ];
    for (big, got, want) in checks {
        ensure(got == want, || format!("inequality at N = {big} gave {got}"))?;
    }
    Ok(format!(
        "N = 38 verifies ({} elements, depth(5) = {}); inequality holds at 38 and 78, fails at 37",
        report.elements.len(),
        report.witness_depth
    ))
}

fn criterion_3() -> Outcome {
    let c = construct_integers(10, 3, BoundMode::Paper)?;
    let a: Vec<i64> = c.generating_set.gens().elements().map(as_int).collect();
    let norms = integer_norms(&a, 5);
    let near = integer_neighbourhood(5, &a, 2);
    let big = c.params.ball_radius as usize;
    let mut passed = 0;
    let mut failures = Vec::new();
    for &g in &near {
        let element = Element::Int(g);
        // the straight word 1^g has length |g| <= 5 + 2 * 78 = n + dN
        let outcome = factorize(&c, &element, &ones(g)).and_then(|cert| {
            cert.validate(&c)?;
            Ok(cert)
        });
        match outcome {
            Ok(cert) if cert.degenerate => failures.push(format!("{g}: degenerate")),
            Ok(cert) => {
                let product: i64 = cert.factors.iter().map(as_int).sum();
                let ok = product == g
                    && cert.k >= 3
                    && cert.factor_words.iter().all(|w| w.len() <= big)
                    && norms.get(&g).is_some_and(|&nm| nm <= cert.k);
                if ok {
                    passed += 1;
                } else {
                    failures.push(format!("{g}: k = {}", cert.k));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    ensure(failures.is_empty(), || {
        format!("{}/{} certificates failed: {}", failures.len(), near.len(), failures.join("; "))
    })?;
    Ok(format!("{passed}/{} certificates validate (100%)", near.len()))
}

fn compare(gens: &GeneratingSet, label: &str) -> Result<(), String> {
    let oracle = depth_oracle(gens).map_err(|e| format!("{label}: {e}"))?;
    let order = gens.group().order().unwrap() as u32;
    let ball = Ball::build(gens, order, &Budget::default()).map_err(|e| format!("{label}: {e}"))?;
    let profile = depth_profile(&ball, order).map_err(|e| format!("{label}: {e}"))?;
    let bad = profile.mismatches(&oracle);
    ensure(bad.is_empty(), || format!("{label}: {} mismatches, first {}", bad.len(), bad[0]))
}

fn random_table_groups(count: usize) -> Vec<GeneratingSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut out = Vec::new();
    while out.len() < count {
        let degree = if out.len() % 2 == 0 { 4 } else { 5 };
        let perms: Vec<Vec<u32>> = (0..3)
            .map(|_| {
                let mut p: Vec<u32> = (0..degree).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let (table, ids) = TableGroup::from_permutations(&perms).unwrap();
        if table.order() > 64 {
            continue;
        }
        let group = Group::table(table);
        if let Ok(gens) = GeneratingSet::new(&group, ids.into_iter().map(Element::Table).collect()) {
            out.push(gens);
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for m in 2..=50u64 {
        let g = Group::cyclic(m).unwrap();
        compare(&GeneratingSet::parse(&g, "1").unwrap(), &format!("C{m} {{1}}"))?;
        cases += 1;
        // in C2 the element 2 is the identity
        if m > 2 {
            compare(&GeneratingSet::parse(&g, "1,2").unwrap(), &format!("C{m} {{1,2}}"))?;
            cases += 1;
        }
    }
    for m in 3..=12u64 {
        let g = Group::dihedral(m).unwrap();
        compare(&GeneratingSet::standard(&g).unwrap(), &format!("D{m}"))?;
        cases += 1;
    }
    let tables = random_table_groups(20);
    let orders: Vec<u64> = tables.iter().map(|t| t.group().order().unwrap()).collect();
    for (i, gens) in tables.iter().enumerate() {
        compare(gens, &format!("table group #{i}"))?;
        cases += 1;
    }
    Ok(format!("{cases} groups match element by element (table orders {orders:?})"))
}

fn criterion_5() -> Outcome {
    let s = zz1();
    let top = 3u64.pow(10);
    for m in 2..=top {
        let pi = QuotientMap::onto_cyclic(&s, m).map_err(|e| e.to_string())?;
        let report = diameter(pi.target_gens()).map_err(|e| e.to_string())?;
        ensure(report.diameter as u64 == m / 2, || {
            format!("diameter of C{m} is {}", report.diameter)
        })?;
        // floor(m/2) >= log_3(m)  <=>  3^floor(m/2) >= m
        ensure(counting_bound_check(&report, 1), || format!("counting bound fails at m = {m}"))?;
    }
    let family = QuotientFamily::Cyclic { max_order: top };
    let (pi, report) = find_quotient(&s, &family, 5, SearchMode::PaperSafe).map_err(|e| e.to_string())?;
    ensure(pi.target_order() == 243 && report.diameter == 121, || {
        format!("paper-safe gave m = {} diameter {}", pi.target_order(), report.diameter)
    })?;
    let (pi, _) = find_quotient(&s, &family, 5, SearchMode::Greedy).map_err(|e| e.to_string())?;
    ensure(pi.target_order() == 10, || format!("greedy gave m = {}", pi.target_order()))?;
    Ok(format!(
        "diameter floor(m/2) >= log3(m) for 2 <= m <= {top}; paper-safe m = 243 (diameter 121), greedy m = 10"
    ))
}

fn criterion_6() -> Outcome {
    let s = zz1();
    let ball = Ball::build(&s, 201, &Budget::default()).map_err(|e| e.to_string())?;
    for v in -200..=200i64 {
        let got = depth(&ball, &Element::Int(v), 5).map_err(|e| e.to_string())?;
        ensure(got == DepthValue::Finite(1), || format!("depth({v}) = {got}"))?;
    }
    let c10 = GeneratingSet::parse(&Group::cyclic(10).unwrap(), "1").unwrap();
    let ball = Ball::build(&c10, 5, &Budget::default()).map_err(|e| e.to_string())?;
    let got = depth(&ball, &Element::Residue(5), 100).map_err(|e| e.to_string())?;
    ensure(got == DepthValue::Infinite, || format!("C10 depth(5) = {got}"))?;
    Ok("Z depth 1 for |g| <= 200; C10 depth(5) = inf".into())
}

fn criterion_7() -> Outcome {
    ensure(
        required_ball_radius(11, 3, BoundMode::Paper).ok() == Some(66),
        || "paper N for n = 11, d = 3".into(),
    )?;
    let c = construct_integers(22, 4, BoundMode::Paper)?;
    let p = &c.params;
    ensure((p.d, p.n, p.ball_radius) == (3, 11, 66), || format!("params {p:?}"))?;
    ensure(c.witness.element == Element::Int(11), || format!("witness {}", c.witness.element))?;
    let (a, worst) = check_integer_construction(&c, 22)?;
    let report = verify_construction(&c, 3).map_err(|e| e.to_string())?;
    ensure(report.certified_depth == 4 && report.witness_depth.is_at_least(4), || {
        format!("certified {} depth {}", report.certified_depth, report.witness_depth)
    })?;
    Ok(format!(
        "N = 66, |A| = {}, |11|_A = 11, {} elements within 3 have norm <= {worst}, depth(11) = {}",
        a.len(),
        report.elements.len(),
        report.witness_depth
    ))
}

fn criterion_8() -> Outcome {
    let gens = GeneratingSet::standard(&Group::lamplighter()).unwrap();
    let oracle = depth_oracle_translated(&gens, 8).map_err(|e| e.to_string())?;
    let ball = Ball::build(&gens, 8, &Budget::default()).map_err(|e| e.to_string())?;
    let profile = depth_profile(&ball, 17).map_err(|e| e.to_string())?;
    let bad = profile.mismatches(&oracle);
    ensure(bad.is_empty(), || format!("{} elements disagree with the oracle", bad.len()))?;
    ensure(profile.entries.len() == LAMPLIGHTER_R8_ELEMENTS, || {
        format!("ball has {} elements", profile.entries.len())
    })?;
    ensure(
        profile.entries.iter().all(|e| matches!(e.depth, DepthValue::Finite(_))),
        || "some depth is not finite".into(),
    )?;
    let max = profile.max_finite();
    ensure(max == Some(LAMPLIGHTER_R8_MAX_FINITE_DEPTH), || {
        format!("max finite depth {max:?}, pinned {LAMPLIGHTER_R8_MAX_FINITE_DEPTH}")
    })?;
    Ok(format!(
        "{} elements match the oracle; max finite depth {LAMPLIGHTER_R8_MAX_FINITE_DEPTH} as pinned",
        profile.entries.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 construction over Z -> C10, paper bound", criterion_1, Duration::from_secs(60)),
        ("2 construction over Z -> C10, tight bound", criterion_2, Duration::from_secs(60)),
        ("3 certificates around the witness", criterion_3, Duration::from_secs(60)),
        ("4 depth oracle equivalence", criterion_4, Duration::from_secs(120)),
        ("5 counting bound and quotient search", criterion_5, Duration::from_secs(60)),
        ("6 baseline depths", criterion_6, Duration::from_secs(10)),
        ("7 construction over Z -> C22", criterion_7, Duration::from_secs(300)),
        ("8 lamplighter regression", criterion_8, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
