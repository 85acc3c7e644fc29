//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use nodal::chern::{pushforward_euler, tangent_chern, BaseClass, LineBundle, Mode};
use nodal::git::{
    check_weight_inequalities, find_diagonal_destabilizer, mu, verify_vanishing_consequence,
    weight_inequality_values, CoordinateSearch, WeightVector,
};
use nodal::ideal::{buchberger, normal_form, normal_form_with, GroebnerLimits, Ideal};
use nodal::poly::{rat, Form, Poly};
use nodal::random::{
    random_admissible_weights, random_form, random_form_on, random_form_with_node,
    random_invertible,
};
use nodal::singularity::{classify, degenerate_witness};
use nodal::stabilizer::{monomial_stabilizer_count, order_bound};
use nodal::SingularityClass;

type Outcome = Result<String, String>;

fn check(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn zero_locus() -> Outcome {
    let start = Instant::now();
    let mut zeros = Vec::new();
    for n in 1..=8usize {
        for d in 1..=12i64 {
            let p = pushforward_euler(n, LineBundle::Degree(d)).map_err(|e| e.to_string())?;
            let expected = BaseClass::hyperplane(n).scale(&BigInt::from(n as i64 * d - 2 * (n as i64 + 1)));
            check(p == expected, || format!("(n, d) = ({n}, {d}): got {p}, expected {expected}"))?;
            if p.is_zero() {
                zeros.push((n, d));
            }
        }
    }
    check(zeros == [(1, 4), (2, 3)], || format!("vanishing at {zeros:?}"))?;
    within(start.elapsed(), Duration::from_secs(1), "sweep")?;
    Ok(format!("96 pairs exact, zeros at {zeros:?}, {:?}", start.elapsed()))
}

fn formal_identity() -> Outcome {
    let start = Instant::now();
    for n in 1..=5usize {
        let p = pushforward_euler(n, LineBundle::Formal).map_err(|e| e.to_string())?;
        let c1 = &tangent_chern(n, Mode::Formal)[1];
        let expected = BaseClass::line_class(n)
            .scale(&BigInt::from(n))
            .sub(&c1.scale(&BigInt::from(2)));
        check(p == expected, || format!("n = {n}: got {p}, expected {expected}"))?;
    }
    within(start.elapsed(), Duration::from_secs(10), "formal identity")?;
    Ok(format!("n = 1..5 exact, {:?}", start.elapsed()))
}

fn catalog() -> Outcome {
    let mut cases: Vec<(String, Form, SingularityClass)> = Vec::new();
    for n in [2usize, 3] {
        for d in [3u32, 4, 5] {
            cases.push((format!("Fermat({n},{d})"), common::fermat(n, d), SingularityClass::Smooth));
            let mut e0 = vec![rat(0); n + 1];
            e0[0] = rat(1);
            let w = degenerate_witness(n, d, &e0).map_err(|e| e.to_string())?;
            cases.push((format!("witness {w}"), w, SingularityClass::Degenerate));
        }
    }
    cases.push(("z0*z1*z2".into(), common::form("z0*z1*z2", 2, 3), SingularityClass::Nodal));
    cases.push((
        "nodal cubic".into(),
        common::form("z1^2*z2 - z0^3 - z0^2*z2", 2, 3),
        SingularityClass::Nodal,
    ));
    cases.push((
        "cuspidal cubic".into(),
        common::form("z1^2*z2 - z0^3", 2, 3),
        SingularityClass::Degenerate,
    ));
    let mut slowest = Duration::ZERO;
    for (name, f, expected) in &cases {
        let start = Instant::now();
        let class = classify(f).map_err(|e| format!("{name}: {e}"))?.class;
        let elapsed = start.elapsed();
        check(class == *expected, || format!("{name}: got {class}, expected {expected}"))?;
        within(elapsed, Duration::from_secs(60), name)?;
        slowest = slowest.max(elapsed);
    }
    Ok(format!("{} cases, slowest {slowest:?}", cases.len()))
}

fn destabilizer_implies_degenerate() -> Outcome {
    let mut rng = common::rng(4);
    let densities = [0.12, 0.2, 0.35, 0.6, 1.0];
    let mut found = 0;
    for i in 0..100 {
        let d = if i % 2 == 0 { 5 } else { 6 };
        let f = random_form(2, d, 3, densities[i % densities.len()], &mut rng);
        let outcome = find_diagonal_destabilizer(&f, CoordinateSearch::AllPermutations)
            .map_err(|e| format!("{f}: {e}"))?;
        if let Some(cert) = outcome.certificate {
            found += 1;
            let report = verify_vanishing_consequence(&f, &cert).map_err(|e| format!("{f}: {e}"))?;
            check(report.passed, || format!("{f}: {report:?}"))?;
        }
    }
    check(found > 0, || "no destabilized form in the sample".into())?;
    Ok(format!("{found}/100 destabilized, all verified degenerate"))
}

fn contrapositive_sampling() -> Outcome {
    let mut rng = common::rng(5);
    let (mut smooth, mut nodal) = (0, 0);
    let mut i = 0usize;
    while smooth + nodal < 100 && i < 200 {
        let d = [4u32, 5, 6][i % 3];
        let f = if i % 2 == 0 {
            random_form(2, d, 3, 0.8, &mut rng)
        } else {
            let g = random_invertible(3, &mut rng);
            random_form_with_node(2, d, 3, &mut rng).act(&g).map_err(|e| e.to_string())?
        };
        i += 1;
        let class = classify(&f).map_err(|e| format!("{f}: {e}"))?.class;
        if class == SingularityClass::Degenerate {
            continue;
        }
        for search in [
            CoordinateSearch::AllPermutations,
            CoordinateSearch::Sampled { count: 20, seed: i as u64 },
        ] {
            let outcome = find_diagonal_destabilizer(&f, search).map_err(|e| e.to_string())?;
            check(outcome.certificate.is_none(), || {
                format!("{class} form {f} destabilized: {:?}", outcome.certificate)
            })?;
        }
        match class {
            SingularityClass::Smooth => smooth += 1,
            _ => nodal += 1,
        }
    }
    check(smooth + nodal == 100, || format!("only {} usable forms", smooth + nodal))?;
    Ok(format!("{smooth} smooth + {nodal} nodal, none destabilized"))
}

fn inequality_families() -> Outcome {
    let mut rng = common::rng(6);
    let mut total = 0;
    for n in 1..=4usize {
        for d in (n as u32 + 2)..=(n as u32 + 6) {
            for _ in 0..1000 {
                let r = WeightVector::new(random_admissible_weights(n + 1, 20, &mut rng))
                    .map_err(|e| e.to_string())?;
                let ok = check_weight_inequalities(&r, n, d).map_err(|e| e.to_string())?;
                check(ok, || format!("(n, d) = ({n}, {d}), r = {:?}", r.as_slice()))?;
                total += 1;
            }
        }
    }
    let sharp = WeightVector::new(vec![1, 0, -1]).map_err(|e| e.to_string())?;
    let values = weight_inequality_values(&sharp, 3);
    check(values.mixed.iter().any(|(_, v)| *v == 0), || format!("{values:?}"))?;
    check(check_weight_inequalities(&sharp, 2, 3).is_err(), || "d = n + 1 accepted".into())?;
    Ok(format!("{total} vectors strict; (1,0,-1) at d = 3 gives 0"))
}

fn feasibility_oracle() -> Outcome {
    let mut rng = common::rng(7);
    let vectors: Vec<Vec<Vec<i64>>> = (0..=4)
        .map(|nvars| if nvars < 2 { Vec::new() } else { common::trace_free_vectors(nvars, 6) })
        .collect();
    let (mut both, mut neither, mut beyond) = (0, 0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(2..=5u32);
        let support = common::random_support(n + 1, d, rng.gen_range(0.1..0.6), &mut rng);
        let f = random_form_on(n, d, &support, 3, &mut rng);
        let cert = find_diagonal_destabilizer(&f, CoordinateSearch::AllPermutations)
            .map_err(|e| e.to_string())?
            .certificate;
        match (cert, common::brute_force_destabilizer(&support, &vectors[n + 1])) {
            (Some(_), Some(_)) => both += 1,
            (None, None) => neither += 1,
            (None, Some(r)) => return Err(format!("{f}: brute force found {r:?}, search none")),
            (Some(c), None) => {
                let value = mu(&c.frame_form(&f).map_err(|e| e.to_string())?, &c.weight)
                    .map_err(|e| e.to_string())?;
                check(value <= 0, || format!("{f}: certificate recomputes to {value}"))?;
                beyond += 1;
            }
        }
    }
    Ok(format!("{both} agree found, {neither} agree none, {beyond} beyond |r| <= 6 re-verified"))
}

fn bounds_and_divisibility() -> Outcome {
    let start = Instant::now();
    for (n, d, expected) in [(2usize, 4u32, 672), (3, 3, 3240), (2, 3, 54)] {
        let b = order_bound(n, d).map_err(|e| e.to_string())?;
        check(b == BigInt::from(expected), || format!("order_bound({n}, {d}) = {b}"))?;
    }
    let c24 = monomial_stabilizer_count(&common::fermat(2, 4), 4).map_err(|e| e.to_string())?;
    check(c24 == 96, || format!("Fermat(2,4) count {c24}"))?;
    check(672 % c24 == 0, || "96 does not divide 672".into())?;
    let c33 = monomial_stabilizer_count(&common::fermat(3, 3), 3).map_err(|e| e.to_string())?;
    check(3240 % c33 == 0, || format!("Fermat(3,3) count {c33} does not divide 3240"))?;
    within(start.elapsed(), Duration::from_secs(10), "bounds")?;
    Ok(format!("672, 3240, 54; 96 | 672; {c33} | 3240; {:?}", start.elapsed()))
}

fn euler_identities(rng: &mut impl Rng) -> Result<usize, String> {
    let mut count = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(2..=5u32);
        let f = random_form(n, d, 5, 0.6, rng);
        let mut sum = Poly::zero(n + 1);
        for k in 0..=n {
            sum = &sum + &(&Poly::variable(n + 1, k) * f.partial(k).poly());
        }
        check(sum == f.poly().scale(&rat(d as i64)), || format!("Euler identity fails for {f}"))?;
        let p: Vec<_> = (0..=n).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let hp = f.hessian_at(&p).map_err(|e| e.to_string())?.mul_vec(&p);
        let grad = f.gradient_at(&p).map_err(|e| e.to_string())?;
        let scaled: Vec<_> = grad.iter().map(|g| g * rat(d as i64 - 1)).collect();
        check(hp == scaled, || format!("Hessian identity fails for {f}"))?;
        count += 1;
    }
    Ok(count)
}

fn groebner_properties(rng: &mut impl Rng) -> Result<(usize, usize), String> {
    let limits = GroebnerLimits::default();
    let (mut confluent, mut grid) = (0, 0);
    let mut attempts = 0;
    while confluent < 100 {
        attempts += 1;
        let n = rng.gen_range(1..=2usize);
        let gens: Vec<Poly> = (0..rng.gen_range(1..=n + 2))
            .map(|_| random_form(n, rng.gen_range(1..=3), 3, 0.4, rng).into_poly())
            .collect();
        let ideal = Ideal::new(n, gens.clone()).map_err(|e| e.to_string())?;
        let gb = buchberger(&ideal, &limits).map_err(|e| e.to_string())?;
        let again = buchberger(&Ideal::new(n, gb.basis().to_vec()).map_err(|e| e.to_string())?, &limits)
            .map_err(|e| e.to_string())?;
        check(again == gb, || format!("not idempotent on {gens:?}"))?;
        if gb.only_origin().map_err(|e| e.to_string())? {
            let zero = common::grid_points(n + 1).into_iter().find(|p| {
                p.iter().any(|x| *x != rat(0)) && gens.iter().all(|g| g.evaluate(p) == Ok(rat(0)))
            });
            check(zero.is_none(), || format!("only_origin but zero {zero:?} for {gens:?}"))?;
            grid += 1;
        }
        if gb.is_unit() {
            continue;
        }
        let f = random_form(n, rng.gen_range(2..=4), 5, 0.5, rng).into_poly();
        let reference = normal_form(&f, gb.basis()).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let r = normal_form_with(&f, gb.basis(), |c| c[rng.gen_range(0..c.len())])
                .map_err(|e| e.to_string())?;
            check(r == reference, || format!("normal form depends on choices for {gens:?}"))?;
        }
        confluent += 1;
        if attempts > 1000 {
            return Err("too many unit ideals".into());
        }
    }
    Ok((confluent, grid))
}

fn equivariance(rng: &mut impl Rng) -> Result<usize, String> {
    for i in 0..50 {
        let d = rng.gen_range(3..=4u32);
        let f = match i % 3 {
            0 => random_form(2, d, 3, 0.7, rng),
            1 => random_form_with_node(2, d, 3, rng),
            _ => nodal::random::random_destabilized_form(2, d, 3, rng).0,
        };
        let g = random_invertible(3, rng);
        let before = classify(&f).map_err(|e| e.to_string())?.class;
        let moved = f.act(&g).map_err(|e| e.to_string())?;
        let after = classify(&moved).map_err(|e| e.to_string())?.class;
        check(before == after, || format!("{f}: {before} vs {after} after {g}"))?;
    }
    Ok(50)
}

fn cli_determinism_and_schemas() -> Result<(), String> {
    let input = "z0*z1*z2\nz0^3 + z1^3 + z2^3\nz1^2*z2 - z0^3\nnot a form\nz1^2*z2 - z0^3 - z0^2*z2\nz0^3 - z1^3 + 2*z0*z1*z2\n";
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        use std::io::Write;
        let mut child = Command::new(env!("CARGO_BIN_EXE_nodal"))
            .args(args)
            .stdin(std::process::Stdio::piped())
            .stdout(std::process::Stdio::piped())
            .spawn()
            .map_err(|e| e.to_string())?;
        child.stdin.take().unwrap().write_all(input.as_bytes()).map_err(|e| e.to_string())?;
        Ok(child.wait_with_output().map_err(|e| e.to_string())?.stdout)
    };
    let schema_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    for (name, args) in [
        ("classify", vec!["classify", "--n", "2", "--d", "3", "--input", "-"]),
        ("stability", vec!["stability", "--n", "2", "--d", "3", "--input", "-", "--coordinate-search", "sample:4", "--seed", "9"]),
    ] {
        let one = run(&[args.clone(), vec!["--jobs", "1"]].concat())?;
        let four = run(&[args.clone(), vec!["--jobs", "4"]].concat())?;
        check(one == four, || format!("{name}: output depends on --jobs"))?;
        let text = std::fs::read_to_string(schema_dir.join(format!("{name}.schema.json"))).map_err(|e| e.to_string())?;
        let schema: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
        let lines = String::from_utf8(one).map_err(|e| e.to_string())?;
        check(lines.lines().count() == input.lines().count(), || format!("{name}: record count"))?;
        for line in lines.lines() {
            let value: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
            check(validator.is_valid(&value), || format!("{name}: schema rejects {line}"))?;
        }
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut rng = common::rng(9);
    let euler = euler_identities(&mut rng)?;
    let (confluent, grid) = groebner_properties(&mut rng)?;
    let pairs = equivariance(&mut rng)?;
    cli_determinism_and_schemas()?;
    Ok(format!(
        "{euler} Euler checks, {confluent} confluence/idempotence runs, {grid} grid-oracle ideals, {pairs} GL pairs, CLI deterministic and schema-valid"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("pushforward zero locus", zero_locus),
        ("formal pushforward identity", formal_identity),
        ("classification catalog", catalog),
        ("destabilizer implies degenerate", destabilizer_implies_degenerate),
        ("contrapositive sampling", contrapositive_sampling),
        ("weight inequality families", inequality_families),
        ("feasibility oracle equivalence", feasibility_oracle),
        ("bound values and divisibility", bounds_and_divisibility),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{:?}]", i + 1, start.elapsed()),
            Err(detail) => {
                failures += 1;
                println!("FAIL {} {name}: {detail} [{:?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
