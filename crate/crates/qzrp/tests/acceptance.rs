//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed.

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use qzrp::exactalg::{gcd_is_unit, GcdVerdict};
use qzrp::macdonald::{check_conjecture_compressed, check_conjecture_refined, extensions, Embedding};
use qzrp::multiline::{multiline_weight, refusals_between, to_multiline};
use qzrp::observables::{compressed_labels, current_formula, density_formula};
use qzrp::shapes::partitions_up_to;
use qzrp::tabchain::{r_max, reflected_column, ring_prime, tau, tau_sequence};
use qzrp::tableaux::{dbar_ubar, down, dsum_usum, enumerate_fillings, proj, quinv, up, weight, Stat};
use qzrp::verify::{run_suite, Suite};
use qzrp::zrp::{enumerate_configs, rate_between, simulate, tazrp_weight, SimOptions, ZrpParams};
use qzrp::{Budget, Cell, Exponent, Filling, Partition, Poly, ZrpConfig};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn c(s: &str) -> ZrpConfig {
    ZrpConfig::parse(s).unwrap()
}

fn mono(t: i32, x: &[i32]) -> Poly {
    Poly::monomial(Exponent::new(t, x.to_vec()), BigInt::from(1))
}

fn poly(n: usize, terms: &[(i64, i32, &[i32])]) -> Poly {
    Poly::from_terms(n, terms.iter().map(|(k, t, x)| (Exponent::new(*t, x.to_vec()), BigInt::from(*k))))
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn state_count() -> Outcome {
    let k = enumerate_configs(&p("3,1,1"), 3).len();
    ensure(k == 18, || format!("{k} states"))?;
    Ok("18 states".into())
}

fn rates() -> Outcome {
    let from = c(".|311|.");
    ensure(rate_between(&from, &c(".|11|3")) == mono(0, &[0, -1, 0]), || "(.|311|.) -> (.|11|3)".into())?;
    let want = &mono(1, &[0, -1, 0]) + &mono(2, &[0, -1, 0]);
    ensure(rate_between(&from, &c(".|31|1")) == want, || "(.|311|.) -> (.|31|1)".into())?;
    let from = c(".|1|31");
    ensure(rate_between(&from, &c("3|1|1")) == mono(0, &[0, 0, -1]), || "species 3 from site 3".into())?;
    ensure(rate_between(&from, &c("1|1|3")) == mono(1, &[0, 0, -1]), || "species 1 from site 3".into())?;
    ensure(rate_between(&from, &c(".|.|311")) == mono(0, &[0, -1, 0]), || "species 1 from site 2".into())?;
    Ok("x2^-1, x2^-1(t+t^2); x3^-1, x3^-1 t, x2^-1".into())
}

fn figure_as_drawn() -> Filling {
    Filling::parse("3 2 / 1 3 1 3 3 / 1 1 2 3 2 3 3", 3).unwrap()
}

fn figure_weight() -> Outcome {
    let read = Filling::parse("3 2 / 1 3 1 3 3 / 1 1 2 1 2 3 3", 3).unwrap();
    ensure(read.shape() == &p("3,3,2,2,2,1,1"), || read.shape().to_string())?;
    let w = weight(&read);
    ensure(w == mono(12, &[5, 3, 6]), || format!("weight {w}"))?;
    Ok(format!("{w} (cell (1,4) read as 1; as drawn the weight is {})", weight(&figure_as_drawn())))
}

fn r_prime_example() -> Outcome {
    let xi = Filling::parse("2 / 3 1 3 1 2 3 / 2 1 2 2 1 1 2", 3).unwrap();
    ensure(xi.shape() == &p("3,2,2,2,2,2,1"), || xi.shape().to_string())?;
    let u = Cell::new(1, 3);
    let (sp, yp) = ring_prime(&xi, u);
    let want = Filling::parse("2 / 3 1 1 2 1 3 / 2 1 3 1 2 1 2", 3).unwrap();
    ensure(sp == want, || format!("R'_u(xi) = {sp}"))?;
    ensure(yp == Cell::new(2, 5), || format!("y' = {yp}"))?;
    let y = Cell::new(2, 3);
    let v_prime = reflected_column(xi.shape(), y);
    ensure(v_prime == 5, || format!("v' = {v_prime}"))?;
    ensure(tau_sequence(3, v_prime) == vec![3, 4], || "tau_y is not tau_4 tau_3".into())?;
    ensure(quinv(&xi) == 12, || format!("quinv(xi) = {}", quinv(&xi)))?;
    ensure(quinv(&sp) == 13, || format!("quinv(sigma') = {}", quinv(&sp)))?;
    ensure(down(&xi, u) == Stat::Value(1), || format!("down = {:?}", down(&xi, u)))?;
    ensure(up(&sp, yp) == Stat::Value(0), || format!("up = {:?}", up(&sp, yp)))?;
    Ok("quinv 12 -> 13, down 1, up 0, tau_4 tau_3 with v' = 5 (xi(1,1) read as 2)".into())
}

fn tau_example() -> Outcome {
    let s = Filling::parse("3 4 / 2 3 / 2 3 / 3 4 / 1 3", 4).unwrap();
    ensure(r_max(&s, 1) == 3, || format!("r_max = {}", r_max(&s, 1)))?;
    let want = Filling::parse("4 3 / 3 2 / 3 2 / 3 4 / 1 3", 4).unwrap();
    ensure(tau(&s, 1) == want, || format!("tau = {}", tau(&s, 1)))?;
    Ok("r_max = 3, rows 3-5 swapped".into())
}

fn fiber_example() -> Outcome {
    let shape = p("3,2");
    let sigma = Filling::parse("2 / 2 1", 2).unwrap();
    let exts = extensions(&shape, &sigma, Embedding::Bottom).map_err(|e| e.to_string())?;
    let mut ws: Vec<String> = exts.iter().map(|t| weight(t).to_string()).collect();
    ws.sort();
    let mut want: Vec<String> =
        [mono(1, &[3, 2]), mono(1, &[2, 3]), mono(2, &[2, 3]), mono(1, &[1, 4])].iter().map(ToString::to_string).collect();
    want.sort();
    ensure(ws == want, || format!("extension weights {ws:?}"))?;
    let w = c("2|3");
    ensure(exts.iter().all(|t| proj(t) == w), || "an extension leaves the fiber of (2|3)".into())?;
    let contribution = exts.iter().fold(Poly::zero(2), |a, t| a + weight(t));
    let h11 = poly(2, &[(1, 0, &[2, 0]), (1, 1, &[1, 1]), (1, 0, &[1, 1]), (1, 0, &[0, 2])]);
    ensure(contribution == &mono(1, &[1, 2]) * &h11, || format!("contribution {contribution}"))?;
    let full = tazrp_weight(&shape, 2, &w, &Budget::default()).map_err(|e| e.to_string())?;
    Ok(format!("Ext(sigma) contributes {contribution} to wt((2|3)); whole fiber {full}"))
}

fn multiline_example() -> Outcome {
    let s = Filling::parse("3 / 2 2 / 5 1 / 3 4 4", 5).unwrap();
    let m = to_multiline(&s);
    let counts: Vec<u32> = (2..=4).rev().map(|k| refusals_between(&m, k).unwrap()).collect();
    ensure(counts == vec![0, 1, 2], || format!("refusals {counts:?}"))?;
    let w = multiline_weight(&m).map_err(|e| e.to_string())?;
    ensure(w == mono(3, &[1, 2, 2, 2, 1]), || format!("weight {w}"))?;
    Ok(format!("refusals (0,1,2), weight {w}"))
}

fn updown_example() -> Outcome {
    let s = figure_as_drawn();
    let (d, u) = dbar_ubar(&s, 3);
    let want = poly(0, &[(1, 0, &[]), (1, 1, &[]), (1, 2, &[]), (3, 3, &[]), (1, 4, &[])]);
    ensure(d == want && u == want, || format!("Dbar = {d}, Ubar = {u}"))?;
    let (d0, u0) = dsum_usum(&s, 3);
    ensure(d0 == u0, || format!("D = {d0}, U = {u0}"))?;
    Ok(format!("Dbar = Ubar = {d}; without blocked cells D = U = {d0}"))
}

fn identity_suites() -> Outcome {
    let b = Budget::default();
    let mut cases: Vec<(Partition, usize)> = partitions_up_to(6).into_iter().flat_map(|l| (1..=3).map(move |n| (l.clone(), n))).collect();
    cases.push((p("2,2,1,1"), 4));
    let mut instances = 0u64;
    for (shape, n) in &cases {
        let point = qzrp::verify::default_point(*n);
        for suite in Suite::ALL {
            let r = run_suite(suite, shape, *n, &point, &b).map_err(|e| format!("{suite} on {shape} n={n}: {e}"))?;
            ensure(r.passed(), || r.summary())?;
            instances += r.checks.iter().map(|c| c.checked).sum::<u64>();
        }
    }
    Ok(format!("{} suites x {} (shape, n) cases, {instances} instances", Suite::ALL.len(), cases.len()))
}

fn stationary_law() -> Outcome {
    let b = Budget::default();
    let mut matched = 0;
    for shape in ["1", "2,1", "3,1,1", "2,2"] {
        for n in [2usize, 3] {
            let point = ZrpParams::from_ints(&[2, 3, 5][..n], 1, 3);
            let r = run_suite(Suite::Stationary, &p(shape), n, &point, &b).map_err(|e| e.to_string())?;
            ensure(r.passed(), || r.summary())?;
            matched += r.checks[0].checked;
        }
    }
    Ok(format!("{matched} probabilities equal as exact rationals"))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let shape = p("3,1,1");
    let params = ZrpParams::new(vec![2.0, 3.0, 5.0], 0.5);
    let tr = simulate(&shape, 3, &params, 2024, &SimOptions::new(1.5e5)).map_err(|e| e.to_string())?;
    ensure(tr.num_events >= 100_000, || format!("only {} events", tr.num_events))?;
    let lc = shape.compress();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (s, sc) in compressed_labels(&shape) {
        let j = current_formula(&lc, 3, sc).unwrap().eval::<f64>(&params.x, &params.t);
        for site in 1..=3 {
            let rho = density_formula(&lc, 3, sc, site).unwrap().eval::<f64>(&params.x, &params.t);
            for (est, exact, what) in [(tr.density(site, &[s]), rho, "density"), (tr.current(site, &[s]), j, "current")] {
                let z = (est.mean - exact).abs() / est.se;
                worst = worst.max(z);
                count += 1;
                ensure(est.within(exact, 4.0), || format!("{what} of species {s} at site {site}: {est:?} vs {exact}"))?;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} events, {count} estimates, max |z| = {worst:.2}, {secs:.1}s", tr.num_events))
}

fn conjecture_evidence() -> Outcome {
    let b = Budget::default();
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut log = fs::File::create(dir.join("compressed.jsonl")).map_err(|e| e.to_string())?;
    let mut compressed = 0;
    for shape in partitions_up_to(5).into_iter().filter(Partition::is_compressed) {
        for n in 2..=3 {
            let (v, ev) = check_conjecture_compressed(&shape, n, 8, 7, &b).map_err(|e| e.to_string())?;
            writeln!(log, "{}", serde_json::to_string(&ev).unwrap()).map_err(|e| e.to_string())?;
            ensure(!matches!(v, GcdVerdict::NonUnitWitness(_)), || format!("{shape} n={n}: {}", serde_json::to_string(&ev).unwrap()))?;
            compressed += 1;
        }
    }
    let mut log = fs::File::create(dir.join("refined.jsonl")).map_err(|e| e.to_string())?;
    let mut refined = 0;
    for shape in partitions_up_to(6).into_iter().filter(Partition::is_strict) {
        for n in 1..=3u32 {
            for sigma in enumerate_fillings(&shape.compress(), n) {
                let (ok, ev) = check_conjecture_refined(&shape, &sigma, &b).map_err(|e| e.to_string())?;
                writeln!(log, "{}", serde_json::to_string(&ev).unwrap()).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{shape} sigma = {sigma}"))?;
                refined += 1;
            }
        }
    }
    // the checker reports a shared factor with its witness
    let x1x2 = mono(0, &[1, 1]);
    let x1sq = mono(0, &[2, 0]);
    let witness = gcd_is_unit(&[x1x2, x1sq], 8, 1);
    ensure(witness == GcdVerdict::NonUnitWitness(mono(0, &[1, 0])), || format!("{witness:?}"))?;
    Ok(format!("{compressed} gcd instances, {refined} refined instances, logs in {}", dir.display()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("state count of TAZRP((3,1,1),3)", state_count),
        ("jump rates", rates),
        ("figure weight", figure_weight),
        ("R' transition example", r_prime_example),
        ("tau example", tau_example),
        ("fiber weight and extension table", fiber_example),
        ("multiline weight and refusals", multiline_example),
        ("up/down sums", updown_example),
        ("exhaustive identity suites", identity_suites),
        ("stationary law", stationary_law),
        ("Monte Carlo densities and currents", monte_carlo),
        ("conjecture evidence", conjecture_evidence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
