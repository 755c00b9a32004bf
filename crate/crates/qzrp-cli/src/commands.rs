use std::fs;
use std::io;
use std::path::PathBuf;

use qzrp::exactalg::GcdVerdict;
use qzrp::macdonald::{check_conjecture_compressed, check_conjecture_refined, htilde_q1_factorized, htilde_q1_monomial, htilde_q1_tableaux};
use qzrp::multiline::{from_multiline, multiline_fiber_weight, multiline_jump, multiline_weight, refusals_between, to_multiline, Jump, MultilineDiagram};
use qzrp::observables::{compressed_labels, current_formula, density_formula};
use qzrp::shapes::partitions_up_to;
use qzrp::tabchain::build_generator;
use qzrp::tableaux::{enumerate_fillings, filling_count};
use qzrp::verify::{default_point, parse_suites, run_suite};
use qzrp::zrp::{enumerate_configs, simulate, stationary_exact, tazrp_weights, SimOptions, ZrpParams};
use qzrp::{Budget, Filling, Partition, Rational};
use serde_json::json;

use crate::args::{Command, Export, Form, Kind, Report, ShapeArgs, Which};
use crate::manifest::{Point, RunManifest};

pub enum Failure {
    /// An identity or conjecture check failed; outputs were still written.
    Assertion(String),
    Lib(qzrp::Error),
    Usage(String),
    Io(io::Error),
}

impl From<qzrp::Error> for Failure {
    fn from(e: qzrp::Error) -> Self {
        match e {
            qzrp::Error::Parse(m) => Failure::Usage(m),
            other => Failure::Lib(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

pub type Outcome = Result<String, Failure>;

pub struct Ctx {
    pub out: Option<PathBuf>,
    pub budget: Budget,
    pub manifest: RunManifest,
}

impl Ctx {
    /// Print to stdout and, with `--out`, also write `out/name`.
    fn emit(&mut self, name: &str, content: &str) -> io::Result<()> {
        print!("{content}");
        self.write_file(name, content)
    }

    fn write_file(&mut self, name: &str, content: &str) -> io::Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), content)?;
            self.manifest.outputs.push(name.to_string());
        }
        Ok(())
    }

    fn shape(&mut self, sh: &ShapeArgs) -> Result<Partition, Failure> {
        let shape = parse_shape(&sh.shape)?;
        if sh.n == 0 {
            return Err(Failure::Usage("--n must be at least 1".into()));
        }
        self.manifest.shape = Some(shape.to_string());
        self.manifest.n = Some(sh.n);
        Ok(shape)
    }

    fn point(&mut self, at: &Option<Vec<String>>, n: usize) -> Result<ZrpParams, Failure> {
        let p = match at {
            Some(tokens) => parse_point(tokens, n)?,
            None => default_point(n),
        };
        p.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        self.manifest.point = Some(Point { x: p.x.iter().map(ToString::to_string).collect(), t: p.t.to_string() });
        Ok(p)
    }
}

fn parse_shape(s: &str) -> Result<Partition, Failure> {
    s.parse().map_err(|e: qzrp::Error| Failure::Usage(format!("bad shape {s:?}: {e}")))
}

fn parse_fraction(s: &str) -> Result<Rational, Failure> {
    s.trim().parse().map_err(|_| Failure::Usage(format!("{s:?} is not an exact fraction such as 1/3")))
}

/// Tokens `x=a,b,c` and `t=p/q`. Missing pieces fall back to the default point.
pub fn parse_point(tokens: &[String], n: usize) -> Result<ZrpParams, Failure> {
    let mut p = default_point(n);
    for tok in tokens.iter().flat_map(|t| t.split_whitespace()) {
        if let Some(v) = tok.strip_prefix("x=") {
            p.x = v.split(',').map(parse_fraction).collect::<Result<_, _>>()?;
        } else if let Some(v) = tok.strip_prefix("t=") {
            p.t = parse_fraction(v)?;
        } else {
            return Err(Failure::Usage(format!("point token {tok:?} is neither x=... nor t=...")));
        }
    }
    if p.x.len() != n {
        return Err(Failure::Usage(format!("{} x-values for {n} sites", p.x.len())));
    }
    Ok(p)
}

/// Decimal or fraction.
fn parse_real(s: &str) -> Result<f64, Failure> {
    use num_traits::ToPrimitive;
    if let Ok(r) = s.trim().parse::<Rational>() {
        return r.to_f64().ok_or_else(|| Failure::Usage(format!("{s:?} out of range")));
    }
    s.trim().parse().map_err(|_| Failure::Usage(format!("{s:?} is not a number")))
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io::Error::from)?;
    for r in rows {
        w.write_record(&r).map_err(io::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn json_pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Outcome {
    ctx.manifest.command = command_name(cmd).to_string();
    match cmd {
        Command::Enumerate { sh, kind } => enumerate(ctx, sh, *kind),
        Command::Macdonald { sh, form } => macdonald(ctx, sh, *form),
        Command::Weights { sh, at } => weights(ctx, sh, at),
        Command::Verify { suite, sh, at } => verify(ctx, suite, sh, at),
        Command::Simulate { sh, x, t, seed, horizon, report, events } => {
            simulate_cmd(ctx, sh, x, t, *seed, *horizon, *report, *events)
        }
        Command::Conjecture { which, shape, n, up_to, trials, seed, all_sigma, sigma } => {
            conjecture(ctx, *which, shape.as_deref(), *n, *up_to, *trials, *seed, *all_sigma, sigma.as_deref())
        }
        Command::Multiline { n, filling, diagram, jump } => multiline(ctx, *n, filling.as_deref(), diagram.as_deref(), jump.as_deref()),
        Command::Observables { sh, at } => observables(ctx, sh, at),
        Command::Export { sh, what, at } => export(ctx, sh, *what, at),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Enumerate { .. } => "enumerate",
        Command::Macdonald { .. } => "macdonald",
        Command::Weights { .. } => "weights",
        Command::Verify { .. } => "verify",
        Command::Simulate { .. } => "simulate",
        Command::Conjecture { .. } => "conjecture",
        Command::Multiline { .. } => "multiline",
        Command::Observables { .. } => "observables",
        Command::Export { .. } => "export",
    }
}

fn enumerate(ctx: &mut Ctx, sh: &ShapeArgs, kind: Kind) -> Outcome {
    let shape = ctx.shape(sh)?;
    match kind {
        Kind::Configs => {
            let cs = enumerate_configs(&shape, sh.n);
            ctx.emit("configs.csv", &csv_string(&["config"], cs.iter().map(|c| vec![c.to_string()]))?)?;
            Ok(format!("{} configurations", cs.len()))
        }
        Kind::Fillings => {
            ctx.budget.check_fillings(sh.n as u32, shape.size())?;
            let rows = enumerate_fillings(&shape, sh.n as u32).map(|f| vec![f.to_string()]);
            ctx.emit("fillings.csv", &csv_string(&["filling"], rows)?)?;
            Ok(format!("{} fillings", filling_count(&shape, sh.n as u32)))
        }
    }
}

fn macdonald(ctx: &mut Ctx, sh: &ShapeArgs, form: Form) -> Outcome {
    let shape = ctx.shape(sh)?;
    let m = match form {
        Form::Tableaux => htilde_q1_tableaux(&shape, sh.n, &ctx.budget)?,
        Form::Factorized => htilde_q1_factorized(&shape, sh.n),
        Form::Monomial => htilde_q1_monomial(&shape, sh.n),
    };
    let text = m.poly.to_string();
    let out = json!({ "shape": shape.to_string(), "n": sh.n, "provenance": m.provenance, "text": text, "terms": m.poly });
    ctx.emit("macdonald.json", &json_pretty(&out))?;
    Ok(format!("H~_{shape} with {} terms", m.poly.terms().count()))
}

fn weights(ctx: &mut Ctx, sh: &ShapeArgs, at: &Option<Vec<String>>) -> Outcome {
    let shape = ctx.shape(sh)?;
    let ws = tazrp_weights(&shape, sh.n, &ctx.budget)?;
    let body = match at {
        None => csv_string(&["config", "weight"], ws.iter().map(|(w, p)| vec![w.to_string(), p.to_string()]))?,
        Some(_) => {
            let point = ctx.point(at, sh.n)?;
            let vals: Vec<Rational> = ws.values().map(|p| p.eval(&point.x, &point.t)).collect();
            let z: Rational = vals.iter().cloned().sum();
            let rows = ws.iter().zip(&vals).map(|((w, p), v)| vec![w.to_string(), p.to_string(), (v / &z).to_string()]);
            csv_string(&["config", "weight", "probability"], rows)?
        }
    };
    ctx.emit("weights.csv", &body)?;
    Ok(format!("{} configurations", ws.len()))
}

fn verify(ctx: &mut Ctx, suite: &str, sh: &ShapeArgs, at: &Option<Vec<String>>) -> Outcome {
    let suites = parse_suites(suite).map_err(|e| Failure::Usage(e.to_string()))?;
    let shape = ctx.shape(sh)?;
    let point = ctx.point(at, sh.n)?;
    let mut reports = Vec::new();
    for s in suites {
        let r = run_suite(s, &shape, sh.n, &point, &ctx.budget)?;
        eprintln!("{}", r.summary());
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    let out = json!({
        "shape": shape.to_string(),
        "n": sh.n,
        "point": ctx.manifest.point,
        "passed": passed,
        "suites": reports,
    });
    ctx.emit("verify.json", &json_pretty(&out))?;
    let total: u64 = reports.iter().flat_map(|r| &r.checks).map(|c| c.checked).sum();
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.to_string()).collect();
    if passed {
        Ok(format!("{} suites, {total} instances", reports.len()))
    } else {
        Err(Failure::Assertion(format!("failed suites: {}", failed.join(","))))
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(ctx: &mut Ctx, sh: &ShapeArgs, x: &[String], t: &str, seed: u64, horizon: f64, report: Report, events: bool) -> Outcome {
    let shape = ctx.shape(sh)?;
    let n = sh.n;
    let params = ZrpParams::new(x.iter().map(|v| parse_real(v)).collect::<Result<Vec<f64>, _>>()?, parse_real(t)?);
    ctx.manifest.point = Some(Point { x: x.to_vec(), t: t.to_string() });
    ctx.manifest.seed = Some(seed);
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Failure::Usage("--horizon must be positive".into()));
    }
    let mut opts = SimOptions::new(horizon);
    opts.record_events = events;
    let tr = simulate(&shape, n, &params, seed, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
    let compressed = shape.compress();
    let mut rows = Vec::new();
    let mut within = 0;
    for (s, sc) in compressed_labels(&shape) {
        let current = current_formula(&compressed, n, sc)?.eval::<f64>(&params.x, &params.t);
        for site in 1..=n {
            let (est, exact) = match report {
                Report::Density => (tr.density(site, &[s]), density_formula(&compressed, n, sc, site)?.eval::<f64>(&params.x, &params.t)),
                Report::Current => (tr.current(site, &[s]), current),
            };
            let z = if est.se > 0.0 { (est.mean - exact) / est.se } else { 0.0 };
            let ok = est.within(exact, 4.0);
            within += ok as usize;
            rows.push(vec![
                format!("{report:?}").to_lowercase(),
                s.to_string(),
                site.to_string(),
                est.mean.to_string(),
                est.se.to_string(),
                exact.to_string(),
                z.to_string(),
                ok.to_string(),
            ]);
        }
    }
    let total = rows.len();
    ctx.emit("simulate.csv", &csv_string(&["report", "species", "site", "estimate", "se", "exact", "z", "within_4se"], rows)?)?;
    if events {
        ctx.write_file("events.csv", &tr.events_csv())?;
    }
    Ok(format!("{} events; {within}/{total} estimates within 4 SE", tr.num_events))
}

#[allow(clippy::too_many_arguments)]
fn conjecture(
    ctx: &mut Ctx,
    which: Which,
    shape: Option<&str>,
    n: usize,
    up_to: Option<u32>,
    trials: usize,
    seed: u64,
    all_sigma: bool,
    sigma: Option<&str>,
) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    ctx.manifest.n = Some(n);
    ctx.manifest.seed = Some(seed);
    let instances: Vec<(Partition, usize)> = match (shape, up_to) {
        (Some(s), None) => {
            let p = parse_shape(s)?;
            ctx.manifest.shape = Some(p.to_string());
            vec![(p, n)]
        }
        (None, Some(m)) => {
            let keep = |p: &Partition| !p.is_empty() && if which == Which::Compressed { p.is_compressed() } else { p.is_strict() };
            let lo = if which == Which::Compressed { 2 } else { 1 };
            partitions_up_to(m).into_iter().filter(keep).flat_map(|p| (lo..=n).map(move |k| (p.clone(), k))).collect()
        }
        _ => return Err(Failure::Usage("give exactly one of --shape and --up-to".into())),
    };
    let mut log = String::new();
    let mut checked = 0usize;
    let mut halted = None;
    'outer: for (p, k) in &instances {
        match which {
            Which::Compressed => {
                let (verdict, ev) = check_conjecture_compressed(p, *k, trials, seed, &ctx.budget).map_err(usage_if_contract)?;
                log.push_str(&json_line(&ev));
                checked += 1;
                if let GcdVerdict::NonUnitWitness(w) = verdict {
                    halted = Some(format!("{p} n={k}: common factor {w}"));
                    break 'outer;
                }
            }
            Which::Refined => {
                let base = p.compress();
                let sigmas: Vec<Filling> = match sigma {
                    Some(s) if up_to.is_none() => vec![Filling::parse(s, *k as u32).map_err(|e| Failure::Usage(e.to_string()))?],
                    _ if all_sigma || up_to.is_some() => {
                        ctx.budget.check_fillings(*k as u32, base.size())?;
                        enumerate_fillings(&base, *k as u32).collect()
                    }
                    _ => return Err(Failure::Usage("refined needs --sigma or --all-sigma".into())),
                };
                for s in sigmas {
                    let (ok, ev) = check_conjecture_refined(p, &s, &ctx.budget).map_err(usage_if_contract)?;
                    log.push_str(&json_line(&json!({ "n": k, "holds": ok, "evidence": ev })));
                    checked += 1;
                    if !ok {
                        halted = Some(format!("{p} n={k}: sigma = {s}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    ctx.emit("evidence.jsonl", &log)?;
    match halted {
        Some(w) => {
            eprintln!("counterexample: {w}");
            Err(Failure::Assertion(format!("counterexample after {checked} instances: {w}")))
        }
        None => Ok(format!("{checked} instances, no counterexample")),
    }
}

fn usage_if_contract(e: qzrp::Error) -> Failure {
    match e {
        qzrp::Error::Contract(m) | qzrp::Error::Parse(m) => Failure::Usage(m),
        other => Failure::Lib(other),
    }
}

fn multiline(ctx: &mut Ctx, n: usize, filling: Option<&str>, diagram: Option<&str>, jump: Option<&str>) -> Outcome {
    let m = match (filling, diagram) {
        (Some(f), _) => to_multiline(&Filling::parse(f, n as u32).map_err(|e| Failure::Usage(e.to_string()))?),
        (None, Some(d)) => MultilineDiagram::parse(&d.replace(';', "\n")).map_err(|e| Failure::Usage(e.to_string()))?,
        (None, None) => return Err(Failure::Usage("give --filling or --diagram".into())),
    };
    if m.n() != n {
        return Err(Failure::Usage(format!("diagram has {} sites, --n is {n}", m.n())));
    }
    let shape = m.shape();
    ctx.manifest.shape = Some(shape.to_string());
    ctx.manifest.n = Some(n);
    let rows: Vec<String> = m.rows_bottom_up().iter().rev().map(ToString::to_string).collect();
    let mut out = json!({ "shape": shape.to_string(), "n": n, "rows_top_down": rows, "strict": shape.is_strict() });
    let summary;
    if shape.is_strict() {
        let per_row: Vec<_> = (2..=m.height()).rev().map(|k| json!({ "rows": [k, k - 1], "refusals": refusals_between(&m, k).expect("strict") })).collect();
        let w = multiline_weight(&m)?;
        out["refusals"] = json!(per_row);
        out["weight"] = json!(w.to_string());
        out["filling"] = json!(from_multiline(&m)?.to_string());
        summary = format!("weight {w}");
    } else {
        let w = multiline_fiber_weight(&m, &ctx.budget)?;
        out["fiber_weight"] = json!(w.to_string());
        summary = format!("fiber weight {w}");
    }
    if let Some(j) = jump {
        let nums: Vec<u64> = j.split(',').map(|v| v.trim().parse().map_err(|_| Failure::Usage(format!("bad jump field {v:?}")))).collect::<Result<_, _>>()?;
        if nums.len() != 3 {
            return Err(Failure::Usage("--jump takes row,site,species".into()));
        }
        let res = multiline_jump(&m, nums[0] as u32, nums[1] as usize, nums[2] as u32).map_err(usage_if_contract)?;
        out["jump"] = match res {
            Jump::Forbidden => json!({ "forbidden": true }),
            Jump::Moved { to, rate } => json!({
                "forbidden": false,
                "rows_top_down": to.rows_bottom_up().iter().rev().map(ToString::to_string).collect::<Vec<_>>(),
                "rate": rate.to_string(),
            }),
        };
    }
    ctx.emit("multiline.json", &json_pretty(&out))?;
    Ok(summary)
}

fn observables(ctx: &mut Ctx, sh: &ShapeArgs, at: &Option<Vec<String>>) -> Outcome {
    let shape = ctx.shape(sh)?;
    let point = match at {
        Some(_) => Some(ctx.point(at, sh.n)?),
        None => None,
    };
    let compressed = shape.compress();
    let mut species = Vec::new();
    for (s, sc) in compressed_labels(&shape) {
        let mut dens = Vec::new();
        for site in 1..=sh.n {
            let f = density_formula(&compressed, sh.n, sc, site)?;
            let value = point.as_ref().map(|p| f.eval::<Rational>(&p.x, &p.t).to_string());
            dens.push(json!({ "site": site, "formula": f.to_string(), "value": value }));
        }
        let j = current_formula(&compressed, sh.n, sc)?;
        let jv = point.as_ref().map(|p| j.eval::<Rational>(&p.x, &p.t).to_string());
        species.push(json!({ "species": s, "density": dens, "current": { "formula": j.to_string(), "value": jv } }));
    }
    let out = json!({ "shape": shape.to_string(), "n": sh.n, "point": ctx.manifest.point, "species": species });
    ctx.emit("observables.json", &json_pretty(&out))?;
    Ok(format!("{} species", species.len()))
}

fn export(ctx: &mut Ctx, sh: &ShapeArgs, what: Export, at: &Option<Vec<String>>) -> Outcome {
    if ctx.out.is_none() {
        return Err(Failure::Usage("export needs --out".into()));
    }
    let shape = ctx.shape(sh)?;
    match what {
        Export::Generator => {
            let g = build_generator(&shape, sh.n as u32, &ctx.budget)?;
            let body: String = g.iter().map(|tr| tr.to_json_line() + "\n").collect();
            ctx.write_file("generator.jsonl", &body)?;
            Ok(format!("{} transitions", g.len()))
        }
        Export::Weights => {
            let ws = tazrp_weights(&shape, sh.n, &ctx.budget)?;
            let rows = ws.iter().map(|(w, p)| vec![w.to_string(), p.to_string(), serde_json::to_string(p).expect("serializable")]);
            ctx.write_file("weights.csv", &csv_string(&["config", "weight", "terms"], rows)?)?;
            Ok(format!("{} weights", ws.len()))
        }
        Export::Stationary => {
            let point = ctx.point(at, sh.n)?;
            let pi = stationary_exact(&shape, sh.n, &point, &ctx.budget)?;
            let rows = pi.iter().map(|(w, v)| vec![w.to_string(), v.to_string()]);
            ctx.write_file("stationary.csv", &csv_string(&["config", "probability"], rows)?)?;
            Ok(format!("{} probabilities", pi.len()))
        }
    }
}
