use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

use parisian_core::asymptotics::{parisian_bm_exact, two_dim_parisian_asymptotic};
use parisian_core::fbm::{build_grid, sample_bm_paths, sample_paths, FbmSampler};
use parisian_core::mc_ruin::{
    crossing_proxy, crossing_proxy_one_dim, simulate_one_dim_parisian, simulate_two_dim_parisian, DelaySchedule,
    RuinEstimate, RuinMCConfig,
};
use parisian_core::model::structural_constants;
use parisian_core::pickands::{
    bm_sup_below, default_truncation_pickands, estimate_inverse_integral_expectation, estimate_sup_below, exact_f1,
    pickands_lower_bound, simulate_pickands, simulate_pickands_sweep, PickandsQuery,
};
use parisian_core::piterbarg::{
    default_truncation_piterbarg, piterbarg_closed_form, simulate_piterbarg, simulate_piterbarg_sweep, DriftSpec,
};
use parisian_core::registry::RegistryProvider;
use parisian_core::validation::{run_criterion, CRITERIA};
use parisian_core::{ConstantDescriptor, ConstantRecord, Error, Estimate, ModelParams, Registry, ResolvePolicy, SimConfig};

use crate::output::{write_csv, CliError, CliResult, Manifest};
use crate::{
    AsymptoticsArgs, Cli, Command, ConstantsAction, ConstantsArgs, FiguresArgs, Global, Kind, McRuinArgs, PathsArgs,
    PickandsArgs, PiterbargArgs, Schedule, ValidateArgs,
};

pub fn run(cli: &Cli) -> CliResult<ExitCode> {
    let g = &cli.global;
    let name = match &cli.command {
        Command::Piterbarg(_) => "piterbarg",
        Command::Pickands(_) => "pickands",
        Command::Asymptotics(_) => "asymptotics",
        Command::McRuin(_) => "mc-ruin",
        Command::Validate(_) => "validate",
        Command::Constants(_) => "constants",
        Command::Figures(_) => "figures",
        Command::Paths(_) => "paths",
    };
    let params = json!({ "global": g, "args": &cli.command });
    let mut manifest = Manifest::new(name, params, g.seed());
    let result = match &cli.command {
        Command::Piterbarg(a) => piterbarg(g, a, &mut manifest),
        Command::Pickands(a) => pickands(g, a, &mut manifest),
        Command::Asymptotics(a) => asymptotics(g, a),
        Command::McRuin(a) => mc_ruin(g, a, &mut manifest),
        Command::Validate(a) => validate(g, a, &mut manifest),
        Command::Constants(a) => constants(g, a),
        Command::Figures(a) => figures(g, a, &mut manifest),
        Command::Paths(a) => paths(g, a, &mut manifest),
    };
    // the manifest also records runs whose outputs were written before a failure
    manifest.finish()?;
    result.map(|()| ExitCode::SUCCESS)
}

fn registry(g: &Global) -> Option<Registry> {
    g.registry.as_ref().map(Registry::open)
}

fn require_registry(g: &Global) -> CliResult<Registry> {
    registry(g).ok_or_else(|| CliError::Usage("no registry: pass --registry or set PARISIAN_REGISTRY".into()))
}

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn sweep_seed(g: &Global, i: usize) -> u64 {
    if g.independent_seeds {
        g.seed().wrapping_add(i as u64)
    } else {
        g.seed()
    }
}

fn save(g: &Global, records: Vec<ConstantRecord>) -> CliResult<()> {
    if !g.save {
        return Ok(());
    }
    let reg = require_registry(g)?;
    for r in records {
        let key = reg.put(&r)?;
        if !g.json {
            println!("saved {key} ({})", r.descriptor);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PiterbargRow {
    #[serde(rename = "L")]
    l: f64,
    a: f64,
    b: f64,
    estimate: f64,
    std_error: f64,
    lower: f64,
    upper: f64,
    #[serde(rename = "M")]
    m: f64,
    tau: f64,
    n: u64,
    seed: u64,
}

fn piterbarg_rows(d: &DriftSpec, ls: &[f64], m: Option<f64>, tau: f64, n: u64, g: &Global) -> CliResult<Vec<(PiterbargRow, Estimate)>> {
    let estimates: Vec<Estimate> = if g.independent_seeds {
        ls.iter()
            .enumerate()
            .map(|(i, &l)| {
                let m = m.unwrap_or_else(|| default_truncation_piterbarg(d, l));
                simulate_piterbarg(d, l, &SimConfig::new(m, tau, n, sweep_seed(g, i)))
            })
            .collect::<Result<_, _>>()?
    } else {
        let lmax = ls.iter().copied().fold(0.0, f64::max);
        let m = m.unwrap_or_else(|| default_truncation_piterbarg(d, lmax));
        simulate_piterbarg_sweep(d, ls, &[m], &SimConfig::new(m, tau, n, g.seed()))?.remove(0)
    };
    Ok(ls
        .iter()
        .zip(estimates)
        .map(|(&l, e)| {
            let (lower, upper) = e.bounds.unwrap_or((f64::NAN, f64::NAN));
            let row = PiterbargRow {
                l,
                a: d.a,
                b: d.b,
                estimate: e.value,
                std_error: e.std_error,
                lower,
                upper,
                m: e.config.m,
                tau: e.config.tau,
                n: e.config.n,
                seed: e.config.seed,
            };
            (row, e)
        })
        .collect())
}

fn piterbarg(g: &Global, a: &PiterbargArgs, manifest: &mut Manifest) -> CliResult<()> {
    let d = DriftSpec::new(a.a, a.b)?;
    let ls = a.sweep_l.clone().map_or_else(|| vec![a.l], |s| s.0);
    let rows = piterbarg_rows(&d, &ls, a.sim.m, a.sim.tau, a.sim.n, g)?;
    let closed = piterbarg_closed_form(&d);
    if g.json {
        let est: Vec<&PiterbargRow> = rows.iter().map(|r| &r.0).collect();
        let warnings: Vec<&String> = rows.iter().flat_map(|r| &r.1.warnings).collect();
        emit_json(&json!({ "closed_form_at_L0": closed, "estimates": est, "warnings": warnings }));
    } else {
        println!("Piterbarg constant, a = {}, b = {} (closed form at L = 0: {closed:.6})", d.a, d.b);
        for (r, e) in &rows {
            println!(
                "  L = {:<6} estimate {:.6} ± {:.6}   bounds [{:.6}, {:.6}]   M = {}, tau = {}, n = {}",
                r.l, r.estimate, r.std_error, r.lower, r.upper, r.m, r.tau, r.n
            );
            for w in &e.warnings {
                println!("  warning: {w}");
            }
        }
    }
    if let Some(out) = &g.out {
        let csv: Vec<&PiterbargRow> = rows.iter().map(|r| &r.0).collect();
        write_csv(out, &csv)?;
        manifest.output(out);
    }
    let records = rows
        .iter()
        .map(|(r, e)| ConstantRecord::from_estimate(ConstantDescriptor::piterbarg(r.l, d.a, d.b), e))
        .collect::<Result<Vec<_>, _>>()?;
    save(g, records)
}

#[derive(Serialize)]
struct PickandsRow {
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "L")]
    l: f64,
    estimate: f64,
    std_error: f64,
    exact_if_known: Option<f64>,
    lower_bound: Option<f64>,
    #[serde(rename = "M")]
    m: f64,
    tau: f64,
    eta: f64,
    n: u64,
    seed: u64,
}

#[derive(Serialize)]
struct BiasRow {
    tau: f64,
    #[serde(rename = "L")]
    l: f64,
    estimate: f64,
    std_error: f64,
    exact: f64,
    bias: f64,
    #[serde(rename = "M")]
    m: f64,
    n: u64,
    seed: u64,
}

fn exact_if_known(h: f64, l: f64) -> Option<f64> {
    (h == 0.5).then(|| exact_f1(l))
}

fn pickands_estimates(h: f64, ls: &[f64], m: Option<f64>, tau: f64, eta: Option<f64>, n: u64, g: &Global) -> CliResult<Vec<Estimate>> {
    let cfg = |m: f64, seed: u64| SimConfig { eta, ..SimConfig::new(m, tau, n, seed) };
    if g.independent_seeds {
        ls.iter()
            .enumerate()
            .map(|(i, &l)| {
                let m = m.unwrap_or_else(|| default_truncation_pickands(l));
                Ok(simulate_pickands(&PickandsQuery::new(h, l)?, &cfg(m, sweep_seed(g, i)))?)
            })
            .collect()
    } else {
        let lmax = ls.iter().copied().fold(0.0, f64::max);
        let m = m.unwrap_or_else(|| default_truncation_pickands(lmax));
        Ok(simulate_pickands_sweep(h, ls, &[m], &cfg(m, g.seed()))?.remove(0))
    }
}

/// Analytic lower bound from the inverse-integral constant and the
/// barrier probabilities of B_H on [0, 1].
fn lower_bounds(h: f64, ls: &[f64], cfg: &SimConfig) -> CliResult<Vec<f64>> {
    let inv = estimate_inverse_integral_expectation(h, cfg)?;
    let m_grid: Vec<f64> = (1..=60).map(|i| i as f64 * 0.1).collect();
    let probs = if h == 0.5 {
        m_grid.iter().map(|&m| bm_sup_below(m)).collect()
    } else {
        estimate_sup_below(h, &m_grid, cfg.tau, cfg.n, cfg.seed)?
    };
    let lookup = |m: f64| {
        m_grid
            .iter()
            .position(|&x| (x - m).abs() < 1e-12)
            .map(|i| probs[i])
            .unwrap_or_else(|| if h == 0.5 { bm_sup_below(m) } else { f64::NAN })
    };
    ls.iter()
        .map(|&l| Ok(pickands_lower_bound(&PickandsQuery::new(h, l)?, inv.value, &m_grid, lookup)?.bound))
        .collect()
}

fn pickands(g: &Global, a: &PickandsArgs, manifest: &mut Manifest) -> CliResult<()> {
    if a.bias_sweep {
        return pickands_bias(g, a, manifest);
    }
    let [tau] = a.tau[..] else {
        return Err(CliError::Usage("several --tau values need --bias-sweep".into()));
    };
    let ls = a.sweep_l.clone().map_or_else(|| vec![a.l], |s| s.0);
    let estimates = pickands_estimates(a.h, &ls, a.m, tau, a.eta, a.n, g)?;
    let lower = if a.lower_bound {
        let m = estimates[0].config.m;
        Some(lower_bounds(a.h, &ls, &SimConfig::new(m, tau, a.n, g.seed()))?)
    } else {
        None
    };
    let rows: Vec<PickandsRow> = ls
        .iter()
        .zip(&estimates)
        .enumerate()
        .map(|(i, (&l, e))| PickandsRow {
            h: a.h,
            l,
            estimate: e.value,
            std_error: e.std_error,
            exact_if_known: exact_if_known(a.h, l),
            lower_bound: lower.as_ref().map(|v| v[i]),
            m: e.config.m,
            tau: e.config.tau,
            eta: e.config.eta.unwrap_or(e.config.tau),
            n: e.config.n,
            seed: e.config.seed,
        })
        .collect();
    if g.json {
        emit_json(&json!({ "estimates": rows }));
    } else {
        println!("Parisian Pickands constant, H = {}", a.h);
        for r in &rows {
            let mut s = format!("  L = {:<6} estimate {:.6} ± {:.6}", r.l, r.estimate, r.std_error);
            if let Some(x) = r.exact_if_known {
                s += &format!("   exact {x:.6}");
            }
            if let Some(x) = r.lower_bound {
                s += &format!("   lower bound {x:.6}");
            }
            println!("{s}   M = {}, tau = {}, n = {}", r.m, r.tau, r.n);
        }
    }
    if let Some(out) = &g.out {
        write_csv(out, &rows)?;
        manifest.output(out);
    }
    let records = ls
        .iter()
        .zip(&estimates)
        .map(|(&l, e)| ConstantRecord::from_estimate(ConstantDescriptor::pickands(a.h, l), e))
        .collect::<Result<Vec<_>, _>>()?;
    save(g, records)
}

fn bias_rows(ls: &[f64], taus: &[f64], m: Option<f64>, n: u64, seed: u64) -> CliResult<Vec<BiasRow>> {
    let lmax = ls.iter().copied().fold(0.0, f64::max);
    let m = m.unwrap_or_else(|| default_truncation_pickands(lmax));
    let mut rows = Vec::new();
    for &tau in taus {
        let sweep = simulate_pickands_sweep(0.5, ls, &[m], &SimConfig::new(m, tau, n, seed))?.remove(0);
        for (&l, e) in ls.iter().zip(sweep) {
            let exact = exact_f1(l);
            rows.push(BiasRow {
                tau,
                l,
                estimate: e.value,
                std_error: e.std_error,
                exact,
                bias: e.value - exact,
                m,
                n,
                seed,
            });
        }
    }
    Ok(rows)
}

fn pickands_bias(g: &Global, a: &PickandsArgs, manifest: &mut Manifest) -> CliResult<()> {
    if a.h != 0.5 {
        return Err(CliError::Usage("--bias-sweep needs --H 0.5, the only case with an exact value".into()));
    }
    let ls = a.sweep_l.clone().map_or_else(|| vec![a.l], |s| s.0);
    let rows = bias_rows(&ls, &a.tau, a.m, a.n, g.seed())?;
    if g.json {
        emit_json(&json!({ "bias": rows }));
    } else {
        println!("{:>10} {:>6} {:>10} {:>10} {:>10} {:>10}", "tau", "L", "estimate", "exact", "bias", "std_error");
        for r in &rows {
            println!(
                "{:>10} {:>6} {:>10.6} {:>10.6} {:>+10.6} {:>10.6}",
                r.tau, r.l, r.estimate, r.exact, r.bias, r.std_error
            );
        }
    }
    if let Some(out) = &g.out {
        write_csv(out, &rows)?;
        manifest.output(out);
    }
    Ok(())
}

fn asymptotics(g: &Global, a: &AsymptoticsArgs) -> CliResult<()> {
    let m = &a.model;
    let p = ModelParams::new(m.c1, m.c2, m.q1, m.q2, m.h, m.t)?;
    let policy = if a.simulate_constants { ResolvePolicy::UseOrSimulate } else { ResolvePolicy::CacheOnly };
    let mut provider = RegistryProvider::new(registry(g), policy, g.seed());
    provider.n = a.constant_n;
    provider.tau = a.constant_tau;
    let s = structural_constants(&p);
    let mut results = Vec::new();
    for &u in &a.u {
        let r = two_dim_parisian_asymptotic(&p, u, &mut provider)?;
        results.push(r);
    }
    if g.json {
        let objs: Vec<Value> = results
            .iter()
            .map(|r| {
                json!({
                    "regime": r.regime.tag.name(),
                    "dominant": r.regime.dominant.map(|i| p.original_company(i)),
                    "formula_id": r.formula_id.name(),
                    "u": r.u,
                    "value": r.value,
                    "constants": r.constants_used.iter().map(|c| json!({
                        "descriptor": c.descriptor.to_string(),
                        "value": c.value,
                        "std_error": c.std_error,
                        "source": c.source,
                    })).collect::<Vec<_>>(),
                    "structural": s,
                    "warnings": r.warnings,
                })
            })
            .collect();
        match &objs[..] {
            [one] => emit_json(one),
            _ => emit_json(&json!({ "results": objs })),
        }
    } else {
        println!(
            "regime {} (t* = {:.6}), T' = {:.6}, drift (a, b) = ({:.6}, {:.6})",
            s.regime.tag.name(),
            parisian_core::model::critical_times(&p).t_star,
            s.t_prime,
            s.a_d,
            s.b_d
        );
        for r in &results {
            println!("  u = {:<8} value {:.6e}   [{}]", r.u, r.value, r.formula_id.name());
            for c in &r.constants_used {
                println!("    {} = {:.6} ± {:.6} ({})", c.descriptor, c.value, c.std_error, c.source);
            }
            for w in &r.warnings {
                println!("    warning: {w}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RuinRow {
    u: f64,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "H")]
    h: f64,
    p_hat: f64,
    ci95: f64,
    n: u64,
    horizon: f64,
    step: f64,
    seed: u64,
}

enum RuinProblem {
    Two(ModelParams),
    One { c: f64, q: f64 },
}

impl RuinProblem {
    /// Reference size of the probability: the asymptotic value when it needs
    /// no simulation, the exact value for Brownian motion in one dimension,
    /// otherwise the single-point proxy.
    fn reference(&self, h: f64, t: f64, u: f64, g: &Global, schedule: DelaySchedule) -> f64 {
        match self {
            RuinProblem::Two(p) => {
                let mut provider = RegistryProvider::new(registry(g), ResolvePolicy::CacheOnly, g.seed());
                match two_dim_parisian_asymptotic(p, u, &mut provider) {
                    Ok(r) => r.value,
                    Err(_) => crossing_proxy(p, u),
                }
            }
            RuinProblem::One { c, q } if h == 0.5 => parisian_bm_exact(*c, q * u, schedule.delay(h, t, u)),
            RuinProblem::One { c, q } => crossing_proxy_one_dim(h, *c, *q, u),
        }
    }
}

fn mc_ruin(g: &Global, a: &McRuinArgs, manifest: &mut Manifest) -> CliResult<()> {
    let problem = match (a.c1, a.c2, a.q1, a.q2, a.c, a.q) {
        (Some(c1), Some(c2), Some(q1), Some(q2), None, None) => RuinProblem::Two(ModelParams::new(c1, c2, q1, q2, a.h, a.t)?),
        (None, None, None, None, Some(c), Some(q)) => RuinProblem::One { c, q },
        _ => return Err(CliError::Usage("give either all of --c1 --c2 --q1 --q2 or both --c and --q".into())),
    };
    let schedule = match a.schedule {
        Schedule::Scaled => DelaySchedule::Scaled,
        Schedule::Fixed => DelaySchedule::Fixed,
    };
    let threshold = 10.0 / a.n as f64;
    let mut estimates: Vec<RuinEstimate> = Vec::new();
    for (i, &u) in a.u.iter().enumerate() {
        let reference = problem.reference(a.h, a.t, u, g, schedule);
        if reference < threshold && !g.force {
            return Err(CliError::Refused(format!(
                "u = {u}: expected probability about {reference:.3e} is below 10/n = {threshold:.3e}; \
                 plain Monte Carlo would see almost no ruined paths. Lower u, raise --n to at least {:.0}, \
                 or pass --force",
                (10.0 / reference).ceil()
            )));
        }
        let cfg = RuinMCConfig { horizon: a.horizon, step: a.step, n: a.n, seed: sweep_seed(g, i), schedule };
        let e = match &problem {
            RuinProblem::Two(p) => simulate_two_dim_parisian(p, u, &cfg)?,
            RuinProblem::One { c, q } => simulate_one_dim_parisian(a.h, *c, *q, u, a.t, &cfg)?,
        };
        estimates.push(e);
    }
    let rows: Vec<RuinRow> = estimates
        .iter()
        .map(|e| RuinRow {
            u: e.u,
            t: a.t,
            h: a.h,
            p_hat: e.p_hat,
            ci95: e.ci95_half_width,
            n: e.n,
            horizon: e.horizon,
            step: e.step,
            seed: e.seed,
        })
        .collect();
    if g.json {
        emit_json(&json!({ "estimates": estimates }));
    } else {
        for e in &estimates {
            println!(
                "u = {:<8} p_hat {:.6} ± {:.6}  ({} / {} ruined; T_u = {:.6}, {} step {:.3e}, horizon {:.3})",
                e.u, e.p_hat, e.ci95_half_width, e.hits, e.n, e.delay, e.method, e.step, e.horizon
            );
            for w in &e.warnings {
                println!("  warning: {w}");
            }
        }
    }
    if let Some(out) = &g.out {
        write_csv(out, &rows)?;
        manifest.output(out);
    }
    Ok(())
}

fn validate(g: &Global, a: &ValidateArgs, manifest: &mut Manifest) -> CliResult<()> {
    let ids: Vec<u8> = if a.only.is_empty() { CRITERIA.to_vec() } else { a.only.clone() };
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.contains(i)) {
        return Err(CliError::Usage(format!("no criterion {bad}; criteria are 1..=10")));
    }
    let seed = g.seed.unwrap_or(parisian_core::validation::DEFAULT_SEED);
    let mut outcomes = Vec::new();
    let mut text = String::new();
    for id in ids {
        let o = run_criterion(id, seed);
        let mut block = o.summary() + "\n";
        for d in &o.detail {
            block += &format!("    {d}\n");
        }
        if !g.json {
            print!("{block}");
        }
        text += &block;
        outcomes.push(o);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let txt = dir.join("validation_report.txt");
    let js = dir.join("validation_report.json");
    fs::write(&txt, &text)?;
    let report = json!({ "seed": seed, "passed": failed.is_empty(), "criteria": outcomes });
    fs::write(&js, serde_json::to_string_pretty(&report).expect("json") + "\n")?;
    manifest.output(&txt);
    manifest.output(&js);
    if g.json {
        emit_json(&report);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed))
    }
}

fn constants(g: &Global, a: &ConstantsArgs) -> CliResult<()> {
    match &a.action {
        ConstantsAction::List => {
            let reg = require_registry(g)?;
            let records = reg.load()?;
            if g.json {
                emit_json(&serde_json::to_value(&records).expect("json"));
            } else {
                for r in &records {
                    println!("{}", r.to_line());
                }
            }
        }
        ConstantsAction::Resolve(r) => {
            let d = match r.kind {
                Kind::Pickands => ConstantDescriptor::pickands(r.h, r.window),
                Kind::Piterbarg => match (r.a, r.b) {
                    (Some(a), Some(b)) => ConstantDescriptor::piterbarg(r.window, a, b),
                    _ => return Err(CliError::Usage("piterbarg constants need --a and --b".into())),
                },
            };
            let policy = if r.cache_only { ResolvePolicy::CacheOnly } else { ResolvePolicy::UseOrSimulate };
            let (record, simulated) = match registry(g) {
                Some(reg) => reg.resolve(&d, policy, g.seed())?,
                None if r.cache_only => return Err(Error::MissingConstant { descriptor: d.to_string() }.into()),
                None => (ConstantRecord::from_estimate(d.clone(), &d.simulate(&d.default_config(g.seed())?)?)?, true),
            };
            if g.json {
                emit_json(&json!({ "record": record, "simulated": simulated }));
            } else {
                println!("{}", record.to_line());
                println!("({})", if simulated { "simulated" } else { "cache hit" });
            }
        }
    }
    Ok(())
}

fn figures(g: &Global, a: &FiguresArgs, manifest: &mut Manifest) -> CliResult<()> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    fs::create_dir_all(&dir)?;
    let ls: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
    let mut written = Vec::new();

    let bias = bias_rows(&[0.25, 0.5, 1.0, 2.0], &[0.02, 0.01, 0.005, 0.0025], None, a.n, g.seed())?;
    written.push(write_into(&dir, "fig_f1_bias.csv", &bias)?);

    let d = DriftSpec::new(1.0, 1.0)?;
    let rows: Vec<PiterbargRow> = piterbarg_rows(&d, &ls, None, SimConfig::DEFAULT_TAU, a.n, g)?
        .into_iter()
        .map(|r| r.0)
        .collect();
    written.push(write_into(&dir, "fig_piterbarg_bounds.csv", &rows)?);

    for &h in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        // fBm grids use a coarser step: the Cholesky factor is quadratic in the grid size
        let tau = if h == 0.5 { SimConfig::DEFAULT_TAU } else { 0.02 };
        let est = pickands_estimates(h, &ls, Some(default_truncation_pickands(0.5)), tau, None, a.n, g)?;
        let rows: Vec<PickandsRow> = ls
            .iter()
            .zip(&est)
            .map(|(&l, e)| PickandsRow {
                h,
                l,
                estimate: e.value,
                std_error: e.std_error,
                exact_if_known: exact_if_known(h, l),
                lower_bound: None,
                m: e.config.m,
                tau: e.config.tau,
                eta: e.config.eta.unwrap_or(e.config.tau),
                n: e.config.n,
                seed: e.config.seed,
            })
            .collect();
        written.push(write_into(&dir, &format!("fig_pickands_H{h}.csv"), &rows)?);
    }
    for p in &written {
        manifest.output(p);
        if !g.json {
            println!("wrote {}", p.display());
        }
    }
    if g.json {
        emit_json(&json!({ "outputs": written }));
    }
    Ok(())
}

fn write_into<R: Serialize>(dir: &Path, name: &str, rows: &[R]) -> CliResult<PathBuf> {
    let path = dir.join(name);
    write_csv(&path, rows)?;
    Ok(path)
}

fn paths(g: &Global, a: &PathsArgs, manifest: &mut Manifest) -> CliResult<()> {
    let Some(out) = &g.out else {
        return Err(CliError::Usage("paths needs --out".into()));
    };
    let grid = build_grid(a.lo, a.hi, a.step)?;
    let batch = if a.h == 0.5 {
        sample_bm_paths(&grid, a.n, g.seed())
    } else {
        sample_paths(&FbmSampler::for_grid(a.h, &grid)?, &grid, a.n, g.seed())?
    };
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    batch.write_csv(std::io::BufWriter::new(fs::File::create(out)?))?;
    manifest.output(out);
    if !g.json {
        println!("wrote {} paths on {} grid points to {}", a.n, grid.len(), out.display());
    }
    Ok(())
}
