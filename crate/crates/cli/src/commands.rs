use std::time::Instant;

use anyhow::anyhow;
use serde_json::{json, Value};

use mockpadic::demo::{self, DemoConfig, DemoError};
use mockpadic::exactnum::{frobenius_roots, rat, render_digits, PadicContext, PadicValue};
use mockpadic::limits::fixtures::{BadPrimeFixture, InertFixture};
use mockpadic::limits::{
    compute_alpha_badprime, compute_alpha_inert, compute_delta, compute_gamma_alt, compute_gamma_star, inert_w_limit,
    LimitResult,
};
use mockpadic::mockcorrect::{build_delta_seed, display_scale, level_one_shadow, MockSeed};
use mockpadic::modforms::{ingest_file, Ingested, ModFormError};
use mockpadic::suites::{run_suite, SuiteConfig, SUITES};

use crate::config::{RunConfig, SeedSource};

pub enum CliError {
    /// Exit status 2.
    Config(String),
    /// Exit status 1.
    Failed(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Failed(e.into())
    }
}

fn demo_error(e: DemoError) -> CliError {
    match e {
        DemoError::Config(msg) => CliError::Config(msg),
        other => CliError::Failed(other.into()),
    }
}

pub struct Report {
    /// File stem under `--out`.
    pub name: String,
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

/// The seed and whether it is the builtin one.
fn load_seed(cfg: &RunConfig) -> Result<(MockSeed, bool), CliError> {
    match &cfg.seed {
        SeedSource::BuiltinDelta => Ok((build_delta_seed(cfg.q_prec + 1)?, true)),
        SeedSource::Path(path) => {
            let data = match ingest_file(path) {
                Ok(Ingested::MockPlus(data)) => data,
                Ok(Ingested::Newform(_)) => {
                    return Err(CliError::Config(format!("{} holds a newform, not a mockplus seed", path.display())))
                }
                Err(ModFormError::Io(msg)) => return Err(CliError::Config(msg)),
                Err(e) => return Err(e.into()),
            };
            if data.level != 1 {
                return Err(CliError::Config(format!("ingested seeds must have level one; got {}", data.level)));
            }
            let shadow = level_one_shadow(data.weight, data.series.prec())?;
            Ok((MockSeed::from_mockplus(&data, shadow)?, false))
        }
    }
}

fn demo_config(cfg: &RunConfig) -> DemoConfig {
    DemoConfig { prime: cfg.prime, q_precision: cfg.q_prec, digits: cfg.digits, max_m: cfg.max_m, ..DemoConfig::default() }
}

pub fn demo_delta(cfg: &RunConfig) -> Result<Report, CliError> {
    let dc = demo_config(cfg);
    let report = match &cfg.seed {
        SeedSource::BuiltinDelta => demo::run_demo(&dc).map_err(demo_error)?,
        SeedSource::Path(_) => {
            let (seed, _) = load_seed(cfg)?;
            demo::run_demo_on(&dc, &seed, false).map_err(demo_error)?
        }
    };
    let passed = report.passed();
    let mut text = format!("p = {}, q-precision {}, max_m {}\n", cfg.prime, cfg.q_prec, cfg.max_m);
    text.push_str(&report.to_text());
    for (stage, t) in &report.timings {
        text.push_str(&format!("time {stage:<9} {:.2}s\n", t.as_secs_f64()));
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Ok(Report { name: "demo-delta".into(), text, json: report.to_json(), passed })
}

pub fn properties(cfg: &RunConfig) -> Result<Report, CliError> {
    let names: Vec<&str> = match &cfg.suite {
        Some(s) if SUITES.contains(&s.as_str()) => vec![s.as_str()],
        Some(s) => return Err(CliError::Config(format!("unknown suite `{s}`; known: {}", SUITES.join(", ")))),
        None => SUITES.to_vec(),
    };
    let sc = SuiteConfig { seed: cfg.seed_rng, cases: cfg.cases };
    let mut text = format!("seed-rng {}, {} cases per identity\n", cfg.seed_rng, cfg.cases);
    let mut reports = Vec::new();
    let mut passed = true;
    for name in names {
        let r = run_suite(name, &sc).expect("known suite");
        text.push_str(&r.to_text());
        passed = r.passed();
        reports.push(r);
        if !passed {
            break;
        }
    }
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Ok(Report { name: "properties".into(), text, json: json!({"suites": reports, "passed": passed}), passed })
}

fn limit_text(label: &str, r: &LimitResult, shown: &PadicValue) -> String {
    format!(
        "{label} = {}\n  status {:?}, certified to p^{}\n  certificate {:?}\n",
        render_digits(shown, 8),
        r.status,
        r.certified_precision(),
        r.certificate
    )
}

pub fn limits(cfg: &RunConfig, which: &str) -> Result<Report, CliError> {
    match which {
        "gamma" | "delta" => seed_limits(cfg, which),
        "inert" => inert(cfg),
        "badprime" => badprime(cfg),
        other => Err(CliError::Config(format!("unknown limit `{other}`"))),
    }
}

fn seed_limits(cfg: &RunConfig, which: &str) -> Result<Report, CliError> {
    let (seed, builtin) = load_seed(cfg)?;
    let reference = builtin && cfg.prime == 3;
    let roots = demo::seed_roots(&seed, cfg.prime, cfg.digits).map_err(demo_error)?;
    let ctx = roots.context();
    let k = seed.weight();
    let scale = display_scale(k);
    let label = format!("{}!", k - 1);
    let gamma = compute_gamma_star(&seed, &PadicValue::zero(ctx), &roots, cfg.max_m, 10)?;
    let scaled_gamma = gamma.value.scale_rational(&scale);
    let mut text = String::new();
    let mut checks = Vec::new();
    let mut json = json!({"prime": cfg.prime, "scale": label, "reference": reference});
    let mut passed;
    if which == "gamma" {
        let alt = compute_gamma_alt(&seed, &roots, cfg.max_m, 10)?;
        let agree = (&gamma.value - &alt.value).valuation().finite();
        text.push_str(&limit_text(&format!("{label} gamma"), &gamma, &scaled_gamma));
        text.push_str(&format!("  second formula agrees to p^{}\n", agree.map_or("inf".into(), |a| a.to_string())));
        json["gamma"] = gamma.to_json();
        json["gamma_scaled_digits"] = json!(render_digits(&scaled_gamma, 20));
        json["alt"] = alt.to_json();
        passed = gamma.is_converged();
        if reference {
            let shown = render_digits(&scaled_gamma, 2);
            checks.push(("leading digits match the reference", shown == demo::REFERENCE_GAMMA_DIGITS));
        }
    } else {
        let delta = compute_delta(&seed, &gamma.value, &roots, cfg.max_m, 10)?;
        let scaled = delta.value.scale_rational(&scale);
        text.push_str(&limit_text(&format!("{label} delta"), &delta, &scaled));
        json["delta"] = delta.to_json();
        json["delta_scaled_digits"] = json!(render_digits(&scaled, 20));
        passed = delta.is_converged();
        if reference {
            checks.push(("leading digits match the reference", render_digits(&scaled, 3) == demo::REFERENCE_DELTA_DIGITS));
        }
    }
    for (name, ok) in &checks {
        text.push_str(&format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }));
        passed &= ok;
    }
    json["passed"] = json!(passed);
    Ok(Report { name: format!("limits-{which}"), text, json, passed })
}

/// Planted constant of the bundled inert fixture.
fn inert_planted() -> mockpadic::exactnum::ExactRational {
    rat(5, 7)
}

fn inert(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.prime != InertFixture::PRIME {
        return Err(CliError::Config(format!("the inert fixture lives at p = {}", InertFixture::PRIME)));
    }
    let planted = inert_planted();
    let fx = InertFixture::new(planted.clone(), 400);
    let ctx = PadicContext::new(3, cfg.digits)?;
    let chi = fx.g.character.rational_value(3).ok_or_else(|| anyhow!("character value at 3"))?;
    let roots = frobenius_roots(&rat(0, 1), &chi, fx.g.weight, ctx)?;
    let alpha = compute_alpha_inert(&fx, &roots, cfg.max_m, 8)?;
    let recovered = alpha.value.agrees_with(&PadicValue::from_rational(&planted, ctx), 8);
    let w = inert_w_limit(&fx, &PadicValue::zero(ctx), &roots, 10, cfg.max_m, 8)?;
    let mut text = limit_text("alpha~", &alpha, &alpha.value);
    text.push_str(&format!("planted {planted} recovered to 8 digits: {recovered}\n"));
    let mut ratio_ok = true;
    for (n, r) in (1..).zip(&w) {
        let want = fx.g.a(n)? * &planted;
        let ok = r.value.agrees_with(&PadicValue::from_rational(&want, ctx), 8);
        ratio_ok &= ok;
        text.push_str(&format!("W(q^{n}) = {}  (L~ a_g = {want}) {}\n", render_digits(&r.value, 4), if ok { "ok" } else { "FAIL" }));
    }
    let passed = alpha.is_converged() && recovered && ratio_ok;
    let json = json!({
        "planted": planted.to_string(),
        "alpha": alpha.to_json(),
        "recovered": recovered,
        "w_limit": w.iter().map(LimitResult::to_json).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok(Report { name: "limits-inert".into(), text, json, passed })
}

fn badprime(cfg: &RunConfig) -> Result<Report, CliError> {
    let fx = BadPrimeFixture::seeded(cfg.seed_rng, 14);
    let ctx = PadicContext::new(fx.p, cfg.digits)?;
    let r = compute_alpha_badprime(&fx.b, &fx.a_p, fx.k, ctx, 13, 8)?;
    let recovered = r.value.agrees_with(&PadicValue::from_rational(&fx.planted, ctx), 8);
    let mut text = format!("fixture p = {}, k = {}, a_p = {}, planted {}\n", fx.p, fx.k, fx.a_p, fx.planted);
    text.push_str(&limit_text("alpha", &r, &r.value));
    text.push_str(&format!("recovered to 8 digits: {recovered}\n"));
    let passed = r.is_converged() && recovered;
    let json = json!({
        "prime": fx.p, "weight": fx.k, "a_p": fx.a_p.to_string(), "planted": fx.planted.to_string(),
        "alpha": r.to_json(), "recovered": recovered, "passed": passed,
    });
    Ok(Report { name: "limits-badprime".into(), text, json, passed })
}

pub fn ingest(path: &std::path::Path) -> Result<Report, CliError> {
    let start = Instant::now();
    let data = match ingest_file(path) {
        Ok(d) => d,
        Err(ModFormError::Io(msg)) => return Err(CliError::Config(msg)),
        Err(e) => return Err(e.into()),
    };
    let (text, json, passed) = match &data {
        Ingested::Newform(g) => {
            let check = g.validate();
            let primes: Vec<(i64, String)> = (2..30i64)
                .filter(|&p| mockpadic::exactnum::is_prime(p as u64) && p < g.prec())
                .map(|p| (p, g.a(p).map(|a| a.to_string()).unwrap_or_default()))
                .collect();
            let mut text = format!(
                "newform: weight {}, level {}, {}, known below q^{}\n",
                g.weight,
                g.level,
                g.character.label(),
                g.prec()
            );
            for (p, a) in &primes {
                text.push_str(&format!("a({p}) = {a}\n"));
            }
            text.push_str(&match &check {
                Ok(()) => "Hecke relations hold on the known range\n".to_string(),
                Err(e) => format!("validation failed: {e}\n"),
            });
            let json = json!({
                "kind": "newform", "weight": g.weight, "level": g.level, "character": g.character.label(),
                "precision": g.prec(), "valid": check.is_ok(),
                "a_p": primes.iter().map(|(p, a)| json!({"p": p, "a": a})).collect::<Vec<_>>(),
                "error": check.as_ref().err().map(|e| e.to_string()),
            });
            (text, json, check.is_ok())
        }
        Ingested::MockPlus(m) => {
            let text = format!(
                "mockplus: weight {}, level {}, {}, exponents {}..{}\n",
                m.weight,
                m.level,
                m.character.label(),
                m.series.lowest(),
                m.series.prec()
            );
            let json = json!({
                "kind": "mockplus", "weight": m.weight, "level": m.level, "character": m.character.label(),
                "lowest": m.series.lowest(), "precision": m.series.prec(),
            });
            (text, json, true)
        }
    };
    let text = format!("{text}parsed in {:.3}s\n", start.elapsed().as_secs_f64());
    Ok(Report { name: "ingest".into(), text, json, passed })
}
