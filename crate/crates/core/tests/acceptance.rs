//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Run with `cargo test --release --test acceptance`.

use std::process::Command;
use std::time::Instant;

use uav_coverage::channel::{los_breakpoints, los_probability, EnvironmentPreset, LinkGeometry};
use uav_coverage::experiments::{
    self, assess_figure2, assess_figure4, figure2_preset, figure4_preset, Assessment, CheckOutcome, ValidationSpec, Verdict,
};
use uav_coverage::{NetworkScenario, Result};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_check(c: CheckOutcome) -> Outcome {
    let mut detail = format!("measured {:.3e}, tolerance {:.1e}", c.measured, c.tolerance);
    for case in &c.cases {
        detail.push_str("\n      ");
        detail.push_str(case);
    }
    Outcome { passed: c.passed, detail }
}

fn from_assessments(list: &[Assessment]) -> Outcome {
    Outcome {
        passed: !list.is_empty() && list.iter().all(|a| a.verdict == Verdict::Pass),
        detail: list.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("\n      "),
    }
}

fn spec() -> ValidationSpec {
    ValidationSpec::default()
}

fn rayleigh_identity() -> Result<Outcome> {
    Ok(from_check(experiments::check_rayleigh_identity(&NetworkScenario::reference(), &spec())?))
}

fn derivative_oracle() -> Result<Outcome> {
    Ok(from_check(experiments::check_derivatives(&NetworkScenario::reference(), &spec())?))
}

fn analytic_vs_simulation() -> Result<Outcome> {
    Ok(from_check(experiments::check_coverage_vs_simulation(&NetworkScenario::reference(), &spec())?))
}

fn conditional() -> Result<Outcome> {
    Ok(from_check(experiments::check_conditional(&NetworkScenario::reference(), &spec())?))
}

fn laplace() -> Result<Outcome> {
    Ok(from_check(experiments::check_laplace(&NetworkScenario::reference(), &spec())?))
}

fn figure2() -> Result<Outcome> {
    Ok(from_assessments(&assess_figure2(&experiments::sweep(&figure2_preset())?)))
}

fn los_properties() -> Result<Outcome> {
    let mut problems = Vec::new();
    let mut checked = 0usize;
    let bs = 30.0;
    let heights = [0.0, 1.5, 10.0, 30.0, 60.0, 150.0, 300.0];
    for env_kind in EnvironmentPreset::ALL {
        let env = env_kind.params();
        let breaks = los_breakpoints(&env, 2000.0);
        let p = |r: f64, h: f64| -> Result<f64> { Ok(los_probability(&LinkGeometry::new(r, bs, h)?, &env)) };
        for &h in &heights {
            for r in [0.0, 0.5 * breaks[0], 0.999 * breaks[0]] {
                checked += 1;
                if p(r, h)? != 1.0 {
                    problems.push(format!("{} h={h} r={r}: below first breakpoint but {}", env_kind.name(), p(r, h)?));
                }
            }
            let mut edges = vec![0.0];
            edges.extend(&breaks);
            for w in edges.windows(2) {
                let first = p(w[0], h)?;
                for t in [0.25, 0.5, 0.75, 0.999] {
                    checked += 1;
                    let r = w[0] + t * (w[1] - w[0]);
                    if p(r, h)? != first {
                        problems.push(format!("{} h={h}: not constant on [{}, {})", env_kind.name(), w[0], w[1]));
                    }
                }
            }
        }
        for r in [10.0, 100.0, 250.0, 500.0, 1000.0] {
            for w in heights.windows(2) {
                checked += 1;
                if p(r, w[1])? < p(r, w[0])? {
                    problems.push(format!("{} r={r}: decreases from h={} to h={}", env_kind.name(), w[0], w[1]));
                }
            }
        }
    }
    Ok(Outcome {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{checked} comparisons over {} environments", EnvironmentPreset::ALL.len())
        } else {
            problems.join("\n      ")
        },
    })
}

fn power_invariance() -> Result<Outcome> {
    Ok(from_check(experiments::check_power_invariance(&NetworkScenario::reference(), &spec())?))
}

fn run_cli(args: &[&str]) -> std::result::Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_uav-coverage"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Result<Outcome> {
    let dir = tempfile::tempdir().map_err(|e| uav_coverage::CoverageError::Config(e.to_string()))?;
    let cfg = dir.path().join("det.toml");
    std::fs::write(&cfg, "[simulation]\nnum_drops = 20000\ndisk_radius = 3000.0\nseed = 7\n")
        .map_err(|e| uav_coverage::CoverageError::Config(e.to_string()))?;
    let cfg = cfg.to_str().expect("utf-8 temp path");
    let commands: [Vec<&str>; 2] = [
        vec!["simulate", "--config", cfg],
        vec![
            "sweep", "--config", cfg, "--sweep-param", "ue_height", "--sweep-grid", "20:100:40", "--sweep-param", "fading",
            "--sweep-grid", "1:1,3:1", "--methods", "analytic,monte-carlo", "--no-timing",
        ],
    ];
    let mut lines = Vec::new();
    let mut passed = true;
    for cmd in &commands {
        let runs: Vec<_> = ["1", "4"]
            .iter()
            .map(|w| {
                let mut args = cmd.clone();
                args.extend(["--workers", w]);
                run_cli(&args)
            })
            .collect();
        let same = match (&runs[0], &runs[1]) {
            (Ok(a), Ok(b)) => a == b && !a.is_empty(),
            _ => false,
        };
        passed &= same;
        let note = match &runs[0] {
            Ok(bytes) => format!("{} bytes", bytes.len()),
            Err(e) => e.clone(),
        };
        lines.push(format!("{}: workers 1 vs 4 {} ({note})", cmd[0], if same { "identical" } else { "DIFFER" }));
    }
    Ok(Outcome {
        passed,
        detail: lines.join("\n      "),
    })
}

fn figure4() -> Result<Outcome> {
    let spec = figure4_preset();
    Ok(from_assessments(&assess_figure4(&experiments::sweep(&spec)?, spec.base.bs_height)))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("rayleigh identity on the altitude x downtilt grid", rayleigh_identity),
        ("Laplace derivatives vs finite differences", derivative_oracle),
        ("analytic vs Monte Carlo coverage at defaults", analytic_vs_simulation),
        ("conditional coverage vs conditional simulation", conditional),
        ("interference Laplace transform vs simulation", laplace),
        ("altitude sweep crossing and shape", figure2),
        ("LoS probability steps, altitude monotonicity, near field", los_properties),
        ("transmit power invariance", power_invariance),
        ("byte-identical CLI output across worker counts", determinism),
        ("optimal altitude per downtilt", figure4),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}  {name} [{:.1} s]\n      {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
