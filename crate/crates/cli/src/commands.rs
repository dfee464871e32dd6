//! One function per subcommand, each producing a [`Report`].

use crate::acceptance;
use crate::config::{parse_list, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{Cell, Report, Table};
use crate::setfile::SetFile;
use std::path::PathBuf;
use std::time::Instant;
use waring_core::aux_count::{exponent_fit, s_count, t_pq_count};
use waring_core::bound_engine::{
    delta_bound, delta_iterate_with, gk_bound, lambda_iterate, solve_sigma, theta_schedule, GkChoice, GkResult,
    Theorem, ThetaVariant,
};
use waring_core::differences::{expected_leading, lemma7_all, psi, Counts, Geometry};
use waring_core::expsum_arcs::{
    arc_moment, exact_moment, w_exponent, weyl_ratio, ArcDissection, ExpSum, MomentSpec, Region, SamplingPolicy,
    Which,
};
use waring_core::sieve::is_prime;
use waring_core::smooth_sets::{build_multilevel, build_smooth, residue_profile, size_estimate, SmoothSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Bounds,
    Count {
        source: String,
        levels: u32,
        pq: Option<(u64, u64)>,
    },
    Smooth {
        delta: Option<f64>,
        levels: u32,
        moduli: Vec<u64>,
        set_out: Option<PathBuf>,
    },
    Arcs {
        w: Vec<f64>,
        samples: u32,
        points: u32,
    },
    Diff {
        h: Vec<u64>,
        primes: Vec<u64>,
    },
    Verify {
        quick: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds => "bounds",
            Command::Count { .. } => "count",
            Command::Smooth { .. } => "smooth",
            Command::Arcs { .. } => "arcs",
            Command::Diff { .. } => "diff",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Result of a subcommand: the report and whether every check it ran passed.
pub struct Run {
    pub report: Report,
    pub ok: bool,
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> CliResult<Run> {
    let mut report = Report::new(cmd.name(), cfg.echo());
    let mut ok = true;
    match cmd {
        Command::Bounds => bounds(cfg, &mut report)?,
        Command::Count { source, levels, pq } => count(cfg, source, *levels, *pq, &mut report)?,
        Command::Smooth {
            delta,
            levels,
            moduli,
            set_out,
        } => smooth(cfg, *delta, *levels, moduli, set_out.as_deref(), &mut report)?,
        Command::Arcs { w, samples, points } => arcs(cfg, w, *samples, *points, &mut report)?,
        Command::Diff { h, primes } => diff(cfg, h, primes, &mut report)?,
        Command::Verify { quick } => {
            report.flags.push(("quick".into(), quick.to_string()));
            let outcomes = acceptance::run_all(*quick, cfg.seed);
            ok = outcomes.iter().all(|o| o.status != acceptance::Status::Fail);
            report.tables.push(acceptance::outcome_table(&outcomes));
        }
    }
    Ok(Run { report, ok })
}

fn theorems(cfg: &RunConfig) -> Vec<Theorem> {
    match cfg.theorem {
        Some(1) => vec![Theorem::T1],
        Some(_) => vec![Theorem::T2],
        None => vec![Theorem::T1, Theorem::T2],
    }
}

fn gk_row(g: &GkResult, paper_faithful: bool) -> Vec<Cell> {
    let sharpest = g.sharpest();
    let selected = if paper_faithful { g.bound } else { sharpest };
    let (v, u, t, ceil_term, envelope, delta_u) = match g.choice {
        GkChoice::T1 { v, t, ceil_term, .. } => (Some(v), None, Some(t), ceil_term, None, None),
        GkChoice::T2 {
            u,
            ceil_term,
            delta_envelope,
            delta_exact,
            ..
        } => (None, Some(u), None, ceil_term, Some(delta_envelope), Some(delta_exact)),
    };
    vec![
        g.k.into(),
        format!("{:?}", g.theorem).into(),
        selected.into(),
        g.bound.into(),
        sharpest.into(),
        v.into(),
        u.into(),
        t.into(),
        ceil_term.into(),
        g.continuous_optimum.into(),
        g.asymptote.into(),
        (g.bound as f64 / g.asymptote).into(),
        envelope.into(),
        delta_u.into(),
        g.sigma.sigma_hat.into(),
        g.small_k.into(),
    ]
}

fn bounds(cfg: &RunConfig, report: &mut Report) -> CliResult<()> {
    let ks = cfg.ks(10);
    let variant = if cfg.paper_faithful {
        ThetaVariant::Full
    } else {
        ThetaVariant::Truncated
    };
    let mut gk = Table::new(
        "gk",
        &[
            "k",
            "theorem",
            "bound",
            "bound_prescribed",
            "bound_sharpest",
            "v",
            "u",
            "t",
            "ceil_term",
            "continuous_optimum",
            "asymptote",
            "ratio",
            "delta_envelope",
            "delta_iterated",
            "sigma_hat",
            "small_k",
        ],
    );
    let mut sigma = Table::new("sigma", &["k", "beta", "lambda_root", "sigma_hat", "mu", "s_star", "residual"]);
    let mut exps = Table::new(
        "exponents",
        &["k", "s", "lambda_fixed", "lambda_coupled", "delta", "delta_envelope", "theta"],
    );
    for &k in &ks {
        for th in theorems(cfg) {
            gk.push("bound_engine::gk_bound", gk_row(&gk_bound(k, th)?, cfg.paper_faithful));
        }
        let sd = solve_sigma(k)?;
        sigma.push(
            "bound_engine::solve_sigma",
            vec![
                k.into(),
                sd.beta.into(),
                sd.lambda_root.into(),
                sd.sigma_hat.into(),
                sd.mu.into(),
                sd.s_star.into(),
                sd.residual().into(),
            ],
        );
        let s_max = cfg.s.unwrap_or(4 * k).max(2);
        let fixed = lambda_iterate(k, s_max, cfg.theta.unwrap_or(1.0 / k as f64))?;
        let coupled = delta_iterate_with(k, s_max, variant)?;
        for (s, lam, delta) in coupled.rows() {
            exps.push(
                &format!("bound_engine::delta_iterate_with({variant:?})"),
                vec![
                    k.into(),
                    s.into(),
                    fixed.lambda_at(s).into(),
                    lam.into(),
                    delta.into(),
                    delta_bound(k, s).into(),
                    coupled.theta_at(s).into(),
                ],
            );
        }
    }
    report.notes.push(format!(
        "bound = {} value; theta variant {variant:?}",
        if cfg.paper_faithful { "prescribed-choice" } else { "sharpest computed" }
    ));
    report.tables.extend([gk, sigma, exps]);
    Ok(())
}

fn smooth_elements(cfg: &RunConfig, k: u32, levels: u32, p: f64) -> CliResult<Vec<u64>> {
    let theta = cfg.theta.unwrap_or(1.0 / k as f64);
    Ok(build_smooth(&SmoothSpec::single(k, theta, levels, p)?)?.elements)
}

fn count(cfg: &RunConfig, source: &str, levels: u32, pq: Option<(u64, u64)>, report: &mut Report) -> CliResult<()> {
    let k = cfg.k_or(3);
    let s = cfg.s.unwrap_or(2);
    let ps = cfg.p_or(&[50.0, 100.0, 200.0, 400.0]);
    let mut counts = Table::new("counts", &["k", "s", "P", "set_size", "S", "diag_lb", "seconds"]);
    let mut tpq = Table::new("t_pq", &["k", "s", "P", "p", "q", "E_size", "T", "diag_lb", "seconds"]);
    let mut runs = Vec::new();
    for &p in &ps {
        let x: Vec<u64> = match source {
            "full" => (1..=p.floor() as u64).collect(),
            "smooth" => smooth_elements(cfg, k, levels, p)?,
            other => return Err(CliError::config(format!("source must be full or smooth, got {other:?}"))),
        };
        let start = Instant::now();
        let c = s_count(&x, s, k, cfg.budget_ops)?;
        let secs = start.elapsed().as_secs_f64();
        counts.push(
            "aux_count::s_count",
            vec![k.into(), s.into(), p.into(), c.set_size.into(), c.count.into(), c.diagonal_lb.into(), secs.into()],
        );
        runs.push((p, c.count));
        if let Some((pp, qq)) = pq {
            let e: Vec<u64> = x.iter().copied().filter(|v| v % pp != 0).collect();
            let start = Instant::now();
            let t = t_pq_count(&e, s, k, pp, qq, cfg.budget_ops)?;
            let secs = start.elapsed().as_secs_f64();
            tpq.push(
                "aux_count::t_pq_count",
                vec![
                    k.into(),
                    s.into(),
                    p.into(),
                    pp.into(),
                    qq.into(),
                    e.len().into(),
                    t.count.into(),
                    t.diagonal_lb.into(),
                    secs.into(),
                ],
            );
        }
    }
    report.notes.push(format!("source {source}"));
    report.tables.push(counts);
    if pq.is_some() {
        report.notes.push("T_pq runs use the members of each set coprime to p".into());
        report.tables.push(tpq);
    }
    if runs.len() >= 3 {
        let f = exponent_fit(&runs)?;
        let mut fit = Table::new("fit", &["k", "s", "points", "slope", "intercept"]);
        fit.push(
            "aux_count::exponent_fit",
            vec![k.into(), s.into(), runs.len().into(), f.slope.into(), f.intercept.into()],
        );
        report.tables.push(fit);
    }
    Ok(())
}

fn smooth(
    cfg: &RunConfig,
    delta: Option<f64>,
    levels: u32,
    moduli: &[u64],
    set_out: Option<&std::path::Path>,
    report: &mut Report,
) -> CliResult<()> {
    let k = cfg.k_or(3);
    let ps = cfg.p_or(&[10_000.0]);
    let mut layers = Table::new("levels", &["P", "level", "window_lo", "window_hi", "Z", "size", "collisions"]);
    let mut residues = Table::new("residues", &["P", "q", "a", "count", "phi_q", "max_deviation"]);
    let mut sizes = Table::new("size", &["P", "set_size", "estimate", "eta", "ratio", "exceeds_P"]);
    let mut last = None;
    for &p in &ps {
        let (sets, mode, provenance) = match delta {
            Some(d) => (
                build_multilevel(&SmoothSpec::multi(theta_schedule(k, d)?, p)?)?,
                "multi",
                "smooth_sets::build_multilevel",
            ),
            None => {
                let theta = cfg.theta.unwrap_or(1.0 / k as f64);
                (
                    vec![build_smooth(&SmoothSpec::single(k, theta, levels, p)?)?],
                    "single",
                    "smooth_sets::build_smooth",
                )
            }
        };
        for set in &sets {
            let w = set.windows.last();
            layers.push(
                provenance,
                vec![
                    p.into(),
                    set.level.into(),
                    w.map(|w| w.lo).into(),
                    w.map(|w| w.hi).into(),
                    w.map(|w| w.z()).into(),
                    set.len().into(),
                    set.collision_count.into(),
                ],
            );
        }
        let fin = sets.last().expect("at least one level");
        for &q in moduli {
            let prof = residue_profile(&fin.elements, q)?;
            for &(a, c) in &prof.counts {
                residues.push(
                    "smooth_sets::residue_profile",
                    vec![p.into(), q.into(), a.into(), c.into(), prof.phi_q.into(), prof.max_deviation.into()],
                );
            }
        }
        match size_estimate(k, p) {
            Ok(est) => sizes.push(
                "smooth_sets::size_estimate",
                vec![
                    p.into(),
                    fin.len().into(),
                    est.value.into(),
                    est.eta.into(),
                    (fin.len() as f64 / est.value).into(),
                    est.exceeds_p.into(),
                ],
            ),
            Err(_) => sizes.push(
                "smooth_sets::size_estimate",
                vec![p.into(), fin.len().into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
            ),
        }
        let extra = match delta {
            Some(d) => vec![("delta".into(), d.to_string())],
            None => vec![("levels".into(), levels.to_string())],
        };
        last = Some(SetFile::new(k, mode, p, extra, fin.elements.clone()));
    }
    report.tables.extend([layers, residues, sizes]);
    if let (Some(path), Some(set)) = (set_out, last) {
        std::fs::write(path, set.render()).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        report.notes.push(format!("final set for P={} written to {}", set.get("P").unwrap_or(""), path.display()));
    }
    Ok(())
}

fn arcs(cfg: &RunConfig, ws: &[f64], samples: u32, points: u32, report: &mut Report) -> CliResult<()> {
    let k = cfg.k_or(3);
    let s = cfg.s.unwrap_or(2);
    let ps = cfg.p_or(&[10.0]);
    let mut dump = Table::new("arcs", &["P", "which", "q", "a", "center", "halfwidth"]);
    let mut moments = Table::new(
        "moments",
        &["moment_id", "P", "k", "params", "region", "value", "err_est", "seconds"],
    );
    let mut weyl = Table::new("weyl", &["P", "k", "seed", "points", "kept", "rejected", "max_ratio", "argmax_alpha"]);
    let mut wexp = Table::new("w_exponent", &["P", "k", "W", "minor_integral", "slope"]);
    let policy = SamplingPolicy {
        points,
        seed: cfg.seed,
        ..Default::default()
    };
    for &p in &ps {
        let d = ArcDissection::new(p, k)?;
        for which in [Which::M, Which::N] {
            for a in d.arcs(which) {
                dump.push(
                    "expsum_arcs::ArcDissection::arcs",
                    vec![p.into(), format!("{which:?}").into(), a.q.into(), a.a.into(), a.center.into(), a.halfwidth.into()],
                );
            }
        }
        let f = ExpSum::full(p.floor() as u64, k)?;
        let even = MomentSpec::abs_even(&f, s);
        let params = format!("s={s}");
        let start = Instant::now();
        let exact = exact_moment(&even, cfg.budget_grid)?;
        moments.push(
            "expsum_arcs::exact_moment",
            vec![
                format!("abs{}", 2 * s).into(),
                p.into(),
                k.into(),
                params.clone().into(),
                "full".into(),
                exact.value.into(),
                Cell::Empty,
                start.elapsed().as_secs_f64().into(),
            ],
        );
        let odd = MomentSpec::abs_power(&f, k + 2);
        let jobs: [(&MomentSpec, String, Region, &str); 4] = [
            (&even, format!("abs{}", 2 * s), Region::Major(Which::M), "major_M"),
            (&even, format!("abs{}", 2 * s), Region::Minor(Which::M), "minor_M"),
            (&odd, format!("abs{}", k + 2), Region::Major(Which::M), "major_M"),
            (&odd, format!("abs{}", k + 2), Region::MajorMinusN, "major_M_minus_N"),
        ];
        for (spec, id, region, label) in jobs {
            let start = Instant::now();
            let m = arc_moment(spec, &d, region, samples)?;
            let params = if id == format!("abs{}", k + 2) {
                format!("power={}", k + 2)
            } else {
                params.clone()
            };
            moments.push(
                "expsum_arcs::arc_moment",
                vec![
                    id.into(),
                    p.into(),
                    k.into(),
                    params.into(),
                    label.into(),
                    m.value.into(),
                    m.err_est.into(),
                    start.elapsed().as_secs_f64().into(),
                ],
            );
        }
        let pu = p.floor() as u64;
        match weyl_ratio(pu, k, &policy) {
            Ok(r) => weyl.push(
                "expsum_arcs::weyl_ratio",
                vec![
                    p.into(),
                    k.into(),
                    cfg.seed.into(),
                    points.into(),
                    r.kept.into(),
                    r.rejected.into(),
                    r.max_ratio.into(),
                    r.argmax_alpha.into(),
                ],
            ),
            Err(e) => report.notes.push(format!("weyl ratio at P={p}: {e}")),
        }
        let ws: Vec<f64> = if ws.is_empty() {
            let root = p.sqrt();
            vec![root / 2.0, root, (2.0 * root).min(p)]
        } else {
            ws.to_vec()
        };
        let fit = w_exponent(&even, p, k, &ws, samples)?;
        for (w, v) in &fit.points {
            wexp.push(
                "expsum_arcs::w_exponent",
                vec![p.into(), k.into(), (*w).into(), (*v).into(), fit.slope.into()],
            );
        }
    }
    report.tables.extend([dump, moments, weyl, wexp]);
    Ok(())
}

fn diff(cfg: &RunConfig, h: &[u64], primes: &[u64], report: &mut Report) -> CliResult<()> {
    let k = cfg.k_or(3);
    if h.len() != primes.len() {
        return Err(CliError::config(format!("{} steps but {} primes", h.len(), primes.len())));
    }
    if let Some(p) = primes.iter().find(|p| !is_prime(**p)) {
        return Err(CliError::config(format!("{p} is not prime")));
    }
    let mut table = Table::new("psi", &["k", "i", "h", "p", "polynomial", "degree", "leading", "expected_leading"]);
    for i in 0..=h.len() {
        let c = psi(k, &h[..i], &primes[..i])?;
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        table.push(
            "differences::psi",
            vec![
                k.into(),
                i.into(),
                join(&c.h).into(),
                join(&c.p).into(),
                c.result.to_string().into(),
                (c.result.degree() as i64).into(),
                c.result.leading().to_string().into(),
                expected_leading(k, &c.h).to_string().into(),
            ],
        );
    }
    let s = cfg.s.unwrap_or(k + 2);
    let variant = if cfg.paper_faithful {
        ThetaVariant::Full
    } else {
        ThetaVariant::Truncated
    };
    let delta_prev = delta_iterate_with(k, s.max(3), variant)?
        .delta_at(s.max(3) - 1)
        .ok_or_else(|| CliError::config("s too small"))?;
    let schedule = theta_schedule(k, delta_prev)?;
    let ln_p = cfg.p_or(&[1e6])[0].ln();
    let g = Geometry::from_schedule(&schedule, s.max(3), ln_p)?;
    let mut balance = Table::new(
        "balance",
        &["k", "s", "delta_prev", "i", "theta_next", "ln_u", "ln_v", "residual"],
    );
    for t in lemma7_all(&g, &Counts::model_for(&schedule, s.max(3)))? {
        balance.push(
            "differences::lemma7_all",
            vec![
                k.into(),
                s.max(3).into(),
                delta_prev.into(),
                t.i.into(),
                schedule.theta(t.i + 1).into(),
                t.ln_u.into(),
                t.ln_v.into(),
                t.residual.into(),
            ],
        );
    }
    report.notes.push(format!("balance uses model counts and the {variant:?} delta iteration"));
    report.tables.extend([table, balance]);
    Ok(())
}

/// Parses `p,q` for `count --pq`.
pub fn parse_pq(value: &str) -> CliResult<(u64, u64)> {
    match parse_list::<u64>("pq", value)?.as_slice() {
        &[p, q] => Ok((p, q)),
        _ => Err(CliError::config(format!("pq must be two primes p,q, got {value:?}"))),
    }
}
