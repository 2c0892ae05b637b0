use std::fmt::Write as _;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use spreadlab::canon::{canonical_code, are_isomorphic};
use spreadlab::enumerate;
use spreadlab::expansion::{self, Branch, ExpansionEstimate};
use spreadlab::extremal::{self, ScanResult};
use spreadlab::graph6;
use spreadlab::harness;
use spreadlab::minor::{self, MinorOptions};
use spreadlab::psi;
use spreadlab::spectra::{self, RegularPart};
use spreadlab::Graph;

use crate::output::{real, Report, Table};
use crate::{Cli, CliError, Command};

/// Limits adjustable through `--caps`.
pub struct Caps {
    pub minor: usize,
    pub census: usize,
    pub psi: usize,
}

pub fn caps(spec: Option<&str>) -> Result<Caps, CliError> {
    let mut caps = Caps {
        minor: minor::DEFAULT_CAP,
        census: enumerate::DEFAULT_CAP,
        psi: psi::S_CAP,
    };
    let Some(spec) = spec else { return Ok(caps) };
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Malformed(format!("cap `{item}` is not key=value")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| CliError::Malformed(format!("cap `{item}` needs an integer value")))?;
        match key.trim() {
            "minor" => caps.minor = value,
            "census" => caps.census = value,
            "psi" => caps.psi = value,
            other => return Err(CliError::Malformed(format!("unknown cap `{other}`; known: minor, census, psi"))),
        }
    }
    Ok(caps)
}

fn read_graph(arg: &str) -> Result<Graph, CliError> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Malformed(format!("reading stdin: {e}")))?;
        buf
    } else {
        arg.to_string()
    };
    Ok(graph6::decode(&text)?)
}

pub fn run(cli: &Cli, caps: &Caps) -> Result<Report, CliError> {
    match &cli.command {
        Command::Spread { graph } => spread(graph),
        Command::Construct { s, t, n, ell, head } => construct(*s, *t, *n, *ell, head.as_deref()),
        Command::PsiMax { s, t } => psi_max(*s, *t, caps),
        Command::Admissible { s_max, t_max } => admissible(*s_max, *t_max, caps),
        Command::Ell0 { s, t, n } => ell0(*s, *t, *n),
        Command::ScanEll { s, t, n, head } => scan_ell(*s, *t, *n, head.as_deref()),
        Command::Minor { g, h } => minor_cmd(g, h, caps),
        Command::KstMinor { graph, s, t, mader } => kst_minor(graph, *s, *t, *mader, caps),
        Command::Search { n, s, t } => search(*n, *s, *t, caps),
        Command::Converge { s, t, n } => converge(*s, *t, n),
        Command::Expand { left, right, k, t } => expand(left, right, *k, *t),
        Command::Selfcheck { count } => selfcheck(cli.seed, *count),
    }
}

fn spread(arg: &str) -> Result<Report, CliError> {
    let g = read_graph(arg)?;
    let spec = spectra::eigenvalues(&g);
    let text = format!(
        "order {}\nedges {}\nspread {}\n",
        g.order(),
        g.edge_count(),
        real(spec.spread)
    );
    let mut table = Table::new(&["index", "eigenvalue"]);
    for (i, x) in spec.eigenvalues.iter().enumerate() {
        table.push(vec![i.to_string(), real(*x)]);
    }
    Ok(Report::new("spread", json!({ "graph": graph6::encode(&g) }), json!({
        "order": g.order(),
        "edges": g.edge_count(),
        "eigenvalues": spec.eigenvalues,
        "spread": spec.spread,
    }))
    .text(text)
    .table(table))
}

fn construct(s: usize, t: usize, n: usize, ell: Option<usize>, head: Option<&str>) -> Result<Report, CliError> {
    if s < 2 {
        return Err(CliError::Refused(format!("need s ≥ 2, got {s}")));
    }
    let head = match head {
        Some(text) => read_graph(text)?,
        None => Graph::empty(s - 1)?,
    };
    if head.order() != s - 1 {
        return Err(CliError::Refused(format!("head must have s − 1 = {} vertices", s - 1)));
    }
    let mut report_notes = Vec::new();
    let ell = match ell {
        Some(ell) => ell,
        None => {
            let c = extremal::ell_zero(s, t, n)?;
            if c.ell_candidates.len() > 1 {
                report_notes.push(format!("ℓ₁ is a half-integer; candidates {:?}, building the first", c.ell_candidates));
            }
            c.ell_candidates[0]
        }
    };
    let g = Graph::build_extremal(&head, ell, n, t)?;
    let spec = spectra::eigenvalues(&g);
    let code = graph6::encode(&g);
    let text = format!("graph6 {code}\nell {ell}\nedges {}\nspread {}\n", g.edge_count(), real(spec.spread));
    let mut report = Report::new(
        "construct",
        json!({ "s": s, "t": t, "n": n, "ell": ell, "head": graph6::encode(&head) }),
        json!({ "graph6": code, "ell": ell, "edges": g.edge_count(), "spread": spec.spread, "eigenvalues": spec.eigenvalues }),
    )
    .text(text);
    for note in report_notes {
        report = report.note(note);
    }
    Ok(report)
}

fn psi_max(s: usize, t: usize, caps: &Caps) -> Result<Report, CliError> {
    let r = psi::maximize_psi_with_cap(s, t, caps.psi)?;
    let text = format!(
        "psi_max {}\nadmissible {}\nwitness {}\noptimal sequences {}\n",
        r.psi_max,
        r.admissible,
        graph6::encode(&r.witness),
        r.optimal_degree_sequences
            .iter()
            .map(|d| format!("{:?}", d.0))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let mut table = Table::new(&["degree_sequence"]);
    for d in &r.optimal_degree_sequences {
        table.push(vec![d.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")]);
    }
    Ok(Report::new("psi-max", json!({ "s": s, "t": t }), &r).text(text).table(table))
}

#[derive(Serialize)]
struct AdmissibleCell {
    s: usize,
    t: usize,
    admissible: bool,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_agrees: Option<bool>,
}

fn admissible(s_max: usize, t_max: usize, caps: &Caps) -> Result<Report, CliError> {
    if s_max < 2 || t_max < 2 {
        return Err(CliError::Refused("need s-max ≥ 2 and t-max ≥ 2".into()));
    }
    let mut cells = Vec::new();
    let mut disagreements = 0;
    for s in 2..=s_max {
        for t in s..=t_max {
            let closed = psi::admissible_closed_form(s, t)?;
            if s <= caps.psi {
                let brute = psi::maximize_psi_with_cap(s, t, caps.psi)?.admissible;
                disagreements += (brute != closed) as usize;
                cells.push(AdmissibleCell { s, t, admissible: brute, method: "exhaustive", closed_form_agrees: Some(brute == closed) });
            } else {
                cells.push(AdmissibleCell { s, t, admissible: closed, method: "closed_form", closed_form_agrees: None });
            }
        }
    }
    let lookup = |s: usize, t: usize| cells.iter().find(|c| c.s == s && c.t == t);
    let mut header = vec!["s".to_string()];
    header.extend((2..=t_max).map(|t| format!("t={t}")));
    let mut table = Table { header, rows: Vec::new() };
    let mut text = String::new();
    for s in 2..=s_max {
        let mut row = vec![s.to_string()];
        let _ = write!(text, "s={s:<3}");
        for t in 2..=t_max {
            let cell = match lookup(s, t) {
                Some(c) if c.admissible => "yes",
                Some(_) => "no",
                None => "-",
            };
            let _ = write!(text, " {cell:>3}");
            row.push(cell.to_string());
        }
        text.push('\n');
        table.push(row);
    }
    let mut report = Report::new(
        "admissible",
        json!({ "s_max": s_max, "t_max": t_max }),
        json!({ "cells": cells, "disagreements": disagreements }),
    )
    .text(text)
    .table(table)
    .note("s = 2 is admissible for every t: the only head is K₁ and ψ(K₁) = 0");
    if s_max > caps.psi {
        report = report.note(format!("rows with s > {} use the closed form only", caps.psi));
    }
    Ok(report)
}

fn ell0(s: usize, t: usize, n: usize) -> Result<Report, CliError> {
    let c = extremal::ell_zero(s, t, n)?;
    let mut text = format!(
        "ell_one {}/{} ({})\nell0 {}\nformula_spread {}\n",
        c.ell_one.num,
        c.ell_one.den,
        real(c.ell_one.value),
        c.ell_candidates.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "),
        real(c.formula_spread)
    );
    for cand in &c.candidates {
        let _ = writeln!(
            text,
            "candidate ell={} spread={} xi∈[{}, {}]{}",
            cand.ell,
            real(cand.exact_spread),
            cand.xi_interval.0,
            cand.xi_interval.1,
            cand.graph.as_ref().map(|g| format!(" graph6={}", graph6::encode(g))).unwrap_or_default()
        );
    }
    Ok(Report::new("ell0", json!({ "s": s, "t": t, "n": n }), &c)
        .text(text)
        .note("ℓ₀ is the optimum for sufficiently large n; scan-ell gives the exact optimum at this n"))
}

fn scan_ell(s: usize, t: usize, n: usize, head: Option<&str>) -> Result<Report, CliError> {
    let head = head.map(read_graph).transpose()?;
    let r: ScanResult = extremal::scan_ell(s, t, n, head)?;
    let mut table = Table::new(&["ell", "spread"]);
    let mut text = format!(
        "head {}\nmethod {:?}\nbest_ell {:?}\nbest_spread {}\n",
        graph6::encode(&r.head),
        r.method,
        r.best_ells,
        real(r.best_spread)
    );
    for row in &r.table {
        table.push(vec![row.ell.to_string(), real(row.spread)]);
        let _ = writeln!(text, "{:>5} {}", row.ell, real(row.spread));
    }
    let mut report = Report::new("scan-ell", json!({ "s": s, "t": t, "n": n }), &r).text(text).table(table);
    if !r.unimodal {
        report = report.note("spread is not unimodal in ℓ at this n");
    }
    Ok(report)
}

fn minor_cmd(g: &str, h: &str, caps: &Caps) -> Result<Report, CliError> {
    let g = read_graph(g)?;
    let h = read_graph(h)?;
    let found = minor::has_minor_with(&g, &h, MinorOptions { cap: caps.minor })?;
    let verified = found.as_ref().map(|w| minor::check_witness(&g, &h, w));
    let text = match &found {
        Some(w) => format!("minor yes\nbranch_sets {:?}\n", w.branch_sets),
        None => "minor no\n".to_string(),
    };
    Ok(Report::new(
        "minor",
        json!({ "g": graph6::encode(&g), "h": graph6::encode(&h) }),
        json!({ "has_minor": found.is_some(), "witness": found, "witness_verified": verified }),
    )
    .text(text))
}

fn kst_minor(arg: &str, s: usize, t: usize, mader: Option<f64>, caps: &Caps) -> Result<Report, CliError> {
    let g = read_graph(arg)?;
    let constant = mader.unwrap_or_else(|| minor::default_mader_constant(t));
    let filters = minor::edge_filters(&g, s, t, constant);
    let found = minor::has_kst_minor_with(&g, s, t, MinorOptions { cap: caps.minor })?;
    let verified = found.as_ref().map(|w| {
        let h = Graph::construct(spreadlab::Family::CompleteBipartite(s, t)).expect("s, t validated by search");
        minor::check_witness(&g, &h, w)
    });
    let mut text = match &found {
        Some(w) => format!("K_({s},{t}) minor yes\nbranch_sets {:?}\n", w.branch_sets),
        None => format!("K_({s},{t}) minor no\n"),
    };
    let mut table = Table::new(&["filter", "verdict", "bound"]);
    for f in &filters.filters {
        let _ = writeln!(text, "filter {} {:?} {}", f.name, f.verdict, f.note);
        table.push(vec![
            f.name.to_string(),
            format!("{:?}", f.verdict).to_lowercase(),
            f.bound.map(real).unwrap_or_default(),
        ]);
    }
    Ok(Report::new(
        "kst-minor",
        json!({ "graph": graph6::encode(&g), "s": s, "t": t, "mader_constant": constant }),
        json!({ "has_minor": found.is_some(), "witness": found, "witness_verified": verified, "filters": filters }),
    )
    .text(text)
    .table(table)
    .note("the Mader constant is heuristic and never decides minor-freeness"))
}

fn search(n: usize, s: usize, t: usize, caps: &Caps) -> Result<Report, CliError> {
    let r = harness::search_max_spread_with_cap(n, s, t, caps.census)?;
    let mut text = format!(
        "classes {}\nminor_free {}\nbest_spread {}\nbest_graphs {}\n",
        r.total_classes,
        r.census_size,
        real(r.best_spread),
        r.best_graphs.join(" ")
    );
    if let Some(gap) = r.runner_up_gap {
        let _ = writeln!(text, "runner_up_gap {}", real(gap));
    }
    for (code, m) in r.best_graphs.iter().zip(&r.family_membership) {
        let _ = match m {
            Some(m) => writeln!(text, "{code} in family: head {} ell {}", graph6::encode(&m.head), m.ell),
            None => writeln!(text, "{code} not in family"),
        };
    }
    let mut table = Table::new(&["graph6", "spread", "in_family"]);
    for (code, m) in r.best_graphs.iter().zip(&r.family_membership) {
        table.push(vec![code.clone(), real(r.best_spread), m.is_some().to_string()]);
    }
    let mut report = Report::new("search", json!({ "n": n, "s": s, "t": t }), &r)
        .text(text)
        .table(table)
        .note("family membership at small n is observational; the extremal results are asymptotic");
    report = match r.tait.consistent {
        Some(true) => report.note("spectral radii consistent with the Tait bound at this n"),
        Some(false) => report.note("spectral radii INCONSISTENT with the Tait bound at this n"),
        None => report.note("Tait bound not applicable: n < s + t"),
    };
    Ok(report)
}

fn converge(s: usize, t: usize, ns: &[usize]) -> Result<Report, CliError> {
    let table_data = harness::convergence_experiment(s, t, ns)?;
    let mut table = Table::new(&["n", "ell", "exact", "approx", "residual", "ratio", "formula", "formula_scaled_gap"]);
    let mut text = String::from("       n    ell  exact                 residual     ratio\n");
    for row in &table_data.rows {
        table.push(vec![
            row.n.to_string(),
            row.ell.to_string(),
            real(row.exact_spread),
            real(row.approx_spread),
            real(row.residual),
            row.ratio.map(real).unwrap_or_default(),
            real(row.formula_spread),
            real(row.formula_scaled_gap),
        ]);
        let _ = writeln!(
            text,
            "{:>8} {:>6}  {:<20.15} {:>12.4e} {:>9}",
            row.n,
            row.ell,
            row.exact_spread,
            row.residual,
            row.ratio.map(|r| format!("{r:.3}")).unwrap_or_default()
        );
    }
    let _ = writeln!(text, "fitted C {}", real(table_data.fitted_c));
    Ok(Report::new("converge", json!({ "s": s, "t": t, "n": ns }), &table_data)
        .text(text)
        .table(table)
        .note("residuals are exact minus approx in 256-bit fixed point; no absolute bound is asserted"))
}

fn expand(left: &str, right: &str, k: usize, t: Option<usize>) -> Result<Report, CliError> {
    let l = read_graph(left)?;
    let r = read_graph(right)?;
    let series = expansion::moment_series(&l, &r, k.max(6))?;
    let estimate = ExpansionEstimate::from_series(&series)?;
    let mut report_notes = Vec::new();
    let implicit = match (
        expansion::solve_implicit_lambda(&series, Branch::Positive, k),
        expansion::solve_implicit_lambda(&series, Branch::Negative, k),
    ) {
        (Ok(plus), Ok(minus)) => Some(json!({ "lambda_plus": plus, "lambda_minus": minus, "spread": plus - minus })),
        (a, b) => {
            let e = a.err().or(b.err()).expect("one branch failed");
            report_notes.push(format!("implicit solver: {e}"));
            None
        }
    };
    let exact = l.join(&r).ok().map(|g| spectra::spread(&g));
    let t_used = t.unwrap_or(r.max_degree() + 1);
    let residual = expansion::c2_decomposition_check(&l, &r, t_used)?;
    let mut text = format!(
        "a0 {}\nc2 {}/{}\nc4 {}/{}\nc6 {}/{}\napprox_spread {}\n",
        estimate.a0,
        estimate.c2.num,
        estimate.c2.den,
        estimate.c4.num,
        estimate.c4.den,
        estimate.c6.num,
        estimate.c6.den,
        real(estimate.approx_spread)
    );
    if let Some(x) = exact {
        let _ = writeln!(text, "exact_spread {}", real(x));
    }
    if let Some(v) = &implicit {
        let _ = writeln!(text, "implicit_spread {}", v["spread"]);
    }
    let _ = writeln!(text, "c2_decomposition_residual {} (t = {t_used})", real(residual));
    let mut report = Report::new(
        "expand",
        json!({ "left": graph6::encode(&l), "right": graph6::encode(&r), "k": k, "t": t_used }),
        json!({
            "estimate": estimate,
            "moments": series,
            "implicit": implicit,
            "exact_spread": exact,
            "c2_decomposition_residual": residual,
        }),
    )
    .text(text);
    for note in report_notes {
        report = report.note(note);
    }
    Ok(report)
}

#[derive(Serialize, Default)]
struct CheckTally {
    name: &'static str,
    passed: usize,
    failed: usize,
}

fn random_graph(rng: &mut ChaCha8Rng, order: std::ops::RangeInclusive<usize>) -> Graph {
    let n = rng.gen_range(order);
    let p = rng.gen_range(0.1..0.9);
    Graph::from_fn(n, |_, _| rng.gen_bool(p)).expect("order within cap")
}

fn shuffled(rng: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let mut perm: Vec<usize> = (0..g.order()).collect();
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    g.relabel(&perm)
}

fn selfcheck(seed: u64, count: usize) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = vec![
        CheckTally { name: "graph6_round_trip", ..Default::default() },
        CheckTally { name: "canonical_code_invariance", ..Default::default() },
        CheckTally { name: "c2_decomposition", ..Default::default() },
        CheckTally { name: "join_regular_spectrum", ..Default::default() },
        CheckTally { name: "minor_witness", ..Default::default() },
    ];
    let mut record = |idx: usize, ok: bool| {
        if ok {
            tallies[idx].passed += 1;
        } else {
            tallies[idx].failed += 1;
        }
    };
    for _ in 0..count {
        let g = random_graph(&mut rng, 1..=64);
        record(0, graph6::decode(&graph6::encode(&g)).map(|back| back == g).unwrap_or(false));

        let g = random_graph(&mut rng, 1..=9);
        let h = shuffled(&mut rng, &g);
        record(1, canonical_code(&g)? == canonical_code(&h)? && are_isomorphic(&g, &h));

        let l = random_graph(&mut rng, 1..=5);
        let r = random_graph(&mut rng, 1..=12);
        record(2, expansion::c2_decomposition_check(&l, &r, rng.gen_range(2..=6))? == 0.0);

        let a = circulant(&mut rng, 1..=10);
        let b = circulant(&mut rng, 1..=10);
        let closed = spectra::join_regular_spectrum(&RegularPart::from_graph(&a)?, &RegularPart::from_graph(&b)?);
        let dense = spectra::eigenvalues(&a.join(&b)?);
        record(3, closed.approx_eq(&dense, 1e-9));

        let g = random_graph(&mut rng, 4..=8);
        let h = Graph::construct(spreadlab::Family::CompleteBipartite(2, 3))?;
        let ok = match minor::has_minor(&g, &h)? {
            Some(w) => minor::check_witness(&g, &h, &w),
            None => true,
        };
        record(4, ok);
    }
    let failed: usize = tallies.iter().map(|t| t.failed).sum();
    let mut text = String::new();
    for t in &tallies {
        let _ = writeln!(text, "{:<28} passed {:>5} failed {:>3}", t.name, t.passed, t.failed);
    }
    let mut table = Table::new(&["check", "passed", "failed"]);
    for t in &tallies {
        table.push(vec![t.name.to_string(), t.passed.to_string(), t.failed.to_string()]);
    }
    let report = Report::new("selfcheck", json!({ "seed": seed, "count": count }), json!({ "checks": tallies, "failed": failed }))
        .text(text)
        .table(table);
    if failed > 0 {
        return Err(CliError::Refused(format!("{failed} self-check failures:\n{}", report.to_text())));
    }
    Ok(report)
}

/// Random circulant graph: regular by construction.
fn circulant(rng: &mut ChaCha8Rng, order: std::ops::RangeInclusive<usize>) -> Graph {
    let n = rng.gen_range(order);
    let jumps: Vec<usize> = (1..=n / 2).filter(|_| rng.gen_bool(0.5)).collect();
    Graph::from_fn(n, |u, v| {
        let d = (v + n - u) % n;
        jumps.iter().any(|&j| d == j || d == n - j)
    })
    .expect("order within cap")
}
