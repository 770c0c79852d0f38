use std::collections::BTreeSet;
use std::fs;
use std::str::FromStr;

use serde_json::json;

use rankgrad::chains::{farber_chain, gradient_sequence, hnn_chain, lamplighter_chain, Chain, ChainCaps, ChainError, ChainProvenance, LevelOutcome};
use rankgrad::coset::{counts_by_index, low_index, LowIndexError};
use rankgrad::graphings::{graphing_from_generators, is_l_graphing, minimize_graphing, LCheck, MinimizeBudget};
use rankgrad::presets::preset;
use rankgrad::subgroup::rank_bounds;
use rankgrad::towers::{build_tower, finite_group, tower_report};
use rankgrad::words::{parse_presentation, PresentationFile};
use rankgrad::{CosetTable, Fraction, Presentation, SubgroupSpec, Word};

use crate::cache::{enumerate_cached, Cache};
use crate::config::{ChainArgs, ChainKind, Cli, Command, Global, Source};
use crate::error::CliError;
use crate::render::{Cell, Output, Table};

/// Ratio comparisons that the tower report is expected to fail: the
/// alternative first Betti number formula is reported, not enforced.
const INFORMATIONAL: [&str; 1] = ["beta1 = n-np+1"];

struct Ctx<'a> {
    g: &'a Global,
    cache: Option<Cache>,
}

impl Ctx<'_> {
    fn caps(&self) -> ChainCaps {
        ChainCaps { coset_cap: self.g.coset_cap, node_cap: self.g.node_cap, index_cap: self.g.index_cap, ..ChainCaps::default() }
    }

    fn enumerate(&self, p: &Presentation, s: &SubgroupSpec) -> Result<CosetTable, CliError> {
        let (t, hit) = enumerate_cached(self.cache.as_ref(), p, s, self.g.coset_cap)?;
        if hit {
            eprintln!("cache hit: {}", s.canonical_text(p.names()));
        }
        Ok(t)
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let cache = if g.no_cache { None } else { Cache::resolve(g.cache_dir.as_deref()) };
    let ctx = Ctx { g, cache };
    match &cli.command {
        Command::Enumerate { source, subgroup, gens, normal } => enumerate_cmd(&ctx, source, subgroup.as_deref(), gens.as_deref(), *normal),
        Command::Lowindex { source, max, list } => lowindex_cmd(&ctx, source, *max, *list),
        Command::Chain { source, chain } => chain_cmd(&ctx, source, chain),
        Command::Gradient { source, subgroups } => gradient_cmd(&ctx, source, subgroups),
        Command::Graphing { source, chain, level, minimize, iterations } => graphing_cmd(&ctx, source, chain, *level, *minimize, *iterations),
        Command::Tower { source, mu, depth, prime, attempts } => tower_cmd(&ctx, source, mu, *depth, *prime, *attempts),
        Command::Validate { source, table } => validate_cmd(&ctx, source, table.as_deref()),
    }
}

fn load(source: &Source) -> Result<(PresentationFile, Option<String>), CliError> {
    match (&source.preset, &source.input) {
        (Some(name), _) => {
            let f = preset(name).ok_or_else(|| CliError::Parse(format!("unknown preset `{name}`; known: {}", rankgrad::presets::PRESET_NAMES.join(", "))))?;
            Ok((f, Some(name.clone())))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok((parse_presentation(&text)?, None))
        }
        (None, None) => Err(CliError::Parse("one of --preset or --input is required".into())),
    }
}

fn named<'f>(f: &'f PresentationFile, name: &str) -> Result<&'f SubgroupSpec, CliError> {
    f.subgroup(name).ok_or_else(|| CliError::Parse(format!("no subgroup named `{name}`")))
}

fn parse_gens(p: &Presentation, text: &str) -> Result<Vec<Word>, CliError> {
    text.split(',').map(str::trim).filter(|w| !w.is_empty()).map(|w| p.parse_word(w).map_err(CliError::from)).collect()
}

fn words(p: &Presentation, ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| p.display_word(w)).collect()
}

fn perms_json(p: &Presentation, t: &CosetTable) -> serde_json::Value {
    let m: serde_json::Map<String, serde_json::Value> = p.names().iter().enumerate().map(|(g, name)| (name.clone(), json!(t.perm(g)))).collect();
    serde_json::Value::Object(m)
}

fn enumerate_cmd(ctx: &Ctx, source: &Source, subgroup: Option<&str>, gens: Option<&str>, normal: bool) -> Result<Output, CliError> {
    let (f, _) = load(source)?;
    let p = &f.presentation;
    let mut spec = match (subgroup, gens) {
        (Some(name), _) => named(&f, name)?.clone(),
        (None, Some(text)) => SubgroupSpec::new(parse_gens(p, text)?),
        (None, None) => return Err(CliError::Parse("one of --subgroup or --gens is required".into())),
    };
    spec.normal |= normal;
    let t = ctx.enumerate(p, &spec)?;
    let violations: Vec<String> = t.validate(p).iter().map(ToString::to_string).collect();

    let mut cols = vec!["coset"];
    cols.extend(p.names().iter().map(String::as_str));
    let mut table = Table::new(&cols);
    for c in 0..t.index() {
        let mut row: Vec<Cell> = vec![c.into()];
        row.extend((0..p.ngens()).map(|g| Cell::from(t.perm(g)[c] as usize)));
        table.push(row);
    }
    let subgroup_text = spec.canonical_text(p.names());
    let result = json!({
        "subgroup": subgroup_text,
        "index": t.index(),
        "normal": t.is_normal(),
        "generators": perms_json(p, &t),
        "violations": violations,
    });
    let mut out = Output::new(result, table).summary("subgroup", &subgroup_text).summary("index", t.index()).summary("normal", t.is_normal());
    if !violations.is_empty() {
        out.failure = Some(CliError::Invariant(format!("enumerated table fails validation: {}", violations.join("; "))));
    }
    Ok(out)
}

fn lowindex_cmd(ctx: &Ctx, source: &Source, max: usize, list: bool) -> Result<Output, CliError> {
    let (f, _) = load(source)?;
    let p = &f.presentation;
    let (tables, stop) = match low_index(p, max, ctx.g.node_cap) {
        Ok(t) => (t, None),
        Err(LowIndexError::Budget { nodes, partial }) => (partial, Some(format!("node budget of {nodes} exhausted; counts are lower bounds"))),
    };
    let counts = counts_by_index(&tables, max);
    let normal_tables: Vec<&CosetTable> = tables.iter().filter(|t| t.is_normal()).collect();
    let normal = (1..=max).map(|n| normal_tables.iter().filter(|t| t.index() == n).count()).collect::<Vec<_>>();
    let mut table = Table::new(&["index", "subgroups", "normal"]);
    for n in 1..=max {
        table.push(vec![n.into(), counts[n - 1].into(), normal[n - 1].into()]);
    }
    let mut result = json!({ "max": max, "counts": counts, "normal_counts": normal, "total": tables.len() });
    if list {
        result["tables"] = tables.iter().map(|t| json!({ "index": t.index(), "normal": t.is_normal(), "generators": perms_json(p, t) })).collect();
    }
    let mut out = Output::new(result, table).summary("total", tables.len());
    if let Some(s) = stop {
        out.truncated = Some(s.clone());
        out.failure = Some(CliError::Budget(s));
    }
    Ok(out)
}

fn resolve_kind(kind: ChainKind, p: &Presentation, preset_name: Option<&str>) -> ChainKind {
    match kind {
        ChainKind::Auto if preset_name.is_some_and(|n| n.starts_with("lamplighter")) => ChainKind::Lamplighter,
        ChainKind::Auto if p.ngens() >= 2 && p.generator_index("t").is_some() => ChainKind::Hnn,
        ChainKind::Auto => ChainKind::Farber,
        k => k,
    }
}

fn build_chain(ctx: &Ctx, f: &PresentationFile, preset_name: Option<&str>, args: &ChainArgs) -> Result<Chain, CliError> {
    let p = &f.presentation;
    let caps = ctx.caps();
    let chain = match resolve_kind(args.kind, p, preset_name) {
        ChainKind::Hnn => hnn_chain(p, &args.stable, args.depth, &caps)?,
        ChainKind::Lamplighter => {
            let m = preset_name
                .and_then(|n| n.strip_prefix("lamplighter"))
                .and_then(|m| m.parse().ok())
                .ok_or_else(|| CliError::Parse("lamplighter chains need a lamplighter<m> preset".into()))?;
            lamplighter_chain(m, args.depth as u32, &caps)?
        }
        _ => {
            let h = match &args.subgroup {
                Some(name) => named(f, name)?.clone(),
                None => SubgroupSpec::new((0..p.ngens()).map(Word::generator).collect()),
            };
            farber_chain(p, &h, args.depth, &caps)?
        }
    };
    Ok(chain)
}

/// Per-level rows of a gradient report plus the sequence-order
/// monotonicity of the upper-bound ratio.
fn gradient_output(chain: &Chain, primes: &[u64], ctx: &Ctx) -> Output {
    let report = gradient_sequence(chain, primes, ctx.g.tietze_level());
    let mut cols: Vec<String> = ["n", "index", "stabilized", "rank_lower", "rank_upper", "exact", "beta1"].iter().map(|s| s.to_string()).collect();
    cols.extend(primes.iter().map(|p| format!("b1_{p}")));
    cols.extend(["ratio_rank_upper", "ratio_rank_lower", "ratio_beta1"].iter().map(|s| s.to_string()));
    cols.extend(primes.iter().map(|p| format!("ratio_b1_{p}")));
    cols.push("error".into());
    let mut table = Table { columns: cols, rows: Vec::new() };
    for l in &report.levels {
        let mut row: Vec<Cell> = Vec::new();
        match l {
            LevelOutcome::Ok(r) => {
                row.extend([r.n.into(), r.index.into(), r.stabilized.into(), r.rank_lower.into(), r.rank_upper.into(), r.exact.into(), r.beta1.into()]);
                row.extend(primes.iter().map(|p| Cell::from(r.b1p.get(p).copied())));
                row.extend([(&r.ratio_rank_upper).into(), (&r.ratio_rank_lower).into(), (&r.ratio_beta1).into()]);
                row.extend(primes.iter().map(|p| Cell::from(r.ratio_b1p.get(p))));
                row.push(Cell::Empty);
            }
            LevelOutcome::Failed { n, index, error } => {
                row.extend([(*n).into(), (*index).into()]);
                row.resize(table.columns.len() - 1, Cell::Empty);
                row.push(error.as_str().into());
            }
        }
        table.push(row);
    }
    let ratios: Vec<&Fraction> = report.reports().map(|r| &r.ratio_rank_upper).collect();
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0]);
    let nested = chain.verify_nested();
    let result = json!({
        "indices": chain.indices(),
        "parents": chain.levels.iter().map(|l| l.parent).collect::<Vec<_>>(),
        "nested": nested.is_ok(),
        "ratio_rank_upper_nonincreasing": monotone,
        "gradient": report,
    });
    let mut out = Output::new(result, table)
        .summary("chain", &chain.provenance.kind)
        .summary("ambient_rank_upper", report.ambient_rank_upper)
        .summary("nested", nested.is_ok())
        .summary("ratio_rank_upper_nonincreasing", monotone);
    out.truncated = report.truncated.clone();
    if let Err(e) = nested {
        out.failure = Some(CliError::Invariant(e.to_string()));
    }
    out
}

fn chain_cmd(ctx: &Ctx, source: &Source, args: &ChainArgs) -> Result<Output, CliError> {
    let (f, name) = load(source)?;
    let chain = build_chain(ctx, &f, name.as_deref(), args)?;
    Ok(gradient_output(&chain, &ctx.g.primes, ctx))
}

fn gradient_cmd(ctx: &Ctx, source: &Source, names: &[String]) -> Result<Output, CliError> {
    let (f, _) = load(source)?;
    let p = &f.presentation;
    let names: Vec<String> = if names.is_empty() { f.subgroups.iter().map(|s| s.name.clone()).collect() } else { names.to_vec() };
    if names.is_empty() {
        return Err(CliError::Parse("the presentation declares no subgroups".into()));
    }
    let mut raw = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let spec = named(&f, name)?.clone();
        let t = ctx.enumerate(p, &spec)?;
        raw.push((k + 1, t, spec));
    }
    let provenance = ChainProvenance::new("named", &[("subgroups", names.join(","))]);
    let chain = Chain::from_levels(p.clone(), raw, provenance).map_err(|e| match e {
        // the user chose the subgroups, so a broken chain is bad input
        ChainError::NotNested { .. } => CliError::Parse(e.to_string()),
        e => e.into(),
    })?;
    Ok(gradient_output(&chain, &ctx.g.primes, ctx))
}

fn graphing_cmd(ctx: &Ctx, source: &Source, args: &ChainArgs, n: usize, minimize: bool, iterations: usize) -> Result<Output, CliError> {
    let (f, name) = load(source)?;
    let chain = build_chain(ctx, &f, name.as_deref(), args)?;
    let p = &chain.ambient;
    let level = chain.level(n).ok_or_else(|| CliError::Parse(format!("chain has no level {n}; levels are {:?}", chain.levels.iter().map(|l| l.n).collect::<Vec<_>>())))?;
    let gens = level.spec.generators.clone();
    let m = graphing_from_generators(&chain, n, &gens)?;
    let check = is_l_graphing(&m, &chain, n, ctx.g.coset_cap)?;
    let bound = check.is_true().then(|| m.incidence_count() + 1 - m.index());
    let rb = rank_bounds(p, &level.table, &ctx.g.primes, ctx.g.tietze_level())?;

    let mut table = Table::new(&["label", "cosets"]);
    let entries = m.entries(p.names());
    for e in &entries {
        table.push(vec![e.label.as_str().into(), e.cosets.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ").into()]);
    }
    let mut result = json!({
        "level": n,
        "index": m.index(),
        "generators": words(p, &gens),
        "entries": entries,
        "incidences": m.incidence_count(),
        "edge_measure": m.edge_measure(),
        "l_graphing": check,
        "rank_bound": bound,
        "rank_lower": rb.lower,
        "rank_upper": rb.upper,
    });
    let mut out_summary = vec![
        ("index", m.index().to_string()),
        ("edge_measure", m.edge_measure().to_string()),
        ("l_graphing", check.is_true().to_string()),
        ("rank_bound", bound.map_or("-".into(), |b| b.to_string())),
        ("rank_interval", format!("[{}, {}]", rb.lower, rb.upper)),
    ];
    if minimize {
        let budget = MinimizeBudget { label_cap: ctx.g.label_cap, iterations, coset_cap: ctx.g.coset_cap, seed: ctx.g.seed };
        let r = minimize_graphing(&chain, n, &budget)?;
        result["minimized"] = json!({
            "entries": r.graphing.entries(p.names()),
            "edge_measure": r.graphing.edge_measure(),
            "bound": r.bound,
            "seed_bound": r.seed_bound,
            "certified": r.certified,
            "checks": r.checks,
        });
        out_summary.push(("minimized_bound", r.bound.to_string()));
        out_summary.push(("minimized_certified", r.certified.to_string()));
    }
    let mut out = Output::new(result, table);
    for (k, v) in out_summary {
        out = out.summary(k, v);
    }
    match check {
        LCheck::True { .. } => {}
        LCheck::False { reason } => out.failure = Some(CliError::Invariant(format!("generating-set graphing is not an L-graphing: {reason}"))),
        LCheck::Indeterminate { reason } => out.failure = Some(CliError::Budget(reason)),
    }
    Ok(out)
}

fn tower_cmd(ctx: &Ctx, source: &Source, mu: &str, depth: usize, prime: Option<u64>, attempts: usize) -> Result<Output, CliError> {
    let (f, _) = load(source)?;
    let mu = Fraction::from_str(mu).map_err(CliError::Parse)?;
    let prime = prime.or(ctx.g.primes.first().copied()).unwrap_or(2);
    let mut primes: BTreeSet<u64> = ctx.g.primes.iter().copied().collect();
    primes.insert(prime);
    let a = finite_group(&f.presentation, &primes.into_iter().collect::<Vec<_>>())?;
    let tower = build_tower(&a, mu.value(), depth, ctx.g.seed, attempts)?;
    let report = tower_report(&tower, &a, prime, ctx.g.tietze_level(), ctx.g.coset_cap)?;

    let mut table = Table::new(&[
        "j", "n", "p", "fixed", "regular", "mu", "radius", "rank_pred", "rank_lower", "rank_upper", "b1p_pred", "b1p", "beta1_pred", "beta1", "beta1_alt",
        "ratio_rank", "ratio_b1p", "ratio_beta1", "strict",
    ]);
    let mut mismatches = Vec::new();
    for l in &report.levels {
        table.push(vec![
            l.j.into(),
            l.n.into(),
            l.p.into(),
            l.fixed.into(),
            l.regular.into(),
            (&l.mu).into(),
            if l.radius.capped { format!(">={}", l.radius.value).into() } else { l.radius.value.into() },
            (&l.predicted.rank).into(),
            l.computed.rank_lower.into(),
            l.computed.rank_upper.into(),
            (&l.predicted.b1p).into(),
            l.computed.b1p.into(),
            (&l.predicted.beta1).into(),
            l.computed.beta1.into(),
            (&l.predicted.beta1_alt).into(),
            (&l.ratios[0]).into(),
            (&l.ratios[1]).into(),
            (&l.ratios[2]).into(),
            l.ratios_strictly_ordered.into(),
        ]);
        if !l.orbit_sum {
            mismatches.push(format!("level {}: orbit sizes do not add up to n", l.j));
        }
        for c in l.comparisons.iter().filter(|c| !c.matches && !INFORMATIONAL.contains(&c.quantity.as_str())) {
            mismatches.push(format!("level {}: {} predicted {} computed {}", l.j, c.quantity, c.predicted, c.computed));
        }
    }
    if !report.nested {
        mismatches.push("tower levels are not nested".into());
    }
    let alt_matches: Vec<bool> = report.levels.iter().map(|l| l.comparison(INFORMATIONAL[0]).is_some_and(|c| c.matches)).collect();
    let result = json!({ "report": report, "radii": tower.radii, "beta1_alt_matches": alt_matches });
    let mut out = Output::new(result, table)
        .summary("group", format!("{} (order {}, rank {})", report.group.trim().replace('\n', "; "), report.order, report.rank))
        .summary("mu_target", &report.mu_target)
        .summary("prime", report.prime)
        .summary("limits", report.limits.iter().map(ToString::to_string).collect::<Vec<_>>().join(" > "))
        .summary("limits_strictly_ordered", report.limits_strictly_ordered)
        .summary("nested", report.nested);
    if !mismatches.is_empty() {
        out.failure = Some(CliError::Invariant(mismatches.join("; ")));
    }
    Ok(out)
}

fn validate_cmd(ctx: &Ctx, source: &Source, table_path: Option<&std::path::Path>) -> Result<Output, CliError> {
    let (f, _) = load(source)?;
    let p = &f.presentation;
    let mut table = Table::new(&["subgroup", "index", "normal", "violations", "note"]);
    let mut subgroups = Vec::new();
    let mut failure = None;
    for s in &f.subgroups {
        match ctx.enumerate(p, &s.spec) {
            Ok(t) => {
                let v: Vec<String> = t.validate(p).iter().map(ToString::to_string).collect();
                if !v.is_empty() {
                    failure = Some(CliError::Invariant(format!("table of `{}` fails validation: {}", s.name, v.join("; "))));
                }
                table.push(vec![s.name.as_str().into(), t.index().into(), t.is_normal().into(), v.len().into(), Cell::Empty]);
                subgroups.push(json!({ "name": s.name, "index": t.index(), "normal": t.is_normal(), "violations": v }));
            }
            Err(CliError::Budget(e)) => {
                table.push(vec![s.name.as_str().into(), Cell::Empty, Cell::Empty, Cell::Empty, e.as_str().into()]);
                subgroups.push(json!({ "name": s.name, "index": null, "note": e }));
            }
            Err(e) => return Err(e),
        }
    }
    let mut result = json!({
        "generators": p.names(),
        "relators": p.relators().iter().map(|r| p.display_word(r)).collect::<Vec<_>>(),
        "canonical": f.canonical_text(),
        "subgroups": subgroups,
    });
    if let Some(path) = table_path {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let t: CosetTable = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let v: Vec<String> = t.validate(p).iter().map(ToString::to_string).collect();
        table.push(vec![path.display().to_string().into(), t.index().into(), t.is_normal().into(), v.len().into(), "table file".into()]);
        if !v.is_empty() {
            failure = Some(CliError::Parse(format!("table {} is not a coset table of this presentation: {}", path.display(), v.join("; "))));
        }
        result["table"] = json!({ "index": t.index(), "violations": v });
    }
    let mut out = Output::new(result, table).summary("generators", p.ngens()).summary("relators", p.relators().len());
    out.failure = failure;
    Ok(out)
}
