use std::collections::BTreeSet;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use neutromap::data_analysis::{
    alpha_sweep, default_grid, infer_edges_from_data, DeviationRule, DistanceMetric, NumericSeries, RawRelationalData,
};
use neutromap::document::{AnyMap, MapDocument};
use neutromap::graph_metrics::{
    balance_report, find_affected_branches, find_key_vertices, metrics as map_metrics, LengthWeight,
};
use neutromap::map_core::{combine as sum_maps, infer as run, validate_map, Clamp, SimpleMode};
use neutromap::neutro::{parse_rational, EdgeSymbol};
use neutromap::relational::{link as chain, r_combine, r_infer, Space};
use neutromap::{
    CognitiveMap, ConceptCatalog, EngineConfig, Error, Execution, HiddenPattern, Outcome, RelationalMap, StateVector,
};
use serde_json::{json, Value};

use crate::render::{self, opt_exact};
use crate::{
    AlphaArgs, AutoArgs, BalanceArgs, CombineArgs, Deviation, Format, InferArgs, LinkArgs, MapArg, Metric, Mode,
    SeedSpace, ValidateArgs, Weight, NON_CONVERGENT,
};

type Run = Result<u8, String>;

fn at(path: &Path) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn load(path: &Path) -> Result<AnyMap, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    MapDocument::from_json(&text)
        .and_then(MapDocument::into_map)
        .map_err(at(path))
}

fn load_cognitive(path: &Path, command: &str) -> Result<CognitiveMap, String> {
    match load(path)? {
        AnyMap::Cognitive(m) => Ok(m),
        AnyMap::Relational(_) => Err(format!("{}: {command} needs a cognitive map", path.display())),
    }
}

fn write_document(path: Option<&PathBuf>, doc: &MapDocument) -> Result<(), String> {
    if let Some(p) = path {
        fs::write(p, doc.to_json() + "\n").map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn name_of(v: Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn outcome_json(hp: &HiddenPattern) -> Value {
    match &hp.outcome {
        Outcome::FixedPoint(s) => json!({"type": "fixed_point", "states": [s]}),
        Outcome::LimitCycle(c) => json!({"type": "limit_cycle", "length": c.len(), "states": c}),
        Outcome::NonConvergent => json!({"type": "non_convergent", "states": []}),
    }
}

fn outcome_text(prefix: &str, hp: &HiddenPattern, budget: usize) -> String {
    let mut out = match &hp.outcome {
        Outcome::FixedPoint(_) => format!("# {prefix}fixed point\n"),
        Outcome::LimitCycle(c) => format!("# {prefix}limit cycle of length {}\n", c.len()),
        Outcome::NonConvergent => format!("# {prefix}no fixed point or limit cycle within {budget} iterations\n"),
    };
    for s in hp.attractor() {
        out.push_str(&format!("\t{}\n", s.tab_separated()));
    }
    out
}

fn seed_of(a: &InferArgs, catalog: &ConceptCatalog) -> Result<StateVector, String> {
    let seed = match &a.seed_vector {
        Some(text) => {
            let s = StateVector::parse(text).map_err(|e| e.to_string())?;
            if s.len() != catalog.len() {
                return Err(format!(
                    "seed vector has {} entries for {} concepts",
                    s.len(),
                    catalog.len()
                ));
            }
            s
        }
        None => {
            let names: Vec<&str> = a.seed.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
            if names.is_empty() {
                return Err("a seed is required: --seed <concept,...> or --seed-vector \"1 0 ...\"".into());
            }
            catalog.seed(&names).map_err(|e| e.to_string())?
        }
    };
    if seed.on_indices().is_empty() {
        return Err("the seed switches no concept on".into());
    }
    Ok(seed)
}

fn config(a: &InferArgs, catalog: &ConceptCatalog) -> Result<EngineConfig, String> {
    let k = parse_rational(a.threshold.trim()).map_err(|e| e.to_string())?;
    let mut cfg = EngineConfig::default().with_threshold(k);
    if let Some(n) = a.max_iter {
        cfg = cfg.with_max_iterations(n);
    }
    if a.no_clamp {
        cfg.clamp = Clamp::Indices(BTreeSet::new());
    } else if !a.clamp.is_empty() {
        let idx = a
            .clamp
            .iter()
            .map(|c| catalog.require(c.trim()))
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(|e| e.to_string())?;
        cfg.clamp = Clamp::Indices(idx);
    }
    Ok(cfg)
}

pub fn infer(a: InferArgs, f: Format) -> Run {
    match load(&a.map)? {
        AnyMap::Cognitive(m) => {
            let seed = seed_of(&a, m.catalog())?;
            let cfg = config(&a, m.catalog())?;
            let hp = run(&seed, &m, &cfg).map_err(|e| e.to_string())?;
            match f {
                Format::Json => print!(
                    "{}",
                    render::json(&json!({
                        "kind": "cognitive",
                        "concepts": m.catalog().names(),
                        "seed": seed,
                        "trace": hp.trace.iter().map(|r| json!({"product": r.product, "state": r.state})).collect::<Vec<_>>(),
                        "outcome": outcome_json(&hp),
                    }))
                ),
                Format::Text => {
                    let mut out = format!("# step\t{}\n", m.catalog().names().join("\t"));
                    out.push_str(&format!("0\t{}\n", seed.tab_separated()));
                    for (k, s) in hp.states().enumerate() {
                        out.push_str(&format!("{}\t{}\n", k + 1, s.tab_separated()));
                    }
                    out.push_str(&outcome_text("", &hp, cfg.budget(m.len())));
                    print!("{out}");
                }
            }
            Ok(if hp.converged() { 0 } else { NON_CONVERGENT })
        }
        AnyMap::Relational(m) => {
            let space = match a.seed_space {
                SeedSpace::Domain => Space::Domain,
                SeedSpace::Range => Space::Range,
            };
            let seed = seed_of(&a, m.space(space))?;
            let cfg = config(&a, m.space(space))?;
            let dual = r_infer(&seed, space, &m, &cfg).map_err(|e| e.to_string())?;
            match f {
                Format::Json => print!(
                    "{}",
                    render::json(&json!({
                        "kind": "relational",
                        "domain": m.domain().names(),
                        "range": m.range().names(),
                        "seed_space": space.as_str(),
                        "seed": seed,
                        "trace": dual.trace.iter().map(|(s, r)| json!({"space": s.as_str(), "product": r.product, "state": r.state})).collect::<Vec<_>>(),
                        "domain_outcome": outcome_json(&dual.domain),
                        "range_outcome": outcome_json(&dual.range),
                    }))
                ),
                Format::Text => {
                    let mut out = format!(
                        "# domain\t{}\n# range\t{}\n",
                        m.domain().names().join("\t"),
                        m.range().names().join("\t")
                    );
                    out.push_str(&format!("0\t{}\t{}\n", space.as_str(), seed.tab_separated()));
                    for (k, (s, r)) in dual.trace.iter().enumerate() {
                        out.push_str(&format!("{}\t{}\t{}\n", k + 1, s.as_str(), r.state.tab_separated()));
                    }
                    let budget = cfg.budget(m.space(space).len());
                    out.push_str(&outcome_text("domain: ", &dual.domain, budget));
                    out.push_str(&outcome_text("range: ", &dual.range, budget));
                    print!("{out}");
                }
            }
            Ok(if dual.converged() { 0 } else { NON_CONVERGENT })
        }
    }
}

fn weights(raw: &[String]) -> Result<Option<Vec<neutromap::Rational>>, String> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.iter()
        .map(|w| parse_rational(w.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn show_document(doc: &MapDocument, f: Format) -> Result<(), String> {
    match f {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => match doc.clone().into_map().map_err(|e| e.to_string())? {
            AnyMap::Cognitive(m) => {
                let names = m.catalog().names();
                print!("{}", render::matrix(names, names, m.weights()));
            }
            AnyMap::Relational(m) => print!("{}", render::matrix(m.domain().names(), m.range().names(), m.weights())),
        },
    }
    Ok(())
}

pub fn combine(a: CombineArgs, f: Format) -> Run {
    let maps = a.maps.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let w = weights(&a.weights)?;
    let doc = if maps.iter().all(|m| matches!(m, AnyMap::Cognitive(_))) {
        let ms: Vec<CognitiveMap> = maps
            .into_iter()
            .filter_map(|m| match m {
                AnyMap::Cognitive(c) => Some(c),
                AnyMap::Relational(_) => None,
            })
            .collect();
        MapDocument::from_cognitive(&sum_maps(&ms, w.as_deref(), None).map_err(|e| e.to_string())?)
    } else if maps.iter().all(|m| matches!(m, AnyMap::Relational(_))) {
        let ms: Vec<RelationalMap> = maps
            .into_iter()
            .filter_map(|m| match m {
                AnyMap::Relational(r) => Some(r),
                AnyMap::Cognitive(_) => None,
            })
            .collect();
        MapDocument::from_relational(&r_combine(&ms, w.as_deref(), None, None).map_err(|e| e.to_string())?)
    } else {
        return Err("cannot combine cognitive and relational maps in one call".into());
    };
    write_document(a.output.as_ref(), &doc)?;
    show_document(&doc, f)?;
    Ok(0)
}

pub fn link(a: LinkArgs, f: Format) -> Run {
    let mut maps = Vec::new();
    for p in &a.maps {
        match load(p)? {
            AnyMap::Relational(m) => maps.push(m),
            AnyMap::Cognitive(_) => return Err(format!("{}: link needs relational maps", p.display())),
        }
    }
    let result = chain(&maps).map_err(|e| match e {
        Error::Unchainable { left, right } => {
            let spaces = |m: &RelationalMap| {
                format!(
                    "[{}] -> [{}]",
                    m.domain().names().join(", "),
                    m.range().names().join(", ")
                )
            };
            format!(
                "{} {} and {} {} share no catalog",
                a.maps[left].display(),
                spaces(&maps[left]),
                a.maps[right].display(),
                spaces(&maps[right]),
            )
        }
        other => other.to_string(),
    })?;
    let doc = MapDocument::from_relational(&result.map);
    write_document(a.output.as_ref(), &doc)?;
    match f {
        Format::Json => print!(
            "{}",
            render::json(&json!({
                "inputs": a.maps.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "transposed": result.transposed,
                "exact": result.exact,
                "map": serde_json::to_value(&doc).map_err(|e| e.to_string())?,
            }))
        ),
        Format::Text => {
            let rows: Vec<Vec<String>> = a
                .maps
                .iter()
                .zip(&result.transposed)
                .enumerate()
                .map(|(k, (p, &t))| {
                    vec![
                        (k + 1).to_string(),
                        p.display().to_string(),
                        if t { "transposed" } else { "as given" }.to_string(),
                    ]
                })
                .collect();
            print!(
                "{}",
                render::table(&["#".into(), "map".into(), "orientation".into()], &rows)
            );
            println!();
            print!(
                "{}",
                render::matrix(
                    result.map.domain().names(),
                    result.map.range().names(),
                    result.map.weights()
                )
            );
        }
    }
    Ok(0)
}

pub fn metrics(a: MapArg, f: Format) -> Run {
    let m = load_cognitive(&a.map, "metrics")?;
    let report = map_metrics(&m);
    let keys = find_key_vertices(&m);
    let branches = find_affected_branches(&m);
    match f {
        Format::Json => print!(
            "{}",
            render::json(&json!({
                "metrics": report,
                "key_vertices": keys,
                "affected_branches": branches,
            }))
        ),
        Format::Text => {
            let rows: Vec<Vec<String>> = report
                .concepts
                .iter()
                .map(|d| {
                    vec![
                        d.concept.clone(),
                        d.out_degree.to_string(),
                        d.in_degree.to_string(),
                        d.centrality.to_string(),
                        name_of(json!(d.class)),
                    ]
                })
                .collect();
            let header = ["concept", "out", "in", "centrality", "class"].map(String::from);
            let mut out = render::table(&header, &rows);
            out.push_str(&format!("\nedges: {}\n", report.edges));
            out.push_str(&format!(
                "density (loop free): {}\n",
                opt_exact(report.density_loop_free.as_ref())
            ));
            out.push_str(&format!(
                "density (with loops): {}\n",
                opt_exact(report.density_with_loops.as_ref())
            ));
            out.push_str(&format!(
                "hierarchy index: {}\n",
                opt_exact(report.hierarchy_index.as_ref())
            ));
            out.push_str(&format!(
                "receivers per transmitter: {}\n",
                opt_exact(report.receiver_transmitter_ratio.as_ref())
            ));
            let kv: Vec<String> = keys
                .iter()
                .map(|k| {
                    let kinds: Vec<String> = k.kinds.iter().map(|x| name_of(json!(x))).collect();
                    format!("{} ({})", k.concept, kinds.join(", "))
                })
                .collect();
            out.push_str(&format!(
                "key vertices: {}\n",
                if kv.is_empty() { "none".into() } else { kv.join("; ") }
            ));
            if branches.is_empty() {
                out.push_str("affected branches: none\n");
            }
            for b in &branches {
                let entry: Vec<String> = b.attachments.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
                out.push_str(&format!(
                    "affected branch: {{{}}}{}\n",
                    b.concepts.join(", "),
                    if entry.is_empty() {
                        String::new()
                    } else {
                        format!(" entered by {}", entry.join(", "))
                    }
                ));
            }
            print!("{out}");
        }
    }
    Ok(0)
}

pub fn balance(a: BalanceArgs, f: Format) -> Run {
    let m = load_cognitive(&a.map, "balance")?;
    let max_len = a.max_len.unwrap_or(m.len());
    let weight = match a.length_weight {
        Weight::Inverse => LengthWeight::Inverse,
        Weight::InverseSquare => LengthWeight::InverseSquare,
        Weight::InverseExp2 => LengthWeight::InverseExp2,
    };
    let r = balance_report(&m, max_len, weight, Execution::default());
    if f == Format::Json {
        print!("{}", render::json(&json!(r)));
        return Ok(0);
    }
    let mut out = String::new();
    if r.semicycles.is_empty() {
        out.push_str(&format!("no semicycles up to length {max_len}\n"));
    } else {
        let c = &r.counts.overall;
        out.push_str(&format!(
            "semicycles up to length {max_len}: {} positive, {} negative, {} indeterminate\n",
            c.positive, c.negative, c.indeterminate
        ));
        let rows: Vec<Vec<String>> = r
            .counts
            .by_length
            .iter()
            .map(|(len, s)| {
                [*len, s.positive, s.negative, s.indeterminate]
                    .iter()
                    .map(ToString::to_string)
                    .collect()
            })
            .collect();
        let header = ["length", "positive", "negative", "indeterminate"].map(String::from);
        out.push_str(&render::table(&header, &rows));
        out.push_str(&format!("balance p/t: {}\n", opt_exact(r.simple.as_ref())));
        let fname = name_of(json!(weight));
        out.push_str(&format!(
            "weighted p/t (f = {fname}): {}\n",
            opt_exact(r.weighted_total.as_ref())
        ));
        out.push_str(&format!(
            "weighted p/n (f = {fname}): {}\n",
            opt_exact(r.weighted_negative.as_ref())
        ));
    }
    if !r.pairwise.pairs.is_empty() {
        let name = |i: usize| m.catalog().name(i).to_string();
        let rows: Vec<Vec<String>> = r
            .pairwise
            .pairs
            .iter()
            .map(|p| {
                vec![
                    name(p.from),
                    name(p.to),
                    p.counts.positive.to_string(),
                    p.counts.negative.to_string(),
                    opt_exact(p.r.as_ref()),
                ]
            })
            .collect();
        out.push_str("\ndirected paths (cycles when from = to)\n");
        let header = ["from", "to", "positive", "negative", "r"].map(String::from);
        out.push_str(&render::table(&header, &rows));
        out.push_str(&format!("mean r: {}\n", opt_exact(r.pairwise.aggregate.as_ref())));
    }
    print!("{out}");
    Ok(0)
}

fn open(path: &Path) -> Result<File, String> {
    File::open(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn alpha(a: AlphaArgs, f: Format) -> Run {
    let d = RawRelationalData::from_csv(open(&a.data)?, a.divisor).map_err(at(&a.data))?;
    let grid = if a.grid.is_empty() {
        default_grid()
    } else {
        a.grid.clone()
    };
    let rule = match a.deviation {
        Deviation::Absolute => DeviationRule::AbsoluteDeviation,
        Deviation::Standard => DeviationRule::Standard,
    };
    let s = alpha_sweep(&d, &grid, rule, Execution::default()).map_err(|e| e.to_string())?;
    if f == Format::Json {
        print!("{}", render::json(&json!(s)));
        return Ok(0);
    }
    let stats: Vec<Vec<String>> = s
        .col_labels
        .iter()
        .enumerate()
        .map(|(j, c)| {
            vec![
                c.clone(),
                format!("{:.6}", s.stats.mean[j]),
                format!("{:.6}", s.stats.deviation[j]),
            ]
        })
        .collect();
    let mut out = render::table(&["column".into(), "mean".into(), "deviation".into()], &stats);
    let mut header = vec!["row".to_string()];
    header.extend(s.per_alpha.iter().map(|r| format!("a={}", r.alpha.unwrap_or_default())));
    header.push("combined".into());
    let grades: Vec<Vec<String>> = s
        .row_labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            std::iter::once(label.clone())
                .chain(
                    s.per_alpha
                        .iter()
                        .chain([&s.combined])
                        .map(|r| format!("{:.4}", r.membership.grades[i])),
                )
                .collect()
        })
        .collect();
    out.push_str("\nmembership grades\n");
    out.push_str(&render::table(&header, &grades));
    out.push('\n');
    for r in s.per_alpha.iter().chain([&s.combined]) {
        let best: Vec<&str> = r.winners.iter().map(|&i| s.row_labels[i].as_str()).collect();
        let at = r.alpha.map_or_else(|| "combined".to_string(), |x| format!("alpha {x}"));
        out.push_str(&format!("best at {at}: {}\n", best.join(", ")));
    }
    print!("{out}");
    Ok(0)
}

pub fn autoconstruct(a: AutoArgs, f: Format) -> Run {
    let d = RawRelationalData::from_csv(open(&a.data)?, 1.0).map_err(at(&a.data))?;
    let series = d
        .col_labels
        .iter()
        .enumerate()
        .map(|(j, name)| NumericSeries::new(name.clone(), d.values.iter().map(|r| r[j]).collect()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let metric = match a.metric {
        Metric::MeanAbs => DistanceMetric::MeanAbs,
        Metric::Rms => DistanceMetric::Rms,
    };
    let built = infer_edges_from_data(&series, a.threshold, metric).map_err(|e| e.to_string())?;
    let doc = MapDocument::from_cognitive(&built.map);
    write_document(a.output.as_ref(), &doc)?;
    match f {
        Format::Json => print!(
            "{}",
            render::json(&json!({
                "evidence": built.evidence,
                "map": serde_json::to_value(&doc).map_err(|e| e.to_string())?,
            }))
        ),
        Format::Text => {
            let rows: Vec<Vec<String>> = built
                .evidence
                .iter()
                .map(|e| {
                    vec![
                        e.from.clone(),
                        e.to.clone(),
                        format!("{:.4}", e.direct),
                        format!("{:.4}", e.inverse),
                        e.weight.map_or_else(|| "-".into(), |w| format!("{w:.4}")),
                    ]
                })
                .collect();
            let header = ["from", "to", "direct", "inverse", "edge"].map(String::from);
            print!("{}", render::table(&header, &rows));
        }
    }
    Ok(0)
}

pub fn validate(a: ValidateArgs, f: Format) -> Run {
    let violations: Vec<String> = match load(&a.map)? {
        AnyMap::Cognitive(m) => {
            let mode = match a.mode {
                Mode::Any => SimpleMode::Any,
                Mode::Fcm => SimpleMode::Fcm,
                Mode::Ncm => SimpleMode::Ncm,
            };
            validate_map(&m, mode)
                .violations
                .iter()
                .map(ToString::to_string)
                .collect()
        }
        AnyMap::Relational(m) => {
            let mut v = Vec::new();
            for i in 0..m.domain().len() {
                for (j, w) in m.weights().row(i).iter().enumerate() {
                    let ok = match (a.mode, EdgeSymbol::of(w)) {
                        (Mode::Any, _) => true,
                        (Mode::Ncm, Some(_)) => true,
                        (Mode::Fcm, Some(s)) => s != EdgeSymbol::Indeterminate,
                        (_, None) => false,
                    };
                    if !ok {
                        v.push(format!(
                            "edge {:?} -> {:?} has non-simple weight {w}",
                            m.domain().name(i),
                            m.range().name(j)
                        ));
                    }
                }
            }
            v
        }
    };
    match f {
        Format::Json => print!(
            "{}",
            render::json(&json!({"valid": violations.is_empty(), "violations": violations}))
        ),
        Format::Text if violations.is_empty() => println!("valid"),
        Format::Text => {
            for v in &violations {
                println!("{v}");
            }
        }
    }
    Ok(if violations.is_empty() { 0 } else { 1 })
}
