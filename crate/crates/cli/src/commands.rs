use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use symvec::chain::bound_chain;
use symvec::covering::{
    build_covering, embed_family, half_measure, half_measure_check, is_intersecting_family,
    CoveringPoset, FamilyFile, SpaceKind,
};
use symvec::lab::{
    dictator_family, family_size_and_density, is_symmetric, majority_family,
    set_intersecting_family, singer_difference_set, PermutationGroupSpec, SetFamily,
};
use symvec::measure::{
    bkkkl_ratio, central_difference, derivative_lower_bound_with_kappa, influence_report,
    interpolate, product_measure, relative_error, russo_derivative, Measure,
};
use symvec::poset::{domination_strength, enumerate_up_sets, format_mask, Poset};
use symvec::rational::{format_rational, int, parse_rational, put_rational, to_f64, Rational};
use symvec::search::{brute_force_max, max_symmetric_intersecting};
use symvec::{Error, ProductFamily, Result};

use crate::manifest::{write_beside, RunManifest};
use crate::{
    BoundChainArgs, CheckArgs, Cli, Command, ConstructArgs, DominationArgs, FamilyAtArgs,
    FamilyType, GroupKind, MeasureArgs, PosetArgs, RussoArgs, SearchArgs,
};

pub struct Outcome {
    pub name: &'static str,
    pub report: Value,
    pub passed: bool,
    pub seed: Option<u64>,
    /// Files written by the command (family files, witnesses).
    pub outputs: Vec<PathBuf>,
    /// Lines for stderr.
    pub summary: Vec<String>,
}

impl Outcome {
    fn new(name: &'static str, report: Value) -> Self {
        Outcome {
            name,
            report,
            passed: true,
            seed: None,
            outputs: Vec::new(),
            summary: Vec::new(),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let budget = cli.budget;
    match &cli.command {
        Command::Domination(a) => domination(a, budget),
        Command::Upsets(a) => upsets(a, budget),
        Command::Construct(a) => construct(a, budget),
        Command::Check(a) => check(a, budget),
        Command::Search(a) => search(a, budget),
        Command::Influence(a) => influence(a, budget),
        Command::Measure(a) => measure(a, budget),
        Command::RussoCheck(a) => russo_check(a, budget),
        Command::BoundChain(a) => chain(a, budget),
    }
}

pub fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
    let mut outputs: Vec<String> = outcome
        .outputs
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    if let Some(path) = &cli.report {
        std::fs::write(path, &text)?;
        outputs.push(path.display().to_string());
    } else {
        print!("{text}");
    }
    let manifest = RunManifest {
        command: outcome.name,
        parameters: serde_json::to_value(&cli.command).expect("arguments serialize"),
        seed: outcome.seed,
        budgets: json!({ "budget": cli.budget }),
        outputs,
    };
    for path in outcome.outputs.iter().chain(cli.report.as_ref()) {
        write_beside(path, &manifest)?;
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_poset(args: &PosetArgs) -> Result<(Arc<Poset>, Option<CoveringPoset>)> {
    match (&args.k, &args.poset) {
        (Some(k), _) => {
            let cover = build_covering(*k)?;
            Ok((cover.poset().clone(), Some(cover)))
        }
        (None, Some(path)) => Ok((Arc::new(Poset::parse(&read(path)?)?), None)),
        (None, None) => Err(Error::Validation("give --k or --poset".into())),
    }
}

fn subset_json(poset: &Poset, bits: symvec::poset::ElementSubset) -> Value {
    match poset.masks() {
        Some(masks) if poset.ids() == masks => bits
            .indices()
            .map(|i| format_mask(masks[i]))
            .collect::<Vec<_>>()
            .into(),
        _ => bits.ids(poset).into(),
    }
}

fn domination(a: &DominationArgs, budget: u64) -> Result<Outcome> {
    let (poset, cover) = load_poset(&a.poset)?;
    let (mu0, mu1) = match &cover {
        Some(c) => (c.mu0().clone(), c.mu1().clone()),
        None => {
            let (Some(p0), Some(p1)) = (&a.mu0, &a.mu1) else {
                return Err(Error::Validation("--poset needs --mu0 and --mu1".into()));
            };
            (
                Measure::parse(&read(p0)?, poset.clone())?.1,
                Measure::parse(&read(p1)?, poset.clone())?.1,
            )
        }
    };
    let rep = domination_strength(&poset, &mu0, &mu1, budget)?;
    let mut report = rep.to_json(&poset);
    let mut summary = vec![format!(
        "domination strength {} over {} proper nontrivial up-sets",
        format_rational(&rep.strength),
        rep.count_proper_nontrivial
    )];
    if let Some(c) = &cover {
        let star = c.star(1);
        let value = mu1.mass_of(star) - mu0.mass_of(star);
        let obj = report.as_object_mut().expect("object");
        obj.insert("k".into(), c.k().into());
        obj.insert("star_witness".into(), subset_json(&poset, star));
        let mut m = Map::new();
        put_rational(&mut m, "star_value", &value);
        obj.extend(m);
        summary.push(format!("star {{1}} value {}", format_rational(&value)));
    }
    let mut out = Outcome::new("domination", report);
    out.summary = summary;
    Ok(out)
}

fn upsets(a: &PosetArgs, budget: u64) -> Result<Outcome> {
    let (poset, _) = load_poset(a)?;
    let ups = enumerate_up_sets(&poset, budget)?;
    let list: Vec<Value> = ups.iter().map(|&u| subset_json(&poset, u)).collect();
    let mut out = Outcome::new("upsets", json!({ "count": ups.len(), "up_sets": list }));
    out.summary.push(format!("{} up-sets", ups.len()));
    Ok(out)
}

fn construct(a: &ConstructArgs, budget: u64) -> Result<Outcome> {
    let need_n = || {
        a.n.ok_or_else(|| Error::Validation("this construction needs --n".into()))
    };
    let (family, k) = match a.kind {
        FamilyType::Dictator => (
            dictator_family(a.k, need_n()?, a.coordinate, a.symbol, budget)?,
            a.k,
        ),
        FamilyType::Majority => (majority_family(need_n()?, budget)?, 2),
        FamilyType::Fano => (
            set_intersecting_family(&singer_difference_set(2)?, a.symbol, a.k, true, budget)?,
            a.k,
        ),
        FamilyType::Singer => {
            let q =
                a.q.ok_or_else(|| Error::Validation("singer needs --q".into()))?;
            (
                set_intersecting_family(&singer_difference_set(q)?, a.symbol, a.k, true, budget)?,
                a.k,
            )
        }
        FamilyType::SetIntersecting => {
            let path = a
                .blocks
                .as_ref()
                .ok_or_else(|| Error::Validation("set-intersecting needs --blocks".into()))?;
            let blocks = SetFamily::parse(&read(path)?)?;
            (
                set_intersecting_family(&blocks, a.symbol, a.k, true, budget)?,
                a.k,
            )
        }
    };
    let (size, density) = family_size_and_density(&family);
    let file = if a.closure {
        let cover = build_covering(k)?;
        let closed = embed_family(&cover, &family)?.up_closure(budget)?;
        FamilyFile::cover(&cover, closed)
    } else {
        FamilyFile::base(k, family.clone())
    };
    write(&a.out, &file.to_text())?;
    let mut report = Map::new();
    report.insert(
        "type".into(),
        serde_json::to_value(a.kind).expect("enum serializes"),
    );
    report.insert("k".into(), k.into());
    report.insert("n".into(), family.n().into());
    report.insert("size".into(), size.into());
    put_rational(&mut report, "density", &density);
    report.insert("space".into(), file.space.as_str().into());
    report.insert("written_points".into(), file.family.len().into());
    report.insert("file".into(), a.out.display().to_string().into());
    let mut out = Outcome::new("construct", report.into());
    out.summary.push(format!(
        "{size} vectors, density {}",
        format_rational(&density)
    ));
    out.outputs.push(a.out.clone());
    Ok(out)
}

fn parse_generators(n: usize, gens: &[String]) -> Result<PermutationGroupSpec> {
    let parsed = gens
        .iter()
        .map(|g| PermutationGroupSpec::parse_permutation(g))
        .collect::<Result<Vec<_>>>()?;
    PermutationGroupSpec::new(n, parsed)
}

fn check(a: &CheckArgs, budget: u64) -> Result<Outcome> {
    let file = FamilyFile::parse(&read(&a.family)?)?;
    let family = &file.family;
    let mut report = Map::new();
    let mut passed = true;
    let mut summary = Vec::new();
    let (size, density) = family_size_and_density(family);
    report.insert("space".into(), file.space.as_str().into());
    report.insert("k".into(), file.k.into());
    report.insert("n".into(), family.n().into());
    report.insert("size".into(), size.into());
    put_rational(&mut report, "density", &density);
    if a.intersecting {
        let ok = is_intersecting_family(family, budget)?;
        report.insert("intersecting".into(), ok.into());
        summary.push(format!("intersecting: {}", verdict(ok)));
        passed &= ok;
    }
    if !a.symmetric.is_empty() {
        let spec = parse_generators(family.n(), &a.symmetric)?;
        let s = is_symmetric(family, &spec)?;
        report.insert("invariant".into(), s.invariant.into());
        report.insert("transitive".into(), s.transitive.into());
        summary.push(format!(
            "invariant: {}, transitive: {}",
            verdict(s.invariant),
            verdict(s.transitive)
        ));
        passed &= s.symmetric();
    }
    if a.up_set {
        let ok = family.is_up_set();
        report.insert("up_set".into(), ok.into());
        summary.push(format!("up-set: {}", verdict(ok)));
        passed &= ok;
    }
    if a.half_measure {
        let cover = build_covering(file.k)?;
        let half = match file.space {
            SpaceKind::Cover => half_measure_check(&cover, family, budget)?,
            SpaceKind::Base => {
                if !is_intersecting_family(family, budget)? {
                    return Err(Error::Validation("family is not intersecting".into()));
                }
                half_measure(&cover, &embed_family(&cover, family)?.up_closure(budget)?)
            }
        };
        put_rational(&mut report, "half_measure", &half.measure);
        report.insert("half_measure_ok".into(), half.ok.into());
        summary.push(format!(
            "mu_1/2 = {} <= 1/2: {}",
            format_rational(&half.measure),
            verdict(half.ok)
        ));
        passed &= half.ok;
    }
    report.insert("passed".into(), passed.into());
    let mut out = Outcome::new("check", report.into());
    out.passed = passed;
    out.summary = summary;
    Ok(out)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn search(a: &SearchArgs, budget: u64) -> Result<Outcome> {
    let group = if !a.generator.is_empty() {
        parse_generators(a.n, &a.generator)?
    } else {
        match a.group {
            GroupKind::Cyclic => PermutationGroupSpec::cyclic(a.n),
            GroupKind::Symmetric => PermutationGroupSpec::symmetric(a.n),
            GroupKind::Swap => {
                let mut swap: Vec<usize> = (1..=a.n).collect();
                if a.n >= 2 {
                    swap.swap(0, 1);
                }
                PermutationGroupSpec::new(a.n, vec![swap])?
            }
        }
    };
    let started = Instant::now();
    let result = if a.brute_force {
        brute_force_max(a.k, a.n, &group, budget)?
    } else {
        max_symmetric_intersecting(a.k, a.n, &group, budget)?
    };
    let elapsed = started.elapsed().as_millis() as u64;
    let mut report = result.to_json();
    let obj = report.as_object_mut().expect("object");
    obj.insert("wall_time_ms".into(), elapsed.into());
    obj.insert(
        "trivial_bound".into(),
        format_rational(&trivial_bound(a.k, a.n)).into(),
    );
    obj.insert(
        "witness_file".into(),
        a.witness.as_ref().map(|p| p.display().to_string()).into(),
    );
    let mut out = Outcome::new("search", report);
    if let Some(path) = &a.witness {
        write(
            path,
            &FamilyFile::base(a.k, result.witness.clone()).to_text(),
        )?;
        out.outputs.push(path.clone());
    }
    out.summary.push(format!(
        "max invariant intersecting family: {} (k^(n-1) = {}), {} nodes, {elapsed} ms",
        result.max_size,
        format_rational(&trivial_bound(a.k, a.n)),
        result.nodes_explored
    ));
    Ok(out)
}

fn trivial_bound(k: usize, n: usize) -> Rational {
    (1..n).fold(int(1), |acc, _| acc * int(k as i64))
}

/// Reads a family file as a family of `W_k^n`, embedding base-space files.
fn load_cover_family(path: &Path) -> Result<(CoveringPoset, ProductFamily)> {
    let file = FamilyFile::parse(&read(path)?)?;
    let cover = build_covering(file.k)?;
    let family = match file.space {
        SpaceKind::Cover => file.family,
        SpaceKind::Base => embed_family(&cover, &file.family)?,
    };
    Ok((cover, family))
}

fn influence(a: &FamilyAtArgs, budget: u64) -> Result<Outcome> {
    let (cover, family) = load_cover_family(&a.family)?;
    let t = parse_rational(&a.t)?;
    let rep = influence_report(&family, &cover.interpolation(), &t, budget)?;
    let mut report = rep.to_json();
    let mu = interpolate(&cover.interpolation(), &t)?;
    let ratio = match bkkkl_ratio(&family, &mu, budget) {
        Ok(r) => json!(r),
        Err(Error::UndefinedRatio(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    report
        .as_object_mut()
        .expect("object")
        .insert("bkkkl_ratio".into(), ratio);
    let mut out = Outcome::new("influence", report);
    out.summary.push(format!(
        "total influence {} at t = {}",
        format_rational(&rep.total),
        format_rational(&t)
    ));
    Ok(out)
}

fn measure(a: &MeasureArgs, budget: u64) -> Result<Outcome> {
    let (cover, family) = load_cover_family(&a.at.family)?;
    let t = parse_rational(&a.at.t)?;
    let mu = interpolate(&cover.interpolation(), &t)?;
    let mut report = Map::new();
    put_rational(&mut report, "t", &t);
    let mut out;
    if let Some(samples) = a.monte_carlo {
        let seed = a.seed.expect("clap requires --seed");
        if samples == 0 {
            return Err(Error::Validation(
                "--monte-carlo needs at least one sample".into(),
            ));
        }
        let weights: Vec<f64> = mu.masses().iter().map(to_f64).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| Error::Validation(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0u64;
        let mut point = vec![0u8; family.n()];
        for _ in 0..samples {
            for slot in point.iter_mut() {
                *slot = dist.sample(&mut rng) as u8;
            }
            if family.contains(&point) {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        report.insert("estimate".into(), p.into());
        report.insert(
            "standard_error".into(),
            (p * (1.0 - p) / samples as f64).sqrt().into(),
        );
        report.insert("samples".into(), samples.into());
        report.insert("seed".into(), seed.into());
        report.insert("approximate".into(), true.into());
        out = Outcome::new("measure", report.into());
        out.seed = Some(seed);
        out.summary
            .push(format!("sampled mu_t^n ~ {p:.6} ({samples} samples)"));
    } else {
        let value = product_measure(&mu, &family)?;
        put_rational(&mut report, "measure", &value);
        out = Outcome::new("measure", report.into());
        out.summary
            .push(format!("mu_t^n = {}", format_rational(&value)));
    }
    let _ = budget;
    Ok(out)
}

fn russo_check(a: &RussoArgs, budget: u64) -> Result<Outcome> {
    let file = FamilyFile::parse(&read(&a.at.family)?)?;
    let cover = build_covering(file.k)?;
    // A base family only becomes an up-set once closed.
    let from_base = file.space == SpaceKind::Base;
    let family = if from_base {
        embed_family(&cover, &file.family)?.up_closure(budget)?
    } else {
        file.family
    };
    let interp = cover.interpolation();
    let t = parse_rational(&a.at.t)?;
    let h = parse_rational(&a.h)?;
    let derivative = russo_derivative(&family, &interp, &t, !a.allow_non_up_set, budget)?;
    let fd = central_difference(&family, &interp, &t, &h)?;
    let rel = relative_error(&derivative, &fd);
    let fd_ok = rel <= a.tol;
    let mut report = Map::new();
    report.insert("closed_from_base".into(), from_base.into());
    put_rational(&mut report, "t", &t);
    put_rational(&mut report, "h", &h);
    put_rational(&mut report, "derivative", &derivative);
    report.insert("finite_difference".into(), to_f64(&fd).into());
    report.insert("relative_error".into(), rel.into());
    report.insert("tolerance".into(), a.tol.into());
    let mut passed = fd_ok;
    if family.is_up_set() {
        let kappa = domination_strength(cover.poset(), cover.mu0(), cover.mu1(), budget)?.strength;
        let lb = derivative_lower_bound_with_kappa(&family, &interp, &t, &kappa, budget)?;
        put_rational(&mut report, "kappa", &lb.kappa);
        put_rational(&mut report, "total_influence", &lb.total_influence);
        put_rational(&mut report, "lower_bound", &lb.kappa_times_total_influence);
        report.insert("lower_bound_holds".into(), lb.holds.into());
        passed &= lb.holds;
    } else {
        report.insert("lower_bound_holds".into(), Value::Null);
    }
    report.insert("passed".into(), passed.into());
    let mut out = Outcome::new("russo-check", report.into());
    out.summary.push(format!(
        "derivative {} vs finite difference {:.12} (relative error {rel:.3e}): {}",
        format_rational(&derivative),
        to_f64(&fd),
        verdict(passed)
    ));
    out.passed = passed;
    Ok(out)
}

fn chain(a: &BoundChainArgs, budget: u64) -> Result<Outcome> {
    let file = FamilyFile::parse(&read(&a.family)?)?;
    if file.space != SpaceKind::Base {
        return Err(Error::Validation(
            "bound-chain expects a base-space family".into(),
        ));
    }
    let n = file.family.n();
    let group = if a.generator.is_empty() {
        PermutationGroupSpec::cyclic(n)
    } else {
        parse_generators(n, &a.generator)?
    };
    let result = bound_chain(&file.family, &group, budget)?;
    let mut out = Outcome::new("bound-chain", result.to_json());
    out.passed = result.half_measure_ok();
    out.summary.push(format!(
        "stage 1 closure: |A| = {}, |B| = {}",
        result.family_size,
        result
            .closure_size
            .map_or("not materialized".to_string(), |s| s.to_string())
    ));
    out.summary.push(format!(
        "stage 2 half measure: mu_1/2(B) = {} ({})",
        result
            .half_measure
            .as_ref()
            .map_or("n/a".to_string(), format_rational),
        verdict(result.half_measure_ok())
    ));
    out.summary.push(format!(
        "stage 3 bound: eps = {}, kappa = {}, empirical C = {}",
        format_rational(&result.eps),
        format_rational(&result.kappa),
        result
            .threshold
            .as_ref()
            .map_or("undefined".to_string(), |t| format!("{:.9}", t.empirical_c))
    ));
    for w in &result.warnings {
        out.summary.push(format!("warning: {w}"));
    }
    Ok(out)
}
