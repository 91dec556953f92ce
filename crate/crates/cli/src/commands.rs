use clap::ValueEnum;
use num_bigint::BigInt;
use parking_algebra::deformation::{
    default_deformation_cap, format_dims, is_i_deformation, quotient_graded_dims, search_rho, verify_span,
    HomogeneousPolynomial,
};
use parking_algebra::error::{Error, Limits, Result};
use parking_algebra::exact::{determinant, QPolynomial};
use parking_algebra::graph::{activity_distribution, enumerate_spanning_trees, Digraph};
use parking_algebra::ideal::{
    check_family, format_label, hilbert_numerator, minimal_generator_indices, socle_bound, standard_basis,
};
use parking_algebra::monomial::Monomial;
use parking_algebra::parking::{
    enumerate_almost_parking, enumerate_g_parking, enumerate_kl_parking, enumerate_rho_parking, weight_series,
};
use parking_algebra::resolution::{
    is_generic, koszul_betti, order_complex_resolution, scarf_complex, scarf_resolution, GradedResolution,
};
use parking_algebra::sandpile::{
    is_allowed, parking_bijection_check, recurrent_class, sandpile_group, stabilize, validate_toppling,
    TopplingMatrix,
};
use serde_json::{json, Value};

use crate::input::Source;
use crate::report::{join, Report};

pub struct Context {
    pub cap: Option<usize>,
    pub seed: u64,
    pub enumerate: bool,
    pub limits: Limits,
}

/// Integers that fit are JSON numbers, larger ones are strings.
fn big(x: &BigInt) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn trim(mut dims: Vec<u64>) -> Vec<u64> {
    while dims.len() > 1 && dims.last() == Some(&0) {
        dims.pop();
    }
    dims
}

fn series(dims: &[u64]) -> String {
    QPolynomial::new(dims.iter().map(|&d| BigInt::from(d)).collect()).to_string()
}

pub fn trees(src: &Source, ctx: &Context) -> Result<Report> {
    let g = src.graph()?;
    let count = g.spanning_tree_count();
    let distribution = if g.is_symmetric() { Some(activity_distribution(&g.edge_list()?, &ctx.limits)?) } else { None };
    let listed = if ctx.enumerate { Some(enumerate_spanning_trees(&g, &ctx.limits)?) } else { None };

    let mut report = Report::new(json!({
        "count": big(&count),
        "activity_distribution": distribution.as_ref().map(|d| d.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>()),
        "trees": listed.as_ref().map(|ts| ts.iter().map(|t| json!({"parent": t.parent, "arc": t.arc})).collect::<Vec<_>>()),
    }));
    report.line(format!("spanning trees: {count}"));
    match &distribution {
        Some(d) => {
            report = report.columns(&["activity", "trees"]);
            for (k, v) in d {
                report.row([k.to_string(), v.to_string()]);
            }
            let shown: Vec<String> = d.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            report.line(format!("external activity: {}", shown.join(" ")));
        }
        None => {
            report = report.columns(&["trees"]);
            report.row([count.to_string()]);
            report.line("external activity: directed graph, not computed");
        }
    }
    if let Some(ts) = &listed {
        for t in ts {
            report.line(format!("parent {}", join(&t.parent, " ")));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParkingKind {
    G,
    Rho,
    Kl,
    Almost,
}

pub fn parking(kind: ParkingKind, src: &Source, ctx: &Context) -> Result<Report> {
    let vectors = match (kind, src) {
        (ParkingKind::G, _) => enumerate_g_parking(&src.graph()?, &ctx.limits)?,
        (ParkingKind::Rho, Source::Rho(rho)) => enumerate_rho_parking(rho, &ctx.limits)?,
        (ParkingKind::Kl, Source::Kl { n, k, l }) => enumerate_kl_parking(*n, *k, *l, &ctx.limits)?,
        (ParkingKind::Almost, Source::Hat(n)) => enumerate_almost_parking(*n, &ctx.limits)?,
        (ParkingKind::Almost, Source::Graph(g)) if *g == Digraph::complete(g.n()) => {
            enumerate_almost_parking(g.n(), &ctx.limits)?
        }
        (ParkingKind::Rho, _) => return Err(Error::Validation("parking rho needs --rho".into())),
        (ParkingKind::Kl, _) => return Err(Error::Validation("parking kl needs --kl n,k,l".into())),
        (ParkingKind::Almost, _) => return Err(Error::Validation("parking almost needs --complete N or --hat N".into())),
    };
    let by_degree: Vec<u64> = weight_series(&vectors)
        .coeffs()
        .iter()
        .map(|c| u64::try_from(c).expect("counts are nonnegative"))
        .collect();
    let shown = series(&by_degree);
    let mut report = Report::new(json!({
        "count": vectors.len(),
        "by_degree": by_degree,
        "series": shown,
        "vectors": ctx.enumerate.then_some(&vectors),
    }));
    report.line(format!("count: {}", vectors.len()));
    report.line(format!("by degree: {shown}"));
    if ctx.enumerate {
        let n = vectors.first().map_or(0, Vec::len);
        let cols: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
        report.columns = cols;
        for b in &vectors {
            report.row(b.iter().map(u32::to_string));
            report.line(format!("({})", join(b, ",")));
        }
    } else {
        report = report.columns(&["degree", "count"]);
        for (d, c) in by_degree.iter().enumerate() {
            report.row([d.to_string(), c.to_string()]);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    A,
    B,
    Both,
}

fn deformed(src: &Source, f: &parking_algebra::ideal::MonomialFamily, ctx: &Context) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    let gens = src.deformation(f, ctx.seed, &ctx.limits)?;
    for (label, p) in &gens {
        let m = f.get(*label).expect("deformations follow the family labels");
        if !is_i_deformation(*label, m, p, default_deformation_cap(m), &ctx.limits)? {
            return Err(Error::Precondition(format!("p_{} is not a deformation of {m}", format_label(*label))));
        }
    }
    Ok(gens)
}

pub fn hilbert(side: Side, src: &Source, ctx: &Context) -> Result<Report> {
    let f = src.family(&ctx.limits)?;
    let cap = match (ctx.cap, socle_bound(&f)) {
        (Some(c), _) => c,
        (None, Some(s)) => s as usize,
        (None, None) => {
            return Err(Error::InfiniteDimension("some variable has no pure power; pass --cap".into()));
        }
    };
    let numerator = if check_family(&f).is_monotone() {
        Some(hilbert_numerator(&f, &ctx.limits)?.to_string())
    } else {
        None
    };
    let (a, b, cmp) = match side {
        Side::A => {
            let mut dims = standard_basis(&f, cap as u32, &ctx.limits)?.graded_counts();
            dims.resize(dims.len().max(cap + 1), 0);
            dims.truncate(cap + 1);
            (Some(trim(dims)), None, None)
        }
        Side::B => {
            let gens = deformed(src, &f, ctx)?;
            let polys: Vec<HomogeneousPolynomial> = gens.into_iter().map(|(_, p)| p).collect();
            let dims = quotient_graded_dims(f.n(), &polys, cap, &ctx.limits)?.dims;
            (None, Some(trim(dims)), None)
        }
        Side::Both => {
            let gens = deformed(src, &f, ctx)?;
            let r = verify_span(&f, &gens, ctx.cap, &ctx.limits)?;
            if !r.termwise_ge {
                return Err(Error::Invariant(format!("Hilb B exceeds Hilb A: {:?} vs {:?}", r.hilb_b, r.hilb_a)));
            }
            (Some(r.hilb_a.clone()), Some(r.hilb_b.clone()), Some(r))
        }
    };
    let mut report = Report::new(json!({
        "cap": cap,
        "hilb_a": a,
        "hilb_b": b,
        "series_a": a.as_deref().map(series),
        "series_b": b.as_deref().map(series),
        "numerator_a": numerator,
        "equal": cmp.as_ref().map(|r| r.equal),
        "first_gap_degree": cmp.as_ref().and_then(|r| r.first_gap_degree),
        "termwise_ge": cmp.as_ref().map(|r| r.termwise_ge),
    }))
    .columns(&["degree", "dim_a", "dim_b"]);
    let len = a.as_ref().map_or(0, Vec::len).max(b.as_ref().map_or(0, Vec::len));
    let cell = |v: &Option<Vec<u64>>, d: usize| v.as_ref().map_or(String::new(), |v| v.get(d).copied().unwrap_or(0).to_string());
    for d in 0..len {
        report.row([d.to_string(), cell(&a, d), cell(&b, d)]);
    }
    if let Some(a) = &a {
        report.line(format!("Hilb A: {}  (dim {})", series(a), a.iter().sum::<u64>()));
    }
    if let Some(b) = &b {
        report.line(format!("Hilb B: {}  (dim {})", series(b), b.iter().sum::<u64>()));
    }
    if let Some(n) = &numerator {
        report.line(format!("numerator of Hilb A over (1-q)^{}: {n}", f.n()));
    }
    if let Some(r) = &cmp {
        match r.first_gap_degree {
            None => report.line("A and B: equal"),
            Some(d) => report.line(format!(
                "A and B: differ, first at degree {d} ({} vs {}); A ≥ B termwise: {}",
                r.hilb_a[d], r.hilb_b[d], r.termwise_ge
            )),
        }
    }
    report.line(format!("cap: {cap}"));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Order,
    Scarf,
    Both,
}

fn resolution_rows(report: &mut Report, name: &str, r: &GradedResolution) {
    for (k, term) in r.terms().iter().enumerate() {
        for s in term {
            report.row([name.to_string(), (k + 1).to_string(), s.d.to_string(), s.r.to_string()]);
        }
    }
}

pub fn resolution(mode: Mode, src: &Source, ctx: &Context) -> Result<Report> {
    let poset = src.poset(&ctx.limits)?;
    let mut result = serde_json::Map::new();
    let mut report = Report::new(Value::Null).columns(&["complex", "k", "degree", "rank"]);

    if matches!(mode, Mode::Order | Mode::Both) {
        let r = order_complex_resolution(&poset, &ctx.limits)?;
        let chain_names = |c: &[usize]| join(&c.iter().map(|&u| poset.names()[u].clone()).collect::<Vec<_>>(), "<");
        let collision = r.collision.as_ref().map(|(a, b)| [chain_names(a), chain_names(b)]);
        result.insert(
            "order".into(),
            json!({
                "display": r.resolution.to_string(),
                "resolution": r.resolution,
                "betti": r.resolution.total_betti(),
                "chains": r.chains.len(),
                "minimal": r.minimal,
                "collision": collision,
            }),
        );
        resolution_rows(&mut report, "order", &r.resolution);
        report.line(format!("order complex: {}", r.resolution));
        match &collision {
            None => report.line("  minimal"),
            Some([a, b]) => report.line(format!("  not minimal: chains {a} and {b} share an lcm")),
        }
    }

    if matches!(mode, Mode::Scarf | Mode::Both) {
        let all = poset.monomials();
        let gens: Vec<Monomial> = minimal_generator_indices(all).iter().map(|&k| all[k].clone()).collect();
        let complex = scarf_complex(&gens, &ctx.limits)?;
        let scarf = scarf_resolution(&gens, &ctx.limits)?;
        let minimal = koszul_betti(&gens, &ctx.limits)?;
        // The Scarf complex sits inside every free resolution, so it is one
        // exactly when it already has the minimal Betti numbers.
        let resolves = scarf == minimal;
        let connected = complex.is_connected();
        let generic = is_generic(&gens);
        result.insert(
            "scarf".into(),
            json!({
                "display": scarf.to_string(),
                "resolution": scarf,
                "f_vector": complex.f_vector(),
                "connected": connected,
                "generic": generic,
                "is_resolution": resolves,
            }),
        );
        result.insert("minimal_betti".into(), json!({"display": minimal.to_string(), "resolution": minimal}));
        resolution_rows(&mut report, "scarf", &scarf);
        resolution_rows(&mut report, "minimal", &minimal);
        report.line(format!("scarf complex: {scarf}"));
        report.line(format!(
            "  f-vector ({}); {}; {}; {}",
            join(&complex.f_vector(), ","),
            if connected { "connected" } else { "disconnected" },
            if generic { "generic" } else { "not generic" },
            if resolves { "a minimal resolution" } else { "not a resolution" },
        ));
        report.line(format!("minimal Betti numbers: {minimal}"));
    }
    report.result = Value::Object(result);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Action {
    Validate,
    Stabilize,
    Recurrent,
    Group,
    Duality,
}

fn toppling(src: &Source) -> Result<TopplingMatrix> {
    match src {
        Source::Matrix(m) => validate_toppling(m.clone()),
        _ => TopplingMatrix::from_digraph(&src.graph()?),
    }
}

pub fn sandpile(action: Action, config: Option<&[u64]>, src: &Source, ctx: &Context) -> Result<Report> {
    let mut report;
    match action {
        Action::Validate => {
            let d = toppling(src)?;
            let det = determinant(&d.to_matrix())?;
            report = Report::new(json!({
                "valid": true,
                "n": d.n(),
                "determinant": big(&det),
                "symmetric": d.symmetric,
                "row_sums_nonnegative": d.row_sums_nonnegative,
                "column_sums_nonnegative": d.column_sums_nonnegative,
            }))
            .columns(&["valid", "n", "determinant", "symmetric", "column_sums_nonnegative"]);
            report.row(["true".into(), d.n().to_string(), det.to_string(), d.symmetric.to_string(), d.column_sums_nonnegative.to_string()]);
            report.line(format!("valid toppling matrix on {} sites, det {det}", d.n()));
            report.line(format!(
                "symmetric: {}; row sums ≥ 0: {}; column sums ≥ 0: {}",
                d.symmetric, d.row_sums_nonnegative, d.column_sums_nonnegative
            ));
        }
        Action::Stabilize => {
            let d = toppling(src)?;
            let u = config.ok_or_else(|| Error::Validation("stabilize needs --config".into()))?;
            let (stable, counts) = stabilize(&d, u)?;
            report = Report::new(json!({"config": u, "stable": stable, "topplings": counts}))
                .columns(&["site", "start", "stable", "topplings"]);
            for i in 0..d.n() {
                report.row([(i + 1).to_string(), u[i].to_string(), stable[i].to_string(), counts[i].to_string()]);
            }
            report.line(format!("stable: ({})", join(&stable, ",")));
            report.line(format!("topplings: ({})", join(&counts, ",")));
        }
        Action::Recurrent => {
            let d = toppling(src)?;
            let rec = recurrent_class(&d, &ctx.limits)?;
            let det = determinant(&d.to_matrix())?;
            let all_allowed = rec.iter().all(|u| is_allowed(&d, u));
            report = Report::new(json!({
                "count": rec.len(),
                "determinant": big(&det),
                "all_allowed": all_allowed,
                "configurations": ctx.enumerate.then_some(&rec),
            }));
            report.line(format!("recurrent configurations: {} (det {det})", rec.len()));
            report.line(format!("all allowed: {all_allowed}"));
            if ctx.enumerate {
                report.columns = (1..=d.n()).map(|i| format!("u{i}")).collect();
                for u in &rec {
                    report.row(u.iter().map(u64::to_string));
                    report.line(format!("({})", join(u, ",")));
                }
            } else {
                report = report.columns(&["count", "determinant"]);
                report.row([rec.len().to_string(), det.to_string()]);
            }
        }
        Action::Group => {
            let d = toppling(src)?;
            let snf = sandpile_group(&d)?;
            let factors = snf.nontrivial_factors();
            report = Report::new(json!({
                "order": big(&snf.order()),
                "invariant_factors": factors.iter().map(big).collect::<Vec<_>>(),
            }))
            .columns(&["invariant_factor"]);
            for f in &factors {
                report.row([f.to_string()]);
            }
            let shown: Vec<String> = factors.iter().map(|f| format!("Z/{f}")).collect();
            report.line(format!("order: {}", snf.order()));
            report.line(format!("group: {}", if shown.is_empty() { "trivial".into() } else { shown.join(" ⊕ ") }));
        }
        Action::Duality => {
            let r = parking_bijection_check(&src.graph()?, &ctx.limits)?;
            report = Report::new(serde_json::to_value(&r).expect("plain struct"))
                .columns(&["recurrent", "parking", "determinant", "matches"]);
            report.row([r.recurrent.to_string(), r.parking.to_string(), r.determinant.clone(), r.matches.to_string()]);
            report.line(format!("recurrent: {}  parking: {}  det: {}", r.recurrent, r.parking, r.determinant));
            report.line(format!("duals of recurrent configurations are the parking functions: {}", r.matches));
        }
    }
    Ok(report)
}

pub fn rho_search(n: usize, max_value: u32, only_nonlinear: bool, ctx: &Context) -> Result<Report> {
    let probes = search_rho(n, max_value, only_nonlinear, &ctx.limits)?;
    let mut report = Report::new(serde_json::to_value(&probes).expect("plain structs"))
        .columns(&["rho", "almost_linear", "equal", "first_gap_degree", "dim_a", "dim_b"]);
    for p in &probes {
        let r = &p.report;
        let gap = r.first_gap_degree.map_or(String::new(), |d| d.to_string());
        report.row([
            join(&p.rho, " "),
            p.almost_linear.to_string(),
            r.equal.to_string(),
            gap.clone(),
            r.hilb_a.iter().sum::<u64>().to_string(),
            r.hilb_b.iter().sum::<u64>().to_string(),
        ]);
        report.line(format!(
            "ρ=({}) {} A: {} B: {}{}",
            join(&p.rho, ","),
            if p.almost_linear { "almost linear" } else { "nonlinear" },
            format_dims(&r.hilb_a),
            format_dims(&r.hilb_b),
            if r.equal { String::new() } else { format!("  gap at degree {gap}") },
        ));
    }
    if probes.is_empty() {
        report.line("no ρ in range");
    }
    Ok(report)
}
