use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use biset_core::biset::{
    butterfly_factorize, compose_chain, mackey_compose, realize_and_compose_oracle, BisetLabel, BisetSpace,
};
use biset_core::functor::{
    abelian_action_matrices, burnside_module_matrices, check_submodules, essential_quotient_dim, generates_with, is_nv,
    is_s_self_dual, is_semisimple, radical_dim_char0, simple_dim_p_group, trace_gram_rank, Certificate,
    CertificateRecord, Method, NvMethod, SearchOptions, Verdict,
};
use biset_core::group::{
    automorphisms, build_group_with, euler_phi, section_classes, FiniteGroup, GroupSpec, Section, Subgroup,
    SubgroupLattice,
};
use biset_core::{Error, Result};
use serde::Serialize;

use crate::output::Output;
use crate::{Command, Context};

pub fn run(cmd: &Command, ctx: &Context) -> Result<Output> {
    match cmd {
        Command::Basis { left, right, summary } => basis(ctx, left, right, *summary),
        Command::Compose { g, h, k, i, j, oracle } => compose(ctx, g, h, k, *i, *j, *oracle),
        Command::Butterfly { g, h, i } => butterfly(ctx, g, h, *i),
        Command::Generates { h, g, certificate_out, force_span } => {
            generates(ctx, h, g, certificate_out.as_deref(), *force_span)
        }
        Command::Nv { g } => nv(ctx, g),
        Command::Semisimple { g, radical } => semisimple(ctx, g, *radical),
        Command::Ssd { g } => ssd(ctx, g),
        Command::SimpleDim { p, g } => simple_dim(ctx, p, g),
        Command::Sections { g, index } => sections(ctx, g, *index),
        Command::TraceGram { g } => trace_gram(ctx, g),
        Command::BurnsideModule { g } => burnside_module(ctx, g),
        Command::EssentialOut { h } => essential_out(ctx, h),
        Command::Verify { certificate } => verify(ctx, certificate),
    }
}

fn group(ctx: &Context, text: &str) -> Result<Arc<FiniteGroup>> {
    let spec: GroupSpec = text.parse()?;
    Ok(Arc::new(build_group_with(&spec, ctx.registry.budget())?))
}

fn label_at(ctx: &Context, space: &Arc<BisetSpace>, i: usize) -> Result<BisetLabel> {
    let basis = ctx.registry.basis(space)?;
    let l = basis.labels.get(i).ok_or_else(|| {
        Error::Precondition(format!(
            "index {i} out of range: B({}, {}) has {} labels",
            space.left().name(),
            space.right().name(),
            basis.len()
        ))
    })?;
    Ok(space.label(l))
}

/// A subgroup of `G × H` as `(g, h)` pairs.
fn pairs(space: &BisetSpace, l: &Subgroup) -> Vec<(u32, u32)> {
    l.elements().iter().map(|&x| space.split(x)).collect()
}

#[derive(Serialize)]
struct LabelRow {
    index: usize,
    order: usize,
    p1: usize,
    p2: usize,
    k1: usize,
    k2: usize,
    q: usize,
    pairs: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct BasisResult {
    left: String,
    right: String,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<LabelRow>>,
}

fn basis(ctx: &Context, left: &str, right: &str, summary: bool) -> Result<Output> {
    let (g, h) = (group(ctx, left)?, group(ctx, right)?);
    let space = ctx.registry.space(&g, &h)?;
    let b = ctx.registry.basis(&space)?;
    let mut text = format!("B({}, {}): {} labels\n", g.name(), h.name(), b.len());
    let labels = (!summary).then(|| {
        b.labels
            .iter()
            .enumerate()
            .map(|(index, l)| {
                let inv = space.invariants(l);
                let row = LabelRow {
                    index,
                    order: l.order(),
                    p1: inv.p1.order(),
                    p2: inv.p2.order(),
                    k1: inv.k1.order(),
                    k2: inv.k2.order(),
                    q: inv.q_order(),
                    pairs: pairs(&space, l),
                };
                let _ = writeln!(
                    text,
                    "{:>5}  |L|={:<4} p1={:<3} p2={:<3} k1={:<3} k2={:<3} q={}",
                    index, row.order, row.p1, row.p2, row.k1, row.k2, row.q
                );
                row
            })
            .collect()
    });
    let result = BasisResult { left: g.name().into(), right: h.name().into(), count: b.len(), labels };
    Ok(Output::new(None, text, &result))
}

#[derive(Serialize)]
struct Term {
    index: usize,
    order: usize,
    coefficient: String,
}

#[derive(Serialize)]
struct ComposeResult {
    left: String,
    middle: String,
    right: String,
    i: usize,
    j: usize,
    terms: Vec<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

fn compose(ctx: &Context, g: &str, h: &str, k: &str, i: usize, j: usize, oracle: bool) -> Result<Output> {
    let (g, h, k) = (group(ctx, g)?, group(ctx, h)?, group(ctx, k)?);
    let u = label_at(ctx, &ctx.registry.space(&g, &h)?, i)?;
    let v = label_at(ctx, &ctx.registry.space(&h, &k)?, j)?;
    let product = mackey_compose(&u, &v, &ctx.registry)?;
    let target = ctx.registry.space(&g, &k)?;
    let tb = ctx.registry.basis(&target)?;
    let mut terms: Vec<Term> = product
        .terms()
        .map(|(l, c)| Term {
            index: tb.position(l).expect("product is in canonical form"),
            order: l.order(),
            coefficient: c.to_string(),
        })
        .collect();
    terms.sort_by_key(|t| t.index);
    let oracle_agrees = if oracle { Some(realize_and_compose_oracle(&u, &v, &ctx.registry)? == product) } else { None };
    let mut text = format!("#{i} in B({}, {}) ∘ #{j} in B({}, {}) =", g.name(), h.name(), h.name(), k.name());
    if terms.is_empty() {
        text.push_str(" 0");
    }
    for (n, t) in terms.iter().enumerate() {
        let sep = if n == 0 { " " } else { " + " };
        let _ = write!(text, "{sep}{}·[#{}]", t.coefficient, t.index);
    }
    text.push('\n');
    if let Some(ok) = oracle_agrees {
        let _ = writeln!(text, "oracle: {}", if ok { "agrees" } else { "DISAGREES" });
    }
    let verdict = oracle_agrees.map(Verdict::from_bool);
    let result = ComposeResult {
        left: g.name().into(),
        middle: h.name().into(),
        right: k.name().into(),
        i,
        j,
        terms,
        oracle_agrees,
    };
    Ok(Output::new(verdict, text, &result))
}

#[derive(Serialize)]
struct Factor {
    kind: String,
    left: String,
    right: String,
    order: usize,
    pairs: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct ButterflyResult {
    left: String,
    right: String,
    index: usize,
    factors: Vec<Factor>,
    reproduces: bool,
}

fn butterfly(ctx: &Context, g: &str, h: &str, i: usize) -> Result<Output> {
    let (g, h) = (group(ctx, g)?, group(ctx, h)?);
    let label = label_at(ctx, &ctx.registry.space(&g, &h)?, i)?;
    let factors = butterfly_factorize(&label, &ctx.registry)?;
    let product = compose_chain(&factors, ctx.field, &ctx.registry)?;
    let reproduces = product == label.element(ctx.field);
    let mut text = format!("#{i} in B({}, {}) =\n", g.name(), h.name());
    let factors: Vec<Factor> = factors
        .iter()
        .map(|f| {
            let s = &f.label.space;
            let row = Factor {
                kind: f.kind.to_string(),
                left: s.left().name().into(),
                right: s.right().name().into(),
                order: f.label.subgroup.order(),
                pairs: pairs(s, &f.label.subgroup),
            };
            let _ = writeln!(text, "  {:<4} {} <- {}  (|L|={})", row.kind, row.left, row.right, row.order);
            row
        })
        .collect();
    let _ = writeln!(text, "recomposes: {}", if reproduces { "yes" } else { "NO" });
    let result = ButterflyResult { left: g.name().into(), right: h.name().into(), index: i, factors, reproduces };
    Ok(Output::new(Some(Verdict::from_bool(reproduces)), text, &result))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::NotSubquotient => "not-subquotient",
        Method::Quotient => "quotient",
        Method::Span => "span",
        Method::Budget => "budget",
    }
}

#[derive(Serialize)]
struct GeneratesResult {
    h: String,
    g: String,
    verdict: Verdict,
    method: &'static str,
    products_tried: u64,
    rank_reached: usize,
    target_dim: usize,
    certificate_terms: Option<usize>,
    note: Option<String>,
    certificate: Option<CertificateRecord>,
}

fn write_certificate(path: &Path, record: &CertificateRecord) -> Result<()> {
    let json = serde_json::to_string_pretty(record).map_err(|e| Error::Cache(e.to_string()))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

fn generates(ctx: &Context, h: &str, g: &str, out: Option<&Path>, force_span: bool) -> Result<Output> {
    let (h, g) = (group(ctx, h)?, group(ctx, g)?);
    let opts = SearchOptions { force_span, ..SearchOptions::default() };
    let r = generates_with(&h, &g, ctx.field, &ctx.registry, &opts)?;
    let record = r.certificate.as_ref().map(Certificate::to_record);
    if let (Some(path), Some(rec)) = (out, &record) {
        write_certificate(path, rec)?;
    }
    let mut text = format!("{} ⊢ {} over {}: {}\n", h.name(), g.name(), ctx.field, r.verdict);
    let _ = writeln!(text, "method: {}", method_name(r.method));
    if r.method == Method::Span || r.method == Method::Budget {
        let _ = writeln!(text, "products tried: {}, rank {}/{}", r.products_tried, r.rank_reached, r.target_dim);
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(text, "certificate: {} terms", c.terms.len());
    }
    if let Some(n) = &r.note {
        let _ = writeln!(text, "note: {n}");
    }
    let result = GeneratesResult {
        h: h.name().into(),
        g: g.name().into(),
        verdict: r.verdict,
        method: method_name(r.method),
        products_tried: r.products_tried,
        rank_reached: r.rank_reached,
        target_dim: r.target_dim,
        certificate_terms: r.certificate.as_ref().map(|c| c.terms.len()),
        note: r.note.clone(),
        certificate: record,
    };
    Ok(Output::new(Some(r.verdict), text, &result))
}

#[derive(Serialize)]
struct SectionRow {
    top: Vec<u32>,
    bottom: Vec<u32>,
}

impl SectionRow {
    fn of(s: &Section) -> Self {
        SectionRow { top: s.top.elements().to_vec(), bottom: s.bottom.elements().to_vec() }
    }
}

#[derive(Serialize)]
struct NvRow {
    group: String,
    order: usize,
    witness: SectionRow,
    verdict: Verdict,
    method: &'static str,
    via: Option<usize>,
    products_tried: Option<u64>,
}

#[derive(Serialize)]
struct NvResult {
    group: String,
    overall: Verdict,
    entries: Vec<NvRow>,
}

fn nv(ctx: &Context, g: &str) -> Result<Output> {
    let g = group(ctx, g)?;
    let r = is_nv(&g, ctx.field, &ctx.registry)?;
    let mut text = format!("NV({}) over {}: {}\n", g.name(), ctx.field, r.overall);
    let entries: Vec<NvRow> = r
        .entries
        .iter()
        .map(|e| {
            let (method, via) = match e.method {
                NvMethod::Quotient => ("quotient", None),
                NvMethod::Transitive { via } => ("transitive", Some(via)),
                NvMethod::Direct => ("direct", None),
            };
            let _ = write!(text, "  {:<12} order {:<4} {:<13} {}", e.group.name(), e.group.order(), e.verdict, method);
            if let Some(v) = via {
                let _ = write!(text, " via #{v}");
            }
            text.push('\n');
            NvRow {
                group: e.group.name().into(),
                order: e.group.order(),
                witness: SectionRow::of(&e.witness),
                verdict: e.verdict,
                method,
                via,
                products_tried: e.report.as_ref().map(|r| r.products_tried),
            }
        })
        .collect();
    let result = NvResult { group: g.name().into(), overall: r.overall, entries };
    Ok(Output::new(Some(r.overall), text, &result))
}

#[derive(Serialize)]
struct SemisimpleResult {
    group: String,
    order: usize,
    cyclic: bool,
    phi: u64,
    semisimple: bool,
    radical_dim: Option<usize>,
}

fn semisimple(ctx: &Context, g: &str, radical: bool) -> Result<Output> {
    let g = group(ctx, g)?;
    let ss = is_semisimple(&g, ctx.field);
    let radical_dim = if radical { Some(radical_dim_char0(&g, &ctx.registry)?) } else { None };
    let phi = euler_phi(g.order() as u64);
    let mut text =
        format!("{}B({}, {}) semisimple: {}\n", ctx.field, g.name(), g.name(), if ss { "yes" } else { "no" });
    let _ = writeln!(text, "cyclic: {}, phi(|G|) = {phi}", g.is_cyclic());
    if let Some(d) = radical_dim {
        let _ = writeln!(text, "trace-form radical over Q: {d}");
    }
    let result = SemisimpleResult {
        group: g.name().into(),
        order: g.order(),
        cyclic: g.is_cyclic(),
        phi,
        semisimple: ss,
        radical_dim,
    };
    Ok(Output::new(Some(Verdict::from_bool(ss)), text, &result))
}

#[derive(Serialize)]
struct SsdResult {
    group: String,
    self_dual: bool,
    witness: Option<Vec<u32>>,
    classification: Option<bool>,
}

fn ssd(ctx: &Context, g: &str) -> Result<Output> {
    let g = group(ctx, g)?;
    let r = is_s_self_dual(&g, ctx.registry.budget())?;
    let mut text = format!("{} s-self-dual: {}\n", g.name(), if r.self_dual { "yes" } else { "no" });
    if let Some(w) = &r.witness {
        let _ = writeln!(text, "subgroup of order {} is not a quotient", w.order());
    }
    if let Some(c) = r.classification {
        let _ = writeln!(text, "classification predicts: {}", if c { "yes" } else { "no" });
    }
    let result = SsdResult {
        group: g.name().into(),
        self_dual: r.self_dual,
        witness: r.witness.as_ref().map(|w| w.elements().to_vec()),
        classification: r.classification,
    };
    Ok(Output::new(Some(Verdict::from_bool(r.self_dual)), text, &result))
}

#[derive(Serialize)]
struct SimpleDimResult {
    p_group: String,
    group: String,
    raw_classes: usize,
    excluded: Vec<SectionRow>,
    dimension: usize,
}

fn simple_dim(ctx: &Context, p: &str, g: &str) -> Result<Output> {
    if !ctx.field.is_rational() {
        return Err(Error::Precondition("simple-dim is defined in characteristic 0 only".into()));
    }
    let (p, g) = (group(ctx, p)?, group(ctx, g)?);
    let r = simple_dim_p_group(&p, &g, ctx.registry.budget())?;
    let mut text = format!("dim S_{{{}, Q}}({}) = {}\n", p.name(), g.name(), r.dimension);
    let _ =
        writeln!(text, "section classes with quotient {}: {}, excluded: {}", p.name(), r.raw_classes, r.excluded.len());
    let result = SimpleDimResult {
        p_group: p.name().into(),
        group: g.name().into(),
        raw_classes: r.raw_classes,
        excluded: r.excluded.iter().map(SectionRow::of).collect(),
        dimension: r.dimension,
    };
    Ok(Output::new(None, text, &result))
}

#[derive(Serialize)]
struct SectionClassRow {
    top: usize,
    bottom: usize,
    index: usize,
    size: usize,
    section: SectionRow,
}

#[derive(Serialize)]
struct SectionsResult {
    group: String,
    count: usize,
    classes: Vec<SectionClassRow>,
}

fn sections(ctx: &Context, g: &str, index: Option<usize>) -> Result<Output> {
    let g = group(ctx, g)?;
    let lattice = SubgroupLattice::new(&g, ctx.registry.budget())?;
    let classes: Vec<SectionClassRow> = section_classes(&g, &lattice, ctx.registry.budget())?
        .into_iter()
        .filter(|c| index.is_none_or(|n| c.rep.index() == n))
        .map(|c| SectionClassRow {
            top: c.rep.top.order(),
            bottom: c.rep.bottom.order(),
            index: c.rep.index(),
            size: c.size,
            section: SectionRow::of(&c.rep),
        })
        .collect();
    let mut text = format!("{}: {} section classes\n", g.name(), classes.len());
    for c in &classes {
        let _ = writeln!(text, "  |T|={:<4} |S|={:<4} |T/S|={:<4} class size {}", c.top, c.bottom, c.index, c.size);
    }
    let result = SectionsResult { group: g.name().into(), count: classes.len(), classes };
    Ok(Output::new(None, text, &result))
}

#[derive(Serialize)]
struct TraceGramResult {
    group: String,
    dim: usize,
    rank: usize,
    radical_dim: usize,
}

fn trace_gram(ctx: &Context, g: &str) -> Result<Output> {
    let g = group(ctx, g)?;
    let (rank, dim) = trace_gram_rank(&g, ctx.field, &ctx.registry)?;
    let text = format!("trace form on {}B({}, {}): rank {rank} of {dim}\n", ctx.field, g.name(), g.name());
    let result = TraceGramResult { group: g.name().into(), dim, rank, radical_dim: dim - rank };
    Ok(Output::new(None, text, &result))
}

#[derive(Serialize)]
struct SubmoduleRow {
    module_dim: usize,
    n_dim: usize,
    n_invariant: bool,
    n_prime_dim: usize,
    n_prime_invariant: bool,
    not_simple: bool,
}

#[derive(Serialize)]
struct BurnsideModuleResult {
    group: String,
    module_dim: usize,
    acting_dim: usize,
    points: Vec<Vec<u32>>,
    matrices: Vec<Vec<Vec<String>>>,
    abelian_formula_agrees: Option<bool>,
    submodules: Option<SubmoduleRow>,
}

fn burnside_module(ctx: &Context, g: &str) -> Result<Output> {
    let g = group(ctx, g)?;
    let set = burnside_module_matrices(&g, ctx.field, &ctx.registry)?;
    let agrees = if g.is_abelian() {
        Some(abelian_action_matrices(&g, ctx.field, &ctx.registry)?.matrices == set.matrices)
    } else {
        None
    };
    let submodules = if g.is_cyclic() && g.is_p_group().is_some() && g.order() > 1 {
        let r = check_submodules(&g, ctx.field, &ctx.registry)?;
        Some(SubmoduleRow {
            module_dim: r.module_dim,
            n_dim: r.n_dim,
            n_invariant: r.n_invariant,
            n_prime_dim: r.n_prime_dim,
            n_prime_invariant: r.n_prime_invariant,
            not_simple: r.not_simple(),
        })
    } else {
        None
    };
    let n = set.points.len();
    let mut text = format!(
        "{}B({}) as a {}B({}, {})-module: dim {n}, {} acting basis elements\n",
        ctx.field,
        g.name(),
        ctx.field,
        g.name(),
        g.name(),
        set.acting.len()
    );
    if let Some(a) = agrees {
        let _ = writeln!(text, "abelian closed form agrees: {}", if a { "yes" } else { "NO" });
    }
    if let Some(s) = &submodules {
        let _ = writeln!(text, "N: dim {}, invariant {}", s.n_dim, s.n_invariant);
        let _ = writeln!(text, "N': dim {}, invariant {}", s.n_prime_dim, s.n_prime_invariant);
        let _ = writeln!(text, "not simple: {}", s.not_simple);
    }
    let matrices = set
        .matrices
        .iter()
        .map(|m| (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect())
        .collect();
    let verdict = submodules.as_ref().map(|s| Verdict::from_bool(s.not_simple));
    let result = BurnsideModuleResult {
        group: g.name().into(),
        module_dim: n,
        acting_dim: set.acting.len(),
        points: set.points.iter().map(|p| p.elements().to_vec()).collect(),
        matrices,
        abelian_formula_agrees: agrees,
        submodules,
    };
    Ok(Output::new(verdict, text, &result))
}

#[derive(Serialize)]
struct EssentialResult {
    group: String,
    dimension: usize,
    out_order: usize,
    agrees: bool,
}

fn essential_out(ctx: &Context, h: &str) -> Result<Output> {
    let h = group(ctx, h)?;
    let dimension = essential_quotient_dim(&h, &ctx.registry)?;
    let out_order = automorphisms(&h, ctx.registry.budget())?.out_order;
    let agrees = dimension == out_order;
    let text = format!("essential quotient of B({0}, {0}): dim {dimension}, |Out({0})| = {out_order}\n", h.name());
    let result = EssentialResult { group: h.name().into(), dimension, out_order, agrees };
    Ok(Output::new(Some(Verdict::from_bool(agrees)), text, &result))
}

#[derive(Serialize)]
struct VerifyResult {
    h: String,
    g: String,
    field: String,
    terms: usize,
    verified: bool,
}

fn verify(ctx: &Context, path: &Path) -> Result<Output> {
    let raw = fs::read_to_string(path)?;
    let record: CertificateRecord =
        serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let cert = Certificate::from_record(&record, &ctx.registry)?;
    let verified = cert.verify(&ctx.registry)?;
    let text = format!(
        "certificate for {} ⊢ {} over {} ({} terms): {}\n",
        cert.h.name(),
        cert.g.name(),
        cert.field,
        cert.terms.len(),
        if verified { "verified" } else { "REJECTED" }
    );
    let result = VerifyResult {
        h: cert.h.name().into(),
        g: cert.g.name().into(),
        field: cert.field.to_string(),
        terms: cert.terms.len(),
        verified,
    };
    Ok(Output::new(Some(Verdict::from_bool(verified)), text, &result))
}
