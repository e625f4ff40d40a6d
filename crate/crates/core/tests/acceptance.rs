//! One PASS/FAIL line per acceptance criterion. All tolerances are exact.
//!
//! Runs without the libtest harness so the lines are never captured.
//! Criterion 11 needs the extended budget: set `BISET_EXTENDED=1`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use biset_core::biset::{
    butterfly_factorize, compose_chain, mackey_compose, realize_and_compose_oracle, BisetLabel, BisetRegistry,
};
use biset_core::functor::{
    check_submodules, essential_quotient_dim, generates, is_nv, is_s_self_dual, is_semisimple, radical_dim_char0,
    simple_dim_p_group, trace_gram_rank, Certificate, CertificateRecord, Verdict,
};
use biset_core::group::{all_subgroups, automorphisms, build_group, FiniteGroup, GroupSpec};
use biset_core::linalg::FieldSpec;
use biset_core::Budget;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn grp(s: &str) -> Arc<FiniteGroup> {
    Arc::new(build_group(&s.parse::<GroupSpec>().unwrap()).unwrap())
}

fn field(c: u64) -> FieldSpec {
    FieldSpec::new(c).unwrap()
}

const ABELIAN_UP_TO_16: &[&str] = &[
    "1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15", "C16", "C2^2",
    "C2xC4", "C2^3", "C3^2", "C2xC6", "C4^2", "C2xC8", "C2^2xC4", "C2^4",
];

const NONABELIAN_UP_TO_16: &[&str] = &["S3", "D8", "D10", "A4", "D12", "D14", "D16", "M(2,2)", "D8xC2"];

fn catalog_up_to(n: usize) -> Vec<&'static str> {
    ABELIAN_UP_TO_16.iter().chain(NONABELIAN_UP_TO_16).copied().filter(|s| grp(s).order() <= n).collect()
}

/// Outcome of one criterion. `detail` holds verdicts only, never timings.
struct Outcome {
    pass: bool,
    summary: String,
    detail: Value,
}

fn outcome(pass: bool, summary: impl Into<String>, detail: Value) -> Outcome {
    Outcome { pass, summary: summary.into(), detail }
}

fn shuffled<'a>(items: &[&'a str], rng: &mut ChaCha8Rng) -> Vec<&'a str> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}

fn basis_labels(reg: &BisetRegistry, g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Vec<BisetLabel> {
    let s = reg.space(g, h).unwrap();
    reg.basis(&s).unwrap().labels.iter().map(|l| s.label(l)).collect()
}

fn oracle_equivalence(reg: &BisetRegistry, rng: &mut ChaCha8Rng) -> Outcome {
    let set = ["1", "C2", "C3", "C4", "C2xC2", "S3", "C6"];
    let mut per_triple = BTreeMap::new();
    let mut pass = true;
    for g in shuffled(&set, rng) {
        for h in set {
            for k in set {
                let (gg, hh, kk) = (grp(g), grp(h), grp(k));
                let us = basis_labels(reg, &gg, &hh);
                let vs = basis_labels(reg, &hh, &kk);
                let mut agree = 0usize;
                for u in &us {
                    for v in &vs {
                        let m = mackey_compose(u, v, reg).unwrap();
                        let o = realize_and_compose_oracle(u, v, reg).unwrap();
                        if m == o {
                            agree += 1;
                        }
                    }
                }
                let total = us.len() * vs.len();
                pass &= agree == total;
                per_triple.insert(format!("{g},{h},{k}"), json!([agree, total]));
            }
        }
    }
    let pairs: usize = per_triple.values().map(|v| v[1].as_u64().unwrap() as usize).sum();
    let summary = format!("{pairs} label pairs over {} triples", per_triple.len());
    outcome(pass, summary, json!({ "label_pairs": pairs, "triples": per_triple }))
}

fn butterfly_reproduction(reg: &BisetRegistry, rng: &mut ChaCha8Rng) -> Outcome {
    let set = ["C2", "C4", "C2xC2", "S3", "D8"];
    let q = field(0);
    let mut pass = true;
    let mut counts = BTreeMap::new();
    for g in shuffled(&set, rng) {
        for h in set {
            let space = reg.space(&grp(g), &grp(h)).unwrap();
            let subs = all_subgroups(space.product(), reg.budget()).unwrap();
            let mut ok = 0usize;
            for l in &subs {
                let raw = BisetLabel { space: Arc::clone(&space), subgroup: l.clone() };
                let factors = butterfly_factorize(&raw, reg).unwrap();
                let chain = compose_chain(&factors, q, reg).unwrap();
                if chain == space.label(l).element(q) {
                    ok += 1;
                }
            }
            pass &= ok == subs.len();
            counts.insert(format!("{g},{h}"), json!([ok, subs.len()]));
        }
    }
    let total: u64 = counts.values().map(|v| v[1].as_u64().unwrap()).sum();
    outcome(pass, format!("{total} subgroups over {} pairs (G,H)", counts.len()), json!(counts))
}

fn dimension_counts(reg: &BisetRegistry) -> Outcome {
    let b = reg.budget();
    let a = simple_dim_p_group(&grp("C2"), &grp("C2^3"), b).unwrap();
    let c = simple_dim_p_group(&grp("C2"), &grp("A4xC2"), b).unwrap();
    let pass = a.dimension == 35 && c.raw_classes == 15 && c.dimension == 14;
    let summary = format!("{}, {} -> {}", a.dimension, c.raw_classes, c.dimension);
    outcome(pass, summary, json!({ "C2^3": a.dimension, "A4xC2_raw": c.raw_classes, "A4xC2": c.dimension }))
}

fn a4_vanishing(reg: &BisetRegistry) -> Outcome {
    let (v4, a4) = (grp("C2xC2"), grp("A4"));
    let mut pass = true;
    let mut rows = BTreeMap::new();
    for c in [0, 2, 3] {
        let r = generates(&v4, &a4, field(c), reg).unwrap();
        let nv = is_nv(&a4, field(c), reg).unwrap();
        pass &= r.verdict == Verdict::False && nv.overall == Verdict::False;
        rows.insert(c, json!({ "generates": r.verdict, "rank": [r.rank_reached, r.target_dim], "nv": nv.overall }));
    }
    outcome(pass, "", json!(rows))
}

fn abelian_nv(reg: &BisetRegistry, rng: &mut ChaCha8Rng) -> Outcome {
    let mut pass = true;
    let mut rows = BTreeMap::new();
    for g in shuffled(ABELIAN_UP_TO_16, rng) {
        for c in [0, 2, 3, 5] {
            let v = is_nv(&grp(g), field(c), reg).unwrap().overall;
            pass &= v == Verdict::True;
            rows.insert(format!("{g}/{c}"), json!(v));
        }
    }
    outcome(pass, format!("{} group/characteristic pairs", rows.len()), json!(rows))
}

fn ssd_suite(reg: &BisetRegistry) -> Outcome {
    let b = reg.budget();
    let mut pass = true;
    let mut rows = BTreeMap::new();
    let expected = ABELIAN_UP_TO_16.iter().map(|&g| (g, true)).chain([
        ("X(27)", true),
        ("M(2,2)", true),
        ("D8", false),
        ("A4", false),
    ]);
    for (g, want) in expected {
        let r = is_s_self_dual(&grp(g), b).unwrap();
        pass &= r.self_dual == want;
        rows.insert(g.to_string(), json!([r.self_dual, r.classification]));
    }
    let nilpotent = ["D8", "D16", "M(2,2)", "D8xC2", "X(27)", "C2xD8", "M(2,2)xC3", "X(27)xC2"];
    let mut agree = 0;
    let total = ABELIAN_UP_TO_16.len() + nilpotent.len();
    for g in ABELIAN_UP_TO_16.iter().chain(&nilpotent) {
        let r = is_s_self_dual(&grp(g), b).unwrap();
        if r.classification.is_some() && r.agrees() {
            agree += 1;
        }
    }
    pass &= agree == total;
    rows.insert("classification_agrees".into(), json!([agree, total]));
    outcome(pass, format!("classification agrees on {agree}/{total}"), json!(rows))
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
}

fn semisimplicity(reg: &BisetRegistry) -> Outcome {
    let mut pass = true;
    let mut rows = BTreeMap::new();
    for g in catalog_up_to(12) {
        let gg = grp(g);
        let ss = is_semisimple(&gg, field(0));
        let rad = radical_dim_char0(&gg, reg).unwrap();
        pass &= ss == (rad == 0);
        rows.insert(g.to_string(), json!({ "semisimple": ss, "radical": rad }));
    }
    let mut closed = 0;
    for n in 1..=12u64 {
        let g = grp(&format!("C{n}"));
        for c in [0u64, 2, 3, 5, 7] {
            let predicted = c == 0 || !phi(n).is_multiple_of(c);
            if is_semisimple(&g, field(c)) == predicted {
                closed += 1;
            }
        }
    }
    pass &= closed == 60;
    let summary = format!("{} groups, closed form {closed}/60", rows.len());
    rows.insert("closed_form".into(), json!([closed, 60]));
    outcome(pass, summary, json!(rows))
}

fn burnside_module(reg: &BisetRegistry) -> Outcome {
    let c3 = check_submodules(&grp("C3"), field(2), reg).unwrap();
    let c9 = check_submodules(&grp("C9"), field(3), reg).unwrap();
    let proper = |d: usize, m: usize| 0 < d && d < m;
    let pass = c3.n_invariant
        && proper(c3.n_dim, c3.module_dim)
        && c9.n_prime_invariant
        && proper(c9.n_prime_dim, c9.module_dim);
    outcome(
        pass,
        format!("dim N = {}, dim N' = {}", c3.n_dim, c9.n_prime_dim),
        json!({
            "C3/2": { "dim": c3.module_dim, "N": c3.n_dim, "invariant": c3.n_invariant },
            "C9/3": { "dim": c9.module_dim, "N'": c9.n_prime_dim, "invariant": c9.n_prime_invariant },
        }),
    )
}

fn essential_quotient(reg: &BisetRegistry, rng: &mut ChaCha8Rng) -> Outcome {
    let mut pass = true;
    let mut rows = BTreeMap::new();
    for h in shuffled(&catalog_up_to(16), rng) {
        let hh = grp(h);
        let dim = essential_quotient_dim(&hh, reg).unwrap();
        let out = automorphisms(&hh, reg.budget()).unwrap().out_order;
        pass &= dim == out;
        rows.insert(h.to_string(), json!([dim, out]));
    }
    // |Out| of a few groups, known independently.
    for (h, out) in [("C2^2", 6), ("C2^3", 168), ("C2^4", 20160), ("C3^2", 48), ("D8", 2), ("D16", 4), ("A4", 2)] {
        pass &= rows[h][0] == json!(out);
    }
    outcome(pass, format!("{} groups", rows.len()), json!(rows))
}

fn trace_gram(reg: &BisetRegistry) -> Outcome {
    let mut pass = true;
    let mut rows = BTreeMap::new();
    for c in [0, 2, 3] {
        for g in ["1", "C2", "C3", "C2xC2", "S3"] {
            let (rank, dim) = trace_gram_rank(&grp(g), field(c), reg).unwrap();
            pass &= if g == "1" { rank == 1 && dim == 1 } else { rank < dim };
            rows.insert(format!("{g}/{c}"), json!([rank, dim]));
        }
    }
    outcome(pass, "", json!(rows))
}

type Criterion = (u32, &'static str, fn(&BisetRegistry, &mut ChaCha8Rng) -> Outcome);

const CRITERIA: &[Criterion] = &[
    (1, "Mackey formula equals explicit orbit composition", oracle_equivalence),
    (2, "butterfly factors recompose every transitive biset", butterfly_reproduction),
    (3, "simple functor dimensions 35, 15 -> 14", |r, _| dimension_counts(r)),
    (4, "A4 vanishes in characteristics 0, 2, 3", |r, _| a4_vanishing(r)),
    (5, "abelian groups of order <= 16 are NV in characteristics 0, 2, 3, 5", abelian_nv),
    (6, "s-self-dual suite and nilpotent classification", |r, _| ssd_suite(r)),
    (7, "semisimplicity against radical and closed form", |r, _| semisimplicity(r)),
    (8, "N(C3) over F2 and N'(C9) over F3 are proper submodules", |r, _| burnside_module(r)),
    (9, "essential quotient dimension equals |Out(H)|", essential_quotient),
    (10, "trace form degenerate exactly when G != 1", |r, _| trace_gram(r)),
];

fn run_all(threads: usize, seed: u64, print: bool) -> (bool, String) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let reg = BisetRegistry::new(Budget::default());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut all = true;
        let mut verdicts = BTreeMap::new();
        for &(n, name, f) in CRITERIA {
            let t = Instant::now();
            let o = f(&reg, &mut rng);
            if print {
                let extra = if o.summary.is_empty() { String::new() } else { format!(": {}", o.summary) };
                println!(
                    "criterion {n:>2}  {}  {name} (exact){extra} [{:.1}s]",
                    if o.pass { "PASS" } else { "FAIL" },
                    t.elapsed().as_secs_f64()
                );
            }
            all &= o.pass;
            verdicts.insert(n, json!({ "pass": o.pass, "detail": o.detail }));
        }
        (all, serde_json::to_string(&verdicts).unwrap())
    })
}

fn extended() -> Outcome {
    let reg = BisetRegistry::new(Budget::default());
    let (h, g) = (grp("C2^3"), grp("A4xC2"));
    let zero = generates(&h, &g, field(0), &reg).unwrap();
    let verified = zero.certificate.as_ref().is_some_and(|c| {
        let text = serde_json::to_string(&c.to_record()).unwrap();
        let record: CertificateRecord = serde_json::from_str(&text).unwrap();
        let fresh = BisetRegistry::new(Budget::default());
        Certificate::from_record(&record, &fresh).and_then(|c| c.verify(&fresh)).unwrap_or(false)
    });
    let nv0 = is_nv(&g, field(0), &reg).unwrap().overall;
    let nv3 = is_nv(&g, field(3), &reg).unwrap();
    let failing: Vec<String> = nv3.failures().map(|e| e.group.name().to_string()).collect();
    let pass = zero.verdict == Verdict::True && verified && nv0 == Verdict::True && nv3.overall == Verdict::False;
    outcome(pass, "", json!({ "certificate_verified": verified, "nv0": nv0, "nv3": nv3.overall, "failing": failing }))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }

    let (pass, first) = run_all(1, 1, true);

    let t = Instant::now();
    let (_, second) = run_all(4, 2, false);
    let same = first == second;
    println!(
        "criterion 12  {}  verdict JSON identical across 1 and 4 threads, seeds 1 and 2 (byte equality) [{:.1}s]",
        if same { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64()
    );

    let extended_ok = if std::env::var_os("BISET_EXTENDED").is_some() {
        let t = Instant::now();
        let o = extended();
        println!(
            "criterion 11  {}  A4xC2 is NV in characteristic 0 with a verified certificate, not in characteristic 3 (exact) [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
        o.pass
    } else {
        println!("criterion 11  SKIP  extended budget; set BISET_EXTENDED=1");
        true
    };

    if !(pass && same && extended_ok) {
        eprintln!("acceptance: failures, see lines above");
        std::process::exit(1);
    }
}
