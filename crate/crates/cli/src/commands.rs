use std::path::{Path, PathBuf};

use speclat_core::constructions::{
    affine_isomorphism_search, classify_sum_contexts, direct_convex_sum, direct_product,
    nonspectral_witness_for_sum, square,
};
use speclat_core::rational::{fmt_rational, half, rat, RatVector, Rational};
use speclat_core::spectral::{
    enumerate_contexts, grouped_decomposition, grouped_decomposition_via_norm, minmax_extrema,
    orthomodularity_check, rational_unit_vectors, sharp_cover, sharp_one_dim_elements,
    spectral_decomposition, spin_context, spin_projection, Context, ContextFamily, Decomposed,
    Decomposition, SharpOneDim,
};
use speclat_core::states::{
    context_hull_coverage, context_orthogonality_check, extreme_states, hat_face_sizes,
    hat_faces_affinely_independent, is_e_exposed_point, order_determining_check, sharp_candidates,
    sharply_determining_check, StateSet,
};
use speclat_core::{
    complement, is_extremal, is_one_dimensional, is_sharp, order_unit_norm, scale, Effect,
    EffectAlgebra,
};
use thiserror::Error;

use crate::document::{AlgebraDocument, DocumentError, Expectation};
use crate::report::{CheckResult, Report, Verdict, EXIT_SCOPE, EXIT_USAGE};

/// Candidate sets above this size are not run through the lattice checks.
const MAX_LATTICE_CANDIDATES: usize = 40;
/// Pairwise midpoints of interval vertices probed by the spectral suite.
const MAX_MIDPOINT_PROBES: usize = 400;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Document {
        path: String,
        #[source]
        source: DocumentError,
    },
    #[error(transparent)]
    Core(#[from] speclat_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use speclat_core::Error as E;
        match self {
            CliError::Core(
                E::SizeLimitExceeded(_) | E::SymbolicNormRequired(_) | E::UnsupportedKind(_),
            ) => EXIT_SCOPE,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Contexts,
    States,
    Sharp,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConstructOp {
    Product,
    Sum,
}

pub struct Loaded {
    pub doc: AlgebraDocument,
    pub alg: EffectAlgebra,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let with_path = |source| CliError::Document {
        path: shown.clone(),
        source,
    };
    let doc = AlgebraDocument::parse(&text).map_err(with_path)?;
    let alg = doc.to_algebra().map_err(with_path)?;
    Ok(Loaded { doc, alg })
}

fn echo_algebra(report: &mut Report, prefix: &str, loaded: &Loaded) {
    report.input(&format!("{prefix}name"), loaded.alg.name());
    report.input(&format!("{prefix}kind"), loaded.alg.kind().to_string());
    report.input(&format!("{prefix}dim"), loaded.alg.dim().to_string());
    if let Some(e) = loaded.doc.expectation {
        report.input(&format!("{prefix}expect"), e.to_string());
    }
}

fn finite_contexts(alg: &EffectAlgebra) -> speclat_core::Result<Option<Vec<Context>>> {
    Ok(match enumerate_contexts(alg)? {
        ContextFamily::Finite(cs) => Some(cs),
        ContextFamily::SpinParametric(_) => None,
    })
}

/// Finite contexts, or the sampled contexts `±ω` over rational directions.
fn probe_contexts(alg: &EffectAlgebra) -> speclat_core::Result<Vec<Context>> {
    match finite_contexts(alg)? {
        Some(cs) => Ok(cs),
        None => {
            let mut seen = std::collections::BTreeSet::new();
            let mut out = Vec::new();
            for w in rational_unit_vectors(alg.dim() - 1) {
                let c = spin_context(alg, &w)?;
                if seen.insert(c.coords()) {
                    out.push(c);
                }
            }
            Ok(out)
        }
    }
}

pub fn info(path: &Path) -> Result<Report, CliError> {
    let loaded = load(path)?;
    let alg = &loaded.alg;
    let mut report = Report::new("info");
    report.input("file", path.display().to_string());
    echo_algebra(&mut report, "", &loaded);

    let rays = match alg.cone() {
        Some(cone) => {
            let mut r = CheckResult::new(
                "extreme-rays",
                "extreme rays of the positive cone",
                Verdict::Pass,
            )
            .detail(format!(
                "{} rays, {} facets",
                cone.generators().len(),
                cone.facets().len()
            ));
            for (i, g) in cone.generators().iter().enumerate() {
                r = r.cert(format!("ray {i}"), g);
            }
            r
        }
        None => CheckResult::new(
            "extreme-rays",
            "extreme rays of the positive cone",
            Verdict::NotApplicable,
        )
        .detail("Lorentz cone t >= |x|; every boundary ray is extreme"),
    };
    report.push(rays);

    let states = match extreme_states(alg)? {
        StateSet::Polytope(states) => {
            let mut r = CheckResult::new(
                "extreme-states",
                "extreme points of the state space",
                Verdict::Pass,
            )
            .detail(format!("{} extreme states", states.len()));
            for (i, s) in states.iter().enumerate() {
                r = r.cert(format!("state {i}"), &s.coords);
            }
            r
        }
        StateSet::Ball(d) => CheckResult::new(
            "extreme-states",
            "extreme points of the state space",
            Verdict::NotApplicable,
        )
        .detail(format!(
            "unit sphere of states (1, w), w in Q^{d} with |w| = 1"
        )),
    };
    report.push(states);

    let s1 = match sharp_one_dim_elements(alg)? {
        SharpOneDim::Finite(es) => {
            let mut r = CheckResult::new(
                "sharp-one-dimensional",
                "sharp one-dimensional effects",
                Verdict::Pass,
            )
            .detail(format!("{} elements", es.len()));
            for (i, e) in es.iter().enumerate() {
                r = r.cert(format!("a{i}"), e.coords());
            }
            r
        }
        SharpOneDim::SpinFamily(_) => CheckResult::new(
            "sharp-one-dimensional",
            "sharp one-dimensional effects",
            Verdict::Pass,
        )
        .detail("parametric family 1/2 (1, w) with |w| = 1"),
    };
    report.push(s1);

    let contexts = match finite_contexts(alg)? {
        Some(cs) => {
            let mut r = CheckResult::new(
                "contexts",
                "maximal orthogonal families summing to u",
                Verdict::Pass,
            )
            .detail(format!("{} contexts", cs.len()));
            for (i, c) in cs.iter().enumerate() {
                r = r.detail(format!("context {i}: {} elements", c.len()));
                for (j, e) in c.elements().iter().enumerate() {
                    r = r.cert(format!("context {i} element {j}"), e.coords());
                }
            }
            r
        }
        None => CheckResult::new(
            "contexts",
            "maximal orthogonal families summing to u",
            Verdict::Pass,
        )
        .detail("parametric family {1/2 (1, w), 1/2 (1, -w)} with |w| = 1; uncountably many"),
    };
    report.push(contexts);
    Ok(report.settle())
}

fn decomposition_results(f: &Effect, d: &Decomposition) -> speclat_core::Result<Vec<CheckResult>> {
    let alg = f.algebra();
    let mut out = Vec::new();

    let exact = &d.recompose() == f.coords();
    let mut r = CheckResult::new(
        "spectral-decomposition",
        "f = sum of mu_i a_i over a context with mu_i in [0, 1]",
        if exact { Verdict::Pass } else { Verdict::Fail },
    )
    .detail(if exact {
        "recomposition exact"
    } else {
        "recomposition differs"
    });
    for (i, (mu, a)) in d.coefficients.iter().zip(d.context.elements()).enumerate() {
        r = r
            .detail(format!("mu{i} = {}", fmt_rational(mu)))
            .cert(format!("a{i}"), a.coords());
    }
    out.push(r);

    let g = grouped_decomposition(f)?;
    let h = grouped_decomposition_via_norm(f)?;
    let agree = g.levels.len() == h.levels.len()
        && g.levels.iter().zip(&h.levels).all(|(x, y)| {
            x.coefficient == y.coefficient && x.projection.coords() == y.projection.coords()
        });
    let mut r = CheckResult::new(
        "grouped-decomposition",
        "distinct coefficients with summed projections; two routes agree",
        if agree && g.recompose(alg.dim()) == *f.coords() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    );
    for (i, l) in g.levels.iter().enumerate() {
        r = r
            .detail(format!("level {i}: {}", fmt_rational(&l.coefficient)))
            .cert(format!("p{i}"), l.projection.coords());
    }
    out.push(r);

    let max = d.max_coefficient();
    let min = d.min_coefficient();
    let n = order_unit_norm(f.coords(), alg)?;
    let nc = order_unit_norm(complement(f).coords(), alg)?;
    let ok = n == max && nc == Rational::from_integer(1.into()) - &min;
    out.push(
        CheckResult::new(
            "norm",
            "|f| = max mu and |u - f| = 1 - min mu",
            if ok { Verdict::Pass } else { Verdict::Fail },
        )
        .detail(format!(
            "|f| = {}, |u - f| = {}",
            fmt_rational(&n),
            fmt_rational(&nc)
        )),
    );

    let ex = minmax_extrema(f, d)?;
    let mut r = CheckResult::new(
        "extrema",
        "max and min of s(f) over states equal max and min mu",
        if ex.lp_agrees() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    )
    .detail(format!(
        "max = {}, min = {}",
        fmt_rational(&ex.max),
        fmt_rational(&ex.min)
    ));
    match (&ex.lp_max, &ex.lp_min) {
        (Some(a), Some(b)) => {
            r = r.detail(format!(
                "lp max = {}, lp min = {}",
                fmt_rational(a),
                fmt_rational(b)
            ))
        }
        _ => r = r.detail("state ball: extrema attained at the tangent states"),
    }
    if let Some(s) = &ex.max_state {
        r = r.cert("argmax state", &s.coords);
    }
    if let Some(s) = &ex.min_state {
        r = r.cert("argmin state", &s.coords);
    }
    out.push(r);

    let c = sharp_cover(f)?;
    out.push(
        CheckResult::new(
            "sharp-cover",
            "smallest sharp effect above f",
            Verdict::Pass,
        )
        .cert("cover", c.coords()),
    );
    Ok(out)
}

pub fn decompose(path: &Path, effect: &str) -> Result<Report, CliError> {
    let loaded = load(path)?;
    let alg = &loaded.alg;
    let mut report = Report::new("decompose");
    report.input("file", path.display().to_string());
    echo_algebra(&mut report, "", &loaded);
    report.input("effect", effect.to_string());
    let f = alg.effect(RatVector::parse(effect)?)?;
    match spectral_decomposition(&f) {
        Ok(Decomposed::Spectral(d)) => {
            for r in decomposition_results(&f, &d)? {
                report.push(r);
            }
        }
        Ok(Decomposed::NonSpectral(w)) => report.push(
            CheckResult::new(
                "spectral-decomposition",
                "f = sum of mu_i a_i over a context with mu_i in [0, 1]",
                Verdict::Witness,
            )
            .detail(w.reason.clone())
            .detail(format!(
                "contexts checked: {}",
                w.checked_contexts.count_label()
            ))
            .cert("effect", w.effect.coords()),
        ),
        Err(e @ speclat_core::Error::SymbolicNormRequired(_)) => {
            report.push(
                CheckResult::new(
                    "spectral-decomposition",
                    "f = sum of mu_i a_i over a context with mu_i in [0, 1]",
                    Verdict::ScopeLimited,
                )
                .detail(e.to_string()),
            );
            report.exit_code = EXIT_SCOPE;
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report.settle())
}

fn contexts_suite(alg: &EffectAlgebra, report: &mut Report) -> speclat_core::Result<()> {
    let family = enumerate_contexts(alg)?;
    report.push(
        CheckResult::new("context-family", "contexts of the algebra", Verdict::Pass)
            .detail(family.count_label()),
    );
    let contexts = probe_contexts(alg)?;
    let mut bad = None;
    for c in &contexts {
        if !(context_orthogonality_check(c)? && hat_faces_affinely_independent(c)?) {
            bad = Some(c);
            break;
        }
    }
    let mut r = CheckResult::new(
        "context-orthogonality",
        "states on each element's face take value 1 there and 0 on the rest; faces affinely independent",
        if bad.is_some() { Verdict::Fail } else { Verdict::Pass },
    )
    .detail(format!("{} contexts checked", contexts.len()));
    if let Some(c) = bad {
        for (i, e) in c.elements().iter().enumerate() {
            r = r.cert(format!("a{i}"), e.coords());
        }
    }
    report.push(r);

    if alg.is_spin() {
        report.push(
            CheckResult::new(
                "context-hull-coverage",
                "probe states lie in the hull of some context's faces",
                Verdict::NotApplicable,
            )
            .detail("state ball"),
        );
    } else {
        let (covered, probes) = context_hull_coverage(alg)?;
        let verdict = if covered == probes {
            Verdict::Pass
        } else {
            Verdict::Witness
        };
        report.push(
            CheckResult::new(
                "context-hull-coverage",
                "probe states lie in the hull of some context's faces",
                verdict,
            )
            .detail(format!("{covered} of {probes} probes covered")),
        );
    }
    Ok(())
}

fn states_suite(alg: &EffectAlgebra, report: &mut Report) -> speclat_core::Result<()> {
    let ok = order_determining_check(alg)?;
    report.push(CheckResult::new(
        "order-determining",
        "f <= g iff s(f) <= s(g) for every extreme state s",
        if ok { Verdict::Pass } else { Verdict::Fail },
    ));
    match extreme_states(alg)? {
        StateSet::Ball(_) => report.push(
            CheckResult::new(
                "e-exposed-states",
                "every extreme state is the only state on some sharp one-dimensional effect",
                Verdict::Pass,
            )
            .detail("(1, w) is exposed by 1/2 (1, w)"),
        ),
        StateSet::Polytope(states) => {
            let mut r = CheckResult::new(
                "e-exposed-states",
                "every extreme state is the only state on some sharp one-dimensional effect",
                Verdict::Pass,
            );
            let mut exposed = 0;
            for s in &states {
                match is_e_exposed_point(alg, s)? {
                    (true, _) => exposed += 1,
                    (false, _) => {
                        r.verdict = Verdict::Witness;
                        r = r.cert("not exposed", &s.coords);
                    }
                }
            }
            report.push(r.detail(format!(
                "{exposed} of {} extreme states exposed",
                states.len()
            )));
            let sizes = hat_face_sizes(alg)?;
            let mut r = CheckResult::new(
                "face-sizes",
                "number of states on each sharp one-dimensional effect",
                Verdict::Pass,
            );
            for (a, n) in sizes {
                r = r.detail(format!("{} -> {n}", a.coords()));
            }
            report.push(r);
        }
    }
    Ok(())
}

fn one_dimensional_candidates(alg: &EffectAlgebra) -> speclat_core::Result<Vec<Effect>> {
    let fractions = [
        rat(1, 4),
        half(),
        rat(3, 4),
        Rational::from_integer(1.into()),
    ];
    let bases: Vec<Effect> = match sharp_one_dim_elements(alg)? {
        SharpOneDim::Finite(es) => es,
        SharpOneDim::SpinFamily(d) => rational_unit_vectors(d)
            .iter()
            .map(|w| alg.effect(spin_projection(w)))
            .collect::<speclat_core::Result<_>>()?,
    };
    let mut out = Vec::new();
    for b in &bases {
        for k in &fractions {
            out.push(scale(k, b)?);
        }
    }
    Ok(out)
}

fn sharp_suite(
    alg: &EffectAlgebra,
    expect: Option<Expectation>,
    report: &mut Report,
) -> speclat_core::Result<()> {
    let claimless = expect == Some(Expectation::NonSpectral);
    let cands = one_dimensional_candidates(alg)?;
    let bad: Vec<&Effect> = cands
        .iter()
        .filter(|f| !is_one_dimensional(f) || is_sharp(f) != is_extremal(f))
        .collect();
    let mut r = CheckResult::new(
        "sharp-iff-extremal",
        "a one-dimensional effect is sharp iff it is extremal",
        if bad.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    )
    .detail(format!("{} one-dimensional candidates", cands.len()));
    for f in bad {
        r = r.cert("counterexample", f.coords());
    }
    report.push(r);

    let sharp = sharp_candidates(alg)?;
    let sd = sharply_determining_check(alg, &sharp)?;
    let mut r = CheckResult::new(
        "sharply-determining",
        "g >= f whenever s(g) = 1 on every state with s(f) = 1, for sharp f",
        Verdict::Pass,
    )
    .detail(format!("{} sharp candidates", sharp.len()));
    for e in sd.entries.iter().filter(|e| !e.passed) {
        r.verdict = if claimless {
            Verdict::Witness
        } else {
            Verdict::Fail
        };
        r = r.cert("sharp f", e.effect.coords());
        if let Some(g) = &e.counterexample {
            r = r.cert("g not above f", g);
        }
        if let Some(n) = &e.note {
            r = r.detail(n.clone());
        }
    }
    report.push(r);

    let claim = "sharp elements form an orthomodular lattice under f v g = (f/2 + g/2)^0";
    if sharp.len() > MAX_LATTICE_CANDIDATES {
        report.push(
            CheckResult::new("orthomodular-lattice", claim, Verdict::ScopeLimited).detail(format!(
                "{} candidates exceed the limit of {MAX_LATTICE_CANDIDATES}",
                sharp.len()
            )),
        );
        return Ok(());
    }
    let lat = orthomodularity_check(alg, &sharp)?;
    let verdict = if !lat.failures.is_empty() {
        Verdict::Fail
    } else if !lat.undecided.is_empty() {
        if claimless {
            Verdict::NotApplicable
        } else {
            Verdict::Fail
        }
    } else {
        Verdict::Pass
    };
    let mut r = CheckResult::new("orthomodular-lattice", claim, verdict).detail(format!(
        "{} checks over {} candidates",
        lat.checks, lat.candidates
    ));
    for f in lat.failures.iter().take(5) {
        r = r.detail(f.clone());
    }
    if let Some(u) = lat.undecided.first() {
        r = r.detail(format!("{} joins undefined, e.g. {u}", lat.undecided.len()));
    }
    report.push(r);
    Ok(())
}

/// Deterministic probe effects for the spectral suite.
fn spectral_probes(alg: &EffectAlgebra) -> speclat_core::Result<Vec<Effect>> {
    let mut out = vec![
        alg.zero(),
        alg.unit_effect(),
        scale(&half(), &alg.unit_effect())?,
    ];
    if alg.is_spin() {
        for w in rational_unit_vectors(alg.dim() - 1) {
            for (t, r) in [
                (rat(1, 2), rat(1, 2)),
                (rat(1, 2), rat(3, 10)),
                (rat(1, 4), rat(1, 5)),
                (rat(3, 4), rat(1, 8)),
            ] {
                let v = RatVector::new(vec![t]).concat(&w.scale(&r));
                out.push(alg.effect(v)?);
            }
        }
        return Ok(out);
    }
    let vs = alg.interval_vertices()?.to_vec();
    for v in &vs {
        out.push(alg.effect(v.clone())?);
    }
    let mut pairs = 0;
    'outer: for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if pairs == MAX_MIDPOINT_PROBES {
                break 'outer;
            }
            out.push(alg.effect((&vs[i] + &vs[j]).scale(&half()))?);
            pairs += 1;
        }
    }
    Ok(out)
}

fn spectral_suite(
    alg: &EffectAlgebra,
    expect: Option<Expectation>,
    report: &mut Report,
) -> speclat_core::Result<()> {
    let probes = spectral_probes(alg)?;
    let claim = "every effect has a spectral decomposition";
    let mut witness = None;
    let mut decomposed = Vec::new();
    for f in &probes {
        match spectral_decomposition(f)? {
            Decomposed::Spectral(d) => decomposed.push((f, d)),
            Decomposed::NonSpectral(w) => {
                witness.get_or_insert(w);
            }
        }
    }
    let mut r = match (&witness, expect) {
        (None, Some(Expectation::NonSpectral)) => {
            CheckResult::new("spectral", claim, Verdict::Fail)
                .detail("expected a non-spectral effect but every probe decomposed")
        }
        (None, _) => CheckResult::new("spectral", claim, Verdict::Pass),
        (Some(w), Some(Expectation::Spectral)) => {
            CheckResult::new("spectral", claim, Verdict::Fail)
                .detail(w.reason.clone())
                .cert("non-spectral effect", w.effect.coords())
        }
        (Some(w), _) => CheckResult::new("spectral", claim, Verdict::Witness)
            .detail(w.reason.clone())
            .detail(format!(
                "contexts checked: {}",
                w.checked_contexts.count_label()
            ))
            .cert("non-spectral effect", w.effect.coords()),
    };
    r = r.detail(format!(
        "{} of {} probes decomposed",
        decomposed.len(),
        probes.len()
    ));
    report.push(r);

    let mut failures: Vec<&Effect> = Vec::new();
    for (f, d) in &decomposed {
        let ok = decomposition_results(f, d)?
            .iter()
            .all(|r| r.verdict == Verdict::Pass);
        if !ok {
            failures.push(f);
        }
    }
    let mut r = CheckResult::new(
        "decomposition-invariants",
        "recomposition, grouped routes, norms and state extrema agree with the coefficients",
        if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    )
    .detail(format!("{} decompositions checked", decomposed.len()));
    for f in failures.iter().take(5) {
        r = r.cert("counterexample", f.coords());
    }
    report.push(r);
    Ok(())
}

pub fn check(path: &Path, suite: Suite) -> Result<Report, CliError> {
    let loaded = load(path)?;
    let alg = &loaded.alg;
    let expect = loaded.doc.expectation;
    let mut report = Report::new("check");
    report.input("file", path.display().to_string());
    echo_algebra(&mut report, "", &loaded);
    report.input("suite", format!("{suite:?}").to_lowercase());
    let run = |s: Suite| suite == Suite::All || suite == s;
    if run(Suite::Contexts) {
        contexts_suite(alg, &mut report)?;
    }
    if run(Suite::States) {
        states_suite(alg, &mut report)?;
    }
    if run(Suite::Sharp) {
        sharp_suite(alg, expect, &mut report)?;
    }
    if run(Suite::Spectral) {
        spectral_suite(alg, expect, &mut report)?;
    }
    Ok(report.settle())
}

fn combine(
    a: Option<Expectation>,
    b: Option<Expectation>,
    kind_a: bool,
    kind_b: bool,
) -> Option<Expectation> {
    let spectral =
        |e: Option<Expectation>, classical: bool| e == Some(Expectation::Spectral) || classical;
    if a == Some(Expectation::NonSpectral) || b == Some(Expectation::NonSpectral) {
        Some(Expectation::NonSpectral)
    } else if spectral(a, kind_a) && spectral(b, kind_b) {
        Some(Expectation::Spectral)
    } else {
        None
    }
}

fn isomorphism_results(result: &EffectAlgebra) -> speclat_core::Result<CheckResult> {
    let claim = "affinely isomorphic to a builtin algebra";
    let mut targets = vec![EffectAlgebra::classical(result.dim())?];
    if result.dim() == 3 {
        targets.push(square());
    }
    for t in &targets {
        match affine_isomorphism_search(result, t) {
            Ok(Some(m)) => {
                let mut r = CheckResult::new("isomorphism", claim, Verdict::Pass)
                    .detail(format!("isomorphic to {}", t.name()));
                for i in 0..m.nrows() {
                    r = r.cert(format!("T row {i}"), &m.row(i));
                }
                return Ok(r);
            }
            Ok(None) => {}
            Err(e @ speclat_core::Error::SizeLimitExceeded(_)) => {
                return Ok(
                    CheckResult::new("isomorphism", claim, Verdict::ScopeLimited)
                        .detail(e.to_string()),
                )
            }
            Err(e) => return Err(e),
        }
    }
    Ok(
        CheckResult::new("isomorphism", claim, Verdict::NotApplicable)
            .detail("no builtin of matching shape"),
    )
}

pub fn construct(op: ConstructOp, a: &Path, b: &Path, out: &Path) -> Result<Report, CliError> {
    let la = load(a)?;
    let lb = load(b)?;
    let mut report = Report::new("construct");
    report.input("operation", format!("{op:?}").to_lowercase());
    report.input("left", a.display().to_string());
    echo_algebra(&mut report, "left ", &la);
    report.input("right", b.display().to_string());
    echo_algebra(&mut report, "right ", &lb);
    report.input("output", out.display().to_string());
    let classical = |l: &Loaded| matches!(l.alg.kind(), speclat_core::AlgebraKind::Classical(_));

    let (result, expectation) =
        match op {
            ConstructOp::Product => {
                let p = direct_product(&la.alg, &lb.alg)?;
                let e = combine(
                    la.doc.expectation,
                    lb.doc.expectation,
                    classical(&la),
                    classical(&lb),
                );
                report.push(
                    CheckResult::new(
                        "product",
                        "E1 x E2 with the block cone and unit (u1, u2)",
                        Verdict::Pass,
                    )
                    .detail(format!(
                        "{} of dimension {}",
                        p.result.kind(),
                        p.result.dim()
                    )),
                );
                (p.result, e)
            }
            ConstructOp::Sum => {
                let s = direct_convex_sum(&la.alg, &lb.alg)?;
                report.push(
                    CheckResult::new(
                        "sum",
                        "E1 + E2 on (V1 x V2) modulo (u1, 0) ~ (0, u2)",
                        Verdict::Pass,
                    )
                    .detail(format!(
                        "{} of dimension {}",
                        s.result.kind(),
                        s.result.dim()
                    )),
                );
                let claim = "every context of the sum comes from one summand";
                report.push(match classify_sum_contexts(&s) {
                    Ok(c) => CheckResult::new("sum-contexts", claim, Verdict::Pass)
                        .detail(format!("{} left, {} right", c.left.len(), c.right.len())),
                    Err(e @ speclat_core::Error::ClassificationFailure(_)) => {
                        CheckResult::new("sum-contexts", claim, Verdict::Fail).detail(e.to_string())
                    }
                    Err(e) => return Err(e.into()),
                });
                let claim = "the sum has an effect with no spectral decomposition";
                let mut e = None;
                report.push(match nonspectral_witness_for_sum(&s) {
                    Ok(w) => {
                        e = Some(Expectation::NonSpectral);
                        CheckResult::new("sum-witness", claim, Verdict::Witness)
                            .detail(w.reason.clone())
                            .cert("non-spectral effect", w.effect.coords())
                    }
                    Err(err @ speclat_core::Error::NoSuitableElement) => {
                        CheckResult::new("sum-witness", claim, Verdict::NotApplicable)
                            .detail(err.to_string())
                    }
                    Err(err @ speclat_core::Error::PropositionFailure(_)) => {
                        CheckResult::new("sum-witness", claim, Verdict::Fail)
                            .detail(err.to_string())
                    }
                    Err(err) => return Err(err.into()),
                });
                (s.result, e)
            }
        };
    report.push(isomorphism_results(&result)?);

    let doc = AlgebraDocument::from_algebra(&result, expectation);
    let text = doc.to_text();
    std::fs::write(out, &text).map_err(|source| CliError::Io {
        path: out.display().to_string(),
        source,
    })?;
    let back = load(out)?;
    let same = back.alg.dim() == result.dim()
        && back.alg.unit() == result.unit()
        && back.alg.cone() == result.cone();
    report.push(
        CheckResult::new(
            "output-document",
            "the written document re-parses to the same algebra",
            if same { Verdict::Pass } else { Verdict::Fail },
        )
        .detail(format!("{} lines written", text.lines().count())),
    );
    Ok(report.settle())
}

/// Runs a command and folds errors into an error report.
pub fn run_or_report(command: &str, f: impl FnOnce() -> Result<Report, CliError>) -> Report {
    f().unwrap_or_else(|e| Report::error(command, e.exit_code(), e.to_string()))
}

pub fn default_output(a: &Path, b: &Path, op: ConstructOp) -> PathBuf {
    let stem = |p: &Path| {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    let sep = match op {
        ConstructOp::Product => "x",
        ConstructOp::Sum => "plus",
    };
    PathBuf::from(format!("{}_{sep}_{}.alg", stem(a), stem(b)))
}
