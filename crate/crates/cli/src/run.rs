//! Command implementations. Each command consumes a parsed document and
//! produces a [`Report`] with both a human-readable text rendering and a
//! deterministic JSON rendering. Every cutoff-relative claim states its
//! cutoff.

use crate::dsl::{self, DslDocument, Item};
use serde_json::{json, Value};
use sullivan::cohomology::ToomerCertainty;
use sullivan::search::{BranchTrace, SplitChoice};
use sullivan::{
    betti, coformal_limit, coformality_report, coformalize, free_lie, parametrized_iso_search,
    quadratic_dual, replay_branch, CoformalKind, CoformalVerdict, GradedLieAlgebra,
    KoszulVerdict, RelativeModel, SearchVerdict, SullivanAlgebra, ToomerVerdict,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub cutoff: Option<usize>,
    pub verdicts: Vec<Value>,
    pub text: Vec<String>,
    /// true when an analysis found the input invalid (exit status 1)
    pub failed: bool,
}

impl Report {
    fn new(command: &str, cutoff: Option<usize>) -> Self {
        Report {
            command: command.to_string(),
            cutoff,
            verdicts: Vec::new(),
            text: Vec::new(),
            failed: false,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "cutoff": self.cutoff,
            "verdicts": self.verdicts,
        })
    }

    pub fn render_text(&self) -> String {
        let mut s = self.text.join("\n");
        s.push('\n');
        s
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("no item named `{0}` in the document")]
    NoSuchItem(String),
    #[error("item `{0}` is not {1}")]
    WrongKind(String, &'static str),
    #[error("the document contains no {0}")]
    Empty(&'static str),
    #[error(transparent)]
    Core(#[from] sullivan::Error),
}

type Result<T> = std::result::Result<T, RunError>;

/// Pick the named algebra, or the first algebra when no name was given.
fn pick_algebra<'a>(doc: &'a DslDocument, name: Option<&str>) -> Result<(&'a str, &'a SullivanAlgebra)> {
    match name {
        Some(n) => match doc.find(n) {
            Some(Item::Algebra { name, algebra }) => Ok((name, algebra)),
            Some(_) => Err(RunError::WrongKind(n.to_string(), "an algebra")),
            None => Err(RunError::NoSuchItem(n.to_string())),
        },
        None => doc
            .algebras()
            .next()
            .ok_or(RunError::Empty("algebra declarations")),
    }
}

fn pick_fibration<'a>(doc: &'a DslDocument, name: Option<&str>) -> Result<(&'a str, &'a RelativeModel)> {
    match name {
        Some(n) => match doc.find(n) {
            Some(Item::Fibration { name, model, .. }) => Ok((name, model)),
            Some(_) => Err(RunError::WrongKind(n.to_string(), "a fibration")),
            None => Err(RunError::NoSuchItem(n.to_string())),
        },
        None => doc
            .fibrations()
            .next()
            .ok_or(RunError::Empty("fibration declarations")),
    }
}

fn pick_lie<'a>(doc: &'a DslDocument, name: Option<&str>) -> Result<(&'a str, &'a GradedLieAlgebra)> {
    match name {
        Some(n) => match doc.find(n) {
            Some(Item::Lie { name, lie }) => Ok((name, lie)),
            Some(_) => Err(RunError::WrongKind(n.to_string(), "a lie algebra")),
            None => Err(RunError::NoSuchItem(n.to_string())),
        },
        None => doc
            .items
            .iter()
            .find_map(|i| match i {
                Item::Lie { name, lie } => Some((name.as_str(), lie)),
                _ => None,
            })
            .ok_or(RunError::Empty("lie declarations")),
    }
}

// ---------------------------------------------------------------------

/// `validate`: run structural validation on every declaration.
pub fn validate(doc: &DslDocument, cutoff: usize) -> Result<Report> {
    let mut r = Report::new("validate", Some(cutoff));
    for item in &doc.items {
        match item {
            Item::Algebra { name, algebra } => {
                let rep = algebra.validate(cutoff);
                let ok = rep.degree_ok
                    && rep.d_squared_ok
                    && rep.minimal
                    && rep.simply_connected
                    && rep.finite_type;
                if !ok {
                    r.failed = true;
                }
                r.verdicts.push(json!({
                    "item": name,
                    "kind": "algebra",
                    "ok": ok,
                    "degree_ok": rep.degree_ok,
                    "d_squared_ok": rep.d_squared_ok,
                    "minimal": rep.minimal,
                    "simply_connected": rep.simply_connected,
                    "finite_type": rep.finite_type,
                    "counterexamples": rep.counterexamples.iter()
                        .map(|(g, p)| json!({"generator": g, "value": p.to_string()}))
                        .collect::<Vec<_>>(),
                }));
                r.text.push(format!(
                    "{name}: {} (degrees <= {cutoff})",
                    if ok { "valid minimal Sullivan algebra" } else { "INVALID" }
                ));
                for (g, p) in &rep.counterexamples {
                    r.text.push(format!("  offending generator {g}: {p}"));
                }
            }
            Item::Morphism { name, morphism, .. } => {
                let rep = morphism.validate(cutoff);
                let ok = rep.degree_ok && rep.commutes;
                if !ok {
                    r.failed = true;
                }
                r.verdicts.push(json!({
                    "item": name,
                    "kind": "morphism",
                    "ok": ok,
                    "degree_ok": rep.degree_ok,
                    "commutes": rep.commutes,
                }));
                r.text.push(format!(
                    "{name}: {} (degrees <= {cutoff})",
                    if ok { "valid DGA morphism" } else { "INVALID morphism" }
                ));
            }
            Item::Fibration { name, model, .. } => {
                let rep = model.total().validate(cutoff);
                let ok = rep.degree_ok
                    && rep.d_squared_ok
                    && rep.simply_connected
                    && rep.finite_type;
                if !ok {
                    r.failed = true;
                }
                r.verdicts.push(json!({
                    "item": name,
                    "kind": "fibration",
                    "ok": ok,
                    "total_minimal": rep.minimal,
                }));
                r.text.push(format!(
                    "{name}: {} (degrees <= {cutoff})",
                    if ok { "valid relative model" } else { "INVALID relative model" }
                ));
            }
            Item::Lie { name, lie } => {
                let rep = sullivan::validate_lie(lie);
                let ok = rep.all_ok();
                if !ok {
                    r.failed = true;
                }
                r.verdicts.push(json!({
                    "item": name,
                    "kind": "lie",
                    "ok": ok,
                    "degrees_ok": rep.degrees_ok,
                    "even_squares_ok": rep.even_squares_ok,
                    "jacobi_ok": rep.jacobi_ok,
                }));
                r.text.push(format!(
                    "{name}: {}",
                    if ok { "valid graded Lie algebra" } else { "INVALID Lie algebra" }
                ));
            }
        }
    }
    if doc.items.is_empty() {
        r.text.push("empty document".to_string());
    }
    Ok(r)
}

/// `cohomology`: betti table of one algebra.
pub fn cohomology(doc: &DslDocument, name: Option<&str>, cutoff: usize) -> Result<Report> {
    let (name, algebra) = pick_algebra(doc, name)?;
    let mut r = Report::new("cohomology", Some(cutoff));
    let table = betti(algebra, cutoff)?;
    r.text.push(format!("H^*({name}) in degrees <= {}:", cutoff - 1));
    let mut dims = Vec::new();
    for d in &table.degrees {
        dims.push(json!({
            "degree": d.degree,
            "dim": d.dim,
            "representatives": d.representatives.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }));
        if d.dim > 0 {
            let reps: Vec<String> =
                d.representatives.iter().map(|p| format!("[{p}]")).collect();
            r.text.push(format!("  H^{}: dim {}  {}", d.degree, d.dim, reps.join(", ")));
        }
    }
    r.text.push(format!("dims: {:?}", table.dims()));
    r.verdicts.push(json!({
        "item": name,
        "dims": table.dims(),
        "degrees": dims,
    }));
    Ok(r)
}

/// `limit`: print the coformal limit as DSL text.
pub fn limit(doc: &DslDocument, name: Option<&str>) -> Result<Report> {
    let (name, algebra) = pick_algebra(doc, name)?;
    let lim = coformal_limit(algebra)?;
    let mut r = Report::new("limit", None);
    let rendered = dsl::print_single_algebra(&format!("{name}_limit"), &lim);
    r.text.push(rendered.trim_end().to_string());
    r.verdicts.push(json!({
        "item": name,
        "limit": rendered,
        "purely_quadratic": lim.is_purely_quadratic(),
    }));
    Ok(r)
}

fn coformal_verdict_json(v: &CoformalVerdict) -> Value {
    let substitutions: Vec<Value> = v
        .substitutions
        .iter()
        .map(|(g, z)| json!({"generator": g, "subtract": z.to_string()}))
        .collect();
    match &v.kind {
        CoformalKind::CertifiedCoformal(phi) => json!({
            "verdict": "CertifiedCoformal",
            "cutoff": v.cutoff,
            "substitutions": substitutions,
            "iso": phi.source().ctx().gens().iter().enumerate()
                .map(|(i, (g, _))| json!({"generator": g, "image": phi.assignment(i).to_string()}))
                .collect::<Vec<_>>(),
        }),
        CoformalKind::Obstructed { generator, class } => json!({
            "verdict": "Obstructed",
            "cutoff": v.cutoff,
            "generator": generator,
            "class": class.to_string(),
            "substitutions": substitutions,
        }),
        CoformalKind::Inconclusive(why) => json!({
            "verdict": "Inconclusive",
            "cutoff": v.cutoff,
            "reason": why,
            "substitutions": substitutions,
        }),
    }
}

fn coformal_verdict_text(r: &mut Report, name: &str, v: &CoformalVerdict) {
    match &v.kind {
        CoformalKind::CertifiedCoformal(_) => {
            r.text.push(format!(
                "{name}: CertifiedCoformal (degrees <= {})",
                v.cutoff
            ));
            for (g, z) in &v.substitutions {
                r.text.push(format!("  substitution: {g} -> {g} - ({z})"));
            }
            if v.substitutions.is_empty() {
                r.text.push("  already purely quadratic, no substitutions".to_string());
            }
        }
        CoformalKind::Obstructed { generator, class } => {
            r.text.push(format!(
                "{name}: Obstructed at {generator} (degrees <= {}): [{class}] is a nonzero class of the quadratic part",
                v.cutoff
            ));
        }
        CoformalKind::Inconclusive(why) => {
            r.text.push(format!("{name}: Inconclusive (degrees <= {}): {why}", v.cutoff));
        }
    }
}

/// `coformalize`: eliminate non-quadratic terms.
pub fn run_coformalize(doc: &DslDocument, name: Option<&str>, cutoff: usize) -> Result<Report> {
    let (name, algebra) = pick_algebra(doc, name)?;
    let v = coformalize(algebra, cutoff)?;
    let mut r = Report::new("coformalize", Some(cutoff));
    coformal_verdict_text(&mut r, name, &v);
    let mut j = coformal_verdict_json(&v);
    j["item"] = json!(name);
    r.verdicts.push(j);
    Ok(r)
}

fn toomer_json(t: &ToomerVerdict) -> Value {
    json!({
        "value": t.value,
        "cutoff": t.cutoff,
        "certainty": match t.certainty {
            ToomerCertainty::ExactUpToCutoff => "ExactUpToCutoff",
            ToomerCertainty::LowerBoundOnly => "LowerBoundOnly",
        },
        "witness": t.witness.as_ref().map(|(d, p)| json!({
            "degree": d,
            "class": p.to_string(),
        })),
    })
}

fn toomer_text(t: &ToomerVerdict) -> String {
    let mut s = format!("e_0 = {} (degrees <= {})", t.value, t.cutoff - 1);
    match t.certainty {
        ToomerCertainty::ExactUpToCutoff => {}
        ToomerCertainty::LowerBoundOnly => s.push_str(" [lower bound only]"),
    }
    if let Some((d, p)) = &t.witness {
        s.push_str(&format!("; witness [{p}] in degree {d}"));
    }
    s
}

/// `toomer`: Toomer invariant e_0 of one algebra.
pub fn toomer(doc: &DslDocument, name: Option<&str>, cutoff: usize) -> Result<Report> {
    let (name, algebra) = pick_algebra(doc, name)?;
    let t = sullivan::toomer(algebra, cutoff)?;
    let mut r = Report::new("toomer", Some(cutoff));
    r.text.push(format!("{name}: {}", toomer_text(&t)));
    let mut j = toomer_json(&t);
    j["item"] = json!(name);
    r.verdicts.push(j);
    Ok(r)
}

fn split_str(s: &SplitChoice) -> String {
    match s {
        SplitChoice::Zero(p) => format!("p{p} = 0"),
        SplitChoice::Nonzero(p) => format!("p{p} != 0"),
    }
}

fn branch_json(b: &BranchTrace) -> Value {
    json!({
        "splits": b.splits.iter().map(split_str).collect::<Vec<_>>(),
        "contradiction": b.contradiction,
    })
}

fn search_json(v: &SearchVerdict) -> Value {
    match v {
        SearchVerdict::IsoFound(phi) => json!({
            "verdict": "IsoFound",
            "iso": phi.source().ctx().gens().iter().enumerate()
                .map(|(i, (g, _))| json!({"generator": g, "image": phi.assignment(i).to_string()}))
                .collect::<Vec<_>>(),
        }),
        SearchVerdict::NoIsoExists(trace) => json!({
            "verdict": "NoIsoExists",
            "reason": trace.reason,
            "branches": trace.branches.iter().map(branch_json).collect::<Vec<_>>(),
        }),
        SearchVerdict::Inconclusive(why) => json!({
            "verdict": "Inconclusive",
            "reason": why,
        }),
    }
}

fn search_text(r: &mut Report, label: &str, v: &SearchVerdict) {
    match v {
        SearchVerdict::IsoFound(_) => r.text.push(format!("{label}: IsoFound")),
        SearchVerdict::NoIsoExists(trace) => {
            r.text.push(format!("{label}: NoIsoExists — {}", trace.reason));
            for b in &trace.branches {
                let splits = if b.splits.is_empty() {
                    "(root)".to_string()
                } else {
                    b.splits.iter().map(split_str).collect::<Vec<_>>().join(", ")
                };
                r.text.push(format!("  branch [{splits}]: {}", b.contradiction));
            }
        }
        SearchVerdict::Inconclusive(why) => {
            r.text.push(format!("{label}: Inconclusive — {why}"))
        }
    }
}

/// `iso-search`: parametrized isomorphism search between two algebras.
pub fn iso_search(
    doc: &DslDocument,
    source: Option<&str>,
    target: Option<&str>,
    cutoff: usize,
    split_depth: usize,
) -> Result<Report> {
    let (sname, src) = pick_algebra(doc, source)?;
    // default target: the coformal limit of the source
    let (tname, tgt_owned);
    let tgt: &SullivanAlgebra = match target {
        Some(n) => {
            let (n2, a) = pick_algebra(doc, Some(n))?;
            tname = n2.to_string();
            a
        }
        None => {
            tgt_owned = coformal_limit(src)?;
            tname = format!("{sname}_limit");
            &tgt_owned
        }
    };
    let v = parametrized_iso_search(src, tgt, cutoff, split_depth);
    let mut r = Report::new("iso-search", Some(cutoff));
    search_text(&mut r, &format!("{sname} ~ {tname}"), &v);
    // a refuted-branch trace must replay
    let replayed = match &v {
        SearchVerdict::NoIsoExists(trace) => {
            let ok = trace.branches.iter().all(|b| replay_branch(src, tgt, b));
            r.text.push(format!(
                "  trace replay: {}",
                if ok { "confirmed" } else { "FAILED" }
            ));
            Some(ok)
        }
        _ => None,
    };
    let mut j = search_json(&v);
    j["source"] = json!(sname);
    j["target"] = json!(tname);
    j["split_depth"] = json!(split_depth);
    if let Some(ok) = replayed {
        j["trace_replayed"] = json!(ok);
    }
    r.verdicts.push(j);
    Ok(r)
}

/// `report`: the bundled coformality analysis.
pub fn report(doc: &DslDocument, name: Option<&str>, cutoff: usize) -> Result<Report> {
    let (name, algebra) = pick_algebra(doc, name)?;
    let rep = coformality_report(algebra, cutoff)?;
    let mut r = Report::new("report", Some(cutoff));
    r.text.push(format!("coformality report for {name}:"));
    r.text.push(format!("  limit e_0: {}", toomer_text(&rep.limit_toomer)));
    coformal_verdict_text(&mut r, name, &rep.verdict);
    if let Some(sv) = &rep.search {
        search_text(&mut r, &format!("  iso-search {name} ~ limit"), sv);
    }
    r.text.push(format!(
        "  coformal: {}",
        match rep.coformal {
            Some(true) => "yes",
            Some(false) => "no",
            None => "undetermined",
        }
    ));
    r.text.push(format!("  cat_0(limit) = {} (degrees <= {})", rep.cat0_limit, cutoff - 1));
    if let Some(c) = rep.cat0 {
        r.text.push(format!("  cat_0 = {c} (degrees <= {})", cutoff - 1));
    }
    r.verdicts.push(json!({
        "item": name,
        "limit_toomer": toomer_json(&rep.limit_toomer),
        "coformalize": coformal_verdict_json(&rep.verdict),
        "search": rep.search.as_ref().map(search_json),
        "coformal": rep.coformal,
        "cat0_limit": rep.cat0_limit,
        "cat0": rep.cat0,
    }));
    Ok(r)
}

fn lie_json(lie: &GradedLieAlgebra) -> Value {
    let mut brackets = Vec::new();
    for i in 0..lie.dim() {
        for j in i..lie.dim() {
            let combo = lie.bracket_basis(i, j);
            if !combo.is_empty() {
                brackets.push(json!({
                    "x": lie.name(i),
                    "y": lie.name(j),
                    "value": combo.iter()
                        .map(|(k, c)| json!({"basis": lie.name(*k), "coeff": c.to_string()}))
                        .collect::<Vec<_>>(),
                }));
            }
        }
    }
    json!({
        "basis": lie.basis().iter()
            .map(|(g, d)| json!({"name": g, "degree": d}))
            .collect::<Vec<_>>(),
        "brackets": brackets,
    })
}

fn lie_text_doc(name: &str, lie: &GradedLieAlgebra) -> String {
    let doc = DslDocument {
        items: vec![Item::Lie { name: name.to_string(), lie: lie.clone() }],
        warnings: Vec::new(),
    };
    dsl::print(&doc)
}

/// `lie-dual`: quadratic dual (homotopy Lie algebra) of a coformal
/// algebra's quadratic part.
pub fn lie_dual(doc: &DslDocument, name: Option<&str>) -> Result<Report> {
    let (name, algebra) = pick_algebra(doc, name)?;
    let lim = coformal_limit(algebra)?;
    let lie = quadratic_dual(&lim)?;
    let mut r = Report::new("lie-dual", None);
    r.text
        .push(lie_text_doc(&format!("{name}_pi"), &lie).trim_end().to_string());
    let mut j = lie_json(&lie);
    j["item"] = json!(name);
    r.verdicts.push(j);
    Ok(r)
}

/// `free-lie`: free graded Lie algebra on the basis of a `lie`
/// declaration (brackets in the declaration are ignored), truncated at
/// the cutoff.
pub fn run_free_lie(doc: &DslDocument, name: Option<&str>, cutoff: usize) -> Result<Report> {
    let (name, proto) = pick_lie(doc, name)?;
    let lie = free_lie(proto.basis(), cutoff)?;
    let mut r = Report::new("free-lie", Some(cutoff));
    let mut dims: Vec<(usize, usize)> = Vec::new();
    for (_, d) in lie.basis() {
        match dims.last_mut() {
            Some((deg, n)) if deg == d => *n += 1,
            _ => dims.push((*d, 1)),
        }
    }
    r.text.push(format!(
        "free Lie algebra on {name} generators, degrees <= {cutoff}:"
    ));
    for (d, n) in &dims {
        r.text.push(format!("  dim in degree {d}: {n}"));
    }
    r.text.push(lie_text_doc(&format!("{name}_free"), &lie).trim_end().to_string());
    let mut j = lie_json(&lie);
    j["item"] = json!(name);
    j["dims"] = json!(dims
        .iter()
        .map(|(d, n)| json!({"degree": d, "dim": n}))
        .collect::<Vec<_>>());
    r.verdicts.push(j);
    Ok(r)
}

/// `fibration-analyze`: TNHZ, TNCZ, degree gap, limit fibration, the
/// coformalization pipeline and the spherical Koszul classifier.
pub fn fibration_analyze(doc: &DslDocument, name: Option<&str>, cutoff: usize) -> Result<Report> {
    let (name, model) = pick_fibration(doc, name)?;
    let mut r = Report::new("fibration-analyze", Some(cutoff));
    let tnhz = model.check_tnhz();
    let tncz = model.check_tncz(cutoff)?;
    r.text.push(format!("fibration {name} (degrees <= {cutoff}):"));
    r.text.push(format!("  TNHZ: {tnhz}"));
    r.text.push(format!("  TNCZ: {tncz}"));
    let degree_gap = match model.degree_gap_criterion() {
        Ok((applies, n, m)) => {
            r.text.push(format!(
                "  degree gap: fiber top degree n = {n}, base connectivity m = {m}, criterion {} (n <= m+3)",
                if applies { "applies" } else { "does not apply" }
            ));
            json!({"applies": applies, "n": n, "m": m})
        }
        Err(e) => {
            r.text.push(format!("  degree gap: not applicable ({e})"));
            json!({"applies": false, "reason": e.to_string()})
        }
    };
    let pipeline = match sullivan::coformal_pipeline_applies(model, cutoff) {
        Ok(p) => {
            r.text.push(format!("  coformalization pipeline applies: {p}"));
            json!(p)
        }
        Err(e) => {
            r.text
                .push(format!("  coformalization pipeline: not applicable ({e})"));
            json!({"applies": false, "reason": e.to_string()})
        }
    };
    let koszul = match model.spherical_koszul_classifier(cutoff) {
        Ok(KoszulVerdict::KoszulByCase(c)) => {
            r.text.push(format!("  Koszul classifier: Koszul by case {c}"));
            json!({"koszul": true, "case": c})
        }
        Ok(KoszulVerdict::NoVerdict) => {
            r.text.push("  Koszul classifier: no verdict".to_string());
            json!({"koszul": Value::Null})
        }
        Err(e) => {
            r.text.push(format!("  Koszul classifier: not applicable ({e})"));
            json!({"koszul": Value::Null, "reason": e.to_string()})
        }
    };
    let limit_toomer = model
        .limit_fibration()
        .and_then(|rm| sullivan::toomer(rm.total(), cutoff));
    let limit_toomer = match limit_toomer {
        Ok(t) => {
            r.text.push(format!("  limit total {}", toomer_text(&t)));
            toomer_json(&t)
        }
        Err(e) => {
            r.text.push(format!("  limit fibration: not computed ({e})"));
            json!({"error": e.to_string()})
        }
    };
    r.verdicts.push(json!({
        "item": name,
        "tnhz": tnhz,
        "tncz": tncz,
        "degree_gap": degree_gap,
        "coformal_pipeline_applies": pipeline,
        "koszul": koszul,
        "limit_total_toomer": limit_toomer,
    }));
    Ok(r)
}
