//! Parametrized isomorphism search between minimal Sullivan algebras.
//!
//! Every coefficient of a degree-preserving candidate morphism becomes a
//! symbolic parameter; commutation with the differentials yields polynomial
//! equations over the parameters, and invertibility of the linear part per
//! degree yields nonvanishing side conditions. A branching solver
//! (substitution of linearly occurring parameters, case splits on monomial
//! equations and on parameters, bounded by `split_depth`) decides the
//! system where it can:
//!
//! * `IsoFound` — a concrete, validated isomorphism was instantiated;
//! * `NoIsoExists` — every branch reached an exact contradiction (the
//!   trace replays);
//! * `Inconclusive` — some branch could neither be closed nor solved.

use crate::algebra::{basis, normalize, Monomial, Polynomial};
use crate::dga::SullivanAlgebra;
use crate::morphism::DgaMorphism;
use crate::rat::{rat_i, Rational};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A polynomial over the rationals in the search parameters. Keys are
/// sorted exponent vectors (param index, exponent).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Vec<(usize, u32)>, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = ParamPoly::default();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut p = ParamPoly::default();
        p.terms.insert(vec![(i, 1)], Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new() as &Vec<(usize, u32)>).cloned(),
            _ => None,
        }
    }

    /// `Some((coefficient, powers))` when the polynomial is one term.
    pub fn as_monomial(&self) -> Option<(Rational, Vec<(usize, u32)>)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), m.clone()))
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).collect()
    }

    fn add_term(&mut self, m: Vec<(usize, u32)>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.add(&other.scale(&rat_i(-1)))
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut exps: BTreeMap<usize, u32> = ma.iter().copied().collect();
                for (v, e) in mb {
                    *exps.entry(*v).or_insert(0) += e;
                }
                out.add_term(exps.into_iter().collect(), ca * cb);
            }
        }
        out
    }

    /// Replace `var` by `value` everywhere.
    pub fn substitute(&self, var: usize, value: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = ParamPoly::constant(c.clone());
            for (v, e) in m {
                let factor = if *v == var {
                    let mut p = ParamPoly::constant(Rational::one());
                    for _ in 0..*e {
                        p = p.mul(value);
                    }
                    p
                } else {
                    let mut p = ParamPoly::zero();
                    p.terms.insert(vec![(*v, *e)], Rational::one());
                    p
                };
                rest = rest.mul(&factor);
            }
            out = out.add(&rest);
        }
        out
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m {
                for _ in 0..*e {
                    t *= &values[*v];
                }
            }
            acc += t;
        }
        acc
    }

    /// True when every term contains `var`.
    fn divisible_by_var(&self, var: usize) -> bool {
        !self.is_zero() && self.terms.keys().all(|m| m.iter().any(|(v, _)| *v == var))
    }

    /// Divide out one power of `var` from every term. Callers must check
    /// `divisible_by_var` first.
    fn divide_var(&self, var: usize) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let reduced: Vec<(usize, u32)> = m
                .iter()
                .filter_map(|&(v, e)| {
                    if v == var {
                        (e > 1).then_some((v, e - 1))
                    } else {
                        Some((v, e))
                    }
                })
                .collect();
            out.add_term(reduced, c.clone());
        }
        out
    }

    /// True when `self` and `other` are nonzero rational multiples of each
    /// other.
    fn proportional(&self, other: &ParamPoly) -> bool {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return false;
        }
        let mut ratio: Option<Rational> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ma != mb {
                return false;
            }
            let r = ca / cb;
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev == r => {}
                Some(_) => return false,
            }
        }
        true
    }

    /// Write `self = c * var + rest` with `rest` free of `var` and `c` a
    /// nonzero constant, if possible.
    fn split_linear(&self, var: usize) -> Option<(Rational, ParamPoly)> {
        let mut coeff = None;
        let mut rest = ParamPoly::zero();
        for (m, c) in &self.terms {
            match m.iter().find(|(v, _)| *v == var) {
                None => rest.add_term(m.clone(), c.clone()),
                Some((_, 1)) if m.len() == 1 => {
                    if coeff.is_some() {
                        return None; // duplicate keys cannot happen, defensive
                    }
                    coeff = Some(c.clone());
                }
                Some(_) => return None, // var in a nonlinear or mixed term
            }
        }
        coeff.map(|c| (c, rest))
    }
}

/// One case split made during the search: parameter set to zero, or
/// asserted invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitChoice {
    Zero(usize),
    Nonzero(usize),
}

/// A refuted branch: the splits taken and the exact contradiction reached.
#[derive(Debug, Clone)]
pub struct BranchTrace {
    pub splits: Vec<SplitChoice>,
    pub contradiction: String,
}

#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub reason: String,
    pub branches: Vec<BranchTrace>,
}

#[derive(Debug, Clone)]
pub enum SearchVerdict {
    IsoFound(DgaMorphism),
    NoIsoExists(SearchTrace),
    Inconclusive(String),
}

/// The symbolic system: parameters, their meaning, equations, and
/// per-degree linear-part determinants.
struct System {
    /// param -> (source generator, target monomial)
    param_meaning: Vec<(usize, Monomial)>,
    equations: Vec<ParamPoly>,
    /// (degree, determinant of the linear-part block)
    determinants: Vec<(usize, ParamPoly)>,
}

fn build_system(source: &SullivanAlgebra, target: &SullivanAlgebra) -> System {
    let s_ctx = source.ctx();
    let t_ctx = target.ctx();
    // one parameter per (source generator, target monomial of equal degree)
    let mut param_meaning = Vec::new();
    let mut params_of_gen: Vec<Vec<(Monomial, usize)>> = Vec::new();
    for i in 0..s_ctx.len() {
        let mut row = Vec::new();
        for m in basis(t_ctx, s_ctx.degree(i), 1, None) {
            row.push((m.clone(), param_meaning.len()));
            param_meaning.push((i, m));
        }
        params_of_gen.push(row);
    }

    // phi of a source polynomial, with ParamPoly coefficients
    type SymPoly = BTreeMap<Monomial, ParamPoly>;
    let apply = |p: &Polynomial| -> SymPoly {
        let mut out: SymPoly = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut acc: SymPoly = BTreeMap::new();
            acc.insert(Monomial::one(), ParamPoly::constant(c.clone()));
            for g in m.word() {
                let mut next: SymPoly = BTreeMap::new();
                for (m1, pp1) in &acc {
                    for (m2, var) in &params_of_gen[g] {
                        let mut word = m1.word();
                        word.extend(m2.word());
                        let (sign, prod) = normalize(t_ctx, &word);
                        if sign == 0 {
                            continue;
                        }
                        let contrib = pp1.mul(&ParamPoly::var(*var)).scale(&rat_i(sign as i64));
                        let entry = next.entry(prod).or_insert_with(ParamPoly::zero);
                        *entry = entry.add(&contrib);
                    }
                }
                acc = next;
            }
            for (m2, pp) in acc {
                let entry = out.entry(m2).or_insert_with(ParamPoly::zero);
                *entry = entry.add(&pp);
            }
        }
        out
    };

    let mut equations = Vec::new();
    for i in 0..s_ctx.len() {
        // phi(d g) = d(phi g), coefficient by coefficient
        let mut lhs = apply(source.diff(i));
        for (m, var) in &params_of_gen[i] {
            let dm = target.apply_d(&Polynomial::from_term(
                t_ctx.clone(),
                m.clone(),
                Rational::one(),
            ));
            for (t, c) in dm.terms() {
                let entry = lhs.entry(t.clone()).or_insert_with(ParamPoly::zero);
                *entry = entry.sub(&ParamPoly::var(*var).scale(c));
            }
        }
        for (_, pp) in lhs {
            if !pp.is_zero() && !equations.contains(&pp) {
                equations.push(pp);
            }
        }
    }

    // linear-part determinant per generator degree
    let mut determinants = Vec::new();
    let mut degrees: Vec<usize> = (0..s_ctx.len()).map(|i| s_ctx.degree(i)).collect();
    degrees.sort();
    degrees.dedup();
    for d in degrees {
        let src: Vec<usize> = (0..s_ctx.len()).filter(|&i| s_ctx.degree(i) == d).collect();
        let tgt: Vec<usize> = (0..t_ctx.len()).filter(|&j| t_ctx.degree(j) == d).collect();
        let n = src.len();
        let mut m = vec![vec![ParamPoly::zero(); n]; n];
        for (col, &i) in src.iter().enumerate() {
            for (row, &j) in tgt.iter().enumerate() {
                let mono = Monomial::gen(j);
                if let Some((_, var)) =
                    params_of_gen[i].iter().find(|(tm, _)| *tm == mono)
                {
                    m[row][col] = ParamPoly::var(*var);
                }
            }
        }
        determinants.push((d, sym_det(&m)));
    }

    System { param_meaning, equations, determinants }
}

fn sym_det(m: &[Vec<ParamPoly>]) -> ParamPoly {
    let n = m.len();
    if n == 0 {
        return ParamPoly::constant(Rational::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = ParamPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ParamPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let mut cof = m[0][j].mul(&sym_det(&minor));
        if j % 2 == 1 {
            cof = cof.scale(&rat_i(-1));
        }
        det = det.add(&cof);
    }
    det
}

/// Branch state: substitutions already applied, nonzero assertions, and
/// the remaining constraints.
#[derive(Clone)]
struct Branch {
    /// fully-resolved substitutions var -> poly in still-free vars
    solved: BTreeMap<usize, ParamPoly>,
    nonzero_vars: BTreeSet<usize>,
    equations: Vec<ParamPoly>,
    /// polynomials required to be nonzero (determinants and displaced
    /// nonzero assertions)
    nonzero_polys: Vec<(String, ParamPoly)>,
    splits: Vec<SplitChoice>,
    depth: usize,
}

enum BranchOutcome {
    Contradiction(String),
    Split(Vec<Branch>),
    Exhausted, // nothing left to do; try instantiation
    Stuck(String),
}

impl Branch {
    fn apply_substitution(&mut self, var: usize, value: ParamPoly) -> Option<String> {
        for p in self.solved.values_mut() {
            *p = p.substitute(var, &value);
        }
        self.solved.insert(var, value.clone());
        for e in self.equations.iter_mut() {
            *e = e.substitute(var, &value);
        }
        for (_, p) in self.nonzero_polys.iter_mut() {
            *p = p.substitute(var, &value);
        }
        if self.nonzero_vars.remove(&var) {
            if let Some(c) = value.as_constant() {
                if c.is_zero() {
                    return Some(format!("parameter p{var} must be invertible but equals 0"));
                }
            } else {
                self.nonzero_polys.push((format!("p{var}"), value));
            }
        }
        None
    }

    /// Run the deterministic simplification loop to a fixed point.
    fn simplify(mut self) -> (Branch, BranchOutcome) {
        loop {
            let mut changed = false;

            // constant and trivial equations
            let mut contradiction = None;
            self.equations.retain(|e| {
                if contradiction.is_some() {
                    return true;
                }
                match e.as_constant() {
                    Some(c) if c.is_zero() => false,
                    Some(c) => {
                        contradiction = Some(format!("equation reduces to {c} = 0"));
                        true
                    }
                    None => true,
                }
            });
            if let Some(msg) = contradiction {
                return (self, BranchOutcome::Contradiction(msg));
            }
            self.equations.sort_by(|a, b| a.terms.cmp(&b.terms));
            self.equations.dedup();

            // monomial equations: all-factors-nonzero is a contradiction;
            // a single undetermined factor is forced to zero
            let mut forced: Option<usize> = None;
            let mut monomial_contradiction: Option<String> = None;
            for e in &self.equations {
                if let Some((_, powers)) = e.as_monomial() {
                    if powers.is_empty() {
                        continue; // constant, handled above
                    }
                    let free: Vec<usize> = powers
                        .iter()
                        .map(|(v, _)| *v)
                        .filter(|v| !self.nonzero_vars.contains(v))
                        .collect();
                    if free.is_empty() {
                        monomial_contradiction = Some(format!(
                            "monomial equation {} = 0 with every factor asserted nonzero",
                            fmt_poly(e)
                        ));
                        break;
                    }
                    if free.len() == 1 && forced.is_none() {
                        forced = Some(free[0]);
                    }
                }
            }
            if let Some(msg) = monomial_contradiction {
                return (self, BranchOutcome::Contradiction(msg));
            }
            if let Some(v) = forced {
                if let Some(msg) = self.apply_substitution(v, ParamPoly::zero()) {
                    return (self, BranchOutcome::Contradiction(msg));
                }
                continue;
            }

            // solve a parameter that occurs linearly with constant coefficient
            let mut solve: Option<(usize, ParamPoly)> = None;
            'outer: for (idx, e) in self.equations.iter().enumerate() {
                let mut vars: Vec<usize> = e.vars().into_iter().collect();
                vars.sort();
                for v in vars {
                    if let Some((c, rest)) = e.split_linear(v) {
                        solve = Some((v, rest.scale(&(-Rational::one() / c))));
                        self.equations.remove(idx);
                        break 'outer;
                    }
                }
            }
            if let Some((v, value)) = solve {
                if let Some(msg) = self.apply_substitution(v, value) {
                    return (self, BranchOutcome::Contradiction(msg));
                }
                continue;
            }

            // divide out parameters known invertible from whole equations
            let mut divided = false;
            for e in self.equations.iter_mut() {
                while let Some(v) =
                    self.nonzero_vars.iter().copied().find(|v| e.divisible_by_var(*v))
                {
                    *e = e.divide_var(v);
                    divided = true;
                }
            }
            if divided {
                continue;
            }

            // an equation forcing an invertibility condition to vanish is a
            // contradiction
            let mut forced_zero: Option<String> = None;
            for (label, p) in &self.nonzero_polys {
                if self.equations.iter().any(|e| e.proportional(p)) {
                    forced_zero = Some(format!(
                        "{label} must be invertible but an equation forces it to vanish"
                    ));
                    break;
                }
            }
            if let Some(msg) = forced_zero {
                return (self, BranchOutcome::Contradiction(msg));
            }

            // nonzero side conditions
            let mut add_nonzero: BTreeSet<usize> = BTreeSet::new();
            let mut contradiction = None;
            self.nonzero_polys.retain(|(label, p)| {
                if contradiction.is_some() {
                    return true;
                }
                match p.as_constant() {
                    Some(c) if c.is_zero() => {
                        contradiction =
                            Some(format!("{label} must be invertible but vanishes identically"));
                        true
                    }
                    Some(_) => false,
                    None => {
                        if let Some((_, powers)) = p.as_monomial() {
                            for (v, _) in powers {
                                add_nonzero.insert(v);
                            }
                            false
                        } else {
                            true
                        }
                    }
                }
            });
            if let Some(msg) = contradiction {
                return (self, BranchOutcome::Contradiction(msg));
            }
            if !add_nonzero.is_empty() && !add_nonzero.is_subset(&self.nonzero_vars) {
                self.nonzero_vars.extend(add_nonzero);
                changed = true;
            }

            if !changed {
                break;
            }
        }

        // fixed point: decide what to do next
        if self.equations.is_empty() && self.nonzero_polys.is_empty() {
            return (self, BranchOutcome::Exhausted);
        }
        if self.depth == 0 {
            return (
                self,
                BranchOutcome::Stuck("split depth exhausted with constraints remaining".into()),
            );
        }
        // split on a monomial equation: one of its undetermined factors is 0
        for e in &self.equations {
            if let Some((_, powers)) = e.as_monomial() {
                let free: Vec<usize> = powers
                    .iter()
                    .map(|(v, _)| *v)
                    .filter(|v| !self.nonzero_vars.contains(v))
                    .collect();
                if !free.is_empty() {
                    let mut branches = Vec::new();
                    for v in free {
                        let mut b = self.clone();
                        b.depth -= 1;
                        b.splits.push(SplitChoice::Zero(v));
                        if b.apply_substitution(v, ParamPoly::zero()).is_none() {
                            branches.push(b);
                        }
                    }
                    return (self, BranchOutcome::Split(branches));
                }
            }
        }
        // split zero/nonzero on a parameter from a pending constraint
        let pick = self
            .nonzero_polys
            .iter()
            .map(|(_, p)| p)
            .chain(self.equations.iter())
            .flat_map(|p| p.vars())
            .min();
        if let Some(v) = pick {
            let mut branches = Vec::new();
            let mut b0 = self.clone();
            b0.depth -= 1;
            b0.splits.push(SplitChoice::Zero(v));
            if b0.apply_substitution(v, ParamPoly::zero()).is_none() {
                branches.push(b0);
            }
            let mut b1 = self.clone();
            b1.depth -= 1;
            b1.splits.push(SplitChoice::Nonzero(v));
            b1.nonzero_vars.insert(v);
            branches.push(b1);
            return (self, BranchOutcome::Split(branches));
        }
        (self, BranchOutcome::Stuck("constraints remain with no parameters left".into()))
    }
}

fn fmt_poly(p: &ParamPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms
        .iter()
        .map(|(m, c)| {
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { format!("p{v}") } else { format!("p{v}^{e}") })
                .collect();
            if vars.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                vars.join("*")
            } else {
                format!("{c}*{}", vars.join("*"))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Try to instantiate a fully simplified branch into a concrete morphism.
fn instantiate(
    system: &System,
    branch: &Branch,
    source: &SullivanAlgebra,
    target: &SullivanAlgebra,
    cutoff: usize,
) -> Option<DgaMorphism> {
    let n = system.param_meaning.len();
    let free: Vec<usize> = (0..n).filter(|v| !branch.solved.contains_key(v)).collect();
    let candidates: Vec<Box<dyn Fn(usize) -> Rational>> = vec![
        Box::new({
            let nz = branch.nonzero_vars.clone();
            move |v| if nz.contains(&v) { rat_i(1) } else { rat_i(0) }
        }),
        Box::new(|_| rat_i(1)),
    ];
    for pick in candidates {
        let mut values = vec![Rational::zero(); n];
        for &v in &free {
            values[v] = pick(v);
        }
        // resolve substitutions: solved polys only involve free vars
        for (&v, poly) in &branch.solved {
            values[v] = poly.eval(&values);
        }
        if system.equations.iter().any(|e| !e.eval(&values).is_zero()) {
            continue;
        }
        if system.determinants.iter().any(|(_, d)| d.eval(&values).is_zero()) {
            continue;
        }
        let mut assignment =
            vec![Polynomial::zero(target.ctx().clone()); source.ctx().len()];
        for (p, (gen, mono)) in system.param_meaning.iter().enumerate() {
            if values[p].is_zero() {
                continue;
            }
            let term =
                Polynomial::from_term(target.ctx().clone(), mono.clone(), values[p].clone());
            assignment[*gen] = assignment[*gen].add_checked(&term).expect("same context");
        }
        let Ok(phi) = DgaMorphism::new(source.clone(), target.clone(), assignment) else {
            continue;
        };
        if phi.validate(cutoff).all_ok() && phi.linear_part_invertible() {
            return Some(phi);
        }
    }
    None
}

/// Search for a DGA isomorphism between two minimal Sullivan algebras.
pub fn parametrized_iso_search(
    source: &SullivanAlgebra,
    target: &SullivanAlgebra,
    cutoff: usize,
    split_depth: usize,
) -> SearchVerdict {
    if source.ctx().degree_census() != target.ctx().degree_census() {
        return SearchVerdict::NoIsoExists(SearchTrace {
            reason: format!(
                "generator degree census differs: {:?} vs {:?}",
                source.ctx().degree_census(),
                target.ctx().degree_census()
            ),
            branches: Vec::new(),
        });
    }
    let system = build_system(source, target);
    let root = Branch {
        solved: BTreeMap::new(),
        nonzero_vars: BTreeSet::new(),
        equations: system.equations.clone(),
        nonzero_polys: system
            .determinants
            .iter()
            .map(|(d, p)| (format!("degree-{d} linear block determinant"), p.clone()))
            .collect(),
        splits: Vec::new(),
        depth: split_depth,
    };
    let mut stack = vec![root];
    let mut refuted = Vec::new();
    let mut stuck: Option<String> = None;
    while let Some(branch) = stack.pop() {
        let (branch, outcome) = branch.simplify();
        match outcome {
            BranchOutcome::Contradiction(msg) => refuted.push(BranchTrace {
                splits: branch.splits.clone(),
                contradiction: msg,
            }),
            BranchOutcome::Split(children) => stack.extend(children),
            BranchOutcome::Exhausted => {
                match instantiate(&system, &branch, source, target, cutoff) {
                    Some(phi) => return SearchVerdict::IsoFound(phi),
                    None => {
                        stuck.get_or_insert_with(|| {
                            "constraints solved symbolically but no instantiation validated"
                                .to_string()
                        });
                    }
                }
            }
            BranchOutcome::Stuck(msg) => {
                // a stuck branch may still hold a solution: try instantiating
                match instantiate(&system, &branch, source, target, cutoff) {
                    Some(phi) => return SearchVerdict::IsoFound(phi),
                    None => {
                        stuck.get_or_insert(msg);
                    }
                }
            }
        }
    }
    match stuck {
        Some(msg) => SearchVerdict::Inconclusive(msg),
        None => SearchVerdict::NoIsoExists(SearchTrace {
            reason: "every branch reaches an exact contradiction".into(),
            branches: refuted,
        }),
    }
}

/// Re-run the simplification with a refuted branch's recorded splits and
/// confirm the same contradiction is reached.
pub fn replay_branch(
    source: &SullivanAlgebra,
    target: &SullivanAlgebra,
    trace: &BranchTrace,
) -> bool {
    let system = build_system(source, target);
    let mut branch = Branch {
        solved: BTreeMap::new(),
        nonzero_vars: BTreeSet::new(),
        equations: system.equations.clone(),
        nonzero_polys: system
            .determinants
            .iter()
            .map(|(d, p)| (format!("degree-{d} linear block determinant"), p.clone()))
            .collect(),
        splits: Vec::new(),
        depth: trace.splits.len() + 1,
    };
    for choice in &trace.splits {
        let (_, outcome) = branch.simplify();
        match outcome {
            BranchOutcome::Split(children) => {
                match children.into_iter().find(|c| c.splits.last() == Some(choice)) {
                    Some(child) => branch = child,
                    None => return false,
                }
            }
            _ => return false,
        }
    }
    let (_, outcome) = branch.simplify();
    matches!(outcome, BranchOutcome::Contradiction(msg) if msg == trace.contradiction)
}
