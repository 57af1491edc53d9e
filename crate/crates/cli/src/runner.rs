use std::collections::BTreeMap;
use std::time::Instant;

use vbh::bihss::{
    build_tau, conformal_central_invariants, conformal_check, delta_minus_one,
    delta_minus_one_poly, euler_field, index_ode_check, indices, is_bihamiltonian, is_cocycle,
    normalize_cocycle, ConformalData, SemisimpleHydroPair,
};
use vbh::coeffs::{RatFunc, Rational};
use vbh::cohomolab::{
    ansatz_solve, atlas, omega_lambda_window, vbh_guaranteed_zero, AnsatzMode, AnsatzOutcome,
    AnsatzProblem, BidegreeWindow, Space,
};
use vbh::forms::{dtilde_reduced, ReducedOneForm};
use vbh::functionals::{derivation_of, schouten, LocalFunctional};
use vbh::syntax::{parse_functional, parse_lam_expr, parse_poly, parse_reduced, Expr};
use vbh::Error;

use crate::report::{Bounds, Report, Status, StructureReport, TaskReport, REPORT_SCHEMA};
use crate::scenario::{reference, scalars, ProbeMode, Scenario, Structure, Task, TaskKind};

pub const DEFAULT_UDEG: u32 = 3;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// u-degree bound for probes that do not set their own.
    pub udeg_bound: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            udeg_bound: DEFAULT_UDEG,
        }
    }
}

#[derive(Default)]
struct Outcome {
    pass: bool,
    outputs: BTreeMap<String, String>,
    message: Option<String>,
    bounds: Option<Bounds>,
    stored: Option<ReducedOneForm>,
}

impl Outcome {
    fn new(pass: bool) -> Self {
        Outcome {
            pass,
            ..Default::default()
        }
    }

    fn out(mut self, k: &str, v: impl ToString) -> Self {
        self.outputs.insert(k.to_string(), v.to_string());
        self
    }

    fn check(mut self, what: &str, ok: bool) -> Self {
        if !ok {
            self.pass = false;
            let m = match self.message.take() {
                Some(prev) => format!("{prev}; {what}"),
                None => what.to_string(),
            };
            self.message = Some(m);
        }
        self
    }
}

/// Runtime failures inside a task: engine errors and bad input that
/// static validation could not see.
enum TaskError {
    Engine(Error),
    Input(String),
}

impl From<Error> for TaskError {
    fn from(e: Error) -> Self {
        TaskError::Engine(e)
    }
}

type TaskResult = Result<Outcome, TaskError>;

struct Ctx<'a> {
    s: &'a SemisimpleHydroPair,
    st: &'a Structure,
    store: BTreeMap<String, ReducedOneForm>,
    opts: &'a RunOptions,
}

fn variant_name(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Runs a validated scenario.
pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> Report {
    let t0 = Instant::now();
    let st = &sc.structure;
    let built = st
        .metric()
        .map_err(TaskError::Input)
        .and_then(|f| Ok(SemisimpleHydroPair::new(f)?));
    let mut structure = StructureReport {
        n: st.n,
        f: st.f.clone(),
        status: Status::Pass,
        error: None,
        message: None,
        elapsed_ms: 0.0,
    };
    let pair = match built {
        Ok(p) => Some(p),
        Err(e) => {
            structure.status = Status::Error;
            let (code, msg) = describe(&e);
            structure.error = code;
            structure.message = Some(msg);
            None
        }
    };
    structure.elapsed_ms = ms(t0);

    let mut tasks = Vec::with_capacity(sc.tasks.len());
    let mut ctx = pair.as_ref().map(|s| Ctx {
        s,
        st,
        store: BTreeMap::new(),
        opts,
    });
    let mut broken: Vec<String> = Vec::new();
    for t in &sc.tasks {
        let mut rep = TaskReport {
            name: t.name.clone(),
            kind: t.kind.label().into(),
            group: t.group.clone(),
            status: Status::Skipped,
            outputs: BTreeMap::new(),
            error: None,
            message: None,
            bounds: None,
            elapsed_ms: 0.0,
        };
        let Some(ctx) = ctx.as_mut() else {
            rep.message = Some("structure failed to build".into());
            tasks.push(rep);
            continue;
        };
        if broken.contains(&t.group) {
            rep.message = Some(format!(
                "an earlier task in group {:?} raised an error",
                t.group
            ));
            tasks.push(rep);
            continue;
        }
        let t1 = Instant::now();
        match run_task(ctx, t) {
            Ok(o) => {
                rep.status = if o.pass { Status::Pass } else { Status::Fail };
                rep.outputs = o.outputs;
                rep.message = o.message;
                rep.bounds = o.bounds;
                if let Some(w) = o.stored {
                    ctx.store.insert(t.name.clone(), w);
                }
            }
            Err(e) => {
                rep.status = Status::Error;
                let (code, msg) = describe(&e);
                rep.error = code;
                rep.message = Some(msg);
                broken.push(t.group.clone());
            }
        }
        rep.elapsed_ms = ms(t1);
        tasks.push(rep);
    }
    let mut r = Report {
        schema: REPORT_SCHEMA.into(),
        scenario: sc.name.clone(),
        structure,
        tasks,
        summary: Default::default(),
    };
    r.tally();
    r
}

fn describe(e: &TaskError) -> (Option<String>, String) {
    match e {
        TaskError::Engine(e) => (Some(variant_name(e)), e.to_string()),
        TaskError::Input(m) => (None, m.clone()),
    }
}

fn form(ctx: &Ctx, text: &str) -> Result<ReducedOneForm, TaskError> {
    match reference(text) {
        Some(r) => ctx
            .store
            .get(r)
            .cloned()
            .ok_or_else(|| TaskError::Input(format!("no stored output {r:?}"))),
        None => Ok(parse_reduced(text, Some(ctx.s.n()))?),
    }
}

fn functional(ctx: &Ctx, text: &str) -> Result<LocalFunctional, TaskError> {
    Ok(parse_functional(text, Some(ctx.s.n()))?)
}

fn central(ctx: &Ctx, c: &Option<Vec<String>>) -> Result<Option<Vec<RatFunc>>, TaskError> {
    match c {
        Some(c) => Ok(Some(scalars(c, ctx.s.n()).map_err(TaskError::Input)?)),
        None => ctx.st.central().map_err(TaskError::Input),
    }
}

fn conformal_data(ctx: &Ctx) -> Result<ConformalData, TaskError> {
    let cf = ctx
        .st
        .conformal
        .as_ref()
        .ok_or_else(|| TaskError::Input("structure has no conformal block".into()))?;
    let v = |x: &crate::scenario::Num| x.value().map_err(TaskError::Input);
    let d = conformal_check(ctx.s.f())?;
    Ok(ConformalData::new(
        d,
        v(&cf.lambda0)?,
        v(&cf.lambda1)?,
        v(&cf.mu)?,
    )?)
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!(
        "[{}]",
        xs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn matches_reduced(
    ctx: &Ctx,
    expect: &Option<String>,
    got: &ReducedOneForm,
) -> Result<bool, TaskError> {
    match expect {
        Some(e) => Ok(&form(ctx, e)? == got),
        None => Ok(true),
    }
}

fn run_task(ctx: &mut Ctx, t: &Task) -> TaskResult {
    let s = ctx.s;
    let n = s.n();
    match &t.kind {
        TaskKind::CheckBihamiltonian => {
            let ok = is_bihamiltonian(s.p0(), s.p1())?;
            Ok(Outcome::new(ok)
                .out("[P0,P0]", schouten(s.p0(), s.p0())?)
                .out("[P0,P1]", schouten(s.p0(), s.p1())?)
                .out("[P1,P1]", schouten(s.p1(), s.p1())?)
                .out("P0", s.p0())
                .out("P1", s.p1()))
        }
        TaskKind::Schouten { p, q, expect } => {
            let b = schouten(&functional(ctx, p)?, &functional(ctx, q)?)?;
            let ok = match expect {
                Some(e) => functional(ctx, e)? == b,
                None => true,
            };
            Ok(Outcome::new(true)
                .out("bracket", &b)
                .check("bracket differs from expect", ok))
        }
        TaskKind::Derivation {
            p,
            expect_u,
            expect_th,
        } => {
            let d = derivation_of(&functional(ctx, p)?, n)?;
            let mut o = Outcome::new(true);
            for i in 1..=n {
                o = o
                    .out(&format!("D(u[{i}])"), d.u_image(i))
                    .out(&format!("D(th[{i}])"), d.th_image(i));
            }
            for (exp, img, label) in [
                (expect_u, d.u_images(), "u"),
                (expect_th, d.th_images(), "th"),
            ] {
                if let Some(e) = exp {
                    for (k, (want, got)) in e.iter().zip(img).enumerate() {
                        let ok = &parse_poly(want, Some(n))? == got;
                        o = o.check(&format!("D({label}[{}]) differs from expect", k + 1), ok);
                    }
                }
            }
            Ok(o)
        }
        TaskKind::Lie { p, form: w, expect } => {
            let d = derivation_of(&functional(ctx, p)?, n)?;
            let img = dtilde_reduced(&d, &form(ctx, w)?);
            let ok = matches_reduced(ctx, expect, &img)?;
            let mut o = Outcome::new(true)
                .out("form", &img)
                .check("form differs from expect", ok);
            o.stored = Some(img);
            Ok(o)
        }
        TaskKind::Indices { form: w, expect } => {
            let w = form(ctx, w)?;
            let ind = indices(s, &w)?;
            let mut o = Outcome::new(true).out("indices", &ind).check(
                "indices depend on other components",
                ind.single_variable_violation().is_none(),
            );
            if let Some(e) = expect {
                let want = scalars(e, n).map_err(TaskError::Input)?;
                o = o.check("indices differ from expect", want == ind.ind);
            }
            Ok(o)
        }
        TaskKind::Tau { c, expect } => {
            let c = central(ctx, c)?.ok_or_else(|| TaskError::Input("no c available".into()))?;
            let tau = build_tau(s, &c)?;
            let cocycle = is_cocycle(s, &tau)?;
            let ind = indices(s, &tau)?;
            let want: Vec<RatFunc> = c
                .iter()
                .map(|ci| ci.scale(&Rational::from_int(-3)))
                .collect();
            let ok = matches_reduced(ctx, expect, &tau)?;
            let mut o = Outcome::new(true)
                .out("tau", &tau)
                .out("cocycle", cocycle)
                .out("indices", &ind)
                .check("not a cocycle", cocycle)
                .check("indices differ from -3c", ind.ind == want)
                .check("tau differs from expect", ok);
            o.stored = Some(tau);
            Ok(o)
        }
        TaskKind::Normalize { form: w, expect } => {
            let w = form(ctx, w)?;
            let nf = normalize_cocycle(s, &w)?;
            let ok = matches_reduced(ctx, expect, &nf.form)?;
            let mut o = Outcome::new(true)
                .out("normal_form", &nf.form)
                .out("gamma", &nf.gauge.gamma)
                .out("alpha", &nf.gauge.alpha)
                .out("beta", &nf.gauge.beta)
                .check("output is not in normal form", nf.cocycle.is_normal())
                .check(
                    "gauge does not connect input and output",
                    nf.form == w.add(&nf.gauge.image(s)),
                )
                .check("normal form differs from expect", ok);
            o.stored = Some(nf.form);
            Ok(o)
        }
        TaskKind::Conformal { expect } => {
            let d = conformal_check(s.f())?;
            let mut o = Outcome::new(true).out("d", list(&d));
            if let Some(e) = expect {
                let want: Vec<Rational> = e
                    .iter()
                    .map(|x| x.value())
                    .collect::<Result<_, _>>()
                    .map_err(TaskError::Input)?;
                o = o.check("exponents differ from expect", want == d);
            }
            Ok(o)
        }
        TaskKind::Euler => {
            let cd = conformal_data(ctx)?;
            let e = euler_field(s, &cd)?;
            let mut o = Outcome::new(true).out("d", list(&cd.d));
            o = o.out(
                "weight(u[*,s]) s=0..2",
                list(&(0..=2).map(|k| e.u_weight(k)).collect::<Vec<_>>()),
            );
            for i in 1..=n {
                let w: Vec<_> = (0..=2).map(|k| e.th_weight(i, k)).collect();
                o = o.out(&format!("weight(th[{i},s]) s=0..2"), list(&w));
            }
            Ok(o)
        }
        TaskKind::CentralInvariants {
            c,
            expect_m,
            expect_zero,
        } => {
            let cd = conformal_data(ctx)?;
            let law = conformal_central_invariants(&cd)?;
            let mut o = Outcome::new(true).out("m", list(&law.m));
            if let Some(e) = expect_m {
                let want: Vec<Rational> = e
                    .iter()
                    .map(|x| x.value())
                    .collect::<Result<_, _>>()
                    .map_err(TaskError::Input)?;
                o = o.check("exponents differ from expect", want == law.m);
            }
            if let Some(c) = central(ctx, c)? {
                let r = index_ode_check(s, &cd, &c)?;
                let zero = r.is_zero();
                o = o.out("residual", &r);
                o = o.check(
                    if *expect_zero {
                        "residual is not zero"
                    } else {
                        "residual vanishes"
                    },
                    zero == *expect_zero,
                );
            }
            Ok(o)
        }
        TaskKind::DeltaMinusOne { form: w } => {
            let (img, twice, zero) = match parse_lam_expr(w, Some(n))? {
                Expr::Poly(p) => {
                    let a = delta_minus_one_poly(s, &p);
                    let b = delta_minus_one_poly(s, &a);
                    (a.to_string(), b.to_string(), b.is_zero())
                }
                Expr::Form(f) => {
                    let a = delta_minus_one(s, &f);
                    let b = delta_minus_one(s, &a);
                    (a.to_string(), b.to_string(), b.is_zero())
                }
                e => {
                    return Err(TaskError::Input(format!(
                        "delta-minus-one takes a polynomial or a form, got a {}",
                        e.kind()
                    )))
                }
            };
            Ok(Outcome::new(true)
                .out("image", img)
                .out("square", twice)
                .check("square is not zero", zero))
        }
        TaskKind::Window { p, d, expect_zero } => {
            let z = vbh_guaranteed_zero(n, *p, *d);
            let w = BidegreeWindow::new(n);
            let mut o = Outcome::new(true)
                .out("guaranteed_zero", z)
                .out("in_index_set", w.in_index_set(*p, *d))
                .out("omega_lambda_window", omega_lambda_window(n, *p, *d));
            if let Some(e) = expect_zero {
                o = o.check("vanishing verdict differs from expect", *e == z);
            }
            Ok(o)
        }
        TaskKind::Atlas {
            space,
            p_max,
            d_max,
        } => {
            let sp: Space = space.parse()?;
            let a = atlas(sp, n, *p_max, *d_max)?;
            let mut o = Outcome::new(true).out("space", sp);
            let occ: Vec<String> = a
                .occupied()
                .iter()
                .map(|(p, d)| format!("({p},{d})"))
                .collect();
            o = o.out("occupied", occ.join(" "));
            for ((p, d), k) in &a.counts {
                o = o.out(&format!("count({p},{d})"), k);
            }
            Ok(o)
        }
        TaskKind::Probe {
            p,
            d,
            udeg_bound,
            mode,
            target,
            expect_trivial,
        } => {
            let udeg = udeg_bound.unwrap_or(ctx.opts.udeg_bound);
            let (problem, m) = match mode {
                ProbeMode::Kernel2 => (AnsatzProblem::kernel(*p, *d, udeg), AnsatzMode::Kernel2),
                ProbeMode::Coboundary => {
                    let x = target
                        .as_deref()
                        .ok_or_else(|| TaskError::Input("missing target".into()))?;
                    (
                        AnsatzProblem::coboundary(form(ctx, x)?, *p, *d, udeg)?,
                        AnsatzMode::Coboundary,
                    )
                }
            };
            let r = ansatz_solve(s, &problem, m)?;
            let mut o = Outcome::new(true).out("result", &r);
            match &r.outcome {
                AnsatzOutcome::Kernel(basis) => {
                    for (k, b) in basis.iter().enumerate() {
                        o = o.out(&format!("kernel[{k}]"), b);
                    }
                }
                AnsatzOutcome::Coboundary(Some(eta)) => o = o.out("preimage", eta),
                AnsatzOutcome::Coboundary(None) => {}
            }
            o.bounds = Some(Bounds {
                udeg_bound: udeg,
                unknowns: r.unknowns,
                equations: r.equations,
                rank: r.rank,
            });
            if let Some(e) = expect_trivial {
                o = o.check("probe outcome differs from expect", *e == r.only_trivial());
            }
            Ok(o)
        }
    }
}

/// Parses an expression for `expr eval` and renders it canonically.
pub fn eval_expr(text: &str, n: Option<usize>) -> Result<(String, String), Error> {
    let e = parse_lam_expr(text, n)?;
    Ok((e.kind().to_string(), e.to_string()))
}

/// Schouten bracket of two functionals given as text.
pub fn bracket(a: &str, b: &str, n: Option<usize>) -> Result<LocalFunctional, Error> {
    schouten(&parse_functional(a, n)?, &parse_functional(b, n)?)
}
