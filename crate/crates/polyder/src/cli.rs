//! Command dispatch behind the `polyder` binary.
//!
//! Every command takes the ambient variable count, a degree bound, an
//! iteration cap and an output format, parses its expression arguments, and
//! returns an exit code with the output already rendered: `0` success, `1`
//! mathematical failure (a violated hypothesis, named in the message), `2`
//! usage or parse error, `3` degree or cap exhausted (retryable; with
//! `retry_doubling` the degree bound is doubled up to two times first).
//!
//! JSON output follows `{"ok": bool, "result": {...}, "degree_bound_used":
//! int, "trace": [...]}` with fixed term order everywhere, so identical
//! invocations produce byte-identical output.

use serde_json::{json, Value};

use crate::endomorph::{conjugate_derivation, EndoError, PolyEndo};
use crate::liederiv::{
    centralizer_bounded, ideal_closure_bounded, module_orbit_bounded, normalizer_bounded,
    Derivation, DerivationSubspace,
};
use crate::lndkit::{
    common_kernel_bounded, generator_indices, is_lnd_bounded, kernel_basis_bounded, local_slice,
    SliceError,
};
use crate::parse::{parse_derivation, parse_endo, parse_polynomial, ParseError};
use crate::polyalg::{monomials_up_to, Polynomial};
use crate::recover::{main_theorem_roundtrip, recover_automorphism, RecoverError, StageRecord};
use crate::sample::{self, SampleRng};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUNDS: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct CliOptions {
    pub nvars: usize,
    pub max_deg: u32,
    pub cap: u32,
    pub format: OutputFormat,
    pub retry_doubling: bool,
}

impl CliOptions {
    pub fn new(nvars: usize) -> Self {
        CliOptions {
            nvars,
            max_deg: 8,
            cap: 32,
            format: OutputFormat::Text,
            retry_doubling: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Command {
    Bracket { a: String, b: String },
    Apply { derivation: String, polynomial: String },
    Grade { derivation: String },
    Jacobian { endo: String },
    Det { endo: String },
    Invert { endo: String },
    Conjugate { endo: String, derivation: String },
    LndCheck { derivation: String },
    Kernel { derivation: String },
    CommonKernel { derivations: Vec<String> },
    Slice { derivation: String, seed: Option<String> },
    Recover { derivations: Vec<String> },
    Roundtrip { endo: String },
    VerifyLemmas,
}

#[derive(Clone, Debug)]
pub struct CliOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

// Internal error classification carrying the exit code; degree-bound
// failures keep whatever partial stage trace the construction produced.
enum Failure {
    Usage(String),
    Math(String),
    Bounds { message: String, trace: Vec<StageRecord> },
}

impl Failure {
    fn bounds(message: impl Into<String>) -> Self {
        Failure::Bounds {
            message: message.into(),
            trace: Vec::new(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Math(_) => EXIT_MATH,
            Failure::Bounds { .. } => EXIT_BOUNDS,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Math(m) | Failure::Bounds { message: m, .. } => m,
        }
    }

    fn trace(&self) -> &[StageRecord] {
        match self {
            Failure::Bounds { trace, .. } => trace,
            _ => &[],
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<EndoError> for Failure {
    fn from(e: EndoError) -> Self {
        match e {
            EndoError::NotInvertible { .. } => Failure::Math(e.to_string()),
            EndoError::DegreeBoundExceeded { .. } => Failure::bounds(e.to_string()),
        }
    }
}

impl From<SliceError> for Failure {
    fn from(e: SliceError) -> Self {
        match e {
            SliceError::SeedInKernel | SliceError::TerminalNotConstant { .. } => {
                Failure::Math(e.to_string())
            }
            SliceError::CapExceeded { .. } => Failure::bounds(e.to_string()),
        }
    }
}

impl From<RecoverError> for Failure {
    fn from(e: RecoverError) -> Self {
        match e {
            RecoverError::DegreeBoundExceeded { .. } => {
                let message = e.to_string();
                let RecoverError::DegreeBoundExceeded { trace, .. } = e else {
                    unreachable!()
                };
                Failure::Bounds { message, trace }
            }
            RecoverError::Endo(inner) => inner.into(),
            other => Failure::Math(other.to_string()),
        }
    }
}

struct Success {
    result: Value,
    text: String,
    trace: Vec<StageRecord>,
}

impl Success {
    fn new(result: Value, text: impl Into<String>) -> Self {
        Success {
            result,
            text: text.into(),
            trace: Vec::new(),
        }
    }
}

/// Runs one command and renders its output; never panics on user input.
pub fn run(cmd: &Command, opts: &CliOptions) -> CliOutcome {
    if opts.nvars == 0 {
        return render(
            opts,
            opts.max_deg,
            Err(Failure::Usage("the variable count must be at least 1".into())),
        );
    }
    let mut bound = opts.max_deg;
    let retries = if opts.retry_doubling { 2 } else { 0 };
    let mut attempt = 0;
    loop {
        let result = dispatch(cmd, opts, bound);
        match &result {
            Err(Failure::Bounds { .. }) if attempt < retries => {
                attempt += 1;
                bound *= 2;
            }
            _ => return render(opts, bound, result),
        }
    }
}

fn render(opts: &CliOptions, bound: u32, result: Result<Success, Failure>) -> CliOutcome {
    match result {
        Ok(s) => {
            let stdout = match opts.format {
                OutputFormat::Text => {
                    let mut out = s.text.clone();
                    if !out.ends_with('\n') {
                        out.push('\n');
                    }
                    out
                }
                OutputFormat::Json => {
                    let payload = json!({
                        "ok": true,
                        "result": s.result,
                        "degree_bound_used": bound,
                        "trace": trace_json(&s.trace),
                    });
                    format!("{payload}\n")
                }
            };
            let stderr = match opts.format {
                OutputFormat::Text => {
                    let lines: Vec<String> =
                        s.trace.iter().map(|r| r.to_string()).collect();
                    if lines.is_empty() {
                        String::new()
                    } else {
                        format!("{}\n", lines.join("\n"))
                    }
                }
                OutputFormat::Json => String::new(),
            };
            CliOutcome {
                exit_code: EXIT_OK,
                stdout,
                stderr,
            }
        }
        Err(f) => {
            let stdout = match opts.format {
                OutputFormat::Text => String::new(),
                OutputFormat::Json => {
                    let payload = json!({
                        "ok": false,
                        "error": f.message(),
                        "degree_bound_used": bound,
                        "trace": trace_json(f.trace()),
                    });
                    format!("{payload}\n")
                }
            };
            CliOutcome {
                exit_code: f.exit_code(),
                stdout,
                stderr: format!("error: {}\n", f.message()),
            }
        }
    }
}

fn trace_json(trace: &[StageRecord]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|r| {
                json!({
                    "stage": r.stage,
                    "remaining": r.remaining.iter().map(|i| format!("d{}", i + 1)).collect::<Vec<_>>(),
                    "subset": r.subset.iter().map(|i| format!("d{}", i + 1)).collect::<Vec<_>>(),
                    "completed": format!("d{}", r.completed + 1),
                    "branch": r.branch(),
                    "seed": r.seed.to_string(),
                    "steps": r.slice_steps,
                    "corrections": r.corrections.iter().map(|(j, c)| {
                        json!({"derivation": format!("d{}", j + 1), "value": c.to_string()})
                    }).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn endo_json(s: &PolyEndo) -> Value {
    let mut map = serde_json::Map::new();
    for (i, im) in s.images().iter().enumerate() {
        map.insert(format!("x{}", i + 1), Value::String(im.to_string()));
    }
    Value::Object(map)
}

fn basis_json(basis: &[Polynomial]) -> Value {
    Value::Array(
        basis
            .iter()
            .map(|p| Value::String(p.to_string()))
            .collect(),
    )
}

fn dispatch(cmd: &Command, opts: &CliOptions, bound: u32) -> Result<Success, Failure> {
    let n = opts.nvars;
    match cmd {
        Command::Bracket { a, b } => {
            let da = parse_derivation(a, n)?;
            let db = parse_derivation(b, n)?;
            let out = da.bracket(&db);
            Ok(Success::new(json!({"derivation": out.to_string()}), out.to_string()))
        }
        Command::Apply { derivation, polynomial } => {
            let d = parse_derivation(derivation, n)?;
            let p = parse_polynomial(polynomial, n)?;
            let out = d.apply(&p);
            Ok(Success::new(json!({"polynomial": out.to_string()}), out.to_string()))
        }
        Command::Grade { derivation } => {
            let d = parse_derivation(derivation, n)?;
            let parts = d.graded_parts();
            let mut lines = Vec::new();
            let mut comps = Vec::new();
            for (w, part) in &parts {
                let weight: Vec<String> = w.iter().map(ToString::to_string).collect();
                lines.push(format!("[{}] {}", weight.join(","), part));
                comps.push(json!({"weight": w, "derivation": part.to_string()}));
            }
            if lines.is_empty() {
                lines.push("0".into());
            }
            Ok(Success::new(json!({"components": comps}), lines.join("\n")))
        }
        Command::Jacobian { endo } => {
            let s = parse_endo(endo, n)?;
            let j = s.jacobian();
            let rows: Vec<Vec<String>> = (0..n)
                .map(|i| (0..n).map(|k| j.get(i, k).to_string()).collect())
                .collect();
            let text = rows
                .iter()
                .map(|r| format!("[{}]", r.join(", ")))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Success::new(json!({"matrix": rows}), text))
        }
        Command::Det { endo } => {
            let s = parse_endo(endo, n)?;
            let out = s.jacobian_det();
            Ok(Success::new(json!({"polynomial": out.to_string()}), out.to_string()))
        }
        Command::Invert { endo } => {
            let s = parse_endo(endo, n)?;
            let inv = s.invert_bounded(bound)?;
            Ok(Success::new(json!({"endo": endo_json(&inv)}), inv.to_string()))
        }
        Command::Conjugate { endo, derivation } => {
            let s = parse_endo(endo, n)?;
            let d = parse_derivation(derivation, n)?;
            let out = conjugate_derivation(&s, &d)?;
            Ok(Success::new(json!({"derivation": out.to_string()}), out.to_string()))
        }
        Command::LndCheck { derivation } => {
            let d = parse_derivation(derivation, n)?;
            match generator_indices(&d, opts.cap) {
                Some(indices) => Ok(Success::new(
                    json!({"locally_nilpotent": true, "generator_indices": indices}),
                    format!(
                        "locally nilpotent; generator indices [{}]",
                        indices.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                    ),
                )),
                None => Err(Failure::Math(format!(
                    "not locally nilpotent within cap {}",
                    opts.cap
                ))),
            }
        }
        Command::Kernel { derivation } => {
            let d = parse_derivation(derivation, n)?;
            let k = kernel_basis_bounded(&d, bound);
            let text = k
                .basis
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Success::new(
                json!({"basis": basis_json(&k.basis), "dim": k.dim(), "degree_bound": k.degree_bound}),
                text,
            ))
        }
        Command::CommonKernel { derivations } => {
            if derivations.is_empty() {
                return Err(Failure::Usage("common-kernel needs at least one derivation".into()));
            }
            let ds = derivations
                .iter()
                .map(|t| parse_derivation(t, n))
                .collect::<Result<Vec<_>, _>>()?;
            let k = common_kernel_bounded(&ds, bound);
            let text = k
                .basis
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Success::new(
                json!({"basis": basis_json(&k.basis), "dim": k.dim(), "degree_bound": k.degree_bound}),
                text,
            ))
        }
        Command::Slice { derivation, seed } => {
            let d = parse_derivation(derivation, n)?;
            if !is_lnd_bounded(&d, opts.cap) {
                return Err(Failure::Math(format!(
                    "not locally nilpotent within cap {}; a slice requires a locally nilpotent derivation",
                    opts.cap
                )));
            }
            let cert = match seed {
                Some(text) => {
                    let seed = parse_polynomial(text, n)?;
                    local_slice(&d, &seed, opts.cap)?
                }
                None => {
                    // deterministic search: generators first, then monomials
                    // in graded order
                    let mut seeds: Vec<Polynomial> = monomials_up_to(n, bound)
                        .into_iter()
                        .filter(|m| !m.is_unit())
                        .map(|m| Polynomial::term(m, crate::polyalg::rat(1)))
                        .collect();
                    seeds.sort_by(|a, b| {
                        a.degree().cmp(&b.degree()).then_with(|| {
                            let ma = a.terms().next().unwrap().0.clone();
                            let mb = b.terms().next().unwrap().0.clone();
                            mb.cmp(&ma)
                        })
                    });
                    let mut found = None;
                    for seed in &seeds {
                        match local_slice(&d, seed, opts.cap) {
                            Ok(cert) => {
                                found = Some(cert);
                                break;
                            }
                            Err(SliceError::SeedInKernel)
                            | Err(SliceError::TerminalNotConstant { .. }) => continue,
                            Err(e @ SliceError::CapExceeded { .. }) => return Err(e.into()),
                        }
                    }
                    found.ok_or_else(|| {
                        Failure::bounds(format!(
                            "no slice found among monomial seeds of degree <= {bound}"
                        ))
                    })?
                }
            };
            Ok(Success::new(
                json!({
                    "slice": cert.slice.to_string(),
                    "witness": cert.witness.to_string(),
                    "steps": cert.steps,
                    "constant": cert.constant.to_string(),
                }),
                cert.to_string(),
            ))
        }
        Command::Recover { derivations } => {
            if derivations.len() != n {
                return Err(Failure::Usage(format!(
                    "recover needs exactly {n} derivations (one per variable), got {}",
                    derivations.len()
                )));
            }
            let ds = derivations
                .iter()
                .map(|t| parse_derivation(t, n))
                .collect::<Result<Vec<_>, _>>()?;
            let report = recover_automorphism(&ds, bound, opts.cap)?;
            let lambda: Vec<Vec<String>> = (0..n)
                .map(|i| (0..n).map(|j| report.coords.lambda.get(i, j).to_string()).collect())
                .collect();
            let result = json!({
                "sigma": endo_json(&report.sigma),
                "coords": basis_json(&report.coords.coords),
                "lambda": lambda,
                "shift_normalized": report.shift_normalized,
            });
            let mut s = Success::new(result, report.sigma.to_string());
            s.trace = report.trace;
            Ok(s)
        }
        Command::Roundtrip { endo } => {
            let s = parse_endo(endo, n)?;
            let report = main_theorem_roundtrip(&s, bound, opts.cap)?;
            if !report.closed {
                return Err(Failure::Math(
                    "verification failed: the recovered automorphism does not match the input up \
                     to a shift"
                        .into(),
                ));
            }
            let shift: Vec<String> = report
                .shift
                .as_ref()
                .unwrap()
                .iter()
                .map(ToString::to_string)
                .collect();
            let result = json!({
                "closed": true,
                "tau": endo_json(&report.recovery.sigma),
                "shift": shift,
            });
            let text = format!(
                "closed: recovered {} with shift [{}]",
                report.recovery.sigma,
                shift.join(", ")
            );
            let mut out = Success::new(result, text);
            out.trace = report.recovery.trace;
            Ok(out)
        }
        Command::VerifyLemmas => verify_lemmas(n, bound),
    }
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        pass,
        detail: detail.into(),
    }
}

// The bounded-degree structure suite: maximal abelian and Cartan properties
// of the two distinguished frames, triviality of the center, simplicity of
// the algebra and of the natural module, the kernel of the partial frame,
// and the two fixator statements on sampled tame automorphisms.
fn verify_lemmas(n: usize, bound: u32) -> Result<Success, Failure> {
    let deg_struct = bound.min(6);
    let deg_simple = bound.min(4);
    let partials: Vec<Derivation> = (0..n).map(|i| Derivation::partial(n, i)).collect();
    let eulers: Vec<Derivation> = (0..n).map(|i| Derivation::euler(n, i)).collect();
    let mut checks = Vec::new();

    let c = centralizer_bounded(&partials, deg_struct);
    checks.push(check(
        "centralizer of the partial frame is the frame itself",
        c.dim() == n && c.equals_span(&partials),
        format!("dim {} at degree <= {deg_struct}", c.dim()),
    ));

    let c = centralizer_bounded(&eulers, deg_struct);
    checks.push(check(
        "centralizer of the Euler frame is the frame itself",
        c.dim() == n && c.equals_span(&eulers),
        format!("dim {} at degree <= {deg_struct}", c.dim()),
    ));

    let nn = normalizer_bounded(&eulers, deg_struct);
    checks.push(check(
        "Euler frame is self-normalizing (Cartan property)",
        nn.dim() == n && nn.equals_span(&eulers),
        format!("dim {} at degree <= {deg_struct}", nn.dim()),
    ));

    let all = DerivationSubspace::full(n, 2);
    let z = centralizer_bounded(&all.basis, deg_struct);
    checks.push(check(
        "center truncation is zero",
        z.dim() == 0,
        format!("dim {} at degree <= {deg_struct}", z.dim()),
    ));

    let ck = common_kernel_bounded(&partials, deg_struct);
    checks.push(check(
        "common kernel of the partials is the constants",
        ck.is_constants_only(),
        format!("dim {} at degree <= {deg_struct}", ck.dim()),
    ));

    let full_dim = DerivationSubspace::full(n, deg_simple).dim();
    let mut rng = SampleRng::new(0x5EED);
    let mut closures_full = true;
    for _ in 0..5 {
        let a = sample::nonzero_derivation(&mut rng, n, deg_simple);
        let c = ideal_closure_bounded(&a, deg_simple).expect("nonzero seed");
        if c.dim() != full_dim {
            closures_full = false;
        }
    }
    checks.push(check(
        "ideal closure of random nonzero elements is everything (simplicity)",
        closures_full,
        format!("5 random seeds at degree <= {deg_simple}"),
    ));

    let quotient_dim = crate::polyalg::dim_up_to(n, deg_simple) - 1;
    let mut orbits_full = true;
    for _ in 0..5 {
        let p = sample::non_constant_polynomial(&mut rng, n, deg_simple, 3);
        let orbit = module_orbit_bounded(&p, deg_simple).expect("non-constant seed");
        if orbit.len() != quotient_dim {
            orbits_full = false;
        }
    }
    checks.push(check(
        "module orbit of random non-constant polynomials is everything",
        orbits_full,
        format!("5 random seeds at degree <= {deg_simple}"),
    ));

    let mut fixator_ok = true;
    let mut faithful_ok = true;
    let mut samples: Vec<PolyEndo> = vec![PolyEndo::identity(n), sample::shift(&mut rng, n)];
    for _ in 0..20 {
        samples.push(sample::tame(&mut rng, n, 3, 2, 6).endo());
    }
    for s in &samples {
        if s.fixes_partials() != s.is_shift() {
            fixator_ok = false;
        }
        if s.fixes_euler_frame().map_err(Failure::from)? != s.is_identity() {
            faithful_ok = false;
        }
    }
    checks.push(check(
        "fixing the partials by conjugation forces a shift",
        fixator_ok,
        format!("{} sampled automorphisms", samples.len()),
    ));
    checks.push(check(
        "fixing partials and Euler frame forces the identity",
        faithful_ok,
        format!("{} sampled automorphisms", samples.len()),
    ));

    let all_pass = checks.iter().all(|c| c.pass);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for c in &checks {
        lines.push(format!(
            "{} {:width$} ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail,
        ));
        rows.push(json!({"name": c.name, "pass": c.pass, "detail": c.detail}));
    }
    let success = Success::new(json!({"checks": rows, "all_pass": all_pass}), lines.join("\n"));
    if all_pass {
        Ok(success)
    } else {
        let rendered = match success.result {
            Value::Object(_) => lines.join("\n"),
            _ => unreachable!(),
        };
        Err(Failure::Math(format!(
            "structure checks failed at n = {n}:\n{rendered}"
        )))
    }
}
