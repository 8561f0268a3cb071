//! Command implementations. Each returns a JSON report or a [`CliError`].

use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};
use toepkern::frostman::{
    cor610_representation, frostman_kernel_rep, gamma_of, generalized_shift, isometric_condition_check,
    minimal_alpha, Perturbation,
};
use toepkern::hardy::inner_outer;
use toepkern::kernel::{kernel_of_rational_symbol, maximal_divisible_by_b, verify_maximal, RationalSymbol, Symbol};
use toepkern::oracle::{check_against_oracle, numerical_kernel, suggested_size, OracleReport};
use toepkern::representations::represent_blaschke_seeded;
use toepkern::scalar::Scalar;
use toepkern::{Blaschke64, Error, KernelRep64, MaximalFunctionCert, Rational64};

use crate::expr::{blaschke_from_str, rational_from_str, EvalError, ParseError};
use crate::json::{cx, BlaschkeJson, CertificateJson, RationalJson, RepJson};

/// Global options shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Relative rank tolerance of the oracle.
    pub tol: f64,
    /// Quadrature samples for Gram checks.
    pub samples: usize,
    /// Probe sequence used to pin unimodular constants.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self { tol: 1e-8, samples: 2048, seed: 0 }
    }
}

/// Largest principal angle accepted by `verify`.
pub const ANGLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub enum CliError {
    Parse { arg: &'static str, error: ParseError },
    Engine(Error),
    /// The oracle disagrees with a stored result.
    Disagreement(Value),
    Input(String),
}

impl CliError {
    /// 2 for certified rejections, 3 for numerical ambiguity, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_rejection() => 2,
            CliError::Engine(e) if e.is_numerical() => 3,
            CliError::Disagreement(_) => 3,
            _ => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Engine(e) => e.code(),
            CliError::Disagreement(_) => "OracleDisagreement",
            CliError::Input(_) => "InvalidInput",
        }
    }

    pub fn to_json(&self) -> Value {
        let class = match self.exit_code() {
            2 => "rejection",
            3 => "numerical",
            _ => "error",
        };
        let mut v = json!({ "error": { "code": self.code(), "class": class, "message": self.to_string() } });
        match self {
            CliError::Parse { arg, error } => {
                v["error"]["argument"] = json!(arg);
                v["error"]["position"] = json!(error.position);
                v["error"]["expected"] = json!(error.expected);
            }
            CliError::Disagreement(report) => v["error"]["report"] = report.clone(),
            _ => {}
        }
        v
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { arg, error } => write!(f, "{arg}: {error}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Disagreement(_) => write!(f, "oracle disagrees with the stored result"),
            CliError::Input(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn eval_err(arg: &'static str) -> impl Fn(EvalError) -> CliError {
    move |e| match e {
        EvalError::Parse(error) => CliError::Parse { arg, error },
        EvalError::Engine(e) => CliError::Engine(e),
    }
}

fn rational(arg: &'static str, text: &str) -> CliResult<Rational64> {
    rational_from_str(text).map_err(eval_err(arg))
}

fn blaschke(arg: &'static str, text: &str) -> CliResult<Blaschke64> {
    blaschke_from_str(text).map_err(eval_err(arg))
}

fn tolerances(opts: &Options) -> Value {
    let t = f64::tolerances();
    json!({
        "boundary": t.boundary,
        "root_cluster": t.root_cluster,
        "gcd": t.gcd,
        "snap": t.snap,
        "check": t.check,
        "rank": opts.tol,
        "samples": opts.samples,
        "seed": opts.seed,
    })
}

fn rep_json(r: &KernelRep64, opts: &Options) -> CliResult<Value> {
    let mut v = serde_json::to_value(RepJson::new(r)).expect("serializable");
    if r.isometric {
        v["gram_defect"] = json!(r.gram_defect(opts.samples)?);
    }
    Ok(v)
}

fn cert_json(c: &MaximalFunctionCert<f64>) -> Value {
    serde_json::to_value(CertificateJson {
        f: RationalJson::new(&c.f),
        o_witness: RationalJson::new(&c.o_witness),
        witness_outer: true,
        conjugation_outer: c.conjugation_outer,
    })
    .expect("serializable")
}

fn symbol_json(g: &Rational64) -> Value {
    serde_json::to_value(RationalJson::new(g)).expect("serializable")
}

/// `kernel <expr>`: dimension, representation and minimal containing model
/// space of `ker T_g`.
pub fn kernel(expr: &str, opts: &Options) -> CliResult<Value> {
    let g = rational("expr", expr)?;
    let k = kernel_of_rational_symbol(&RationalSymbol::new(g.clone())?)?;
    let rep = match k.kernel.rep() {
        Some(r) => rep_json(r, opts)?,
        None => Value::Null,
    };
    let zeros: Vec<_> = k.kernel.rep().map(|r| r.theta.zeros().iter().map(|&z| cx(z)).collect()).unwrap_or_default();
    Ok(json!({
        "command": "kernel",
        "input": expr,
        "symbol": symbol_json(&g),
        "dimension": k.kernel.dim(),
        "trivial": k.kernel.dim() == 0,
        "kernel": rep,
        "model_space_zeros": zeros,
        "containing_model_space": k.containing.as_ref().map(BlaschkeJson::new),
        "counts": { "n": k.n, "n_t": k.n_t, "n1": k.n1, "n2": k.n2, "big_n": k.big_n },
        "tolerances": tolerances(opts),
    }))
}

/// `minmodel <expr>`: the minimal model space containing `ker T_g`.
pub fn minmodel(expr: &str, opts: &Options) -> CliResult<Value> {
    let g = rational("expr", expr)?;
    let k = kernel_of_rational_symbol(&RationalSymbol::new(g.clone())?)?;
    Ok(json!({
        "command": "minmodel",
        "input": expr,
        "symbol": symbol_json(&g),
        "kernel_dimension": k.kernel.dim(),
        "containing_model_space": k.containing.as_ref().map(BlaschkeJson::new),
        "model_space_dimension": k.containing.as_ref().map_or(0, |b| b.degree()),
        "tolerances": tolerances(opts),
    }))
}

/// `maxfunc <expr> [--vanish ...]`: a certified maximal function of
/// `ker T_g`, optionally divisible by the Blaschke product with the given
/// zeros.
pub fn maxfunc(expr: &str, vanish: &[Complex64], opts: &Options) -> CliResult<Value> {
    let g = rational("expr", expr)?;
    let k = kernel_of_rational_symbol(&RationalSymbol::new(g.clone())?)?;
    let rep = k.kernel.rep().ok_or(Error::NotInKernel)?;
    // multiplier times the reproducing kernel partner at 0 of z^dim
    let f0 = rep.multiplier.mul(&Rational64::z_pow(rep.dim() as i32 - 1))?;
    let sym = Symbol::rational(g.clone())?;
    let cert = verify_maximal(&f0, &sym)?;
    let mut out = json!({
        "command": "maxfunc",
        "input": expr,
        "symbol": symbol_json(&g),
        "dimension": rep.dim(),
        "certificate": cert_json(&cert),
        "tolerances": tolerances(opts),
    });
    if !vanish.is_empty() {
        if vanish.len() >= rep.dim() {
            return Err(Error::InsufficientDegree { have: rep.dim(), need: vanish.len() + 1 }.into());
        }
        let mc = maximal_divisible_by_b(&inner_outer(&f0)?, vanish)?;
        let big = verify_maximal(&mc.f_big, &sym)?;
        let b = Blaschke64::from_zeros(vanish)?;
        let sub_symbol = g.mul(&b.to_rational())?;
        let small = verify_maximal(&mc.f_small, &Symbol::rational(sub_symbol.clone())?)?;
        out["vanish"] = json!(vanish.iter().map(|&z| cx(z)).collect::<Vec<_>>());
        out["certificate"] = cert_json(&big);
        out["subkernel"] = json!({
            "symbol": symbol_json(&sub_symbol),
            "certificate": cert_json(&small),
            "inner": BlaschkeJson::new(&mc.inner),
            "outer": RationalJson::new(&mc.outer),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Isometric,
    Hayashi,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Mode::Plain),
            "isometric" => Ok(Mode::Isometric),
            "hayashi" => Ok(Mode::Hayashi),
            _ => Err(format!("unknown mode '{s}' (plain, isometric, hayashi)")),
        }
    }
}

/// `represent --theta <expr> --B ...`: `ker T_{conj(theta) B}` as a
/// multiplier times a model space.
pub fn represent(theta: &str, lams: &[Complex64], mode: Mode, opts: &Options) -> CliResult<Value> {
    let t = blaschke("theta", theta)?;
    let b = Blaschke64::from_zeros(lams)?;
    let g = t.conj_rational().mul(&b.to_rational())?;
    let (plain, iso, hay) = represent_blaschke_seeded(&t, lams, opts.seed)?;
    let (rep, name) = match mode {
        Mode::Plain => (plain, "plain"),
        Mode::Isometric => (iso, "isometric"),
        Mode::Hayashi => (hay, "hayashi"),
    };
    Ok(json!({
        "command": "represent",
        "theta": BlaschkeJson::new(&t),
        "B": lams.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
        "mode": name,
        "symbol": symbol_json(&g),
        "dimension": rep.dim(),
        "kernel": rep_json(&rep, opts)?,
        "tolerances": tolerances(opts),
    }))
}

/// Arguments of the `frostman` command.
#[derive(Clone, Debug, Default)]
pub struct FrostmanArgs<'a> {
    pub theta: &'a str,
    pub h: Option<&'a str>,
    pub c: Option<Complex64>,
    pub p: Option<Complex64>,
    pub alpha: Option<&'a str>,
}

/// `frostman --theta <expr> --h <expr> [--C c --p p --alpha <expr>]`.
pub fn frostman(args: &FrostmanArgs<'_>, opts: &Options) -> CliResult<Value> {
    let theta = blaschke("theta", args.theta)?;
    let alpha = args.alpha.map(|a| blaschke("alpha", a)).transpose()?;
    let h = match (args.h, args.c, args.p) {
        (Some(h), _, _) => rational("h", h)?,
        (None, Some(c), Some(p)) => {
            let a = alpha.clone().ok_or_else(|| CliError::Input("--alpha is required with --C and --p".into()))?;
            Rational64::constant(c).sub(&a.to_rational().scale(p))?
        }
        _ => return Err(CliError::Input("give --h, or --C with --p and --alpha".into())),
    };
    let pert = Perturbation::new(theta.clone(), h.clone())?;
    let g = pert.symbol()?;
    let rep = frostman_kernel_rep(&pert)?;
    let min_alpha = minimal_alpha(&h)?;
    let used_alpha = alpha.clone().unwrap_or_else(|| min_alpha.clone());
    let gamma = gamma_of(&pert, &used_alpha)?;
    let mut out = json!({
        "command": "frostman",
        "theta": BlaschkeJson::new(&theta),
        "h": RationalJson::new(&h),
        "symbol": symbol_json(&g),
        "dimension": rep.dim(),
        "kernel": rep_json(&rep, opts)?,
        "generalized_shift": RationalJson::new(&generalized_shift(&pert)?),
        "minimal_alpha": BlaschkeJson::new(&min_alpha),
        "alpha": BlaschkeJson::new(&used_alpha),
        "gamma": BlaschkeJson::new(&gamma),
        "tolerances": tolerances(opts),
    });
    if let (Some(c), Some(p)) = (args.c, args.p) {
        let a = alpha.ok_or_else(|| CliError::Input("--alpha is required with --C and --p".into()))?;
        let implied = Rational64::constant(c).sub(&a.to_rational().scale(p))?;
        if implied.max_diff_on_circle(&h, 1024) > 1e-9 {
            return Err(CliError::Input("--h differs from C - p alpha".into()));
        }
        let cor = cor610_representation(&theta, &a, c, p)?;
        out["corollary"] = json!({
            "C": cx(c),
            "p": cx(p),
            "gamma_p": BlaschkeJson::new(&cor.gamma_p),
            "kernel": rep_json(&cor.rep, opts)?,
        });
    }
    // c / (1 - h theta) can only be isometric when |h| is constant on the circle
    let moduli: Vec<f64> = toepkern::scalar::circle_points::<f64>(opts.samples).iter().map(|&z| h.eval(z).norm()).collect();
    let (lo, hi) = moduli.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
    if hi - lo < 1e-12 {
        let c = Complex64::new((1.0 - hi * hi).sqrt(), 0.0);
        let chk = isometric_condition_check(&pert, c, opts.samples)?;
        out["isometric_check"] = json!({
            "c": cx(c),
            "isometric": chk.isometric,
            "norm": chk.norm,
            "certified": chk.certified,
        });
    }
    Ok(out)
}

fn report_json(r: &OracleReport<f64>) -> Value {
    json!({
        "size": r.size,
        "predicted_dim": r.predicted_dim,
        "numerical_dim": r.numerical_dim,
        "dim_doubled": r.dim_doubled,
        "stable": r.stable,
        "angle": r.angle,
        "tail": r.tail,
        "agrees": r.agrees(ANGLE_TOL),
    })
}

fn parse_field<T: serde::de::DeserializeOwned>(doc: &Value, path: &[&str]) -> CliResult<Option<T>> {
    let mut v = doc;
    for p in path {
        match v.get(p) {
            Some(x) if !x.is_null() => v = x,
            _ => return Ok(None),
        }
    }
    serde_json::from_value(v.clone()).map(Some).map_err(|e| CliError::Input(format!("field {}: {e}", path.join("."))))
}

fn check_rep(g: &Rational64, rep: &KernelRep64, m: Option<usize>, opts: &Options) -> CliResult<Value> {
    let basis = rep.basis()?.elements;
    Ok(report_json(&check_against_oracle(g, &basis, m, opts.tol)?))
}

fn check_cert(g: &Rational64, cert: &CertificateJson, m: Option<usize>, opts: &Options) -> CliResult<Value> {
    let f = cert.f.to_rational()?;
    let m = match m {
        Some(m) => m,
        None => suggested_size(g)?,
    };
    let symbolic = verify_maximal(&f, &Symbol::rational(g.clone())?).is_ok();
    let nk = numerical_kernel(g, m, opts.tol)?;
    let v = toepkern::oracle::expand(&f, m)?;
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut resid = v.clone();
    for b in &nk.subspace.basis_vectors {
        let c: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
        for (r, x) in resid.iter_mut().zip(b) {
            *r -= x * c;
        }
    }
    let rel = resid.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() / norm;
    Ok(json!({
        "size": m,
        "numerical_dim": nk.dim(),
        "dim_doubled": nk.dim_doubled,
        "stable": nk.stable,
        "residual": rel,
        "maximal": symbolic,
        "agrees": symbolic && nk.stable && rel < ANGLE_TOL,
    }))
}

/// `verify <file> --oracle-size M`: re-checks a stored result against the
/// truncated-Toeplitz oracle. Without `m` the size follows the decay of the
/// symbol.
pub fn verify(doc: &Value, m: Option<usize>, opts: &Options) -> CliResult<Value> {
    let g = parse_field::<RationalJson>(doc, &["symbol"])?
        .ok_or_else(|| CliError::Input("result has no symbol".into()))?
        .to_rational()?;
    let mut checks = serde_json::Map::new();
    if let Some(dim) = doc.get("dimension").and_then(Value::as_u64) {
        if dim == 0 {
            let m = match m {
                Some(m) => m,
                None => suggested_size(&g)?,
            };
            let nk = numerical_kernel(&g, m, opts.tol)?;
            checks.insert(
                "kernel".into(),
                json!({ "size": m, "predicted_dim": 0, "numerical_dim": nk.dim(), "dim_doubled": nk.dim_doubled,
                        "stable": nk.stable, "agrees": nk.stable && nk.dim() == 0 }),
            );
        }
    }
    if let Some(r) = parse_field::<RepJson>(doc, &["kernel"])? {
        checks.insert("kernel".into(), check_rep(&g, &r.to_rep()?, m, opts)?);
    }
    if let Some(r) = parse_field::<RepJson>(doc, &["corollary", "kernel"])? {
        checks.insert("corollary".into(), check_rep(&g, &r.to_rep()?, m, opts)?);
    }
    if let Some(c) = parse_field::<CertificateJson>(doc, &["certificate"])? {
        checks.insert("certificate".into(), check_cert(&g, &c, m, opts)?);
    }
    if let (Some(s), Some(c)) = (
        parse_field::<RationalJson>(doc, &["subkernel", "symbol"])?,
        parse_field::<CertificateJson>(doc, &["subkernel", "certificate"])?,
    ) {
        checks.insert("subkernel".into(), check_cert(&s.to_rational()?, &c, m, opts)?);
    }
    if checks.is_empty() {
        return Err(CliError::Input("result has nothing to verify".into()));
    }
    let agrees = checks.values().all(|c| c["agrees"].as_bool() == Some(true));
    let out = json!({
        "command": "verify",
        "source": doc.get("command").cloned().unwrap_or(Value::Null),
        "oracle_size": m,
        "checks": checks,
        "agrees": agrees,
        "tolerances": tolerances(opts),
    });
    if agrees {
        Ok(out)
    } else {
        Err(CliError::Disagreement(out))
    }
}
