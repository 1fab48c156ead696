use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use gmr_core::figures::{FigureSpec, Parameterization};
use gmr_core::lie::{classify, eta, AlgebraElement};
use gmr_core::solutions::{catalog, FamilyId, Solution, SolutionFamily};
use gmr_core::transform::{apply_point_with, apply_to_solution, flow_point, G3Form, PointMap};
use gmr_core::verify::{cn_order, mc_semigroup_check, residual_grid, Grid, McConfig};
use gmr_core::{Error, ModelParams, PdePoint};

const EXIT_FAIL: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "gmr", version, about = "Closed-form solutions, symmetries and verification for the geometric mean-reversion Feynman–Kac equation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a solution family at (t, x)
    Eval(EvalArgs),
    /// Classify an algebra element into the optimal system
    Classify(ClassifyArgs),
    /// Apply a point symmetry G1..G6 to a point or a solution
    Transform(TransformArgs),
    /// Write figure data as CSV "t,x,u"
    Figure(FigureArgs),
    /// Run a residual, finite-difference or Monte Carlo check
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Default)]
struct FamilyArgs {
    /// Family JSON, inline or a file path
    #[arg(long)]
    family_json: Option<String>,
    /// Family name (Inv1, Inv2, Inv3, Inv4_exp, Inv5, PcfUV, PcfW, AiryPlus, AiryMinus, ExpAt_pos, ExpAt_zero, ExpAt_neg)
    #[arg(long)]
    family: Option<FamilyId>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Clone, Copy, Default)]
struct ParamArgs {
    /// Reversion speed (λ is set to k²/(2σ²))
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self, base: Option<ModelParams>) -> gmr_core::Result<ModelParams> {
        match (base, self.k, self.sigma) {
            (Some(p), None, None) => Ok(p),
            (base, k, s) => {
                let k = k.or(base.map(|p| p.k)).unwrap_or(1.0);
                let s = s.or(base.map(|p| p.sigma)).unwrap_or(1.0);
                ModelParams::symmetric(k, s)
            }
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    /// Print u and its derivatives as JSON
    #[arg(long)]
    derivs: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Coefficients [a1,...,a6] as JSON, or a file containing them
    element: String,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum G3Arg {
    Flow,
    Printed,
}

#[derive(Args)]
struct TransformArgs {
    /// Map JSON {"g": i, "eps": e}, inline or a file path
    #[arg(long)]
    map_json: Option<String>,
    #[arg(long)]
    g: Option<u8>,
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Transform the point "t,x,u"
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Also integrate the generator's flow and report the difference
    #[arg(long)]
    flow: bool,
    #[arg(long, value_enum, default_value = "flow")]
    g3_form: G3Arg,
    #[command(flatten)]
    fam: FamilyArgs,
    /// Evaluate the transformed solution at this t
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number 1..7
    #[arg(long)]
    id: u8,
    /// Subfigure a, b or c
    #[arg(long, default_value = "a")]
    sub: char,
    /// Output CSV path, "-" for stdout
    #[arg(long)]
    out: PathBuf,
    /// Figure 3: use c1 = 2, c2 = −1 instead of c = 1
    #[arg(long)]
    text_params: bool,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    n_t: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long)]
    n_x: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Residual,
    Fd,
    Mc,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: VerifyKind,
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    /// Tolerance on the residual (residual) or the fine-grid error (fd)
    #[arg(long)]
    tol: Option<f64>,
    /// Points per axis of the coarse grid (fd)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_paths: Option<usize>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    antithetic: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct VerifyConfig {
    k: Option<f64>,
    sigma: Option<f64>,
    tol: Option<f64>,
    grid: Option<Grid>,
    n: Option<usize>,
    mc: Option<McConfig>,
    t0: Option<f64>,
    x0: Option<f64>,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult = Result<(), Failure>;

/// Inline JSON if it starts like JSON, otherwise a path to read.
fn json_arg(s: &str) -> Result<Value, Failure> {
    let t = s.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        s.to_string()
    } else {
        std::fs::read_to_string(Path::new(s)).map_err(Error::from)?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid JSON: {e}")))
}

fn family_from(args: &FamilyArgs) -> Result<SolutionFamily, Failure> {
    let mut v = match &args.family_json {
        Some(s) => json_arg(s)?,
        None => json!({}),
    };
    let obj = v
        .as_object_mut()
        .ok_or_else(|| Failure::Usage("family JSON must be an object".into()))?;
    if let Some(f) = args.family {
        obj.insert("family".into(), json!(f));
    }
    if !obj.contains_key("family") {
        return Err(Failure::Usage("a family is required (--family or --family-json)".into()));
    }
    for (key, val) in [("c1", args.c1), ("c2", args.c2), ("a", args.a)] {
        if let Some(x) = val {
            obj.remove(if key == "c1" { "c" } else { key });
            obj.insert(key.into(), json!(x));
        }
    }
    if !obj.contains_key("c1") && !obj.contains_key("c") {
        obj.insert("c1".into(), json!(1.0));
    }
    let base = match obj.remove("params") {
        Some(p) => Some(
            serde_json::from_value::<ModelParams>(p)
                .map_err(|e| Failure::Usage(format!("invalid params: {e}")))?,
        ),
        None => None,
    };
    let params = args.params.resolve(base)?;
    obj.insert("params".into(), serde_json::to_value(params).map_err(Error::from)?);
    let f: SolutionFamily =
        serde_json::from_value(v).map_err(|e| Failure::Usage(format!("invalid family: {e}")))?;
    f.validate()?;
    Ok(f)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_eval(a: &EvalArgs) -> CliResult {
    let f = family_from(&a.fam)?;
    if a.derivs {
        print_json(&serde_json::to_value(f.eval_derivs(a.t, a.x)?).map_err(Error::from)?);
    } else {
        println!("{}", f.eval(a.t, a.x)?);
    }
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs) -> CliResult {
    let coeffs: [f64; 6] = serde_json::from_value(json_arg(&a.element)?)
        .map_err(|e| Failure::Usage(format!("expected six coefficients: {e}")))?;
    let x = AlgebraElement::new(coeffs, a.sigma)?;
    let rep = classify(&x)?;
    let err = rep.replay_error(&x)?;
    let mut out = serde_json::to_value(&rep).map_err(Error::from)?;
    let o = out.as_object_mut().expect("object");
    o.insert("representative".into(), json!(rep.representative()));
    o.insert("eta".into(), json!(eta(&x)));
    o.insert("replay_error".into(), json!(err));
    o.insert("replay".into(), json!(if err <= 1e-9 { "ok" } else { "failed" }));
    print_json(&out);
    Ok(())
}

fn parse_point(s: &str) -> Result<PdePoint, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("--point expects t,x,u: {e}")))?;
    match parts[..] {
        [t, x, u] => Ok(PdePoint::new(t, x, u)?),
        _ => Err(Failure::Usage("--point expects three numbers t,x,u".into())),
    }
}

fn cmd_transform(a: &TransformArgs) -> CliResult {
    let mut m: PointMap = match &a.map_json {
        Some(s) => serde_json::from_value(json_arg(s)?)
            .map_err(|e| Failure::Usage(format!("invalid map: {e}")))?,
        None => PointMap { g: 0, eps: 0.0 },
    };
    if let Some(g) = a.g {
        m.g = g;
    }
    if let Some(e) = a.eps {
        m.eps = e;
    }
    if a.map_json.is_none() && (a.g.is_none() || a.eps.is_none()) {
        return Err(Failure::Usage("--g and --eps (or --map-json) are required".into()));
    }
    let m = PointMap::new(m.g, m.eps).map_err(|e| Failure::Usage(e.to_string()))?;
    let form = match a.g3_form {
        G3Arg::Flow => G3Form::Flow,
        G3Arg::Printed => G3Form::Printed,
    };
    if let Some(ps) = &a.point {
        let params = a.fam.params.resolve(None)?;
        let p = parse_point(ps)?;
        let img = apply_point_with(&params, &m, &p, form)?;
        let mut out = json!({"map": m, "image": img});
        if a.flow {
            let fl = flow_point(&params, m.g, m.eps, &p)?;
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-300);
            out["flow"] = json!(fl);
            out["flow_rel_diff"] = json!({
                "t": (img.t - fl.t).abs(),
                "x": rel(img.x, fl.x),
                "u": rel(img.u, fl.u),
            });
        }
        print_json(&out);
        return Ok(());
    }
    let (t, x) = match (a.t, a.x) {
        (Some(t), Some(x)) => (t, x),
        _ => return Err(Failure::Usage("give --point t,x,u or a family with --t and --x".into())),
    };
    let f = family_from(&a.fam)?;
    let tf = apply_to_solution(&f.params, &m, f)?.with_form(form);
    let d = tf.derivs(t, x).expect("closed form available")?;
    let r = gmr_core::pde_operator(&f.params, &d, x)?;
    print_json(&json!({
        "map": m,
        "t": t,
        "x": x,
        "u": d.u,
        "normalized_residual": r.abs() / (1.0 + d.u.abs()),
    }));
    Ok(())
}

fn cmd_figure(a: &FigureArgs) -> CliResult {
    let mut spec = FigureSpec::new(a.id, a.sub).map_err(|e| Failure::Usage(e.to_string()))?;
    if a.text_params {
        spec.parameterization = Parameterization::Text;
    }
    let g = &mut spec.grid;
    g.t_min = a.t_min.unwrap_or(g.t_min);
    g.t_max = a.t_max.unwrap_or(g.t_max);
    g.n_t = a.n_t.unwrap_or(g.n_t);
    g.x_min = a.x_min.unwrap_or(g.x_min);
    g.x_max = a.x_max.unwrap_or(g.x_max);
    g.n_x = a.n_x.unwrap_or(g.n_x);
    let data = spec.compute()?;
    if a.out.as_os_str() == "-" {
        data.write_csv(std::io::stdout().lock())?;
    } else {
        data.save_csv(&a.out)?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> CliResult {
    let cfg: VerifyConfig = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(Error::from)?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config: {e}")))?
        }
        None => VerifyConfig::default(),
    };
    let k = a.params.k.or(cfg.k).unwrap_or(1.0);
    let sigma = a.params.sigma.or(cfg.sigma).unwrap_or(1.0);
    let params = ModelParams::symmetric(k, sigma)?;
    let tol = a.tol.or(cfg.tol);
    let (pass, report) = match a.kind {
        VerifyKind::Residual => {
            let tol = tol.unwrap_or(1e-7);
            let grid = cfg.grid.unwrap_or_default();
            let mut rows = Vec::new();
            let mut pass = true;
            for f in catalog(params)? {
                let r = residual_grid(&f, &params, &grid)?;
                pass &= r.max_residual <= tol;
                rows.push(json!({"family": f.family.name(), "report": r}));
            }
            (pass, json!({"kind": "residual", "tolerance": tol, "families": rows}))
        }
        VerifyKind::Fd => {
            let n = a.n.or(cfg.n).unwrap_or(50);
            let grid = match cfg.grid {
                Some(g) if a.n.is_none() => g,
                _ => Grid::new(0.2, 1.0, -1.0, 1.0, n, n)?,
            };
            let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, params)?;
            let o = cn_order(&params, &grid, &f)?;
            let mut pass = (o.order - 2.0).abs() <= 0.3;
            if let Some(t) = tol {
                pass &= o.fine.max_error <= t;
            }
            (pass, json!({"kind": "fd", "tolerance": tol, "order": o}))
        }
        VerifyKind::Mc => {
            let mut mc = cfg.mc.unwrap_or_default();
            mc.seed = a.seed.unwrap_or(mc.seed);
            mc.n_paths = a.n_paths.unwrap_or(mc.n_paths);
            mc.n_steps = a.n_steps.unwrap_or(mc.n_steps);
            mc.horizon = a.horizon.unwrap_or(mc.horizon);
            mc.antithetic |= a.antithetic;
            let t0 = a.t0.or(cfg.t0).unwrap_or(0.5);
            let x0 = a.x0.or(cfg.x0).unwrap_or(1.0);
            let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, params)?;
            let r = mc_semigroup_check(&params, &f, t0, x0, &mc)?;
            (r.z.abs() <= 3.0, json!({"kind": "mc", "config": mc, "z": r.z, "report": r}))
        }
    };
    let mut report = report;
    report["pass"] = json!(pass);
    print_json(&report);
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Json(_) | Error::Invalid(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Transform(a) => cmd_transform(a),
        Cmd::Figure(a) => cmd_figure(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
