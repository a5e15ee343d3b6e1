use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use tevl_core::galerkin::{
    assemble_forms, build_basis, coercive_anchor, direct_quadratic_form, min_eig_path, min_eig_series, neg_count,
    qep_solve, verify_ball_packing, FormMatrices, GalerkinConfig,
};
use tevl_core::radial::{find_roots, RadialProblem, RootOptions};
use tevl_core::report::{
    crossing_rows, plot_rows, qep_rows, radial_rows, GALERKIN_HEADER, PLOT_HEADER, RADIAL_HEADER,
};
use tevl_core::symbol::classify_symbol;
use tevl_core::Variant;

use crate::config::{BallRun, PackRun, PencilRun, QepRun, RunConfig, SymbolRun};
use crate::failure::{Failure, EXIT_NUMERICAL};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const FORM_PROBES: usize = 20;
const PACKING_TOL: f64 = 1e-8;

/// What a successful (or empty) run wrote.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub outputs: Vec<PathBuf>,
    pub count: usize,
}

struct Writer<'a> {
    dir: &'a Path,
    config_line: String,
    echo: Value,
    written: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path, echo: Value) -> Result<Self, Failure> {
        fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
        let config_line = serde_json::to_string(&echo).expect("config serializes");
        Ok(Self { dir, config_line, echo, written: Vec::new() })
    }

    fn csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<(), Failure> {
        let mut text = format!("# tevl {VERSION}\n# config {}\n{header}\n", self.config_line);
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        self.put(name, text)
    }

    fn json(&mut self, name: &str, result: Value) -> Result<(), Failure> {
        let doc = json!({ "tevl_version": VERSION, "config": self.echo, "result": result });
        let mut text = serde_json::to_string_pretty(&doc).expect("result serializes");
        text.push('\n');
        self.put(name, text)
    }

    fn put(&mut self, name: &str, text: String) -> Result<(), Failure> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs the configured command. An `Err` whose exit code is `EXIT_EMPTY` still
/// leaves its (header-only) outputs behind.
pub fn run(cfg: &mut RunConfig, out: &Path) -> Result<Summary, Failure> {
    match cfg {
        RunConfig::Symbol(s) => {
            let s = s.clone();
            symbol(cfg, &s, out)
        }
        RunConfig::Ball(b) => ball(b, out),
        RunConfig::Galerkin(r) => {
            let f = prepare_pencil(&r.galerkin, &mut r.lambda0)?;
            galerkin(r, &f, out)
        }
        RunConfig::Crossing(r) => {
            let f = prepare_pencil(&r.galerkin, &mut r.lambda0)?;
            crossing(r, &f, out)
        }
        RunConfig::Qep(r) => {
            let f = prepare_pencil(&r.galerkin, &mut r.lambda0)?;
            qep(r, &f, out)
        }
        RunConfig::Pack(r) => pack(r, out),
    }
}

fn echo_of<T: Serialize>(command: &str, body: &T) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), Value::String(command.into()));
    if let Value::Object(b) = serde_json::to_value(body).expect("config serializes") {
        m.extend(b);
    }
    Value::Object(m)
}

fn symbol(cfg: &RunConfig, s: &SymbolRun, out: &Path) -> Result<Summary, Failure> {
    let p = cfg.symbol()?;
    let report = classify_symbol(&p, &s.probe)?;
    let verdict = |v: Variant| match report.admissible_for(v) {
        Ok(()) => json!({ "admissible": true }),
        Err(e) => json!({ "admissible": false, "reason": e.to_string() }),
    };
    let mut w = Writer::new(out, cfg.echo())?;
    w.json(
        "symbol_report.json",
        json!({
            "symbol": p.to_json(),
            "display": p.to_string(),
            "report": report,
            "anchor_side": report.anchor_side(),
            "schrodinger": verdict(Variant::Schrodinger),
            "acoustic": verdict(Variant::Acoustic),
        }),
    )?;
    report.admissible_for(s.variant)?;
    Ok(Summary { command: "symbol", outputs: w.written, count: 1 })
}

fn ball(b: &BallRun, out: &Path) -> Result<Summary, Failure> {
    let problem = RadialProblem::new(b.kind, b.variant, b.eps, b.delta)?;
    let opts = RootOptions { step: b.grid_step, tolerance: b.tolerance };
    let mut roots = find_roots(&problem, (b.window[0], b.window[1]), &opts)?;
    // λ = 0 is a trivial acoustic eigenvalue
    roots.retain(|r| r.lambda != 0.0);
    let mut w = Writer::new(out, echo_of("ball", b))?;
    w.csv("roots.csv", RADIAL_HEADER, &radial_rows(&problem, &roots))?;
    finish("ball", w, roots.len(), "no roots in the window")
}

/// Assembles the forms, gates the operator symbol for the variant and fills in
/// the anchor when none was configured.
fn prepare_pencil(g: &GalerkinConfig, lambda0: &mut Option<f64>) -> Result<FormMatrices, Failure> {
    let report = classify_symbol(&g.operator.symbol(), &Default::default())?;
    report.admissible_for(g.variant)?;
    let f = assemble_forms(g)?;
    let l0 = match *lambda0 {
        Some(l) => l,
        None => coercive_anchor(&f, g.variant)?,
    };
    *lambda0 = Some(l0);
    Ok(f)
}

fn pencil_step(r: &PencilRun) -> f64 {
    r.grid_step.unwrap_or((r.lambda_max - r.lambda0.expect("anchor set")) / 1000.0)
}

fn materialize_step(r: &mut PencilRun) {
    r.grid_step = Some(pencil_step(r));
}

fn galerkin(r: &mut PencilRun, f: &FormMatrices, out: &Path) -> Result<Summary, Failure> {
    materialize_step(r);
    let l0 = r.lambda0.expect("anchor set");
    let series = min_eig_series(f, l0, r.lambda_max, pencil_step(r))?;
    let basis = build_basis(&r.galerkin)?;
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    let span = (r.lambda_max - l0).abs().max(1.0);
    let mut worst = 0.0f64;
    for _ in 0..FORM_PROBES {
        let u: Vec<f64> = (0..r.galerkin.basis_size).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lam = rng.random_range(l0 - span..r.lambda_max + span);
        let uv = DVector::from_column_slice(&u);
        let quad = |m: &nalgebra::DMatrix<f64>| (uv.transpose() * m * &uv)[0];
        let scale = quad(&f.a).abs() + lam.abs() * quad(&f.b).abs() + lam * lam * quad(&f.c).abs();
        let direct = direct_quadratic_form(&r.galerkin, &basis, &u, lam);
        worst = worst.max((quad(&f.t(lam)) - direct).abs() / scale);
    }
    let w_pencil = f.whitened()?;
    let mut w = Writer::new(out, echo_of("galerkin", r))?;
    w.csv("min_eig.csv", PLOT_HEADER, &plot_rows(&series))?;
    w.json(
        "galerkin.json",
        json!({
            "forms": f.summary(),
            "norm_a": f.norm_a(),
            "anchor": l0,
            "anchor_min_eig": w_pencil.min_eig(l0),
            "neg_count_at_lambda_max": neg_count(f, r.lambda_max)?,
            "quadratic_form_check": { "probes": FORM_PROBES, "seed": r.seed, "max_relative_error": worst },
        }),
    )?;
    Ok(Summary { command: "galerkin", outputs: w.written, count: series.len() })
}

fn crossing(r: &mut PencilRun, f: &FormMatrices, out: &Path) -> Result<Summary, Failure> {
    materialize_step(r);
    let l0 = r.lambda0.expect("anchor set");
    let step = pencil_step(r);
    let crossings = min_eig_path(f, l0, r.lambda_max, step)?;
    let series = min_eig_series(f, l0, r.lambda_max, step)?;
    let mut w = Writer::new(out, echo_of("crossing", r))?;
    w.csv("crossings.csv", GALERKIN_HEADER, &crossing_rows(&r.galerkin, &crossings))?;
    w.csv("min_eig.csv", PLOT_HEADER, &plot_rows(&series))?;
    finish("crossing", w, crossings.len(), "no crossings in the window")
}

fn qep(r: &QepRun, f: &FormMatrices, out: &Path) -> Result<Summary, Failure> {
    let l0 = r.lambda0.expect("anchor set");
    let res = qep_solve(f)?;
    let zero_tol = 1e-9 * r.lambda_max.abs().max(1.0);
    let real: Vec<_> = res
        .eigenvalues
        .iter()
        .filter(|e| e.is_real() && e.re > l0 && e.re <= r.lambda_max)
        .filter(|e| r.galerkin.variant != Variant::Acoustic || e.re.abs() > zero_tol)
        .copied()
        .collect();
    let mut w = Writer::new(out, echo_of("qep", r))?;
    w.csv("qep.csv", GALERKIN_HEADER, &qep_rows(&r.galerkin, &real))?;
    w.json(
        "qep.json",
        json!({
            "eigenvalues": res.eigenvalues,
            "filtered": res.filtered,
            "norm_a": res.norm_a,
            "conjugate_pairing_defect": res.conjugate_pairing_defect(),
        }),
    )?;
    finish("qep", w, real.len(), "no real eigenvalues in the window")
}

fn pack(r: &PackRun, out: &Path) -> Result<Summary, Failure> {
    let report = verify_ball_packing(&r.galerkin, r.p)?;
    let mut w = Writer::new(out, echo_of("pack", r))?;
    w.json("pack.json", serde_json::to_value(&report).expect("report serializes"))?;
    if report.max_relative_entry > PACKING_TOL {
        return Err(Failure {
            error: "numerical",
            exit_code: EXIT_NUMERICAL,
            message: format!("packing Gram entry {:.3e} exceeds {PACKING_TOL:e}", report.max_relative_entry),
            path: None,
        });
    }
    Ok(Summary { command: "pack", outputs: w.written, count: r.p })
}

fn finish(command: &'static str, w: Writer, count: usize, empty: &str) -> Result<Summary, Failure> {
    if count == 0 {
        return Err(Failure::empty(empty));
    }
    Ok(Summary { command, outputs: w.written, count })
}
