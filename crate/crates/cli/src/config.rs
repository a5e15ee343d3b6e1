//! Run configuration: one JSON document per run, strict schema, defaults materialized.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use tevl_core::galerkin::GalerkinConfig;
use tevl_core::radial::{default_step, Kind, RadialProblem};
use tevl_core::symbol::{ProbeConfig, SymbolJson};
use tevl_core::{PolySymbol, Variant};

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Symbol,
    Ball,
    Galerkin,
    Crossing,
    Qep,
    Pack,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Symbol => "symbol",
            Command::Ball => "ball",
            Command::Galerkin => "galerkin",
            Command::Crossing => "crossing",
            Command::Qep => "qep",
            Command::Pack => "pack",
        }
    }
}

fn default_seed() -> u64 {
    0
}

fn default_tolerance() -> f64 {
    1e-10
}

fn schrodinger() -> Variant {
    Variant::Schrodinger
}

fn acoustic() -> Variant {
    Variant::Acoustic
}

/// Either `symbol` (inline terms) or `symbol_text` (one `coeff α…` line per term).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolRun {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_text: Option<String>,
    /// Variant the symbol is gated for.
    #[serde(default = "schrodinger")]
    pub variant: Variant,
    #[serde(default)]
    pub probe: ProbeConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallRun {
    pub kind: Kind,
    #[serde(default = "acoustic")]
    pub variant: Variant,
    pub eps: f64,
    pub delta: f64,
    /// `λ` window for helmholtz and dirac_reduced, `k` window for biharmonic.
    pub window: [f64; 2],
    /// Grid step in the scan argument.
    #[serde(default)]
    pub grid_step: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

/// Shared by `galerkin` (min-eig series and form diagnostics) and `crossing`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilRun {
    pub galerkin: GalerkinConfig,
    /// Start of the path. Defaults to the coercive anchor.
    #[serde(default)]
    pub lambda0: Option<f64>,
    pub lambda_max: f64,
    /// Defaults to `(lambda_max - lambda0) / 1000`.
    #[serde(default)]
    pub grid_step: Option<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QepRun {
    pub galerkin: GalerkinConfig,
    /// Real eigenvalues are reported on `(lambda0, lambda_max]`. Defaults to the anchor.
    #[serde(default)]
    pub lambda0: Option<f64>,
    pub lambda_max: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackRun {
    pub galerkin: GalerkinConfig,
    pub p: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum RunConfig {
    Symbol(SymbolRun),
    Ball(BallRun),
    Galerkin(PencilRun),
    Crossing(PencilRun),
    Qep(QepRun),
    Pack(PackRun),
}

/// Command-line overrides applied on top of the document.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub grid_step: Option<f64>,
}

fn section<T: DeserializeOwned>(map: Map<String, Value>) -> Result<T, Failure> {
    serde_path_to_error::deserialize(Value::Object(map)).map_err(|e| {
        let path = e.path().to_string();
        Failure::schema(e.into_inner().to_string(), (path != ".").then_some(path))
    })
}

impl RunConfig {
    pub fn command(&self) -> Command {
        match self {
            RunConfig::Symbol(_) => Command::Symbol,
            RunConfig::Ball(_) => Command::Ball,
            RunConfig::Galerkin(_) => Command::Galerkin,
            RunConfig::Crossing(_) => Command::Crossing,
            RunConfig::Qep(_) => Command::Qep,
            RunConfig::Pack(_) => Command::Pack,
        }
    }

    /// Parses the document, checks its `command` against `expected` (if any),
    /// applies overrides and validates. Anchors are filled in later by the runner.
    pub fn parse(text: &str, expected: Option<Command>, overrides: Overrides) -> Result<Self, Failure> {
        let value: Value = serde_json::from_str(text).map_err(|e| Failure::schema(e.to_string(), None))?;
        let Value::Object(mut map) = value else {
            return Err(Failure::schema("configuration must be a JSON object", None));
        };
        let command = match map.remove("command") {
            None => expected.ok_or_else(|| Failure::schema("missing field `command`", Some("command".into())))?,
            Some(v) => serde_json::from_value::<Command>(v)
                .map_err(|e| Failure::schema(e.to_string(), Some("command".into())))?,
        };
        if let Some(exp) = expected {
            if exp != command {
                return Err(Failure::schema(
                    format!("config is for command `{}`, invoked as `{}`", command.name(), exp.name()),
                    Some("command".into()),
                ));
            }
        }
        let mut cfg = match command {
            Command::Symbol => RunConfig::Symbol(section(map)?),
            Command::Ball => RunConfig::Ball(section(map)?),
            Command::Galerkin => RunConfig::Galerkin(section(map)?),
            Command::Crossing => RunConfig::Crossing(section(map)?),
            Command::Qep => RunConfig::Qep(section(map)?),
            Command::Pack => RunConfig::Pack(section(map)?),
        };
        cfg.apply(overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: Overrides) -> Result<(), Failure> {
        let name = self.command().name();
        if let Some(t) = o.tolerance {
            match self {
                RunConfig::Ball(b) => b.tolerance = t,
                _ => return Err(Failure::schema(format!("--tolerance does not apply to `{name}` runs"), None)),
            }
        }
        if let Some(s) = o.grid_step {
            match self {
                RunConfig::Ball(b) => b.grid_step = Some(s),
                RunConfig::Galerkin(r) | RunConfig::Crossing(r) => r.grid_step = Some(s),
                _ => return Err(Failure::schema(format!("--grid-step does not apply to `{name}` runs"), None)),
            }
        }
        Ok(())
    }

    fn validate(&mut self) -> Result<(), Failure> {
        let positive = |x: f64, path: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Failure::schema(format!("must be positive and finite, got {x}"), Some(path.into())))
            }
        };
        match self {
            RunConfig::Symbol(s) => {
                if s.symbol.is_some() == s.symbol_text.is_some() {
                    return Err(Failure::schema("exactly one of `symbol` and `symbol_text` is required", None));
                }
                self.symbol()?;
            }
            RunConfig::Ball(b) => {
                let problem = RadialProblem::new(b.kind, b.variant, b.eps, b.delta).map_err(|e| {
                    let field = if !(b.eps > 0.0) {
                        "eps"
                    } else if !(b.delta > 0.0) {
                        "delta"
                    } else {
                        "variant"
                    };
                    Failure { path: Some(field.into()), ..Failure::from(e) }
                })?;
                positive(b.tolerance, "tolerance")?;
                let step = b.grid_step.unwrap_or_else(|| default_step(&problem));
                positive(step, "grid_step")?;
                b.grid_step = Some(step);
                if !(b.window[0] < b.window[1]) {
                    return Err(Failure::schema(
                        format!("window must be increasing, got {:?}", b.window),
                        Some("window".into()),
                    ));
                }
            }
            RunConfig::Galerkin(r) | RunConfig::Crossing(r) => {
                materialize(&mut r.galerkin)?;
                if let Some(s) = r.grid_step {
                    positive(s, "grid_step")?;
                }
                if !r.lambda_max.is_finite() {
                    return Err(Failure::schema("must be finite", Some("lambda_max".into())));
                }
            }
            RunConfig::Qep(r) => {
                materialize(&mut r.galerkin)?;
                if !r.lambda_max.is_finite() {
                    return Err(Failure::schema("must be finite", Some("lambda_max".into())));
                }
            }
            RunConfig::Pack(r) => {
                materialize(&mut r.galerkin)?;
                if r.p == 0 {
                    return Err(Failure::schema("must be at least 1", Some("p".into())));
                }
            }
        }
        Ok(())
    }

    pub fn symbol(&self) -> Result<PolySymbol, Failure> {
        let RunConfig::Symbol(s) = self else { unreachable!("symbol() on a non-symbol run") };
        let parsed = match (&s.symbol, &s.symbol_text) {
            (Some(j), _) => PolySymbol::from_json(j),
            (None, Some(t)) => PolySymbol::from_text(t),
            (None, None) => unreachable!("validated"),
        };
        parsed.map_err(|e| {
            let path = if s.symbol.is_some() { "symbol" } else { "symbol_text" };
            Failure::schema(e.to_string(), Some(path.into()))
        })
    }

    /// The effective configuration with every default filled in.
    pub fn echo(&self) -> Value {
        let body = match self {
            RunConfig::Symbol(s) => serde_json::to_value(s),
            RunConfig::Ball(b) => serde_json::to_value(b),
            RunConfig::Galerkin(r) | RunConfig::Crossing(r) => serde_json::to_value(r),
            RunConfig::Qep(r) => serde_json::to_value(r),
            RunConfig::Pack(r) => serde_json::to_value(r),
        }
        .expect("config serializes");
        let mut out = Map::new();
        out.insert("command".into(), Value::String(self.command().name().into()));
        if let Value::Object(m) = body {
            out.extend(m);
        }
        Value::Object(out)
    }
}

fn materialize(g: &mut GalerkinConfig) -> Result<(), Failure> {
    g.validate().map_err(|e| {
        let mut f = Failure::from(e);
        f.path = Some("galerkin".into());
        f
    })?;
    g.quadrature_nodes = Some(g.quadrature_nodes());
    Ok(())
}
