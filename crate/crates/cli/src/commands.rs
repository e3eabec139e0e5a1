use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use qwalk_core::continuum::{self, SemicircleDensity};
use qwalk_core::ensemble::{self, EnsembleConfig, ScanConfig};
use qwalk_core::figures::{self, FigureId};
use qwalk_core::io::{self, OutputSet, Table};
use qwalk_core::spectral::{self, DEGENERACY_REL_TOL};
use qwalk_core::transport::{self, GridSpec, ScalarSeries, SeriesKind, TimeGrid};
use qwalk_core::{Graph, GraphModel};

use crate::args::*;
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub struct Context {
    pub verbose: u8,
}

impl Context {
    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }
}

pub fn run(command: Command, ctx: &Context) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a, ctx),
        Command::Spectrum(a) => spectrum(a, ctx),
        Command::Evolve(a) => evolve(a, ctx),
        Command::Longtime(a) => longtime(a),
        Command::Ensemble(a) => ensemble_cmd(a, ctx),
        Command::Scan(s) => {
            let (cfg, out) = scan_config(&s);
            scan(cfg, out, ctx)
        }
        Command::Continuum(a) => continuum_cmd(a, ctx),
        Command::Fit(a) => fit(a),
        Command::Figure(a) => figure(a, ctx),
        Command::Replay(a) => replay(a, ctx),
    }
}

fn model_fields(tag: &str) -> &'static [&'static str] {
    match tag {
        "er" => &["n", "p"],
        "config" => &["n", "k"],
        "complete-minus-m" => &["n", "m"],
        _ => &["n"],
    }
}

/// Applies model flags on top of `base` (a model object, or null).
fn merge_model(base: Option<Value>, flags: &ModelArgs) -> Result<Value> {
    let mut model = match (flags.model, base) {
        (Some(name), Some(Value::Object(old)))
            if old.get("model").and_then(Value::as_str) == Some(name.tag()) =>
        {
            old
        }
        (Some(name), _) => {
            let mut m = Map::new();
            m.insert("model".into(), json!(name.tag()));
            m
        }
        (None, Some(Value::Object(old))) => old,
        (None, _) => return Err(CliError::usage("no graph model given: pass --model")),
    };
    let tag = model
        .get("model")
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_string();
    let allowed = model_fields(&tag);
    let given: [(&str, Option<Value>); 4] = [
        ("n", flags.n.map(|v| json!(v))),
        ("p", flags.p.map(|v| json!(v))),
        ("k", flags.k.map(|v| json!(v))),
        ("m", flags.m.map(|v| json!(v))),
    ];
    for (name, value) in given {
        if let Some(v) = value {
            if !allowed.contains(&name) {
                return Err(CliError::usage(format!(
                    "--{name} does not apply to model `{tag}`"
                )));
            }
            model.insert(name.into(), v);
        }
    }
    for &name in allowed {
        if !model.contains_key(name) {
            return Err(CliError::usage(format!("model `{tag}` needs --{name}")));
        }
    }
    Ok(Value::Object(model))
}

fn model_from_flags(flags: &ModelArgs) -> Result<GraphModel> {
    let v = merge_model(None, flags)?;
    let model: GraphModel =
        serde_json::from_value(v).map_err(|e| CliError::usage(e.to_string()))?;
    model.validate()?;
    Ok(model)
}

fn grid_defaults(kind: GridKind) -> GridSpec {
    match kind {
        GridKind::Lin => GridSpec::PLATEAU,
        GridKind::Log => GridSpec::POWER_LAW,
    }
}

/// Applies grid flags on top of `base`. `--grid` starts from that kind's
/// defaults; other flags must belong to the resulting spacing.
fn merge_grid(base: Option<Value>, flags: &GridArgs) -> Result<Value> {
    let mut grid = match (flags.grid, base) {
        (Some(kind), _) => serde_json::to_value(grid_defaults(kind)).expect("grid serializes"),
        (None, Some(v)) => v,
        (None, None) => serde_json::to_value(GridSpec::PLATEAU).expect("grid serializes"),
    };
    let obj = grid
        .as_object_mut()
        .ok_or_else(|| CliError::usage("grid must be a JSON object"))?;
    let given: [(&str, Option<Value>); 4] = [
        ("tmax", flags.tmax.map(|v| json!(v))),
        ("step", flags.step.map(|v| json!(v))),
        ("tmin", flags.tmin.map(|v| json!(v))),
        ("points", flags.points.map(|v| json!(v))),
    ];
    for (name, value) in given {
        if let Some(v) = value {
            if !obj.contains_key(name) {
                let spacing = obj.get("spacing").and_then(Value::as_str).unwrap_or("?");
                return Err(CliError::usage(format!(
                    "--{name} does not apply to a {spacing} grid"
                )));
            }
            obj.insert(name.into(), v);
        }
    }
    Ok(grid)
}

fn grid_from_flags(flags: &GridArgs, default: GridKind) -> Result<TimeGrid> {
    if flags.tmax.is_none() {
        return Err(CliError::usage("--tmax is required"));
    }
    let mut flags = flags.clone();
    flags.grid.get_or_insert(default);
    let spec: GridSpec = serde_json::from_value(merge_grid(None, &flags)?)
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(spec.build()?)
}

fn read_graph(path: &Path) -> Result<Graph> {
    Ok(Graph::parse_edge_list(
        &fs::read_to_string(path).map_err(|e| CliError::io(path, e))?,
    )?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    io::write_atomic(path, contents).map_err(|e| CliError::from_core_at(path, e))
}

fn commit(set: &OutputSet, dir: &Path, ctx: &Context) -> Result<()> {
    let paths = set
        .commit(dir)
        .map_err(|e| CliError::from_core_at(dir, e))?;
    for p in paths {
        ctx.note(format!("wrote {}", p.display()));
    }
    Ok(())
}

fn gen(a: GenArgs, ctx: &Context) -> Result<()> {
    let model = model_from_flags(&a.model)?;
    let policy = if a.model.require_connected {
        qwalk_core::ConnectivityPolicy::RequireConnected
    } else {
        qwalk_core::ConnectivityPolicy::None
    };
    let sampled = model.sample(a.seed, policy)?;
    ctx.note(format!(
        "{} graph: {} nodes, {} edges, {} resamples",
        model.name(),
        sampled.graph.node_count(),
        sampled.graph.edge_count(),
        sampled.resamples
    ));
    write_file(&a.output, &sampled.graph.to_edge_list())
}

fn spectrum(a: SpectrumArgs, ctx: &Context) -> Result<()> {
    let g = read_graph(&a.input)?;
    let s = spectral::eigendecompose(&spectral::laplacian(&g))?;
    let values = io::spectrum_csv(&s);
    // Render both files before writing either.
    let vectors = a.vectors.as_ref().map(|_| io::vectors_csv(&s));
    write_file(&a.output, &values)?;
    if let (Some(path), Some(text)) = (&a.vectors, vectors) {
        write_file(path, &text)?;
    }
    ctx.note(format!("{} eigenvalues", s.dim()));
    Ok(())
}

fn evolve(a: EvolveArgs, ctx: &Context) -> Result<()> {
    let grid = grid_from_flags(&a.grid, GridKind::Lin)?;
    let g = read_graph(&a.input)?;
    let s = spectral::eigendecompose(&spectral::laplacian(&g))?;
    let text = if a.full_matrix {
        match a.kind {
            EvolveKind::Classical => {
                io::matrix_series_csv(&transport::classical_transition(&s, &grid))
            }
            EvolveKind::Quantum => io::matrix_series_csv(&transport::quantum_transition(&s, &grid)),
            EvolveKind::Bound => {
                return Err(CliError::usage(
                    "--full-matrix does not apply to --kind bound",
                ));
            }
        }
    } else {
        let series = match a.kind {
            EvolveKind::Classical => transport::avg_return_classical(&s, &grid),
            EvolveKind::Quantum => transport::avg_return_quantum(&s, &grid),
            EvolveKind::Bound => transport::avg_amplitude_bound(&s, &grid),
        };
        io::scalar_series_csv(&series)
    };
    ctx.note(format!("{} time points", grid.len()));
    write_file(&a.output, &text)
}

fn longtime(a: LongtimeArgs) -> Result<()> {
    let rel = a.degeneracy_tol.unwrap_or(DEGENERACY_REL_TOL);
    if !(rel > 0.0 && rel.is_finite()) {
        return Err(CliError::usage(format!(
            "--degeneracy-tol must be positive, got {rel}"
        )));
    }
    let g = read_graph(&a.input)?;
    let s = spectral::eigendecompose(&spectral::laplacian(&g))?;
    let tol = rel * s.eigenvalues().last().copied().unwrap_or(0.0).max(1.0);
    let lt = transport::long_time_average(&s.with_degeneracy_tol(tol));
    write_file(&a.output, &io::chi_csv(&lt.chi))?;
    println!("chi_bar={}", io::format_float(lt.chi_bar));
    Ok(())
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// A run configuration, or the `config` of a manifest written by `command`.
fn config_body(v: Value, command: &str) -> Result<Value> {
    match v.get("command").and_then(Value::as_str) {
        None => Ok(v),
        Some(c) if c == command => v
            .get("config")
            .cloned()
            .ok_or_else(|| CliError::usage("manifest has no `config` field")),
        Some(c) => Err(CliError::usage(format!(
            "manifest was written by `{c}`, not `{command}`"
        ))),
    }
}

fn ensemble_config(a: &EnsembleArgs) -> Result<EnsembleConfig> {
    let mut v = match &a.config {
        Some(path) => config_body(read_json(path)?, "ensemble")?,
        None => json!({}),
    };
    let obj = v
        .as_object_mut()
        .ok_or_else(|| CliError::usage("ensemble config must be a JSON object"))?;
    let model = merge_model(obj.remove("model"), &a.model)?;
    obj.insert("model".into(), model);
    let grid_given = a.grid.grid.is_some()
        || a.grid.tmax.is_some()
        || a.grid.step.is_some()
        || a.grid.tmin.is_some()
        || a.grid.points.is_some();
    if grid_given {
        let grid = merge_grid(obj.remove("grid"), &a.grid)?;
        obj.insert("grid".into(), grid);
    }
    if a.model.require_connected {
        obj.insert("connectivity".into(), json!("require-connected"));
    }
    if let Some(seed) = a.seed {
        obj.insert("seed".into(), json!(seed));
    }
    if !obj.contains_key("seed") {
        obj.insert("seed".into(), json!(0));
    }
    if let Some(r) = a.realizations {
        obj.insert("realizations".into(), json!(r));
    }
    if let Some(t) = a.degeneracy_tol {
        obj.insert("degeneracy_tol".into(), json!(t));
    }
    if let Some(b) = a.bins {
        let h = obj.entry("histogram").or_insert_with(|| {
            serde_json::to_value(ensemble::HistogramSpec::default()).expect("serializes")
        });
        h.as_object_mut()
            .ok_or_else(|| CliError::usage("histogram must be a JSON object"))?
            .insert("bins".into(), json!(b));
    }
    let cfg: EnsembleConfig =
        serde_json::from_value(v).map_err(|e| CliError::usage(format!("config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

fn run_ensemble_into(cfg: &EnsembleConfig, out: &Path, ctx: &Context) -> Result<()> {
    ctx.note(format!(
        "{} realizations of {}",
        cfg.realizations,
        cfg.model.name()
    ));
    let result = ensemble::run_ensemble(cfg)?;
    let (plateau, std) = result.quantum_plateau();
    println!(
        "mean_chi_bar={} plateau={} plateau_std={}",
        io::format_float(result.mean_chi_bar),
        io::format_float(plateau),
        io::format_float(std)
    );
    commit(&io::ensemble_outputs(cfg, &result)?, out, ctx)
}

fn ensemble_cmd(a: EnsembleArgs, ctx: &Context) -> Result<()> {
    let cfg = ensemble_config(&a)?;
    run_ensemble_into(&cfg, &a.output, ctx)
}

fn scan_config(cmd: &ScanCommand) -> (ScanConfig, &Path) {
    match cmd {
        ScanCommand::Degree(a) => (
            ScanConfig::Degree {
                n: a.n,
                degrees: a.degrees.clone(),
                realizations: a.realizations,
                seed: a.seed,
            },
            &a.output,
        ),
        ScanCommand::Size(a) => (
            ScanConfig::Size {
                sizes: a.sizes.clone(),
                degree: a.degree,
                realizations: a.realizations,
                seed: a.seed,
                window: a.window,
            },
            &a.output,
        ),
        ScanCommand::EdgeRemoval(a) => (
            ScanConfig::EdgeRemoval {
                n: a.n,
                m_values: a.m_values.clone(),
                realizations: a.realizations,
                seed: a.seed,
                window: a.window,
            },
            &a.output,
        ),
    }
}

fn scan(cfg: ScanConfig, out: &Path, ctx: &Context) -> Result<()> {
    let mut set = OutputSet::new();
    let manifest = match cfg {
        ScanConfig::Degree {
            n,
            degrees,
            realizations,
            seed,
        } => {
            let s = ensemble::scan_chi_vs_degree(n, &degrees, realizations, seed)?;
            set.add("scan.csv", io::degree_scan_csv(&s));
            s.manifest
        }
        ScanConfig::Size {
            sizes,
            degree,
            realizations,
            seed,
            window,
        } => {
            let s = ensemble::scan_chi_vs_size(&sizes, degree, realizations, seed, window)?;
            set.add("scan.csv", io::size_scan_csv(&s));
            set.add(
                "fit.json",
                io::to_json(
                    &json!({ "window": s.window, "er": s.er_fit, "config": s.config_fit }),
                )?,
            );
            println!(
                "er_slope={} config_slope={}",
                io::format_float(s.er_fit.slope),
                io::format_float(s.config_fit.slope)
            );
            s.manifest
        }
        ScanConfig::EdgeRemoval {
            n,
            m_values,
            realizations,
            seed,
            window,
        } => {
            let s = ensemble::edge_removal_scan(n, &m_values, realizations, seed, window)?;
            set.add("scan.csv", io::edge_removal_csv(&s));
            set.add("fit.json", io::to_json(&s.fit)?);
            println!("beta={}", io::format_float(s.fit.beta));
            s.manifest
        }
    };
    set.add("manifest.json", io::to_json(&manifest)?);
    commit(&set, out, ctx)
}

fn continuum_cmd(a: ContinuumArgs, ctx: &Context) -> Result<()> {
    let grid = grid_from_flags(&a.grid, GridKind::Log)?;
    let density = SemicircleDensity::sparse(a.kbar)?;
    let series = match a.kind {
        ContinuumKind::Classical => continuum::continuum_classical(&density, &grid)?,
        ContinuumKind::Amplitude => continuum::continuum_amplitude(&density, &grid)?,
    };
    ctx.note(format!(
        "{} time points, sigma={}",
        grid.len(),
        density.sigma
    ));
    write_file(&a.output, &io::scalar_series_csv(&series))
}

fn fit(a: FitArgs) -> Result<()> {
    let text = fs::read_to_string(&a.input).map_err(|e| CliError::io(&a.input, e))?;
    let table = Table::parse(&text)?;
    let mut points = table.series(a.column.as_deref())?;
    if a.maxima {
        let (ts, values): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
        let series = ScalarSeries {
            grid: TimeGrid::from_points(ts)?,
            kind: SeriesKind::Quantum,
            values,
        };
        points = continuum::extract_local_maxima(&series, None)?;
    }
    let f = continuum::fit_power_law(&points, a.window)?;
    let column = a
        .column
        .clone()
        .unwrap_or_else(|| table.header.get(1).cloned().unwrap_or_default());
    let doc = json!({
        "exponent": f.exponent,
        "prefactor": f.prefactor,
        "residual": f.residual,
        "window": f.window,
        "points": f.points,
        "column": column,
        "maxima": a.maxima,
    });
    write_file(&a.output, &io::to_json(&doc)?)?;
    println!("exponent={}", io::format_float(f.exponent));
    Ok(())
}

fn figure_into(id: FigureId, seed: u64, out: &Path, ctx: &Context) -> Result<()> {
    ctx.note(format!("reproducing {id}"));
    let set = figures::reproduce_figure(id, seed)?;
    commit(&set, out, ctx)
}

fn figure(a: FigureArgs, ctx: &Context) -> Result<()> {
    let id: FigureId = a.figure.parse()?;
    figure_into(id, a.seed, &a.output, ctx)
}

fn replay(a: ReplayArgs, ctx: &Context) -> Result<()> {
    let v = read_json(&a.manifest)?;
    let command = v
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::usage("not a manifest: no `command` field"))?
        .to_string();
    let config = config_body(v, &command)?;
    let bad = |e: serde_json::Error| CliError::usage(format!("manifest config: {e}"));
    match command.as_str() {
        "ensemble" => {
            let cfg: EnsembleConfig = serde_json::from_value(config).map_err(bad)?;
            cfg.validate()?;
            run_ensemble_into(&cfg, &a.output, ctx)
        }
        "scan" => scan(serde_json::from_value(config).map_err(bad)?, &a.output, ctx),
        "figure" => {
            let id: FigureId = config
                .get("figure")
                .and_then(Value::as_str)
                .ok_or_else(|| CliError::usage("manifest config has no figure id"))?
                .parse()?;
            let seed = config
                .get("seed")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::usage("manifest config has no seed"))?;
            figure_into(id, seed, &a.output, ctx)
        }
        other => Err(CliError::usage(format!(
            "cannot replay a `{other}` manifest"
        ))),
    }
}
