use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use cdwtunnel::fitting::{self, FreeParam, DEFAULT_GRID_POINTS, DEFAULT_WINDOW};
use cdwtunnel::potential::{topological_charge, FieldProfile};
use cdwtunnel::transport::{
    current_sge_with, current_zener, pair_separation, reference_displacement, validate_field_grid,
    SgeConvention,
};
use cdwtunnel::tunneling::{t_if_analytic, t_if_simplified, t_if_single_mode_oracle};
use cdwtunnel::verify::{self, CHECKS};
use cdwtunnel::wavefunctional::{
    kink_pair_profile, norm_constant, thin_wall_ft, KinkPairProfile, WavefunctionalSpec,
};
use cdwtunnel::{MatrixElementInputs, TransportParams};
use serde::Serialize;

use crate::args::{
    ConventionArg, CurveArgs, FitArgs, MatrixArgs, ProfileArgs, TransportFlags, VerifyArgs,
};
use crate::config::{default_field_grid, FileConfig, GridSpec, PartialGrid, Spacing};
use crate::error::{CliError, CliResult};
use crate::output::{emit_table, json_bytes, sidecar_path, write_atomic, Table};

fn transport(file: &FileConfig, flags: &TransportFlags) -> CliResult<TransportParams> {
    let mut tp = file.transport;
    flags.apply(&mut tp);
    tp.validate().map_err(CliError::config)?;
    Ok(tp)
}

fn required_output(flag: &Option<PathBuf>, file: &FileConfig) -> CliResult<PathBuf> {
    flag.clone().or_else(|| file.output.clone()).ok_or_else(|| {
        CliError::Config("no output path given (use --output or \"output\" in the config)".into())
    })
}

#[derive(Serialize)]
struct Sidecar<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    #[serde(flatten)]
    details: T,
}

fn write_sidecar<T: Serialize>(data_path: &Path, command: &str, details: T) -> CliResult<()> {
    let sidecar = Sidecar {
        command,
        version: env!("CARGO_PKG_VERSION"),
        details,
    };
    write_atomic(&sidecar_path(data_path), &json_bytes(&sidecar)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ModelChoice {
    Sge,
    Zener,
    Both,
}

fn parse_model(s: &str) -> CliResult<ModelChoice> {
    match s {
        "sge" => Ok(ModelChoice::Sge),
        "zener" => Ok(ModelChoice::Zener),
        "both" => Ok(ModelChoice::Both),
        other => Err(CliError::Config(format!(
            "unknown model '{other}' (expected sge, zener or both)"
        ))),
    }
}

pub fn curve(args: &CurveArgs) -> CliResult<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let tp = transport(&file, &args.transport)?;
    let model = parse_model(
        args.model
            .as_deref()
            .or(file.model.as_deref())
            .unwrap_or("both"),
    )?;
    let convention = match args.convention {
        Some(ConventionArg::AsPrinted) => SgeConvention::AsPrinted,
        Some(ConventionArg::BackSubstituted) => SgeConvention::BackSubstituted,
        None => file.convention.unwrap_or_default(),
    };
    let grid = file
        .grid
        .overlay(args.grid.partial())
        .resolve(default_field_grid(&tp))?;
    let fields = grid.points();
    validate_field_grid(&fields).map_err(CliError::config)?;
    let output = required_output(&args.common.output, &file)?;
    let format = args.common.format.or(file.format).unwrap_or_default();

    let columns: &[&str] = match model {
        ModelChoice::Sge => &["E", "I_sge"],
        ModelChoice::Zener => &["E", "I_zener"],
        ModelChoice::Both => &["E", "I_sge", "I_zener"],
    };
    let mut table = Table::new(columns);
    for &e in &fields {
        let mut row = vec![e];
        if model != ModelChoice::Zener {
            row.push(current_sge_with(e, &tp, convention)?);
        }
        if model != ModelChoice::Sge {
            row.push(current_zener(e, &tp)?);
        }
        table.push(row);
    }
    emit_table(&output, format, &table)?;

    #[derive(Serialize)]
    struct Details {
        model: &'static str,
        convention: SgeConvention,
        transport: TransportParams,
        grid: GridSpec,
        rows: usize,
    }
    let details = Details {
        model: match model {
            ModelChoice::Sge => "sge",
            ModelChoice::Zener => "zener",
            ModelChoice::Both => "both",
        },
        convention,
        transport: tp,
        grid,
        rows: table.rows.len(),
    };
    write_sidecar(&output, "curve", details)
}

/// Reads `(E, I)` pairs from the first two columns of a CSV file. A first
/// line with a non-numeric cell is taken as the header.
pub fn read_series(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut data = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let cell = |i: usize| -> Option<f64> { record.get(i).and_then(|c| c.parse().ok()) };
        match (cell(0), cell(1)) {
            (Some(e), Some(i)) => data.push((e, i)),
            _ if index == 0 => continue,
            _ => {
                return Err(CliError::Config(format!(
                    "{} line {line}: expected two numeric cells, got '{}'",
                    path.display(),
                    record.iter().collect::<Vec<_>>().join(",")
                )))
            }
        }
    }
    if data.is_empty() {
        return Err(CliError::Config(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(data)
}

#[derive(Serialize)]
struct FitReport {
    params: BTreeMap<&'static str, f64>,
    residual_rms: f64,
    iterations: usize,
    converged: bool,
}

pub fn fit(args: &FitArgs) -> CliResult<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let truth = transport(&file, &args.transport)?;
    let names = args
        .free
        .clone()
        .or_else(|| file.fit.free.clone())
        .unwrap_or_else(|| vec!["c_tilde1".into(), "c_v".into()]);
    let free = names
        .iter()
        .map(|n| n.parse::<FreeParam>().map_err(CliError::config))
        .collect::<CliResult<Vec<_>>>()?;
    let start = TransportParams {
        c_tilde1: args
            .start_c_tilde1
            .or(file.fit.start_c_tilde1)
            .unwrap_or(1.0),
        c_v: args.start_c_v.or(file.fit.start_c_v).unwrap_or(1.0),
        ..truth
    };
    start.validate().map_err(CliError::config)?;

    let window = GridSpec {
        lo: DEFAULT_WINDOW.0 * truth.e_t,
        hi: DEFAULT_WINDOW.1 * truth.e_t,
        n: DEFAULT_GRID_POINTS,
        spacing: Spacing::Linear,
    };
    let data_path = args.data.clone().or_else(|| file.fit.data.clone());
    let result = match data_path {
        Some(path) => {
            let data = read_series(&path)?;
            fitting::fit_sge_to_series(&data, &free, &start)?
        }
        None => {
            let grid = file
                .grid
                .overlay(args.grid.partial())
                .resolve(window)?
                .points();
            match args
                .target
                .as_deref()
                .or(file.fit.target.as_deref())
                .unwrap_or("zener")
            {
                "zener" => fitting::fit_sge_to_zener(&truth, &grid, &free, &start)?,
                "sge" => {
                    let data = grid
                        .iter()
                        .map(|&e| Ok((e, current_sge_with(e, &truth, SgeConvention::AsPrinted)?)))
                        .collect::<cdwtunnel::Result<Vec<_>>>()?;
                    fitting::fit_sge_to_series(&data, &free, &start)?
                }
                other => {
                    return Err(CliError::Config(format!(
                        "unknown fit target '{other}' (expected zener or sge)"
                    )))
                }
            }
        }
    };
    if !result.converged {
        eprintln!(
            "warning: fit did not converge after {} iterations",
            result.iterations
        );
    }
    let report = FitReport {
        params: free
            .iter()
            .map(|p| p.name())
            .zip(result.params.iter().copied())
            .collect(),
        residual_rms: result.residual_rms,
        iterations: result.iterations,
        converged: result.converged,
    };
    let bytes = json_bytes(&report)?;
    match args.common.output.clone().or_else(|| file.output.clone()) {
        Some(path) => write_atomic(&path, &bytes),
        None => {
            print!("{}", String::from_utf8_lossy(&bytes));
            Ok(())
        }
    }
}

pub fn profile(args: &ProfileArgs) -> CliResult<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let l = args.l.or(file.kink.l).unwrap_or(10.0);
    let b = args.b.or(file.kink.b).unwrap_or(1.0);
    let center = args.center.or(file.kink.center).unwrap_or(0.0);
    let kp =
        KinkPairProfile::new(center - 0.5 * l, center + 0.5 * l, b).map_err(CliError::config)?;
    let reach = 0.5 * l + 10.0 / b;
    let grid = file.grid.overlay(args.grid.partial()).resolve(GridSpec {
        lo: center - reach,
        hi: center + reach,
        n: 401,
        spacing: Spacing::Linear,
    })?;
    let k_flags = PartialGrid {
        lo: args.k_lo,
        hi: args.k_hi,
        n: args.k_n,
        spacing: args.k_spacing,
    };
    let k_partial = file.k_grid.overlay(k_flags);
    let k_grid = if k_partial.is_empty() {
        None
    } else {
        Some(k_partial.resolve(GridSpec {
            lo: 0.01,
            hi: 20.0,
            n: 200,
            spacing: Spacing::Linear,
        })?)
    };
    let output = required_output(&args.common.output, &file)?;
    let format = args.common.format.or(file.format).unwrap_or_default();

    let xs = grid.points();
    let phis: Vec<f64> = xs.iter().map(|&x| kink_pair_profile(x, &kp)).collect();
    let mut table = Table::new(&["x", "phi"]);
    for (&x, &phi) in xs.iter().zip(&phis) {
        table.push(vec![x, phi]);
    }
    let charge = topological_charge(&FieldProfile::new(xs, phis)?);

    let mut k_output = None;
    if let Some(k_grid) = k_grid {
        let path = args
            .k_output
            .clone()
            .or_else(|| file.k_output.clone())
            .unwrap_or_else(|| {
                let mut s = output.as_os_str().to_owned();
                s.push(".k.csv");
                PathBuf::from(s)
            });
        let mut k_table = Table::new(&["k", "phi_k"]);
        for k in k_grid.points() {
            k_table.push(vec![k, thin_wall_ft(k, l)]);
        }
        emit_table(&path, format, &k_table)?;
        k_output = Some((path, k_grid));
    }
    emit_table(&output, format, &table)?;

    #[derive(Serialize)]
    struct Details {
        topological_charge: f64,
        x_a: f64,
        x_b: f64,
        b: f64,
        l: f64,
        grid: GridSpec,
        k_grid: Option<GridSpec>,
        k_output: Option<PathBuf>,
    }
    let details = Details {
        topological_charge: charge,
        x_a: kp.x_a,
        x_b: kp.x_b,
        b,
        l,
        grid,
        k_grid: k_output.as_ref().map(|k| k.1),
        k_output: k_output.map(|k| k.0),
    };
    write_sidecar(&output, "profile", details)
}

/// Oracle matrix element for Gaussians `separation` apart, width `1 / L`.
fn oracle(inputs: &MatrixElementInputs, separation: f64) -> cdwtunnel::Result<f64> {
    let i = WavefunctionalSpec::normalized(inputs.alpha, 0.0, inputs.l)?;
    let f = WavefunctionalSpec::normalized(inputs.alpha, separation, inputs.l)?;
    t_if_single_mode_oracle(&i, &f, None, inputs.m_star)
}

pub fn matrix_element(args: &MatrixArgs) -> CliResult<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let tp = transport(&file, &args.transport)?;
    let axis = args
        .axis
        .clone()
        .or_else(|| file.matrix.axis.clone())
        .unwrap_or_else(|| "l".into());
    let separation = args.separation.or(file.matrix.separation).unwrap_or(TAU);
    let n1 = args.n1.or(file.matrix.n1).unwrap_or(1.0);
    let m_star = args.m_star.or(file.matrix.m_star).unwrap_or(1.0);
    if !(separation > 0.0 && separation.is_finite()) {
        return Err(CliError::Config(format!(
            "separation must be positive, got {separation}"
        )));
    }
    let partial = file.grid.overlay(args.grid.partial());
    let output = required_output(&args.common.output, &file)?;
    let format = args.common.format.or(file.format).unwrap_or_default();

    let (grid, table) = match axis.as_str() {
        "l" => {
            let grid = partial.resolve(GridSpec {
                lo: 1.6,
                hi: 10.0,
                n: 20,
                spacing: Spacing::Log,
            })?;
            if grid.lo <= 0.0 {
                return Err(CliError::Config(
                    "pair separation grid must be positive".into(),
                ));
            }
            let mut table = Table::new(&["L", "t_analytic", "t_simplified", "t_oracle"]);
            for l in grid.points() {
                let base = MatrixElementInputs::matched(l, separation)?;
                let inputs = MatrixElementInputs { n1, m_star, ..base };
                inputs.validate().map_err(CliError::config)?;
                table.push(vec![
                    l,
                    t_if_analytic(&inputs)?,
                    t_if_simplified(&inputs)?,
                    oracle(&inputs, separation)?,
                ]);
            }
            (grid, table)
        }
        "e" => {
            let grid = partial.resolve(default_field_grid(&tp))?;
            if grid.lo <= 0.0 {
                return Err(CliError::Config("field grid must be positive".into()));
            }
            let mut table =
                Table::new(&["E", "L", "x_bar", "t_analytic", "t_simplified", "t_oracle"]);
            for e in grid.points() {
                let l = pair_separation(e, &tp)?;
                let x_bar = reference_displacement(e, &tp)?;
                let alpha = 1.0 / l;
                let c = norm_constant(alpha, l)?;
                let inputs = MatrixElementInputs {
                    x_bar,
                    l,
                    alpha,
                    n1,
                    c1_norm: c,
                    c2_norm: c,
                    m_star,
                };
                inputs.validate().map_err(CliError::config)?;
                table.push(vec![
                    e,
                    l,
                    x_bar,
                    t_if_analytic(&inputs)?,
                    t_if_simplified(&inputs)?,
                    oracle(&inputs, l / x_bar.sqrt())?,
                ]);
            }
            (grid, table)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown axis '{other}' (expected l or e)"
            )))
        }
    };
    emit_table(&output, format, &table)?;

    #[derive(Serialize)]
    struct Details {
        axis: String,
        separation: Option<f64>,
        n1: f64,
        m_star: f64,
        transport: Option<TransportParams>,
        grid: GridSpec,
    }
    let on_l = axis == "l";
    let details = Details {
        separation: on_l.then_some(separation),
        transport: (!on_l).then_some(tp),
        axis,
        n1,
        m_star,
        grid,
    };
    write_sidecar(&output, "matrix-element", details)
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let file = FileConfig::load(args.config.as_deref())?;
    let mut tols = file.verify.tol.clone();
    for spec in &args.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--tol expects NAME=VALUE, got '{spec}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--tol {name}: '{value}' is not a number")))?;
        tols.insert(name.trim().to_owned(), value);
    }
    for name in tols.keys() {
        verify::find_check(name).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let mut only: Vec<&str> = file.verify.only.iter().map(String::as_str).collect();
    only.extend(args.only.iter().map(String::as_str));
    for name in &only {
        verify::find_check(name).map_err(|e| CliError::Usage(e.to_string()))?;
    }

    let mut failed = 0;
    let mut total = 0;
    for check in CHECKS
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.name))
    {
        let tol = tols.get(check.name).copied().unwrap_or(check.default_tol);
        let outcome = verify::run_check(check, tol);
        total += 1;
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{} {:<20} measured={:.3e} tol={:.1e}  {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.name,
            outcome.measured,
            tol,
            check.description
        );
    }
    if failed > 0 {
        return Err(CliError::Verify { failed, total });
    }
    Ok(())
}
