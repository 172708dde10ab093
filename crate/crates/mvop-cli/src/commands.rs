use crate::config::WeightConfig;
use crate::output::{mat_columns, mat_json, mat_values, Format, Report, Table};
use crate::CliError;
use mvop::asymptotics::{self, compare, detgrid, EDGE_X, INNER_X, OUTER_Z};
use mvop::direct::{compute_family_with, DirectOptions};
use mvop::equilibrium::EquilibriumData;
use mvop::linalg::CMat;
use mvop::szego::spectral_factorize;
use serde_json::{json, Map, Value};

const SZEGO_SAMPLES: usize = 256;

/// Smallest leading principal minor of a Hermitian matrix; positive iff PD.
fn min_leading_minor(m: &CMat<f64>) -> f64 {
    (1..=m.n()).map(|k| CMat::from_fn(k, |i, j| m[(i, j)]).det().re).fold(f64::INFINITY, f64::min)
}

pub fn szego(cfg: &WeightConfig, tol: Option<f64>) -> Result<(Report, bool), CliError> {
    let tol = tol.unwrap_or(1e-10);
    let f = spectral_factorize(&cfg.nilpotent())?;
    let circle = f.circle_residual(SZEGO_SAMPLES);
    let det = f.det_defect(SZEGO_SAMPLES);
    let herm = f.d_infinity.hermitian_defect();
    let minor = min_leading_minor(&f.d_infinity);
    let scale = f.d_infinity.norm_fro().max(1.0).powi(2);
    let checks = [
        ("circle_residual", circle <= tol * scale),
        ("det_defect", det <= tol * scale),
        ("negative_powers", f.dropped_residual <= tol * scale),
        ("d_infinity_hermitian", herm <= tol),
        ("d_infinity_positive", minor > 0.0),
    ];
    let ok = checks.iter().all(|c| c.1);
    for (name, pass) in &checks {
        if !pass {
            log::warn!("szego invariant failed: {name}");
        }
    }
    let mut coeffs = Map::new();
    for (k, m) in f.g.terms() {
        coeffs.insert(k.to_string(), mat_json(m));
    }
    let json = json!({
        "r": cfg.r,
        "alpha": cfg.alpha,
        "coefficients": coeffs,
        "D_infinity": mat_json(&f.d_infinity),
        "unitary_log": f.unitary_log.iter().map(mat_json).collect::<Vec<_>>(),
        "unitary_product": mat_json(&f.unitary_product()),
        "residuals": {
            "circle": circle,
            "det": det,
            "negative_powers": f.dropped_residual,
            "d_infinity_hermitian": herm,
            "d_infinity_min_leading_minor": minor,
        },
        "checks": checks.iter().map(|(n, p)| (n.to_string(), Value::Bool(*p))).collect::<Map<_, _>>(),
        "ok": ok,
    });
    Ok((Report { json, table: None, default_format: Format::Json }, ok))
}

/// Short human summary for stdout when the factorization goes to a file.
pub fn szego_summary(report: &Report) -> String {
    let j = &report.json;
    let mut s = format!(
        "circle residual {:e}\ndet defect {:e}\nnegative powers {:e}\nD(inf):\n",
        j["residuals"]["circle"].as_f64().unwrap_or(f64::NAN),
        j["residuals"]["det"].as_f64().unwrap_or(f64::NAN),
        j["residuals"]["negative_powers"].as_f64().unwrap_or(f64::NAN),
    );
    if let Some(rows) = j["D_infinity"].as_array() {
        for row in rows {
            let cells: Vec<String> = row
                .as_array()
                .into_iter()
                .flatten()
                .map(|z| format!("{}{:+}i", z[0].as_f64().unwrap_or(f64::NAN), z[1].as_f64().unwrap_or(f64::NAN)))
                .collect();
            s.push_str(&format!("  {}\n", cells.join("  ")));
        }
    }
    s.push_str(if j["ok"].as_bool() == Some(true) { "invariants ok\n" } else { "invariants FAILED\n" });
    s
}

pub fn equilibrium(cfg: &WeightConfig, tol: Option<f64>) -> Result<Report, CliError> {
    let eq = EquilibriumData::new(&cfg.potential()?, tol.unwrap_or(1e-13))?;
    let s = &eq.support;
    let json = json!({
        "a": s.a,
        "b": s.b,
        "c": s.c,
        "d": s.d,
        "h_coeffs": eq.h,
        "ell": eq.ell,
        "residuals": eq.mrs_residuals,
        "ell_consistency": eq.ell_consistency,
        "total_mass": eq.total_mass(),
    });
    let mut row = vec![s.a, s.b, s.c, s.d, eq.ell];
    row.extend(eq.mrs_residuals);
    let table = Table {
        header: ["a", "b", "c", "d", "ell", "residual_0", "residual_1"].map(String::from).to_vec(),
        rows: vec![row],
    };
    Ok(Report { json, table: Some(table), default_format: Format::Json })
}

pub fn direct(cfg: &WeightConfig, n: f64, n_max: usize, opts: &DirectOptions) -> Result<Report, CliError> {
    if !(n.is_finite() && n > 0.0) {
        return Err(CliError::Validation("--N must be positive".into()));
    }
    let fam = compute_family_with(&cfg.weight()?, n, n_max, opts)?;
    if fam.log_scale != 0.0 {
        log::warn!("norms carry a scale factor e^{}; H columns may overflow", fam.log_scale);
    }
    let r = fam.r;
    let mut header = vec!["n".to_string()];
    header.extend(mat_columns("B", r));
    header.extend(mat_columns("C", r));
    header.extend(mat_columns("H", r));
    header.push("orth_residual".into());
    let mut rows = Vec::with_capacity(n_max);
    let mut items = Vec::with_capacity(n_max);
    for k in 0..n_max {
        let h = fam.h_true(k)?;
        let mut row = vec![k as f64];
        mat_values(&fam.b[k], &mut row);
        mat_values(&fam.c[k], &mut row);
        mat_values(&h, &mut row);
        row.push(fam.orth_residual[k]);
        rows.push(row);
        items.push(json!({
            "n": k,
            "B": mat_json(&fam.b[k]),
            "C": mat_json(&fam.c[k]),
            "H": mat_json(&h),
            "orth_residual": fam.orth_residual[k],
        }));
    }
    let json = json!({ "N": n, "nmax": n_max, "r": r, "log_scale": fam.log_scale, "rows": items });
    Ok(Report { json, table: Some(Table { header, rows }), default_format: Format::Csv })
}

pub fn compare_cmd(
    cfg: &WeightConfig,
    n_list: &[usize],
    n_max: Option<usize>,
    tol: Option<f64>,
    opts: &DirectOptions,
) -> Result<Report, CliError> {
    if n_list.is_empty() {
        return Err(CliError::Validation("--N-list is empty".into()));
    }
    let rep = compare(&cfg.weight()?, n_list, n_max, true, tol.unwrap_or(1e-13), opts)?;
    let header: Vec<String> =
        ["N", "b_err", "c_err_leading", "c_err", "h_err_leading", "h_err", "outer_err", "inner_err", "edge_err"]
            .map(String::from)
            .to_vec();
    let rows: Vec<Vec<f64>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n as f64,
                r.b_err,
                r.c_err_leading,
                r.c_err,
                r.h_err_leading,
                r.h_err,
                r.outer_err,
                r.inner_err,
                r.edge_err.unwrap_or(f64::NAN),
            ]
        })
        .collect();
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj: Map<String, Value> = header.iter().cloned().zip(row.iter().map(|&v| json!(v))).collect();
            obj.insert("N".into(), json!(row[0] as usize));
            Value::Object(obj)
        })
        .collect();
    let slopes: Map<String, Value> = rep.slopes.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let json = json!({
        "N_list": n_list,
        "nmax": n_max.map_or(json!("auto"), |k| json!(k)),
        "points": { "outer_z": OUTER_Z, "inner_x": INNER_X, "edge_x": EDGE_X },
        "rows": json_rows,
        "slopes": slopes,
    });
    Ok(Report { json, table: Some(Table { header, rows }), default_format: Format::Json })
}

/// Effective subdiagonal: given directly, or `c·alpha` from a Hermite-type config.
pub fn detgrid_alpha(cfg: Option<&WeightConfig>, alpha: Option<&[f64]>) -> Result<Vec<f64>, CliError> {
    match (cfg, alpha) {
        (_, Some(a)) => {
            if a.is_empty() || a.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Validation("--alpha needs at least one finite entry".into()));
            }
            Ok(a.to_vec())
        }
        (Some(cfg), None) => {
            if cfg.v != [0.0, 0.0, 1.0] {
                return Err(CliError::Validation(
                    "detgrid uses the Hermite phase and needs v = x^2; pass --alpha for other cases".into(),
                ));
            }
            if cfg.alpha.is_empty() {
                return Err(CliError::Validation("detgrid needs r >= 2".into()));
            }
            let c = std::f64::consts::SQRT_2;
            Ok(cfg.alpha.iter().map(|a| c * a).collect())
        }
        (None, None) => Err(CliError::Validation("detgrid needs --config or --alpha".into())),
    }
}

pub fn detgrid_cmd(alpha: &[f64], n: f64, points: usize) -> Result<Report, CliError> {
    if !(n.is_finite() && n > 0.0) {
        return Err(CliError::Validation("--N must be positive".into()));
    }
    let grid = detgrid(alpha, n, points)?;
    let rows: Vec<Vec<f64>> = grid.iter().map(|&(x, d)| vec![x, d]).collect();
    let json = json!({
        "alpha_effective": alpha,
        "N": n,
        "sign_changes": asymptotics::sign_changes(&grid.iter().map(|p| p.1).collect::<Vec<_>>()),
        "x": grid.iter().map(|p| p.0).collect::<Vec<_>>(),
        "det": grid.iter().map(|p| p.1).collect::<Vec<_>>(),
    });
    Ok(Report {
        json,
        table: Some(Table { header: vec!["x".into(), "det".into()], rows }),
        default_format: Format::Csv,
    })
}
