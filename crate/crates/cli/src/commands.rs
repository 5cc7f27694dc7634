use std::fs;
use std::path::Path;

use log::{info, warn};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use eptopo::cover::{
    is_in_cover_subgroup, lift_word, rewrite_over_cover_generators, standard_two_sheet,
    CoverError, CoveringFile, CoveringSpec,
};
use eptopo::spectra::{
    charged_vorticity, default_cuts, eigenvalues, find_eps, loop_word, numerical_vorticity,
    refine_ep, trace_loop, EpLocation, LoopSpec, ModelSpec, ParamPoint, Region, SpectraError,
    TraceOptions, TwoBandModel,
};
use eptopo::sphere::{project_curve, unproject, PlanePoint, SpherePoint};
use eptopo::words::{classify, enumerate_table, reduce_free, vorticity_of_word, Word};

use crate::checks;
use crate::json::{format_g12, write_atomic, write_json};
use crate::{Cli, CliError, Command};

/// Grid used to search EPs around a traced loop.
const TRACE_EP_GRID: usize = 64;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Config(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::FindEps { region, grid } => cmd_find_eps(cli, region, *grid),
        Command::Trace { csv } => cmd_trace(cli, *csv),
        Command::Table { k, words } => cmd_table(cli, *k, *words),
        Command::Surface { region, grid } => cmd_surface(cli, region, grid),
        Command::Verify { config } => cmd_verify(cli, config.as_deref()),
        Command::Project {
            inverse,
            input,
            points,
        } => cmd_project(cli, *inverse, input.as_deref(), points),
        Command::Lift { word, cover, start } => cmd_lift(cli, word, cover.as_deref(), *start),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("malformed {what} {}: {e}", path.display())))
}

fn load_model(cli: &Cli) -> Result<ModelSpec, CliError> {
    let path = cli
        .model
        .as_deref()
        .ok_or_else(|| CliError::Config("--model is required".into()))?;
    let spec: ModelSpec = read_json(path, "model")?;
    if !spec.is_finite() {
        return Err(CliError::Config("model parameters must be finite".into()));
    }
    Ok(spec)
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("{what} `{s}` is not a comma separated list of numbers")))?;
    if vals.len() != n || vals.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config(format!("{what} `{s}` needs {n} finite numbers")));
    }
    Ok(vals)
}

fn parse_region(s: &str) -> Result<[f64; 4], CliError> {
    let v = parse_floats(s, 4, "region")?;
    Ok([v[0], v[1], v[2], v[3]])
}

fn word_text(w: &Word) -> String {
    let r = reduce_free(w);
    if r.is_empty() {
        "e".to_string()
    } else {
        r.to_string()
    }
}

fn spectra_failure(e: SpectraError) -> CliError {
    match e {
        SpectraError::InvalidArgument(_) | SpectraError::InvalidLoop(_) => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Numerical(e.to_string()),
    }
}

fn ep_json(ep: &EpLocation) -> Value {
    json!({
        "x": ep.point.x,
        "y": ep.point.y,
        "residual": ep.residual,
        "charge": ep.charge,
    })
}

fn model_json(spec: &ModelSpec) -> Value {
    serde_json::to_value(spec).unwrap_or(Value::Null)
}

fn report(path: &Path) {
    println!("{}", path.display());
}

fn cmd_find_eps(cli: &Cli, region: &str, grid: usize) -> Result<(), CliError> {
    let spec = load_model(cli)?;
    let r = parse_region(region)?;
    let region = match Region::new(r[0], r[1], r[2], r[3]) {
        Ok(region) => region,
        Err(SpectraError::EmptyRegion) => {
            return Err(CliError::Empty(format!("region {r:?} has no interior")))
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let model = spec.build();
    let eps = find_eps(model.as_ref(), &region, grid, cli.tol).map_err(spectra_failure)?;
    let doc = json!({
        "model": model_json(&spec),
        "region": r,
        "grid": grid,
        "tol": cli.tol,
        "eps": eps.iter().map(ep_json).collect::<Vec<_>>(),
    });
    let path = write_json(&cli.out, "eps.json", &doc)?;
    report(&path);
    if eps.is_empty() {
        return Err(CliError::Empty("no EPs in the region".into()));
    }
    Ok(())
}

fn cmd_trace(cli: &Cli, csv: bool) -> Result<(), CliError> {
    let spec = load_model(cli)?;
    let loop_path = cli
        .loop_file
        .as_deref()
        .ok_or_else(|| CliError::Config("--loop is required".into()))?;
    let loop_spec: LoopSpec = read_json(loop_path, "loop")?;
    let lp = loop_spec.build().map_err(|e| CliError::Config(e.to_string()))?;
    let model = spec.build();

    // EPs near the loop: its bounding box grown by its own size
    let pts = lp.sample(1024);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let grow = (x1 - x0).max(y1 - y0).max(f64::EPSILON);
    let region = Region::new(x0 - grow, x1 + grow, y0 - grow, y1 + grow)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let eps = find_eps(model.as_ref(), &region, TRACE_EP_GRID, cli.tol).map_err(spectra_failure)?;
    let ep_points: Vec<ParamPoint> = eps.iter().map(|e| e.point).collect();
    info!("{} EPs near the loop", eps.len());

    let samples = cli.samples.or(loop_spec.samples()).unwrap_or(TraceOptions::default().initial_samples);
    let opts = TraceOptions {
        initial_samples: samples,
        ..TraceOptions::with_eps(&ep_points)
    };
    let trace = trace_loop(model.as_ref(), &lp, &opts).map_err(spectra_failure)?;
    let vort = numerical_vorticity(&trace).map_err(spectra_failure)?;
    let word = loop_word(&trace.points, &default_cuts(&ep_points)).map_err(spectra_failure)?;
    let class = match classify(&word) {
        Ok(c) => Value::String(c.to_string()),
        Err(e) => {
            warn!("no chirality class: {e}");
            Value::Null
        }
    };
    let charges: Vec<i32> = eps.iter().map(|e| e.charge).collect();
    let doc = json!({
        "model": model_json(&spec),
        "word": word_text(&word),
        "permutation": trace.permutation.as_str(),
        "d_arg": trace.d_arg,
        "vorticity": vort.value.as_f64(),
        "vorticity_raw": vort.raw,
        "vorticity_residual": vort.residual,
        "word_vorticity": vorticity_of_word(&word).as_f64(),
        "charged_vorticity": charged_vorticity(&word, &charges).map(|v| v.as_f64()),
        "class": class,
        "samples": trace.samples(),
        "eps": eps.iter().map(ep_json).collect::<Vec<_>>(),
    });
    report(&write_json(&cli.out, "trace.json", &doc)?);
    if csv {
        report(&write_atomic(&cli.out, "trace.csv", &trace.to_csv())?);
    }
    Ok(())
}

fn cmd_table(cli: &Cli, k: u32, words: bool) -> Result<(), CliError> {
    let table = enumerate_table(k, words).map_err(|e| CliError::Config(e.to_string()))?;
    report(&write_atomic(&cli.out, &format!("table_{k}.csv"), &table.to_csv())?);
    if let Some(lists) = &table.words {
        let mut out = String::from("r,word\n");
        for (row, ws) in table.rows.iter().zip(lists) {
            for w in ws {
                out.push_str(&format!("{},{}\n", row.r, word_text(w)));
            }
        }
        report(&write_atomic(&cli.out, &format!("table_{k}_words.csv"), &out)?);
    }
    Ok(())
}

/// Zero set of `f` on a vertex grid: exact zero vertices plus one bisected
/// point on every edge whose endpoints have strictly opposite signs.
fn zero_locus<F: Fn(ParamPoint) -> f64>(xs: &[f64], ys: &[f64], f: F) -> Vec<ParamPoint> {
    let vals: Vec<Vec<f64>> = ys
        .iter()
        .map(|&y| xs.iter().map(|&x| f(ParamPoint::new(x, y))).collect())
        .collect();
    let bisect = |a: ParamPoint, b: ParamPoint, fa: f64| {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let at = |t: f64| ParamPoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = f(at(mid));
            if fm == 0.0 {
                return at(mid);
            }
            if (fm < 0.0) == (fa < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (pl, ph) = (at(lo), at(hi));
        if f(pl).abs() <= f(ph).abs() {
            pl
        } else {
            ph
        }
    };
    let mut out = Vec::new();
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            let v = vals[j][i];
            let p = ParamPoint::new(x, y);
            if v == 0.0 {
                out.push(p);
                continue;
            }
            if i + 1 < xs.len() {
                let w = vals[j][i + 1];
                if w != 0.0 && (v < 0.0) != (w < 0.0) {
                    out.push(bisect(p, ParamPoint::new(xs[i + 1], y), v));
                }
            }
            if j + 1 < ys.len() {
                let w = vals[j + 1][i];
                if w != 0.0 && (v < 0.0) != (w < 0.0) {
                    out.push(bisect(p, ParamPoint::new(x, ys[j + 1]), v));
                }
            }
        }
    }
    out
}

fn points_csv(points: &[ParamPoint]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

/// Cells where both EP conditions change sign, Newton-polished and merged.
fn locus_intersections(
    model: &dyn TwoBandModel,
    xs: &[f64],
    ys: &[f64],
    scale: f64,
    tol: f64,
) -> Vec<(ParamPoint, f64)> {
    let cond = |p: ParamPoint| {
        let d = model.discriminant(p);
        [d.re, 0.5 * d.im]
    };
    let vals: Vec<Vec<[f64; 2]>> = ys
        .iter()
        .map(|&y| xs.iter().map(|&x| cond(ParamPoint::new(x, y))).collect())
        .collect();
    let straddles = |c: [f64; 4]| {
        c.iter().cloned().fold(f64::INFINITY, f64::min) <= 0.0
            && c.iter().cloned().fold(f64::NEG_INFINITY, f64::max) >= 0.0
    };
    let merge = 1e-6 * scale;
    let mut found: Vec<(ParamPoint, f64)> = Vec::new();
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let c = [vals[j][i], vals[j][i + 1], vals[j + 1][i], vals[j + 1][i + 1]];
            if !(straddles(c.map(|v| v[0])) && straddles(c.map(|v| v[1]))) {
                continue;
            }
            let start = ParamPoint::new(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
            match refine_ep(model, start, scale, tol) {
                Ok((p, res)) => match found.iter_mut().find(|(q, _)| q.dist(p) <= merge) {
                    Some(existing) if res < existing.1 => *existing = (p, res),
                    Some(_) => {}
                    None => found.push((p, res)),
                },
                Err(e) => warn!("locus intersection near {start}: {e}"),
            }
        }
    }
    found.sort_by(|a, b| a.0.y.total_cmp(&b.0.y).then(a.0.x.total_cmp(&b.0.x)));
    found
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("grid `{s}` must be N or NXxNY"));
    let (nx, ny) = match s.split_once(['x', 'X']) {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if nx < 2 || ny < 2 {
        return Err(CliError::Config(format!("grid {nx}x{ny} needs at least 2 points per side")));
    }
    Ok((nx, ny))
}

fn cmd_surface(cli: &Cli, region: &str, grid: &str) -> Result<(), CliError> {
    let spec = load_model(cli)?;
    let r = parse_region(region)?;
    let region = Region::new(r[0], r[1], r[2], r[3]).map_err(|e| CliError::Config(e.to_string()))?;
    let (nx, ny) = parse_grid(grid)?;
    let model = spec.build();
    let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    };
    let xs = axis(region.x_min, region.x_max, nx);
    let ys = axis(region.y_min, region.y_max, ny);

    let mut re = String::from("x,y,re_Eplus,re_Eminus\n");
    let mut im = String::from("x,y,im_Eplus,im_Eminus\n");
    for &y in &ys {
        for &x in &xs {
            let (ep, em) = eigenvalues(model.as_ref(), ParamPoint::new(x, y));
            re.push_str(&format!("{x},{y},{},{}\n", ep.re, em.re));
            im.push_str(&format!("{x},{y},{},{}\n", ep.im, em.im));
        }
    }
    report(&write_atomic(&cli.out, "surface_re.csv", &re)?);
    report(&write_atomic(&cli.out, "surface_im.csv", &im)?);

    let locus_re = zero_locus(&xs, &ys, |p| model.discriminant(p).re);
    let locus_im = zero_locus(&xs, &ys, |p| model.discriminant(p).im);
    report(&write_atomic(&cli.out, "locus_re.csv", &points_csv(&locus_re))?);
    report(&write_atomic(&cli.out, "locus_im.csv", &points_csv(&locus_im))?);

    let crossings = locus_intersections(model.as_ref(), &xs, &ys, region.scale(), cli.tol);
    let doc = json!({
        "model": model_json(&spec),
        "region": r,
        "grid": [nx, ny],
        "locus_re_points": locus_re.len(),
        "locus_im_points": locus_im.len(),
        "intersections": crossings
            .iter()
            .map(|(p, res)| json!({"x": p.x, "y": p.y, "residual": res}))
            .collect::<Vec<_>>(),
    });
    report(&write_json(&cli.out, "surface.json", &doc)?);
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct VerifyConfig {
    homotopy_grid: [usize; 2],
    sphere_points: usize,
    rewrite_words: usize,
    rewrite_max_len: usize,
    random_loops: usize,
    loop_max_len: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            homotopy_grid: [256, 256],
            sphere_points: 10_000,
            rewrite_words: 10_000,
            rewrite_max_len: 20,
            random_loops: 100,
            loop_max_len: 8,
        }
    }
}

fn cmd_verify(cli: &Cli, config: Option<&Path>) -> Result<(), CliError> {
    let cfg: VerifyConfig = match config {
        Some(p) => read_json(p, "verify config")?,
        None => VerifyConfig::default(),
    };
    if cfg.loop_max_len == 0 {
        return Err(CliError::Config("loop_max_len must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);

    let homotopy = match checks::homotopy_certificate(cfg.homotopy_grid[0], cfg.homotopy_grid[1]) {
        Ok(c) => (c.passed(), c.to_json()),
        Err(e @ CoverError::InvalidArgument(_)) => return Err(CliError::Config(e.to_string())),
        Err(e) => (false, json!({"pass": false, "error": e.to_string()})),
    };
    let sphere = checks::sphere_check(&mut rng, cfg.sphere_points);
    let rewrite = checks::rewrite_check(&mut rng, cfg.rewrite_words, cfg.rewrite_max_len);
    let cross = checks::cross_validate(&mut rng, cfg.random_loops, cfg.loop_max_len);

    let results = [
        ("homotopy", homotopy.0),
        ("sphere", sphere.round_trip_passed() && sphere.published_passed()),
        ("rewrite", rewrite.passed()),
        ("cross_validation", cross.passed()),
    ];
    let all_pass = results.iter().all(|r| r.1);
    let doc = json!({
        "seed": cli.seed,
        "all_pass": all_pass,
        "certificates": {
            "homotopy": homotopy.1,
            "sphere": sphere.to_json(),
            "rewrite": rewrite.to_json(),
            "cross_validation": cross.to_json(),
        },
    });
    report(&write_json(&cli.out, "certificates.json", &doc)?);
    for (name, ok) in results {
        println!("{name}: {}", if ok { "pass" } else { "FAIL" });
    }
    if all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
        Err(CliError::Certificate(failed.join(", ")))
    }
}

fn cmd_project(
    cli: &Cli,
    inverse: bool,
    input: Option<&Path>,
    points: &[String],
) -> Result<(), CliError> {
    let dim = if inverse { 2 } else { 3 };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    if let Some(path) = input {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
            rows.push(parse_floats(line, dim, "row")?);
        }
    } else if points.is_empty() {
        return Err(CliError::Config("give --input or at least one --point".into()));
    }
    for p in points {
        rows.push(parse_floats(p, dim, "point")?);
    }

    let (name, csv) = if inverse {
        let mut out = String::from("nt,chit,xit\n");
        for r in &rows {
            let q = PlanePoint::new(r[0], r[1]).map_err(|e| CliError::Config(e.to_string()))?;
            let s = unproject(q);
            out.push_str(&format!("{},{},{}\n", format_g12(s.n), format_g12(s.chi), format_g12(s.xi)));
        }
        ("unprojected.csv", out)
    } else {
        let sphere: Vec<SpherePoint> = rows
            .iter()
            .map(|r| SpherePoint::new(r[0], r[1], r[2]))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        ("projected.csv", project_curve(&sphere).to_csv())
    };
    print!("{csv}");
    write_atomic(&cli.out, name, &csv)?;
    Ok(())
}

fn cmd_lift(cli: &Cli, word: &str, cover: Option<&Path>, start: usize) -> Result<(), CliError> {
    let w: Word = if word.trim() == "e" {
        Word::identity()
    } else {
        word.parse().map_err(|e| CliError::Config(format!("word `{word}`: {e}")))?
    };
    let w = reduce_free(&w);
    let standard = cover.is_none();
    let spec = match cover {
        Some(p) => {
            let file: CoveringFile = read_json(p, "cover")?;
            CoveringSpec::try_from(file).map_err(|e| CliError::Config(e.to_string()))?
        }
        None => standard_two_sheet(Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0))
            .map_err(|e| CliError::Config(e.to_string()))?,
    };
    let lift = lift_word(&spec, &w, start).map_err(|e| CliError::Config(e.to_string()))?;
    let mut doc = json!({
        "word": word_text(&w),
        "start_sheet": start,
        "sheets": spec.n_sheets(),
        "total_perm": lift.total_perm.images(),
        "closes": lift.closes,
        "order_to_close": lift.order_to_close,
    });
    if standard {
        doc["in_cover_subgroup"] = json!(is_in_cover_subgroup(&w));
        doc["rewrite"] = match rewrite_over_cover_generators(&w) {
            Ok(r) => json!(r.to_string()),
            Err(_) => Value::Null,
        };
    }
    report(&write_json(&cli.out, "lift.json", &doc)?);
    Ok(())
}
