use std::io::Write;
use std::path::Path;

use super::config::RunConfig;
use super::report::{emit, ensure_dir, write_file, Report};
use super::suite::run_suite;
use super::{Cli, Command, GlobalOpts, EXIT_OK, EXIT_VIOLATIONS};
use crate::amalgam::{amalgam_norm, AmalgamConfig, AmalgamMode};
use crate::dilation::{dyadic_grid, lebesgue_scan};
use crate::error::{Error, Result};
use crate::ext::ExtNonneg;
use crate::gridfn::{Descriptor, GridFunction};
use crate::orlicz::{amemiya, luxemburg};
use crate::young::{conjugate, Catalog};
use crate::zak::{balian_low_demo, zak};

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn stdout_err(source: std::io::Error) -> Error {
    Error::Io { path: "<stdout>".into(), source }
}

/// Twelve significant digits, so solver noise below that does not show.
fn fmt_value(x: f64) -> String {
    if !x.is_finite() {
        return "inf".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap();
    format!("{rounded:?}")
}

fn fmt_ext(x: ExtNonneg) -> String {
    match x {
        ExtNonneg::Finite(v) => fmt_value(v),
        ExtNonneg::Infinite => "inf".into(),
    }
}

fn load_config(g: &GlobalOpts) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.corpus_seed = seed;
    }
    if let Some(out) = &g.out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    if let Some(formats) = &g.format {
        cfg.output.formats = formats.clone();
    }
    Ok(cfg)
}

fn sample(tag: &str, per_unit: usize) -> Result<GridFunction> {
    GridFunction::sample_natural(&Descriptor::parse(tag)?, per_unit)
}

/// Writes CSV into `--out/<name>` when an output directory was given,
/// otherwise to stdout.
fn emit_csv(g: &GlobalOpts, name: &str, body: &str, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<()> {
    match &g.out {
        Some(dir) => {
            ensure_dir(dir)?;
            let path = dir.join(name);
            write_file(&path, body)?;
            writeln!(err, "wrote {}", path.display()).map_err(stdout_err)
        }
        None => out.write_all(body.as_bytes()).map_err(stdout_err),
    }
}

pub(super) fn dispatch(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| execute(cli, out, err))
}

fn execute(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let g = &cli.global;
    let catalog = Catalog::standard();
    match cli.command {
        Command::Catalog => {
            if g.format.as_ref().is_some_and(|f| f.iter().any(|x| x == "json")) {
                let json = serde_json::to_string_pretty(&catalog.rows())?;
                writeln!(out, "{json}").map_err(stdout_err)?;
            } else {
                writeln!(out, "name\tconjugate\tdelta2\tsubmultiplicative\tright_deriv_positive\tnormalized_at_one")
                    .map_err(stdout_err)?;
                for r in catalog.rows() {
                    let f = r.flags;
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        r.name,
                        r.conjugate.as_deref().unwrap_or("-"),
                        f.delta2.as_str(),
                        f.submultiplicative.as_str(),
                        f.right_deriv_positive.as_str(),
                        f.normalized_at_one.as_str()
                    )
                    .map_err(stdout_err)?;
                }
            }
        }
        Command::Norm { young, function, target, amemiya: use_amemiya, resolution } => {
            if !(target > 0.0) {
                return Err(Error::InvalidArgument(format!("target must be positive, got {target}")));
            }
            let phi = catalog.resolve(&young)?;
            let f = sample(&function, resolution)?;
            let v = if use_amemiya { amemiya(&f, &phi) } else { luxemburg(&f, &phi, target).value };
            writeln!(out, "{}", fmt_ext(v)).map_err(stdout_err)?;
        }
        Command::Conjugate { young, y } => {
            let phi = catalog.resolve(&young)?;
            for y in y {
                if !(y >= 0.0) {
                    return Err(Error::InvalidArgument(format!("y must be nonnegative, got {y}")));
                }
                writeln!(out, "{}\t{}", fmt_value(y), fmt_ext(conjugate(&phi, y))).map_err(stdout_err)?;
            }
        }
        Command::Amalgam { function, phi1, phi2, x_resolution } => {
            let (phi1, phi2) = (catalog.resolve(&phi1)?, catalog.resolve(&phi2)?);
            let f = sample(&function, 256)?;
            let cfg = AmalgamConfig { x_resolution, ..AmalgamConfig::default() };
            let n = amalgam_norm(&f, &phi1, &phi2, AmalgamMode::Both, &cfg)?;
            let show = |v: Option<ExtNonneg>| v.map(fmt_ext).unwrap_or_else(|| "-".into());
            writeln!(out, "continuous\t{}", show(n.continuous)).map_err(stdout_err)?;
            writeln!(out, "discrete\t{}", show(n.discrete)).map_err(stdout_err)?;
            writeln!(out, "ratio\t{}", n.ratio.map(fmt_value).unwrap_or_else(|| "-".into())).map_err(stdout_err)?;
        }
        Command::DilationScan { p, q, function, per_octave } => {
            let f = sample(&function, 256)?;
            let scan = lebesgue_scan(p, q, &f, &dyadic_grid(per_octave))?;
            let mut body = String::from("lambda,norm,log_lambda,log_norm\n");
            for (l, v) in &scan.points {
                body.push_str(&format!("{l},{v},{},{}\n", l.ln(), v.ln()));
            }
            emit_csv(g, "dilation_scan.csv", &body, out, err)?;
            writeln!(
                err,
                "fitted slopes: {:.4} (λ≤1), {:.4} (λ≥1); lemma {:.4}/{:.4}; main {:.4}",
                scan.fitted.small, scan.fitted.large, scan.lemma.small, scan.lemma.large, scan.main.small
            )
            .map_err(stdout_err)?;
        }
        Command::Zak { function, k, n, balian_low } => {
            if balian_low {
                let demo = balian_low_demo(k, n)?;
                let m = demo.modulus;
                writeln!(out, "Zg(0,0) = {}", fmt_value(demo.zg_origin)).map_err(stdout_err)?;
                writeln!(out, "|Zg(1/2,1/2)| = {:.3e}", demo.center_modulus).map_err(stdout_err)?;
                writeln!(out, "grid min |Zg| = {:.3e} at ({:.5}, {:.5}), max = {}", m.min_mod, m.argmin.0, m.argmin.1, fmt_value(m.max_mod))
                    .map_err(stdout_err)?;
                writeln!(out, "identity residuals: {:.3e}", demo.residuals.max()).map_err(stdout_err)?;
                writeln!(out, "verdict: {}", m.verdict.as_str()).map_err(stdout_err)?;
                writeln!(out, "{}", demo.conclusion).map_err(stdout_err)?;
                return Ok(EXIT_OK);
            }
            let field = zak(&sample(&function, 256)?, k, n)?;
            for w in &field.warnings {
                writeln!(err, "warning: {w}").map_err(stdout_err)?;
            }
            let mut body = String::from("t,w,re,im,modulus\n");
            for i in 0..n {
                for j in 0..n {
                    let v = field.at(i, j);
                    body.push_str(&format!("{},{},{},{},{}\n", field.node(i), field.node(j), v.re, v.im, v.norm()));
                }
            }
            emit_csv(g, "zak.csv", &body, out, err)?;
        }
        Command::Verify => {
            let cfg = load_config(g)?;
            let suite = run_suite(&cfg, &catalog)?;
            let report = Report::new(cfg.hash(), suite.records);
            let written = emit(&report, &suite.plot, Path::new(&cfg.output.dir), &cfg.output.formats)?;
            let s = report.summary;
            writeln!(
                out,
                "verified={} violated={} report_only={} not_applicable={}",
                s.verified, s.violated, s.report_only, s.not_applicable
            )
            .map_err(stdout_err)?;
            for p in written {
                writeln!(err, "wrote {}", p.display()).map_err(io(&p))?;
            }
            return Ok(if s.violated > 0 { EXIT_VIOLATIONS } else { EXIT_OK });
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_formatting() {
        assert_eq!(fmt_value(1.0000000000002), "1.0");
        assert_eq!(fmt_value(0.5), "0.5");
        assert_eq!(fmt_value(f64::INFINITY), "inf");
    }
}
