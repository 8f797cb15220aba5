//! The full property suite behind `verify`.

use rayon::prelude::*;

use super::config::RunConfig;
use super::report::PlotRow;
use crate::amalgam::{structure_checks, AmalgamConfig};
use crate::dilation::{dyadic_grid, lebesgue_scan, verify_lemma, verify_main};
use crate::error::Result;
use crate::gridfn::{corpus, CorpusEntry, Descriptor, GridFunction, CORPUS_RESOLUTION};
use crate::orlicz::inequality_suite;
use crate::record::{Status, VerificationRecord};
use crate::solve::log_grid;
use crate::young::{pair_checks, Catalog, YoungFunction};
use crate::zak::{identities_residual, modulus_analysis_with, norm_bound_check, zak, Thresholds};

pub struct SuiteOutput {
    pub records: Vec<VerificationRecord>,
    pub plot: Vec<PlotRow>,
}

type Task<'a> = Box<dyn Fn() -> Result<Vec<VerificationRecord>> + Send + Sync + 'a>;

fn partner(catalog: &Catalog, name: &str, phi: &YoungFunction) -> YoungFunction {
    catalog.conjugate_of(name).unwrap_or_else(|| YoungFunction::numerical_conjugate(phi))
}

fn tag_all(records: Vec<VerificationRecord>, key: &str, value: &str) -> Vec<VerificationRecord> {
    records.into_iter().map(|r| r.input(key, value)).collect()
}

fn young_tasks<'a>(cfg: &'a RunConfig, catalog: &'a Catalog) -> Vec<Task<'a>> {
    let u_grid = log_grid(1e-6, 1e6, cfg.grids.u_points);
    let xy_grid = log_grid(1e-3, 1e3, cfg.grids.xy_points);
    catalog
        .pairs()
        .into_iter()
        .map(|(phi, psi)| {
            let (u, xy) = (u_grid.clone(), xy_grid.clone());
            Box::new(move || Ok(pair_checks(&phi, &psi, &u, &xy))) as Task
        })
        .collect()
}

fn orlicz_tasks<'a>(cfg: &'a RunConfig, catalog: &'a Catalog, corp: &'a [CorpusEntry]) -> Result<Vec<Task<'a>>> {
    let mut tasks: Vec<Task> = Vec::new();
    for name in &cfg.young_functions {
        let phi = catalog.resolve(name)?;
        let psi = partner(catalog, name, &phi);
        for (i, a) in corp.iter().enumerate() {
            let b = &corp[(i + 1) % corp.len()];
            let (phi, psi) = (phi.clone(), psi.clone());
            tasks.push(Box::new(move || {
                let recs = inequality_suite(&a.f, &b.f, &phi, &psi, &cfg.grids.lambda)?;
                Ok(tag_all(tag_all(recs, "f", &a.name), "g", &b.name))
            }));
        }
    }
    Ok(tasks)
}

fn resolve_pairs(catalog: &Catalog, pairs: &[(String, String)]) -> Result<Vec<(YoungFunction, YoungFunction)>> {
    pairs.iter().map(|(a, b)| Ok((catalog.resolve(a)?, catalog.resolve(b)?))).collect()
}

fn amalgam_tasks<'a>(cfg: &'a RunConfig, catalog: &'a Catalog, corp: &'a [CorpusEntry]) -> Result<Vec<Task<'a>>> {
    let pairs = resolve_pairs(catalog, &cfg.amalgam_pairs)?;
    let acfg = AmalgamConfig { x_resolution: cfg.grids.x_resolution, ..AmalgamConfig::default() };
    Ok(corp
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let b = &corp[(i + 1) % corp.len()];
            let (pairs, acfg) = (pairs.clone(), acfg.clone());
            Box::new(move || {
                let recs = structure_checks(&a.f, &b.f, &pairs, catalog, &acfg)?;
                Ok(tag_all(tag_all(recs, "f", &a.name), "g", &b.name))
            }) as Task
        })
        .collect())
}

fn dilation_tasks<'a>(cfg: &'a RunConfig, catalog: &'a Catalog, corp: &'a [CorpusEntry]) -> Result<Vec<Task<'a>>> {
    let mut tasks: Vec<Task> = Vec::new();
    for (phi1, phi2) in resolve_pairs(catalog, &cfg.lemma_pairs)? {
        for a in corp {
            let (phi1, phi2) = (phi1.clone(), phi2.clone());
            tasks.push(Box::new(move || {
                let recs = cfg
                    .grids
                    .lemma_lambda
                    .iter()
                    .map(|&l| verify_lemma(&a.f, &phi1, &phi2, l))
                    .collect::<Result<Vec<_>>>()?;
                Ok(tag_all(recs, "f", &a.name))
            }));
        }
    }
    let grid = dyadic_grid(cfg.grids.per_octave);
    for (phi1, phi2) in resolve_pairs(catalog, &cfg.main_pairs)? {
        for a in corp {
            let (phi1, phi2, grid) = (phi1.clone(), phi2.clone(), grid.clone());
            tasks.push(Box::new(move || Ok(tag_all(verify_main(&a.f, &phi1, &phi2, &grid)?.records, "f", &a.name))));
        }
    }
    Ok(tasks)
}

fn zak_tasks<'a>(cfg: &'a RunConfig, catalog: &'a Catalog, corp: &'a [CorpusEntry]) -> Result<Vec<Task<'a>>> {
    let (k, n) = (cfg.grids.zak_k, cfg.grids.zak_n);
    let mut tasks: Vec<Task> = Vec::new();
    for name in &cfg.zak_young {
        let phi = catalog.resolve(name)?;
        for a in corp {
            let phi = phi.clone();
            tasks.push(Box::new(move || Ok(vec![norm_bound_check(&a.f, &phi, k, n)?.input("f", &a.name)])));
        }
    }
    let tol = cfg.tolerance("zak_identity");
    let th = Thresholds { onb_tol: cfg.tolerance("zak_onb"), zero: cfg.tolerance("zak_zero") };
    for a in corp.iter().filter(|a| a.name == "box01" || a.name == "gaussian") {
        tasks.push(Box::new(move || {
            let field = zak(&a.f, k, n)?;
            let res = identities_residual(&field, 1, 1);
            let m = modulus_analysis_with(&field, th);
            let id = |id: &str, r: f64| VerificationRecord::check(id, "zak", r, tol, 0.0, 0.0);
            let recs = vec![
                id("zak_quasiperiodic_t", res.quasi_t),
                id("zak_periodic_w", res.periodic_w),
                id("zak_shift_identity", res.shift).input("m", 1).input("n_shift", 1),
                VerificationRecord::with_status("zak_min_modulus", "zak", m.min_mod, th.zero, Status::ReportOnly)
                    .input("verdict", m.verdict.as_str())
                    .input("argmin_t", m.argmin.0)
                    .input("argmin_w", m.argmin.1),
            ];
            Ok(tag_all(recs, "f", &a.name))
        }));
    }
    Ok(tasks)
}

fn scans(cfg: &RunConfig) -> Result<Vec<PlotRow>> {
    let grid = dyadic_grid(cfg.grids.per_octave);
    let mut rows = Vec::new();
    for s in &cfg.scans {
        let (p, q) = s.exponents();
        let f = GridFunction::sample_natural(&Descriptor::parse(&s.function)?, CORPUS_RESOLUTION)?;
        let report = lebesgue_scan(p, q, &f, &grid)?;
        let label = format!("{}:p={p}:q={q}", s.function);
        rows.extend(report.points.into_iter().map(|(lambda, norm)| PlotRow { scan: label.clone(), lambda, norm }));
    }
    Ok(rows)
}

/// Runs every module's checks. Records come back in a fixed order
/// regardless of the worker count.
pub fn run_suite(cfg: &RunConfig, catalog: &Catalog) -> Result<SuiteOutput> {
    cfg.validate(catalog)?;
    let corp = corpus(cfg.corpus_seed);
    let mut tasks = young_tasks(cfg, catalog);
    tasks.extend(orlicz_tasks(cfg, catalog, &corp)?);
    tasks.extend(amalgam_tasks(cfg, catalog, &corp)?);
    tasks.extend(dilation_tasks(cfg, catalog, &corp)?);
    tasks.extend(zak_tasks(cfg, catalog, &corp)?);
    let chunks = tasks.par_iter().map(|t| t()).collect::<Result<Vec<_>>>()?;
    Ok(SuiteOutput { records: chunks.into_iter().flatten().collect(), plot: scans(cfg)? })
}
