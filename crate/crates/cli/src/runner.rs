//! Runs the check groups in dependency order and assembles the report.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use bilinear_bsc::eoracle::{verify_local_basis, verify_eigenspace_identities};
use bilinear_bsc::local::bfs::DEFAULT_BFS_LIMIT;
use bilinear_bsc::local::cache::{bfs_cached, load_or_build};
use bilinear_bsc::local::spectrum::local_spectrum_check;
use bilinear_bsc::local::{triangle_spot_check, verify_partition, CrossMode, LocalContext};
use bilinear_bsc::norton::heavy::{conjecture_probe, heavy_checks, HeavyOracle};
use bilinear_bsc::norton::{
    bbalanced_word_check, verify_generation, verify_norton_identities, verify_omega, NortonOps,
};
use bilinear_bsc::params::{verify_closed_form_identities, ClosedForms};
use bilinear_bsc::report::{Report, Summary};
use bilinear_bsc::smodel::{cross_validate, verify_s_model, SModel};
use bilinear_bsc::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::registry::{group_of, lookup, Group, CATALOG};

/// Triples sampled by the local triangle-inequality check.
const TRIANGLE_SAMPLES: usize = 2000;
/// Random coordinate pairs compared against direct vertex sums.
const CROSS_VALIDATION_PAIRS: usize = 10;

#[derive(Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub library_version: &'static str,
    pub checks: Report,
    pub summary: Summary,
}

pub struct Options {
    pub cache_dir: Option<PathBuf>,
    pub cross_table: bool,
    pub timings: bool,
    pub progress: bool,
    pub export: Option<PathBuf>,
}

fn identity(name: &str) -> &'static str {
    lookup(name).map_or("", |e| e.identity)
}

/// Records every check of `group` as skipped.
fn skip_group(r: &mut Report, group: Group, reason: &str) {
    for e in CATALOG.iter().filter(|e| e.group == group) {
        r.skip(e.name, e.identity, reason);
    }
}

fn stamp(r: &mut Report, from: usize, start: Instant) {
    let ms = start.elapsed().as_millis() as u64;
    for c in &mut r.checks_mut()[from..] {
        c.elapsed_ms = Some(ms);
    }
}

fn heavy_progress(enabled: bool) -> impl Fn(u64, u64) + Sync {
    let last = AtomicU64::new(0);
    move |done, total| {
        if !enabled || total == 0 {
            return;
        }
        let pct = done * 100 / total;
        if pct >= last.load(Ordering::Relaxed) + 10 && last.fetch_max(pct, Ordering::Relaxed) < pct
        {
            eprintln!("heavy: {pct}% of {total} vertices");
        }
    }
}

struct Plan {
    groups: Vec<Group>,
    heavy: bool,
}

impl Plan {
    fn new(cfg: &RunConfig) -> Self {
        let mut groups: Vec<Group> = if cfg.checks.is_empty() {
            Group::ALL.to_vec()
        } else {
            let mut g: Vec<Group> = cfg.checks.iter().filter_map(|n| group_of(n)).collect();
            g.sort();
            g.dedup();
            g
        };
        if !cfg.heavy && cfg.checks.is_empty() {
            groups.retain(|g| *g != Group::Heavy);
        }
        Self {
            groups,
            heavy: cfg.heavy,
        }
    }

    fn wants(&self, g: Group) -> bool {
        self.groups.contains(&g)
    }

    fn needs_context(&self) -> bool {
        [Group::Local, Group::EOracle, Group::SModel]
            .iter()
            .any(|g| self.wants(*g))
            || (self.heavy && self.wants(Group::Heavy))
    }
}

pub fn run(cfg: &RunConfig, opts: &Options) -> Result<RunReport> {
    let plan = Plan::new(cfg);
    let p = &cfg.params;
    let mut r = Report::new();
    let cf = ClosedForms::new(p, cfg.k)?;

    let timed = |r: &mut Report, group: Group, f: &mut dyn FnMut(&mut Report)| {
        let (from, start) = (r.len(), Instant::now());
        f(r);
        // selection relies on every emitted name being cataloged under its producer
        debug_assert!(
            r.checks()[from..]
                .iter()
                .all(|c| group_of(&c.name) == Some(group)),
            "uncataloged check emitted by {group:?}"
        );
        if opts.timings {
            stamp(r, from, start);
        }
    };

    if plan.wants(Group::Params) {
        timed(&mut r, Group::Params, &mut |r| {
            r.extend(verify_closed_form_identities(&cf))
        });
    }

    if plan.wants(Group::Bfs) {
        timed(&mut r, Group::Bfs, &mut |r| match bfs_cached(
            opts.cache_dir.as_deref(),
            p,
            DEFAULT_BFS_LIMIT,
        ) {
            Ok((audit, _)) => r.extend(audit.to_report()),
            Err(Error::TooLarge {
                estimate, limit, ..
            }) => skip_group(
                r,
                Group::Bfs,
                &format!("{estimate} exceeds the BFS limit {limit}"),
            ),
            Err(e) => skip_group(r, Group::Bfs, &e.to_string()),
        });
    }

    let mode = if opts.cross_table {
        CrossMode::Cached
    } else {
        CrossMode::OnTheFly
    };
    let (x, y) = cfg.pair_vertices;
    let ctx: std::result::Result<LocalContext, String> = if plan.needs_context() {
        load_or_build(opts.cache_dir.as_deref(), p, x, y, mode)
            .map(|(c, _)| c)
            .map_err(|e| e.to_string())
    } else {
        Err("local context not built".into())
    };

    if plan.wants(Group::Local) {
        timed(&mut r, Group::Local, &mut |r| match &ctx {
            Ok(ctx) => {
                r.extend(verify_partition(ctx, &cf));
                r.extend(triangle_spot_check(ctx, TRIANGLE_SAMPLES, cfg.seed));
                r.extend(local_spectrum_check(ctx));
            }
            Err(e) => skip_group(r, Group::Local, e),
        });
    }

    if plan.wants(Group::EOracle) {
        timed(&mut r, Group::EOracle, &mut |r| match &ctx {
            Ok(ctx) => {
                r.extend(verify_eigenspace_identities(ctx, &cf));
                r.extend(verify_local_basis(ctx, &cf, cfg.seed));
            }
            Err(e) => skip_group(r, Group::EOracle, e),
        });
    }

    let model = SModel::from_closed_forms(&cf);
    if plan.wants(Group::SModel) {
        timed(&mut r, Group::SModel, &mut |r| match &model {
            Ok(m) => {
                r.extend(verify_s_model(m));
                match &ctx {
                    Ok(ctx) => r.extend(cross_validate(m, ctx, CROSS_VALIDATION_PAIRS, cfg.seed)),
                    Err(e) => r.skip("s-cross-validation", identity("s-cross-validation"), e),
                }
            }
            Err(e) => r.fail(
                "s-model-build",
                identity("s-model-build"),
                json!(e.to_string()),
            ),
        });
    }

    let ops = model
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|m| NortonOps::new(m).map_err(|e| e.to_string()));
    if plan.wants(Group::Norton) {
        timed(&mut r, Group::Norton, &mut |r| match &ops {
            Ok(o) => {
                r.extend(verify_norton_identities(o));
                r.extend(verify_omega(o));
                r.extend(verify_generation(o));
                r.extend(bbalanced_word_check(o, cfg.n_max_words));
            }
            Err(e) => r.fail("n-operators", identity("n-operators"), json!(e)),
        });
    }

    if plan.wants(Group::Heavy) {
        timed(&mut r, Group::Heavy, &mut |r| {
            if !cfg.heavy {
                return skip_group(r, Group::Heavy, "heavy mode not requested (--heavy)");
            }
            let (ctx, ops) = match (&ctx, &ops) {
                (Ok(c), Ok(o)) => (c, o),
                (Err(e), _) | (_, Err(e)) => return skip_group(r, Group::Heavy, e),
            };
            let progress = heavy_progress(opts.progress);
            match HeavyOracle::build(ctx, Some(&progress)) {
                Ok(oracle) => {
                    r.extend(heavy_checks(&oracle, ops, ctx, cfg.seed));
                    r.extend(conjecture_probe(&oracle, ops));
                }
                Err(e) => skip_group(r, Group::Heavy, &e.to_string()),
            }
        });
    }

    if !cfg.checks.is_empty() {
        let keep: Vec<_> = r
            .checks()
            .iter()
            .filter(|c| cfg.checks.contains(&c.name))
            .cloned()
            .collect();
        r = Report::new();
        for c in keep {
            r.push(c);
        }
    }

    if let Some(path) = &opts.export {
        let export: Value = match &model {
            Ok(m) => m.to_json(),
            Err(_) => cf.to_json(),
        };
        let text =
            serde_json::to_string_pretty(&export).map_err(|e| Error::Cache(e.to_string()))?;
        std::fs::write(path, text)?;
    }

    let summary = r.summary();
    Ok(RunReport {
        config: cfg.clone(),
        library_version: bilinear_bsc::VERSION,
        checks: r,
        summary,
    })
}
