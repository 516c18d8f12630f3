//! Batch output files: CSV tables for the per-team, per-stage and top-k
//! series, JSON for the aggregate and tanking results, and an optional
//! match log.
//!
//! Every file starts with comment lines carrying the run metadata, so a
//! result can always be traced back to its seed and scale.

use std::io::Write;

use crate::error::Result;
use crate::rng::derive_stream;
use crate::simulation::{MetricsReport, RunConfig, TankingResult, DOMAIN_DRAW, DOMAIN_SIM};
use crate::team::TeamTable;
use crate::tournament::{prepare_draw, run_tournament};

/// Version string baked in at build time (git describe when available).
pub const BUILD_VERSION: &str = match option_env!("GROUPFORGE_GIT_DESCRIBE") {
    Some(v) => v,
    None => env!("CARGO_PKG_VERSION"),
};

fn metadata_lines(cfg: &RunConfig) -> String {
    format!(
        "# format={} draws={} sims={} seed={} version={}\n",
        cfg.format.name(),
        cfg.num_draws,
        cfg.sims_per_draw,
        cfg.master_seed,
        BUILD_VERSION,
    )
}

fn metadata_json(cfg: &RunConfig) -> serde_json::Value {
    serde_json::json!({
        "format": cfg.format.name(),
        "draws": cfg.num_draws,
        "sims": cfg.sims_per_draw,
        "seed": cfg.master_seed,
        "version": BUILD_VERSION,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// The per-team probability and stakeless table (one row per metric slot).
pub fn write_per_team(report: &MetricsReport, cfg: &RunConfig, mut out: impl Write) -> Result<()> {
    out.write_all(metadata_lines(cfg).as_bytes())?;
    writeln!(
        out,
        "slot,name,elo,p_knockout,p_round_of_16,p_quarter_final,p_semi_final,p_final,\
         p_champion,expected_matches,mean_group_elo_gap,s_a_min,s_a_max,s_e_min,s_e_max,\
         s_w_min,s_w_22,s_w_31"
    )?;
    for r in &report.per_team {
        writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.3},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            r.slot,
            r.name,
            r.elo.map(|e| format!("{e}")).unwrap_or_default(),
            r.p_knockout,
            r.p_round_of_16,
            r.p_quarter_final,
            r.p_semi_final,
            r.p_final,
            r.p_champion,
            r.expected_matches,
            r.mean_group_elo_gap,
            r.s_a_min,
            r.s_a_max,
            r.s_e_min,
            r.s_e_max,
            r.s_w_min,
            fmt_opt(r.s_w_22),
            fmt_opt(r.s_w_31),
        )?;
    }
    Ok(())
}

pub fn write_per_stage(report: &MetricsReport, cfg: &RunConfig, mut out: impl Write) -> Result<()> {
    out.write_all(metadata_lines(cfg).as_bytes())?;
    writeln!(out, "stage,matches,mean_elo_gap")?;
    for r in &report.per_stage {
        writeln!(out, "{},{},{:.3}", r.stage, r.matches, r.mean_elo_gap)?;
    }
    Ok(())
}

pub fn write_top_k(report: &MetricsReport, cfg: &RunConfig, mut out: impl Write) -> Result<()> {
    out.write_all(metadata_lines(cfg).as_bytes())?;
    writeln!(out, "k,all_ratio,group_ratio")?;
    for r in &report.top_k {
        writeln!(out, "{},{:.6},{:.6}", r.k, r.all_ratio, r.group_ratio)?;
    }
    Ok(())
}

pub fn write_aggregates(report: &MetricsReport, cfg: &RunConfig, mut out: impl Write) -> Result<()> {
    let doc = serde_json::json!({
        "metadata": metadata_json(cfg),
        "aggregates": report.aggregates,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_tanking(result: &TankingResult, cfg: &RunConfig, mut out: impl Write) -> Result<()> {
    let doc = serde_json::json!({
        "metadata": metadata_json(cfg),
        "tanking": result,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Streams every match of the experiment by replaying the same random
/// streams the Monte Carlo harness uses, so the log matches the report
/// run for run.
pub fn write_matchlog(table: &TeamTable, cfg: &RunConfig, mut out: impl Write) -> Result<()> {
    out.write_all(metadata_lines(cfg).as_bytes())?;
    writeln!(
        out,
        "draw,sim,stage,group,team_a,team_b,goals_a,goals_b,winner,stakeless_a,stakeless_b"
    )?;
    for d in 0..cfg.num_draws {
        let mut rng = derive_stream(cfg.master_seed, &[DOMAIN_DRAW, d]);
        let prep = prepare_draw(table, cfg.format, &cfg.constraints, cfg.pot_override, &mut rng)?;
        for sim in 0..cfg.sims_per_draw {
            let mut sim_rng = derive_stream(cfg.master_seed, &[DOMAIN_SIM, d, sim]);
            let run = run_tournament(table, cfg.format, &prep.assignment, &mut sim_rng);
            for m in &run.matches {
                let (ga, gb) = match m.score {
                    Some((a, b)) => (a.to_string(), b.to_string()),
                    None => (String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    d,
                    sim,
                    m.stage.label(),
                    m.group.map(|g| char::from(b'A' + g as u8).to_string()).unwrap_or_default(),
                    table.team(m.team_a).name,
                    table.team(m.team_b).name,
                    ga,
                    gb,
                    m.winner.map(|w| table.team(w).name.clone()).unwrap_or_default(),
                    u8::from(m.stakeless_a),
                    u8::from(m.stakeless_b),
                )?;
            }
        }
    }
    Ok(())
}
