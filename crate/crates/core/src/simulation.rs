//! Monte Carlo harness: many draws, many tournament runs per draw, and the
//! aggregation of every reported metric.
//!
//! Parallelism is across draws. Every draw and every run derives its own
//! random stream from the master seed by counters, and the partial
//! accumulators are merged in draw order, so reports do not depend on the
//! worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::draw::DrawConstraints;
use crate::error::{Error, Result};
use crate::format::FormatKind;
use crate::rng::derive_stream;
use crate::team::{adjusted_elo, assign_pots, PotOverride, TeamId, TeamTable};
use crate::tournament::{prepare_draw, run_tournament, Stage, CHAMPION_LEVEL};

/// Stream domains carved out of the master seed.
pub const DOMAIN_DRAW: u64 = 1;
pub const DOMAIN_SIM: u64 = 2;

/// Metric slots: the 46 direct qualifiers keep their identity; the two
/// play-off winners are tracked as the stronger and weaker winner.
pub const SLOTS: usize = 48;
const SLOT_WINNER_STRONG: usize = 46;
const SLOT_WINNER_WEAK: usize = 47;

/// Largest `k` reported in the top-k match-ratio series.
pub const TOP_K_MAX: usize = 24;

const STAGES: [Stage; 7] = [
    Stage::Group,
    Stage::RoundOf32,
    Stage::PlayoffRound,
    Stage::RoundOf16,
    Stage::QuarterFinal,
    Stage::SemiFinal,
    Stage::Final,
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: FormatKind,
    pub num_draws: u64,
    pub sims_per_draw: u64,
    pub master_seed: u64,
    pub constraints: DrawConstraints,
    pub pot_override: Option<PotOverride>,
    /// Worker threads; 0 picks the rayon default.
    pub threads: usize,
}

impl RunConfig {
    pub fn new(format: FormatKind, num_draws: u64, sims_per_draw: u64, master_seed: u64) -> Self {
        Self {
            format,
            num_draws,
            sims_per_draw,
            master_seed,
            constraints: DrawConstraints::default(),
            pot_override: None,
            threads: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_draws == 0 || self.sims_per_draw == 0 {
            return Err(Error::Config("need at least one draw and one run per draw".into()));
        }
        Ok(())
    }

    pub fn total_runs(&self) -> u64 {
        self.num_draws * self.sims_per_draw
    }
}

/// 99% confidence-interval half-width of an estimated probability.
pub fn confidence_bound(p: f64, n: u64) -> f64 {
    2.8 * (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, Default)]
struct SlotAcc {
    /// `reach[l]` counts runs with progress level at least `l` (1 = knockout
    /// entry, 2 = round of 16, ..., 6 = champion).
    reach: [u64; 7],
    matches_sum: u64,
    group_gap_sum: f64,
    a_min: u64,
    a_max: u64,
    e_min: u64,
    e_max: u64,
    w_min: f64,
    w_22: f64,
    w_31: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct StageAcc {
    gap_sum: f64,
    matches: u64,
}

#[derive(Debug, Clone)]
struct Acc {
    runs: u64,
    slots: [SlotAcc; SLOTS],
    stages: [StageAcc; 7],
    /// Histograms over the worse strength rank of the two sides, for the
    /// top-k ratios; index 0 is unused.
    all_rank_hist: [u64; SLOTS + 1],
    group_rank_hist: [u64; SLOTS + 1],
    all_matches: u64,
    group_matches: u64,
}

impl Acc {
    fn new() -> Self {
        Self {
            runs: 0,
            slots: [SlotAcc::default(); SLOTS],
            stages: [StageAcc::default(); 7],
            all_rank_hist: [0; SLOTS + 1],
            group_rank_hist: [0; SLOTS + 1],
            all_matches: 0,
            group_matches: 0,
        }
    }

    fn merge(&mut self, other: &Acc) {
        self.runs += other.runs;
        for (a, b) in self.slots.iter_mut().zip(&other.slots) {
            for (x, y) in a.reach.iter_mut().zip(&b.reach) {
                *x += y;
            }
            a.matches_sum += b.matches_sum;
            a.group_gap_sum += b.group_gap_sum;
            a.a_min += b.a_min;
            a.a_max += b.a_max;
            a.e_min += b.e_min;
            a.e_max += b.e_max;
            a.w_min += b.w_min;
            a.w_22 += b.w_22;
            a.w_31 += b.w_31;
        }
        for (a, b) in self.stages.iter_mut().zip(&other.stages) {
            a.gap_sum += b.gap_sum;
            a.matches += b.matches;
        }
        for (a, b) in self.all_rank_hist.iter_mut().zip(&other.all_rank_hist) {
            *a += b;
        }
        for (a, b) in self.group_rank_hist.iter_mut().zip(&other.group_rank_hist) {
            *a += b;
        }
        self.all_matches += other.all_matches;
        self.group_matches += other.group_matches;
    }
}

/// Per-slot metrics of the report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PerTeamRow {
    pub slot: usize,
    pub name: String,
    /// Rating of the direct qualifier; `None` for the winner slots, whose
    /// identity varies by draw.
    pub elo: Option<f64>,
    /// Probability of entering the knockout bracket at all.
    pub p_knockout: f64,
    /// Probability of playing the round of 16.
    pub p_round_of_16: f64,
    pub p_quarter_final: f64,
    pub p_semi_final: f64,
    pub p_final: f64,
    pub p_champion: f64,
    pub expected_matches: f64,
    /// Mean absolute rating difference of the team's three group matches.
    pub mean_group_elo_gap: f64,
    pub s_a_min: f64,
    pub s_a_max: f64,
    pub s_e_min: f64,
    pub s_e_max: f64,
    pub s_w_min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_w_22: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_w_31: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct StageRow {
    pub stage: &'static str,
    pub matches: u64,
    pub mean_elo_gap: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TopKRow {
    pub k: usize,
    pub all_ratio: f64,
    pub group_ratio: f64,
}

/// Grand averages over teams and runs.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Aggregates {
    pub avg_elo_difference: f64,
    pub s_a_min: f64,
    pub s_a_max: f64,
    pub s_e_min: f64,
    pub s_e_max: f64,
    pub s_w_min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_w_22: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_w_31: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MetricsReport {
    pub format: FormatKind,
    pub num_draws: u64,
    pub sims_per_draw: u64,
    pub master_seed: u64,
    pub per_team: Vec<PerTeamRow>,
    pub per_stage: Vec<StageRow>,
    pub top_k: Vec<TopKRow>,
    pub aggregates: Aggregates,
}

fn stage_index(stage: Stage) -> usize {
    STAGES.iter().position(|&s| s == stage).unwrap()
}

/// Table id -> metric slot for the direct qualifiers.
fn direct_slot_map(table: &TeamTable) -> Vec<Option<usize>> {
    let mut map = vec![None; table.len()];
    for (slot, id) in table.direct_qualifiers().into_iter().enumerate() {
        map[id.0 as usize] = Some(slot);
    }
    map
}

fn run_draw(
    table: &TeamTable,
    cfg: &RunConfig,
    direct_slots: &[Option<usize>],
    draw_idx: u64,
) -> Result<Acc> {
    let mut acc = Acc::new();
    let mut rng = derive_stream(cfg.master_seed, &[DOMAIN_DRAW, draw_idx]);
    let prep = prepare_draw(table, cfg.format, &cfg.constraints, cfg.pot_override, &mut rng)?;

    // stronger and weaker play-off winner by rating
    let [w0, w1] = prep.playoff_winners;
    let (strong, weak) = if table.team(w0).elo >= table.team(w1).elo { (w0, w1) } else { (w1, w0) };
    let slot_of = |id: TeamId| {
        direct_slots[id.0 as usize].unwrap_or(if id == strong {
            SLOT_WINNER_STRONG
        } else {
            SLOT_WINNER_WEAK
        })
    };

    // Strength ranks for the top-k series: host-adjusted ratings, with the
    // play-off winners counted as the 47th and 48th strongest regardless.
    let mut participants: Vec<TeamId> = prep
        .assignment
        .groups
        .iter()
        .flat_map(|g| g.slots.iter().copied())
        .filter(|&id| id != strong && id != weak)
        .collect();
    participants.sort_by(|&a, &b| {
        adjusted_elo(table, b).partial_cmp(&adjusted_elo(table, a)).unwrap().then(a.cmp(&b))
    });
    let mut rank_of = vec![0usize; table.len()];
    for (i, &id) in participants.iter().enumerate() {
        rank_of[id.0 as usize] = i + 1;
    }
    rank_of[strong.0 as usize] = 47;
    rank_of[weak.0 as usize] = 48;

    for sim in 0..cfg.sims_per_draw {
        let mut sim_rng = derive_stream(cfg.master_seed, &[DOMAIN_SIM, draw_idx, sim]);
        let out = run_tournament(table, cfg.format, &prep.assignment, &mut sim_rng);
        acc.runs += 1;

        for id in table.ids() {
            if let Some(level) = out.reach[id.0 as usize] {
                let s = &mut acc.slots[slot_of(id)];
                for l in 1..=level {
                    s.reach[l as usize] += 1;
                }
                s.matches_sum += u64::from(out.matches_played[id.0 as usize]);
            }
        }
        debug_assert_eq!(out.reach[out.champion.0 as usize], Some(CHAMPION_LEVEL));

        for group in &out.groups {
            for (slot, rec) in group.members.iter().zip(&group.stakeless) {
                let s = &mut acc.slots[slot_of(*slot)];
                s.a_min += u64::from(rec.a_min);
                s.a_max += u64::from(rec.a_max);
                s.e_min += u64::from(rec.e_min);
                s.e_max += u64::from(rec.e_max);
                s.w_min += rec.w_min;
                s.w_22 += rec.w_22.unwrap_or(0.0);
                s.w_31 += rec.w_31.unwrap_or(0.0);
            }
        }

        for m in &out.matches {
            let gap = (adjusted_elo(table, m.team_a) - adjusted_elo(table, m.team_b)).abs();
            let st = &mut acc.stages[stage_index(m.stage)];
            st.gap_sum += gap;
            st.matches += 1;
            let worse_rank = rank_of[m.team_a.0 as usize].max(rank_of[m.team_b.0 as usize]);
            acc.all_rank_hist[worse_rank] += 1;
            acc.all_matches += 1;
            if m.stage == Stage::Group {
                acc.group_rank_hist[worse_rank] += 1;
                acc.group_matches += 1;
                acc.slots[slot_of(m.team_a)].group_gap_sum += gap;
                acc.slots[slot_of(m.team_b)].group_gap_sum += gap;
            }
        }
    }
    Ok(acc)
}

/// Runs the full experiment and aggregates every metric.
pub fn run_monte_carlo(table: &TeamTable, cfg: &RunConfig) -> Result<MetricsReport> {
    cfg.validate()?;
    let direct_slots = direct_slot_map(table);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let partials: Vec<Result<Acc>> = pool.install(|| {
        (0..cfg.num_draws)
            .into_par_iter()
            .map(|d| run_draw(table, cfg, &direct_slots, d))
            .collect()
    });

    // fixed-order reduction keeps floating-point sums thread-count invariant
    let mut acc = Acc::new();
    for partial in partials {
        acc.merge(&partial?);
    }
    Ok(build_report(table, cfg, &acc))
}

fn build_report(table: &TeamTable, cfg: &RunConfig, acc: &Acc) -> MetricsReport {
    let n = acc.runs as f64;
    let official = cfg.format == FormatKind::Official;

    let mut per_team = Vec::with_capacity(SLOTS);
    for (slot, s) in acc.slots.iter().enumerate() {
        let (name, elo) = match slot {
            SLOT_WINNER_STRONG => ("Play-off winner (stronger)".to_string(), None),
            SLOT_WINNER_WEAK => ("Play-off winner (weaker)".to_string(), None),
            _ => {
                let id = table.direct_qualifiers()[slot];
                (table.team(id).name.clone(), Some(table.team(id).elo))
            }
        };
        let p = |count: u64| count as f64 / n;
        per_team.push(PerTeamRow {
            slot,
            name,
            elo,
            p_knockout: p(s.reach[1]),
            p_round_of_16: p(s.reach[2]),
            p_quarter_final: p(s.reach[3]),
            p_semi_final: p(s.reach[4]),
            p_final: p(s.reach[5]),
            p_champion: p(s.reach[6]),
            expected_matches: s.matches_sum as f64 / n,
            mean_group_elo_gap: s.group_gap_sum / (3.0 * n),
            s_a_min: p(s.a_min),
            s_a_max: p(s.a_max),
            s_e_min: p(s.e_min),
            s_e_max: p(s.e_max),
            s_w_min: s.w_min / n,
            s_w_22: official.then(|| s.w_22 / n),
            s_w_31: official.then(|| s.w_31 / n),
        });
    }

    let per_stage = STAGES
        .iter()
        .zip(&acc.stages)
        .filter(|(_, st)| st.matches > 0)
        .map(|(&stage, st)| StageRow {
            stage: stage.label(),
            matches: st.matches,
            mean_elo_gap: st.gap_sum / st.matches as f64,
        })
        .collect();

    let mut top_k = Vec::new();
    let mut all_below = 0u64;
    let mut group_below = 0u64;
    let mut hist_pos = 0usize;
    for k in 2..=TOP_K_MAX {
        while hist_pos <= k {
            all_below += acc.all_rank_hist[hist_pos];
            group_below += acc.group_rank_hist[hist_pos];
            hist_pos += 1;
        }
        top_k.push(TopKRow {
            k,
            all_ratio: all_below as f64 / acc.all_matches as f64,
            group_ratio: group_below as f64 / acc.group_matches as f64,
        });
    }

    let avg = |f: &dyn Fn(&PerTeamRow) -> f64| per_team.iter().map(|r| f(r)).sum::<f64>() / SLOTS as f64;
    let aggregates = Aggregates {
        avg_elo_difference: acc.stages[stage_index(Stage::Group)].gap_sum
            / acc.stages[stage_index(Stage::Group)].matches as f64,
        s_a_min: avg(&|r| r.s_a_min),
        s_a_max: avg(&|r| r.s_a_max),
        s_e_min: avg(&|r| r.s_e_min),
        s_e_max: avg(&|r| r.s_e_max),
        s_w_min: avg(&|r| r.s_w_min),
        s_w_22: official.then(|| avg(&|r| r.s_w_22.unwrap())),
        s_w_31: official.then(|| avg(&|r| r.s_w_31.unwrap())),
    };

    MetricsReport {
        format: cfg.format,
        num_draws: cfg.num_draws,
        sims_per_draw: cfg.sims_per_draw,
        master_seed: cfg.master_seed,
        per_team,
        per_stage,
        top_k,
        aggregates,
    }
}

/// Natural pot (1-based) of a direct qualifier in a format.
pub fn natural_pot(table: &TeamTable, format: FormatKind, team: TeamId) -> Result<u8> {
    if table.team(team).playoff_entrant {
        return Err(Error::InvalidTanking(format!(
            "{} reaches the tournament via the play-offs",
            table.team(team).name
        )));
    }
    let slate = table.playoff_slate();
    let pots = assign_pots(table, format, slate.seeded)?;
    Ok(pots
        .pots
        .iter()
        .position(|p| p.contains(&team))
        .map(|p| p as u8 + 1)
        .expect("every direct qualifier has a pot"))
}

/// Own pot -> the strongest pot of the other tier a team could drop into by
/// tanking (imbalanced format).
const TANKING_TARGETS: [(u8, u8); 7] =
    [(1, 3), (2, 3), (3, 5), (4, 5), (5, 6), (6, 7), (7, 8)];

#[derive(Debug, Clone, Serialize)]
pub struct TankingResult {
    pub team: String,
    pub from_pot: u8,
    pub to_pot: u8,
    /// Probability of reaching the round of 16 from the natural pot.
    pub baseline_p_r16: f64,
    /// The same probability when drawn from the target pot.
    pub tanked_p_r16: f64,
    /// `tanked - baseline` in percentage points.
    pub delta_pp: f64,
}

/// Reruns the Monte Carlo experiment with the team demoted to the strongest
/// pot of the other tier and compares its round-of-16 probability.
pub fn tanking_experiment(
    table: &TeamTable,
    team: TeamId,
    target_pot: u8,
    cfg: &RunConfig,
) -> Result<TankingResult> {
    if cfg.format != FormatKind::Imbalanced {
        return Err(Error::InvalidTanking(
            "tanking across tiers only exists in the imbalanced format".into(),
        ));
    }
    let from_pot = natural_pot(table, cfg.format, team)?;
    if !TANKING_TARGETS.contains(&(from_pot, target_pot)) {
        return Err(Error::InvalidTanking(format!(
            "pot {from_pot} cannot tank into pot {target_pot}; the weaker cross-tier pot is {}",
            TANKING_TARGETS
                .iter()
                .find(|&&(f, _)| f == from_pot)
                .map(|&(_, t)| t.to_string())
                .unwrap_or_else(|| "nonexistent".into())
        )));
    }

    let baseline_cfg = RunConfig { pot_override: None, ..cfg.clone() };
    let tanked_cfg = RunConfig {
        pot_override: Some(PotOverride { team, pot: target_pot }),
        ..cfg.clone()
    };
    let baseline = run_monte_carlo(table, &baseline_cfg)?;
    let tanked = run_monte_carlo(table, &tanked_cfg)?;
    let slot = direct_slot_map(table)[team.0 as usize].expect("direct qualifier");
    let b = baseline.per_team[slot].p_round_of_16;
    let t = tanked.per_team[slot].p_round_of_16;
    Ok(TankingResult {
        team: table.team(team).name.clone(),
        from_pot,
        to_pot: target_pot,
        baseline_p_r16: b,
        tanked_p_r16: t,
        delta_pp: (t - b) * 100.0,
    })
}
