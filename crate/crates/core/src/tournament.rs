//! A full tournament run: inter-confederation play-offs, the group draw,
//! twelve groups and the knockout phase of either format.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::draw::{sample_draw, DrawConstraints, DrawInstance, GroupAssignment};
use crate::elo::{simulate_knockout_match, win_expectancy};
use crate::error::Result;
use crate::format::{FormatKind, GROUP_COUNT};
use crate::group::{
    make_schedule, play_group, rank_group, stats_for, GroupSchedule, GroupScores, ThirdPlaceEntry,
    rank_third_placed,
};
use crate::stakeless::{evaluate_group, PrizePartition, StakelessRecord};
use crate::team::{adjusted_elo, assign_pots_with_override, PotOverride, Pots, TeamId, TeamTable};

/// Rounds of a tournament run. The play-off round exists only in the
/// imbalanced format, the round of 32 only in the official one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    Group,
    RoundOf32,
    PlayoffRound,
    RoundOf16,
    QuarterFinal,
    SemiFinal,
    Final,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Self::Group => "group",
            Self::RoundOf32 => "round_of_32",
            Self::PlayoffRound => "playoff_round",
            Self::RoundOf16 => "round_of_16",
            Self::QuarterFinal => "quarter_final",
            Self::SemiFinal => "semi_final",
            Self::Final => "final",
        }
    }

    /// Progress level granted by appearing at this stage; the champion gets
    /// one more than the final.
    fn level(self) -> u8 {
        match self {
            Self::Group => 0,
            Self::RoundOf32 | Self::PlayoffRound => 1,
            Self::RoundOf16 => 2,
            Self::QuarterFinal => 3,
            Self::SemiFinal => 4,
            Self::Final => 5,
        }
    }
}

/// The champion's progress level (`Stage::Final` plus one).
pub const CHAMPION_LEVEL: u8 = 6;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MatchRecord {
    pub stage: Stage,
    pub group: Option<usize>,
    pub team_a: TeamId,
    pub team_b: TeamId,
    /// Goals, for group matches.
    pub score: Option<(u32, u32)>,
    /// Winner, for knockout matches.
    pub winner: Option<TeamId>,
    /// Last-round group matches only: the side has nothing left to play for.
    pub stakeless_a: bool,
    pub stakeless_b: bool,
}

#[derive(Debug, Clone)]
pub struct GroupOutcome {
    pub members: [TeamId; 4],
    pub schedule: GroupSchedule,
    pub scores: GroupScores,
    /// Slots from best to worst.
    pub ranking: [usize; 4],
    pub stakeless: [StakelessRecord; 4],
}

#[derive(Debug, Clone)]
pub struct TournamentOutcome {
    pub format: FormatKind,
    pub groups: Vec<GroupOutcome>,
    /// Official format: the twelve third-placed teams, best first.
    pub third_place_order: Option<Vec<ThirdPlaceEntry>>,
    pub matches: Vec<MatchRecord>,
    /// Progress level by table id; `None` for teams that did not participate.
    pub reach: Vec<Option<u8>>,
    /// Matches played by table id.
    pub matches_played: Vec<u32>,
    pub champion: TeamId,
}

/// The play-off draw and everything else fixed before a tournament run.
#[derive(Debug, Clone)]
pub struct PreparedDraw {
    pub playoff_winners: [TeamId; 2],
    pub pots: Pots,
    pub assignment: GroupAssignment,
}

/// Simulates the inter-confederation play-offs: the four unseeded entrants
/// meet first-vs-fourth and second-vs-third by rating, and each seeded
/// entrant then faces a winner (the higher seed that of the 1-vs-4 clash).
pub fn simulate_interconf_playoffs<R: Rng + ?Sized>(
    table: &TeamTable,
    rng: &mut R,
) -> [TeamId; 2] {
    let slate = table.playoff_slate();
    let [s0, s1] = slate.seeded;
    let [u0, u1, u2, u3] = slate.unseeded;
    let wa = simulate_knockout_match(table, u0, u3, rng);
    let wb = simulate_knockout_match(table, u1, u2, rng);
    [
        simulate_knockout_match(table, s0, wa, rng),
        simulate_knockout_match(table, s1, wb, rng),
    ]
}

/// Exact expected ratings of the stronger and weaker play-off winner,
/// obtained by enumerating the eight outcome combinations of the bracket.
pub fn playoff_winner_elo_expectations(table: &TeamTable) -> (f64, f64) {
    let slate = table.playoff_slate();
    let dist = |seed: TeamId, x: TeamId, y: TeamId| {
        let e = |id| adjusted_elo(table, id);
        let px = win_expectancy(e(x), e(y));
        let semi = [(x, px), (y, 1.0 - px)];
        let mut out = Vec::new();
        let mut p_seed = 0.0;
        for (t, p) in semi {
            let ps = win_expectancy(e(seed), e(t));
            p_seed += p * ps;
            out.push((table.team(t).elo, p * (1.0 - ps)));
        }
        out.push((table.team(seed).elo, p_seed));
        out
    };
    let [s0, s1] = slate.seeded;
    let [u0, u1, u2, u3] = slate.unseeded;
    let da = dist(s0, u0, u3);
    let db = dist(s1, u1, u2);
    let mut stronger = 0.0;
    let mut weaker = 0.0;
    for &(ea, pa) in &da {
        for &(eb, pb) in &db {
            stronger += pa * pb * ea.max(eb);
            weaker += pa * pb * ea.min(eb);
        }
    }
    (stronger, weaker)
}

/// Runs the play-offs, assigns the pots and draws the groups. Everything a
/// batch of tournament runs shares.
pub fn prepare_draw<R: Rng + ?Sized>(
    table: &TeamTable,
    format: FormatKind,
    constraints: &DrawConstraints,
    pot_override: Option<PotOverride>,
    rng: &mut R,
) -> Result<PreparedDraw> {
    let playoff_winners = simulate_interconf_playoffs(table, rng);
    let pots = assign_pots_with_override(table, format, playoff_winners, pot_override)?;
    let instance = DrawInstance::for_format(format, &pots);
    let assignment = sample_draw(&instance, table.teams(), constraints, rng)?;
    Ok(PreparedDraw { playoff_winners, pots, assignment })
}

struct Run<'a> {
    table: &'a TeamTable,
    matches: Vec<MatchRecord>,
    reach: Vec<Option<u8>>,
    matches_played: Vec<u32>,
}

impl<'a> Run<'a> {
    fn new(table: &'a TeamTable) -> Self {
        Self {
            table,
            matches: Vec::with_capacity(103),
            reach: vec![None; table.len()],
            matches_played: vec![0; table.len()],
        }
    }

    fn touch(&mut self, id: TeamId, level: u8) {
        let r = &mut self.reach[id.0 as usize];
        *r = Some(r.unwrap_or(0).max(level));
        self.matches_played[id.0 as usize] += 1;
    }

    fn group_match(
        &mut self,
        group: usize,
        a: TeamId,
        b: TeamId,
        score: (u32, u32),
        stakeless: (bool, bool),
    ) {
        self.touch(a, 0);
        self.touch(b, 0);
        self.matches.push(MatchRecord {
            stage: Stage::Group,
            group: Some(group),
            team_a: a,
            team_b: b,
            score: Some(score),
            winner: None,
            stakeless_a: stakeless.0,
            stakeless_b: stakeless.1,
        });
    }

    fn knockout<R: Rng + ?Sized>(
        &mut self,
        stage: Stage,
        a: TeamId,
        b: TeamId,
        rng: &mut R,
    ) -> TeamId {
        let winner = simulate_knockout_match(self.table, a, b, rng);
        self.touch(a, stage.level());
        self.touch(b, stage.level());
        self.matches.push(MatchRecord {
            stage,
            group: None,
            team_a: a,
            team_b: b,
            score: None,
            winner: Some(winner),
            stakeless_a: false,
            stakeless_b: false,
        });
        winner
    }

    /// Plays a full knockout round; winners of matches `2i` and `2i + 1`
    /// meet in the next one.
    fn round<R: Rng + ?Sized>(
        &mut self,
        stage: Stage,
        entrants: &[TeamId],
        rng: &mut R,
    ) -> Vec<TeamId> {
        entrants
            .chunks_exact(2)
            .map(|pair| self.knockout(stage, pair[0], pair[1], rng))
            .collect()
    }
}

/// Group letters whose winners meet a third-placed team in the round of 32.
pub const THIRD_OPPONENT_GROUPS: [usize; 8] = [1, 2, 4, 5, 7, 8, 10, 11];

/// Plays one tournament with the given group assignment.
pub fn run_tournament<R: Rng + ?Sized>(
    table: &TeamTable,
    format: FormatKind,
    assignment: &GroupAssignment,
    rng: &mut R,
) -> TournamentOutcome {
    let mut run = Run::new(table);
    let mut groups = Vec::with_capacity(GROUP_COUNT);

    for (g, drawn) in assignment.groups.iter().enumerate() {
        let members: [TeamId; 4] = drawn.slots.clone().try_into().expect("groups of four");
        let schedule = make_schedule(rng);
        let scores = play_group(table, &members, &schedule, rng);

        // the state before the last round, for the stakeless indicators
        let mut first_two = GroupScores::default();
        for round in &schedule.rounds[..2] {
            for &(a, b) in round {
                let (ga, gb) = scores.get(a, b).unwrap();
                first_two.set(a, b, ga, gb);
            }
        }
        let tier_partition = match format {
            FormatKind::Official => None,
            FormatKind::Imbalanced => Some(PrizePartition::for_tier(drawn.tier)),
        };
        let stakeless =
            evaluate_group(table, &members, &first_two, schedule.rounds[2], tier_partition);

        for (r, round) in schedule.rounds.iter().enumerate() {
            for &(a, b) in round {
                let flags = if r == 2 {
                    (stakeless[a].w_min > 0.0, stakeless[b].w_min > 0.0)
                } else {
                    (false, false)
                };
                run.group_match(g, members[a], members[b], scores.get(a, b).unwrap(), flags);
            }
        }

        let elo = members.map(|id| table.team(id).elo);
        let ranking = rank_group(&scores, elo);
        groups.push(GroupOutcome { members, schedule, scores, ranking, stakeless });
    }

    let team_at = |g: usize, rank: usize| groups[g].members[groups[g].ranking[rank]];

    let (champion, third_place_order) = match format {
        FormatKind::Official => {
            let thirds: Vec<ThirdPlaceEntry> = (0..GROUP_COUNT)
                .map(|g| {
                    let slot = groups[g].ranking[2];
                    ThirdPlaceEntry {
                        team: groups[g].members[slot],
                        stats: stats_for(&groups[g].scores, &[0, 1, 2, 3])[slot],
                        elo: table.team(groups[g].members[slot]).elo,
                        group: g,
                    }
                })
                .collect();
            let third_order = rank_third_placed(thirds);
            let mut qualified_thirds: Vec<TeamId> =
                third_order[..8].iter().map(|e| e.team).collect();
            qualified_thirds.shuffle(rng);

            let w = |g: usize| team_at(g, 0);
            let ru = |g: usize| team_at(g, 1);
            let t = |k: usize| qualified_thirds[k];
            let slots: [(TeamId, TeamId); 16] = [
                (w(1), t(0)),
                (w(0), ru(1)),
                (w(4), t(1)),
                (ru(0), ru(2)),
                (w(2), t(2)),
                (w(3), ru(4)),
                (w(5), t(3)),
                (ru(3), ru(5)),
                (w(7), t(4)),
                (w(6), ru(7)),
                (w(10), t(5)),
                (ru(6), ru(8)),
                (w(8), t(6)),
                (w(9), ru(10)),
                (w(11), t(7)),
                (ru(9), ru(11)),
            ];
            let mut alive: Vec<TeamId> = slots
                .iter()
                .map(|&(a, b)| run.knockout(Stage::RoundOf32, a, b, rng))
                .collect();
            for stage in [Stage::RoundOf16, Stage::QuarterFinal, Stage::SemiFinal, Stage::Final] {
                alive = run.round(stage, &alive, rng);
            }
            (alive[0], Some(third_order))
        }
        FormatKind::Imbalanced => {
            let t1_winners: Vec<TeamId> = (0..8).map(|g| team_at(g, 0)).collect();
            let t1_runners: Vec<TeamId> = (0..8).map(|g| team_at(g, 1)).collect();
            let mut t2_qualified: Vec<TeamId> =
                (8..GROUP_COUNT).flat_map(|g| [team_at(g, 0), team_at(g, 1)]).collect();
            t2_qualified.shuffle(rng);
            let mut po_winners: Vec<TeamId> = t1_runners
                .iter()
                .zip(&t2_qualified)
                .map(|(&a, &b)| run.knockout(Stage::PlayoffRound, a, b, rng))
                .collect();
            po_winners.shuffle(rng);
            let mut alive: Vec<TeamId> = t1_winners
                .iter()
                .zip(&po_winners)
                .map(|(&a, &b)| run.knockout(Stage::RoundOf16, a, b, rng))
                .collect();
            for stage in [Stage::QuarterFinal, Stage::SemiFinal, Stage::Final] {
                alive = run.round(stage, &alive, rng);
            }
            (alive[0], None)
        }
    };

    let champ_slot = &mut run.reach[champion.0 as usize];
    *champ_slot = Some(CHAMPION_LEVEL);

    debug_assert_eq!(run.matches.len(), format.match_budget());
    TournamentOutcome {
        format,
        groups,
        third_place_order,
        matches: run.matches,
        reach: run.reach,
        matches_played: run.matches_played,
        champion,
    }
}
