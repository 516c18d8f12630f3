//! Round-robin groups: scheduling, simulation, standings and tie-breaking.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::elo::simulate_group_match;
use crate::team::{TeamId, TeamTable};

/// A match between group slots (0-based; slot k holds the team drawn from
/// the k-th strongest pot of the group).
pub type SlotPair = (usize, usize);

/// The three possible simultaneous last rounds, named after the opponent of
/// the team drawn from the strongest pot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LastRoundVariant {
    OneVsTwo,
    OneVsThree,
    OneVsFour,
}

impl LastRoundVariant {
    pub const ALL: [Self; 3] = [Self::OneVsTwo, Self::OneVsThree, Self::OneVsFour];

    pub fn matches(self) -> [SlotPair; 2] {
        match self {
            Self::OneVsTwo => [(0, 1), (2, 3)],
            Self::OneVsThree => [(0, 2), (1, 3)],
            Self::OneVsFour => [(0, 3), (1, 2)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::OneVsTwo => "1v2&3v4",
            Self::OneVsThree => "1v3&2v4",
            Self::OneVsFour => "1v4&2v3",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroupSchedule {
    pub rounds: [[SlotPair; 2]; 3],
    pub last_round_variant: LastRoundVariant,
}

/// Draws the last-round variant uniformly; the two complementary matchings
/// fill rounds 1-2 in random order.
pub fn make_schedule<R: Rng + ?Sized>(rng: &mut R) -> GroupSchedule {
    let variant = *LastRoundVariant::ALL.choose(rng).unwrap();
    let mut early: Vec<[SlotPair; 2]> = LastRoundVariant::ALL
        .iter()
        .filter(|v| **v != variant)
        .map(|v| v.matches())
        .collect();
    early.shuffle(rng);
    GroupSchedule {
        rounds: [early[0], early[1], variant.matches()],
        last_round_variant: variant,
    }
}

/// All scorelines of one group, keyed by slot pair.
#[derive(Debug, Clone, Default)]
pub struct GroupScores {
    // canonical storage at [min][max] as goals of (min, max)
    scores: [[Option<(u32, u32)>; 4]; 4],
}

impl GroupScores {
    pub fn set(&mut self, a: usize, b: usize, goals_a: u32, goals_b: u32) {
        assert_ne!(a, b);
        if a < b {
            self.scores[a][b] = Some((goals_a, goals_b));
        } else {
            self.scores[b][a] = Some((goals_b, goals_a));
        }
    }

    pub fn get(&self, a: usize, b: usize) -> Option<(u32, u32)> {
        if a < b {
            self.scores[a][b]
        } else {
            self.scores[b][a].map(|(x, y)| (y, x))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TeamStats {
    pub points: u32,
    pub goals_for: u32,
    pub goals_against: u32,
}

impl TeamStats {
    pub fn goal_difference(&self) -> i64 {
        i64::from(self.goals_for) - i64::from(self.goals_against)
    }
}

/// Standings restricted to matches where both slots belong to `set`.
pub fn stats_for(scores: &GroupScores, set: &[usize]) -> [TeamStats; 4] {
    let mut out = [TeamStats::default(); 4];
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if let Some((ga, gb)) = scores.get(a, b) {
                out[a].goals_for += ga;
                out[a].goals_against += gb;
                out[b].goals_for += gb;
                out[b].goals_against += ga;
                match ga.cmp(&gb) {
                    std::cmp::Ordering::Greater => out[a].points += 3,
                    std::cmp::Ordering::Less => out[b].points += 3,
                    std::cmp::Ordering::Equal => {
                        out[a].points += 1;
                        out[b].points += 1;
                    }
                }
            }
        }
    }
    out
}

/// Simulates all six matches of a group following the schedule.
pub fn play_group<R: Rng + ?Sized>(
    table: &TeamTable,
    members: &[TeamId; 4],
    schedule: &GroupSchedule,
    rng: &mut R,
) -> GroupScores {
    let mut scores = GroupScores::default();
    for round in &schedule.rounds {
        for &(a, b) in round {
            let s = simulate_group_match(table, members[a], members[b], rng);
            scores.set(a, b, s.goals_a, s.goals_b);
        }
    }
    scores
}

/// Final group order (best slot first).
///
/// Criteria: points; then, within each tied set, head-to-head points, goal
/// difference and goals scored recomputed among the still-tied teams after
/// every prune; then overall goal difference, overall goals scored, Elo
/// rating and finally slot position.
pub fn rank_group(scores: &GroupScores, elo: [f64; 4]) -> [usize; 4] {
    let overall = stats_for(scores, &[0, 1, 2, 3]);
    let mut by_points: Vec<usize> = (0..4).collect();
    by_points.sort_by(|&a, &b| overall[b].points.cmp(&overall[a].points).then(a.cmp(&b)));

    let mut out = Vec::with_capacity(4);
    for cell in partition_by(&by_points, |&s| overall[s].points) {
        out.extend(order_tied(&cell, scores, &overall, &elo));
    }
    out.try_into().unwrap()
}

/// Orders a set of teams tied on points, restarting from the head-to-head
/// criteria on every strictly smaller tied subset.
fn order_tied(set: &[usize], scores: &GroupScores, overall: &[TeamStats; 4], elo: &[f64; 4]) -> Vec<usize> {
    if set.len() == 1 {
        return set.to_vec();
    }
    let sub = stats_for(scores, set);
    let criteria: [&dyn Fn(usize) -> f64; 7] = [
        &|s| f64::from(sub[s].points),
        &|s| sub[s].goal_difference() as f64,
        &|s| f64::from(sub[s].goals_for),
        &|s| overall[s].goal_difference() as f64,
        &|s| f64::from(overall[s].goals_for),
        &|s| elo[s],
        &|s| -(s as f64),
    ];
    for key in criteria {
        let mut sorted = set.to_vec();
        sorted.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap().then(a.cmp(&b)));
        let cells = partition_by(&sorted, |&s| key(s).to_bits());
        if cells.len() > 1 {
            return cells.into_iter().flat_map(|c| order_tied(&c, scores, overall, elo)).collect();
        }
    }
    unreachable!("slot index always separates")
}

fn partition_by<K: PartialEq>(sorted: &[usize], key: impl Fn(&usize) -> K) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &s in sorted {
        match cells.last_mut() {
            Some(cell) if key(&cell[0]) == key(&s) => cell.push(s),
            _ => cells.push(vec![s]),
        }
    }
    cells
}

/// One third-placed team's record for the cross-group comparison.
#[derive(Debug, Clone, Copy)]
pub struct ThirdPlaceEntry {
    pub team: TeamId,
    pub stats: TeamStats,
    pub elo: f64,
    pub group: usize,
}

/// Orders the twelve third-placed teams by points, overall goal difference,
/// goals scored and Elo; the first eight qualify in the official format.
pub fn rank_third_placed(mut entries: Vec<ThirdPlaceEntry>) -> Vec<ThirdPlaceEntry> {
    entries.sort_by(|a, b| {
        b.stats
            .points
            .cmp(&a.stats.points)
            .then(b.stats.goal_difference().cmp(&a.stats.goal_difference()))
            .then(b.stats.goals_for.cmp(&a.stats.goals_for))
            .then(b.elo.partial_cmp(&a.elo).unwrap())
            .then(a.group.cmp(&b.group))
    });
    entries
}
