//! Detection and classification of stakeless last-round matches.
//!
//! A match is stakeless for a team when no outcome of the simultaneous last
//! round can move the team between prize classes. Detection enumerates the
//! nine win/draw/loss combinations of the two remaining fixtures. Within a
//! combination the points are fixed; ties are resolved exactly where the
//! deciding criterion is already determined (head-to-head points, and goal
//! criteria whose margins cannot change any more), and treated as open in
//! both directions wherever an unbounded goal margin could still swing them.
//! The openness assumption is conservative: the detector never declares a
//! match stakeless that full scoreline enumeration could still turn around.

use serde::Serialize;

use crate::elo::win_expectancy;
use crate::error::{Error, Result};
use crate::format::Tier;
use crate::group::{rank_group, stats_for, GroupScores, SlotPair, TeamStats};
use crate::team::{match_ratings, TeamId, TeamTable};

/// Grouping of final ranks 1-4 into outcome-equivalent prize classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrizePartition {
    /// Top 2 qualify, rest eliminated (official, two advance).
    Q2,
    /// Top 3 qualify (official, third place suffices).
    Q3,
    /// Three prizes: top 2, third, fourth (official, third place unknown).
    ThreePrize,
    /// Tier 1 groups: winner to R16, runner-up to play-offs, rest out.
    Tier1,
    /// Tier 2 groups: top 2 to play-offs, rest out.
    Tier2,
}

impl PrizePartition {
    /// Class index of a final rank (1-based rank).
    pub fn class_of_rank(self, rank: usize) -> u8 {
        debug_assert!((1..=4).contains(&rank));
        let map: [u8; 4] = match self {
            Self::Q2 | Self::Tier2 => [0, 0, 1, 1],
            Self::Q3 => [0, 0, 0, 1],
            Self::ThreePrize => [0, 0, 1, 2],
            Self::Tier1 => [0, 1, 2, 2],
        };
        map[rank - 1]
    }

    /// Classes whose members advance (or may still advance).
    fn qualifying_classes(self) -> &'static [u8] {
        match self {
            Self::Q2 | Self::Q3 | Self::Tier2 | Self::ThreePrize => &[0],
            Self::Tier1 => &[0, 1],
        }
    }

    /// Classes whose members are eliminated.
    fn eliminated_classes(self) -> &'static [u8] {
        match self {
            Self::Q2 | Self::Tier2 => &[1],
            Self::Q3 => &[1],
            Self::ThreePrize => &[2],
            Self::Tier1 => &[2],
        }
    }

    pub fn for_tier(tier: Tier) -> Self {
        match tier {
            Tier::Tier1 => Self::Tier1,
            Tier::Tier2 => Self::Tier2,
        }
    }
}

/// Result of a match from the perspective of an ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Res {
    WinA,
    Draw,
    WinB,
}

impl Res {
    fn points(self) -> (u32, u32) {
        match self {
            Self::WinA => (3, 0),
            Self::Draw => (1, 1),
            Self::WinB => (0, 3),
        }
    }

    fn flip(self) -> Self {
        match self {
            Self::WinA => Self::WinB,
            Self::Draw => Self::Draw,
            Self::WinB => Self::WinA,
        }
    }
}

/// One enumerated last round: the two fixtures plus their win/draw/loss
/// outcomes.
#[derive(Debug, Clone, Copy)]
struct LastRound {
    fixtures: [SlotPair; 2],
    outcome: [Res; 2],
}

impl LastRound {
    /// Index of the team's last-round fixture.
    fn fixture_of(&self, team: usize) -> usize {
        usize::from(self.fixtures[0].0 != team && self.fixtures[0].1 != team)
    }

    fn is_draw_for(&self, team: usize) -> bool {
        self.outcome[self.fixture_of(team)] == Res::Draw
    }

    /// The result between `a` and `b` if their match is in the last round.
    fn result_between(&self, a: usize, b: usize) -> Option<Res> {
        for (f, &o) in self.fixtures.iter().zip(&self.outcome) {
            if *f == (a, b) {
                return Some(o);
            }
            if *f == (b, a) {
                return Some(o.flip());
            }
        }
        None
    }
}

fn fixed_result(scores12: &GroupScores, a: usize, b: usize) -> Res {
    let (ga, gb) = scores12.get(a, b).expect("first-two-rounds match played");
    match ga.cmp(&gb) {
        std::cmp::Ordering::Greater => Res::WinA,
        std::cmp::Ordering::Equal => Res::Draw,
        std::cmp::Ordering::Less => Res::WinB,
    }
}

/// Bitmasks of the final ranks (bit r-1 for rank r) each slot can still
/// reach over all outcomes of the last round.
pub fn achievable_rank_masks(
    scores12: &GroupScores,
    fixtures: [SlotPair; 2],
    elo: [f64; 4],
) -> [u8; 4] {
    let prev = stats_for(scores12, &[0, 1, 2, 3]);
    let mut masks = [0u8; 4];
    for o0 in [Res::WinA, Res::Draw, Res::WinB] {
        for o1 in [Res::WinA, Res::Draw, Res::WinB] {
            let last = LastRound { fixtures, outcome: [o0, o1] };
            let mut pts = [prev[0].points, prev[1].points, prev[2].points, prev[3].points];
            for (f, &o) in fixtures.iter().zip(&last.outcome) {
                let (pa, pb) = o.points();
                pts[f.0] += pa;
                pts[f.1] += pb;
            }
            let mut order: Vec<usize> = (0..4).collect();
            order.sort_by(|&a, &b| pts[b].cmp(&pts[a]).then(a.cmp(&b)));
            let mut pos = 0usize;
            let mut i = 0;
            while i < 4 {
                let mut j = i;
                while j < 4 && pts[order[j]] == pts[order[i]] {
                    j += 1;
                }
                for sub in resolve(&order[i..j], scores12, &last, &prev, &elo) {
                    for &t in &sub {
                        for r in pos..pos + sub.len() {
                            masks[t] |= 1 << r;
                        }
                    }
                    pos += sub.len();
                }
                i = j;
            }
        }
    }
    masks
}

/// Orders a set tied on points into sub-cells; the teams inside a returned
/// sub-cell are treated as able to finish in any order.
fn resolve(
    cell: &[usize],
    scores12: &GroupScores,
    last: &LastRound,
    prev: &[TeamStats; 4],
    elo: &[f64; 4],
) -> Vec<Vec<usize>> {
    if cell.len() == 1 {
        return vec![cell.to_vec()];
    }
    let mixed = || vec![cell.to_vec()];

    // head-to-head points among the tied set: every mutual result is known,
    // either from the first two rounds or from the enumerated outcome
    let mut h2h = [0u32; 4];
    let mut last_in_cell_decisive = false;
    let mut fixed_h2h_gd = [0i64; 4];
    for (i, &a) in cell.iter().enumerate() {
        for &b in &cell[i + 1..] {
            let res = match last.result_between(a, b) {
                Some(r) => {
                    last_in_cell_decisive |= r != Res::Draw;
                    r
                }
                None => {
                    let r = fixed_result(scores12, a, b);
                    if let Some((ga, gb)) = scores12.get(a, b) {
                        fixed_h2h_gd[a] += i64::from(ga) - i64::from(gb);
                        fixed_h2h_gd[b] += i64::from(gb) - i64::from(ga);
                    }
                    r
                }
            };
            let (pa, pb) = res.points();
            h2h[a] += pa;
            h2h[b] += pb;
        }
    }
    if let Some(cells) = split_by(cell, |t| h2h[t]) {
        return cells
            .into_iter()
            .flat_map(|c| resolve(&c, scores12, last, prev, elo))
            .collect();
    }

    // Head-to-head goal difference: an in-cell last-round win or loss has a
    // free margin, so the order is open; draws pin every margin.
    if last_in_cell_decisive {
        return mixed();
    }
    if let Some(cells) = split_by(cell, |t| fixed_h2h_gd[t]) {
        return cells
            .into_iter()
            .flat_map(|c| resolve(&c, scores12, last, prev, elo))
            .collect();
    }
    if cell.len() > 2 {
        // head-to-head goals scored: an in-cell draw still lifts the goals
        // of its two participants relative to the third, so open
        return mixed();
    }

    // a two-team tie with fixed head-to-head; the remaining criteria are
    // overall goal difference, overall goals, rating and slot position
    let (a, b) = (cell[0], cell[1]);
    if !(last.is_draw_for(a) && last.is_draw_for(b)) {
        // at least one free winning margin changes an overall goal tally
        return mixed();
    }
    if prev[a].goal_difference() != prev[b].goal_difference() {
        return order_pair(a, b, prev[a].goal_difference() > prev[b].goal_difference());
    }
    if last.result_between(a, b).is_none() {
        // separate drawn matches: each team can inflate its own goals
        return mixed();
    }
    // the tied teams drew against each other, so even their goal totals
    // move in lockstep
    if prev[a].goals_for != prev[b].goals_for {
        return order_pair(a, b, prev[a].goals_for > prev[b].goals_for);
    }
    if elo[a] != elo[b] {
        return order_pair(a, b, elo[a] > elo[b]);
    }
    order_pair(a, b, a < b)
}

fn order_pair(a: usize, b: usize, a_first: bool) -> Vec<Vec<usize>> {
    if a_first {
        vec![vec![a], vec![b]]
    } else {
        vec![vec![b], vec![a]]
    }
}

/// Partition by a key in descending order; `None` when the key does not
/// separate anyone.
fn split_by<K: Ord + Copy>(cell: &[usize], key: impl Fn(usize) -> K) -> Option<Vec<Vec<usize>>> {
    let mut sorted = cell.to_vec();
    sorted.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b)));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for t in sorted {
        match cells.last_mut() {
            Some(c) if key(c[0]) == key(t) => c.push(t),
            _ => cells.push(vec![t]),
        }
    }
    (cells.len() > 1).then_some(cells)
}

/// Prize classes touched by a rank mask.
pub fn class_mask(rank_mask: u8, partition: PrizePartition) -> u8 {
    let mut classes = 0u8;
    for rank in 1..=4 {
        if rank_mask & (1 << (rank - 1)) != 0 {
            classes |= 1 << partition.class_of_rank(rank);
        }
    }
    classes
}

/// True iff the team's reachable prize classes form a singleton.
pub fn detect_stakeless(masks: &[u8; 4], team: usize, partition: PrizePartition) -> bool {
    class_mask(masks[team], partition).count_ones() == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StakelessStatus {
    Qualified,
    Eliminated,
    None,
}

/// Locked prize class of a stakeless team.
pub fn classify(masks: &[u8; 4], team: usize, partition: PrizePartition) -> StakelessStatus {
    let classes = class_mask(masks[team], partition);
    if classes.count_ones() != 1 {
        return StakelessStatus::None;
    }
    let locked = classes.trailing_zeros() as u8;
    if partition.qualifying_classes().contains(&locked) {
        StakelessStatus::Qualified
    } else if partition.eliminated_classes().contains(&locked) {
        StakelessStatus::Eliminated
    } else {
        StakelessStatus::None
    }
}

/// Win expectancy of the team against its last-round opponent, on
/// host-adjusted ratings.
pub fn weight(
    table: &TeamTable,
    fixtures: [SlotPair; 2],
    members: &[TeamId; 4],
    team: usize,
) -> f64 {
    let &(a, b) = fixtures
        .iter()
        .find(|&&(a, b)| a == team || b == team)
        .expect("every slot has a last-round fixture");
    let opponent = if a == team { b } else { a };
    let (ra, rb) = match_ratings(table, members[team], members[opponent]);
    win_expectancy(ra, rb)
}

/// Ranks a team can reach on points alone with every tie counted as open;
/// usable before the last round too.
pub fn achievable_ranks_on_points(points: [u32; 4], remaining: &[SlotPair], team: usize) -> u8 {
    let mut mask = 0u8;
    let mut outcome = vec![0u8; remaining.len()];
    loop {
        let mut pts = points;
        for (o, &(a, b)) in outcome.iter().zip(remaining) {
            match o {
                0 => pts[a] += 3,
                1 => {
                    pts[a] += 1;
                    pts[b] += 1;
                }
                _ => pts[b] += 3,
            }
        }
        let above = (0..4).filter(|&j| j != team && pts[j] > pts[team]).count();
        let at_or_above = (0..4).filter(|&j| j != team && pts[j] >= pts[team]).count();
        for rank in above + 1..=at_or_above + 1 {
            mask |= 1 << (rank - 1);
        }
        // advance the mixed-radix outcome counter
        let mut i = 0;
        loop {
            if i == outcome.len() {
                return mask;
            }
            outcome[i] += 1;
            if outcome[i] < 3 {
                break;
            }
            outcome[i] = 0;
            i += 1;
        }
    }
}

/// Ground truth by exhaustive scoreline enumeration: every last-round
/// scoreline pair with goals up to `max_goals` is applied and the group
/// ranked with the full tie-breaking rules.
pub fn oracle_rank_masks(
    rounds12: &GroupScores,
    fixtures: [SlotPair; 2],
    max_goals: u32,
    elo: [f64; 4],
) -> Result<[u8; 4]> {
    if max_goals > 8 {
        return Err(Error::InstanceTooLarge(format!("max_goals {max_goals} > 8")));
    }
    let mut masks = [0u8; 4];
    let (f0, f1) = (fixtures[0], fixtures[1]);
    for g0a in 0..=max_goals {
        for g0b in 0..=max_goals {
            for g1a in 0..=max_goals {
                for g1b in 0..=max_goals {
                    let mut scores = rounds12.clone();
                    scores.set(f0.0, f0.1, g0a, g0b);
                    scores.set(f1.0, f1.1, g1a, g1b);
                    let order = rank_group(&scores, elo);
                    for (rank0, &slot) in order.iter().enumerate() {
                        masks[slot] |= 1 << rank0;
                    }
                }
            }
        }
    }
    Ok(masks)
}

/// Reachable prize classes of one team under exhaustive enumeration.
pub fn oracle_enumerate(
    rounds12: &GroupScores,
    fixtures: [SlotPair; 2],
    team: usize,
    partition: PrizePartition,
    max_goals: u32,
    elo: [f64; 4],
) -> Result<u8> {
    Ok(class_mask(oracle_rank_masks(rounds12, fixtures, max_goals, elo)?[team], partition))
}

/// Per-team stakeless indicators and weighted variants for one group run.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StakelessRecord {
    pub weight: f64,
    /// Official: locked top-2 under Q2. Imbalanced: locked into a
    /// qualifying class of the tier partition.
    pub a_min: bool,
    /// Official: locked top-3 under Q3. Imbalanced: equals `a_min`.
    pub a_max: bool,
    /// Official: locked 4th under Q3. Imbalanced: locked bottom class.
    pub e_min: bool,
    /// Official: locked bottom-2 under Q2. Imbalanced: equals `e_min`.
    pub e_max: bool,
    /// Weighted stakeless indicator under the three-prize partition
    /// (official) or the tier partition (imbalanced).
    pub w_min: f64,
    /// Official only: weighted indicator when two teams qualify.
    pub w_22: Option<f64>,
    /// Official only: weighted indicator when three teams qualify.
    pub w_31: Option<f64>,
}

/// Evaluates all stakeless variants for the four slots of one group, given
/// the scorelines of the first two rounds and the last-round fixtures.
pub fn evaluate_group(
    table: &TeamTable,
    members: &[TeamId; 4],
    scores12: &GroupScores,
    fixtures: [SlotPair; 2],
    tier_partition: Option<PrizePartition>,
) -> [StakelessRecord; 4] {
    let elo = members.map(|id| table.team(id).elo);
    let masks = achievable_rank_masks(scores12, fixtures, elo);
    let mut out = [StakelessRecord::default(); 4];
    for team in 0..4 {
        let w = weight(table, fixtures, members, team);
        let rec = &mut out[team];
        rec.weight = w;
        match tier_partition {
            None => {
                // official: bracket the unknown third-place prize
                let q2 = classify(&masks, team, PrizePartition::Q2);
                let q3 = classify(&masks, team, PrizePartition::Q3);
                let three = detect_stakeless(&masks, team, PrizePartition::ThreePrize);
                rec.a_min = q2 == StakelessStatus::Qualified;
                rec.a_max = q3 == StakelessStatus::Qualified;
                rec.e_min = q3 == StakelessStatus::Eliminated;
                rec.e_max = q2 == StakelessStatus::Eliminated;
                rec.w_min = if three { w } else { 0.0 };
                rec.w_22 = Some(if q2 != StakelessStatus::None { w } else { 0.0 });
                rec.w_31 = Some(if q3 != StakelessStatus::None { w } else { 0.0 });
            }
            Some(partition) => {
                let status = classify(&masks, team, partition);
                rec.a_min = status == StakelessStatus::Qualified;
                rec.a_max = rec.a_min;
                rec.e_min = status == StakelessStatus::Eliminated;
                rec.e_max = rec.e_min;
                rec.w_min = if status != StakelessStatus::None { w } else { 0.0 };
                rec.w_22 = None;
                rec.w_31 = None;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mask_of_ranks(ranks: &[usize]) -> u8 {
        ranks.iter().fold(0, |m, &r| m | 1 << (r - 1))
    }

    fn scores(results: &[((usize, usize), (u32, u32))]) -> GroupScores {
        let mut s = GroupScores::default();
        for &((a, b), (ga, gb)) in results {
            s.set(a, b, ga, gb);
        }
        s
    }

    const ELO: [f64; 4] = [1900.0, 1800.0, 1700.0, 1600.0];

    #[test]
    fn france_2022_group_d() {
        // 0 France, 1 Australia, 2 Denmark, 3 Tunisia after two rounds;
        // last round France-Tunisia and Australia-Denmark.
        let s12 = scores(&[
            ((0, 1), (4, 1)),
            ((0, 2), (2, 1)),
            ((2, 3), (0, 0)),
            ((1, 3), (1, 0)),
        ]);
        let fixtures = [(0, 3), (1, 2)];
        let masks = achievable_rank_masks(&s12, fixtures, ELO);
        // France is locked into the top two
        assert_eq!(class_mask(masks[0], PrizePartition::Q2), 0b01);
        assert!(detect_stakeless(&masks, 0, PrizePartition::Q2));
        assert_eq!(classify(&masks, 0, PrizePartition::Q2), StakelessStatus::Qualified);
        // everyone else can still move between prize classes
        for team in 1..4 {
            assert!(!detect_stakeless(&masks, team, PrizePartition::Q2));
        }
    }

    #[test]
    fn locked_fourth_through_head_to_head() {
        // (6,3,3,0): team 3 lost to both 1 and 2 in the first rounds. Even
        // by winning it only ties the loser of the 1-2 match and sits below
        // them on the already-played mutual result, so rank 4 is certain.
        let s12 = scores(&[
            ((0, 1), (1, 0)),
            ((0, 2), (1, 0)),
            ((1, 3), (1, 0)),
            ((2, 3), (1, 0)),
        ]);
        let fixtures = [(0, 3), (1, 2)];
        let masks = achievable_rank_masks(&s12, fixtures, ELO);
        assert_eq!(masks[3], mask_of_ranks(&[4]));
        assert!(detect_stakeless(&masks, 3, PrizePartition::Q3));
        assert_eq!(classify(&masks, 3, PrizePartition::Q3), StakelessStatus::Eliminated);
        // a points-only view with open ties would miss this lock
        let open = achievable_ranks_on_points([6, 3, 3, 0], &fixtures, 3);
        assert_eq!(open, mask_of_ranks(&[3, 4]));
    }

    #[test]
    fn symmetric_group_has_every_rank_open() {
        let s12 = scores(&[
            ((0, 2), (1, 1)),
            ((0, 3), (1, 1)),
            ((1, 2), (1, 1)),
            ((1, 3), (1, 1)),
        ]);
        let masks = achievable_rank_masks(&s12, [(0, 1), (2, 3)], ELO);
        for team in 0..4 {
            assert_eq!(masks[team], 0b1111);
            assert!(!detect_stakeless(&masks, team, PrizePartition::Q2));
        }
    }

    #[test]
    fn leaders_meeting_each_other_depend_on_partition() {
        // two six-point leaders play each other: both locked top-2 under
        // Q2, but Tier 1 separates ranks 1 and 2
        let s12 = scores(&[
            ((0, 2), (2, 0)),
            ((0, 3), (2, 0)),
            ((1, 2), (3, 0)),
            ((1, 3), (3, 0)),
        ]);
        let masks = achievable_rank_masks(&s12, [(0, 1), (2, 3)], ELO);
        for team in 0..2 {
            assert!(detect_stakeless(&masks, team, PrizePartition::Q2));
            assert!(!detect_stakeless(&masks, team, PrizePartition::Tier1));
        }
    }

    #[test]
    fn achievable_ranks_on_points_examples() {
        assert_eq!(
            achievable_ranks_on_points([6, 4, 1, 0], &[(0, 1), (2, 3)], 0),
            mask_of_ranks(&[1, 2])
        );
        assert_eq!(
            achievable_ranks_on_points([6, 4, 1, 0], &[(0, 1), (2, 3)], 3),
            mask_of_ranks(&[3, 4])
        );
    }

    #[test]
    fn weight_examples() {
        let table = TeamTable::default_table();
        let members = [
            table.find("France").unwrap(),
            table.find("Japan").unwrap(),
            table.find("Morocco").unwrap(),
            table.find("Tunisia").unwrap(),
        ];
        let fixtures = [(0, 3), (1, 2)];
        let w = weight(&table, fixtures, &members, 0);
        assert!((w - win_expectancy(2015.0, 1681.0)).abs() < 1e-12);
        let w_t = weight(&table, fixtures, &members, 3);
        assert!((w + w_t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_352_and_minus_119_weights() {
        assert!((win_expectancy(352.0, 0.0) - 0.8835).abs() < 5e-5);
        assert!((win_expectancy(-119.0, 0.0) - 0.3351).abs() < 5e-5);
    }

    fn random_state(rng: &mut ChaCha8Rng) -> (GroupScores, [SlotPair; 2]) {
        let schedule = crate::group::make_schedule(rng);
        let mut scores = GroupScores::default();
        for round in &schedule.rounds[..2] {
            for &(a, b) in round {
                scores.set(a, b, rng.gen_range(0..5), rng.gen_range(0..5));
            }
        }
        (scores, schedule.rounds[2])
    }

    #[test]
    fn detector_sound_against_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let partitions = [
            PrizePartition::Q2,
            PrizePartition::Q3,
            PrizePartition::ThreePrize,
            PrizePartition::Tier1,
            PrizePartition::Tier2,
        ];
        for _ in 0..400 {
            let (s12, fixtures) = random_state(&mut rng);
            let masks = achievable_rank_masks(&s12, fixtures, ELO);
            let oracle = oracle_rank_masks(&s12, fixtures, 6, ELO).unwrap();
            for team in 0..4 {
                // every exhaustively reachable rank is in the detector mask
                assert_eq!(
                    oracle[team] & !masks[team],
                    0,
                    "missing ranks: oracle {:#b} detector {:#b} team {team}",
                    oracle[team],
                    masks[team]
                );
                for partition in partitions {
                    if detect_stakeless(&masks, team, partition) {
                        assert_eq!(
                            class_mask(oracle[team], partition).count_ones(),
                            1,
                            "declared stakeless, oracle disagrees (team {team}, {partition:?})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn flag_monotonicity_and_weight_algebra() {
        let table = TeamTable::default_table();
        let members = [
            table.find("Spain").unwrap(),
            table.find("Japan").unwrap(),
            table.find("Morocco").unwrap(),
            table.find("New Zealand").unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..2000 {
            let (s12, fixtures) = random_state(&mut rng);
            let recs = evaluate_group(&table, &members, &s12, fixtures, None);
            let elo = members.map(|id| table.team(id).elo);
            let masks = achievable_rank_masks(&s12, fixtures, elo);
            for (team, r) in recs.iter().enumerate() {
                assert!(r.a_min <= r.a_max);
                assert!(r.e_min <= r.e_max);
                assert!(!(r.a_min && r.e_max));
                assert!(!(r.a_max && r.e_min));
                let q2 = detect_stakeless(&masks, team, PrizePartition::Q2);
                let q3 = detect_stakeless(&masks, team, PrizePartition::Q3);
                assert_eq!(r.w_22.unwrap(), if q2 { r.weight } else { 0.0 });
                assert_eq!(r.w_31.unwrap(), if q3 { r.weight } else { 0.0 });
                assert!((0.0..=1.0).contains(&r.w_min));
            }
        }
    }

    #[test]
    fn no_stakeless_before_the_last_round() {
        // After one round, four fixtures remain and every point total can
        // still change by up to six: no prize is decided.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let schedule = crate::group::make_schedule(&mut rng);
            let mut points = [0u32; 4];
            for &(a, b) in &schedule.rounds[0] {
                match rng.gen_range(0..3) {
                    0 => points[a] += 3,
                    1 => {
                        points[a] += 1;
                        points[b] += 1;
                    }
                    _ => points[b] += 3,
                }
            }
            let remaining: Vec<SlotPair> =
                schedule.rounds[1..].iter().flatten().copied().collect();
            for team in 0..4 {
                for partition in [PrizePartition::Q2, PrizePartition::Q3, PrizePartition::Tier1] {
                    let ranks = achievable_ranks_on_points(points, &remaining, team);
                    assert!(class_mask(ranks, partition).count_ones() >= 2);
                }
            }
        }
    }

    #[test]
    fn oracle_with_zero_goals_is_a_single_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let (s12, fixtures) = random_state(&mut rng);
        let mask = oracle_enumerate(&s12, fixtures, 0, PrizePartition::Q2, 0, ELO).unwrap();
        assert_eq!(mask.count_ones(), 1);
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let s12 = GroupScores::default();
        assert!(matches!(
            oracle_enumerate(&s12, [(0, 1), (2, 3)], 0, PrizePartition::Q2, 9, ELO),
            Err(Error::InstanceTooLarge(_))
        ));
    }
}
