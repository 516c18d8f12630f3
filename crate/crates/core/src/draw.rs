//! Group draw: rejection sampling uniform over the valid assignments.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{FormatKind, Tier};
use crate::team::{Pots, Team, TeamId};

/// Per-group composition rules. Play-off winners never count toward any
/// confederation.
#[derive(Debug, Clone, Copy)]
pub struct DrawConstraints {
    pub max_same_confed_non_uefa: usize,
    pub uefa_min: usize,
    pub uefa_max: usize,
    pub max_attempts: u64,
}

impl Default for DrawConstraints {
    fn default() -> Self {
        Self {
            max_same_confed_non_uefa: 1,
            uefa_min: 1,
            uefa_max: 2,
            max_attempts: 1_000_000,
        }
    }
}

impl DrawConstraints {
    /// No composition rules at all; every structurally complete assignment
    /// is accepted.
    pub fn unconstrained() -> Self {
        Self {
            max_same_confed_non_uefa: usize::MAX,
            uefa_min: 0,
            uefa_max: usize::MAX,
            max_attempts: 1_000_000,
        }
    }
}

/// One group of the draw; `slots[k]` holds the team drawn from the block's
/// `k`-th pot.
#[derive(Debug, Clone, Serialize)]
pub struct DrawnGroup {
    pub tier: Tier,
    pub slots: Vec<TeamId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupAssignment {
    pub groups: Vec<DrawnGroup>,
}

/// A draw problem: independent blocks, each distributing its pots over its
/// own set of groups. The real formats use one block (official) or one per
/// tier (imbalanced); tests use reduced instances.
#[derive(Debug, Clone)]
pub struct DrawInstance {
    pub blocks: Vec<DrawBlock>,
}

#[derive(Debug, Clone)]
pub struct DrawBlock {
    pub groups: Vec<usize>,
    pub tier: Tier,
    pub pots: Vec<Vec<TeamId>>,
}

impl DrawInstance {
    pub fn for_format(format: FormatKind, pots: &Pots) -> Self {
        let blocks = format
            .draw_blocks()
            .into_iter()
            .map(|(groups, pot_idx)| DrawBlock {
                tier: format.tier_of_group(groups[0]),
                pots: pot_idx.iter().map(|&p| pots.pots[p].clone()).collect(),
                groups,
            })
            .collect();
        Self { blocks }
    }

    pub fn group_count(&self) -> usize {
        self.blocks.iter().map(|b| b.groups.len()).sum()
    }

    fn assemble(&self, perms: &[Vec<Vec<TeamId>>]) -> GroupAssignment {
        let mut groups = vec![None; self.group_count()];
        for (block, pot_perms) in self.blocks.iter().zip(perms) {
            for (pos, &g) in block.groups.iter().enumerate() {
                let slots = pot_perms.iter().map(|pot| pot[pos]).collect();
                groups[g] = Some(DrawnGroup { tier: block.tier, slots });
            }
        }
        GroupAssignment { groups: groups.into_iter().map(Option::unwrap).collect() }
    }
}

/// Whether every group satisfies the confederation rules.
pub fn is_valid(assignment: &GroupAssignment, teams: &[Team], constraints: &DrawConstraints) -> bool {
    assignment.groups.iter().all(|g| group_ok(&g.slots, teams, constraints))
}

fn group_ok(slots: &[TeamId], teams: &[Team], c: &DrawConstraints) -> bool {
    use crate::team::Confederation::*;
    let mut counts = [0usize; 6];
    for &id in slots {
        let t = &teams[id.0 as usize];
        if t.playoff_entrant {
            continue;
        }
        let k = match t.confederation {
            AFC => 0,
            CAF => 1,
            CONCACAF => 2,
            CONMEBOL => 3,
            OFC => 4,
            UEFA => 5,
        };
        counts[k] += 1;
    }
    counts[..5].iter().all(|&n| n <= c.max_same_confed_non_uefa)
        && counts[5] >= c.uefa_min
        && counts[5] <= c.uefa_max
}

/// Draws structurally complete assignments uniformly (independent uniform
/// permutation of each pot onto its groups) and accepts the first valid one.
pub fn sample_draw<R: Rng + ?Sized>(
    instance: &DrawInstance,
    teams: &[Team],
    constraints: &DrawConstraints,
    rng: &mut R,
) -> Result<GroupAssignment> {
    for _ in 0..constraints.max_attempts {
        let perms: Vec<Vec<Vec<TeamId>>> = instance
            .blocks
            .iter()
            .map(|b| {
                b.pots
                    .iter()
                    .map(|pot| {
                        let mut p = pot.clone();
                        p.shuffle(rng);
                        p
                    })
                    .collect()
            })
            .collect();
        let assignment = instance.assemble(&perms);
        if is_valid(&assignment, teams, constraints) {
            return Ok(assignment);
        }
    }
    Err(Error::DrawCapExceeded { attempts: constraints.max_attempts })
}

/// Exhaustively lists the valid assignments of a reduced instance.
pub fn enumerate_valid(
    instance: &DrawInstance,
    teams: &[Team],
    constraints: &DrawConstraints,
) -> Result<Vec<GroupAssignment>> {
    const CAP: u64 = 10_000_000;
    let mut total: u64 = 1;
    for b in &instance.blocks {
        for pot in &b.pots {
            total = total.saturating_mul(factorial(pot.len() as u64));
            if total > CAP {
                return Err(Error::InstanceTooLarge(format!(
                    "more than {CAP} structurally complete assignments"
                )));
            }
        }
    }

    let mut out = Vec::new();
    let pots_flat: Vec<&Vec<TeamId>> = instance.blocks.iter().flat_map(|b| &b.pots).collect();
    let mut perms: Vec<Vec<TeamId>> = pots_flat.iter().map(|p| (*p).clone()).collect();
    visit_perms(&mut perms, 0, &mut |perms| {
        let mut grouped = Vec::new();
        let mut k = 0;
        for b in &instance.blocks {
            grouped.push(perms[k..k + b.pots.len()].to_vec());
            k += b.pots.len();
        }
        let assignment = instance.assemble(&grouped);
        if is_valid(&assignment, teams, constraints) {
            out.push(assignment);
        }
    });
    Ok(out)
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Enumerates every combination of permutations of `perms[at..]` in place.
fn visit_perms(perms: &mut [Vec<TeamId>], at: usize, f: &mut impl FnMut(&[Vec<TeamId>])) {
    if at == perms.len() {
        f(perms);
        return;
    }
    let n = perms[at].len();
    permute(&mut |p: &[usize]| {
        let original = perms[at].clone();
        let reordered: Vec<TeamId> = p.iter().map(|&i| original[i]).collect();
        perms[at] = reordered;
        visit_perms(perms, at + 1, f);
        perms[at] = original;
    }, n);
}

fn permute(f: &mut impl FnMut(&[usize]), n: usize) {
    let mut idx: Vec<usize> = (0..n).collect();
    heap_permute(&mut idx, n, f);
}

fn heap_permute(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(idx);
        return;
    }
    for i in 0..k {
        heap_permute(idx, k - 1, f);
        if k % 2 == 0 {
            idx.swap(i, k - 1);
        } else {
            idx.swap(0, k - 1);
        }
    }
}

/// A fingerprint suitable for counting how often each assignment occurs.
pub fn assignment_key(assignment: &GroupAssignment) -> Vec<u16> {
    assignment.groups.iter().flat_map(|g| g.slots.iter().map(|t| t.0)).collect()
}

/// Serializes an assignment with team names for inspection.
pub fn assignment_to_json(assignment: &GroupAssignment, teams: &[Team]) -> serde_json::Value {
    let groups: Vec<serde_json::Value> = assignment
        .groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            serde_json::json!({
                "group": char::from(b'A' + i as u8).to_string(),
                "tier": match g.tier { Tier::Tier1 => 1, Tier::Tier2 => 2 },
                "teams": g.slots.iter().map(|&id| teams[id.0 as usize].name.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({ "groups": groups })
}

/// 99.9% chi-square critical values for the degrees of freedom used by the
/// uniformity audits.
pub fn chi2_crit_sig_001(df: usize) -> f64 {
    match df {
        1 => 10.828,
        2 => 13.816,
        3 => 16.266,
        4 => 18.467,
        5 => 20.515,
        6 => 22.458,
        7 => 24.322,
        11 => 31.264,
        23 => 49.728,
        _ => {
            // Wilson-Hilferty approximation for other df
            let d = df as f64;
            let z = 3.090_232; // 99.9% normal quantile
            d * (1.0 - 2.0 / (9.0 * d) + z * (2.0 / (9.0 * d)).sqrt()).powi(3)
        }
    }
}

/// Result of a sampler uniformity audit against the enumeration oracle.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityAudit {
    pub valid_assignments: usize,
    pub samples: usize,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub critical_value_sig_001: f64,
    pub uniform: bool,
}

/// Draws `samples` assignments from the rejection sampler on a reduced
/// instance and chi-square-tests the counts against the enumerated valid set.
pub fn uniformity_audit<R: Rng + ?Sized>(
    instance: &DrawInstance,
    teams: &[Team],
    constraints: &DrawConstraints,
    samples: usize,
    rng: &mut R,
) -> Result<UniformityAudit> {
    let valid = enumerate_valid(instance, teams, constraints)?;
    if valid.is_empty() {
        return Err(Error::InstanceTooLarge("no valid assignment exists".into()));
    }
    let mut counts: std::collections::HashMap<Vec<u16>, u64> =
        valid.iter().map(|a| (assignment_key(a), 0)).collect();
    for _ in 0..samples {
        let a = sample_draw(instance, teams, constraints, rng)?;
        *counts
            .get_mut(&assignment_key(&a))
            .expect("sampled assignment must be in the enumerated valid set") += 1;
    }
    let expected = samples as f64 / valid.len() as f64;
    let chi_square: f64 =
        counts.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let df = valid.len() - 1;
    let crit = chi2_crit_sig_001(df);
    Ok(UniformityAudit {
        valid_assignments: valid.len(),
        samples,
        chi_square,
        degrees_of_freedom: df,
        critical_value_sig_001: crit,
        uniform: chi_square < crit,
    })
}

/// The reduced instance from the draw documentation: two groups, two pots of
/// two, where the two CAF teams may not share a group (their group would
/// also have no UEFA member).
pub fn reduced_audit_instance() -> (DrawInstance, Vec<Team>) {
    use crate::team::Confederation;
    let mk = |name: &str, confed: Confederation| Team {
        name: name.to_string(),
        elo: 1700.0,
        confederation: confed,
        is_host: false,
        playoff_entrant: false,
    };
    let teams = vec![
        mk("Mali", Confederation::CAF),
        mk("France", Confederation::UEFA),
        mk("Senegal", Confederation::CAF),
        mk("Italy", Confederation::UEFA),
    ];
    let instance = DrawInstance {
        blocks: vec![DrawBlock {
            groups: vec![0, 1],
            tier: Tier::Tier1,
            pots: vec![vec![TeamId(0), TeamId(1)], vec![TeamId(2), TeamId(3)]],
        }],
    };
    (instance, teams)
}
