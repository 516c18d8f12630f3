//! Team data: ratings, confederations, pot assignment and host adjustment.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::FormatKind;

/// Elo points added to a host nation's rating in its matches.
pub const HOME_ADVANTAGE: f64 = 100.0;

/// The embedded rating table (Elo ratings of 1 October 2024).
pub const DEFAULT_TEAM_CSV: &str = include_str!("data/teams_2024_10_01.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Confederation {
    AFC,
    CAF,
    CONCACAF,
    CONMEBOL,
    OFC,
    UEFA,
}

impl Confederation {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "AFC" => Ok(Self::AFC),
            "CAF" => Ok(Self::CAF),
            "CONCACAF" => Ok(Self::CONCACAF),
            "CONMEBOL" => Ok(Self::CONMEBOL),
            "OFC" => Ok(Self::OFC),
            "UEFA" => Ok(Self::UEFA),
            other => Err(Error::UnknownConfederation(other.to_string())),
        }
    }
}

/// Index of a team within its [`TeamTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TeamId(pub u16);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Team {
    pub name: String,
    pub elo: f64,
    pub confederation: Confederation,
    pub is_host: bool,
    pub playoff_entrant: bool,
}

#[derive(Debug, Deserialize)]
struct TeamRow {
    name: String,
    elo: f64,
    confederation: String,
    is_host: bool,
    playoff_entrant: bool,
}

/// The 46 direct qualifiers plus the 6 inter-confederation play-off entrants.
#[derive(Debug, Clone)]
pub struct TeamTable {
    teams: Vec<Team>,
}

/// The six play-off entrants: the two highest-rated are seeded straight into
/// the deciding matches, the other four start in the knockout clashes.
#[derive(Debug, Clone)]
pub struct PlayoffSlate {
    pub seeded: [TeamId; 2],
    pub unseeded: [TeamId; 4],
}

const DIRECT_QUALIFIERS: usize = 46;
const PLAYOFF_ENTRANTS: usize = 6;
const HOSTS: usize = 3;

impl TeamTable {
    /// Loads and validates a team table from CSV with the header
    /// `name,elo,confederation,is_host,playoff_entrant`.
    pub fn load(source: impl std::io::Read) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let mut teams = Vec::new();
        for row in reader.deserialize::<TeamRow>() {
            let row = row.map_err(|e| Error::TeamData(format!("bad row: {e}")))?;
            if !row.elo.is_finite() {
                return Err(Error::TeamData(format!("non-finite Elo for {}", row.name)));
            }
            teams.push(Team {
                name: row.name,
                elo: row.elo,
                confederation: Confederation::parse(&row.confederation)?,
                is_host: row.is_host,
                playoff_entrant: row.playoff_entrant,
            });
        }
        Self::from_teams(teams)
    }

    /// Builds the table shipped with the crate.
    pub fn default_table() -> Self {
        Self::load(DEFAULT_TEAM_CSV.as_bytes()).expect("embedded team table is valid")
    }

    fn from_teams(teams: Vec<Team>) -> Result<Self> {
        let direct = teams.iter().filter(|t| !t.playoff_entrant).count();
        let entrants = teams.iter().filter(|t| t.playoff_entrant).count();
        if direct != DIRECT_QUALIFIERS || entrants != PLAYOFF_ENTRANTS {
            return Err(Error::TeamData(format!(
                "expected {DIRECT_QUALIFIERS} direct qualifiers and {PLAYOFF_ENTRANTS} play-off \
                 entrants, got {direct} and {entrants}"
            )));
        }
        let hosts = teams.iter().filter(|t| t.is_host).count();
        if hosts != HOSTS {
            return Err(Error::TeamData(format!("expected {HOSTS} hosts, got {hosts}")));
        }
        if teams.iter().any(|t| t.is_host && t.playoff_entrant) {
            return Err(Error::TeamData("a host cannot be a play-off entrant".into()));
        }
        let mut names = HashSet::new();
        for t in &teams {
            if !names.insert(t.name.as_str()) {
                return Err(Error::TeamData(format!("duplicate team name {}", t.name)));
            }
        }
        Ok(Self { teams })
    }

    pub fn teams(&self) -> &[Team] {
        &self.teams
    }

    pub fn team(&self, id: TeamId) -> &Team {
        &self.teams[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TeamId> {
        (0..self.teams.len() as u16).map(TeamId)
    }

    pub fn find(&self, name: &str) -> Option<TeamId> {
        self.teams.iter().position(|t| t.name == name).map(|i| TeamId(i as u16))
    }

    /// Ids of the 46 direct qualifiers in table order.
    pub fn direct_qualifiers(&self) -> Vec<TeamId> {
        self.ids().filter(|&id| !self.team(id).playoff_entrant).collect()
    }

    /// The six play-off entrants, split into the two seeded (highest rated)
    /// teams and the four unseeded ones, each group ordered by rating.
    pub fn playoff_slate(&self) -> PlayoffSlate {
        let mut entrants: Vec<TeamId> =
            self.ids().filter(|&id| self.team(id).playoff_entrant).collect();
        entrants.sort_by(|&a, &b| {
            self.team(b).elo.partial_cmp(&self.team(a).elo).unwrap().then(a.cmp(&b))
        });
        PlayoffSlate {
            seeded: [entrants[0], entrants[1]],
            unseeded: [entrants[2], entrants[3], entrants[4], entrants[5]],
        }
    }
}

/// Host-adjusted ratings for a match between `a` and `b`.
///
/// Each host gets +100; when both teams are hosts both get the bump, which
/// leaves the win expectancy equal to the unadjusted one.
pub fn match_ratings(table: &TeamTable, a: TeamId, b: TeamId) -> (f64, f64) {
    (adjusted_elo(table, a), adjusted_elo(table, b))
}

/// A team's rating with the home-advantage bump applied if it is a host.
pub fn adjusted_elo(table: &TeamTable, id: TeamId) -> f64 {
    let t = table.team(id);
    if t.is_host {
        t.elo + HOME_ADVANTAGE
    } else {
        t.elo
    }
}

/// Pot membership for one format; `pots[p]` lists the teams in pot `p + 1`.
#[derive(Debug, Clone)]
pub struct Pots {
    pub pots: Vec<Vec<TeamId>>,
}

/// Used by the tanking experiment: `team` is pre-placed at the top of
/// `pot` (1-based) before the remaining slots are filled by rating.
#[derive(Debug, Clone, Copy)]
pub struct PotOverride {
    pub team: TeamId,
    pub pot: u8,
}

/// Partitions the 48 participants into pots.
///
/// Hosts are forced into Pot 1 and the play-off winners into the last pot;
/// everyone else fills the remaining slots in descending rating order
/// (ties broken by table position).
pub fn assign_pots(
    table: &TeamTable,
    format: FormatKind,
    playoff_winners: [TeamId; 2],
) -> Result<Pots> {
    assign_pots_with_override(table, format, playoff_winners, None)
}

pub fn assign_pots_with_override(
    table: &TeamTable,
    format: FormatKind,
    playoff_winners: [TeamId; 2],
    overridden: Option<PotOverride>,
) -> Result<Pots> {
    for w in playoff_winners {
        if !table.team(w).playoff_entrant {
            return Err(Error::TeamData(format!(
                "{} is not a play-off entrant",
                table.team(w).name
            )));
        }
    }
    let sizes = format.pot_sizes();
    let last = sizes.len() - 1;
    let mut pots: Vec<Vec<TeamId>> = vec![Vec::new(); sizes.len()];

    let mut forced: HashSet<TeamId> = playoff_winners.iter().copied().collect();
    for id in table.ids().filter(|&id| table.team(id).is_host) {
        pots[0].push(id);
        forced.insert(id);
    }
    if let Some(o) = overridden {
        let p = o.pot as usize;
        if p == 0 || p > sizes.len() {
            return Err(Error::InvalidTanking(format!("pot {} out of range", o.pot)));
        }
        pots[p - 1].push(o.team);
        forced.insert(o.team);
    }

    let mut rest: Vec<TeamId> = table
        .direct_qualifiers()
        .into_iter()
        .filter(|id| !forced.contains(id))
        .collect();
    rest.sort_by(|&a, &b| {
        table.team(b).elo.partial_cmp(&table.team(a).elo).unwrap().then(a.cmp(&b))
    });

    // Winners take two slots of the last pot; the rest fill top-down.
    let mut iter = rest.into_iter();
    for (p, &size) in sizes.iter().enumerate() {
        let reserve = if p == last { 2 } else { 0 };
        while pots[p].len() + reserve < size {
            let id = iter.next().ok_or_else(|| {
                Error::TeamData("not enough teams to fill the pots".into())
            })?;
            pots[p].push(id);
        }
    }
    pots[last].extend(playoff_winners);
    debug_assert!(iter.next().is_none());
    Ok(Pots { pots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> TeamTable {
        TeamTable::default_table()
    }

    #[test]
    fn default_table_loads() {
        let t = table();
        assert_eq!(t.len(), 52);
        let spain = t.find("Spain").unwrap();
        assert_eq!(t.team(spain).elo, 2157.0);
        assert_eq!(t.team(spain).confederation, Confederation::UEFA);
        let nc = t.find("New Caledonia").unwrap();
        assert!(t.team(nc).playoff_entrant);
        assert_eq!(t.team(nc).confederation, Confederation::OFC);
    }

    #[test]
    fn wrong_team_count_rejected() {
        let mut csv = String::from("name,elo,confederation,is_host,playoff_entrant\n");
        for i in 0..51 {
            let host = if i < 3 { "true" } else { "false" };
            let po = if i >= 45 { "true" } else { "false" };
            csv.push_str(&format!("T{i},{},UEFA,{host},{po}\n", 1500 + i));
        }
        assert!(matches!(TeamTable::load(csv.as_bytes()), Err(Error::TeamData(_))));
    }

    #[test]
    fn duplicate_name_rejected() {
        let mut csv = DEFAULT_TEAM_CSV.to_string();
        csv = csv.replace("Mexico", "Canada");
        assert!(TeamTable::load(csv.as_bytes()).is_err());
    }

    #[test]
    fn unknown_confederation_rejected() {
        let csv = DEFAULT_TEAM_CSV.replace("OFC", "OCEANIA");
        assert!(TeamTable::load(csv.as_bytes()).is_err());
    }

    #[test]
    fn host_count_enforced() {
        let csv = DEFAULT_TEAM_CSV.replacen("true,false", "false,false", 1);
        assert!(matches!(TeamTable::load(csv.as_bytes()), Err(Error::TeamData(_))));
    }

    #[test]
    fn match_ratings_applies_home_bump() {
        let t = table();
        let mexico = t.find("Mexico").unwrap();
        let spain = t.find("Spain").unwrap();
        let canada = t.find("Canada").unwrap();
        let france = t.find("France").unwrap();
        assert_eq!(match_ratings(&t, mexico, spain), (1892.0, 2157.0));
        assert_eq!(match_ratings(&t, mexico, canada), (1892.0, 1870.0));
        assert_eq!(match_ratings(&t, spain, france), (2157.0, 2015.0));
        // swap symmetry
        let (x, y) = match_ratings(&t, spain, mexico);
        assert_eq!((y, x), match_ratings(&t, mexico, spain));
    }

    fn winners(t: &TeamTable) -> [TeamId; 2] {
        [t.find("Peru").unwrap(), t.find("Cameroon").unwrap()]
    }

    #[test]
    fn official_pots_match_reference_table() {
        let t = table();
        let pots = assign_pots(&t, FormatKind::Official, winners(&t)).unwrap().pots;
        assert_eq!(pots.iter().map(Vec::len).collect::<Vec<_>>(), vec![12; 4]);
        let pot_of = |name: &str| {
            let id = t.find(name).unwrap();
            pots.iter().position(|p| p.contains(&id)).unwrap() + 1
        };
        assert_eq!(pot_of("Japan"), 2);
        assert_eq!(pot_of("Mexico"), 1);
        assert_eq!(pot_of("Angola"), 4);
        assert_eq!(pot_of("Germany"), 1);
        assert_eq!(pot_of("Uruguay"), 2);
        assert_eq!(pot_of("Russia"), 2);
        assert_eq!(pot_of("Serbia"), 3);
        assert_eq!(pot_of("Egypt"), 3);
        assert_eq!(pot_of("Costa Rica"), 4);
        assert_eq!(pot_of("Peru"), 4);
    }

    #[test]
    fn imbalanced_pots_match_reference_table() {
        let t = table();
        let pots = assign_pots(&t, FormatKind::Imbalanced, winners(&t)).unwrap().pots;
        assert_eq!(
            pots.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![8, 8, 4, 4, 8, 4, 8, 4]
        );
        let pot_of = |name: &str| {
            let id = t.find(name).unwrap();
            pots.iter().position(|p| p.contains(&id)).unwrap() + 1
        };
        assert_eq!(pot_of("Mexico"), 1);
        assert_eq!(pot_of("Brazil"), 1);
        assert_eq!(pot_of("England"), 2);
        assert_eq!(pot_of("Japan"), 3);
        assert_eq!(pot_of("Austria"), 4);
        assert_eq!(pot_of("Serbia"), 5);
        assert_eq!(pot_of("Australia"), 5);
        assert_eq!(pot_of("Uzbekistan"), 6);
        assert_eq!(pot_of("Costa Rica"), 7);
        assert_eq!(pot_of("Saudi Arabia"), 7);
        assert_eq!(pot_of("Angola"), 8);
        assert_eq!(pot_of("New Zealand"), 8);
        assert_eq!(pot_of("Cameroon"), 8);
    }

    #[test]
    fn pots_partition_all_participants() {
        let t = table();
        for format in [FormatKind::Official, FormatKind::Imbalanced] {
            let pots = assign_pots(&t, format, winners(&t)).unwrap().pots;
            let mut seen = HashSet::new();
            for p in &pots {
                for &id in p {
                    assert!(seen.insert(id));
                }
            }
            assert_eq!(seen.len(), 48);
        }
    }

    #[test]
    fn pot_assignment_monotone_in_elo_for_unforced_teams() {
        let t = table();
        let w = winners(&t);
        for format in [FormatKind::Official, FormatKind::Imbalanced] {
            let pots = assign_pots(&t, format, w).unwrap().pots;
            let exempt = |id: TeamId| t.team(id).is_host || t.team(id).playoff_entrant;
            for stronger in 0..pots.len() {
                for weaker in stronger + 1..pots.len() {
                    for &a in pots[stronger].iter().filter(|&&id| !exempt(id)) {
                        for &b in pots[weaker].iter().filter(|&&id| !exempt(id)) {
                            assert!(t.team(b).elo <= t.team(a).elo);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn playoff_slate_composition() {
        let t = table();
        let slate = t.playoff_slate();
        assert_eq!(t.team(slate.seeded[0]).name, "Peru");
        assert_eq!(t.team(slate.seeded[1]).name, "Cameroon");
        assert_eq!(t.team(slate.unseeded[0]).name, "Qatar");
        assert_eq!(t.team(slate.unseeded[3]).name, "New Caledonia");
    }

    #[test]
    fn non_entrant_winner_rejected() {
        let t = table();
        let spain = t.find("Spain").unwrap();
        let peru = t.find("Peru").unwrap();
        assert!(assign_pots(&t, FormatKind::Official, [spain, peru]).is_err());
    }
}
