//! The two tournament structures under comparison.

use serde::{Deserialize, Serialize};

pub const GROUP_COUNT: usize = 12;
pub const GROUP_MATCHES: usize = GROUP_COUNT * 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatKind {
    /// 12 equal groups, Round of 32 with the eight best third-placed teams.
    Official,
    /// 8 Tier 1 + 4 Tier 2 groups with an intermediate play-off round.
    Imbalanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    Tier1,
    Tier2,
}

impl FormatKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Official => "official",
            Self::Imbalanced => "imbalanced",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "official" => Some(Self::Official),
            "imbalanced" => Some(Self::Imbalanced),
            _ => None,
        }
    }

    pub fn pot_sizes(self) -> &'static [usize] {
        match self {
            Self::Official => &[12, 12, 12, 12],
            Self::Imbalanced => &[8, 8, 4, 4, 8, 4, 8, 4],
        }
    }

    /// Total matches per tournament run: 72 group matches plus the knockout.
    pub fn match_budget(self) -> usize {
        match self {
            Self::Official => 103,
            Self::Imbalanced => 95,
        }
    }

    /// Tier of group `g` (groups 0..7 are Tier 1 in the imbalanced format).
    pub fn tier_of_group(self, group: usize) -> Tier {
        match self {
            Self::Official => Tier::Tier1,
            Self::Imbalanced => {
                if group < 8 {
                    Tier::Tier1
                } else {
                    Tier::Tier2
                }
            }
        }
    }

    /// Pot indices (0-based) feeding each draw block, with the groups the
    /// block covers. One block for the official format, one per tier for the
    /// imbalanced one.
    pub fn draw_blocks(self) -> Vec<(Vec<usize>, Vec<usize>)> {
        match self {
            Self::Official => vec![((0..12).collect(), vec![0, 1, 2, 3])],
            Self::Imbalanced => vec![
                ((0..8).collect(), vec![0, 1, 4, 6]),
                ((8..12).collect(), vec![2, 3, 5, 7]),
            ],
        }
    }

    /// Pots belonging to Tier 1 / Tier 2 groups (1-based pot numbers).
    pub fn tier_pots(self, tier: Tier) -> &'static [u8] {
        match (self, tier) {
            (Self::Official, _) => &[1, 2, 3, 4],
            (Self::Imbalanced, Tier::Tier1) => &[1, 2, 5, 7],
            (Self::Imbalanced, Tier::Tier2) => &[3, 4, 6, 8],
        }
    }
}
