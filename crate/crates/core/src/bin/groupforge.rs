//! Command-line front end: runs the Monte Carlo experiments and writes the
//! batch output files.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use groupforge::draw::{reduced_audit_instance, uniformity_audit, DrawConstraints};
use groupforge::error::Error;
use groupforge::format::FormatKind;
use groupforge::group::make_schedule;
use groupforge::output;
use groupforge::simulation::{run_monte_carlo, tanking_experiment, RunConfig};
use groupforge::stakeless::{
    achievable_rank_masks, detect_stakeless, oracle_enumerate, PrizePartition,
};
use groupforge::team::TeamTable;

#[derive(Parser)]
#[command(
    name = "groupforge",
    version = output::BUILD_VERSION,
    about = "Monte Carlo comparison of 48-team World Cup formats"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScaleArgs {
    /// Tournament format to simulate.
    #[arg(long, value_parser = parse_format, default_value = "official")]
    format: FormatKind,
    /// Number of group draws.
    #[arg(long, default_value_t = 100)]
    draws: u64,
    /// Tournament runs per draw.
    #[arg(long, default_value_t = 100)]
    sims: u64,
    /// Master seed; all randomness derives from it.
    #[arg(long, default_value_t = 20261)]
    seed: u64,
    /// Optional CSV file replacing the embedded rating table.
    #[arg(long)]
    teams: Option<PathBuf>,
    /// Use the full scale (1000 draws x 1000 sims), overriding --draws/--sims.
    #[arg(long)]
    full_scale: bool,
}

impl ScaleArgs {
    fn config(&self) -> RunConfig {
        let (draws, sims) = if self.full_scale { (1000, 1000) } else { (self.draws, self.sims) };
        let mut cfg = RunConfig::new(self.format, draws, sims, self.seed);
        cfg.threads = threads_from_env();
        cfg
    }

    fn table(&self) -> Result<TeamTable, Error> {
        match &self.teams {
            Some(path) => TeamTable::load(File::open(path)?),
            None => Ok(TeamTable::default_table()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte Carlo experiment and write the output tables.
    Simulate {
        #[command(flatten)]
        scale: ScaleArgs,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write the full match log (large).
        #[arg(long)]
        emit_matchlog: bool,
    },
    /// Measure what a team gains or loses by dropping into a weaker pot.
    Tanking {
        #[command(flatten)]
        scale: ScaleArgs,
        /// Team to demote.
        #[arg(long)]
        team: String,
        /// Target pot (1-based) of the other tier.
        #[arg(long)]
        pot: u8,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chi-square uniformity audit of the draw sampler on a reduced instance.
    DrawAudit {
        /// Sample count for the audit.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 20261)]
        seed: u64,
    },
    /// Cross-check the stakeless detector against exhaustive enumeration.
    OracleCheck {
        /// Number of random pre-last-round states.
        #[arg(long, default_value_t = 2000)]
        states: u64,
        #[arg(long, default_value_t = 20261)]
        seed: u64,
    },
}

fn parse_format(s: &str) -> Result<FormatKind, String> {
    FormatKind::parse(s).ok_or_else(|| format!("unknown format {s:?} (official|imbalanced)"))
}

fn threads_from_env() -> usize {
    std::env::var("GROUPFORGE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_)
                | Error::TeamData(_)
                | Error::UnknownConfederation(_)
                | Error::InvalidTanking(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate { scale, out, emit_matchlog } => {
            let table = scale.table()?;
            let cfg = scale.config();
            let report = run_monte_carlo(&table, &cfg)?;
            fs::create_dir_all(&out)?;
            let file = |name: &str| -> Result<BufWriter<File>, Error> {
                Ok(BufWriter::new(File::create(out.join(name))?))
            };
            output::write_per_team(&report, &cfg, file("per_team.csv")?)?;
            output::write_per_stage(&report, &cfg, file("per_stage.csv")?)?;
            output::write_top_k(&report, &cfg, file("topk.csv")?)?;
            output::write_aggregates(&report, &cfg, file("aggregates.json")?)?;
            if emit_matchlog {
                output::write_matchlog(&table, &cfg, file("matchlog.csv")?)?;
            }
            println!(
                "wrote {} ({} runs, format {})",
                out.display(),
                cfg.total_runs(),
                cfg.format.name()
            );
            Ok(())
        }
        Command::Tanking { scale, team, pot, out } => {
            let table = scale.table()?;
            let mut cfg = scale.config();
            cfg.format = FormatKind::Imbalanced;
            let id = table
                .find(&team)
                .ok_or_else(|| Error::Config(format!("unknown team {team:?}")))?;
            let result = tanking_experiment(&table, id, pot, &cfg)?;
            match out {
                Some(path) => {
                    if let Some(dir) = path.parent().filter(|d| *d != Path::new("")) {
                        fs::create_dir_all(dir)?;
                    }
                    output::write_tanking(&result, &cfg, BufWriter::new(File::create(path)?))?;
                }
                None => output::write_tanking(&result, &cfg, std::io::stdout().lock())?,
            }
            Ok(())
        }
        Command::DrawAudit { samples, seed } => {
            let (instance, teams) = reduced_audit_instance();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let audit =
                uniformity_audit(&instance, &teams, &DrawConstraints::default(), samples, &mut rng)?;
            serde_json::to_writer_pretty(std::io::stdout().lock(), &audit)?;
            println!();
            if audit.uniform {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "sampler failed the uniformity audit: chi-square {:.3} >= {:.3}",
                    audit.chi_square, audit.critical_value_sig_001
                )))
            }
        }
        Command::OracleCheck { states, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let elo = [1900.0, 1800.0, 1700.0, 1600.0];
            let partitions = [
                PrizePartition::Q2,
                PrizePartition::Q3,
                PrizePartition::ThreePrize,
                PrizePartition::Tier1,
                PrizePartition::Tier2,
            ];
            let mut checked = 0u64;
            for _ in 0..states {
                use rand::Rng;
                let schedule = make_schedule(&mut rng);
                let mut scores = groupforge::group::GroupScores::default();
                for round in &schedule.rounds[..2] {
                    for &(a, b) in round {
                        scores.set(a, b, rng.gen_range(0..5), rng.gen_range(0..5));
                    }
                }
                let fixtures = schedule.rounds[2];
                let masks = achievable_rank_masks(&scores, fixtures, elo);
                for team in 0..4 {
                    for partition in partitions {
                        if detect_stakeless(&masks, team, partition) {
                            let classes =
                                oracle_enumerate(&scores, fixtures, team, partition, 6, elo)?;
                            if classes.count_ones() != 1 {
                                return Err(Error::Config(format!(
                                    "detector unsound: team {team} {partition:?} mask {:#b}",
                                    masks[team]
                                )));
                            }
                            checked += 1;
                        }
                    }
                }
            }
            println!("oracle check passed: {checked} stakeless verdicts verified against enumeration over {states} states");
            Ok(())
        }
    }
}
