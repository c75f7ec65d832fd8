//! Command-line front end: load, validate, inspect, and query energy
//! automata. Exit codes: 0 = yes/ok, 2 = error/invalid input, 3 = no.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use energy_automata::{
    buchi_lasso, oracle, parse_rat, reach_bfs, render_witness, EnergyAutomaton, Rat,
};

#[derive(Parser)]
#[command(name = "energy-automata", version, about = "Energy automata solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an automaton document against the schema and the energy-function conditions.
    Validate { file: String },
    /// Print the star closure M* of the transition matrix (computed by both
    /// algorithms, which must agree).
    Closure { file: String },
    /// Print the finite behavior |A| and the Büchi behavior ||A||.
    Behavior { file: String },
    /// Decide reachability from the given initial energy.
    Reach {
        file: String,
        #[arg(long)]
        energy: String,
        /// Also search for a concrete run witnessing a yes answer.
        #[arg(long)]
        witness: bool,
        /// Maximum witness path length.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Decide Büchi acceptance from the given initial energy.
    Buchi {
        file: String,
        #[arg(long)]
        energy: String,
        /// Also search for a lasso witnessing a yes answer.
        #[arg(long)]
        witness: bool,
        /// Maximum stem length of the lasso search.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Maximum cycle length of the lasso search.
        #[arg(long, default_value_t = 4)]
        cycle: usize,
    },
    /// Compare the algebraic decisions against the simulation oracle.
    OracleCheck {
        file: String,
        #[arg(long)]
        energy: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        cycle: usize,
    },
    /// Export the automaton.
    ExportDot {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Dot,
}

const EXIT_YES: u8 = 0;
const EXIT_ERROR: u8 = 2;
const EXIT_NO: u8 = 3;

fn read_document(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn load(path: &str) -> Result<EnergyAutomaton, String> {
    let doc = read_document(path)?;
    EnergyAutomaton::load(&doc).map_err(|e| e.to_string())
}

fn parse_energy(s: &str) -> Result<Rat, String> {
    let r = parse_rat(s).map_err(|e| e.to_string())?;
    if r < Rat::from_integer(0.into()) {
        return Err(format!("initial energy must be nonnegative, got {s}"));
    }
    Ok(r)
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file } => match load(&file) {
            Ok(_) => {
                println!("valid");
                Ok(EXIT_YES)
            }
            Err(e) => {
                println!("invalid: {e}");
                Ok(EXIT_ERROR)
            }
        },
        Command::Closure { file } => {
            let a = load(&file)?;
            let block = a.matrix().star_block().map_err(|e| e.to_string())?;
            let elim = a.matrix().star_elim().map_err(|e| e.to_string())?;
            if block != elim {
                return Err("star closure algorithms disagree; this is a bug".into());
            }
            let order = a.user_order();
            for (i, &ii) in order.iter().enumerate() {
                for (j, &jj) in order.iter().enumerate() {
                    println!("[{},{}] {}", i, j, block.get(ii, jj));
                }
            }
            Ok(EXIT_YES)
        }
        Command::Behavior { file } => {
            let a = load(&file)?;
            println!("|A| = {}", a.finite_behavior());
            if a.k() == 0 {
                eprintln!("warning: no accepting states; the Büchi behavior is trivially never");
            }
            println!("||A|| = {}", a.buchi_behavior());
            Ok(EXIT_YES)
        }
        Command::Reach { file, energy, witness, depth } => {
            let a = load(&file)?;
            let x0 = parse_energy(&energy)?;
            let yes = a.decide_reach(&x0);
            println!("{}", if yes { "yes" } else { "no" });
            if witness && yes {
                match reach_bfs(&a, &x0, depth) {
                    Some(w) => print!("{}", render_witness(&a, &x0, &w)),
                    None => println!("no witness found within depth {depth}"),
                }
            }
            Ok(if yes { EXIT_YES } else { EXIT_NO })
        }
        Command::Buchi { file, energy, witness, depth, cycle } => {
            let a = load(&file)?;
            let x0 = parse_energy(&energy)?;
            let yes = a.decide_buchi(&x0);
            println!("{}", if yes { "yes" } else { "no" });
            if witness && yes {
                match buchi_lasso(&a, &x0, depth, cycle) {
                    Some(w) => print!("{}", render_witness(&a, &x0, &w)),
                    None => println!("no witness found within bounds ({depth}, {cycle})"),
                }
            }
            Ok(if yes { EXIT_YES } else { EXIT_NO })
        }
        Command::OracleCheck { file, energy, depth, cycle } => {
            let a = load(&file)?;
            let x0 = parse_energy(&energy)?;
            let mut ok = true;
            let reach_alg = a.decide_reach(&x0);
            let reach_wit = reach_bfs(&a, &x0, depth);
            ok &= report("reach", reach_alg, reach_wit.as_ref().map(|w| {
                oracle::replay_witness(&a, &x0, w)
            }));
            let buchi_alg = a.decide_buchi(&x0);
            let buchi_wit = buchi_lasso(&a, &x0, depth, cycle);
            ok &= report("buchi", buchi_alg, buchi_wit.as_ref().map(|w| {
                oracle::replay_witness(&a, &x0, w)
            }));
            Ok(if ok { EXIT_YES } else { EXIT_ERROR })
        }
        Command::ExportDot { file, format } => {
            let a = load(&file)?;
            match format {
                Format::Dot => print!("{}", a.to_dot()),
                Format::Text => {
                    let order = a.user_order();
                    for &i in &order {
                        let mut tags = String::new();
                        if a.is_initial(i) {
                            tags.push_str(" initial");
                        }
                        if a.is_accepting(i) {
                            tags.push_str(" accepting");
                        }
                        println!("state {}{}", a.name(i), tags);
                    }
                    for t in a.transitions() {
                        println!("{} --{}--> {}", a.name(t.from), t.label, a.name(t.to));
                    }
                }
            }
            Ok(EXIT_YES)
        }
    }
}

/// Prints one agreement line; returns false only on a genuine contradiction
/// (a witness the algebra rejects, or a witness that fails replay).
fn report(what: &str, algebra: bool, witness_replay: Option<bool>) -> bool {
    let (oracle_desc, verdict, ok) = match (algebra, witness_replay) {
        (true, Some(true)) => ("witness", "agree", true),
        (false, None) => ("none", "agree", true),
        (true, None) => ("none", "inconclusive (oracle bounds exhausted)", true),
        (false, Some(true)) => ("witness", "DISAGREE", false),
        (_, Some(false)) => ("witness", "REPLAY-FAILED", false),
    };
    println!(
        "{}: algebra={} oracle={} verdict={}",
        what,
        if algebra { "yes" } else { "no" },
        oracle_desc,
        verdict
    );
    ok
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
