use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use wtl::constructions::{letter_equivalent_npda, to_nonreturning, union_compatible, ConstructionError, NpdaError, DEFAULT_STATE_CAP};
use wtl::decision::{bounded_equivalence_any_mode, bounded_universality, emptiness, finiteness, DecisionError, DecisionReport};
use wtl::engine::{accepting_trace, format_trace, try_accepts, LimitExceeded};
use wtl::langlib::{fixtures, oracle, parikh_upto, OracleId, ParikhSource, ParikhVector, UnknownOracle, LBA_TOY};
use wtl::model::{UnknownLetter, Violations};
use wtl::valc::{build_invalc, in_valcp, mutate_valid, valc_generate, InvalcError, Lba, LbaError, DEFAULT_INVALC_CAP};
use wtl::{enumerate, run_deterministic, Automaton, Limits, VerdictKind};

use crate::{Cli, Command, Construction, FixturesAction, Question, ValcAction};

const TOY_LBA: &str = "toy_lba";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:\n{source}")]
    Invalid { path: String, source: Violations },
    #[error("{path}:\n{source}")]
    InvalidLba { path: String, source: LbaError },
    #[error(transparent)]
    Letter(#[from] UnknownLetter),
    #[error(transparent)]
    Oracle(#[from] UnknownOracle),
    #[error(transparent)]
    Guard(#[from] LimitExceeded),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Npda(#[from] NpdaError),
    #[error(transparent)]
    Invalc(#[from] InvalcError),
    #[error(transparent)]
    Lba(#[from] LbaError),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn load(path: &Path) -> Result<Automaton> {
    let (m, warnings) = Automaton::from_text(&read(path)?).map_err(|source| CliError::Invalid {
        path: path.display().to_string(),
        source,
    })?;
    for w in warnings {
        eprintln!("{}: {w}", path.display());
    }
    Ok(m)
}

fn load_lba(path: &Path) -> Result<Lba> {
    Lba::from_text(&read(path)?).map_err(|source| CliError::InvalidLba {
        path: path.display().to_string(),
        source,
    })
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) if p != Path::new("-") => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        _ => {
            let mut out = io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

/// Whitespace-separated tokens, or single characters under `--chars`.
pub fn tokens(args: &[String], chars: bool) -> Vec<String> {
    if chars {
        args.iter()
            .flat_map(|a| a.chars().filter(|c| !c.is_whitespace()).map(String::from))
            .collect()
    } else {
        args.iter().flat_map(|a| a.split_whitespace().map(String::from)).collect()
    }
}

fn show(w: &[String]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.join(" ")
    }
}

fn report(cli: &Cli, r: &DecisionReport) -> u8 {
    if cli.json {
        println!("{}", r.to_json());
    } else {
        print!("{r}");
    }
    r.exit_code() as u8
}

fn parikh_line(v: &ParikhVector) -> String {
    v.iter().map(|(a, n)| format!("{a}={n}")).collect::<Vec<_>>().join(" ")
}

pub fn execute(cli: &Cli) -> Result<u8> {
    let limits = Limits {
        max_configurations: cli.max_configurations,
    };
    match &cli.command {
        Command::Validate { file } => {
            let m = load(file)?;
            println!(
                "ok: {} mode, {} states, {} letters, {} stack symbols, {}",
                m.mode(),
                m.state_count(),
                m.letter_count(),
                m.stack_count(),
                if m.is_deterministic() { "deterministic" } else { "nondeterministic" }
            );
            Ok(0)
        }
        Command::Run { file, word } => {
            let m = load(file)?;
            let w = m.encode_word(&tokens(word, cli.chars))?;
            let accepted = if m.is_deterministic() {
                let v = run_deterministic(&m, &w).expect("checked deterministic");
                println!("{}", v.kind);
                v.kind == VerdictKind::Accept
            } else {
                let a = try_accepts(&m, &w, limits)?;
                println!("{}", if a { "ACCEPT" } else { "REJECT" });
                a
            };
            Ok(if accepted { 0 } else { 1 })
        }
        Command::Trace { file, word } => {
            let m = load(file)?;
            let w = m.encode_word(&tokens(word, cli.chars))?;
            if m.is_deterministic() {
                let v = run_deterministic(&m, &w).expect("checked deterministic");
                for line in format_trace(&m, &v.trace) {
                    println!("{line}");
                }
                println!("{}", v.kind);
                Ok(if v.kind == VerdictKind::Accept { 0 } else { 1 })
            } else {
                match accepting_trace(&m, &w, limits)? {
                    Some(t) => {
                        for line in format_trace(&m, &t) {
                            println!("{line}");
                        }
                        println!("ACCEPT");
                        Ok(0)
                    }
                    None => {
                        println!("REJECT (no accepting computation)");
                        Ok(1)
                    }
                }
            }
        }
        Command::Enumerate { file, max_len } => {
            let m = load(file)?;
            for w in enumerate(&m, *max_len, None, limits)? {
                println!("{}", show(&m.decode_word(&w)));
            }
            Ok(0)
        }
        Command::Decide { question, file } => {
            let m = load(file)?;
            let r = match question {
                Question::Emptiness => emptiness(&m)?,
                Question::Finiteness => finiteness(&m)?,
            };
            Ok(report(cli, &r))
        }
        Command::Universality { file, bound } => {
            let m = load(file)?;
            Ok(report(cli, &bounded_universality(&m, *bound, limits)?))
        }
        Command::Compare { file1, file2, max_len } => {
            let (a, b) = (load(file1)?, load(file2)?);
            let r = bounded_equivalence_any_mode(&a, &b, *max_len, limits)?;
            if cli.json {
                println!("{}", r.to_json());
            }
            match &r.witness {
                Some(w) => {
                    if !cli.json {
                        let in_a = match a.encode_word(w) {
                            Ok(ids) => try_accepts(&a, &ids, limits)?,
                            Err(_) => false,
                        };
                        let side = if in_a {
                            file1
                        } else {
                            file2
                        };
                        println!("differ on: {} (accepted by {} only)", show(w), side.display());
                    }
                    Ok(1)
                }
                None => {
                    if !cli.json {
                        println!("equivalent up to {max_len}");
                    }
                    Ok(0)
                }
            }
        }
        Command::Construct {
            kind,
            file,
            file2,
            output,
        } => {
            let m = load(file)?;
            let second = match (kind, file2) {
                (Construction::Union, Some(p)) => Some(load(p)?),
                (Construction::Union, None) => return Err(CliError::Usage("union needs two files".into())),
                (_, Some(_)) => return Err(CliError::Usage(format!("{kind:?} takes one file").to_lowercase())),
                (_, None) => None,
            };
            let text = match kind {
                Construction::Nonreturning => to_nonreturning(&m)?.to_text(),
                Construction::Npda => letter_equivalent_npda(&m, DEFAULT_STATE_CAP)?.to_text(),
                Construction::Union => union_compatible(&m, second.as_ref().expect("checked above"))?.to_text(),
            };
            emit(output.as_ref(), &text)?;
            Ok(0)
        }
        Command::Oracle { name, word } => {
            let id: OracleId = name.parse()?;
            let w = tokens(word, cli.chars);
            let yes = oracle(id, &w);
            println!("{}", if yes { "member" } else { "non-member" });
            Ok(if yes { 0 } else { 1 })
        }
        Command::Parikh { source, max_len } => {
            let set = match source.strip_prefix("oracle:") {
                Some(name) => parikh_upto(ParikhSource::Oracle(name.parse()?), *max_len, limits)?,
                None => {
                    let m = load(Path::new(source))?;
                    parikh_upto(ParikhSource::Automaton(&m), *max_len, limits)?
                }
            };
            let mut lines: Vec<(usize, String)> =
                set.iter().map(|v| (v.values().sum(), parikh_line(v))).collect();
            lines.sort();
            for (_, l) in lines {
                println!("{l}");
            }
            Ok(0)
        }
        Command::Fixtures { action } => match action {
            FixturesAction::List => {
                for f in fixtures() {
                    let m = f.automaton();
                    println!(
                        "{:<14} {:<14} {:<13} {}",
                        f.name,
                        f.oracle.map_or("-", OracleId::name),
                        m.mode().to_string(),
                        f.file_name()
                    );
                }
                println!("{TOY_LBA:<14} {:<14} {:<13} toy.lba", "-", "lba");
                Ok(0)
            }
            FixturesAction::Emit { name, output } => {
                let text = if name == TOY_LBA {
                    LBA_TOY
                } else {
                    fixtures()
                        .iter()
                        .find(|f| f.name == name)
                        .ok_or_else(|| CliError::Usage(format!("unknown fixture `{name}`")))?
                        .source
                };
                emit(output.as_ref(), text)?;
                Ok(0)
            }
        },
        Command::Valc { action } => match action {
            ValcAction::Build { lba, output } => {
                let m = build_invalc(&load_lba(lba)?, DEFAULT_INVALC_CAP)?;
                log::info!("INVALC machine: {} states, {} letters", m.state_count(), m.letter_count());
                emit(output.as_ref(), &m.to_text())?;
                Ok(0)
            }
            ValcAction::Gen {
                lba,
                mutate,
                seed,
                input,
            } => {
                let lba = load_lba(lba)?;
                match valc_generate(&lba, &tokens(input, cli.chars))? {
                    Some(w) => {
                        let w = if *mutate { mutate_valid(&lba, &w, *seed) } else { w };
                        println!("{}", w.join(" "));
                        Ok(0)
                    }
                    None => {
                        println!("input is not accepted");
                        Ok(1)
                    }
                }
            }
            ValcAction::Check { lba, word } => {
                let lba = load_lba(lba)?;
                let w = tokens(word, cli.chars);
                let valid = in_valcp(&lba, &w);
                let m = build_invalc(&lba, DEFAULT_INVALC_CAP)?;
                let flagged = m.encode_word(&w).is_ok_and(|ids| wtl::accepts(&m, &ids));
                println!("{}", if valid { "valid computation" } else { "invalid" });
                println!("INVALC machine: {}", if flagged { "accepts" } else { "rejects" });
                if flagged == valid {
                    log::warn!("the INVALC machine disagrees with the direct check");
                }
                Ok(if valid { 0 } else { 1 })
            }
        },
    }
}
