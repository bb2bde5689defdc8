//! Command-line frontend. [`run`] parses arguments, writes to the given
//! streams and returns the process exit status.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::encoding::{Encoding, Form};
use crate::error::{Error, Result};
use crate::formulas::{applicable_formulas, brute_force};
use crate::graph::{build_g_capped, EdgeKind, LabeledGraph, VertexLabel, DEFAULT_VERTEX_CAP};
use crate::perm::Permutation;
use crate::reproduce::{reproduce, Artifact};
use crate::stats::{at_lower_csv, check_2413, classify_brute, summarize, sweep};
use crate::word::{count_reduced_words, enumerate_capped, DEFAULT_WORD_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REPRODUCE_DIFF: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "rwgraph", version, about = "Reduced word graphs of permutations")]
struct Cli {
    /// Worker threads for sweeps and diameters (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every reduced word, one per line, sorted.
    Enumerate {
        perm: Permutation,
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        cap: usize,
    },
    /// Print G, or its quotient by one kind of edge.
    Graph {
        perm: Permutation,
        /// Contract commutation (C) or long braid (B) edges.
        #[arg(long, value_enum)]
        contract: Option<Contract>,
        #[arg(long, conflicts_with_all = ["json", "listing"])]
        dot: bool,
        #[arg(long, conflicts_with = "listing")]
        json: bool,
        /// Sorted `vertex` / `edge` lines.
        #[arg(long)]
        listing: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Brute-force diameters.
    Diameter {
        perm: Permutation,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Print the encoding set of an inflation with the decoded reduced words.
    Encode {
        form: Form,
        alpha: Permutation,
        beta: Permutation,
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        cap: usize,
    },
    /// Apply every diameter formula that fits the permutation.
    Formulas {
        perm: Permutation,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Classify every permutation of size n; JSON lines.
    Sweep {
        n: usize,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Write the JSON lines here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the rows at the lower bound as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Diameter of G against the bounds from |L2|.
    Classify {
        perm: Permutation,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Regenerate a bundled reference artifact and diff it against the golden file.
    Reproduce {
        artifact: Artifact,
        /// Print the regenerated artifact as well.
        #[arg(long)]
        show: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Contract {
    #[value(name = "C", alias = "c")]
    C,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    G,
    C,
    B,
    All,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_USAGE;
        }
    };
    // Output is buffered so that a failing command prints nothing to stdout.
    let (mut buf, mut notes) = (Vec::new(), Vec::new());
    let status = pool.install(|| execute(cli.command, &mut buf, &mut notes));
    let _ = err.write_all(&notes);
    match status {
        Ok(code) => {
            if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Precondition(format!("i/o failure: {e}"))
}

fn execute(command: Command, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<i32> {
    match command {
        Command::Enumerate { perm, cap } => {
            for w in enumerate_capped(&perm, cap)? {
                writeln!(out, "{w}").map_err(io_err)?;
            }
        }
        Command::Graph {
            perm,
            contract,
            dot: _,
            json,
            listing,
            cap,
        } => {
            let g = build_g_capped(&perm, cap)?;
            let name = format!("{perm}");
            let text = match contract {
                None => render(&g, &format!("G {name}"), json, listing),
                Some(Contract::C) => render(&g.contract(EdgeKind::Commutation), &format!("C {name}"), json, listing),
                Some(Contract::B) => render(&g.contract(EdgeKind::LongBraid), &format!("B {name}"), json, listing),
            };
            out.extend_from_slice(text.as_bytes());
        }
        Command::Diameter { perm, which, cap } => {
            let g = build_g_capped(&perm, cap)?;
            let value = |kind: Option<EdgeKind>| -> Result<usize> {
                match kind {
                    None => g.diameter_capped(cap),
                    Some(k) => g.contract(k).diameter_capped(cap),
                }
            };
            let line = match which {
                Which::G => format!("g={}", value(None)?),
                Which::C => format!("c={}", value(Some(EdgeKind::Commutation))?),
                Which::B => format!("b={}", value(Some(EdgeKind::LongBraid))?),
                Which::All => format!(
                    "g={} c={} b={}",
                    value(None)?,
                    value(Some(EdgeKind::Commutation))?,
                    value(Some(EdgeKind::LongBraid))?
                ),
            };
            writeln!(out, "{line}").map_err(io_err)?;
        }
        Command::Encode { form, alpha, beta, cap } => {
            let enc = Encoding::new(form, alpha, beta)?;
            let words = enc.words_capped(cap)?;
            writeln!(out, "# {} words encoding {}", words.len(), enc.inflated()).map_err(io_err)?;
            for w in &words {
                writeln!(out, "{}\t{}", w.compact(), enc.decode(w)?).map_err(io_err)?;
            }
        }
        Command::Formulas { perm, cap } => {
            for v in applicable_formulas(&perm, DEFAULT_WORD_CAP, cap)? {
                let value = if let Some(t) = v.exact {
                    t.to_string()
                } else if let Some(b) = v.bounds {
                    format!(
                        "g in [{}, {}] c={} b in [{}, {}]",
                        b.g_lower, b.g_upper, b.c, b.b_lower, b.b_upper
                    )
                } else if let Some(g) = v.g_only {
                    format!("g={g}")
                } else {
                    continue;
                };
                writeln!(out, "{}: {value}", v.name).map_err(io_err)?;
            }
            let words = count_reduced_words(&perm);
            if words <= cap as u128 {
                writeln!(out, "brute force: {}", brute_force(&perm, DEFAULT_WORD_CAP, cap)?).map_err(io_err)?;
            } else {
                writeln!(out, "brute force: skipped ({words} reduced words, cap {cap})").map_err(io_err)?;
            }
        }
        Command::Sweep { n, cap, out: path, csv } => {
            if n == 0 {
                return Err(Error::Precondition("sweep size must be at least 1".into()));
            }
            let entries = sweep(n, cap)?;
            let mut lines = String::new();
            for e in &entries {
                lines.push_str(&e.to_json().to_string());
                lines.push('\n');
            }
            match path {
                Some(p) => write_file(&p, lines.as_bytes())?,
                None => out.extend_from_slice(lines.as_bytes()),
            }
            if let Some(p) = csv {
                write_file(&p, at_lower_csv(&entries).as_bytes())?;
            }
            let s = summarize(&entries);
            let counts: Vec<String> = s.class_counts.iter().map(|(c, k)| format!("{}={k}", c.name())).collect();
            let _ = writeln!(err, "classified {} of {}, skipped {}", s.covered, entries.len(), s.skipped.len());
            let _ = writeln!(err, "classes: {}", counts.join(" "));
            let _ = writeln!(err, "bound violations: {}", join(&s.bound_violations));
            let _ = writeln!(err, "3412-containing at the upper bound: {}", join(&s.pattern_3412_violations));
            if n == 4 {
                let r = check_2413()?;
                let _ = writeln!(err, "2413: {} without any known upper-bound construction", r.class.name());
            }
        }
        Command::Classify { perm, cap } => {
            let r = classify_brute(&perm, cap)?;
            writeln!(out, "{}", r.to_json()).map_err(io_err)?;
        }
        Command::Reproduce { artifact, show } => {
            let r = reproduce(artifact)?;
            if show {
                out.extend_from_slice(r.generated.as_bytes());
            }
            for n in &r.notes {
                let _ = writeln!(err, "{n}");
            }
            if r.matches() {
                writeln!(out, "{artifact}: matches golden file").map_err(io_err)?;
            } else {
                for l in &r.diff {
                    writeln!(out, "{l}").map_err(io_err)?;
                }
                writeln!(out, "{artifact}: {} differing lines", r.diff.len()).map_err(io_err)?;
                return Ok(EXIT_REPRODUCE_DIFF);
            }
        }
    }
    Ok(EXIT_OK)
}

fn render<T: VertexLabel>(g: &LabeledGraph<T>, name: &str, json: bool, listing: bool) -> String {
    if json {
        format!("{}\n", g.to_json())
    } else if listing {
        g.to_listing()
    } else {
        g.to_dot(name)
    }
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<()> {
    let f = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(f);
    w.write_all(bytes).and_then(|_| w.flush()).map_err(io_err)
}

fn join(perms: &[Permutation]) -> String {
    if perms.is_empty() {
        "none".into()
    } else {
        perms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["rwgraph"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn enumerate_321() {
        assert_eq!(call(&["enumerate", "321"]), (0, "121\n212\n".into(), String::new()));
    }

    #[test]
    fn diameters_of_4231() {
        assert_eq!(call(&["diameter", "4231", "--which", "all"]).1, "g=4 c=2 b=2\n");
        assert_eq!(call(&["diameter", "4231", "--which", "c"]).1, "c=2\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["enumerate", "1123"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        let (code, out, err) = call(&["enumerate", "654321", "--cap", "10"]);
        assert_eq!((code, out.as_str()), (2, ""));
        assert!(err.contains("cap"), "{err}");
        let (code, _, err) = call(&["encode", "21", "21", "1"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(call(&["sweep", "0"]).0, 3);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn graph_formats() {
        let dot = call(&["graph", "321"]).1;
        assert!(dot.starts_with("graph \"G 321\" {"), "{dot}");
        assert!(dot.contains("\"121\" -- \"212\" [color"));
        let json = call(&["graph", "321", "--contract", "C", "--json"]).1;
        assert_eq!(json, "{\"edges\":[[0,1,\"B\"]],\"vertices\":[\"{121}\",\"{212}\"]}\n");
        assert_eq!(call(&["graph", "321", "--listing"]).1, "vertex 121\nvertex 212\nedge 121 212 B\n");
    }

    #[test]
    fn encode_and_formulas() {
        let out = call(&["encode", "12", "21", "21"]).1;
        assert!(out.starts_with("# 2 words encoding 2143\n"), "{out}");
        assert!(out.contains("_1^1\t13\n"), "{out}");
        let out = call(&["formulas", "2143"]).1;
        assert!(out.contains("12[21,21]: g=1 c=0 b=1\n"), "{out}");
        assert!(out.ends_with("brute force: g=1 c=0 b=1\n"), "{out}");
    }

    #[test]
    fn classify_and_reproduce() {
        let out = call(&["--threads", "2", "classify", "3412"]).1;
        assert!(out.contains("\"class\":\"AtLower\""), "{out}");
        let (code, out, _) = call(&["reproduce", "fig2"]);
        assert_eq!((code, out.as_str()), (0, "fig2: matches golden file\n"));
    }

    #[test]
    fn deterministic_output() {
        assert_eq!(call(&["sweep", "4"]).1, call(&["--threads", "1", "sweep", "4"]).1);
    }
}
