use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use sftkit::flowcode::{compose, Budget, CodeStatus, FlowCode};
use sftkit::invariants::{
    bowen_franks, enumerate_invariant_pairs, flow_equivalent, smith_normal_form, z2_det_check, z2_invariant_pair,
    SignedChain,
};
use sftkit::mcg::{decide_trivial, sn_embedding_code, word_problem, DecideOptions, MappingClassWord, Permutation};
use sftkit::poseq::coker_action;
use sftkit::schema::{self, int_json, rows_json};
use sftkit::section::CrossSectionCheck;
use sftkit::sft::{analyze, orbit_count, EdgeShift, PeriodicPoint};
use sftkit::{fixtures, Error, Result};

#[derive(Parser)]
#[command(name = "sftkit", version, about = "Flow equivalence toolkit for shifts of finite type")]
struct Cli {
    /// Emit machine-readable JSON instead of a text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducibility, period, mixing and triviality of a matrix.
    Analyze { file: PathBuf },
    /// Periodic point and orbit counts up to period `n`.
    Orbits {
        file: PathBuf,
        #[arg(long)]
        n: u32,
        /// Also list the orbits of least period `n`.
        #[arg(long)]
        list: bool,
    },
    /// Bowen-Franks group and det(I - A).
    Invariants { file: PathBuf },
    /// Exit 0 when the two SFTs are flow equivalent, 1 when not.
    FlowEquivalent { a: PathBuf, b: PathBuf },
    /// Smith normal form with unimodular witnesses.
    Snf {
        /// Matrix literal such as "[[-1,-3],[-1,-1]]", or a matrix file.
        #[arg(long)]
        matrix: String,
    },
    /// The T_n family with language ({0,1}^n 2)*.
    Tn { n: usize },
    #[command(subcommand)]
    Z2(Z2Command),
    /// Run elementary moves on I - A, printing the trace and V.
    Posmove {
        file: PathBuf,
        #[arg(long)]
        moves: PathBuf,
    },
    #[command(subcommand)]
    Xsection(XsectionCommand),
    #[command(subcommand)]
    Flowcode(FlowcodeCommand),
    #[command(subcommand)]
    Mcg(McgCommand),
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

#[derive(Subcommand)]
enum Z2Command {
    /// The pair (Sm(I - (X+Y)), Sm(I - (X-Y))).
    Invariant { file: PathBuf },
    /// All invariant pairs compatible with an odd determinant.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        det: BigInt,
    },
}

#[derive(Subcommand)]
enum XsectionCommand {
    /// Exit 0 when every orbit meets the section.
    Check { file: PathBuf },
    /// Word-labeled return presentation.
    Present { file: PathBuf },
}

#[derive(Subcommand)]
enum FlowcodeCommand {
    /// Exit 0 when the table defines a conjugacy of return maps.
    Validate { file: PathBuf },
    /// Image of the periodic point (word)^∞.
    Apply {
        file: PathBuf,
        #[arg(long)]
        orbit: String,
    },
    /// Inverse code, as a flow code document.
    Invert { file: PathBuf },
    /// `outer ∘ inner`, as a flow code document.
    Compose { outer: PathBuf, inner: PathBuf },
}

#[derive(Subcommand)]
enum McgCommand {
    /// Exit 0 when the code is isotopic to the identity, 1 when not.
    Decide {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        witness_period: usize,
    },
    /// Decide a product of generators, applied right to left.
    Word {
        generators: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// The code φ_π permuting the return words α V_k.
    SnEmbed {
        #[arg(long)]
        alpha: String,
        /// Comma separated words V_1, ..., V_n.
        #[arg(long)]
        words: String,
        /// Cycle notation, 1-based, e.g. "(1 2)".
        #[arg(long)]
        perm: String,
        /// Ambient shift; defaults to the full shift on α and the word symbols.
        #[arg(long)]
        shift: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    List,
    Show {
        name: String,
        /// Parameter of the `tn` fixture.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Write the standalone fixture documents into a directory.
    Export { dir: PathBuf },
}

/// What a command reports: exit code, text and JSON forms.
struct Report {
    code: u8,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { code: 0, text, json }
    }

    fn verdict(yes: bool, text: String, json: Value) -> Self {
        Report { code: if yes { 0 } else { 1 }, text, json }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
    schema::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_shift(path: &Path) -> Result<EdgeShift> {
    schema::parse_shift(&read_json(path)?)
}

fn read_code(path: &Path) -> Result<FlowCode> {
    schema::parse_code(&read_json(path)?, None)
}

fn status_json(s: &CodeStatus, shift: &EdgeShift) -> Value {
    match s {
        CodeStatus::Valid => json!({"valid": true}),
        CodeStatus::Invalid(d) => json!({"valid": false, "stage": d.stage(), "defect": d.describe(shift)}),
        CodeStatus::Unchecked => json!({"valid": null}),
    }
}

fn run(cli: Cli) -> Result<Report> {
    let budget = Budget::default();
    match cli.command {
        Command::Analyze { file } => {
            let s = read_shift(&file)?;
            let r = analyze(s.matrix())?;
            let text = format!(
                "A = {}\nirreducible: {}\nperiod: {}\nmixing: {}\ntrivial: {}\nnondegenerate: {}\n",
                s.matrix(),
                r.irreducible,
                r.period.map_or("-".into(), |p| p.to_string()),
                r.mixing,
                r.trivial,
                r.nondegenerate
            );
            Ok(Report::ok(text, schema::tagged(serde_json::to_value(&r).expect("serializable"))))
        }
        Command::Orbits { file, n, list } => {
            let s = read_shift(&file)?;
            if n == 0 {
                return Err(Error::Domain("--n must be positive".into()));
            }
            let mut text = String::from("n\tpoints\torbits\n");
            let mut rows = Vec::new();
            for k in 1..=n {
                let points = s.matrix().fixed_points(k);
                let orbits = orbit_count(s.matrix(), k)?;
                let _ = writeln!(text, "{k}\t{points}\t{orbits}");
                rows.push(json!({"n": k, "points": int_json(&points), "orbits": int_json(&orbits)}));
            }
            let mut out = json!({"counts": rows});
            if list {
                let orbits: Vec<String> = s.periodic_orbits(n as usize)?.iter().map(|p| p.display(&s)).collect();
                for o in &orbits {
                    let _ = writeln!(text, "{o}");
                }
                out["orbits"] = json!(orbits);
            }
            Ok(Report::ok(text, schema::tagged(out)))
        }
        Command::Invariants { file } => {
            let a = schema::parse_adjacency(&read_json(&file)?)?;
            let bf = bowen_franks(&a)?;
            let s = smith_normal_form(&a.matrix().identity_minus())?;
            let text = format!("I - A = {}\nSNF: {s}\nBF = {}\ndet(I - A) = {}\n", a.matrix().identity_minus(), bf.group, bf.det);
            let v = json!({
                "bowen_franks": bf.group.to_string(),
                "torsion": bf.group.torsion.iter().map(int_json).collect::<Vec<_>>(),
                "free_rank": bf.group.free_rank,
                "det": int_json(&bf.det),
                "smith": schema::smith_json(&s),
            });
            Ok(Report::ok(text, schema::tagged(v)))
        }
        Command::FlowEquivalent { a, b } => {
            let a = schema::parse_adjacency(&read_json(&a)?)?;
            let b = schema::parse_adjacency(&read_json(&b)?)?;
            let eq = flow_equivalent(&a, &b)?;
            let (ra, rb) = (bowen_franks(&a)?, bowen_franks(&b)?);
            let text = format!(
                "{}: BF {} vs {}, det {} vs {}\n",
                if eq { "flow equivalent" } else { "not flow equivalent" },
                ra.group,
                rb.group,
                ra.det,
                rb.det
            );
            let v = json!({
                "equivalent": eq,
                "left": {"bowen_franks": ra.group.to_string(), "det": int_json(&ra.det)},
                "right": {"bowen_franks": rb.group.to_string(), "det": int_json(&rb.det)},
            });
            Ok(Report::verdict(eq, text, schema::tagged(v)))
        }
        Command::Snf { matrix } => {
            let m = if Path::new(&matrix).is_file() {
                schema::parse_rows(&read_json(Path::new(&matrix))?["rows"])?
            } else {
                schema::parse_matrix_literal(&matrix)?
            };
            let s = smith_normal_form(&m)?;
            let text = format!("{s}\nU = {}\nV = {}\n", s.left, s.right);
            Ok(Report::ok(text, schema::tagged(schema::smith_json(&s))))
        }
        Command::Tn { n } => {
            let a = fixtures::tn(n)?;
            let bf = bowen_franks(&a)?;
            let text = format!("T_{n} = {a}\nBF = {}\ndet(I - A) = {}\n", bf.group, bf.det);
            let mut v = schema::matrix_json(&a);
            v["bowen_franks"] = json!(bf.group.to_string());
            v["det"] = int_json(&bf.det);
            Ok(Report::ok(text, schema::tagged(v)))
        }
        Command::Z2(Z2Command::Invariant { file }) => {
            let z = schema::parse_z2(&read_json(&file)?)?;
            let check = z2_det_check(&z);
            let (p, q) = z2_invariant_pair(&z)?;
            let text = format!(
                "Sm(I - (X+Y)) = {p}\nSm(I - (X-Y)) = {q}\ndet(I - F) = {} = {}\n",
                check.lhs, check.rhs
            );
            let v = json!({
                "plus": schema::smith_json(&p),
                "minus": schema::smith_json(&q),
                "det": int_json(&check.lhs),
                "det_factored": int_json(&check.rhs),
            });
            Ok(Report::ok(text, schema::tagged(v)))
        }
        Command::Z2(Z2Command::Enumerate { det }) => {
            let pairs = enumerate_invariant_pairs(&det)?;
            let chain = |c: &SignedChain| json!({"negative": c.negative, "factors": c.factors.iter().map(int_json).collect::<Vec<_>>()});
            let mut text = String::new();
            for (a, b) in &pairs {
                let _ = writeln!(text, "({a}, {b})");
            }
            let v = json!({"det": int_json(&det), "pairs": pairs.iter().map(|(a, b)| json!([chain(a), chain(b)])).collect::<Vec<_>>()});
            Ok(Report::ok(text, schema::tagged(v)))
        }
        Command::Posmove { file, moves } => {
            let a = schema::parse_adjacency(&read_json(&file)?)?;
            let moves = schema::parse_moves(&read_json(&moves)?)?;
            let act = coker_action(&a, &moves)?;
            let mut text = String::new();
            let _ = writeln!(text, "I - A = {}", act.trace[0].matrix().identity_minus());
            for (m, b) in moves.iter().zip(&act.trace[1..]) {
                let _ = writeln!(text, "{m}: I - A = {}", b.matrix().identity_minus());
            }
            let _ = writeln!(text, "U = {}\nV = {}", act.left, act.right);
            let v = json!({
                "trace": act.trace.iter().map(|b| rows_json(b.matrix())).collect::<Vec<_>>(),
                "U": rows_json(&act.left),
                "V": rows_json(&act.right),
            });
            Ok(Report::ok(text, schema::tagged(v)))
        }
        Command::Xsection(XsectionCommand::Check { file }) => {
            let c = schema::parse_section(&read_json(&file)?, None)?;
            let (ok, text, v) = match c.check() {
                CrossSectionCheck::Ok { max_return_time } => (
                    true,
                    format!("cross section, maximal return time {max_return_time}\n"),
                    json!({"cross_section": true, "max_return_time": max_return_time}),
                ),
                CrossSectionCheck::Fail { witness } => {
                    let w = if witness.is_empty() { None } else { Some(format!("({})^∞", c.shift().format_word(&witness))) };
                    let text = match &w {
                        Some(w) => format!("not a cross section: {w} never meets it\n"),
                        None => "not a cross section\n".to_string(),
                    };
                    (false, text, json!({"cross_section": false, "witness": w}))
                }
            };
            Ok(Report::verdict(ok, text, schema::tagged(v)))
        }
        Command::Xsection(XsectionCommand::Present { file }) => {
            let c = schema::parse_section(&read_json(&file)?, None)?;
            let p = c.presentation()?;
            let text = format!("classes: {}\nlabeled: {}\nunlabeled: {}\n", p.classes.join(", "), p.labeled_text, p.unlabeled_text());
            let v = json!({"classes": p.classes, "labeled": p.labeled_text, "unlabeled": p.unlabeled()});
            Ok(Report::ok(text, schema::tagged(v)))
        }
        Command::Flowcode(FlowcodeCommand::Validate { file }) => {
            let f = read_code(&file)?;
            let status = f.validate(&budget)?;
            let text = match &status {
                CodeStatus::Invalid(d) => format!("invalid ({}): {}\n", d.stage(), d.describe(f.shift())),
                _ => "valid conjugacy\n".to_string(),
            };
            Ok(Report::verdict(status == CodeStatus::Valid, text, schema::tagged(status_json(&status, f.shift()))))
        }
        Command::Flowcode(FlowcodeCommand::Apply { file, orbit }) => {
            let f = read_code(&file)?.validated(&budget)?;
            f.require_valid()?;
            let s = f.shift();
            let w = s.parse_word(&orbit)?;
            let x = PeriodicPoint::new(s, w, 0)?;
            let y = f.orbit_image(&x)?;
            let text = format!("{} ↦ {}\n", x.display(s), y.display(s));
            Ok(Report::ok(text, schema::tagged(json!({"point": x.display(s), "image": y.display(s)}))))
        }
        Command::Flowcode(FlowcodeCommand::Invert { file }) => {
            let f = read_code(&file)?.validated(&budget)?;
            let g = f.invert(&budget)?;
            Ok(Report::ok(g.to_string(), schema::code_json(&g)))
        }
        Command::Flowcode(FlowcodeCommand::Compose { outer, inner }) => {
            let f2 = read_code(&outer)?.validated(&budget)?;
            let f1 = read_code(&inner)?.validated(&budget)?;
            let g = compose(&f2, &f1, &budget)?;
            Ok(Report::ok(g.to_string(), schema::code_json(&g)))
        }
        Command::Mcg(McgCommand::Decide { file, witness_period }) => {
            let f = read_code(&file)?.validated(&budget)?;
            let opts = DecideOptions { witness_period, ..DecideOptions::default() };
            let cert = decide_trivial(&f, &opts)?;
            let text = format!("{}\n", cert.describe(f.shift()));
            Ok(Report::verdict(cert.is_trivial(), text, schema::certificate_json(&cert, f.shift())))
        }
        Command::Mcg(McgCommand::Word { generators, word }) => {
            let mut gens = schema::parse_generators(&read_json(&generators)?)?;
            for f in gens.values_mut() {
                *f = f.clone().validated(&budget)?;
            }
            let w = MappingClassWord::parse(gens, &word)?;
            let shift = w.shift().cloned().ok_or_else(|| Error::Domain("no generators".into()))?;
            let r = word_problem(&w, &DecideOptions::default())?;
            let text = format!("{w}: {}\n", r.certificate.describe(&shift));
            let mut v = schema::certificate_json(&r.certificate, &shift);
            v["word"] = json!(w.to_string());
            Ok(Report::verdict(r.certificate.is_trivial(), text, v))
        }
        Command::Mcg(McgCommand::SnEmbed { alpha, words, perm, shift }) => {
            let words: Vec<&str> = words.split(',').map(str::trim).filter(|w| !w.is_empty()).collect();
            let shift = match shift {
                Some(p) => read_shift(&p)?,
                None => {
                    let mut symbols: Vec<String> = vec![alpha.clone()];
                    for c in words.iter().flat_map(|w| w.chars()) {
                        if !symbols.contains(&c.to_string()) {
                            symbols.push(c.to_string());
                        }
                    }
                    let refs: Vec<&str> = symbols.iter().map(String::as_str).collect();
                    EdgeShift::full_shift(&refs)?
                }
            };
            let pi = Permutation::parse(&perm, words.len())?;
            let f = sn_embedding_code(&shift, &alpha, &words, &pi)?;
            let cert = decide_trivial(&f, &DecideOptions::default())?;
            let text = format!("φ_{pi} on N = {}\n{f}{}\n", f.domain().window(), cert.describe(&shift));
            let mut v = schema::code_json(&f);
            v["certificate"] = schema::certificate_json(&cert, &shift);
            v["permutation"] = json!(pi.to_string());
            Ok(Report::ok(text, v))
        }
        Command::Fixtures(FixturesCommand::List) => {
            let text = fixtures::FIXTURE_NAMES.join("\n") + "\n";
            Ok(Report::ok(text, schema::tagged(json!({"fixtures": fixtures::FIXTURE_NAMES}))))
        }
        Command::Fixtures(FixturesCommand::Show { name, n }) => {
            let v = fixtures::payload(&name, n)?;
            Ok(Report::ok(schema::to_string(&v), v))
        }
        Command::Fixtures(FixturesCommand::Export { dir }) => {
            std::fs::create_dir_all(&dir).map_err(|e| Error::Domain(format!("{}: {e}", dir.display())))?;
            let mut written = BTreeMap::new();
            for (name, v) in fixtures::files()? {
                let path = dir.join(&name);
                std::fs::write(&path, schema::to_string(&v)).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
                written.insert(name, Value::String(path.display().to_string()));
            }
            let text = written.keys().cloned().collect::<Vec<_>>().join("\n") + "\n";
            Ok(Report::ok(text, schema::tagged(json!({"written": written}))))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let as_json = cli.json;
    match run(cli) {
        Ok(r) => {
            if as_json {
                print!("{}", schema::to_string(&r.json));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            if as_json {
                let v = schema::tagged(json!({"error": e.to_string(), "exit_code": e.exit_code()}));
                print!("{}", schema::to_string(&v));
            }
            eprintln!("sftkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
