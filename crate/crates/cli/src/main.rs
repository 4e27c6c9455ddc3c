//! `brauer`: command-line front end for Brauer configurations.
//!
//! Exit codes: 0 on success, 1 when a check or verification fails (the
//! report is still printed), 2 on usage, IO or format errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brauer_core::algebra::{cartan_matrix, quiver, total_dimension};
use brauer_core::config::{are_isomorphic, parse_document, random_configuration, RandomSpec};
use brauer_core::corpus::{check_configuration, corpus_configuration, Invariant, Options, Outcome};
use brauer_core::flip::{angle_decomposition, condition_e_witness, flip, Direction};
use brauer_core::mutation::{endomorphism_grid, mutation_complex, verify_dim_equalities};
use brauer_core::oracle::{verify_homotopy, verify_phi};
use brauer_core::{BrauerConfiguration, Error, PolygonId, VerificationReport};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "brauer", version, about = "Brauer configurations, flips and mutation checks")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a configuration, listing every violation.
    Validate { file: PathBuf },
    /// Vertex and polygon statistics, condition (E) and the Cartan matrix.
    Info { file: PathBuf },
    /// The quiver of the configuration algebra.
    Quiver {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = QuiverFormat::Dot)]
        format: QuiverFormat,
    },
    /// The BC1 and BC2 relations.
    Relations { file: PathBuf },
    /// Decide condition (E); on success dump the angle decomposition.
    CheckE {
        file: PathBuf,
        #[arg(long)]
        polygon: String,
        #[arg(long, default_value_t = Direction::Left)]
        direction: Direction,
    },
    /// Flip at a polygon and print the new configuration.
    Flip {
        file: PathBuf,
        #[arg(long)]
        polygon: String,
        #[arg(long, default_value_t = Direction::Left)]
        direction: Direction,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The two-term mutation complex at a polygon and its Euler-form grid.
    Mutate {
        file: PathBuf,
        #[arg(long)]
        polygon: String,
        #[arg(long)]
        dump_complex: bool,
    },
    /// Check the mutation at a polygon against the flip.
    Verify {
        file: PathBuf,
        #[arg(long)]
        polygon: String,
        #[arg(long, value_enum, default_value_t = Level::Dims)]
        level: Level,
        /// Prime for the field computations; must be 1 mod 2L.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Search for an isomorphism between two configurations.
    Iso { first: PathBuf, second: PathBuf },
    /// Generate a random configuration.
    Random {
        #[arg(long)]
        angles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        min_polygon: usize,
        #[arg(long, default_value_t = 4)]
        max_polygon: usize,
        #[arg(long, default_value_t = 2)]
        max_multiplicity: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite over seeded random configurations.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: u64,
        /// Skip the prime-field endomorphism check.
        #[arg(long)]
        no_phi: bool,
        /// Write failing configurations here as `.bcf` files.
        #[arg(long)]
        save_failures: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuiverFormat {
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Dims,
    Homotopy,
    Phi,
}

/// What a command produced: text, its JSON form, and whether it passed.
struct Output {
    text: String,
    json: Value,
    pass: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, pass: true }
    }

    fn report(r: &VerificationReport) -> Self {
        Self {
            text: r.to_table(),
            json: serde_json::to_value(r).expect("reports serialize"),
            pass: r.passed(),
        }
    }
}

enum Failure {
    Usage(String),
    Check(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConditionE { .. } | Error::BadPrime(_) | Error::CommutingSquare(_) => Failure::Check(e),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Run = Result<Output, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<BrauerConfiguration, Failure> {
    let text = read(path)?;
    let data = parse_document(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    BrauerConfiguration::from_data(data).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_or_print(output: &Option<PathBuf>, text: &str) -> Result<String, Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text.to_string()),
    }
}

fn grid_text(cfg: &BrauerConfiguration, grid: &[Vec<String>]) -> String {
    let names: Vec<&str> = cfg.polygons().map(|p| cfg.polygon_name(p)).collect();
    let width = grid
        .iter()
        .flatten()
        .map(String::len)
        .chain(names.iter().map(|n| n.len()))
        .max()
        .unwrap_or(1);
    let mut out = format!("{:width$}", "");
    for n in &names {
        let _ = write!(out, " {n:>width$}");
    }
    out.push('\n');
    for (n, row) in names.iter().zip(grid) {
        let _ = write!(out, "{n:width$}");
        for x in row {
            let _ = write!(out, " {x:>width$}");
        }
        out.push('\n');
    }
    out
}

fn to_strings<T: ToString>(grid: &[Vec<T>]) -> Vec<Vec<String>> {
    grid.iter().map(|r| r.iter().map(T::to_string).collect()).collect()
}

fn validate(file: &Path) -> Run {
    let text = read(file)?;
    let data = parse_document(&text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let report = data.validate();
    if report.is_valid() {
        let cfg = BrauerConfiguration::from_data(data)?;
        let text = format!(
            "valid: {} angles, {} vertices, {} polygons\n",
            cfg.num_angles(),
            cfg.num_vertices(),
            cfg.num_polygons()
        );
        Ok(Output::ok(
            text,
            json!({"valid": true, "angles": cfg.num_angles(), "vertices": cfg.num_vertices(), "polygons": cfg.num_polygons()}),
        ))
    } else {
        Ok(Output {
            text: format!("invalid:\n{report}\n"),
            json: json!({"valid": false, "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>()}),
            pass: false,
        })
    }
}

fn info(file: &Path) -> Run {
    let cfg = load(file)?;
    let mut text = format!(
        "angles {}  vertices {}  polygons {}  dimension {}\n",
        cfg.num_angles(),
        cfg.num_vertices(),
        cfg.num_polygons(),
        total_dimension(&cfg)
    );
    text.push_str("vertex  val  mult  class\n");
    let mut vertices = Vec::new();
    for v in cfg.vertices() {
        let class = cfg.classify_vertex(v);
        let _ = writeln!(
            text,
            "{}  {}  {}  {class}",
            cfg.vertex_name(v),
            cfg.valency(v),
            cfg.multiplicity(v)
        );
        vertices.push(json!({"id": cfg.vertex_name(v), "valency": cfg.valency(v), "multiplicity": cfg.multiplicity(v), "class": class}));
    }
    text.push_str("polygon  size  edge  self-folded  (E) left  (E) right\n");
    let mut polygons = Vec::new();
    for p in cfg.polygons() {
        let c = cfg.classify_polygon(p);
        let left = condition_e_witness(&cfg, p, Direction::Left).is_none();
        let right = condition_e_witness(&cfg, p, Direction::Right).is_none();
        let _ = writeln!(
            text,
            "{}  {}  {}  {}  {left}  {right}",
            cfg.polygon_name(p),
            c.size,
            c.is_edge,
            c.is_self_folded
        );
        polygons.push(json!({"id": cfg.polygon_name(p), "class": c, "condition_e_left": left, "condition_e_right": right}));
    }
    let cartan = cartan_matrix(&cfg);
    text.push_str("cartan matrix:\n");
    text.push_str(&grid_text(&cfg, &to_strings(&cartan)));
    Ok(Output::ok(
        text,
        json!({"dimension": total_dimension(&cfg), "vertices": vertices, "polygons": polygons, "cartan": cartan}),
    ))
}

fn decomposition_json(cfg: &BrauerConfiguration, v: PolygonId) -> Result<Value, Failure> {
    let d = angle_decomposition(cfg, v)?;
    let names = |s: &[brauer_core::AngleId]| s.iter().map(|&a| cfg.angle_name(a).to_string()).collect::<Vec<_>>();
    let map = |m: &[Option<brauer_core::AngleId>]| {
        cfg.angles()
            .filter_map(|a| m[a.0].map(|b| (cfg.angle_name(a).to_string(), Value::from(cfg.angle_name(b)))))
            .collect::<serde_json::Map<_, _>>()
    };
    Ok(json!({
        "polygon": cfg.polygon_name(v),
        "H1": names(&d.h1), "H2": names(&d.h2), "H3": names(&d.h3), "H4": names(&d.h4), "H5": names(&d.h5),
        "p": map(&d.p), "n": map(&d.n), "x": map(&d.x),
    }))
}

fn check_e(file: &Path, polygon: &str, direction: Direction) -> Run {
    let cfg = load(file)?;
    let v = cfg.polygon(polygon)?;
    if let Some(w) = condition_e_witness(&cfg, v, direction) {
        let text = format!(
            "condition (E) fails at {polygon} ({direction}): angle {} has neighbour in polygon {}, which is neither an edge nor {polygon}\n",
            cfg.angle_name(w.angle),
            cfg.polygon_name(w.offending)
        );
        return Ok(Output {
            text,
            json: json!({"polygon": polygon, "direction": direction, "holds": false,
                "witness": {"angle": cfg.angle_name(w.angle), "offending": cfg.polygon_name(w.offending)}}),
            pass: false,
        });
    }
    // the right decomposition is the left one of the reversed configuration
    let target = match direction {
        Direction::Left => cfg.clone(),
        Direction::Right => cfg.reverse(),
    };
    let dec = angle_decomposition(&target, v)?;
    let text = format!(
        "condition (E) holds at {polygon} ({direction})\n{}",
        dec.to_text(&target)
    );
    Ok(Output::ok(
        text,
        json!({"polygon": polygon, "direction": direction, "holds": true, "decomposition": decomposition_json(&target, v)?}),
    ))
}

fn flip_cmd(file: &Path, polygon: &str, direction: Direction, output: &Option<PathBuf>) -> Run {
    let cfg = load(file)?;
    let v = cfg.polygon(polygon)?;
    let r = flip(&cfg, v, direction)?;
    let bcf = r.config.to_bcf();
    let gamma: serde_json::Map<String, Value> = r
        .gamma_names(&cfg)
        .into_iter()
        .map(|(new, old)| (new, Value::from(old)))
        .collect();
    let text = write_or_print(output, &bcf)?;
    Ok(Output::ok(text, json!({"configuration": bcf, "gamma": gamma})))
}

fn mutate(file: &Path, polygon: &str, dump_complex: bool) -> Run {
    let cfg = load(file)?;
    let v = cfg.polygon(polygon)?;
    let m = mutation_complex(&cfg, v)?;
    let grid = endomorphism_grid(&cfg, &m);
    let mut text = format!("mutation complex T_{polygon}\n");
    if dump_complex {
        text.push_str(&m.complex.describe(&cfg));
    } else {
        let _ = writeln!(
            text,
            "degree -1: {} summand(s), degree 0: {} summand(s)",
            m.complex.neg.len(),
            m.complex.zero.len()
        );
    }
    text.push_str("dim Hom(T_U, T_W) by Euler form:\n");
    text.push_str(&grid_text(&cfg, &to_strings(&grid)));
    let summands: Vec<String> = m
        .summand_angles
        .iter()
        .map(|&e| cfg.angle_name(e).to_string())
        .collect();
    let mut json = json!({"polygon": polygon, "summand_angles": summands, "grid": grid});
    if dump_complex {
        json["complex"] = Value::from(m.complex.describe(&cfg));
    }
    Ok(Output::ok(text, json))
}

fn verify(file: &Path, polygon: &str, level: Level, prime: Option<u64>) -> Run {
    let cfg = load(file)?;
    let v = cfg.polygon(polygon)?;
    let report = match level {
        Level::Dims => verify_dim_equalities(&cfg, v)?,
        Level::Homotopy => verify_homotopy(&cfg, v)?,
        Level::Phi => verify_phi(&cfg, v, prime)?,
    };
    Ok(Output::report(&report))
}

fn iso(first: &Path, second: &Path) -> Run {
    let (a, b) = (load(first)?, load(second)?);
    Ok(match are_isomorphic(&a, &b) {
        Some(beta) => {
            let pairs = beta.named_pairs(&a, &b);
            let mut text = String::from("isomorphic\n");
            for (x, y) in &pairs {
                let _ = writeln!(text, "{x} -> {y}");
            }
            let map: serde_json::Map<String, Value> = pairs.into_iter().map(|(x, y)| (x, Value::from(y))).collect();
            Output::ok(text, json!({"isomorphic": true, "bijection": map}))
        }
        None => Output {
            text: "not isomorphic\n".into(),
            json: json!({"isomorphic": false}),
            pass: false,
        },
    })
}

fn random(spec: RandomSpec, output: &Option<PathBuf>) -> Run {
    let cfg = random_configuration(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
    let bcf = cfg.to_bcf();
    let text = write_or_print(output, &bcf)?;
    Ok(Output::ok(text, json!({"configuration": bcf, "seed": spec.seed})))
}

fn corpus(seed: u64, count: u64, phi: bool, save: &Option<PathBuf>) -> Run {
    type Member = Result<(BrauerConfiguration, Vec<Outcome>), String>;
    let results: Vec<(u64, Member)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let run = || -> brauer_core::Result<_> {
                let cfg = corpus_configuration(seed, i)?;
                let outcomes = check_configuration(&cfg, Options { phi })?;
                Ok((cfg, outcomes))
            };
            (i, run().map_err(|e| e.to_string()))
        })
        .collect();

    let mut tally: Vec<(Invariant, usize, usize)> = Invariant::ALL
        .iter()
        .filter(|&&k| phi || k != Invariant::PhiIsomorphism)
        .map(|&k| (k, 0, 0))
        .collect();
    let mut errors = Vec::new();
    let mut failing = Vec::new();
    for (i, r) in &results {
        match r {
            Ok((cfg, outcomes)) => {
                for o in outcomes {
                    let slot = tally.iter_mut().find(|t| t.0 == o.invariant).expect("known invariant");
                    slot.1 += o.pass as usize;
                    slot.2 += 1;
                }
                if outcomes.iter().any(|o| !o.pass) {
                    failing.push((*i, cfg.clone(), outcomes.clone()));
                }
            }
            Err(e) => errors.push(format!("member {i}: {e}")),
        }
    }
    if let Some(dir) = save {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for (i, cfg, _) in &failing {
            let path = dir.join(format!("corpus_{seed}_{i}.bcf"));
            std::fs::write(&path, cfg.to_bcf()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
    }

    let mut text = format!("corpus seed {seed}, {count} configurations\n");
    for (k, passed, checked) in &tally {
        let mark = if passed == checked { "pass" } else { "FAIL" };
        let _ = writeln!(text, "{mark}  {:<28} {passed}/{checked}", k.name());
    }
    for (i, _, outcomes) in &failing {
        for o in outcomes.iter().filter(|o| !o.pass) {
            let _ = writeln!(
                text,
                "failure: member {i} {} {}",
                o.invariant.name(),
                o.polygon.as_deref().unwrap_or("")
            );
        }
    }
    for e in &errors {
        let _ = writeln!(text, "error: {e}");
    }
    let pass = failing.is_empty() && errors.is_empty();
    let json = json!({
        "seed": seed,
        "count": count,
        "checks": tally.iter().map(|(k, p, c)| json!({"invariant": k.name(), "passed": p, "checked": c})).collect::<Vec<_>>(),
        "failures": failing.iter().map(|(i, _, o)| json!({"member": i, "outcomes": o.iter().filter(|x| !x.pass).collect::<Vec<_>>()})).collect::<Vec<_>>(),
        "errors": errors,
    });
    Ok(Output { text, json, pass })
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Info { file } => info(&file),
        Command::Quiver { file, format } => {
            let cfg = load(&file)?;
            let q = quiver(&cfg);
            let text = match format {
                QuiverFormat::Dot => q.to_dot(&cfg),
                QuiverFormat::Text => {
                    let mut s = String::new();
                    for a in &q.arrows {
                        let _ = writeln!(
                            s,
                            "{}: {} -> {}",
                            cfg.angle_name(a.angle),
                            cfg.polygon_name(a.from),
                            cfg.polygon_name(a.to)
                        );
                    }
                    s
                }
            };
            let arrows: Vec<Value> = q
                .arrows
                .iter()
                .map(|a| json!({"angle": cfg.angle_name(a.angle), "from": cfg.polygon_name(a.from), "to": cfg.polygon_name(a.to)}))
                .collect();
            Ok(Output::ok(text, json!({"nodes": cfg.polygons().map(|p| cfg.polygon_name(p)).collect::<Vec<_>>(), "arrows": arrows})))
        }
        Command::Relations { file } => {
            let cfg = load(&file)?;
            let q = quiver(&cfg);
            let text = q.relations_text(&cfg);
            let bc1: Vec<Value> = q
                .bc1_relations
                .iter()
                .map(|(l, r)| json!([l.display(&cfg), r.display(&cfg)]))
                .collect();
            let bc2: Vec<Value> = q
                .bc2_relations
                .iter()
                .map(|&(a, b)| json!([cfg.angle_name(a), cfg.angle_name(b)]))
                .collect();
            Ok(Output::ok(text, json!({"bc1": bc1, "bc2": bc2})))
        }
        Command::CheckE { file, polygon, direction } => check_e(&file, &polygon, direction),
        Command::Flip { file, polygon, direction, output } => flip_cmd(&file, &polygon, direction, &output),
        Command::Mutate { file, polygon, dump_complex } => mutate(&file, &polygon, dump_complex),
        Command::Verify { file, polygon, level, prime } => verify(&file, &polygon, level, prime),
        Command::Iso { first, second } => iso(&first, &second),
        Command::Random { angles, seed, min_polygon, max_polygon, max_multiplicity, output } => {
            let spec = RandomSpec {
                n_angles: angles,
                min_polygon,
                max_polygon,
                max_multiplicity,
                seed,
            };
            random(spec, &output)
        }
        Command::Corpus { seed, count, no_phi, save_failures } => corpus(seed, count, !no_phi, &save_failures),
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&out.json).expect("json")));
            } else {
                emit(&out.text);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Check(e)) => {
            if json {
                emit(&format!("{}\n", json!({"error": e.to_string()})));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
