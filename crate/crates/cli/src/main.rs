use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use sok_core::exact::{parse_q, Q};
use sok_core::extension::{build_extension_presentation, fix_subspace, ExtensionSpec};
use sok_core::group::{abelianization, HomBasis, Presentation};
use sok_core::invariants::{
    lookup_known, omega_bounds_finite_extension, omega_exact_if_sufficient, omega_from_sigma_record, omega_product,
    sigma_finite_extension, Catalog, InvariantRecord,
};
use sok_core::probe::{probe_direction, Model, ProbeConfig, ProbeKind, DEFAULT_BALL_CAP};
use sok_core::rinfty::{rinfty_finite_ext, rinfty_single_point, rinfty_split_ext, RinftyCertificate, Verdict};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "sok", version, about = "Sigma and Omega invariants, R-infinity certificates and Cayley-graph probes")]
struct Cli {
    /// Extra catalog entries (JSON list); may be repeated.
    #[arg(long, global = true)]
    catalog: Vec<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output schema version.
    #[arg(long, global = true, default_value_t = SCHEMA_VERSION,
          value_parser = clap::value_parser!(u32).range(1..=1))]
    schema_version: u32,
    /// Add a wall-clock timestamp to the output.
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Abelianization of a presentation, or of the group of an extension spec.
    Abelianize(Source),
    /// Basis of Hom(G, R) on the free generators.
    Hom(Source),
    /// Action of K on Hom(H, R) and its fixed subspace.
    Fix {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sigma invariant of a catalog group or of a finite extension.
    Sigma(Target),
    /// Omega invariant, exact when a derivation rule applies.
    Omega(Target),
    /// Bounds for Omega of a finite extension.
    Bounds(Target),
    /// R-infinity certificate.
    Rinfty {
        #[command(flatten)]
        target: Target,
        /// Catalog id of K for split extensions (default: recognised from the spec).
        #[arg(long)]
        k_group: Option<String>,
        /// Assert that H is characteristic in G.
        #[arg(long)]
        characteristic: bool,
    },
    /// Cayley-graph connectivity probe.
    Probe {
        /// `Z`, `Z^k`, `F_k`, `BS(1,m)` or a product `A x B`; with --spec, the model of H.
        #[arg(long)]
        model: String,
        /// Extension spec with cyclic K, probed over the model of H.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Direction in Hom coordinates, e.g. `1,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        /// Comma-separated levels; defaults to 0..=radius/2.
        #[arg(long)]
        grid: Option<String>,
        /// Probe truncated cones instead of half-spaces.
        #[arg(long)]
        omega: bool,
        #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
        cap: usize,
    },
    /// List catalog entries, or show one.
    Catalog {
        #[arg(long)]
        group: Option<String>,
        #[arg(long, requires = "group")]
        n: Option<u32>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Presentation file.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Extension spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    /// Extension spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Catalog id; with --spec, the id of H (default: recognised from the spec).
    #[arg(long, required_unless_present = "spec")]
    group: Option<String>,
    #[arg(long)]
    n: u32,
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }

    fn at(kind: &'static str, path: &Path, e: impl ToString) -> Self {
        Failure::new(kind, format!("{}: {}", path.display(), e.to_string()))
    }
}

type Outcome = Result<Map<String, Value>, Failure>;

fn domain<E: ToString>(kind: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::new(kind, e)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::at("io", path, e))
}

fn load_spec(path: &Path) -> Result<ExtensionSpec, Failure> {
    ExtensionSpec::from_json(&read(path)?).map_err(|e| Failure::at("spec", path, e))
}

fn load_presentation(path: &Path) -> Result<Presentation, Failure> {
    Presentation::from_json(&read(path)?).map_err(|e| Failure::at("presentation", path, e))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn record_fields(rec: &InvariantRecord) -> Map<String, Value> {
    let Value::Object(mut m) = to_value(rec) else {
        unreachable!("records serialize to objects")
    };
    let cert = m.remove("provenance").expect("provenance");
    m.insert("certificate".into(), cert);
    m
}

/// Catalog record; `A x B` ids are combined by the product rule.
fn catalog_record(catalog: &Catalog, id: &str, n: u32) -> Result<InvariantRecord, Failure> {
    let parts: Vec<&str> = id.split(" x ").collect();
    let mut rec = lookup_known(catalog, parts[0], n).map_err(domain("invariant"))?;
    for p in &parts[1..] {
        let next = lookup_known(catalog, p, n).map_err(domain("invariant"))?;
        rec = omega_product(&rec, &next).map_err(domain("invariant"))?;
    }
    Ok(rec)
}

fn h_record(catalog: &Catalog, spec: &ExtensionSpec, group: &Option<String>, n: u32) -> Result<InvariantRecord, Failure> {
    let id = match group {
        Some(g) => g.clone(),
        None => catalog.identify(spec.h()).ok_or_else(|| {
            Failure::new("unknown_group", "H is not recognised; pass --group with its catalog id")
        })?,
    };
    catalog_record(catalog, &id, n)
}

fn load_catalog(paths: &[PathBuf]) -> Result<Catalog, Failure> {
    let mut c = Catalog::builtin();
    for p in paths {
        c.load_json(&read(p)?).map_err(|e| Failure::at("catalog", p, e))?;
    }
    Ok(c)
}

fn source_presentation(src: &Source) -> Result<Presentation, Failure> {
    match (&src.group, &src.spec) {
        (Some(g), _) => load_presentation(g),
        (None, Some(s)) => Ok(build_extension_presentation(&load_spec(s)?)),
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn parse_list(text: &str, what: &'static str) -> Result<Vec<Q>, Failure> {
    text.split(',')
        .map(|t| parse_q(t.trim()).map_err(|e| Failure::new(what, format!("`{t}`: {e}"))))
        .collect()
}

fn certificate_fields(cert: Option<RinftyCertificate>) -> Map<String, Value> {
    let mut m = Map::new();
    match cert {
        Some(c) => {
            m.insert("verdict".into(), to_value(&c.verdict));
            m.insert("certificate".into(), to_value(&c));
        }
        None => {
            m.insert("verdict".into(), to_value(&Verdict::Inconclusive));
            m.insert("certificate".into(), Value::Null);
        }
    }
    m
}

fn run(cli: &Cli) -> Outcome {
    let catalog = load_catalog(&cli.catalog)?;
    let mut out = Map::new();
    match &cli.command {
        Command::Abelianize(src) => {
            let p = source_presentation(src)?;
            out.insert("generators".into(), to_value(&p.generators()));
            out.insert("abelianization".into(), to_value(&abelianization(&p)));
        }
        Command::Hom(src) => {
            let p = source_presentation(src)?;
            let hb = HomBasis::new(&p);
            let names: Vec<&str> = hb.free_generators().iter().map(|&g| p.generators()[g].as_str()).collect();
            let basis: Vec<Vec<String>> = hb
                .basis()
                .iter()
                .map(|v| v.iter().map(sok_core::exact::format_q).collect())
                .collect();
            out.insert("dim".into(), json!(hb.dim()));
            out.insert("coordinates".into(), json!(names));
            out.insert("generators".into(), to_value(&p.generators()));
            out.insert("basis".into(), json!(basis));
        }
        Command::Fix { spec } => {
            let s = load_spec(spec)?;
            let fix = fix_subspace(&s);
            out.insert("hom_h_dim".into(), json!(HomBasis::new(s.h()).dim()));
            out.insert("actions".into(), to_value(&s.actions()));
            out.insert("fix_dim".into(), json!(fix.dim()));
            out.insert("fix".into(), to_value(&fix));
        }
        Command::Sigma(t) => {
            let rec = match &t.spec {
                Some(path) => {
                    let spec = load_spec(path)?;
                    let h = h_record(&catalog, &spec, &t.group, t.n)?;
                    sigma_finite_extension(&spec, &h).map_err(domain("invariant"))?
                }
                None => catalog_record(&catalog, t.group.as_deref().expect("clap"), t.n)?,
            };
            if rec.sigma.is_none() {
                return Err(Failure::new("invariant", format!("no sigma known for {}", rec.group)));
            }
            out.extend(record_fields(&rec));
        }
        Command::Omega(t) => {
            let rec = match &t.spec {
                Some(path) => {
                    let spec = load_spec(path)?;
                    let h = h_record(&catalog, &spec, &t.group, t.n)?;
                    match omega_exact_if_sufficient(&spec, &h).map_err(domain("invariant"))? {
                        Some(r) => r,
                        None => {
                            let sigma = sigma_finite_extension(&spec, &h).map_err(domain("invariant"))?;
                            omega_from_sigma_record(&sigma).map_err(domain("invariant"))?
                        }
                    }
                }
                None => catalog_record(&catalog, t.group.as_deref().expect("clap"), t.n)?,
            };
            if rec.omega.is_none() {
                return Err(Failure::new("invariant", format!("no omega known for {}", rec.group)));
            }
            out.extend(record_fields(&rec));
        }
        Command::Bounds(t) => {
            let Some(path) = &t.spec else {
                return Err(Failure::new("usage", "bounds needs --spec"));
            };
            let spec = load_spec(path)?;
            let h = h_record(&catalog, &spec, &t.group, t.n)?;
            let rec = omega_bounds_finite_extension(&spec, &h).map_err(domain("invariant"))?;
            out.extend(record_fields(&rec));
        }
        Command::Rinfty {
            target: t,
            k_group,
            characteristic,
        } => {
            let cert = match &t.spec {
                Some(path) => {
                    let spec = load_spec(path)?;
                    let h = h_record(&catalog, &spec, &t.group, t.n)?;
                    if spec.is_finite() {
                        rinfty_finite_ext(&spec, &h, t.n, *characteristic).map_err(domain("rinfty"))?
                    } else {
                        let k_id = match k_group {
                            Some(k) => k.clone(),
                            None => catalog.identify(spec.k()).ok_or_else(|| {
                                Failure::new("unknown_group", "K is not recognised; pass --k-group")
                            })?,
                        };
                        let k = catalog_record(&catalog, &k_id, t.n)?;
                        rinfty_split_ext(&spec, &h, &k, t.n, *characteristic).map_err(domain("rinfty"))?
                    }
                }
                None => {
                    let rec = catalog_record(&catalog, t.group.as_deref().expect("clap"), t.n)?;
                    rinfty_single_point(&rec).map_err(domain("rinfty"))?
                }
            };
            out.extend(certificate_fields(cert));
        }
        Command::Probe {
            model,
            spec,
            chi,
            radius,
            grid,
            omega,
            cap,
        } => {
            let mut m = Model::parse(model).map_err(domain("probe"))?;
            if let Some(path) = spec {
                m = Model::extension(&load_spec(path)?, m).map_err(domain("probe"))?;
            }
            let mut config = ProbeConfig::with_radius(*radius);
            config.cap = *cap;
            if let Some(g) = grid {
                config.grid = parse_list(g, "bad_grid")?;
            }
            let direction = parse_list(chi, "bad_character")?;
            let kind = if *omega { ProbeKind::Omega } else { ProbeKind::Sigma };
            let report = probe_direction(&m, kind, &direction, &config).map_err(domain("probe"))?;
            let Value::Object(r) = to_value(&report) else {
                unreachable!("reports serialize to objects")
            };
            out.insert("model".into(), json!(model));
            out.extend(r);
        }
        Command::Catalog { group, n } => match (group, n) {
            (Some(g), Some(n)) => out.extend(record_fields(&catalog_record(&catalog, g, *n)?)),
            (Some(g), None) => {
                let recs: Vec<Value> = (1..=2)
                    .filter_map(|n| catalog_record(&catalog, g, n).ok())
                    .map(|r| Value::Object(record_fields(&r)))
                    .collect();
                if recs.is_empty() {
                    return Err(Failure::new("invariant", format!("unknown group `{g}`")));
                }
                out.insert("records".into(), Value::Array(recs));
            }
            _ => {
                let builtin = ["Z^k", "F_k", "BS(1,m)", "ThompsonF", "Finite"];
                let named: Vec<Value> = catalog
                    .named_entries()
                    .into_iter()
                    .map(|(id, n)| json!({"id": id, "degree": n}))
                    .collect();
                out.insert("builtin".into(), json!(builtin));
                out.insert("entries".into(), Value::Array(named));
            }
        },
    }
    Ok(out)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Abelianize(_) => "abelianize",
        Command::Hom(_) => "hom",
        Command::Fix { .. } => "fix",
        Command::Sigma(_) => "sigma",
        Command::Omega(_) => "omega",
        Command::Bounds(_) => "bounds",
        Command::Rinfty { .. } => "rinfty",
        Command::Probe { .. } => "probe",
        Command::Catalog { .. } => "catalog",
    }
}

fn emit(cli: &Cli, body: Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&body).expect("serializable");
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::at("io", path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut head = Map::new();
    head.insert("schema_version".into(), json!(cli.schema_version));
    head.insert("command".into(), json!(command_name(&cli.command)));
    if cli.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        head.insert("timestamp".into(), json!(secs));
    }
    let (mut body, code) = match run(&cli) {
        Ok(fields) => (fields, ExitCode::SUCCESS),
        Err(f) => {
            let mut m = Map::new();
            m.insert("error".into(), json!({"kind": f.kind, "message": f.message}));
            (m, ExitCode::from(1))
        }
    };
    head.append(&mut body);
    if let Err(f) = emit(&cli, Value::Object(head)) {
        eprintln!("sok: {}", f.message);
        return ExitCode::from(1);
    }
    code
}
