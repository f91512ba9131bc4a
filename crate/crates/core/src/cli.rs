//! Command-line front end: ingestion, analysis pipelines, and exports.
//!
//! Exit codes: 0 success, 1 validation or mathematical failure, 2 I/O or
//! parse error. All outputs are deterministic for identical inputs.

use crate::germs::build_groupoid;
use crate::inverse::SpectrumAction;
use crate::io::{self, Structure};
use crate::rep::{canonical_tight_rep, extend_to_slambda, is_tight_sgpd_rep, restrict_to_sgpd};
use crate::semilattice::Semilattice;
use crate::slambda::SLambda;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "germlab", version, about = "Semilattices, inverse semigroups, semigroupoids and their groupoids of germs, at desk scale")]
pub struct Cli {
    /// Emit machine-readable JSON instead of human text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Validate a structure document.
    Validate { file: PathBuf },
    /// List characters of a semilattice (or of E(S) for an inverse
    /// semigroup), by principal generator.
    Spectrum {
        file: PathBuf,
        /// Restrict to tight characters.
        #[arg(long)]
        tight: bool,
    },
    /// List filters by principal generator.
    Filters { file: PathBuf },
    /// Build S(Λ) for a semigroupoid or k-graph input, or summarize an
    /// inverse semigroup input.
    Isg {
        file: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Build the groupoid of germs on the tight spectrum.
    Groupoid {
        file: PathBuf,
        /// Emit DOT instead of JSON/text.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Run the full pipeline: S(Λ), idempotents, tight spectrum, germ
    /// groupoid, canonical representation, and the extension round-trip.
    Pipeline {
        file: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
        /// Output directory for the artifact files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural checks for k-graph presentations.
    Kgraph {
        file: PathBuf,
        /// One of: pullback, aligned, factorization.
        #[arg(long)]
        check: String,
        #[arg(long)]
        depth: Option<u32>,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("{msg}");
            1
        }
    }
}

enum CliError {
    /// I/O or parse problems: exit 2.
    Parse(String),
    /// Mathematical or validation failures: exit 1.
    Failed(String),
}

fn read_input(file: &Path, depth: Option<u32>) -> Result<Structure, CliError> {
    let text = fs::read_to_string(file).map_err(|e| CliError::Parse(e.to_string()))?;
    let structure = match depth {
        None => io::parse_structure(&text),
        Some(d) => {
            // Re-target the declared depth before compiling.
            let mut env: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
            if env["kind"] == "kgraph" {
                let k = env["body"]["k"].as_u64().unwrap_or(1) as usize;
                env["body"]["depth"] = json!(vec![d; k]);
            }
            io::parse_structure(&env.to_string())
        }
    };
    structure.map_err(|e| match e {
        io::IoError::Parse(m) => CliError::Parse(m),
        other => CliError::Failed(other.to_string()),
    })
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate { file } => {
            let s = read_input(file, None)?;
            emit(
                cli.json,
                json!({"kind": s.kind(), "valid": true}),
                format!("valid {}", s.kind()),
            );
            Ok(())
        }
        Command::Spectrum { file, tight } => {
            let s = read_input(file, None)?;
            let lat = lattice_of(&s)?;
            let chars: Vec<String> = if *tight {
                lat.tight_spectrum()
                    .map_err(|e| CliError::Failed(e.to_string()))?
                    .iter()
                    .map(|c| lat.label(c.min).to_string())
                    .collect()
            } else {
                lat.characters().iter().map(|c| lat.label(c.min).to_string()).collect()
            };
            emit(
                cli.json,
                json!({"characters": chars, "tight_only": tight}),
                chars.join("\n"),
            );
            Ok(())
        }
        Command::Filters { file } => {
            let s = read_input(file, None)?;
            let lat = lattice_of(&s)?;
            let filters: Vec<serde_json::Value> = lat
                .enumerate_filters()
                .iter()
                .map(|f| {
                    json!({
                        "generator": lat.label(f.min),
                        "ultra": lat.is_ultrafilter(*f),
                    })
                })
                .collect();
            let text = filters
                .iter()
                .map(|f| {
                    format!(
                        "{}{}",
                        f["generator"].as_str().unwrap(),
                        if f["ultra"].as_bool().unwrap() { " (ultra)" } else { "" }
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli.json, json!({ "filters": filters }), text);
            Ok(())
        }
        Command::Isg { file, depth } => {
            let s = read_input(file, *depth)?;
            match s {
                Structure::Isg(isg) => {
                    let (lat, _) = isg.idempotent_semilattice();
                    emit(
                        cli.json,
                        json!({
                            "elements": isg.len(),
                            "idempotents": lat.len(),
                            "e_star_unitary": isg.is_e_star_unitary(),
                        }),
                        format!(
                            "inverse semigroup: {} elements, {} idempotents, E*-unitary: {}",
                            isg.len(),
                            lat.len(),
                            isg.is_e_star_unitary()
                        ),
                    );
                    Ok(())
                }
                other => {
                    let sl = slambda_of(&other)?;
                    let export = io::export_isg(sl.isg());
                    emit(
                        cli.json,
                        serde_json::to_value(&export).unwrap(),
                        format!("S(Λ) has {} elements", sl.len()),
                    );
                    Ok(())
                }
            }
        }
        Command::Groupoid { file, dot, depth } => {
            let s = read_input(file, *depth)?;
            let action = action_of(&s)?;
            let gpd = build_groupoid(&action).map_err(|e| CliError::Failed(e.to_string()))?;
            if *dot {
                print!("{}", gpd.to_dot());
            } else {
                let report = gpd.topology_report(&action);
                emit(
                    cli.json,
                    json!({
                        "groupoid": gpd.to_json(),
                        "topology": report,
                    }),
                    format!(
                        "groupoid: {} units, {} germs, discrete: {}",
                        gpd.units().len(),
                        gpd.len(),
                        report.discrete
                    ),
                );
            }
            Ok(())
        }
        Command::Pipeline { file, depth, out } => {
            let s = read_input(file, *depth)?;
            run_pipeline(cli.json, &s, out.as_deref())
        }
        Command::Kgraph { file, check, depth } => {
            if check == "factorization" {
                // Validation itself is the factorization check.
                return match read_input(file, *depth) {
                    Ok(Structure::KGraph(_)) => {
                        emit(cli.json, json!({"factorization": true}), "factorization ok".into());
                        Ok(())
                    }
                    Ok(_) => Err(CliError::Failed("not a kgraph document".into())),
                    Err(e) => Err(e),
                };
            }
            let s = read_input(file, *depth)?;
            let Structure::KGraph(kg) = s else {
                return Err(CliError::Failed("not a kgraph document".into()));
            };
            match check.as_str() {
                "pullback" => {
                    let (ok, witnesses) = kg.little_pullback_check();
                    let wl: Vec<(String, String)> = witnesses
                        .iter()
                        .map(|&(a, b)| {
                            (kg.morphisms[a].label.clone(), kg.morphisms[b].label.clone())
                        })
                        .collect();
                    emit(
                        cli.json,
                        json!({"pullback": ok, "witnesses": wl}),
                        format!("little pull-back: {}", if ok { "ok" } else { "violated" }),
                    );
                    if ok {
                        Ok(())
                    } else {
                        Err(CliError::Failed(format!("violating squares: {wl:?}")))
                    }
                }
                "aligned" => {
                    let ok = kg.is_singly_aligned();
                    emit(
                        cli.json,
                        json!({"singly_aligned": ok}),
                        format!("singly aligned: {ok}"),
                    );
                    if ok {
                        Ok(())
                    } else {
                        Err(CliError::Failed("not singly aligned".into()))
                    }
                }
                other => Err(CliError::Parse(format!("unknown check {other}"))),
            }
        }
    }
}

fn lattice_of(s: &Structure) -> Result<Semilattice, CliError> {
    match s {
        Structure::Semilattice(lat) => Ok(lat.clone()),
        Structure::Isg(isg) => Ok(isg.idempotent_semilattice().0),
        _ => Err(CliError::Failed(
            "this command needs a semilattice or inverse semigroup input".into(),
        )),
    }
}

fn sgpd_of(s: &Structure) -> Result<crate::sgpd::Semigroupoid, CliError> {
    match s {
        Structure::Sgpd(sg) => Ok(sg.clone()),
        Structure::KGraph(kg) => {
            let (sg, _, _) = kg.to_semigroupoid().map_err(|e| CliError::Failed(e.to_string()))?;
            Ok(sg)
        }
        _ => Err(CliError::Failed("this command needs a semigroupoid or kgraph input".into())),
    }
}

fn slambda_of(s: &Structure) -> Result<SLambda, CliError> {
    let sg = sgpd_of(s)?;
    let report = sg.check_standing_hypothesis();
    if !report.holds {
        return Err(CliError::Failed(format!(
            "standing hypothesis fails: non-monic {:?}, lcm failures {:?}",
            report.monic_failures, report.lcm_failures
        )));
    }
    SLambda::build(&sg).map_err(|e| CliError::Failed(e.to_string()))
}

fn action_of(s: &Structure) -> Result<SpectrumAction, CliError> {
    match s {
        Structure::Isg(isg) => {
            isg.spectrum_action(None).map_err(|e| CliError::Failed(e.to_string()))
        }
        Structure::Semilattice(_) => {
            Err(CliError::Failed("groupoids need an inverse semigroup or semigroupoid".into()))
        }
        other => {
            let sl = slambda_of(other)?;
            sl.isg().spectrum_action(None).map_err(|e| CliError::Failed(e.to_string()))
        }
    }
}

#[derive(Serialize)]
struct Manifest {
    input_kind: String,
    truncated: bool,
    slambda_elements: usize,
    idempotents: usize,
    tight_characters: usize,
    groupoid_units: usize,
    groupoid_germs: usize,
    roundtrip_exact: bool,
    sgpd_rep_tight: bool,
    files: Vec<String>,
}

fn run_pipeline(as_json: bool, s: &Structure, out: Option<&Path>) -> Result<(), CliError> {
    let sl = slambda_of(s)?;
    let sgpd = sl.sgpd().clone();
    let (lat, _) = sl.isg().idempotent_semilattice();
    let tight = lat.tight_spectrum().map_err(|e| CliError::Failed(e.to_string()))?;
    let (sigma, action) =
        canonical_tight_rep(&sl).map_err(|e| CliError::Failed(e.to_string()))?;
    let gpd = build_groupoid(&action).map_err(|e| CliError::Failed(e.to_string()))?;
    let pi = restrict_to_sgpd(&sl, &sigma);
    let roundtrip = match extend_to_slambda(&sl, &pi) {
        Ok(sigma2) => sigma2 == sigma,
        Err(_) => false,
    };
    let tight_verdict = is_tight_sgpd_rep(&sgpd, &pi);
    let carrier_labels: Vec<String> =
        (0..action.carrier().len()).map(|i| action.point_label(i)).collect();

    let manifest = Manifest {
        input_kind: s.kind().to_string(),
        truncated: sgpd.is_truncated(),
        slambda_elements: sl.len(),
        idempotents: lat.len(),
        tight_characters: tight.len(),
        groupoid_units: gpd.units().len(),
        groupoid_germs: gpd.len(),
        roundtrip_exact: roundtrip,
        sgpd_rep_tight: tight_verdict.tight,
        files: vec![],
    };

    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| CliError::Parse(e.to_string()))?;
        let pretty = |v: &serde_json::Value| serde_json::to_string_pretty(v).unwrap() + "\n";
        let mut files = Vec::new();
        let mut put = |name: &str, content: String| -> Result<(), CliError> {
            write_atomic(&dir.join(name), &content)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            files.push(name.to_string());
            Ok(())
        };
        put(
            "slambda.json",
            pretty(&serde_json::to_value(io::export_isg(sl.isg())).unwrap()),
        )?;
        put(
            "idempotents.json",
            pretty(&serde_json::to_value(io::export_semilattice(&lat)).unwrap()),
        )?;
        put(
            "tight_spectrum.json",
            pretty(&json!({
                "characters": tight
                    .iter()
                    .map(|c| lat.label(c.min).to_string())
                    .collect::<Vec<_>>()
            })),
        )?;
        put("groupoid.json", pretty(&serde_json::to_value(gpd.to_json()).unwrap()))?;
        put("groupoid.dot", gpd.to_dot())?;
        put(
            "canonical_rep.json",
            pretty(
                &serde_json::to_value(io::export_rep(sl.isg(), &carrier_labels, &sigma))
                    .unwrap(),
            ),
        )?;
        put(
            "roundtrip.json",
            pretty(&json!({
                "roundtrip_exact": roundtrip,
                "sgpd_rep_tight": tight_verdict.tight,
                "tightness_witness": tight_verdict.witness.as_ref().map(|(f, g, h)| json!({
                    "f": f.iter().map(|&i| sgpd.label(i)).collect::<Vec<_>>(),
                    "g": g.iter().map(|&i| sgpd.label(i)).collect::<Vec<_>>(),
                    "cover": h.iter().map(|&i| sgpd.label(i)).collect::<Vec<_>>(),
                })),
            })),
        )?;
        let mut manifest = manifest;
        manifest.files = files;
        write_atomic(
            &dir.join("manifest.json"),
            &(serde_json::to_string_pretty(&manifest).unwrap() + "\n"),
        )
        .map_err(|e| CliError::Parse(e.to_string()))?;
        emit(
            as_json,
            serde_json::to_value(&manifest).unwrap(),
            format!("pipeline artifacts written to {}", dir.display()),
        );
    } else {
        emit(
            as_json,
            serde_json::to_value(&manifest).unwrap(),
            format!(
                "S(Λ): {} elements; {} tight characters; groupoid: {} units, {} germs; round-trip exact: {}",
                manifest.slambda_elements,
                manifest.tight_characters,
                manifest.groupoid_units,
                manifest.groupoid_germs,
                manifest.roundtrip_exact
            ),
        );
    }
    Ok(())
}

fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)
}

fn emit(as_json: bool, machine: serde_json::Value, human: String) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(&machine).unwrap());
    } else {
        println!("{human}");
    }
}
