use std::fs;
use std::path::{Path, PathBuf};

use fanlab::checks::run_suite;
use fanlab::density::{search_gabi, search_half_pow, search_pow23, search_property_l};
use fanlab::fans::{cantor_svg, embed_cantor_fan, embed_lelek, legs_csv, lelek_svg, random_window, relation_svg};
use fanlab::mahavier::{enumerate_mahavier, ClosedRelation};
use fanlab::maps::{catalog, family_from_json, MapFamily};
use fanlab::symbolic::{FiniteWord, OneSidedWord};
use fanlab::transitivity::{
    auto_box_targets, auto_skew_targets, build_sigma_chain, build_transitive_point, default_eps_schedule,
    load_targets, orbit_coverage, verify_transitive_point, CoverageReport, CoverageRow, CylinderTarget, SkewState,
    SkewSystem, SkewTarget,
};
use fanlab::{Error, Result};
use rand::SeedableRng;

use crate::{Command, Kind, Search};

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::WitnessNotFound { .. } | Error::InfeasibleTarget(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::Io(_) => 4,
        _ => 1,
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// A catalog name, or a path to a JSON family description.
fn load_family(source: &str) -> Result<MapFamily<f64>> {
    let path = Path::new(source);
    if source.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        family_from_json(&text)
    } else {
        catalog(source)
    }
}

fn read_targets(path: &Path) -> Result<Vec<CylinderTarget>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    load_targets(&text)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Density {
            lemma,
            x,
            z,
            eps,
            bound,
            family,
        } => density(lemma, x, z, eps, bound, &family),
        Command::Mahavier {
            relation,
            start,
            depth,
            budget,
            out,
        } => mahavier(&relation, start, depth, budget, out.as_ref()),
        Command::Orbit {
            family,
            word,
            tail,
            t,
            steps,
            targets,
            out,
        } => orbit(&family, word, tail, t, steps, &targets, out.as_ref()),
        Command::TransitivePoint {
            family,
            targets,
            auto,
            floor,
            x0,
            bound,
            out,
            prefix_out,
        } => transitive_point(&family, targets.as_deref(), auto, floor, x0, bound, out.as_ref(), prefix_out.as_ref()),
        Command::SigmaChain {
            relation,
            targets,
            auto,
            bound,
            out,
        } => sigma_chain(&relation, targets.as_deref(), auto, bound, out.as_ref()),
        Command::Render {
            kind,
            depth,
            samples,
            name,
            count,
            seed,
            out,
            csv,
        } => render(kind, depth, samples, &name, count, seed, out.as_ref(), csv.as_ref()),
        Command::Verify { suite } => verify(&suite),
    }
}

fn density(lemma: Search, x: f64, z: f64, eps: f64, bound: u64, family: &str) -> Result<u8> {
    let w = match lemma {
        Search::Pow23 => search_pow23(x, z, eps, bound)?,
        Search::HalfPow => search_half_pow(x, z, eps, bound)?,
        Search::PropertyL => search_property_l(&load_family(family)?, x, z, eps, bound)?,
        Search::Gabi => search_gabi(x, z, eps, bound)?,
    };
    println!("{}", w.to_json());
    Ok(0)
}

fn mahavier(relation: &str, start: f64, depth: usize, budget: u64, out: Option<&PathBuf>) -> Result<u8> {
    let rel = ClosedRelation::from_family(load_family(relation)?);
    let words = enumerate_mahavier(&rel, start, depth, budget)?;
    let mut text = String::new();
    for w in &words {
        text.push_str(&w.csv_row());
        text.push('\n');
    }
    emit(out, &text)?;
    eprintln!("{} words", words.len());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn orbit(
    family: &str,
    word: Vec<u8>,
    tail: u8,
    t: f64,
    steps: usize,
    targets: &Path,
    out: Option<&PathBuf>,
) -> Result<u8> {
    let family = load_family(family)?;
    let alphabet = family.alphabet();
    let targets = read_targets(targets)?;
    let sys = SkewSystem::new(family);
    let s0 = SkewState::one_sided(OneSidedWord::new(FiniteWord::new(alphabet, word)?, tail)?, t);
    let orbit = sys.orbit(&s0, steps)?;
    let report = orbit_coverage(&orbit[..steps.min(orbit.len())], &targets);
    emit(out, &report.to_csv())?;
    Ok(if report.all_hit() { 0 } else { 2 })
}

#[allow(clippy::too_many_arguments)]
fn transitive_point(
    family: &str,
    targets: Option<&Path>,
    auto: Option<usize>,
    floor: f64,
    x0: f64,
    bound: u64,
    out: Option<&PathBuf>,
    prefix_out: Option<&PathBuf>,
) -> Result<u8> {
    let family = load_family(family)?;
    let alphabet = family.alphabet();
    let (targets, eps): (Vec<SkewTarget<f64>>, Vec<f64>) = match (targets, auto) {
        (Some(path), _) => read_targets(path)?
            .iter()
            .map(|t| SkewTarget::from_cylinder(alphabet, t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
        (None, Some(j)) => {
            let eps = default_eps_schedule(j, floor);
            let tail = alphabet.size() as u8;
            (auto_skew_targets(alphabet, &eps, tail)?, eps)
        }
        (None, None) => return Err(Error::InvalidInput("give --targets or --auto".into())),
    };
    eprintln!("building a point for {} targets", targets.len());
    let tp = build_transitive_point(&family, &targets, &eps, x0, bound)?;
    let records = verify_transitive_point(&family, &tp, &targets, &eps)?;
    let report = CoverageReport {
        rows: records
            .iter()
            .map(|r| CoverageRow {
                target_id: r.target,
                hit_step: r.ok.then_some(r.step),
                hit_distance: r.ok.then_some(r.distance),
            })
            .collect(),
    };
    emit(out, &report.to_csv())?;
    if let Some(path) = prefix_out {
        let mut text = String::from("symbol,run_length\n");
        for (s, n) in tp.runs() {
            text.push_str(&format!("{s},{n}\n"));
        }
        fs::write(path, text).map_err(|e| io_err(path, e))?;
    }
    eprintln!("prefix length {}", tp.prefix.len());
    Ok(if report.all_hit() { 0 } else { 2 })
}

fn sigma_chain(relation: &str, targets: Option<&Path>, auto: Option<usize>, bound: u64, out: Option<&PathBuf>) -> Result<u8> {
    let rel = ClosedRelation::from_family(load_family(relation)?);
    let targets = match (targets, auto) {
        (Some(path), _) => read_targets(path)?,
        (None, Some(n)) => auto_box_targets(&rel, n)?,
        (None, None) => return Err(Error::InvalidInput("give --targets or --auto".into())),
    };
    let chain = build_sigma_chain(&rel, &targets, bound)?;
    let stitched = chain.stitched()?;
    let values: Vec<f64> = stitched.values().to_vec();
    let choices = stitched.choices().symbols();
    let rows = targets
        .iter()
        .zip(chain.offsets())
        .enumerate()
        .map(|(id, (target, s))| {
            let d = target.hit_distance(choices.get(s..), values.get(s..).unwrap_or(&[]));
            CoverageRow {
                target_id: id,
                hit_step: d.map(|_| s),
                hit_distance: d,
            }
        })
        .collect();
    let report = CoverageReport { rows };
    emit(out, &report.to_csv())?;
    eprintln!("stitched word length {}", stitched.len());
    Ok(if report.all_hit() { 0 } else { 2 })
}

#[allow(clippy::too_many_arguments)]
fn render(
    kind: Kind,
    depth: usize,
    samples: usize,
    name: &str,
    count: usize,
    seed: u64,
    out: Option<&PathBuf>,
    csv: Option<&PathBuf>,
) -> Result<u8> {
    let svg = match kind {
        Kind::Cantor => {
            let legs = embed_cantor_fan(depth, samples);
            if let Some(path) = csv {
                fs::write(path, legs_csv(&legs)).map_err(|e| io_err(path, e))?;
            }
            cantor_svg(&legs)
        }
        Kind::Lelek => {
            let rel = ClosedRelation::from_family(load_family("H")?);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = depth.max(1) as i64;
            let windows = (0..count)
                .map(|_| random_window(&rel, -d, d, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            lelek_svg(&embed_lelek(&windows))
        }
        Kind::Relation => relation_svg(&load_family(name)?, samples),
    };
    emit(out, &svg)?;
    Ok(0)
}

fn verify(suite: &str) -> Result<u8> {
    let results = run_suite(suite)?;
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    for r in &results {
        println!("{}", r.line());
    }
    println!("{}/{} passed", results.len() - failed.len(), results.len());
    Ok(if failed.is_empty() { 0 } else { 2 })
}
