//! Command-line front end: validation, WAct posets, cohomology groups,
//! full classification runs, hom-sets, Baer sums, and the brute-force
//! oracle. Exit codes: 0 success, 1 input error, 2 theorem-check failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cosetal_core::error::Error;
use cosetal_core::extension::presentation_of_twisted;
use cosetal_core::io::{self, FileCatalog};
use cosetal_core::{
    abelian_group_witness, baer_sum, classify, cohomology_group, extract_invariants, fixtures,
    hom_set, oracle_enumerate_cosetal_extensions, twisted_product, wact_poset, Caps, FiniteMonoid,
};

#[derive(Parser)]
#[command(
    name = "cosetal",
    about = "Classify cosetal extensions of finite monoids with abelian group kernel",
    version
)]
struct Cli {
    /// Raise the size caps (classification and oracle limits).
    #[arg(long, global = true)]
    max_size: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a monoid file satisfies the monoid laws.
    Validate { monoid: PathBuf },
    /// Print the poset of compatible pairs over (H, N).
    Wact { h: String, n: String },
    /// Print the second cohomology group of each compatible pair.
    Cohomology {
        h: String,
        n: String,
        /// Restrict to the k-th pair of the WAct enumeration.
        #[arg(long)]
        pair: Option<usize>,
    },
    /// Run the full classification pipeline and emit the JSON report.
    Classify {
        h: String,
        n: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List all morphisms of extensions from ext1 to ext2.
    Hom { ext1: PathBuf, ext2: PathBuf },
    /// Baer sum of two cosetal extensions sharing (E, [phi]).
    Baer {
        ext1: PathBuf,
        ext2: PathBuf,
        /// Write the resulting extension (and its monoid) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force census of cosetal extensions, cross-checked against
    /// the cohomology class counts.
    Oracle { h: String, n: String },
}

/// A monoid argument is a catalog name or a path to a monoid file.
fn resolve_monoid(arg: &str) -> Result<FiniteMonoid, Error> {
    if let Some(m) = fixtures::by_name(arg) {
        return Ok(m);
    }
    let path = Path::new(arg);
    if path.exists() {
        return io::read_monoid_file(path);
    }
    Err(Error::UnknownMonoid(arg.into()))
}

fn load_extension(path: &Path) -> Result<cosetal_core::ExtensionPresentation, Error> {
    let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    io::read_extension_file(path, &FileCatalog { dir })
}

fn run(cli: Cli) -> Result<u8, Error> {
    let caps = match cli.max_size {
        Some(size) => Caps::with_max_size(size),
        None => Caps::default(),
    };
    match cli.command {
        Command::Validate { monoid } => {
            let m = io::read_monoid_file(&monoid)?;
            println!(
                "valid monoid '{}': {} elements, identity '{}'",
                m.name,
                m.size(),
                m.label(m.identity)
            );
            Ok(0)
        }
        Command::Wact { h, n } => {
            let h = resolve_monoid(&h)?;
            let n = resolve_monoid(&n)?;
            let poset = wact_poset(&h, &n)?;
            println!(
                "WAct({}, {}): {} compatible pairs",
                h.name,
                n.name,
                poset.pairs.len()
            );
            for (i, pair) in poset.pairs.iter().enumerate() {
                println!("pair {i}:");
                println!("  relation: {:?}", pair.relation.partitions);
                println!("  action:   {:?}", pair.action.table);
                let below: Vec<usize> = (0..poset.pairs.len())
                    .filter(|&j| j != i && poset.leq[i][j])
                    .collect();
                println!("  strictly below: {below:?}");
            }
            Ok(0)
        }
        Command::Cohomology { h, n, pair } => {
            let h = resolve_monoid(&h)?;
            let n = resolve_monoid(&n)?;
            let witness = abelian_group_witness(&n)?;
            let poset = wact_poset(&h, &n)?;
            let indices: Vec<usize> = match pair {
                Some(k) if k < poset.pairs.len() => vec![k],
                Some(k) => {
                    return Err(Error::ContextMismatch(format!(
                        "pair index {k} out of range ({} pairs)",
                        poset.pairs.len()
                    )))
                }
                None => (0..poset.pairs.len()).collect(),
            };
            for k in indices {
                let group = cohomology_group(&poset.pairs[k], &witness)?;
                println!("pair {k}: H^2 of order {}", group.order());
                println!("  addition: {:?}", group.addition);
                for (c, rep) in group.classes.iter().enumerate() {
                    let marker = if c == group.zero { " (zero)" } else { "" };
                    println!("  class {c}{marker}: {rep:?}");
                }
            }
            Ok(0)
        }
        Command::Classify { h, n, out } => {
            let h = resolve_monoid(&h)?;
            let n = resolve_monoid(&n)?;
            let report = classify(&h, &n, &caps)?;
            let json = report.to_json();
            match out {
                Some(path) => std::fs::write(&path, &json)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                None => print!("{json}"),
            }
            for entry in &report.ledger {
                eprintln!(
                    "{}: {} ({})",
                    entry.check,
                    if entry.pass { "PASS" } else { "FAIL" },
                    entry.detail
                );
            }
            Ok(if report.all_checks_pass() { 0 } else { 2 })
        }
        Command::Hom { ext1, ext2 } => {
            let a = load_extension(&ext1)?;
            let b = load_extension(&ext2)?;
            let witness = abelian_group_witness(&a.n)?;
            let morphisms = hom_set(&a, &b, &witness)?;
            println!("{} morphism(s)", morphisms.len());
            for m in &morphisms {
                println!("{:?}", m.map.image);
            }
            Ok(0)
        }
        Command::Baer { ext1, ext2, out } => {
            let a = load_extension(&ext1)?;
            let b = load_extension(&ext2)?;
            let witness = abelian_group_witness(&a.n)?;
            let ia = extract_invariants(&a, &witness)?;
            let ib = extract_invariants(&b, &witness)?;
            if ia.pair.relation != ib.pair.relation
                || !cosetal_core::actions_equivalent(
                    &ia.pair.action,
                    &ib.pair.action,
                    &ia.pair.relation,
                )?
            {
                return Err(Error::InvariantsDiffer(
                    "Baer sum needs extensions sharing (E, [phi])".into(),
                ));
            }
            let group = cohomology_group(&ia.pair, &witness)?;
            let ca = group.class_of(&ia.factor_set)?;
            let cb = group.class_of(&ib.factor_set)?;
            let sum = baer_sum(&group, ca, cb)?;
            let wsd = twisted_product(&witness, &ia.pair, &group.classes[sum])?;
            let mut ext = presentation_of_twisted(&wsd)?;
            let result_name = format!("baer_{}_{}", a.g.name, b.g.name);
            ext.g.name = result_name.clone();
            ext.kernel_map.codomain.name = result_name.clone();
            ext.projection.domain.name = result_name.clone();
            println!(
                "class {ca} + class {cb} = class {sum}; result '{}' has {} elements",
                ext.g.name,
                ext.g.size()
            );
            if let Some(path) = out {
                let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
                io::write_monoid_file(&dir.join(format!("{result_name}.json")), &ext.g)?;
                io::write_extension_file(&path, &ext)?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Oracle { h, n } => {
            let h = resolve_monoid(&h)?;
            let n = resolve_monoid(&n)?;
            let witness = abelian_group_witness(&n)?;
            let poset = wact_poset(&h, &n)?;
            let census = oracle_enumerate_cosetal_extensions(&h, &n, &witness, &caps)?;
            println!(
                "{} iso-class(es) of cosetal extensions of {} by {}",
                census.len(),
                h.name,
                n.name
            );
            let mut all_match = true;
            for (k, pair) in poset.pairs.iter().enumerate() {
                let group = cohomology_group(pair, &witness)?;
                let bucket = census.iter().filter(|c| c.pair_index == k).count();
                let verdict = if bucket == group.order() {
                    "ok"
                } else {
                    "MISMATCH"
                };
                all_match &= bucket == group.order();
                println!(
                    "pair {k}: census {bucket} vs |H^2| {} ... {verdict}",
                    group.order()
                );
            }
            for (i, class) in census.iter().enumerate() {
                println!(
                    "class {i}: pair {} |G| = {} (bucket size {})",
                    class.pair_index,
                    class.representative.g.size(),
                    class.bucket_size
                );
            }
            Ok(if all_match { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
