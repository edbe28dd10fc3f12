use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use monointerp::constructions::{eps_chain, gen_expdigits, gen_nonlocal};
use monointerp::exactmath::{format_rational, format_scientific, int, pow2, Polynomial, Rational};
use monointerp::interp::{decide, parse_evidence, verify_cone_certificate, verify_witness, Budget, ConeCertificate, Verdict};
use monointerp::ramsey::{extract_interpolable_subset, ExtractionJson};
use monointerp::sdp::{build_instance, build_sdp, gen_exponential_toy, write_sparse, Domain, RATIONAL_MARKER};
use monointerp::splines::PointSet;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "monointerp", version, about = "Exact 3-monotone interpolability tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point-set family or the toy SDP instance.
    Gen(GenArgs),
    /// Decide interpolability and write the verdict with its evidence.
    Check {
        points: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Verdict file (default: `<points>.verdict.json`).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find a subset of size n + 3 (possibly after mirroring) with a certificate.
    Extract {
        points: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-verify a verdict, certificate, witness or extraction file exactly.
    Verify { points: PathBuf, evidence: PathBuf },
    /// Write the semidefinite formulation in sparse text format.
    ExportSdp {
        points: PathBuf,
        /// Output file (default: `<points>.dat-s`, or `.dat-sx` when rational).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print certified brackets for the epsilon chain.
    EpsChain {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eps_bits: Option<u32>,
        /// Also write the brackets as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 12)]
    max_rounds: usize,
    #[arg(long, default_value_t = 500)]
    max_cuts: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Nonlocal,
    Expdigits,
    Toy,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Number of points (nonlocal; even, at least 4).
    #[arg(long)]
    n: Option<usize>,
    /// Level (expdigits: m >= 0; toy: m >= 2).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eps_bits: Option<u32>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn write(path: &Path, contents: &str) -> Result<()> {
    let mut contents = contents.to_string();
    if !contents.ends_with('\n') {
        contents.push('\n');
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_points(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PointSet::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn coeffs(p: &Polynomial) -> Vec<String> {
    (0..=p.degree().unwrap_or(0)).map(|i| format_rational(&p.coeff(i))).collect()
}

fn need(v: Option<usize>, flag: &str) -> Result<usize> {
    v.with_context(|| format!("missing --{flag}"))
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    match a.family {
        Family::Nonlocal => {
            let n = need(a.n, "n")?;
            let fam = gen_nonlocal(n)?;
            write(&a.out_dir.join(format!("nonlocal_n{n}.json")), &fam.points.to_json_string())?;
            write(&a.out_dir.join(format!("nonlocal_n{n}.sidecar.json")), &pretty(&fam.sidecar()))?;
        }
        Family::Expdigits => {
            let m = need(a.m, "m")?;
            let fam = gen_expdigits(m, a.eps_bits)?;
            write(&a.out_dir.join(format!("expdigits_m{m}.json")), &fam.lower.to_json_string())?;
            write(&a.out_dir.join(format!("expdigits_m{m}_raised.json")), &fam.raised.to_json_string())?;
            write(&a.out_dir.join(format!("expdigits_m{m}.sidecar.json")), &pretty(&fam.sidecar()))?;
        }
        Family::Toy => {
            let m = need(a.m, "m")?;
            let inst = gen_exponential_toy(m)?;
            let doc = json!({
                "m": m,
                "domain": if inst.domain == Domain::RealLine { "real-line" } else { "unit-interval" },
                "v": inst.v.iter().map(format_rational).collect::<Vec<_>>(),
                "polys": inst.polys.iter().map(|row| row.iter().map(coeffs).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            write(&a.out_dir.join(format!("toy_m{m}.json")), &pretty(&doc))?;
            let text = write_sparse(&build_sdp(&inst)?);
            let ext = if text.starts_with(RATIONAL_MARKER) { "dat-sx" } else { "dat-s" };
            write(&a.out_dir.join(format!("toy_m{m}.{ext}")), &text)?;
        }
    }
    Ok(())
}

fn evidence_holds(p: &PointSet, v: &Verdict) -> Result<bool> {
    Ok(match v {
        Verdict::Interpolable(c) => verify_cone_certificate(p, c)?,
        Verdict::NonInterpolable(w) => verify_witness(p, w)?,
        Verdict::Undecided(_) => false,
    })
}

fn cmd_check(points: &Path, budget: BudgetArgs, output: Option<PathBuf>) -> Result<ExitCode> {
    let p = read_points(points)?;
    let b = Budget { max_rounds: budget.max_rounds, max_cuts: budget.max_cuts, ..Budget::default() };
    let verdict = decide(&p, &b)?;
    if !matches!(verdict, Verdict::Undecided(_)) && !evidence_holds(&p, &verdict)? {
        bail!("internal error: evidence failed re-verification");
    }
    let out = output.unwrap_or_else(|| sibling(points, ".verdict.json"));
    write(&out, &verdict.to_json_string())?;
    println!("{}", verdict.status());
    Ok(if matches!(verdict, Verdict::Undecided(_)) { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_extract(points: &Path, n: usize, output: Option<PathBuf>) -> Result<()> {
    let p = read_points(points)?;
    let r = extract_interpolable_subset(&p, n)?;
    if !r.verify()? {
        bail!("internal error: extracted certificate failed re-verification");
    }
    let out = output.unwrap_or_else(|| sibling(points, ".extract.json"));
    write(&out, &pretty(&r.to_json()))?;
    println!("indices {:?} mirrored {} color {:?}", r.indices, r.mirrored, r.color);
    Ok(())
}

fn cmd_verify(points: &Path, evidence: &Path) -> Result<bool> {
    let p = read_points(points)?;
    let text = fs::read_to_string(evidence).with_context(|| format!("reading {}", evidence.display()))?;
    if let Ok(x) = serde_json::from_str::<ExtractionJson>(&text) {
        let sub = p.subset(&x.indices)?;
        let sub = if x.mirrored { sub.mirrored() } else { sub };
        return Ok(verify_cone_certificate(&sub, &ConeCertificate::from_json(&x.certificate)?)?);
    }
    let v = parse_evidence(&text).with_context(|| format!("parsing {}", evidence.display()))?;
    if let Verdict::Undecided(_) = v {
        bail!("an undecided verdict carries no evidence");
    }
    evidence_holds(&p, &v)
}

fn cmd_export_sdp(points: &Path, output: Option<PathBuf>) -> Result<()> {
    let p = read_points(points)?;
    let sdp = build_sdp(&build_instance(&p, 3)?)?;
    let text = write_sparse(&sdp);
    let ext = if text.starts_with(RATIONAL_MARKER) { ".dat-sx" } else { ".dat-s" };
    let out = output.unwrap_or_else(|| sibling(points, ext));
    write(&out, &text)?;
    println!("{} constraints, {} blocks", sdp.constraints.len(), sdp.blocks.len());
    Ok(())
}

fn cmd_eps_chain(m: usize, bits: Option<u32>, output: Option<PathBuf>) -> Result<()> {
    let chain = eps_chain(m, bits)?;
    println!("{:>3}  {:>16}  {:>16}  exact bracket", "j", "~lo (approx)", "~hi (approx)");
    for (j, c) in chain.iter().enumerate() {
        println!(
            "{:>3}  {:>16}  {:>16}  [{}, {}]",
            j,
            format_scientific(&c.lo, 8),
            format_scientific(&c.hi, 8),
            format_rational(&c.lo),
            format_rational(&c.hi)
        );
    }
    for j in 1..chain.len() {
        let cap: Rational = &chain[j - 1].lo * &chain[j - 1].lo / int(5);
        let margin = int(2) * pow2(-(1i64 << j));
        if !(chain[j].lo > Rational::default() && chain[j].hi < cap && chain[j].hi <= margin) {
            bail!("bracket for eps_{j} does not separate");
        }
        println!("eps_{j} in (0, eps_{}^2/5) and eps_{j} <= 2*2^(-2^{j}): certified", j - 1);
    }
    if let Some(out) = output {
        let doc = json!({
            "m": m,
            "eps": chain.iter().map(|c| json!({"lo": format_rational(&c.lo), "hi": format_rational(&c.hi)})).collect::<Vec<_>>(),
        });
        write(&out, &pretty(&doc))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a)?,
        Command::Check { points, budget, output } => return cmd_check(&points, budget, output),
        Command::Extract { points, n, output } => cmd_extract(&points, n, output)?,
        Command::Verify { points, evidence } => {
            let ok = cmd_verify(&points, &evidence)?;
            println!("{}", if ok { "verified" } else { "rejected" });
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::ExportSdp { points, output } => cmd_export_sdp(&points, output)?,
        Command::EpsChain { m, eps_bits, output } => cmd_eps_chain(m, eps_bits, output)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
