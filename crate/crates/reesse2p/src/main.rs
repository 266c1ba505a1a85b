use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use reesse2p::analysis::lattice::{self, Manner};
use reesse2p::analysis::lever;
use reesse2p::analysis::mitm;
use reesse2p::analysis::{attack_cost_report, density};
use reesse2p::codec::CipherBlock;
use reesse2p::cost;
use reesse2p::keyforge::{self, KeygenConfig, Profile};
use reesse2p::message;
use reesse2p::sequence;

#[derive(Parser)]
#[command(name = "reesse2p", version, about = "Knapsack-style public-key encryption over nonnormal super-increasing sequences, with an attack workbench and cost model")]
struct Cli {
    /// RNG seed for reproducible runs. The REESSE2P_SEED environment
    /// variable, when set, takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for block-parallel encryption/decryption.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write <output>.pub and <output>.prv.
    Keygen(KeygenArgs),
    /// Encrypt a file under a public key.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext file under a private key.
    Decrypt(DecryptArgs),
    /// Run an attack against a public key and ciphertext.
    Attack(AttackArgs),
    /// Diagnostics: densities, sequence checks, lever tests, cost reports.
    Analyze(AnalyzeArgs),
    /// Cost-model tables and single-row profiles.
    Bench(BenchArgs),
}

#[derive(Args)]
struct KeygenArgs {
    /// Block length n.
    #[arg(short = 'n', long, default_value_t = 120)]
    n: usize,
    /// Parameter profile; `auto` picks full for n >= 96, toy below.
    #[arg(long, value_enum, default_value_t = ProfileArg::Auto)]
    profile: ProfileArg,
    /// Retain W, Z and the lever permutation in the private key file.
    #[arg(long)]
    debug: bool,
    /// Output path prefix.
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    /// Public key file.
    #[arg(long)]
    key: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Random suffix bits per block; defaults to floor(n/3).
    #[arg(long)]
    pad_bits: Option<usize>,
}

#[derive(Args)]
struct DecryptArgs {
    /// Private key file.
    #[arg(long)]
    key: PathBuf,
    /// Optional public key; when given, every recovered block is
    /// re-encrypted and compared before acceptance.
    #[arg(long = "pub")]
    public: Option<PathBuf>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackMethod {
    Mitm,
    Lattice,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long, value_enum)]
    method: AttackMethod,
    /// Public key file.
    #[arg(long)]
    key: PathBuf,
    /// Ciphertext file; only the first block is attacked.
    #[arg(long = "in")]
    input: PathBuf,
    /// Probe budget for the meet-in-the-middle table sweep.
    #[arg(long)]
    budget: Option<u64>,
    /// Lattice basis manner: plain, extended-coeff or extended-dup.
    #[arg(long, default_value = "extended-coeff")]
    manner: String,
    /// Coefficient bound for the lattice solution search.
    #[arg(long, default_value_t = 2)]
    bound: i64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Print knapsack densities of a sequence file.
    #[arg(long)]
    density: Option<PathBuf>,
    /// Validate a sequence file against the super-increase inequality.
    #[arg(long)]
    check: Option<PathBuf>,
    /// Print the log2 attack-cost report for a block length n.
    #[arg(long)]
    cost: Option<usize>,
    /// Modulus bit length for --cost; defaults to 1.6 n.
    #[arg(long)]
    log_m: Option<u64>,
    /// Run the constant-lever difference diagnostic; needs --prv with
    /// debug fields retained.
    #[arg(long)]
    lever_diag: bool,
    /// Search for an alternative private-key witness; needs --key.
    #[arg(long)]
    lever_search: Option<u64>,
    /// Public key file for lever diagnostics.
    #[arg(long)]
    key: Option<PathBuf>,
    /// Private key file for lever diagnostics.
    #[arg(long)]
    prv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Print the reference length and bit-operation tables.
    #[arg(long)]
    tables: bool,
    /// Print reference rows as CSV.
    #[arg(long)]
    csv: bool,
    /// Print a single profile for a custom block length.
    #[arg(short = 'n', long)]
    n: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Auto,
    Full,
    Toy,
}

impl ProfileArg {
    fn resolve(self, n: usize) -> Profile {
        match self {
            ProfileArg::Full => Profile::Full,
            ProfileArg::Toy => Profile::Toy,
            ProfileArg::Auto => {
                if n >= 96 {
                    Profile::Full
                } else {
                    Profile::Toy
                }
            }
        }
    }
}

fn make_rng(seed: Option<u64>) -> ChaCha20Rng {
    let env_seed = std::env::var("REESSE2P_SEED").ok().and_then(|s| s.parse().ok());
    match env_seed.or(seed) {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let mut rng = make_rng(cli.seed);
    match run(cli.command, &mut rng) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command, rng: &mut ChaCha20Rng) -> anyhow::Result<()> {
    match command {
        Command::Keygen(args) => {
            let profile = args.profile.resolve(args.n);
            let mut cfg = KeygenConfig::new(args.n, profile);
            cfg.retain_debug = args.debug;
            let (public, private) = keyforge::keygen(&cfg, rng)?;
            let pub_path = args.output.with_extension("pub");
            let prv_path = args.output.with_extension("prv");
            fs::write(&pub_path, keyforge::serialize_public(&public))?;
            fs::write(&prv_path, keyforge::serialize_private(&private))?;
            println!("wrote {} and {}", pub_path.display(), prv_path.display());
        }
        Command::Encrypt(args) => {
            let public = keyforge::parse_public(&fs::read_to_string(&args.key)?)?;
            let r = args.pad_bits.unwrap_or(public.n() / 3);
            let data = fs::read(&args.input)?;
            let ct = message::encrypt_message(&public, &data, r, rng)?;
            fs::write(&args.output, message::write_ciphertext(&ct))?;
            println!("encrypted {} bytes into {} blocks (n={}, r={})", data.len(), ct.blocks.len(), ct.n, ct.r);
        }
        Command::Decrypt(args) => {
            let private = keyforge::parse_private(&fs::read_to_string(&args.key)?)?;
            let public = match &args.public {
                Some(p) => Some(keyforge::parse_public(&fs::read_to_string(p)?)?),
                None => None,
            };
            let ct = message::parse_ciphertext(&fs::read_to_string(&args.input)?)?;
            let data = message::decrypt_message(&private, public.as_ref(), &ct)?;
            fs::write(&args.output, &data)?;
            println!("decrypted {} blocks into {} bytes", ct.blocks.len(), data.len());
        }
        Command::Attack(args) => {
            let public = keyforge::parse_public(&fs::read_to_string(&args.key)?)?;
            let ct = message::parse_ciphertext(&fs::read_to_string(&args.input)?)?;
            let Some(ebar) = ct.blocks.first().cloned() else {
                anyhow::bail!("ciphertext has no blocks");
            };
            let cipher = CipherBlock { ebar: ebar.clone() };
            match args.method {
                AttackMethod::Mitm => {
                    let budget = args.budget.unwrap_or_else(|| mitm::mitm_budget(public.n()));
                    let result = mitm::mitm_attack(&public, &cipher, budget)?;
                    match result.block {
                        Some(b) => println!("recovered block {b} after {} probes", result.work),
                        None => println!("no block recovered within {} probes", result.work),
                    }
                }
                AttackMethod::Lattice => {
                    let manner = Manner::from_str(&args.manner)?;
                    let result = lattice::lattice_attack(
                        &public.c,
                        &ebar,
                        manner,
                        &lattice::default_delta(),
                        args.bound,
                    )?;
                    if result.solutions.is_empty() {
                        println!("no solution vector within coefficient bound {}", args.bound);
                    }
                    for sol in &result.solutions {
                        let coords: Vec<String> = sol.iter().map(|c| c.to_string()).collect();
                        println!("solution ({})", coords.join(","));
                    }
                }
            }
        }
        Command::Analyze(args) => analyze(args, rng)?,
        Command::Bench(args) => {
            if args.tables {
                print!("{}", cost::render_tables());
            }
            if args.csv {
                for p in cost::reference_rows() {
                    print!("{}", cost::render_profile_csv(&p));
                }
            }
            if let Some(n) = args.n {
                let log_m = 1.6 * n as f64;
                let m = (2.0 * n as f64 - 1.585 * n as f64) / 1.585;
                print!("{}", cost::render_profile(&cost::reesse2p_costs(n, log_m, m, 0)));
            }
        }
    }
    Ok(())
}

fn analyze(args: AnalyzeArgs, rng: &mut ChaCha20Rng) -> anyhow::Result<()> {
    let mut did_something = false;
    if let Some(path) = &args.density {
        let terms = sequence::parse_sequence(&fs::read_to_string(path)?)?;
        let d = density(&terms)?;
        println!("raw {}/{} (~{:.3})", d.raw.0, d.raw.1, d.raw_value());
        println!("effective {}/{} (~{:.3})", d.effective.0, d.effective.1, d.effective_value());
        did_something = true;
    }
    if let Some(path) = &args.check {
        let terms = sequence::parse_sequence(&fs::read_to_string(path)?)?;
        let ok = sequence::validate(&terms)?;
        let even = terms.iter().all(num_integer::Integer::is_even);
        println!("super-increase inequality: {}", if ok { "holds" } else { "violated" });
        println!("all terms even: {even}");
        if !ok {
            anyhow::bail!("sequence fails the super-increase inequality");
        }
        did_something = true;
    }
    if let Some(n) = args.cost {
        let log_m = args.log_m.unwrap_or((1.6 * n as f64).ceil() as u64);
        let report = attack_cost_report(n, log_m);
        println!("n={} logM={}", report.n, report.log_m);
        println!("mitm_log2={}", report.mitm_log2);
        println!("slll_log2={}", report.slll_log2);
        println!("z_guess_log2={}", report.z_guess_log2);
        println!("lever_guess_log2={:.1}", report.lever_guess_log2);
        println!("seq_guess_log2={:.1}", report.seq_guess_log2);
        println!("exhaustive_log2={:.1}", report.exhaustive_log2);
        did_something = true;
    }
    if args.lever_diag {
        let (key, prv) = lever_paths(&args)?;
        let public = keyforge::parse_public(&fs::read_to_string(key)?)?;
        let private = keyforge::parse_private(&fs::read_to_string(prv)?)?;
        let report = lever::constant_lever_diagnostic(&public, &private)?;
        println!("difference identity holds: {}", report.identity_holds);
        if let Some(i) = report.first_violation {
            println!("first violation at index {i}");
        }
        did_something = true;
    }
    if let Some(attempts) = args.lever_search {
        let key = args.key.as_ref().ok_or_else(|| anyhow::anyhow!("--lever-search needs --key"))?;
        let public = keyforge::parse_public(&fs::read_to_string(key)?)?;
        match lever::lever_oracle_search(&public, None, attempts, rng)? {
            Some(w) => println!("witness found after {} attempts", w.attempts_used),
            None => println!("no witness within {attempts} attempts"),
        }
        did_something = true;
    }
    if !did_something {
        anyhow::bail!("analyze: nothing to do; pass --density, --check, --cost, --lever-diag or --lever-search");
    }
    Ok(())
}

fn lever_paths(args: &AnalyzeArgs) -> anyhow::Result<(&PathBuf, &PathBuf)> {
    let key = args.key.as_ref().ok_or_else(|| anyhow::anyhow!("--lever-diag needs --key"))?;
    let prv = args.prv.as_ref().ok_or_else(|| anyhow::anyhow!("--lever-diag needs --prv"))?;
    Ok((key, prv))
}
