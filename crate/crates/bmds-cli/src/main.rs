//! `bmds` - shard files with binary MDS array codes, rebuild lost
//! columns with reduced download, and certify the MDS property.
//!
//! Exit codes: 0 success, 1 generic error, 2 invalid parameters,
//! 3 unrecoverable erasure / missing helpers, 4 NotMDS verdict in check
//! mode.

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bmds::code::{is_prime, is_two_primitive, CodeParams, Family};
use bmds::codec::{self, ColumnSet};
use bmds::mdscheck::{self, Verdict};
use bmds::repair;
use bmds::ring::{self, RingContext, RingElement};
use bmds::{Bits, Error};
use format::{ColumnFile, ColumnHeader, Manifest};

#[derive(Parser)]
#[command(
    name = "bmds",
    version,
    about = "binary MDS array codes: encode, decode, repair, certify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Code family: c1 (odd parities) or c2 (even parities).
    #[arg(long)]
    family: String,
    /// Information columns (>= 4).
    #[arg(long)]
    k: usize,
    /// Parity columns (odd >= 3 for c1, even >= 4 for c2).
    #[arg(long)]
    r: usize,
    /// Odd prime with 2 primitive mod p.
    #[arg(long)]
    p: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate parameters and print the derived quantities.
    Params(ParamArgs),
    /// Shard a file into k+r column files plus a manifest.
    Encode {
        #[command(flatten)]
        params: ParamArgs,
        /// Output directory for column files and manifest.
        #[arg(long)]
        out: PathBuf,
        /// Input file to shard.
        input: PathBuf,
    },
    /// Rebuild the original file from any k column files.
    Decode {
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        /// Directory holding manifest.json and column files.
        dir: PathBuf,
    },
    /// Rebuild one lost column, downloading as little as possible.
    Repair {
        /// Failed column index, 1-based.
        #[arg(long)]
        failed: usize,
        /// Directory holding manifest.json and the helper columns.
        dir: PathBuf,
    },
    /// Certify the MDS property (or scan a row of the r=4 table).
    CheckMds {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: Option<usize>,
        /// A prime, or with --table1 a comma list ("19,29,37") or
        /// inclusive range ("3-40") of candidate primes.
        #[arg(long)]
        p: String,
        /// Scan candidates for the r=4 family at this k (k >= 2 allowed).
        #[arg(long)]
        table1: bool,
        /// Sub-matrix enumeration budget before giving up with Unknown.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Time encode/decode/repair on synthetic data.
    Bench {
        #[command(flatten)]
        params: ParamArgs,
        /// Stripes of synthetic payload.
        #[arg(long, default_value_t = 8)]
        stripes: usize,
        /// Also count XORs of the iterative binomial divisions.
        #[arg(long)]
        count_xors: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Params(args) => cmd_params(&args),
        Command::Encode { params, out, input } => cmd_encode(&params, &out, &input),
        Command::Decode { out, dir } => cmd_decode(&out, &dir),
        Command::Repair { failed, dir } => cmd_repair(failed, &dir),
        Command::CheckMds {
            family,
            k,
            r,
            p,
            table1,
            budget,
        } => cmd_check_mds(family, k, r, &p, table1, budget),
        Command::Bench {
            params,
            stripes,
            count_xors,
        } => cmd_bench(&params, stripes, count_xors),
    }
}

/// Validates CLI parameters, printing violations and signalling exit 2.
fn validated(args: &ParamArgs) -> Result<std::result::Result<CodeParams, u8>> {
    let family: Family = match args.family.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return Ok(Err(2));
        }
    };
    match CodeParams::validate(family, args.k, args.r, args.p) {
        Ok(params) => Ok(Ok(params)),
        Err(Error::InvalidParams { violations }) => {
            for v in violations {
                eprintln!("invalid: {v}");
            }
            Ok(Err(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_params(args: &ParamArgs) -> Result<u8> {
    let params = match validated(args)? {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    println!(
        "d={} eta={} tau={} L={}",
        params.d, params.eta, params.tau, params.stored_bits
    );
    println!(
        "n={} msr_bound={}",
        params.n,
        repair::msr_lower_bound(&params)
    );
    match mdscheck::sufficient_degree_bound(&params) {
        Ok(bound) => println!("sufficient_degree_bound={bound}"),
        Err(_) => println!("sufficient_degree_bound=undefined (needs k >= eta)"),
    }
    if params.family == Family::C2 && params.r == 4 {
        println!("prime_bound={}", mdscheck::c2_r4_prime_bound(params.k));
    }
    Ok(0)
}

fn column_name(i: usize) -> String {
    format!("col_{:02}.bmds", i + 1)
}

/// Input bit `j`, LSB-first within bytes; zero past the end.
fn input_bit(bytes: &[u8], j: u64) -> bool {
    let byte = (j / 8) as usize;
    byte < bytes.len() && (bytes[byte] >> (j % 8)) & 1 == 1
}

fn cmd_encode(args: &ParamArgs, out: &Path, input: &Path) -> Result<u8> {
    let params = match validated(args)? {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    let bytes = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    if bytes.is_empty() {
        bail!("input file is empty");
    }
    let l = params.stored_bits as u64;
    let stripe_bits = params.k as u64 * l;
    let total_input_bits = bytes.len() as u64 * 8;
    let stripes = total_input_bits.div_ceil(stripe_bits);
    let padding = (stripes * stripe_bits).div_ceil(8) - bytes.len() as u64;

    let mut files: Vec<ColumnFile> = (0..params.n)
        .map(|c| ColumnFile {
            header: ColumnHeader::for_params(&params, c),
            payload: Vec::new(),
        })
        .collect();
    for s in 0..stripes {
        let data: Vec<Bits> = (0..params.k as u64)
            .map(|i| {
                let mut col = Bits::zeros(params.stored_bits);
                for bit in 0..l {
                    if input_bit(&bytes, s * stripe_bits + i * l + bit) {
                        col.set(bit as usize, true);
                    }
                }
                col
            })
            .collect();
        let cs = codec::encode(&data, &params).map_err(|e| anyhow::anyhow!("stripe {s}: {e}"))?;
        for (c, file) in files.iter_mut().enumerate() {
            file.push_stripe(cs.column(c).expect("encode fills every column"));
        }
    }

    std::fs::create_dir_all(out)?;
    let columns: Vec<String> = (0..params.n).map(column_name).collect();
    for (file, name) in files.iter().zip(&columns) {
        file.write(&out.join(name))?;
    }
    Manifest {
        family: params.family.to_string(),
        k: params.k,
        r: params.r,
        p: params.p,
        original_len: bytes.len() as u64,
        padding,
        columns,
    }
    .save(out)?;
    println!(
        "encoded {} bytes into {} columns x {} stripes ({} bits per column per stripe)",
        bytes.len(),
        params.n,
        stripes,
        l
    );
    Ok(0)
}

/// Reads the column files that exist and parse cleanly; absent columns
/// stay erased.
fn load_columns(
    dir: &Path,
    manifest: &Manifest,
    params: &CodeParams,
) -> Result<Vec<Option<ColumnFile>>> {
    let mut out = Vec::with_capacity(params.n);
    for (c, name) in manifest.columns.iter().enumerate() {
        let path = dir.join(name);
        if !path.exists() {
            out.push(None);
            continue;
        }
        let file = ColumnFile::read(&path)?;
        let fparams = file.header.params()?;
        if fparams != *params || file.header.column as usize != c + 1 {
            bail!("{} does not belong to this shard set", path.display());
        }
        out.push(Some(file));
    }
    Ok(out)
}

fn stripes_in(columns: &[Option<ColumnFile>]) -> Result<usize> {
    let mut stripes = None;
    for file in columns.iter().flatten() {
        let s = file.stripes()?;
        match stripes {
            None => stripes = Some(s),
            Some(prev) if prev == s => {}
            Some(prev) => bail!("inconsistent stripe counts: {prev} vs {s}"),
        }
    }
    stripes.ok_or_else(|| anyhow::anyhow!("no column files found"))
}

fn cmd_decode(out: &Path, dir: &Path) -> Result<u8> {
    let manifest = Manifest::load(dir)?;
    let params = manifest.params().map_err(print_invalid)?;
    let columns = load_columns(dir, &manifest, &params)?;
    let present = columns.iter().filter(|c| c.is_some()).count();
    if present < params.k {
        eprintln!(
            "unrecoverable: {present} columns present, {} required",
            params.k
        );
        return Ok(3);
    }
    let stripes = stripes_in(&columns)?;

    let l = params.stored_bits as u64;
    let stripe_bits = params.k as u64 * l;
    let mut bytes = vec![0u8; ((stripes as u64 * stripe_bits).div_ceil(8)) as usize];
    for s in 0..stripes {
        let mut cs = ColumnSet::new_erased(&params);
        for (c, file) in columns.iter().enumerate() {
            if let Some(file) = file {
                cs.set_column(c, file.stripe(s)?)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
            }
        }
        let full = match codec::decode(&cs) {
            Ok(full) => full,
            Err(e @ (Error::Unrecoverable { .. } | Error::SingularPattern { .. })) => {
                eprintln!("{e}");
                return Ok(3);
            }
            Err(e) => return Err(e.into()),
        };
        for (i, c) in codec::data_positions(&params).enumerate() {
            let col = full.column(c).expect("decoded");
            for bit in col.ones() {
                let j = s as u64 * stripe_bits + i as u64 * l + bit as u64;
                bytes[(j / 8) as usize] |= 1 << (j % 8);
            }
        }
    }
    bytes.truncate(manifest.original_len as usize);
    std::fs::write(out, &bytes).with_context(|| format!("writing {}", out.display()))?;
    println!("decoded {} bytes from {present} columns", bytes.len());
    Ok(0)
}

fn print_invalid(e: anyhow::Error) -> anyhow::Error {
    eprintln!("manifest parameters: {e}");
    e
}

fn cmd_repair(failed: usize, dir: &Path) -> Result<u8> {
    let manifest = Manifest::load(dir)?;
    let params = manifest.params().map_err(print_invalid)?;
    if failed == 0 || failed > params.n {
        bail!("--failed must be in 1..={}", params.n);
    }
    let f0 = failed - 1;
    let columns = load_columns(dir, &manifest, &params)?;
    let stripes = stripes_in(&columns)?;

    let mut restored = ColumnFile {
        header: ColumnHeader::for_params(&params, f0),
        payload: Vec::new(),
    };
    let mut bandwidth = 0usize;
    for s in 0..stripes {
        let mut cs = ColumnSet::new_erased(&params);
        for (c, file) in columns.iter().enumerate() {
            if c == f0 {
                continue;
            }
            if let Some(file) = file {
                cs.set_column(c, file.stripe(s)?)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
            }
        }
        match repair::repair_column(&cs, f0) {
            Ok((bits, bw)) => {
                restored.push_stripe(&bits);
                bandwidth = bw;
            }
            Err(
                e @ (Error::MissingHelper { .. }
                | Error::Unrecoverable { .. }
                | Error::SingularPattern { .. }),
            ) => {
                eprintln!("{e}");
                return Ok(3);
            }
            Err(e) => return Err(e.into()),
        }
    }
    restored.write(&manifest.column_path(dir, f0))?;
    let bound = repair::msr_lower_bound(&params);
    println!(
        "bandwidth={bandwidth} bound={bound} ratio={:.3}",
        bandwidth as f64 / bound as f64
    );
    println!(
        "restored column {failed}: {stripes} stripes, {} bits downloaded in total",
        bandwidth * stripes
    );
    Ok(0)
}

fn parse_prime_candidates(arg: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = arg.split_once('-') {
        let lo: usize = lo.trim().parse()?;
        let hi: usize = hi.trim().parse()?;
        // Range form keeps only usable candidates.
        Ok((lo..=hi)
            .filter(|&p| is_prime(p) && p > 2 && is_two_primitive(p).unwrap_or(false))
            .collect())
    } else {
        arg.split(',')
            .map(|s| Ok(s.trim().parse::<usize>()?))
            .collect()
    }
}

fn cmd_check_mds(
    family: Option<String>,
    k: usize,
    r: Option<usize>,
    p: &str,
    table1: bool,
    budget: Option<u128>,
) -> Result<u8> {
    if table1 {
        let candidates = parse_prime_candidates(p)?;
        if candidates.is_empty() {
            bail!("no candidate primes in {p:?}");
        }
        for (p, verdict) in
            mdscheck::table1_scan(k, &candidates).map_err(|e| anyhow::anyhow!("{e}"))?
        {
            println!("p={p} {verdict}");
        }
        return Ok(0);
    }

    let family: Family = family
        .ok_or_else(|| anyhow::anyhow!("--family is required without --table1"))?
        .parse()
        .map_err(|e: Error| anyhow::anyhow!("{e}"))?;
    let r = r.ok_or_else(|| anyhow::anyhow!("--r is required without --table1"))?;
    let p: usize = p.parse().context("--p must be a prime")?;
    let params = match CodeParams::validate_relaxed(family, k, r, p) {
        Ok(params) => params,
        Err(Error::InvalidParams { violations }) => {
            for v in violations {
                eprintln!("invalid: {v}");
            }
            return Ok(2);
        }
        Err(e) => return Err(e.into()),
    };
    let report = match budget {
        Some(b) => mdscheck::check_mds_with_budget(&params, b),
        None => mdscheck::check_mds(&params),
    };
    println!("{}", report.verdict);
    match report.verdict {
        Verdict::Mds => {
            println!("sub-matrices checked: {}", report.submatrices);
            Ok(0)
        }
        Verdict::NotMds => {
            let w = report.witness.expect("NotMDS carries a witness");
            println!(
                "witness: rows {:?} cols {:?} (0-based), gcd with check polynomial: {:?}",
                w.rows, w.cols, w.gcd_with_check
            );
            Ok(4)
        }
        Verdict::Unknown => {
            println!(
                "enumeration needs {} sub-matrices, over budget",
                report.submatrices
            );
            Ok(0)
        }
    }
}

fn cmd_bench(args: &ParamArgs, stripes: usize, count_xors: bool) -> Result<u8> {
    let params = match validated(args)? {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    let l = params.stored_bits;
    // Deterministic synthetic payload.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let payloads: Vec<Vec<Bits>> = (0..stripes)
        .map(|_| {
            (0..params.k)
                .map(|_| {
                    let mut b = Bits::zeros(l);
                    for i in 0..l {
                        b.set(i, next() & 1 == 1);
                    }
                    b
                })
                .collect()
        })
        .collect();

    let started = Instant::now();
    let mut coded = Vec::with_capacity(stripes);
    for data in &payloads {
        coded.push(codec::encode(data, &params).map_err(|e| anyhow::anyhow!("{e}"))?);
    }
    let encode_time = started.elapsed();
    println!(
        "encode: {stripes} stripes of {} data bits in {encode_time:?}",
        params.k * l
    );

    let started = Instant::now();
    for cs in &coded {
        let mut erased = cs.clone();
        for i in 0..params.r {
            erased.erase(i);
        }
        let decoded = codec::decode(&erased).map_err(|e| anyhow::anyhow!("{e}"))?;
        assert_eq!(&decoded, cs);
    }
    println!(
        "decode: worst-case {} erasures in {:?}",
        params.r,
        started.elapsed()
    );

    let repairable = match params.family {
        Family::C1 => params.k,
        Family::C2 => params.n,
    };
    let bound = repair::msr_lower_bound(&params);
    for f in 0..repairable {
        let plan = repair::plan_repair(&params, f).map_err(|e| anyhow::anyhow!("{e}"))?;
        let started = Instant::now();
        for cs in &coded {
            let mut erased = cs.clone();
            erased.erase(f);
            let bits =
                repair::execute_repair(&erased, &plan).map_err(|e| anyhow::anyhow!("{e}"))?;
            assert_eq!(&bits, cs.column(f).unwrap());
        }
        println!(
            "repair column {}: bandwidth={} bound={bound} ratio={:.3}, {stripes} stripes in {:?}",
            f + 1,
            plan.bandwidth,
            plan.bandwidth as f64 / bound as f64,
            started.elapsed()
        );
    }

    if count_xors {
        let ctx: RingContext = params.ring_context();
        let len = ctx.modulus_len();
        let seed = RingElement::from_exponents(len, &[0, params.tau]);
        let probe = RingElement::from_bits(Bits::from_ones(len, &[1]))
            .mul(&seed)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        for b in 1..len.min(40) {
            if b % params.p == 0 {
                continue;
            }
            let (_, measured) = ring::divide_by_binomial_counted(&probe, b, &ctx)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let formula =
                ring::binomial_division_xor_count(b, &ctx).map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("division by 1+x^{b}: {measured} XORs (closed form {formula})");
            assert_eq!(measured, formula);
        }
    }
    Ok(0)
}
