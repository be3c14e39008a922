use std::path::{Path, PathBuf};
use std::process::ExitCode;

use appell_f1::asymptotics::{
    asymptotic_forms_check, critical_points, laplace_sequence, richardson_extrapolate,
    write_h_csv, write_table_csv, PhaseFn, N_MAX_DEFAULT,
};
use appell_f1::ball::PrecCtx;
use appell_f1::contig::{
    check_case_vanishing, derive_contiguity, derive_contiguity_at, table1_row, ShiftVec,
};
use appell_f1::dsl::{bundled_identities, load_identity_table};
use appell_f1::exact::{parse_rat, Rat};
use appell_f1::hyper::{eval_2f1, eval_f1, F1Method, Params2F1, ParamsF1};
use appell_f1::verify::{verify_all, TableSel};
use appell_f1::Error;
use clap::{Parser, Subcommand, ValueEnum};
use regex::Regex;

#[derive(Parser)]
#[command(name = "appell-f1", version, about = "Rigorous evaluation and verification of 2F1 and Appell F1 identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Series,
    Terminating,
    Integral,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enclose 2F1(a,b;c;x).
    Eval2f1 {
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        a: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        b: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        c: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        x: Rat,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Enclose F1(alpha; beta1, beta2; gamma; x, y).
    Evalf1 {
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        alpha: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        beta1: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        beta2: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        gamma: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        x: Rat,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        y: Rat,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Derive the four-term relation for the shift K,L1,L2,M.
    Contig {
        /// Shift vector, e.g. 2,1,4,2.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Specialize to a closed-form family such as A.1.
        #[arg(long)]
        row: Option<String>,
        /// Print q10, q01 and q00.
        #[arg(long)]
        print_relation: bool,
    },
    /// Verify the identity database and the closed-form families.
    Verify {
        /// all, 1 (families), 2, 3, 4, 5 or conj.
        #[arg(long, default_value = "all")]
        table: String,
        /// Regular expression matched against record ids.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Identity table to use instead of the bundled one.
        #[arg(long)]
        db: Option<PathBuf>,
    },
    /// Laplace-method study of the sequence with constant value 9/5.
    ///
    /// Writes the table (columns n, term, a_ratio, b_ratio; enclosures as
    /// "m ± r") to PATH and samples of h (columns t, h) to PATH with `_h`
    /// appended to the file stem.
    Laplace {
        #[arg(long, default_value_t = N_MAX_DEFAULT)]
        n_max: u64,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long, value_name = "PATH")]
        emit_csv: Option<PathBuf>,
    },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// Usage and domain errors exit with 2.
fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn ctx(digits: u32) -> Result<PrecCtx, Error> {
    if digits == 0 || digits > 10_000 {
        return Err(Error::Domain(format!("digits must be in 1..=10000, got {digits}")));
    }
    Ok(PrecCtx::new(digits))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Eval2f1 { a, b, c, x, digits } => {
            let ctx = ctx(digits)?;
            let r = eval_2f1(&Params2F1::new(a, b, c), &x, &ctx)?;
            println!("{}", r.value.to_decimal(digits));
            eprintln!("method: {}, terms: {}", r.method.name(), r.terms_used);
        }
        Cmd::Evalf1 {
            alpha,
            beta1,
            beta2,
            gamma,
            x,
            y,
            digits,
            method,
        } => {
            let ctx = ctx(digits)?;
            let m = match method {
                MethodArg::Auto => F1Method::Auto,
                MethodArg::Series => F1Method::Series,
                MethodArg::Terminating => F1Method::Terminating,
                MethodArg::Integral => F1Method::Integral,
            };
            let r = eval_f1(&ParamsF1::new(alpha, beta1, beta2, gamma), &x, &y, m, &ctx)?;
            println!("{}", r.value.to_decimal(digits));
            eprintln!("method: {}, terms: {}", r.method.name(), r.terms_used);
        }
        Cmd::Contig {
            k,
            row,
            print_relation,
        } => return contig(&k, row.as_deref(), print_relation),
        Cmd::Verify {
            table,
            filter,
            digits,
            format,
            jobs,
            db,
        } => {
            let ctx = ctx(digits)?;
            let sel = TableSel::parse(&table)?;
            let re = filter
                .map(|f| Regex::new(&f).map_err(|e| Error::Domain(format!("filter: {e}"))))
                .transpose()?;
            let records = match db {
                Some(p) => load_identity_table(&p)?,
                None => bundled_identities(),
            };
            let rep = verify_all(&records, sel, re.as_ref(), &ctx, jobs)?;
            match format {
                Format::Text => print!("{}", rep.to_text()),
                Format::Json => {
                    println!("{}", rep.to_json());
                    for w in rep.warnings() {
                        eprintln!("{w}");
                    }
                }
            }
            return Ok(ExitCode::from(rep.exit_code() as u8));
        }
        Cmd::Laplace {
            n_max,
            digits,
            emit_csv,
        } => laplace(n_max, digits, emit_csv.as_deref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn contig(k: &str, row: Option<&str>, print_relation: bool) -> Result<ExitCode, Error> {
    let k = ShiftVec::parse(k)?;
    let Some(id) = row else {
        let rel = derive_contiguity(&k)?;
        println!("four-term relation for the shift {k} derived in the generic frame");
        if print_relation {
            println!("{rel}");
        }
        return Ok(ExitCode::SUCCESS);
    };
    let s = table1_row(id).ok_or_else(|| Error::Domain(format!("unknown family `{id}`")))?;
    if k != s.shift {
        let rel = derive_contiguity_at(&s.frame(), &k)?;
        println!("relation for the shift {k} on family {id} (family shift {})", s.shift);
        if print_relation {
            println!("{rel}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let cert = check_case_vanishing(&s)?;
    println!("family {id}, shift {k}");
    println!(
        "q10 and q01 vanish for every n: {}",
        if cert.certified { "yes" } else { "no" }
    );
    println!("F(a+1)/F(a) = {}", cert.ratio);
    if print_relation {
        println!("q10(a, n) = {}", cert.q10n);
        println!("q01(a, n) = {}", cert.q01n);
        println!("q00(a, n) = {}", cert.q00n);
    }
    Ok(if cert.certified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn h_path(p: &Path) -> PathBuf {
    let stem = p.file_stem().map_or("laplace".into(), |s| s.to_string_lossy());
    let ext = p.extension().map_or("csv".into(), |s| s.to_string_lossy());
    p.with_file_name(format!("{stem}_h.{ext}"))
}

fn laplace(n_max: u64, digits: u32, emit: Option<&Path>) -> Result<(), Error> {
    let ctx = ctx(digits)?;
    let ph = PhaseFn::example2();
    for cp in critical_points(&ph, ctx.working_bits)? {
        println!("critical point t = {}, h(t) = {}", cp.t, cp.h);
    }
    let ns: Vec<u64> = (0..=n_max.min(20)).collect();
    let seq = laplace_sequence(&ns, &ctx)?;
    println!(
        "terms n = 0..={}: {}",
        ns[ns.len() - 1],
        if seq.is_constant() {
            "pairwise overlapping (constant)"
        } else {
            "NOT constant"
        }
    );
    if let Ok(ex) = richardson_extrapolate(&seq) {
        println!(
            "extrapolated limit {} (heuristic error {:.1e})",
            ex.value.to_decimal(20),
            ex.error_estimate
        );
    }
    let mut big: Vec<u64> = std::iter::successors(Some(4u64), |n| Some(n * 2))
        .take_while(|&n| n <= n_max)
        .collect();
    if n_max >= 4 && big.last() != Some(&n_max) {
        big.push(n_max);
    }
    let rows = asymptotic_forms_check(&big, &ctx)?;
    println!("{:>5}  {:>24}  {:>24}", "n", "A ratio", "B ratio");
    for r in &rows {
        println!(
            "{:>5}  {:>24}  {:>24}",
            r.n,
            r.a_ratio.to_decimal(15),
            r.b_ratio.to_decimal(15)
        );
    }
    if let Some(p) = emit {
        write_table_csv(&rows, p)?;
        let hp = h_path(p);
        write_h_csv(&ph, 999, &hp)?;
        eprintln!("wrote {} and {}", p.display(), hp.display());
    }
    Ok(())
}
