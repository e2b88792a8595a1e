//! Command-line frontend: every verification and construction in the
//! library as a batch command with text or JSON output.
//!
//! Exit codes: 0 when every check in scope passed, 1 when a check failed,
//! 2 on invalid input or unsupported parameters. Reports are deterministic:
//! checks are sorted by ID, randomized suites print their seed, and no
//! timings appear in the output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use congruence_kit::congruence::{abel_add, abelianize, commutator, level};
use congruence_kit::exactmat::{elementary, mat_inv, mat_mul, BigIntMatrix};
use congruence_kit::genwords::{
    evaluate, gen_set, invert_word, Atom, GenFamilyTag, Word,
};
use congruence_kit::presentation::{
    derived_relator_words, hat_word, relators_gamma2, relators_gamma2hat, relators_to_jsonl,
    rs_rewrite, sub_word, verify_relators,
};
use congruence_kit::quotients::{
    abelian_structure, enumerate_image, filter_enumerate, resolve_budget, verify_quotient_claims,
};
use congruence_kit::rewriter::{
    bounded_conj_word, conjugate_rewrite, flatten_to_x2, is_x2_pure, md_m_word, BoundedCase,
    MdmVariant,
};
use congruence_kit::sample;
use congruence_kit::wordsolve2::decompose2;
use congruence_kit::Error;

#[derive(Parser)]
#[command(
    name = "congruence-kit",
    version,
    about = "Exact computations in congruence subgroups of SL(n;Z): membership, \
             abelianization, generator rewriting, two-by-two decomposition, \
             presentations, and finite quotients."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized suites (printed in their reports).
    #[arg(long, global = true, default_value_t = sample::DEFAULT_SEED)]
    seed: u64,
    /// Element budget for quotient enumeration (overrides the
    /// CONGRUENCE_KIT_BUDGET environment variable).
    #[arg(long, global = true)]
    budget: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the five elementary-matrix relation families on an exhaustive
    /// grid (exponents in [-5,5], all index patterns).
    VerifyRelations {
        /// Matrix size; omit to run n = 3, 4, 5.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check the conjugated-generator and bounded-conjugation identities by
    /// evaluation over an exhaustive grid, plus the conjugation-closure
    /// rewriting.
    VerifyIdentities {
        /// Matrix size; omit to run n = 3, 4, 5.
        #[arg(long)]
        n: Option<usize>,
        /// Level; omit to run d = 1..=5.
        #[arg(long)]
        d: Option<u64>,
    },
    /// Abelianization coordinates of a level-d member.
    Abelianize {
        #[arg(long)]
        d: u64,
        /// Matrix JSON file.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Word file in the generator grammar (requires --n).
        #[arg(long)]
        word: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Level (gcd of X - I) of a matrix.
    Level {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        word: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Decompose a 2x2 level-d member into labelled generators and emit the
    /// certificate.
    Decompose {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        word: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Re-evaluate the emitted word and fail unless it reproduces the
        /// input exactly.
        #[arg(long)]
        check: bool,
    },
    /// Generate the level-2 relator families, verify each evaluates to the
    /// identity, and optionally export them as JSON lines.
    Presentation {
        #[arg(long)]
        n: usize,
        /// Write all relators (GL-side then SL-side) to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Enumerate the image of the level-l subgroup in SL(n;Z/m) and report
    /// its order; optionally its abelian structure, the tower/product
    /// claims, or an element dump.
    Quotient {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m: u64,
        /// Run the order/census/product/tower cross-checks for (l, m).
        #[arg(long)]
        claims: bool,
        /// Report invariant factors (abelian images only).
        #[arg(long)]
        structure: bool,
        /// Write up to 10^4 elements (canonical order, JSON lines).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Condensed full-suite self-test with a pinned default seed.
    Selftest,
}

struct Check {
    id: String,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            pass,
            detail: detail.into(),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on SIGPIPE (e.g. when piped into `head`) like other
    // line-oriented tools instead of panicking on a failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Consistency(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.cmd {
        Cmd::VerifyRelations { n } => {
            let ns: Vec<usize> = n.map(|v| vec![v]).unwrap_or_else(|| vec![3, 4, 5]);
            let mut checks = Vec::new();
            for &n in &ns {
                checks.extend(relation_checks(n)?);
            }
            Ok(emit_checks(cli, "verify-relations", None, checks))
        }
        Cmd::VerifyIdentities { n, d } => {
            let ns: Vec<usize> = n.map(|v| vec![v]).unwrap_or_else(|| vec![3, 4, 5]);
            let ds: Vec<u64> = d.map(|v| vec![v]).unwrap_or_else(|| (1..=5).collect());
            let mut checks = Vec::new();
            for &n in &ns {
                for &d in &ds {
                    checks.extend(identity_checks(n, d)?);
                }
            }
            Ok(emit_checks(cli, "verify-identities", None, checks))
        }
        Cmd::Abelianize { d, matrix, word, n } => {
            let x = load_input(*n, matrix, word)?;
            let coords = abelianize(&x, *d)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&coords).unwrap()),
                Format::Text => {
                    println!("n = {}, d = {}", coords.n(), coords.d());
                    for (label, value) in coords.coordinates() {
                        println!("{label} = {value}");
                    }
                    if coords.has_n2_warning() {
                        println!(
                            "note: coordinates for n = 2 are data only; the structural \
                             statement assumes n >= 3"
                        );
                    }
                }
            }
            Ok(true)
        }
        Cmd::Level { matrix, word, n } => {
            let x = load_input(*n, matrix, word)?;
            let lv = level(&x);
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "level": lv.0.to_string(),
                        "every_level": lv.is_every_level(),
                    })
                ),
                Format::Text => {
                    if lv.is_every_level() {
                        println!("level = 0 (identity matrix: every level)");
                    } else {
                        println!("level = {lv}");
                    }
                }
            }
            Ok(true)
        }
        Cmd::Decompose {
            d,
            matrix,
            word,
            n,
            check,
        } => {
            let a = load_input(*n, matrix, word)?;
            let dec = decompose2(&a, *d)?;
            let check_pass = if *check {
                Some(evaluate(&dec.word) == a)
            } else {
                None
            };
            match cli.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&dec).unwrap();
                    if let Some(p) = check_pass {
                        v["check"] = serde_json::json!(if p { "pass" } else { "fail" });
                    }
                    println!("{v}");
                }
                Format::Text => {
                    println!("d = {}", dec.d);
                    println!("steps = {}", dec.trace.steps.len());
                    println!("word = {}", dec.word.to_grammar_string());
                    for (label, power) in &dec.factors {
                        println!("factor: {label} ^ {power}");
                    }
                    if let Some(p) = check_pass {
                        println!("check: {}", if p { "PASS" } else { "FAIL" });
                    }
                }
            }
            Ok(check_pass.unwrap_or(true))
        }
        Cmd::Presentation { n, export } => {
            let hat = relators_gamma2hat(*n)?;
            let sub = relators_gamma2(*n)?;
            let hat_report = verify_relators(&hat);
            let sub_report = verify_relators(&sub);
            if let Some(path) = export {
                let mut text = relators_to_jsonl(&hat);
                text.push_str(&relators_to_jsonl(&sub));
                fs::write(path, text)
                    .map_err(|e| Error::Parse(format!("writing {}: {e}", path.display())))?;
            }
            let mut checks = Vec::new();
            for (side, report) in [("gl-side", &hat_report), ("sl-side", &sub_report)] {
                let mut fams: Vec<String> = report
                    .per_family
                    .iter()
                    .map(|(f, c)| format!("{f}:{c}"))
                    .collect();
                fams.sort();
                checks.push(Check::new(
                    format!("presentation/{side}"),
                    report.all_identity,
                    format!(
                        "{} relators ({}){}",
                        report.total,
                        fams.join(", "),
                        if report.all_identity {
                            String::new()
                        } else {
                            format!("; failures: {:?}", report.failures)
                        }
                    ),
                ));
            }
            Ok(emit_checks(cli, "presentation", None, checks))
        }
        Cmd::Quotient {
            n,
            l,
            m,
            claims,
            structure,
            dump,
        } => {
            let budget = resolve_budget(cli.budget);
            if *claims {
                let report = verify_quotient_claims(*n, *l, *m, budget)?;
                match cli.format {
                    Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
                    Format::Text => {
                        println!("levels: l = {l}, m = {m}, gcd = {}, lcm = {}", report.gcd, report.lcm);
                        for (label, order) in &report.orders {
                            println!("{label}: order {order}");
                        }
                        println!("census match: {}", report.census_match);
                        println!("product order: {}", report.product_order);
                        if let Some(t) = report.tower_structure {
                            println!(
                                "tower structure: {t} (factors {:?})",
                                report.tower_factors.clone().unwrap_or_default()
                            );
                        }
                        if let Some(c) = report.coprime_product {
                            println!("coprime product: {c}");
                        }
                        if report.n2_data_only {
                            println!("note: n = 2 results are data only");
                        }
                        for f in &report.failures {
                            println!("FAIL: {f}");
                        }
                        println!("all claims: {}", if report.all_pass { "PASS" } else { "FAIL" });
                    }
                }
                return Ok(report.all_pass);
            }
            let t = enumerate_image(*n, *l, *m, budget)?;
            let factors = if *structure {
                Some(abelian_structure(&t)?.factors)
            } else {
                None
            };
            let dumped = if let Some(path) = dump {
                let mut text = String::new();
                let mut count = 0usize;
                for x in t.sorted_elements().into_iter().take(10_000) {
                    text.push_str(&serde_json::json!(x.entries()).to_string());
                    text.push('\n');
                    count += 1;
                }
                fs::write(path, text)
                    .map_err(|e| Error::Parse(format!("writing {}: {e}", path.display())))?;
                Some(count)
            } else {
                None
            };
            match cli.format {
                Format::Json => {
                    let mut v = serde_json::json!({
                        "n": n, "l": l, "m": m,
                        "order": t.order(),
                    });
                    if let Some(f) = &factors {
                        v["factors"] = serde_json::json!(f);
                    }
                    if let Some(c) = dumped {
                        v["dumped"] = serde_json::json!(c);
                    }
                    println!("{v}");
                }
                Format::Text => {
                    println!("image of level-{l} subgroup in SL({n};Z/{m}): order {}", t.order());
                    if let Some(f) = &factors {
                        println!("invariant factors: {f:?}");
                    }
                    if let Some(c) = dumped {
                        println!("dumped {c} elements");
                    }
                }
            }
            Ok(true)
        }
        Cmd::Selftest => {
            let checks = selftest_checks(cli.seed, resolve_budget(cli.budget))?;
            Ok(emit_checks(cli, "selftest", Some(cli.seed), checks))
        }
    }
}

/// Read the input matrix: either a matrix JSON file or a word file in the
/// generator grammar (the latter needs --n).
fn load_input(
    n: Option<usize>,
    matrix: &Option<PathBuf>,
    word: &Option<PathBuf>,
) -> Result<BigIntMatrix, Error> {
    match (matrix, word) {
        (Some(_), Some(_)) => Err(Error::Precondition(
            "give either --matrix or --word, not both".into(),
        )),
        (None, None) => Err(Error::Precondition(
            "an input is required: --matrix <file> or --word <file>".into(),
        )),
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
            BigIntMatrix::from_json_str(&text)
        }
        (None, Some(path)) => {
            let n = n.ok_or_else(|| {
                Error::Precondition("--word input requires --n (matrix size)".into())
            })?;
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
            Ok(evaluate(&Word::parse(n, text.trim())?))
        }
    }
}

/// Print a check list (sorted by ID) and return whether all passed.
fn emit_checks(cli: &Cli, command: &str, seed: Option<u64>, mut checks: Vec<Check>) -> bool {
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let all_pass = checks.iter().all(|c| c.pass);
    match cli.format {
        Format::Json => {
            let list: Vec<serde_json::Value> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "id": c.id,
                        "status": if c.pass { "pass" } else { "fail" },
                        "detail": c.detail,
                    })
                })
                .collect();
            let mut v = serde_json::json!({
                "command": command,
                "checks": list,
                "all_pass": all_pass,
            });
            if let Some(s) = seed {
                v["seed"] = serde_json::json!(s);
                v["rng"] = serde_json::json!(sample::RNG_NAME);
            }
            println!("{v}");
        }
        Format::Text => {
            if let Some(s) = seed {
                println!("seed = {s} ({})", sample::RNG_NAME);
            }
            for c in &checks {
                if c.pass {
                    println!("{}: PASS ({})", c.id, c.detail);
                } else {
                    println!("{}: FAIL ({})", c.id, c.detail);
                }
            }
            println!(
                "{command}: {}",
                if all_pass {
                    format!("all {} checks passed", checks.len())
                } else {
                    format!(
                        "{} of {} checks FAILED",
                        checks.iter().filter(|c| !c.pass).count(),
                        checks.len()
                    )
                }
            );
        }
    }
    all_pass
}

fn e(n: usize, i: usize, j: usize, s: i64) -> BigIntMatrix {
    elementary(n, i, j, BigInt::from(s)).expect("valid indices")
}

/// The five relation families at one matrix size, exponents in [-5,5].
fn relation_checks(n: usize) -> Result<Vec<Check>, Error> {
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "relation grid needs n >= 3, got {n}"
        )));
    }
    let mut same_row = 0usize;
    let mut same_col = 0usize;
    let mut two_step = 0usize;
    let mut disjoint = 0usize;
    let mut conj_swap = 0usize;
    let mut failures = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for s in -5i64..=5 {
                let lhs = mat_mul(
                    &mat_mul(&e(n, j, i, 1), &e(n, i, j, s))?,
                    &e(n, j, i, -1),
                )?;
                let rhs = mat_mul(
                    &mat_mul(&e(n, i, j, 1), &e(n, j, i, -s))?,
                    &e(n, i, j, -1),
                )?;
                if lhs == rhs {
                    conj_swap += 1;
                } else {
                    failures.push(format!("conjugation-swap ({i},{j}) s={s}"));
                }
            }
            for k in 1..=n {
                if k == i || k == j {
                    continue;
                }
                for s in -5i64..=5 {
                    for t in -5i64..=5 {
                        let a = e(n, i, j, s);
                        if mat_mul(&a, &e(n, i, k, t))? == mat_mul(&e(n, i, k, t), &a)? {
                            same_row += 1;
                        } else {
                            failures.push(format!("same-row ({i},{j},{k}) s={s} t={t}"));
                        }
                        if mat_mul(&a, &e(n, k, j, t))? == mat_mul(&e(n, k, j, t), &a)? {
                            same_col += 1;
                        } else {
                            failures.push(format!("same-column ({i},{j},{k}) s={s} t={t}"));
                        }
                        let lhs = mat_mul(&a, &e(n, j, k, t))?;
                        let rhs =
                            mat_mul(&mat_mul(&e(n, j, k, t), &a)?, &e(n, i, k, s * t))?;
                        if lhs == rhs {
                            two_step += 1;
                        } else {
                            failures.push(format!("two-step ({i},{j},{k}) s={s} t={t}"));
                        }
                        for l in 1..=n {
                            if l == i || l == j || l == k {
                                continue;
                            }
                            let b = e(n, k, l, t);
                            if mat_mul(&a, &b)? == mat_mul(&b, &a)? {
                                disjoint += 1;
                            } else {
                                failures.push(format!(
                                    "disjoint ({i},{j},{k},{l}) s={s} t={t}"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let mk = |fam: &str, count: usize| {
        let fails: Vec<&String> = failures.iter().filter(|f| f.starts_with(fam)).collect();
        Check::new(
            format!("relations/n={n}/{fam}"),
            fails.is_empty(),
            if fails.is_empty() {
                format!("{count} instances")
            } else {
                format!("{} failures, first: {}", fails.len(), fails[0])
            },
        )
    };
    Ok(vec![
        mk("same-row", same_row),
        mk("same-column", same_col),
        mk("disjoint", disjoint),
        mk("two-step", two_step),
        mk("conjugation-swap", conj_swap),
    ])
}

/// Conjugated-generator identities (both variants), bounded-conjugation
/// identities (square and inverse), and the conjugation-closure rewriting,
/// at one (n, d).
fn identity_checks(n: usize, d: u64) -> Result<Vec<Check>, Error> {
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "identity grid needs n >= 3, got {n}"
        )));
    }
    let mut checks = Vec::new();
    let mut conj_count = 0usize;
    let mut conj_fail = Vec::new();
    let mut bounded_count = 0usize;
    let mut bounded_fail = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || i == k || j == k {
                    continue;
                }
                for m in -3i64..=3 {
                    let target = evaluate(&Word::from_atoms(
                        n,
                        vec![
                            Atom::elem(j, i, m),
                            Atom::elem(i, j, d as i64),
                            Atom::elem(j, i, -m),
                        ],
                    )?);
                    for variant in [MdmVariant::V1, MdmVariant::V2] {
                        if evaluate(&md_m_word(variant, n, d, m, i, j, k)?) == target {
                            conj_count += 1;
                        } else {
                            conj_fail.push(format!("{variant:?} m={m} ({i},{j},{k})"));
                        }
                    }
                }
                for (case, m_exp) in [(BoundedCase::Square, 2i64), (BoundedCase::Inverse, -1)] {
                    let target = evaluate(&Word::from_atoms(
                        n,
                        vec![
                            Atom::elem(j, i, m_exp),
                            Atom::elem(i, j, d as i64),
                            Atom::elem(j, i, -m_exp),
                        ],
                    )?);
                    if evaluate(&bounded_conj_word(case, n, d, i, j, k)?) == target {
                        bounded_count += 1;
                    } else {
                        bounded_fail.push(format!("{case:?} ({i},{j},{k})"));
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        format!("identities/n={n}/d={d}/conjugated-generator"),
        conj_fail.is_empty(),
        if conj_fail.is_empty() {
            format!("{conj_count} instances")
        } else {
            format!("failures: {conj_fail:?}")
        },
    ));
    checks.push(Check::new(
        format!("identities/n={n}/d={d}/bounded-conjugation"),
        bounded_fail.is_empty(),
        if bounded_fail.is_empty() {
            format!("{bounded_count} instances")
        } else {
            format!("failures: {bounded_fail:?}")
        },
    ));

    let mut closure_count = 0usize;
    let mut closure_fail = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for m in 0..=1i64 {
                for i2 in 1..=n {
                    for j2 in 1..=n {
                        if i2 == j2 {
                            continue;
                        }
                        for eps in [1i64, -1] {
                            let member = Word::from_atoms(
                                n,
                                vec![
                                    Atom::elem(j, i, m),
                                    Atom::elem(i, j, d as i64),
                                    Atom::elem(j, i, -m),
                                ],
                            )?;
                            let target = mat_mul(
                                &mat_mul(&e(n, i2, j2, eps), &evaluate(&member))?,
                                &e(n, i2, j2, -eps),
                            )?;
                            let cw = conjugate_rewrite(m, i, j, i2, j2, eps, n, d)?;
                            let flat = flatten_to_x2(&cw, d)?;
                            if cw.evaluate() == target
                                && flat.evaluate() == target
                                && is_x2_pure(&flat, d)
                            {
                                closure_count += 1;
                            } else {
                                closure_fail
                                    .push(format!("({i},{j}) m={m} by ({i2},{j2})^{eps}"));
                            }
                        }
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        format!("identities/n={n}/d={d}/conjugation-closure"),
        closure_fail.is_empty(),
        if closure_fail.is_empty() {
            format!("{closure_count} cases")
        } else {
            format!("failures: {closure_fail:?}")
        },
    ));
    Ok(checks)
}

/// Condensed run over every module, seeded and deterministic.
fn selftest_checks(seed: u64, budget: usize) -> Result<Vec<Check>, Error> {
    use congruence_kit::congruence::{is_member, GroupVariant};
    use rand::Rng;

    let mut checks = Vec::new();
    let mut rng = sample::rng(seed);

    // Relation grid at n = 3.
    let rel = relation_checks(3)?;
    let pass = rel.iter().all(|c| c.pass);
    checks.push(Check::new("relations/grid-n3", pass, "five families, n = 3"));

    // Identity grid at n = 3, d = 2.
    let idn = identity_checks(3, 2)?;
    let pass = idn.iter().all(|c| c.pass);
    checks.push(Check::new(
        "identities/grid-n3-d2",
        pass,
        "conjugated, bounded, closure",
    ));

    // Abelianization: homomorphism, kernel criterion, unit vectors.
    let (n, d) = (3usize, 2u64);
    let mut hom_ok = true;
    for _ in 0..200 {
        let x = sample::random_member(&mut rng, n, d, 6);
        let y = sample::random_member(&mut rng, n, d, 6);
        let lhs = abelianize(&mat_mul(&x, &y)?, d)?;
        let rhs = abel_add(&abelianize(&x, d)?, &abelianize(&y, d)?)?;
        hom_ok &= lhs == rhs;
    }
    checks.push(Check::new(
        "abelianization/homomorphism",
        hom_ok,
        "200 pairs at (n,d) = (3,2)",
    ));
    let mut ker_ok = true;
    for _ in 0..200 {
        let x = sample::random_member(&mut rng, 3, 3, 5);
        ker_ok &= abelianize(&x, 3)?.is_zero() == level(&x).divisible_by(9);
    }
    checks.push(Check::new(
        "abelianization/kernel",
        ker_ok,
        "200 words at (n,d) = (3,3)",
    ));
    let fam = gen_set(GenFamilyTag::XWithFk, 3, 2)?;
    let mut unit_ok = fam.members.len() == 8;
    let mut seen = std::collections::BTreeSet::new();
    for g in &fam.members {
        let phi = abelianize(&evaluate(&g.word), 2)?;
        let nz: Vec<(String, u64)> = phi.coordinates().filter(|(_, v)| *v != 0).collect();
        unit_ok &= nz.len() == 1 && nz[0].1 == 1;
        if let Some(first) = nz.first() {
            seen.insert(first.0.clone());
        }
    }
    unit_ok &= seen.len() == 8;
    checks.push(Check::new(
        "abelianization/unit-vectors",
        unit_ok,
        "8 generators at (n,d) = (3,2)",
    ));

    // Commutator level growth.
    let mut comm_ok = true;
    for _ in 0..100 {
        let x = sample::random_member(&mut rng, 3, 2, 5);
        let y = sample::random_member(&mut rng, 3, 3, 5);
        comm_ok &= level(&commutator(&x, &y)?).divisible_by(6);
    }
    checks.push(Check::new(
        "commutator/level-product",
        comm_ok,
        "100 pairs, levels (2,3) at n = 3",
    ));

    // Two-by-two decomposition roundtrip.
    let mut dec_ok = true;
    for dd in 3u64..=6 {
        let fam = gen_set(GenFamilyTag::SolverD, 2, dd)?;
        for _ in 0..20 {
            let mut a = BigIntMatrix::identity(2);
            for _ in 0..8 {
                let pick = rng.gen_range(0..fam.members.len());
                let w = if rng.gen_bool(0.5) {
                    fam.members[pick].word.clone()
                } else {
                    invert_word(&fam.members[pick].word)
                };
                a = mat_mul(&a, &evaluate(&w))?;
            }
            let dec = decompose2(&a, dd)?;
            dec_ok &= evaluate(&dec.word) == a
                && dec.factors.iter().all(|(l, _)| fam.member(l).is_some());
        }
    }
    checks.push(Check::new(
        "decompose/roundtrip",
        dec_ok,
        "20 random products per level 3..6",
    ));

    // Presentations and rewriting.
    let mut pres_ok = true;
    for nn in 2..=3usize {
        pres_ok &= verify_relators(&relators_gamma2hat(nn)?).all_identity;
        pres_ok &= verify_relators(&relators_gamma2(nn)?).all_identity;
    }
    checks.push(Check::new(
        "presentation/relators",
        pres_ok,
        "both sides, n = 2..3",
    ));
    let mut rs_ok = true;
    for _ in 0..100 {
        let w = sample::random_hat_word(&mut rng, 3, 20);
        let rewritten = rs_rewrite(3, &w)?;
        rs_ok &= evaluate(&sub_word(3, &rewritten)?) == evaluate(&hat_word(3, &w)?);
    }
    checks.push(Check::new(
        "presentation/rewriting",
        rs_ok,
        "100 determinant-1 words at n = 3",
    ));
    let (lhs, rhs) = derived_relator_words(3, 2, 3)?;
    checks.push(Check::new(
        "presentation/derived-relator",
        evaluate(&lhs) == evaluate(&rhs),
        "n = 3, (j,k) = (2,3)",
    ));

    // Quotients.
    let t = enumerate_image(3, 1, 2, budget)?;
    checks.push(Check::new(
        "quotient/full-mod-2",
        t.order() == 168 && t.elements == filter_enumerate(3, 1, 2)?,
        "order 168, matches filter enumeration",
    ));
    let t = enumerate_image(3, 2, 4, budget)?;
    checks.push(Check::new(
        "quotient/tower-2-4",
        t.order() == 256 && abelian_structure(&t)?.factors == vec![2; 8],
        "order 256, factors (2)^8",
    ));
    let r = verify_quotient_claims(2, 2, 3, budget)?;
    checks.push(Check::new(
        "quotient/claims-2-3-at-n2",
        r.all_pass && r.orders["image(2,1,6)"] == 144,
        "coprime levels at n = 2, |SL(2;Z/6)| = 144",
    ));

    // Negative controls.
    let mut rs = relators_gamma2(3)?;
    let mut w = rs[0].word.clone();
    w.push(Atom::elem(1, 2, 1));
    rs[0].word = w;
    let not_member = BigIntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]])
        .expect("static matrix");
    let neg_ok = !verify_relators(&rs).all_identity
        && matches!(decompose2(&not_member, 3), Err(Error::NotMember(_)))
        && matches!(
            decompose2(&e(2, 1, 2, 7), 7),
            Err(Error::Unsupported(_))
        )
        && !is_member(&not_member, 2, GroupVariant::Sl)?;
    checks.push(Check::new(
        "negative/error-classes",
        neg_ok,
        "corrupted relator, non-member, unsupported level",
    ));

    // Solver soundness on conjugates.
    let mut conj_ok = true;
    for _ in 0..10 {
        let g = sample::random_sl_element(&mut rng, 2, 5);
        let x = mat_mul(&mat_mul(&g, &e(2, 1, 2, 4))?, &mat_inv(&g)?)?;
        let dec = decompose2(&x, 4)?;
        conj_ok &= evaluate(&dec.word) == x;
    }
    checks.push(Check::new(
        "decompose/conjugates",
        conj_ok,
        "10 random conjugates at level 4",
    ));

    Ok(checks)
}
