//! Command-line front end: group-spec parsing, the map file format, and the
//! subcommand implementations. Output is deterministic byte for byte; the
//! binary in `main.rs` only maps results onto exit codes.

pub mod spec;
pub mod wire;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use abpair::oracle::{
    verify_bil_hom_count, verify_nondeg_theorems, verify_pairing_counts,
    verify_universal_property, CountBounds, NondegBounds, UniversalBounds, VerificationReport,
};
use abpair::{
    canonical_map, canonical_nondeg_fastpath, count_pairings_cyclic, dual_group, duality_pairing,
    realize_in_prime_field, tensor_product, BilinearMap, DEFAULT_MAX_ENUM,
};
use spec::parse_group_spec;
use wire::WireMap;

#[derive(Debug, Parser)]
#[command(
    name = "abpair",
    version,
    about = "Tensor products, bilinear maps, and pairings of finite abelian groups"
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Ceiling on exhaustive enumerations; overrides ABPAIR_MAX_ENUM
    #[arg(long, global = true)]
    pub max_enum: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tensor product of two groups, with cell index map and canonical grid
    Tensor { a: String, b: String },
    /// Left/right non-degeneracy of the canonical map or a map file
    Nondeg {
        a: String,
        b: String,
        /// "canonical" or a path to a map file
        #[arg(long, default_value = "canonical")]
        map: String,
    },
    /// Census of pairings Z_a x Z_a -> Z_a
    Pairings {
        a: u64,
        /// Also list the scale factors k
        #[arg(long)]
        list: bool,
    },
    /// Divide the kernels out of a map file's sides
    Quotient { file: PathBuf },
    /// Character dual and the duality pairing
    Dual {
        a: String,
        /// Cyclic target modulus (default: the exponent of A)
        #[arg(long = "N", value_name = "N")]
        modulus: Option<u64>,
        /// Realize the pairing multiplicatively inside F_p
        #[arg(long, value_name = "P")]
        realize_prime: Option<u64>,
    },
    /// Run the brute-force verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Comma-separated key=value overrides, e.g. side-max=10,target-max=8
        #[arg(long)]
        bounds: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Counts,
    Nondeg,
    Universal,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input; exit code 2.
    Usage(String),
    /// An enumeration ceiling was hit; exit code 3.
    Resource(String),
}

impl From<abpair::Error> for CliError {
    fn from(e: abpair::Error) -> Self {
        if e.is_resource_limit() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<spec::SpecError> for CliError {
    fn from(e: spec::SpecError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn effective_max_enum(cli: &Cli) -> Result<u64, CliError> {
    if let Some(v) = cli.max_enum {
        return Ok(v);
    }
    match std::env::var("ABPAIR_MAX_ENUM") {
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Usage(format!("ABPAIR_MAX_ENUM must be an integer, got {s:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_ENUM),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(CliError::Usage("ABPAIR_MAX_ENUM is not valid UTF-8".into()))
        }
    }
}

/// Run one command, writing its report into `out`. `Ok(false)` is the
/// mathematical "no" (degenerate map, failed verification), exit code 1.
pub fn run(cli: &Cli, out: &mut String) -> Result<bool, CliError> {
    let max_enum = effective_max_enum(cli)?;
    match &cli.command {
        Command::Tensor { a, b } => cmd_tensor(a, b, cli.json, out),
        Command::Nondeg { a, b, map } => cmd_nondeg(a, b, map, cli.json, max_enum, out),
        Command::Pairings { a, list } => cmd_pairings(*a, *list, cli.json, max_enum, out),
        Command::Quotient { file } => cmd_quotient(file, cli.json, max_enum, out),
        Command::Dual {
            a,
            modulus,
            realize_prime,
        } => cmd_dual(a, *modulus, *realize_prime, cli.json, max_enum, out),
        Command::Verify { suite, bounds } => {
            cmd_verify(*suite, bounds.as_deref(), cli.json, max_enum, out)
        }
    }
}

fn grid_coords(f: &BilinearMap) -> Vec<Vec<Vec<u64>>> {
    f.grid()
        .iter()
        .map(|row| row.iter().map(|cell| cell.coords().to_vec()).collect())
        .collect()
}

fn emit_json<T: Serialize>(value: &T, out: &mut String) {
    out.push_str(&serde_json::to_string(value).expect("reports serialize"));
    out.push('\n');
}

fn cmd_tensor(a: &str, b: &str, json: bool, out: &mut String) -> Result<bool, CliError> {
    let ga = parse_group_spec(a)?;
    let gb = parse_group_spec(b)?;
    let t = tensor_product(&ga, &gb);
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            left: &'a [u64],
            right: &'a [u64],
            product: &'a [u64],
            cells: &'a [(usize, usize)],
            grid: Vec<Vec<Vec<u64>>>,
        }
        emit_json(
            &Out {
                left: ga.factors(),
                right: gb.factors(),
                product: t.product().factors(),
                cells: t.cells(),
                grid: grid_coords(t.canonical()),
            },
            out,
        );
    } else {
        writeln!(out, "{}", t.product()).unwrap();
        for (k, &(i, j)) in t.cells().iter().enumerate() {
            writeln!(out, "cell ({i},{j}) -> t{k} [gcd {}]", t.product().factors()[k]).unwrap();
        }
        for i in 0..ga.arity() {
            for j in 0..gb.arity() {
                writeln!(out, "grid ({i},{j}) = {}", t.canonical().cell(i, j)).unwrap();
            }
        }
    }
    Ok(true)
}

fn load_map(path: &str) -> Result<BilinearMap, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let w: WireMap =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    Ok(w.into_map()?)
}

fn yes_no(nondeg: bool) -> &'static str {
    if nondeg {
        "non-degenerate"
    } else {
        "degenerate"
    }
}

fn cmd_nondeg(
    a: &str,
    b: &str,
    map: &str,
    json: bool,
    max_enum: u64,
    out: &mut String,
) -> Result<bool, CliError> {
    let ga = parse_group_spec(a)?;
    let gb = parse_group_spec(b)?;
    let f = if map == "canonical" {
        canonical_map(&ga, &gb)
    } else {
        let f = load_map(map)?;
        if f.left() != &ga || f.right() != &gb {
            return Err(CliError::Usage(format!(
                "{map} pairs {} with {}, arguments say {} and {}",
                f.left(),
                f.right(),
                ga,
                gb
            )));
        }
        f
    };
    let shortcut = if f.is_canonical() {
        canonical_nondeg_fastpath(&ga, &gb)
    } else {
        None
    };
    let left_nd = f.is_left_nondegenerate(max_enum)?;
    let right_nd = f.is_right_nondegenerate(max_enum)?;
    let (verdict, method) = match shortcut {
        Some((v, rule)) => (v, format!("shortcut: {rule}")),
        None => (left_nd && right_nd, "enumeration".to_string()),
    };
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            left: &'a [u64],
            right: &'a [u64],
            target: &'a [u64],
            left_nondegenerate: bool,
            right_nondegenerate: bool,
            pairing: bool,
            method: &'a str,
        }
        emit_json(
            &Out {
                left: f.left().factors(),
                right: f.right().factors(),
                target: f.target().factors(),
                left_nondegenerate: left_nd,
                right_nondegenerate: right_nd,
                pairing: verdict,
                method: &method,
            },
            out,
        );
    } else {
        writeln!(out, "left: {}", yes_no(left_nd)).unwrap();
        writeln!(out, "right: {}", yes_no(right_nd)).unwrap();
        writeln!(out, "verdict: {}", if verdict { "pairing" } else { "degenerate" }).unwrap();
        writeln!(out, "method: {method}").unwrap();
    }
    Ok(verdict)
}

fn cmd_pairings(
    a: u64,
    list: bool,
    json: bool,
    max_enum: u64,
    out: &mut String,
) -> Result<bool, CliError> {
    if a == 0 {
        return Err(CliError::Usage("a must be at least 1".into()));
    }
    let count = count_pairings_cyclic(a);
    let scales: Option<Vec<u64>> = if list {
        if a > max_enum {
            return Err(CliError::Resource(format!(
                "listing scale factors walks {a} candidates, over the cap {max_enum}"
            )));
        }
        Some((0..a).filter(|&k| gcd(k, a) == 1).collect())
    } else {
        None
    };
    if json {
        #[derive(Serialize)]
        struct Out {
            a: u64,
            count: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            scales: Option<Vec<u64>>,
        }
        emit_json(&Out { a, count, scales }, out);
    } else {
        writeln!(out, "{count}").unwrap();
        if let Some(ks) = scales {
            let rendered: Vec<String> = ks.iter().map(u64::to_string).collect();
            writeln!(out, "scales: {}", rendered.join(" ")).unwrap();
        }
    }
    Ok(true)
}

fn coords_list(elements: &[abpair::GroupElement]) -> Vec<Vec<u64>> {
    elements.iter().map(|e| e.coords().to_vec()).collect()
}

fn render_elements(elements: &[abpair::GroupElement]) -> String {
    let parts: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
    parts.join(" ")
}

fn cmd_quotient(
    file: &PathBuf,
    json: bool,
    max_enum: u64,
    out: &mut String,
) -> Result<bool, CliError> {
    let f = load_map(&file.display().to_string())?;
    let kernels = f.kernels(max_enum)?;
    let q = f.quotient_pairing(max_enum)?;
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            kernel_left: Vec<Vec<u64>>,
            kernel_right: Vec<Vec<u64>>,
            quotient_left: &'a [u64],
            left_representatives: Vec<Vec<u64>>,
            quotient_right: &'a [u64],
            right_representatives: Vec<Vec<u64>>,
            induced: WireMap,
        }
        emit_json(
            &Out {
                kernel_left: coords_list(kernels.left()),
                kernel_right: coords_list(kernels.right()),
                quotient_left: q.quotient_left().factors(),
                left_representatives: coords_list(q.left_representatives()),
                quotient_right: q.quotient_right().factors(),
                right_representatives: coords_list(q.right_representatives()),
                induced: WireMap::from_map(q.induced()),
            },
            out,
        );
    } else {
        writeln!(out, "left kernel [{}]: {}", kernels.left().len(), render_elements(kernels.left())).unwrap();
        writeln!(out, "right kernel [{}]: {}", kernels.right().len(), render_elements(kernels.right())).unwrap();
        writeln!(out, "quotient left: {}", q.quotient_left()).unwrap();
        writeln!(out, "left reps: {}", render_elements(q.left_representatives())).unwrap();
        writeln!(out, "quotient right: {}", q.quotient_right()).unwrap();
        writeln!(out, "right reps: {}", render_elements(q.right_representatives())).unwrap();
        for i in 0..q.quotient_left().arity() {
            for j in 0..q.quotient_right().arity() {
                writeln!(out, "grid ({i},{j}) = {}", q.induced().cell(i, j)).unwrap();
            }
        }
    }
    Ok(true)
}

fn cmd_dual(
    a: &str,
    modulus: Option<u64>,
    realize_prime: Option<u64>,
    json: bool,
    max_enum: u64,
    out: &mut String,
) -> Result<bool, CliError> {
    let g = parse_group_spec(a)?;
    let n = modulus.unwrap_or_else(|| g.exponent());
    let dual = dual_group(&g, n)?;
    let f = duality_pairing(&g, n)?;
    let table = match realize_prime {
        Some(p) => Some(realize_in_prime_field(&f, p, max_enum)?),
        None => None,
    };
    if json {
        #[derive(Serialize)]
        struct Realization {
            prime: u64,
            generator: u64,
            table: Vec<Vec<u64>>,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            group: &'a [u64],
            modulus: u64,
            characters: u128,
            grid: Vec<Vec<Vec<u64>>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            realization: Option<Realization>,
        }
        emit_json(
            &Out {
                group: dual.presentation().factors(),
                modulus: n,
                characters: g.order(),
                grid: grid_coords(&f),
                realization: table.map(|t| {
                    let cols = t.right().order() as usize;
                    Realization {
                        prime: t.realization().prime(),
                        generator: t.realization().generator(),
                        table: t.values().chunks(cols.max(1)).map(<[u64]>::to_vec).collect(),
                    }
                }),
            },
            out,
        );
    } else {
        writeln!(out, "{}", dual.presentation()).unwrap();
        writeln!(out, "modulus: {n}").unwrap();
        writeln!(out, "characters: {}", g.order()).unwrap();
        for i in 0..g.arity() {
            for j in 0..g.arity() {
                writeln!(out, "grid ({i},{j}) = {}", f.cell(i, j)).unwrap();
            }
        }
        if let Some(t) = table {
            writeln!(out, "prime: {}", t.realization().prime()).unwrap();
            writeln!(out, "generator: {}", t.realization().generator()).unwrap();
            let cols = t.right().order() as usize;
            for (i, row) in t.values().chunks(cols.max(1)).enumerate() {
                let rendered: Vec<String> = row.iter().map(u64::to_string).collect();
                writeln!(out, "row {i}: {}", rendered.join(" ")).unwrap();
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Default)]
struct BoundsOverrides {
    side_max: Option<u64>,
    target_min: Option<u64>,
    target_max: Option<u64>,
    factors: Option<Vec<u64>>,
    cyclic_max: Option<u64>,
    square_max: Option<u64>,
    mixed_max: Option<u64>,
    unequal_side_max: Option<u64>,
    unequal_target_max: Option<u64>,
    census_max: Option<u64>,
}

fn parse_bounds(text: Option<&str>) -> Result<BoundsOverrides, CliError> {
    let mut o = BoundsOverrides::default();
    let Some(text) = text else { return Ok(o) };
    let number = |v: &str| -> Result<u64, CliError> {
        v.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bounds value {v:?} is not an integer")))
    };
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((k, v)) = part.split_once('=') else {
            return Err(CliError::Usage(format!(
                "bounds entry {part:?} is not key=value"
            )));
        };
        match k.trim() {
            "side-max" => o.side_max = Some(number(v)?),
            "target-min" => o.target_min = Some(number(v)?),
            "target-max" => o.target_max = Some(number(v)?),
            "factors" => {
                o.factors = Some(
                    v.split(':')
                        .map(|x| number(x))
                        .collect::<Result<Vec<u64>, CliError>>()?,
                )
            }
            "cyclic-max" => o.cyclic_max = Some(number(v)?),
            "square-max" => o.square_max = Some(number(v)?),
            "mixed-max" => o.mixed_max = Some(number(v)?),
            "unequal-side-max" => o.unequal_side_max = Some(number(v)?),
            "unequal-target-max" => o.unequal_target_max = Some(number(v)?),
            "census-max" => o.census_max = Some(number(v)?),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown bounds key {other:?} (known: side-max, target-min, target-max, \
                     factors, cyclic-max, square-max, mixed-max, unequal-side-max, \
                     unequal-target-max, census-max)"
                )))
            }
        }
    }
    Ok(o)
}

fn cmd_verify(
    suite: Suite,
    bounds: Option<&str>,
    json: bool,
    max_enum: u64,
    out: &mut String,
) -> Result<bool, CliError> {
    let o = parse_bounds(bounds)?;
    let mut reports: Vec<VerificationReport> = Vec::new();
    if matches!(suite, Suite::All | Suite::Counts) {
        let mut cb = CountBounds {
            max_enum,
            ..CountBounds::default()
        };
        if let Some(v) = o.side_max {
            cb.side_max = v;
        }
        if let Some(v) = o.target_min {
            cb.target_min = v;
        }
        if let Some(v) = o.target_max {
            cb.target_max = v;
        }
        if let Some(fs) = &o.factors {
            cb.factor_set = Some(fs.clone());
        }
        reports.push(verify_bil_hom_count(&cb)?);
        reports.push(verify_pairing_counts(o.census_max.unwrap_or(30))?);
    }
    if matches!(suite, Suite::All | Suite::Universal) {
        let mut ub = UniversalBounds {
            max_enum,
            ..UniversalBounds::default()
        };
        if let Some(v) = o.side_max {
            ub.side_max = v;
        }
        if let Some(v) = o.target_max {
            ub.target_max = v;
        }
        reports.push(verify_universal_property(&ub)?);
    }
    if matches!(suite, Suite::All | Suite::Nondeg) {
        let mut nb = NondegBounds {
            max_enum,
            ..NondegBounds::default()
        };
        if let Some(v) = o.cyclic_max {
            nb.cyclic_max = v;
        }
        if let Some(v) = o.square_max {
            nb.square_max = v;
        }
        if let Some(v) = o.mixed_max {
            nb.mixed_max = v;
        }
        if let Some(v) = o.unequal_side_max {
            nb.unequal_side_max = v;
        }
        if let Some(v) = o.unequal_target_max {
            nb.unequal_target_max = v;
        }
        reports.extend(verify_nondeg_theorems(&nb)?);
    }
    let all_passed = reports.iter().all(VerificationReport::passed);
    if json {
        #[derive(Serialize)]
        struct ReportOut<'a> {
            claim: &'a str,
            instances: u64,
            failures: &'a [String],
        }
        #[derive(Serialize)]
        struct Out<'a> {
            reports: Vec<ReportOut<'a>>,
        }
        emit_json(
            &Out {
                reports: reports
                    .iter()
                    .map(|r| ReportOut {
                        claim: r.claim_id(),
                        instances: r.instances_checked(),
                        failures: r.failures(),
                    })
                    .collect(),
            },
            out,
        );
    } else {
        for r in &reports {
            if r.passed() {
                writeln!(out, "{}: pass ({} instances)", r.claim_id(), r.instances_checked())
                    .unwrap();
            } else {
                writeln!(
                    out,
                    "{}: FAIL ({} instances, {} counterexamples)",
                    r.claim_id(),
                    r.instances_checked(),
                    r.failures().len()
                )
                .unwrap();
                for failure in r.failures() {
                    writeln!(out, "  {failure}").unwrap();
                }
            }
        }
    }
    Ok(all_passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<(bool, String), CliError> {
        let cli = Cli::try_parse_from(args).expect("test arguments parse");
        let mut out = String::new();
        run(&cli, &mut out).map(|ok| (ok, out))
    }

    #[test]
    fn tensor_reports_the_product_first() {
        let (ok, out) = run_args(&["abpair", "tensor", "Z6", "Z4"]).unwrap();
        assert!(ok);
        assert_eq!(out.lines().next(), Some("Z2"));
        assert!(out.contains("cell (0,0) -> t0 [gcd 2]"));
        assert!(out.contains("grid (0,0) = (1)"));
    }

    #[test]
    fn tensor_of_coprime_groups_is_trivial() {
        let (ok, out) = run_args(&["abpair", "tensor", "Z2", "Z3"]).unwrap();
        assert!(ok);
        assert_eq!(out.lines().next(), Some("Z1"));
    }

    #[test]
    fn nondeg_uses_the_shortcut_on_canonical_maps() {
        let (ok, out) = run_args(&["abpair", "nondeg", "Z4", "Z2"]).unwrap();
        assert!(!ok);
        assert!(out.contains("left: degenerate"));
        assert!(out.contains("right: non-degenerate"));
        assert!(out.contains("verdict: degenerate"));
        assert!(out.contains("method: shortcut: 2-primary exponents differ"));

        let (ok, out) = run_args(&["abpair", "nondeg", "Z6", "Z6"]).unwrap();
        assert!(ok);
        assert!(out.contains("verdict: pairing"));
        assert!(out.contains("method: shortcut: primary components are isomorphic"));
    }

    #[test]
    fn pairings_counts_and_lists() {
        let (ok, out) = run_args(&["abpair", "pairings", "6", "--list"]).unwrap();
        assert!(ok);
        assert_eq!(out, "2\nscales: 1 5\n");
        let (_, json) = run_args(&["abpair", "--json", "pairings", "6"]).unwrap();
        assert_eq!(json, "{\"a\":6,\"count\":2}\n");
    }

    #[test]
    fn bounds_parser_accepts_known_keys_and_rejects_others() {
        let o = parse_bounds(Some("side-max=10, factors=2:3:4 ,census-max=7")).unwrap();
        assert_eq!(o.side_max, Some(10));
        assert_eq!(o.factors, Some(vec![2, 3, 4]));
        assert_eq!(o.census_max, Some(7));
        assert!(parse_bounds(Some("sides=3")).is_err());
        assert!(parse_bounds(Some("side-max")).is_err());
        assert!(parse_bounds(Some("side-max=x")).is_err());
    }

    #[test]
    fn verify_scales_down_through_bounds() {
        let (ok, out) = run_args(&[
            "abpair",
            "verify",
            "--suite",
            "counts",
            "--bounds",
            "side-max=4,target-max=3,census-max=6",
        ])
        .unwrap();
        assert!(ok);
        assert!(out.contains("counts: pass"));
        assert!(out.contains("pairing-census: pass (6 instances)"));
    }

    #[test]
    fn max_enum_flag_turns_overflow_into_resource_errors() {
        let err = run_args(&["abpair", "--max-enum", "3", "pairings", "9", "--list"]).unwrap_err();
        assert!(matches!(err, CliError::Resource(_)));
    }
}
