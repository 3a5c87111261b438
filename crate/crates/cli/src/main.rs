mod parse;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fermat_descent::decimal::rational;
use fermat_descent::group::{j_matrix, m_matrix, weight_vector};
use fermat_descent::quartic::{
    belyi_eval, rational_points_bounded, sieve_442, torsion_points, twist_curve, SieveOptions,
};
use fermat_descent::smith::invariant_factors;
use fermat_descent::stack::stack_point_automorphism_order;
use fermat_descent::{
    bad_prime_set, classify_signature, enumerate_primitive_solutions, euler_characteristic,
    h_structure, is_stack_point, j_map, recover_solutions, s_unit_reps, smith_normal_form,
    triangle_abelianization, verify_descent_inclusion, CurvePointQ, EnumerationOptions, Error,
    GfeZ, IntMatrixZ, Integer, PrimitiveSolutionZ, Signature, WorkLimits,
};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

const WORK_CAP_ENV: &str = "FERMAT_DESCENT_WORK_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "fermat-descent",
    version,
    about = "Generalized Fermat equations, Belyi stack points and quartic twist descent"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Iteration cap for Pollard rho during factorization.
    #[arg(long, env = WORK_CAP_ENV, global = true)]
    work_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form U·A·V = D of an integer matrix.
    Snf {
        /// Rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Structure of the group H and the abelianized triangle group.
    GroupStructure {
        #[arg(long)]
        signature: String,
    },
    /// Weight vector of a signature.
    Weights {
        #[arg(long)]
        signature: String,
    },
    /// Unit classes of Z[1/S] modulo n-th powers.
    H1 {
        /// Comma-separated primes; empty for Z.
        #[arg(long, default_value = "")]
        primes: String,
        #[arg(long)]
        n: u32,
    },
    /// Stack-point test for a point of the projective line.
    StackPoint {
        /// `s/t`, `s:t`, an integer, or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        signature: String,
        #[arg(long, default_value = "")]
        primes: String,
    },
    /// Euler characteristic 1/a + 1/b + 1/c - 1.
    Chi {
        #[arg(long)]
        signature: String,
    },
    /// Spherical, Euclidean or hyperbolic, with genus and degree.
    Classify {
        #[arg(long)]
        signature: String,
    },
    /// Primitive solutions with max(|x|,|y|,|z|) <= bound.
    Enumerate {
        #[arg(long)]
        signature: String,
        /// Coefficients A,B,C.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        bound: u64,
        /// Disable the modular pre-sieve.
        #[arg(long)]
        no_sieve: bool,
    },
    /// Image (-A x^a : C z^c) of a solution.
    Jmap {
        #[arg(long)]
        signature: String,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// x,y,z
        #[arg(long, allow_hyphen_values = true)]
        sol: String,
    },
    /// Solutions lying over a stack point.
    Recover {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        signature: String,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Defaults to the primes dividing abc·ABC.
        #[arg(long)]
        primes: Option<String>,
        /// Also report solutions with unit-adjusted coefficients.
        #[arg(long)]
        search_units: bool,
    },
    /// Checks that every solution in the box maps to a stack point.
    VerifyInclusion {
        #[arg(long)]
        signature: String,
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        bound: u64,
    },
    /// The quartic twist E_d and its Belyi map.
    Twist {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Affine point `u,v` (rationals allowed) to evaluate the map at.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Torsion of E_d, optionally with a bounded search for more points.
    Torsion {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long)]
        height: Option<u64>,
    },
    /// The covering, twisting and sieving pipeline for x^4 + y^4 = z^2.
    Sieve442 {
        /// Enumeration bound for the cross-check.
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Also feed points of non-admissible twists up to this height.
        #[arg(long)]
        height: Option<u64>,
    },
}

/// A successful run may still ask for a nonzero exit code.
struct Output {
    value: Value,
    exit: u8,
}

impl From<Value> for Output {
    fn from(value: Value) -> Self {
        Output { value, exit: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::WorkLimitExceeded { .. } => 2,
        Error::PipelineMismatch { .. } => 3,
        _ => 1,
    }
}

fn to_json<S: Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("outputs serialize")
}

/// Matrices print as nested rows rather than the flat serialized layout.
fn rows(m: &IntMatrixZ) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>())
        .collect()
}

fn signature(text: &str) -> Result<Signature, Error> {
    text.parse()
}

fn equation(sig: &str, coeffs: &str) -> Result<GfeZ, Error> {
    GfeZ::new(signature(sig)?, parse::triple(coeffs, "--coeffs")?)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let mut limits = WorkLimits::default();
    if let Some(cap) = cli.work_cap {
        limits.rho_iterations = cap;
    }
    let out: Output = match &cli.command {
        Command::Snf { matrix } => {
            let a = parse::matrix(matrix)?;
            let snf = smith_normal_form(&a);
            json!({
                "matrix": rows(&a),
                "u": rows(&snf.u),
                "d": rows(&snf.d),
                "v": rows(&snf.v),
                "diagonal": to_json(&snf.d.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>()),
                "rank": snf.rank().to_string(),
                "invariant_factors": to_json(&invariant_factors(&a)),
            })
            .into()
        }
        Command::GroupStructure { signature: s } => {
            let sig = signature(s)?;
            let diag = |m: IntMatrixZ| -> Vec<String> {
                smith_normal_form(&m).d.diagonal().iter().map(ToString::to_string).collect()
            };
            json!({
                "signature": to_json(&sig),
                "h": to_json(&h_structure::<Integer>(&sig)),
                "m_matrix_smith_diagonal": diag(m_matrix(&sig)),
                "triangle_abelianization": to_json(&triangle_abelianization::<Integer>(&sig)
                    .iter().map(ToString::to_string).collect::<Vec<_>>()),
                "j_matrix_smith_diagonal": diag(j_matrix(&sig)),
            })
            .into()
        }
        Command::Weights { signature: s } => {
            let sig = signature(s)?;
            json!({"signature": to_json(&sig), "weights": to_json(&weight_vector::<Integer>(&sig))}).into()
        }
        Command::H1 { primes, n } => {
            if *n < 2 {
                return Err(Error::InvalidInput("--n must be at least 2".into()));
            }
            let ring = parse::ring(primes)?;
            let g = s_unit_reps(&ring, *n);
            json!({
                "ring": ring.to_string(),
                "classes": g.len().to_string(),
                "unit_classes": to_json(&g),
            })
            .into()
        }
        Command::StackPoint { q, signature: s, primes } => {
            let (q, sig, ring) = (parse::point(q)?, signature(s)?, parse::ring(primes)?);
            let cert = is_stack_point(&q, &sig, &ring, &limits)?;
            let aut = if cert.accepted() {
                Some(stack_point_automorphism_order(&q, &sig, &ring, &limits)?.to_string())
            } else {
                None
            };
            json!({
                "signature": to_json(&sig),
                "ring": ring.to_string(),
                "accepted": cert.accepted(),
                "automorphisms": aut,
                "certificate": to_json(&cert),
            })
            .into()
        }
        Command::Chi { signature: s } => {
            let sig = signature(s)?;
            json!({
                "signature": to_json(&sig),
                "chi": rational::to_string(&euler_characteristic::<Integer>(&sig)),
            })
            .into()
        }
        Command::Classify { signature: s } => {
            let sig = signature(s)?;
            json!({"signature": to_json(&sig), "class": to_json(&classify_signature::<Integer>(&sig))}).into()
        }
        Command::Enumerate { signature: s, coeffs, bound, no_sieve } => {
            let f = equation(s, coeffs)?;
            let opts = EnumerationOptions {
                sieve: !no_sieve,
                ..EnumerationOptions::default()
            };
            let sols = enumerate_primitive_solutions(&f, *bound, &opts);
            json!({
                "equation": f.to_string(),
                "bound": bound.to_string(),
                "sieve": !no_sieve,
                "count": sols.len().to_string(),
                "solutions": to_json(&sols),
            })
            .into()
        }
        Command::Jmap { signature: s, coeffs, sol } => {
            let f = equation(s, coeffs)?;
            let [x, y, z] = parse::triple(sol, "--sol")?;
            let sol = PrimitiveSolutionZ::new(x, y, z);
            if !sol.is_primitive() {
                return Err(Error::InvalidInput(format!("{sol} is not primitive")));
            }
            if !f.evaluate(&sol.triple()).is_zero() {
                return Err(Error::InvalidInput(format!("{sol} does not solve {f}")));
            }
            let q = j_map(&f, &sol)?;
            json!({"equation": f.to_string(), "solution": to_json(&sol), "point": to_json(&q)}).into()
        }
        Command::Recover { q, signature: s, coeffs, primes, search_units } => {
            let f = equation(s, coeffs)?;
            let q = parse::point(q)?;
            let ring = match primes {
                Some(p) => parse::ring(p)?,
                None => bad_prime_set(&f, &limits)?,
            };
            let found = recover_solutions(&q, &f, &ring, *search_units, &limits)?;
            json!({
                "equation": f.to_string(),
                "point": to_json(&q),
                "ring": ring.to_string(),
                "recovered": to_json(&found),
            })
            .into()
        }
        Command::VerifyInclusion { signature: s, coeffs, bound } => {
            let f = equation(s, coeffs)?;
            let report = verify_descent_inclusion(&f, *bound, &EnumerationOptions::default(), &limits)?;
            let exit = if report.passed() { 0 } else { 3 };
            Output {
                value: json!({
                    "equation": f.to_string(),
                    "passed": report.passed(),
                    "report": to_json(&report),
                }),
                exit,
            }
        }
        Command::Twist { d, point } => {
            let e = twist_curve(parse::integer(d)?)?;
            let mut v = json!({
                "curve": to_json(&e),
                "equation": e.to_string(),
                "belyi_map": format!("(u:v:w) -> (u^2 : u^2 - ({})w^2)", e.d()),
            });
            if let Some(text) = point {
                let (u, w) = text
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidInput("--point needs u,v".into()))?;
                let p = CurvePointQ::affine(parse::rational(u)?, parse::rational(w)?);
                if !e.contains(&p) {
                    return Err(Error::NotOnCurve(p.to_string()));
                }
                v["point"] = to_json(&p);
                v["image"] = to_json(&belyi_eval(&e, &p));
            }
            v.into()
        }
        Command::Torsion { d, height } => {
            let e = twist_curve(parse::integer(d)?)?;
            let tors = torsion_points(&e)?;
            let entry = |p: &CurvePointQ| {
                json!({
                    "point": to_json(p),
                    "order": e.order(p, 12).map(|k| k.to_string()),
                    "image": to_json(&belyi_eval(&e, p)),
                })
            };
            let mut v = json!({
                "equation": e.to_string(),
                "order": tors.len().to_string(),
                "torsion": tors.iter().map(entry).collect::<Vec<_>>(),
            });
            if let Some(h) = height {
                let pts = rational_points_bounded(&e, *h);
                v["height"] = json!(h.to_string());
                v["bounded_points"] = json!(pts.iter().map(entry).collect::<Vec<_>>());
            }
            v.into()
        }
        Command::Sieve442 { bound, height } => {
            let opts = SieveOptions {
                nonadmissible_height: *height,
                ..SieveOptions::default()
            };
            let report = sieve_442::<Integer>(*bound, &opts, &limits)?;
            json!({
                "count": report.solutions.len().to_string(),
                "solutions": to_json(&report.solutions),
                "report": to_json(&report),
            })
            .into()
        }
    };
    Ok(out)
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error[io]: {e}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                emit(&e.to_string());
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            eprint!("error[invalid_input]: {}", msg.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.value).expect("valid json") + "\n",
                Format::Text => render::text(&out.value),
            };
            emit(&text);
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mismatch = Error::PipelineMismatch {
            sieve: "[]".into(),
            enumerated: "[]".into(),
        };
        assert_eq!(exit_code(&mismatch), 3);
        assert_eq!(exit_code(&Error::WorkLimitExceeded { value: "1".into() }), 2);
        assert_eq!(exit_code(&Error::ZeroCoefficient), 1);
    }

    #[test]
    fn arguments_are_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
