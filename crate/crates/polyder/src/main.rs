use std::io::Read;
use std::process::exit;

use polyder::cli::{self, CliOptions, Command, OutputFormat};

const USAGE: &str = "\
polyder — exact computations in the Lie algebra of derivations of a
polynomial algebra: brackets, gradings, kernels, slices, and automorphism
recovery.

Usage: polyder <COMMAND> [ARGS]... -n <int> [OPTIONS]

Commands:
  bracket <A> <B>             Lie bracket of two derivations
  apply <D> <P>               apply a derivation to a polynomial
  grade <D>                   split a derivation into graded components
  jacobian <S>                Jacobian matrix of an endomorphism
  det <S>                     Jacobian determinant of an endomorphism
  invert <S>                  exact inverse within the degree bound
  conjugate <S> <D>           conjugate a derivation by an automorphism
  lnd-check <D>               check local nilpotence on the generators
  kernel <D>                  bounded-degree kernel basis
  common-kernel <D1> [D2]...  bounded-degree common kernel basis
  slice <D> [--seed <P>]      find an element the derivation maps to 1
  recover <D1> ... <Dn>       recover the automorphism dual to the inputs
  roundtrip <S>               conjugate the frame, recover, compare to input
  verify-lemmas               run the bounded-degree structure checks

Options:
  -n, --nvars <int>    number of variables (required)
      --max-deg <int>  degree bound for kernels and inverses [default: 8]
      --cap <int>      iteration cap for nilpotency and slices [default: 32]
      --format <fmt>   output format: text or json [default: text]
      --retry-doubling on a degree-bound failure, double --max-deg (twice)
  -h, --help           print this help
  -V, --version        print the version

Expressions use indexed variables and partials: \"x1^2*x2 - 1/2\",
\"d1 + x1*d2\", \"x1 -> x1 + x2^2; x2 -> x2\". Pass - to read one
expression from stdin.
";

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    eprintln!("run 'polyder --help' for usage");
    exit(cli::EXIT_USAGE);
}

struct Parsed {
    positionals: Vec<String>,
    seed: Option<String>,
    nvars: Option<usize>,
    max_deg: u32,
    cap: u32,
    format: OutputFormat,
    retry_doubling: bool,
}

fn parse_args(argv: &[String]) -> Parsed {
    let mut parsed = Parsed {
        positionals: Vec::new(),
        seed: None,
        nvars: None,
        max_deg: 8,
        cap: 32,
        format: OutputFormat::Text,
        retry_doubling: false,
    };
    let mut it = argv.iter().peekable();
    let mut rest_positional = false;
    while let Some(arg) = it.next() {
        if rest_positional {
            parsed.positionals.push(arg.clone());
            continue;
        }
        let (flag, inline) = match arg.split_once('=') {
            Some((f, v)) if f.starts_with('-') => (f.to_string(), Some(v.to_string())),
            _ => (arg.clone(), None),
        };
        let mut value = |name: &str| -> String {
            inline.clone().unwrap_or_else(|| {
                it.next()
                    .unwrap_or_else(|| usage_error(&format!("{name} needs a value")))
                    .clone()
            })
        };
        match flag.as_str() {
            "-n" | "--nvars" => {
                let v = value("-n");
                match v.parse::<usize>() {
                    Ok(n) if n >= 1 => parsed.nvars = Some(n),
                    _ => usage_error(&format!("invalid variable count '{v}'")),
                }
            }
            "--max-deg" => {
                let v = value("--max-deg");
                parsed.max_deg = v
                    .parse()
                    .unwrap_or_else(|_| usage_error(&format!("invalid degree bound '{v}'")));
            }
            "--cap" => {
                let v = value("--cap");
                parsed.cap = v
                    .parse()
                    .unwrap_or_else(|_| usage_error(&format!("invalid cap '{v}'")));
            }
            "--format" => {
                parsed.format = match value("--format").as_str() {
                    "text" => OutputFormat::Text,
                    "json" => OutputFormat::Json,
                    other => usage_error(&format!("unknown format '{other}' (text or json)")),
                };
            }
            "--seed" => parsed.seed = Some(value("--seed")),
            "--retry-doubling" => parsed.retry_doubling = true,
            "-h" | "--help" => {
                print!("{USAGE}");
                exit(0);
            }
            "-V" | "--version" => {
                println!("polyder {}", env!("CARGO_PKG_VERSION"));
                exit(0);
            }
            "--" => rest_positional = true,
            // anything else is an expression or command name; expressions
            // may legitimately begin with '-', e.g. "-2*x2*d1 + d2"
            _ => parsed.positionals.push(arg.clone()),
        }
    }
    parsed
}

fn stdin_text() -> String {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .unwrap_or_else(|e| usage_error(&format!("failed to read stdin: {e}")));
    buf.trim().to_string()
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() {
        print!("{USAGE}");
        exit(cli::EXIT_USAGE);
    }
    let parsed = parse_args(&argv);
    let mut args = parsed.positionals.clone().into_iter();
    let name = args
        .next()
        .unwrap_or_else(|| usage_error("missing command"));

    // `-` placeholders read stdin (once)
    let mut stdin_cache: Option<String> = None;
    let mut expand = |s: String| -> String {
        if s == "-" {
            stdin_cache.get_or_insert_with(stdin_text).clone()
        } else {
            s
        }
    };
    let mut rest: Vec<String> = args.map(&mut expand).collect();
    let seed = parsed.seed.clone().map(&mut expand);

    let arity = |rest: &mut Vec<String>, count: usize| -> Vec<String> {
        if rest.len() != count {
            usage_error(&format!(
                "'{name}' takes {count} expression argument{}, got {}",
                if count == 1 { "" } else { "s" },
                rest.len()
            ));
        }
        std::mem::take(rest)
    };

    let command = match name.as_str() {
        "bracket" => {
            let mut a = arity(&mut rest, 2);
            let b = a.pop().unwrap();
            Command::Bracket { a: a.pop().unwrap(), b }
        }
        "apply" => {
            let mut a = arity(&mut rest, 2);
            let polynomial = a.pop().unwrap();
            Command::Apply { derivation: a.pop().unwrap(), polynomial }
        }
        "grade" => Command::Grade { derivation: arity(&mut rest, 1).pop().unwrap() },
        "jacobian" => Command::Jacobian { endo: arity(&mut rest, 1).pop().unwrap() },
        "det" => Command::Det { endo: arity(&mut rest, 1).pop().unwrap() },
        "invert" => Command::Invert { endo: arity(&mut rest, 1).pop().unwrap() },
        "conjugate" => {
            let mut a = arity(&mut rest, 2);
            let derivation = a.pop().unwrap();
            Command::Conjugate { endo: a.pop().unwrap(), derivation }
        }
        "lnd-check" => Command::LndCheck { derivation: arity(&mut rest, 1).pop().unwrap() },
        "kernel" => Command::Kernel { derivation: arity(&mut rest, 1).pop().unwrap() },
        "common-kernel" => {
            if rest.is_empty() {
                usage_error("'common-kernel' needs at least one derivation");
            }
            Command::CommonKernel { derivations: std::mem::take(&mut rest) }
        }
        "slice" => Command::Slice {
            derivation: arity(&mut rest, 1).pop().unwrap(),
            seed,
        },
        "recover" => {
            if rest.is_empty() {
                usage_error("'recover' needs one derivation per variable");
            }
            Command::Recover { derivations: std::mem::take(&mut rest) }
        }
        "roundtrip" => Command::Roundtrip { endo: arity(&mut rest, 1).pop().unwrap() },
        "verify-lemmas" => {
            arity(&mut rest, 0);
            Command::VerifyLemmas
        }
        other => usage_error(&format!("unknown command '{other}'")),
    };

    let Some(nvars) = parsed.nvars else {
        usage_error("-n <int> is required");
    };
    let opts = CliOptions {
        nvars,
        max_deg: parsed.max_deg,
        cap: parsed.cap,
        format: parsed.format,
        retry_doubling: parsed.retry_doubling,
    };
    let outcome = cli::run(&command, &opts);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    exit(outcome.exit_code);
}
