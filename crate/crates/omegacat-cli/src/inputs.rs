use std::fs;
use std::io::{self, Read};

use thiserror::Error;

use omegacat::parity::{
    parse_pcx, product, simplex_parity, simplex_parity_thin, suspension, ParityError, StratifiedParity,
};
use omegacat::stratified::{parse_spc, standard, Standard, StratError, StratifiedComplex};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Spc { path: String, source: StratError },
    #[error("{path}: {source}")]
    Pcx { path: String, source: ParityError },
}

/// Splits `name:1:2` into its name and numeric arguments, if it looks like a builtin.
fn builtin(spec: &str) -> Option<(&str, Vec<&str>)> {
    let mut parts = spec.split(':');
    let name = parts.next()?;
    let args: Vec<&str> = parts.collect();
    (!args.is_empty() && name.chars().all(|c| c.is_ascii_lowercase() || c == '_')).then_some((name, args))
}

fn numbers(spec: &str, args: &[&str], count: usize) -> Result<Vec<usize>, InputError> {
    let parsed: Option<Vec<usize>> = args.iter().map(|a| a.parse().ok()).collect();
    match parsed {
        Some(v) if v.len() == count => Ok(v),
        _ => Err(InputError::Usage(format!("builtin `{spec}` expects {count} numeric argument(s)"))),
    }
}

/// Reads a file, or standard input for `-`.
fn read(path: &str) -> Result<String, InputError> {
    let io = |source| InputError::Io { path: path.to_string(), source };
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io)?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(io)
}

/// A stratified simplicial set from `delta:n`, `delta_t:n`, `adm:n:k`, or an SPC file.
pub fn load_stratified(spec: &str) -> Result<StratifiedComplex, InputError> {
    let kind = match builtin(spec) {
        Some(("delta", args)) => Standard::Delta(numbers(spec, &args, 1)?[0]),
        Some(("delta_t", args)) => Standard::DeltaT(numbers(spec, &args, 1)?[0]),
        Some(("adm", args)) => {
            let v = numbers(spec, &args, 2)?;
            Standard::Adm(v[0], v[1])
        }
        Some((name, _)) => return Err(InputError::Usage(format!("unknown stratified builtin `{name}`"))),
        None => {
            return parse_spc(&read(spec)?).map_err(|source| InputError::Spc { path: spec.to_string(), source });
        }
    };
    standard(kind).map_err(|source| InputError::Spc { path: spec.to_string(), source })
}

/// A stratified parity complex from `osimp:n`, `delta:n`, `delta_t:n`, `prod:n:m`, `susp:k:osimp:n`, or a PCX file.
pub fn load_parity(spec: &str) -> Result<StratifiedParity, InputError> {
    match builtin(spec) {
        Some(("osimp" | "delta", args)) => Ok(StratifiedParity::minimal(simplex_parity(numbers(spec, &args, 1)?[0]).complex)),
        Some(("delta_t", args)) => Ok(simplex_parity_thin(numbers(spec, &args, 1)?[0])),
        Some(("prod", args)) => {
            let v = numbers(spec, &args, 2)?;
            Ok(StratifiedParity::minimal(product(&simplex_parity(v[0]).complex, &simplex_parity(v[1]).complex).complex))
        }
        Some(("susp", args)) => match args.as_slice() {
            [k, "osimp", n] => {
                let v = numbers(spec, &[k, n], 2)?;
                Ok(StratifiedParity::minimal(suspension(v[0], &simplex_parity(v[1]).complex).complex))
            }
            _ => Err(InputError::Usage(format!("builtin `{spec}` must look like susp:k:osimp:n"))),
        },
        Some((name, _)) => Err(InputError::Usage(format!("unknown parity builtin `{name}`"))),
        None => parse_pcx(&read(spec)?).map_err(|source| InputError::Pcx { path: spec.to_string(), source }),
    }
}
