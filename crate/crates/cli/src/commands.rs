use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use whap_core::factorization::{self as fz, factorize_lowered, verify, FACTORIZE_TOL};
use whap_core::operator::{
    battery, identity_residual, ExtensionMode, Identity, MultiplierSpec, ReflexiveInverse, Signal,
};
use whap_core::{
    lower, parse, AsymmetricFactorization, Factorization, FactorizationError, LoweredSymbol, OperatorError,
    PointwiseSymbol,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::{Check, Ell};

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit(out, &text)
}

fn lowered(text: &str) -> Result<LoweredSymbol, CliError> {
    parse(text).map(|e| lower(&e)).map_err(|source| CliError::Parse {
        text: text.to_string(),
        source,
    })
}

fn read_factorization(path: &Path, symbol: Option<&LoweredSymbol>) -> Result<AsymmetricFactorization, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    // malformed JSON is an input error; well-formed records that fail
    // certification mean no usable factorization
    let record: Factorization = serde_json::from_str(&text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => CliError::InvalidFactorization {
            path: path.display().to_string(),
            message: e.to_string(),
        },
        _ => CliError::io(path, e),
    })?;
    Ok(record.to_asymmetric(symbol)?)
}

/// The given factorization, checked against the symbol when both are
/// present, or a computed one.
fn resolve(
    cfg: &RunConfig,
    symbol: Option<&str>,
    factorization: Option<&Path>,
) -> Result<AsymmetricFactorization, CliError> {
    let phi = symbol.map(lowered).transpose()?;
    match (factorization, &phi) {
        (Some(path), _) => {
            let af = read_factorization(path, phi.as_ref())?;
            if let Some(phi) = &phi {
                let residual = verify(phi, &af, &cfg.grid()?).residual;
                if !(residual <= FACTORIZE_TOL) {
                    return Err(FactorizationError::ResidualTooLarge {
                        residual,
                        tolerance: FACTORIZE_TOL,
                    }
                    .into());
                }
            }
            Ok(af)
        }
        (None, Some(phi)) => Ok(factorize_lowered(phi)?),
        (None, None) => Err(CliError::Usage("a symbol or a factorization is required".into())),
    }
}

pub fn classify(
    cfg: &RunConfig,
    symbol: Option<&str>,
    factorization: Option<&Path>,
    out: Option<&Path>,
) -> Result<bool, CliError> {
    let af = resolve(cfg, symbol, factorization)?;
    let report = match fz::classify_with_crosscheck(&af, &cfg.mean_motion()) {
        Ok(r) => r,
        Err(e @ FactorizationError::CrossCheckFailed { .. }) => return Err(e.into()),
        Err(e) => {
            eprintln!("warning: mean-motion cross-check unavailable: {e}");
            fz::classify(&af)
        }
    };
    emit_json(out, &report)?;
    Ok(true)
}

pub fn factorize(symbol: &str, out: Option<&Path>) -> Result<bool, CliError> {
    let af = factorize_lowered(&lowered(symbol)?)?;
    emit_json(out, &Factorization::Asymmetric(af))?;
    Ok(true)
}

pub fn invert(
    cfg: &RunConfig,
    factorization: &Path,
    signal: &Path,
    ell: Ell,
    symbol: Option<&str>,
    out: Option<&Path>,
) -> Result<bool, CliError> {
    let phi = symbol.map(lowered).transpose()?;
    let af = read_factorization(factorization, phi.as_ref())?;
    let grid = cfg.grid()?;
    let file = std::fs::File::open(signal).map_err(|e| CliError::io(signal, e))?;
    let g = Signal::read_csv(grid, file).map_err(|e| CliError::io(signal, e))?;
    let inverse = ReflexiveInverse::new(&af, &grid).map_err(CliError::Inversion)?;
    let mode = match ell {
        Ell::Zero => ExtensionMode::Zero,
        Ell::Even => ExtensionMode::Even,
    };
    let f = inverse.apply(&g, mode).map_err(CliError::Inversion)?;
    let mut buf = Vec::new();
    f.write_csv(&mut buf)?;
    emit(out, &String::from_utf8(buf).expect("csv output is ascii"))?;
    Ok(true)
}

pub fn trace(symbol: &str, from: f64, to: f64, points: usize, out: Option<&Path>) -> Result<bool, CliError> {
    if points < 2 || !(from < to) {
        return Err(CliError::Usage("trace needs from < to and at least 2 points".into()));
    }
    let phi = lowered(symbol)?;
    let step = (to - from) / (points - 1) as f64;
    let mut text = String::from("x,re,im\n");
    let mut failures = 0usize;
    for k in 0..points {
        let x = if k + 1 == points { to } else { from + k as f64 * step };
        match phi.value_at(x) {
            Ok(z) => writeln!(text, "{x:.16e},{:.16e},{:.16e}", z.re, z.im),
            Err(e) => {
                failures += 1;
                eprintln!("warning: {e}");
                writeln!(text, "{x:.16e},NaN,NaN")
            }
        }
        .expect("writing to a string");
    }
    if failures > 0 {
        eprintln!("warning: {failures} of {points} samples undefined");
    }
    emit(out, &text)?;
    Ok(true)
}

fn arity(check: Check) -> usize {
    match check {
        Check::Eqseg | Check::Eq6 => 2,
        Check::Prop31 => 3,
        _ => 1,
    }
}

pub fn verify_op(
    cfg: &RunConfig,
    check: Check,
    symbols: &[String],
    factorization: Option<&Path>,
    out: Option<&Path>,
) -> Result<bool, CliError> {
    let inverse_check = matches!(
        check,
        Check::Thm52Right | Check::Thm52Left | Check::Thm52TwoSided | Check::ExtensionIndependence
    );
    let wanted = if inverse_check && factorization.is_some() {
        0..=1
    } else {
        arity(check)..=arity(check)
    };
    if !wanted.contains(&symbols.len()) {
        return Err(CliError::Usage(format!(
            "{check:?} takes {} symbol(s), got {}",
            arity(check),
            symbols.len()
        )));
    }
    let identity = if inverse_check {
        let af = resolve(cfg, symbols.first().map(String::as_str), factorization)?;
        match check {
            Check::Thm52Right => Identity::Thm52Right(af),
            Check::Thm52Left => Identity::Thm52Left(af),
            Check::Thm52TwoSided => Identity::Thm52TwoSided(af),
            _ => Identity::ExtensionIndependence(af),
        }
    } else {
        let mut specs = symbols
            .iter()
            .map(|s| lowered(s).map(MultiplierSpec::from))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter();
        let mut next = || specs.next().expect("arity checked");
        match check {
            Check::Eqseg => Identity::EqSeg {
                phi: next(),
                psi: next(),
            },
            Check::Eq6 => Identity::Eq6 {
                phi: next(),
                psi: next(),
            },
            Check::Prop31 => Identity::Prop31 {
                phi: next(),
                psi: next(),
                chi: next(),
            },
            Check::Prop32 => Identity::Prop32 { even: next() },
            _ => Identity::HankelVanishing { m: next() },
        }
    };
    let grid = cfg.grid()?;
    let report =
        identity_residual(&identity, &grid, &battery(&grid, cfg.seed), cfg.threshold).map_err(|e| match e {
            OperatorError::MultiplierNotInvertible { .. } => CliError::Inversion(e),
            other => other.into(),
        })?;
    emit_json(out, &report)?;
    Ok(report.passed)
}
