//! Short scheme descriptions used on the command line, e.g. `cyclic1:.82`,
//! `combinatorial:4/5:2`, `intermediate:4/5:2:3` or `forget-s`. A trailing
//! `@S` overrides the shared straggler count for that entry.

use gradcode::constructions::*;
use gradcode::ratio::parse_ratio;
use gradcode::{GcError, GcScheme, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    pub text: String,
    pub family: String,
    pub args: Vec<String>,
    pub s: Option<usize>,
}

pub fn parse_spec(text: &str) -> Result<SchemeSpec> {
    let (body, s) = match text.split_once('@') {
        Some((b, s)) => (b, Some(s.parse().map_err(|_| GcError::Parse(format!("bad straggler override in {text:?}")))?)),
        None => (text, None),
    };
    let mut parts = body.split(':').map(str::trim);
    let family = parts.next().unwrap_or_default().to_ascii_lowercase();
    if family.is_empty() {
        return Err(GcError::Parse(format!("empty scheme spec {text:?}")));
    }
    Ok(SchemeSpec { text: text.to_string(), family, args: parts.map(String::from).collect(), s })
}

fn arg<'a>(spec: &'a SchemeSpec, i: usize, what: &str) -> Result<&'a str> {
    spec.args
        .get(i)
        .map(String::as_str)
        .ok_or_else(|| GcError::Parse(format!("{}: missing {what}", spec.text)))
}

fn int(spec: &SchemeSpec, i: usize, what: &str) -> Result<usize> {
    arg(spec, i, what)?.parse().map_err(|_| GcError::Parse(format!("{}: {what} must be an integer", spec.text)))
}

/// Builds the scheme named by `spec` on `n` workers with tolerance `s`
/// (unless `spec` carries its own). `alpha` fills in a missing fraction.
pub fn build_spec(spec: &SchemeSpec, n: usize, s: usize, alpha: Option<&str>) -> Result<GcScheme> {
    let s = spec.s.unwrap_or(s);
    let fraction = |i: usize| -> Result<_> {
        match (spec.args.get(i), alpha) {
            (Some(a), _) => parse_ratio(a),
            (None, Some(a)) => parse_ratio(a),
            (None, None) => Err(GcError::Parse(format!("{}: missing alpha", spec.text))),
        }
    };
    match spec.family.as_str() {
        "cyclic1" => build_cyclic1(n, fraction(0)?, s),
        "cyclic2" => build_cyclic2(n, fraction(0)?, s),
        "cyclic" => {
            let a = fraction(0)?;
            build_cyclic1(n, a, s).or_else(|_| build_cyclic2(n, a, s))
        }
        "combinatorial" => build_combinatorial(n, fraction(0)?, s, int(spec, 1, "y")?),
        "balanced" => build_balanced(n, fraction(0)?, s, int(spec, 1, "y")?),
        "intermediate" => {
            let ip = IntermediateParams::balanced(int(spec, 1, "y")?, int(spec, 2, "delta")?)?;
            build_intermediate(n, fraction(0)?, s, &ip)
        }
        "tdesign" => {
            let name = spec.args.first().map_or("hadamard-3-8-4-1", String::as_str);
            let d = TDesign::builtin(name).ok_or_else(|| GcError::Parse(format!("unknown built-in design {name:?}")))?;
            build_from_tdesign(&d)
        }
        "forget-s" | "uncoded" => build_uncoded_forget_s(n, s),
        "frc" => build_frc(n, s),
        "cgc" => build_cgc_full(n, s),
        other => Err(GcError::Parse(format!("unknown scheme family {other:?}"))),
    }
}
