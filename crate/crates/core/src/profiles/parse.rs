use super::{AnalyticProfile, AnalyticShape, PiecewiseProfile, ProfileKind};
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};

/// Result of [`parse_profile`].
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedProfile {
    Piecewise(PiecewiseProfile),
    Analytic(AnalyticProfile),
}

impl ParsedProfile {
    pub fn kind(&self) -> ProfileKind {
        match self {
            ParsedProfile::Piecewise(p) => p.kind(),
            ParsedProfile::Analytic(a) => a.kind,
        }
    }

    pub fn radius(&self) -> &BigReal {
        match self {
            ParsedProfile::Piecewise(p) => p.radius(),
            ParsedProfile::Analytic(a) => &a.radius,
        }
    }

    /// Piecewise form, projecting analytic profiles onto `m` pieces.
    pub fn to_piecewise(&self, m: usize) -> Result<PiecewiseProfile> {
        match self {
            ParsedProfile::Piecewise(p) => Ok(p.clone()),
            ParsedProfile::Analytic(a) => super::project_midpoint(a, m),
        }
    }

    pub fn serialize(&self) -> String {
        match self {
            ParsedProfile::Piecewise(p) => serialize_piecewise(p),
            ParsedProfile::Analytic(a) => serialize_analytic(a),
        }
    }
}

const SHAPES: [&str; 7] = ["constant", "step2", "step3", "bump", "tent", "cosine_series", "exp3_profile"];

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    let mut depth = 0usize;
    for (i, ch) in line.char_indices() {
        match ch {
            '[' => {
                depth += 1;
                start.get_or_insert(i);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                start.get_or_insert(i);
            }
            c if c.is_whitespace() && depth == 0 => {
                if let Some(s) = start.take() {
                    out.push(Token { text: &line[s..i], column: s + 1 });
                }
            }
            _ => {
                start.get_or_insert(i);
            }
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: s + 1 });
    }
    out
}

fn decimal(tok: &Token<'_>, line: usize, prec: Precision) -> Result<BigReal> {
    decimal_at(tok.text, line, tok.column, prec)
}

fn decimal_at(text: &str, line: usize, column: usize, prec: Precision) -> Result<BigReal> {
    BigReal::parse_decimal(text, prec)
        .map_err(|_| Error::parse(line, column, format!("expected a decimal number, found {text:?}")))
}

/// Parses the line-oriented profile format at working precision `prec`.
///
/// ```text
/// kind conductivity
/// radius 1
/// breakpoints 0 0.5 1
/// values 2 1
/// ```
///
/// or a built-in formula such as `analytic cosine_series R=1 c=[0.5,-0.25]`.
/// A bare descriptor line (`cosine_series R=1 c=[0.5]`) is also accepted.
pub fn parse_profile(text: &str, prec: Precision) -> Result<ParsedProfile> {
    let mut kind: Option<ProfileKind> = None;
    let mut radius: Option<BigReal> = None;
    let mut breakpoints: Option<(usize, Vec<BigReal>)> = None;
    let mut values: Option<(usize, Vec<BigReal>)> = None;
    let mut analytic: Option<(usize, AnalyticShape, Option<BigReal>, Option<ProfileKind>)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(head) = toks.first() else { continue };
        let rest = &toks[1..];
        match head.text {
            "kind" => {
                let tok = rest
                    .first()
                    .ok_or_else(|| Error::parse(line_no, head.column, "missing kind"))?;
                kind = Some(ProfileKind::parse(tok.text).ok_or_else(|| {
                    Error::parse(line_no, tok.column, format!("unknown kind {:?}", tok.text))
                })?);
            }
            "radius" => {
                let tok = rest
                    .first()
                    .ok_or_else(|| Error::parse(line_no, head.column, "missing radius"))?;
                radius = Some(decimal(tok, line_no, prec)?);
            }
            "breakpoints" => {
                let v = rest.iter().map(|t| decimal(t, line_no, prec)).collect::<Result<Vec<_>>>()?;
                breakpoints = Some((line_no, v));
            }
            "values" => {
                let v = rest.iter().map(|t| decimal(t, line_no, prec)).collect::<Result<Vec<_>>>()?;
                values = Some((line_no, v));
            }
            "analytic" => {
                let name = rest
                    .first()
                    .ok_or_else(|| Error::parse(line_no, head.column, "missing analytic name"))?;
                analytic = Some(parse_descriptor(name, &rest[1..], line_no, prec)?);
            }
            name if SHAPES.contains(&name) => {
                analytic = Some(parse_descriptor(head, rest, line_no, prec)?);
            }
            other => {
                return Err(Error::parse(line_no, head.column, format!("unknown directive {other:?}")));
            }
        }
    }

    if let Some((line_no, shape, r_key, kind_key)) = analytic {
        if breakpoints.is_some() || values.is_some() {
            return Err(Error::parse(line_no, 1, "analytic descriptor mixed with breakpoints/values"));
        }
        let kind = kind_key.or(kind).unwrap_or(match shape {
            AnalyticShape::Exp3Profile => ProfileKind::Conductivity,
            _ => ProfileKind::Potential,
        });
        let radius = r_key
            .or(radius)
            .unwrap_or_else(|| BigReal::from_f64(1.0, prec));
        return AnalyticProfile::new(kind, radius, shape).map(ParsedProfile::Analytic);
    }

    let kind = kind.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `kind` line"))?;
    let (bp_line, bps) = breakpoints.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `breakpoints` line"))?;
    let (_, vals) = values.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `values` line"))?;
    if let Some(r) = &radius {
        if bps.last() != Some(r) {
            return Err(Error::parse(bp_line, 1, "last breakpoint differs from radius"));
        }
    }
    PiecewiseProfile::new(kind, bps, vals)
        .map(ParsedProfile::Piecewise)
        .map_err(|e| match e {
            Error::InvalidProfile(msg) => Error::parse(bp_line, 1, msg),
            other => other,
        })
}

type Descriptor = (usize, AnalyticShape, Option<BigReal>, Option<ProfileKind>);

fn parse_descriptor(name: &Token<'_>, args: &[Token<'_>], line: usize, prec: Precision) -> Result<Descriptor> {
    let mut radius = None;
    let mut kind = None;
    let mut scalars: Vec<(String, BigReal, usize)> = Vec::new();
    let mut list: Option<Vec<BigReal>> = None;

    for tok in args {
        let (key, val) = tok
            .text
            .split_once('=')
            .ok_or_else(|| Error::parse(line, tok.column, format!("expected key=value, found {:?}", tok.text)))?;
        let vcol = tok.column + key.len() + 1;
        match key {
            "R" | "radius" => radius = Some(decimal_at(val, line, vcol, prec)?),
            "kind" => {
                kind = Some(ProfileKind::parse(val).ok_or_else(|| {
                    Error::parse(line, vcol, format!("unknown kind {val:?}"))
                })?)
            }
            "c" => {
                let inner = val
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| Error::parse(line, vcol, "coefficient list must look like [a,b,...]"))?;
                let mut coeffs = Vec::new();
                let mut col = vcol + 1;
                for piece in inner.split(',') {
                    if !piece.trim().is_empty() {
                        coeffs.push(decimal_at(piece.trim(), line, col, prec)?);
                    }
                    col += piece.len() + 1;
                }
                list = Some(coeffs);
            }
            _ => scalars.push((key.to_string(), decimal_at(val, line, vcol, prec)?, tok.column)),
        }
    }

    let take = |want: &str, default: Option<f64>| -> Result<BigReal> {
        scalars
            .iter()
            .find(|(k, _, _)| k == want)
            .map(|(_, v, _)| v.clone())
            .or_else(|| default.map(|d| BigReal::from_f64(d, prec)))
            .ok_or_else(|| Error::parse(line, name.column, format!("{} needs {want}=", name.text)))
    };
    let allowed: &[&str] = match name.text {
        "constant" => &["value"],
        "step2" => &["r1", "inner", "outer"],
        "step3" => &["r1", "r2", "v1", "v2", "v3"],
        "bump" | "tent" => &["amplitude", "width"],
        _ => &[],
    };
    if let Some((k, _, col)) = scalars.iter().find(|(k, _, _)| !allowed.contains(&k.as_str())) {
        return Err(Error::parse(line, *col, format!("unknown parameter {k:?} for {}", name.text)));
    }

    let shape = match name.text {
        "constant" => AnalyticShape::Constant { value: take("value", None)? },
        "step2" => AnalyticShape::Step2 {
            r1: take("r1", None)?,
            inner: take("inner", None)?,
            outer: take("outer", None)?,
        },
        "step3" => AnalyticShape::Step3 {
            r1: take("r1", None)?,
            r2: take("r2", None)?,
            v1: take("v1", None)?,
            v2: take("v2", None)?,
            v3: take("v3", None)?,
        },
        "bump" => AnalyticShape::Bump {
            amplitude: take("amplitude", None)?,
            width: take("width", Some(1.0))?,
        },
        "tent" => AnalyticShape::Tent {
            amplitude: take("amplitude", None)?,
            width: take("width", Some(1.0))?,
        },
        "cosine_series" => AnalyticShape::CosineSeries {
            coefficients: list.ok_or_else(|| Error::parse(line, name.column, "cosine_series needs c=[...]"))?,
        },
        "exp3_profile" => AnalyticShape::Exp3Profile,
        other => {
            return Err(Error::parse(line, name.column, format!("unknown analytic profile {other:?}")));
        }
    };
    Ok((line, shape, radius, kind))
}

pub fn serialize_piecewise(p: &PiecewiseProfile) -> String {
    let join = |xs: &[BigReal]| xs.iter().map(BigReal::to_decimal).collect::<Vec<_>>().join(" ");
    format!(
        "kind {}\nradius {}\nbreakpoints {}\nvalues {}\n",
        p.kind(),
        p.radius().to_decimal(),
        join(p.breakpoints()),
        join(p.values())
    )
}

pub fn serialize_analytic(a: &AnalyticProfile) -> String {
    let d = BigReal::to_decimal;
    let params = match &a.shape {
        AnalyticShape::Constant { value } => format!(" value={}", d(value)),
        AnalyticShape::Step2 { r1, inner, outer } => {
            format!(" r1={} inner={} outer={}", d(r1), d(inner), d(outer))
        }
        AnalyticShape::Step3 { r1, r2, v1, v2, v3 } => format!(
            " r1={} r2={} v1={} v2={} v3={}",
            d(r1),
            d(r2),
            d(v1),
            d(v2),
            d(v3)
        ),
        AnalyticShape::Bump { amplitude, width } | AnalyticShape::Tent { amplitude, width } => {
            format!(" amplitude={} width={}", d(amplitude), d(width))
        }
        AnalyticShape::CosineSeries { coefficients } => format!(
            " c=[{}]",
            coefficients.iter().map(d).collect::<Vec<_>>().join(",")
        ),
        AnalyticShape::Exp3Profile => String::new(),
    };
    format!(
        "kind {}\nradius {}\nanalytic {}{}\n",
        a.kind,
        d(&a.radius),
        a.shape.name(),
        params
    )
}
