//! Strategy notation: `heur(J,p,m)`, `Z(h)+heur`, `Z(h)+conv`, `Z(h)+Hres`
//! and `resmin+{Z(h)|EK(p,m)}+{gn|tr}` with an optional `, g=N` suffix.
//!
//! Method aliases `gauss-newton` and `newton-trust` are accepted, as are the
//! script forms `𝒵` and `𝓔𝒦`. [`StrategySpec`]'s `Display` prints the same
//! names the strategies report, so parsing a printed spec round-trips.

use std::fmt;
use std::str::FromStr;

use lradi_core::resmin::{Method, ResminConfig, ResminStrategy, Subspace};
use lradi_core::shifts::{PrecomputedShifts, RitzSelection, RitzStrategy, ShiftStrategy};

use crate::error::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RitzKind {
    Heuristic,
    ConvexHull,
    Hamiltonian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrategySpec {
    Precomputed { count: usize, p: usize, m: usize },
    Ritz { h: usize, kind: RitzKind },
    Resmin { subspace: Subspace, method: Method, g: usize },
}

impl StrategySpec {
    pub fn build(&self) -> Box<dyn ShiftStrategy> {
        match *self {
            StrategySpec::Precomputed { count, p, m } => Box::new(PrecomputedShifts::new(count, p, m)),
            StrategySpec::Ritz { h, kind } => {
                let selection = match kind {
                    RitzKind::Heuristic => RitzSelection::Heuristic,
                    RitzKind::ConvexHull => RitzSelection::convex_hull(),
                    RitzKind::Hamiltonian => RitzSelection::Hamiltonian,
                };
                Box::new(RitzStrategy::new(h, selection))
            }
            StrategySpec::Resmin { subspace, method, g } => {
                Box::new(ResminStrategy::new(ResminConfig::new(subspace, method).with_g(g)))
            }
        }
    }

    /// All strategy families with small default parameters.
    pub fn catalogue() -> Vec<StrategySpec> {
        let mut out = vec![
            StrategySpec::Precomputed { count: 20, p: 30, m: 20 },
            StrategySpec::Ritz { h: 4, kind: RitzKind::Heuristic },
            StrategySpec::Ritz { h: 4, kind: RitzKind::ConvexHull },
            StrategySpec::Ritz { h: 4, kind: RitzKind::Hamiltonian },
        ];
        for subspace in [Subspace::Window(4), Subspace::Window(8), Subspace::ExtendedKrylov { p: 3, m: 1 }] {
            for method in [Method::GaussNewton, Method::NewtonTrust] {
                for g in [1, 5] {
                    out.push(StrategySpec::Resmin { subspace, method, g });
                }
            }
        }
        out
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StrategySpec::Precomputed { count, p, m } => write!(f, "heur({count},{p},{m})"),
            StrategySpec::Ritz { h, kind } => {
                let k = match kind {
                    RitzKind::Heuristic => "heur",
                    RitzKind::ConvexHull => "conv",
                    RitzKind::Hamiltonian => "Hres",
                };
                write!(f, "Z({h})+{k}")
            }
            StrategySpec::Resmin { subspace, method, g } => {
                match subspace {
                    Subspace::Window(h) => write!(f, "resmin+Z({h})")?,
                    Subspace::ExtendedKrylov { p, m } => write!(f, "resmin+EK({p},{m})")?,
                }
                f.write_str(match method {
                    Method::GaussNewton => "+gn",
                    Method::NewtonTrust => "+tr",
                })?;
                if g > 1 {
                    write!(f, ", g={g}")?;
                }
                Ok(())
            }
        }
    }
}

fn bad(text: &str, why: &str) -> BenchError {
    BenchError::Config(format!("strategy `{text}`: {why}"))
}

/// Parses `name(a,b,...)` into the name and its integer arguments.
fn call<'a>(token: &'a str, text: &str) -> Result<(&'a str, Vec<usize>), BenchError> {
    let open = token.find('(').ok_or_else(|| bad(text, &format!("expected `(` in `{token}`")))?;
    let inner = token[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| bad(text, &format!("expected `)` at the end of `{token}`")))?;
    let args = inner
        .split(',')
        .map(|a| a.parse::<usize>().map_err(|_| bad(text, &format!("`{a}` is not a non-negative integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((&token[..open], args))
}

fn subspace(token: &str, text: &str) -> Result<Subspace, BenchError> {
    let (name, args) = call(token, text)?;
    match (name, args.as_slice()) {
        ("Z" | "z" | "𝒵", &[h]) if h >= 1 => Ok(Subspace::Window(h)),
        ("EK" | "ek" | "𝓔𝒦", &[p, m]) if p + m >= 1 => Ok(Subspace::ExtendedKrylov { p, m }),
        _ => Err(bad(text, &format!("unknown subspace `{token}`"))),
    }
}

impl FromStr for StrategySpec {
    type Err = BenchError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, g) = match compact.rsplit_once(",g=") {
            Some((body, value)) => {
                let g: usize = value.parse().map_err(|_| bad(text, &format!("`{value}` is not a step count")))?;
                if g == 0 {
                    return Err(bad(text, "g must be at least 1"));
                }
                (body, Some(g))
            }
            None => (compact.as_str(), None),
        };
        let parts: Vec<&str> = body.split('+').collect();
        let spec = match parts.as_slice() {
            [single] if single.starts_with("heur(") => match call(single, text)?.1.as_slice() {
                &[count, p, m] if count >= 1 && p + m >= 1 => StrategySpec::Precomputed { count, p, m },
                _ => return Err(bad(text, "heur needs (J,p,m) with J ≥ 1 and p+m ≥ 1")),
            },
            [sub, kind] => {
                let Subspace::Window(h) = subspace(sub, text)? else {
                    return Err(bad(text, "Ritz strategies need a Z(h) window"));
                };
                let kind = match *kind {
                    "heur" => RitzKind::Heuristic,
                    "conv" => RitzKind::ConvexHull,
                    "Hres" | "hres" => RitzKind::Hamiltonian,
                    other => return Err(bad(text, &format!("unknown Ritz selection `{other}`"))),
                };
                StrategySpec::Ritz { h, kind }
            }
            ["resmin", sub, method] => {
                let method = match *method {
                    "gn" | "gauss-newton" => Method::GaussNewton,
                    "tr" | "newton-trust" => Method::NewtonTrust,
                    other => return Err(bad(text, &format!("unknown optimizer `{other}`"))),
                };
                StrategySpec::Resmin { subspace: subspace(sub, text)?, method, g: 1 }
            }
            _ => return Err(bad(text, "unrecognized form")),
        };
        match (spec, g) {
            (StrategySpec::Resmin { subspace, method, .. }, Some(g)) => Ok(StrategySpec::Resmin { subspace, method, g }),
            (_, Some(_)) => Err(bad(text, "only resmin strategies take a step count g")),
            (spec, None) => Ok(spec),
        }
    }
}
