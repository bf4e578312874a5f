//! Textual state descriptions.
//!
//! ```text
//! fock:n=2                     |2⟩
//! coherent:alpha=-2            |α⟩, α complex ("1+2i", "-0.5i", "(1-i)")
//! pair:n=1                     (|0⟩ + |2n⟩)/√2
//! cat:alpha=-2,beta=8          c(|α⟩ + |β⟩)
//! super:w1*S1+w2*S2            c Σ w_i |S_i⟩; complex weights in parentheses
//! file:path                    pure state file ("#cutoff=N", "index,re,im")
//! density:path                 density matrix in the matrix dump format
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{PhaseError, Result};
use crate::fock::{coherent_state, minimal_cutoff, number_state, superpose, DensityMatrix, StateVector};
use crate::io::{read_matrix_dump, read_state_file};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock { n: usize },
    Coherent { alpha: Complex64 },
    Pair { n: usize },
    Cat { alpha: Complex64, beta: Complex64 },
    Super(Vec<(Complex64, StateSpec)>),
    File(PathBuf),
    Density(PathBuf),
}

/// A state prepared at a concrete cutoff.
#[derive(Debug, Clone)]
pub enum PreparedState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl PreparedState {
    pub fn cutoff(&self) -> usize {
        match self {
            Self::Pure(s) => s.cutoff(),
            Self::Mixed(r) => r.cutoff(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Pure(s) => DensityMatrix::from_pure(s),
            Self::Mixed(r) => r.clone(),
        }
    }

    pub fn pure(&self) -> Option<&StateVector> {
        match self {
            Self::Pure(s) => Some(s),
            Self::Mixed(_) => None,
        }
    }
}

impl StateSpec {
    /// Smallest cutoff representing the state with tail mass below `eps_tail`.
    pub fn default_cutoff(&self, eps_tail: f64) -> Result<usize> {
        Ok(match self {
            Self::Fock { n } => *n,
            Self::Pair { n } => 2 * n,
            Self::Coherent { alpha } => minimal_cutoff(alpha.norm_sqr(), eps_tail),
            Self::Cat { alpha, beta } => minimal_cutoff(alpha.norm_sqr(), eps_tail)
                .max(minimal_cutoff(beta.norm_sqr(), eps_tail)),
            Self::Super(terms) => {
                let mut c = 0;
                for (_, s) in terms {
                    c = c.max(s.default_cutoff(eps_tail)?);
                }
                c
            }
            Self::File(p) => read_state_file(p)?.cutoff(),
            Self::Density(p) => read_matrix_dump(p)?.nrows() - 1,
        })
    }

    pub fn prepare(&self, cutoff: usize, eps_tail: f64) -> Result<PreparedState> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self {
            Self::Fock { n } => PreparedState::Pure(number_state(*n, cutoff)?),
            Self::Coherent { alpha } => PreparedState::Pure(coherent_state(*alpha, cutoff, eps_tail)?),
            Self::Pair { n } => {
                let a = number_state(0, cutoff)?;
                let b = number_state(2 * n, cutoff)?;
                PreparedState::Pure(superpose(&[(one, &a), (one, &b)])?.state)
            }
            Self::Cat { alpha, beta } => {
                let a = coherent_state(*alpha, cutoff, eps_tail)?;
                let b = coherent_state(*beta, cutoff, eps_tail)?;
                PreparedState::Pure(superpose(&[(one, &a), (one, &b)])?.state)
            }
            Self::Super(terms) => {
                let mut states = Vec::with_capacity(terms.len());
                for (w, s) in terms {
                    match s.prepare(cutoff, eps_tail)? {
                        PreparedState::Pure(p) => states.push((*w, p)),
                        PreparedState::Mixed(_) => {
                            return Err(PhaseError::Parse("superpositions need pure components".into()))
                        }
                    }
                }
                let refs: Vec<(Complex64, &StateVector)> = states.iter().map(|(w, s)| (*w, s)).collect();
                PreparedState::Pure(superpose(&refs)?.state)
            }
            Self::File(p) => PreparedState::Pure(read_state_file(p)?.with_cutoff(cutoff)?),
            Self::Density(p) => {
                let m = read_matrix_dump(p)?;
                if m.nrows() != cutoff + 1 {
                    return Err(PhaseError::CutoffMismatch { left: cutoff, right: m.nrows() - 1 });
                }
                PreparedState::Mixed(DensityMatrix::from_matrix(m)?)
            }
        })
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, optionally in parentheses.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let err = || PhaseError::Parse(format!("invalid complex number '{s}'"));
    let t = s.trim();
    let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t).trim();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| err())?,
    };
    let re = re.parse::<f64>().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

fn params(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| PhaseError::Parse(format!("expected key=value, found '{kv}'")))
        })
        .collect()
}

fn param<'a>(ps: &[(&'a str, &'a str)], key: &str, spec: &str) -> Result<&'a str> {
    ps.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| PhaseError::Parse(format!("'{spec}': missing parameter '{key}'")))
}

fn parse_usize(v: &str) -> Result<usize> {
    v.parse().map_err(|_| PhaseError::Parse(format!("invalid integer '{v}'")))
}

/// Splits `super:` bodies at `+` signs that start a new `weight*` term.
fn split_terms(body: &str) -> Vec<&str> {
    let bytes = body.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 && i > start && starts_weighted_term(&body[i + 1..]) => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&body[start..]);
    out
}

fn starts_weighted_term(rest: &str) -> bool {
    let rest = rest.trim_start();
    let weight_end = if rest.starts_with('(') {
        rest.find(')').map(|i| i + 1)
    } else {
        rest.find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | 'i' | '-')))
    };
    matches!(weight_end, Some(i) if rest[i..].trim_start().starts_with('*'))
}

impl FromStr for StateSpec {
    type Err = PhaseError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| PhaseError::Parse(format!("state spec '{s}' lacks a 'kind:' prefix")))?;
        match kind.trim() {
            "fock" => Ok(Self::Fock { n: parse_usize(param(&params(body)?, "n", s)?)? }),
            "pair" => {
                let n = parse_usize(param(&params(body)?, "n", s)?)?;
                if n == 0 {
                    return Err(PhaseError::Parse("pair state needs n >= 1".into()));
                }
                Ok(Self::Pair { n })
            }
            "coherent" => Ok(Self::Coherent { alpha: parse_complex(param(&params(body)?, "alpha", s)?)? }),
            "cat" => {
                let ps = params(body)?;
                Ok(Self::Cat {
                    alpha: parse_complex(param(&ps, "alpha", s)?)?,
                    beta: parse_complex(param(&ps, "beta", s)?)?,
                })
            }
            "super" => {
                let terms = split_terms(body)
                    .into_iter()
                    .map(|t| {
                        let (w, spec) = t
                            .split_once('*')
                            .ok_or_else(|| PhaseError::Parse(format!("term '{t}' needs 'weight*state'")))?;
                        Ok((parse_complex(w)?, spec.parse::<StateSpec>()?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Super(terms))
            }
            "file" => Ok(Self::File(PathBuf::from(body.trim()))),
            "density" => Ok(Self::Density(PathBuf::from(body.trim()))),
            other => Err(PhaseError::Parse(format!("unknown state kind '{other}'"))),
        }
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fock { n } => write!(f, "fock:n={n}"),
            Self::Pair { n } => write!(f, "pair:n={n}"),
            Self::Coherent { alpha } => write!(f, "coherent:alpha={}", fmt_complex(*alpha)),
            Self::Cat { alpha, beta } => {
                write!(f, "cat:alpha={},beta={}", fmt_complex(*alpha), fmt_complex(*beta))
            }
            Self::Super(terms) => {
                f.write_str("super:")?;
                for (i, (w, s)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "({}{:+}i)*{s}", w.re, w.im)?;
                }
                Ok(())
            }
            Self::File(p) => write!(f, "file:{}", p.display()),
            Self::Density(p) => write!(f, "density:{}", p.display()),
        }
    }
}
