//! Two-qubit states a ring edge can distribute.
//!
//! Four families: the singlet, arbitrary pure product states, the
//! partially-entangled interpolation α|01⟩ − √(1−α²)|10⟩, and isotropic
//! (Werner) mixtures of the singlet with white noise. Each family realizes to
//! a validated two-qubit density matrix; the pure families also expose their
//! state vector so large pure networks can stay in vector form.
//!
//! Every variant has a CLI-friendly string form (see [`SourceSpec::from_str`]):
//! `singlet`, `product`, `product:u0,u1;v0,v1`, `partial:ALPHA`, `werner:V`,
//! with complex amplitude literals written `re`, `imi`, or `re+imi`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::qmath::{kron, DensityMatrix, StateVector, C64};
use crate::{Error, Result, Tolerances};

/// Description of one edge's two-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    /// (|01⟩ − |10⟩)/√2.
    Singlet,
    /// u ⊗ v for normalized single-qubit states u, v.
    Product { u: StateVector, v: StateVector },
    /// α|01⟩ − √(1−α²)|10⟩ with α ∈ [0, 1]; coincides with the singlet at
    /// α = 1/√2.
    Partial { alpha: f64 },
    /// V·|ψ⁻⟩⟨ψ⁻| + (1−V)·I/4 with V ∈ [0, 1].
    Werner { v: f64 },
}

/// The fixed product state (|0⟩−|1⟩)/√2 ⊗ |1⟩ — the state the bare `product`
/// spec string denotes, used by the mixed-edge triangle scenarios.
pub fn default_product() -> SourceSpec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = StateVector::from_normalized(vec![C64::new(s, 0.0), C64::new(-s, 0.0)]);
    let v = StateVector::basis(1, 1);
    SourceSpec::Product { u, v }
}

/// Singlet state vector (|01⟩ − |10⟩)/√2.
pub fn singlet_state() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_normalized(vec![
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(0.0, 0.0),
    ])
}

impl SourceSpec {
    /// Checks the family parameters (range of α and V, normalization and
    /// single-qubit shape of product constituents).
    pub fn validate(&self) -> Result<()> {
        let tol = Tolerances::DEFAULT.eq;
        match self {
            SourceSpec::Singlet => Ok(()),
            SourceSpec::Product { u, v } => {
                for (name, s) in [("u", u), ("v", v)] {
                    if s.n_qubits() != 1 {
                        return Err(Error::InvalidArgument(format!(
                            "product constituent {name} has {} qubits, expected 1",
                            s.n_qubits()
                        )));
                    }
                    if (s.norm_sqr() - 1.0).abs() > tol {
                        return Err(Error::InvalidArgument(format!(
                            "product constituent {name} is not normalized"
                        )));
                    }
                }
                Ok(())
            }
            SourceSpec::Partial { alpha } => {
                if !(0.0..=1.0).contains(alpha) || !alpha.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "partial parameter {alpha} outside [0, 1]"
                    )));
                }
                Ok(())
            }
            SourceSpec::Werner { v } => {
                if !(0.0..=1.0).contains(v) || !v.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "werner parameter {v} outside [0, 1]"
                    )));
                }
                Ok(())
            }
        }
    }

    /// True for families that always produce a pure state. `Werner` reports
    /// false even at V = 1 so state assembly routes it through the
    /// density-matrix path uniformly.
    pub fn is_pure(&self) -> bool {
        !matches!(self, SourceSpec::Werner { .. })
    }

    /// Two-qubit state vector for the pure families; `None` for `Werner`.
    pub fn pure_state(&self) -> Result<Option<StateVector>> {
        self.validate()?;
        Ok(match self {
            SourceSpec::Singlet => Some(singlet_state()),
            SourceSpec::Product { u, v } => Some(kron(u, v)?),
            SourceSpec::Partial { alpha } => {
                let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
                Some(StateVector::from_normalized(vec![
                    C64::new(0.0, 0.0),
                    C64::new(*alpha, 0.0),
                    C64::new(-beta, 0.0),
                    C64::new(0.0, 0.0),
                ]))
            }
            SourceSpec::Werner { .. } => None,
        })
    }
}

/// Realizes the spec as a validated two-qubit density matrix.
pub fn realize(spec: &SourceSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    match spec {
        SourceSpec::Werner { v } => {
            let pure = singlet_state().projector();
            let dim = pure.dim();
            let mut m = pure.matrix().clone() * Complex64::new(*v, 0.0);
            let noise = (1.0 - v) / dim as f64;
            for i in 0..dim {
                m[(i, i)] += Complex64::new(noise, 0.0);
            }
            DensityMatrix::new(m)
        }
        _ => Ok(spec
            .pure_state()?
            .expect("non-Werner specs are pure")
            .projector()),
    }
}

fn fmt_c64(z: &C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_c64(s: &str) -> Result<C64> {
    let bad = || Error::Parse(format!("invalid complex literal '{s}'"));
    let t = s.trim();
    if let Ok(re) = t.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    let body = t.strip_suffix('i').ok_or_else(bad)?;
    // Split at the last sign that separates real and imaginary parts (not a
    // leading sign, not an exponent sign).
    for (idx, ch) in body.char_indices().rev() {
        if (ch == '+' || ch == '-') && idx > 0 {
            let prev = body.as_bytes()[idx - 1];
            if prev == b'e' || prev == b'E' {
                continue;
            }
            let re: f64 = body[..idx].parse().map_err(|_| bad())?;
            let im_str = &body[idx..];
            let im: f64 = match im_str {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_str.parse().map_err(|_| bad())?,
            };
            return Ok(C64::new(re, im));
        }
    }
    // Pure imaginary: "i", "-i", "0.5i", …
    let im: f64 = match body {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => body.parse().map_err(|_| bad())?,
    };
    Ok(C64::new(0.0, im))
}

fn parse_qubit(s: &str) -> Result<StateVector> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!(
            "qubit literal '{s}' must have exactly two comma-separated amplitudes"
        )));
    }
    let amps = vec![parse_c64(parts[0])?, parse_c64(parts[1])?];
    StateVector::new(amps).map_err(|e| Error::Parse(format!("qubit literal '{s}': {e}")))
}

impl FromStr for SourceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let spec = match t {
            "singlet" => SourceSpec::Singlet,
            "product" => default_product(),
            _ => {
                let (head, tail) = t
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("unknown source spec '{t}'")))?;
                match head {
                    "partial" => {
                        let alpha: f64 = tail
                            .parse()
                            .map_err(|_| Error::Parse(format!("invalid alpha '{tail}'")))?;
                        SourceSpec::Partial { alpha }
                    }
                    "werner" => {
                        let v: f64 = tail
                            .parse()
                            .map_err(|_| Error::Parse(format!("invalid noise level '{tail}'")))?;
                        SourceSpec::Werner { v }
                    }
                    "product" => {
                        let (us, vs) = tail.split_once(';').ok_or_else(|| {
                            Error::Parse(format!("product spec '{tail}' must be 'u0,u1;v0,v1'"))
                        })?;
                        SourceSpec::Product {
                            u: parse_qubit(us)?,
                            v: parse_qubit(vs)?,
                        }
                    }
                    _ => return Err(Error::Parse(format!("unknown source spec '{t}'"))),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSpec::Singlet => write!(f, "singlet"),
            SourceSpec::Product { u, v } if *self == default_product() => {
                let _ = (u, v);
                write!(f, "product")
            }
            SourceSpec::Product { u, v } => write!(
                f,
                "product:{},{};{},{}",
                fmt_c64(&u.amplitudes()[0]),
                fmt_c64(&u.amplitudes()[1]),
                fmt_c64(&v.amplitudes()[0]),
                fmt_c64(&v.amplitudes()[1]),
            ),
            SourceSpec::Partial { alpha } => write!(f, "partial:{alpha}"),
            SourceSpec::Werner { v } => write!(f, "werner:{v}"),
        }
    }
}
