//! Initial states, as real amplitudes on the Fock basis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::StateVector;

/// Fock state `|m, n>`: all weight on basis index `n` of the `N = m + n` sector.
pub fn fock(m: usize, n: usize) -> StateVector {
    let mut c = vec![0.0; m + n + 1];
    c[n] = 1.0;
    StateVector::from_real(&c).expect("unit vector is a valid state")
}

/// Signed-occupation variant of [`fock`] for untrusted input.
pub fn fock_checked(m: i64, n: i64) -> Result<StateVector> {
    if m < 0 || n < 0 {
        return Err(Error::InvalidState(format!(
            "negative occupation in |{m},{n}>"
        )));
    }
    Ok(fock(m as usize, n as usize))
}

/// `(|N,0> + |0,N>) / sqrt(2)`.
pub fn cat(n_total: usize) -> Result<StateVector> {
    if n_total == 0 {
        return Err(Error::InvalidState("cat state needs N >= 1".into()));
    }
    let mut c = vec![0.0; n_total + 1];
    c[0] = std::f64::consts::FRAC_1_SQRT_2;
    c[n_total] = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_real(&c)
}

/// Uniform superposition of all `N + 1` Fock states.
pub fn maximally_entangled(n_total: usize) -> StateVector {
    let amp = 1.0 / ((n_total + 1) as f64).sqrt();
    StateVector::from_real(&vec![amp; n_total + 1]).expect("uniform vector is a valid state")
}

/// Textual initial-state descriptor: `fock:m,n`, `cat`, or `me`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitialState {
    Fock { m: usize, n: usize },
    Cat,
    MaximallyEntangled,
}

impl InitialState {
    /// Builds the state in the sector of `n_total` bosons.
    pub fn build(&self, n_total: usize) -> Result<StateVector> {
        match *self {
            InitialState::Fock { m, n } => {
                if m + n != n_total {
                    return Err(Error::InvalidState(format!(
                        "|{m},{n}> holds {} bosons but N = {n_total}",
                        m + n
                    )));
                }
                Ok(fock(m, n))
            }
            InitialState::Cat => cat(n_total),
            InitialState::MaximallyEntangled => Ok(maximally_entangled(n_total)),
        }
    }

    /// Mode-swapped descriptor; `cat` and `me` map to themselves.
    pub fn mirrored(&self) -> Self {
        match *self {
            InitialState::Fock { m, n } => InitialState::Fock { m: n, n: m },
            other => other,
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Fock { m, n } => write!(f, "fock:{m},{n}"),
            InitialState::Cat => f.write_str("cat"),
            InitialState::MaximallyEntangled => f.write_str("me"),
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "cat" => return Ok(InitialState::Cat),
            "me" => return Ok(InitialState::MaximallyEntangled),
            _ => {}
        }
        let bad = || Error::InvalidState(format!("cannot parse initial state `{s}`"));
        let occupations = s.strip_prefix("fock:").ok_or_else(bad)?;
        let (m, n) = occupations.split_once(',').ok_or_else(bad)?;
        let m: i64 = m.trim().parse().map_err(|_| bad())?;
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        if m < 0 || n < 0 {
            return Err(Error::InvalidState(format!("negative occupation in `{s}`")));
        }
        Ok(InitialState::Fock {
            m: m as usize,
            n: n as usize,
        })
    }
}

impl TryFrom<String> for InitialState {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<InitialState> for String {
    fn from(s: InitialState) -> String {
        s.to_string()
    }
}
