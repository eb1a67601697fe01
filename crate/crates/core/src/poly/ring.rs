use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingSpec {
    vars: Vec<String>,
    n_base: usize,
    modulus: PrimeModulus,
    laurent: bool,
}

/// Ring context `𝔽_p[base vars, fiber vars]`, optionally Laurent.
///
/// Base variables come first; the fiber variables form the suffix and play
/// the role of the p-basis of the chart `𝔽_p[base] → 𝔽_p[base, fiber]`. A
/// ring without base variables is the absolute case. Cloning is cheap.
#[derive(Clone)]
pub struct Ring(Arc<RingSpec>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.0;
        write!(f, "F_{}[", s.modulus.p())?;
        if s.n_base > 0 {
            write!(f, "{} | ", s.vars[..s.n_base].join(","))?;
        }
        write!(f, "{}]", s.vars[s.n_base..].join(","))?;
        if s.laurent {
            write!(f, " (Laurent)")?;
        }
        Ok(())
    }
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    /// Absolute polynomial ring over `𝔽_p` in the given variables.
    pub fn new(p: u64, vars: &[&str]) -> Result<Ring> {
        Ring::relative(p, &[], vars)
    }

    /// Relative chart with base variables followed by fiber variables.
    pub fn relative(p: u64, base: &[&str], fiber: &[&str]) -> Result<Ring> {
        let modulus = PrimeModulus::new(p)?;
        let vars: Vec<String> = base.iter().chain(fiber).map(|s| s.to_string()).collect();
        Ring::from_parts(vars, base.len(), modulus, false)
    }

    pub(crate) fn from_parts(
        vars: Vec<String>,
        n_base: usize,
        modulus: PrimeModulus,
        laurent: bool,
    ) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::InvalidRing("no variables".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_ident(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(RingSpec {
            vars,
            n_base,
            modulus,
            laurent,
        })))
    }

    pub fn with_laurent(&self, laurent: bool) -> Ring {
        let s = &self.0;
        Ring(Arc::new(RingSpec {
            vars: s.vars.clone(),
            n_base: s.n_base,
            modulus: s.modulus,
            laurent,
        }))
    }

    /// Same variables, all treated as fiber variables.
    pub fn absolute(&self) -> Ring {
        if self.0.n_base == 0 {
            return self.clone();
        }
        let s = &self.0;
        Ring(Arc::new(RingSpec {
            vars: s.vars.clone(),
            n_base: 0,
            modulus: s.modulus,
            laurent: s.laurent,
        }))
    }

    /// The base ring `𝔽_p[base vars]` of a relative chart.
    pub fn base_ring(&self) -> Result<Ring> {
        let s = &self.0;
        if s.n_base == 0 {
            return Err(Error::ChartMismatch("ring has no base variables".into()));
        }
        Ring::from_parts(s.vars[..s.n_base].to_vec(), 0, s.modulus, s.laurent)
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.0.modulus
    }

    pub fn p(&self) -> u32 {
        self.0.modulus.p()
    }

    pub fn arity(&self) -> usize {
        self.0.vars.len()
    }

    pub fn n_base(&self) -> usize {
        self.0.n_base
    }

    pub fn n_fiber(&self) -> usize {
        self.0.vars.len() - self.0.n_base
    }

    pub fn fiber_range(&self) -> std::ops::Range<usize> {
        self.0.n_base..self.0.vars.len()
    }

    pub fn base_range(&self) -> std::ops::Range<usize> {
        0..self.0.n_base
    }

    pub fn is_laurent(&self) -> bool {
        self.0.laurent
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.0
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}
