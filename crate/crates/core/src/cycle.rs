//! Torus-invariant cycles: finite rational combinations of orbit closures `[V(σ)]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::fan::{ConeId, Fan};
use crate::linalg::{format_rational, Rational};

pub(crate) fn same_fan(a: &Arc<Fan>, b: &Arc<Fan>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `Σ c_σ [V(σ)]`, stored without zero coefficients. The codimension of
/// `[V(σ)]` is `dim σ`.
#[derive(Clone, Debug)]
pub struct Cycle {
    fan: Arc<Fan>,
    terms: BTreeMap<ConeId, Rational>,
}

impl PartialEq for Cycle {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_fan(&self.fan, &other.fan)
    }
}

impl Eq for Cycle {}

impl Cycle {
    pub fn zero(fan: Arc<Fan>) -> Self {
        Self { fan, terms: BTreeMap::new() }
    }

    /// The class `[X] = [V(0)]`.
    pub fn fundamental(fan: Arc<Fan>) -> Self {
        let zero = fan.zero_cone();
        Self::orbit(fan, zero)
    }

    /// The class `[V(σ)]`.
    pub fn orbit(fan: Arc<Fan>, sigma: ConeId) -> Self {
        let mut z = Self::zero(fan);
        z.add_term(sigma, Rational::one());
        z
    }

    pub fn from_terms(fan: Arc<Fan>, terms: impl IntoIterator<Item = (ConeId, Rational)>) -> Self {
        let mut z = Self::zero(fan);
        for (c, q) in terms {
            z.add_term(c, q);
        }
        z
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn terms(&self) -> impl Iterator<Item = (ConeId, &Rational)> {
        self.terms.iter().map(|(c, q)| (*c, q))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, sigma: ConeId) -> Rational {
        self.terms.get(&sigma).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, sigma: ConeId, q: Rational) {
        assert!(sigma.0 < self.fan.num_cones(), "cone index out of range");
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(sigma).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&sigma);
        }
    }

    pub fn add_cycle(&mut self, other: &Cycle) {
        for (c, q) in other.terms() {
            self.add_term(c, q.clone());
        }
    }

    pub fn scaled(&self, q: &Rational) -> Cycle {
        Cycle::from_terms(self.fan.clone(), self.terms().map(|(c, x)| (c, x * q)))
    }

    pub fn sum(&self, other: &Cycle) -> Cycle {
        let mut z = self.clone();
        z.add_cycle(other);
        z
    }

    pub fn difference(&self, other: &Cycle) -> Cycle {
        self.sum(&other.scaled(&-Rational::one()))
    }

    /// The terms supported on cones of dimension `k`.
    pub fn codimension_part(&self, k: usize) -> Cycle {
        Cycle::from_terms(
            self.fan.clone(),
            self.terms().filter(|(c, _)| self.fan.dim(*c) == k).map(|(c, q)| (c, q.clone())),
        )
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(c, q)| format!("{}*V{:?}", format_rational(q), self.fan.cone_rays(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
