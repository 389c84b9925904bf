//! Structured pass/fail records shared by every verification routine.

use serde::Serialize;

/// Where the expected value of a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A constant or formula stated in closed form.
    Analytic,
    /// An independent numerical oracle.
    Oracle,
    /// An algebraic identity that holds by construction.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
    pub provenance: Provenance,
    #[serde(skip)]
    relation: Relation,
}

/// How `value` is compared with `expected`; kept so tolerances can be overridden.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Near,
    AtMost,
    AtLeast,
    Flag,
}

impl Relation {
    fn holds(self, value: f64, expected: f64, tol: f64) -> bool {
        match self {
            Self::Near => (value - expected).abs() <= tol,
            Self::AtMost => value <= expected + tol,
            Self::AtLeast => value >= expected - tol,
            Self::Flag => value == expected,
        }
    }
}

impl Check {
    fn build(name: String, value: f64, expected: f64, tol: f64, provenance: Provenance, relation: Relation) -> Self {
        Self {
            name,
            value,
            expected,
            tol,
            pass: relation.holds(value, expected, tol),
            provenance,
            relation,
        }
    }

    /// Re-judges the check under a new tolerance. Flags ignore tolerances.
    pub fn set_tol(&mut self, tol: f64) {
        if self.relation != Relation::Flag {
            self.tol = tol;
            self.pass = self.relation.holds(self.value, self.expected, tol);
        }
    }

    /// `|value − expected| ≤ tol`.
    pub fn near(name: impl Into<String>, value: f64, expected: f64, tol: f64, provenance: Provenance) -> Self {
        Self::build(name.into(), value, expected, tol, provenance, Relation::Near)
    }

    /// `value ≤ bound + tol`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tol: f64, provenance: Provenance) -> Self {
        Self::build(name.into(), value, bound, tol, provenance, Relation::AtMost)
    }

    /// `value ≥ bound − tol`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64, tol: f64, provenance: Provenance) -> Self {
        Self::build(name.into(), value, bound, tol, provenance, Relation::AtLeast)
    }

    /// Boolean outcome encoded as value 1/0 against expected 1.
    pub fn flag(name: impl Into<String>, holds: bool, provenance: Provenance) -> Self {
        Self::build(name.into(), if holds { 1.0 } else { 0.0 }, 1.0, 0.0, provenance, Relation::Flag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
    /// Raw values emitted alongside the checks without a verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub name: String,
    pub value: f64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            pass: true,
            seed: None,
            assumptions: Vec::new(),
            observations: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    /// Overrides the tolerance of every check called `name`, also matching
    /// absorbed names `suite/name`. Returns how many checks matched.
    pub fn override_tol(&mut self, name: &str, tol: f64) -> usize {
        let suffix = format!("/{name}");
        let mut hits = 0;
        for check in &mut self.checks {
            if check.name == name || check.name.ends_with(&suffix) {
                check.set_tol(tol);
                hits += 1;
            }
        }
        self.pass = self.checks.iter().all(|c| c.pass);
        hits
    }

    pub fn observe(&mut self, name: impl Into<String>, value: f64) {
        self.observations.push(Observation {
            name: name.into(),
            value,
        });
    }

    pub fn assume(&mut self, assumption: impl Into<String>) {
        self.assumptions.push(assumption.into());
    }

    /// Appends every check of `other`, prefixing names with its suite.
    pub fn absorb(&mut self, other: VerificationReport) {
        for mut check in other.checks {
            check.name = format!("{}/{}", other.suite, check.name);
            self.push(check);
        }
        for mut obs in other.observations {
            obs.name = format!("{}/{}", other.suite, obs.name);
            self.observations.push(obs);
        }
        for assumption in other.assumptions {
            if !self.assumptions.contains(&assumption) {
                self.assumptions.push(assumption);
            }
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
