use std::fmt;

/// Located defect of a checked identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub arity: usize,
    pub at: String,
    pub defect: String,
}

/// Outcome of a relation check. Only the first few failures are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

const KEEP: usize = 8;

impl RelationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }

    pub fn ok(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, arity: usize, at: impl Into<String>, defect: impl fmt::Display) {
        self.checked += 1;
        self.failed += 1;
        if self.failures.len() < KEEP {
            self.failures.push(Failure {
                arity,
                at: at.into(),
                defect: defect.to_string(),
            });
        }
    }

    /// Records a check that passes exactly when `defect_is_zero`.
    pub fn record(
        &mut self,
        arity: usize,
        defect_is_zero: bool,
        at: impl FnOnce() -> String,
        defect: impl FnOnce() -> String,
    ) {
        if defect_is_zero {
            self.ok();
        } else {
            self.fail(arity, at(), defect());
        }
    }

    pub fn merge(&mut self, other: RelationReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEEP {
                self.failures.push(f);
            }
        }
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{}: {} ({} checked, {} failed)",
            self.name, verdict, self.checked, self.failed
        )?;
        for x in &self.failures {
            writeln!(f, "  arity {} at {}: {}", x.arity, x.at, x.defect)?;
        }
        if self.failed > self.failures.len() {
            writeln!(f, "  ... {} more", self.failed - self.failures.len())?;
        }
        Ok(())
    }
}
