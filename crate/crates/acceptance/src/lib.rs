//! Runner for the acceptance gate: every criterion is timed against its
//! budget and reported on one line.

use std::fmt;
use std::time::{Duration, Instant};

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Outcome {
    pub fn over_budget(&self) -> bool {
        self.budget.is_some_and(|b| self.elapsed > b)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.over_budget()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {} [{}] {verdict} in {:.2?}", self.id, self.title, self.elapsed)?;
        if let Some(b) = self.budget {
            write!(f, " (budget {b:?})")?;
        }
        for line in &self.failures {
            write!(f, "\n    {line}")?;
        }
        Ok(())
    }
}

/// Collects failure messages for one criterion.
#[derive(Debug, Default)]
pub struct Checks {
    failures: Vec<String>,
}

impl Checks {
    pub fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(message());
        }
    }

    pub fn fail(&mut self, message: String) {
        self.failures.push(message);
    }
}

#[derive(Debug, Default)]
pub struct Gate {
    outcomes: Vec<Outcome>,
}

impl Gate {
    /// Runs `body`, prints its verdict line and records it.
    pub fn criterion(
        &mut self,
        id: u32,
        title: &'static str,
        budget: Option<Duration>,
        body: impl FnOnce(&mut Checks),
    ) {
        let mut checks = Checks::default();
        let start = Instant::now();
        body(&mut checks);
        let outcome = Outcome { id, title, failures: checks.failures, elapsed: start.elapsed(), budget };
        println!("{outcome}");
        self.outcomes.push(outcome);
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Prints the summary line; returns whether every criterion passed.
    pub fn finish(&self) -> bool {
        let passed = self.outcomes.iter().filter(|o| o.passed()).count();
        println!("acceptance: {passed}/{} criteria passed", self.outcomes.len());
        passed == self.outcomes.len()
    }
}
