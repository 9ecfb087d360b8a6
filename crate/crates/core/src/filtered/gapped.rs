use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::Energy;
use crate::graded::Scalar;
use crate::report::RelationReport;

/// Submonoid of `ℚ≥0 × 2ℤ` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GappedMonoid {
    pub generators: Vec<Energy>,
}

impl GappedMonoid {
    pub fn new(generators: impl IntoIterator<Item = Energy>) -> Self {
        Self {
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        }
    }

    /// Elements of energy at most `cap`, or `None` when that set is infinite
    /// (a nonzero generator of energy zero).
    pub fn closure(&self, cap: &Scalar) -> Option<BTreeSet<Energy>> {
        if self.generators.iter().any(|g| g.lambda.is_zero()) {
            return None;
        }
        let mut seen = BTreeSet::from([Energy::zero()]);
        let mut frontier = vec![Energy::zero()];
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let y = &x + g;
                if &y.lambda <= cap && seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Some(seen)
    }

    /// Number of elements over each energy below the cap.
    pub fn fibers(&self, cap: &Scalar) -> Option<BTreeMap<Scalar, usize>> {
        let mut out = BTreeMap::new();
        for e in self.closure(cap)? {
            *out.entry(e.lambda).or_insert(0) += 1;
        }
        Some(out)
    }
}

/// Discreteness of energies, `G ∩ ({0} × 2ℤ) = {(0,0)}` and finite fibers, on
/// the part of the closure below the cap.
pub fn check_gapped(g: &GappedMonoid, cap: &Scalar) -> RelationReport {
    let mut rep = RelationReport::new("gapped monoid");
    let zero_level: Vec<&Energy> = g.generators.iter().filter(|e| e.lambda.is_zero()).collect();
    for e in &g.generators {
        rep.record(
            0,
            !e.lambda.is_negative(),
            || format!("generator {e}"),
            || "negative energy".into(),
        );
    }
    rep.record(
        0,
        zero_level.is_empty(),
        || "condition (2)".into(),
        || format!("energy-zero generator {}", zero_level[0]),
    );
    match g.fibers(cap) {
        Some(fibers) => {
            // below the cap the closure is finite, so energies are discrete and fibers finite
            rep.record(
                0,
                !fibers.is_empty(),
                || "condition (1)".into(),
                String::new,
            );
            for (lambda, size) in fibers {
                rep.record(0, size > 0, || format!("fiber over {lambda}"), String::new);
            }
        }
        None => rep.fail(
            0,
            "conditions (1) and (3)",
            "closure below the cap is infinite",
        ),
    }
    rep
}
