use serde::Serialize;

/// One inequality `lhs < rhs`, both sides in bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintEntry {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    /// The left side is an entropy equal to zero: nothing has to be sent,
    /// so the constraint holds whatever the right side.
    pub vacuous: bool,
}

impl ConstraintEntry {
    /// Source-entropy constraint `H < I`. A zero entropy needs no rate.
    pub fn rate(label: &'static str, lhs: f64, rhs: f64) -> Self {
        let vacuous = lhs == 0.0;
        let slack = rhs - lhs;
        Self {
            label,
            lhs,
            rhs,
            slack,
            satisfied: vacuous || slack > 0.0,
            vacuous,
        }
    }

    /// Plain strict inequality `lhs < rhs`.
    pub fn strict(label: &'static str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            label,
            lhs,
            rhs,
            slack,
            satisfied: slack > 0.0,
            vacuous: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub entries: Vec<ConstraintEntry>,
    pub feasible: bool,
}

impl ConstraintReport {
    pub fn new(entries: Vec<ConstraintEntry>) -> Self {
        let feasible = entries.iter().all(|e| e.satisfied);
        Self { entries, feasible }
    }

    pub fn get(&self, label: &str) -> Option<&ConstraintEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    /// Smallest slack over every entry.
    pub fn min_slack(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.slack)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest slack over entries that actually constrain anything;
    /// positive exactly when the report is feasible.
    pub fn margin(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| !e.vacuous)
            .map(|e| e.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_equality_is_infeasible() {
        let r = ConstraintReport::new(vec![ConstraintEntry::rate("A", 1.0, 1.0)]);
        assert!(!r.feasible);
        assert_eq!(r.margin(), 0.0);
    }

    #[test]
    fn zero_entropy_is_vacuous() {
        let r = ConstraintReport::new(vec![
            ConstraintEntry::rate("A", 0.0, 0.0),
            ConstraintEntry::rate("B", 0.5, 0.75),
        ]);
        assert!(r.feasible);
        assert_eq!(r.min_slack(), 0.0);
        assert_eq!(r.margin(), 0.25);
    }

    #[test]
    fn strict_entries_are_never_vacuous() {
        let e = ConstraintEntry::strict("F", 0.0, 0.0);
        assert!(!e.satisfied);
    }
}
