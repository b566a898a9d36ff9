use crate::decimal::Rational;

/// Raw counts of one candidate over a log, with the derived ratios.
///
/// Equality is on the counts, so two evaluations agree exactly or not at all.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstraintMetrics {
    pub activation_count: u64,
    pub fulfilment_count: u64,
    /// Traces holding at least one activation.
    pub condition_traces: u64,
    pub total_traces: u64,
}

impl ConstraintMetrics {
    /// Fulfilments per activation; zero when nothing activates.
    pub fn support(&self) -> Rational {
        if self.activation_count == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(self.fulfilment_count, self.activation_count)
        }
    }

    pub fn condition_trace_fraction(&self) -> Rational {
        if self.total_traces == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(self.condition_traces, self.total_traces)
        }
    }

    pub fn confidence(&self) -> Rational {
        if self.activation_count == 0 {
            return Rational::from_integer(0);
        }
        self.support() * self.condition_trace_fraction()
    }

    pub(crate) fn add_trace(&mut self, activations: u64, fulfilments: u64) {
        if activations > 0 {
            self.activation_count += activations;
            self.fulfilment_count += fulfilments;
            self.condition_traces += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        let m = ConstraintMetrics {
            activation_count: 4,
            fulfilment_count: 3,
            condition_traces: 3,
            total_traces: 4,
        };
        assert_eq!(m.support(), Rational::new(3, 4));
        assert_eq!(m.confidence(), Rational::new(9, 16));
        assert!(m.confidence() <= m.support());
    }

    #[test]
    fn no_activations_means_zero() {
        let m = ConstraintMetrics {
            total_traces: 5,
            ..Default::default()
        };
        assert_eq!(m.support(), Rational::from_integer(0));
        assert_eq!(m.confidence(), Rational::from_integer(0));
        assert_eq!(m.condition_trace_fraction(), Rational::from_integer(0));
    }
}
