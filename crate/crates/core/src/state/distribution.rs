/// Computational-basis outcome probabilities of an ordered qubit subset.
///
/// Entry `b` is the probability that the listed qubits read the bits of `b`,
/// first listed qubit in the most significant position. Distributions taken
/// from a lossy state sum to less than one.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    qubits: Vec<usize>,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(qubits: Vec<usize>, probabilities: Vec<f64>) -> Self {
        assert_eq!(probabilities.len(), 1 << qubits.len(), "length must be 2^k");
        OutcomeDistribution { qubits, probabilities }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, outcome: usize) -> f64 {
        self.probabilities[outcome]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Largest probability among outcomes other than `excluded`.
    pub fn max_excluding(&self, excluded: usize) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != excluded)
            .map(|(_, &p)| p)
            .fold(0.0, f64::max)
    }
}
