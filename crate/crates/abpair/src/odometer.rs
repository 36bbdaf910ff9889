//! Mixed-radix counter backing every exhaustive enumeration in the crate.
//! States are visited in lexicographic order, least significant digit last.

pub(crate) struct Odometer {
    radices: Vec<u64>,
    digits: Vec<u64>,
}

impl Odometer {
    /// All radices must be >= 1. A radix-1 digit is pinned at zero.
    pub fn new(radices: Vec<u64>) -> Self {
        debug_assert!(radices.iter().all(|&r| r >= 1));
        let digits = vec![0; radices.len()];
        Odometer { radices, digits }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Total number of states, saturating on overflow.
    pub fn state_count(radices: &[u64]) -> u128 {
        radices
            .iter()
            .fold(1u128, |acc, &r| acc.saturating_mul(r as u128))
    }

    /// Step to the next state. Returns the index of the leftmost digit that
    /// changed, or None once every state has been visited.
    pub fn advance(&mut self) -> Option<usize> {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radices[i] {
                return Some(i);
            }
            self.digits[i] = 0;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_all_states_in_lex_order() {
        let mut odo = Odometer::new(vec![2, 1, 3]);
        let mut seen = vec![odo.digits().to_vec()];
        while odo.advance().is_some() {
            seen.push(odo.digits().to_vec());
        }
        assert_eq!(seen.len(), 6);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted, "lexicographic order");
        assert_eq!(seen[0], vec![0, 0, 0]);
        assert_eq!(seen[5], vec![1, 0, 2]);
    }

    #[test]
    fn empty_odometer_has_one_state() {
        let mut odo = Odometer::new(vec![]);
        assert_eq!(odo.digits().len(), 0);
        assert!(odo.advance().is_none());
        assert_eq!(Odometer::state_count(&[]), 1);
    }
}
