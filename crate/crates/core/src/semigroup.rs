//! Membership in numerical semigroups `SG(J) = sum_{j in J} N_0 v_j`,
//! by reachability bitsets (the coin-problem dynamic program).

use num_integer::Integer;

/// Bitset over `0..=bound` of the integers reachable as nonnegative
/// combinations of a set of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachable {
    bound: u64,
    words: Vec<u64>,
}

impl Reachable {
    /// The semigroup generated by nothing: just `{0}`.
    pub fn trivial(bound: u64) -> Self {
        let mut words = vec![0u64; (bound / 64 + 1) as usize];
        words[0] = 1;
        Self { bound, words }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn contains(&self, k: u64) -> bool {
        k <= self.bound && (self.words[(k / 64) as usize] >> (k % 64)) & 1 == 1
    }

    fn or_shifted(&mut self, shift: u64) {
        let len = self.words.len();
        let ws = (shift / 64) as usize;
        let bs = shift % 64;
        if ws >= len {
            return;
        }
        for i in (ws..len).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            self.words[i] |= w;
        }
        let tail = (self.bound + 1) % 64;
        if tail != 0 {
            self.words[len - 1] &= (1u64 << tail) - 1;
        }
    }

    /// Closes the set under adding `g`.
    pub fn add_generator(&mut self, g: u64) {
        if g == 0 {
            return;
        }
        // after the step with shift 2^i g the set is closed under
        // adding up to (2^{i+1} - 1) copies of g
        let mut shift = g;
        while shift <= self.bound {
            self.or_shifted(shift);
            shift = match shift.checked_mul(2) {
                Some(s) => s,
                None => break,
            };
        }
    }

    pub fn with_generators(bound: u64, gens: &[u64]) -> Self {
        let mut r = Self::trivial(bound);
        for &g in gens {
            r.add_generator(g);
        }
        r
    }
}

/// Semigroups of all `2^n` subsets of a generator list, up to a common bound.
/// Index `mask` holds `SG({j : bit j of mask set})`.
#[derive(Debug, Clone)]
pub struct SubsetSemigroups {
    sets: Vec<Reachable>,
}

impl SubsetSemigroups {
    pub fn new(gens: &[u64], bound: u64) -> Self {
        let n = gens.len();
        let mut sets: Vec<Reachable> = Vec::with_capacity(1 << n);
        sets.push(Reachable::trivial(bound));
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            let mut r = sets[mask & (mask - 1)].clone();
            r.add_generator(gens[low]);
            sets.push(r);
        }
        Self { sets }
    }

    pub fn get(&self, mask: usize) -> &Reachable {
        &self.sets[mask]
    }
}

/// gcd of the generators selected by every mask; `gcds[0] = 0`.
pub fn subset_gcds(gens: &[u64]) -> Vec<u64> {
    let n = gens.len();
    let mut g = vec![0u64; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        g[mask] = g[mask & (mask - 1)].gcd(&gens[low]);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive search over coefficient vectors.
    fn member_brute(gens: &[u64], k: u64) -> bool {
        match gens.split_first() {
            None => k == 0,
            Some((&g, rest)) => (0..=k / g).any(|a| member_brute(rest, k - a * g)),
        }
    }

    #[test]
    fn two_generator_examples() {
        let r = Reachable::with_generators(100, &[16, 10]);
        assert!(!r.contains(54));
        assert!(r.contains(80));
        assert!(r.contains(0));
        assert!(!r.contains(101));
    }

    #[test]
    fn matches_brute_force() {
        let gen_sets: &[&[u64]] = &[&[7], &[6, 9], &[5, 7, 11], &[64, 65], &[3, 70, 130], &[1]];
        for gens in gen_sets {
            for bound in [10u64, 63, 64, 65, 200] {
                let r = Reachable::with_generators(bound, gens);
                for k in 0..=bound {
                    assert_eq!(r.contains(k), member_brute(gens, k), "{gens:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn subset_tables() {
        let gens = [27u64, 16, 10, 1];
        let t = SubsetSemigroups::new(&gens, 81);
        assert!(!t.get(0b0110).contains(54));
        assert!(t.get(0b0110).contains(80));
        assert!(t.get(0b1000).contains(17));
        assert_eq!(subset_gcds(&gens)[0b0110], 2);
        assert_eq!(subset_gcds(&gens)[0b0011], 1);
    }

    proptest::proptest! {
        #[test]
        fn random_generators(gens in proptest::collection::vec(1u64..40, 1..4), k in 0u64..150) {
            let r = Reachable::with_generators(150, &gens);
            proptest::prop_assert_eq!(r.contains(k), member_brute(&gens, k));
        }
    }
}
