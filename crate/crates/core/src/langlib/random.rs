use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Automaton, Description, Mode, Rhs};

#[derive(Debug, Clone, Copy)]
pub struct RandomSpec {
    pub max_states: usize,
    pub max_letters: usize,
    pub max_stack: usize,
    pub mode: Mode,
    /// Probability that a given table entry is defined.
    pub density: f64,
    /// Probability that a defined entry is `accept`.
    pub accept_rate: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_states: 4,
            max_letters: 3,
            max_stack: 2,
            mode: Mode::Returning,
            density: 0.45,
            accept_rate: 0.15,
        }
    }
}

/// A valid random machine, fully determined by `seed`.
pub fn random_machine(seed: u64, spec: RandomSpec) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nq = rng.gen_range(1..=spec.max_states);
    let nl = rng.gen_range(1..=spec.max_letters);
    let ns = rng.gen_range(1..=spec.max_stack.max(1));
    let states: Vec<String> = (0..nq).map(|i| format!("q{i}")).collect();
    let letters: Vec<String> = ["a", "b", "c", "d", "e", "f"][..nl].iter().map(|s| s.to_string()).collect();
    let stack: Vec<String> = (0..ns).map(|i| format!("Z{i}")).collect();

    let mut d = Description::new(spec.mode);
    for l in &letters {
        match rng.gen_range(0..3) {
            0 => d.push_letters.push(l.clone()),
            1 => d.pop_letters.push(l.clone()),
            _ => d.state_letters.push(l.clone()),
        }
    }
    d.stack = stack.clone();
    d.states = states.clone();
    d.initial = Some(states[0].clone());
    for q in &states {
        let tau: Vec<&str> = letters
            .iter()
            .filter(|_| rng.gen_bool(0.3))
            .map(String::as_str)
            .collect();
        d.translucent(q, &tau);
    }
    let tops: Vec<String> = std::iter::once("_".to_string()).chain(stack.iter().cloned()).collect();
    let inputs: Vec<String> = letters.iter().cloned().chain(std::iter::once("end".to_string())).collect();
    for q in &states {
        for x in &inputs {
            for z in &tops {
                if !rng.gen_bool(spec.density) {
                    continue;
                }
                if rng.gen_bool(spec.accept_rate) {
                    d.accept(q, x, z);
                    continue;
                }
                let fanout = if rng.gen_bool(0.7) { 1 } else { 2 };
                for _ in 0..fanout {
                    let p = states.choose(&mut rng).unwrap().clone();
                    let rhs = if d.push_letters.contains(x) {
                        Rhs::Push {
                            state: p,
                            symbol: stack.choose(&mut rng).unwrap().clone(),
                        }
                    } else if d.pop_letters.contains(x) {
                        Rhs::Pop { state: p }
                    } else {
                        Rhs::Stay { state: p }
                    };
                    d.trans(q, x, z, rhs);
                }
            }
        }
    }
    d.validate().expect("generated machines are well formed").0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible_and_bounded() {
        for seed in 0..50 {
            let m = random_machine(seed, RandomSpec::default());
            assert_eq!(m, random_machine(seed, RandomSpec::default()));
            assert!(m.state_count() <= 4 && m.letter_count() <= 3 && m.stack_count() <= 2);
        }
    }
}
