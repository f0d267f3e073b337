use crate::best_response::best_response;
use crate::game::{GameTree, Player};
use crate::policy::{realization_mix, JointPolicy};
use crate::scalar::Real;
use crate::solvers::{Algorithm, Solver};
use crate::values::ValueError;

/// Extensive-form fictitious play in behavioral form.
///
/// Iteration `t` mixes each player's average policy with a best response to
/// the opponent's average using weight `λ_t = 1/t`, applied per infostate
/// in proportion to the two policies' own realization probabilities. This
/// matches the mixed-strategy average of classical fictitious play.
#[derive(Clone, Debug)]
pub struct Xfp<'a, T> {
    tree: &'a GameTree,
    average: JointPolicy<T>,
    iteration: usize,
}

impl<'a, T: Real> Xfp<'a, T> {
    pub fn new(tree: &'a GameTree) -> Self {
        Self::from_policy(tree, JointPolicy::uniform(tree))
    }

    pub fn from_policy(tree: &'a GameTree, initial: JointPolicy<T>) -> Self {
        Xfp {
            tree,
            average: initial,
            iteration: 0,
        }
    }
}

impl<T: Real> Solver<T> for Xfp<'_, T> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Xfp
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn step(&mut self) -> Result<(), ValueError> {
        let t = self.iteration + 1;
        let lambda = T::one() / T::from_count(t);
        let b0 = best_response(self.tree, &self.average[Player::P1], Player::P0)?;
        let b1 = best_response(self.tree, &self.average[Player::P0], Player::P1)?;
        for (p, b) in [(Player::P0, b0), (Player::P1, b1)] {
            self.average[p] = realization_mix(self.tree, &self.average[p], &b.policy, lambda);
        }
        self.iteration = t;
        Ok(())
    }

    fn current_policy(&self) -> JointPolicy<T> {
        self.average.clone()
    }
}
