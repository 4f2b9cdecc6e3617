//! The binary product-choice game between the two data buyers.
//!
//! Two players each pick one of two actions after a binary state realizes.
//! Matching the state earns unit market share; a matching opponent costs
//! `alpha` of it. Each buyer's payoff scales her share by a private type.

use crate::dist::TypeDistribution;
use crate::error::{Error, Result};

/// One of the two data buyers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub const BOTH: [Player; 2] = [Player::One, Player::Two];
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Player::One => write!(f, "player 1"),
            Player::Two => write!(f, "player 2"),
        }
    }
}

/// Realized binary state of the world.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct State(pub bool);

impl State {
    pub fn flip(self) -> Self {
        State(!self.0)
    }
}

/// A pure action pair in the downstream game; each action is one of the two
/// product choices, identified with the state it matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActionProfile {
    pub a1: bool,
    pub a2: bool,
}

impl ActionProfile {
    pub fn new(a1: bool, a2: bool) -> Self {
        ActionProfile { a1, a2 }
    }

    pub fn action(&self, player: Player) -> bool {
        match player {
            Player::One => self.a1,
            Player::Two => self.a2,
        }
    }

    /// All four pure profiles, in (a1, a2) lexicographic order.
    pub fn all() -> [ActionProfile; 4] {
        [
            ActionProfile::new(false, false),
            ActionProfile::new(false, true),
            ActionProfile::new(true, false),
            ActionProfile::new(true, true),
        ]
    }
}

/// Market primitives: competition intensity, state prior, and the shared
/// i.i.d. type distribution of the two buyers.
///
/// Derived quantities (`p_max`, the obedience threshold) are always computed
/// from these fields, never stored.
#[derive(Clone, Debug)]
pub struct GameSpec {
    alpha: f64,
    prior_theta1: f64,
    dist: TypeDistribution,
}

impl GameSpec {
    pub fn new(alpha: f64, prior_theta1: f64, dist: TypeDistribution) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "competition intensity must be a finite non-negative real, got {alpha}"
            )));
        }
        if !(prior_theta1 > 0.0 && prior_theta1 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "state prior must lie strictly inside (0, 1), got {prior_theta1}"
            )));
        }
        Ok(GameSpec { alpha, prior_theta1, dist })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn prior_theta1(&self) -> f64 {
        self.prior_theta1
    }

    pub fn dist(&self) -> &TypeDistribution {
        &self.dist
    }

    /// Probability of the ex-ante most likely state.
    pub fn p_max(&self) -> f64 {
        self.prior_theta1.max(1.0 - self.prior_theta1)
    }

    /// The obedience threshold type: the quantile of the type distribution
    /// at `p_max`. An opponent below it always receives the correct
    /// recommendation in the optimal mechanisms.
    pub fn obedience_threshold(&self) -> f64 {
        self.dist
            .quantile(self.p_max())
            .expect("p_max lies in [1/2, 1)")
    }

    /// The non-participant's best guaranteed interim share when the opponent
    /// learns the state with probability one: `p_max - alpha`.
    pub fn outside_option_share(&self) -> f64 {
        self.p_max() - self.alpha
    }

    /// Market share of `player` under profile `a` in state `s`:
    /// an indicator for matching the state, minus `alpha` times the
    /// opponent's indicator.
    pub fn market_share(&self, player: Player, a: ActionProfile, s: State) -> f64 {
        let own = (a.action(player) == s.0) as u8 as f64;
        let opp = (a.action(player.other()) == s.0) as u8 as f64;
        own - self.alpha * opp
    }

    /// Payoff of `player` with type `v`: the type scales the market share.
    pub fn utility(&self, player: Player, v: f64, a: ActionProfile, s: State) -> f64 {
        v * self.market_share(player, a, s)
    }
}
