//! Streaming simulation of a single path: no arrays, and the loop ends at
//! the first default.

use super::config::{Monitoring, SimConfig};
use super::rng::{randomisation_draws, Noise, Step};
use crate::equilibrium::EquilibriumSolution;
use crate::strategy::{first_mover, GapRule, Player};

/// Whether cash moving from `prev` to `end` over `len` hit zero.
fn crossed(prev: f64, end: f64, len: f64, sigma: f64, u: f64) -> bool {
    end <= 0.0 || (u < 1.0 && prev > 0.0 && u < (-2.0 * prev * end / (sigma * sigma * len)).exp())
}

/// Leader reflecting at `barrier` and follower paying by `rule`, in terms of
/// the leader's uncontrolled cash `xu`. The follower's uncontrolled cash is
/// `xu + gap0`. With `both` set each firm reflects on its own.
struct Duel<'a> {
    barrier: f64,
    gap0: f64,
    rule: &'a dyn GapRule,
    both: bool,
    l: f64,
    d: f64,
}

#[derive(Debug, Default)]
struct Move {
    leader_pay: f64,
    follower_pay: f64,
    leader_down: bool,
    follower_down: bool,
}

impl Duel<'_> {
    fn start(&mut self, xu: f64) -> Move {
        self.l = (xu - self.barrier).max(0.0);
        self.d = if self.both {
            self.l
        } else {
            (self.gap0 + self.l - self.rule.level(xu - self.l)).max(0.0)
        };
        Move {
            leader_pay: self.l,
            follower_pay: self.d,
            leader_down: xu - self.l <= 0.0,
            follower_down: xu + self.gap0 - self.d <= 0.0,
        }
    }

    fn advance(&mut self, xu_prev: f64, xu_max: f64, xu_end: f64, s: &Step, len: f64, sigma: f64) -> Move {
        let (l_old, d_old) = (self.l, self.d);
        self.l = self.l.max(xu_max - self.barrier);
        self.d = if self.both {
            self.l
        } else {
            self.d.max(self.gap0 + self.l - self.rule.level(xu_max - self.l))
        };
        let leader_down = crossed(xu_prev - l_old, xu_end - self.l, len, sigma, s.u_cross);
        let follower_down = crossed(
            xu_prev + self.gap0 - d_old,
            xu_end + self.gap0 - self.d,
            len,
            sigma,
            s.u_cross,
        );
        Move {
            leader_pay: self.l - l_old,
            follower_pay: self.d - d_old,
            leader_down,
            follower_down,
        }
    }

    /// `Y - X`.
    fn gap(&self) -> f64 {
        self.gap0 + self.l - self.d
    }
}

/// Leader and follower payoffs of one path.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DuelPath {
    pub leader: f64,
    pub follower: f64,
    /// The follower defaulted no later than the leader.
    pub follower_first: bool,
}

/// Runs `duel` from grid index `k0` (where `start` has already been applied)
/// and returns the discounted payoffs it generates from then on, including
/// the survivor's continuation.
fn run_duel(
    cfg: &SimConfig,
    eq: &EquilibriumSolution,
    noise: &mut Noise,
    duel: &mut Duel,
    x: f64,
    mut xu: f64,
    k0: usize,
) -> DuelPath {
    let p = &cfg.params;
    let bridge = cfg.monitoring == Monitoring::Bridge;
    let mut out = DuelPath::default();
    for _ in k0..cfg.n_steps() {
        let s = noise.step();
        let xu_end = x + p.mu0 * s.t + p.sigma * s.b;
        let xu_max = if bridge { (xu + s.rise).max(xu_end) } else { xu_end };
        let m = duel.advance(xu, xu_max, xu_end, &s, cfg.dt, p.sigma);
        xu = xu_end;
        // Between grid points the bridge does not say when the payment or
        // default happened; the midpoint is exact to second order.
        let t_event = if bridge { s.t - 0.5 * cfg.dt } else { s.t };
        if m.leader_pay > 0.0 || m.follower_pay > 0.0 {
            let disc = (-p.r * t_event).exp();
            out.leader += disc * m.leader_pay;
            out.follower += disc * m.follower_pay;
        }
        if m.leader_down || m.follower_down {
            let disc = (-p.r * t_event).exp();
            let z = duel.gap();
            match (m.leader_down, m.follower_down) {
                (true, false) => {
                    let y = if bridge { z } else { xu_end - duel.l + z };
                    out.follower += disc * eq.v_hat(y.max(0.0));
                }
                (false, true) => {
                    let xs = if bridge { -z } else { xu_end - duel.l };
                    out.leader += disc * eq.v_hat(xs.max(0.0));
                    out.follower_first = true;
                }
                _ => out.follower_first = true,
            }
            return out;
        }
    }
    out
}

/// Asymmetric game on path `index`: firm 1 (cash `x0`) reflects at
/// `barrier`, firm 2 (cash `y0`) follows `rule`.
pub fn simulate_duel(
    cfg: &SimConfig,
    eq: &EquilibriumSolution,
    barrier: f64,
    rule: &dyn GapRule,
    index: u64,
) -> DuelPath {
    let mut noise = Noise::new(cfg, index);
    let mut duel = Duel {
        barrier,
        gap0: cfg.y0 - cfg.x0,
        rule,
        both: false,
        l: 0.0,
        d: 0.0,
    };
    let m = duel.start(cfg.x0);
    let mut out = DuelPath {
        leader: m.leader_pay,
        follower: m.follower_pay,
        follower_first: false,
    };
    match (m.leader_down, m.follower_down) {
        (false, false) => {}
        (true, false) => {
            out.follower += eq.v_hat((cfg.y0 - duel.d).max(0.0));
            return out;
        }
        (false, true) => {
            out.leader += eq.v_hat((cfg.x0 - duel.l).max(0.0));
            out.follower_first = true;
            return out;
        }
        (true, true) => {
            out.follower_first = true;
            return out;
        }
    }
    let rest = run_duel(cfg, eq, &mut noise, &mut duel, cfg.x0, cfg.x0, 0);
    out.leader += rest.leader;
    out.follower += rest.follower;
    out.follower_first = rest.follower_first;
    out
}

/// One path of the symmetric randomised game.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SymmetricPath {
    pub j1: f64,
    pub j2: f64,
    /// Values of the roles at the first move, discounted to time 0.
    pub closed1: f64,
    pub closed2: f64,
    pub leader: Option<Player>,
    pub activation: Option<usize>,
}

/// Follower value when both firms hold `x` and the other one starts paying.
pub(crate) fn follower_on_diagonal(eq: &EquilibriumSolution, x: f64) -> f64 {
    if x >= eq.a0() {
        eq.v2_at_a0(x)
    } else {
        eq.u_given_b(x.max(0.0), 0.0, eq.boundary.eval(x.max(0.0)))
    }
}

/// Symmetric game from `x0 = y0 = cfg.x0` on path `index`.
pub fn simulate_symmetric(cfg: &SimConfig, eq: &EquilibriumSolution, index: u64) -> SymmetricPath {
    let p = &cfg.params;
    let x = cfg.x0;
    let (u1, u2) = randomisation_draws(cfg.seed, index);
    let mut noise = Noise::new(cfg, index);
    let mut xu = x;
    let mut integral = 0.0;
    let mut prev = eq.intensity(x);
    let mut out = SymmetricPath::default();
    let n = cfg.n_steps();
    if x <= 0.0 {
        return out;
    }
    for k in 0..=n {
        let mut t = 0.0;
        if k > 0 {
            let s = noise.step();
            let xu_end = x + p.mu0 * s.t + p.sigma * s.b;
            if crossed(xu, xu_end, cfg.dt, p.sigma, s.u_cross) {
                return out;
            }
            xu = xu_end;
            t = s.t;
            let cur = eq.intensity(xu);
            integral += 0.5 * cfg.dt * (prev + cur);
            prev = cur;
        }
        let gamma = -(-integral).exp_m1();
        let hit = |u: f64| (u < 1.0 && gamma >= u).then_some(k);
        let Some((_, who)) = first_mover(hit(u1), hit(u2), u1, u2) else {
            continue;
        };
        out.activation = Some(k);
        out.leader = who;
        let disc = (-p.r * t).exp();
        let (lead_value, follow_value) = (eq.v0(xu), follower_on_diagonal(eq, xu));
        let mut duel = Duel {
            barrier: eq.a0(),
            gap0: 0.0,
            rule: &eq.boundary,
            both: who.is_none(),
            l: 0.0,
            d: 0.0,
        };
        let m = duel.start(xu);
        let mut lead = disc * m.leader_pay;
        let mut follow = disc * m.follower_pay;
        if !(m.leader_down || m.follower_down) {
            let rest = run_duel(cfg, eq, &mut noise, &mut duel, x, xu, k);
            lead += rest.leader;
            follow += rest.follower;
        }
        match who {
            Some(Player::One) => {
                out.j1 = lead;
                out.j2 = follow;
                out.closed1 = disc * lead_value;
                out.closed2 = disc * follow_value;
            }
            Some(Player::Two) => {
                out.j1 = follow;
                out.j2 = lead;
                out.closed1 = disc * follow_value;
                out.closed2 = disc * lead_value;
            }
            None => {
                out.j1 = lead;
                out.j2 = follow;
            }
        }
        return out;
    }
    out
}

/// When a firm that is not randomising moves first.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "level")]
pub enum StoppingRule {
    /// Move at once.
    Zero,
    /// Never move before the horizon.
    Horizon,
    /// Move the first time uncontrolled cash reaches the level on the grid.
    FirstHitting(f64),
}

/// Payoff of a firm that moves by `rule` against an opponent using the
/// equilibrium randomisation, with the opponent's draw integrated out.
pub fn simulate_indifference(cfg: &SimConfig, eq: &EquilibriumSolution, rule: StoppingRule, index: u64) -> f64 {
    let p = &cfg.params;
    let x = cfg.x0;
    let stops_at = |xu: f64| match rule {
        StoppingRule::Zero => true,
        StoppingRule::Horizon => false,
        StoppingRule::FirstHitting(level) => xu >= level,
    };
    if x <= 0.0 {
        return 0.0;
    }
    if stops_at(x) {
        return eq.v0(x);
    }
    let mut noise = Noise::new(cfg, index);
    let mut xu = x;
    let mut prev_rate = eq.intensity(x);
    let mut prev_value = follower_on_diagonal(eq, x);
    let mut survival = 1.0;
    let mut integral = 0.0;
    let mut total = 0.0;
    let n = cfg.n_steps();
    for k in 1..=n {
        let s = noise.step();
        let xu_end = x + p.mu0 * s.t + p.sigma * s.b;
        let down = crossed(xu, xu_end, cfg.dt, p.sigma, s.u_cross);
        xu = xu_end;
        let t_new = s.t;
        let rate = eq.intensity(xu);
        integral += 0.5 * cfg.dt * (prev_rate + rate);
        let s_new = (-integral).exp();
        let value = (-p.r * t_new).exp() * follower_on_diagonal(eq, xu.max(0.0));
        let ds = survival - s_new;
        if ds > 0.0 {
            total += ds * 0.5 * (prev_value + value);
        }
        survival = s_new;
        prev_rate = rate;
        prev_value = value;
        // What is left is below `1e-16` of a bounded payoff.
        if down || survival < 1e-16 {
            return total;
        }
        if stops_at(xu) || (k == n && rule == StoppingRule::Horizon) {
            return total + survival * (-p.r * t_new).exp() * eq.v0(xu);
        }
    }
    total
}
