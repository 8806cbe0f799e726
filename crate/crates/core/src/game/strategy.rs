use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::binomial::binom_pmf;
use super::mixed::solve_mixed_probability;
use super::InfluencerGameConfig;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Tolerance for set membership of a selected probability.
const MEMBER_TOL: f64 = 1e-9;
/// Grid resolution used to bracket indifference roots before refining.
const ROOT_GRID: usize = 512;

/// A symmetric Markov strategy for susceptible influencers.
pub trait SymmetricProfile<T> {
    /// Vaccination probability at period `t` with `z` vaccinated and running cost mean `c`.
    fn decision(&self, t: usize, z: usize, c: T) -> Result<T>;
}

impl<T, F> SymmetricProfile<T> for F
where
    F: Fn(usize, usize, T) -> T,
{
    fn decision(&self, t: usize, z: usize, c: T) -> Result<T> {
        Ok(self(t, z, c))
    }
}

/// Equilibrium-consistent vaccination probabilities at a state.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSet<T> {
    /// Sorted isolated points.
    pub points: Vec<T>,
    /// Every probability in `[0, 1]` is consistent.
    pub whole_interval: bool,
}

impl<T: Scalar> ActionSet<T> {
    fn from_points(mut pts: Vec<T>) -> Self {
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-12));
        Self { points: pts, whole_interval: false }
    }

    pub fn contains(&self, p: T) -> bool {
        let tol = T::lit(MEMBER_TOL);
        if self.whole_interval {
            return p >= -tol && p <= T::one() + tol;
        }
        self.points.iter().any(|q| (*q - p).abs() <= tol)
    }

    pub fn min(&self) -> T {
        if self.whole_interval { T::zero() } else { self.points[0] }
    }

    pub fn max(&self) -> T {
        if self.whole_interval { T::one() } else { *self.points.last().expect("non-empty") }
    }
}

/// Picks a member of each state's consistent set.
#[derive(Clone)]
pub enum Selector<T> {
    /// Never vaccinate before the last period.
    WaitAndWatch,
    /// Always take the largest consistent probability.
    Eager,
    /// Arbitrary rule `(t, z, c, set) -> p`; the output must lie in the set.
    Custom(Arc<dyn Fn(usize, usize, T, &ActionSet<T>) -> T + Send + Sync>),
}

impl<T> fmt::Debug for Selector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::WaitAndWatch => f.write_str("WaitAndWatch"),
            Selector::Eager => f.write_str("Eager"),
            Selector::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Symmetric equilibrium built by backward induction over the consistent sets.
///
/// Values are computed on demand and memoised. With `k` signal atoms the number of
/// distinct cost states grows like `k^(T-2)`, so non-degenerate signals are only
/// practical for short horizons.
pub struct SpecialStrategy<T> {
    cfg: InfluencerGameConfig<T>,
    atoms: Vec<(T, T)>,
    selector: Selector<T>,
    memo: Mutex<HashMap<(usize, usize, u64), (T, T)>>,
}

impl<T: Scalar> fmt::Debug for SpecialStrategy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpecialStrategy").field("selector", &self.selector).finish_non_exhaustive()
    }
}

impl<T: Scalar> SpecialStrategy<T> {
    /// `atoms` is the discretised signal law as `(value, weight)` pairs.
    pub fn new(cfg: InfluencerGameConfig<T>, atoms: Vec<(T, T)>, selector: Selector<T>) -> Result<Self> {
        cfg.validate()?;
        if atoms.is_empty() {
            return Err(invalid("need at least one signal atom"));
        }
        let w: T = atoms.iter().map(|a| a.1).sum();
        if (w - T::one()).abs() > T::lit(1e-9) {
            return Err(invalid("atom weights must sum to one"));
        }
        Ok(Self { cfg, atoms, selector, memo: Mutex::new(HashMap::new()) })
    }

    /// Convenience constructor using the config's own signal law.
    pub fn from_config(cfg: InfluencerGameConfig<T>, n_atoms: usize, selector: Selector<T>) -> Result<Self> {
        let atoms = cfg.xi.atoms(n_atoms);
        Self::new(cfg, atoms, selector)
    }

    pub fn config(&self) -> &InfluencerGameConfig<T> {
        &self.cfg
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    fn check_state(&self, t: usize, z: usize) -> Result<()> {
        if t == 0 || t >= self.cfg.horizon {
            return Err(invalid(format!("decision period {t} outside 1..{}", self.cfg.horizon)));
        }
        if z >= self.cfg.m {
            return Err(invalid(format!("z = {z} leaves no susceptible influencer")));
        }
        Ok(())
    }

    /// Expected continuation value of a susceptible agent for each number `y` of
    /// opponents vaccinating now.
    fn continuation(&self, t: usize, z: usize, c: T) -> Result<Vec<T>> {
        let l = self.cfg.m - z - 1;
        (0..=l)
            .map(|y| {
                let mut acc = T::zero();
                for &(xi, w) in &self.atoms {
                    let c1 = InfluencerGameConfig::next_cost(t + 1, c, xi);
                    acc = acc + w * self.value(t + 1, z + y, c1)?;
                }
                Ok(acc)
            })
            .collect()
    }

    fn indifference_roots(&self, w: &[T], k: T) -> Vec<T> {
        let l = w.len() - 1;
        if l == 0 {
            return Vec::new();
        }
        let phi = |p: T| -> T { (0..=l).map(|y| binom_pmf(l, y, p) * w[y]).sum::<T>() - k };
        let mut roots = Vec::new();
        let grid: Vec<T> = (0..=ROOT_GRID).map(|i| T::count(i) / T::count(ROOT_GRID)).collect();
        let vals: Vec<T> = grid.iter().map(|&p| phi(p)).collect();
        for i in 0..ROOT_GRID {
            let (a, b) = (grid[i], grid[i + 1]);
            let (fa, fb) = (vals[i], vals[i + 1]);
            if fa == T::zero() && i > 0 {
                roots.push(a);
            }
            if fa * fb < T::zero() {
                let (mut lo, mut hi, mut flo) = (a, b, fa);
                for _ in 0..100 {
                    let mid = (lo + hi) / T::lit(2.0);
                    let fm = phi(mid);
                    if fm == T::zero() {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if (fm < T::zero()) == (flo < T::zero()) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < T::lit(1e-14) {
                        break;
                    }
                }
                roots.push((lo + hi) / T::lit(2.0));
            }
        }
        roots
    }

    /// Consistent vaccination probabilities at `(t, z, c)`.
    pub fn action_set(&self, t: usize, z: usize, c: T) -> Result<ActionSet<T>> {
        self.check_state(t, z)?;
        let cfg = &self.cfg;
        if z >= cfg.z_bar {
            return Ok(ActionSet::from_points(vec![T::zero()]));
        }
        let k = cfg.c_v + cfg.gamma(t, c) - cfg.incentive(z);
        let full = cfg.z_bar == cfg.m;
        if t == cfg.horizon - 1 {
            let set = if full {
                if k < cfg.c_i {
                    ActionSet::from_points(vec![T::one()])
                } else if k > cfg.c_i {
                    ActionSet::from_points(vec![T::zero()])
                } else {
                    ActionSet { points: Vec::new(), whole_interval: true }
                }
            } else if k <= T::zero() {
                ActionSet::from_points(vec![T::one()])
            } else if k >= cfg.c_i {
                ActionSet::from_points(vec![T::zero()])
            } else {
                let l = cfg.m - z - 1;
                let p = solve_mixed_probability(l, (cfg.z_bar - z - 1) as isize, k / cfg.c_i)?;
                ActionSet::from_points(vec![p])
            };
            return Ok(set);
        }
        let w = self.continuation(t, z, c)?;
        let mut pts = self.indifference_roots(&w, k);
        if full {
            if k <= *w.last().expect("non-empty") {
                pts.push(T::zero());
                pts.push(T::one());
            } else {
                pts = vec![T::zero()];
            }
        } else {
            pts.push(T::zero());
            if k <= T::zero() {
                pts.push(T::one());
            }
        }
        Ok(ActionSet::from_points(pts))
    }

    fn select(&self, t: usize, z: usize, c: T, set: &ActionSet<T>) -> Result<T> {
        let last = t == self.cfg.horizon - 1;
        let p = match &self.selector {
            Selector::WaitAndWatch => {
                if last {
                    if set.whole_interval { T::zero() } else { set.points[0] }
                } else {
                    T::zero()
                }
            }
            Selector::Eager => set.max(),
            Selector::Custom(f) => f(t, z, c, set),
        };
        if !set.contains(p) {
            return Err(Error::SelectorOutsideSet { t, z, value: p.as_f64() });
        }
        Ok(p)
    }

    fn eval(&self, t: usize, z: usize, c: T) -> Result<(T, T)> {
        let key = (t, z, c.as_f64().to_bits());
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(*hit);
        }
        let cfg = &self.cfg;
        let out = if z >= cfg.z_bar {
            (T::zero(), T::zero())
        } else {
            let set = self.action_set(t, z, c)?;
            let d = self.select(t, z, c, &set)?;
            let k = cfg.c_v + cfg.gamma(t, c) - cfg.incentive(z);
            let v = if t == cfg.horizon - 1 {
                k.min(cfg.c_i)
            } else if d == T::zero() {
                self.continuation(t, z, c)?[0]
            } else {
                k
            };
            (d, v)
        };
        self.memo.lock().expect("memo lock").insert(key, out);
        Ok(out)
    }

    /// Expected cost of a susceptible influencer at `(t, z, c)` when everyone follows
    /// this strategy. Returns zero once the threshold is met.
    pub fn value(&self, t: usize, z: usize, c: T) -> Result<T> {
        if t == self.cfg.horizon {
            return Ok(if z < self.cfg.z_bar { self.cfg.c_i } else { T::zero() });
        }
        self.check_state(t, z)?;
        self.eval(t, z, c).map(|(_, v)| v)
    }
}

impl<T: Scalar> SymmetricProfile<T> for SpecialStrategy<T> {
    fn decision(&self, t: usize, z: usize, c: T) -> Result<T> {
        self.check_state(t, z)?;
        self.eval(t, z, c).map(|(d, _)| d)
    }
}
