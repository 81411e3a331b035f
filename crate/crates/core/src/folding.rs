//! Foldings of a lambda-chain: signed root sequences `(gamma_i, eps_i)`,
//! their level sequences, and the weight and Weyl element attached to a
//! position set.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::lambda_chain::LambdaChain;
use crate::root_system::{fmt_q_full, Root, RootSystem, Weight, WeylElement, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldEntry {
    /// The signed root `gamma_i`.
    pub root: Root,
    /// Index of `|gamma_i|` among the positive roots.
    pub root_index: usize,
    pub positive: bool,
    /// `-1` exactly at the folding positions.
    pub epsilon: i64,
    pub level: i64,
}

impl FoldEntry {
    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug)]
pub struct Folding {
    rs: Arc<RootSystem>,
    positions: Vec<usize>,
    entries: Vec<FoldEntry>,
    gamma_infinity: Weight,
}

/// Builds `Gamma(J)` from the chain by running the prefix products of the
/// reflections at the folding positions.
pub fn folding_of(chain: &LambdaChain, positions: &[usize]) -> Result<Folding> {
    chain.check_subset(positions)?;
    let rs = chain.root_system();
    let mut w = rs.identity();
    let mut next = positions.iter().peekable();
    let mut entries = Vec::with_capacity(chain.len());
    for i in 0..chain.len() {
        let beta = chain.root_index(i);
        let (root_index, positive) = rs.apply_root_idx(&w, beta);
        let folded = next.peek() == Some(&&i);
        if folded {
            next.next();
            w = rs.compose(&w, rs.reflection(beta));
        }
        entries.push(FoldEntry {
            root: signed(rs, root_index, positive),
            root_index,
            positive,
            epsilon: if folded { -1 } else { 1 },
            level: 0,
        });
    }
    let gamma_infinity = rs.apply_weight(&w, &Weight::rho(rs.rank()));
    let mut folding = Folding {
        rs: rs.clone(),
        positions: positions.to_vec(),
        entries,
        gamma_infinity,
    };
    folding.recompute_levels();
    Ok(folding)
}

fn signed(rs: &RootSystem, idx: usize, positive: bool) -> Root {
    if positive {
        rs.root(idx).clone()
    } else {
        -rs.root(idx)
    }
}

/// `mu(J)`: the affine reflections `s_{beta_j, l_j}` of the unfolded chain,
/// for `j` in `J`, applied to `lambda` from the largest position down.
pub fn weight_mu(chain: &LambdaChain, positions: &[usize]) -> Result<Weight> {
    chain.check_subset(positions)?;
    let rs = chain.root_system();
    Ok(positions.iter().rev().fold(chain.lambda().clone(), |mu, &j| {
        rs.affine_reflect(chain.root(j), Q::from_integer(chain.initial_level(j)), &mu)
    }))
}

/// `kappa(J)`: the product of the reflections `s_{beta_j}` in increasing
/// position order.
pub fn kappa(chain: &LambdaChain, positions: &[usize]) -> Result<WeylElement> {
    chain.check_subset(positions)?;
    let rs = chain.root_system();
    Ok(positions.iter().fold(rs.identity(), |w, &j| {
        rs.compose(&w, rs.reflection(chain.root_index(j)))
    }))
}

impl Folding {
    fn recompute_levels(&mut self) {
        let mut running = vec![0i64; self.rs.num_positive()];
        for e in &mut self.entries {
            let offset = if e.positive { 0 } else { -1 };
            e.level = offset + running[e.root_index];
            if e.epsilon == 1 {
                running[e.root_index] += e.sign();
            }
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn entries(&self) -> &[FoldEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn gamma_infinity(&self) -> &Weight {
        &self.gamma_infinity
    }

    pub fn levels(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.level).collect()
    }

    /// Positions `i` with `gamma_i = +-alpha` (the set `I_alpha`).
    pub fn occurrences(&self, alpha: usize) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&i| self.entries[i].root_index == alpha)
            .collect()
    }

    /// Sign of `<gamma_infinity, alpha^vee>`; never zero since the weight is
    /// regular.
    pub fn final_sign(&self, alpha: usize) -> i64 {
        if self.rs.pairing_idx(&self.gamma_infinity, alpha).is_positive() {
            1
        } else {
            -1
        }
    }

    /// The folding operator at position `i`, applied directly to the signed
    /// sequence: entries after `i` are reflected by `s_{gamma_i}`, the sign at
    /// `i` flips, and levels are recounted.
    pub fn fold_at(&self, i: usize) -> Folding {
        let rs = &self.rs;
        let t = rs.reflection(self.entries[i].root_index);
        let mut entries = self.entries.clone();
        entries[i].epsilon = -entries[i].epsilon;
        for e in entries.iter_mut().skip(i + 1) {
            let img = rs.apply_root(t, &e.root);
            let (idx, positive) = rs.signed_index(img.coords()).expect("root image");
            e.root = img;
            e.root_index = idx;
            e.positive = positive;
        }
        let mut positions = self.positions.clone();
        match positions.binary_search(&i) {
            Ok(at) => {
                positions.remove(at);
            }
            Err(at) => positions.insert(at, i),
        }
        let mut folded = Folding {
            rs: rs.clone(),
            positions,
            entries,
            gamma_infinity: rs.apply_weight(t, &self.gamma_infinity),
        };
        folded.recompute_levels();
        folded
    }

    /// `<mu(J), alpha^vee>` recovered from the level sequence alone: the last
    /// occurrence of `alpha`, its folding sign, and the sign of
    /// `<gamma_infinity, alpha^vee>`.
    pub fn inner_from_levels(&self, alpha: usize) -> Q {
        let last_sign = self.final_sign(alpha);
        let value = match self.occurrences(alpha).last() {
            Some(&m) => {
                let e = &self.entries[m];
                let folded_sign = e.epsilon * e.sign();
                if folded_sign > 0 && last_sign > 0 {
                    e.level + 1
                } else if folded_sign < 0 && last_sign < 0 {
                    e.level - 1
                } else {
                    e.level
                }
            }
            None => {
                if last_sign > 0 {
                    0
                } else {
                    -1
                }
            }
        };
        Q::from_integer(value)
    }

    /// The piecewise-linear level profile along `alpha`.
    pub fn level_samples(&self, alpha: usize) -> LevelFunctionSamples {
        let idx = self.occurrences(alpha);
        LevelFunctionSamples {
            sigma: idx
                .iter()
                .map(|&i| {
                    let e = &self.entries[i];
                    (e.sign(), e.epsilon * e.sign())
                })
                .collect(),
            levels: idx.iter().map(|&i| self.entries[i].level).collect(),
            endpoint: self.inner_from_levels(alpha),
            final_sign: self.final_sign(alpha),
            indices: idx,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            position: usize,
            root: Vec<i64>,
            epsilon: i64,
            level: i64,
        }
        #[derive(Serialize)]
        struct Doc {
            positions: Vec<usize>,
            entries: Vec<Entry>,
            #[serde(rename = "gammaInfinity")]
            gamma_infinity: Vec<String>,
        }
        let doc = Doc {
            positions: self.positions.iter().map(|p| p + 1).collect(),
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| Entry {
                    position: i + 1,
                    root: e.root.coords().to_vec(),
                    epsilon: e.epsilon,
                    level: e.level,
                })
                .collect(),
            gamma_infinity: self.gamma_infinity.to_full_strings(),
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }
}

/// Data describing the function `g` along one root: it starts at `-1/2`, and
/// over each occurrence rises or falls by `1/2` twice according to
/// `sigma = (sgn gamma, eps sgn gamma)`, then moves once more by
/// `final_sign / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFunctionSamples {
    /// Chain positions of the occurrences (the set `I_alpha`).
    pub indices: Vec<usize>,
    pub sigma: Vec<(i64, i64)>,
    pub final_sign: i64,
    /// Levels as recorded by the folding.
    pub levels: Vec<i64>,
    /// `<mu, alpha^vee>` as read off from the levels.
    pub endpoint: Q,
}

impl LevelFunctionSamples {
    /// A profile given only by its sign data; levels are counted from the
    /// signs the same way a folding counts them.
    pub fn from_signs(sigma: &[(i64, i64)], final_sign: i64) -> Self {
        let mut running = 0i64;
        let mut levels = Vec::with_capacity(sigma.len());
        for &(sign, folded_sign) in sigma {
            levels.push(if sign > 0 { running } else { running - 1 });
            if folded_sign == sign {
                running += sign;
            }
        }
        let endpoint = match (sigma.last(), levels.last()) {
            (Some(&(_, folded_sign)), Some(&l)) => {
                if folded_sign > 0 && final_sign > 0 {
                    l + 1
                } else if folded_sign < 0 && final_sign < 0 {
                    l - 1
                } else {
                    l
                }
            }
            _ => {
                if final_sign > 0 {
                    0
                } else {
                    -1
                }
            }
        };
        LevelFunctionSamples {
            indices: (0..sigma.len()).collect(),
            sigma: sigma.to_vec(),
            final_sign,
            levels,
            endpoint: Q::from_integer(endpoint),
        }
    }

    /// Breakpoints `(x, g(x))` for `x = 0, 1/2, 1, ..., n + 1/2`.
    pub fn samples(&self) -> Vec<(Q, Q)> {
        let half = Q::new(1, 2);
        let mut x = Q::zero();
        let mut y = -half;
        let mut out = vec![(x, y)];
        for &(a, b) in &self.sigma {
            for slope in [a, b] {
                x += half;
                y += half * Q::from_integer(slope);
                out.push((x, y));
            }
        }
        x += half;
        y += half * Q::from_integer(self.final_sign);
        out.push((x, y));
        out
    }

    /// Values at the half-integers `1/2, 3/2, ..., n + 1/2`.
    pub fn half_integer_values(&self) -> Vec<Q> {
        self.samples()
            .into_iter()
            .filter(|(x, _)| !x.is_integer())
            .map(|(_, y)| y)
            .collect()
    }

    /// The sampled function agrees with the recorded levels and endpoint.
    pub fn consistent(&self) -> bool {
        let vals = self.half_integer_values();
        let n = self.levels.len();
        vals.len() == n + 1
            && vals[..n]
                .iter()
                .zip(&self.levels)
                .all(|(v, &l)| *v == Q::from_integer(l))
            && vals[n] == self.endpoint
    }

    /// Every sigma lies in `{(1,1), (-1,-1), (1,-1)}`.
    pub fn c1_holds(&self) -> bool {
        self.sigma.iter().all(|s| matches!(s, (1, 1) | (-1, -1) | (1, -1)))
    }

    /// At the start and after each `(1,1)`, the next step begins upward.
    pub fn c2_holds(&self) -> bool {
        let next_up = |j: usize| match self.sigma.get(j) {
            Some(&(a, _)) => a > 0,
            None => self.final_sign > 0,
        };
        next_up(0)
            && self
                .sigma
                .iter()
                .enumerate()
                .all(|(j, &s)| s != (1, 1) || next_up(j + 1))
    }

    /// Maximum over the levels and the endpoint.
    pub fn max_value(&self) -> Q {
        self.levels
            .iter()
            .map(|&l| Q::from_integer(l))
            .chain(std::iter::once(self.endpoint))
            .max()
            .unwrap_or_else(Q::one)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,g\n");
        for (x, y) in self.samples() {
            out.push_str(&format!("{},{}\n", fmt_q_full(&x), fmt_q_full(&y)));
        }
        out
    }
}
