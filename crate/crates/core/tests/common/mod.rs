//! Shared grid and hand-rolled oracles for the integration tests. Nothing here
//! calls into the folding, crystal or geometry modules; only the raw root data
//! (Cartan matrix, root and coroot coordinates) is taken from the library.
#![allow(dead_code)]

use std::sync::Arc;

use alcove_core::{LambdaChain, RootSystem, Weight, Q};

pub fn rs(ty: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::of_type(ty).unwrap())
}

pub fn lex(ty: &str, lambda: &[i64]) -> LambdaChain {
    LambdaChain::lex_default(rs(ty), Weight::from_ints(lambda)).unwrap()
}

/// All dominant weights with coordinates in `0..=max` and Weyl dimension at
/// most `dim_cap`, for each listed type.
pub fn grid(types: &[&str], max: i64, dim_cap: u64) -> Vec<LambdaChain> {
    let mut out = Vec::new();
    for ty in types {
        let system = rs(ty);
        let r = system.rank();
        let base = (max + 1) as usize;
        for code in 0..base.pow(r as u32) {
            let coords: Vec<i64> = (0..r).map(|p| (code / base.pow(p as u32) % base) as i64).collect();
            if weyl_dimension(&system, &coords) <= dim_cap {
                out.push(LambdaChain::lex_default(system.clone(), Weight::from_ints(&coords)).unwrap());
            }
        }
    }
    out
}

pub const RANK_TWO: &[&str] = &["A2", "B2", "G2"];
pub const SMALL: &[&str] = &["A1", "A2", "B2", "G2", "A3", "B3", "C3"];

/// `<mu, alpha^vee>` from the coroot coordinates.
pub fn pair(mu: &Weight, coroot: &[i64]) -> Q {
    mu.coords()
        .iter()
        .zip(coroot)
        .map(|(m, &c)| m * Q::from_integer(c))
        .sum()
}

/// Product formula over positive roots.
pub fn weyl_dimension(rs: &RootSystem, lambda: &[i64]) -> u64 {
    let mut num = Q::from_integer(1);
    for alpha in rs.positive_roots() {
        let top: i64 = alpha.coroot().iter().zip(lambda).map(|(c, l)| c * (l + 1)).sum();
        let bottom: i64 = alpha.coroot().iter().sum();
        num *= Q::new(top, bottom);
    }
    assert!(num.is_integer());
    *num.numer() as u64
}

/// A root in simple-root coordinates, written in the weight basis.
pub fn root_weight(cartan: &[Vec<i64>], coords: &[i64]) -> Weight {
    let r = coords.len();
    Weight::from_ints(
        &(0..r)
            .map(|p| (0..r).map(|q| cartan[p][q] * coords[q]).sum())
            .collect::<Vec<i64>>(),
    )
}

/// `<alpha_p, beta^vee>` for each simple root, given the coroot coordinates of
/// `beta`.
fn simple_pairings(cartan: &[Vec<i64>], coroot: &[i64]) -> Vec<i64> {
    let r = coroot.len();
    (0..r).map(|p| (0..r).map(|q| coroot[q] * cartan[q][p]).sum()).collect()
}

/// Roots carried around as (coords, coroot) pairs so sign changes are cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedRoot {
    pub coords: Vec<i64>,
    pub coroot: Vec<i64>,
}

impl SignedRoot {
    pub fn of(rs: &RootSystem, idx: usize) -> Self {
        let r = rs.root(idx);
        SignedRoot {
            coords: r.coords().to_vec(),
            coroot: r.coroot().to_vec(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().any(|&c| c > 0)
    }

    pub fn sign(&self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn neg(&self) -> Self {
        SignedRoot {
            coords: self.coords.iter().map(|c| -c).collect(),
            coroot: self.coroot.iter().map(|c| -c).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// `s_self(x) = x - <x, self^vee> self`, on both coordinate systems.
    pub fn reflect(&self, cartan: &[Vec<i64>], x: &SignedRoot) -> SignedRoot {
        let c: i64 = simple_pairings(cartan, &self.coroot)
            .iter()
            .zip(&x.coords)
            .map(|(a, b)| a * b)
            .sum();
        // <self, x^vee> for the coroot side
        let d: i64 = simple_pairings(cartan, &x.coroot)
            .iter()
            .zip(&self.coords)
            .map(|(a, b)| a * b)
            .sum();
        SignedRoot {
            coords: x.coords.iter().zip(&self.coords).map(|(a, b)| a - c * b).collect(),
            coroot: x.coroot.iter().zip(&self.coroot).map(|(a, b)| a - d * b).collect(),
        }
    }

    pub fn weight(&self, cartan: &[Vec<i64>]) -> Weight {
        root_weight(cartan, &self.coords)
    }

    pub fn index(&self, rs: &RootSystem) -> usize {
        let a = self.abs();
        (0..rs.num_positive())
            .find(|&i| rs.root(i).coords() == a.coords.as_slice())
            .expect("a root")
    }
}

/// `s_{alpha,k}(mu) = mu - (<mu, alpha^vee> - k) alpha`.
pub fn affine_reflect(cartan: &[Vec<i64>], alpha: &SignedRoot, k: Q, mu: &Weight) -> Weight {
    let c = pair(mu, &alpha.coroot) - k;
    mu - &alpha.weight(cartan).scale(c)
}

/// `s_alpha` on weights.
pub fn reflect_weight(cartan: &[Vec<i64>], alpha: &SignedRoot, mu: &Weight) -> Weight {
    affine_reflect(cartan, alpha, Q::from_integer(0), mu)
}

/// The folded sequence computed straight from the definitions: roots by
/// prefix products of the chain reflections, levels by signed counting.
#[derive(Clone, Debug)]
pub struct RawFolding {
    pub gammas: Vec<SignedRoot>,
    pub eps: Vec<i64>,
    pub levels: Vec<i64>,
    /// Positive-root index of `|gamma_i|`.
    pub abs_index: Vec<usize>,
    pub gamma_inf: Weight,
    pub mu: Weight,
    /// Initial levels `l_i^0`, i.e. occurrences of `beta_i` before `i`.
    pub initial: Vec<i64>,
}

pub fn raw_folding(chain: &LambdaChain, j: &[usize]) -> RawFolding {
    let rs = chain.root_system();
    let cartan = rs.cartan();
    let betas: Vec<SignedRoot> = (0..chain.len())
        .map(|i| SignedRoot::of(rs, chain.root_index(i)))
        .collect();
    let initial: Vec<i64> = (0..chain.len())
        .map(|i| (0..i).filter(|&k| betas[k] == betas[i]).count() as i64)
        .collect();

    // gamma_i = r_{j_1} ... r_{j_a}(beta_i) over the folding positions before i
    let mut gammas = Vec::with_capacity(chain.len());
    for i in 0..chain.len() {
        let mut g = betas[i].clone();
        for &p in j.iter().filter(|&&p| p < i).rev() {
            g = betas[p].reflect(cartan, &g);
        }
        gammas.push(g);
    }
    let eps: Vec<i64> = (0..chain.len()).map(|i| if j.contains(&i) { -1 } else { 1 }).collect();
    let abs_index: Vec<usize> = gammas.iter().map(|g| g.index(rs)).collect();
    let levels: Vec<i64> = (0..chain.len())
        .map(|i| {
            let delta = if gammas[i].is_positive() { 0 } else { -1 };
            let sum: i64 = (0..i)
                .filter(|&k| eps[k] == 1 && abs_index[k] == abs_index[i])
                .map(|k| gammas[k].sign())
                .sum();
            delta + sum
        })
        .collect();

    let mut gamma_inf = Weight::rho(rs.rank());
    for &p in j.iter().rev() {
        gamma_inf = reflect_weight(cartan, &betas[p], &gamma_inf);
    }
    let mut mu = chain.lambda().clone();
    for &p in j.iter().rev() {
        mu = affine_reflect(cartan, &betas[p], Q::from_integer(initial[p]), &mu);
    }
    RawFolding {
        gammas,
        eps,
        levels,
        abs_index,
        gamma_inf,
        mu,
        initial,
    }
}

/// Every subset of `0..n` in lexicographic order of bitmasks.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..(1u64 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Bruhat-saturated chains checked by counting inversions on root images.
pub fn inversions(rs: &RootSystem, word_roots: &[SignedRoot]) -> usize {
    // w = s_{b_1} ... s_{b_k}; count positive roots sent negative by w
    let cartan = rs.cartan();
    (0..rs.num_positive())
        .filter(|&a| {
            let mut x = SignedRoot::of(rs, a);
            for b in word_roots.iter().rev() {
                x = b.reflect(cartan, &x);
            }
            !x.is_positive()
        })
        .count()
}

pub fn is_admissible_oracle(chain: &LambdaChain, j: &[usize]) -> bool {
    let rs = chain.root_system();
    let mut word = Vec::new();
    for (n, &p) in j.iter().enumerate() {
        word.push(SignedRoot::of(rs, chain.root_index(p)));
        if inversions(rs, &word) != n + 1 {
            return false;
        }
    }
    true
}

/// Doubled values `2 g(x)` of the level profile at `x = 0, 1/2, ..., n + 1/2`.
pub fn doubled_profile(sigma: &[(i64, i64)], final_sign: i64) -> Vec<i64> {
    let mut out = vec![-1];
    let mut y = -1;
    for &(a, b) in sigma {
        y += a;
        out.push(y);
        y += b;
        out.push(y);
    }
    out.push(y + final_sign);
    out
}
