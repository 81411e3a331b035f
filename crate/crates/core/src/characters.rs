//! Characters from the crystal, together with classical oracles (Weyl's
//! dimension formula, Freudenthal's recursion, brute-force tensor
//! decomposition) to check them against.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedMul, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::crystal::{build_crystal_graph, enumerate_admissible};
use crate::error::{Error, Result};
use crate::lambda_chain::LambdaChain;
use crate::root_system::{RootSystem, Weight, Q};

/// Default bound on representation dimensions handed to the oracles.
pub const DEFAULT_WEIGHT_CAP: usize = 5_000_000;

/// A finite multiset of weights. Used both for characters and for
/// decompositions into irreducibles (keyed by highest weight).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightMultiset(BTreeMap<Weight, u64>);

pub type Character = WeightMultiset;
pub type Decomposition = WeightMultiset;

impl WeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(mu: Weight) -> Self {
        let mut m = Self::new();
        m.add(mu, 1);
        m
    }

    pub fn add(&mut self, mu: Weight, mult: u64) {
        if mult > 0 {
            *self.0.entry(mu).or_insert(0) += mult;
        }
    }

    pub fn merge(&mut self, other: &WeightMultiset) {
        for (mu, &m) in &other.0 {
            self.add(mu.clone(), m);
        }
    }

    pub fn get(&self, mu: &Weight) -> u64 {
        self.0.get(mu).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.0.iter().map(|(w, &m)| (w, m))
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// Rows ordered from the highest weight down (by height, then
    /// lexicographically from the top).
    pub fn sorted_rows(&self, rs: &RootSystem) -> Vec<(Weight, u64)> {
        let mut rows: Vec<(Q, Weight, u64)> = self.0.iter().map(|(w, &m)| (rs.height(w), w.clone(), m)).collect();
        rows.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| b.1.cmp(&a.1)));
        rows.into_iter().map(|(_, w, m)| (w, m)).collect()
    }

    pub fn to_json(&self, rs: &RootSystem, dimension: u64) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            coords: Vec<String>,
            mult: u64,
        }
        #[derive(Serialize)]
        struct Doc {
            weights: Vec<Row>,
            dimension: u64,
        }
        let doc = Doc {
            weights: self
                .sorted_rows(rs)
                .into_iter()
                .map(|(w, mult)| Row {
                    coords: w.to_full_strings(),
                    mult,
                })
                .collect(),
            dimension,
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }
}

impl fmt::Display for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, m) in &self.0 {
            writeln!(f, "{w} : {m}")?;
        }
        Ok(())
    }
}

impl FromIterator<Weight> for WeightMultiset {
    fn from_iter<I: IntoIterator<Item = Weight>>(iter: I) -> Self {
        let mut m = WeightMultiset::new();
        for w in iter {
            m.add(w, 1);
        }
        m
    }
}

/// The weights `mu(J)` over all admissible subsets of the chain.
pub fn character(chain: &LambdaChain, cap: usize) -> Result<Character> {
    Ok(enumerate_admissible(chain, cap)?
        .into_iter()
        .map(|a| a.weight)
        .collect())
}

/// Weyl's dimension formula.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<u64> {
    rs.check_dominant_integral(lambda)?;
    let rho = Weight::rho(rs.rank());
    let shifted = lambda + &rho;
    let mut product = Ratio::<i128>::one();
    for alpha in rs.positive_roots() {
        let num = rs.pairing(&shifted, alpha).to_integer() as i128;
        let den = rs.pairing(&rho, alpha).to_integer() as i128;
        product = product
            .checked_mul(&Ratio::new(num, den))
            .ok_or_else(|| Error::InternalInconsistency("dimension overflows".into()))?;
    }
    if !product.is_integer() {
        return Err(Error::InternalInconsistency(format!(
            "non-integral dimension {product}"
        )));
    }
    product
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InternalInconsistency("dimension overflows".into()))
}

/// Dominant weights `mu <= lambda` with their multiplicities, by
/// Freudenthal's recursion.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
    rs.check_dominant_integral(lambda)?;
    let r = rs.rank();
    let lowest = rs.antidominant_conjugate(lambda);
    let bound: Vec<i64> = rs
        .weight_to_root_coords(&(lambda - &lowest))
        .iter()
        .map(|c| c.to_integer())
        .collect();

    // All dominant lambda - sum c_q alpha_q inside the box, by depth.
    let simple: Vec<Weight> = (0..r).map(|p| rs.root_as_weight(rs.simple_root(p))).collect();
    let mut candidates: Vec<(i64, Vec<i64>, Weight)> = Vec::new();
    let mut c = vec![0i64; r];
    loop {
        let mut mu = lambda.clone();
        for (q, &cq) in c.iter().enumerate() {
            mu = &mu - &simple[q].scale(Q::from_integer(cq));
        }
        if mu.is_dominant() {
            candidates.push((c.iter().sum(), c.clone(), mu));
        }
        let mut q = 0;
        while q < r {
            c[q] += 1;
            if c[q] <= bound[q] {
                break;
            }
            c[q] = 0;
            q += 1;
        }
        if q == r {
            break;
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let d = rs.half_norms();
    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    for (depth, c, mu) in candidates {
        if depth == 0 {
            mult.insert(mu, 1);
            continue;
        }
        let mut denom = Q::zero();
        for q in 0..r {
            denom += Q::from_integer(c[q] * d[q]) * (lambda.coords()[q] + mu.coords()[q] + Q::from_integer(2));
        }
        let mut numer = Q::zero();
        for (idx, alpha) in rs.positive_roots().iter().enumerate() {
            let step = rs.root_weight(idx);
            let mut shifted = &mu + step;
            loop {
                let dom = rs.dominant_conjugate(&shifted);
                let Some(&m) = mult.get(&dom) else { break };
                numer += Q::from_integer(m as i64 * rs.root_half_norm(idx)) * rs.pairing(&shifted, alpha);
                shifted = &shifted + step;
            }
        }
        numer *= Q::from_integer(2);
        if !denom.is_positive() {
            return Err(Error::InternalInconsistency(format!(
                "vanishing Freudenthal denominator at {mu}"
            )));
        }
        let m = numer / denom;
        if !m.is_integer() || m.is_negative() {
            return Err(Error::InternalInconsistency(format!("multiplicity {m} at {mu}")));
        }
        let m = m.to_integer() as u64;
        if m > 0 {
            mult.insert(mu, m);
        }
    }
    Ok(mult)
}

/// The full weight multiset of the irreducible module, from Freudenthal's
/// recursion and Weyl-group orbits.
pub fn freudenthal_multiplicities(rs: &RootSystem, lambda: &Weight, cap: usize) -> Result<Character> {
    let dim = weyl_dimension(rs, lambda)?;
    if dim > cap as u64 {
        return Err(Error::SizeCapExceeded { cap });
    }
    let mut ch = Character::new();
    for (mu, m) in dominant_multiplicities(rs, lambda)? {
        for nu in rs.orbit(&mu) {
            ch.add(nu, m);
        }
    }
    Ok(ch)
}

/// Littlewood-Richardson rule: `nu + mu(J)` over admissible `J` with
/// `<nu + mu(J), alpha_p^vee> >= M(J,p)` for every `p`.
pub fn lr_decompose(chain: &LambdaChain, nu: &Weight, cap: usize) -> Result<Decomposition> {
    let rs = chain.root_system();
    rs.check_dominant_integral(nu)?;
    let graph = build_crystal_graph(chain, cap)?;
    let mut out = Decomposition::new();
    for node in &graph.nodes {
        let shifted = nu + &node.weight;
        let keep = (0..rs.rank()).all(|p| shifted.coords()[p] >= Q::from_integer(node.stats[p].max_level));
        if keep {
            out.add(shifted, 1);
        }
    }
    Ok(out)
}

/// Decomposes `V(lambda) (x) V(nu)` by peeling off highest weights from the
/// product of Freudenthal characters.
pub fn tensor_oracle(rs: &RootSystem, lambda: &Weight, nu: &Weight, cap: usize) -> Result<Decomposition> {
    let product_dim = weyl_dimension(rs, lambda)?.saturating_mul(weyl_dimension(rs, nu)?);
    if product_dim > cap as u64 {
        return Err(Error::SizeCapExceeded { cap });
    }
    let a = freudenthal_multiplicities(rs, lambda, cap)?;
    let b = freudenthal_multiplicities(rs, nu, cap)?;
    let mut remaining: HashMap<Weight, i64> = HashMap::new();
    for (x, mx) in a.iter() {
        for (y, my) in b.iter() {
            *remaining.entry(x + y).or_insert(0) += (mx * my) as i64;
        }
    }
    remaining.retain(|_, m| *m != 0);

    let mut memo: HashMap<Weight, Character> = HashMap::new();
    let mut out = Decomposition::new();
    while !remaining.is_empty() {
        let top = remaining
            .keys()
            .map(|w| (rs.height(w), w))
            .max()
            .map(|(_, w)| w.clone())
            .expect("nonempty");
        if !top.is_dominant() {
            return Err(Error::InternalInconsistency(format!(
                "highest remaining weight {top} is not dominant"
            )));
        }
        let count = remaining[&top];
        if count < 0 {
            return Err(Error::InternalInconsistency(format!("negative multiplicity at {top}")));
        }
        if !memo.contains_key(&top) {
            memo.insert(top.clone(), freudenthal_multiplicities(rs, &top, cap)?);
        }
        for (w, m) in memo[&top].iter() {
            let entry = remaining.entry(w.clone()).or_insert(0);
            *entry -= count * m as i64;
            if *entry < 0 {
                return Err(Error::InternalInconsistency(format!("subtraction below zero at {w}")));
            }
            if *entry == 0 {
                remaining.remove(w);
            }
        }
        out.add(top, count as u64);
    }
    Ok(out)
}

fn check_levi(rs: &RootSystem, levi: &[usize]) -> Result<()> {
    for (i, &p) in levi.iter().enumerate() {
        if p >= rs.rank() {
            return Err(Error::InvalidColor(p + 1));
        }
        if levi[..i].contains(&p) {
            return Err(Error::InvalidColor(p + 1));
        }
    }
    Ok(())
}

/// Branching rule: the weights `mu(J)` with `delta(J,p) = 0` for all `p` in
/// `levi`; each is the highest weight of an irreducible Levi module.
pub fn branch(chain: &LambdaChain, levi: &[usize], cap: usize) -> Result<Decomposition> {
    let rs = chain.root_system();
    check_levi(rs, levi)?;
    let graph = build_crystal_graph(chain, cap)?;
    Ok(graph
        .nodes
        .iter()
        .filter(|n| levi.iter().all(|&p| n.stats[p].delta() == 0))
        .map(|n| n.weight.clone())
        .collect())
}

/// Character of the irreducible Levi module with highest weight `mu`,
/// written in ambient fundamental-weight coordinates.
pub fn levi_character(rs: &RootSystem, levi: &[usize], mu: &Weight, cap: usize) -> Result<Character> {
    check_levi(rs, levi)?;
    if levi.is_empty() {
        return Ok(Character::singleton(mu.clone()));
    }
    let sub = rs.levi(levi)?;
    let mu_p = Weight::new(levi.iter().map(|&p| mu.coords()[p]).collect());
    let local = freudenthal_multiplicities(&sub, &mu_p, cap)?;
    let mut out = Character::new();
    for (nu_p, m) in local.iter() {
        let c = sub.weight_to_root_coords(&(&mu_p - nu_p));
        let mut ambient = mu.clone();
        for (i, &p) in levi.iter().enumerate() {
            if !c[i].is_integer() {
                return Err(Error::InternalInconsistency(format!(
                    "Levi weight {nu_p} off the root lattice"
                )));
            }
            ambient = &ambient - &rs.root_as_weight(rs.simple_root(p)).scale(c[i]);
        }
        out.add(ambient, m);
    }
    Ok(out)
}

/// Sum of the Levi characters of a branching decomposition.
pub fn recombine(rs: &RootSystem, levi: &[usize], parts: &Decomposition, cap: usize) -> Result<Character> {
    let mut out = Character::new();
    for (mu, m) in parts.iter() {
        let ch = levi_character(rs, levi, mu, cap)?;
        for (w, k) in ch.iter() {
            out.add(w.clone(), k * m);
        }
    }
    Ok(out)
}

/// Total dimension of a decomposition.
pub fn decomposition_dimension(rs: &RootSystem, parts: &Decomposition) -> Result<u64> {
    parts.iter().map(|(mu, m)| Ok(weyl_dimension(rs, mu)? * m)).sum()
}
