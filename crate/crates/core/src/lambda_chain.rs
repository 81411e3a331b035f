//! Lambda-chains: orderings of the pairs `(alpha, k)`, `0 <= k < <lambda, alpha^vee>`,
//! whose induced root sequences satisfy the interlacing condition on coroot
//! triples.

use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_system::{fmt_q, CorootTriple, Root, RootSystem, Weight, Q};

/// The `k`-th occurrence of the positive root with index `root`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainIndex {
    pub root: usize,
    pub k: i64,
}

#[derive(Clone, Debug)]
pub struct LambdaChain {
    rs: Arc<RootSystem>,
    lambda: Weight,
    entries: Vec<ChainIndex>,
    /// `Some(order)` when the chain came out of the lexicographic construction.
    simple_order: Option<Vec<usize>>,
}

/// Occurrence count of one root against the expected pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCount {
    pub root: usize,
    pub expected: Q,
    pub actual: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCheck {
    pub triple: CorootTriple,
    pub interlaced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub counts: Vec<RootCount>,
    pub triples: Vec<TripleCheck>,
}

impl ValidationReport {
    pub fn counts_ok(&self) -> bool {
        self.counts
            .iter()
            .all(|c| c.expected == Q::from_integer(c.actual as i64))
    }

    pub fn interlacing_ok(&self) -> bool {
        self.triples.iter().all(|t| t.interlaced)
    }

    pub fn passed(&self) -> bool {
        self.counts_ok() && self.interlacing_ok()
    }
}

#[derive(Serialize)]
struct EntryJson {
    position: usize,
    root: Vec<i64>,
    k: i64,
    #[serde(rename = "initialLevel")]
    initial_level: i64,
}

impl LambdaChain {
    /// The lexicographic chain for the simple-root order `order` (0-based
    /// permutation of the simple roots).
    pub fn lex(rs: Arc<RootSystem>, lambda: Weight, order: &[usize]) -> Result<Self> {
        rs.check_dominant_integral(&lambda)?;
        check_permutation(order, rs.rank())?;

        let mut keyed: Vec<(Vec<Q>, ChainIndex)> = Vec::new();
        for (idx, alpha) in rs.positive_roots().iter().enumerate() {
            let n = rs.pairing(&lambda, alpha).to_integer();
            for k in 0..n {
                let mut key = Vec::with_capacity(order.len() + 1);
                key.push(Q::new(k, n));
                key.extend(order.iter().map(|&q| Q::new(alpha.coroot()[q], n)));
                keyed.push((key, ChainIndex { root: idx, k }));
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
            let shown: Vec<String> = w[0].0.iter().map(fmt_q).collect();
            return Err(Error::DuplicateKey(format!("({})", shown.join(","))));
        }
        Ok(LambdaChain {
            rs,
            lambda,
            entries: keyed.into_iter().map(|(_, e)| e).collect(),
            simple_order: Some(order.to_vec()),
        })
    }

    /// The lexicographic chain for the natural order of the simple roots.
    pub fn lex_default(rs: Arc<RootSystem>, lambda: Weight) -> Result<Self> {
        let order: Vec<usize> = (0..rs.rank()).collect();
        Self::lex(rs, lambda, &order)
    }

    /// A chain given by its sequence of positive-root indices. Occurrence
    /// counters are assigned in order; nothing else is checked here, see
    /// [`LambdaChain::validate`].
    pub fn from_roots(rs: Arc<RootSystem>, lambda: Weight, roots: &[usize]) -> Result<Self> {
        rs.check_dominant_integral(&lambda)?;
        let mut seen = vec![0i64; rs.num_positive()];
        let mut entries = Vec::with_capacity(roots.len());
        for &root in roots {
            if root >= rs.num_positive() {
                return Err(Error::InvalidWeight(format!("no positive root with index {root}")));
            }
            entries.push(ChainIndex { root, k: seen[root] });
            seen[root] += 1;
        }
        Ok(LambdaChain {
            rs,
            lambda,
            entries,
            simple_order: None,
        })
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn entries(&self) -> &[ChainIndex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn simple_order(&self) -> Option<&[usize]> {
        self.simple_order.as_deref()
    }

    /// Index of the root at position `i`.
    pub fn root_index(&self, i: usize) -> usize {
        self.entries[i].root
    }

    pub fn root(&self, i: usize) -> &Root {
        self.rs.root(self.entries[i].root)
    }

    /// Number of earlier positions carrying the same root.
    pub fn initial_level(&self, i: usize) -> i64 {
        self.entries[i].k
    }

    /// `<lambda, beta_i^vee>` as an integer.
    pub fn lambda_pairing(&self, i: usize) -> i64 {
        self.rs.pairing_idx(&self.lambda, self.entries[i].root).to_integer()
    }

    pub fn check_position(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::PositionOutOfRange {
                position: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Checks that `positions` is strictly increasing and within range.
    pub fn check_subset(&self, positions: &[usize]) -> Result<()> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedPositions);
        }
        if let Some(&last) = positions.last() {
            self.check_position(last)?;
        }
        Ok(())
    }

    /// Occurrence counts and the interlacing test on every coroot triple.
    pub fn validate(&self) -> ValidationReport {
        let mut occurrences = vec![0usize; self.rs.num_positive()];
        for e in &self.entries {
            occurrences[e.root] += 1;
        }
        let counts = occurrences
            .iter()
            .enumerate()
            .map(|(root, &actual)| RootCount {
                root,
                expected: self.rs.pairing_idx(&self.lambda, root),
                actual,
            })
            .collect();

        let triples = self
            .rs
            .coroot_triples()
            .iter()
            .map(|&t| TripleCheck {
                triple: t,
                interlaced: self.interlaced(t),
            })
            .collect();
        ValidationReport { counts, triples }
    }

    fn interlaced(&self, t: CorootTriple) -> bool {
        let sub: Vec<usize> = self
            .entries
            .iter()
            .map(|e| e.root)
            .filter(|&r| r == t.alpha || r == t.beta || r == t.gamma)
            .collect();
        sub.len().is_multiple_of(2)
            && sub
                .chunks(2)
                .all(|pair| (pair[0] == t.alpha || pair[0] == t.beta) && pair[1] == t.gamma)
    }

    /// Checks `N_i(s_beta(alpha)) = N_i(alpha) - <beta, alpha^vee> N_i(beta)`
    /// for every `alpha != beta` and every position `i` with `beta_i = beta`,
    /// where `N_i` counts strictly earlier occurrences and `N_i(-x) = 1 - N_i(x)`.
    pub fn counting_identity_holds(&self) -> bool {
        let n = self.rs.num_positive();
        let mut before = vec![0i64; n];
        for e in &self.entries {
            let beta = self.rs.root(e.root);
            for a in (0..n).filter(|&a| a != e.root) {
                let alpha = self.rs.root(a);
                let image = self.rs.reflect_root(beta, alpha);
                let (img_idx, positive) = self
                    .rs
                    .signed_index(image.coords())
                    .expect("reflection of a root is a root");
                let lhs = if positive { before[img_idx] } else { 1 - before[img_idx] };
                let rhs = before[a] - self.rs.root_pairing(beta, alpha) * before[e.root];
                if lhs != rhs {
                    return false;
                }
            }
            before[e.root] += 1;
        }
        true
    }

    /// Sum over positive roots of `<lambda, alpha^vee>`.
    pub fn expected_length(&self) -> usize {
        self.rs
            .positive_roots()
            .iter()
            .map(|a| self.rs.pairing(&self.lambda, a))
            .fold(Q::zero(), |s, x| s + x)
            .to_integer()
            .to_usize()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<EntryJson> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| EntryJson {
                position: i + 1,
                root: self.rs.root(e.root).coords().to_vec(),
                k: e.k,
                initial_level: e.k,
            })
            .collect();
        serde_json::to_value(entries).expect("plain data serializes")
    }
}

fn check_permutation(order: &[usize], rank: usize) -> Result<()> {
    let mut seen = vec![false; rank];
    if order.len() != rank {
        return Err(Error::InvalidOrder(format!(
            "expected {rank} entries, got {}",
            order.len()
        )));
    }
    for &p in order {
        if p >= rank || seen[p] {
            return Err(Error::InvalidOrder(format!("{order:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}
