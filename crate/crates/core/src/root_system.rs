//! Finite crystallographic root systems built from Cartan data.
//!
//! Conventions: the Cartan matrix entry `a[p][q]` is `<alpha_q, alpha_p^vee>`,
//! so row `p` lists the pairings of the simple roots with the `p`-th simple
//! coroot. Roots are integer vectors in the simple-root basis; weights are
//! rational vectors in the fundamental-weight basis. Squared root lengths are
//! normalized per irreducible component so that the short roots have squared
//! length 2.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used for weights.
pub type Q = Rational64;

/// Upper bound on the number of roots explored while closing the simple roots
/// under reflections; only reachable for Cartan data that slipped past the
/// finite-type test.
const ROOT_GENERATION_LIMIT: usize = 100_000;

/// Formats a rational compactly: `3`, `-1/2`.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats a rational always as `num/den`.
pub fn fmt_q_full(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Either a classical type letter with rank, or an explicit Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CartanSpec {
    Typed { letter: char, rank: usize },
    Matrix(Vec<Vec<i64>>),
}

impl CartanSpec {
    pub fn typed(letter: char, rank: usize) -> Self {
        CartanSpec::Typed {
            letter: letter.to_ascii_uppercase(),
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            CartanSpec::Typed { rank, .. } => *rank,
            CartanSpec::Matrix(m) => m.len(),
        }
    }

    /// Parses whitespace-separated integer rows, one row per line.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::InvalidCartan(format!("bad entry `{tok}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(CartanSpec::Matrix(rows))
    }

    /// The Cartan matrix, in the convention `a[p][q] = <alpha_q, alpha_p^vee>`.
    pub fn matrix(&self) -> Result<Vec<Vec<i64>>> {
        match self {
            CartanSpec::Matrix(m) => {
                if m.is_empty() {
                    return Err(Error::RankZero);
                }
                Ok(m.clone())
            }
            CartanSpec::Typed { letter, rank } => typed_matrix(*letter, *rank),
        }
    }
}

impl FromStr for CartanSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::InvalidCartan("empty type".into()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidCartan(format!("cannot parse type `{s}`")))?;
        if !"ABCDEFGabcdefg".contains(letter) {
            return Err(Error::InvalidCartan(format!("unknown type letter `{letter}`")));
        }
        Ok(CartanSpec::typed(letter, rank))
    }
}

fn typed_matrix(letter: char, n: usize) -> Result<Vec<Vec<i64>>> {
    if n == 0 {
        return Err(Error::RankZero);
    }
    let bad = || Error::InvalidCartan(format!("type {letter}{n} does not exist"));
    let mut a = vec![vec![0i64; n]; n];
    for (p, row) in a.iter_mut().enumerate() {
        row[p] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, p: usize, q: usize| {
        a[p][q] = -1;
        a[q][p] = -1;
    };
    match letter {
        'A' => {
            for p in 1..n {
                link(&mut a, p - 1, p);
            }
        }
        'B' | 'C' => {
            if n < 2 {
                return Err(bad());
            }
            for p in 1..n {
                link(&mut a, p - 1, p);
            }
            // B: alpha_n short; C: alpha_n long.
            if letter == 'B' {
                a[n - 1][n - 2] = -2;
            } else {
                a[n - 2][n - 1] = -2;
            }
        }
        'D' => {
            if n < 4 {
                return Err(bad());
            }
            for p in 1..n - 1 {
                link(&mut a, p - 1, p);
            }
            link(&mut a, n - 3, n - 1);
        }
        'E' => {
            if !(6..=8).contains(&n) {
                return Err(bad());
            }
            // Bourbaki: 1-3-4-5-6-..., with 2 attached to 4.
            link(&mut a, 0, 2);
            link(&mut a, 1, 3);
            for p in 3..n {
                link(&mut a, p - 1, p);
            }
        }
        'F' => {
            if n != 4 {
                return Err(bad());
            }
            link(&mut a, 0, 1);
            link(&mut a, 1, 2);
            link(&mut a, 2, 3);
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short.
            a[2][1] = -2;
        }
        'G' => {
            if n != 2 {
                return Err(bad());
            }
            // alpha_1 short.
            a[0][1] = -3;
            a[1][0] = -1;
        }
        _ => return Err(bad()),
    }
    Ok(a)
}

/// A weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<Q>);

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Weight(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| Q::from_integer(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    /// The sum of the fundamental weights.
    pub fn rho(rank: usize) -> Self {
        Weight(vec![Q::one(); rank])
    }

    pub fn fundamental(rank: usize, p: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[p] = Q::one();
        w
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Integer coordinates, if the weight is integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn scale(&self, s: Q) -> Weight {
        Weight(self.0.iter().map(|c| c * s).collect())
    }

    /// Comma-separated coordinates with every entry written `num/den`.
    pub fn to_full_string(&self) -> String {
        self.0.iter().map(fmt_q_full).collect::<Vec<_>>().join(",")
    }

    pub fn to_full_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_q_full).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Mul<Q> for &Weight {
    type Output = Weight;
    fn mul(self, rhs: Q) -> Weight {
        self.scale(rhs)
    }
}

/// A root with its coordinates in the simple-root basis and the coordinates
/// of its coroot in the simple-coroot basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    coords: Vec<i64>,
    coroot: Vec<i64>,
}

impl Root {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coroot(&self) -> &[i64] {
        &self.coroot
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn sign(&self) -> i64 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

impl Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
            coroot: self.coroot.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .map(|(q, c)| format!("{c}*α{}", q + 1))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A Weyl group element, stored through its action on root coordinates and on
/// fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    root_action: Vec<Vec<i64>>,
    weight_action: Vec<Vec<i64>>,
    length: usize,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn root_action(&self) -> &[Vec<i64>] {
        &self.root_action
    }

    pub fn weight_action(&self) -> &[Vec<i64>] {
        &self.weight_action
    }

    fn act_on_coords(&self, c: &[i64]) -> Vec<i64> {
        mat_vec(&self.root_action, c)
    }
}

/// A triple of positive roots (by index) with `gamma^vee = alpha^vee + beta^vee`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorootTriple {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: Vec<Vec<i64>>,
    half_norms: Vec<i64>,
    inverse_cartan: Vec<Vec<Q>>,
    components: Vec<Vec<usize>>,
    positive: Vec<Root>,
    positive_weights: Vec<Weight>,
    positive_half_norms: Vec<i64>,
    index: HashMap<Vec<i64>, usize>,
    coroot_index: HashMap<Vec<i64>, usize>,
    triples: Vec<CorootTriple>,
    reflections: Vec<WeylElement>,
    simple_reflections: Vec<WeylElement>,
}

impl RootSystem {
    pub fn new(spec: &CartanSpec) -> Result<Self> {
        let cartan = spec.matrix()?;
        Self::from_cartan(cartan)
    }

    /// Shorthand for a classical type, e.g. `RootSystem::of_type("G2")`.
    pub fn of_type(name: &str) -> Result<Self> {
        Self::new(&name.parse()?)
    }

    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let r = cartan.len();
        if r == 0 {
            return Err(Error::RankZero);
        }
        for (p, row) in cartan.iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidCartan("matrix is not square".into()));
            }
            if row[p] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", p + 1)));
            }
            for q in 0..r {
                if p != q {
                    if row[q] > 0 {
                        return Err(Error::InvalidCartan(format!(
                            "off-diagonal entry ({},{}) is positive",
                            p + 1,
                            q + 1
                        )));
                    }
                    if (row[q] == 0) != (cartan[q][p] == 0) {
                        return Err(Error::InvalidCartan(format!(
                            "entries ({},{}) and ({},{}) disagree on vanishing",
                            p + 1,
                            q + 1,
                            q + 1,
                            p + 1
                        )));
                    }
                }
            }
        }

        let components = connected_components(&cartan);
        let half_norms = symmetrizer(&cartan, &components)?;
        check_positive_definite(&cartan, &half_norms)?;
        let inverse_cartan = invert(&cartan).ok_or(Error::NotFiniteType)?;

        let mut rs = RootSystem {
            cartan,
            half_norms,
            inverse_cartan,
            components,
            positive: Vec::new(),
            positive_weights: Vec::new(),
            positive_half_norms: Vec::new(),
            index: HashMap::new(),
            coroot_index: HashMap::new(),
            triples: Vec::new(),
            reflections: Vec::new(),
            simple_reflections: Vec::new(),
        };
        rs.generate_roots()?;
        rs.find_triples();
        rs.reflections = (0..rs.positive.len()).map(|i| rs.build_reflection(i)).collect();
        rs.simple_reflections = (0..r).map(|p| rs.reflections[rs.simple_index(p)].clone()).collect();
        Ok(rs)
    }

    fn generate_roots(&mut self) -> Result<()> {
        let r = self.rank();
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for p in 0..r {
            let mut e = vec![0; r];
            e[p] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for p in 0..r {
                let pairing: i64 = (0..r).map(|q| self.cartan[p][q] * beta[q]).sum();
                let mut next = beta.clone();
                next[p] -= pairing;
                if !seen.contains_key(&next) {
                    if seen.len() > ROOT_GENERATION_LIMIT {
                        return Err(Error::NotFiniteType);
                    }
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen.into_keys().filter(|c| c.iter().all(|&x| x >= 0)).collect();
        // Height first, then simple roots in their natural order.
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });

        for coords in positive {
            let half_norm = self.half_norm_of(&coords);
            let coroot = coords
                .iter()
                .zip(&self.half_norms)
                .map(|(&c, &d)| {
                    let num = c * d;
                    if num % half_norm != 0 {
                        Err(Error::InternalInconsistency(format!(
                            "non-integral coroot for {coords:?}"
                        )))
                    } else {
                        Ok(num / half_norm)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let idx = self.positive.len();
            self.index.insert(coords.clone(), idx);
            self.coroot_index.insert(coroot.clone(), idx);
            self.positive_weights
                .push(Weight::from_ints(&mat_vec(&self.cartan, &coords)));
            self.positive_half_norms.push(half_norm);
            self.positive.push(Root { coords, coroot });
        }
        Ok(())
    }

    fn half_norm_of(&self, coords: &[i64]) -> i64 {
        let r = self.rank();
        let mut twice = 0i64;
        for p in 0..r {
            for q in 0..r {
                twice += coords[p] * coords[q] * self.half_norms[p] * self.cartan[p][q];
            }
        }
        twice / 2
    }

    fn find_triples(&mut self) {
        let n = self.positive.len();
        for a in 0..n {
            for b in a + 1..n {
                let sum: Vec<i64> = self.positive[a]
                    .coroot
                    .iter()
                    .zip(&self.positive[b].coroot)
                    .map(|(x, y)| x + y)
                    .collect();
                if let Some(&g) = self.coroot_index.get(&sum) {
                    self.triples.push(CorootTriple {
                        alpha: a,
                        beta: b,
                        gamma: g,
                    });
                }
            }
        }
    }

    fn build_reflection(&self, idx: usize) -> WeylElement {
        let r = self.rank();
        let alpha = &self.positive[idx];
        let alpha_w = &self.positive_weights[idx];
        let mut root_action = vec![vec![0i64; r]; r];
        let mut weight_action = vec![vec![0i64; r]; r];
        for q in 0..r {
            // <alpha_q, alpha^vee>
            let pq: i64 = (0..r).map(|p| alpha.coroot[p] * self.cartan[p][q]).sum();
            for s in 0..r {
                root_action[s][q] = i64::from(s == q) - pq * alpha.coords[s];
                weight_action[s][q] = i64::from(s == q) - alpha.coroot[q] * alpha_w.0[s].to_integer();
            }
        }
        self.element(root_action, weight_action)
    }

    fn element(&self, root_action: Vec<Vec<i64>>, weight_action: Vec<Vec<i64>>) -> WeylElement {
        let length = self
            .positive
            .iter()
            .filter(|a| !is_positive_coords(&mat_vec(&root_action, &a.coords)))
            .count();
        WeylElement {
            root_action,
            weight_action,
            length,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `|alpha_p|^2 / 2` for each simple root.
    pub fn half_norms(&self) -> &[i64] {
        &self.half_norms
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.positive[idx]
    }

    /// `|alpha|^2 / 2` for the positive root with index `idx`.
    pub fn root_half_norm(&self, idx: usize) -> i64 {
        self.positive_half_norms[idx]
    }

    /// The positive root, in fundamental-weight coordinates.
    pub fn root_weight(&self, idx: usize) -> &Weight {
        &self.positive_weights[idx]
    }

    pub fn simple_root(&self, p: usize) -> &Root {
        &self.positive[self.simple_index(p)]
    }

    /// Index of the `p`-th simple root among the positive roots.
    pub fn simple_index(&self, p: usize) -> usize {
        let mut e = vec![0; self.rank()];
        e[p] = 1;
        self.index[&e]
    }

    pub fn coroot_triples(&self) -> &[CorootTriple] {
        &self.triples
    }

    /// Looks up a root by simple-root coordinates.
    pub fn root_from_coords(&self, coords: &[i64]) -> Option<Root> {
        let (idx, positive) = self.signed_index(coords)?;
        let root = &self.positive[idx];
        Some(if positive { root.clone() } else { -root })
    }

    /// Index of `|alpha|` among the positive roots together with the sign of
    /// `alpha`.
    pub fn signed_index(&self, coords: &[i64]) -> Option<(usize, bool)> {
        if is_positive_coords(coords) {
            self.index.get(coords).map(|&i| (i, true))
        } else {
            let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
            self.index.get(&neg).map(|&i| (i, false))
        }
    }

    pub fn index_of(&self, root: &Root) -> Option<usize> {
        self.index.get(root.abs().coords()).copied()
    }

    /// `<mu, alpha^vee>`.
    pub fn pairing(&self, mu: &Weight, alpha: &Root) -> Q {
        mu.0.iter()
            .zip(&alpha.coroot)
            .map(|(m, &c)| m * Q::from_integer(c))
            .sum()
    }

    /// `<mu, alpha^vee>` for the positive root with index `idx`.
    pub fn pairing_idx(&self, mu: &Weight, idx: usize) -> Q {
        self.pairing(mu, &self.positive[idx])
    }

    /// `<beta, alpha^vee>` for roots `beta` and `alpha`.
    pub fn root_pairing(&self, beta: &Root, alpha: &Root) -> i64 {
        let r = self.rank();
        let mut total = 0;
        for q in 0..r {
            let pq: i64 = (0..r).map(|p| alpha.coroot[p] * self.cartan[p][q]).sum();
            total += beta.coords[q] * pq;
        }
        total
    }

    /// A root written in fundamental-weight coordinates.
    pub fn root_as_weight(&self, alpha: &Root) -> Weight {
        Weight::from_ints(&mat_vec(&self.cartan, &alpha.coords))
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_to_root_coords(&self, mu: &Weight) -> Vec<Q> {
        self.inverse_cartan
            .iter()
            .map(|row| row.iter().zip(&mu.0).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Sum of the simple-root coordinates of a weight.
    pub fn height(&self, mu: &Weight) -> Q {
        self.weight_to_root_coords(mu).into_iter().sum()
    }

    /// `s_alpha(mu) = mu - <mu, alpha^vee> alpha`.
    pub fn reflect_weight(&self, alpha: &Root, mu: &Weight) -> Weight {
        let c = self.pairing(mu, alpha);
        mu - &self.root_as_weight(alpha).scale(c)
    }

    /// `s_alpha(beta)`.
    pub fn reflect_root(&self, alpha: &Root, beta: &Root) -> Root {
        let c = self.root_pairing(beta, alpha);
        let coords: Vec<i64> = beta.coords.iter().zip(&alpha.coords).map(|(b, a)| b - c * a).collect();
        self.root_from_coords(&coords).expect("reflection of a root is a root")
    }

    /// Affine reflection `s_{alpha,k}: mu -> s_alpha(mu) + k alpha`, fixing the
    /// hyperplane `<mu, alpha^vee> = k`.
    pub fn affine_reflect(&self, alpha: &Root, k: Q, mu: &Weight) -> Weight {
        let c = self.pairing(mu, alpha) - k;
        mu - &self.root_as_weight(alpha).scale(c)
    }

    pub fn identity(&self) -> WeylElement {
        let r = self.rank();
        let id: Vec<Vec<i64>> = (0..r).map(|s| (0..r).map(|q| i64::from(s == q)).collect()).collect();
        WeylElement {
            root_action: id.clone(),
            weight_action: id,
            length: 0,
        }
    }

    pub fn simple_reflection(&self, p: usize) -> &WeylElement {
        &self.simple_reflections[p]
    }

    /// The reflection `s_alpha` for the positive root with index `idx`.
    pub fn reflection(&self, idx: usize) -> &WeylElement {
        &self.reflections[idx]
    }

    /// `u * w` (first `w`, then `u`).
    pub fn compose(&self, u: &WeylElement, w: &WeylElement) -> WeylElement {
        self.element(
            mat_mul(&u.root_action, &w.root_action),
            mat_mul(&u.weight_action, &w.weight_action),
        )
    }

    pub fn from_word(&self, word: &[usize]) -> WeylElement {
        word.iter().fold(self.identity(), |acc, &p| {
            self.compose(&acc, &self.simple_reflections[p])
        })
    }

    /// A reduced word `p_1 ... p_l` with `w = s_{p_1} ... s_{p_l}`.
    pub fn reduced_word(&self, w: &WeylElement) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while cur.length > 0 {
            let p = (0..self.rank())
                .find(|&p| !is_positive_coords(&cur.act_on_coords(&unit(self.rank(), p))))
                .expect("a nontrivial element has a right descent");
            cur = self.compose(&cur, &self.simple_reflections[p]);
            word.push(p);
        }
        word.reverse();
        word
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let mut word = self.reduced_word(w);
        word.reverse();
        self.from_word(&word)
    }

    pub fn apply_root(&self, w: &WeylElement, alpha: &Root) -> Root {
        self.root_from_coords(&w.act_on_coords(&alpha.coords))
            .expect("Weyl group permutes the roots")
    }

    /// Image of the positive root `idx`, as (index of |w(alpha)|, sign > 0).
    pub fn apply_root_idx(&self, w: &WeylElement, idx: usize) -> (usize, bool) {
        self.signed_index(&w.act_on_coords(&self.positive[idx].coords))
            .expect("Weyl group permutes the roots")
    }

    pub fn apply_weight(&self, w: &WeylElement, mu: &Weight) -> Weight {
        Weight(
            w.weight_action
                .iter()
                .map(|row| row.iter().zip(&mu.0).map(|(&a, b)| Q::from_integer(a) * b).sum())
                .collect(),
        )
    }

    /// `ell(w s_beta) = ell(w) + 1`.
    pub fn is_cover(&self, w: &WeylElement, beta: &Root) -> bool {
        match self.index_of(beta) {
            Some(idx) => self.is_cover_idx(w, idx),
            None => false,
        }
    }

    pub fn is_cover_idx(&self, w: &WeylElement, idx: usize) -> bool {
        let (_, positive) = self.apply_root_idx(w, idx);
        positive && self.compose(w, &self.reflections[idx]).length == w.length + 1
    }

    /// The dominant element of the orbit `W mu`.
    pub fn dominant_conjugate(&self, mu: &Weight) -> Weight {
        let mut cur = mu.clone();
        while let Some(p) = cur.0.iter().position(|c| c.is_negative()) {
            cur = self.reflect_weight(self.simple_root(p), &cur);
        }
        cur
    }

    /// The antidominant element of the orbit `W mu`.
    pub fn antidominant_conjugate(&self, mu: &Weight) -> Weight {
        -self.dominant_conjugate(&-mu)
    }

    /// The orbit `W mu`, sorted.
    pub fn orbit(&self, mu: &Weight) -> Vec<Weight> {
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(mu.clone());
        queue.push_back(mu.clone());
        while let Some(nu) = queue.pop_front() {
            for p in 0..self.rank() {
                let next = self.reflect_weight(self.simple_root(p), &nu);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The highest coroot: the positive coroot of maximal height. Only
    /// meaningful for irreducible systems.
    pub fn highest_coroot(&self) -> Result<&Root> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let mut best: Option<&Root> = None;
        for root in &self.positive {
            let h: i64 = root.coroot.iter().sum();
            match best {
                Some(b) if b.coroot.iter().sum::<i64>() >= h => {}
                _ => best = Some(root),
            }
        }
        Ok(best.expect("nonempty root system"))
    }

    /// The root subsystem generated by the simple roots in `subset`, together
    /// with the map from its simple indices to ours.
    pub fn levi(&self, subset: &[usize]) -> Result<RootSystem> {
        let sub: Vec<Vec<i64>> = subset
            .iter()
            .map(|&p| subset.iter().map(|&q| self.cartan[p][q]).collect())
            .collect();
        RootSystem::from_cartan(sub)
    }

    pub fn check_weight(&self, mu: &Weight) -> Result<()> {
        if mu.rank() != self.rank() {
            return Err(Error::InvalidWeight(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                mu.rank()
            )));
        }
        Ok(())
    }

    pub fn check_dominant_integral(&self, mu: &Weight) -> Result<()> {
        self.check_weight(mu)?;
        if !mu.is_integral() {
            return Err(Error::InvalidWeight(format!("{mu} is not integral")));
        }
        if !mu.is_dominant() {
            return Err(Error::NotDominant(mu.to_string()));
        }
        Ok(())
    }
}

fn unit(r: usize, p: usize) -> Vec<i64> {
    let mut e = vec![0; r];
    e[p] = 1;
    e
}

fn is_positive_coords(c: &[i64]) -> bool {
    match c.iter().find(|&&x| x != 0) {
        Some(&x) => x > 0,
        None => false,
    }
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn connected_components(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let r = cartan.len();
    let mut comp = vec![usize::MAX; r];
    let mut out = Vec::new();
    for start in 0..r {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for q in 0..r {
                if q != p && cartan[p][q] != 0 && comp[q] == usize::MAX {
                    comp[q] = id;
                    members.push(q);
                    stack.push(q);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Half squared lengths `d_p` with `d_p a[p][q] = d_q a[q][p]`, primitive
/// integers on each component.
fn symmetrizer(cartan: &[Vec<i64>], components: &[Vec<usize>]) -> Result<Vec<i64>> {
    let r = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; r];
    for comp in components {
        d[comp[0]] = Some(Q::one());
        let mut stack = vec![comp[0]];
        while let Some(p) = stack.pop() {
            let dp = d[p].unwrap();
            for q in 0..r {
                if q == p || cartan[p][q] == 0 {
                    continue;
                }
                let dq = dp * Q::new(cartan[p][q], cartan[q][p]);
                match d[q] {
                    None => {
                        d[q] = Some(dq);
                        stack.push(q);
                    }
                    Some(existing) if existing != dq => {
                        return Err(Error::InvalidCartan("matrix is not symmetrizable".into()))
                    }
                    _ => {}
                }
            }
        }
        // Rescale to primitive integers.
        let lcm = comp
            .iter()
            .map(|&p| *d[p].unwrap().denom())
            .fold(1i64, |a, b| a.lcm(&b));
        let ints: Vec<i64> = comp
            .iter()
            .map(|&p| (d[p].unwrap() * Q::from_integer(lcm)).to_integer())
            .collect();
        let g = ints.iter().copied().fold(0i64, |a, b| a.gcd(&b));
        for (&p, v) in comp.iter().zip(ints) {
            d[p] = Some(Q::from_integer(v / g));
        }
    }
    Ok(d.into_iter().map(|x| x.unwrap().to_integer()).collect())
}

fn check_positive_definite(cartan: &[Vec<i64>], half_norms: &[i64]) -> Result<()> {
    let r = cartan.len();
    let mut m: Vec<Vec<Q>> = (0..r)
        .map(|p| (0..r).map(|q| Q::from_integer(half_norms[p] * cartan[p][q])).collect())
        .collect();
    // Symmetric Gaussian elimination; positive definite iff every pivot > 0.
    for k in 0..r {
        if m[k][k] <= Q::zero() {
            return Err(Error::NotFiniteType);
        }
        for i in k + 1..r {
            let f = m[i][k] / m[k][k];
            for j in k..r {
                let v = m[k][j] * f;
                m[i][j] -= v;
            }
        }
    }
    Ok(())
}

fn invert(a: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let r = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<Q> = row.iter().map(|&x| Q::from_integer(x)).collect();
            v.extend((0..r).map(|j| Q::from_integer(i64::from(i == j))));
            v
        })
        .collect();
    for col in 0..r {
        let pivot = (col..r).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Q::one() / m[col][col];
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for i in 0..r {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col];
                for j in 0..2 * r {
                    let v = m[col][j] * f;
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[r..].to_vec()).collect())
}
