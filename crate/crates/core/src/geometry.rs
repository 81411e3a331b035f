//! The finite-type geometric picture: alcove coordinates along a lambda-chain,
//! the folded gallery through central points, and the discrete LS chain
//! attached to an admissible subset of a lexicographic chain.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::crystal::{display_positions, is_admissible};
use crate::error::{Error, Result};
use crate::folding::folding_of;
use crate::lambda_chain::LambdaChain;
use crate::root_system::{fmt_q_full, Root, RootSystem, Weight, Q};

/// `m_alpha^i` for every step `i = 0..=l` and positive root `alpha` (by index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcoveCoords {
    steps: Vec<Vec<i64>>,
}

impl AlcoveCoords {
    pub fn steps(&self) -> &[Vec<i64>] {
        &self.steps
    }

    /// Number of alcoves on the path, `l + 1`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn at(&self, step: usize) -> &[i64] {
        &self.steps[step]
    }

    /// The sequence `m_alpha^0, ..., m_alpha^l` for one root.
    pub fn sequence(&self, alpha: usize) -> Vec<i64> {
        self.steps.iter().map(|m| m[alpha]).collect()
    }
}

pub fn coxeter_number(rs: &RootSystem) -> Result<i64> {
    let theta = rs.highest_coroot()?;
    Ok(theta.coroot().iter().sum::<i64>() + 1)
}

/// Checks `m_gamma - m_alpha - m_beta` in `{0, 1}` over all coroot triples and
/// returns the first offending triple.
pub fn shi_violation(rs: &RootSystem, m: &[i64]) -> Option<String> {
    rs.coroot_triples().iter().find_map(|t| {
        let d = m[t.gamma] - m[t.alpha] - m[t.beta];
        (d != 0 && d != 1).then(|| {
            format!(
                "m[{}] - m[{}] - m[{}] = {}",
                rs.root(t.gamma),
                rs.root(t.alpha),
                rs.root(t.beta),
                d
            )
        })
    })
}

/// Whether `x` lies strictly inside the alcove with coordinates `m`.
pub fn alcove_contains(rs: &RootSystem, m: &[i64], x: &Weight) -> bool {
    (0..rs.num_positive()).all(|a| {
        let c = rs.pairing_idx(x, a);
        c > Q::from_integer(m[a]) && c < Q::from_integer(m[a] + 1)
    })
}

pub fn alcove_coords(chain: &LambdaChain) -> Result<AlcoveCoords> {
    let rs = chain.root_system();
    if !rs.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let mut current = vec![0i64; rs.num_positive()];
    let mut steps = vec![current.clone()];
    for i in 0..chain.len() {
        current[chain.root_index(i)] -= 1;
        steps.push(current.clone());
    }
    for (step, m) in steps.iter().enumerate() {
        if let Some(detail) = shi_violation(rs, m) {
            return Err(Error::ShiViolation { step, detail });
        }
    }
    Ok(AlcoveCoords { steps })
}

/// The folded gallery `gamma(J)` recorded as its points
/// `eta'_0, ..., eta'_{2l+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryPath {
    coxeter: i64,
    positions: Vec<usize>,
    points: Vec<Weight>,
}

/// Central points of the alcoves `A_0, ..., A_l` along the chain: start at
/// `rho/h` and step by `-beta_i/h` across each wall.
pub fn central_points(chain: &LambdaChain) -> Result<Vec<Weight>> {
    let rs = chain.root_system();
    let h = Q::from_integer(coxeter_number(rs)?);
    let mut zeta = Weight::rho(rs.rank()).scale(h.recip());
    let mut out = vec![zeta.clone()];
    for i in 0..chain.len() {
        zeta = &zeta - &rs.root_as_weight(chain.root(i)).scale(h.recip());
        out.push(zeta.clone());
    }
    Ok(out)
}

pub fn path_points(chain: &LambdaChain, positions: &[usize]) -> Result<GalleryPath> {
    let rs = chain.root_system();
    let coxeter = coxeter_number(rs)?;
    if !is_admissible(chain, positions)? {
        return Err(Error::NotAdmissible(display_positions(positions)));
    }
    let zetas = central_points(chain)?;
    let half = Q::new(1, 2);
    let mut unfolded = vec![Weight::zero(rs.rank())];
    for (i, zeta) in zetas.iter().enumerate() {
        if i > 0 {
            let prev = &zetas[i - 1];
            unfolded.push((prev + zeta).scale(half));
        }
        unfolded.push(zeta.clone());
    }
    unfolded.push(-chain.lambda());

    // The face F_j (1-based j) is the point eta_{2j}; the reflection fixing it
    // acts on that point and everything after it.
    let points = unfolded
        .iter()
        .enumerate()
        .map(|(n, eta)| {
            positions
                .iter()
                .rev()
                .filter(|&&j| 2 * (j + 1) <= n)
                .fold(eta.clone(), |x, &j| {
                    rs.affine_reflect(chain.root(j), Q::from_integer(-chain.initial_level(j)), &x)
                })
        })
        .collect();
    Ok(GalleryPath {
        coxeter,
        positions: positions.to_vec(),
        points,
    })
}

impl GalleryPath {
    pub fn coxeter_number(&self) -> i64 {
        self.coxeter
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn points(&self) -> &[Weight] {
        &self.points
    }

    pub fn endpoint(&self) -> &Weight {
        self.points.last().expect("a gallery has at least three points")
    }

    /// Compares consecutive differences with the folding data of the same
    /// subset. Returns a description of every mismatch.
    pub fn difference_failures(&self, chain: &LambdaChain) -> Result<Vec<String>> {
        let rs = chain.root_system();
        let folding = folding_of(chain, &self.positions)?;
        let l = chain.len();
        let mut failures = Vec::new();
        if self.points.len() != 2 * l + 3 {
            failures.push(format!("expected {} points, found {}", 2 * l + 3, self.points.len()));
            return Ok(failures);
        }
        let h = Q::from_integer(self.coxeter);
        let two_h = h * Q::from_integer(2);
        let p = &self.points;
        let mut expect = |label: String, got: Weight, want: Weight| {
            if got != want {
                failures.push(format!("{label}: got ({got}), expected ({want})"));
            }
        };
        expect("eta'_0".into(), p[0].clone(), Weight::zero(rs.rank()));
        expect("eta'_1".into(), p[1].clone(), Weight::rho(rs.rank()).scale(h.recip()));
        for (k, e) in folding.entries().iter().enumerate() {
            let i = k + 1;
            let gamma = rs.root_as_weight(&e.root).scale(two_h.recip());
            expect(
                format!("step {i}, before the face"),
                &p[2 * i - 1] - &p[2 * i],
                gamma.clone(),
            );
            expect(
                format!("step {i}, after the face"),
                &p[2 * i] - &p[2 * i + 1],
                gamma.scale(Q::from_integer(e.epsilon)),
            );
        }
        expect(
            "final segment".into(),
            &p[2 * l + 1] - &p[2 * l + 2],
            folding.gamma_infinity().scale(h.recip()),
        );
        Ok(failures)
    }

    pub fn to_csv(&self) -> String {
        let rank = self.endpoint().rank();
        let mut out = String::from("index");
        for p in 1..=rank {
            let _ = write!(out, ",w{p}");
        }
        out.push('\n');
        for (n, pt) in self.points.iter().enumerate() {
            let _ = writeln!(out, "{n},{}", pt.to_full_strings().join(","));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "coxeterNumber": self.coxeter,
            "subset": self.positions.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "points": self.points.iter().map(Weight::to_full_strings).collect::<Vec<_>>(),
        })
    }
}

/// One cover `lower < upper` inside a block of equal jump time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsStep {
    pub lower: Weight,
    pub upper: Weight,
    /// `u_{h-1}(beta_{j_h})`, with `lower = s_root(upper)`.
    pub root: Root,
    /// The jump time of the block containing this step; zero for the
    /// initial block.
    pub time: Q,
    /// `<lambda, beta_{j_h}^vee>`.
    pub lambda_pairing: i64,
}

/// The chain `-mu_0 < -mu_1 < ... < -mu_l` in the orbit of `-lambda`, with
/// jump times `0 < a_1 < ... < a_l < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsChain {
    weights: Vec<Weight>,
    times: Vec<Q>,
    steps: Vec<LsStep>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LsReport {
    pub cover_failures: Vec<String>,
    /// `a_k <upper, root^vee>` not an integer.
    pub orbit_integrality_failures: Vec<String>,
    /// Denominator of `a_k` not dividing `<lambda, beta_{j_h}^vee>`.
    pub denominator_failures: Vec<String>,
    pub shape_failures: Vec<String>,
}

impl LsReport {
    pub fn passed(&self) -> bool {
        self.cover_failures.is_empty()
            && self.orbit_integrality_failures.is_empty()
            && self.denominator_failures.is_empty()
            && self.shape_failures.is_empty()
    }

    /// Whether the two integrality tests reached the same verdict on every step.
    pub fn forms_agree(&self) -> bool {
        self.orbit_integrality_failures.len() == self.denominator_failures.len()
    }
}

/// Number of positive roots pairing positively with `nu`. Along the orbit of
/// an antidominant weight this is the Bruhat rank.
fn orbit_rank(rs: &RootSystem, nu: &Weight) -> usize {
    (0..rs.num_positive())
        .filter(|&a| rs.pairing_idx(nu, a).is_positive())
        .count()
}

pub fn ls_chain_of(chain: &LambdaChain, positions: &[usize]) -> Result<LsChain> {
    if chain.simple_order().is_none() {
        return Err(Error::NotLexChain);
    }
    if !is_admissible(chain, positions)? {
        return Err(Error::NotAdmissible(display_positions(positions)));
    }
    let rs = chain.root_system();
    let lambda = chain.lambda();

    let mut blocks: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    blocks.insert(Q::zero(), Vec::new());
    for &j in positions {
        let t = Q::new(chain.initial_level(j), chain.lambda_pairing(j));
        blocks.entry(t).or_default().push(j);
    }

    let mut u = rs.identity();
    let mut weights = Vec::with_capacity(blocks.len());
    let mut times = Vec::with_capacity(blocks.len());
    let mut steps = Vec::with_capacity(positions.len());
    for (t, block) in &blocks {
        for &j in block {
            let lower = -rs.apply_weight(&u, lambda);
            let root = rs.apply_root(&u, chain.root(j));
            u = rs.compose(&u, rs.reflection(chain.root_index(j)));
            steps.push(LsStep {
                lower,
                upper: -rs.apply_weight(&u, lambda),
                root,
                time: *t,
                lambda_pairing: chain.lambda_pairing(j),
            });
        }
        if !t.is_zero() {
            times.push(*t);
        }
        weights.push(-rs.apply_weight(&u, lambda));
    }
    let ls = LsChain { weights, times, steps };
    let report = ls.validate(rs);
    if !report.passed() {
        return Err(Error::InternalInconsistency(format!(
            "LS chain of {} fails validation: {report:?}",
            display_positions(positions)
        )));
    }
    Ok(ls)
}

impl LsChain {
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn times(&self) -> &[Q] {
        &self.times
    }

    pub fn steps(&self) -> &[LsStep] {
        &self.steps
    }

    /// `pi(1) = sum_k (a_{k+1} - a_k) nu_k`, with `a_0 = 0` and `a_{l+1} = 1`.
    pub fn endpoint(&self) -> Weight {
        let rank = self.weights[0].rank();
        let mut bounds = vec![Q::zero()];
        bounds.extend(self.times.iter().copied());
        bounds.push(Q::one());
        self.weights
            .iter()
            .enumerate()
            .fold(Weight::zero(rank), |acc, (k, nu)| {
                &acc + &nu.scale(bounds[k + 1] - bounds[k])
            })
    }

    pub fn validate(&self, rs: &RootSystem) -> LsReport {
        let mut report = LsReport::default();
        if self.weights.len() != self.times.len() + 1 {
            report.shape_failures.push(format!(
                "{} weights against {} jump times",
                self.weights.len(),
                self.times.len()
            ));
        }
        let increasing = self.times.windows(2).all(|w| w[0] < w[1]);
        let inside = self.times.iter().all(|t| t.is_positive() && *t < Q::one());
        if !increasing || !inside {
            report
                .shape_failures
                .push("jump times not strictly increasing in (0,1)".into());
        }
        for (h, step) in self.steps.iter().enumerate() {
            let pairing = rs.pairing(&step.upper, &step.root);
            let cover = pairing.is_positive()
                && rs.reflect_weight(&step.root, &step.upper) == step.lower
                && orbit_rank(rs, &step.upper) == orbit_rank(rs, &step.lower) + 1;
            if !cover {
                report.cover_failures.push(format!(
                    "step {}: ({}) does not cover ({})",
                    h + 1,
                    step.upper,
                    step.lower
                ));
            }
            if !(step.time * pairing).is_integer() {
                report.orbit_integrality_failures.push(format!(
                    "step {}: {} * {} is not an integer",
                    h + 1,
                    fmt_q_full(&step.time),
                    fmt_q_full(&pairing)
                ));
            }
            if step.lambda_pairing == 0 || step.lambda_pairing % step.time.denom() != 0 {
                report.denominator_failures.push(format!(
                    "step {}: denominator of {} does not divide {}",
                    h + 1,
                    fmt_q_full(&step.time),
                    step.lambda_pairing
                ));
            }
        }
        report
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "weights": self.weights.iter().map(Weight::to_full_strings).collect::<Vec<_>>(),
            "times": self.times.iter().map(fmt_q_full).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::crystal::enumerate_admissible;
    use crate::folding::weight_mu;

    fn chain(ty: &str, lambda: &[i64]) -> LambdaChain {
        let rs = Arc::new(RootSystem::of_type(ty).unwrap());
        LambdaChain::lex_default(rs, Weight::from_ints(lambda)).unwrap()
    }

    fn idx(rs: &RootSystem, coords: &[i64]) -> usize {
        rs.signed_index(coords).unwrap().0
    }

    #[test]
    fn coxeter_numbers() {
        for (ty, h) in [
            ("A1", 2),
            ("A2", 3),
            ("A3", 4),
            ("B2", 4),
            ("B3", 6),
            ("C3", 6),
            ("G2", 6),
        ] {
            assert_eq!(coxeter_number(&RootSystem::of_type(ty).unwrap()).unwrap(), h, "{ty}");
        }
        let reducible = RootSystem::from_cartan(vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(coxeter_number(&reducible), Err(Error::NotIrreducible));
    }

    #[test]
    fn a2_alcove_sequences() {
        let c = chain("A2", &[1, 0]);
        let rs = c.root_system();
        let coords = alcove_coords(&c).unwrap();
        assert_eq!(coords.len(), 3);
        assert_eq!(coords.sequence(idx(rs, &[1, 0])), vec![0, -1, -1]);
        assert_eq!(coords.sequence(idx(rs, &[1, 1])), vec![0, 0, -1]);
        assert_eq!(coords.sequence(idx(rs, &[0, 1])), vec![0, 0, 0]);
    }

    #[test]
    fn zero_weight_has_one_alcove() {
        let coords = alcove_coords(&chain("B2", &[0, 0])).unwrap();
        assert_eq!(coords.steps(), &[vec![0; 4]]);
    }

    #[test]
    fn shi_detects_bad_coordinates() {
        let rs = RootSystem::of_type("A2").unwrap();
        let mut m = vec![0; 3];
        m[idx(&rs, &[1, 1])] = -1;
        assert!(shi_violation(&rs, &m).is_some());
        m[idx(&rs, &[1, 0])] = -1;
        assert!(shi_violation(&rs, &m).is_none());
    }

    #[test]
    fn central_points_sit_in_their_alcoves() {
        let c = chain("G2", &[0, 1]);
        let rs = c.root_system();
        let coords = alcove_coords(&c).unwrap();
        for (m, zeta) in coords.steps().iter().zip(central_points(&c).unwrap()) {
            assert!(alcove_contains(rs, m, &zeta));
        }
    }

    #[test]
    fn empty_subset_is_a_straight_walk() {
        let c = chain("A2", &[1, 1]);
        let path = path_points(&c, &[]).unwrap();
        assert_eq!(path.points().len(), 2 * c.len() + 3);
        assert_eq!(path.endpoint(), &-c.lambda());
        assert!(path.difference_failures(&c).unwrap().is_empty());
    }

    #[test]
    fn g2_folded_endpoint() {
        let c = chain("G2", &[0, 1]);
        let j = [0, 1, 7];
        let path = path_points(&c, &j).unwrap();
        assert_eq!(path.endpoint(), &-weight_mu(&c, &j).unwrap());
        assert!(path.difference_failures(&c).unwrap().is_empty());
        assert!(matches!(path_points(&c, &[1]), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn csv_rows() {
        let c = chain("A1", &[1]);
        let csv = path_points(&c, &[0]).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "index,w1");
        assert_eq!(lines.len(), 1 + 5);
        assert_eq!(lines[1], "0,0/1");
        assert_eq!(lines[2], "1,1/2");
        assert_eq!(lines[5], "4,1/1");
    }

    #[test]
    fn ls_chain_of_empty_subset() {
        let c = chain("B2", &[1, 1]);
        let ls = ls_chain_of(&c, &[]).unwrap();
        assert_eq!(ls.weights(), &[-c.lambda()]);
        assert!(ls.times().is_empty());
        assert_eq!(ls.endpoint(), -c.lambda());
    }

    #[test]
    fn a2_two_step_ls_chain() {
        let c = chain("A2", &[1, 0]);
        let rs = c.root_system().clone();
        let ls = ls_chain_of(&c, &[0, 1]).unwrap();
        // Both positions have t = 0, so they form the initial block.
        assert_eq!(ls.weights().len(), 1);
        assert_eq!(ls.steps().len(), 2);
        let report = ls.validate(&rs);
        assert!(report.passed() && report.forms_agree());
        assert_eq!(ls.weights()[0], Weight::from_ints(&[0, 1]));
        assert_eq!(ls.endpoint(), -weight_mu(&c, &[0, 1]).unwrap());
    }

    #[test]
    fn ls_endpoints_and_injectivity_for_g2() {
        let c = chain("G2", &[0, 1]);
        let subsets = enumerate_admissible(&c, 1000).unwrap();
        let mut seen = std::collections::HashSet::new();
        for s in &subsets {
            let ls = ls_chain_of(&c, &s.positions).unwrap();
            assert_eq!(ls.endpoint(), -&s.weight);
            assert!(seen.insert((ls.weights().to_vec(), ls.times().to_vec())));
        }
    }

    #[test]
    fn user_chain_is_not_lex() {
        let c = chain("A2", &[1, 0]);
        let rs = c.root_system().clone();
        let roots: Vec<usize> = c.entries().iter().map(|e| e.root).collect();
        let user = LambdaChain::from_roots(rs, c.lambda().clone(), &roots).unwrap();
        assert_eq!(ls_chain_of(&user, &[]), Err(Error::NotLexChain));
    }
}
