//! Admissible subsets, the root operators `F_p` / `E_p`, and the crystal graph
//! they generate, with audits of the crystal axioms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::folding::{folding_of, weight_mu, Folding};
use crate::lambda_chain::LambdaChain;
use crate::root_system::{RootSystem, Weight, WeylElement};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSubset {
    pub positions: Vec<usize>,
    pub kappa: WeylElement,
    pub weight: Weight,
}

impl AdmissibleSubset {
    /// Checks admissibility and caches `kappa(J)` and `mu(J)`.
    pub fn new(chain: &LambdaChain, positions: Vec<usize>) -> Result<Self> {
        let kappa =
            admissible_kappa(chain, &positions)?.ok_or_else(|| Error::NotAdmissible(display_positions(&positions)))?;
        let weight = weight_mu(chain, &positions)?;
        Ok(AdmissibleSubset {
            positions,
            kappa,
            weight,
        })
    }

    fn trusted(chain: &LambdaChain, positions: Vec<usize>) -> Result<Self> {
        let kappa = crate::folding::kappa(chain, &positions)?;
        let weight = weight_mu(chain, &positions)?;
        Ok(AdmissibleSubset {
            positions,
            kappa,
            weight,
        })
    }
}

/// `{1,2,8}`-style rendering with 1-based positions.
pub fn display_positions(positions: &[usize]) -> String {
    let parts: Vec<String> = positions.iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// The product `kappa(J)` if every prefix extends by a Bruhat cover.
fn admissible_kappa(chain: &LambdaChain, positions: &[usize]) -> Result<Option<WeylElement>> {
    chain.check_subset(positions)?;
    let rs = chain.root_system();
    let mut w = rs.identity();
    for &j in positions {
        let beta = chain.root_index(j);
        let next = rs.compose(&w, rs.reflection(beta));
        if next.length() != w.length() + 1 {
            return Ok(None);
        }
        w = next;
    }
    Ok(Some(w))
}

pub fn is_admissible(chain: &LambdaChain, positions: &[usize]) -> Result<bool> {
    Ok(admissible_kappa(chain, positions)?.is_some())
}

/// All admissible subsets by depth-first extension, sorted by position list.
pub fn enumerate_admissible(chain: &LambdaChain, cap: usize) -> Result<Vec<AdmissibleSubset>> {
    let rs = chain.root_system();
    let mut found: Vec<(Vec<usize>, WeylElement)> = Vec::new();
    let mut stack = vec![(Vec::<usize>::new(), rs.identity())];
    while let Some((positions, w)) = stack.pop() {
        let start = positions.last().map_or(0, |&j| j + 1);
        for j in start..chain.len() {
            let next = rs.compose(&w, rs.reflection(chain.root_index(j)));
            if next.length() == w.length() + 1 {
                let mut extended = positions.clone();
                extended.push(j);
                stack.push((extended, next));
            }
        }
        found.push((positions, w));
        if found.len() > cap {
            return Err(Error::SizeCapExceeded { cap });
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found
        .into_iter()
        .map(|(positions, kappa)| {
            let weight = weight_mu(chain, &positions)?;
            Ok(AdmissibleSubset {
                positions,
                kappa,
                weight,
            })
        })
        .collect()
}

/// A root-operator move `J -> J xor {k} xor {m}`; `m = None` stands for the
/// sentinel position at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub k: usize,
    pub m: Option<usize>,
}

impl Move {
    fn apply(&self, positions: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = positions.iter().copied().collect();
        for p in std::iter::once(self.k).chain(self.m) {
            if !set.remove(&p) {
                set.insert(p);
            }
        }
        set.into_iter().collect()
    }
}

/// Everything the root operators of one color need from a folding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorStats {
    /// `M(J,p)`: the maximum of the levels along `alpha_p` and the endpoint.
    pub max_level: i64,
    /// `<mu(J), alpha_p^vee>`.
    pub endpoint: i64,
    pub lower: Option<Move>,
    pub raise: Option<Move>,
}

impl ColorStats {
    pub fn eps(&self) -> i64 {
        self.max_level
    }

    pub fn delta(&self) -> i64 {
        self.endpoint - self.max_level
    }

    /// The timing `t(J,p)`: the folding position `k` of `E_p`, when defined.
    pub fn timing(&self) -> Option<usize> {
        self.raise.map(|mv| mv.k)
    }

    fn compute(folding: &Folding, mu: &Weight, p: usize) -> Result<Self> {
        let rs = folding.root_system();
        let alpha = rs.simple_index(p);
        let endpoint = mu.coords()[p].to_integer();
        let occ = folding.occurrences(alpha);
        let levels: Vec<i64> = occ.iter().map(|&i| folding.entries()[i].level).collect();
        let max_level = levels.iter().copied().fold(endpoint, i64::max);
        let broken = |what: &str| {
            Error::InternalInconsistency(format!(
                "{what} missing for color {} on {}",
                p + 1,
                display_positions(folding.positions())
            ))
        };

        let lower = if max_level > 0 {
            let first = levels.iter().position(|&l| l == max_level);
            let (k, m) = match first {
                Some(0) => return Err(broken("predecessor of m")),
                Some(at) => (occ[at - 1], Some(occ[at])),
                None => (*occ.last().ok_or_else(|| broken("last occurrence"))?, None),
            };
            Some(Move { k, m })
        } else {
            None
        };

        let raise = if max_level > endpoint {
            let at = levels
                .iter()
                .rposition(|&l| l == max_level)
                .ok_or_else(|| broken("k for raising"))?;
            Some(Move {
                k: occ[at],
                m: occ.get(at + 1).copied(),
            })
        } else {
            None
        };

        Ok(ColorStats {
            max_level,
            endpoint,
            lower,
            raise,
        })
    }
}

fn require_admissible(chain: &LambdaChain, positions: &[usize]) -> Result<()> {
    if is_admissible(chain, positions)? {
        Ok(())
    } else {
        Err(Error::NotAdmissible(display_positions(positions)))
    }
}

fn check_color(chain: &LambdaChain, p: usize) -> Result<()> {
    if p >= chain.root_system().rank() {
        return Err(Error::InvalidColor(p + 1));
    }
    Ok(())
}

/// Statistics of color `p` at the admissible subset `positions`.
pub fn color_stats(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<ColorStats> {
    check_color(chain, p)?;
    require_admissible(chain, positions)?;
    let folding = folding_of(chain, positions)?;
    let mu = weight_mu(chain, positions)?;
    ColorStats::compute(&folding, &mu, p)
}

pub fn m_stat(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<i64> {
    Ok(color_stats(chain, positions, p)?.max_level)
}

pub fn eps(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<i64> {
    Ok(color_stats(chain, positions, p)?.eps())
}

pub fn delta(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<i64> {
    Ok(color_stats(chain, positions, p)?.delta())
}

/// The lowering operator `F_p`; `None` when `eps(J,p) = 0`.
pub fn f_op(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<Option<AdmissibleSubset>> {
    let stats = color_stats(chain, positions, p)?;
    stats
        .lower
        .map(|mv| AdmissibleSubset::trusted(chain, mv.apply(positions)))
        .transpose()
}

/// The raising operator `E_p`; `None` when `delta(J,p) = 0`.
pub fn e_op(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<Option<AdmissibleSubset>> {
    let stats = color_stats(chain, positions, p)?;
    stats
        .raise
        .map(|mv| AdmissibleSubset::trusted(chain, mv.apply(positions)))
        .transpose()
}

/// Lengths `(a, b)` of the `alpha_p`-string through `J`, found by iterating
/// `F_p` and `E_p` until they stop.
pub fn string_through(chain: &LambdaChain, positions: &[usize], p: usize) -> Result<(usize, usize)> {
    let walk = |step: fn(&LambdaChain, &[usize], usize) -> Result<Option<AdmissibleSubset>>| {
        let mut count = 0;
        let mut cur = positions.to_vec();
        while let Some(next) = step(chain, &cur, p)? {
            cur = next.positions;
            count += 1;
        }
        Ok::<usize, Error>(count)
    };
    Ok((walk(f_op)?, walk(e_op)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalNode {
    pub positions: Vec<usize>,
    pub weight: Weight,
    pub kappa: WeylElement,
    pub stats: Vec<ColorStats>,
}

impl CrystalNode {
    pub fn eps(&self, p: usize) -> i64 {
        self.stats[p].eps()
    }

    pub fn delta(&self, p: usize) -> i64 {
        self.stats[p].delta()
    }

    pub fn timing(&self, p: usize) -> Option<usize> {
        self.stats[p].timing()
    }
}

/// `F_p(from) = to` for the color `p` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub color: usize,
}

#[derive(Clone, Debug)]
pub struct CrystalGraph {
    pub rs: Arc<RootSystem>,
    /// Sorted by position list, so the empty subset is node 0.
    pub nodes: Vec<CrystalNode>,
    pub index: HashMap<Vec<usize>, usize>,
    pub edges: Vec<Edge>,
}

fn analyse(chain: &LambdaChain, positions: Vec<usize>) -> Result<CrystalNode> {
    let rank = chain.root_system().rank();
    let folding = folding_of(chain, &positions)?;
    let weight = weight_mu(chain, &positions)?;
    let kappa = crate::folding::kappa(chain, &positions)?;
    let stats = (0..rank)
        .map(|p| ColorStats::compute(&folding, &weight, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrystalNode {
        positions,
        weight,
        kappa,
        stats,
    })
}

/// Closure of the empty subset under all lowering operators.
pub fn build_crystal_graph(chain: &LambdaChain, cap: usize) -> Result<CrystalGraph> {
    let rank = chain.root_system().rank();
    let mut seen: HashMap<Vec<usize>, CrystalNode> = HashMap::new();
    let mut raw_edges: Vec<(Vec<usize>, Vec<usize>, usize)> = Vec::new();
    let mut queue = VecDeque::from([Vec::new()]);
    seen.insert(Vec::new(), analyse(chain, Vec::new())?);
    while let Some(positions) = queue.pop_front() {
        for p in 0..rank {
            let Some(mv) = seen[&positions].stats[p].lower else {
                continue;
            };
            let target = mv.apply(&positions);
            if !seen.contains_key(&target) {
                if seen.len() >= cap {
                    return Err(Error::SizeCapExceeded { cap });
                }
                seen.insert(target.clone(), analyse(chain, target.clone())?);
                queue.push_back(target.clone());
            }
            raw_edges.push((positions.clone(), target, p));
        }
    }

    let mut nodes: Vec<CrystalNode> = seen.into_values().collect();
    nodes.sort_by(|a, b| a.positions.cmp(&b.positions));
    let index: HashMap<Vec<usize>, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.positions.clone(), i))
        .collect();
    let mut edges: Vec<Edge> = raw_edges
        .into_iter()
        .map(|(from, to, color)| Edge {
            from: index[&from],
            to: index[&to],
            color,
        })
        .collect();
    edges.sort();
    Ok(CrystalGraph {
        rs: chain.root_system().clone(),
        nodes,
        index,
        edges,
    })
}

/// Outcome of one audited property, with the first few counterexamples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Check {
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub a1: Check,
    pub a2: Check,
    pub a3: Check,
    pub a4_timing: Check,
    pub a4_coherence: Check,
    pub a5: Check,
}

impl AuditReport {
    pub fn named(&self) -> [(&'static str, &Check); 6] {
        [
            ("A1 signs of depth and rise", &self.a1),
            ("A2 operator domains", &self.a2),
            ("A3 weight and depth steps", &self.a3),
            ("A4 timing decreases along F", &self.a4_timing),
            ("A4 coherent timing", &self.a4_coherence),
            ("A5 maximum object", &self.a5),
        ]
    }

    pub fn passed(&self) -> bool {
        self.named().iter().all(|(_, c)| c.passed())
    }
}

impl CrystalGraph {
    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `out[x][p]`: target of the `p`-edge leaving `x`, if any. Extra
    /// parallel edges are reported by the audit, not here.
    pub fn outgoing(&self) -> Vec<Vec<Option<usize>>> {
        let mut out = vec![vec![None; self.rank()]; self.nodes.len()];
        for e in &self.edges {
            if e.color < self.rank() {
                out[e.from][e.color] = Some(e.to);
            }
        }
        out
    }

    pub fn incoming(&self) -> Vec<Vec<Option<usize>>> {
        let mut inc = vec![vec![None; self.rank()]; self.nodes.len()];
        for e in &self.edges {
            if e.color < self.rank() {
                inc[e.to][e.color] = Some(e.from);
            }
        }
        inc
    }

    /// The weight multiset of the nodes.
    pub fn weights(&self) -> Vec<Weight> {
        self.nodes.iter().map(|n| n.weight.clone()).collect()
    }

    /// Checks the crystal axioms using only the stored graph data.
    pub fn stembridge_audit(&self) -> AuditReport {
        let mut rep = AuditReport::default();
        let rank = self.rank();
        let n = self.nodes.len();
        let label = |x: usize| display_positions(&self.nodes[x].positions);

        for (x, node) in self.nodes.iter().enumerate() {
            for p in 0..rank {
                rep.a1.require(node.delta(p) <= 0 && node.eps(p) >= 0, || {
                    format!(
                        "{} color {}: delta {} eps {}",
                        label(x),
                        p + 1,
                        node.delta(p),
                        node.eps(p)
                    )
                });
            }
        }

        let mut out_count = vec![vec![0usize; rank]; n];
        let mut in_count = vec![vec![0usize; rank]; n];
        for e in &self.edges {
            if e.color >= rank || e.from >= n || e.to >= n {
                rep.a2.fail(format!("malformed edge {e:?}"));
                continue;
            }
            out_count[e.from][e.color] += 1;
            in_count[e.to][e.color] += 1;
            let (x, y) = (&self.nodes[e.from], &self.nodes[e.to]);
            let step = self.rs.root_as_weight(self.rs.simple_root(e.color));
            rep.a3.require(y.weight == &x.weight - &step, || {
                format!(
                    "{} -> {} color {}: weight step",
                    label(e.from),
                    label(e.to),
                    e.color + 1
                )
            });
            rep.a3.require(y.delta(e.color) == x.delta(e.color) - 1, || {
                format!("{} -> {} color {}: depth step", label(e.from), label(e.to), e.color + 1)
            });
        }
        for x in 0..n {
            for p in 0..rank {
                let node = &self.nodes[x];
                rep.a2.require(out_count[x][p] <= 1 && in_count[x][p] <= 1, || {
                    format!("{} color {}: repeated edges", label(x), p + 1)
                });
                rep.a2.require((out_count[x][p] > 0) == (node.eps(p) > 0), || {
                    format!("{} color {}: lowering edge vs eps {}", label(x), p + 1, node.eps(p))
                });
                rep.a2.require((in_count[x][p] > 0) == (node.delta(p) < 0), || {
                    format!("{} color {}: raising edge vs delta {}", label(x), p + 1, node.delta(p))
                });
            }
        }

        self.audit_timing(&mut rep);
        self.audit_maximum(&mut rep);
        rep
    }

    fn audit_timing(&self, rep: &mut AuditReport) {
        let rank = self.rank();
        let out = self.outgoing();
        let inc = self.incoming();
        let label = |x: usize| display_positions(&self.nodes[x].positions);

        // (delta, t) over y = E_q^k x, k >= 0, with delta(y,q) < 0.
        let raise_profile = |x: usize, q: usize| -> BTreeSet<(i64, usize)> {
            let mut set = BTreeSet::new();
            let mut cur = Some(x);
            let mut steps = 0;
            while let Some(y) = cur {
                let node = &self.nodes[y];
                if node.delta(q) < 0 {
                    if let Some(t) = node.timing(q) {
                        set.insert((node.delta(q), t));
                    }
                }
                cur = inc[y][q];
                steps += 1;
                if steps > self.nodes.len() {
                    break;
                }
            }
            set
        };

        for x in 0..self.nodes.len() {
            for p in 0..rank {
                let node = &self.nodes[x];
                if node.delta(p) >= 0 || node.eps(p) <= 0 {
                    continue;
                }
                let Some(y) = out[x][p] else { continue };
                let (Some(tx), Some(ty)) = (node.timing(p), self.nodes[y].timing(p)) else {
                    rep.a4_timing
                        .fail(format!("{} color {}: timing undefined", label(x), p + 1));
                    continue;
                };
                rep.a4_timing.require(tx > ty, || {
                    format!("{} color {}: t = {} not above {}", label(x), p + 1, tx + 1, ty + 1)
                });
                for q in (0..rank).filter(|&q| q != p) {
                    let keep = |s: BTreeSet<(i64, usize)>| -> BTreeSet<(i64, usize)> {
                        s.into_iter().filter(|&(_, t)| t >= tx).collect()
                    };
                    let here = keep(raise_profile(x, q));
                    let there = keep(raise_profile(y, q));
                    rep.a4_coherence.require(here == there, || {
                        format!("{} colors {}/{}: {:?} vs {:?}", label(x), p + 1, q + 1, here, there)
                    });
                }
            }
        }
    }

    fn audit_maximum(&self, rep: &mut AuditReport) {
        let rank = self.rank();
        let Some(root) = self.index.get(&Vec::new()).copied() else {
            rep.a5.fail("empty subset missing".into());
            return;
        };
        for (x, node) in self.nodes.iter().enumerate() {
            let raisable = (0..rank).any(|p| node.delta(p) < 0);
            if x == root {
                rep.a5.require(!raisable, || "empty subset can be raised".into());
            } else {
                rep.a5.require(raisable, || {
                    format!("{} is a second maximal node", display_positions(&node.positions))
                });
            }
        }
        let out = self.outgoing();
        let mut seen = vec![false; self.nodes.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for y in out[x].iter().flatten() {
                if !seen[*y] {
                    seen[*y] = true;
                    queue.push_back(*y);
                }
            }
        }
        let unreached = seen.iter().filter(|s| !**s).count();
        rep.a5.require(unreached == 0, || {
            format!("{unreached} nodes not reachable from the empty subset")
        });
    }

    /// Parallel traversal from the two maximal nodes, matching edges color by
    /// color and comparing weights.
    pub fn isomorphic_to(&self, other: &CrystalGraph) -> bool {
        if self.rank() != other.rank() || self.nodes.len() != other.nodes.len() {
            return false;
        }
        let (Some(&r1), Some(&r2)) = (self.index.get(&Vec::new()), other.index.get(&Vec::new())) else {
            return false;
        };
        let (out1, out2) = (self.outgoing(), other.outgoing());
        let mut map: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut used = vec![false; other.nodes.len()];
        map[r1] = Some(r2);
        used[r2] = true;
        let mut queue = VecDeque::from([(r1, r2)]);
        while let Some((x, y)) = queue.pop_front() {
            if self.nodes[x].weight != other.nodes[y].weight {
                return false;
            }
            for p in 0..self.rank() {
                match (out1[x][p], out2[y][p]) {
                    (None, None) => {}
                    (Some(a), Some(b)) => match map[a] {
                        Some(existing) if existing != b => return false,
                        Some(_) => {}
                        None => {
                            if used[b] {
                                return false;
                            }
                            map[a] = Some(b);
                            used[b] = true;
                            queue.push_back((a, b));
                        }
                    },
                    _ => return false,
                }
            }
        }
        map.iter().all(Option::is_some) && self.edges.len() == other.edges.len()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n  node [shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{} [label=\"{} | {}\"];",
                i,
                display_positions(&node.positions),
                node.weight
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  n{} -> n{} [label=\"{}\", colorscheme=set19, color={}];",
                e.from,
                e.to,
                e.color + 1,
                e.color % 9 + 1
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Node {
            positions: Vec<usize>,
            weight: Vec<String>,
            eps: Vec<i64>,
            delta: Vec<i64>,
        }
        #[derive(Serialize)]
        struct EdgeJson {
            from: usize,
            to: usize,
            color: usize,
        }
        #[derive(Serialize)]
        struct Doc {
            root: usize,
            nodes: Vec<Node>,
            edges: Vec<EdgeJson>,
        }
        let doc = Doc {
            root: self.index.get(&Vec::new()).copied().unwrap_or(0),
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    positions: n.positions.iter().map(|p| p + 1).collect(),
                    weight: n.weight.to_full_strings(),
                    eps: (0..self.rank()).map(|p| n.eps(p)).collect(),
                    delta: (0..self.rank()).map(|p| n.delta(p)).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    to: e.to,
                    color: e.color + 1,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }
}

pub fn graphs_isomorphic(g1: &CrystalGraph, g2: &CrystalGraph) -> bool {
    g1.isomorphic_to(g2)
}

/// Operator-level identities checked node by node against the chain itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorReport {
    pub raise_after_lower: Check,
    pub lower_after_raise: Check,
    pub string_identity: Check,
    pub kappa_transport: Check,
    pub statistics_transport: Check,
}

impl OperatorReport {
    pub fn named(&self) -> [(&'static str, &Check); 5] {
        [
            ("E after F is the identity", &self.raise_after_lower),
            ("F after E is the identity", &self.lower_after_raise),
            ("string lengths differ by the pairing", &self.string_identity),
            ("kappa under F", &self.kappa_transport),
            ("M, k and m under F", &self.statistics_transport),
        ]
    }

    pub fn passed(&self) -> bool {
        self.named().iter().all(|(_, c)| c.passed())
    }
}

/// Walks every node and color of `graph`, re-deriving each operator value
/// from the chain.
pub fn operator_audit(chain: &LambdaChain, graph: &CrystalGraph) -> Result<OperatorReport> {
    let rs = chain.root_system();
    let mut rep = OperatorReport::default();
    for node in &graph.nodes {
        let j = &node.positions;
        let name = display_positions(j);
        for p in 0..rs.rank() {
            let stats = &node.stats[p];
            if let Some(mv) = stats.lower {
                let lowered = mv.apply(j);
                let back = graph_stats(chain, graph, &lowered, p)?;
                let raised = back.raise.map(|m| m.apply(&lowered));
                rep.raise_after_lower
                    .require(raised.as_deref() == Some(j.as_slice()), || {
                        format!("{name} color {}", p + 1)
                    });
                let lowered_kappa = crate::folding::kappa(chain, &lowered)?;
                let expected = if mv.m.is_some() {
                    node.kappa.clone()
                } else {
                    rs.compose(rs.simple_reflection(p), &node.kappa)
                };
                rep.kappa_transport
                    .require(lowered_kappa == expected, || format!("{name} color {}", p + 1));
                rep.statistics_transport
                    .require(back.max_level == stats.max_level - 1 && back.raise == Some(mv), || {
                        format!("{name} color {}", p + 1)
                    });
            }
            if let Some(mv) = stats.raise {
                let raised = mv.apply(j);
                let back = graph_stats(chain, graph, &raised, p)?;
                let lowered = back.lower.map(|m| m.apply(&raised));
                rep.lower_after_raise
                    .require(lowered.as_deref() == Some(j.as_slice()), || {
                        format!("{name} color {}", p + 1)
                    });
            }
            let (a, b) = string_lengths(chain, graph, j, p)?;
            rep.string_identity.require(a as i64 - b as i64 == stats.endpoint, || {
                format!("{name} color {}: a={a}, b={b}, pairing {}", p + 1, stats.endpoint)
            });
        }
    }
    Ok(rep)
}

fn graph_stats(chain: &LambdaChain, graph: &CrystalGraph, positions: &[usize], p: usize) -> Result<ColorStats> {
    match graph.index.get(positions) {
        Some(&i) => Ok(graph.nodes[i].stats[p].clone()),
        None => {
            let folding = folding_of(chain, positions)?;
            let mu = weight_mu(chain, positions)?;
            ColorStats::compute(&folding, &mu, p)
        }
    }
}

fn string_lengths(chain: &LambdaChain, graph: &CrystalGraph, positions: &[usize], p: usize) -> Result<(usize, usize)> {
    let count = |lower: bool| -> Result<usize> {
        let mut cur = positions.to_vec();
        let mut n = 0;
        loop {
            let stats = graph_stats(chain, graph, &cur, p)?;
            let mv = if lower { stats.lower } else { stats.raise };
            match mv {
                Some(mv) => {
                    cur = mv.apply(&cur);
                    n += 1;
                    if n > graph.nodes.len() {
                        return Err(Error::InternalInconsistency("unbounded string".into()));
                    }
                }
                None => return Ok(n),
            }
        }
    };
    Ok((count(true)?, count(false)?))
}
