mod common;

use alcove_core::{Error, LambdaChain, Weight, Q};
use common::*;

/// `<beta, alpha^vee>` from simple-root coordinates of `beta` and coroot
/// coordinates of `alpha`.
fn root_pair(cartan: &[Vec<i64>], beta: &SignedRoot, alpha: &SignedRoot) -> i64 {
    let r = cartan.len();
    (0..r)
        .map(|p| {
            (0..r)
                .map(|q| alpha.coroot[p] * cartan[p][q] * beta.coords[q])
                .sum::<i64>()
        })
        .sum()
}

/// The hyperplanes crossed by the straight line from a generic point near
/// the origin to that point minus `lambda`. The offset `sum_i eps^(i+1) omega_{order[i]}`
/// with `eps = 1/E` breaks ties in the given order of simple roots; everything
/// is scaled by `E^r` to stay in integers.
fn walk_oracle(chain: &LambdaChain, order: &[usize]) -> Vec<usize> {
    const E: i128 = 1_000_000;
    let rs = chain.root_system();
    let r = order.len() as u32;
    // (numerator, denominator, root) of each crossing time
    let mut crossings: Vec<(i128, i128, usize)> = Vec::new();
    for a in 0..rs.num_positive() {
        let coroot = rs.root(a).coroot();
        let n = pair(chain.lambda(), coroot).to_integer() as i128;
        let offset: i128 = order
            .iter()
            .enumerate()
            .map(|(i, &q)| E.pow(r - 1 - i as u32) * coroot[q] as i128)
            .sum();
        // <x(t), alpha^vee> = offset - t n passes through -k at t = (k + offset)/n
        for k in 0..n {
            crossings.push((k * E.pow(r) + offset, n, a));
        }
    }
    crossings.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    assert!(
        crossings.windows(2).all(|w| w[0].0 * w[1].1 != w[1].0 * w[0].1),
        "walk hits a wall intersection"
    );
    crossings.into_iter().map(|(_, _, a)| a).collect()
}

fn orders(r: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, r: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == r {
            out.push(prefix.clone());
            return;
        }
        for q in 0..r {
            if !prefix.contains(&q) {
                prefix.push(q);
                go(prefix, r, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), r, &mut out);
    out
}

#[test]
fn lex_chains_are_straight_walks() {
    for chain in grid(SMALL, 2, 400) {
        let rs = chain.root_system().clone();
        for order in orders(rs.rank()) {
            let lex = LambdaChain::lex(rs.clone(), chain.lambda().clone(), &order).unwrap();
            let roots: Vec<usize> = lex.entries().iter().map(|e| e.root).collect();
            assert_eq!(roots, walk_oracle(&lex, &order), "{:?} order {order:?}", chain.lambda());
        }
    }
}

/// Condition on the counting functions `N_i(alpha)` = number of earlier
/// occurrences of `alpha`, extended to negative roots by `N_i(-a) = 1 - N_i(a)`.
fn counting_condition(chain: &LambdaChain) -> Result<(), String> {
    let rs = chain.root_system();
    let cartan = rs.cartan();
    let n = rs.num_positive();
    let mut before = vec![0i64; n];
    let count = |before: &[i64], x: &SignedRoot| {
        let i = x.index(rs);
        if x.is_positive() {
            before[i]
        } else {
            1 - before[i]
        }
    };
    for (i, e) in chain.entries().iter().enumerate() {
        let beta = SignedRoot::of(rs, e.root);
        for a in 0..n {
            for alpha in [SignedRoot::of(rs, a), SignedRoot::of(rs, a).neg()] {
                if alpha.abs() == beta {
                    continue;
                }
                let image = beta.reflect(cartan, &alpha);
                let lhs = count(&before, &image);
                let rhs = count(&before, &alpha) - root_pair(cartan, &beta, &alpha) * before[e.root];
                if lhs != rhs {
                    return Err(format!("position {i}: {:?} gives {lhs} vs {rhs}", alpha.coords));
                }
            }
        }
        before[e.root] += 1;
    }
    Ok(())
}

/// Interlacing on every triple with `gamma^vee = alpha^vee + beta^vee`.
fn interlacing(chain: &LambdaChain) -> bool {
    let rs = chain.root_system();
    let n = rs.num_positive();
    let roots: Vec<usize> = chain.entries().iter().map(|e| e.root).collect();
    for a in 0..n {
        for b in a + 1..n {
            let sum: Vec<i64> = rs
                .root(a)
                .coroot()
                .iter()
                .zip(rs.root(b).coroot())
                .map(|(x, y)| x + y)
                .collect();
            let Some(g) = (0..n).find(|&c| rs.root(c).coroot() == sum.as_slice()) else {
                continue;
            };
            let sub: Vec<usize> = roots.iter().copied().filter(|&r| r == a || r == b || r == g).collect();
            let ok = sub.len().is_multiple_of(2) && sub.chunks(2).all(|p| (p[0] == a || p[0] == b) && p[1] == g);
            if !ok {
                return false;
            }
        }
    }
    true
}

#[test]
fn lex_chains_satisfy_both_characterisations() {
    for chain in grid(SMALL, 2, 2000) {
        let rs = chain.root_system().clone();
        for order in orders(rs.rank()) {
            let c = LambdaChain::lex(rs.clone(), chain.lambda().clone(), &order).unwrap();
            counting_condition(&c).unwrap();
            assert!(interlacing(&c));
            assert!(c.validate().passed());
            assert!(c.counting_identity_holds());
        }
    }
}

#[test]
fn length_and_occurrences() {
    for chain in grid(SMALL, 2, 5000) {
        let rs = chain.root_system();
        let total: i64 = rs
            .positive_roots()
            .iter()
            .map(|a| pair(chain.lambda(), a.coroot()).to_integer())
            .sum();
        assert_eq!(chain.len() as i64, total);
        assert_eq!(chain.expected_length(), chain.len());
        for (i, e) in chain.entries().iter().enumerate() {
            let earlier = chain.entries()[..i].iter().filter(|x| x.root == e.root).count() as i64;
            assert_eq!(chain.initial_level(i), earlier);
            assert_eq!(e.k, earlier);
            assert_eq!(
                Q::from_integer(chain.lambda_pairing(i)),
                pair(chain.lambda(), rs.root(e.root).coroot())
            );
        }
    }
}

#[test]
fn damaged_chains_are_caught() {
    for chain in grid(&["A2", "B2", "G2", "A3"], 2, 200) {
        let rs = chain.root_system().clone();
        let roots: Vec<usize> = chain.entries().iter().map(|e| e.root).collect();
        let same = LambdaChain::from_roots(rs.clone(), chain.lambda().clone(), &roots).unwrap();
        assert!(same.validate().passed());
        assert_eq!(same.simple_order(), None);

        // some adjacent swaps still give a chain, others do not; the library
        // has to agree with the oracle either way
        let mut rejected = 0;
        for i in 0..roots.len().saturating_sub(1) {
            let mut swapped = roots.clone();
            swapped.swap(i, i + 1);
            let c = LambdaChain::from_roots(rs.clone(), chain.lambda().clone(), &swapped).unwrap();
            let oracle = counting_condition(&c).is_ok();
            assert_eq!(interlacing(&c), oracle, "{:?} swap {i}", chain.lambda());
            assert_eq!(c.validate().passed(), oracle);
            assert_eq!(c.counting_identity_holds(), oracle);
            rejected += usize::from(!oracle);
        }
        assert!(roots.len() < 2 || rejected > 0 || rs.rank() == 1);
        if !roots.is_empty() {
            let short = LambdaChain::from_roots(rs.clone(), chain.lambda().clone(), &roots[1..]).unwrap();
            assert!(!short.validate().counts_ok());
        }
    }
}

#[test]
fn bad_input() {
    let system = rs("A2");
    assert!(matches!(
        LambdaChain::lex_default(system.clone(), Weight::from_ints(&[-1, 0])),
        Err(Error::NotDominant(_))
    ));
    assert!(LambdaChain::lex(system.clone(), Weight::from_ints(&[1, 0]), &[0, 0]).is_err());
    assert!(LambdaChain::from_roots(system, Weight::from_ints(&[1, 0]), &[7]).is_err());
}
