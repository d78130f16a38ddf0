#![allow(dead_code)]

use dgr_core::{DgrSystem, Header, Ruler};
use proptest::prelude::*;

/// Pairwise differences of `marks` are distinct (quadratic check).
pub fn golomb(marks: &[u32]) -> bool {
    let mut seen = Vec::new();
    for (x, &a) in marks.iter().enumerate() {
        for &b in &marks[x + 1..] {
            let d = a.abs_diff(b);
            if seen.contains(&d) {
                return false;
            }
            seen.push(d);
        }
    }
    true
}

/// Independent DGR check: counts, range, per-ruler Golomb, pairwise disjointness.
pub fn is_dgr(s: &DgrSystem, i: u32, j: u32, n: u32) -> bool {
    if s.header() != Header::new(i, j, n) || s.rulers().len() != i as usize {
        return false;
    }
    let mut used = vec![false; n as usize + 1];
    for r in s.rulers() {
        if r.len() != j as usize || !golomb(r.marks()) {
            return false;
        }
        for &m in r.marks() {
            if m == 0 || m > n || used[m as usize] {
                return false;
            }
            used[m as usize] = true;
        }
    }
    true
}

/// Builds a random valid system: each ruler takes `j` marks below `cap`,
/// chosen by the stream `picks` among the positions that keep it Golomb and
/// disjoint from the earlier rulers. The span is the top mark plus `slack`.
pub fn greedy_system(i: u32, j: u32, cap: u32, picks: &[u32], slack: u32) -> DgrSystem {
    let mut cap = cap.max(i * j);
    'retry: loop {
        let mut used = vec![false; cap as usize + 1];
        let mut rulers = Vec::new();
        let mut k = 0;
        for _ in 0..i {
            let mut marks: Vec<u32> = Vec::new();
            for _ in 0..j {
                let options: Vec<u32> = (1..=cap)
                    .filter(|&v| !used[v as usize] && !marks.contains(&v))
                    .filter(|&v| {
                        let mut m = marks.clone();
                        m.push(v);
                        golomb(&m)
                    })
                    .collect();
                if options.is_empty() {
                    cap *= 2;
                    continue 'retry;
                }
                let v = options[picks[k % picks.len()] as usize % options.len()];
                k += 1;
                used[v as usize] = true;
                marks.push(v);
            }
            rulers.push(Ruler::new(marks).unwrap());
        }
        let top = rulers.iter().filter_map(|r| r.last_mark()).max().unwrap_or(0);
        return DgrSystem::new(Header::new(i, j, top + slack), rulers).unwrap();
    }
}

/// The same system with a wider span.
pub fn widen(s: &DgrSystem, n: u32) -> DgrSystem {
    let h = s.header();
    DgrSystem::new(Header::new(h.i, h.j, h.n.max(n)), s.rulers().to_vec()).unwrap()
}

pub fn sys(i: u32, j: u32, n: u32, rulers: &[&[u32]]) -> DgrSystem {
    DgrSystem::new(Header::new(i, j, n), rulers.iter().map(|m| Ruler::new(m.to_vec()).unwrap()).collect()).unwrap()
}

pub fn arb_system(max_i: u32, min_j: u32, max_j: u32) -> impl Strategy<Value = DgrSystem> {
    (1..=max_i, min_j..=max_j, prop::collection::vec(any::<u32>(), 1..40), 0..4u32, 0..3u32).prop_map(
        |(i, j, picks, slack, density)| {
            let cap = i * j + j * j * (density + 1);
            greedy_system(i, j, cap, &picks, slack)
        },
    )
}

/// Every way to choose `i` pairwise disjoint `j`-mark Golomb rulers in
/// `{1..n}` as an unordered family, found by plain recursion over subsets.
pub fn naive_exists(i: u32, j: u32, n: u32) -> bool {
    fn subsets(n: u32, j: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() == j {
                let marks: Vec<u32> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
                if golomb(&marks) {
                    out.push(mask);
                }
            }
        }
        out
    }
    fn pick(rulers: &[u32], from: usize, left: u32, used: u32) -> bool {
        if left == 0 {
            return true;
        }
        (from..rulers.len()).any(|x| rulers[x] & used == 0 && pick(rulers, x + 1, left - 1, used | rulers[x]))
    }
    if u64::from(i) * u64::from(j) > u64::from(n) {
        return false;
    }
    pick(&subsets(n, j), 0, i, 0)
}
