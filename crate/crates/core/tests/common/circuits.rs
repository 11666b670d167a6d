//! Functions are bitsets with input `i` on row `r` equal to `(r >> i) & 1`
//! (least significant first, unlike the library). A circuit of at most `k`
//! gates exists iff some sequence of gates, each reading primary inputs or
//! earlier gates, produces every target as a gate value.

use std::collections::HashSet;

fn oracle_input(n: usize, i: usize) -> u64 {
    (0..1 << n)
        .filter(|r| r >> i & 1 == 1)
        .fold(0, |acc, r| acc | 1u64 << r)
}

fn oracle_mask(n: usize) -> u64 {
    if n == 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

struct Oracle {
    mask: u64,
    targets: Vec<u64>,
    failed: HashSet<(Vec<u64>, u32, usize)>,
}

impl Oracle {
    fn search(&mut self, avail: &[u64], covered: u32, left: usize) -> bool {
        let all = (1u32 << self.targets.len()) - 1;
        if covered == all {
            return true;
        }
        if ((all & !covered).count_ones() as usize) > left {
            return false;
        }
        let key = (avail.to_vec(), covered, left);
        if self.failed.contains(&key) {
            return false;
        }
        let mut next = Vec::new();
        for (i, &a) in avail.iter().enumerate() {
            next.push(a);
            next.push(!a & self.mask);
            for &b in &avail[i..] {
                next.push(a & b);
                next.push(a | b);
                next.push(a ^ b);
            }
        }
        next.sort_unstable();
        next.dedup();
        for v in next {
            let hits = self
                .targets
                .iter()
                .enumerate()
                .filter(|&(_, &t)| t == v)
                .fold(0u32, |m, (j, _)| m | 1 << j);
            let fresh = !avail.contains(&v);
            if !fresh && hits & !covered == 0 {
                continue;
            }
            let mut grown = avail.to_vec();
            if fresh {
                grown.push(v);
                grown.sort_unstable();
            }
            if self.search(&grown, covered | hits, left - 1) {
                return true;
            }
        }
        self.failed.insert(key);
        false
    }
}

/// Fewest gates realizing `f`, if at most `max`.
pub fn oracle_min_gates(n: usize, m: usize, f: impl Fn(&[bool]) -> Vec<bool>, max: usize) -> Option<usize> {
    let mut targets = vec![0u64; m];
    for r in 0..1usize << n {
        let bits: Vec<bool> = (0..n).map(|i| r >> i & 1 == 1).collect();
        for (t, b) in targets.iter_mut().zip(f(&bits)) {
            *t |= (b as u64) << r;
        }
    }
    let mut avail: Vec<u64> = (0..n).map(|i| oracle_input(n, i)).collect();
    avail.sort_unstable();
    avail.dedup();
    let mut o = Oracle {
        mask: oracle_mask(n),
        targets,
        failed: HashSet::new(),
    };
    (1..=max).find(|&k| o.search(&avail, 0, k))
}
