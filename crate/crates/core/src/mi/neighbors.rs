//! Exact max-norm neighbour queries over a subset of a point cloud.
//!
//! Members are sorted by their first coordinate; a query scans outward from
//! its own position and stops once the first-coordinate gap alone exceeds the
//! current answer. Results are exact and do not depend on tie order.

use super::Points;

pub(super) fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub(super) struct SortedIndex<'a> {
    pts: Points<'a>,
    /// Member indices sorted by (first coordinate, index).
    order: Vec<usize>,
    keys: Vec<f64>,
    /// Position in `order` of each member; `usize::MAX` for non-members.
    pos: Vec<usize>,
}

impl<'a> SortedIndex<'a> {
    pub(super) fn new(pts: Points<'a>, mut members: Vec<usize>) -> Self {
        members.sort_by(|&a, &b| pts.point(a)[0].total_cmp(&pts.point(b)[0]).then(a.cmp(&b)));
        let keys = members.iter().map(|&i| pts.point(i)[0]).collect();
        let mut pos = vec![usize::MAX; pts.len()];
        for (p, &i) in members.iter().enumerate() {
            pos[i] = p;
        }
        SortedIndex {
            pts,
            order: members,
            keys,
            pos,
        }
    }

    pub(super) fn all(pts: Points<'a>) -> Self {
        Self::new(pts, (0..pts.len()).collect())
    }

    /// Distance from member `i` to its `k`-th nearest other member.
    pub(super) fn kth_distance(&self, i: usize, k: usize) -> f64 {
        debug_assert!(k >= 1 && k < self.order.len());
        let p = self.pos[i];
        let q = self.pts.point(i);
        let key = self.keys[p];
        // Ascending list of the k smallest distances seen so far.
        let mut best: Vec<f64> = Vec::with_capacity(k + 1);
        let push = |d: f64, best: &mut Vec<f64>| {
            if best.len() < k || d < best[k - 1] {
                let at = best.partition_point(|&b| b <= d);
                best.insert(at, d);
                best.truncate(k);
            }
        };
        let (mut lo, mut hi) = (p, p + 1);
        loop {
            let gap_lo = if lo > 0 { key - self.keys[lo - 1] } else { f64::INFINITY };
            let gap_hi = if hi < self.order.len() { self.keys[hi] - key } else { f64::INFINITY };
            let gap = gap_lo.min(gap_hi);
            if gap == f64::INFINITY || (best.len() == k && gap > best[k - 1]) {
                break;
            }
            let j = if gap_lo <= gap_hi {
                lo -= 1;
                self.order[lo]
            } else {
                hi += 1;
                self.order[hi - 1]
            };
            push(max_dist(q, self.pts.point(j)), &mut best);
        }
        best[k - 1]
    }

    /// Number of members other than `i` within `radius` of member-or-not `i`.
    pub(super) fn count_within(&self, i: usize, radius: f64, inclusive: bool) -> usize {
        let q = self.pts.point(i);
        let key = q[0];
        let slack = radius * 1e-12 + f64::MIN_POSITIVE;
        let start = self.keys.partition_point(|&v| v < key - radius - slack);
        let end = self.keys.partition_point(|&v| v <= key + radius + slack);
        self.order[start..end]
            .iter()
            .filter(|&&j| j != i)
            .filter(|&&j| {
                let d = max_dist(q, self.pts.point(j));
                if inclusive {
                    d <= radius
                } else {
                    d < radius
                }
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_kth(pts: Points, i: usize, k: usize) -> f64 {
        let mut d: Vec<f64> = (0..pts.len())
            .filter(|&j| j != i)
            .map(|j| max_dist(pts.point(i), pts.point(j)))
            .collect();
        d.sort_by(f64::total_cmp);
        d[k - 1]
    }

    #[test]
    fn matches_brute_force() {
        let data: Vec<f64> = (0..300).map(|i| ((i * 7919) % 101) as f64 * 0.37 - ((i * 31) % 13) as f64).collect();
        let pts = Points::new(&data, 3).unwrap();
        let idx = SortedIndex::all(pts);
        for i in 0..pts.len() {
            for k in [1, 3, 7] {
                let r = idx.kth_distance(i, k);
                assert_eq!(r, brute_kth(pts, i, k));
                let strict = (0..pts.len()).filter(|&j| j != i && max_dist(pts.point(i), pts.point(j)) < r).count();
                let incl = (0..pts.len()).filter(|&j| j != i && max_dist(pts.point(i), pts.point(j)) <= r).count();
                assert_eq!(idx.count_within(i, r, false), strict);
                assert_eq!(idx.count_within(i, r, true), incl);
            }
        }
    }

    #[test]
    fn ties_and_duplicates() {
        let data = [0.0, 0.0, 0.0, 1.0, 1.0];
        let pts = Points::scalar(&data).unwrap();
        let idx = SortedIndex::all(pts);
        assert_eq!(idx.kth_distance(0, 2), 0.0);
        assert_eq!(idx.kth_distance(0, 3), 1.0);
        assert_eq!(idx.count_within(0, 0.0, true), 2);
        assert_eq!(idx.count_within(0, 0.0, false), 0);
        let sub = SortedIndex::new(pts, vec![3, 4]);
        assert_eq!(sub.kth_distance(4, 1), 0.0);
        assert_eq!(sub.count_within(0, 1.0, true), 2);
    }
}
