//! Deterministic 1-D clustering for timing data.
//!
//! Timing samples concentrate into well-separated groups, so the
//! cluster count is discovered from gaps in the sorted data: a segment
//! is split at its largest internal gap while that gap exceeds 20% of
//! the segment's own range. The resulting partition seeds a Lloyd
//! (k-means) refinement on the sorted values. No randomness is
//! involved; identical input always yields identical clusters.

/// Fraction of a segment's range an internal gap must exceed to split it.
const GAP_RATIO: f64 = 0.2;
const MAX_LLOYD_ITERS: usize = 100;

/// One timing cluster: its center and the indices of the member
/// durations in the original input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster1d {
    pub center: f64,
    pub members: Vec<usize>,
}

/// Partition `values` into at most `max_clusters` groups, ordered by
/// center ascending. A single cluster is a valid outcome. Empty input
/// yields no clusters.
pub fn find_clusters(values: &[f64], max_clusters: usize) -> Vec<Cluster1d> {
    if values.is_empty() || max_clusters == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    // Segments are half-open index ranges into `sorted`.
    let mut segments: Vec<(usize, usize)> = vec![(0, sorted.len())];
    while segments.len() < max_clusters {
        // Pick the segment with the largest qualifying relative gap.
        let mut best: Option<(usize, usize, f64)> = None; // (segment, split_at, ratio)
        for (si, &(lo, hi)) in segments.iter().enumerate() {
            let range = sorted[hi - 1] - sorted[lo];
            if range <= 0.0 {
                continue;
            }
            let mut gap_at = lo;
            let mut gap = 0.0;
            for i in lo + 1..hi {
                let g = sorted[i] - sorted[i - 1];
                if g > gap {
                    gap = g;
                    gap_at = i;
                }
            }
            let ratio = gap / range;
            if ratio > GAP_RATIO && best.map_or(true, |(_, _, r)| ratio > r) {
                best = Some((si, gap_at, ratio));
            }
        }
        match best {
            Some((si, at, _)) => {
                let (lo, hi) = segments[si];
                segments[si] = (lo, at);
                segments.push((at, hi));
                segments.sort_unstable();
            }
            None => break,
        }
    }

    let mut centers: Vec<f64> = segments
        .iter()
        .map(|&(lo, hi)| sorted[lo..hi].iter().sum::<f64>() / (hi - lo) as f64)
        .collect();

    // Lloyd refinement on sorted data: assignment boundaries are the
    // midpoints between adjacent centers.
    let mut bounds = assignment_bounds(&sorted, &centers);
    for _ in 0..MAX_LLOYD_ITERS {
        let new_centers: Vec<f64> = bounds
            .windows(2)
            .map(|w| sorted[w[0]..w[1]].iter().sum::<f64>() / (w[1] - w[0]) as f64)
            .collect();
        let new_bounds = assignment_bounds(&sorted, &new_centers);
        let converged = new_bounds == bounds;
        centers = new_centers;
        bounds = new_bounds;
        if converged {
            break;
        }
    }

    bounds
        .windows(2)
        .zip(centers)
        .map(|(w, center)| Cluster1d {
            center,
            members: order[w[0]..w[1]].to_vec(),
        })
        .collect()
}

/// Boundary indices (length k+1) such that cluster j owns
/// `sorted[bounds[j]..bounds[j+1]]`, assigning each value to the
/// nearest center. Degenerate (empty) cells are avoided by keeping
/// boundaries monotone.
fn assignment_bounds(sorted: &[f64], centers: &[f64]) -> Vec<usize> {
    let mut bounds = Vec::with_capacity(centers.len() + 1);
    bounds.push(0);
    for w in centers.windows(2) {
        let mid = (w[0] + w[1]) / 2.0;
        let prev = *bounds.last().unwrap();
        let at = prev + sorted[prev..].partition_point(|&v| v < mid);
        bounds.push(at);
    }
    bounds.push(sorted.len());
    bounds
}
