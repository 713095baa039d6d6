//! Binary CART classification tree with Gini impurity.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{FeatureVector, Label, FEATURE_COUNT};

/// Gini impurity `1 - sum(p_i^2)` of a two-class count pair.
///
/// Defined only for a non-empty node; an empty one returns 0.
pub fn gini(counts: [u64; 2]) -> f64 {
    let total = counts[0] + counts[1];
    debug_assert!(total > 0, "gini of an empty node");
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - (p0 * p0 + p1 * p1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Non-constant features examined per node.
    pub max_features: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_features: FEATURE_COUNT,
        }
    }
}

/// Tree node. Samples going to a split with `x[feature] <= threshold` go
/// left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        samples: u64,
        impurity: f64,
    },
    Leaf {
        counts: [u64; 2],
    },
}

impl Node {
    pub fn samples(&self) -> u64 {
        match self {
            Node::Split { samples, .. } => *samples,
            Node::Leaf { counts } => counts[0] + counts[1],
        }
    }

    pub fn impurity(&self) -> f64 {
        match self {
            Node::Split { impurity, .. } => *impurity,
            Node::Leaf { counts } => gini(*counts),
        }
    }
}

/// A fitted tree; the root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    weighted_impurity: f64,
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi {
        lo
    } else {
        mid
    }
}

fn class_counts(labels: &[Label], idx: &[usize]) -> [u64; 2] {
    let mut counts = [0u64; 2];
    for &i in idx {
        counts[labels[i].index()] += 1;
    }
    counts
}

/// Best `<=` split of `idx` on one feature, or `None` if the feature is
/// constant there or no threshold satisfies the leaf-size limit.
fn best_threshold(
    rows: &[FeatureVector],
    labels: &[Label],
    idx: &[usize],
    feature: usize,
    min_leaf: usize,
    buf: &mut Vec<(f64, usize)>,
) -> Option<Candidate> {
    buf.clear();
    buf.extend(idx.iter().map(|&i| (rows[i].0[feature], labels[i].index())));
    buf.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = buf.len();
    let total = class_counts(labels, idx);
    let mut left = [0u64; 2];
    let mut best: Option<Candidate> = None;
    for i in 0..n - 1 {
        left[buf[i].1] += 1;
        if buf[i].0 == buf[i + 1].0 {
            continue;
        }
        let n_left = i + 1;
        let n_right = n - n_left;
        if n_left < min_leaf || n_right < min_leaf {
            continue;
        }
        let right = [total[0] - left[0], total[1] - left[1]];
        let weighted = (n_left as f64 * gini(left) + n_right as f64 * gini(right)) / n as f64;
        if best.as_ref().is_none_or(|b| weighted < b.weighted_impurity) {
            best = Some(Candidate {
                feature,
                threshold: midpoint(buf[i].0, buf[i + 1].0),
                weighted_impurity: weighted,
            });
        }
    }
    best
}

impl DecisionTree {
    /// Grows a tree on the rows listed in `sample` (repeats allowed, as in
    /// a bootstrap sample).
    ///
    /// At every node the feature order is shuffled with `rng`; the first
    /// `max_features` features that vary within the node are searched and
    /// the split with the lowest weighted child impurity wins. Earlier
    /// candidates win ties.
    pub fn fit<R: Rng>(
        rows: &[FeatureVector],
        labels: &[Label],
        sample: Vec<usize>,
        params: &TreeParams,
        rng: &mut R,
    ) -> DecisionTree {
        assert!(!sample.is_empty(), "cannot grow a tree on zero samples");
        let mut idx = sample;
        let mut nodes: Vec<Node> = vec![Node::Leaf { counts: [0, 0] }];
        // (node slot, start, end, depth)
        let mut stack = vec![(0usize, 0usize, idx.len(), 0usize)];
        let mut buf = Vec::with_capacity(idx.len());
        let min_leaf = params.min_samples_leaf.max(1);
        let mut features: Vec<usize> = (0..FEATURE_COUNT).collect();

        while let Some((slot, start, end, depth)) = stack.pop() {
            let node_idx = &mut idx[start..end];
            let n = node_idx.len();
            let counts = class_counts(labels, node_idx);
            let impurity = gini(counts);
            let depth_reached = params.max_depth.is_some_and(|d| depth >= d);
            if impurity == 0.0
                || depth_reached
                || n < params.min_samples_split.max(2)
                || n < 2 * min_leaf
            {
                nodes[slot] = Node::Leaf { counts };
                continue;
            }

            features.shuffle(rng);
            let mut best: Option<Candidate> = None;
            let mut searched = 0;
            for &f in &features {
                if searched >= params.max_features.max(1) {
                    break;
                }
                let first = rows[node_idx[0]].0[f];
                if node_idx.iter().all(|&i| rows[i].0[f] == first) {
                    continue;
                }
                searched += 1;
                if let Some(c) = best_threshold(rows, labels, node_idx, f, min_leaf, &mut buf) {
                    if best
                        .as_ref()
                        .is_none_or(|b| c.weighted_impurity < b.weighted_impurity)
                    {
                        best = Some(c);
                    }
                }
            }

            let Some(best) = best else {
                nodes[slot] = Node::Leaf { counts };
                continue;
            };
            let mut split_at = 0;
            for i in 0..n {
                if rows[node_idx[i]].0[best.feature] <= best.threshold {
                    node_idx.swap(i, split_at);
                    split_at += 1;
                }
            }
            let left = nodes.len();
            let right = left + 1;
            nodes.push(Node::Leaf { counts: [0, 0] });
            nodes.push(Node::Leaf { counts: [0, 0] });
            nodes[slot] = Node::Split {
                feature: best.feature,
                threshold: best.threshold,
                left,
                right,
                samples: n as u64,
                impurity,
            };
            stack.push((right, start + split_at, end, depth + 1));
            stack.push((left, start, start + split_at, depth + 1));
        }
        DecisionTree { nodes }
    }

    /// Class counts of the leaf reached by `x`.
    pub fn leaf_counts(&self, x: &[f64]) -> [u64; 2] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return *counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    at = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    /// Majority class of the reached leaf; an even leaf goes to
    /// `WithoutControl`.
    pub fn predict(&self, x: &[f64]) -> Label {
        let counts = self.leaf_counts(x);
        if counts[0] > counts[1] {
            Label::WithControl
        } else {
            Label::WithoutControl
        }
    }

    pub fn split_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Split { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Total weighted impurity decrease per feature:
    /// `n * gini(parent) - n_left * gini(left) - n_right * gini(right)`
    /// summed over the splits on that feature.
    pub fn impurity_decrease(&self) -> [f64; FEATURE_COUNT] {
        let mut out = [0.0; FEATURE_COUNT];
        for node in &self.nodes {
            if let Node::Split {
                feature,
                left,
                right,
                samples,
                impurity,
                ..
            } = node
            {
                let l = &self.nodes[*left];
                let r = &self.nodes[*right];
                let decrease = *samples as f64 * impurity
                    - l.samples() as f64 * l.impurity()
                    - r.samples() as f64 * r.impurity();
                out[*feature] += decrease.max(0.0);
            }
        }
        out
    }

    /// Checks node links, feature indices and leaf counts.
    pub fn validate(&self) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("tree has no nodes".to_owned());
        }
        let mut referenced = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    if *feature >= FEATURE_COUNT {
                        return Err(format!("node {i} splits on feature {feature}"));
                    }
                    if !threshold.is_finite() {
                        return Err(format!("node {i} has threshold {threshold}"));
                    }
                    for child in [*left, *right] {
                        if child <= i || child >= self.nodes.len() || referenced[child] {
                            return Err(format!("node {i} has invalid child {child}"));
                        }
                        referenced[child] = true;
                    }
                }
                Node::Leaf { counts } => {
                    if counts[0] + counts[1] == 0 {
                        return Err(format!("leaf {i} is empty"));
                    }
                }
            }
        }
        Ok(())
    }
}
