//! Segmentation trees.
//!
//! A sequence of `n` signs has `n - 1` boundaries, each scored with the
//! z-score of the adjacent pair it separates. Boundaries are consumed in
//! descending score order (leftmost first among equal scores, `+inf` above
//! every finite score) and each one joins the two units on either side.
//! Scores are never recomputed for merged units.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::corpus::{Corpus, Sequence, SignId};
use crate::error::{Error, Result};
use crate::significance::ZScoreTable;

#[derive(Clone, Debug, PartialEq)]
pub enum TreeNode {
    Leaf {
        position: usize,
    },
    Merge {
        left: usize,
        right: usize,
        /// 1 for the first merge, `n - 1` for the root.
        rank: usize,
        /// Score of the boundary this merge consumed.
        z: f64,
        /// Inclusive leaf range covered.
        start: usize,
        end: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SegmentationTree {
    leaves: Vec<SignId>,
    nodes: Vec<TreeNode>,
    root: usize,
}

/// Index order in which boundaries are merged.
fn merge_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| match scores[b].total_cmp(&scores[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    order
}

impl SegmentationTree {
    /// Builds the tree from explicit boundary scores (`scores[b]` sits between
    /// leaves `b` and `b + 1`).
    pub fn from_boundary_scores(leaves: Vec<SignId>, scores: &[f64]) -> Result<Self> {
        let n = leaves.len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "cannot segment an empty sequence".into(),
            ));
        }
        if scores.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "{n} leaves need {} boundary scores, got {}",
                n - 1,
                scores.len()
            )));
        }
        if let Some(z) = scores.iter().find(|z| z.is_nan()) {
            return Err(Error::InvalidArgument(format!(
                "boundary score {z} is not a number"
            )));
        }
        let mut nodes: Vec<TreeNode> = (0..n).map(|position| TreeNode::Leaf { position }).collect();
        // Unit bookkeeping keyed by the unit's first and last leaf.
        let mut node_at_start: Vec<usize> = (0..n).collect();
        let mut end_of: Vec<usize> = (0..n).collect();
        let mut start_of: Vec<usize> = (0..n).collect();
        let mut root = 0;
        for (rank, b) in merge_order(scores).into_iter().enumerate() {
            let ls = start_of[b];
            let re = end_of[b + 1];
            let left = node_at_start[ls];
            let right = node_at_start[b + 1];
            nodes.push(TreeNode::Merge {
                left,
                right,
                rank: rank + 1,
                z: scores[b],
                start: ls,
                end: re,
            });
            root = nodes.len() - 1;
            node_at_start[ls] = root;
            end_of[ls] = re;
            start_of[re] = ls;
        }
        Ok(SegmentationTree {
            leaves,
            nodes,
            root,
        })
    }

    pub fn leaves(&self) -> &[SignId] {
        &self.leaves
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.len() - self.leaves.len()
    }

    /// Edges on the longest root-to-leaf path; 0 for a single sign.
    pub fn height(&self) -> usize {
        self.depth(self.root)
    }

    fn depth(&self, node: usize) -> usize {
        match &self.nodes[node] {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Merge { left, right, .. } => 1 + self.depth(*left).max(self.depth(*right)),
        }
    }

    /// Leaves in in-order traversal.
    pub fn in_order(&self) -> Vec<SignId> {
        let mut out = Vec::with_capacity(self.leaves.len());
        self.collect_leaves(self.root, &mut out);
        out
    }

    fn collect_leaves(&self, node: usize, out: &mut Vec<SignId>) {
        match &self.nodes[node] {
            TreeNode::Leaf { position } => out.push(self.leaves[*position].clone()),
            TreeNode::Merge { left, right, .. } => {
                self.collect_leaves(*left, out);
                self.collect_leaves(*right, out);
            }
        }
    }

    /// Leaf ranges of all internal nodes, in merge order.
    pub fn spans(&self) -> Vec<(usize, usize)> {
        let mut spans: Vec<(usize, usize, usize)> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Merge {
                    rank, start, end, ..
                } => Some((*rank, *start, *end)),
                TreeNode::Leaf { .. } => None,
            })
            .collect();
        spans.sort_unstable();
        spans.into_iter().map(|(_, s, e)| (s, e)).collect()
    }

    /// Nested-parenthesis form, e.g. `((A B) (C D))`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(self.root, &mut out);
        out
    }

    fn write_text(&self, node: usize, out: &mut String) {
        match &self.nodes[node] {
            TreeNode::Leaf { position } => out.push_str(self.leaves[*position].as_str()),
            TreeNode::Merge { left, right, .. } => {
                out.push('(');
                self.write_text(*left, out);
                out.push(' ');
                self.write_text(*right, out);
                out.push(')');
            }
        }
    }

    /// Structured form carrying rank and z per internal node.
    pub fn to_nested(&self) -> NestedNode {
        self.nested(self.root)
    }

    fn nested(&self, node: usize) -> NestedNode {
        match &self.nodes[node] {
            TreeNode::Leaf { position } => NestedNode::Leaf {
                sign: self.leaves[*position].clone(),
                position: *position,
            },
            TreeNode::Merge {
                left,
                right,
                rank,
                z,
                start,
                end,
            } => NestedNode::Merge {
                rank: *rank,
                z: *z,
                start: *start,
                end: *end,
                children: Box::new([self.nested(*left), self.nested(*right)]),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NestedNode {
    Leaf {
        sign: SignId,
        position: usize,
    },
    Merge {
        rank: usize,
        z: f64,
        start: usize,
        end: usize,
        children: Box<[NestedNode; 2]>,
    },
}

/// Finite scores as numbers, infinite ones as `"+inf"` / `"-inf"`.
pub(crate) fn serialize_score<S: Serializer>(z: f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if z.is_finite() {
        s.serialize_f64(z)
    } else if z > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

struct Score(f64);

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_score(self.0, s)
    }
}

impl Serialize for NestedNode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NestedNode::Leaf { sign, position } => {
                let mut st = s.serialize_struct("Leaf", 2)?;
                st.serialize_field("sign", sign)?;
                st.serialize_field("position", position)?;
                st.end()
            }
            NestedNode::Merge {
                rank,
                z,
                start,
                end,
                children,
            } => {
                let mut st = s.serialize_struct("Merge", 5)?;
                st.serialize_field("rank", rank)?;
                st.serialize_field("z", &Score(*z))?;
                st.serialize_field("start", start)?;
                st.serialize_field("end", end)?;
                st.serialize_field("children", children.as_slice())?;
                st.end()
            }
        }
    }
}

/// Segments `seq` using the table's score for each adjacent pair.
pub fn build_segmentation_tree(seq: &Sequence, table: &ZScoreTable) -> Result<SegmentationTree> {
    let scores = seq
        .signs()
        .windows(2)
        .map(|w| {
            table.z(&w[0], &w[1]).ok_or_else(|| Error::MissingPair {
                from: w[0].to_string(),
                to: w[1].to_string(),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    SegmentationTree::from_boundary_scores(seq.signs().to_vec(), &scores)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpanOccurrences {
    /// Contiguous matches, overlapping ones included.
    pub subsequence: usize,
    /// Sequences equal to the span.
    pub complete: usize,
}

pub fn span_occurrences(corpus: &Corpus, span: &[SignId]) -> Result<SpanOccurrences> {
    if span.is_empty() {
        return Err(Error::InvalidArgument(
            "span must hold at least one sign".into(),
        ));
    }
    let mut occ = SpanOccurrences::default();
    for seq in corpus.sequences() {
        let signs = seq.signs();
        if signs.len() < span.len() {
            continue;
        }
        occ.subsequence += signs.windows(span.len()).filter(|w| *w == span).count();
        if signs == span {
            occ.complete += 1;
        }
    }
    Ok(occ)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhraseSpan {
    pub start: usize,
    pub end: usize,
    pub signs: String,
    pub occurrences: SpanOccurrences,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParsedSequence {
    /// Position of the sequence in the corpus.
    pub index: usize,
    pub source: Option<String>,
    pub length: usize,
    pub height: usize,
    pub text: String,
    pub tree: NestedNode,
    /// One entry per internal node, in merge order.
    pub phrases: Vec<PhraseSpan>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParseReport {
    pub min_len: usize,
    pub trees: Vec<ParsedSequence>,
    pub mean_height: Option<f64>,
    /// Sample std of heights; absent with fewer than two trees.
    pub std_height: Option<f64>,
}

/// Segments every sequence with at least `min_len` signs.
pub fn parse_long_sequences(
    corpus: &Corpus,
    min_len: usize,
    table: &ZScoreTable,
) -> Result<ParseReport> {
    let mut trees = Vec::new();
    for (index, seq) in corpus.sequences().iter().enumerate() {
        if seq.len() < min_len {
            continue;
        }
        let tree = build_segmentation_tree(seq, table)?;
        let phrases = tree
            .spans()
            .into_iter()
            .map(|(start, end)| {
                let span = &seq.signs()[start..=end];
                let mut signs = String::new();
                for (i, s) in span.iter().enumerate() {
                    if i > 0 {
                        signs.push(' ');
                    }
                    let _ = write!(signs, "{s}");
                }
                Ok(PhraseSpan {
                    start,
                    end,
                    signs,
                    occurrences: span_occurrences(corpus, span)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        trees.push(ParsedSequence {
            index,
            source: seq.source().map(str::to_string),
            length: seq.len(),
            height: tree.height(),
            text: tree.to_text(),
            tree: tree.to_nested(),
            phrases,
        });
    }
    let heights: Vec<f64> = trees.iter().map(|t| t.height as f64).collect();
    let mean_height =
        (!heights.is_empty()).then(|| heights.iter().sum::<f64>() / heights.len() as f64);
    let std_height = crate::ensemble::mean_std(&heights).ok().map(|(_, s)| s);
    Ok(ParseReport {
        min_len,
        trees,
        mean_height,
        std_height,
    })
}

/// Mean tree height over every sequence of at least two signs.
pub fn mean_tree_height(corpus: &Corpus, table: &ZScoreTable) -> Result<f64> {
    let report = parse_long_sequences(corpus, 2, table)?;
    report
        .mean_height
        .ok_or_else(|| Error::Undefined("no sequence with two or more signs".into()))
}
