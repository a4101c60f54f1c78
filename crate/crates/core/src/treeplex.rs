//! Sequence-form decision structure of a single player.
//!
//! Sequences are numbered in depth-first preorder: every infoset owns a
//! contiguous block of sequences (one per action), and the sequences at or
//! below an infoset form one contiguous index range. Index 0 is the empty
//! sequence. Infosets are numbered in the same preorder, so the subtree of an
//! infoset is also a contiguous range of infoset indices, and the infoset
//! order is topological (parents before children).

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};

/// Index of the empty sequence.
pub const EMPTY_SEQ: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Infoset {
    pub id: String,
    /// Parent sequence (last own sequence before reaching this infoset).
    pub parent: usize,
    pub first_seq: usize,
    pub num_actions: usize,
    /// One past the last sequence at or below this infoset.
    pub subtree_end_seq: usize,
    /// One past the last infoset in this infoset's subtree.
    pub subtree_end_infoset: usize,
}

impl Infoset {
    pub fn actions(&self) -> Range<usize> {
        self.first_seq..self.first_seq + self.num_actions
    }

    pub fn subtree_seqs(&self) -> Range<usize> {
        self.first_seq..self.subtree_end_seq
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Treeplex {
    player: usize,
    infosets: Vec<Infoset>,
    /// Owning infoset of each sequence; `usize::MAX` for the empty sequence.
    owner: Vec<usize>,
    // CSR adjacency: infosets immediately reachable from each sequence.
    child_offsets: Vec<usize>,
    child_list: Vec<usize>,
    // CSR list of ancestor infosets (root first, the infoset itself last).
    ancestor_offsets: Vec<usize>,
    ancestor_list: Vec<usize>,
    depth: usize,
}

impl Treeplex {
    pub fn player(&self) -> usize {
        self.player
    }

    pub fn num_sequences(&self) -> usize {
        self.owner.len()
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    pub fn infosets(&self) -> &[Infoset] {
        &self.infosets
    }

    pub fn infoset(&self, idx: usize) -> &Infoset {
        &self.infosets[idx]
    }

    /// Maximum number of own sequences on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Infoset owning `seq`, `None` for the empty sequence.
    pub fn owner(&self, seq: usize) -> Option<usize> {
        match self.owner[seq] {
            usize::MAX => None,
            i => Some(i),
        }
    }

    /// Infosets immediately reachable from `seq`.
    pub fn children(&self, seq: usize) -> &[usize] {
        &self.child_list[self.child_offsets[seq]..self.child_offsets[seq + 1]]
    }

    /// Infosets `I'` with `I' ⪯ infoset`, root first; the last entry is `infoset` itself.
    pub fn ancestors(&self, infoset: usize) -> &[usize] {
        &self.ancestor_list[self.ancestor_offsets[infoset]..self.ancestor_offsets[infoset + 1]]
    }

    /// Whether sequence `seq` lies at or below `infoset`.
    pub fn seq_in_subtree(&self, seq: usize, infoset: usize) -> bool {
        let info = &self.infosets[infoset];
        seq >= info.first_seq && seq < info.subtree_end_seq
    }

    /// Infosets whose parent sequence is the empty sequence.
    pub fn roots(&self) -> &[usize] {
        self.children(EMPTY_SEQ)
    }

    /// Total number of entries over all trigger subtrees, `Σ_I |Σ_I|`.
    pub fn total_subtree_size(&self) -> usize {
        self.infosets
            .iter()
            .map(|i| i.subtree_end_seq - i.first_seq)
            .sum()
    }
}

/// Accumulates infosets in any topological order, then lays them out in
/// canonical depth-first order.
#[derive(Debug, Clone)]
pub struct TreeplexBuilder {
    player: usize,
    entries: Vec<(String, usize, usize)>,
    first_seq: Vec<usize>,
    by_id: HashMap<String, usize>,
    next_seq: usize,
}

impl TreeplexBuilder {
    pub fn new(player: usize) -> Self {
        TreeplexBuilder {
            player,
            entries: Vec::new(),
            first_seq: Vec::new(),
            by_id: HashMap::new(),
            next_seq: 1,
        }
    }

    pub fn num_sequences(&self) -> usize {
        self.next_seq
    }

    /// Adds a new infoset whose parent sequence was already created. Returns
    /// the builder-local index of its first sequence.
    pub fn add_infoset(&mut self, id: &str, parent: usize, num_actions: usize) -> Result<usize> {
        if num_actions == 0 {
            return Err(Error::InvalidTreeplex(format!(
                "infoset `{id}` has no actions"
            )));
        }
        if parent >= self.next_seq {
            return Err(Error::InvalidTreeplex(format!(
                "infoset `{id}` has parent sequence {parent} which does not exist yet"
            )));
        }
        if self.by_id.contains_key(id) {
            return Err(Error::InvalidTreeplex(format!("duplicate infoset `{id}`")));
        }
        let first = self.next_seq;
        self.by_id.insert(id.to_string(), self.entries.len());
        self.entries.push((id.to_string(), parent, num_actions));
        self.first_seq.push(first);
        self.next_seq += num_actions;
        Ok(first)
    }

    /// Returns the first sequence of the infoset named `id`, creating it if
    /// it is new. Re-visiting an infoset with a different parent or action
    /// count is a perfect-recall violation.
    pub fn infoset(&mut self, id: &str, parent: usize, num_actions: usize) -> Result<usize> {
        if let Some(&idx) = self.by_id.get(id) {
            let (_, p, k) = &self.entries[idx];
            if *p != parent || *k != num_actions {
                return Err(Error::InvalidTreeplex(format!(
                    "infoset `{id}` revisited with parent {parent}/{num_actions} actions, \
                     first seen with parent {p}/{k} actions"
                )));
            }
            return Ok(self.first_seq[idx]);
        }
        self.add_infoset(id, parent, num_actions)
    }

    /// Lays the treeplex out in depth-first order. The second value maps each
    /// builder sequence index to its final index.
    pub fn build(self) -> (Treeplex, Vec<usize>) {
        let num_seqs = self.next_seq;
        let num_infos = self.entries.len();

        // children of each builder sequence, in insertion order
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); num_seqs];
        for (idx, (_, parent, _)) in self.entries.iter().enumerate() {
            kids[*parent].push(idx);
        }

        let mut seq_map = vec![usize::MAX; num_seqs];
        seq_map[EMPTY_SEQ] = EMPTY_SEQ;
        let mut order = Vec::with_capacity(num_infos);
        let mut next_seq = 1;

        // iterative preorder: an infoset's actions are numbered when it is
        // visited, its children are visited before its next sibling
        let mut stack: Vec<usize> = kids[EMPTY_SEQ].iter().rev().copied().collect();
        while let Some(b) = stack.pop() {
            order.push(b);
            let k = self.entries[b].2;
            let bfirst = self.first_seq[b];
            for a in 0..k {
                seq_map[bfirst + a] = next_seq + a;
            }
            next_seq += k;
            for a in (0..k).rev() {
                for &c in kids[bfirst + a].iter().rev() {
                    stack.push(c);
                }
            }
        }
        debug_assert_eq!(next_seq, num_seqs);

        let mut infosets: Vec<Infoset> = order
            .iter()
            .map(|&b| {
                let (id, parent, k) = &self.entries[b];
                Infoset {
                    id: id.clone(),
                    parent: seq_map[*parent],
                    first_seq: seq_map[self.first_seq[b]],
                    num_actions: *k,
                    subtree_end_seq: 0,
                    subtree_end_infoset: 0,
                }
            })
            .collect();
        (finish_layout(self.player, &mut infosets, num_seqs), seq_map)
    }
}

/// Builds a treeplex from infosets already in canonical depth-first order
/// (the layout `TreeplexBuilder::build` produces). Each entry is
/// `(id, parent sequence, number of actions)`; sequences are numbered in
/// listing order.
pub fn from_canonical(player: usize, infosets: Vec<(String, usize, usize)>) -> Result<Treeplex> {
    let mut b = TreeplexBuilder::new(player);
    for (id, parent, k) in &infosets {
        b.add_infoset(id, *parent, *k)?;
    }
    let (t, map) = b.build();
    if map.iter().enumerate().any(|(i, &m)| i != m) {
        return Err(Error::InvalidTreeplex(
            "infosets are not listed in depth-first order".into(),
        ));
    }
    Ok(t)
}

fn finish_layout(player: usize, infosets: &mut [Infoset], num_seqs: usize) -> Treeplex {
    let n = infosets.len();
    let mut owner = vec![usize::MAX; num_seqs];
    for (idx, info) in infosets.iter().enumerate() {
        for s in info.actions() {
            owner[s] = idx;
        }
    }

    let mut counts = vec![0usize; num_seqs + 1];
    for info in infosets.iter() {
        counts[info.parent + 1] += 1;
    }
    for s in 0..num_seqs {
        counts[s + 1] += counts[s];
    }
    let child_offsets = counts.clone();
    let mut fill = counts;
    let mut child_list = vec![0; n];
    for (idx, info) in infosets.iter().enumerate() {
        child_list[fill[info.parent]] = idx;
        fill[info.parent] += 1;
    }

    // subtree extents, bottom-up over the preorder
    for idx in (0..n).rev() {
        let mut end_seq = infosets[idx].first_seq + infosets[idx].num_actions;
        let mut end_info = idx + 1;
        for s in infosets[idx].actions() {
            for &c in &child_list[child_offsets[s]..child_offsets[s + 1]] {
                end_seq = end_seq.max(infosets[c].subtree_end_seq);
                end_info = end_info.max(infosets[c].subtree_end_infoset);
            }
        }
        infosets[idx].subtree_end_seq = end_seq;
        infosets[idx].subtree_end_infoset = end_info;
    }

    let mut ancestor_offsets = Vec::with_capacity(n + 1);
    let mut ancestor_list = Vec::new();
    let mut depth = 0;
    ancestor_offsets.push(0);
    for idx in 0..n {
        let parent = infosets[idx].parent;
        let start = ancestor_list.len();
        if parent != EMPTY_SEQ {
            let p = owner[parent];
            let (a, b) = (ancestor_offsets[p], ancestor_offsets[p + 1]);
            ancestor_list.extend_from_within(a..b);
        }
        ancestor_list.push(idx);
        depth = depth.max(ancestor_list.len() - start);
        ancestor_offsets.push(ancestor_list.len());
    }

    Treeplex {
        player,
        infosets: infosets.to_vec(),
        owner,
        child_offsets,
        child_list,
        ancestor_offsets,
        ancestor_list,
        depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_layout() {
        let t = crate::fixtures::example_treeplex();
        assert_eq!(t.num_sequences(), 7);
        assert_eq!(t.num_infosets(), 3);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.infoset(1).actions(), 3..5);
        assert_eq!(t.infoset(0).subtree_seqs(), 1..7);
        assert_eq!(t.children(1), &[1, 2]);
        assert_eq!(t.ancestors(2), &[0, 2]);
        assert_eq!(t.owner(0), None);
        assert_eq!(t.owner(6), Some(2));
    }

    #[test]
    fn builder_reorders_to_depth_first() {
        // R1 -> (x under R0's first action) inserted after R1
        let mut b = TreeplexBuilder::new(0);
        let r0 = b.add_infoset("R0", EMPTY_SEQ, 2).unwrap();
        let r1 = b.add_infoset("R1", EMPTY_SEQ, 3).unwrap();
        b.add_infoset("X", r0, 2).unwrap();
        b.add_infoset("Y", r1 + 2, 2).unwrap();
        let (t, map) = b.build();
        let ids: Vec<_> = t.infosets().iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids, ["R0", "X", "R1", "Y"]);
        assert_eq!(t.infoset(0).subtree_seqs(), 1..5);
        assert_eq!(map[r1], 5);
        assert_eq!(t.infoset(3).parent, map[r1 + 2]);
        for (idx, info) in t.infosets().iter().enumerate() {
            if info.parent != EMPTY_SEQ {
                assert!(t.owner(info.parent).unwrap() < idx);
            }
        }
    }

    #[test]
    fn revisiting_with_other_parent_is_rejected() {
        let mut b = TreeplexBuilder::new(0);
        let r = b.infoset("R", EMPTY_SEQ, 2).unwrap();
        assert_eq!(b.infoset("R", EMPTY_SEQ, 2).unwrap(), r);
        assert!(b.infoset("R", EMPTY_SEQ, 3).is_err());
        assert!(b.add_infoset("Z", 99, 2).is_err());
    }

    #[test]
    fn canonical_rejects_non_preorder() {
        // second root listed between a root and its child
        let bad = vec![
            ("A".to_string(), 0, 2),
            ("B".to_string(), 0, 2),
            ("C".to_string(), 1, 2),
        ];
        assert!(from_canonical(0, bad).is_err());
    }
}
