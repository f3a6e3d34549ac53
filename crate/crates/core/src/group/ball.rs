use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};

/// All elements of word length at most `radius` with respect to the
/// symmetric generating set, sorted by length and then by canonical form.
///
/// Index 0 is always the identity.
#[derive(Clone, Debug)]
pub struct Ball {
    group: Group,
    radius: usize,
    elements: Vec<GroupElement>,
    lengths: Vec<usize>,
    index: HashMap<GroupElement, usize>,
    inverses: Vec<usize>,
}

impl Ball {
    pub(super) fn new(group: &Group, radius: usize) -> Result<Ball> {
        let cap = group.ball_cap();
        let gens = group.symmetric_generators();
        let mut seen: HashMap<GroupElement, usize> = HashMap::new();
        seen.insert(group.identity(), 0);
        let mut frontier = vec![group.identity()];
        for len in 1..=radius {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &gens {
                    let h = group.mul(g, s);
                    if !seen.contains_key(&h) {
                        seen.insert(h.clone(), len);
                        next.push(h);
                        if seen.len() > cap {
                            return Err(Error::BallCapExceeded { radius, cap });
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut entries: Vec<(usize, GroupElement)> = seen.into_iter().map(|(g, l)| (l, g)).collect();
        entries.sort();
        let (lengths, elements): (Vec<usize>, Vec<GroupElement>) = entries.into_iter().unzip();
        let index: HashMap<GroupElement, usize> =
            elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let inverses = elements
            .iter()
            .map(|g| index[&group.inv(g)])
            .collect();
        Ok(Ball {
            group: group.clone(),
            radius,
            elements,
            lengths,
            index,
            inverses,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Non-identity elements in ball order.
    pub fn nontrivial(&self) -> &[GroupElement] {
        &self.elements[1..]
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn word_length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverses[i]
    }

    /// Ball index of the product of two ball elements, if it lies in the ball.
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index_of(&self.group.mul(&self.elements[i], &self.elements[j]))
    }

    /// Number of elements of length at most `r` (a prefix of the ball order).
    pub fn prefix_len(&self, r: usize) -> usize {
        self.lengths.partition_point(|&l| l <= r)
    }

    /// For each element i, the pairs (j, k) with elements[i]·elements[j] = elements[k].
    pub fn product_table(&self) -> Vec<Vec<(u32, u32)>> {
        (0..self.len())
            .map(|i| {
                (0..self.len())
                    .filter_map(|j| self.product_index(i, j).map(|k| (j as u32, k as u32)))
                    .collect()
            })
            .collect()
    }
}
