//! Prüfer sequences: a bijection between sequences in `[0,n)^(n-2)` and
//! labelled trees on `n` vertices.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

/// Tree edges `(u, v)` with `u < v`, in the order they are produced.
pub fn decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2, "sequence length must be n - 2");
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(a) = leaves.pop().expect("two vertices remain");
    let Reverse(b) = leaves.pop().expect("two vertices remain");
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Steps `seq` to the next sequence in odometer order; false after the last.
pub fn advance(seq: &mut [usize], n: usize) -> bool {
    for digit in seq.iter_mut().rev() {
        *digit += 1;
        if *digit < n {
            return true;
        }
        *digit = 0;
    }
    false
}

/// A uniformly random labelled tree on `n >= 2` vertices.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    decode(&seq, n)
}
