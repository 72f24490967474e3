//! Partition-independent parallel reductions.
//!
//! Work is split into fixed-size chunks whose boundaries depend only on the
//! input length, and partial results are combined left to right. Floating
//! point sums are therefore bit-identical for any rayon pool size.

use std::ops::Add;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::Result;

pub(crate) const CHUNK: usize = 2048;

pub(crate) fn ordered_sum<I, S, F>(items: &[I], f: F) -> S
where
    I: Sync,
    S: Zero + Add<Output = S> + Send,
    F: Fn(&I) -> S + Sync,
{
    let partials: Vec<S> = items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().fold(S::zero(), |acc, item| acc + f(item)))
        .collect();
    partials.into_iter().fold(S::zero(), |acc, s| acc + s)
}

pub(crate) fn try_ordered_sum<I, S, F>(items: &[I], f: F) -> Result<S>
where
    I: Sync,
    S: Zero + Add<Output = S> + Send,
    F: Fn(&I) -> Result<S> + Sync,
{
    let partials: Vec<Result<S>> = items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().try_fold(S::zero(), |acc, item| Ok(acc + f(item)?)))
        .collect();
    partials.into_iter().try_fold(S::zero(), |acc, s| Ok(acc + s?))
}
