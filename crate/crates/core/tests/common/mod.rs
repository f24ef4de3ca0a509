//! Helpers shared by integration test targets.

use cpalg::cpmod::{Block, BlockKind, Glue};

/// Every alternating chain of at most `max_blocks` blocks with lengths up to
/// `max_n`, in both starting kinds and both starting glues.
pub fn chains(max_blocks: usize, max_n: u32) -> Vec<(Vec<Block>, Vec<Glue>)> {
    let mut out = Vec::new();
    for len in 1..=max_blocks {
        for first_kind in [BlockKind::L, BlockKind::R] {
            for first_glue in [Glue::FiberedSum, Glue::KernelIdentification] {
                let count = (max_n as usize).pow(len as u32);
                for idx in 0..count {
                    let mut x = idx;
                    let mut blocks = Vec::new();
                    for i in 0..len {
                        let n = (x % max_n as usize) as u32 + 1;
                        x /= max_n as usize;
                        let kind = if i % 2 == 0 {
                            first_kind
                        } else if first_kind == BlockKind::L {
                            BlockKind::R
                        } else {
                            BlockKind::L
                        };
                        blocks.push(Block { kind, n });
                    }
                    let glues = (0..len - 1)
                        .map(|i| {
                            if i % 2 == 0 {
                                first_glue
                            } else if first_glue == Glue::FiberedSum {
                                Glue::KernelIdentification
                            } else {
                                Glue::FiberedSum
                            }
                        })
                        .collect::<Vec<_>>();
                    if len == 1 && first_glue == Glue::KernelIdentification {
                        continue;
                    }
                    out.push((blocks, glues));
                }
            }
        }
    }
    out
}

/// Inner blocks need length at least 2 to carry two distinct handles.
pub fn inner_ok(blocks: &[Block]) -> bool {
    blocks.len() < 3 || blocks[1..blocks.len() - 1].iter().all(|b| b.n >= 2)
}
