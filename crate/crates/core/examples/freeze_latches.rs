// SPDX-License-Identifier: Apache-2.0

//! Print the latch cores produced by the synthesis pipeline in fixture form.

use revseq::format::emit_blocks;
use revseq::sequential::{synthesize_latch, LatchKind};

fn main() {
    let blocks: Vec<_> = LatchKind::ALL
        .into_iter()
        .map(|k| {
            let f = synthesize_latch(k).expect("latch synthesizes");
            f.to_file(Some(&format!("{}-latch", k.label())))
        })
        .collect();
    print!("{}", emit_blocks(&blocks));
}
