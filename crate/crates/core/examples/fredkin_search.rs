// SPDX-License-Identifier: Apache-2.0

//! Search for the cheapest two-line-block realization of the Fredkin gate.

use revseq::circuit::{Circuit, Gate};
use revseq::exact::gate_unitary;
use revseq::format::emit_circuit;
use revseq::qcost::{search_realization, SearchSpace};

fn main() {
    let target = gate_unitary(&Gate::fredkin(0, 1, 2), 3).expect("three lines");
    for block_len in [1, 2] {
        let space = SearchSpace {
            max_blocks: 5,
            block_len,
        };
        let t0 = std::time::Instant::now();
        let out = search_realization(&target, space).expect("search runs");
        println!(
            "block_len {block_len}: explored {} in {:?}",
            out.explored,
            t0.elapsed()
        );
        match out.found {
            Some((k, gates)) => print!(
                "{k} blocks\n{}",
                emit_circuit(&Circuit::with_gates(3, gates))
            ),
            None => println!("no realization"),
        }
    }
}
