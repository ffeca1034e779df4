//! Peephole merging of consecutive gates on the same qubit pair.

use super::{AbstractGate, Circuit, Instruction};
use crate::error::Result;
use crate::linalg::{identity, kron, CMatrix};

struct Block {
    qubits: [usize; 2],
    matrix: CMatrix,
    gates: Vec<AbstractGate>,
}

enum Item {
    Instr(Instruction),
    Block(usize),
}

/// Merges every maximal run of gates confined to one qubit pair (with no
/// intervening gate on either qubit) into a single SU(4) gate. Runs holding a
/// single gate are left untouched; movement markers and barriers end all runs.
/// Typical use: folding routing SWAPs into the adjacent two-qubit gate.
pub fn consolidate_blocks(circuit: &Circuit) -> Result<Circuit> {
    let n = circuit.n_qubits();
    let mut blocks: Vec<Block> = Vec::new();
    let mut items: Vec<Item> = Vec::new();
    let mut open: Vec<Option<usize>> = vec![None; n];

    let close = |open: &mut Vec<Option<usize>>, blocks: &[Block], q: usize| {
        if let Some(i) = open[q] {
            for &p in &blocks[i].qubits {
                open[p] = None;
            }
        }
    };

    for instr in circuit.instructions() {
        let g = match instr {
            Instruction::Gate(g) => g,
            _ => {
                open.iter_mut().for_each(|o| *o = None);
                items.push(Item::Instr(instr.clone()));
                continue;
            }
        };
        crate::state::check_targets(n, g.targets())?;
        match *g.targets() {
            [q] => match open[q] {
                Some(i) => {
                    let b = &mut blocks[i];
                    let local = if b.qubits[0] == q {
                        kron(&g.matrix(), &identity(2))
                    } else {
                        kron(&identity(2), &g.matrix())
                    };
                    b.matrix = local * &b.matrix;
                    b.gates.push(g.clone());
                }
                None => items.push(Item::Instr(instr.clone())),
            },
            [a, b] if !matches!(g, AbstractGate::CkZ(_)) => {
                let m = g.matrix();
                match (open[a], open[b]) {
                    (Some(i), Some(j)) if i == j => {
                        let blk = &mut blocks[i];
                        let aligned = if blk.qubits == [a, b] { m } else { swap_conjugate(&m) };
                        blk.matrix = aligned * &blk.matrix;
                        blk.gates.push(g.clone());
                    }
                    _ => {
                        close(&mut open, &blocks, a);
                        close(&mut open, &blocks, b);
                        open[a] = Some(blocks.len());
                        open[b] = Some(blocks.len());
                        items.push(Item::Block(blocks.len()));
                        blocks.push(Block { qubits: [a, b], matrix: m, gates: vec![g.clone()] });
                    }
                }
            }
            _ => {
                for &q in g.targets() {
                    close(&mut open, &blocks, q);
                }
                items.push(Item::Instr(instr.clone()));
            }
        }
    }

    let mut out = Circuit::new(n);
    for item in items {
        match item {
            Item::Instr(i) => {
                out.extend([i]);
            }
            Item::Block(i) => {
                let b = &blocks[i];
                if b.gates.len() == 1 {
                    out.gate(b.gates[0].clone());
                } else {
                    let det = b.matrix.determinant();
                    out.gate(AbstractGate::Su4(&b.matrix / det.powf(0.25), b.qubits));
                }
            }
        }
    }
    Ok(out)
}

/// `SWAP M SWAP`: the same two-qubit operator with its qubit order reversed.
fn swap_conjugate(m: &CMatrix) -> CMatrix {
    let perm = [0, 2, 1, 3];
    CMatrix::from_fn(4, 4, |r, c| m[(perm[r], perm[c])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff_up_to_phase;
    use crate::transpile::{abstract_unitary, haar_su4};
    use rand::SeedableRng;

    #[test]
    fn merges_swaps_into_neighbouring_blocks() {
        use AbstractGate::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut c = Circuit::new(4);
        c.gates([
            Su4(haar_su4(&mut rng), [0, 1]),
            Su4(haar_su4(&mut rng), [2, 3]),
            Swap([1, 0]),
            Swap([1, 2]),
            H(3),
            Swap([2, 3]),
            Su4(haar_su4(&mut rng), [3, 2]),
        ]);
        c.move_marker();
        c.gates([Swap([0, 1]), Ccz([0, 1, 2]), Cnot([1, 2]), Rx(0.3, 2), Cz([2, 1])]);
        let merged = consolidate_blocks(&c).unwrap();
        assert_eq!(merged.count_gates(|g| matches!(g, Swap(_))), 2);
        assert_eq!(merged.count_gates(|g| matches!(g, Su4(..))), 4);
        let want = abstract_unitary(&c).unwrap();
        let got = abstract_unitary(&merged).unwrap();
        assert!(max_abs_diff_up_to_phase(&got, &want) < 1e-12);
    }
}
