//! Graphviz output for cubes and labeled posets.

use std::fmt::Write;

use crate::lpb::{LpbStructure, Poset};
use crate::sweight::DeltaCube;

fn mask_string(n: usize, m: u32) -> String {
    (0..n).map(|i| if m & (1 << i) != 0 { '1' } else { '0' }).collect()
}

/// The δ-cube bottom-up, one rank per Hamming weight.
pub fn cube_dot(cube: &DeltaCube) -> String {
    let n = cube.n();
    let mut out = String::from("digraph cube {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for h in 0..=n as u32 {
        let names: Vec<String> =
            (0..1u32 << n).filter(|m| m.count_ones() == h).map(|m| format!("\"{}\"", mask_string(n, m))).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
    }
    for (u, i, d) in cube.arcs() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{d}\"];", mask_string(n, u), mask_string(n, u | 1 << i));
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of a bare poset, elements numbered from 1.
pub fn poset_dot(p: &Poset) -> String {
    hasse(p, |i| format!("{}", i + 1))
}

/// Hasse diagram with each block labeled `i: L=·, k=·`.
pub fn lpb_dot(s: &LpbStructure) -> String {
    let sizes = s.block_sizes();
    hasse(s.poset(), |i| format!("{}: L={}, k={}", i + 1, s.labels()[i], sizes[i]))
}

fn hasse(p: &Poset, label: impl Fn(usize) -> String) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for i in 0..p.m() {
        let _ = writeln!(out, "  b{} [label=\"{}\"];", i + 1, label(i));
    }
    for (a, b) in p.cover_relations() {
        let _ = writeln!(out, "  b{} -> b{} [arrowhead=none];", a + 1, b + 1);
    }
    out.push_str("}\n");
    out
}
