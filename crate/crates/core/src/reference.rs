//! Published values, embedded verbatim for `--check` comparisons.
//!
//! These arrays are data, not derived results: they are what the reproduction
//! is compared against, typos included.

/// `Tr[E_iᵀ Ω_j]` as printed, in units of ½ (`3` means 3/2), rows are states.
pub const PUBLISHED_TABLE3_HALVES: [[i8; 24]; 24] = [
    [2, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 2, 0, 0, 2, 2, 0, 2, 2, 0], // Ω0
    [2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 0, 0, 2, 0, 2, 2, 0], // Ω1
    [0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 0, 2, 2, 0, 0, 2, 0, 0, 2], // Ω2
    [0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 2, 2, 0, 0, 2, 2, 0], // Ω3
    [2, 0, 0, 2, 2, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 2, 0, 0, 2, 2], // Ω4
    [2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 0, 2, 2, 0], // Ω5
    [0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 2, 2, 0, 0], // Ω6
    [0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 2, 0, 0, 2], // Ω7
    [0, 0, 0, 0, 2, 0, 0, 2, 2, 0, 0, 2, 0, 0, 0, 0, 2, 2, 0, 0, 2, 0, 0, 2], // Ω8
    [0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 0, 2, 2], // Ω9
    [0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 2, 2, 0], // Ω10
    [0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 2, 0, 0, 2, 2, 2, 0, 0], // Ω11
    [0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 2, 2, 0, 0, 2, 0, 2, 2, 0, 2, 2, 0, 0], // Ω12
    [0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 2, 2, 2, 0, 0, 2], // Ω13
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 2, 0, 0, 2, 0, 0, 2, 2], // Ω14
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 2, 2, 0, 0, 0, 2, 2, 0], // Ω15
    [2, 2, 0, 0, 2, 0, 0, 2, 0, 0, 2, 2, 0, 2, 2, 0, 3, 1, -1, 1, 1, 1, 1, 1], // Ω16
    [0, 2, 2, 0, 2, 2, 0, 0, 2, 0, 0, 2, 0, 0, 2, 2, 1, 3, 1, -1, 1, 1, 1, 1], // Ω17
    [0, 0, 2, 2, 0, 2, 2, 0, 2, 2, 0, 0, 2, 0, 0, 2, -1, 1, 3, 1, 1, 1, 1, 1], // Ω18
    [2, 0, 0, 2, 0, 0, 2, 2, 0, 2, 2, 0, 2, 2, 0, 0, 1, -1, 1, 3, 1, 1, 1, 1], // Ω19
    [0, 0, 2, 2, 2, 0, 0, 2, 2, 2, 0, 0, 0, 2, 2, 0, 1, 1, 1, 1, 1, -1, 1, 3], // Ω20
    [2, 0, 0, 2, 2, 2, 0, 0, 0, 2, 2, 0, 0, 0, 2, 2, 1, 1, 1, 1, -1, 1, 3, 1], // Ω21
    [2, 2, 0, 0, 0, 2, 2, 0, 0, 0, 2, 2, 2, 0, 0, 2, 1, 1, 1, 1, 1, 3, 1, -1], // Ω22
    [0, 2, 2, 0, 0, 0, 2, 2, 2, 0, 0, 2, 2, 2, 0, 0, 1, 1, 1, 1, 3, 1, -1, 1], // Ω23
];

/// Factorized block as printed, rows are states.
pub const PUBLISHED_TABLE4: [[u8; 16]; 16] = [
    [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1], // Ω0
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0], // Ω1
    [0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0], // Ω2
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1], // Ω3
    [1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0], // Ω4
    [1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], // Ω5
    [0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0], // Ω6
    [0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0], // Ω7
    [0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0], // Ω8
    [0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0], // Ω9
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0], // Ω10
    [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0], // Ω11
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1], // Ω12
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0], // Ω13
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0], // Ω14
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1], // Ω15
];

/// Image of Ω16 as printed: rows are Bob's action, columns Alice's, both in
/// the order `U0+ .. U3+, U0- .. U3-`.
pub const PUBLISHED_TABLE5_BOB_ROWS: [[u8; 8]; 8] = [
    [16, 17, 18, 19, 23, 22, 21, 20], // Bob U0+
    [17, 18, 19, 16, 20, 23, 22, 21], // Bob U1+
    [18, 19, 16, 17, 21, 20, 23, 22], // Bob U2+
    [19, 16, 17, 18, 22, 21, 20, 23], // Bob U3+
    [20, 23, 22, 21, 17, 18, 19, 16], // Bob U0-
    [21, 20, 23, 22, 18, 19, 16, 17], // Bob U1-
    [22, 21, 20, 23, 19, 16, 17, 18], // Bob U2-
    [23, 22, 21, 20, 16, 17, 18, 19], // Bob U3-
];

/// A row of the non-optimal classical strategy table: Alice's and Bob's
/// channel symbol for strings `00, 01, 10, 11`, the verifier's answer
/// (`true` = "equal") for symbol pairs `00, 01, 10, 11`, and the listed value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PublishedClassicalRow {
    pub alice: [u8; 4],
    pub bob: [u8; 4],
    pub decoder: [bool; 4],
    pub value: (i64, i64),
}

pub const PUBLISHED_TABLE1: [PublishedClassicalRow; 3] = [
    PublishedClassicalRow {
        alice: [0, 1, 1, 1],
        bob: [1, 0, 1, 1],
        decoder: [false, false, false, false],
        value: (3, 4),
    },
    PublishedClassicalRow {
        alice: [0, 1, 1, 0],
        bob: [0, 1, 0, 1],
        decoder: [false, false, false, false],
        value: (3, 4),
    },
    PublishedClassicalRow {
        alice: [0, 1, 1, 1],
        bob: [0, 1, 0, 1],
        decoder: [true, false, false, false],
        value: (3, 4),
    },
];

/// Optimal classical success.
pub const CLASSICAL_OPTIMUM: (i64, i64) = (13, 16);

/// Cells of the printed full table lying outside `[0,1]`: `(state, effect)`.
pub fn published_shaded_cells() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (s, row) in PUBLISHED_TABLE3_HALVES.iter().enumerate() {
        for (e, &v) in row.iter().enumerate() {
            if !(0..=2).contains(&v) {
                out.push((s, e));
            }
        }
    }
    out
}

/// Toy-bit composition: `(alice permutation, bob permutation) ↦ ψ index`, as
/// listed row by row for ψ0..ψ3.
pub const PUBLISHED_TOY_COMPOSITION: [[(usize, usize); 4]; 4] = [
    [(0, 0), (1, 1), (2, 2), (3, 3)],
    [(0, 1), (1, 0), (2, 3), (3, 2)],
    [(0, 2), (2, 0), (1, 3), (3, 1)],
    [(0, 3), (3, 0), (1, 2), (2, 1)],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_shaded_cells_in_entangled_block() {
        let cells = published_shaded_cells();
        assert_eq!(cells.len(), 16);
        assert!(cells.iter().all(|&(s, e)| s >= 16 && e >= 16));
    }

    #[test]
    fn printed_factorized_tables_differ_once() {
        let mut diffs = Vec::new();
        for s in 0..16 {
            for e in 0..16 {
                if PUBLISHED_TABLE3_HALVES[s][e] != 2 * PUBLISHED_TABLE4[s][e] as i8 {
                    diffs.push((s, e));
                }
            }
        }
        assert_eq!(diffs, vec![(2, 14)]);
    }

    #[test]
    fn composition_covers_all_pairs() {
        let mut seen = [[false; 4]; 4];
        for row in PUBLISHED_TOY_COMPOSITION {
            for (a, b) in row {
                assert!(!seen[a][b]);
                seen[a][b] = true;
            }
        }
    }
}
