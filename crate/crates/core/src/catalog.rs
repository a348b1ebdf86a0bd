//! Small named arrangements used throughout the tests and the CLI examples.

use crate::arrangement::Arrangement;
use crate::linear::AffineSubspace;

fn arrangement(n: usize, members: &[(&str, &[&[i64]])]) -> Arrangement {
    let members = members
        .iter()
        .map(|(name, rows)| (name.to_string(), AffineSubspace::from_i64_equations(n, rows)))
        .collect();
    Arrangement::new(n, members).expect("catalog arrangement is valid")
}

/// The origin in `A^n`; the complement is `A^n - {0}`.
pub fn point_complement(n: usize) -> Arrangement {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut r = vec![0; n + 1];
            r[i] = 1;
            r
        })
        .collect();
    let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    arrangement(n, &[("0", &rows)])
}

/// The `k` coordinate hyperplanes `x_i = 0` in `A^k`; the complement is `G_m^k`.
pub fn coordinate_hyperplanes(k: usize) -> Arrangement {
    let rows: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            let mut r = vec![0; k + 1];
            r[i] = 1;
            r
        })
        .collect();
    let names: Vec<String> = (1..=k).map(|i| format!("H{i}")).collect();
    let members = names
        .iter()
        .zip(&rows)
        .map(|(name, row)| {
            (
                name.clone(),
                AffineSubspace::from_i64_equations(k, &[row.as_slice()]),
            )
        })
        .collect();
    Arrangement::new(k, members).expect("catalog arrangement is valid")
}

/// `x = 0` and `y = 0` in `A^2`.
pub fn transverse_lines() -> Arrangement {
    arrangement(2, &[("L1", &[&[1, 0, 0]]), ("L2", &[&[0, 1, 0]])])
}

/// `x = 0` and `x = 1` in `A^2`.
pub fn parallel_lines() -> Arrangement {
    arrangement(2, &[("L1", &[&[1, 0, 0]]), ("L2", &[&[1, 0, 1]])])
}

/// The braid arrangement `x_i = x_j` in `A^3`.
pub fn braid3() -> Arrangement {
    arrangement(
        3,
        &[
            ("H12", &[&[1, -1, 0, 0]]),
            ("H13", &[&[1, 0, -1, 0]]),
            ("H23", &[&[0, 1, -1, 0]]),
        ],
    )
}

/// `x = 0`, `y = 0`, `x + y = 1`: three lines in general position.
pub fn generic_lines() -> Arrangement {
    arrangement(
        2,
        &[
            ("L1", &[&[1, 0, 0]]),
            ("L2", &[&[0, 1, 0]]),
            ("L3", &[&[1, 1, 1]]),
        ],
    )
}

/// `x = 0`, `y = 0`, `x = y`: three lines through the origin.
pub fn concurrent_lines() -> Arrangement {
    arrangement(
        2,
        &[
            ("L1", &[&[1, 0, 0]]),
            ("L2", &[&[0, 1, 0]]),
            ("L3", &[&[1, -1, 0]]),
        ],
    )
}

/// The `x`- and `y`-axes in `A^3`, meeting at the origin.
pub fn skew_axes() -> Arrangement {
    arrangement(
        3,
        &[
            ("L1", &[&[0, 1, 0, 0], &[0, 0, 1, 0]]),
            ("L2", &[&[1, 0, 0, 0], &[0, 0, 1, 0]]),
        ],
    )
}

/// The plane `z = 0` and the line `x = y = 0` in `A^3`.
pub fn plane_and_line() -> Arrangement {
    arrangement(
        3,
        &[
            ("P", &[&[0, 0, 1, 0]]),
            ("L", &[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
        ],
    )
}

/// The points `0` and `1` in `A^1`.
pub fn two_points() -> Arrangement {
    arrangement(1, &[("p0", &[&[1, 0]]), ("p1", &[&[1, 1]])])
}

/// Every catalog arrangement small enough for exhaustive checks.
pub fn desk_arrangements() -> Vec<(String, Arrangement)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("point_complement_{n}"), point_complement(n)));
    }
    for k in 1..=3 {
        out.push((format!("coordinate_hyperplanes_{k}"), coordinate_hyperplanes(k)));
    }
    out.push(("transverse_lines".into(), transverse_lines()));
    out.push(("parallel_lines".into(), parallel_lines()));
    out.push(("braid3".into(), braid3()));
    out.push(("generic_lines".into(), generic_lines()));
    out.push(("concurrent_lines".into(), concurrent_lines()));
    out.push(("skew_axes".into(), skew_axes()));
    out.push(("plane_and_line".into(), plane_and_line()));
    out.push(("two_points".into(), two_points()));
    out
}
