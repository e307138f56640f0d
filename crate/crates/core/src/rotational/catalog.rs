use crate::digraph::{CycleType, Decomposition};
use crate::error::Result;

use super::{expand_starters, parse_factor, StarterSet};

/// A hard-coded solution for a small type.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Starters(StarterSet),
    Explicit(Decomposition),
}

impl CatalogEntry {
    pub fn expand(&self) -> Decomposition {
        match self {
            CatalogEntry::Starters(set) => expand_starters(set),
            CatalogEntry::Explicit(d) => d.normalized(),
        }
    }
}

enum Data {
    Starters(usize, &'static [&'static str]),
    Explicit(&'static [&'static str]),
}

const TABLE: &[(&str, Data)] = &[
    ("4,5", Data::Starters(1, &["0 1 5 3 | 2 4 7 6 i"])),
    ("2,2,2,4", Data::Starters(1, &["0 i | 1 3 | 5 6 | 2 7 4 8"])),
    (
        "2,4,6",
        Data::Starters(1, &["0 i | 3 7 9 8 | 1 2 5 10 6 4"]),
    ),
    ("2,3,3", Data::Starters(1, &["0 i | 1 2 4 | 6 5 3"])),
    ("2,2,3,3", Data::Starters(1, &["0 i | 2 7 | 1 3 4 | 5 8 6"])),
    (
        "2,2,2,3,3",
        Data::Starters(1, &["0 i | 1 4 | 5 6 | 3 10 8 | 2 7 9"]),
    ),
    (
        "2^4,3,3",
        Data::Starters(1, &["0 i | 6 7 | 1 5 | 2 12 | 3 10 8 | 4 9 11"]),
    ),
    (
        "2^5,3,3",
        Data::Starters(1, &["0 i | 4 8 | 7 12 | 3 6 | 9 11 | 1 10 2 | 5 13 14"]),
    ),
    ("2,2,6", Data::Starters(1, &["0 i | 1 6 | 2 3 5 8 7 4"])),
    (
        "2,2,2,6",
        Data::Starters(1, &["0 i | 1 6 | 7 10 | 2 3 5 9 8 4"]),
    ),
    (
        "2^4,6",
        Data::Starters(1, &["0 i | 1 6 | 3 9 | 12 2 | 4 5 7 11 10 8"]),
    ),
    ("2,3,4", Data::Starters(1, &["1 7 | 0 4 i | 2 3 6 5"])),
    ("2,3,5", Data::Starters(1, &["0 i | 2 3 5 | 1 6 4 8 7"])),
    ("2,4,4", Data::Starters(1, &["0 i | 1 7 5 6 | 2 4 3 8"])),
    ("2,4,5", Data::Starters(1, &["1 2 | 3 i 8 6 | 0 4 7 9 5"])),
    ("3,3,5", Data::Starters(1, &["0 i 5 | 3 4 6 | 1 9 2 8 7"])),
    (
        "2,2,3,4",
        Data::Starters(1, &["1 9 | 2 8 | 0 i 5 | 3 4 7 6"]),
    ),
    (
        "2,3,3,3",
        Data::Starters(1, &["3 7 | 0 i 5 | 1 2 4 | 6 9 8"]),
    ),
    (
        "2,5,5",
        Data::Starters(1, &["0 i | 1 8 2 4 3 | 5 9 6 7 10"]),
    ),
    (
        "2,2,3,5",
        Data::Starters(1, &["0 i | 5 6 | 2 7 4 | 1 8 10 3 9"]),
    ),
    (
        "2,3,3,4",
        Data::Starters(1, &["0 i | 1 5 2 | 4 10 8 | 3 6 7 9"]),
    ),
    (
        "2,5,6",
        Data::Starters(1, &["3 6 | 0 7 5 11 1 | 2 10 i 4 8 9"]),
    ),
    (
        "2,2,3,6",
        Data::Starters(1, &["5 7 | 10 11 | 1 4 8 | 0 i 6 2 9 3"]),
    ),
    (
        "2,2,4,5",
        Data::Starters(1, &["0 11 | 1 5 | 2 7 10 4 | 3 i 9 6 8"]),
    ),
    (
        "2,3,3,5",
        Data::Starters(1, &["2 4 | 0 1 7 | 3 10 6 | 5 9 8 11 i"]),
    ),
    (
        "2,3,4,4",
        Data::Starters(1, &["6 9 | 1 8 2 | 0 10 3 4 | 5 7 11 i"]),
    ),
    (
        "2,2,2,3,4",
        Data::Starters(1, &["1 10 | 4 11 | 5 6 | 3 7 9 | 0 8 i 2"]),
    ),
    (
        "2,2,3,3,3",
        Data::Starters(1, &["0 5 | 4 6 | 1 10 2 | 3 9 i | 7 8 11"]),
    ),
    (
        "4,6",
        Data::Starters(
            3,
            &[
                "1 5 8 6 | 0 2 4 3 i 7",
                "2 7 3 6 | 0 8 5 4 1 i",
                "0 7 1 8 | 2 6 3 4 5 i",
            ],
        ),
    ),
    (
        "3,3,4",
        Data::Starters(
            3,
            &[
                "0 5 2 | 1 i 3 | 4 6 8 7",
                "0 3 4 | 5 6 i | 1 8 2 7",
                "2 4 3 | 7 8 i | 0 6 1 5",
            ],
        ),
    ),
    (
        "4,8",
        Data::Explicit(&[
            "3 10 4 i | 0 2 9 5 1 7 6 8",
            "1 4 7 3 | 0 i 5 9 2 10 8 6",
            "0 7 5 3 | 1 2 i 9 10 6 4 8",
            "3 8 4 6 | 0 5 10 2 1 9 i 7",
            "0 3 i 1 | 2 6 9 8 7 10 5 4",
            "0 10 3 9 | 1 5 8 i 6 7 2 4",
            "0 8 10 i | 1 3 4 5 6 2 7 9",
            "3 5 7 8 | 0 9 4 10 1 6 i 2",
            "4 9 7 i | 0 1 8 5 2 3 6 10",
            "2 5 i 8 | 0 6 1 10 9 3 7 4",
            "1 i 10 7 | 0 4 3 2 8 9 6 5",
        ]),
    ),
    (
        "3,3,6",
        Data::Explicit(&[
            "3 i 10 | 4 6 7 | 0 8 9 2 5 1",
            "1 2 10 | 3 6 8 | 0 4 7 9 i 5",
            "1 10 4 | 7 i 8 | 0 6 2 9 5 3",
            "0 10 9 | 7 8 i | 1 5 4 2 6 3",
            "1 6 i | 5 9 7 | 0 3 2 8 4 10",
            "4 5 i | 3 10 7 | 0 2 1 9 8 6",
            "2 7 10 | 4 9 6 | 0 1 i 3 5 8",
            "2 3 7 | 5 10 8 | 0 i 6 9 1 4",
            "3 9 4 | 5 6 10 | 0 7 1 8 2 i",
            "1 3 8 | 2 4 i | 0 9 10 6 5 7",
            "0 5 2 | 1 7 6 | 3 4 8 10 i 9",
        ]),
    ),
    (
        "3,4,5",
        Data::Explicit(&[
            "9 10 i | 3 7 4 5 | 0 6 8 1 2",
            "7 9 i | 0 10 3 8 | 1 4 6 5 2",
            "2 7 10 | 1 i 4 9 | 0 8 6 3 5",
            "1 9 4 | 2 10 8 7 | 0 5 6 i 3",
            "0 2 i | 5 9 8 10 | 1 6 4 7 3",
            "5 10 9 | 2 3 4 8 | 0 i 6 1 7",
            "2 8 4 | 0 3 9 6 | 1 5 7 i 10",
            "2 9 3 | 1 8 5 i | 0 7 6 10 4",
            "3 i 8 | 2 4 10 6 | 0 9 7 5 1",
            "1 10 7 | 2 5 8 i | 0 4 3 6 9",
            "4 i 5 | 0 1 3 10 | 2 6 7 8 9",
        ]),
    ),
];

fn build(ty: &CycleType, data: &Data) -> Result<CatalogEntry> {
    let n = ty.order();
    match data {
        Data::Starters(q, rows) => {
            let starters = rows
                .iter()
                .map(|r| parse_factor(n, r))
                .collect::<Result<Vec<_>>>()?;
            Ok(CatalogEntry::Starters(StarterSet::new(
                ty.clone(),
                *q,
                starters,
            )?))
        }
        Data::Explicit(rows) => {
            let factors = rows
                .iter()
                .map(|r| parse_factor(n, r))
                .collect::<Result<Vec<_>>>()?;
            Ok(CatalogEntry::Explicit(Decomposition::new(n, factors)))
        }
    }
}

/// Every type with a hard-coded solution, in table order.
pub fn catalog_types() -> Vec<CycleType> {
    TABLE
        .iter()
        .map(|(s, _)| s.parse().expect("catalog keys parse"))
        .collect()
}

/// The hard-coded solution for `ty`, if there is one.
pub fn catalog_lookup(ty: &CycleType) -> Option<CatalogEntry> {
    TABLE.iter().find_map(|(key, data)| {
        let key: CycleType = key.parse().expect("catalog keys parse");
        (&key == ty).then(|| build(ty, data).expect("catalog data is valid"))
    })
}
