//! Built-in catalog of small fans with their known lattice data.

use crate::fan::{build_fan, Fan, FanOptions};
use crate::filtration::Depth;
use crate::intlin::{int_vector, IntVector};

/// Expected values for a catalog fan; the test suite recomputes all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownData {
    /// Canonical HNF basis of the relation lattice.
    pub relation_basis: Vec<Vec<i64>>,
    pub complete: bool,
    /// `None` when the rays do not span.
    pub ray_lattice_index: Option<i64>,
    /// `(free rank, torsion factors)`; `None` when the rays do not span.
    pub class_group: Option<(usize, Vec<i64>)>,
    /// Depth of each basis relation, inclusive policy.
    pub depths_inclusive: Vec<Depth>,
    /// Depth of each basis relation, exclusive policy.
    pub depths_exclusive: Vec<Depth>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub fan: Fan,
    pub known: KnownData,
}

impl CatalogEntry {
    pub fn relation_basis(&self) -> Vec<IntVector> {
        self.known.relation_basis.iter().map(|r| int_vector(r)).collect()
    }
}

fn fan(name: &str, rank: usize, rays: &[&[i64]], maximal: &[&[usize]]) -> Fan {
    build_fan(
        rank,
        rays.iter().map(|r| int_vector(r)).collect(),
        maximal.iter().map(|c| c.to_vec()).collect(),
        FanOptions {
            name: Some(name.to_string()),
            ..Default::default()
        },
    )
    .expect("catalog fans are valid")
}

use Depth::{Level, Unreachable};

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "p2",
            description: "projective plane: rays (1,0), (0,1), (-1,-1)",
            fan: fan("p2", 2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]),
            known: KnownData {
                relation_basis: vec![vec![1, 1, 1]],
                complete: true,
                ray_lattice_index: Some(1),
                class_group: Some((1, vec![])),
                depths_inclusive: vec![Level(1)],
                depths_exclusive: vec![Unreachable],
            },
        },
        CatalogEntry {
            name: "p1xp1",
            description: "product of two projective lines: rays +-e1, +-e2, four quadrants",
            fan: fan(
                "p1xp1",
                2,
                &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
                &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
            ),
            known: KnownData {
                relation_basis: vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]],
                complete: true,
                ray_lattice_index: Some(1),
                class_group: Some((2, vec![])),
                depths_inclusive: vec![Level(1), Level(1)],
                depths_exclusive: vec![Level(1), Level(1)],
            },
        },
        CatalogEntry {
            name: "p3",
            description: "projective 3-space; rays e1, e2, e3 and -(e1+e2+e3), every triple spanning a cone",
            fan: fan(
                "p3",
                3,
                &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
                &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
            ),
            known: KnownData {
                relation_basis: vec![vec![1, 1, 1, 1]],
                complete: true,
                ray_lattice_index: Some(1),
                class_group: Some((1, vec![])),
                depths_inclusive: vec![Level(1)],
                depths_exclusive: vec![Unreachable],
            },
        },
        CatalogEntry {
            name: "p2xp1",
            description: "product of the projective plane and the projective line",
            fan: fan(
                "p2xp1",
                3,
                &[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 0], &[0, 0, 1], &[0, 0, -1]],
                &[
                    &[0, 1, 3],
                    &[1, 2, 3],
                    &[2, 0, 3],
                    &[0, 1, 4],
                    &[1, 2, 4],
                    &[2, 0, 4],
                ],
            ),
            known: KnownData {
                relation_basis: vec![vec![1, 1, 1, 0, 0], vec![0, 0, 0, 1, 1]],
                complete: true,
                ray_lattice_index: Some(1),
                class_group: Some((2, vec![])),
                depths_inclusive: vec![Level(1), Level(1)],
                depths_exclusive: vec![Level(2), Level(1)],
            },
        },
        CatalogEntry {
            name: "blowup_p2",
            description: "projective plane blown up at a fixed point: p2 subdivided at (1,1)",
            fan: fan(
                "blowup_p2",
                2,
                &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]],
                &[&[0, 3], &[3, 1], &[1, 2], &[2, 0]],
            ),
            known: KnownData {
                relation_basis: vec![vec![1, 1, 0, -1], vec![0, 0, 1, 1]],
                complete: true,
                ray_lattice_index: Some(1),
                class_group: Some((2, vec![])),
                depths_inclusive: vec![Level(1), Level(1)],
                depths_exclusive: vec![Unreachable, Level(1)],
            },
        },
        CatalogEntry {
            name: "halfplane2",
            description: "single cone on (1,1), (1,-1): ray lattice of index 2, not complete",
            fan: fan("halfplane2", 2, &[&[1, 1], &[1, -1]], &[&[0, 1]]),
            known: KnownData {
                relation_basis: vec![],
                complete: false,
                ray_lattice_index: Some(2),
                class_group: Some((0, vec![2])),
                depths_inclusive: vec![],
                depths_exclusive: vec![],
            },
        },
        CatalogEntry {
            name: "sigma_c",
            description: "cone over the square (1,0,1), (0,1,1), (-1,0,1), (0,-1,1) split along the diagonal from (1,0,1) to (-1,0,1), completed below by (0,0,-1)",
            fan: fan(
                "sigma_c",
                3,
                &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1], &[0, 0, -1]],
                &[
                    &[0, 1, 2],
                    &[0, 2, 3],
                    &[0, 1, 4],
                    &[1, 2, 4],
                    &[2, 3, 4],
                    &[3, 0, 4],
                ],
            ),
            known: KnownData {
                relation_basis: vec![vec![1, 0, 1, 0, 2], vec![0, 1, 0, 1, 2]],
                complete: true,
                ray_lattice_index: Some(1),
                class_group: Some((2, vec![])),
                depths_inclusive: vec![Level(1), Level(1)],
                depths_exclusive: vec![Level(2), Level(2)],
            },
        },
    ]
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}
