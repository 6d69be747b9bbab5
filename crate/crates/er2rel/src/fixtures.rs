//! Built-in example models, one per transformation step, embedded from the
//! `fixtures/` directory. The CLI lists and prints them via `--fixtures`.

/// A built-in example model.
pub struct Fixture {
    pub id: &'static str,
    pub figure: u8,
    pub title: &'static str,
    pub dsl: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        id: "fig1",
        figure: 1,
        title: "one-to-one relationship between two regular entity types (step GOG)",
        dsl: include_str!("../fixtures/fig1.er"),
    },
    Fixture {
        id: "fig2",
        figure: 2,
        title: "many-to-many relationship between two regular entity types (step GMG)",
        dsl: include_str!("../fixtures/fig2.er"),
    },
    Fixture {
        id: "fig3",
        figure: 3,
        title: "one-to-many relationship between a subtype and a regular entity type (step SNG)",
        dsl: include_str!("../fixtures/fig3.er"),
    },
    Fixture {
        id: "fig4",
        figure: 4,
        title: "many-to-many relationship between a subtype and a regular entity type (step SMG)",
        dsl: include_str!("../fixtures/fig4.er"),
    },
    Fixture {
        id: "fig5",
        figure: 5,
        title: "one-to-one relationship between two subtypes (step SOS)",
        dsl: include_str!("../fixtures/fig5.er"),
    },
    Fixture {
        id: "fig6",
        figure: 6,
        title: "one-to-many relationship between two subtypes (step SNS)",
        dsl: include_str!("../fixtures/fig6.er"),
    },
    Fixture {
        id: "fig7",
        figure: 7,
        title: "many-to-many relationship between two subtypes (step SMS)",
        dsl: include_str!("../fixtures/fig7.er"),
    },
    Fixture {
        id: "fig8",
        figure: 8,
        title: "ternary relationship among regular entity types (step THG)",
        dsl: include_str!("../fixtures/fig8.er"),
    },
];

/// Look a fixture up by id (`fig3`) or bare figure number (`3`).
pub fn fixture(key: &str) -> Option<&'static Fixture> {
    let number = key.strip_prefix("fig").unwrap_or(key);
    FIXTURES
        .iter()
        .find(|f| f.id == key || number == f.figure.to_string())
}
