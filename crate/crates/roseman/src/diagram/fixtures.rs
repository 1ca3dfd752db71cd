use super::{parse_diagram, Diagram, DiagramError};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        /// Names accepted by [`load_fixture`].
        pub const FIXTURE_NAMES: &[&str] = &[$($name),*];

        fn source(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../../fixtures/", $name, ".skd"))),)*
                _ => None,
            }
        }
    };
}

fixtures!(
    "unknot_sphere",
    "spun_trefoil",
    "twist1_spun_trefoil",
    "twist2_spun_trefoil",
    "roseman_I_a",
    "roseman_I_b",
    "roseman_III_a",
    "roseman_III_b",
    "roseman_IV_a",
    "roseman_IV_b",
    "roseman_V_a",
    "roseman_V_b",
    "roseman_VI_a",
    "roseman_VI_b",
    "roseman_VI_neg_a",
    "roseman_VI_neg_b",
    "roseman_VII_a",
    "roseman_VII_b",
);

/// Shipped diagram by name.
pub fn load_fixture(name: &str) -> Result<Diagram, DiagramError> {
    let text = source(name).ok_or_else(|| DiagramError::UnknownFixture(name.to_string()))?;
    parse_diagram(text)
}

/// Raw text of a shipped diagram.
pub fn fixture_source(name: &str) -> Option<&'static str> {
    source(name)
}
