use std::path::Path;

use cmsoule::characters::ClassNumberFacts;

use crate::exit::{CliError, CliResult};

/// Environment variable that sets the default working precision in bits.
pub const PRECISION_ENV: &str = "CMSOULE_PRECISION";

/// Class-number facts read from a TOML file of the form
///
/// ```toml
/// [[facts]]
/// d = 1
/// p = 5
/// level = "full"   # or "p", "p_bar"
/// divisible_by_p = false
/// ```
pub fn load_facts(path: &Path) -> CliResult<ClassNumberFacts> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_facts(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn parse_facts(text: &str) -> Result<ClassNumberFacts, toml::de::Error> {
    toml::from_str(text)
}
