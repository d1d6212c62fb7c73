use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{FogDesign, Variant};
use crate::error::{FogError, Result};

/// Name → design lookup. Names are matched case-insensitively.
pub struct DesignRegistry {
    entries: BTreeMap<String, &'static dyn FogDesign>,
}

impl DesignRegistry {
    pub fn empty() -> Self {
        DesignRegistry {
            entries: BTreeMap::new(),
        }
    }

    /// Registry holding C, S, D, P, E under their letters and long names.
    pub fn builtin() -> &'static DesignRegistry {
        static BUILTIN: OnceLock<DesignRegistry> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            let mut reg = DesignRegistry::empty();
            let long = [
                (Variant::C, "classical"),
                (Variant::S, "squeezed"),
                (Variant::D, "distributed"),
                (Variant::P, "product"),
                (Variant::E, "entangled"),
            ];
            for (variant, alias) in long {
                let design = variant.design();
                reg.register(variant.name(), design)
                    .expect("unique builtin name");
                reg.register(alias, design).expect("unique builtin alias");
            }
            reg
        })
    }

    pub fn register(&mut self, name: &str, design: &'static dyn FogDesign) -> Result<()> {
        let key = name.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(FogError::invalid("design name must not be empty"));
        }
        if self.entries.contains_key(&key) {
            return Err(FogError::invalid(format!(
                "design name '{name}' already registered"
            )));
        }
        self.entries.insert(key, design);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&'static dyn FogDesign> {
        self.entries
            .get(&name.trim().to_ascii_lowercase())
            .copied()
            .ok_or_else(|| {
                FogError::invalid(format!(
                    "unknown design '{name}' (known: {})",
                    self.names().join(", ")
                ))
            })
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}
