//! The fixed set of candidate fonts.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a font inside a [`FontCatalog`]; contiguous from zero.
pub type FontId = usize;

/// Default catalog size.
pub const DEFAULT_FONT_COUNT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Font {
    pub id: FontId,
    pub name: String,
    /// CSS `font-family` hint used by previews.
    pub css: String,
}

/// Ordered font list. Ids are `0..len` and names are unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FontCatalog {
    fonts: Vec<Font>,
}

impl FontCatalog {
    pub fn new(fonts: Vec<Font>) -> Result<Self> {
        if fonts.is_empty() {
            return Err(Error::InvalidCatalog("catalog is empty".into()));
        }
        let mut names = HashSet::new();
        for (i, font) in fonts.iter().enumerate() {
            if font.id != i {
                return Err(Error::InvalidCatalog(format!(
                    "font ids must be contiguous from 0; position {i} has id {}",
                    font.id
                )));
            }
            if !names.insert(font.name.as_str()) {
                return Err(Error::InvalidCatalog(format!("duplicate font name `{}`", font.name)));
            }
        }
        Ok(Self { fonts })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let fonts: Vec<Font> = serde_json::from_str(&text)?;
        Self::new(fonts)
    }

    pub fn len(&self) -> usize {
        self.fonts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fonts.is_empty()
    }

    pub fn get(&self, id: FontId) -> Option<&Font> {
        self.fonts.get(id)
    }

    pub fn fonts(&self) -> &[Font] {
        &self.fonts
    }
}

impl<'de> Deserialize<'de> for FontCatalog {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let fonts = Vec::<Font>::deserialize(d)?;
        FontCatalog::new(fonts).map_err(serde::de::Error::custom)
    }
}

impl Default for FontCatalog {
    /// The ten display fonts of the annotated dataset, F0 through F9.
    fn default() -> Self {
        const FONTS: [(&str, &str); DEFAULT_FONT_COUNT] = [
            ("Source Sans Pro", "source-sans-pro"),
            ("Blakely", "blakely"),
            ("FF Ernestine Pro", "ff-ernestine-pro"),
            ("FF Market Web", "ff-market-web"),
            ("Bickham Script Pro 3", "bickham-script-pro-3"),
            ("Burbank Big", "burbank-big"),
            ("Fresno", "fresno"),
            ("Sneakers Script Narrow", "sneakers-script-narrow"),
            ("Felt Tip Roman", "felt-tip-roman"),
            ("Pauline", "pauline"),
        ];
        let fonts = FONTS
            .iter()
            .enumerate()
            .map(|(id, (name, css))| Font {
                id,
                name: name.to_string(),
                css: css.to_string(),
            })
            .collect();
        Self { fonts }
    }
}
