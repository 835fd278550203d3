use anyhow::{bail, Context, Result};
use fontsense_core::features::{load_embeddings, ExternalFeaturizer, NrcFeaturizer, NrcLexicons, WordVecFeaturizer};
use fontsense_core::{Featurizer, FontCatalog};

use crate::args::{CatalogArgs, FeatureArgs, FeatureKind};

impl FeatureKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            NrcFeaturizer::NAME => Some(Self::Nrc),
            WordVecFeaturizer::NAME => Some(Self::Wordvec),
            ExternalFeaturizer::NAME => Some(Self::External),
            _ => None,
        }
    }
}

/// Builds the featurizer selected by `--features`, falling back to
/// `default` (usually the name stored in a checkpoint).
pub fn build(args: &FeatureArgs, default: Option<&str>) -> Result<Box<dyn Featurizer>> {
    let kind = match (args.kind, default) {
        (Some(kind), _) => kind,
        (None, Some(name)) => FeatureKind::from_name(name).with_context(|| format!("unknown featurizer `{name}`"))?,
        (None, None) => bail!("--features is required"),
    };
    Ok(match kind {
        FeatureKind::Nrc => {
            let dir = args
                .lexicons
                .as_ref()
                .context("--features nrc needs --lexicons <DIR>")?;
            Box::new(NrcFeaturizer::new(NrcLexicons::load_dir(dir)?)?)
        }
        FeatureKind::Wordvec => {
            let path = args
                .embeddings
                .as_ref()
                .context("--features wordvec needs --embeddings <PATH>")?;
            let loaded = load_embeddings(path, None)?;
            if !loaded.rejected.is_empty() {
                eprintln!(
                    "warning: {} embedding line(s) rejected in {}",
                    loaded.rejected.len(),
                    path.display()
                );
            }
            Box::new(WordVecFeaturizer::new(loaded.table))
        }
        FeatureKind::External => {
            let path = args
                .external_vecs
                .as_ref()
                .context("--features external needs --external-vecs <PATH>")?;
            Box::new(ExternalFeaturizer::load(path)?)
        }
    })
}

pub fn catalog(args: &CatalogArgs) -> Result<FontCatalog> {
    match &args.catalog {
        Some(path) => Ok(FontCatalog::load(path)?),
        None => Ok(FontCatalog::default()),
    }
}
