//! Back-translation augmentation and class rebalancing of the training set.
//!
//! Instances carrying mass on rarely chosen fonts are paraphrased by
//! translating them into pivot languages and back; the paraphrases inherit
//! the original target distribution. Instances dominated by the most popular
//! font are then dropped.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::corpus::{average_distribution, LabeledInstance};
use crate::error::{Error, Result};
use crate::features::{tokenize, SynonymTable};

pub const SOURCE_LANG: &str = "en";

/// Machine translation backend.
pub trait TranslationProvider: Send + Sync {
    fn name(&self) -> &str;

    fn translate(&self, text: &str, source_lang: &str, target_lang: &str) -> Result<String>;
}

/// Returns its input unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityProvider;

impl TranslationProvider for IdentityProvider {
    fn name(&self) -> &str {
        "identity"
    }

    fn translate(&self, text: &str, _source_lang: &str, _target_lang: &str) -> Result<String> {
        Ok(text.to_string())
    }
}

/// Offline stand-in that paraphrases on the way back to English by swapping
/// words for synonyms. The synonym picked depends on the pivot language, so
/// different pivots can yield different paraphrases.
#[derive(Debug, Clone)]
pub struct SynonymMockProvider {
    synonyms: SynonymTable,
}

impl SynonymMockProvider {
    pub fn new(synonyms: SynonymTable) -> Self {
        Self { synonyms }
    }
}

impl TranslationProvider for SynonymMockProvider {
    fn name(&self) -> &str {
        "mock"
    }

    fn translate(&self, text: &str, source_lang: &str, target_lang: &str) -> Result<String> {
        if target_lang != SOURCE_LANG {
            return Ok(text.to_string());
        }
        let pick = source_lang.bytes().map(usize::from).sum::<usize>();
        let words: Vec<String> = text
            .split_whitespace()
            .map(|w| {
                let syns = self.synonyms.synonyms(&w.to_lowercase());
                if syns.is_empty() {
                    w.to_string()
                } else {
                    syns[pick % syns.len()].clone()
                }
            })
            .collect();
        Ok(words.join(" "))
    }
}

#[derive(Serialize)]
struct TranslateRequest<'a> {
    q: &'a str,
    source: &'a str,
    target: &'a str,
    format: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    api_key: Option<&'a str>,
}

#[derive(Deserialize)]
struct TranslateResponse {
    #[serde(rename = "translatedText")]
    translated_text: String,
}

/// JSON-over-HTTP client.
///
/// Sends `POST <endpoint>` with body
/// `{"q", "source", "target", "format": "text", "api_key"?}` and expects
/// `{"translatedText": "..."}`. The key, when set, is also sent as a
/// bearer token. Failed requests are retried at most twice with
/// exponential backoff.
#[derive(Debug, Clone)]
pub struct HttpProvider {
    endpoint: String,
    api_key: Option<String>,
    agent: ureq::Agent,
    max_retries: u32,
    backoff: Duration,
}

impl HttpProvider {
    pub const URL_VAR: &'static str = "FONTSENSE_MT_URL";
    pub const KEY_VAR: &'static str = "FONTSENSE_MT_KEY";

    pub fn new(endpoint: impl Into<String>, api_key: Option<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self {
            endpoint: endpoint.into(),
            api_key,
            agent,
            max_retries: 2,
            backoff: Duration::from_millis(200),
        }
    }

    /// Reads the endpoint and optional key from the environment.
    pub fn from_env() -> Result<Self> {
        let endpoint = std::env::var(Self::URL_VAR)
            .map_err(|_| Error::InvalidArgument(format!("{} is not set", Self::URL_VAR)))?;
        let key = std::env::var(Self::KEY_VAR).ok().filter(|k| !k.is_empty());
        Ok(Self::new(endpoint, key, Duration::from_secs(10)))
    }

    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    fn attempt(&self, body: &TranslateRequest<'_>) -> std::result::Result<String, String> {
        let mut request = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request.send_json(body).map_err(|e| e.to_string())?;
        let parsed: TranslateResponse = response.body_mut().read_json().map_err(|e| e.to_string())?;
        Ok(parsed.translated_text)
    }
}

impl TranslationProvider for HttpProvider {
    fn name(&self) -> &str {
        "http"
    }

    fn translate(&self, text: &str, source_lang: &str, target_lang: &str) -> Result<String> {
        let body = TranslateRequest {
            q: text,
            source: source_lang,
            target: target_lang,
            format: "text",
            api_key: self.api_key.as_deref(),
        };
        let mut last_error = String::new();
        for attempt in 0..=self.max_retries {
            if attempt > 0 {
                std::thread::sleep(self.backoff * 2u32.pow(attempt - 1));
            }
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err(e) => last_error = e,
            }
        }
        Err(Error::Translation {
            provider: self.name().to_string(),
            message: last_error,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationFailure {
    pub instance_id: String,
    pub lang: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BackTranslation {
    pub instances: Vec<LabeledInstance>,
    pub failures: Vec<TranslationFailure>,
}

/// Round-trips `instance` through each pivot language (in language-code
/// order). Paraphrases whose tokens match the original or an earlier
/// paraphrase are dropped. New ids are `<id>-bt-<lang>`.
pub fn back_translate(
    instance: &LabeledInstance,
    provider: &dyn TranslationProvider,
    langs: &[String],
) -> BackTranslation {
    let mut langs: Vec<&String> = langs.iter().collect();
    langs.sort();
    langs.dedup();

    let mut seen = vec![tokenize(&instance.text)];
    let mut out = BackTranslation::default();
    for lang in langs {
        let round_trip = provider
            .translate(&instance.text, SOURCE_LANG, lang)
            .and_then(|pivot| provider.translate(&pivot, lang, SOURCE_LANG));
        match round_trip {
            Ok(text) => {
                let tokens = tokenize(&text);
                if tokens.is_empty() || seen.contains(&tokens) {
                    continue;
                }
                seen.push(tokens);
                out.instances.push(LabeledInstance {
                    instance_id: format!("{}-bt-{lang}", instance.instance_id),
                    text,
                    target: instance.target.clone(),
                });
            }
            Err(e) => out.failures.push(TranslationFailure {
                instance_id: instance.instance_id.clone(),
                lang: lang.clone(),
                message: e.to_string(),
            }),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentConfig {
    pub pivot_langs: Vec<String>,
    /// Instances whose mass on the least popular fonts exceeds this are
    /// back-translated.
    pub rarity_threshold: f64,
    pub oversample_cap: usize,
    pub undersample_count: usize,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            pivot_langs: ["de", "fr", "es", "ja"].map(String::from).to_vec(),
            rarity_threshold: 0.3,
            oversample_cap: 170,
            undersample_count: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rebalanced {
    /// Surviving originals in input order, followed by new instances.
    pub instances: Vec<LabeledInstance>,
    pub added: usize,
    pub removed: Vec<String>,
    pub rare_fonts: Vec<usize>,
    pub popular_font: usize,
    pub failures: Vec<TranslationFailure>,
    pub warnings: Vec<String>,
}

/// Mass on the given fonts.
pub fn rarity_score(instance: &LabeledInstance, rare_fonts: &[usize]) -> f64 {
    rare_fonts.iter().map(|&f| instance.target.get(f)).sum()
}

/// Oversamples rare-font instances by back-translation, then removes the
/// originals with the most mass on the most popular font.
pub fn rebalance(
    train: &[LabeledInstance],
    config: &AugmentConfig,
    provider: &dyn TranslationProvider,
) -> Result<Rebalanced> {
    if config.pivot_langs.is_empty() {
        return Err(Error::InvalidArgument("at least one pivot language is required".into()));
    }
    let popularity = average_distribution(train)?;
    let font_count = popularity.len();
    let mut by_popularity: Vec<usize> = (0..font_count).collect();
    by_popularity.sort_by(|&a, &b| popularity.get(a).total_cmp(&popularity.get(b)).then(a.cmp(&b)));
    let rare_fonts: Vec<usize> = by_popularity[..font_count / 3].to_vec();
    let popular_font = popularity.argmax();
    let mut warnings = Vec::new();

    let mut candidates: Vec<(f64, &LabeledInstance)> = train
        .iter()
        .map(|i| (rarity_score(i, &rare_fonts), i))
        .filter(|(score, _)| *score > config.rarity_threshold)
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.instance_id.cmp(&b.1.instance_id)));

    let mut added = Vec::new();
    let mut failures = Vec::new();
    for (_, instance) in candidates {
        if added.len() >= config.oversample_cap {
            break;
        }
        let bt = back_translate(instance, provider, &config.pivot_langs);
        failures.extend(bt.failures);
        let room = config.oversample_cap - added.len();
        added.extend(bt.instances.into_iter().take(room));
    }
    if added.len() < config.oversample_cap && config.oversample_cap > 0 {
        warnings.push(format!(
            "oversample cap {} not reached: only {} distinct back-translations available",
            config.oversample_cap,
            added.len()
        ));
    }

    let mut remove_count = config.undersample_count;
    if remove_count > train.len() {
        warnings.push(format!(
            "undersample count {remove_count} exceeds training size {}; clamped",
            train.len()
        ));
        remove_count = train.len();
    }
    let mut by_mass: Vec<&LabeledInstance> = train.iter().collect();
    by_mass.sort_by(|a, b| {
        b.target
            .get(popular_font)
            .total_cmp(&a.target.get(popular_font))
            .then_with(|| a.instance_id.cmp(&b.instance_id))
    });
    let removed: Vec<String> = by_mass[..remove_count].iter().map(|i| i.instance_id.clone()).collect();
    let removed_set: std::collections::HashSet<&str> = removed.iter().map(String::as_str).collect();

    let added_count = added.len();
    let instances = train
        .iter()
        .filter(|i| !removed_set.contains(i.instance_id.as_str()))
        .cloned()
        .chain(added)
        .collect();
    Ok(Rebalanced {
        instances,
        added: added_count,
        removed,
        rare_fonts,
        popular_font,
        failures,
        warnings,
    })
}
