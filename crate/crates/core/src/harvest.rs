//! Offline and online CKAN harvesting.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use serde_json::Value;

use crate::language::LanguageTag;
use crate::record::{ckan_value_to_record, parse_ckan_package, DatasetRecord, IngestError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortalSpec {
    pub portal_id: String,
    pub api_base_url: String,
    /// Advisory only; detection decides the record language.
    pub expected_language: LanguageTag,
    pub dataset_count_hint: usize,
}

impl PortalSpec {
    pub fn new(portal_id: impl Into<String>, api_base_url: impl Into<String>) -> Self {
        PortalSpec {
            portal_id: portal_id.into(),
            api_base_url: api_base_url.into(),
            expected_language: LanguageTag::Und,
            dataset_count_hint: 0,
        }
    }
}

/// The seven portals of the reference deployment with their dataset counts.
pub fn reference_portals() -> Vec<PortalSpec> {
    [
        ("dati.trentino.it", "https://dati.trentino.it", LanguageTag::It, 5285),
        ("data.gov.ie", "https://data.gov.ie", LanguageTag::En, 4796),
        ("datamx.io", "https://datamx.io", LanguageTag::Es, 2767),
        ("data.gv.at", "https://www.data.gv.at/katalog", LanguageTag::De, 2323),
        ("dados.gov.br", "https://dados.gov.br", LanguageTag::Pt, 2061),
        ("beta.avoindata.fi", "https://beta.avoindata.fi/data", LanguageTag::Fi, 820),
        ("www.nosdonnees.fr", "https://www.nosdonnees.fr", LanguageTag::Fr, 290),
    ]
    .into_iter()
    .map(|(id, url, lang, n)| PortalSpec {
        portal_id: id.to_string(),
        api_base_url: url.to_string(),
        expected_language: lang,
        dataset_count_hint: n,
    })
    .collect()
}

/// A package that was not turned into a record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip {
    pub portal_id: String,
    /// File name (offline) or `offset=<n>` (online).
    pub location: String,
    pub reason: String,
}

impl fmt::Display for Skip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SKIP {} {} {}", self.portal_id, self.location, self.reason)
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    /// Directory of CKAN package JSON files, read in file-name order.
    Offline(PathBuf),
    /// CKAN API base; `None` uses the portal's `api_base_url`.
    Online(Option<String>),
}

#[derive(Clone, Copy, Debug)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { attempts: 3, initial_backoff: Duration::from_millis(500) }
    }
}

#[derive(Clone, Debug)]
pub struct HarvestOptions {
    pub page_size: usize,
    pub retry: RetryPolicy,
    pub timeout: Duration,
}

impl Default for HarvestOptions {
    fn default() -> Self {
        HarvestOptions { page_size: 100, retry: RetryPolicy::default(), timeout: Duration::from_secs(30) }
    }
}

/// Harvests one portal, handing each record to `on_record` as soon as it is
/// parsed. Malformed packages and repeated dataset ids go to `on_skip`.
/// Returns the number of records emitted.
pub fn harvest_portal(
    spec: &PortalSpec,
    source: &Source,
    opts: &HarvestOptions,
    mut on_record: impl FnMut(DatasetRecord),
    mut on_skip: impl FnMut(Skip),
) -> Result<usize, IngestError> {
    let mut seen = HashSet::new();
    let mut emitted = 0usize;
    let mut accept = |res: Result<DatasetRecord, IngestError>, location: String| match res {
        Ok(rec) => {
            if seen.insert(rec.dataset_id.clone()) {
                emitted += 1;
                on_record(rec);
            } else {
                let reason = format!("duplicate dataset_id {}", rec.dataset_id);
                on_skip(Skip { portal_id: spec.portal_id.clone(), location, reason });
            }
        }
        Err(e) => on_skip(Skip { portal_id: spec.portal_id.clone(), location, reason: e.to_string() }),
    };
    match source {
        Source::Offline(dir) => {
            for path in json_files(dir)? {
                let raw = fs::read_to_string(&path)?;
                let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                accept(parse_ckan_package(&raw, &spec.portal_id), name);
            }
        }
        Source::Online(base) => {
            let base = base.as_deref().unwrap_or(&spec.api_base_url).trim_end_matches('/');
            let agent: ureq::Agent = ureq::Agent::config_builder()
                .timeout_global(Some(opts.timeout))
                .http_status_as_error(false)
                .build()
                .into();
            let page_size = opts.page_size.max(1);
            let mut start = 0usize;
            loop {
                let url = format!("{base}/api/3/action/package_search?rows={page_size}&start={start}");
                let page = fetch_json(&agent, &url, &opts.retry)?;
                let result = page
                    .get("result")
                    .ok_or_else(|| IngestError::Network(format!("{url}: response has no result")))?;
                let count = result.get("count").and_then(Value::as_u64).unwrap_or(0) as usize;
                let results = result.get("results").and_then(Value::as_array).cloned().unwrap_or_default();
                if results.is_empty() {
                    break;
                }
                for (i, pkg) in results.iter().enumerate() {
                    accept(ckan_value_to_record(pkg, &spec.portal_id), format!("offset={}", start + i));
                }
                start += results.len();
                if start >= count {
                    break;
                }
            }
        }
    }
    Ok(emitted)
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, IngestError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn fetch_json(agent: &ureq::Agent, url: &str, retry: &RetryPolicy) -> Result<Value, IngestError> {
    let attempts = retry.attempts.max(1);
    let mut backoff = retry.initial_backoff;
    let mut last = String::new();
    for attempt in 1..=attempts {
        match agent.get(url).call() {
            Ok(mut resp) => {
                let status = resp.status().as_u16();
                if status == 200 {
                    let body = resp
                        .body_mut()
                        .with_config()
                        .limit(256 * 1024 * 1024)
                        .read_to_string()
                        .map_err(|e| IngestError::Network(format!("{url}: {e}")))?;
                    return serde_json::from_str(&body)
                        .map_err(|e| IngestError::Network(format!("{url}: invalid JSON page: {e}")));
                }
                last = format!("HTTP {status}");
                if status != 429 && status < 500 {
                    break;
                }
            }
            Err(e) => last = e.to_string(),
        }
        if attempt < attempts {
            log::warn!("GET {url} failed ({last}); retrying in {backoff:?}");
            thread::sleep(backoff);
            backoff *= 2;
        }
    }
    Err(IngestError::Network(format!("{url}: {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_portal_counts() {
        let portals = reference_portals();
        let counts: Vec<usize> = portals.iter().map(|p| p.dataset_count_hint).collect();
        assert_eq!(counts, vec![5285, 4796, 2767, 2323, 2061, 820, 290]);
        assert_eq!(counts.iter().sum::<usize>(), 18342);
    }

    #[test]
    fn skip_line_format() {
        let s = Skip { portal_id: "p".into(), location: "f.json".into(), reason: "bad".into() };
        assert_eq!(s.to_string(), "SKIP p f.json bad");
    }
}
