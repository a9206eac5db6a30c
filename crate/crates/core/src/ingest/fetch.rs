//! Rate-limited, cached retrieval of EDGAR documents.
//!
//! Network access goes through the [`Transport`] trait and time through the
//! [`Clock`] trait so both can be replaced in tests. Every request, including
//! retries, takes a slot from one shared [`RateLimiter`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use log::{debug, warn};

use super::{FilingRecord, IngestError, RawFiling};

pub const EDGAR_ARCHIVES_URL: &str = "https://www.sec.gov/Archives/";
pub const DEFAULT_RATE_LIMIT: f64 = 10.0;
pub const MAX_ATTEMPTS: u32 = 3;
const BASE_BACKOFF: Duration = Duration::from_millis(500);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

pub trait Transport: Send + Sync {
    /// Performs one GET. `Err` means the request never produced a status.
    fn get(&self, url: &str, user_agent: &str) -> Result<HttpResponse, String>;
}

pub trait Clock: Send + Sync {
    /// Monotonic time since an arbitrary origin.
    fn now(&self) -> Duration;
    fn sleep(&self, duration: Duration);
}

#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        Self {
            origin: Instant::now(),
        }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// Blocking HTTPS transport.
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self, IngestError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| IngestError::TransportError {
                attempts: 0,
                message: e.to_string(),
            })?;
        Ok(Self { client })
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str, user_agent: &str) -> Result<HttpResponse, String> {
        let resp = self
            .client
            .get(url)
            .header(reqwest::header::USER_AGENT, user_agent)
            .send()
            .map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let bytes = resp.bytes().map_err(|e| e.to_string())?;
        Ok(HttpResponse {
            status,
            body: String::from_utf8_lossy(&bytes).into_owned(),
        })
    }
}

/// Single shared token source: consecutive grants are spaced by at least
/// `1 / requests_per_second`.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next_slot: Mutex<Option<Duration>>,
}

impl RateLimiter {
    pub fn new(requests_per_second: f64) -> Result<Self, IngestError> {
        if !(requests_per_second.is_finite() && requests_per_second > 0.0) {
            return Err(IngestError::InvalidArgument(format!(
                "rate_limit must be > 0, got {requests_per_second}"
            )));
        }
        Ok(Self {
            interval: Duration::from_secs_f64(1.0 / requests_per_second),
            next_slot: Mutex::new(None),
        })
    }

    pub fn interval(&self) -> Duration {
        self.interval
    }

    /// Blocks on `clock` until the caller may issue a request.
    pub fn acquire(&self, clock: &dyn Clock) {
        let wait = {
            let mut next = self.next_slot.lock().expect("rate limiter poisoned");
            let now = clock.now();
            let slot = match *next {
                Some(n) if n > now => n,
                _ => now,
            };
            *next = Some(slot + self.interval);
            slot - now
        };
        if !wait.is_zero() {
            clock.sleep(wait);
        }
    }
}

pub struct Fetcher<T: Transport, C: Clock = SystemClock> {
    transport: T,
    clock: C,
    limiter: RateLimiter,
    user_agent: String,
    cache_dir: PathBuf,
    base_url: String,
}

impl<T: Transport, C: Clock> Fetcher<T, C> {
    pub fn new(
        transport: T,
        clock: C,
        cache_dir: impl Into<PathBuf>,
        user_agent: impl Into<String>,
        rate_limit: f64,
    ) -> Result<Self, IngestError> {
        Ok(Self {
            transport,
            clock,
            limiter: RateLimiter::new(rate_limit)?,
            user_agent: user_agent.into(),
            cache_dir: cache_dir.into(),
            base_url: EDGAR_ARCHIVES_URL.to_string(),
        })
    }

    pub fn with_base_url(mut self, base_url: impl Into<String>) -> Self {
        self.base_url = base_url.into();
        self
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn clock(&self) -> &C {
        &self.clock
    }

    /// `cache_dir/raw/<cik>/<accession>.txt`
    pub fn cache_path(&self, record: &FilingRecord) -> PathBuf {
        raw_cache_path(&self.cache_dir, record)
    }

    /// Returns the cached body when present, otherwise downloads and caches it.
    pub fn fetch_filing(&self, record: &FilingRecord) -> Result<RawFiling, IngestError> {
        let path = self.cache_path(record);
        if path.is_file() {
            debug!("cache hit {}", path.display());
            let body = fs::read_to_string(&path)?;
            if body.is_empty() {
                return Err(IngestError::EmptyBody(record.path.clone()));
            }
            return Ok(RawFiling::new(record.clone(), body));
        }
        let url = format!("{}{}", self.base_url, record.path);
        let body = self.get_with_retry(&url)?;
        if body.is_empty() {
            return Err(IngestError::EmptyBody(record.path.clone()));
        }
        write_atomic(&path, body.as_bytes())?;
        Ok(RawFiling::new(record.clone(), body))
    }

    /// Downloads `edgar/full-index/<year>/QTR<quarter>/master.idx`, caching it
    /// under `cache_dir/index/`.
    pub fn fetch_master_index(&self, year: i32, quarter: u8) -> Result<String, IngestError> {
        if !(1..=4).contains(&quarter) {
            return Err(IngestError::InvalidArgument(format!("quarter {quarter}")));
        }
        let path = self
            .cache_dir
            .join("index")
            .join(format!("master-{year}-Q{quarter}.idx"));
        if path.is_file() {
            return Ok(fs::read_to_string(path)?);
        }
        let url = format!(
            "{}edgar/full-index/{year}/QTR{quarter}/master.idx",
            self.base_url
        );
        let body = self.get_with_retry(&url)?;
        write_atomic(&path, body.as_bytes())?;
        Ok(body)
    }

    fn get_with_retry(&self, url: &str) -> Result<String, IngestError> {
        let mut last_error = String::new();
        for attempt in 1..=MAX_ATTEMPTS {
            if attempt > 1 {
                let backoff = BASE_BACKOFF * 2u32.pow(attempt - 2);
                warn!("retrying {url} in {backoff:?} (attempt {attempt}): {last_error}");
                self.clock.sleep(backoff);
            }
            self.limiter.acquire(&self.clock);
            match self.transport.get(url, &self.user_agent) {
                Ok(resp) => match resp.status {
                    200..=299 => return Ok(resp.body),
                    404 => return Err(IngestError::NotFound(url.to_string())),
                    429 | 500..=599 => last_error = format!("HTTP {}", resp.status),
                    status => {
                        return Err(IngestError::HttpStatus {
                            status,
                            url: url.to_string(),
                        })
                    }
                },
                Err(e) => last_error = e,
            }
        }
        Err(IngestError::TransportError {
            attempts: MAX_ATTEMPTS,
            message: last_error,
        })
    }
}

pub(crate) fn raw_cache_path(cache_dir: &Path, record: &FilingRecord) -> PathBuf {
    cache_dir
        .join("raw")
        .join(record.cik.to_string())
        .join(format!("{}.txt", record.accession()))
}

/// Write-temp-then-rename so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{file_name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
