//! Configuration, verification suites and report emission behind the CLI.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circfun::{extension_norm6_direct, extension_norm6_spectral, random_test_function, TestKind, DENSE_DEGREE};
use crate::circlegeom;
use crate::error::{Error, Result};
use crate::forms;
use crate::oscint::{IntegralEngine, QuadConfig};
use crate::report::{digest_json, VerificationRecord, VerificationReport};
use crate::seqtab::SequenceCache;

/// Environment variable naming a directory for the integral cache.
pub const CACHE_DIR_ENV: &str = "CIRCLEXT_CACHE_DIR";
/// File name used inside [`CACHE_DIR_ENV`].
pub const CACHE_FILE_NAME: &str = "sixfold-cache.jsonl";

/// Resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub split_radius: f64,
    pub head_tol: f64,
    pub tail_order: usize,
    /// Sampling grid for rearrangements and grid interpolants.
    pub grid_size: usize,
    pub cache_path: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let q = QuadConfig::default();
        Config { split_radius: q.split_radius, head_tol: q.head_tol, tail_order: q.tail_order, grid_size: 1024, cache_path: None }
    }
}

/// Partial settings from a config file or command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub split_radius: Option<f64>,
    pub head_tol: Option<f64>,
    pub tail_order: Option<usize>,
    pub grid_size: Option<usize>,
    pub cache_path: Option<PathBuf>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse { line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0), message: e.message().to_string() })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    fn apply(&self, c: &mut Config) {
        if let Some(v) = self.split_radius {
            c.split_radius = v;
        }
        if let Some(v) = self.head_tol {
            c.head_tol = v;
        }
        if let Some(v) = self.tail_order {
            c.tail_order = v;
        }
        if let Some(v) = self.grid_size {
            c.grid_size = v;
        }
        if let Some(v) = &self.cache_path {
            c.cache_path = Some(v.clone());
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl Config {
    /// Flag over environment (cache only) over file over default.
    pub fn resolve(file: Option<&ConfigLayer>, env_cache_dir: Option<PathBuf>, flags: &ConfigLayer) -> Result<Config> {
        let mut c = Config::default();
        if let Some(f) = file {
            f.apply(&mut c);
        }
        if let Some(dir) = env_cache_dir {
            c.cache_path = Some(dir.join(CACHE_FILE_NAME));
        }
        flags.apply(&mut c);
        c.quad().validate()?;
        if !c.grid_size.is_power_of_two() || c.grid_size < 64 {
            return Err(Error::InvalidInput(format!("grid_size must be a power of two >= 64, got {}", c.grid_size)));
        }
        Ok(c)
    }

    /// [`Config::resolve`] reading the file and [`CACHE_DIR_ENV`].
    pub fn load(file: Option<&Path>, flags: &ConfigLayer) -> Result<Config> {
        let layer = file.map(ConfigLayer::read).transpose()?;
        let env = std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        Self::resolve(layer.as_ref(), env, flags)
    }

    pub fn quad(&self) -> QuadConfig {
        QuadConfig { split_radius: self.split_radius, head_tol: self.head_tol, tail_order: self.tail_order, ..QuadConfig::default() }
    }

    /// Digest of the settings that affect computed values.
    pub fn digest(&self) -> String {
        digest_json(&json!({
            "split_radius": self.split_radius,
            "head_tol": self.head_tol,
            "tail_order": self.tail_order,
            "grid_size": self.grid_size,
        }))
    }

    /// Engine with the on-disk cache loaded when one is configured.
    pub fn sequences(&self) -> Result<SequenceCache> {
        let engine = IntegralEngine::new(self.quad())?;
        if let Some(p) = &self.cache_path {
            if p.exists() {
                engine.load(p)?;
            }
        }
        Ok(SequenceCache::new(std::sync::Arc::new(engine)))
    }

    /// Writes the engine cache back when a path is configured.
    pub fn persist(&self, seq: &SequenceCache) -> Result<()> {
        if let Some(p) = &self.cache_path {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            seq.engine().save(p)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Tables,
    Asymptotics,
    Crux,
    Cn,
    Thm7,
    LocalCs,
    Geometry,
    Budget,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] =
        [Suite::Tables, Suite::Asymptotics, Suite::Crux, Suite::Cn, Suite::Thm7, Suite::LocalCs, Suite::Geometry, Suite::Budget];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Asymptotics => "asymptotics",
            Suite::Crux => "crux",
            Suite::Cn => "cn",
            Suite::Thm7 => "thm7",
            Suite::LocalCs => "local-cs",
            Suite::Geometry => "geometry",
            Suite::Budget => "budget",
            Suite::All => "all",
        }
    }

    /// Random instances drawn when no count is given.
    pub fn default_seeds(self) -> usize {
        match self {
            Suite::Thm7 => 1000,
            Suite::LocalCs => 100,
            Suite::Budget => 200,
            Suite::Geometry => 20,
            _ => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain(std::iter::once(Suite::All))
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}'; expected one of tables, asymptotics, crux, cn, thm7, local-cs, geometry, budget, all")))
    }
}

/// Largest `n` for the crux sweep.
pub const CRUX_N_MAX: usize = 400;
/// Range of the `αₙ`, `βₙ` and `cₙ` sweeps.
pub const SWEEP_N_MAX: usize = 200;
/// Range of the `γ`, `δ` sweeps.
pub const PAIR_N_MAX: usize = 100;
/// Quadratic-model step sizes of the local suite.
pub const LOCAL_EPS: [f64; 3] = [0.01, 0.02, 0.05];
/// Radial cut of the direct `L⁶` route.
pub const DIRECT_RADIAL_CUT: f64 = 2000.0;
/// Relative agreement required between the two `L⁶` routes.
pub const DUAL_ROUTE_TOL: f64 = 1e-4;
/// Number of Hardy-inequality sequences in the budget suite.
pub const HARDY_SEQUENCES: usize = 100;

/// How many random instances a suite draws and from which seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seeds: Option<usize>,
    pub base_seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seeds: None, base_seed: 1 }
    }
}

impl SuiteOptions {
    fn count(&self, suite: Suite) -> usize {
        self.seeds.unwrap_or_else(|| suite.default_seeds())
    }

    fn seed(&self, i: usize) -> u64 {
        self.base_seed.wrapping_add(i as u64)
    }
}

fn seeded<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

pub fn tables_suite(seq: &SequenceCache) -> Result<Vec<VerificationRecord>> {
    let mut out = seq.table_checks()?;
    out.push(seq.footnote_check()?);
    Ok(out)
}

pub fn asymptotics_suite(seq: &SequenceCache) -> Result<Vec<VerificationRecord>> {
    let ns: Vec<usize> = (0..=SWEEP_N_MAX).collect();
    seq.prefetch_alpha(&ns)?;
    let mut pairs = Vec::new();
    for n in (2..=PAIR_N_MAX).step_by(2) {
        for m in (2..=n).step_by(2) {
            pairs.push((n as i64, m as i64));
        }
    }
    seq.prefetch_gamma(&pairs)?;
    let mut out = Vec::new();
    for n in 7..=SWEEP_N_MAX {
        out.push(seq.alpha_asymptotic_check(n)?);
    }
    for n in (2..=SWEEP_N_MAX).step_by(2) {
        out.push(seq.beta_corollary_check(n)?);
    }
    for &(n, m) in &pairs {
        let (n, m) = (n as usize, m as usize);
        if (m <= 4 && n >= 6) || (m >= 6 && n >= m) {
            out.push(seq.gamma_asymptotic_check(n, m)?);
        }
        out.push(seq.delta_corollary_check(n, m)?);
    }
    Ok(out)
}

pub fn crux_suite(seq: &SequenceCache) -> Result<Vec<VerificationRecord>> {
    Ok(vec![seq.footnote_check()?, forms::crux_check(seq, CRUX_N_MAX)?])
}

/// `cₙ` for `n ≤ 200` plus a record holding the smallest value.
pub fn cn_suite(seq: &SequenceCache) -> Result<Vec<VerificationRecord>> {
    let mut out = forms::cn_sweep(seq, SWEEP_N_MAX)?;
    let (n, v) = out
        .iter()
        .map(|r| (r.inputs["n"].as_i64().unwrap_or(0), r.values["c_n"]))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let err = forms::c_n(seq, n)?.abs_error;
    out.push(
        VerificationRecord::new("cn-minimum", "eta = min c_n over the sweep", json!({ "n_max": SWEEP_N_MAX }))
            .with_value("eta", v)
            .with_value("argmin", n as f64)
            .decide(v, err),
    );
    Ok(out)
}

fn thm7_degree(i: usize) -> usize {
    2 + 2 * (i % 5)
}

pub fn thm7_suite(seq: &SequenceCache, opts: SuiteOptions) -> Result<Vec<VerificationRecord>> {
    let n = opts.count(Suite::Thm7);
    let engine = seq.engine();
    if n > 0 {
        engine.dense(10)?;
    }
    seeded(n, |i| {
        let h = random_test_function(thm7_degree(i), opts.seed(i), TestKind::NonnegAntipodal)?;
        Ok(forms::thm7_check(engine, &h)?.with_value("seed", opts.seed(i) as f64))
    })
}

pub fn local_suite(seq: &SequenceCache, opts: SuiteOptions) -> Result<Vec<VerificationRecord>> {
    let n = opts.count(Suite::LocalCs);
    if n > 0 {
        seq.engine().dense(DENSE_DEGREE.min(16))?;
    }
    seeded(n, |i| {
        let g = random_test_function(1 + i % 8, opts.seed(i), TestKind::RealMeanZero)?;
        Ok(forms::local_extremizer_check(seq, &g, &LOCAL_EPS)?.with_value("seed", opts.seed(i) as f64))
    })
}

/// Spectral against direct `‖f̂σ‖₆⁶`.
pub fn dual_route_check(engine: &IntegralEngine, f: &crate::circfun::TrigPoly) -> Result<VerificationRecord> {
    let s = extension_norm6_spectral(engine, f)?;
    let d = extension_norm6_direct(f, DIRECT_RADIAL_CUT)?;
    let rel = (s.value - d.value).abs() / s.value.abs().max(f64::MIN_POSITIVE);
    Ok(VerificationRecord::new(
        "dual-route",
        "spectral and direct-quadrature L6 norms of the extension agree",
        json!({ "coefficients": crate::circfun::write_coefficients(f), "radial_cut": DIRECT_RADIAL_CUT }),
    )
    .with_value("spectral", s.value)
    .with_value("direct", d.value)
    .with_value("direct_error", d.abs_error)
    .with_value("relative_difference", rel)
    .decide(DUAL_ROUTE_TOL - rel, 0.0))
}

/// Convolution checks, the geometric identity, the `E` relation and the dual
/// `L⁶` route (the latter on `2.5×` as many functions).
pub fn geometry_suite(seq: &SequenceCache, opts: SuiteOptions) -> Result<Vec<VerificationRecord>> {
    let n = opts.count(Suite::Geometry);
    let engine = seq.engine();
    let mut out = vec![circlegeom::origin_check()?, circlegeom::log_ratio_check(&[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])?, circlegeom::mass_check()];
    if n > 0 {
        engine.dense(16)?;
    }
    out.extend(seeded(n, |i| {
        let f = random_test_function(2 + 2 * (i % 4), opts.seed(i), TestKind::EvenReal)?;
        forms::geometric_identity_check(engine, &f)
    })?);
    out.extend(seeded(n, |i| {
        let g = random_test_function(1 + i % 6, opts.seed(i), TestKind::RealMeanZero)?;
        forms::e_relation_check(engine, &g)
    })?);
    out.extend(seeded(n * 5 / 2, |i| {
        let f = random_test_function(1 + i % 8, opts.seed(i), TestKind::Real)?;
        dual_route_check(engine, &f)
    })?);
    Ok(out)
}

/// Hardy ratio of a random positive sequence.
pub fn hardy_check(seed: u64) -> VerificationRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.random_range(1..=400);
    let decay = rng.random_range(0.0..1.5);
    let a: Vec<f64> = (0..len).map(|k| rng.random::<f64>() / (1.0 + k as f64).powf(decay)).collect();
    let ratio = forms::hardy_ratio(&a);
    VerificationRecord::new("hardy", "sum ((a_1+...+a_n)/n)^2 <= 4 sum a_n^2", json!({ "seed": seed, "length": len }))
        .with_value("ratio", ratio)
        .decide(4.0 - ratio, 0.0)
}

pub fn budget_suite(seq: &SequenceCache, opts: SuiteOptions) -> Result<Vec<VerificationRecord>> {
    let n = opts.count(Suite::Budget);
    let b = forms::bracket_constant();
    let mut out = vec![VerificationRecord::new("bracket", "[0.08 + (1+eps2) 0.486 + gamma3/4]/(1-eps1) < 0.974", json!({}))
        .with_value("bracket", b)
        .decide(forms::BRACKET_LIMIT - b, 0.0)];
    let mut pairs = Vec::new();
    for a in (2..=10).step_by(2) {
        for m in (2..=10 - a).step_by(2) {
            pairs.push((a, m));
        }
    }
    seq.delta_many(&pairs)?;
    out.extend(seeded(n, |i| {
        let h = random_test_function(4 + 2 * (i % 4), opts.seed(i), TestKind::NonnegAntipodal)?;
        Ok(forms::s_budget(seq, &h)?.record().with_value("seed", opts.seed(i) as f64))
    })?);
    out.extend((0..HARDY_SEQUENCES).map(|i| hardy_check(opts.seed(i))));
    Ok(out)
}

pub fn run_suite(seq: &SequenceCache, suite: Suite, opts: SuiteOptions) -> Result<Vec<VerificationRecord>> {
    match suite {
        Suite::Tables => tables_suite(seq),
        Suite::Asymptotics => asymptotics_suite(seq),
        Suite::Crux => crux_suite(seq),
        Suite::Cn => cn_suite(seq),
        Suite::Thm7 => thm7_suite(seq, opts),
        Suite::LocalCs => local_suite(seq, opts),
        Suite::Geometry => geometry_suite(seq, opts),
        Suite::Budget => budget_suite(seq, opts),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(seq, s, opts)?);
            }
            Ok(out)
        }
    }
}

/// Runs a suite and wraps the records with timing and the config digest.
pub fn verify(cfg: &Config, seq: &SequenceCache, suite: Suite, opts: SuiteOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let records = run_suite(seq, suite, opts)?;
    Ok(VerificationReport::new(suite.name(), records, cfg.digest(), start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = ConfigLayer::from_toml("split_radius = 300.0\ngrid_size = 2048\ncache_path = \"a.jsonl\"\n").unwrap();
        let flags = ConfigLayer { split_radius: Some(400.0), ..Default::default() };
        let c = Config::resolve(Some(&file), None, &flags).unwrap();
        assert_eq!(c.split_radius, 400.0);
        assert_eq!(c.grid_size, 2048);
        assert_eq!(c.head_tol, QuadConfig::default().head_tol);
        assert_eq!(c.cache_path, Some(PathBuf::from("a.jsonl")));
        let c = Config::resolve(Some(&file), Some(PathBuf::from("/tmp/x")), &ConfigLayer::default()).unwrap();
        assert_eq!(c.cache_path, Some(PathBuf::from("/tmp/x").join(CACHE_FILE_NAME)));
        assert_eq!(Config::resolve(None, None, &ConfigLayer::default()).unwrap(), Config::default());
    }

    #[test]
    fn bad_config() {
        let e = ConfigLayer::from_toml("split_radius = 200.0\n\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let flags = ConfigLayer { tail_order: Some(9), ..Default::default() };
        assert!(Config::resolve(None, None, &flags).is_err());
        let flags = ConfigLayer { grid_size: Some(100), ..Default::default() };
        assert!(Config::resolve(None, None, &flags).is_err());
    }

    #[test]
    fn suite_names() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!(matches!("nope".parse::<Suite>(), Err(Error::Usage(_))));
    }

    #[test]
    fn small_suites_pass_and_repeat() {
        let cfg = Config::default();
        let seq = cfg.sequences().unwrap();
        let opts = SuiteOptions { seeds: Some(4), base_seed: 9 };
        for s in [Suite::Thm7, Suite::Budget, Suite::LocalCs] {
            let a = verify(&cfg, &seq, s, opts).unwrap();
            assert!(a.all_pass(), "{:?}", a.records.iter().filter(|r| !r.pass).collect::<Vec<_>>());
            let b = verify(&cfg, &seq, s, opts).unwrap();
            assert_eq!(a.records, b.records);
        }
    }

    #[test]
    fn hardy_records() {
        for s in 0..20 {
            assert!(hardy_check(s).pass);
        }
    }
}
