//! Flat `key = value` configuration. One pair per line, `#` starts a comment,
//! blank lines are ignored, and keys outside the documented set for the
//! chosen element kind are rejected.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{cfg, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Loop,
    Comb,
    Sphere,
    CustomL,
}

impl Kind {
    /// Numeric element parameters, each usable as a sweep axis.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Kind::Loop => &["l1", "l2", "alpha1", "alpha2", "flux"],
            Kind::Comb => &["b", "c", "d", "tooth_len", "v0"],
            Kind::Sphere => &["rho", "c_g"],
            Kind::CustomL => &["l11", "l12", "l21", "l22"],
        }
    }

    fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Kind::Loop => &[("flux", 0.0)],
            Kind::Comb => &[("v0", 0.0), ("tooth_len", 1.0)],
            Kind::Sphere => &[("c_g", 0.0)],
            Kind::CustomL => &[],
        }
    }

    /// Non-axis options specific to the kind.
    fn extra_keys(self) -> &'static [&'static str] {
        match self {
            Kind::Loop | Kind::CustomL => &[],
            Kind::Comb => &["pole_eps", "zones", "depth", "re_floor", "re_min", "re_max", "im_min", "im_max", "classify"],
            Kind::Sphere => &["l_max", "average", "dprime_k"],
        }
    }
}

impl FromStr for Kind {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "loop" => Ok(Kind::Loop),
            "comb" => Ok(Kind::Comb),
            "sphere" => Ok(Kind::Sphere),
            "custom-L" | "custom-l" => Ok(Kind::CustomL),
            _ => cfg(format!("unknown kind `{s}` (loop | comb | sphere | custom-L)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.point(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub kind: Kind,
    /// element parameters by name (see [`Kind::params`])
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub ell: f64,
    pub k: Grid,
    pub axis: Option<(String, Grid)>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub unitarity_tol: f64,
    pub series_tol: f64,
    pub root_tol: f64,
    /// everything else, still as text, already checked against the key set
    pub extra: BTreeMap<String, String>,
}

const COMMON: &[&str] = &[
    "kind", "n", "ell", "k_min", "k_max", "k_steps", "axis", "axis_min", "axis_max", "axis_steps", "output", "format",
    "unitarity_tol", "series_tol", "root_tol",
];

fn num<T: FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse().or_else(|_| cfg(format!("`{key}`: cannot parse `{v}`")))
}

fn finite(key: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        cfg(format!("`{key}` must be finite"))
    }
}

pub fn parse_pairs(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return cfg(format!("line {}: expected `key = value`", i + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return cfg(format!("line {}: empty key or value", i + 1));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return cfg(format!("line {}: duplicate key `{k}`", i + 1));
        }
    }
    Ok(out)
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Config> {
        let mut kv = parse_pairs(text)?;
        let Some(kind) = kv.get("kind") else { return cfg("missing `kind`") };
        let kind: Kind = kind.parse()?;
        for key in kv.keys() {
            if !(COMMON.contains(&key.as_str()) || kind.params().contains(&key.as_str()) || kind.extra_keys().contains(&key.as_str())) {
                return cfg(format!("unknown key `{key}` for this element kind"));
            }
        }
        let mut take = |k: &str| kv.remove(k);
        let req_f = |v: Option<String>, k: &str| -> CliResult<f64> {
            match v {
                Some(v) => finite(k, num(k, &v)?),
                None => cfg(format!("missing `{k}`")),
            }
        };

        let k = Grid { min: req_f(take("k_min"), "k_min")?, max: req_f(take("k_max"), "k_max")?, steps: take("k_steps").map(|v| num("k_steps", &v)).transpose()?.unwrap_or(0) };
        if !(k.min > 0.0) {
            return cfg("`k_min` must be positive");
        }
        if k.steps < 2 || k.max <= k.min {
            return cfg("k range needs `k_steps` ≥ 2 and `k_max` > `k_min`");
        }

        let axis = match take("axis") {
            None => None,
            Some(name) => {
                if !kind.params().contains(&name.as_str()) {
                    return cfg(format!("axis `{name}` is not a parameter of this element kind"));
                }
                let g = Grid {
                    min: req_f(take("axis_min"), "axis_min")?,
                    max: req_f(take("axis_max"), "axis_max")?,
                    steps: take("axis_steps").map(|v| num("axis_steps", &v)).transpose()?.unwrap_or(0),
                };
                if g.steps < 2 || g.max <= g.min {
                    return cfg("axis range needs `axis_steps` ≥ 2 and `axis_max` > `axis_min`");
                }
                Some((name, g))
            }
        };
        for k in ["axis_min", "axis_max", "axis_steps"] {
            if axis.is_none() && take(k).is_some() {
                return cfg(format!("`{k}` given without `axis`"));
            }
        }

        let mut params = BTreeMap::new();
        for &(p, d) in kind.defaults() {
            params.insert(p.to_string(), d);
        }
        for &p in kind.params() {
            if let Some(v) = take(p) {
                params.insert(p.to_string(), finite(p, num(p, &v)?)?);
            }
        }
        for &p in kind.params() {
            let swept = axis.as_ref().is_some_and(|(a, _)| a == p);
            if !params.contains_key(p) {
                if !swept {
                    return cfg(format!("missing element parameter `{p}`"));
                }
                params.insert(p.to_string(), f64::NAN);
            }
        }

        let n = take("n").map(|v| num::<usize>("n", &v)).transpose()?.unwrap_or(1);
        if n == 0 {
            return cfg("`n` must be at least 1");
        }
        let ell = take("ell").map(|v| num("ell", &v).and_then(|x| finite("ell", x))).transpose()?.unwrap_or(1.0);
        if ell < 0.0 {
            return cfg("`ell` must be non-negative");
        }
        let format = match take("format").as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(f) => return cfg(format!("unknown format `{f}` (csv | json)")),
        };
        let tol = |v: Option<String>, k: &str, d: f64| -> CliResult<f64> {
            let x = v.map(|v| num(k, &v)).transpose()?.unwrap_or(d);
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                cfg(format!("`{k}` must be positive"))
            }
        };
        let unitarity_tol = tol(take("unitarity_tol"), "unitarity_tol", 1e-9)?;
        let series_tol = tol(take("series_tol"), "series_tol", 1e-9)?;
        let root_tol = tol(take("root_tol"), "root_tol", 1e-7)?;
        let output = take("output").map(PathBuf::from);
        take("kind");

        let cfg = Config { kind, params, n, ell, k, axis, output, format, unitarity_tol, series_tol, root_tol, extra: kv };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        match self.kind {
            Kind::Sphere => {
                if self.params["rho"] <= 0.0 {
                    return cfg("`rho` must be positive");
                }
                if let Some((_, g)) = self.axis.as_ref().filter(|(a, _)| a == "rho") {
                    if g.min <= 0.0 {
                        return cfg("`rho` axis must stay positive");
                    }
                }
                if self.opt_usize("l_max")?.is_some_and(|l| l < 10) {
                    return cfg("`l_max` must be at least 10");
                }
                self.opt_bool("average")?;
                self.opt_f64("dprime_k")?;
            }
            Kind::Comb => {
                if self.params["tooth_len"] <= 0.0 {
                    return cfg("`tooth_len` must be positive");
                }
                for k in ["pole_eps", "depth", "re_floor", "re_min", "re_max", "im_min", "im_max"] {
                    self.opt_f64(k)?;
                }
                self.opt_usize("zones")?;
                self.opt_bool("classify")?;
            }
            Kind::CustomL => {
                let p = &self.params;
                let det = p["l11"] * p["l22"] - p["l12"] * p["l21"];
                if (det - 1.0).abs() > 1e-12 {
                    return cfg(format!("custom L must be unimodular (det = {det})"));
                }
            }
            Kind::Loop => {}
        }
        Ok(())
    }

    pub fn opt_f64(&self, k: &str) -> CliResult<Option<f64>> {
        self.extra.get(k).map(|v| num(k, v).and_then(|x| finite(k, x))).transpose()
    }

    pub fn opt_usize(&self, k: &str) -> CliResult<Option<usize>> {
        self.extra.get(k).map(|v| num(k, v)).transpose()
    }

    pub fn opt_bool(&self, k: &str) -> CliResult<Option<bool>> {
        self.extra
            .get(k)
            .map(|v| match v.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => cfg(format!("`{k}` must be true or false")),
            })
            .transpose()
    }

    /// Element parameters with the swept one set to `value`.
    pub fn params_at(&self, value: Option<f64>) -> BTreeMap<String, f64> {
        let mut p = self.params.clone();
        if let (Some((a, _)), Some(v)) = (&self.axis, value) {
            p.insert(a.clone(), v);
        }
        p
    }
}
