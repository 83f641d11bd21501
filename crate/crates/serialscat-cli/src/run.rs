use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serialscat::loop_element::{loop_element_data, LoopParams};
use serialscat::*;

use crate::config::{Config, Kind};
use crate::error::{cfg, CliError, CliResult};
use crate::output::{Cell, Table};

fn numeric(e: serialscat::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

/// One element, fully resolved at a single axis value.
enum Element {
    Loop(LoopParams<f64>),
    Comb(CombParams64),
    Sphere(SphereParams64),
    Custom(LTransfer64),
}

impl Element {
    fn build(c: &Config, p: &BTreeMap<String, f64>) -> CliResult<Element> {
        Ok(match c.kind {
            Kind::Loop => Element::Loop(LoopParams { l1: p["l1"], l2: p["l2"], alpha1: p["alpha1"], alpha2: p["alpha2"], flux: p["flux"] }),
            Kind::Comb => {
                let mut q = CombParams64::new(p["b"], p["c"], p["d"], p["tooth_len"], c.ell);
                if p["v0"] != 0.0 {
                    q = q.with_potential(Potential::Constant(p["v0"]));
                }
                if let Some(eps) = c.opt_f64("pole_eps")? {
                    q.pole_eps = eps;
                }
                Element::Comb(q)
            }
            Kind::Sphere => {
                if !(p["rho"] > 0.0) {
                    return cfg("`rho` must be positive");
                }
                let mut q = SphereParams64::new(p["rho"]);
                q.ell = c.ell;
                q.c_g = p["c_g"];
                q.l_max = c.opt_usize("l_max")?;
                Element::Sphere(q)
            }
            Kind::CustomL => {
                let det = p["l11"] * p["l22"] - p["l12"] * p["l21"];
                if (det - 1.0).abs() > 1e-12 {
                    return Err(CliError::Numeric(format!("custom L not unimodular along the axis (det = {det})")));
                }
                Element::Custom(LTransfer64::real([[p["l11"], p["l12"]], [p["l21"], p["l22"]]]))
            }
        })
    }

    /// Bloch discriminant, `None` where the element is singular.
    fn discriminant(&self, ell: f64, k: f64) -> Option<f64> {
        match self {
            Element::Comb(p) => comb_discriminant(p, k),
            _ => self.data(k).ok().map(|(e, _)| e.discriminant(k, ell)),
        }
    }

    fn data(&self, k: f64) -> CliResult<(ElementData64, Option<f64>)> {
        match self {
            Element::Loop(p) => Ok((loop_element_data(p, k).map_err(numeric)?, None)),
            Element::Custom(l) => Ok((element_data(l, k), None)),
            Element::Sphere(p) => {
                let s = sphere_series(p, k).map_err(numeric)?;
                Ok((element_data(&sphere_transfer_from(&s, p.rho), k), Some(s.z / s.g)))
            }
            Element::Comb(_) => unreachable!("comb amplitudes come from their own closed form"),
        }
    }

    fn amplitudes(&self, c: &Config, k: f64) -> CliResult<(SerialResult64, Option<f64>)> {
        match self {
            Element::Comb(p) => {
                let a = comb_amplitudes(p, c.n, k).map_err(numeric)?;
                Ok((a.amp, Some(a.beta)))
            }
            Element::Sphere(p) => {
                let s = sphere_series(p, k).map_err(numeric)?;
                if s.tail_bound > c.series_tol {
                    return Err(CliError::Numeric(format!(
                        "series error bound {:.3e} exceeds series_tol at k = {k} (raise l_max)",
                        s.tail_bound
                    )));
                }
                let e = element_data(&sphere_transfer_from(&s, p.rho), k);
                Ok((serial_closed_form(&e, c.ell, c.n, k), Some(s.z / s.g)))
            }
            _ => {
                let (e, aux) = self.data(k)?;
                Ok((serial_closed_form(&e, c.ell, c.n, k), aux))
            }
        }
    }
}

fn pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return cfg("--threads must be at least 1");
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| CliError::Numeric(e.to_string()))
}

fn axis_values(c: &Config) -> Vec<Option<f64>> {
    match &c.axis {
        Some((_, g)) => g.points().into_iter().map(Some).collect(),
        None => vec![None],
    }
}

fn opt(x: Option<f64>) -> Cell {
    x.map(Cell::F).unwrap_or(Cell::Empty)
}

/// |t|², |r|² and friends over the k grid (and the axis, if one is set).
/// Every row is checked against |t|² + |r|² = 1.
pub fn sweep(c: &Config, threads: Option<usize>) -> CliResult<Table> {
    let average = c.kind == Kind::Sphere && c.opt_bool("average")?.unwrap_or(false);
    let mut cols = vec!["k", "axis", "re_t", "im_t", "re_r", "im_r", "T", "Rp", "in_band", "zeta", "aux"];
    if average {
        cols.extend(["T_avg", "T_dprime"]);
    }
    let mut table = Table::new(&cols);
    let ks = c.k.points();
    let pool = pool(threads)?;
    for a in axis_values(c) {
        let elem = Element::build(c, &c.params_at(a))?;
        let rows: Vec<(SerialResult64, Option<f64>)> =
            pool.install(|| ks.par_iter().map(|&k| elem.amplitudes(c, k)).collect::<CliResult<Vec<_>>>())?;
        for (k, (amp, _)) in ks.iter().zip(&rows) {
            let defect = (amp.transmission() + amp.reflection() - 1.0).abs();
            if !(defect <= c.unitarity_tol) {
                return Err(CliError::Numeric(format!("unitarity violated at k = {k}: ||t|²+|r|²−1| = {defect:.3e}")));
            }
        }
        let extra = if average { Some(averages(c, &ks, &rows)?) } else { None };
        for (i, (k, (amp, aux))) in ks.iter().zip(&rows).enumerate() {
            let mut row = vec![
                Cell::F(*k),
                opt(a),
                Cell::F(amp.t_n.re),
                Cell::F(amp.t_n.im),
                Cell::F(amp.r_n.re),
                Cell::F(amp.r_n.im),
                Cell::F(amp.transmission()),
                Cell::F(amp.reflection()),
                Cell::B(amp.in_band),
                Cell::F(amp.zeta),
                opt(*aux),
            ];
            if let Some((avg, dp)) = &extra {
                row.extend([Cell::F(avg[i]), Cell::F(dp[i])]);
            }
            table.rows.push(row);
        }
    }
    Ok(table)
}

/// Peak-window average of |t|² and the δ′ curve matched to it at `dprime_k`
/// (default: the top of the grid).
fn averages(c: &Config, ks: &[f64], rows: &[(SerialResult64, Option<f64>)]) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let t2: Vec<f64> = rows.iter().map(|(a, _)| a.transmission()).collect();
    let avg = averaged_transmission(ks, &t2);
    let kc = c.opt_f64("dprime_k")?.unwrap_or(c.k.max);
    let i = (0..ks.len()).min_by(|&a, &b| (ks[a] - kc).abs().total_cmp(&(ks[b] - kc).abs())).unwrap();
    let beta = calibrate_delta_prime(ks[i], avg[i]).map_err(numeric)?;
    let dp = ks.iter().map(|&k| delta_prime_reference(beta, k).map_err(numeric)).collect::<CliResult<_>>()?;
    Ok((avg, dp))
}

/// Without an axis: the allowed-band intervals in [k_min, k_max]. With one:
/// the band indicator on the (axis, k) grid.
pub fn bands(c: &Config, threads: Option<usize>) -> CliResult<Table> {
    let pool = pool(threads)?;
    if c.axis.is_none() {
        let elem = Element::build(c, &c.params)?;
        let b = band_intervals(|k| elem.discriminant(c.ell, k), (c.k.min, c.k.max), c.k.steps);
        let mut t = Table::new(&["band", "lo", "hi", "lo_residual", "hi_residual"]);
        for (i, iv) in b.intervals.iter().enumerate() {
            t.rows.push(vec![Cell::I(i as i64), Cell::F(iv.lo), Cell::F(iv.hi), Cell::F(iv.lo_residual), Cell::F(iv.hi_residual)]);
        }
        return Ok(t);
    }
    let mut t = Table::new(&["axis", "k", "zeta", "in_band"]);
    let ks = c.k.points();
    for a in axis_values(c) {
        let elem = Element::build(c, &c.params_at(a))?;
        let z: Vec<Option<f64>> = pool.install(|| ks.par_iter().map(|&k| elem.discriminant(c.ell, k)).collect());
        for (k, z) in ks.iter().zip(z) {
            t.rows.push(vec![opt(a), Cell::F(*k), opt(z), Cell::B(z.is_some_and(|z| z.abs() <= 1.0))]);
        }
    }
    Ok(t)
}

/// Resonances of a comb array: zeros of the transmission denominator in the
/// lower half plane, one search per spectral window (or one explicit box).
pub fn poles(c: &Config, threads: Option<usize>) -> CliResult<Table> {
    if c.kind != Kind::Comb {
        return cfg("pole search is implemented for comb elements only");
    }
    if c.axis.is_some() {
        return cfg("pole search does not take an axis");
    }
    let Element::Comb(p) = Element::build(c, &c.params)? else { unreachable!() };
    let explicit = ["re_min", "re_max", "im_min", "im_max"].map(|k| c.opt_f64(k));
    let explicit = explicit.into_iter().collect::<CliResult<Vec<_>>>()?;
    let regions: Vec<(i64, Region<f64>)> = match explicit[..] {
        [Some(a), Some(b), Some(lo), Some(hi)] => {
            if !(a < b && lo < hi) {
                return cfg("explicit region needs re_min < re_max and im_min < im_max");
            }
            if a <= 0.0 && b >= 0.0 && lo <= 0.0 && hi >= 0.0 {
                return cfg("explicit region must exclude k = 0");
            }
            vec![(-1, Region { re: (a, b), im: (lo, hi) })]
        }
        [None, None, None, None] => {
            let zones = c.opt_usize("zones")?.unwrap_or(2);
            let depth = c.opt_f64("depth")?.unwrap_or(3.0);
            let floor = c.opt_f64("re_floor")?.unwrap_or(0.05);
            if zones == 0 || !(depth > 0.0) || !(floor > 0.0) {
                return cfg("need zones ≥ 1, depth > 0, re_floor > 0");
            }
            (0..zones).map(|m| (m as i64, band_region(m, c.ell, depth, floor))).collect()
        }
        _ => return cfg("explicit region needs all of re_min, re_max, im_min, im_max"),
    };
    let classify = c.opt_bool("classify")?.unwrap_or(true);
    let top = regions.iter().map(|(_, r)| r.re.1.abs().max(r.re.0.abs())).fold(0.0, f64::max);
    let ks = if classify { stub_spectrum(&p, (1e-3, top + PI / p.len), 400).map_err(numeric)? } else { Vec::new() };
    let opts = PoleSearch { min_cell: c.root_tol, ..PoleSearch::default() };
    let pool = pool(threads)?;
    let sets: Vec<PoleSet<f64>> = pool.install(|| {
        regions
            .par_iter()
            .map(|(_, r)| {
                let s = find_poles(&p, c.n, *r, &opts).map_err(numeric)?;
                Ok(if classify { classify_poles(&p, c.n, &s, &ks) } else { s })
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let mut t = Table::new(&["zone", "re_k", "im_k", "residual", "origin", "nearest_k_n", "multiplicity", "count"]);
    for ((zone, _), s) in regions.iter().zip(&sets) {
        for q in &s.poles {
            let origin = match q.origin {
                PoleOrigin::Stub => "stub",
                PoleOrigin::Spatial => "spatial",
                PoleOrigin::Unclassified => "unclassified",
            };
            t.rows.push(vec![
                Cell::I(*zone),
                Cell::F(q.k.re),
                Cell::F(q.k.im),
                Cell::F(q.residual),
                Cell::S(origin.into()),
                opt(q.nearest_k_n),
                Cell::I(q.multiplicity as i64),
                Cell::I(s.count as i64),
            ]);
        }
    }
    Ok(t)
}
