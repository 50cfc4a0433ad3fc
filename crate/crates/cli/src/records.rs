//! Row types shared by `classify`, `scan` and `map`, and their CSV/JSON encodings.

use std::io::Write;

use omgbh_core::blackhole::c_params_from_a;
use omgbh_core::{
    capacity_region, capacity_report_with_tol, in_black_hole_region, inverse_map, BlackHolePoint,
    Error, LogBase, OneModeChannel, Parity,
};
use serde_json::{Map, Value};

pub const SCAN_HEADER: [&str; 9] =
    ["tau", "y", "cp", "class", "eb", "region", "K", "coh_info_limit", "lower_bound"];

pub const MAP_HEADER: [&str; 15] = [
    "tau_a", "y_a", "status", "r_even", "s_even", "tau_c_even", "y_c_even", "class_c_even",
    "region_c_even", "r_odd", "s_odd", "tau_c_odd", "y_c_odd", "class_c_odd", "region_c_odd",
];

/// Shortest round-trip decimal, with `inf`/`-inf` for infinities. Very small
/// and very large magnitudes use exponent notation.
pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x != 0.0 && !(1e-5..1e16).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(fmt_f64(x)))
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map(json_f64).unwrap_or(Value::Null)
}

/// Classification of one `(τ, y)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub tau: f64,
    pub y: f64,
    pub cp: bool,
    /// `None` for points that are not completely positive.
    pub class: Option<String>,
    pub eb: bool,
    pub region: Option<String>,
    pub k: Option<f64>,
    pub coh_info_limit: Option<f64>,
    pub lower_bound: Option<f64>,
    pub exact_value: Option<f64>,
    pub notes: Vec<String>,
}

impl PointRecord {
    /// Errors only on non-finite input; non-CP points give a record with `cp = false`.
    pub fn evaluate(tau: f64, y: f64, base: LogBase, tol: f64) -> Result<Self, Error> {
        if !tau.is_finite() || !y.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite point ({tau}, {y})")));
        }
        let channel = match OneModeChannel::from_tau_y(tau, y, tol) {
            Ok(ch) => ch,
            Err(Error::NotCompletelyPositive { .. }) => {
                return Ok(Self {
                    tau,
                    y,
                    cp: false,
                    class: None,
                    eb: false,
                    region: None,
                    k: None,
                    coh_info_limit: None,
                    lower_bound: None,
                    exact_value: None,
                    notes: Vec::new(),
                })
            }
            Err(e) => return Err(e),
        };
        let report = capacity_report_with_tol(tau, y, base, tol)?;
        Ok(Self {
            tau,
            y,
            cp: true,
            class: Some(channel.classify().to_string()),
            eb: omgbh_core::is_entanglement_breaking(tau, y),
            region: Some(report.status.to_string()),
            k: Some(report.k),
            coh_info_limit: report.coh_info_limit,
            lower_bound: Some(report.lower_bound),
            exact_value: report.exact_value,
            notes: report.notes,
        })
    }

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.tau),
            fmt_f64(self.y),
            self.cp.to_string(),
            self.class.clone().unwrap_or_else(|| "none".into()),
            self.eb.to_string(),
            self.region.clone().unwrap_or_else(|| "NotCP".into()),
            fmt_opt(self.k),
            fmt_opt(self.coh_info_limit),
            fmt_opt(self.lower_bound),
        ]
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("tau".into(), json_f64(self.tau));
        m.insert("y".into(), json_f64(self.y));
        m.insert("cp".into(), Value::Bool(self.cp));
        m.insert("class".into(), self.class.clone().map(Value::String).unwrap_or(Value::Null));
        m.insert("eb".into(), Value::Bool(self.eb));
        m.insert("region".into(), self.region.clone().map(Value::String).unwrap_or(Value::Null));
        m.insert("K".into(), json_opt(self.k));
        m.insert("coh_info_limit".into(), json_opt(self.coh_info_limit));
        m.insert("lower_bound".into(), json_opt(self.lower_bound));
        m.insert("exact_value".into(), json_opt(self.exact_value));
        Value::Object(m)
    }
}

/// c-channel image of an outgoing point on one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchImage {
    pub r: f64,
    pub s: f64,
    pub tau_c: f64,
    pub y_c: f64,
    pub class: String,
    pub region: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapRecord {
    pub tau_a: f64,
    pub y_a: f64,
    /// `Err` carries the row-level error marker.
    pub status: Result<(), String>,
    pub even: Option<BranchImage>,
    pub odd: Option<BranchImage>,
}

impl MapRecord {
    pub fn evaluate(tau_a: f64, y_a: f64, tol: f64) -> Self {
        let failed = |msg: String| Self { tau_a, y_a, status: Err(msg), even: None, odd: None };
        let pt = match BlackHolePoint::new(tau_a, y_a) {
            Ok(pt) => pt,
            Err(e) => return failed(e.to_string()),
        };
        let branch = |parity| -> Result<Option<BranchImage>, Error> {
            let Some(p) = inverse_map(&pt, parity)? else { return Ok(None) };
            let (tau_c, y_c) = c_params_from_a(&pt, parity)?.expect("finite branch has an image");
            let class = OneModeChannel::from_tau_y(tau_c, y_c, tol)?.classify().to_string();
            let region = capacity_region(tau_c, y_c, tol)?.to_string();
            Ok(Some(BranchImage { r: p.r(), s: p.s(), tau_c, y_c, class, region }))
        };
        match (branch(Parity::Even), branch(Parity::Odd)) {
            (Ok(even), Ok(odd)) => Self { tau_a, y_a, status: Ok(()), even, odd },
            (Err(e), _) | (_, Err(e)) => failed(e.to_string()),
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let mut f = vec![
            fmt_f64(self.tau_a),
            fmt_f64(self.y_a),
            match &self.status {
                Ok(()) => "ok".into(),
                Err(e) => format!("error: {e}"),
            },
        ];
        for b in [&self.even, &self.odd] {
            match b {
                Some(b) => f.extend([
                    fmt_f64(b.r),
                    fmt_f64(b.s),
                    fmt_f64(b.tau_c),
                    fmt_f64(b.y_c),
                    b.class.clone(),
                    b.region.clone(),
                ]),
                None => f.extend(std::iter::repeat(String::new()).take(6)),
            }
        }
        f
    }

    pub fn to_json(&self) -> Value {
        let branch = |b: &Option<BranchImage>| match b {
            None => Value::Null,
            Some(b) => serde_json::json!({
                "r": json_f64(b.r),
                "s": json_f64(b.s),
                "tau_c": json_f64(b.tau_c),
                "y_c": json_f64(b.y_c),
                "class_c": b.class,
                "region_c": b.region,
            }),
        };
        serde_json::json!({
            "tau_a": json_f64(self.tau_a),
            "y_a": json_f64(self.y_a),
            "status": match &self.status { Ok(()) => "ok".to_string(), Err(e) => format!("error: {e}") },
            "even": branch(&self.even),
            "odd": branch(&self.odd),
        })
    }
}

/// Grid window `[τ_min, τ_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub tau_min: f64,
    pub tau_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl std::str::FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let [tau_min, tau_max, y_min, y_max] = v[..] else {
            return Err("expected tau_min,tau_max,y_min,y_max".into());
        };
        if !v.iter().all(|x| x.is_finite()) || tau_max <= tau_min || y_max <= y_min {
            return Err("window needs finite bounds with max > min".into());
        }
        Ok(Self { tau_min, tau_max, y_min, y_max })
    }
}

/// Row-major grid: outer loop over `τ`, inner over `y`.
pub fn grid_points(w: &Window, n: usize) -> Vec<(f64, f64)> {
    let step = |lo: f64, hi: f64, i: usize| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (step(w.tau_min, w.tau_max, i), step(w.y_min, w.y_max, j))))
        .collect()
}

pub fn keep_in_strip(tau: f64, y: f64) -> bool {
    in_black_hole_region(tau, y)
}

pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn write_json_rows<W: Write>(mut out: W, rows: impl Iterator<Item = Value>) -> std::io::Result<()> {
    writeln!(out, "[")?;
    let mut first = true;
    for row in rows {
        if !first {
            writeln!(out, ",")?;
        }
        first = false;
        write!(out, "  {row}")?;
    }
    if !first {
        writeln!(out)?;
    }
    writeln!(out, "]")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 4.0, 1e-300, -2.5e17] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_f64(4.0), "4");
        assert_eq!(fmt_f64(6.661338147750939e-16), "6.661338147750939e-16");
        assert_eq!(json_f64(f64::INFINITY), Value::String("inf".into()));
    }

    #[test]
    fn window_parsing() {
        let w: Window = "0,3,0,3".parse().unwrap();
        assert_eq!((w.tau_max, w.y_max), (3.0, 3.0));
        assert!("0,3,1".parse::<Window>().is_err());
        assert!("1,0,0,1".parse::<Window>().is_err());
        assert!("a,1,0,1".parse::<Window>().is_err());
    }

    #[test]
    fn grid_is_row_major_and_hits_the_edges() {
        let w: Window = "0,1,0,1".parse().unwrap();
        let g = grid_points(&w, 3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], (0.0, 0.0));
        assert_eq!(g[1], (0.0, 0.5));
        assert_eq!(g[3], (0.5, 0.0));
        assert_eq!(g[6], (1.0, 0.0));
        assert_eq!(g[8], (1.0, 1.0));
    }

    #[test]
    fn non_cp_points_are_flagged() {
        let r = PointRecord::evaluate(0.2, 0.1, LogBase::Two, 1e-10).unwrap();
        assert!(!r.cp);
        assert_eq!(r.csv_fields()[3], "none");
        assert_eq!(r.csv_fields()[6], "");
    }

    #[test]
    fn map_row_examples() {
        let r = MapRecord::evaluate(1.0, 0.0, 1e-10);
        let even = r.even.unwrap();
        assert!(even.tau_c.abs() < 1e-12 && (even.y_c - 1.0).abs() < 1e-12);
        let r = MapRecord::evaluate(1.0, 2.0, 1e-10);
        assert!(r.status.is_ok());
        assert!(r.odd.is_none());
        assert_eq!(r.csv_fields().len(), MAP_HEADER.len());
        let r = MapRecord::evaluate(3.0, 5.0, 1e-10);
        assert!(r.status.is_err());
        assert!(r.csv_fields()[2].starts_with("error"));
    }
}
