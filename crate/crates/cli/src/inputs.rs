use std::path::Path;

use polychain::chains::PolyChain;
use polychain::energy::{integrand_from_json, Integrand};
use polychain::grassmann::{binomial, DVector, GrassmannMeasure, PlaneKey, RationalPlane, WeightedDirection};
use polychain::rational::{parse_rat, Rat};
use serde_json::Value;

use crate::Failure;

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input("IoError", format!("{}: {e}", path.display())))
}

fn parse_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::input("ParseError", format!("{}: {e}", path.display())))
}

pub fn measure(path: &Path) -> Result<GrassmannMeasure, Failure> {
    GrassmannMeasure::from_json(&read(path)?).map_err(|e| Failure::input(e.kind(), e.to_string()))
}

/// A chain JSON, or a construction report carrying one under `"chain"`.
pub fn chain(path: &Path) -> Result<PolyChain, Failure> {
    let v = parse_json(path)?;
    let inner = match v.get("chain") {
        Some(c) => c.clone(),
        None => v,
    };
    PolyChain::from_json_str(&inner.to_string()).map(|(c, _)| c).map_err(|e| Failure::input(e.kind(), e.to_string()))
}

pub fn integrand(path: &Path, n: usize, d: usize) -> Result<Box<dyn Integrand + Send + Sync>, Failure> {
    integrand_from_json(&read(path)?, n, d).map_err(|e| Failure::input(e.kind(), e.to_string()))
}

/// `{"n","d","atoms":[{"omega":[…],"mass":…}]}`.
pub fn float_atoms(path: &Path) -> Result<(usize, usize, Vec<WeightedDirection>), Failure> {
    let v = parse_json(path)?;
    let bad = |m: &str| Failure::input("ParseError", format!("{}: {m}", path.display()));
    let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
    let d = v["d"].as_u64().ok_or_else(|| bad("missing d"))? as usize;
    let atoms = v["atoms"].as_array().ok_or_else(|| bad("missing atoms"))?;
    let mut out = Vec::with_capacity(atoms.len());
    for a in atoms {
        let omega: Option<Vec<f64>> = a["omega"].as_array().and_then(|w| w.iter().map(Value::as_f64).collect());
        let omega = omega.ok_or_else(|| bad("atom without a numeric omega"))?;
        let mass = a["mass"].as_f64().ok_or_else(|| bad("atom without a mass"))?;
        if omega.len() != binomial(n, d) {
            return Err(Failure::input("DimensionMismatch", format!("omega {omega:?} is not in Λ^{d} R^{n}")));
        }
        out.push(WeightedDirection { omega, mass });
    }
    Ok((n, d, out))
}

fn rational_entry(v: &Value) -> Option<Rat> {
    match v {
        Value::String(s) => parse_rat(s).ok(),
        Value::Number(x) => x.as_i64().map(|i| Rat::from_integer(i.into())),
        _ => None,
    }
}

fn plane_of(n: usize, d: usize, v: &Value) -> Result<RationalPlane, Failure> {
    let coords: Option<Vec<Rat>> = v.as_array().and_then(|w| w.iter().map(rational_entry).collect());
    let coords = coords.ok_or_else(|| Failure::input("ParseError", format!("plane {v} is not a list of rationals")))?;
    if coords.len() != binomial(n, d) {
        return Err(Failure::input("DimensionMismatch", format!("plane {v} is not in Λ^{d} R^{n}")));
    }
    RationalPlane::from_wedge(&DVector { n, d, coords }).map_err(|e| Failure::input(e.kind(), e.to_string()))
}

/// Primitive integer lines with entries in `[−k, k]`.
fn lattice_lines(n: usize, k: i64) -> Vec<RationalPlane> {
    let mut out = Vec::new();
    let side = (2 * k + 1) as usize;
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let w: Vec<i64> = (0..n)
            .map(|_| {
                let x = (c % side) as i64 - k;
                c /= side;
                x
            })
            .collect();
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        let key = PlaneKey::from_ints(n, 1, &w);
        if key.w.iter().zip(&w).all(|(a, b)| *a == (*b).into()) {
            out.push(key.to_plane().expect("lines are simple"));
        }
    }
    out
}

/// `{"n","d","p0"?: class, "planes"?: [class…], "lattice"?: k}`; the reference plane is always included.
pub fn candidates(path: &Path) -> Result<(RationalPlane, Vec<RationalPlane>), Failure> {
    let v = parse_json(path)?;
    let bad = |m: &str| Failure::input("ParseError", format!("{}: {m}", path.display()));
    let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
    let d = v["d"].as_u64().ok_or_else(|| bad("missing d"))? as usize;
    if d == 0 || d >= n {
        return Err(Failure::input("DimensionMismatch", format!("need 0 < d < n, got d={d}, n={n}")));
    }
    let p0 = match v.get("p0") {
        Some(p) => plane_of(n, d, p)?,
        None => RationalPlane::coordinate(n, d),
    };
    let mut out = vec![p0.clone()];
    if let Some(list) = v.get("planes") {
        for p in list.as_array().ok_or_else(|| bad("planes must be a list"))? {
            out.push(plane_of(n, d, p)?);
        }
    }
    if let Some(k) = v.get("lattice") {
        let k = k.as_i64().filter(|k| (1..=12).contains(k)).ok_or_else(|| bad("lattice must be an integer in 1..=12"))?;
        if d != 1 {
            return Err(Failure::input("DimensionMismatch", "lattice candidates are lines"));
        }
        out.extend(lattice_lines(n, k));
    }
    Ok((p0, out))
}

/// `N` or `NxM` items separated by commas.
pub fn sizes(s: &str) -> Result<Vec<(u32, Option<u32>)>, Failure> {
    let bad = || Failure::input("InvalidArgument", format!("sizes {s:?} must look like 4,8,16 or 9x3,16x4"));
    s.split(',')
        .map(|item| {
            let item = item.trim();
            match item.split_once('x') {
                Some((a, b)) => Ok((a.parse().map_err(|_| bad())?, Some(b.parse().map_err(|_| bad())?))),
                None => Ok((item.parse().map_err(|_| bad())?, None)),
            }
        })
        .collect()
}

pub fn default_height(size: u32) -> u32 {
    let mut m = 1;
    while (m + 1) * (m + 1) <= size {
        m += 1;
    }
    m.max(2)
}
