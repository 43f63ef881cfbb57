use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dvector::{wedge_of_columns, ExactDVector};
use super::plane::{PlaneKey, RationalPlane};
use super::GrassmannError;
use crate::linalg::RatMatrix;
use crate::rational::{format_rat, parse_rat, to_f64, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub plane: RationalPlane,
    pub scale: Rat,
}

impl Atom {
    pub fn mass(&self) -> f64 {
        to_f64(&self.scale) * self.plane.w_norm()
    }
}

/// Finite positive atomic measure with exact rational scales, merged by class vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannMeasure {
    pub n: usize,
    pub d: usize,
    atoms: BTreeMap<PlaneKey, Atom>,
}

impl GrassmannMeasure {
    pub fn new(n: usize, d: usize) -> Self {
        GrassmannMeasure { n, d, atoms: BTreeMap::new() }
    }

    pub fn add(&mut self, plane: RationalPlane, scale: Rat) -> Result<(), GrassmannError> {
        if (plane.n, plane.d) != (self.n, self.d) {
            return Err(GrassmannError::DimensionMismatch(format!(
                "plane in Gr({},{}) added to measure on Gr({},{})",
                plane.d, plane.n, self.d, self.n
            )));
        }
        if !scale.is_positive() {
            return Err(GrassmannError::NonPositiveScale(format_rat(&scale)));
        }
        self.atoms
            .entry(plane.key())
            .and_modify(|a| a.scale += &scale)
            .or_insert(Atom { plane, scale });
        Ok(())
    }

    /// Adds the atom spanned by `basis`; a non-primitive basis multiplies the scale
    /// so that the atom contributes `scale · wedge(basis)` to the barycenter.
    pub fn add_basis(&mut self, basis: &RatMatrix, scale: Rat) -> Result<(), GrassmannError> {
        let plane = RationalPlane::from_basis(basis)?;
        let w = wedge_of_columns(basis)?;
        let pos = plane.w.iter().position(|x| !x.is_zero()).expect("nonzero class");
        let ratio = &w.coords[pos] / Rat::from_integer(plane.w[pos].clone());
        self.add(plane, scale * ratio)
    }

    pub fn single(plane: RationalPlane, scale: Rat) -> Result<Self, GrassmannError> {
        let mut m = GrassmannMeasure::new(plane.n, plane.d);
        m.add(plane, scale)?;
        Ok(m)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn barycenter_exact(&self) -> ExactDVector {
        self.atoms
            .values()
            .fold(ExactDVector::zero(self.n, self.d), |acc, a| &acc + &a.plane.w_exact().scaled(&a.scale))
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.values().map(Atom::mass).sum()
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        let mut out = GrassmannMeasure::new(self.n, self.d);
        for a in self.atoms.values() {
            out.add(a.plane.clone(), &a.scale * s).expect("positive factor");
        }
        out
    }

    pub fn to_float(&self) -> FloatMeasure {
        let mut f = FloatMeasure::new(self.n, self.d);
        for (k, a) in &self.atoms {
            f.add(k.clone(), a.mass());
        }
        f
    }

    pub fn from_json(s: &str) -> Result<Self, GrassmannError> {
        let j: MeasureJson = serde_json::from_str(s).map_err(|e| GrassmannError::Parse(e.to_string()))?;
        j.to_measure()
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            n: self.n,
            d: self.d,
            atoms: self
                .atoms
                .values()
                .map(|a| AtomJson {
                    basis: a.plane.basis.iter().map(|row| row.iter().map(|x| format!("{x}/1")).collect()).collect(),
                    scale: format_rat(&a.scale),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub basis: Vec<Vec<String>>,
    pub scale: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub n: usize,
    pub d: usize,
    pub atoms: Vec<AtomJson>,
}

impl MeasureJson {
    pub fn to_measure(&self) -> Result<GrassmannMeasure, GrassmannError> {
        let mut m = GrassmannMeasure::new(self.n, self.d);
        for (i, a) in self.atoms.iter().enumerate() {
            if a.basis.len() != self.n || a.basis.iter().any(|r| r.len() != self.d) {
                return Err(GrassmannError::DimensionMismatch(format!(
                    "atom {i}: basis must be {} rows of {} entries",
                    self.n, self.d
                )));
            }
            let basis: Result<RatMatrix, _> = a
                .basis
                .iter()
                .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>, _>>())
                .collect();
            let basis = basis.map_err(|e| GrassmannError::Parse(e.to_string()))?;
            let scale = parse_rat(&a.scale).map_err(|e| GrassmannError::Parse(e.to_string()))?;
            m.add_basis(&basis, scale)?;
        }
        Ok(m)
    }
}

/// Float form of a measure: mass per exact plane key.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloatMeasure {
    pub n: usize,
    pub d: usize,
    pub atoms: BTreeMap<PlaneKey, f64>,
}

impl FloatMeasure {
    pub fn new(n: usize, d: usize) -> Self {
        FloatMeasure { n, d, atoms: BTreeMap::new() }
    }

    pub fn add(&mut self, key: PlaneKey, mass: f64) {
        if mass == 0.0 {
            return;
        }
        *self.atoms.entry(key).or_insert(0.0) += mass;
    }

    pub fn mass_of(&self, key: &PlaneKey) -> f64 {
        self.atoms.get(key).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        FloatMeasure {
            n: self.n,
            d: self.d,
            atoms: self.atoms.iter().map(|(k, m)| (k.clone(), m * s)).collect(),
        }
    }

    /// `Σ mass · ω`.
    pub fn barycenter(&self) -> Vec<f64> {
        let mut acc = vec![0.0; super::binomial(self.n, self.d)];
        for (k, m) in &self.atoms {
            for (a, w) in acc.iter_mut().zip(k.omega().coords) {
                *a += m * w;
            }
        }
        acc
    }

    pub fn to_json(&self) -> FloatMeasureJson {
        FloatMeasureJson {
            n: self.n,
            d: self.d,
            atoms: self.atoms.iter().map(|(k, m)| FloatAtomJson { w: k.w.clone(), mass: *m }).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloatAtomJson {
    #[serde(with = "bigint_strings")]
    pub w: Vec<BigInt>,
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloatMeasureJson {
    pub n: usize,
    pub d: usize,
    pub atoms: Vec<FloatAtomJson>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn line(x: i64, y: i64) -> RatMatrix {
        vec![vec![int(x)], vec![int(y)]]
    }

    fn fig1() -> GrassmannMeasure {
        let mut m = GrassmannMeasure::new(2, 1);
        m.add_basis(&line(1, 1), int(1)).unwrap();
        m.add_basis(&line(1, -1), int(1)).unwrap();
        m.add_basis(&line(-2, 0), int(1)).unwrap();
        m
    }

    #[test]
    fn three_directions_balance() {
        let m = fig1();
        assert!(m.barycenter_exact().is_zero());
        assert_eq!(m.len(), 3);
        let f = m.to_float();
        assert!((f.mass_of(&PlaneKey::from_ints(2, 1, &[-1, 0])) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn half_scales() {
        let mut m = GrassmannMeasure::new(2, 1);
        m.add_basis(&line(1, 1), rat(1, 2)).unwrap();
        m.add_basis(&line(1, -1), rat(1, 2)).unwrap();
        assert_eq!(m.barycenter_exact().coords, vec![int(1), int(0)]);
    }

    #[test]
    fn empty_barycenter() {
        assert!(GrassmannMeasure::new(3, 2).barycenter_exact().is_zero());
    }

    #[test]
    fn equal_planes_merge() {
        let mut m = GrassmannMeasure::new(2, 1);
        m.add_basis(&line(1, 1), rat(1, 3)).unwrap();
        m.add_basis(&line(2, 2), rat(1, 3)).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms().next().unwrap().scale, int(1));
    }

    #[test]
    fn rejects_nonpositive_scale() {
        let mut m = GrassmannMeasure::new(2, 1);
        assert!(m.add_basis(&line(1, 0), int(0)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":2,"d":1,"atoms":[{"basis":[["1"],["1"]],"scale":"1/2"},{"basis":[["1/1"],["-1/1"]],"scale":"1/2"}]}"#;
        let m = GrassmannMeasure::from_json(text).unwrap();
        let back = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(GrassmannMeasure::from_json(&back).unwrap(), m);
        assert!(GrassmannMeasure::from_json(r#"{"n":2,"d":1,"atoms":[{"basis":[["1"]],"scale":"1"}]}"#).is_err());
    }
}
