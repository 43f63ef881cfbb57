use evalexpr::{build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};
use serde::Deserialize;

use super::EnergyError;
use crate::grassmann::{binomial, PlaneKey};

/// Positive function on unit simple d-vectors.
pub trait Integrand {
    /// Raw value at a unit `ω`.
    fn raw(&self, omega: &[f64]) -> f64;

    fn is_even(&self) -> bool {
        false
    }

    fn eval(&self, omega: &[f64]) -> f64 {
        if self.is_even() {
            self.raw(&canonical(omega))
        } else {
            self.raw(omega)
        }
    }

    fn eval_key(&self, key: &PlaneKey) -> f64 {
        self.eval(&key.omega().coords)
    }
}

/// Representative of `±ω` whose first clearly nonzero entry is positive.
fn canonical(omega: &[f64]) -> Vec<f64> {
    let flip = omega.iter().find(|x| x.abs() > 1e-14).is_some_and(|x| *x < 0.0);
    if flip {
        omega.iter().map(|x| -x).collect()
    } else {
        omega.to_vec()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `Ψ ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Area;

impl Integrand for Area {
    fn raw(&self, _: &[f64]) -> f64 {
        1.0
    }
    fn is_even(&self) -> bool {
        true
    }
}

/// `Ψ(ω) = ‖Aω‖`, convex and 1-homogeneous.
#[derive(Debug, Clone)]
pub struct NormIntegrand {
    pub a: Vec<Vec<f64>>,
}

impl Integrand for NormIntegrand {
    fn raw(&self, omega: &[f64]) -> f64 {
        let y: Vec<f64> = self.a.iter().map(|row| row.iter().zip(omega).map(|(a, w)| a * w).sum()).collect();
        norm(&y)
    }
    fn is_even(&self) -> bool {
        true
    }
}

/// Any closure, mostly for tests and oracles.
pub struct FnIntegrand<F: Fn(&[f64]) -> f64> {
    pub f: F,
    pub even: bool,
}

impl<F: Fn(&[f64]) -> f64> Integrand for FnIntegrand<F> {
    fn raw(&self, omega: &[f64]) -> f64 {
        (self.f)(omega)
    }
    fn is_even(&self) -> bool {
        self.even
    }
}

/// Expression in the coordinates `w0, w1, …` of `ω`; for lines in the plane also `theta`.
#[derive(Debug, Clone)]
pub struct ExpressionIntegrand {
    pub n: usize,
    pub d: usize,
    pub source: String,
    pub even: bool,
    tree: Node<DefaultNumericTypes>,
}

impl ExpressionIntegrand {
    pub fn new(n: usize, d: usize, source: &str, even: bool) -> Result<Self, EnergyError> {
        let tree = build_operator_tree::<DefaultNumericTypes>(source)
            .map_err(|e| EnergyError::Integrand(format!("{source}: {e}")))?;
        let out = ExpressionIntegrand { n, d, source: source.to_string(), even, tree };
        let probe: Vec<f64> = (0..binomial(n, d)).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        out.try_eval(&probe)?;
        Ok(out)
    }

    /// `1 − a·|sin 2θ|` on lines in the plane.
    pub fn sin_two_theta(amplitude: f64) -> Self {
        Self::new(2, 1, &format!("1 - {amplitude:?} * math::abs(math::sin(2 * theta))"), true).expect("valid expression")
    }

    fn try_eval(&self, omega: &[f64]) -> Result<f64, EnergyError> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        let bad = |e: evalexpr::EvalexprError| EnergyError::Integrand(format!("{}: {e}", self.source));
        for (i, w) in omega.iter().enumerate() {
            ctx.set_value(format!("w{i}"), Value::Float(*w)).map_err(bad)?;
        }
        if (self.n, self.d) == (2, 1) {
            ctx.set_value("theta".into(), Value::Float(omega[1].atan2(omega[0]))).map_err(bad)?;
        }
        self.tree.eval_number_with_context(&ctx).map_err(bad)
    }
}

impl Integrand for ExpressionIntegrand {
    fn raw(&self, omega: &[f64]) -> f64 {
        self.try_eval(omega).expect("expression validated at construction")
    }
    fn is_even(&self) -> bool {
        self.even
    }
}

/// Values at finitely many unit d-vectors, extended by the nearest one.
#[derive(Debug, Clone)]
pub struct TableIntegrand {
    pub atoms: Vec<(Vec<f64>, f64)>,
    pub even: bool,
    /// Declared Lipschitz bound of the tabulated function; the extension error is at most
    /// this times the chordal distance to the nearest atom.
    pub lipschitz: f64,
}

impl Integrand for TableIntegrand {
    fn raw(&self, omega: &[f64]) -> f64 {
        let dist = |w: &[f64]| w.iter().zip(omega).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let mut best = (f64::INFINITY, 0.0);
        for (w, v) in &self.atoms {
            let mut dd = dist(w);
            if self.even {
                let flipped: Vec<f64> = w.iter().map(|x| -x).collect();
                dd = dd.min(dist(&flipped));
            }
            if dd < best.0 {
                best = (dd, *v);
            }
        }
        best.1
    }
    fn is_even(&self) -> bool {
        self.even
    }
}

#[derive(Debug, Clone, Deserialize)]
struct TableAtom {
    omega: Vec<f64>,
    value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum IntegrandJson {
    Table {
        atoms: Vec<TableAtom>,
        #[serde(default)]
        even: bool,
        #[serde(default)]
        lipschitz: f64,
    },
    Expression {
        expr: String,
        #[serde(default)]
        even: bool,
    },
}

/// Integrand from its JSON description on `Gr(d, n)`.
pub fn integrand_from_json(s: &str, n: usize, d: usize) -> Result<Box<dyn Integrand + Send + Sync>, EnergyError> {
    let parsed: IntegrandJson = serde_json::from_str(s).map_err(|e| EnergyError::Integrand(e.to_string()))?;
    let len = binomial(n, d);
    let out: Box<dyn Integrand + Send + Sync> = match parsed {
        IntegrandJson::Table { atoms, even, lipschitz } => {
            if atoms.is_empty() {
                return Err(EnergyError::Integrand("empty table".into()));
            }
            let mut rows = Vec::with_capacity(atoms.len());
            for a in atoms {
                let r = norm(&a.omega);
                if a.omega.len() != len || r == 0.0 || a.value <= 0.0 {
                    return Err(EnergyError::Integrand(format!("bad table atom {:?} → {}", a.omega, a.value)));
                }
                rows.push((a.omega.iter().map(|x| x / r).collect(), a.value));
            }
            Box::new(TableIntegrand { atoms: rows, even, lipschitz })
        }
        IntegrandJson::Expression { expr, even } => Box::new(ExpressionIntegrand::new(n, d, &expr, even)?),
    };
    Ok(out)
}

/// Function of the slope matrix `X ∈ R^{(n−d)×d}`, entries row-major.
pub trait GraphIntegrand {
    fn eval_slope(&self, x: &[f64]) -> f64;
}

/// `ψ(X) = Ψ(∧M(X)/|∧M(X)|) · |∧M(X)|` with `M(X)` the columns of `(I; X)`.
pub struct Bridge<'a, I: Integrand + ?Sized> {
    pub psi: &'a I,
    pub n: usize,
    pub d: usize,
}

/// `∧M(X)` for the graph map `x ↦ (x, Xx)`.
pub fn graph_wedge(n: usize, d: usize, x: &[f64]) -> Vec<f64> {
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|j| (0..n).map(|i| if i < d { (i == j) as u8 as f64 } else { x[(i - d) * d + j] }).collect())
        .collect();
    crate::grassmann::multi_indices(n, d)
        .iter()
        .map(|idx| {
            let m: Vec<Vec<f64>> = idx.iter().map(|&r| cols.iter().map(|c| c[r]).collect()).collect();
            float_det(m)
        })
        .collect()
}

fn float_det(mut m: Vec<Vec<f64>>) -> f64 {
    let k = m.len();
    let mut det = 1.0;
    for c in 0..k {
        let p = (c..k).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).expect("nonempty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..k {
            let f = m[r][c] / m[c][c];
            for j in c..k {
                m[r][j] -= f * m[c][j];
            }
        }
    }
    det
}

impl<I: Integrand + ?Sized> GraphIntegrand for Bridge<'_, I> {
    fn eval_slope(&self, x: &[f64]) -> f64 {
        let w = graph_wedge(self.n, self.d, x);
        let r = norm(&w);
        let omega: Vec<f64> = w.iter().map(|v| v / r).collect();
        self.psi.eval(&omega) * r
    }
}

/// Expression in the slope entries `x0, x1, …`; a single entry is also `x`.
#[derive(Debug, Clone)]
pub struct SlopeExpression {
    pub source: String,
    tree: Node<DefaultNumericTypes>,
}

impl SlopeExpression {
    pub fn new(source: &str) -> Result<Self, EnergyError> {
        let tree = build_operator_tree::<DefaultNumericTypes>(source)
            .map_err(|e| EnergyError::Integrand(format!("{source}: {e}")))?;
        Ok(SlopeExpression { source: source.to_string(), tree })
    }

    pub fn try_eval(&self, x: &[f64]) -> Result<f64, EnergyError> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        let bad = |e: evalexpr::EvalexprError| EnergyError::Integrand(format!("{}: {e}", self.source));
        for (i, v) in x.iter().enumerate() {
            ctx.set_value(format!("x{i}"), Value::Float(*v)).map_err(bad)?;
        }
        if x.len() == 1 {
            ctx.set_value("x".into(), Value::Float(x[0])).map_err(bad)?;
        }
        self.tree.eval_number_with_context(&ctx).map_err(bad)
    }
}

impl GraphIntegrand for SlopeExpression {
    fn eval_slope(&self, x: &[f64]) -> f64 {
        self.try_eval(x).expect("slope expression failed to evaluate")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(theta_deg: f64) -> Vec<f64> {
        let t = theta_deg.to_radians();
        vec![t.cos(), t.sin()]
    }

    #[test]
    fn sin_integrand_values() {
        let psi = ExpressionIntegrand::sin_two_theta(0.4);
        assert!((psi.eval(&line(0.0)) - 1.0).abs() < 1e-15);
        assert!((psi.eval(&line(45.0)) - 0.6).abs() < 1e-12);
        assert!((psi.eval(&line(-45.0)) - 0.6).abs() < 1e-12);
        for deg in [3.0, 17.0, 61.0, 133.0] {
            let w = line(deg);
            let back: Vec<f64> = w.iter().map(|x| -x).collect();
            assert!((psi.eval(&w) - psi.eval(&back)).abs() <= 1e-12);
            assert!(psi.eval(&w) > 0.0);
        }
    }

    #[test]
    fn evenness_is_enforced_when_flagged() {
        let odd = ExpressionIntegrand::new(2, 1, "2 + w1", true).unwrap();
        assert_eq!(odd.eval(&[0.6, 0.8]), odd.eval(&[-0.6, -0.8]));
        let raw = ExpressionIntegrand::new(2, 1, "2 + w1", false).unwrap();
        assert!((raw.eval(&[0.6, 0.8]) - raw.eval(&[-0.6, -0.8]) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn graph_form_of_the_sin_integrand() {
        let psi = ExpressionIntegrand::sin_two_theta(0.4);
        let bridge = Bridge { psi: &psi, n: 2, d: 1 };
        let direct = SlopeExpression::new("math::sqrt(1 + x*x) * (1 - 0.4 * math::abs(2*x / (1 + x*x)))").unwrap();
        for x in [-3.0, -1.0, -0.2, 0.0, 0.5, 1.0, 7.0] {
            assert!((bridge.eval_slope(&[x]) - direct.eval_slope(&[x])).abs() < 1e-12, "x = {x}");
        }
        assert!((Bridge { psi: &Area, n: 2, d: 1 }.eval_slope(&[1.0]) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn graph_wedge_is_the_minors_vector() {
        // n = 3, d = 2: X = [[a, b]] gives e12 + b e13 − a e23
        let w = graph_wedge(3, 2, &[2.0, 5.0]);
        assert_eq!(w, vec![1.0, 5.0, -2.0]);
    }

    #[test]
    fn json_specs() {
        let t = integrand_from_json(r#"{"kind":"table","even":true,"atoms":[{"omega":[1,0],"value":1},{"omega":[1,1],"value":0.5}]}"#, 2, 1)
            .unwrap();
        assert_eq!(t.eval(&[0.9, 0.1]), 1.0);
        assert_eq!(t.eval(&[-0.7, -0.7]), 0.5);
        let e = integrand_from_json(r#"{"kind":"expression","expr":"1 + w0*w0"}"#, 2, 1).unwrap();
        assert!((e.eval(&[0.6, 0.8]) - 1.36).abs() < 1e-15);
        assert!(integrand_from_json(r#"{"kind":"expression","expr":"1 +"}"#, 2, 1).is_err());
        assert!(integrand_from_json(r#"{"kind":"table","atoms":[]}"#, 2, 1).is_err());
    }
}
