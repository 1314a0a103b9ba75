//! Finite measures on a finite labelled set or on a uniform rectangular grid.
//!
//! The dominating measure is never materialized. Discrete measures are compared
//! on the union of their supports (counting measure), grid measures only when
//! they live on the identical grid (Lebesgue measure restricted to the cells).
//! In both cases Radon-Nikodym derivatives reduce to ratios of stored weights.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weights below this threshold count as exact zeros when supports are compared.
pub const NULL_WEIGHT: f64 = 1e-300;

/// Opaque atom label. Ordering is lexicographic and fixes iteration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn pair(a: Label, b: Label) -> Label {
        Label::Tuple(vec![a, b])
    }
}

impl From<i64> for Label {
    fn from(v: i64) -> Self {
        Label::Int(v)
    }
}

impl From<&str> for Label {
    fn from(v: &str) -> Self {
        Label::Str(v.to_owned())
    }
}

impl From<String> for Label {
    fn from(v: String) -> Self {
        Label::Str(v)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(v) => write!(f, "{v}"),
            Label::Str(s) => write!(f, "{s}"),
            Label::Tuple(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Scaling factor `sigma > 0` entering every distance formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleConfig {
    sigma: f64,
}

impl ScaleConfig {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self { sigma })
        } else {
            Err(Error::ConditionViolated(format!("sigma must be positive, got {sigma}")))
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Default for ScaleConfig {
    fn default() -> Self {
        Self { sigma: 1.0 }
    }
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidMeasure(format!("weight {w} is negative or not finite")))
    }
}

/// Nonnegative weights over a finite set of distinct labels, kept sorted by label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteRepr", into = "DiscreteRepr")]
pub struct DiscreteMeasure {
    atoms: Vec<(Label, f64)>,
}

#[derive(Serialize, Deserialize)]
struct DiscreteRepr {
    support: Vec<Label>,
    weights: Vec<f64>,
}

impl TryFrom<DiscreteRepr> for DiscreteMeasure {
    type Error = Error;
    fn try_from(r: DiscreteRepr) -> Result<Self> {
        DiscreteMeasure::new(r.support, r.weights)
    }
}

impl From<DiscreteMeasure> for DiscreteRepr {
    fn from(m: DiscreteMeasure) -> Self {
        let (support, weights) = m.atoms.into_iter().unzip();
        DiscreteRepr { support, weights }
    }
}

impl DiscreteMeasure {
    pub fn new(support: Vec<Label>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} labels but {} weights",
                support.len(),
                weights.len()
            )));
        }
        Self::from_pairs(support.into_iter().zip(weights).collect())
    }

    pub fn from_pairs(mut atoms: Vec<(Label, f64)>) -> Result<Self> {
        for (_, w) in &atoms {
            check_weight(*w)?;
        }
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(pair) = atoms.windows(2).find(|p| p[0].0 == p[1].0) {
            return Err(Error::InvalidMeasure(format!("duplicate label {}", pair[0].0)));
        }
        Ok(Self { atoms })
    }

    /// Weights indexed `0..n` by integer labels.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        Self::from_pairs(
            weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (Label::Int(i as i64), w))
                .collect(),
        )
    }

    pub fn dirac(label: impl Into<Label>, mass: f64) -> Result<Self> {
        Self::from_pairs(vec![(label.into(), mass)])
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[(Label, f64)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.atoms.iter().map(|(l, _)| l)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|(_, w)| *w).collect()
    }

    pub fn weight_of(&self, label: &Label) -> f64 {
        self.atoms
            .binary_search_by(|(l, _)| l.cmp(label))
            .map(|i| self.atoms[i].1)
            .unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn scaled(&self, r: f64) -> Result<Self> {
        check_weight(r)?;
        Ok(Self {
            atoms: self.atoms.iter().map(|(l, w)| (l.clone(), w * r)).collect(),
        })
    }
}

/// Density samples on a uniform rectangular grid.
///
/// `origin` is the lower corner of the grid; cell `i` (multi-index) has its
/// center at `origin + (i + 1/2) * spacing`. Densities are stored in row-major
/// order (last axis fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridMeasure {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
    density: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
    density: Vec<f64>,
}

impl TryFrom<GridRepr> for GridMeasure {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        GridMeasure::new(r.origin, r.spacing, r.shape, r.density)
    }
}

impl From<GridMeasure> for GridRepr {
    fn from(g: GridMeasure) -> Self {
        GridRepr {
            origin: g.origin,
            spacing: g.spacing,
            shape: g.shape,
            density: g.density,
        }
    }
}

impl GridMeasure {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>, density: Vec<f64>) -> Result<Self> {
        let n = origin.len();
        if n == 0 || spacing.len() != n || shape.len() != n {
            return Err(Error::InvalidMeasure(
                "origin, spacing and shape must have the same nonzero length".into(),
            ));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidMeasure("grid spacing must be positive".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidMeasure("grid origin must be finite".into()));
        }
        if shape.iter().any(|&s| s == 0) {
            return Err(Error::InvalidMeasure("grid shape entries must be positive".into()));
        }
        let cells: usize = shape.iter().product();
        if density.len() != cells {
            return Err(Error::InvalidMeasure(format!(
                "grid has {cells} cells but {} density values",
                density.len()
            )));
        }
        for &d in &density {
            check_weight(d)?;
        }
        Ok(Self {
            origin,
            spacing,
            shape,
            density,
        })
    }

    /// Samples `f` at every cell center.
    pub fn from_fn(
        origin: Vec<f64>,
        spacing: Vec<f64>,
        shape: Vec<usize>,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let cells: usize = shape.iter().product();
        let mut density = Vec::with_capacity(cells);
        let mut x = vec![0.0; shape.len()];
        for flat in 0..cells {
            let mut rem = flat;
            for axis in (0..shape.len()).rev() {
                let i = rem % shape[axis];
                rem /= shape[axis];
                x[axis] = origin[axis] + (i as f64 + 0.5) * spacing[axis];
            }
            density.push(f(&x));
        }
        Self::new(origin, spacing, shape, density)
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn total_mass(&self) -> f64 {
        self.cell_volume() * self.density.iter().sum::<f64>()
    }

    pub fn same_grid(&self, other: &GridMeasure) -> bool {
        self.origin == other.origin && self.spacing == other.spacing && self.shape == other.shape
    }

    pub fn with_density(&self, density: Vec<f64>) -> Result<Self> {
        Self::new(self.origin.clone(), self.spacing.clone(), self.shape.clone(), density)
    }

    pub fn scaled(&self, r: f64) -> Result<Self> {
        check_weight(r)?;
        self.with_density(self.density.iter().map(|d| d * r).collect())
    }
}

/// A finite measure, either discrete or gridded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Measure {
    Discrete(DiscreteMeasure),
    Grid(GridMeasure),
}

impl From<DiscreteMeasure> for Measure {
    fn from(m: DiscreteMeasure) -> Self {
        Measure::Discrete(m)
    }
}

impl From<GridMeasure> for Measure {
    fn from(m: GridMeasure) -> Self {
        Measure::Grid(m)
    }
}

impl Measure {
    pub fn total_mass(&self) -> f64 {
        match self {
            Measure::Discrete(m) => m.total_mass(),
            Measure::Grid(g) => g.total_mass(),
        }
    }

    /// Multiplies every weight by `r >= 0`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        Ok(match self {
            Measure::Discrete(m) => Measure::Discrete(m.scaled(r)?),
            Measure::Grid(g) => Measure::Grid(g.scaled(r)?),
        })
    }

    pub fn as_discrete(&self) -> Option<&DiscreteMeasure> {
        match self {
            Measure::Discrete(m) => Some(m),
            Measure::Grid(_) => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridMeasure> {
        match self {
            Measure::Grid(g) => Some(g),
            Measure::Discrete(_) => None,
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measures always serialize")
    }
}

/// Layout shared by two comparable measures.
#[derive(Clone, Debug)]
pub(crate) enum Layout {
    Discrete(Vec<Label>),
    Grid(GridMeasure),
}

/// Two measures expressed as weight vectors against a common reference.
///
/// For grids the weights are densities and `volume` is the cell volume; for
/// discrete measures the weights are atom masses on the merged support and
/// `volume` is one.
#[derive(Clone, Debug)]
pub(crate) struct Paired {
    layout: Layout,
    pub w0: Vec<f64>,
    pub w1: Vec<f64>,
    pub volume: f64,
}

impl Layout {
    pub fn build(&self, weights: Vec<f64>) -> Result<Measure> {
        match self {
            Layout::Discrete(labels) => Ok(Measure::Discrete(DiscreteMeasure {
                atoms: labels.iter().cloned().zip(weights).collect(),
            })),
            Layout::Grid(g) => Ok(Measure::Grid(g.with_density(weights)?)),
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Layout::Discrete(_) => 1.0,
            Layout::Grid(g) => g.cell_volume(),
        }
    }
}

impl Paired {
    pub fn build(&self, weights: Vec<f64>) -> Result<Measure> {
        self.layout.build(weights)
    }
}

/// Expresses several measures against one common layout, returning one
/// weight vector per measure.
pub(crate) fn common_layout(states: &[Measure]) -> Result<(Layout, Vec<Vec<f64>>)> {
    match states.first() {
        None => Err(Error::InvalidMeasure("no measures given".into())),
        Some(Measure::Discrete(_)) => {
            let mut labels = std::collections::BTreeSet::new();
            for m in states {
                let d = m.as_discrete().ok_or_else(|| {
                    Error::IncompatibleSupport("cannot mix discrete and grid measures".into())
                })?;
                labels.extend(d.support().cloned());
            }
            let labels: Vec<Label> = labels.into_iter().collect();
            let weights = states
                .iter()
                .map(|m| {
                    let d = m.as_discrete().expect("checked above");
                    labels.iter().map(|l| denoise(d.weight_of(l))).collect()
                })
                .collect();
            Ok((Layout::Discrete(labels), weights))
        }
        Some(Measure::Grid(g0)) => {
            let mut weights = Vec::with_capacity(states.len());
            for m in states {
                match m {
                    Measure::Grid(g) if g.same_grid(g0) => {
                        weights.push(g.density.iter().map(|&w| denoise(w)).collect())
                    }
                    _ => {
                        return Err(Error::IncompatibleSupport(
                            "curve states must share one grid".into(),
                        ))
                    }
                }
            }
            Ok((Layout::Grid(g0.clone()), weights))
        }
    }
}

fn denoise(w: f64) -> f64 {
    if w < NULL_WEIGHT {
        0.0
    } else {
        w
    }
}

/// Merges two sorted atom lists into aligned weight vectors (absent labels get 0).
pub(crate) fn merge_discrete(a: &DiscreteMeasure, b: &DiscreteMeasure) -> (Vec<Label>, Vec<f64>, Vec<f64>) {
    let (mut i, mut j) = (0, 0);
    let (xa, xb) = (&a.atoms, &b.atoms);
    let mut labels = Vec::with_capacity(xa.len().max(xb.len()));
    let mut w0 = Vec::with_capacity(labels.capacity());
    let mut w1 = Vec::with_capacity(labels.capacity());
    while i < xa.len() || j < xb.len() {
        let ord = match (xa.get(i), xb.get(j)) {
            (Some(p), Some(q)) => p.0.cmp(&q.0),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                labels.push(xa[i].0.clone());
                w0.push(denoise(xa[i].1));
                w1.push(0.0);
                i += 1;
            }
            Ordering::Greater => {
                labels.push(xb[j].0.clone());
                w0.push(0.0);
                w1.push(denoise(xb[j].1));
                j += 1;
            }
            Ordering::Equal => {
                labels.push(xa[i].0.clone());
                w0.push(denoise(xa[i].1));
                w1.push(denoise(xb[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    (labels, w0, w1)
}

pub(crate) fn pair(mu0: &Measure, mu1: &Measure) -> Result<Paired> {
    match (mu0, mu1) {
        (Measure::Discrete(a), Measure::Discrete(b)) => {
            let (labels, w0, w1) = merge_discrete(a, b);
            Ok(Paired {
                layout: Layout::Discrete(labels),
                w0,
                w1,
                volume: 1.0,
            })
        }
        (Measure::Grid(a), Measure::Grid(b)) => {
            if !a.same_grid(b) {
                return Err(Error::IncompatibleSupport(
                    "grid measures must share origin, spacing and shape".into(),
                ));
            }
            Ok(Paired {
                layout: Layout::Grid(a.clone()),
                w0: a.density.iter().map(|&w| denoise(w)).collect(),
                w1: b.density.iter().map(|&w| denoise(w)).collect(),
                volume: a.cell_volume(),
            })
        }
        _ => Err(Error::IncompatibleSupport(
            "cannot compare a discrete measure with a grid measure".into(),
        )),
    }
}

pub fn total_mass(mu: &Measure) -> f64 {
    mu.total_mass()
}

/// Product measure; the atom `(a, b)` carries `w1(a) * w2(b)`.
pub fn product(mu1: &DiscreteMeasure, mu2: &DiscreteMeasure) -> DiscreteMeasure {
    let mut atoms = Vec::with_capacity(mu1.len() * mu2.len());
    for (a, wa) in &mu1.atoms {
        for (b, wb) in &mu2.atoms {
            atoms.push((Label::pair(a.clone(), b.clone()), wa * wb));
        }
    }
    // Lexicographic order of (a, b) pairs follows from the sorted factors.
    DiscreteMeasure { atoms }
}

/// Image measure under `map`; weights of labels with a common image are summed.
pub fn pushforward(mu: &DiscreteMeasure, map: impl Fn(&Label) -> Label) -> DiscreteMeasure {
    let mut image: BTreeMap<Label, f64> = BTreeMap::new();
    for (label, w) in &mu.atoms {
        *image.entry(map(label)).or_insert(0.0) += w;
    }
    DiscreteMeasure {
        atoms: image.into_iter().collect(),
    }
}

pub fn normalize(mu: &Measure) -> Result<Measure> {
    let mass = mu.total_mass();
    if mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    match mu {
        Measure::Discrete(m) => Ok(Measure::Discrete(DiscreteMeasure {
            atoms: m.atoms.iter().map(|(l, w)| (l.clone(), w / mass)).collect(),
        })),
        Measure::Grid(g) => Ok(Measure::Grid(
            g.with_density(g.density.iter().map(|d| d / mass).collect())?,
        )),
    }
}

/// Total-variation norm of the signed measure `mu1 - mu0`.
pub fn tv_norm_diff(mu0: &Measure, mu1: &Measure) -> Result<f64> {
    let p = pair(mu0, mu1)?;
    Ok(p.volume * p.w0.iter().zip(&p.w1).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(s: &str) -> Label {
        Label::from(s)
    }

    #[test]
    fn total_mass_examples() {
        assert_eq!(DiscreteMeasure::empty().total_mass(), 0.0);
        let m = DiscreteMeasure::from_weights(&[0.5, 0.5]).unwrap();
        assert_eq!(m.total_mass(), 1.0);
        let g = GridMeasure::new(vec![0.0], vec![0.1], vec![10], vec![1.0; 10]).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_measures() {
        assert!(DiscreteMeasure::new(vec![lab("a"), lab("a")], vec![1.0, 1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![lab("a")], vec![-1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![lab("a")], vec![f64::NAN]).is_err());
        assert!(GridMeasure::new(vec![0.0], vec![0.0], vec![2], vec![1.0, 1.0]).is_err());
        assert!(GridMeasure::new(vec![0.0], vec![1.0], vec![3], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn product_of_diracs_and_uniforms() {
        let a = DiscreteMeasure::dirac("a", 1.0).unwrap();
        let b = DiscreteMeasure::dirac("b", 1.0).unwrap();
        let ab = product(&a, &b);
        assert_eq!(ab.atoms(), &[(Label::pair(lab("a"), lab("b")), 1.0)]);

        let u = DiscreteMeasure::from_weights(&[0.5, 0.5]).unwrap();
        let uu = product(&u, &u);
        assert_eq!(uu.len(), 4);
        assert!(uu.weights().iter().all(|&w| w == 0.25));
        // Stored order stays sorted.
        let labels: Vec<_> = uu.support().cloned().collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);
    }

    #[test]
    fn pushforward_examples() {
        let m = DiscreteMeasure::from_weights(&[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(pushforward(&m, |l| l.clone()), m);

        let collapsed = pushforward(&m, |_| lab("x"));
        assert_eq!(collapsed.len(), 1);
        assert!((collapsed.total_mass() - 1.0).abs() < 1e-15);

        let relabel = pushforward(&m, |l| match l {
            Label::Int(i) => Label::Int(10 - i),
            other => other.clone(),
        });
        assert_eq!(relabel.weight_of(&Label::Int(10)), 0.2);
        assert_eq!(relabel.weight_of(&Label::Int(8)), 0.5);
    }

    #[test]
    fn normalize_examples() {
        let m: Measure = DiscreteMeasure::from_weights(&[2.0, 2.0]).unwrap().into();
        let n = normalize(&m).unwrap();
        assert_eq!(n.as_discrete().unwrap().weights(), vec![0.5, 0.5]);
        assert_eq!(normalize(&n).unwrap(), n);
        let z: Measure = DiscreteMeasure::from_weights(&[0.0, 0.0]).unwrap().into();
        assert_eq!(normalize(&z), Err(Error::ZeroMass));
    }

    #[test]
    fn tv_examples() {
        let m: Measure = DiscreteMeasure::from_weights(&[0.1, 0.9]).unwrap().into();
        assert_eq!(tv_norm_diff(&m, &m).unwrap(), 0.0);
        let a: Measure = DiscreteMeasure::dirac("a", 1.0).unwrap().into();
        let b: Measure = DiscreteMeasure::dirac("b", 1.0).unwrap().into();
        assert_eq!(tv_norm_diff(&a, &b).unwrap(), 2.0);
    }

    #[test]
    fn grids_must_match() {
        let g0: Measure = GridMeasure::new(vec![0.0], vec![0.5], vec![2], vec![1.0, 1.0]).unwrap().into();
        let g1: Measure = GridMeasure::new(vec![0.1], vec![0.5], vec![2], vec![1.0, 1.0]).unwrap().into();
        let d: Measure = DiscreteMeasure::dirac("a", 1.0).unwrap().into();
        assert!(matches!(tv_norm_diff(&g0, &g1), Err(Error::IncompatibleSupport(_))));
        assert!(matches!(tv_norm_diff(&g0, &d), Err(Error::IncompatibleSupport(_))));
    }

    #[test]
    fn json_formats() {
        let text = r#"{"type":"discrete","support":["b","a",[1,2]],"weights":[0.25,0.5,0.25]}"#;
        let m = Measure::from_json(text).unwrap();
        let d = m.as_discrete().unwrap();
        assert_eq!(d.weight_of(&lab("a")), 0.5);
        assert_eq!(d.weight_of(&Label::Tuple(vec![Label::Int(1), Label::Int(2)])), 0.25);
        assert_eq!(Measure::from_json(&m.to_json()).unwrap(), m);

        let grid = r#"{"type":"grid","origin":[0,0],"spacing":[0.5,0.25],"shape":[2,2],"density":[1,2,3,4]}"#;
        let g = Measure::from_json(grid).unwrap();
        assert!((g.total_mass() - 1.25).abs() < 1e-15);
        assert_eq!(Measure::from_json(&g.to_json()).unwrap(), g);

        assert!(Measure::from_json(r#"{"type":"discrete","support":["a"],"weights":[-1]}"#).is_err());
    }

    #[test]
    fn from_fn_uses_cell_centers() {
        let g = GridMeasure::from_fn(vec![0.0, 10.0], vec![1.0, 2.0], vec![2, 3], |x| x[0] * 100.0 + x[1]).unwrap();
        assert_eq!(g.density(), &[61.0, 63.0, 65.0, 161.0, 163.0, 165.0]);
    }
}
