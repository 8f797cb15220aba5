//! Sampled functions on boxes in one or two dimensions, with translation,
//! modulation and dilation, midpoint-rule integration, and a seeded corpus.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtNonneg;

/// Axis-aligned box `[lo, hi]` in one or two dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxNd {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxNd {
    pub fn interval(a: f64, b: f64) -> Self {
        BoxNd { lo: vec![a], hi: vec![b] }
    }

    pub fn rect(a: f64, b: f64, c: f64, d: f64) -> Self {
        BoxNd { lo: vec![a, c], hi: vec![b, d] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.lo.len() == self.hi.len()
            && self.lo.iter().zip(&self.hi).all(|(a, b)| a.is_finite() && b.is_finite() && a < b)
    }

    /// Half-open membership `lo ≤ x < hi` on every axis.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| *a <= *x && *x < *b)
    }

    pub fn intersect(&self, other: &BoxNd) -> BoxNd {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).zip(&lo).map(|((a, b), l)| a.min(*b).max(*l)).collect();
        BoxNd { lo, hi }
    }

    pub fn translated(&self, y: &[f64]) -> BoxNd {
        BoxNd {
            lo: self.lo.iter().zip(y).map(|(a, y)| a + y).collect(),
            hi: self.hi.iter().zip(y).map(|(b, y)| b + y).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> BoxNd {
        BoxNd {
            lo: self.lo.iter().map(|a| a * c).collect(),
            hi: self.hi.iter().map(|b| b * c).collect(),
        }
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

/// Analytic one-variable profiles. Two-dimensional sampling uses the tensor
/// product `s(x₀)s(x₁)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Descriptor {
    /// `χ_{[a,b)}`
    Indicator { a: f64, b: f64 },
    /// `e^{−πx²}`
    Gaussian,
    /// `max(0, 1 − |x|)`
    Hat,
    /// `e^{−π(x−s/2)²} + e^{−π(x+s/2)²}`
    TwoBump { separation: f64 },
    /// `levels[j]` on `[start + j·width, start + (j+1)·width)`
    Steps { start: f64, width: f64, levels: Vec<f64> },
    Zero,
}

const GAUSSIAN_REACH: f64 = 6.0;
const TWO_BUMP_SEPARATION: f64 = 4.0;

impl Descriptor {
    /// Parses a short tag: `box01`, `box02`, `box:<a>:<b>`, `gaussian`, `hat`,
    /// `twobump`, `steps:<seed>`, `zero`.
    pub fn parse(tag: &str) -> Result<Descriptor> {
        let bad = || Error::UnknownDescriptor(tag.to_string());
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        Ok(match tag {
            "box01" => Descriptor::Indicator { a: 0.0, b: 1.0 },
            "box02" => Descriptor::Indicator { a: 0.0, b: 2.0 },
            "gaussian" => Descriptor::Gaussian,
            "hat" => Descriptor::Hat,
            "twobump" => Descriptor::TwoBump { separation: TWO_BUMP_SEPARATION },
            "zero" => Descriptor::Zero,
            _ => {
                if let Some(rest) = tag.strip_prefix("box:") {
                    let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                    let (a, b) = (num(a)?, num(b)?);
                    if !(a < b) {
                        return Err(bad());
                    }
                    Descriptor::Indicator { a, b }
                } else if let Some(seed) = tag.strip_prefix("steps:") {
                    random_steps(seed.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Descriptor::Indicator { a, b } => {
                if *a <= x && x < *b {
                    1.0
                } else {
                    0.0
                }
            }
            Descriptor::Gaussian => (-PI * x * x).exp(),
            Descriptor::Hat => (1.0 - x.abs()).max(0.0),
            Descriptor::TwoBump { separation } => {
                let c = 0.5 * separation;
                (-PI * (x - c) * (x - c)).exp() + (-PI * (x + c) * (x + c)).exp()
            }
            Descriptor::Steps { start, width, levels } => {
                let j = ((x - start) / width).floor();
                if j >= 0.0 && (j as usize) < levels.len() {
                    levels[j as usize]
                } else {
                    0.0
                }
            }
            Descriptor::Zero => 0.0,
        }
    }

    /// Interval outside which the profile vanishes (or is negligible: the
    /// Gaussian tails beyond 6 are below 1e-49).
    pub fn natural_support(&self) -> (f64, f64) {
        match self {
            Descriptor::Indicator { a, b } => (*a, *b),
            Descriptor::Gaussian => (-GAUSSIAN_REACH, GAUSSIAN_REACH),
            Descriptor::Hat => (-1.0, 1.0),
            Descriptor::TwoBump { separation } => {
                let r = 0.5 * separation + GAUSSIAN_REACH;
                (-r, r)
            }
            Descriptor::Steps { start, width, levels } => (*start, start + width * levels.len() as f64),
            Descriptor::Zero => (0.0, 1.0),
        }
    }
}

fn random_steps(seed: u64) -> Descriptor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = (0..16).map(|_| rng.random::<f64>()).collect();
    Descriptor::Steps { start: 0.0, width: 0.25, levels }
}

/// `x ↦ amp · e^{2πi⟨freq,x⟩} · Π s(scale·xᵢ + shiftᵢ) · χ_window(x)`.
///
/// The family is closed under translation, modulation, dilation, scalar
/// multiples and restriction, so transformed functions can be resampled
/// exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Source {
    pub descriptor: Descriptor,
    pub amp: Complex64,
    pub scale: f64,
    pub shift: Vec<f64>,
    pub freq: Vec<f64>,
    pub window: Option<BoxNd>,
}

impl Source {
    fn new(descriptor: Descriptor, dim: usize) -> Self {
        Source {
            descriptor,
            amp: Complex64::new(1.0, 0.0),
            scale: 1.0,
            shift: vec![0.0; dim],
            freq: vec![0.0; dim],
            window: None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        if let Some(w) = &self.window {
            if !w.contains(x) {
                return Complex64::new(0.0, 0.0);
            }
        }
        let profile: f64 = x
            .iter()
            .zip(&self.shift)
            .map(|(x, b)| self.descriptor.eval(self.scale * x + b))
            .product();
        if profile == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phase: f64 = x.iter().zip(&self.freq).map(|(x, f)| x * f).sum();
        let carrier = if phase == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, 2.0 * PI * phase)
        };
        self.amp * carrier * profile
    }
}

/// Operators acting on a [`GridFunction`].
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    /// `x ↦ f(λx)`
    Dilate(f64),
    /// `x ↦ f(x − y)`
    Translate(Vec<f64>),
    /// `x ↦ e^{2πi⟨ξ,x⟩} f(x)`
    Modulate(Vec<f64>),
    /// `x ↦ f(x)·χ_B(x)`, membership by cell midpoint
    Restrict(BoxNd),
}

/// Complex samples at the midpoints of a uniform grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
    samples: Vec<Complex64>,
    source: Option<Source>,
    support: BoxNd,
}

impl GridFunction {
    /// Samples `descriptor` at the midpoints of `n` cells per axis of `bx`.
    pub fn sample(descriptor: &Descriptor, bx: &BoxNd, n: usize) -> Result<GridFunction> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 points per axis, got {n}")));
        }
        if !bx.is_nondegenerate() || !(1..=2).contains(&bx.dim()) {
            return Err(Error::InvalidArgument(format!("degenerate or unsupported box {bx:?}")));
        }
        let dim = bx.dim();
        let spacing: Vec<f64> = bx.lo.iter().zip(&bx.hi).map(|(a, b)| (b - a) / n as f64).collect();
        let mut f = GridFunction {
            origin: bx.lo.clone(),
            spacing,
            shape: vec![n; dim],
            samples: Vec::new(),
            source: Some(Source::new(descriptor.clone(), dim)),
            support: bx.clone(),
        };
        f.refresh_from_source();
        Ok(f)
    }

    /// Samples `descriptor` over its natural support at `per_unit` cells per
    /// unit length.
    pub fn sample_natural(descriptor: &Descriptor, per_unit: usize) -> Result<GridFunction> {
        let (a, b) = descriptor.natural_support();
        let n = (((b - a) * per_unit as f64).round() as usize).max(2);
        GridFunction::sample(descriptor, &BoxNd::interval(a, b), n)
    }

    /// Wraps raw samples (row-major, last axis fastest) without an analytic source.
    pub fn from_samples(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>, samples: Vec<Complex64>) -> Result<Self> {
        let dim = origin.len();
        if !(1..=2).contains(&dim) || spacing.len() != dim || shape.len() != dim {
            return Err(Error::InvalidArgument("grid axes disagree".into()));
        }
        if spacing.iter().any(|h| !(*h > 0.0)) || shape.iter().product::<usize>() != samples.len() {
            return Err(Error::InvalidArgument("bad spacing or sample count".into()));
        }
        let hi = (0..dim).map(|a| origin[a] + shape[a] as f64 * spacing[a]).collect();
        let support = BoxNd { lo: origin.clone(), hi };
        Ok(GridFunction { origin, spacing, shape, samples, source: None, support })
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
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

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn source(&self) -> Option<&Source> {
        self.source.as_ref()
    }

    pub fn support(&self) -> &BoxNd {
        &self.support
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Box covered by the grid cells.
    pub fn grid_box(&self) -> BoxNd {
        BoxNd {
            lo: self.origin.clone(),
            hi: (0..self.dim()).map(|a| self.origin[a] + self.shape[a] as f64 * self.spacing[a]).collect(),
        }
    }

    /// Midpoint of the cell with flat index `idx`.
    pub fn midpoint(&self, idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        let mut rem = idx;
        for a in (0..self.dim()).rev() {
            let i = rem % self.shape[a];
            rem /= self.shape[a];
            x[a] = self.origin[a] + (i as f64 + 0.5) * self.spacing[a];
        }
        x
    }

    /// `(midpoint, value)` for every cell of a one-dimensional function.
    pub fn cells_1d(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let (o, h) = (self.origin[0], self.spacing[0]);
        self.samples.iter().enumerate().map(move |(i, v)| (o + (i as f64 + 0.5) * h, *v))
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    fn refresh_from_source(&mut self) {
        let src = self.source.as_ref().expect("source present");
        let n: usize = self.shape.iter().product();
        self.samples = (0..n).map(|i| src.eval(&self.midpoint(i))).collect();
    }

    /// Applies one operator.
    pub fn transform(&self, op: &Transform) -> Result<GridFunction> {
        let mut out = self.clone();
        match op {
            Transform::Dilate(lambda) => {
                let l = *lambda;
                if !(l > 0.0 && l.is_finite()) {
                    return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {l}")));
                }
                // Same cell count on the grid scaled by 1/λ: new midpoints map onto old ones.
                out.origin = self.origin.iter().map(|o| o / l).collect();
                out.spacing = self.spacing.iter().map(|h| h / l).collect();
                out.support = self.support.scaled(1.0 / l);
                if let Some(src) = &mut out.source {
                    src.scale *= l;
                    src.freq.iter_mut().for_each(|f| *f *= l);
                    src.window = src.window.as_ref().map(|w| w.scaled(1.0 / l));
                    out.refresh_from_source();
                }
            }
            Transform::Translate(y) => {
                self.check_dim(y.len())?;
                out.origin = self.origin.iter().zip(y).map(|(o, y)| o + y).collect();
                out.support = self.support.translated(y);
                if let Some(src) = &mut out.source {
                    let phase: f64 = src.freq.iter().zip(y).map(|(f, y)| f * y).sum();
                    src.amp *= Complex64::from_polar(1.0, -2.0 * PI * phase);
                    for (b, y) in src.shift.iter_mut().zip(y) {
                        *b -= src.scale * y;
                    }
                    src.window = src.window.as_ref().map(|w| w.translated(y));
                }
                // samples at the shifted midpoints are the old samples
            }
            Transform::Modulate(xi) => {
                self.check_dim(xi.len())?;
                for (i, v) in out.samples.iter_mut().enumerate() {
                    let x = self.midpoint(i);
                    let phase: f64 = x.iter().zip(xi).map(|(x, f)| x * f).sum();
                    *v *= Complex64::from_polar(1.0, 2.0 * PI * phase);
                }
                if let Some(src) = &mut out.source {
                    src.freq.iter_mut().zip(xi).for_each(|(f, x)| *f += x);
                }
            }
            Transform::Restrict(bx) => {
                self.check_dim(bx.dim())?;
                for (i, v) in out.samples.iter_mut().enumerate() {
                    if !bx.contains(&self.midpoint(i)) {
                        *v = Complex64::new(0.0, 0.0);
                    }
                }
                out.support = self.support.intersect(bx);
                if let Some(src) = &mut out.source {
                    src.window = Some(match &src.window {
                        Some(w) => w.intersect(bx),
                        None => bx.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn dilate(&self, lambda: f64) -> Result<GridFunction> {
        self.transform(&Transform::Dilate(lambda))
    }

    pub fn translate(&self, y: f64) -> Result<GridFunction> {
        self.transform(&Transform::Translate(vec![y]))
    }

    pub fn modulate(&self, xi: f64) -> Result<GridFunction> {
        self.transform(&Transform::Modulate(vec![xi]))
    }

    pub fn restrict(&self, bx: &BoxNd) -> Result<GridFunction> {
        self.transform(&Transform::Restrict(bx.clone()))
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::InvalidArgument(format!("expected a {}-dimensional parameter, got {d}", self.dim())));
        }
        Ok(())
    }

    /// `c·f`.
    pub fn scaled(&self, c: Complex64) -> GridFunction {
        let mut out = self.clone();
        out.samples.iter_mut().for_each(|v| *v *= c);
        if let Some(src) = &mut out.source {
            src.amp *= c;
        }
        out
    }

    /// `|f|`, dropping the analytic source.
    pub fn abs(&self) -> GridFunction {
        let mut out = self.clone();
        out.samples.iter_mut().for_each(|v| *v = Complex64::new(v.norm(), 0.0));
        out.source = None;
        out
    }

    /// Value at an arbitrary point: the analytic source if present, otherwise
    /// (bi)linear interpolation between midpoints, zero off the grid.
    pub fn value_at(&self, x: &[f64]) -> Complex64 {
        if let Some(src) = &self.source {
            return src.eval(x);
        }
        let gb = self.grid_box();
        if x.iter().zip(gb.lo.iter().zip(&gb.hi)).any(|(x, (a, b))| x < a || x > b) {
            return Complex64::new(0.0, 0.0);
        }
        // per axis: the two neighbouring midpoints and weights
        let mut stencil: Vec<[(usize, f64); 2]> = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            let s = (x[a] - self.origin[a]) / self.spacing[a] - 0.5;
            let n = self.shape[a];
            let i0 = s.floor();
            let t = s - i0;
            let i0 = i0 as isize;
            let clamp = |i: isize| i.clamp(0, n as isize - 1) as usize;
            stencil.push([(clamp(i0), 1.0 - t), (clamp(i0 + 1), t)]);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        if self.dim() == 1 {
            for (i, w) in stencil[0] {
                acc += self.samples[i] * w;
            }
        } else {
            for (i, wi) in stencil[0] {
                for (j, wj) in stencil[1] {
                    acc += self.samples[i * self.shape[1] + j] * (wi * wj);
                }
            }
        }
        acc
    }

    /// Resamples onto the grid `(origin, spacing, shape)`. When the new grid
    /// lies on the same lattice the samples are copied exactly.
    pub fn resample(&self, origin: &[f64], spacing: &[f64], shape: &[usize]) -> Result<GridFunction> {
        let n: usize = shape.iter().product();
        let mut out = GridFunction::from_samples(origin.to_vec(), spacing.to_vec(), shape.to_vec(), vec![Complex64::new(0.0, 0.0); n])?;
        if let Some(offsets) = self.lattice_offsets(&out) {
            for idx in 0..n {
                let mut rem = idx;
                let mut src_idx = 0usize;
                let mut inside = true;
                let mut stride = 1usize;
                for a in (0..out.dim()).rev() {
                    let i = (rem % shape[a]) as i64 + offsets[a];
                    rem /= shape[a];
                    if i < 0 || i >= self.shape[a] as i64 {
                        inside = false;
                        break;
                    }
                    src_idx += i as usize * stride;
                    stride *= self.shape[a];
                }
                if inside {
                    out.samples[idx] = self.samples[src_idx];
                }
            }
        } else {
            for idx in 0..n {
                out.samples[idx] = self.value_at(&out.midpoint(idx));
            }
        }
        out.source = self.source.clone();
        out.support = self.support.intersect(&out.grid_box());
        Ok(out)
    }

    /// Integer offsets of `other`'s cells in `self`'s indexing, when both
    /// share spacing and their origins differ by whole cells.
    fn lattice_offsets(&self, other: &GridFunction) -> Option<Vec<i64>> {
        if other.dim() != self.dim() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            let h = self.spacing[a];
            if (other.spacing[a] - h).abs() > 1e-12 * h {
                return None;
            }
            let k = (other.origin[a] - self.origin[a]) / h;
            if (k - k.round()).abs() > 1e-6 {
                return None;
            }
            out.push(k.round() as i64);
        }
        Some(out)
    }

    /// Grid on `self`'s lattice covering both `self` and `other`.
    fn union_grid(&self, other: &GridFunction) -> (Vec<f64>, Vec<usize>) {
        let a_box = self.grid_box();
        let b_box = other.grid_box();
        let mut origin = Vec::new();
        let mut shape = Vec::new();
        for a in 0..self.dim() {
            let h = self.spacing[a];
            let lo_cells = ((b_box.lo[a] - a_box.lo[a]) / h).floor().min(0.0);
            let hi_cells = ((b_box.hi[a] - a_box.lo[a]) / h).ceil().max(self.shape[a] as f64);
            origin.push(a_box.lo[a] + lo_cells * h);
            shape.push((hi_cells - lo_cells).round() as usize);
        }
        (origin, shape)
    }

    fn combine(&self, other: &GridFunction, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<GridFunction> {
        self.check_dim(other.dim())?;
        let (origin, shape) = self.union_grid(other);
        let a = self.resample(&origin, &self.spacing, &shape)?;
        let b = other.resample(&origin, &self.spacing, &shape)?;
        let samples = a.samples.iter().zip(&b.samples).map(|(x, y)| op(*x, *y)).collect();
        GridFunction::from_samples(origin, self.spacing.clone(), shape, samples)
    }

    /// Pointwise sum on a common grid (the lattice of `self`).
    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.combine(other, |x, y| x + y)
    }

    /// Pointwise product on a common grid (the lattice of `self`).
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.combine(other, |x, y| x * y)
    }
}

/// Midpoint-rule integral `Σ integrand(f(xᵢ))·|cell|`; infinite as soon as
/// any cell contributes infinity.
pub fn integrate(f: &GridFunction, integrand: impl Fn(Complex64) -> ExtNonneg) -> ExtNonneg {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for z in &f.samples {
        let v = match integrand(*z) {
            ExtNonneg::Infinite => return ExtNonneg::Infinite,
            ExtNonneg::Finite(v) => v,
        };
        // Neumaier compensated summation, fixed left-to-right order
        let t = sum + v;
        if t == f64::INFINITY {
            return ExtNonneg::Infinite;
        }
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    ExtNonneg::from_f64((sum + comp) * f.cell_volume())
}

/// `∫|f|`.
pub fn l1_norm(f: &GridFunction) -> f64 {
    integrate(f, |z| ExtNonneg::Finite(z.norm())).to_f64()
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub f: GridFunction,
}

/// Cells per unit length used for every corpus member; a shared lattice
/// keeps sums and products of members exact.
pub const CORPUS_RESOLUTION: usize = 256;

/// The fixed test corpus: unit box, Gaussian, hat, two-bump and a seeded
/// random step function on `[0, 4]`.
pub fn corpus(seed: u64) -> Vec<CorpusEntry> {
    let items = [
        ("box01", Descriptor::Indicator { a: 0.0, b: 1.0 }),
        ("gaussian", Descriptor::Gaussian),
        ("hat", Descriptor::Hat),
        ("twobump", Descriptor::TwoBump { separation: TWO_BUMP_SEPARATION }),
        ("steps", random_steps(seed)),
    ];
    items
        .into_iter()
        .map(|(name, d)| CorpusEntry {
            name: name.to_string(),
            f: GridFunction::sample_natural(&d, CORPUS_RESOLUTION).expect("corpus boxes are valid"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn box_samples_are_ones() {
        let f = GridFunction::sample(&Descriptor::parse("box01").unwrap(), &BoxNd::interval(0.0, 1.0), 1024).unwrap();
        assert_eq!(f.samples().len(), 1024);
        assert!(f.samples().iter().all(|z| *z == c(1.0)));
    }

    #[test]
    fn gaussian_peak_and_integral() {
        let f = GridFunction::sample(&Descriptor::Gaussian, &BoxNd::interval(-6.0, 6.0), 4096).unwrap();
        let (imax, _) = f
            .samples()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.re.partial_cmp(&b.1.re).unwrap())
            .unwrap();
        let x = f.midpoint(imax)[0];
        assert!(x.abs() <= f.spacing()[0]);
        let total = integrate(&f, |z| ExtNonneg::Finite(z.re)).to_f64();
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn hat_value_at_half() {
        let f = GridFunction::sample(&Descriptor::Hat, &BoxNd::interval(-2.0, 2.0), 8).unwrap();
        // midpoints -1.75, -1.25, ..., 0.25, 0.75, ...
        assert_eq!(f.samples()[4], c(0.75));
        assert_eq!(Descriptor::Hat.eval(0.5), 0.5);
    }

    #[test]
    fn dilating_box_rescales_support() {
        let f = GridFunction::sample(&Descriptor::parse("box01").unwrap(), &BoxNd::interval(0.0, 1.0), 64).unwrap();
        let g = f.dilate(2.0).unwrap();
        assert_eq!(g.support(), &BoxNd::interval(0.0, 0.5));
        assert!((l1_norm(&g) - 0.5).abs() < 1e-15);
        let g = f.dilate(0.5).unwrap();
        assert_eq!(g.support(), &BoxNd::interval(0.0, 2.0));
        assert!((l1_norm(&g) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn translate_round_trip() {
        let f = GridFunction::sample(&Descriptor::Gaussian, &BoxNd::interval(-6.0, 6.0), 512).unwrap();
        let g = f.translate(1.0).unwrap().translate(-1.0).unwrap();
        for (a, b) in f.samples().iter().zip(g.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((g.origin()[0] - f.origin()[0]).abs() < 1e-12);
        // the source follows the shift
        let h = f.translate(0.3).unwrap();
        let x = h.midpoint(100);
        assert!((h.source().unwrap().eval(&x) - h.samples()[100]).norm() < 1e-12);
    }

    #[test]
    fn modulation_and_restriction() {
        let f = GridFunction::sample(&Descriptor::parse("box01").unwrap(), &BoxNd::interval(0.0, 1.0), 16).unwrap();
        let m = f.modulate(1.0).unwrap();
        for i in 0..16 {
            let x = m.midpoint(i);
            assert!((m.samples()[i] - m.source().unwrap().eval(&x)).norm() < 1e-12);
            assert!((m.samples()[i].norm() - 1.0).abs() < 1e-12);
        }
        let r = f.restrict(&BoxNd::interval(0.25, 0.5)).unwrap();
        assert!((l1_norm(&r) - 0.25).abs() < 1e-15);
        assert_eq!(r.support(), &BoxNd::interval(0.25, 0.5));
    }

    #[test]
    fn zero_integrates_to_zero() {
        let f = GridFunction::sample(&Descriptor::Zero, &BoxNd::interval(0.0, 1.0), 16).unwrap();
        assert_eq!(integrate(&f, |z| ExtNonneg::Finite(z.norm())), ExtNonneg::ZERO);
        assert!(f.is_zero());
    }

    #[test]
    fn infinite_cell_dominates() {
        let f = GridFunction::sample(&Descriptor::Hat, &BoxNd::interval(-1.0, 1.0), 16).unwrap();
        let v = integrate(&f, |z| if z.re > 0.9 { ExtNonneg::Infinite } else { ExtNonneg::Finite(z.re) });
        assert!(v.is_infinite());
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(1);
        let b = corpus(1);
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.f.samples(), y.f.samples());
        }
        let steps = &a[4].f;
        assert_eq!(steps.support(), &BoxNd::interval(0.0, 4.0));
        assert!(steps.samples().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
        assert_ne!(corpus(2)[4].f.samples(), steps.samples());
    }

    #[test]
    fn sums_on_shared_lattice_are_exact() {
        let cp = corpus(1);
        let s = cp[0].f.add(&cp[2].f).unwrap();
        // box01 + hat at x = 0.5: 1 + 0.5 (midpoint 0.5 ± h/2 straddles; check a cell)
        let i = s.cells_1d().position(|(x, _)| (x - (0.5 + 0.5 / 256.0)).abs() < 1e-12).unwrap();
        let x = 0.5 + 0.5 / 256.0;
        assert!((s.samples()[i].re - (1.0 + (1.0 - x))).abs() < 1e-15);
        assert!((l1_norm(&s) - (l1_norm(&cp[0].f) + l1_norm(&cp[2].f))).abs() < 1e-12);
    }

    #[test]
    fn linear_interpolation_without_source() {
        let f = GridFunction::from_samples(vec![0.0], vec![1.0], vec![3], vec![c(0.0), c(1.0), c(4.0)]).unwrap();
        assert!((f.value_at(&[1.0]) - c(0.5)).norm() < 1e-15);
        assert!((f.value_at(&[2.25]) - c(3.25)).norm() < 1e-15);
        assert_eq!(f.value_at(&[5.0]), c(0.0));
    }

    #[test]
    fn parse_rejects_unknown() {
        assert!(matches!(Descriptor::parse("triangle"), Err(Error::UnknownDescriptor(_))));
        assert!(Descriptor::parse("box:1:0").is_err());
        assert_eq!(Descriptor::parse("box:0:3").unwrap(), Descriptor::Indicator { a: 0.0, b: 3.0 });
    }
}
