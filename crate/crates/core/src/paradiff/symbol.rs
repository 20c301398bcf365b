use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;

use super::zeta::{ZetaFn, FD_STEP};
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::FftReal;
use crate::torus::{torus_area, FourierField, Grid};

/// Above this many row pairs a product of separable symbols is sampled on the grid instead.
const MAX_EXACT_PAIRS: usize = 1 << 22;

pub type Rows<T> = BTreeMap<LatticePoint, Complex<T>>;
type Samples<T> = Arc<dyn Fn([T; 2]) -> Vec<Complex<T>> + Send + Sync>;
type SampleGradient<T> = Arc<dyn Fn([T; 2]) -> [Vec<Complex<T>>; 2] + Send + Sync>;

/// One separable piece c(x) p(zeta), stored through the x-Fourier rows of c.
#[derive(Clone, Debug)]
pub struct Term<T> {
    pub rows: Arc<Rows<T>>,
    pub zeta: ZetaFn<T>,
}

#[derive(Clone)]
struct Sampled<T: FftReal> {
    value: Samples<T>,
    gradient: Option<SampleGradient<T>>,
}

#[derive(Clone)]
enum Repr<T: FftReal> {
    Separable(Vec<Term<T>>),
    Sampled(Sampled<T>),
}

/// A symbol a(x, zeta) of declared order, read through its x-Fourier rows a~(rho, zeta).
///
/// Separable symbols are finite sums of c(x) p(zeta) and carry exact rows. Sampled symbols
/// return M^2 spatial samples for each zeta and are tied to a grid.
#[derive(Clone)]
pub struct Symbol<T: FftReal> {
    order: T,
    repr: Repr<T>,
    grid: Option<Grid<T>>,
}

impl<T: FftReal> std::fmt::Debug for Symbol<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut d = f.debug_struct("Symbol");
        d.field("order", &self.order);
        match &self.repr {
            Repr::Separable(t) => d.field("terms", &t.len()),
            Repr::Sampled(_) => d.field("sampled", &true),
        };
        d.field("grid", &self.grid.as_ref().map(|g| g.size())).finish()
    }
}

#[inline]
fn czero<T: FftReal>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Rows below this fraction of the largest one are transform noise and dropped.
pub const ROW_PRUNE: f64 = 1e-14;

fn rows_of<T: FftReal>(f: &FourierField<T>) -> Rows<T> {
    let top = f.coeffs().iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let cut = top * T::lit(ROW_PRUNE);
    f.support().into_iter().filter(|(_, c)| c.norm() > cut).collect()
}

fn convolve<T: FftReal>(a: &Rows<T>, b: &Rows<T>) -> Rows<T> {
    let s = torus_area::<T>().recip();
    let mut out = Rows::new();
    for (ra, ca) in a {
        for (rb, cb) in b {
            let e = out.entry(*ra + *rb).or_insert_with(czero);
            *e = *e + *ca * *cb * s;
        }
    }
    out.retain(|_, c| *c != czero());
    out
}

fn times_i_rho<T: FftReal>(a: &Rows<T>, j: usize) -> Rows<T> {
    a.iter()
        .filter_map(|(r, c)| {
            let k = if j == 0 { r.x } else { r.y };
            (k != 0).then(|| (*r, *c * Complex::new(T::zero(), T::from_i64(k).unwrap())))
        })
        .collect()
}

fn shift<T: FftReal>(z: [T; 2], j: usize, h: T) -> [T; 2] {
    let mut p = z;
    p[j] = p[j] + h;
    p
}

fn combine<T: FftReal>(a: Vec<Complex<T>>, b: Vec<Complex<T>>, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Vec<Complex<T>> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

impl<T: FftReal> Symbol<T> {
    /// x-independent symbol p(zeta).
    pub fn multiplier(order: T, zeta: ZetaFn<T>) -> Self {
        let mut rows = Rows::new();
        rows.insert(LatticePoint::ZERO, Complex::new(torus_area::<T>(), T::zero()));
        Self {
            order,
            repr: Repr::Separable(vec![Term {
                rows: Arc::new(rows),
                zeta,
            }]),
            grid: None,
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::multiplier(T::zero(), ZetaFn::constant(c))
    }

    /// The function c(x) as an order-0 symbol.
    pub fn function(c: &FourierField<T>) -> Self {
        Self::product(c, ZetaFn::one(), T::zero())
    }

    /// c(x) p(zeta).
    pub fn product(c: &FourierField<T>, zeta: ZetaFn<T>, order: T) -> Self {
        Self {
            order,
            repr: Repr::Separable(vec![Term {
                rows: Arc::new(rows_of(c)),
                zeta,
            }]),
            grid: Some(c.grid().clone()),
        }
    }

    pub fn from_terms(order: T, terms: Vec<Term<T>>, grid: Option<Grid<T>>) -> Self {
        Self {
            order,
            repr: Repr::Separable(terms),
            grid,
        }
    }

    /// Symbol given by its spatial samples at each zeta.
    pub fn sampled(order: T, grid: &Grid<T>, value: impl Fn([T; 2]) -> Vec<Complex<T>> + Send + Sync + 'static) -> Self {
        Self {
            order,
            repr: Repr::Sampled(Sampled {
                value: Arc::new(value),
                gradient: None,
            }),
            grid: Some(grid.clone()),
        }
    }

    /// Attaches an exact zeta-gradient to a sampled symbol.
    pub fn with_sample_gradient(mut self, g: impl Fn([T; 2]) -> [Vec<Complex<T>>; 2] + Send + Sync + 'static) -> Self {
        if let Repr::Sampled(s) = &mut self.repr {
            s.gradient = Some(Arc::new(g));
        }
        self
    }

    pub fn order(&self) -> T {
        self.order
    }

    pub fn with_order(mut self, order: T) -> Self {
        self.order = order;
        self
    }

    pub fn grid(&self) -> Option<&Grid<T>> {
        self.grid.as_ref()
    }

    pub fn is_separable(&self) -> bool {
        matches!(self.repr, Repr::Separable(_))
    }

    pub fn terms(&self) -> Option<&[Term<T>]> {
        match &self.repr {
            Repr::Separable(t) => Some(t),
            Repr::Sampled(_) => None,
        }
    }

    /// True when zeta-derivatives are computed without differencing.
    pub fn has_exact_zeta_gradient(&self) -> bool {
        match &self.repr {
            Repr::Separable(t) => t.iter().all(|t| t.zeta.has_exact_gradient()),
            Repr::Sampled(s) => s.gradient.is_some(),
        }
    }

    fn grid_for(&self, other: Option<&Self>) -> Result<Grid<T>> {
        let a = self.grid.as_ref();
        let b = other.and_then(|o| o.grid.as_ref());
        match (a, b) {
            (Some(x), Some(y)) if x != y => Err(Error::GridMismatch {
                left: x.size(),
                right: y.size(),
            }),
            (Some(x), _) | (None, Some(x)) => Ok(x.clone()),
            (None, None) => Err(invalid("grid", "operation needs a sampling grid")),
        }
    }

    fn common_grid(a: &Self, b: &Self) -> Option<Grid<T>> {
        a.grid.clone().or_else(|| b.grid.clone())
    }

    /// a~(rho, zeta). Sampled symbols transform their samples, so only grid rows are visible.
    pub fn eval(&self, rho: LatticePoint, zeta: [T; 2]) -> Complex<T> {
        match &self.repr {
            Repr::Separable(terms) => terms.iter().fold(czero(), |acc, t| match t.rows.get(&rho) {
                Some(c) => acc + *c * t.zeta.eval(zeta),
                None => acc,
            }),
            Repr::Sampled(_) => {
                let g = self.grid.as_ref().expect("sampled symbols carry a grid");
                match g.index(rho) {
                    Some(i) => self.rows_at(g, zeta)[i],
                    None => czero(),
                }
            }
        }
    }

    /// All rows a~(rho, zeta) for rho on the grid, in storage order.
    pub fn rows_at(&self, grid: &Grid<T>, zeta: [T; 2]) -> Vec<Complex<T>> {
        match &self.repr {
            Repr::Separable(terms) => {
                let mut out = vec![czero(); grid.len()];
                for t in terms {
                    let p = t.zeta.eval(zeta);
                    for (r, c) in t.rows.iter() {
                        if let Some(i) = grid.index(*r) {
                            out[i] = out[i] + *c * p;
                        }
                    }
                }
                out
            }
            Repr::Sampled(s) => FourierField::analyze(grid, &(s.value)(zeta))
                .expect("sample count matches grid")
                .coeffs()
                .to_vec(),
        }
    }

    /// Spatial samples a(x, zeta) on the grid.
    pub fn samples_at(&self, grid: &Grid<T>, zeta: [T; 2]) -> Vec<Complex<T>> {
        match &self.repr {
            Repr::Sampled(s) => (s.value)(zeta),
            Repr::Separable(_) => {
                let c = self.rows_at(grid, zeta);
                FourierField::from_coeffs(grid, c, false).expect("size matches").synthesize()
            }
        }
    }

    /// Samples of grad_zeta a at zeta, exact where available, central differences otherwise.
    pub fn zeta_gradient_samples(&self, grid: &Grid<T>, zeta: [T; 2]) -> [Vec<Complex<T>>; 2] {
        match &self.repr {
            Repr::Sampled(Sampled { gradient: Some(g), .. }) => g(zeta),
            Repr::Separable(terms) => {
                let mut out = [vec![czero(); grid.len()], vec![czero(); grid.len()]];
                for t in terms {
                    let dp = t.zeta.gradient(zeta);
                    for (r, c) in t.rows.iter() {
                        if let Some(i) = grid.index(*r) {
                            for j in 0..2 {
                                out[j][i] = out[j][i] + *c * dp[j];
                            }
                        }
                    }
                }
                out.map(|c| FourierField::from_coeffs(grid, c, false).expect("size matches").synthesize())
            }
            Repr::Sampled(_) => {
                let h = T::lit(FD_STEP);
                let d = |j: usize| {
                    let p = self.samples_at(grid, shift(zeta, j, h));
                    let m = self.samples_at(grid, shift(zeta, j, -h));
                    combine(p, m, |a, b| (a - b) / (h + h))
                };
                [d(0), d(1)]
            }
        }
    }

    /// Samples of grad_x a at zeta, computed spectrally.
    pub fn x_gradient_samples(&self, grid: &Grid<T>, zeta: [T; 2]) -> [Vec<Complex<T>>; 2] {
        let rows = self.rows_at(grid, zeta);
        let f = FourierField::from_coeffs(grid, rows, false).expect("size matches");
        [f.partial(0).synthesize(), f.partial(1).synthesize()]
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        match (&self.repr, &other.repr) {
            (Repr::Separable(a), Repr::Separable(b)) => Self {
                order,
                repr: Repr::Separable(a.iter().chain(b).cloned().collect()),
                grid: Self::common_grid(self, other),
            },
            _ => {
                let grid = self.grid_for(Some(other)).expect("sampled symbols carry a grid");
                let (a, b, g) = (self.clone(), other.clone(), grid.clone());
                let mut s = Self::sampled(order, &grid, move |z| combine(a.samples_at(&g, z), b.samples_at(&g, z), |x, y| x + y));
                if self.has_exact_zeta_gradient() && other.has_exact_zeta_gradient() {
                    let (a, b, g) = (self.clone(), other.clone(), grid);
                    s = s.with_sample_gradient(move |z| {
                        let [a0, a1] = a.zeta_gradient_samples(&g, z);
                        let [b0, b1] = b.zeta_gradient_samples(&g, z);
                        [combine(a0, b0, |x, y| x + y), combine(a1, b1, |x, y| x + y)]
                    });
                }
                s
            }
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        match &self.repr {
            Repr::Separable(terms) => Self {
                order: self.order,
                repr: Repr::Separable(
                    terms
                        .iter()
                        .map(|t| Term {
                            rows: t.rows.clone(),
                            zeta: t.zeta.scale(c),
                        })
                        .collect(),
                ),
                grid: self.grid.clone(),
            },
            Repr::Sampled(s) => {
                let v = s.value.clone();
                let mut out = Self::sampled(self.order, self.grid.as_ref().unwrap(), move |z| v(z).into_iter().map(|x| x * c).collect());
                if let Some(g) = s.gradient.clone() {
                    out = out.with_sample_gradient(move |z| g(z).map(|v| v.into_iter().map(|x| x * c).collect()));
                }
                out
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    /// Pointwise product a b; order adds.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order + other.order;
        if let (Repr::Separable(a), Repr::Separable(b)) = (&self.repr, &other.repr) {
            let pairs: usize = a.iter().map(|t| t.rows.len()).sum::<usize>() * b.iter().map(|t| t.rows.len()).sum::<usize>();
            let grid = Self::common_grid(self, other);
            if pairs <= MAX_EXACT_PAIRS || grid.is_none() {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for ta in a {
                    for tb in b {
                        terms.push(Term {
                            rows: Arc::new(convolve(&ta.rows, &tb.rows)),
                            zeta: ta.zeta.mul(&tb.zeta),
                        });
                    }
                }
                return Self {
                    order,
                    repr: Repr::Separable(terms),
                    grid,
                };
            }
        }
        let grid = self.grid_for(Some(other)).expect("a grid is available");
        let (a, b, g) = (self.clone(), other.clone(), grid.clone());
        let mut s = Self::sampled(order, &grid, move |z| combine(a.samples_at(&g, z), b.samples_at(&g, z), |x, y| x * y));
        if self.has_exact_zeta_gradient() && other.has_exact_zeta_gradient() {
            let (a, b, g) = (self.clone(), other.clone(), grid);
            s = s.with_sample_gradient(move |z| {
                let (va, vb) = (a.samples_at(&g, z), b.samples_at(&g, z));
                let ga = a.zeta_gradient_samples(&g, z);
                let gb = b.zeta_gradient_samples(&g, z);
                let part = |j: usize| -> Vec<Complex<T>> { (0..va.len()).map(|i| ga[j][i] * vb[i] + va[i] * gb[j][i]).collect() };
                [part(0), part(1)]
            });
        }
        s
    }

    /// {a, b} = grad_x a . grad_zeta b - grad_zeta a . grad_x b; order is l1 + l2 - 1.
    pub fn poisson(&self, other: &Self) -> Self {
        let order = self.order + other.order - T::one();
        if let (Repr::Separable(a), Repr::Separable(b)) = (&self.repr, &other.repr) {
            let pairs: usize = a.iter().map(|t| t.rows.len()).sum::<usize>() * b.iter().map(|t| t.rows.len()).sum::<usize>();
            let grid = Self::common_grid(self, other);
            if pairs <= MAX_EXACT_PAIRS || grid.is_none() {
                let mut terms = Vec::new();
                for ta in a {
                    for tb in b {
                        for j in 0..2 {
                            let left = convolve(&times_i_rho(&ta.rows, j), &tb.rows);
                            if !left.is_empty() {
                                terms.push(Term {
                                    rows: Arc::new(left),
                                    zeta: ta.zeta.mul(&tb.zeta.partial(j)),
                                });
                            }
                            let right = convolve(&ta.rows, &times_i_rho(&tb.rows, j));
                            if !right.is_empty() {
                                terms.push(Term {
                                    rows: Arc::new(right),
                                    zeta: ta.zeta.partial(j).mul(&tb.zeta).scale(Complex::new(-T::one(), T::zero())),
                                });
                            }
                        }
                    }
                }
                return Self {
                    order,
                    repr: Repr::Separable(terms),
                    grid,
                };
            }
        }
        let grid = self.grid_for(Some(other)).expect("a grid is available");
        let (a, b, g) = (self.clone(), other.clone(), grid.clone());
        Self::sampled(order, &grid, move |z| {
            let ax = a.x_gradient_samples(&g, z);
            let az = a.zeta_gradient_samples(&g, z);
            let bx = b.x_gradient_samples(&g, z);
            let bz = b.zeta_gradient_samples(&g, z);
            (0..g.len())
                .map(|i| ax[0][i] * bz[0][i] + ax[1][i] * bz[1][i] - az[0][i] * bx[0][i] - az[1][i] * bx[1][i])
                .collect()
        })
    }

    /// a'(x, zeta) = conj a(x, -zeta).
    pub fn conj_reflect(&self) -> Self {
        match &self.repr {
            Repr::Separable(terms) => Self {
                order: self.order,
                repr: Repr::Separable(
                    terms
                        .iter()
                        .map(|t| Term {
                            rows: Arc::new(t.rows.iter().map(|(r, c)| (-*r, c.conj())).collect()),
                            zeta: t.zeta.reflect_conj(),
                        })
                        .collect(),
                ),
                grid: self.grid.clone(),
            },
            Repr::Sampled(s) => {
                let v = s.value.clone();
                let mut out = Self::sampled(self.order, self.grid.as_ref().unwrap(), move |z| {
                    v([-z[0], -z[1]]).into_iter().map(|x| x.conj()).collect()
                });
                if let Some(g) = s.gradient.clone() {
                    out = out.with_sample_gradient(move |z| g([-z[0], -z[1]]).map(|v| v.into_iter().map(|x| -x.conj()).collect()));
                }
                out
            }
        }
    }

    /// Applies a pointwise map to the samples, with chain-rule gradient from a derivative map.
    pub fn map_samples(
        &self,
        order: T,
        f: impl Fn(Complex<T>) -> Complex<T> + Send + Sync + 'static,
        df: Option<Arc<dyn Fn(Complex<T>) -> Complex<T> + Send + Sync>>,
    ) -> Result<Self> {
        let grid = self.grid_for(None)?;
        let (a, g) = (self.clone(), grid.clone());
        let mut s = Self::sampled(order, &grid, move |z| a.samples_at(&g, z).into_iter().map(&f).collect());
        if let (Some(df), true) = (df, self.has_exact_zeta_gradient()) {
            let (a, g) = (self.clone(), grid);
            s = s.with_sample_gradient(move |z| {
                let v = a.samples_at(&g, z);
                let [g0, g1] = a.zeta_gradient_samples(&g, z);
                let d: Vec<Complex<T>> = v.iter().map(|x| df(*x)).collect();
                [combine(d.clone(), g0, |x, y| x * y), combine(d, g1, |x, y| x * y)]
            });
        }
        Ok(s)
    }
}
