//! Developing maps obtained by continuing solutions of `y'' + Q y / 2 = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frobenius::{frobenius_seed, FrobeniusSeries};
use super::ode::{PairState, Stepper};
use crate::error::{Error, Result};
use crate::geometry::{Chart, ChartJet, ComplexPt, Jet3, Mobius};
use crate::schwarzian::{inversion_transform, validate_spec, SchwarzianSpec};

const SERIES_TERMS: usize = 60;
const STATION_SPACING: f64 = 0.5;

/// Where a local series is centered.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Center {
    Pole(f64),
    Infinity,
}

#[derive(Debug, Clone)]
struct Local {
    center: Center,
    series: FrobeniusSeries,
    /// Radius in the local coordinate (`z − q` or `−1/z`).
    radius: f64,
    connection: Mobius<f64>,
}

impl Local {
    fn coordinate(&self, z: &Jet3<f64>) -> Jet3<f64> {
        match self.center {
            Center::Pole(q) => *z + Complex64::new(-q, 0.0),
            Center::Infinity => -z.recip(),
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        match self.center {
            Center::Pole(q) => (z - q).norm() < self.radius,
            Center::Infinity => z.norm() * self.radius > 1.0,
        }
    }

    fn jet(&self, z: Complex64) -> ChartJet<f64> {
        let u = self.coordinate(&Jet3::variable(z));
        self.connection.apply_jet(&self.series.quotient(&u))
    }

    fn matching_point(&self) -> Complex64 {
        match self.center {
            Center::Pole(q) => Complex64::new(q, self.radius),
            Center::Infinity => Complex64::new(0.0, 1.0 / self.radius),
        }
    }
}

struct Engine {
    stepper: Stepper,
    base: PairState,
    stations: Mutex<BTreeMap<i64, PairState>>,
    locals: Vec<Local>,
    infinity: Local,
}

/// `g = y2/y1` continued from a basepoint where `(y1, y2, y1', y2') = (1, 0, 0, 1)`.
///
/// Values come from local series near the poles and near `∞`, and from Taylor
/// integration along a fixed path family elsewhere: up or down to the height of the
/// basepoint, then horizontally through cached stations.
#[derive(Clone, Serialize, Deserialize)]
#[serde(from = "NumericRecipe", into = "NumericRecipe")]
pub struct NumericMap {
    pub spec: SchwarzianSpec,
    pub basepoint: Complex64,
    engine: Arc<OnceLock<Result<Arc<Engine>>>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct NumericRecipe {
    spec: SchwarzianSpec,
    basepoint: [f64; 2],
}

impl From<NumericRecipe> for NumericMap {
    fn from(r: NumericRecipe) -> Self {
        NumericMap::lazy(r.spec, Complex64::new(r.basepoint[0], r.basepoint[1]))
    }
}

impl From<NumericMap> for NumericRecipe {
    fn from(m: NumericMap) -> Self {
        NumericRecipe { spec: m.spec, basepoint: [m.basepoint.re, m.basepoint.im] }
    }
}

impl fmt::Debug for NumericMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericMap").field("spec", &self.spec).field("basepoint", &self.basepoint).finish()
    }
}

impl NumericMap {
    fn lazy(spec: SchwarzianSpec, basepoint: Complex64) -> Self {
        NumericMap { spec, basepoint, engine: Arc::new(OnceLock::new()) }
    }

    /// Validates the spec and prepares the local series and their connection maps.
    pub fn new(spec: SchwarzianSpec, basepoint: Complex64) -> Result<Self> {
        let m = NumericMap::lazy(spec, basepoint);
        m.engine()?;
        Ok(m)
    }

    fn engine(&self) -> Result<Arc<Engine>> {
        self.engine.get_or_init(|| Engine::build(&self.spec, self.basepoint).map(Arc::new)).clone()
    }

    pub fn chart_jet(&self, z: Complex64) -> Result<ChartJet<f64>> {
        if z.im < 0.0 {
            return Err(Error::DomainError(format!("{z} lies below the real axis")));
        }
        self.engine()?.jet(z)
    }

    /// Solution pair at `z` along the standard path.
    pub fn pair_at(&self, z: Complex64) -> Result<PairState> {
        self.engine()?.state_at(z)
    }

    /// Value at `z` reached along an explicit polyline from the basepoint instead of the
    /// standard path.
    pub fn continue_along(&self, path: &[Complex64]) -> Result<ChartJet<f64>> {
        let e = self.engine()?;
        let mut steps = 0;
        let mut s = e.base;
        for &p in path {
            s = e.stepper.segment(&s, p, &mut steps)?;
        }
        Ok(e.quotient_jet(&s))
    }

    /// Image of the pole `q_i`, as a limit from the upper half-plane.
    pub fn vertex(&self, i: usize) -> Result<ComplexPt<f64>> {
        let e = self.engine()?;
        let l = e.locals.get(i).ok_or_else(|| Error::DomainError(format!("no pole with index {i}")))?;
        Ok(l.connection.apply(l.series.quotient_limit()))
    }

    /// Image of `∞`.
    pub fn vertex_infinity(&self) -> Result<ComplexPt<f64>> {
        let e = self.engine()?;
        Ok(e.infinity.connection.apply(e.infinity.series.quotient_limit()))
    }

    /// Radius of the local series at pole `i` (or at infinity, in `w = −1/z`).
    pub fn local_radius(&self, i: Option<usize>) -> Result<f64> {
        let e = self.engine()?;
        Ok(match i {
            Some(i) => e.locals[i].radius,
            None => e.infinity.radius,
        })
    }
}

impl Engine {
    fn build(spec: &SchwarzianSpec, basepoint: Complex64) -> Result<Engine> {
        let report = validate_spec(spec);
        if let Some(reason) = report.validity.reason() {
            return Err(Error::DomainError(format!("invalid Schwarzian data: {reason}")));
        }
        if !(basepoint.im > 0.0) {
            return Err(Error::DomainError(format!("basepoint {basepoint} must lie in the open upper half-plane")));
        }
        let stepper = Stepper::new(spec);
        let qs: Vec<f64> = stepper.poles.iter().map(|p| p.q).collect();
        let gap = qs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let gap = if gap.is_finite() { gap } else { 1.0 };
        let far = qs.iter().fold(0.0f64, |m, q| m.max(q.abs()));
        let base = PairState::unit(basepoint);
        let mut engine = Engine {
            stepper,
            base,
            stations: Mutex::new(BTreeMap::from([(0, base)])),
            locals: Vec::new(),
            infinity: Local {
                center: Center::Infinity,
                series: FrobeniusSeries::from_coefficients(
                    inversion_transform(spec).taylor(SERIES_TERMS).into_iter().map(Complex64::from).collect(),
                    SERIES_TERMS,
                )?,
                radius: if far > 0.0 { 0.1 / far } else { 1.0 },
                connection: Mobius::identity(),
            },
        };
        for (i, &q) in qs.iter().enumerate() {
            let mut local = Local {
                center: Center::Pole(q),
                series: frobenius_seed(spec, i, SERIES_TERMS)?,
                radius: 0.1 * gap,
                connection: Mobius::identity(),
            };
            local.connection = engine.connect(&local)?;
            engine.locals.push(local);
        }
        let mut inf = engine.infinity.clone();
        inf.connection = engine.connect(&inf)?;
        engine.infinity = inf;
        Ok(engine)
    }

    /// Möbius map sending the local quotient onto the continued map, matched by 2-jets.
    fn connect(&self, local: &Local) -> Result<Mobius<f64>> {
        let zm = local.matching_point();
        let target = self.quotient_jet(&self.state_at(zm)?);
        let mut id = local.clone();
        id.connection = Mobius::identity();
        let source = id.jet(zm);
        let mt = Mobius::osculating(zm, &target)?;
        let ms = Mobius::osculating(zm, &source)?;
        Ok(mt.compose(&ms.inverse()))
    }

    fn station(&self, k: i64) -> Result<PairState> {
        let mut cache = self.stations.lock().expect("station cache poisoned");
        if let Some(s) = cache.get(&k) {
            return Ok(*s);
        }
        let dir = k.signum();
        let mut j = k;
        while !cache.contains_key(&j) {
            j -= dir;
        }
        let mut s = cache[&j];
        let mut steps = 0;
        while j != k {
            j += dir;
            let target = self.base.z + Complex64::new(STATION_SPACING * j as f64, 0.0);
            s = self.stepper.segment(&s, target, &mut steps)?;
            cache.insert(j, s);
        }
        Ok(s)
    }

    fn state_at(&self, z: Complex64) -> Result<PairState> {
        let k = ((z.re - self.base.z.re) / STATION_SPACING).round() as i64;
        let s = self.station(k)?;
        let mut steps = 0;
        let corner = Complex64::new(z.re, self.base.z.im);
        let s = self.stepper.segment(&s, corner, &mut steps)?;
        self.stepper.segment(&s, z, &mut steps)
    }

    fn quotient_jet(&self, s: &PairState) -> ChartJet<f64> {
        let q = self.stepper.q(s.z);
        let dq = self.stepper.q_prime(s.z);
        let jet = |j: usize| {
            Jet3::new(s.y[j], s.dy[j], -q * s.y[j] * 0.5, -(dq * s.y[j] + q * s.dy[j]) * 0.5)
        };
        let (y1, y2) = (jet(0), jet(1));
        if y2.f0.norm() <= y1.f0.norm() {
            ChartJet { chart: Chart::Direct, jet: y2 / y1 }
        } else {
            ChartJet { chart: Chart::Inverted, jet: -(y1 / y2) }
        }
    }

    fn jet(&self, z: Complex64) -> Result<ChartJet<f64>> {
        if let Some(l) = self.locals.iter().find(|l| l.contains(z)) {
            if let Center::Pole(q) = l.center {
                if (z - q).norm() == 0.0 {
                    return Err(Error::PoleEvaluation(q));
                }
            }
            return Ok(l.jet(z));
        }
        if self.infinity.contains(z) {
            return Ok(self.infinity.jet(z));
        }
        Ok(self.quotient_jet(&self.state_at(z)?))
    }
}
