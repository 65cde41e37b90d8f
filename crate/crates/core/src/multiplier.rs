//! Bounded functions on ℝⁿ used as Fourier multipliers.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{invalid, FockError, Result};

type Evaluator = Arc<dyn Fn(&[f64]) -> C64 + Send + Sync>;

/// Registry identity of a multiplier.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierKind {
    /// m ≡ c.
    Constant(C64),
    /// m(x) = e^{-2i c·x}.
    Modulation(Vec<f64>),
    /// m(x) = sign(x_1), with sign(0) = 0.
    Signum,
    /// m(x) = e^{i|x|^{4/3}}.
    Chirp43,
    /// m(x) = e^{-|x|²}.
    Bump,
    /// m(x) = (2 + sin 2x)/3.
    Sine,
    /// Piecewise linear through samples, constant beyond the end points.
    GridSampled { xs: Vec<f64>, values: Vec<C64> },
    /// Any other evaluator, identified by name.
    Custom(String),
}

/// A bounded function m, evaluable at every real point.
#[derive(Clone)]
pub struct MultiplierSpec {
    kind: MultiplierKind,
    eval: Evaluator,
    sup_norm: Option<f64>,
    smooth: bool,
    dim: Option<usize>,
    breakpoints: Vec<f64>,
    factor: C64,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSpec")
            .field("id", &self.id())
            .field("sup_norm", &self.sup_norm)
            .field("smooth", &self.smooth)
            .finish()
    }
}

impl MultiplierSpec {
    fn new(kind: MultiplierKind, eval: Evaluator, sup_norm: Option<f64>, smooth: bool, dim: Option<usize>) -> Self {
        Self {
            kind,
            eval,
            sup_norm,
            smooth,
            dim,
            breakpoints: Vec::new(),
            factor: C64::new(1.0, 0.0),
        }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(
            MultiplierKind::Constant(c),
            Arc::new(move |_| c),
            Some(c.norm()),
            true,
            None,
        )
    }

    pub fn modulation(c: Vec<f64>) -> Self {
        let cc = c.clone();
        let n = c.len();
        Self::new(
            MultiplierKind::Modulation(c),
            Arc::new(move |x| {
                let t: f64 = cc.iter().zip(x).map(|(a, b)| a * b).sum();
                C64::from_polar(1.0, -2.0 * t)
            }),
            Some(1.0),
            true,
            Some(n),
        )
    }

    pub fn signum() -> Self {
        let mut m = Self::new(
            MultiplierKind::Signum,
            Arc::new(|x| {
                let v = x[0];
                C64::new(
                    if v > 0.0 {
                        1.0
                    } else if v < 0.0 {
                        -1.0
                    } else {
                        0.0
                    },
                    0.0,
                )
            }),
            Some(1.0),
            false,
            Some(1),
        );
        m.breakpoints = vec![0.0];
        m
    }

    pub fn chirp43() -> Self {
        let mut m = Self::new(
            MultiplierKind::Chirp43,
            Arc::new(|x| {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                C64::from_polar(1.0, r.powf(4.0 / 3.0))
            }),
            Some(1.0),
            false,
            Some(1),
        );
        m.breakpoints = vec![0.0];
        m
    }

    pub fn bump() -> Self {
        Self::new(
            MultiplierKind::Bump,
            Arc::new(|x| C64::new((-x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)),
            Some(1.0),
            true,
            None,
        )
    }

    pub fn sine() -> Self {
        Self::new(
            MultiplierKind::Sine,
            Arc::new(|x| C64::new((2.0 + (2.0 * x[0]).sin()) / 3.0, 0.0)),
            Some(1.0),
            true,
            Some(1),
        )
    }

    /// Piecewise-linear interpolation of samples at strictly increasing `xs` (1D).
    pub fn grid_sampled(xs: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(invalid("samples", "need at least two points and one value per point"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(invalid(
                "samples",
                "abscissae must be strictly increasing and values finite",
            ));
        }
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let (xa, va) = (xs.clone(), values.clone());
        let eval: Evaluator = Arc::new(move |x| interpolate(&xa, &va, x[0]));
        let mut m = Self::new(
            MultiplierKind::GridSampled { xs: xs.clone(), values },
            eval,
            Some(sup),
            false,
            Some(1),
        );
        m.breakpoints = xs;
        Ok(m)
    }

    /// Reads `x,re[,im]` rows; lines starting with `#` and blank lines are skipped.
    pub fn grid_from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| FockError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<f64> = line
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| FockError::Format(format!("{}:{}: {e}", path.display(), ln + 1)))?;
            match parts.as_slice() {
                [x, re] => {
                    xs.push(*x);
                    vals.push(C64::new(*re, 0.0));
                }
                [x, re, im] => {
                    xs.push(*x);
                    vals.push(C64::new(*re, *im));
                }
                _ => {
                    return Err(FockError::Format(format!(
                        "{}:{}: expected 2 or 3 columns",
                        path.display(),
                        ln + 1
                    )))
                }
            }
        }
        Self::grid_sampled(xs, vals)
    }

    /// Wraps an arbitrary evaluator. `dim = None` accepts any dimension.
    pub fn custom<F>(name: &str, dim: Option<usize>, smooth: bool, sup_norm: Option<f64>, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Send + Sync + 'static,
    {
        Self::new(
            MultiplierKind::Custom(name.to_string()),
            Arc::new(f),
            sup_norm,
            smooth,
            dim,
        )
    }

    /// Parses a registry id such as `constant(2)`, `modulation(0.7)`,
    /// `modulation(0.3,-0.2)`, `signum`, `chirp43`, `bump` or `sine`.
    /// Constants accept `re` or `re,im`.
    pub fn parse(id: &str) -> Result<Self> {
        let id = id.trim();
        let (name, args) = match id.find('(') {
            Some(p) if id.ends_with(')') => (&id[..p], Some(&id[p + 1..id.len() - 1])),
            Some(_) => return Err(FockError::UnknownMultiplier(id.to_string())),
            None => (id, None),
        };
        let nums = |a: Option<&str>| -> Result<Vec<f64>> {
            match a {
                None => Ok(Vec::new()),
                Some(s) => s
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<f64>()
                            .map_err(|_| FockError::UnknownMultiplier(id.to_string()))
                    })
                    .collect(),
            }
        };
        let v = nums(args)?;
        let bare = |m: Self| {
            if v.is_empty() {
                Ok(m)
            } else {
                Err(FockError::UnknownMultiplier(id.to_string()))
            }
        };
        match name.trim() {
            "constant" => match v.as_slice() {
                [] => Ok(Self::constant(C64::new(1.0, 0.0))),
                [re] => Ok(Self::constant(C64::new(*re, 0.0))),
                [re, im] => Ok(Self::constant(C64::new(*re, *im))),
                _ => Err(FockError::UnknownMultiplier(id.to_string())),
            },
            "modulation" if !v.is_empty() && v.len() <= crate::multi_index::MAX_DIM => Ok(Self::modulation(v)),
            "signum" => bare(Self::signum()),
            "chirp43" => bare(Self::chirp43()),
            "bump" => bare(Self::bump()),
            "sine" => bare(Self::sine()),
            "grid" if args.is_some() => Self::grid_from_csv(Path::new(args.unwrap().trim())),
            _ => Err(FockError::UnknownMultiplier(id.to_string())),
        }
    }

    /// Canonical id; parsing it back gives the same multiplier (except custom ones).
    pub fn id(&self) -> String {
        let base = match &self.kind {
            MultiplierKind::Constant(c) if c.im == 0.0 => format!("constant({})", c.re),
            MultiplierKind::Constant(c) => format!("constant({},{})", c.re, c.im),
            MultiplierKind::Modulation(c) => {
                format!(
                    "modulation({})",
                    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                )
            }
            MultiplierKind::Signum => "signum".into(),
            MultiplierKind::Chirp43 => "chirp43".into(),
            MultiplierKind::Bump => "bump".into(),
            MultiplierKind::Sine => "sine".into(),
            MultiplierKind::GridSampled { xs, .. } => format!("grid[{} samples]", xs.len()),
            MultiplierKind::Custom(name) => name.clone(),
        };
        if self.factor == C64::new(1.0, 0.0) {
            base
        } else {
            format!("({},{})*{base}", self.factor.re, self.factor.im)
        }
    }

    pub fn kind(&self) -> &MultiplierKind {
        &self.kind
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        self.factor * (self.eval)(x)
    }

    pub fn sup_norm(&self) -> Option<f64> {
        self.sup_norm.map(|s| s * self.factor.norm())
    }

    /// Smooth entire-like multipliers are integrated with Gauss–Hermite rules,
    /// the rest with composite Gauss–Legendre split at [`Self::breakpoints`].
    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// The only dimension this multiplier is defined in, if restricted.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim {
            Some(d) if d != n => Err(invalid(
                "multiplier",
                format!("{} is defined for n = {d}, not n = {n}", self.id()),
            )),
            _ if !self.smooth && n != 1 => Err(invalid(
                "multiplier",
                "non-smooth multipliers are supported in one dimension only",
            )),
            _ => Ok(()),
        }
    }

    /// c·m.
    pub fn scaled(&self, c: C64) -> Self {
        let mut m = self.clone();
        m.factor *= c;
        m
    }
}

fn interpolate(xs: &[f64], vs: &[C64], x: f64) -> C64 {
    if x <= xs[0] {
        return vs[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return vs[last];
    }
    let i = xs.partition_point(|&p| p <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    vs[i] * (1.0 - t) + vs[i + 1] * t
}
