use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `exp(1 - 1/(1 - t²))` on `|t| < 1`, zero outside; peak value 1 at `t = 0`.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Smooth step from 0 at `t <= 0` to 1 at `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    let psi = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
    let (a, b) = (psi(t), psi(1.0 - t));
    a / (a + b)
}

type Custom = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Constant(f64),
    /// `bump((y - y0) / width)`.
    Bump { y0: f64, width: f64 },
    /// `bump((y - y0) / width) · cos 2θ`.
    FramedBump { y0: f64, width: f64 },
    /// `smooth_step((y - y1) / (y2 - y1))`, equal to 1 high in the cusp.
    CuspStep { y1: f64, y2: f64 },
    Shifted { base: Box<Observable>, shift: f64 },
    Custom { f: Custom, cusp_limit: f64, sup: f64, frame: bool },
}

/// A continuous real function on `Γ\G` in coordinates `(x, y, θ)`, with a
/// declared value at the cusp.
#[derive(Clone)]
pub struct Observable {
    kind: Kind,
    label: String,
    known_mean: Option<f64>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable").field("label", &self.label).finish()
    }
}

impl Observable {
    pub fn constant(c: f64) -> Self {
        Observable {
            kind: Kind::Constant(c),
            label: format!("obs:const:c={c}"),
            known_mean: Some(c),
        }
    }

    pub fn bump(y0: f64, width: f64) -> Result<Self> {
        check_bump(y0, width)?;
        Ok(Observable {
            kind: Kind::Bump { y0, width },
            label: format!("obs:bump:y0={y0},width={width}"),
            known_mean: None,
        })
    }

    /// Frame-dependent bump; its mean vanishes by the `θ` average.
    pub fn framed_bump(y0: f64, width: f64) -> Result<Self> {
        check_bump(y0, width)?;
        Ok(Observable {
            kind: Kind::FramedBump { y0, width },
            label: format!("obs:framed-bump:y0={y0},width={width}"),
            known_mean: Some(0.0),
        })
    }

    pub fn cusp_step(y1: f64, y2: f64) -> Result<Self> {
        if !(y1 > 0.0 && y2 > y1 && y2.is_finite()) {
            return Err(Error::Domain(format!("cusp step needs 0 < y1 < y2, got {y1}, {y2}")));
        }
        Ok(Observable {
            kind: Kind::CuspStep { y1, y2 },
            label: format!("obs:cusp-step:y1={y1},y2={y2}"),
            known_mean: None,
        })
    }

    /// A user function; `sup` must bound `|f|`.
    pub fn custom(
        label: &str,
        cusp_limit: f64,
        sup: f64,
        frame_dependent: bool,
        f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Observable {
            kind: Kind::Custom {
                f: Arc::new(f),
                cusp_limit,
                sup,
                frame: frame_dependent,
            },
            label: label.to_string(),
            known_mean: None,
        }
    }

    /// `f - shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Observable {
            label: format!("{}-({shift})", self.label),
            known_mean: self.known_mean.map(|m| m - shift),
            kind: Kind::Shifted {
                base: Box::new(self.clone()),
                shift,
            },
        }
    }

    /// Records a mean computed elsewhere.
    pub fn with_known_mean(mut self, mean: f64) -> Self {
        self.known_mean = Some(mean);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn known_mean(&self) -> Option<f64> {
        self.known_mean
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64, theta: f64) -> f64 {
        match &self.kind {
            Kind::Constant(c) => *c,
            Kind::Bump { y0, width } => bump((y - y0) / width),
            Kind::FramedBump { y0, width } => bump((y - y0) / width) * (2.0 * theta).cos(),
            Kind::CuspStep { y1, y2 } => smooth_step((y - y1) / (y2 - y1)),
            Kind::Shifted { base, shift } => base.eval(x, y, theta) - shift,
            Kind::Custom { f, .. } => f(x, y, theta),
        }
    }

    /// Limit of `f` as `y → ∞`.
    pub fn cusp_limit(&self) -> f64 {
        match &self.kind {
            Kind::Constant(c) => *c,
            Kind::Bump { .. } | Kind::FramedBump { .. } => 0.0,
            Kind::CuspStep { .. } => 1.0,
            Kind::Shifted { base, shift } => base.cusp_limit() - shift,
            Kind::Custom { cusp_limit, .. } => *cusp_limit,
        }
    }

    /// Bound on `|f|`.
    pub fn sup(&self) -> f64 {
        match &self.kind {
            Kind::Constant(c) => c.abs(),
            Kind::Bump { .. } | Kind::FramedBump { .. } | Kind::CuspStep { .. } => 1.0,
            Kind::Shifted { base, shift } => base.sup() + shift.abs(),
            Kind::Custom { sup, .. } => *sup,
        }
    }

    pub fn is_frame_dependent(&self) -> bool {
        match &self.kind {
            Kind::FramedBump { .. } => true,
            Kind::Shifted { base, .. } => base.is_frame_dependent(),
            Kind::Custom { frame, .. } => *frame,
            _ => false,
        }
    }
}

fn check_bump(y0: f64, width: f64) -> Result<()> {
    if !(width > 0.0 && y0.is_finite() && width.is_finite()) {
        return Err(Error::Domain(format!("bump needs finite y0 and width > 0, got {y0}, {width}")));
    }
    Ok(())
}

/// Parses `obs:const:c=..`, `obs:bump:y0=..,width=..`,
/// `obs:framed-bump:y0=..,width=..` and `obs:cusp-step:y1=..,y2=..`.
impl FromStr for Observable {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let s = src.trim();
        let s = s.strip_prefix("obs:").unwrap_or(s);
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let bad = |why: String| Error::InvalidDescriptor(format!("observable spec `{src}`: {why}"));
        let mut kv = Vec::new();
        for part in args.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            let v: f64 = v.trim().parse().map_err(|_| bad(format!("`{v}` is not a number")))?;
            kv.push((k.trim(), v));
        }
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            kv.iter()
                .find(|(k, _)| *k == key)
                .map(|&(_, v)| v)
                .or(default)
                .ok_or_else(|| bad(format!("missing `{key}`")))
        };
        match kind {
            "const" => Ok(Observable::constant(get("c", Some(1.0))?)),
            "bump" => Observable::bump(get("y0", None)?, get("width", None)?),
            "framed-bump" => Observable::framed_bump(get("y0", None)?, get("width", None)?),
            "cusp-step" => Observable::cusp_step(get("y1", None)?, get("y2", None)?),
            other => Err(bad(format!("unknown observable kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let f: Observable = "obs:bump:y0=2,width=0.5".parse().unwrap();
        assert_eq!(f.eval(0.0, 2.0, 0.0), 1.0);
        assert_eq!(f.eval(0.3, 2.6, 0.0), 0.0);
        assert_eq!(f.cusp_limit(), 0.0);
        assert!("obs:bump:y0=2".parse::<Observable>().is_err());
        assert!("obs:bump:y0=2,width=-1".parse::<Observable>().is_err());
        assert!("obs:wave:k=1".parse::<Observable>().is_err());
        let c: Observable = "obs:const:c=0.5".parse().unwrap();
        assert_eq!(c.known_mean(), Some(0.5));
    }

    #[test]
    fn cusp_continuity() {
        let shipped: Vec<Observable> = vec![
            Observable::constant(0.7),
            Observable::bump(2.0, 0.5).unwrap(),
            Observable::framed_bump(1.5, 0.4).unwrap(),
            Observable::cusp_step(2.0, 4.0).unwrap(),
            Observable::bump(2.0, 0.5).unwrap().shifted(0.1),
        ];
        for f in &shipped {
            for x in [-0.5, 0.0, 0.3] {
                for theta in [0.0, 1.0, 3.0] {
                    let v = f.eval(x, 1e6, theta);
                    assert!((v - f.cusp_limit()).abs() < 1e-6, "{}", f.label());
                    assert!(v.abs() <= f.sup() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn step_is_monotone_and_smooth_at_the_ends() {
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for k in 1..100 {
            let v = smooth_step(k as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
        assert!(smooth_step(0.25) < smooth_step(0.5) && smooth_step(0.5) < smooth_step(0.75));
    }
}
