use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use horolab::arith::{sieve_liouville, sieve_mobius, sieve_primes, MultiplicativeTable};
use horolab::correlator::{classify_correlator, surd_element_for, PointDescriptor};
use horolab::criterion::{criterion_ledger, BoundedSequence, CriterionConfig};
use horolab::decomp::{build_decomposition, coverage_report, DecompositionParams};
use horolab::dynamics::{
    genericity, haar_mean, split_observable, ModularPoint, Observable, ObservableSeries, Orbit, Precision,
    QuadratureSpec,
};
use horolab::symbolic::SymReal;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use serde_json::json;

use crate::config::{Command, ExperimentConfig, Ladder, PairList, PrecisionSetting};
use crate::error::CliError;
use crate::report::{fmt_f64, to_value, RunReport, Table, Timing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuKind {
    Mobius,
    Liouville,
}

impl NuKind {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "mobius" | "mu" => Ok(NuKind::Mobius),
            "liouville" | "lambda" => Ok(NuKind::Liouville),
            _ => Err(CliError::Config(format!("nu must be mobius or liouville, got `{s}`"))),
        }
    }

    fn table(self, n: u64) -> Result<MultiplicativeTable<f64>, CliError> {
        Ok(match self {
            NuKind::Mobius => sieve_mobius(n)?,
            NuKind::Liouville => sieve_liouville(n)?,
        })
    }
}

/// `exp:theta=<real>`, `const:c=<re>` or `csv:<path>` with rows `n,re[,im]`.
#[derive(Debug, Clone, PartialEq)]
pub enum SeqSpec {
    Exp(SymReal),
    Const(f64),
    Csv(PathBuf),
}

impl SeqSpec {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        let s = src.trim();
        let s = s.strip_prefix("seq:").unwrap_or(s);
        let bad = || CliError::Config(format!("sequence spec `{src}` must be exp:theta=.., const:c=.. or csv:<path>"));
        if let Some(rest) = s.strip_prefix("exp:") {
            let v = rest.strip_prefix("theta=").ok_or_else(bad)?;
            return Ok(SeqSpec::Exp(SymReal::parse(v)?));
        }
        if let Some(rest) = s.strip_prefix("const") {
            let v = rest.strip_prefix(":c=").unwrap_or(if rest.is_empty() { "1" } else { "" });
            let c: f64 = v.parse().map_err(|_| bad())?;
            if !(c.abs() <= 1.0) {
                return Err(CliError::Config(format!("constant sequence must have |c| <= 1, got {c}")));
            }
            return Ok(SeqSpec::Const(c));
        }
        if let Some(path) = s.strip_prefix("csv:") {
            return Ok(SeqSpec::Csv(PathBuf::from(path)));
        }
        Err(bad())
    }

    fn build(&self, label: &str) -> Result<BoundedSequence<f64>, CliError> {
        Ok(match self {
            SeqSpec::Exp(theta) => BoundedSequence::exponential(theta),
            SeqSpec::Const(c) => BoundedSequence::constant(Complex::new(*c, 0.0))?,
            SeqSpec::Csv(path) => {
                let f = std::fs::File::open(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
                BoundedSequence::read_csv(label, BufReader::new(f))?
            }
        })
    }
}

#[derive(Debug, Clone)]
pub enum Job {
    Sieve {
        n: u64,
        nu: NuKind,
    },
    Decompose {
        params: DecompositionParams,
    },
    Criterion {
        nu: NuKind,
        seq: SeqSpec,
        config: CriterionConfig,
    },
    Orbit {
        point: ModularPoint,
        obs: Observable,
        n: u64,
        precision: Precision,
    },
    Correlate {
        point: ModularPoint,
        obs: Observable,
        p: u64,
        q: u64,
        n: u64,
        center: bool,
        precision: Precision,
        quad: QuadratureSpec,
    },
    Disjointness {
        point: ModularPoint,
        obs: Observable,
        ladder: Vec<u64>,
        nu: NuKind,
        precision: Precision,
        quad: QuadratureSpec,
    },
    Classify {
        z: PointDescriptor,
    },
}

/// A validated configuration, defaults filled in.
#[derive(Debug, Clone)]
pub struct Plan {
    pub config: ExperimentConfig,
    pub job: Job,
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Config(format!("`{key}` is required")))
}

fn fill<T>(slot: &mut Option<T>, v: T) {
    if slot.is_none() {
        *slot = Some(v);
    }
}

fn quad_spec(c: &mut ExperimentConfig) -> Result<QuadratureSpec, CliError> {
    let d = QuadratureSpec::default();
    fill(&mut c.y_max, d.y_max);
    fill(&mut c.nx, d.nx);
    fill(&mut c.ns, d.ns);
    fill(&mut c.ntheta, d.n_theta);
    let spec = QuadratureSpec {
        y_max: c.y_max.unwrap(),
        nx: c.nx.unwrap(),
        ns: c.ns.unwrap(),
        n_theta: c.ntheta.unwrap(),
        ..d
    };
    spec.validate()?;
    Ok(spec)
}

fn dynamics_inputs(c: &mut ExperimentConfig, top: u64) -> Result<(ModularPoint, Observable, Precision), CliError> {
    fill(&mut c.point, "point:cusp:x=e".to_string());
    fill(&mut c.obs, "obs:bump:y0=2,width=0.5".to_string());
    fill(&mut c.precision, PrecisionSetting::Auto);
    let point: ModularPoint = c.point.as_deref().unwrap().parse()?;
    let obs: Observable = c.obs.as_deref().unwrap().parse()?;
    let precision: Precision = c.precision.unwrap().into();
    precision.resolve(top)?;
    Ok((point, obs, precision))
}

/// Checks every field against module preconditions; nothing heavy runs here.
pub fn plan(config: &ExperimentConfig) -> Result<Plan, CliError> {
    let mut c = config.clone();
    let command = need(&c.command, "command")?;
    c.retain_for(command);
    fill(&mut c.format, Default::default());
    let job = match command {
        Command::Sieve => {
            fill(&mut c.n, 100_000);
            fill(&mut c.nu, "mobius".into());
            Job::Sieve {
                n: c.n.unwrap(),
                nu: NuKind::parse(c.nu.as_deref().unwrap())?,
            }
        }
        Command::Decompose | Command::Criterion => {
            fill(&mut c.n, 100_000);
            fill(&mut c.alpha, 0.3);
            fill(&mut c.j0, 9);
            fill(&mut c.j1, 30);
            let params = DecompositionParams::new(c.n.unwrap(), c.alpha.unwrap(), c.j0.unwrap(), c.j1.unwrap())?;
            if command == Command::Decompose {
                Job::Decompose { params }
            } else {
                fill(&mut c.cutoff, 50.0);
                fill(&mut c.nu, "mobius".into());
                fill(&mut c.seq, "exp:theta=sqrt2".into());
                fill(&mut c.excluded, PairList::default());
                let cutoff = c.cutoff.unwrap();
                if !(cutoff >= 3.0 && cutoff.is_finite()) {
                    return Err(horolab::Error::EmptyPairSet { cutoff }.into());
                }
                if c.pair_length == Some(0) {
                    return Err(CliError::Config("pair_length must be positive".into()));
                }
                let config = CriterionConfig {
                    n: params.n,
                    alpha: params.alpha,
                    j0: params.j0,
                    j1: params.j1,
                    cutoff,
                    excluded: c.excluded.clone().unwrap().0,
                    pair_length: c.pair_length,
                };
                Job::Criterion {
                    nu: NuKind::parse(c.nu.as_deref().unwrap())?,
                    seq: SeqSpec::parse(c.seq.as_deref().unwrap())?,
                    config,
                }
            }
        }
        Command::Orbit => {
            fill(&mut c.n, 1000);
            let n = c.n.unwrap();
            let (point, obs, precision) = dynamics_inputs(&mut c, n)?;
            Job::Orbit { point, obs, n, precision }
        }
        Command::Correlate => {
            fill(&mut c.n, 10_000);
            fill(&mut c.p, 2);
            fill(&mut c.q, 3);
            fill(&mut c.center, false);
            let (n, p, q) = (c.n.unwrap(), c.p.unwrap(), c.q.unwrap());
            if n == 0 || p == 0 || q == 0 || p == q {
                return Err(CliError::Config(format!(
                    "correlate needs n >= 1 and distinct positive p, q; got n={n}, p={p}, q={q}"
                )));
            }
            let top = p
                .max(q)
                .checked_mul(n)
                .ok_or_else(|| CliError::Config("max(p, q) * n overflows".into()))?;
            let (point, obs, precision) = dynamics_inputs(&mut c, top)?;
            let quad = quad_spec(&mut c)?;
            Job::Correlate {
                point,
                obs,
                p,
                q,
                n,
                center: c.center.unwrap(),
                precision,
                quad,
            }
        }
        Command::Disjointness => {
            fill(&mut c.n, 1_000_000);
            let n = c.n.unwrap();
            let mut default_ladder: Vec<u64> = [n / 100, n / 10, n].into_iter().filter(|&k| k > 0).collect();
            default_ladder.dedup();
            fill(&mut c.ladder, Ladder(default_ladder));
            fill(&mut c.nu, "mobius".into());
            let ladder = c.ladder.clone().unwrap().0;
            if ladder.is_empty() || ladder.contains(&0) {
                return Err(CliError::Config("ladder entries must be positive".into()));
            }
            let top = *ladder.iter().max().unwrap();
            let (point, obs, precision) = dynamics_inputs(&mut c, top)?;
            let quad = quad_spec(&mut c)?;
            Job::Disjointness {
                point,
                obs,
                ladder,
                nu: NuKind::parse(c.nu.as_deref().unwrap())?,
                precision,
                quad,
            }
        }
        Command::Classify => Job::Classify {
            z: PointDescriptor::parse(&need(&c.z, "z")?)?,
        },
    };
    Ok(Plan { config: c, job })
}

struct Clock {
    timings: Vec<Timing>,
    last: Instant,
}

impl Clock {
    fn new() -> Self {
        Clock {
            timings: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.timings.push(Timing {
            phase: phase.into(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }
}

fn mean_for(obs: &Observable, quad: &QuadratureSpec) -> Result<f64, CliError> {
    Ok(match obs.known_mean() {
        Some(m) => m,
        None => haar_mean(obs, quad)?,
    })
}

pub fn execute(plan: &Plan) -> Result<RunReport, CliError> {
    let mut clock = Clock::new();
    let (result, table) = match &plan.job {
        Job::Sieve { n, nu } => {
            let t = nu.table(*n)?;
            clock.lap("sieve");
            let mut table = Table::new(&["n", "value"]);
            let (mut sum, mut nonzero) = (0i64, 0u64);
            for k in 1..=*n {
                let v = t.signed(k).unwrap_or(0) as i64;
                sum += v;
                nonzero += (v != 0) as u64;
                table.push(vec![k.to_string(), v.to_string()]);
            }
            let primes = sieve_primes(*n)?;
            clock.lap("summary");
            let r = json!({
                "n": n,
                "multiplicative": t.label(),
                "partial_sum": sum,
                "nonzero_count": nonzero,
                "prime_count": primes.len(),
            });
            (r, table)
        }
        Job::Decompose { params } => {
            let primes = sieve_primes((params.d1().ceil() as u64).max(2))?;
            let d = build_decomposition(params, &primes)?;
            clock.lap("decompose");
            let cov = coverage_report(&d);
            clock.lap("coverage");
            let mut table = Table::new(&["name", "measured", "fraction", "reference", "holds"]);
            for l in &cov.lines {
                table.push(vec![
                    l.name.to_string(),
                    l.measured.to_string(),
                    fmt_f64(l.fraction),
                    fmt_f64(l.reference),
                    l.holds.to_string(),
                ]);
            }
            let r = json!({
                "params": to_value(params),
                "counts": to_value(d.counts()),
                "violations_clean": d.violations().is_clean(),
                "violations": to_value(d.violations()),
                "boundary_primes": d.boundary_primes(),
                "blocks": d.parts().iter().map(|p| json!({
                    "j": p.block.j,
                    "primes": p.block.primes.len(),
                    "q_len": p.q_len,
                    "s_len": p.s_len,
                    "product_len": p.product_len,
                })).collect::<Vec<_>>(),
                "coverage": to_value(&cov),
            });
            (r, table)
        }
        Job::Criterion { nu, seq, config } => {
            let t = nu.table(config.n)?;
            let f = seq.build(plan.config.seq.as_deref().unwrap_or("seq"))?;
            clock.lap("inputs");
            let report = criterion_ledger(&t, &f, config)?;
            clock.lap("ledger");
            let mut table = Table::new(&["name", "kind", "lhs", "rhs", "holds"]);
            for l in &report.lines {
                table.push(vec![
                    l.name.to_string(),
                    to_value(&l.kind).as_str().unwrap_or_default().to_string(),
                    fmt_f64(l.lhs),
                    fmt_f64(l.rhs),
                    l.holds.to_string(),
                ]);
            }
            let mut r = to_value(&report);
            r["unconditional_holds"] = report.unconditional_holds().into();
            (r, table)
        }
        Job::Orbit { point, obs, n, precision } => {
            let orbit = Orbit::new(point, *n, *precision)?;
            let coords = orbit.map(0, *n, |c| *c)?;
            clock.lap("orbit");
            let mut table = Table::new(&["n", "x", "y", "theta", "f"]);
            let values: Vec<f64> = coords.iter().map(|c| obs.eval(c.x, c.y, c.theta)).collect();
            for (k, (c, v)) in coords.iter().zip(&values).enumerate() {
                table.push(vec![k.to_string(), fmt_f64(c.x), fmt_f64(c.y), fmt_f64(c.theta), fmt_f64(*v)]);
            }
            let series = ObservableSeries {
                label: obs.label().to_string(),
                values,
            };
            let birkhoff = if *n >= 1 { Some(series.birkhoff(*n)?) } else { None };
            let r = json!({
                "point": point.to_string(),
                "cusp_direction": point.cusp_direction().to_string(),
                "genericity": to_value(&genericity(point)),
                "observable": obs.label(),
                "n": n,
                "bits": orbit.bits(),
                "birkhoff_average": birkhoff,
                "last": to_value(coords.last().expect("n >= 0")),
            });
            (r, table)
        }
        Job::Correlate {
            point,
            obs,
            p,
            q,
            n,
            center,
            precision,
            quad,
        } => {
            let (f, c) = if *center {
                split_observable(obs, quad)?
            } else {
                (obs.clone(), mean_for(obs, quad)?)
            };
            let mean = if *center { 0.0 } else { c };
            clock.lap("haar_mean");
            let s = ObservableSeries::sample(point, &f, p.max(q) * n, *precision)?;
            clock.lap("orbit");
            let est = s.correlation(*p, *q, *n, mean)?;
            let mut table = Table::new(&["p", "q", "n", "value", "target", "gap"]);
            table.push(vec![
                p.to_string(),
                q.to_string(),
                n.to_string(),
                fmt_f64(est.value),
                fmt_f64(est.target),
                fmt_f64(est.gap),
            ]);
            let r = json!({
                "point": point.to_string(),
                "genericity": to_value(&genericity(point)),
                "observable": f.label(),
                "haar_mean": c,
                "centered": center,
                "sup_bound": f.sup() * f.sup(),
                "estimate": to_value(&est),
            });
            (r, table)
        }
        Job::Disjointness {
            point,
            obs,
            ladder,
            nu,
            precision,
            quad,
        } => {
            let top = *ladder.iter().max().expect("non-empty ladder");
            let t = nu.table(top)?;
            let c = mean_for(obs, quad)?;
            clock.lap("haar_mean");
            let s = ObservableSeries::sample(point, obs, top, *precision)?;
            clock.lap("orbit");
            let rows = s.disjointness(&t, ladder, c)?;
            clock.lap("sums");
            let mut table = Table::new(&[
                "n",
                "total_re",
                "total_im",
                "centered_re",
                "centered_im",
                "constant_re",
                "constant_im",
                "abs",
            ]);
            for r in &rows {
                table.push(vec![
                    r.n.to_string(),
                    fmt_f64(r.total.re),
                    fmt_f64(r.total.im),
                    fmt_f64(r.centered.re),
                    fmt_f64(r.centered.im),
                    fmt_f64(r.constant.re),
                    fmt_f64(r.constant.im),
                    fmt_f64(r.abs),
                ]);
            }
            let trend: Vec<f64> = rows.windows(2).map(|w| w[1].abs / w[0].abs).collect();
            let r = json!({
                "point": point.to_string(),
                "genericity": to_value(&genericity(point)),
                "observable": obs.label(),
                "multiplicative": t.label(),
                "haar_mean": c,
                "rows": to_value(&rows),
                "trend": trend,
            });
            (r, table)
        }
        Job::Classify { z } => {
            let class = classify_correlator(z)?;
            let mut samples = Vec::new();
            if let Some(d) = z.discriminant() {
                let t0: BigInt = d.sqrt() + 1;
                for k in 0..3 {
                    let t = BigRational::from_integer(&t0 + k);
                    samples.push(to_value(&surd_element_for(z, &t, &BigRational::from_integer(1.into()))?));
                }
            }
            clock.lap("classify");
            let mut table = Table::new(&["descriptor", "group", "witness_chi", "witness_rational"]);
            let w = class.witness.as_ref();
            table.push(vec![
                z.to_string(),
                to_value(&class.group).as_str().unwrap_or_default().to_string(),
                w.map(|w| w.chi.to_string()).unwrap_or_default(),
                w.map(|w| w.rational.to_string()).unwrap_or_default(),
            ]);
            let mut r = to_value(&class);
            r["samples"] = samples.into();
            (r, table)
        }
    };
    Ok(RunReport {
        command: plan.config.command.expect("planned").to_string(),
        config: plan.config.to_map(),
        result,
        table,
        timings: clock.timings,
    })
}

/// Validates, computes and returns the report.
pub fn run(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    execute(&plan(config)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_specs() {
        assert!(matches!(SeqSpec::parse("exp:theta=sqrt2").unwrap(), SeqSpec::Exp(_)));
        assert_eq!(SeqSpec::parse("const").unwrap(), SeqSpec::Const(1.0));
        assert_eq!(SeqSpec::parse("seq:const:c=0.5").unwrap(), SeqSpec::Const(0.5));
        assert!(SeqSpec::parse("const:c=2").is_err());
        assert!(SeqSpec::parse("sin:k=1").is_err());
    }

    #[test]
    fn defaults_are_filled() {
        let c = ExperimentConfig::parse("command=criterion").unwrap();
        let p = plan(&c).unwrap();
        assert_eq!(p.config.alpha, Some(0.3));
        assert_eq!((p.config.j0, p.config.j1), (Some(9), Some(30)));
        assert_eq!(p.config.cutoff, Some(50.0));
        let c = ExperimentConfig::parse("command=disjointness\nn=1000").unwrap();
        assert_eq!(plan(&c).unwrap().config.ladder, Some(Ladder(vec![10, 100, 1000])));
    }

    #[test]
    fn validation_happens_first() {
        for text in [
            "command=decompose\nalpha=1.5",
            "command=correlate\np=2\nq=2",
            "command=classify",
            "command=orbit\npoint=point:spiral",
        ] {
            let e = plan(&ExperimentConfig::parse(text).unwrap()).unwrap_err();
            assert_eq!(e.exit_code(), crate::error::EXIT_VALIDATION, "{text}");
        }
        let e = plan(&ExperimentConfig::parse("command=orbit\nn=100000\nprecision=double").unwrap()).unwrap_err();
        assert_eq!(e.exit_code(), crate::error::EXIT_PRECISION);
    }
}
