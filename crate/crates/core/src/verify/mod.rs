//! Relation suites and proposition checks over a signature battery.

pub mod classical;
pub mod config;
pub mod props;
pub mod relations;
pub mod report;
pub mod singular;

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::action::{Engine, Field, LinComb, Numeric, Orientation};
use crate::patterns::WeightValue;
use crate::qarith::CycloScalar;

pub use config::{default_battery, default_numeric_samples, parse_samples, CheckConfig, Mode};
pub use report::{CheckResult, Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Cartan,
    Serre,
    Hw,
    Locality,
    Restricted,
    Gl,
    Singular,
    Classical,
    ClosedForm,
    Orientation,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Cartan,
        Suite::Serre,
        Suite::Hw,
        Suite::Locality,
        Suite::ClosedForm,
        Suite::Restricted,
        Suite::Gl,
        Suite::Orientation,
        Suite::Singular,
        // last: it audits every matrix element the other suites produced
        Suite::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cartan => "cartan",
            Suite::Serre => "serre",
            Suite::Hw => "hw",
            Suite::Locality => "locality",
            Suite::Restricted => "restricted",
            Suite::Gl => "gl",
            Suite::Singular => "singular",
            Suite::Classical => "classical",
            Suite::ClosedForm => "closedform",
            Suite::Orientation => "orientation",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// One engine per battery signature, shared by all suites of a run so that
/// matrix elements are computed once (and audited by the classical suite).
pub struct Engines {
    engines: Vec<(String, Arc<Engine>)>,
}

impl Engines {
    pub fn new(cfg: &CheckConfig, orientation: Orientation) -> Self {
        Engines {
            engines: cfg
                .battery
                .iter()
                .map(|(n, s)| (n.clone(), Arc::new(Engine::with_orientation(s.clone(), orientation))))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Arc<Engine>)> {
        self.engines.iter().map(|(n, e)| (n.as_str(), e))
    }
}

/// A field together with a zero test for residuals.
pub trait Checker: Field {
    /// `None` when the residual vanishes; otherwise a witness.
    fn witness(&self, r: &LinComb<Self::S>) -> Option<String>;
    fn label(&self) -> String;
}

impl Checker for crate::action::Exact {
    fn witness(&self, r: &LinComb<CycloScalar>) -> Option<String> {
        r.first_nonzero().map(|(p, c)| format!("{p} has residual {c}"))
    }
    fn label(&self) -> String {
        "exact".into()
    }
}

/// Numeric field at one sample with an absolute tolerance.
pub struct Tolerant {
    pub field: Numeric,
    pub tol: f64,
}

impl Field for Tolerant {
    type S = Complex64;
    fn lift(&self, c: &CycloScalar) -> Complex64 {
        self.field.lift(c)
    }
    fn v_pow(&self, k: i64) -> Complex64 {
        self.field.v_pow(k)
    }
    fn eigenvalue(&self, w: &WeightValue) -> Result<Complex64, crate::action::ActionError> {
        self.field.eigenvalue(w)
    }
}

impl Checker for Tolerant {
    fn witness(&self, r: &LinComb<Complex64>) -> Option<String> {
        r.terms()
            .find(|(_, c)| c.norm() > self.tol)
            .map(|(p, c)| format!("{p} has residual {c} at v = {}", self.field.v0))
    }
    fn label(&self) -> String {
        format!("v={}", self.field.v0)
    }
}

/// Run `$body` once per checker of the mode, with `$ch` bound to it.
macro_rules! for_each_checker {
    ($mode:expr, |$ch:ident| $body:block) => {
        match $mode {
            $crate::verify::Mode::Exact => {
                let $ch = &$crate::action::Exact;
                $body
            }
            $crate::verify::Mode::Numeric { samples, tolerance } => {
                for v0 in samples.iter() {
                    let $ch = &$crate::verify::Tolerant {
                        field: $crate::action::Numeric { v0: *v0 },
                        tol: *tolerance,
                    };
                    $body
                }
            }
        }
    };
}
pub(crate) use for_each_checker;

/// Time a check when the config asks for it.
pub(crate) fn timed(cfg: &CheckConfig, f: impl FnOnce() -> CheckResult) -> CheckResult {
    let t = Instant::now();
    let mut r = f();
    if cfg.timings {
        r.millis = t.elapsed().as_millis() as u64;
    }
    r
}

/// Run one suite against shared engines.
pub fn run_suite(cfg: &CheckConfig, engines: &Engines, suite: Suite) -> Report {
    let mut rep = Report::new(suite.name(), &cfg.digest());
    let results = match suite {
        Suite::Cartan => relations::check_cartan(cfg, engines),
        Suite::Serre => relations::check_serre(cfg, engines),
        Suite::Gl => relations::check_gl(cfg, engines),
        Suite::Orientation => relations::check_orientation(cfg),
        Suite::Hw => props::check_hw(cfg, engines),
        Suite::Locality => props::check_locality(cfg, engines),
        Suite::Restricted => props::check_restricted(cfg, engines),
        Suite::ClosedForm => props::check_closed_form(cfg, engines),
        Suite::Singular => singular::singular_scan(cfg, engines),
        Suite::Classical => classical::classical_limit_check(cfg, engines),
    };
    rep.results = results;
    rep
}

/// Run several suites, sharing engines, and merge into one report.
pub fn run_suites(cfg: &CheckConfig, suites: &[Suite], orientation: Orientation) -> Report {
    let engines = Engines::new(cfg, orientation);
    let name = if suites.len() == 1 {
        suites[0].name().to_string()
    } else {
        "all".to_string()
    };
    let mut rep = Report::new(&name, &cfg.digest());
    for &s in suites {
        rep.extend(run_suite(cfg, &engines, s));
    }
    rep
}
