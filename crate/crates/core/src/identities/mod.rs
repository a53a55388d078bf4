//! Exact and randomized checking of the q-number identity corpus.

pub mod campaign;
pub mod corpus;

use thiserror::Error;

use crate::qarith::expr::{EvalError, FieldCtx, Point};
use crate::qarith::pit::PitError;

pub use campaign::{default_plan, mutation_plan, run_campaign, CampaignEntry, CampaignReport, Mutation, PlanItem};
pub use corpus::{instance, IdentityId, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("{id} has no instance of size {size}")]
    BadSize { id: IdentityId, size: usize },
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("no admissible configuration after {0} attempts")]
    Exhausted(usize),
    #[error(transparent)]
    Pit(#[from] PitError),
    #[error("evaluation failed: {0}")]
    Eval(EvalError),
}

impl Instance {
    /// Check one configuration in the given field. `Ok(None)` means both
    /// sides agree; otherwise the rendered sides are returned.
    pub fn check_point<C: FieldCtx>(&self, ctx: &C, pt: &Point) -> Result<Option<(String, String)>, IdentityError> {
        self.check_admissible(pt)?;
        let eval = |side: &crate::qarith::expr::Expr| {
            side.eval(ctx, pt).map_err(|e| match e {
                EvalError::DivisionByZero => IdentityError::Degenerate("a denominator vanishes".into()),
                other => IdentityError::Eval(other),
            })
        };
        let (l, r) = (eval(&self.lhs)?, eval(&self.rhs)?);
        Ok(if ctx.equal(&l, &r) {
            None
        } else {
            Some((ctx.render(&l), ctx.render(&r)))
        })
    }
}
