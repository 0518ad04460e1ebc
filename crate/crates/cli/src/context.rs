//! Lazily loaded datasets shared by the subcommands.

use crate::config::RunConfig;
use crate::error::CliError;
use std::cell::{OnceCell, RefCell};
use std::rc::Rc;
use zscrew::error::Error;
use zscrew::mangoldt::{MangoldtTable, DEFAULT_BUDGET};
use zscrew::zerotable::{load_zeros, TailModel, ZeroTable};

pub struct Ctx {
    pub cfg: RunConfig,
    zeros: OnceCell<ZeroTable>,
    primes: RefCell<Option<Rc<MangoldtTable>>>,
}

impl Ctx {
    pub fn new(cfg: RunConfig) -> Self {
        Ctx { cfg, zeros: OnceCell::new(), primes: RefCell::new(None) }
    }

    pub fn zeros(&self) -> Result<&ZeroTable, CliError> {
        if let Some(z) = self.zeros.get() {
            return Ok(z);
        }
        let z = load_zeros(&self.cfg.zeros_path, self.cfg.zeros_limit)?;
        Ok(self.zeros.get_or_init(|| z))
    }

    pub fn tail(&self) -> Result<TailModel, CliError> {
        Ok(TailModel::density(self.zeros()?)?)
    }

    /// A table covering n ≤ e^t, capped by prime_limit. Sieves only as far
    /// as needed; values do not depend on the table size.
    pub fn primes_for(&self, op: &'static str, t: f64) -> Result<Rc<MangoldtTable>, CliError> {
        let limit = self.cfg.prime_limit;
        let need = t.max(0.0).exp().floor();
        if !(need <= limit as f64) {
            return Err(Error::Range { op, t, limit }.into());
        }
        self.table_with(((need as u64).saturating_add(1)).max(10_000).min(limit))
    }

    /// The table to prime_limit, using the sieve cache when configured.
    pub fn primes_full(&self) -> Result<Rc<MangoldtTable>, CliError> {
        self.table_with(self.cfg.prime_limit)
    }

    fn table_with(&self, want: u64) -> Result<Rc<MangoldtTable>, CliError> {
        let limit = self.cfg.prime_limit;
        if let Some(p) = self.primes.borrow().as_ref() {
            if p.limit() >= want {
                return Ok(p.clone());
            }
        }
        let table = if want == limit { self.full_table()? } else { MangoldtTable::build(want, DEFAULT_BUDGET)? };
        let rc = Rc::new(table);
        *self.primes.borrow_mut() = Some(rc.clone());
        Ok(rc)
    }

    fn full_table(&self) -> Result<MangoldtTable, CliError> {
        let limit = self.cfg.prime_limit;
        if let Some(path) = &self.cfg.sieve_cache {
            if path.exists() {
                let t = MangoldtTable::load_cache(path)?;
                if t.limit() == limit {
                    return Ok(t);
                }
            }
        }
        let t = MangoldtTable::build(limit, DEFAULT_BUDGET)?;
        if let Some(path) = &self.cfg.sieve_cache {
            t.save_cache(path)?;
        }
        Ok(t)
    }
}
