//! Size caps for the exhaustive machinery.
//!
//! The caps are process-wide configuration. The CLI lowers or raises them
//! with `--cap-n`; library users call [`Caps::install`].

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};

/// Hard limit imposed by the `u32` assignment encoding.
pub const MAX_VARIABLES: usize = 24;

static TABLE_N: AtomicUsize = AtomicUsize::new(24);
static PROOF_N: AtomicUsize = AtomicUsize::new(14);
static EXHAUSTIVE_N: AtomicUsize = AtomicUsize::new(12);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest truth table that may be built.
    pub table_n: usize,
    /// Largest `n` for the 3^n partial-assignment sweep.
    pub proof_n: usize,
    /// Largest `n` for 2^n-assignment sweeps (ratios, cheapest proofs, delta).
    pub exhaustive_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { table_n: 24, proof_n: 14, exhaustive_n: 12 }
    }
}

impl Caps {
    pub fn current() -> Caps {
        Caps {
            table_n: TABLE_N.load(Ordering::Relaxed),
            proof_n: PROOF_N.load(Ordering::Relaxed),
            exhaustive_n: EXHAUSTIVE_N.load(Ordering::Relaxed),
        }
    }

    pub fn install(self) {
        TABLE_N.store(self.table_n.min(MAX_VARIABLES), Ordering::Relaxed);
        PROOF_N.store(self.proof_n, Ordering::Relaxed);
        EXHAUSTIVE_N.store(self.exhaustive_n, Ordering::Relaxed);
    }
}

pub(crate) fn check_table(n: usize) -> Result<()> {
    check("truth-table", n, Caps::current().table_n)
}

pub(crate) fn check_proof(n: usize) -> Result<()> {
    check("proof-enumeration", n, Caps::current().proof_n)
}

pub(crate) fn check_exhaustive(n: usize) -> Result<()> {
    check("exhaustive-search", n, Caps::current().exhaustive_n)
}

fn check(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::InstanceTooLarge { what, n, cap })
    } else {
        Ok(())
    }
}
