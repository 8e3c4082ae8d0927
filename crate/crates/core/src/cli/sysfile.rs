//! Text format for custom recovery systems.
//!
//! ```text
//! # object  servers...
//! 1  1
//! 1  2 3
//! 2  2
//! 2  1 3 4
//! ```
//!
//! Every line names a 1-based object followed by the 1-based servers of one
//! recovery set for it.

use crate::error::{Error, Result};
use crate::gfmatrix::GenMatrix;
use crate::recovery::RecoverySystem;
use crate::serverset::ServerSet;

pub fn parse(text: &str, g: &GenMatrix) -> Result<RecoverySystem> {
    let mut families = vec![Vec::new(); g.k()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut labels = Vec::new();
        for tok in body.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("`{tok}` is not a positive integer"),
            })?;
            labels.push(v);
        }
        let Some((&object, servers)) = labels.split_first() else {
            continue;
        };
        if object == 0 || object > g.k() {
            return Err(Error::Parse {
                line,
                msg: format!("object {object} out of range 1..={}", g.k()),
            });
        }
        if servers.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "recovery set has no servers".into(),
            });
        }
        let set = ServerSet::from_labels(servers.iter().copied())
            .filter(|s| s.indices().all(|j| j < g.n()))
            .ok_or_else(|| Error::Parse {
                line,
                msg: format!("server labels must lie in 1..={}", g.n()),
            })?;
        families[object - 1].push(set);
    }
    RecoverySystem::custom(g, families)
}
